//! Property tests for the certified arithmetic and reduction invariants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use triblucas::contfrac::{cf_expand, ContinuedFraction};
use triblucas::lattice::{gauss_reduce, linear_form_lower_bound, Lattice2D};
use triblucas::pattern::{compose, compose_digits, recognize, PatternParams};
use triblucas::real::{pow10, CertifiedReal};

fn digit_pair() -> impl Strategy<Value = (u8, u8)> {
    (1u8..=9, 0u8..=9).prop_filter("digits distinct", |(a, b)| a != b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pattern_round_trip((d1, d2) in digit_pair(), ell in 1u32..40, m in 1u32..40) {
        let p = PatternParams { d1, d2, ell, m };
        let v = compose(&p).unwrap();
        prop_assert_eq!(compose_digits(&p).unwrap(), v.clone());
        prop_assert_eq!(recognize(&v), Some(p));
        prop_assert_eq!(v.to_string().len() as u32, 2 * ell + m);
    }

    #[test]
    fn ball_field_identities(a in -999i64..1000, b in 1i64..1000, c in -999i64..1000, d in 1i64..1000) {
        let prec = 60u32;
        let x = CertifiedReal::from_ratio(&BigInt::from(a), &BigInt::from(b), prec).unwrap();
        let y = CertifiedReal::from_ratio(&BigInt::from(c), &BigInt::from(d), prec).unwrap();
        // (x + y) - y contains x
        prop_assert!(x.add(&y).sub(&y).overlaps(&x));
        // (x * y) / y contains x when y is nonzero
        if y.sign_certified().is_some_and(|s| s != 0) {
            prop_assert!(x.mul(&y).div(&y).unwrap().overlaps(&x));
        }
        // exact rational is inside the ball: |mid/S - a/b| <= rad/S
        let exact = BigRational::new(BigInt::from(a), BigInt::from(b));
        let scale = BigRational::from_integer(pow10(prec));
        let mid = BigRational::from_integer(x.mid().clone()) / &scale;
        let rad = BigRational::from_integer(x.rad().clone()) / &scale;
        prop_assert!((mid - exact).abs() <= rad);
    }

    #[test]
    fn ln_is_monotone_and_additive(p in 2u64..5000, q in 2u64..5000) {
        let prec = 80u32;
        let x = CertifiedReal::from_u64(p, prec);
        let y = CertifiedReal::from_u64(q, prec);
        let lx = x.ln().unwrap();
        let ly = y.ln().unwrap();
        // ln(pq) = ln p + ln q within radii
        let joint = x.mul(&y).ln().unwrap();
        prop_assert!(joint.overlaps(&lx.add(&ly)));
        if p < q {
            prop_assert!(lx.certified_lt(&ly) || lx.overlaps(&ly));
        }
    }

    #[test]
    fn nearest_distance_is_at_most_half(num in -100_000i64..100_000, den in 1i64..997) {
        let prec = 70u32;
        let x = CertifiedReal::from_ratio(&BigInt::from(num), &BigInt::from(den), prec).unwrap();
        if let Ok(d) = x.nearest_int_distance() {
            let half = CertifiedReal::from_decimal_str("0.5", prec).unwrap();
            prop_assert!(!d.lo().is_negative());
            prop_assert!(d.certified_le(&half) || d.overlaps(&half));
        }
    }

    #[test]
    fn gauss_reduction_preserves_determinant(
        a in -200i64..=200, b in -200i64..=200, c in -200i64..=200, d in -200i64..=200,
    ) {
        prop_assume!(a * d - b * c != 0);
        let lat = Lattice2D::new(
            (BigInt::from(a), BigInt::from(b)),
            (BigInt::from(c), BigInt::from(d)),
        ).unwrap();
        let red = gauss_reduce(&lat).unwrap();
        let det_in = lat.determinant().abs();
        let det_out = (&red.v1.0 * &red.v2.1 - &red.v1.1 * &red.v2.0).abs();
        prop_assert_eq!(det_in, det_out);
        // reduced shape: |v1| <= |v2| and |mu| <= 1/2
        let n1 = &red.v1.0 * &red.v1.0 + &red.v1.1 * &red.v1.1;
        let n2 = &red.v2.0 * &red.v2.0 + &red.v2.1 * &red.v2.1;
        prop_assert!(n1 <= n2);
        prop_assert!(red.gram_mu.abs() <= BigRational::new(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn lattice_lower_bound_is_sound(
        l1n in 1i64..50, l1d in 1i64..10, l2n in 1i64..50, l2d in 1i64..10,
        x1 in 1i64..=6, x2 in 1i64..=6, c in 1000i64..10_000,
    ) {
        let prec = 120u32;
        let lam1 = CertifiedReal::from_ratio(&BigInt::from(l1n), &BigInt::from(l1d), prec).unwrap();
        let lam2 = CertifiedReal::from_ratio(&BigInt::from(l2n), &BigInt::from(l2d), prec).unwrap();
        // exact half-integer C*lambda is a legitimate ambiguity; skip those
        let data = match linear_form_lower_bound(
            &lam1, &lam2, &BigInt::from(x1), &BigInt::from(x2), &BigInt::from(c),
        ) {
            Ok(d) => d,
            Err(triblucas::Error::PrecisionExhausted(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        if let Some(bound) = data.bound {
            let b_hi = BigRational::new(bound.hi(), pow10(prec));
            let r1 = BigRational::new(BigInt::from(l1n), BigInt::from(l1d));
            let r2 = BigRational::new(BigInt::from(l2n), BigInt::from(l2d));
            for i in -x1..=x1 {
                for j in -x2..=x2 {
                    if i == 0 && j == 0 {
                        continue;
                    }
                    let v = (&r1 * BigRational::from_integer(BigInt::from(i))
                        + &r2 * BigRational::from_integer(BigInt::from(j))).abs();
                    prop_assert!(v >= b_hi, "bound violated at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn rational_expansion_reconstructs(p in 1i64..100_000, q in 1i64..100_000) {
        let g = num_integer::gcd(p, q);
        let (p, q) = (p / g, q / g);
        let cf = ContinuedFraction::expand_rational(&BigInt::from(p), &BigInt::from(q), 60).unwrap();
        prop_assert!(cf.determinant_identity_holds());
        let (pk, qk) = cf.convergents.last().unwrap();
        prop_assert_eq!((pk, qk), (&BigInt::from(p), &BigInt::from(q)));
    }
}

#[test]
fn irrational_prefix_is_stable_under_precision_doubling() {
    // sqrt(k) for a few non-squares: quotients certified at 60 digits must
    // be a prefix of those certified at 120
    for k in [2u64, 3, 5, 7, 19, 31] {
        let lo = cf_expand(&CertifiedReal::from_u64(k, 60).sqrt().unwrap(), 80);
        let hi = cf_expand(&CertifiedReal::from_u64(k, 120).sqrt().unwrap(), 80);
        let shared = lo.len().min(hi.len());
        assert!(shared > 10, "expansion too short for sqrt({k})");
        assert_eq!(lo.quotients[..shared], hi.quotients[..shared]);
    }
}
