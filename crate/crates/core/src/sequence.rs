//! Tribonacci-Lucas terms (S0 = 3, S1 = 1, S2 = 3, S_{n+3} = S_{n+2} +
//! S_{n+1} + S_n) and the certified dominant root of x^3 - x^2 - x - 1.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::real::{pow10, CertifiedReal};
use crate::{Error, Result};

/// Cached sequence terms; concurrent reads, serialized extension.
pub struct TribLucasSequence {
    cache: RwLock<Vec<BigInt>>,
}

impl Default for TribLucasSequence {
    fn default() -> Self {
        Self::new()
    }
}

impl TribLucasSequence {
    pub fn new() -> Self {
        TribLucasSequence {
            cache: RwLock::new(vec![BigInt::from(3), BigInt::from(1), BigInt::from(3)]),
        }
    }

    /// S_n, extending the cache as needed.
    pub fn get(&self, n: usize) -> BigInt {
        {
            let cache = self.cache.read().expect("sequence cache poisoned");
            if n < cache.len() {
                return cache[n].clone();
            }
        }
        let mut cache = self.cache.write().expect("sequence cache poisoned");
        while cache.len() <= n {
            let k = cache.len();
            let next = &cache[k - 1] + &cache[k - 2] + &cache[k - 3];
            cache.push(next);
        }
        cache[n].clone()
    }

    /// S_0 ..= S_n as a vector.
    pub fn prefix(&self, n: usize) -> Vec<BigInt> {
        self.get(n);
        let cache = self.cache.read().expect("sequence cache poisoned");
        cache[..=n].to_vec()
    }
}

/// S_n with a per-call cache (convenience for one-off queries).
pub fn trib_lucas(n: usize) -> BigInt {
    TribLucasSequence::new().get(n)
}

/// The dominant root alpha of x^3 - x^2 - x - 1 and its logarithm.
#[derive(Clone, Debug)]
pub struct DominantRoot {
    pub alpha: CertifiedReal,
    pub log_alpha: CertifiedReal,
}

/// x^3 - x^2 S - x S^2 - S^3 for x scaled by S = 10^prec: the sign of the
/// defining polynomial at x/S, exactly.
fn poly_at(x: &BigInt, scale: &BigInt) -> BigInt {
    let s2 = scale * scale;
    x * x * x - x * x * scale - x * &s2 - &s2 * scale
}

/// Certified dominant root at the requested working precision.
///
/// Newton refinement in exact fixed point seeded from 1.839, then a sign
/// bracket around the iterate certifies containment; the closed cube-root
/// form is recomputed as an independent cross-check and the two intervals
/// must overlap.
pub fn dominant_root(precision_digits: u32) -> Result<DominantRoot> {
    if precision_digits < 30 {
        return Err(Error::InvalidParams(
            "dominant_root requires at least 30 digits".into(),
        ));
    }
    let prec = precision_digits;
    let scale = pow10(prec);

    // Newton: x <- x - F(x)/F'(x), exact integer steps, quadratic convergence.
    let mut x = BigInt::from(1839u32) * pow10(prec - 3);
    let iters = 3 + (32 - prec.leading_zeros());
    for _ in 0..iters {
        let f = poly_at(&x, &scale);
        let fp = &x * &x * 3u32 - &x * &scale * 2u32 - &scale * &scale;
        x -= f.div_floor(&fp);
    }

    // certify by sign change on [x - e, x + e]
    let mut e = BigInt::from(4);
    let mut bracket = None;
    for _ in 0..8 {
        let lo = &x - &e;
        let hi = &x + &e;
        if poly_at(&lo, &scale).is_negative() && poly_at(&hi, &scale).is_positive() {
            bracket = Some(e.clone());
            break;
        }
        e *= 10;
    }
    let rad =
        bracket.ok_or_else(|| Error::PrecisionExhausted("root bracket not certified".into()))?;
    let alpha = CertifiedReal::new(x, rad, prec);
    alpha.check_exhaustion()?;

    let lo_gate = CertifiedReal::from_decimal_str("1.83", prec)?;
    let hi_gate = CertifiedReal::from_decimal_str("1.84", prec)?;
    if !(lo_gate.certified_lt(&alpha) && alpha.certified_lt(&hi_gate)) {
        return Err(Error::Domain("root left (1.83, 1.84)".into()));
    }

    // cross-check: alpha = (1 + w1 + w2)/3, w_{1,2} = cbrt(19 +- 3 sqrt 33)
    let s33 = CertifiedReal::from_u64(33, prec).sqrt()?;
    let nineteen = CertifiedReal::from_u64(19, prec);
    let w1 = nineteen.add(&s33.mul_bigint(&BigInt::from(3))).cbrt()?;
    let w2 = nineteen.sub(&s33.mul_bigint(&BigInt::from(3))).cbrt()?;
    let radical = CertifiedReal::one(prec)
        .add(&w1)
        .add(&w2)
        .div_bigint(&BigInt::from(3))?;
    if !alpha.overlaps(&radical) {
        return Err(Error::Domain(
            "Newton root and radical form disagree".into(),
        ));
    }

    let log_alpha = alpha.ln()?;
    Ok(DominantRoot { alpha, log_alpha })
}

/// Certified check of |S_n - alpha^n| <= 2 alpha^(-n/2).
pub fn binet_residual_check(seq: &TribLucasSequence, n: u64, root: &DominantRoot) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidParams("binet residual needs n >= 1".into()));
    }
    let prec = root.alpha.prec();
    let s = CertifiedReal::from_bigint(&seq.get(n as usize), prec);
    let a_n = root.alpha.powi(n as i64)?;
    let resid = s.sub(&a_n).abs();
    let half_pow = a_n.sqrt()?;
    let bound = CertifiedReal::from_u64(2, prec).div(&half_pow)?;
    if resid.certified_le(&bound) {
        Ok(true)
    } else if bound.certified_lt(&resid) {
        Ok(false)
    } else {
        Err(Error::PrecisionExhausted(format!(
            "binet residual undecidable at n={n}"
        )))
    }
}

/// Certified check of alpha^(m-1) <= S_m < alpha^(m+1).
pub fn growth_bounds_check(seq: &TribLucasSequence, m: u64, root: &DominantRoot) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidParams("growth bounds need m >= 1".into()));
    }
    let prec = root.alpha.prec();
    let s = CertifiedReal::from_bigint(&seq.get(m as usize), prec);
    let lo = root.alpha.powi(m as i64 - 1)?;
    let hi = root.alpha.powi(m as i64 + 1)?;
    let lower_ok = lo.certified_le(&s);
    let upper_ok = s.certified_lt(&hi);
    if lower_ok && upper_ok {
        return Ok(true);
    }
    // decide failure only when the opposite inequality is certified
    if s.certified_lt(&lo) || hi.certified_le(&s) {
        return Ok(false);
    }
    Err(Error::PrecisionExhausted(format!(
        "growth sandwich undecidable at m={m}"
    )))
}

/// Integer square root helper exposed for tests of the bracket logic.
#[allow(dead_code)]
fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_terms() {
        let expect: [u64; 18] = [
            3, 1, 3, 7, 11, 21, 39, 71, 131, 241, 443, 815, 1499, 2757, 5071, 9327, 17155, 31553,
        ];
        let seq = TribLucasSequence::new();
        for (n, &want) in expect.iter().enumerate() {
            assert_eq!(seq.get(n), BigInt::from(want), "S_{n}");
        }
    }

    #[test]
    fn recurrence_identity_holds() {
        let seq = TribLucasSequence::new();
        let terms = seq.prefix(2003);
        for n in 0..=2000usize {
            assert_eq!(terms[n + 3], &terms[n + 2] + &terms[n + 1] + &terms[n]);
        }
        for t in &terms {
            assert!(t.is_positive());
        }
    }

    #[test]
    fn concurrent_reads_extend_once() {
        let seq = std::sync::Arc::new(TribLucasSequence::new());
        let handles: Vec<_> = (0..8)
            .map(|i| {
                let s = seq.clone();
                std::thread::spawn(move || s.get(500 + i))
            })
            .collect();
        for h in handles {
            assert!(h.join().unwrap().is_positive());
        }
    }

    #[test]
    fn root_is_certified() {
        let root = dominant_root(50).unwrap();
        // first digits of alpha, independently computed
        // literal truncated at 49 fractional digits: widen by 10 ulps
        let want = CertifiedReal::new(
            CertifiedReal::from_decimal_str(
                "1.8392867552141611325518525646532866004241787460975",
                50,
            )
            .unwrap()
            .mid()
            .clone(),
            BigInt::from(20),
            50,
        );
        assert!(root.alpha.overlaps(&want));
        // defining polynomial residual certified small
        let a = &root.alpha;
        let resid = a
            .powi(3)
            .unwrap()
            .sub(&a.powi(2).unwrap())
            .sub(a)
            .sub(&CertifiedReal::one(50))
            .abs();
        let gate = CertifiedReal::from_decimal_str("0.0000000000000000000000001", 50).unwrap();
        assert!(resid.certified_lt(&gate));
    }

    #[test]
    fn higher_precision_agrees() {
        let r50 = dominant_root(50).unwrap();
        let r100 = dominant_root(100).unwrap();
        // agreement on the first 45 digits
        let a = r50.alpha.rescale(100);
        let diff = a.sub(&r100.alpha).abs();
        let gate = CertifiedReal::new(pow10(100 - 45), BigInt::from(0), 100);
        assert!(diff.certified_lt(&gate));
        // doubling precision never widens the certified radius
        assert!(r100.alpha.radius_exp10().unwrap() <= r50.alpha.radius_exp10().unwrap());
    }

    #[test]
    fn binet_residual_small_n() {
        let seq = TribLucasSequence::new();
        let root = dominant_root(60).unwrap();
        assert!(binet_residual_check(&seq, 1, &root).unwrap());
        assert!(binet_residual_check(&seq, 8, &root).unwrap());
        for n in 1..=60 {
            assert!(binet_residual_check(&seq, n, &root).unwrap(), "n={n}");
        }
    }

    #[test]
    fn growth_bounds_small_m() {
        let seq = TribLucasSequence::new();
        let root = dominant_root(60).unwrap();
        assert!(growth_bounds_check(&seq, 1, &root).unwrap());
        assert!(growth_bounds_check(&seq, 8, &root).unwrap());
        for m in 1..=60 {
            assert!(growth_bounds_check(&seq, m, &root).unwrap(), "m={m}");
        }
    }
}
