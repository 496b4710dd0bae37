//! Two-dimensional integer lattices built from scaled logarithms, exact
//! Lagrange-Gauss reduction, and the certified lower bound for
//! |lambda1 x1 + lambda2 x2| over a box |x_i| <= X_i.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::real::CertifiedReal;
use crate::{Error, Result};

type Vec2 = (BigInt, BigInt);

fn dot(u: &Vec2, v: &Vec2) -> BigInt {
    &u.0 * &v.0 + &u.1 * &v.1
}

fn norm_sq(v: &Vec2) -> BigInt {
    dot(v, v)
}

fn det2(u: &Vec2, v: &Vec2) -> BigInt {
    &u.0 * &v.1 - &u.1 * &v.0
}

/// Column-generated 2D integer lattice.
#[derive(Clone, Debug)]
pub struct Lattice2D {
    pub b1: Vec2,
    pub b2: Vec2,
}

impl Lattice2D {
    pub fn new(b1: Vec2, b2: Vec2) -> Result<Self> {
        if det2(&b1, &b2).is_zero() {
            return Err(Error::DegenerateLattice);
        }
        Ok(Lattice2D { b1, b2 })
    }

    pub fn determinant(&self) -> BigInt {
        det2(&self.b1, &self.b2)
    }
}

/// Gauss-reduced basis with its exact Gram-Schmidt data.
#[derive(Clone, Debug)]
pub struct ReducedBasis2D {
    pub v1: Vec2,
    pub v2: Vec2,
    /// <v2, v1> / <v1, v1>
    pub gram_mu: BigRational,
    /// ||v2 - gram_mu * v1||^2
    pub v2_star_norm_sq: BigRational,
}

impl ReducedBasis2D {
    /// d_Lambda^2 = min(||v1||^2, ||v2*||^2), exactly.
    pub fn d_lambda_sq(&self) -> BigRational {
        let n1 = BigRational::from_integer(norm_sq(&self.v1));
        if n1 <= self.v2_star_norm_sq {
            n1
        } else {
            self.v2_star_norm_sq.clone()
        }
    }
}

/// Lattice with columns (1, round(C lambda1)) and (0, round(C lambda2)).
///
/// Rounding is to the certified nearest integer, halves away from zero;
/// a ball spanning a half-integer reports precision exhaustion.
pub fn build_linear_form_lattice(
    lambda1: &CertifiedReal,
    lambda2: &CertifiedReal,
    c: &BigInt,
) -> Result<Lattice2D> {
    if !c.is_positive() {
        return Err(Error::InvalidParams("C must be >= 1".into()));
    }
    let e1 = lambda1.mul_bigint(c).round_nearest_certified()?;
    let e2 = lambda2.mul_bigint(c).round_nearest_certified()?;
    Lattice2D::new((BigInt::from(1), e1), (BigInt::from(0), e2))
}

/// Lagrange-Gauss reduction: v1 becomes a shortest nonzero lattice vector,
/// |gram_mu| <= 1/2, and the span is unchanged (unimodular steps only).
pub fn gauss_reduce(lat: &Lattice2D) -> Result<ReducedBasis2D> {
    let input_det = lat.determinant();
    if input_det.is_zero() {
        return Err(Error::DegenerateLattice);
    }
    let mut v1 = lat.b1.clone();
    let mut v2 = lat.b2.clone();
    if norm_sq(&v1) > norm_sq(&v2) {
        std::mem::swap(&mut v1, &mut v2);
    }
    loop {
        let num = dot(&v1, &v2);
        let den = norm_sq(&v1);
        // nearest integer to num/den, halves toward zero keep |mu| <= 1/2
        let r = nearest_quotient(&num, &den);
        v2 = (&v2.0 - &r * &v1.0, &v2.1 - &r * &v1.1);
        if norm_sq(&v2) < norm_sq(&v1) {
            std::mem::swap(&mut v1, &mut v2);
        } else {
            break;
        }
    }
    let n1 = norm_sq(&v1);
    let d = dot(&v2, &v1);
    let gram_mu = BigRational::new(d.clone(), n1.clone());
    let v2_star_norm_sq = BigRational::from_integer(norm_sq(&v2)) - BigRational::new(&d * &d, n1);
    debug_assert!(gram_mu.abs() <= BigRational::new(BigInt::from(1), BigInt::from(2)));
    debug_assert_eq!(det2(&v1, &v2).abs(), input_det.abs());
    Ok(ReducedBasis2D {
        v1,
        v2,
        gram_mu,
        v2_star_norm_sq,
    })
}

/// Nearest integer to num/den (den > 0), halves rounded toward zero.
fn nearest_quotient(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(den.is_positive());
    let two_num: BigInt = num * BigInt::from(2);
    let two_den: BigInt = den * BigInt::from(2);
    if num.is_negative() {
        -((-two_num + den) / &two_den)
    } else {
        (two_num + den) / &two_den
    }
}

/// Outcome of one lattice lower-bound evaluation.
#[derive(Clone, Debug)]
pub struct LatticeBoundData {
    pub c: BigInt,
    pub d_lambda_sq: BigRational,
    pub t: BigRational,
    /// present iff the condition d_Lambda^2 >= T^2 + X1^2 held
    pub bound: Option<CertifiedReal>,
}

/// Certified lower bound (sqrt(d_Lambda^2 - X1^2) - T)/C for
/// |lambda1 x1 + lambda2 x2| over 0 < |x_i| <= X_i, or None when the
/// condition d_Lambda^2 >= T^2 + X1^2 fails (enlarge C and retry).
pub fn linear_form_lower_bound(
    lambda1: &CertifiedReal,
    lambda2: &CertifiedReal,
    x1: &BigInt,
    x2: &BigInt,
    c: &BigInt,
) -> Result<LatticeBoundData> {
    if !x1.is_positive() || !x2.is_positive() {
        return Err(Error::InvalidParams("box bounds must be >= 1".into()));
    }
    let lat = build_linear_form_lattice(lambda1, lambda2, c)?;
    let red = gauss_reduce(&lat)?;
    let d_sq = red.d_lambda_sq();
    let t = BigRational::new(BigInt::from(1) + x1 * x1 + x2 * x2, BigInt::from(2));
    let threshold = &t * &t + BigRational::from_integer(x1 * x1);
    if d_sq < threshold {
        return Ok(LatticeBoundData {
            c: c.clone(),
            d_lambda_sq: d_sq,
            t,
            bound: None,
        });
    }
    let prec = lambda1.prec().max(lambda2.prec());
    let inner = &d_sq - BigRational::from_integer(x1 * x1);
    let inner_cr = CertifiedReal::from_ratio(inner.numer(), inner.denom(), prec)?;
    let t_cr = CertifiedReal::from_ratio(t.numer(), t.denom(), prec)?;
    let bound = inner_cr.sqrt()?.sub(&t_cr).div_bigint(c)?;
    Ok(LatticeBoundData {
        c: c.clone(),
        d_lambda_sq: d_sq,
        t,
        bound: Some(bound),
    })
}

/// Largest m consistent with log 38 - m log 10 >= log(bound); inequalities
/// with larger m are impossible once the linear form is bounded below.
pub fn lll_m_bound(bound: &CertifiedReal) -> Result<BigInt> {
    if !bound.is_certainly_positive() {
        return Err(Error::InvalidParams(
            "lower bound must be certified positive".into(),
        ));
    }
    let prec = bound.prec();
    let thirty_eight = CertifiedReal::from_u64(38, prec);
    let x = thirty_eight
        .ln()?
        .sub(&bound.ln()?)
        .div(&CertifiedReal::ln10(prec))?;
    let m = x.floor_upper();
    Ok(if m.is_negative() { BigInt::zero() } else { m })
}
