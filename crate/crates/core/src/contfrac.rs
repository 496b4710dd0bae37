//! Certified simple continued fractions: quotients are emitted only while
//! the floor of the current tail is unambiguous within its ball, so a
//! recomputation at higher precision can extend but never contradict the
//! expansion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::real::CertifiedReal;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    pub kappa: CertifiedReal,
    pub quotients: Vec<BigInt>,
    /// (p_k, q_k) accompanying each quotient.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// True when the expansion ended because a floor became ambiguous
    /// rather than by reaching max_terms or an exact rational tail.
    pub exhausted_early: bool,
}

impl ContinuedFraction {
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// Exact expansion of p/q by the Euclidean algorithm (complete, never
    /// precision-limited). The stored kappa ball is the rational itself.
    pub fn expand_rational(p: &BigInt, q: &BigInt, prec: u32) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::InvalidParams("denominator must be positive".into()));
        }
        let kappa = CertifiedReal::from_ratio(p, q, prec)?;
        let mut quotients = Vec::new();
        let (mut num, mut den) = (p.clone(), q.clone());
        while !den.is_zero() {
            let (a, r) = num.div_mod_floor(&den);
            quotients.push(a);
            num = den;
            den = r;
        }
        let convergents = convergents_from(&quotients);
        Ok(ContinuedFraction {
            kappa,
            quotients,
            convergents,
            exhausted_early: false,
        })
    }

    /// Verifies p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1) for every adjacent pair.
    pub fn determinant_identity_holds(&self) -> bool {
        self.convergents.windows(2).enumerate().all(|(k, w)| {
            let (ref p0, ref q0) = w[0];
            let (ref p1, ref q1) = w[1];
            let det = p1 * q0 - p0 * q1;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            det == BigInt::from(sign)
        })
    }
}

fn convergents_from(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p_cur, mut q_cur) = match quotients.first() {
        Some(a0) => (a0.clone(), BigInt::one()),
        None => return out,
    };
    out.push((p_cur.clone(), q_cur.clone()));
    for a in &quotients[1..] {
        let p_next = a * &p_cur + &p_prev;
        let q_next = a * &q_cur + &q_prev;
        out.push((p_next.clone(), q_next.clone()));
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    out
}

/// Expands `x` to at most `max_terms` certified partial quotients.
///
/// Stops early, with the exhaustion marker set, as soon as a floor is
/// ambiguous or an inversion would divide by a ball containing zero. An
/// exactly-zero tail (rational input with radius zero) ends the expansion
/// cleanly instead.
pub fn cf_expand(x: &CertifiedReal, max_terms: usize) -> ContinuedFraction {
    let mut quotients = Vec::new();
    let mut exhausted_early = false;
    let mut cur = x.clone();
    for _ in 0..max_terms {
        let a = match cur.floor_certified() {
            Ok(a) => a,
            Err(_) => {
                exhausted_early = true;
                break;
            }
        };
        quotients.push(a.clone());
        let frac = cur.sub(&CertifiedReal::from_bigint(&a, cur.prec()));
        if frac.sign_certified() == Some(0) {
            break; // exact rational tail
        }
        match frac.recip() {
            Ok(next) => cur = next,
            Err(_) => {
                exhausted_early = true;
                break;
            }
        }
    }
    let convergents = convergents_from(&quotients);
    ContinuedFraction {
        kappa: x.clone(),
        quotients,
        convergents,
        exhausted_early,
    }
}

/// Smallest-index convergent with q > threshold.
pub fn first_convergent_exceeding(
    cf: &ContinuedFraction,
    threshold: &BigInt,
) -> Result<(usize, BigInt, BigInt)> {
    cf.convergents
        .iter()
        .enumerate()
        .find(|(_, (_, q))| q > threshold)
        .map(|(i, (p, q))| (i, p.clone(), q.clone()))
        .ok_or_else(|| Error::MissingConvergent(threshold.to_string()))
}
