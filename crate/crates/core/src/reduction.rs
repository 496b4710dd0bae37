//! Reduction criteria on top of continued fractions: the Dujella-Petho
//! variant of Baker-Davenport reduction, and the Legendre best-approximation
//! bound used when mu = 0 makes the former inapplicable.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::contfrac::{first_convergent_exceeding, ContinuedFraction};
use crate::real::CertifiedReal;
use crate::{Error, Result};

/// One Dujella-Petho instance: certify eps = ||mu q|| - M ||kappa q|| > 0
/// for a convergent denominator q > 6M, then any solution of
/// 0 < |m kappa - n + mu| < A B^(-k) with m <= M has k < log(Aq/eps)/log B.
#[derive(Clone, Debug)]
pub struct DpInstance {
    pub kappa: CertifiedReal,
    pub mu: CertifiedReal,
    pub big_a: CertifiedReal,
    pub big_b: CertifiedReal,
    pub big_m: BigInt,
}

/// Data sufficient to re-check a reduction round independently.
#[derive(Clone, Debug)]
pub enum Certificate {
    DujellaPetho {
        /// index of the convergent that certified eps > 0
        q_index: usize,
        q: BigInt,
        epsilon: CertifiedReal,
        kq_dist: CertifiedReal,
        muq_dist: CertifiedReal,
        threshold: CertifiedReal,
        /// convergents tried before this one (each certified eps <= 0)
        skipped: usize,
    },
    Legendre {
        n_index: usize,
        q: BigInt,
        a_max: BigInt,
        threshold: CertifiedReal,
    },
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum ReductionOutcome {
    Bound {
        value: BigInt,
        certificate: Certificate,
    },
    Failure {
        reason: String,
        /// eps at the first admissible convergent, when one was computed
        first_epsilon: Option<CertifiedReal>,
    },
}

impl ReductionOutcome {
    pub fn bound_value(&self) -> Option<&BigInt> {
        match self {
            ReductionOutcome::Bound { value, .. } => Some(value),
            ReductionOutcome::Failure { .. } => None,
        }
    }
}

/// Distance from a certified real to the nearest integer.
pub fn nearest_integer_distance(x: &CertifiedReal) -> Result<CertifiedReal> {
    x.nearest_int_distance()
}

/// Strict upper bound for integers k < threshold, from the ball's upper end.
fn strict_integer_bound(threshold: &CertifiedReal) -> BigInt {
    let b = threshold.ceil_upper() - BigInt::from(1);
    if b.is_negative() {
        BigInt::from(0)
    } else {
        b
    }
}

/// Runs the Dujella-Petho reduction, scanning convergents with q > 6M in
/// index order and returning the first with certified eps > 0.
///
/// A convergent whose eps is certified nonpositive is skipped (the criterion
/// simply fails there; any later admissible convergent is equally valid).
/// When every admissible convergent fails — in particular whenever mu = 0 —
/// the outcome is a failure with reason "epsilon nonpositive".
pub fn baker_davenport_reduce(
    inst: &DpInstance,
    cf: &ContinuedFraction,
) -> Result<ReductionOutcome> {
    if !inst.big_a.is_certainly_positive() {
        return Err(Error::InvalidParams("DP requires A > 0".into()));
    }
    if !inst
        .big_b
        .certified_gt(&CertifiedReal::one(inst.big_b.prec()))
    {
        return Err(Error::InvalidParams("DP requires B > 1".into()));
    }
    if inst.big_m <= BigInt::one() {
        return Err(Error::InvalidParams("DP requires M > 1".into()));
    }

    let six_m = &inst.big_m * 6;
    let (start, _, _) = first_convergent_exceeding(cf, &six_m)?;
    let ln_b = inst.big_b.ln()?;

    let mut first_eps: Option<CertifiedReal> = None;
    let mut skipped = 0usize;
    for idx in start..cf.len() {
        let (_, ref q) = cf.convergents[idx];
        let kq_dist = inst.kappa.mul_bigint(q).nearest_int_distance()?;
        let muq_dist = inst.mu.mul_bigint(q).nearest_int_distance()?;
        let eps = muq_dist.sub(&kq_dist.mul_bigint(&inst.big_m));
        if eps.is_certainly_positive() {
            let ratio = inst.big_a.mul_bigint(q).div(&eps)?;
            let threshold = ratio.ln()?.div(&ln_b)?;
            let value = strict_integer_bound(&threshold);
            return Ok(ReductionOutcome::Bound {
                value,
                certificate: Certificate::DujellaPetho {
                    q_index: idx,
                    q: q.clone(),
                    epsilon: eps,
                    kq_dist,
                    muq_dist,
                    threshold,
                    skipped,
                },
            });
        } else if eps.is_certainly_nonpositive() {
            if first_eps.is_none() {
                first_eps = Some(eps);
            }
            skipped += 1;
        } else {
            return Err(Error::PrecisionExhausted(format!(
                "epsilon sign undecided at convergent {idx}"
            )));
        }
    }
    Ok(ReductionOutcome::Failure {
        reason: "epsilon nonpositive".into(),
        first_epsilon: first_eps,
    })
}

/// Legendre-criterion bound: with N the smallest index with q_N > M and
/// a(M) the largest partial quotient up to N, any admissible exponent is
/// below log((a(M)+2) A M)/log B.
pub fn legendre_bound(
    cf: &ContinuedFraction,
    big_m: &BigInt,
    big_a: &CertifiedReal,
    b_base: &CertifiedReal,
) -> Result<ReductionOutcome> {
    let (n_index, _, q) = first_convergent_exceeding(cf, big_m)?;
    let a_max = cf.quotients[..=n_index]
        .iter()
        .max()
        .expect("expansion nonempty")
        .clone();
    let factor = (&a_max + 2) * big_m;
    let threshold = big_a.mul_bigint(&factor).ln()?.div(&b_base.ln()?)?;
    let value = strict_integer_bound(&threshold);
    Ok(ReductionOutcome::Bound {
        value,
        certificate: Certificate::Legendre {
            n_index,
            q,
            a_max,
            threshold,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::cf_expand;

    fn kappa_ln10_ln7(prec: u32) -> CertifiedReal {
        let ten = CertifiedReal::from_u64(10, prec);
        let seven = CertifiedReal::from_u64(7, prec);
        ten.ln().unwrap().div(&seven.ln().unwrap()).unwrap()
    }

    #[test]
    fn mu_zero_fails_with_nonpositive_eps() {
        let prec = 150;
        let kappa = kappa_ln10_ln7(prec);
        let cf = cf_expand(&kappa, 60);
        let inst = DpInstance {
            kappa: kappa.clone(),
            mu: CertifiedReal::zero(prec),
            big_a: CertifiedReal::from_u64(5, prec),
            big_b: CertifiedReal::from_u64(10, prec),
            big_m: BigInt::from(1000),
        };
        match baker_davenport_reduce(&inst, &cf).unwrap() {
            ReductionOutcome::Failure {
                reason,
                first_epsilon,
            } => {
                assert_eq!(reason, "epsilon nonpositive");
                assert!(first_epsilon.unwrap().is_certainly_nonpositive());
            }
            ReductionOutcome::Bound { .. } => panic!("mu = 0 must not produce a bound"),
        }
    }

    #[test]
    fn nonzero_mu_produces_bound() {
        let prec = 150;
        let kappa = kappa_ln10_ln7(prec);
        let cf = cf_expand(&kappa, 60);
        let three = CertifiedReal::from_u64(3, prec);
        let seven = CertifiedReal::from_u64(7, prec);
        let mu = three.ln().unwrap().div(&seven.ln().unwrap()).unwrap();
        let inst = DpInstance {
            kappa,
            mu,
            big_a: CertifiedReal::from_u64(5, prec),
            big_b: CertifiedReal::from_u64(10, prec),
            big_m: BigInt::from(1000),
        };
        match baker_davenport_reduce(&inst, &cf).unwrap() {
            ReductionOutcome::Bound { value, certificate } => {
                assert!(!value.is_negative());
                match certificate {
                    Certificate::DujellaPetho { epsilon, q, .. } => {
                        assert!(epsilon.is_certainly_positive());
                        assert!(q > BigInt::from(6000));
                    }
                    _ => panic!("expected DP certificate"),
                }
            }
            ReductionOutcome::Failure { .. } => panic!("expected a bound"),
        }
    }

    #[test]
    fn rejects_bad_hypotheses() {
        let prec = 80;
        let kappa = kappa_ln10_ln7(prec);
        let cf = cf_expand(&kappa, 30);
        let base = DpInstance {
            kappa: kappa.clone(),
            mu: CertifiedReal::one(prec),
            big_a: CertifiedReal::from_u64(1, prec),
            big_b: CertifiedReal::from_u64(2, prec),
            big_m: BigInt::from(10),
        };
        let neg_a = DpInstance {
            big_a: CertifiedReal::from_u64(1, prec).neg(),
            ..base.clone()
        };
        assert!(baker_davenport_reduce(&neg_a, &cf).is_err());
        let small_b = DpInstance {
            big_b: CertifiedReal::one(prec),
            ..base.clone()
        };
        assert!(baker_davenport_reduce(&small_b, &cf).is_err());
        let small_m = DpInstance {
            big_m: BigInt::one(),
            ..base
        };
        assert!(baker_davenport_reduce(&small_m, &cf).is_err());
    }

    #[test]
    fn legendre_on_golden_ratio() {
        let prec = 120;
        let five = CertifiedReal::from_u64(5, prec);
        let phi = CertifiedReal::one(prec)
            .add(&five.sqrt().unwrap())
            .div_bigint(&BigInt::from(2))
            .unwrap();
        let cf = cf_expand(&phi, 40);
        let a = CertifiedReal::from_u64(3, prec);
        let b = CertifiedReal::from_u64(10, prec);
        match legendre_bound(&cf, &BigInt::from(10), &a, &b).unwrap() {
            ReductionOutcome::Bound { certificate, .. } => match certificate {
                Certificate::Legendre { a_max, .. } => assert_eq!(a_max, BigInt::one()),
                _ => panic!("expected Legendre certificate"),
            },
            _ => panic!("expected a bound"),
        }
    }

    #[test]
    fn missing_convergent_reported() {
        let cf =
            ContinuedFraction::expand_rational(&BigInt::from(22), &BigInt::from(7), 80).unwrap();
        let a = CertifiedReal::from_u64(3, 80);
        let b = CertifiedReal::from_u64(10, 80);
        assert!(matches!(
            legendre_bound(&cf, &BigInt::from(100), &a, &b),
            Err(Error::MissingConvergent(_))
        ));
    }
}
