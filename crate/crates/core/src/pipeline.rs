//! Orchestrates the full verification: low-range search, initial bounds,
//! three reduction rounds (with the Legendre and lattice branches for the
//! mu = 0 degeneracies), and the final contradiction check, assembling a
//! deterministic report.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::bounds::{derive_initial_bounds, InitialBounds};
use crate::contfrac::{cf_expand, first_convergent_exceeding, ContinuedFraction};
use crate::lattice::{linear_form_lower_bound, lll_m_bound, LatticeBoundData};
use crate::pattern::{search_low_range, PatternParams, PatternSolution};
use crate::real::{pow10, CertifiedReal};
use crate::reduction::{
    baker_davenport_reduce, legendre_bound, Certificate, DpInstance, ReductionOutcome,
};
use crate::report::VerificationReport;
use crate::sequence::{dominant_root, DominantRoot, TribLucasSequence};
use crate::{Error, Result};

/// How many partial quotients of kappa the rounds may draw on.
const CF_TERMS: usize = 110;

/// Published reference values for the three rounds' epsilon minima; used
/// only for the report's comparison notes, never as acceptance gates.
pub const REFERENCE_EPS: [&str; 3] = ["0.00227519", "0.0000604124", "0.000000106965"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub n_low_max: u64,
    pub precision_digits: u32,
    pub m_round1: BigInt,
    pub c_lll: BigInt,
    pub output_format: OutputFormat,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            n_low_max: 500,
            precision_digits: 250,
            m_round1: pow10(51),
            c_lll: pow10(110),
            output_format: OutputFormat::Json,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_low_max < 3 {
            return Err(Error::InvalidParams("n_low_max must be >= 3".into()));
        }
        if self.precision_digits < 30 {
            return Err(Error::InvalidParams(
                "precision_digits must be >= 30".into(),
            ));
        }
        if self.m_round1 <= BigInt::from(1) || !self.c_lll.is_positive() {
            return Err(Error::InvalidParams("M must be > 1 and C >= 1".into()));
        }
        Ok(())
    }
}

/// Shared certified state for one pipeline run at a fixed precision.
pub struct PipelineContext {
    pub prec: u32,
    pub seq: TribLucasSequence,
    pub root: DominantRoot,
    pub ln10: CertifiedReal,
    pub kappa: CertifiedReal,
    pub cf: ContinuedFraction,
}

impl PipelineContext {
    pub fn prepare(precision_digits: u32) -> Result<Self> {
        let prec = precision_digits;
        let root = dominant_root(prec)?;
        let ln10 = CertifiedReal::ln10(prec);
        let kappa = ln10.div(&root.log_alpha)?;
        let cf = cf_expand(&kappa, CF_TERMS);
        Ok(PipelineContext {
            prec,
            seq: TribLucasSequence::new(),
            root,
            ln10,
            kappa,
            cf,
        })
    }

    /// Convergent lookup that converts an expansion cut short by precision
    /// into a retryable exhaustion error.
    fn require_convergent(&self, threshold: &BigInt) -> Result<(usize, BigInt, BigInt)> {
        match first_convergent_exceeding(&self.cf, threshold) {
            Ok(t) => Ok(t),
            Err(Error::MissingConvergent(t)) if self.cf.exhausted_early => Err(
                Error::PrecisionExhausted(format!("expansion too short for q > {t}")),
            ),
            Err(e) => Err(e),
        }
    }
}

/// Case coordinates within a reduction round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CaseKey {
    pub d1: u8,
    pub d2: Option<u8>,
    pub ell: Option<u32>,
    pub m: Option<u32>,
}

impl CaseKey {
    pub fn label(&self) -> String {
        match (self.d2, self.ell, self.m) {
            (Some(d2), Some(l), Some(m)) => format!("({},{},{l},{m})", self.d1, d2),
            (Some(d2), Some(l), None) => format!("({},{},{l})", self.d1, d2),
            _ => format!("d1={}", self.d1),
        }
    }
}

/// One Dujella-Petho case in a reduction round.
#[derive(Clone, Debug)]
pub struct DpCase {
    pub key: CaseKey,
    pub outcome: ReductionOutcome,
}

impl DpCase {
    pub fn label(&self) -> String {
        self.key.label()
    }
}

/// Aggregate of a DP sweep; built by an order-independent fold so parallel
/// sweeps stay deterministic (ties broken by case key).
#[derive(Clone, Debug, Default)]
pub struct SweepSummary {
    pub cases: u64,
    pub failures: u64,
    bound_max_entry: Option<(BigInt, CaseKey)>,
    eps_min_entry: Option<(CertifiedReal, CaseKey, usize)>,
    /// (convergent index used, number of cases certified there)
    pub q_histogram: Vec<(usize, u64)>,
}

impl SweepSummary {
    fn absorb(&mut self, case: &DpCase) {
        self.cases += 1;
        match &case.outcome {
            ReductionOutcome::Bound { value, certificate } => {
                let better = match &self.bound_max_entry {
                    None => true,
                    Some((v, k)) => value > v || (value == v && case.key < *k),
                };
                if better {
                    self.bound_max_entry = Some((value.clone(), case.key));
                }
                if let Certificate::DujellaPetho {
                    epsilon, q_index, ..
                } = certificate
                {
                    let better = match &self.eps_min_entry {
                        None => true,
                        Some((cur, k, _)) => {
                            let (a, b) = (epsilon.lo(), cur.lo());
                            a < b || (a == b && case.key < *k)
                        }
                    };
                    if better {
                        self.eps_min_entry = Some((epsilon.clone(), case.key, *q_index));
                    }
                    match self.q_histogram.iter_mut().find(|(i, _)| i == q_index) {
                        Some((_, c)) => *c += 1,
                        None => {
                            self.q_histogram.push((*q_index, 1));
                            self.q_histogram.sort_by_key(|&(i, _)| i);
                        }
                    }
                }
            }
            ReductionOutcome::Failure { .. } => self.failures += 1,
        }
    }

    fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.cases += other.cases;
        self.failures += other.failures;
        if let Some((v, k)) = other.bound_max_entry {
            let better = match &self.bound_max_entry {
                None => true,
                Some((cur, ck)) => v > *cur || (v == *cur && k < *ck),
            };
            if better {
                self.bound_max_entry = Some((v, k));
            }
        }
        if let Some((e, k, q)) = other.eps_min_entry {
            let better = match &self.eps_min_entry {
                None => true,
                Some((cur, ck, _)) => {
                    let (a, b) = (e.lo(), cur.lo());
                    a < b || (a == b && k < *ck)
                }
            };
            if better {
                self.eps_min_entry = Some((e, k, q));
            }
        }
        for (i, c) in other.q_histogram {
            match self.q_histogram.iter_mut().find(|(j, _)| *j == i) {
                Some((_, cur)) => *cur += c,
                None => {
                    self.q_histogram.push((i, c));
                    self.q_histogram.sort_by_key(|&(j, _)| j);
                }
            }
        }
        self
    }

    pub fn bound_max(&self) -> BigInt {
        self.bound_max_entry
            .as_ref()
            .map(|(v, _)| v.clone())
            .unwrap_or_default()
    }

    pub fn bound_max_label(&self) -> String {
        self.bound_max_entry
            .as_ref()
            .map(|(_, k)| k.label())
            .unwrap_or_default()
    }

    pub fn eps_min(&self) -> Option<&CertifiedReal> {
        self.eps_min_entry.as_ref().map(|(e, _, _)| e)
    }

    pub fn eps_min_label(&self) -> String {
        self.eps_min_entry
            .as_ref()
            .map(|(_, k, _)| k.label())
            .unwrap_or_default()
    }

    pub fn eps_min_q_index(&self) -> usize {
        self.eps_min_entry.as_ref().map_or(0, |(_, _, q)| *q)
    }
}

fn summarize(cases: &[DpCase]) -> SweepSummary {
    let mut s = SweepSummary::default();
    for case in cases {
        s.absorb(case);
    }
    s
}

#[derive(Clone, Debug)]
pub struct Round1Outcome {
    pub ell_max: BigInt,
    pub dp_cases: Vec<DpCase>,
    pub legendre: ReductionOutcome,
    pub summary: SweepSummary,
}

/// Round 1: mu = log(d1/9)/log alpha for d1 in 1..=8 with A = 56/log alpha,
/// B = 10; the d1 = 9 branch has mu = 0 and goes through the Legendre
/// criterion instead. The l < 2 cases are subsumed by the result.
pub fn run_round1(ctx: &PipelineContext, cfg: &PipelineConfig) -> Result<Round1Outcome> {
    ctx.require_convergent(&(&cfg.m_round1 * 6))?;
    let prec = ctx.prec;
    let big_a = CertifiedReal::from_u64(56, prec).div(&ctx.root.log_alpha)?;
    let big_b = CertifiedReal::from_u64(10, prec);
    let nine = BigInt::from(9);

    let dp_cases: Vec<DpCase> = (1u8..=8)
        .into_par_iter()
        .map(|d1| -> Result<DpCase> {
            let mu = CertifiedReal::from_ratio(&BigInt::from(d1), &nine, prec)?
                .ln()?
                .div(&ctx.root.log_alpha)?;
            let inst = DpInstance {
                kappa: ctx.kappa.clone(),
                mu,
                big_a: big_a.clone(),
                big_b: big_b.clone(),
                big_m: cfg.m_round1.clone(),
            };
            Ok(DpCase {
                key: CaseKey {
                    d1,
                    d2: None,
                    ell: None,
                    m: None,
                },
                outcome: baker_davenport_reduce(&inst, &ctx.cf)?,
            })
        })
        .collect::<Result<_>>()?;

    let legendre = legendre_bound(&ctx.cf, &cfg.m_round1, &big_a, &big_b)?;

    let summary = summarize(&dp_cases);
    let mut ell_max = summary.bound_max();
    if let Some(v) = legendre.bound_value() {
        ell_max = ell_max.max(v.clone());
    }
    ell_max = ell_max.max(BigInt::from(1));
    Ok(Round1Outcome {
        ell_max,
        dp_cases,
        legendre,
        summary,
    })
}

/// One stage of the iterated lattice branch.
#[derive(Clone, Debug)]
pub struct LatticeStage {
    pub x1: BigInt,
    pub x2: BigInt,
    pub data: LatticeBoundData,
    pub m_bound: BigInt,
    /// C values rejected by the condition check before this stage succeeded
    pub rejected_c: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct LatticeBranch {
    pub stages: Vec<LatticeStage>,
    pub m_bound: BigInt,
}

impl LatticeBranch {
    pub fn final_stage(&self) -> &LatticeStage {
        self.stages.last().expect("branch has at least one stage")
    }
}

fn lattice_stage(
    ctx: &PipelineContext,
    cfg: &PipelineConfig,
    x1: &BigInt,
    x2: &BigInt,
    try_config_c: bool,
) -> Result<(LatticeBoundData, Vec<BigInt>)> {
    let l1 = &ctx.ln10;
    let l2 = &ctx.root.log_alpha;
    let mut rejected = Vec::new();

    // size C from the box: start at 10^digits(T^2 + ...) and escalate
    let t_num = BigInt::from(1) + x1 * x1 + x2 * x2;
    let needed: BigInt = &t_num * &t_num + x1 * x1 * BigInt::from(4);
    let d0 = needed.to_string().len() as u32;

    let mut candidates: Vec<BigInt> = Vec::new();
    if try_config_c {
        candidates.push(cfg.c_lll.clone());
    }
    for step in 0..40u32 {
        candidates.push(pow10(d0 + 2 * step));
    }

    let mut first: Option<LatticeBoundData> = None;
    for c in &candidates {
        let data = linear_form_lower_bound(l1, l2, x1, x2, c)?;
        let positive = data
            .bound
            .as_ref()
            .is_some_and(|b| b.is_certainly_positive());
        if positive {
            first = Some(data);
            break;
        }
        rejected.push(c.clone());
    }
    let first = first
        .ok_or_else(|| Error::PrecisionExhausted("no C satisfied the lattice condition".into()))?;

    // the first admissible C sits near the condition threshold where the
    // bound is weak; a few more decades usually improve it
    let mut best = first;
    for extra in [10u32, 100, 1000] {
        let c = &best.c * extra;
        let data = linear_form_lower_bound(l1, l2, x1, x2, &c)?;
        if let Some(b) = &data.bound {
            if b.is_certainly_positive() && best.bound.as_ref().is_none_or(|cur| b.lo() > cur.lo())
            {
                best = data;
            }
        }
    }
    Ok((best, rejected))
}

/// Iterated two-dimensional reduction for the degenerate (1,0,1) case: each
/// certified lower bound shrinks the admissible m, which shrinks the box
/// for the next stage, until no further progress.
pub fn lattice_branch(
    ctx: &PipelineContext,
    cfg: &PipelineConfig,
    initial: &InitialBounds,
) -> Result<LatticeBranch> {
    // stage-0 box: must dominate both the derived bounds and the published
    // window
    let mut x1 = std::cmp::max(
        initial.two_ell_plus_m_bound.clone(),
        BigInt::from(18) * pow10(49),
    );
    let mut x2 = std::cmp::max(initial.n_bound.clone(), BigInt::from(66) * pow10(49));
    let mut stages: Vec<LatticeStage> = Vec::new();
    let mut m_bound: Option<BigInt> = None;

    for stage_idx in 0..10 {
        let (data, rejected) = lattice_stage(ctx, cfg, &x1, &x2, stage_idx == 0)?;
        let bound = data.bound.clone().expect("stage returns a certified bound");
        let m_new = lll_m_bound(&bound)?;
        stages.push(LatticeStage {
            x1: x1.clone(),
            x2: x2.clone(),
            data,
            m_bound: m_new.clone(),
            rejected_c: rejected,
        });
        if let Some(cur) = &m_bound {
            if &m_new >= cur {
                break;
            }
        }
        m_bound = Some(m_new.clone());
        // next box: x1 bounds l + m = m + 1, x2 bounds n through the
        // digit-length relation with 2l + m = m + 2
        x1 = std::cmp::max(&m_new + 1, BigInt::from(2));
        let n_cap = ctx
            .ln10
            .mul_bigint(&(&m_new + 2))
            .add(&CertifiedReal::one(ctx.prec))
            .div(&ctx.root.log_alpha)?
            .floor_upper();
        x2 = std::cmp::max(n_cap, BigInt::from(2));
    }

    let m_bound = m_bound
        .ok_or_else(|| Error::PrecisionExhausted("lattice branch made no progress".into()))?;
    Ok(LatticeBranch { stages, m_bound })
}

#[derive(Clone, Debug)]
pub struct Round2Outcome {
    pub m_max: BigInt,
    pub summary: SweepSummary,
    pub lattice: LatticeBranch,
}

/// Round 2: mu = log((d1 10^l - (d1-d2))/9)/log alpha over d1 != d2 and
/// 1 <= l <= ell_max with A = 38/log alpha, B = 10; the single mu = 0 case
/// (1,0,1) goes through the lattice branch. m < 2 is subsumed.
pub fn run_round2(
    ctx: &PipelineContext,
    cfg: &PipelineConfig,
    ell_max: &BigInt,
    initial: &InitialBounds,
) -> Result<Round2Outcome> {
    ctx.require_convergent(&(&cfg.m_round1 * 6))?;
    let prec = ctx.prec;
    let big_a = CertifiedReal::from_u64(38, prec).div(&ctx.root.log_alpha)?;
    let big_b = CertifiedReal::from_u64(10, prec);
    let nine = BigInt::from(9);
    let ell_cap: u32 = ell_max
        .try_into()
        .map_err(|_| Error::InvalidParams("l bound out of range".into()))?;

    let mut case_params: Vec<(u8, u8, u32)> = Vec::new();
    for d1 in 1u8..=9 {
        for d2 in (0u8..=9).filter(|&d| d != d1) {
            for ell in 1..=ell_cap {
                let num = BigInt::from(d1) * pow10(ell) - BigInt::from(d1 as i32 - d2 as i32);
                if num == nine {
                    continue; // the (1,0,1) degeneracy, handled by the lattice
                }
                case_params.push((d1, d2, ell));
            }
        }
    }

    let summary = case_params
        .par_iter()
        .try_fold(SweepSummary::default, |mut acc, &(d1, d2, ell)| {
            let num = BigInt::from(d1) * pow10(ell) - BigInt::from(d1 as i32 - d2 as i32);
            let mu = CertifiedReal::from_ratio(&num, &nine, prec)?
                .ln()?
                .div(&ctx.root.log_alpha)?;
            let inst = DpInstance {
                kappa: ctx.kappa.clone(),
                mu,
                big_a: big_a.clone(),
                big_b: big_b.clone(),
                big_m: cfg.m_round1.clone(),
            };
            acc.absorb(&DpCase {
                key: CaseKey {
                    d1,
                    d2: Some(d2),
                    ell: Some(ell),
                    m: None,
                },
                outcome: baker_davenport_reduce(&inst, &ctx.cf)?,
            });
            Ok(acc)
        })
        .try_reduce(SweepSummary::default, |a, b| Ok(a.merge(b)))?;
    let lattice = lattice_branch(ctx, cfg, initial)?;
    let m_max = summary
        .bound_max()
        .max(lattice.m_bound.clone())
        .max(BigInt::from(1));
    Ok(Round2Outcome {
        m_max,
        summary,
        lattice,
    })
}

#[derive(Clone, Debug)]
pub struct Round3Outcome {
    pub n_max_reduced: BigInt,
    pub summary: SweepSummary,
}

/// Round 3: mu = log((d1 10^(l+m) + (d1-d2) 10^m - (d1-d2))/9)/log alpha
/// over d1 != d2, l <= ell_max, m <= m_max with A = 4/log alpha, B = alpha.
pub fn run_round3(
    ctx: &PipelineContext,
    cfg: &PipelineConfig,
    ell_max: &BigInt,
    m_max: &BigInt,
) -> Result<Round3Outcome> {
    ctx.require_convergent(&(&cfg.m_round1 * 6))?;
    let prec = ctx.prec;
    let big_a = CertifiedReal::from_u64(4, prec).div(&ctx.root.log_alpha)?;
    let big_b = ctx.root.alpha.clone();
    let nine = BigInt::from(9);
    let ell_cap: u32 = ell_max
        .try_into()
        .map_err(|_| Error::InvalidParams("l bound out of range".into()))?;
    let m_cap: u32 = m_max
        .try_into()
        .map_err(|_| Error::InvalidParams("m bound out of range".into()))?;

    let mut case_params: Vec<(u8, u8, u32, u32)> = Vec::new();
    for d1 in 1u8..=9 {
        for d2 in (0u8..=9).filter(|&d| d != d1) {
            for ell in 1..=ell_cap {
                for m in 1..=m_cap {
                    case_params.push((d1, d2, ell, m));
                }
            }
        }
    }

    let summary = case_params
        .par_iter()
        .try_fold(SweepSummary::default, |mut acc, &(d1, d2, ell, m)| {
            let diff = BigInt::from(d1 as i32 - d2 as i32);
            let num = BigInt::from(d1) * pow10(ell + m) + &diff * pow10(m) - &diff;
            let mu = CertifiedReal::from_ratio(&num, &nine, prec)?
                .ln()?
                .div(&ctx.root.log_alpha)?;
            let inst = DpInstance {
                kappa: ctx.kappa.clone(),
                mu,
                big_a: big_a.clone(),
                big_b: big_b.clone(),
                big_m: cfg.m_round1.clone(),
            };
            acc.absorb(&DpCase {
                key: CaseKey {
                    d1,
                    d2: Some(d2),
                    ell: Some(ell),
                    m: Some(m),
                },
                outcome: baker_davenport_reduce(&inst, &ctx.cf)?,
            });
            Ok(acc)
        })
        .try_reduce(SweepSummary::default, |a, b| Ok(a.merge(b)))?;
    Ok(Round3Outcome {
        n_max_reduced: summary.bound_max(),
        summary,
    })
}

/// Everything a full run produces, in typed form; the serializable report
/// is derived from this.
pub struct PipelineOutcome {
    pub config: PipelineConfig,
    pub effective_precision: u32,
    pub exhausted_precisions: Vec<u32>,
    pub solutions: Vec<PatternSolution>,
    pub initial: InitialBounds,
    pub round1: Round1Outcome,
    pub round2: Round2Outcome,
    pub round3: Round3Outcome,
    pub m_dominates: bool,
    pub verdict_verified: bool,
}

/// The unique expected solution: S_8 = 131 with pattern (1,3,1,1).
pub fn expected_solutions() -> Vec<PatternSolution> {
    vec![PatternSolution {
        n: 8,
        params: PatternParams {
            d1: 1,
            d2: 3,
            ell: 1,
            m: 1,
        },
    }]
}

fn attempt_full(cfg: &PipelineConfig, prec: u32) -> Result<PipelineOutcome> {
    let ctx = PipelineContext::prepare(prec)?;
    let solutions = search_low_range(&ctx.seq, cfg.n_low_max as usize)?;
    let initial = derive_initial_bounds(&ctx.root, cfg.n_low_max)?;
    let round1 = run_round1(&ctx, cfg)?;
    let round2 = run_round2(&ctx, cfg, &round1.ell_max, &initial)?;
    let round3 = run_round3(&ctx, cfg, &round1.ell_max, &round2.m_max)?;

    // soundness gate: the DP hypothesis m <= M must cover every candidate
    let m_dominates = cfg.m_round1 >= initial.two_ell_plus_m_bound;

    let rounds_clean = round1.summary.failures == 0
        && round1.legendre.bound_value().is_some()
        && round2.summary.failures == 0
        && round3.summary.failures == 0;
    let contradiction = round3.n_max_reduced <= BigInt::from(cfg.n_low_max);
    let verdict_verified = solutions == expected_solutions()
        && contradiction
        && rounds_clean
        && m_dominates
        && initial.published_constant_audit().iter().all(|a| a.within);

    Ok(PipelineOutcome {
        config: cfg.clone(),
        effective_precision: prec,
        exhausted_precisions: Vec::new(),
        solutions,
        initial,
        round1,
        round2,
        round3,
        m_dominates,
        verdict_verified,
    })
}

/// Full pipeline with automatic precision-doubling retry (up to 2000
/// digits) on certified-arithmetic exhaustion.
pub fn run_full_outcome(cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    cfg.validate()?;
    let (mut outcome, exhausted) =
        crate::with_precision_retry(cfg.precision_digits, 2000, |prec| attempt_full(cfg, prec))?;
    outcome.exhausted_precisions = exhausted;
    Ok(outcome)
}

/// Full pipeline, rendered into the serializable report.
pub fn run_full(cfg: &PipelineConfig) -> Result<VerificationReport> {
    Ok(crate::report::build_report(&run_full_outcome(cfg)?))
}

/// Independently runnable phases of the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Search,
    Bounds,
    Reduce,
    Verify,
}

/// Runs one phase with the same precision-retry discipline as the full
/// pipeline and renders a report with the unused sections left empty.
pub fn run_phase(cfg: &PipelineConfig, phase: Phase) -> Result<VerificationReport> {
    cfg.validate()?;
    match phase {
        Phase::Verify => run_full(cfg),
        Phase::Search => {
            let seq = TribLucasSequence::new();
            let solutions = search_low_range(&seq, cfg.n_low_max as usize)?;
            Ok(crate::report::build_search_report(
                cfg,
                cfg.precision_digits,
                &solutions,
            ))
        }
        Phase::Bounds => {
            let (out, exhausted) =
                crate::with_precision_retry(cfg.precision_digits, 2000, |prec| {
                    let root = dominant_root(prec)?;
                    derive_initial_bounds(&root, cfg.n_low_max).map(|ib| (ib, prec))
                })?;
            Ok(crate::report::build_bounds_report(
                cfg, out.1, &out.0, &exhausted,
            ))
        }
        Phase::Reduce => {
            let (out, exhausted) =
                crate::with_precision_retry(cfg.precision_digits, 2000, |prec| {
                    let ctx = PipelineContext::prepare(prec)?;
                    let initial = derive_initial_bounds(&ctx.root, cfg.n_low_max)?;
                    let r1 = run_round1(&ctx, cfg)?;
                    let r2 = run_round2(&ctx, cfg, &r1.ell_max, &initial)?;
                    let r3 = run_round3(&ctx, cfg, &r1.ell_max, &r2.m_max)?;
                    Ok((prec, initial, r1, r2, r3))
                })?;
            let (prec, initial, r1, r2, r3) = out;
            let m_dominates = cfg.m_round1 >= initial.two_ell_plus_m_bound;
            Ok(crate::report::build_reduce_report(
                cfg,
                prec,
                &initial,
                &r1,
                &r2,
                &r3,
                m_dominates,
                &exhausted,
            ))
        }
    }
}
