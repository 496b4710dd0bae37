//! Serializable verification report: top-level keys {config, solutions,
//! initial_bounds, rounds, verdict, notes}, every numeric field a decimal
//! string so arbitrary-size integers survive interchange. Rendering is
//! fully deterministic.

use serde::Serialize;

use crate::pipeline::{
    DpCase, LatticeBranch, OutputFormat, PipelineOutcome, Round1Outcome, SweepSummary,
    REFERENCE_EPS,
};
use crate::real::CertifiedReal;
use crate::reduction::{Certificate, ReductionOutcome};

/// Significant digits printed for certified quantities in reports.
const EPS_DIGITS: usize = 12;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerificationReport {
    pub config: ConfigEcho,
    pub solutions: Option<Vec<SolutionRow>>,
    pub initial_bounds: Option<InitialBoundsReport>,
    pub rounds: Vec<RoundReport>,
    pub verdict: String,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConfigEcho {
    pub n_low_max: u64,
    pub precision_digits: u32,
    pub effective_precision: u32,
    pub m_round1: String,
    pub c_lll: String,
    pub output_format: OutputFormat,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SolutionRow {
    pub n: u64,
    pub d1: u8,
    pub d2: u8,
    pub ell: u32,
    pub m: u32,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConstantRow {
    pub name: String,
    pub computed: String,
    pub ceiling: String,
    pub within: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InitialBoundsReport {
    pub n_bound: String,
    pub two_ell_plus_m_bound: String,
    pub ell_coeff_of_one_plus_log_n: String,
    pub m_coeff_of_one_plus_log_n_sq: String,
    pub constants: Vec<ConstantRow>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CaseRow {
    pub case: String,
    pub q_index: usize,
    pub skipped_convergents: usize,
    pub epsilon: String,
    pub bound: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LegendreRow {
    pub n_index: usize,
    pub q: String,
    pub a_max: String,
    pub bound: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AggregateRow {
    pub cases: u64,
    pub failures: u64,
    pub bound_max: String,
    pub bound_max_case: String,
    pub eps_min: String,
    pub eps_min_case: String,
    pub eps_min_q_index: usize,
    pub q_index_histogram: Vec<(usize, u64)>,
    pub reference_eps: String,
    pub eps_min_vs_reference: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LatticeStageRow {
    pub x1: String,
    pub x2: String,
    pub c: String,
    pub rejected_c: Vec<String>,
    pub d_lambda_sq: String,
    pub t: String,
    pub condition_ok: bool,
    pub lower_bound: String,
    pub m_bound: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RoundReport {
    pub round: u8,
    pub method: String,
    pub bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<Vec<CaseRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legendre: Option<LegendreRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<AggregateRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_stages: Option<Vec<LatticeStageRow>>,
}

fn eps_str(e: &CertifiedReal) -> String {
    e.sci_str(EPS_DIGITS)
}

/// Truncated scientific rendering of a big rational p/q (six significant
/// digits), enough to audit magnitudes without drowning the report.
fn rational_sci(r: &num_rational::BigRational) -> String {
    match CertifiedReal::from_ratio(r.numer(), r.denom(), 40) {
        Ok(v) => v.sci_str(6),
        Err(_) => "?".into(),
    }
}

/// Scientific rendering of a nonnegative big integer.
fn bigint_sci(n: &num_bigint::BigInt) -> String {
    let s = n.to_string();
    if s.len() <= 12 {
        return s;
    }
    let sig = 6.min(s.len());
    format!("{}.{}e{}", &s[..1], &s[1..sig], s.len() - 1)
}

fn case_row(case: &DpCase) -> Option<CaseRow> {
    match &case.outcome {
        ReductionOutcome::Bound { value, certificate } => match certificate {
            Certificate::DujellaPetho {
                q_index,
                epsilon,
                skipped,
                ..
            } => Some(CaseRow {
                case: case.label(),
                q_index: *q_index,
                skipped_convergents: *skipped,
                epsilon: eps_str(epsilon),
                bound: value.to_string(),
            }),
            _ => None,
        },
        ReductionOutcome::Failure { .. } => None,
    }
}

fn aggregate_row(summary: &SweepSummary, reference: &str) -> AggregateRow {
    let (eps_min, relation) = match summary.eps_min() {
        Some(e) => {
            let prec = e.prec();
            let rel = match CertifiedReal::from_decimal_str(reference, prec) {
                Ok(r) => {
                    if e.certified_lt(&r) {
                        "<"
                    } else if e.certified_gt(&r) {
                        ">"
                    } else {
                        "~"
                    }
                }
                Err(_) => "?",
            };
            (eps_str(e), rel)
        }
        None => (String::new(), "?"),
    };
    AggregateRow {
        cases: summary.cases,
        failures: summary.failures,
        bound_max: summary.bound_max().to_string(),
        bound_max_case: summary.bound_max_label(),
        eps_min,
        eps_min_case: summary.eps_min_label(),
        eps_min_q_index: summary.eps_min_q_index(),
        q_index_histogram: summary.q_histogram.clone(),
        reference_eps: reference.to_string(),
        eps_min_vs_reference: relation.to_string(),
    }
}

fn round1_report(r1: &Round1Outcome) -> RoundReport {
    let cases: Vec<CaseRow> = r1.dp_cases.iter().filter_map(case_row).collect();
    let legendre = match &r1.legendre {
        ReductionOutcome::Bound {
            value,
            certificate: Certificate::Legendre {
                n_index, q, a_max, ..
            },
        } => Some(LegendreRow {
            n_index: *n_index,
            q: q.to_string(),
            a_max: a_max.to_string(),
            bound: value.to_string(),
        }),
        _ => None,
    };
    RoundReport {
        round: 1,
        method: "Dujella-Petho reduction per leading digit; Legendre criterion for d1=9 (mu=0)"
            .into(),
        bound: r1.ell_max.to_string(),
        cases: Some(cases),
        legendre,
        aggregate: Some(aggregate_row(&r1.summary, REFERENCE_EPS[0])),
        lattice_stages: None,
    }
}

fn lattice_rows(branch: &LatticeBranch) -> Vec<LatticeStageRow> {
    branch
        .stages
        .iter()
        .map(|s| LatticeStageRow {
            x1: s.x1.to_string(),
            x2: s.x2.to_string(),
            c: s.data.c.to_string(),
            rejected_c: s.rejected_c.iter().map(|c| c.to_string()).collect(),
            d_lambda_sq: rational_sci(&s.data.d_lambda_sq),
            t: rational_sci(&s.data.t),
            condition_ok: s.data.bound.is_some(),
            lower_bound: s.data.bound.as_ref().map(eps_str).unwrap_or_default(),
            m_bound: s.m_bound.to_string(),
        })
        .collect()
}

fn config_echo(cfg: &crate::pipeline::PipelineConfig, effective: u32) -> ConfigEcho {
    ConfigEcho {
        n_low_max: cfg.n_low_max,
        precision_digits: cfg.precision_digits,
        effective_precision: effective,
        m_round1: cfg.m_round1.to_string(),
        c_lll: cfg.c_lll.to_string(),
        output_format: cfg.output_format,
    }
}

fn solution_rows(solutions: &[crate::pattern::PatternSolution]) -> Vec<SolutionRow> {
    solutions
        .iter()
        .map(|s| SolutionRow {
            n: s.n as u64,
            d1: s.params.d1,
            d2: s.params.d2,
            ell: s.params.ell,
            m: s.params.m,
            value: crate::pattern::compose(&s.params)
                .map(|v| v.to_string())
                .unwrap_or_default(),
        })
        .collect()
}

fn initial_bounds_report(initial: &crate::bounds::InitialBounds) -> InitialBoundsReport {
    InitialBoundsReport {
        n_bound: initial.n_bound.to_string(),
        two_ell_plus_m_bound: initial.two_ell_plus_m_bound.to_string(),
        ell_coeff_of_one_plus_log_n: initial.ell_bound_coeff.sci_str(10),
        m_coeff_of_one_plus_log_n_sq: initial.m_bound_coeff.sci_str(10),
        constants: initial
            .published_constant_audit()
            .iter()
            .map(|a| ConstantRow {
                name: a.name.to_string(),
                computed: a.computed.sci_str(8),
                ceiling: bigint_sci(&a.ceiling),
                within: a.within,
            })
            .collect(),
    }
}

/// Builds the serializable report from a typed pipeline outcome.
pub fn build_report(out: &PipelineOutcome) -> VerificationReport {
    let config = config_echo(&out.config, out.effective_precision);
    let solutions = Some(solution_rows(&out.solutions));
    let initial_bounds = initial_bounds_report(&out.initial);

    let rounds = vec![
        round1_report(&out.round1),
        RoundReport {
            round: 2,
            method: "Dujella-Petho reduction per (d1,d2,l); iterated 2D lattice lower bound \
                     for the degenerate (1,0,1) case (mu=0)"
                .into(),
            bound: out.round2.m_max.to_string(),
            cases: None,
            legendre: None,
            aggregate: Some(aggregate_row(&out.round2.summary, REFERENCE_EPS[1])),
            lattice_stages: Some(lattice_rows(&out.round2.lattice)),
        },
        RoundReport {
            round: 3,
            method: "Dujella-Petho reduction per (d1,d2,l,m) with B = alpha".into(),
            bound: out.round3.n_max_reduced.to_string(),
            cases: None,
            legendre: None,
            aggregate: Some(aggregate_row(&out.round3.summary, REFERENCE_EPS[2])),
            lattice_stages: None,
        },
    ];

    let mut notes = Vec::new();
    for p in &out.exhausted_precisions {
        notes.push(format!(
            "precision exhausted at {p} digits; retried at doubled precision"
        ));
    }
    notes.push(format!(
        "low-range window n <= {} strictly covers the reduced bound n <= {}",
        out.config.n_low_max, out.round3.n_max_reduced
    ));
    if let ReductionOutcome::Bound { value, .. } = &out.round1.legendre {
        notes.push(format!(
            "round-1 branch bounds: Dujella-Petho {}, Legendre {}; combined l <= {}",
            out.round1.summary.bound_max(),
            value,
            out.round1.ell_max
        ));
    }
    notes.push(format!(
        "lattice branch final m <= {} after {} stage(s)",
        out.round2.lattice.m_bound,
        out.round2.lattice.stages.len()
    ));
    if out.m_dominates {
        notes.push(
            "M dominates the derived 2l+m bound; reduction hypotheses cover all candidates".into(),
        );
    } else {
        notes.push(format!(
            "M = {} is below the derived 2l+m bound {}; bounds computed but not conclusive",
            out.config.m_round1, out.initial.two_ell_plus_m_bound
        ));
    }
    notes.push("assumptions l >= 2, m >= 2, n > low range are subsumed by the final bounds".into());

    VerificationReport {
        config,
        solutions,
        initial_bounds: Some(initial_bounds),
        rounds,
        verdict: if out.verdict_verified {
            "verified".into()
        } else {
            "inconclusive".into()
        },
        notes,
    }
}

/// Search-only report: solutions filled, everything else empty.
pub fn build_search_report(
    cfg: &crate::pipeline::PipelineConfig,
    effective: u32,
    solutions: &[crate::pattern::PatternSolution],
) -> VerificationReport {
    VerificationReport {
        config: config_echo(cfg, effective),
        solutions: Some(solution_rows(solutions)),
        initial_bounds: None,
        rounds: Vec::new(),
        verdict: "inconclusive".into(),
        notes: vec![format!(
            "phase: low-range search only, 0 <= n <= {}",
            cfg.n_low_max
        )],
    }
}

/// Bounds-only report.
pub fn build_bounds_report(
    cfg: &crate::pipeline::PipelineConfig,
    effective: u32,
    initial: &crate::bounds::InitialBounds,
    exhausted: &[u32],
) -> VerificationReport {
    let mut notes = vec!["phase: initial bound derivation only".to_string()];
    for p in exhausted {
        notes.push(format!(
            "precision exhausted at {p} digits; retried at doubled precision"
        ));
    }
    VerificationReport {
        config: config_echo(cfg, effective),
        solutions: None,
        initial_bounds: Some(initial_bounds_report(initial)),
        rounds: Vec::new(),
        verdict: "inconclusive".into(),
        notes,
    }
}

/// Reduction-only report (bounds plus the three rounds, no search).
#[allow(clippy::too_many_arguments)]
pub fn build_reduce_report(
    cfg: &crate::pipeline::PipelineConfig,
    effective: u32,
    initial: &crate::bounds::InitialBounds,
    r1: &Round1Outcome,
    r2: &crate::pipeline::Round2Outcome,
    r3: &crate::pipeline::Round3Outcome,
    m_dominates: bool,
    exhausted: &[u32],
) -> VerificationReport {
    let rounds = vec![
        round1_report(r1),
        RoundReport {
            round: 2,
            method: "Dujella-Petho reduction per (d1,d2,l); iterated 2D lattice lower bound \
                     for the degenerate (1,0,1) case (mu=0)"
                .into(),
            bound: r2.m_max.to_string(),
            cases: None,
            legendre: None,
            aggregate: Some(aggregate_row(&r2.summary, REFERENCE_EPS[1])),
            lattice_stages: Some(lattice_rows(&r2.lattice)),
        },
        RoundReport {
            round: 3,
            method: "Dujella-Petho reduction per (d1,d2,l,m) with B = alpha".into(),
            bound: r3.n_max_reduced.to_string(),
            cases: None,
            legendre: None,
            aggregate: Some(aggregate_row(&r3.summary, REFERENCE_EPS[2])),
            lattice_stages: None,
        },
    ];
    let mut notes = vec!["phase: reduction rounds only (no search)".to_string()];
    for p in exhausted {
        notes.push(format!(
            "precision exhausted at {p} digits; retried at doubled precision"
        ));
    }
    if !m_dominates {
        notes.push(format!(
            "M = {} is below the derived 2l+m bound {}; bounds computed but not conclusive",
            cfg.m_round1, initial.two_ell_plus_m_bound
        ));
    }
    VerificationReport {
        config: config_echo(cfg, effective),
        solutions: None,
        initial_bounds: Some(initial_bounds_report(initial)),
        rounds,
        verdict: "inconclusive".into(),
        notes,
    }
}

/// Pretty JSON with a trailing newline.
pub fn render_json(report: &VerificationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// "1e51" for powers of ten, scientific for other long integers.
fn compress_decimal(s: &str) -> String {
    if s.len() > 9 {
        if let Some(stripped) = s.strip_prefix('1') {
            if stripped.bytes().all(|b| b == b'0') {
                return format!("1e{}", stripped.len());
            }
        }
        return format!("{}.{}e{}", &s[..1], &s[1..5], s.len() - 1);
    }
    s.to_string()
}

/// Human-readable proof transcript.
pub fn render_text(report: &VerificationReport) -> String {
    let mut t = String::new();
    let line = "=".repeat(64);
    t.push_str(&format!(
        "{line}\nTribonacci-Lucas palindromic-repdigit verification\n{line}\n"
    ));
    t.push_str(&format!(
        "config: n_low_max={} precision={} (effective {}) M={} C={}\n\n",
        report.config.n_low_max,
        report.config.precision_digits,
        report.config.effective_precision,
        compress_decimal(&report.config.m_round1),
        compress_decimal(&report.config.c_lll)
    ));
    if let Some(solutions) = &report.solutions {
        t.push_str(&format!(
            "low-range search over 0 <= n <= {}: {} solution(s)\n",
            report.config.n_low_max,
            solutions.len()
        ));
        for s in solutions {
            t.push_str(&format!(
                "  n={}: S_n = {} matches pattern d1={} d2={} l={} m={}\n",
                s.n, s.value, s.d1, s.d2, s.ell, s.m
            ));
        }
    }
    if let Some(ib) = &report.initial_bounds {
        t.push_str("\ninitial bounds (Matveev-type linear forms in three logarithms,\nthen the Guzman Sanchez-Luca shave):\n");
        for c in &ib.constants {
            t.push_str(&format!(
                "  {:<22} {:>14}  <= {:<10} {}\n",
                c.name,
                c.computed,
                c.ceiling,
                if c.within { "ok" } else { "EXCEEDED" }
            ));
        }
        t.push_str(&format!(
            "  n < {}   2l+m < {}\n",
            compress_decimal(&ib.n_bound),
            compress_decimal(&ib.two_ell_plus_m_bound)
        ));
    }
    for r in &report.rounds {
        t.push_str(&format!(
            "\nround {} [{}]: bound {}\n",
            r.round, r.method, r.bound
        ));
        if let Some(cases) = &r.cases {
            for c in cases {
                t.push_str(&format!(
                    "  {:<10} eps={} bound {} (convergent {} after skipping {})\n",
                    c.case, c.epsilon, c.bound, c.q_index, c.skipped_convergents
                ));
            }
        }
        if let Some(l) = &r.legendre {
            t.push_str(&format!(
                "  d1=9 via Legendre: a(M)={} at index {}, bound {}\n",
                l.a_max, l.n_index, l.bound
            ));
        }
        if let Some(a) = &r.aggregate {
            t.push_str(&format!(
                "  {} case(s), {} failure(s); eps_min={} at {} (convergent {});\n  max bound {} at {}; eps_min {} reference {}\n",
                a.cases,
                a.failures,
                a.eps_min,
                a.eps_min_case,
                a.eps_min_q_index,
                a.bound_max,
                a.bound_max_case,
                a.eps_min_vs_reference,
                a.reference_eps
            ));
        }
        if let Some(stages) = &r.lattice_stages {
            for (i, s) in stages.iter().enumerate() {
                t.push_str(&format!(
                    "  lattice stage {}: X1={} X2={} C={}{} d^2={} T={} bound={} m<={}\n",
                    i,
                    compress_decimal(&s.x1),
                    compress_decimal(&s.x2),
                    compress_decimal(&s.c),
                    if s.rejected_c.is_empty() {
                        String::new()
                    } else {
                        format!(" ({} C value(s) rejected)", s.rejected_c.len())
                    },
                    s.d_lambda_sq,
                    s.t,
                    s.lower_bound,
                    s.m_bound
                ));
            }
        }
    }
    t.push_str(&format!("\nverdict: {}\n\nnotes:\n", report.verdict));
    for n in &report.notes {
        t.push_str(&format!("  - {n}\n"));
    }
    t
}
