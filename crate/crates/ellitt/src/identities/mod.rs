//! Registry of identity checks.
//!
//! Every entry pairs a closed-form or series/integral identity with a
//! randomized numerical check: draw parameters from a seeded generator,
//! evaluate both sides independently, and compare at an explicit tolerance.
//! Entries are classified by [`Status`]:
//!
//! * `Proved` entries must pass every trial; a failure is a build-breaking
//!   bug in either the identity transcription or the underlying evaluators.
//! * `Proportionality` entries assert that a ratio of two expressions is
//!   independent of the indexing partitions; the constant is measured at the
//!   empty partition and every other draw must reproduce it.
//! * `Conjecture` entries gather numerical evidence only; their reports are
//!   emitted but never gate a run.
//!
//! Checks are deterministic: the per-trial generator seed is derived from the
//! master seed, the case id, and the trial index, so a fixed configuration
//! always produces byte-identical reports.
//!
//! Negative controls: cases with `control == true` wire a multiplicative
//! perturbation (`RunOptions::perturb`) into a constraint the identity
//! depends on (a balancing condition, an inverse pair, a termination
//! product). A control run perturbs by `1e-3` and must *fail* by at least
//! `1e3` times the case tolerance; this guards against checks that would
//! pass vacuously.

pub mod util;

mod integrals;
mod littlewood;
mod series;
mod special;

use crate::hp::{NumError, PrecisionContext, Result, C};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use std::time::Instant;

/// Proof status of a registry entry.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Proved,
    Proportionality,
    Conjecture,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Proportionality => "proportionality",
            Status::Conjecture => "conjecture",
        }
    }

    /// Whether failures of this entry should fail the run.
    pub fn gates(self) -> bool {
        !matches!(self, Status::Conjecture)
    }
}

/// Outcome classification for a single trial or control run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Pass,
    Fail,
    /// The drawn configuration cannot be evaluated (contour pinched,
    /// quadrature out of budget, degenerate parameters); not a failure.
    Infeasible,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Infeasible => "infeasible",
            Verdict::Skipped => "skipped",
        }
    }
}

/// What a single trial produced: two values to compare, or an explicit
/// error measure for deviation-style checks (vanishing scans, delta
/// functions) where a relative comparison against zero is meaningless.
pub struct TrialOutcome {
    pub lhs: C,
    pub rhs: C,
    /// When set, overrides the default relative-error comparison.
    pub err: Option<f64>,
    /// Key=value summary of the drawn parameters, for the report line.
    pub params: String,
}

impl TrialOutcome {
    pub fn pair(lhs: C, rhs: C, params: String) -> Self {
        TrialOutcome { lhs, rhs, err: None, params }
    }

    pub fn deviation(err: f64, ctx: &PrecisionContext, params: String) -> Self {
        TrialOutcome { lhs: ctx.zero(), rhs: ctx.zero(), err: Some(err), params }
    }
}

/// Runtime knobs shared by all checks.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub nodes_max_1d: usize,
    pub nodes_max_2d: usize,
    pub seed: u64,
    /// Overrides each case's default trial count when set.
    pub trials: Option<usize>,
    /// Multiplicative perturbation applied to a load-bearing constraint;
    /// zero for normal runs, nonzero only for negative controls.
    pub perturb: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            nodes_max_1d: 4096,
            nodes_max_2d: 1024,
            seed: 1,
            trials: None,
            perturb: 0.0,
        }
    }
}

pub type CheckFn = fn(&mut ChaCha8Rng, &RunOptions, &PrecisionContext) -> Result<TrialOutcome>;

/// A registry entry.
pub struct IdentityCase {
    pub id: &'static str,
    pub status: Status,
    /// One-line statement of what is being checked.
    pub description: &'static str,
    /// Per-trial error bound.
    pub tolerance: f64,
    /// Default number of randomized trials.
    pub trials: usize,
    /// Whether `RunOptions::perturb` is wired into this check (enables the
    /// negative control run).
    pub control: bool,
    pub run: CheckFn,
}

/// One line of a run report.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub case_id: String,
    pub status: Status,
    pub trial: usize,
    pub seed: u64,
    pub params: String,
    pub lhs: String,
    pub rhs: String,
    pub rel_err: f64,
    pub verdict: Verdict,
    pub millis: u128,
}

impl CheckReport {
    /// Self-describing single-line record.
    pub fn to_line(&self) -> String {
        format!(
            "case={} status={} trial={} seed={} verdict={} rel_err={:.6e} lhs={} rhs={} ms={} params=\"{}\"",
            self.case_id,
            self.status.as_str(),
            self.trial,
            self.seed,
            self.verdict.as_str(),
            self.rel_err,
            self.lhs,
            self.rhs,
            self.millis,
            self.params
        )
    }
}

/// FNV-1a over the case id and trial index, mixed with the master seed.
pub fn derive_seed(master: u64, id: &str, trial: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    for b in trial.to_le_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ master.rotate_left(17)
}

fn fmt_c(x: &C, ctx: &PrecisionContext) -> String {
    let re = x.real().to_f64();
    let im = x.imag().to_f64();
    let _ = ctx;
    format!("{re:.9e}{im:+.9e}i")
}

/// Runs one trial of `case` and renders the report line data.
pub fn run_trial(
    case: &IdentityCase,
    trial: usize,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> CheckReport {
    let seed = derive_seed(opts.seed, case.id, trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let outcome = (case.run)(&mut rng, opts, ctx);
    let millis = start.elapsed().as_millis();
    match outcome {
        Ok(out) => {
            let rel_err = out.err.unwrap_or_else(|| ctx.rel_err(&out.lhs, &out.rhs));
            let pass = rel_err.is_finite() && rel_err <= case.tolerance;
            CheckReport {
                case_id: case.id.to_string(),
                status: case.status,
                trial,
                seed,
                params: out.params,
                lhs: fmt_c(&out.lhs, ctx),
                rhs: fmt_c(&out.rhs, ctx),
                rel_err,
                verdict: if pass { Verdict::Pass } else { Verdict::Fail },
                millis,
            }
        }
        Err(NumError::Infeasible(msg)) => CheckReport {
            case_id: case.id.to_string(),
            status: case.status,
            trial,
            seed,
            params: msg,
            lhs: String::new(),
            rhs: String::new(),
            rel_err: f64::NAN,
            verdict: Verdict::Infeasible,
            millis,
        },
        Err(e) => CheckReport {
            case_id: case.id.to_string(),
            status: case.status,
            trial,
            seed,
            params: format!("error: {e}"),
            lhs: String::new(),
            rhs: String::new(),
            rel_err: f64::NAN,
            verdict: Verdict::Fail,
            millis,
        },
    }
}

/// Runs all trials of one case.
pub fn check_case(
    case: &IdentityCase,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Vec<CheckReport> {
    let trials = opts.trials.unwrap_or(case.trials);
    (0..trials).map(|i| run_trial(case, i, opts, ctx)).collect()
}

/// Negative control: perturb a load-bearing constraint by `1e-3` and demand
/// the check now fails by a wide margin (at least `1e3` times the case
/// tolerance). Passing means the control behaved as expected (the perturbed
/// identity was detected as broken).
pub fn run_control(
    case: &IdentityCase,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Option<CheckReport> {
    if !case.control {
        return None;
    }
    let mut copts = opts.clone();
    copts.perturb = 1e-3;
    let mut rep = run_trial(case, 0, &copts, ctx);
    rep.case_id = format!("{}.control", case.id);
    rep.verdict = match rep.verdict {
        Verdict::Pass => Verdict::Fail,
        Verdict::Fail => {
            if rep.rel_err.is_finite() && rep.rel_err >= 1e3 * case.tolerance {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        other => other,
    };
    Some(rep)
}

/// Report filter: all cases, one id, or one status class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Filter {
    All,
    Id(String),
    Status(Status),
}

impl Filter {
    /// Parses `""`, `"id=<case>"`, or `"status=<class>"`.
    pub fn parse(s: &str) -> std::result::Result<Filter, String> {
        if s.is_empty() || s == "all" {
            return Ok(Filter::All);
        }
        if let Some(id) = s.strip_prefix("id=") {
            return Ok(Filter::Id(id.to_string()));
        }
        if let Some(st) = s.strip_prefix("status=") {
            return match st {
                "proved" => Ok(Filter::Status(Status::Proved)),
                "proportionality" => Ok(Filter::Status(Status::Proportionality)),
                "conjecture" => Ok(Filter::Status(Status::Conjecture)),
                other => Err(format!(
                    "unknown status {other:?} (expected proved, proportionality, or conjecture)"
                )),
            };
        }
        Err(format!(
            "unknown filter {s:?} (expected \"all\", \"id=<case>\", or \"status=<class>\")"
        ))
    }

    pub fn admits(&self, case: &IdentityCase) -> bool {
        match self {
            Filter::All => true,
            Filter::Id(id) => case.id == id,
            Filter::Status(st) => case.status == *st,
        }
    }
}

/// The full registry, in a stable order.
pub fn registry() -> &'static [IdentityCase] {
    static REGISTRY: OnceLock<Vec<IdentityCase>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut cases = Vec::new();
        special::register(&mut cases);
        series::register(&mut cases);
        littlewood::register(&mut cases);
        integrals::register(&mut cases);
        cases
    })
}

pub fn find_case(id: &str) -> Option<&'static IdentityCase> {
    registry().iter().find(|c| c.id == id)
}

/// Runs the filtered registry (trials plus negative controls). The boolean
/// is `true` when no gating entry failed.
pub fn run_suite(
    filter: &Filter,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> (Vec<CheckReport>, bool) {
    let mut reports = Vec::new();
    let mut ok = true;
    for case in registry().iter().filter(|c| filter.admits(c)) {
        for rep in check_case(case, opts, ctx) {
            if case.status.gates() && rep.verdict == Verdict::Fail {
                ok = false;
            }
            reports.push(rep);
        }
        if let Some(rep) = run_control(case, opts, ctx) {
            if case.status.gates() && rep.verdict == Verdict::Fail {
                ok = false;
            }
            reports.push(rep);
        }
    }
    (reports, ok)
}
