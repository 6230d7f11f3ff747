use std::f64::consts::PI;
use std::fmt;

use super::params::{choose_t, round_cost, WalkConfig, WalkParams};
use super::search::SearchSchedule;
use super::walk::{checking_phase, setup, stationary_phase, WalkState};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::qcore::Bits;
use crate::querymodel::{validate_delay_structure, Oracle, QueryAccount};

/// Phases of the fixed-point search sequence
/// S_s(α_l)S_t(β_l)···S_s(α_1)S_t(β_1) with L = 2l + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointPhases {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Failure amplitude bound: success ≥ 1 − δ² whenever the marked weight is ≥ w.
    pub delta: f64,
}

fn chebyshev(l: usize, x: f64) -> f64 {
    if x >= 1.0 {
        (l as f64 * x.acosh()).cosh()
    } else {
        (l as f64 * x.acos()).cos()
    }
}

pub fn fixed_point_phases(l: usize, w: f64) -> Result<FixedPointPhases> {
    if l == 0 || !(w > 0.0 && w <= 1.0) {
        return Err(Error::Invalid(format!(
            "need l ≥ 1 and 0 < w ≤ 1, got l={l}, w={w}"
        )));
    }
    let len = 2 * l + 1;
    let gamma = (1.0 - w).sqrt();
    let s = w.sqrt();
    let alpha: Vec<f64> = (1..=l)
        .map(|j| 2.0 * f64::atan2(1.0, (2.0 * PI * j as f64 / len as f64).tan() * s))
        .collect();
    let beta = (1..=l).map(|j| -alpha[l - j]).collect();
    let delta = if gamma == 0.0 {
        0.0
    } else {
        1.0 / chebyshev(len, 1.0 / gamma)
    };
    Ok(FixedPointPhases { alpha, beta, delta })
}

/// Stage-one result: the walk state just before the subset register is measured.
#[derive(Debug, Clone)]
pub struct WalkSearch {
    pub params: WalkParams,
    pub checking: Option<SearchSchedule>,
    pub state: WalkState,
    /// Probability that the measured subset holds an index i with x_i = y_i = 1.
    pub p_marked: f64,
    pub trace: Vec<Oracle>,
}

impl WalkSearch {
    pub fn checking_queries(&self) -> usize {
        self.checking.as_ref().map_or(1, |s| s.queries())
    }
}

fn intersecting(x: &Bits, y: &Bits) -> bool {
    (0..x.len()).any(|i| x.get(i) && y.get(i))
}

/// Fixed-point walk search for a subset meeting {i : x_i = y_i = 1}.
///
/// Reflections about the stationary state are applied exactly; each one is
/// charged `walk_steps_per_iteration` Update steps (2 x-queries each) in the
/// trace. Checking applies its phase with the detection probability of the
/// small-error search at target c·√(t/n); `exact_checking` replaces it by a
/// perfect check.
pub fn mnrs_search_with(
    n: usize,
    t: usize,
    x: &Bits,
    y: &Bits,
    cfg: &WalkConfig,
    exact_checking: bool,
) -> Result<WalkSearch> {
    if y.len() != n {
        return Err(Error::Precondition(format!(
            "y has length {}, expected {n}",
            y.len()
        )));
    }
    let params = WalkParams::new(n, t, cfg)?;
    let checking = if exact_checking {
        None
    } else {
        Some(SearchSchedule::new(t, params.checking_error_target)?)
    };
    let phases = fixed_point_phases(params.iterations, params.eps)?;
    let (pi, setup_queries) = setup(x, n, t)?;
    let mut trace = vec![Oracle::X; setup_queries];
    let mut state = pi.clone();
    for (a, b) in phases.alpha.iter().zip(&phases.beta) {
        let (s, q) = checking_phase(&state, y, checking.as_ref(), *b);
        trace.extend(std::iter::repeat_n(
            Oracle::Y,
            if exact_checking { 1 } else { q },
        ));
        state = stationary_phase(&s, &pi, *a);
        trace.extend(std::iter::repeat_n(
            Oracle::X,
            2 * params.walk_steps_per_iteration,
        ));
    }
    let hits: Vec<bool> = (0..n).map(|i| x.get(i) && y.get(i)).collect();
    let p_marked = state
        .vertex_distribution()
        .iter()
        .enumerate()
        .filter(|(v, _)| state.space.members(*v).iter().any(|&i| hits[i]))
        .fold(0.0, |acc, (_, p)| acc + p);
    Ok(WalkSearch {
        params,
        checking,
        state,
        p_marked,
        trace,
    })
}

pub fn mnrs_search(n: usize, t: usize, x: &Bits, y: &Bits, cfg: &WalkConfig) -> Result<WalkSearch> {
    mnrs_search_with(n, t, x, y, cfg, false)
}

/// Outcome of the sequential check of one measured subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stage2 {
    pub found: Option<usize>,
    pub queries: usize,
    pub rounds: usize,
}

/// Query y at every element of `members` (t queries, ⌈t/d⌉ rounds) and return
/// the first element whose stored x-bit and queried y-bit are both 1.
pub fn stage2_verify(members: &[usize], stored: &[bool], y: &Bits, d: usize) -> Result<Stage2> {
    if members.len() != stored.len() || d == 0 {
        return Err(Error::Invalid(
            "stage 2 needs one stored bit per element and d ≥ 1".into(),
        ));
    }
    let found = members
        .iter()
        .zip(stored)
        .find(|(&i, &b)| b && y.get(i))
        .map(|(&i, _)| i);
    let trace = vec![Oracle::Y; members.len()];
    Ok(Stage2 {
        found,
        queries: members.len(),
        rounds: validate_delay_structure(&trace, d)?.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Intersecting,
    Disjoint,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Intersecting => "intersecting",
            Verdict::Disjoint => "disjoint",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisjointnessRun {
    pub n: usize,
    pub d: usize,
    pub params: WalkParams,
    pub intersecting: bool,
    /// Probability the algorithm answers "intersecting".
    pub p_report_intersecting: f64,
    pub p_success: f64,
    /// Mass on walk components whose stored bits disagree with x.
    pub bits_mismatch: f64,
    pub checking_queries: usize,
    pub stage1: QueryAccount,
    pub account: QueryAccount,
    pub trace: Vec<Oracle>,
    pub round_cost: f64,
}

impl DisjointnessRun {
    pub fn verdict(&self) -> Verdict {
        if self.p_report_intersecting >= 0.5 {
            Verdict::Intersecting
        } else {
            Verdict::Disjoint
        }
    }

    pub const CSV_HEADER: &'static str =
        "n,d,t,eps,delta,success_prob,queries_x,queries_y,rounds,round_cost";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.12},{:.12},{:.12},{},{},{},{:.12}",
            self.n,
            self.d,
            self.params.t,
            self.params.eps,
            self.params.delta,
            self.p_success,
            self.account.queries_x,
            self.account.queries_y,
            self.account.rounds,
            self.round_cost
        )
    }
}

pub fn disjointness_with_t(
    n: usize,
    d: usize,
    t: usize,
    x: &Bits,
    y: &Bits,
    cfg: &WalkConfig,
) -> Result<DisjointnessRun> {
    if d == 0 || d > n {
        return Err(Error::Invalid(format!("need 1 ≤ d ≤ n, got d={d}, n={n}")));
    }
    let search = mnrs_search(n, t, x, y, cfg)?;
    let stage1 = QueryAccount::from_trace(&search.trace, d)?;
    let sp = &search.state.space;
    let per_vertex = (1usize << t) * sp.coins();
    let mut p_report = 0.0;
    let mut stage2_queries = t;
    for (v, chunk) in search.state.amps.chunks(per_vertex).enumerate() {
        let members = sp.members(v);
        for (bits, block) in chunk.chunks(sp.coins()).enumerate() {
            let p: f64 = block.iter().map(|a| a.norm_sqr()).sum();
            if p == 0.0 {
                continue;
            }
            let stored: Vec<bool> = (0..t).map(|q| bits >> q & 1 == 1).collect();
            let s2 = stage2_verify(&members, &stored, y, d)?;
            stage2_queries = s2.queries;
            if let Some(i) = s2.found {
                // stored bits come from x; the confirmation is classical
                debug_assert!(y.get(i));
                if x.get(i) {
                    p_report += p;
                }
            }
        }
    }
    let mut trace = search.trace.clone();
    trace.extend(std::iter::repeat_n(Oracle::Y, stage2_queries));
    let truth = intersecting(x, y);
    let p_report = p_report.min(1.0);
    Ok(DisjointnessRun {
        n,
        d,
        params: search.params,
        intersecting: truth,
        p_report_intersecting: p_report,
        p_success: if truth { p_report } else { 1.0 - p_report },
        bits_mismatch: search.state.bits_mismatch(x),
        checking_queries: search.checking_queries(),
        stage1,
        account: QueryAccount::from_trace(&trace, d)?,
        trace,
        round_cost: round_cost(n, d, t)?,
    })
}

/// The two-stage algorithm with t = choose_t(n, d).
pub fn disjointness_delay_d(
    n: usize,
    d: usize,
    x: &Bits,
    y: &Bits,
    cfg: &WalkConfig,
) -> Result<DisjointnessRun> {
    disjointness_with_t(n, d, choose_t(n, d)?, x, y, cfg)
}

/// Aggregate of a run over all 4ⁿ input pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub n: usize,
    pub d: usize,
    pub t: usize,
    pub pairs: usize,
    /// Smallest success probability over intersecting pairs.
    pub min_success: f64,
    /// Largest probability of answering "intersecting" on a disjoint pair.
    pub max_false_positive: f64,
    pub max_bits_mismatch: f64,
    /// Whether every run's account matched the closed-form query counts.
    pub accounts_match: bool,
    pub account: QueryAccount,
}

impl SweepSummary {
    pub fn passes(&self) -> bool {
        self.min_success >= 2.0 / 3.0 && self.max_false_positive == 0.0 && self.accounts_match
    }
}

/// Expected stage-one counts: t + it·ws·2 x-queries and it·C_q y-queries.
pub fn expected_stage1(params: &WalkParams, checking_queries: usize) -> (usize, usize) {
    (
        params.t + params.iterations * params.walk_steps_per_iteration * 2,
        params.iterations * checking_queries,
    )
}

pub fn exhaustive_sweep(
    n: usize,
    d: usize,
    cfg: &WalkConfig,
    exec: Execution,
) -> Result<SweepSummary> {
    if n > 10 {
        return Err(Error::Invalid(format!(
            "exhaustive sweep limited to n ≤ 10, got {n}"
        )));
    }
    let t = choose_t(n, d)?;
    let pairs = 1usize << (2 * n);
    let runs = exec.map_range(pairs, |p| {
        let x = Bits::from_value((p >> n) as u64, n);
        let y = Bits::from_value((p & ((1 << n) - 1)) as u64, n);
        disjointness_with_t(n, d, t, &x, &y, cfg)
    });
    let mut summary = SweepSummary {
        n,
        d,
        t,
        pairs,
        min_success: 1.0,
        max_false_positive: 0.0,
        max_bits_mismatch: 0.0,
        accounts_match: true,
        account: QueryAccount::default(),
    };
    for run in runs {
        let run = run?;
        if run.intersecting {
            summary.min_success = summary.min_success.min(run.p_success);
        } else {
            summary.max_false_positive = summary.max_false_positive.max(run.p_report_intersecting);
        }
        summary.max_bits_mismatch = summary.max_bits_mismatch.max(run.bits_mismatch);
        let (ex, ey) = expected_stage1(&run.params, run.checking_queries);
        let packed = validate_delay_structure(&run.trace, d)?.len();
        summary.accounts_match &= run.stage1.queries_x == ex
            && run.stage1.queries_y == ey
            && run.account.queries_y == ey + t
            && run.account.rounds == packed;
        summary.account = run.account;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_is_found() {
        let ones = Bits::ones(5);
        let r = disjointness_delay_d(5, 2, &ones, &ones, &WalkConfig::default()).unwrap();
        assert!(r.p_success > 0.99, "{}", r.p_success);
        assert_eq!(r.verdict(), Verdict::Intersecting);
    }

    #[test]
    fn disjoint_pairs_never_report_intersecting() {
        let x = Bits(vec![true, false, true, false, true, false]);
        let y = Bits(vec![false, true, false, true, false, true]);
        let r = disjointness_delay_d(6, 2, &x, &y, &WalkConfig::default()).unwrap();
        assert_eq!(r.p_report_intersecting, 0.0);
        assert_eq!(r.p_success, 1.0);
    }

    #[test]
    fn stage2_rounds() {
        let y = Bits(vec![false, true, true, false]);
        let s = stage2_verify(&[0, 2], &[true, true], &y, 2).unwrap();
        assert_eq!(
            s,
            Stage2 {
                found: Some(2),
                queries: 2,
                rounds: 1
            }
        );
        let none = stage2_verify(&[0, 3], &[true, true], &y, 1).unwrap();
        assert_eq!(none.found, None);
        assert_eq!(none.rounds, 2);
    }

    #[test]
    fn fixed_point_guarantee() {
        // exact checking: success ≥ 1 − δ² for any marked set
        let x = Bits::ones(6);
        for ymask in 1..64u64 {
            let y = Bits::from_value(ymask, 6);
            let s = mnrs_search_with(6, 1, &x, &y, &WalkConfig::default(), true).unwrap();
            let ph = fixed_point_phases(s.params.iterations, s.params.eps).unwrap();
            assert!(
                s.p_marked >= 1.0 - ph.delta * ph.delta - 1e-9,
                "{ymask}: {}",
                s.p_marked
            );
        }
    }
}
