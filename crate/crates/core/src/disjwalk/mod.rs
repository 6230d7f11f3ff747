//! Two-stage Set Disjointness in the delay-d two-oracle model.
//!
//! Stage one searches the Johnson graph J(n,t) for a t-subset holding an
//! index with x_i = y_i = 1; stage two checks the measured subset
//! classically. Probabilities are computed from exact amplitudes.

mod algo;
mod params;
mod search;
mod walk;

pub use algo::{
    disjointness_delay_d, disjointness_with_t, exhaustive_sweep, expected_stage1,
    fixed_point_phases, mnrs_search, mnrs_search_with, stage2_verify, DisjointnessRun,
    FixedPointPhases, Stage2, SweepSummary, Verdict, WalkSearch,
};
pub use params::{
    binomial, choose_t, cube_regime, epsilon, round_cost, spectral_gap, spectral_gap_closed_form,
    spectral_gap_exact, subsets, WalkConfig, WalkParams, EXACT_GAP_MAX_VERTICES,
};
pub use search::{
    grover_distribution, grover_success, small_error_search, SearchOutcome, SearchSchedule,
};
pub use walk::{
    checking_phase, checking_reflection, coin_reflection, exchange, setup, stationary_phase,
    update_step, WalkSpace, WalkState,
};
