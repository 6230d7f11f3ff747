//! Two-oracle query algorithms in the delay-d round model.
//!
//! The workspace is `I ⊗ B ⊗ W`: an index register `I` of ⌈log₂ n⌉ qubits
//! (at least one), the answer bit `B`, and auxiliary registers. A query to
//! `z` maps |i, b, w⟩ to |i, b ⊕ z_i, w⟩; indices are 0-based.

mod ir;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lineproto::OutputDistribution;
use crate::qcore::{Bits, ClassicalBits, Gate, PureState, QubitRef, Register, RegisterLayout};

pub const INDEX: &str = "I";
pub const ANSWER: &str = "B";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Oracle {
    X,
    Y,
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Oracle::X => "x",
            Oracle::Y => "y",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Gate(Gate),
    Query(Oracle),
}

pub fn index_width(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1) as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryAlgorithm {
    pub n: usize,
    /// Auxiliary registers, laid out after `I` and `B`.
    pub aux: Vec<Register>,
    pub steps: Vec<Step>,
    pub output: QubitRef,
}

impl QueryAlgorithm {
    pub fn new(n: usize, aux: Vec<Register>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        let alg = QueryAlgorithm {
            n,
            aux,
            steps: Vec::new(),
            output: QubitRef::new(ANSWER, 0),
        };
        alg.layout()?;
        Ok(alg)
    }

    pub fn layout(&self) -> Result<RegisterLayout> {
        let mut regs = vec![
            Register::new(INDEX, index_width(self.n)),
            Register::new(ANSWER, 1),
        ];
        regs.extend(self.aux.iter().cloned());
        RegisterLayout::new(regs)
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn gate(&mut self, g: Gate) {
        self.steps.push(Step::Gate(g));
    }

    pub fn query(&mut self, o: Oracle) {
        self.steps.push(Step::Query(o));
    }

    pub fn trace(&self) -> Vec<Oracle> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Query(o) => Some(*o),
                Step::Gate(_) => None,
            })
            .collect()
    }
}

/// Apply O_z to the `I`/`B` registers of `state`.
pub fn apply_query_oracle(state: &PureState, z: &Bits) -> Result<PureState> {
    let layout = state.layout();
    let index = layout.qubits_of(INDEX)?;
    let answer = layout.qubit(ANSWER, 0)?;
    let total = layout.total_qubits();
    let shift = |q: usize| total - 1 - q;
    let amps = state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (basis, a) in amps.iter().enumerate() {
        if *a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let i = index
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((basis >> shift(q)) & 1));
        if i >= z.len() {
            return Err(Error::Invalid(format!(
                "amplitude on index {i} outside [0, {})",
                z.len()
            )));
        }
        let target = if z.get(i) {
            basis ^ (1 << shift(answer))
        } else {
            basis
        };
        out[target] += a;
    }
    PureState::from_amplitudes(layout.clone(), out)
}

/// One delay-d round: consecutive queries to a single oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Round {
    pub oracle: Oracle,
    pub queries: usize,
}

/// Greedy round packing: a maximal run of `L` same-oracle queries costs ⌈L/d⌉ rounds.
pub fn validate_delay_structure(trace: &[Oracle], d: usize) -> Result<Vec<Round>> {
    if d == 0 {
        return Err(Error::Invalid("delay must be positive".into()));
    }
    let mut rounds = Vec::new();
    let mut i = 0;
    while i < trace.len() {
        let o = trace[i];
        let run = trace[i..].iter().take_while(|&&q| q == o).count();
        let mut left = run;
        while left > 0 {
            let k = left.min(d);
            rounds.push(Round {
                oracle: o,
                queries: k,
            });
            left -= k;
        }
        i += run;
    }
    Ok(rounds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueryAccount {
    pub d: usize,
    pub rounds: usize,
    pub queries_x: usize,
    pub queries_y: usize,
}

impl QueryAccount {
    pub fn from_trace(trace: &[Oracle], d: usize) -> Result<Self> {
        let rounds = validate_delay_structure(trace, d)?.len();
        let queries_x = trace.iter().filter(|&&o| o == Oracle::X).count();
        Ok(QueryAccount {
            d,
            rounds,
            queries_x,
            queries_y: trace.len() - queries_x,
        })
    }

    pub fn delay_d_complexity(&self) -> usize {
        self.d * self.rounds
    }

    pub const CSV_HEADER: &'static str = "rounds,queries_x,queries_y,delay_d_complexity";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.rounds,
            self.queries_x,
            self.queries_y,
            self.delay_d_complexity()
        )
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}\n", Self::CSV_HEADER, self.csv_row())
    }
}

/// Final workspace state after running every step on inputs `x`, `y`.
pub fn simulate_query_algorithm(alg: &QueryAlgorithm, x: &Bits, y: &Bits) -> Result<PureState> {
    if x.len() != alg.n || y.len() != alg.n {
        return Err(Error::Precondition(format!(
            "inputs must have length {}, got {} and {}",
            alg.n,
            x.len(),
            y.len()
        )));
    }
    let mut state = PureState::zero(alg.layout()?);
    let none = ClassicalBits::new();
    for step in &alg.steps {
        match step {
            Step::Gate(g) => state.apply_gate(g, &none)?,
            Step::Query(Oracle::X) => state = apply_query_oracle(&state, x)?,
            Step::Query(Oracle::Y) => state = apply_query_oracle(&state, y)?,
        }
    }
    Ok(state)
}

pub fn run_query_algorithm(
    alg: &QueryAlgorithm,
    x: &Bits,
    y: &Bits,
    d: usize,
) -> Result<(OutputDistribution, QueryAccount)> {
    let account = QueryAccount::from_trace(&alg.trace(), d)?;
    let state = simulate_query_algorithm(alg, x, y)?;
    let q = state
        .layout()
        .qubit(&alg.output.register, alg.output.index)?;
    Ok((
        OutputDistribution::from_p1(state.probability_one(q)),
        account,
    ))
}
