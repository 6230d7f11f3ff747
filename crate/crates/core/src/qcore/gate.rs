use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const UNITARY_TOL: f64 = 1e-9;

/// A qubit addressed by register name and index within the register.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitRef {
    pub register: String,
    pub index: usize,
}

impl QubitRef {
    pub fn new(register: impl Into<String>, index: usize) -> Self {
        QubitRef {
            register: register.into(),
            index,
        }
    }
}

impl fmt::Display for QubitRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.register, self.index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    Z,
    S,
    T,
    Cnot,
    Cz,
    Ccnot,
    Swap,
    /// Explicit single-qubit unitary.
    U1(CMatrix),
    /// Explicit two-qubit unitary; the first target is the more significant qubit.
    U2(CMatrix),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::H
            | GateKind::X
            | GateKind::Z
            | GateKind::S
            | GateKind::T
            | GateKind::U1(_) => 1,
            GateKind::Cnot | GateKind::Cz | GateKind::Swap | GateKind::U2(_) => 2,
            GateKind::Ccnot => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Ccnot => "CCNOT",
            GateKind::Swap => "SWAP",
            GateKind::U1(_) => "U1",
            GateKind::U2(_) => "U2",
        }
    }

    /// Unitary matrix over the gate's targets (first target most significant).
    pub fn matrix(&self) -> CMatrix {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let r = |v: f64| Complex64::new(v, 0.0);
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            GateKind::H => CMatrix::from_row_slice(2, 2, &[r(s2), r(s2), r(s2), r(-s2)]),
            GateKind::X => CMatrix::from_row_slice(2, 2, &[r(0.), r(1.), r(1.), r(0.)]),
            GateKind::Z => CMatrix::from_row_slice(2, 2, &[r(1.), r(0.), r(0.), r(-1.)]),
            GateKind::S => CMatrix::from_row_slice(2, 2, &[r(1.), r(0.), r(0.), c(0., 1.)]),
            GateKind::T => CMatrix::from_row_slice(2, 2, &[r(1.), r(0.), r(0.), c(s2, s2)]),
            GateKind::Cnot => permutation(4, |i| if i >= 2 { i ^ 1 } else { i }),
            GateKind::Ccnot => permutation(8, |i| if i >= 6 { i ^ 1 } else { i }),
            GateKind::Swap => permutation(4, |i| ((i & 1) << 1) | (i >> 1)),
            GateKind::Cz => {
                let mut m = CMatrix::identity(4, 4);
                m[(3, 3)] = r(-1.0);
                m
            }
            GateKind::U1(m) | GateKind::U2(m) => m.clone(),
        }
    }
}

fn permutation(dim: usize, f: impl Fn(usize) -> usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(f(i), i)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Largest entry of |U†U − I|.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let p = m.adjoint() * m;
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// A gate with its targets and an optional control bit.
///
/// `control` names a qubit that must read 1 for the gate to act. When the
/// control register is not part of the state's layout it is resolved against
/// the classical inputs bound to the simulation; this is how circuits read the
/// read-only input registers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<QubitRef>,
    pub control: Option<QubitRef>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<QubitRef>) -> Self {
        Gate {
            kind,
            targets,
            control: None,
        }
    }

    pub fn controlled_by(mut self, control: QubitRef) -> Self {
        self.control = Some(control);
        self
    }

    pub fn single(kind: GateKind, reg: &str, idx: usize) -> Self {
        Gate::new(kind, vec![QubitRef::new(reg, idx)])
    }

    pub fn pair(kind: GateKind, a: (&str, usize), b: (&str, usize)) -> Self {
        Gate::new(kind, vec![QubitRef::new(a.0, a.1), QubitRef::new(b.0, b.1)])
    }

    /// Structural checks independent of any layout.
    pub fn check(&self) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::Invalid(format!(
                "{} expects {} target(s), got {}",
                self.kind.name(),
                self.kind.arity(),
                self.targets.len()
            )));
        }
        for (i, a) in self.targets.iter().enumerate() {
            if self.targets[i + 1..].contains(a) || self.control.as_ref() == Some(a) {
                return Err(Error::Invalid(format!("qubit {a} used twice in one gate")));
            }
        }
        match &self.kind {
            GateKind::U1(m) | GateKind::U2(m) => {
                let dim = 1 << self.kind.arity();
                if m.nrows() != dim || m.ncols() != dim {
                    return Err(Error::Invalid(format!(
                        "{} needs a {dim}x{dim} matrix",
                        self.kind.name()
                    )));
                }
                let defect = unitarity_defect(m);
                if defect > UNITARY_TOL {
                    return Err(Error::NotUnitary(defect));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Same gate with every register name passed through `f`.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Gate {
        Gate {
            kind: self.kind.clone(),
            targets: self
                .targets
                .iter()
                .map(|q| QubitRef::new(f(&q.register), q.index))
                .collect(),
            control: self
                .control
                .as_ref()
                .map(|q| QubitRef::new(f(&q.register), q.index)),
        }
    }
}
