//! Entropy inequalities as signed margins; a margin ≥ 0 means the inequality holds.

use rand::Rng;

use super::random::{random_state, random_unitary};
use super::state::union;
use super::{PureState, Register, RegisterLayout};
use crate::error::{Error, Result};

/// A random state split into named parts X, Y, Z, W (Z and W may be empty;
/// registers outside every part are traced out).
#[derive(Debug, Clone)]
pub struct Parts {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub w: Vec<String>,
}

/// A Haar-random state on 4..=8 single- or two-qubit registers (≤ `max_qubits`
/// total) with a random assignment of registers to parts.
pub fn random_instance<R: Rng + ?Sized>(
    max_qubits: usize,
    rng: &mut R,
) -> Result<(PureState, Parts)> {
    if max_qubits < 4 {
        return Err(Error::Invalid("need at least 4 qubits".into()));
    }
    let mut regs = Vec::new();
    let mut used = 0;
    while used < max_qubits && (regs.len() < 4 || rng.random_bool(0.6)) {
        let w = if max_qubits - used >= 2 && rng.random_bool(0.3) {
            2
        } else {
            1
        };
        regs.push(Register::new(format!("Q{}", regs.len()), w));
        used += w;
    }
    let names: Vec<String> = regs.iter().map(|r| r.name.clone()).collect();
    let layout = RegisterLayout::new(regs)?;
    let mut parts = Parts {
        x: vec![names[0].clone()],
        y: vec![names[1].clone()],
        z: Vec::new(),
        w: Vec::new(),
    };
    for name in &names[2..] {
        match rng.random_range(0..5) {
            0 => parts.x.push(name.clone()),
            1 => parts.y.push(name.clone()),
            2 => parts.z.push(name.clone()),
            3 => parts.w.push(name.clone()),
            _ => {}
        }
    }
    Ok((random_state(layout, rng), parts))
}

/// I(X:Y|Z), nonnegative by strong subadditivity.
pub fn ssa_margin(s: &PureState, p: &Parts) -> Result<f64> {
    s.conditional_mutual_information(&p.x, &p.y, &p.z)
}

/// I(X:WY|Z) − I(X:Y|Z).
pub fn dpi_margin(s: &PureState, p: &Parts) -> Result<f64> {
    let wy = union(&p.w, &p.y);
    Ok(s.conditional_mutual_information(&p.x, &wy, &p.z)?
        - s.conditional_mutual_information(&p.x, &p.y, &p.z)?)
}

/// 2H(W) + I(X:Y|Z) − I(X:WY|Z).
pub fn mi_increase_margin(s: &PureState, p: &Parts) -> Result<f64> {
    let wy = union(&p.w, &p.y);
    let hw = if p.w.is_empty() {
        0.0
    } else {
        s.entropy(&p.w)?
    };
    Ok(
        2.0 * hw + s.conditional_mutual_information(&p.x, &p.y, &p.z)?
            - s.conditional_mutual_information(&p.x, &wy, &p.z)?,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    X,
    Y,
    Z,
}

/// Largest change of I(X:Y|Z) after attaching a fresh |0⟩ qubit to the part
/// in `slot` and applying a Haar-random unitary to that part.
pub fn isometry_defect<R: Rng + ?Sized>(
    s: &PureState,
    p: &Parts,
    slot: Slot,
    rng: &mut R,
) -> Result<f64> {
    const ANCILLA: &str = "E";
    let before = ssa_margin(s, p)?;
    let anc = PureState::zero(RegisterLayout::new(vec![Register::new(ANCILLA, 1)])?);
    let mut t = s.tensor(&anc)?;
    let mut q = p.clone();
    let part = match slot {
        Slot::X => &mut q.x,
        Slot::Y => &mut q.y,
        Slot::Z => &mut q.z,
    };
    part.push(ANCILLA.into());
    let qubits = t.layout().qubits_of_set(part)?;
    let u = random_unitary(1 << qubits.len(), rng);
    t.apply_matrix(&qubits, None, &u)?;
    Ok((ssa_margin(&t, &q)? - before).abs())
}
