use nalgebra::DMatrix;
use num_complex::Complex64;

use super::bits::{Bits, ClassicalBits};
use super::density::{entropy_of_hermitian, DensityMatrix};
use super::gate::{CMatrix, Gate};
use super::layout::{Register, RegisterLayout};
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-9;

/// Dense pure state over a [`RegisterLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl PureState {
    /// All qubits in |0⟩.
    pub fn zero(layout: RegisterLayout) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.dimension()];
        amps[0] = Complex64::new(1.0, 0.0);
        PureState { layout, amps }
    }

    /// Computational basis state with the given register values; other registers are |0⟩.
    pub fn basis(layout: RegisterLayout, values: &[(&str, &Bits)]) -> Result<Self> {
        let mut index = 0usize;
        for (name, bits) in values {
            let qs = layout.qubits_of(name)?;
            if qs.len() != bits.len() {
                return Err(Error::Invalid(format!(
                    "register `{name}` has {} qubits but value has {} bits",
                    qs.len(),
                    bits.len()
                )));
            }
            for (q, &b) in qs.iter().zip(&bits.0) {
                if b {
                    index |= 1 << layout.shift(*q);
                }
            }
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.dimension()];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(PureState { layout, amps })
    }

    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dimension() {
            return Err(Error::Invalid(format!(
                "expected {} amplitudes, got {}",
                layout.dimension(),
                amps.len()
            )));
        }
        let s = PureState { layout, amps };
        let n = s.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Invalid(format!("state norm² is {n}")));
        }
        Ok(s)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest amplitude-wise deviation; layouts must match exactly.
    pub fn max_abs_diff(&self, other: &PureState) -> Result<f64> {
        if self.layout != other.layout {
            return Err(Error::Invalid("layouts differ".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Apply a gate. Controls on registers missing from the layout are read from `inputs`.
    pub fn apply_gate(&mut self, gate: &Gate, inputs: &ClassicalBits) -> Result<()> {
        gate.check()?;
        let qubits = gate
            .targets
            .iter()
            .map(|q| self.layout.qubit(&q.register, q.index))
            .collect::<Result<Vec<_>>>()?;
        let control = match &gate.control {
            None => None,
            Some(c) if self.layout.contains(&c.register) => {
                Some(self.layout.qubit(&c.register, c.index)?)
            }
            Some(c) => match inputs.get(&c.register, c.index) {
                Some(true) => None,
                Some(false) => return Ok(()),
                None => return Err(Error::UnknownRegister(c.register.clone())),
            },
        };
        self.apply_matrix(&qubits, control, &gate.kind.matrix())
    }

    /// Apply a 2^k × 2^k unitary to `qubits` (first = most significant), optionally controlled.
    pub fn apply_matrix(
        &mut self,
        qubits: &[usize],
        control: Option<usize>,
        m: &CMatrix,
    ) -> Result<()> {
        let k = qubits.len();
        let dim = 1usize << k;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::Invalid(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                m.nrows(),
                m.ncols()
            )));
        }
        let total = self.layout.total_qubits();
        if qubits.iter().chain(control.iter()).any(|&q| q >= total) {
            return Err(Error::Invalid("qubit position out of range".into()));
        }
        let shifts: Vec<usize> = qubits.iter().map(|&q| self.layout.shift(q)).collect();
        let mask = shifts.iter().fold(0usize, |acc, s| acc | (1 << s));
        let cmask = control.map(|c| 1usize << self.layout.shift(c)).unwrap_or(0);
        if mask & cmask != 0 {
            return Err(Error::Invalid("control coincides with a target".into()));
        }
        let offsets: Vec<usize> = (0..dim)
            .map(|a| {
                (0..k)
                    .filter(|j| (a >> (k - 1 - j)) & 1 == 1)
                    .fold(0usize, |acc, j| acc | (1 << shifts[j]))
            })
            .collect();
        let mut buf = vec![Complex64::new(0.0, 0.0); dim];
        for base in 0..self.amps.len() {
            if base & mask != 0 || base & cmask != cmask {
                continue;
            }
            for (a, off) in offsets.iter().enumerate() {
                buf[a] = self.amps[base | off];
            }
            for (row, off) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (col, v) in buf.iter().enumerate() {
                    acc += m[(row, col)] * v;
                }
                self.amps[base | off] = acc;
            }
        }
        Ok(())
    }

    /// Exchange the contents of two registers of equal width.
    pub fn swap_registers(&mut self, a: &str, b: &str) -> Result<()> {
        let qa = self.layout.qubits_of(a)?;
        let qb = self.layout.qubits_of(b)?;
        if qa.len() != qb.len() {
            return Err(Error::Invalid(format!(
                "cannot swap `{a}` and `{b}`: widths differ"
            )));
        }
        let swap = super::gate::GateKind::Swap.matrix();
        for (x, y) in qa.into_iter().zip(qb) {
            self.apply_matrix(&[x, y], None, &swap)?;
        }
        Ok(())
    }

    /// Probability that measuring `qubit` yields 1.
    pub fn probability_one(&self, qubit: usize) -> f64 {
        let bit = 1usize << self.layout.shift(qubit);
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Probability of each value of a register.
    pub fn register_distribution(&self, name: &str) -> Result<Vec<f64>> {
        let qs = self.layout.qubits_of(name)?;
        let shifts: Vec<usize> = qs.iter().map(|&q| self.layout.shift(q)).collect();
        let mut out = vec![0.0; 1 << qs.len()];
        for (i, a) in self.amps.iter().enumerate() {
            out[gather(i, &shifts)] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Tensor product; `other`'s registers come after this state's.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let layout = self.layout.concat(&other.layout)?;
        let mut amps = Vec::with_capacity(layout.dimension());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(PureState { layout, amps })
    }

    /// Same state with registers permuted into `target`'s order.
    ///
    /// `target` must contain exactly the same registers with the same widths.
    pub fn reorder(&self, target: &RegisterLayout) -> Result<PureState> {
        let mut mine: Vec<&Register> = self.layout.registers().iter().collect();
        let mut theirs: Vec<&Register> = target.registers().iter().collect();
        mine.sort_by(|a, b| a.name.cmp(&b.name));
        theirs.sort_by(|a, b| a.name.cmp(&b.name));
        if mine != theirs {
            return Err(Error::Invalid("register sets differ".into()));
        }
        // For each target qubit, the shift it occupies in the source index.
        let total = target.total_qubits();
        let mut src_shift = vec![0usize; total];
        for r in target.registers() {
            let tq = target.qubits_of(&r.name)?;
            let sq = self.layout.qubits_of(&r.name)?;
            for (t, s) in tq.into_iter().zip(sq) {
                src_shift[t] = self.layout.shift(s);
            }
        }
        let shifts: Vec<usize> = (0..total).map(|t| src_shift[t]).collect();
        let mut amps = vec![Complex64::new(0.0, 0.0); target.dimension()];
        for (ti, slot) in amps.iter_mut().enumerate() {
            let mut si = 0usize;
            for (t, s) in shifts.iter().enumerate() {
                if (ti >> (total - 1 - t)) & 1 == 1 {
                    si |= 1 << s;
                }
            }
            *slot = self.amps[si];
        }
        Ok(PureState {
            layout: target.clone(),
            amps,
        })
    }

    /// Amplitude matrix with rows indexed by `keep` qubits and columns by the rest.
    pub(crate) fn split(&self, keep: &[usize]) -> CMatrix {
        let total = self.layout.total_qubits();
        let keep_shifts: Vec<usize> = keep.iter().map(|&q| self.layout.shift(q)).collect();
        let rest_shifts: Vec<usize> = (0..total)
            .filter(|q| !keep.contains(q))
            .map(|q| self.layout.shift(q))
            .collect();
        let mut m = DMatrix::zeros(1 << keep_shifts.len(), 1 << rest_shifts.len());
        for (i, a) in self.amps.iter().enumerate() {
            m[(gather(i, &keep_shifts), gather(i, &rest_shifts))] = *a;
        }
        m
    }

    /// Reduced density matrix on `keep`, registers in layout order.
    pub fn reduced_density<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        let layout = self.layout.restrict(keep)?;
        let qs = self.layout.qubits_of_set(keep)?;
        let psi = self.split(&qs);
        let rho = &psi * psi.adjoint();
        Ok(DensityMatrix::from_parts_unchecked(layout, rho))
    }

    pub fn to_density(&self) -> DensityMatrix {
        let v = CMatrix::from_column_slice(self.amps.len(), 1, &self.amps);
        DensityMatrix::from_parts_unchecked(self.layout.clone(), &v * v.adjoint())
    }

    /// Von Neumann entropy (bits) of the registers in `part`.
    ///
    /// Computed on whichever side of the bipartition is smaller; both sides of a
    /// pure state have equal entropy.
    pub fn entropy<S: AsRef<str>>(&self, part: &[S]) -> Result<f64> {
        let qs = self.layout.qubits_of_set(part)?;
        let total = self.layout.total_qubits();
        if qs.is_empty() || qs.len() == total {
            return Ok(0.0);
        }
        let psi = if qs.len() <= total - qs.len() {
            self.split(&qs)
        } else {
            let rest: Vec<usize> = (0..total).filter(|q| !qs.contains(q)).collect();
            self.split(&rest)
        };
        entropy_of_hermitian(&(&psi * psi.adjoint()))
    }

    pub fn mutual_information<S: AsRef<str>, T: AsRef<str>>(
        &self,
        x: &[S],
        y: &[T],
    ) -> Result<f64> {
        disjoint(x, y)?;
        let xy = union(x, y);
        Ok(self.entropy(x)? + self.entropy(y)? - self.entropy(&xy)?)
    }

    /// I(X:Y|Z) = H(XZ) + H(YZ) − H(XYZ) − H(Z).
    pub fn conditional_mutual_information<S: AsRef<str>, T: AsRef<str>, U: AsRef<str>>(
        &self,
        x: &[S],
        y: &[T],
        z: &[U],
    ) -> Result<f64> {
        disjoint(x, y)?;
        disjoint(x, z)?;
        disjoint(y, z)?;
        let xz = union(x, z);
        let yz = union(y, z);
        let xyz = union(&xz, y);
        Ok(self.entropy(&xz)? + self.entropy(&yz)? - self.entropy(&xyz)? - self.entropy(z)?)
    }
}

pub(crate) fn gather(index: usize, shifts: &[usize]) -> usize {
    shifts
        .iter()
        .fold(0usize, |acc, &s| (acc << 1) | ((index >> s) & 1))
}

pub(crate) fn union<S: AsRef<str>, T: AsRef<str>>(a: &[S], b: &[T]) -> Vec<String> {
    let mut out: Vec<String> = a.iter().map(|s| s.as_ref().to_string()).collect();
    for s in b {
        if !out.iter().any(|o| o == s.as_ref()) {
            out.push(s.as_ref().to_string());
        }
    }
    out
}

pub(crate) fn disjoint<S: AsRef<str>, T: AsRef<str>>(a: &[S], b: &[T]) -> Result<()> {
    for s in a {
        if b.iter().any(|t| t.as_ref() == s.as_ref()) {
            return Err(Error::Invalid(format!(
                "register `{}` appears in two parts",
                s.as_ref()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gate::GateKind;

    fn two_qubits() -> RegisterLayout {
        RegisterLayout::from_pairs(&[("a", 1), ("b", 1)]).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn x_flips_zero_to_one() {
        let mut s = PureState::zero(RegisterLayout::from_pairs(&[("q", 1)]).unwrap());
        s.apply_gate(&Gate::single(GateKind::X, "q", 0), &ClassicalBits::new())
            .unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0), c(1.0)]);
    }

    #[test]
    fn hadamard_is_an_involution() {
        let l = RegisterLayout::from_pairs(&[("q", 2)]).unwrap();
        let s0 = PureState::from_amplitudes(
            l,
            vec![
                c(0.5),
                Complex64::new(0.0, 0.5),
                c(-0.5),
                Complex64::new(0.5, 0.0),
            ],
        )
        .unwrap();
        let mut s = s0.clone();
        let h = Gate::single(GateKind::H, "q", 1);
        s.apply_gate(&h, &ClassicalBits::new()).unwrap();
        s.apply_gate(&h, &ClassicalBits::new()).unwrap();
        assert!(s.max_abs_diff(&s0).unwrap() < 1e-12);
    }

    #[test]
    fn cnot_makes_bell_pair() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut s =
            PureState::from_amplitudes(two_qubits(), vec![c(r), c(0.0), c(r), c(0.0)]).unwrap();
        s.apply_gate(
            &Gate::pair(GateKind::Cnot, ("a", 0), ("b", 0)),
            &ClassicalBits::new(),
        )
        .unwrap();
        let bell =
            PureState::from_amplitudes(two_qubits(), vec![c(r), c(0.0), c(0.0), c(r)]).unwrap();
        assert!(s.max_abs_diff(&bell).unwrap() < 1e-12);
    }

    #[test]
    fn classical_control_reads_bound_inputs() {
        let l = RegisterLayout::from_pairs(&[("q", 1)]).unwrap();
        let g =
            Gate::single(GateKind::X, "q", 0).controlled_by(crate::qcore::QubitRef::new("X", 1));
        let on = ClassicalBits::new().with("X", "01".parse().unwrap());
        let off = ClassicalBits::new().with("X", "10".parse().unwrap());
        let mut s = PureState::zero(l.clone());
        s.apply_gate(&g, &on).unwrap();
        assert!((s.probability_one(0) - 1.0).abs() < 1e-15);
        let mut s = PureState::zero(l.clone());
        s.apply_gate(&g, &off).unwrap();
        assert_eq!(s.probability_one(0), 0.0);
        let mut s = PureState::zero(l);
        assert!(s.apply_gate(&g, &ClassicalBits::new()).is_err());
    }

    #[test]
    fn quantum_control_when_register_present() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let l = RegisterLayout::from_pairs(&[("X", 1), ("q", 1)]).unwrap();
        let mut s =
            PureState::from_amplitudes(l.clone(), vec![c(r), c(0.0), c(r), c(0.0)]).unwrap();
        let g =
            Gate::single(GateKind::X, "q", 0).controlled_by(crate::qcore::QubitRef::new("X", 0));
        s.apply_gate(&g, &ClassicalBits::new()).unwrap();
        assert!((s.amplitudes()[3].re - r).abs() < 1e-12);
    }

    #[test]
    fn reorder_permutes_registers() {
        let l = RegisterLayout::from_pairs(&[("a", 1), ("b", 2)]).unwrap();
        let s = PureState::basis(
            l,
            &[("a", &"1".parse().unwrap()), ("b", &"01".parse().unwrap())],
        )
        .unwrap();
        let target = RegisterLayout::from_pairs(&[("b", 2), ("a", 1)]).unwrap();
        let t = s.reorder(&target).unwrap();
        // b=01, a=1 → index 0b011
        assert_eq!(t.amplitudes()[3], c(1.0));
        assert_eq!(t.reorder(s.layout()).unwrap(), s);
    }

    #[test]
    fn swap_registers_exchanges_contents() {
        let l = RegisterLayout::from_pairs(&[("a", 2), ("b", 2)]).unwrap();
        let mut s = PureState::basis(l.clone(), &[("a", &"10".parse().unwrap())]).unwrap();
        s.swap_registers("a", "b").unwrap();
        let want = PureState::basis(l, &[("b", &"10".parse().unwrap())]).unwrap();
        assert_eq!(s, want);
    }

    #[test]
    fn overlapping_parts_rejected() {
        let s = PureState::zero(two_qubits());
        assert!(s.mutual_information(&["a"], &["a"]).is_err());
        assert!(s
            .conditional_mutual_information(&["a"], &["b"], &["b"])
            .is_err());
    }
}
