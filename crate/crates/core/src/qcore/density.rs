use nalgebra::linalg::SymmetricEigen;

use super::gate::CMatrix;
use super::layout::RegisterLayout;
use super::state::{disjoint, gather, union};
use crate::error::{Error, Result};

/// Eigenvalues below this magnitude are treated as zero in entropy sums.
pub const EIGEN_ZERO: f64 = 1e-12;
/// Negative eigenvalues down to −CLIP_TOL are clipped; anything lower is an error.
pub const CLIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: RegisterLayout,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validated constructor: Hermitian, unit trace, positive semidefinite (all within 1e-9).
    pub fn new(layout: RegisterLayout, matrix: CMatrix) -> Result<Self> {
        let dim = layout.dimension();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::NotDensity(format!(
                "matrix is {}x{}, layout needs {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_hermitian(&matrix)?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > CLIP_TOL || tr.im.abs() > CLIP_TOL {
            return Err(Error::NotDensity(format!("trace is {tr}")));
        }
        let rho = DensityMatrix { layout, matrix };
        rho.eigenvalues()?;
        Ok(rho)
    }

    pub(crate) fn from_parts_unchecked(layout: RegisterLayout, matrix: CMatrix) -> Self {
        DensityMatrix { layout, matrix }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Clipped eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Reduced state on `keep`, registers in the original order.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        let layout = self.layout.restrict(keep)?;
        let kept = self.layout.qubits_of_set(keep)?;
        let total = self.layout.total_qubits();
        let keep_shifts: Vec<usize> = kept.iter().map(|&q| self.layout.shift(q)).collect();
        let rest_shifts: Vec<usize> = (0..total)
            .filter(|q| !kept.contains(q))
            .map(|q| self.layout.shift(q))
            .collect();
        // Full index for each (kept, rest) pair.
        let dk = 1usize << keep_shifts.len();
        let dr = 1usize << rest_shifts.len();
        let mut full = vec![0usize; dk * dr];
        for i in 0..self.layout.dimension() {
            full[gather(i, &keep_shifts) * dr + gather(i, &rest_shifts)] = i;
        }
        let mut out = CMatrix::zeros(dk, dk);
        for a in 0..dk {
            for b in 0..dk {
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for r in 0..dr {
                    acc += self.matrix[(full[a * dr + r], full[b * dr + r])];
                }
                out[(a, b)] = acc;
            }
        }
        Ok(DensityMatrix::from_parts_unchecked(layout, out))
    }

    /// −Σ λ log₂ λ over eigenvalues above 1e-12.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        check_hermitian(&self.matrix)?;
        entropy_of_hermitian(&self.matrix)
    }

    pub fn entropy_of<S: AsRef<str>>(&self, part: &[S]) -> Result<f64> {
        if part.is_empty() {
            return Ok(0.0);
        }
        self.partial_trace(part)?.von_neumann_entropy()
    }

    pub fn mutual_information<S: AsRef<str>, T: AsRef<str>>(
        &self,
        x: &[S],
        y: &[T],
    ) -> Result<f64> {
        disjoint(x, y)?;
        let xy = union(x, y);
        Ok(self.entropy_of(x)? + self.entropy_of(y)? - self.entropy_of(&xy)?)
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
        Ok(self.entropy_of(&xz)? + self.entropy_of(&yz)?
            - self.entropy_of(&xyz)?
            - self.entropy_of(z)?)
    }
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > CLIP_TOL {
                return Err(Error::NotDensity(format!(
                    "not Hermitian at ({i},{j}): {d:.3e}"
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::new(m.clone());
    eig.eigenvalues
        .iter()
        .map(|&l| {
            if l < -CLIP_TOL {
                Err(Error::NotDensity(format!("negative eigenvalue {l:.3e}")))
            } else {
                Ok(l.max(0.0))
            }
        })
        .collect()
}

pub(crate) fn entropy_of_hermitian(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?
        .into_iter()
        .filter(|&l| l > EIGEN_ZERO)
        .map(|l| -l * l.log2())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{PureState, RegisterLayout};
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pair() -> RegisterLayout {
        RegisterLayout::from_pairs(&[("a", 1), ("b", 1)]).unwrap()
    }

    fn binary_entropy(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    fn diag(layout: RegisterLayout, d: &[f64]) -> DensityMatrix {
        let mut m = CMatrix::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = c(*v);
        }
        DensityMatrix::new(layout, m).unwrap()
    }

    #[test]
    fn bell_half_is_maximally_mixed() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::from_amplitudes(pair(), vec![c(r), c(0.), c(0.), c(r)]).unwrap();
        let rho = bell.to_density();
        for side in ["a", "b"] {
            let red = rho.partial_trace(&[side]).unwrap();
            assert!((red.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
            assert!((red.matrix()[(1, 1)].re - 0.5).abs() < 1e-12);
            assert!(red.matrix()[(0, 1)].norm() < 1e-12);
            assert!((red.von_neumann_entropy().unwrap() - 1.0).abs() < 1e-9);
        }
        assert!((rho.mutual_information(&["a"], &["b"]).unwrap() - 2.0).abs() < 1e-9);
        let all = rho.partial_trace(&["a", "b"]).unwrap();
        assert_eq!(&all, &rho);
    }

    #[test]
    fn unequal_superposition_reduces_to_diagonal() {
        let s = PureState::from_amplitudes(pair(), vec![c(0.5), c(0.), c(0.), c(0.75f64.sqrt())])
            .unwrap();
        let red = s.to_density().partial_trace(&["a"]).unwrap();
        assert!((red.matrix()[(0, 0)].re - 0.25).abs() < 1e-12);
        assert!((red.matrix()[(1, 1)].re - 0.75).abs() < 1e-12);
        let h = red.von_neumann_entropy().unwrap();
        assert!((h - binary_entropy(0.25)).abs() < 1e-6);
        assert!((h - 0.811278).abs() < 1e-6);
        // Pure-state shortcut agrees.
        assert!((s.entropy(&["b"]).unwrap() - h).abs() < 1e-12);
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = PureState::from_amplitudes(pair(), vec![c(r), c(0.), c(0.), c(r)]).unwrap();
        assert!(s.to_density().von_neumann_entropy().unwrap().abs() < 1e-9);
    }

    #[test]
    fn classical_correlations() {
        let l3 = RegisterLayout::from_pairs(&[("x", 1), ("y", 1), ("z", 1)]).unwrap();
        // product state → 0
        let prod = diag(pair(), &[0.25, 0.25, 0.25, 0.25]);
        assert!(prod.mutual_information(&["a"], &["b"]).unwrap().abs() < 1e-9);
        // perfectly correlated bit pair → 1
        let corr = diag(pair(), &[0.5, 0.0, 0.0, 0.5]);
        assert!((corr.mutual_information(&["a"], &["b"]).unwrap() - 1.0).abs() < 1e-9);
        // X=Y=Z → I(X:Y|Z) = 0
        let mut d = vec![0.0; 8];
        d[0] = 0.5;
        d[7] = 0.5;
        let xyz = diag(l3.clone(), &d);
        assert!(
            xyz.conditional_mutual_information(&["x"], &["y"], &["z"])
                .unwrap()
                .abs()
                < 1e-9
        );
        // X=Y uniform, Z independent uniform → 1
        let mut d = vec![0.0; 8];
        for (xy, z) in [(0usize, 0usize), (0, 1), (3, 0), (3, 1)] {
            d[(xy << 1) | z] = 0.25;
        }
        let rho = diag(l3, &d);
        let cmi = rho
            .conditional_mutual_information(&["x"], &["y"], &["z"])
            .unwrap();
        assert!((cmi - 1.0).abs() < 1e-9);
        // Z empty → plain mutual information
        let empty: [&str; 0] = [];
        let a = rho
            .conditional_mutual_information(&["x"], &["y"], &empty)
            .unwrap();
        assert!((a - rho.mutual_information(&["x"], &["y"]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_matrices() {
        let l = RegisterLayout::from_pairs(&[("q", 1)]).unwrap();
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.5);
        m[(1, 1)] = c(-0.5);
        assert!(DensityMatrix::new(l.clone(), m).is_err());
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.5);
        m[(1, 1)] = c(0.5);
        m[(0, 1)] = c(0.1);
        assert!(DensityMatrix::new(l.clone(), m).is_err());
        assert!(DensityMatrix::new(l, CMatrix::zeros(4, 4)).is_err());
    }

    #[test]
    fn unknown_register_in_partial_trace() {
        let rho = diag(pair(), &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            rho.partial_trace(&["zz"]),
            Err(Error::UnknownRegister(_))
        ));
    }
}
