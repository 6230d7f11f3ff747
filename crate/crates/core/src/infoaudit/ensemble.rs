//! Entropies of purified-input states assembled from per-branch work states.
//!
//! For a fixed z the global state is
//! Σ √w(x,y) |x⟩_{Xh} |y⟩_{Yh} |x⟩_X |y⟩_Y |ψ_{xy}⟩_W. Every bipartition of
//! these registers gives a block-structured Schmidt matrix: a branch lands in
//! the block indexed by the label values visible on each side. Entropies come
//! from the smaller Gram matrix of that Schmidt matrix.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{entropy_of_hermitian, CMatrix, PureState};

pub(crate) const LABELS_X: [&str; 2] = ["X", "Xh"];
pub(crate) const LABELS_Y: [&str; 2] = ["Y", "Yh"];

/// One input branch with its (conditional) weight.
#[derive(Debug, Clone)]
pub struct EnsembleBranch<'a> {
    pub x: u64,
    pub y: u64,
    pub weight: f64,
    pub state: &'a PureState,
}

/// Branches that share one work layout; weights sum to one.
#[derive(Debug, Clone)]
pub struct Ensemble<'a> {
    pub branches: Vec<EnsembleBranch<'a>>,
}

fn index_keys(keys: impl Iterator<Item = (u64, u64)>) -> (Vec<usize>, usize) {
    let mut map = BTreeMap::new();
    let idx: Vec<usize> = keys
        .map(|k| {
            let next = map.len();
            *map.entry(k).or_insert(next)
        })
        .collect();
    (idx, map.len())
}

impl Ensemble<'_> {
    /// Von Neumann entropy of `part`, which may mix label names
    /// (`X`, `Xh`, `Y`, `Yh`) with work register names.
    pub fn entropy<S: AsRef<str>>(&self, part: &[S]) -> Result<f64> {
        let first = self
            .branches
            .first()
            .ok_or_else(|| Error::Invalid("empty ensemble".into()))?;
        let layout = first.state.layout();
        let has = |name: &str| part.iter().any(|p| p.as_ref() == name);
        let work: Vec<&str> = part
            .iter()
            .map(|p| p.as_ref())
            .filter(|p| !LABELS_X.contains(p) && !LABELS_Y.contains(p))
            .collect();
        let kept = layout.qubits_of_set(&work)?;
        let row_x = LABELS_X.iter().any(|l| has(l));
        let row_y = LABELS_Y.iter().any(|l| has(l));
        let col_x = !LABELS_X.iter().all(|l| has(l));
        let col_y = !LABELS_Y.iter().all(|l| has(l));
        let pick = |use_x: bool, use_y: bool, b: &EnsembleBranch| {
            (if use_x { b.x } else { 0 }, if use_y { b.y } else { 0 })
        };
        let (rows, nr) = index_keys(self.branches.iter().map(|b| pick(row_x, row_y, b)));
        let (cols, nc) = index_keys(self.branches.iter().map(|b| pick(col_x, col_y, b)));
        let dk = 1usize << kept.len();
        let dr = 1usize << (layout.total_qubits() - kept.len());
        let mut blocks = Vec::with_capacity(self.branches.len());
        for b in &self.branches {
            if b.state.layout() != layout {
                return Err(Error::Invalid("branches have different layouts".into()));
            }
            blocks.push(b.state.split(&kept) * Complex64::new(b.weight.sqrt(), 0.0));
        }
        // Gram matrix on the smaller side; branches only pair up when they
        // agree on the key of the side being traced out.
        let row_side = nr * dk <= nc * dr;
        let (keys, other, dim) = if row_side {
            (&rows, &cols, dk)
        } else {
            (&cols, &rows, dr)
        };
        let size = if row_side { nr * dk } else { nc * dr };
        let mut gram = CMatrix::zeros(size, size);
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, o) in other.iter().enumerate() {
            groups.entry(*o).or_default().push(i);
        }
        for members in groups.values() {
            for &i in members {
                for &j in members {
                    let g = if row_side {
                        &blocks[i] * blocks[j].adjoint()
                    } else {
                        blocks[i].adjoint() * &blocks[j]
                    };
                    let mut view = gram.view_mut((keys[i] * dim, keys[j] * dim), (dim, dim));
                    view += g;
                }
            }
        }
        entropy_of_hermitian(&gram)
    }

    /// I(A : B) = H(A) + H(B) − H(AB).
    pub fn mutual_information<S: AsRef<str>, T: AsRef<str>>(
        &self,
        a: &[S],
        b: &[T],
    ) -> Result<f64> {
        let mut ab: Vec<String> = a.iter().map(|s| s.as_ref().to_string()).collect();
        for s in b {
            if ab.iter().any(|x| x == s.as_ref()) {
                return Err(Error::Invalid(format!(
                    "register `{}` in both parts",
                    s.as_ref()
                )));
            }
            ab.push(s.as_ref().to_string());
        }
        Ok(self.entropy(a)? + self.entropy(b)? - self.entropy(&ab)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{Gate, GateKind, RegisterLayout};

    #[test]
    fn classical_copy_gives_one_bit() {
        let layout = RegisterLayout::from_pairs(&[("M", 1)]).unwrap();
        let zero = PureState::zero(layout.clone());
        let mut one = zero.clone();
        one.apply_gate(&Gate::single(GateKind::X, "M", 0), &Default::default())
            .unwrap();
        let ens = Ensemble {
            branches: vec![
                EnsembleBranch {
                    x: 0,
                    y: 0,
                    weight: 0.5,
                    state: &zero,
                },
                EnsembleBranch {
                    x: 1,
                    y: 0,
                    weight: 0.5,
                    state: &one,
                },
            ],
        };
        assert!((ens.mutual_information(&["X"], &["M"]).unwrap() - 1.0).abs() < 1e-12);
        assert!((ens.mutual_information(&["X"], &["M", "Xh"]).unwrap() - 2.0).abs() < 1e-12);
        assert!(ens.mutual_information(&["Y"], &["M"]).unwrap().abs() < 1e-12);
        assert!((ens.entropy(&["Xh"]).unwrap() - 1.0).abs() < 1e-12);
        assert!(ens.entropy(&["Xh", "X", "M"]).unwrap().abs() < 1e-12);
    }
}
