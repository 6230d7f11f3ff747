use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Tunable constants of the walk search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    /// Iterations are ⌈c_eps/√ε⌉.
    pub c_eps: f64,
    /// Walk steps per iteration are ⌈c_delta/√δ⌉.
    pub c_delta: f64,
    /// Checking error target is c·√(t/n).
    pub c: f64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            c_eps: 3.0,
            c_delta: 3.0,
            c: 0.1,
        }
    }
}

impl WalkConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.c_eps > 0.0 && self.c_delta > 0.0 && self.c > 0.0) {
            return Err(Error::Invalid("walk constants must be positive".into()));
        }
        Ok(())
    }
}

fn log2(n: usize) -> f64 {
    (n as f64).log2()
}

/// Smallest c with c³ ≥ v.
fn cube_root_ceil(v: u128) -> u128 {
    let mut c = (v as f64).cbrt().round() as u128;
    while c * c * c < v {
        c += 1;
    }
    while c > 0 && (c - 1) * (c - 1) * (c - 1) >= v {
        c -= 1;
    }
    c
}

/// True when d⁴ ≥ n·log₂³n, the regime of the cube-root subset size.
pub fn cube_regime(n: usize, d: usize) -> bool {
    (d as f64).powi(4) >= n as f64 * log2(n).powi(3)
}

pub fn choose_t(n: usize, d: usize) -> Result<usize> {
    if d == 0 || d > n {
        return Err(Error::Invalid(format!("need 1 ≤ d ≤ n, got d={d}, n={n}")));
    }
    let l = log2(n);
    let t = if (d as f64) <= l {
        d
    } else if cube_regime(n, d) {
        cube_root_ceil(n as u128 * (d as u128).pow(2)) as usize
    } else {
        ((d * d) as f64 / l).ceil() as usize
    };
    Ok(t.clamp(1, n))
}

/// max{1, t/d} + √(n/t)·(max{1, √(t log n)/d} + max{1, √t/d}).
pub fn round_cost(n: usize, d: usize, t: usize) -> Result<f64> {
    if t == 0 || t > n || d == 0 {
        return Err(Error::Invalid(format!(
            "need 1 ≤ t ≤ n and d ≥ 1, got t={t}, n={n}, d={d}"
        )));
    }
    let (nf, df, tf) = (n as f64, d as f64, t as f64);
    let check = ((tf * log2(n)).sqrt() / df).max(1.0);
    let update = (tf.sqrt() / df).max(1.0);
    Ok((tf / df).max(1.0) + (nf / tf).sqrt() * (check + update))
}

/// Probability that a uniform t-subset of [n] meets `marked`.
pub fn epsilon(n: usize, t: usize, marked: &[usize]) -> Result<f64> {
    if marked.is_empty() {
        return Err(Error::Precondition("no marked index".into()));
    }
    if t > n || marked.iter().any(|&i| i >= n) {
        return Err(Error::Invalid(format!(
            "t={t} or a marked index out of range for n={n}"
        )));
    }
    let mut distinct = marked.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let m = distinct.len();
    // C(n−m, t)/C(n, t) as a running product
    let miss = (0..t).fold(1.0, |acc, i| {
        if n - i <= m {
            0.0
        } else {
            acc * (n - m - i) as f64 / (n - i) as f64
        }
    });
    Ok(1.0 - miss)
}

/// Lexicographically ordered t-subsets of [n] as bit masks.
pub fn subsets(n: usize, t: usize) -> Vec<u64> {
    assert!(n <= 64);
    let mut out = Vec::new();
    if t > n {
        return out;
    }
    if t == 0 {
        return vec![0];
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        out.push(idx.iter().fold(0u64, |m, &i| m | (1 << i)));
        let Some(p) = (0..t).rev().find(|&p| idx[p] < n - t + p) else {
            break;
        };
        idx[p] += 1;
        for q in p + 1..t {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out.sort_unstable_by_key(|m| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>());
    out
}

fn gap_range(n: usize, t: usize) -> Result<()> {
    if t == 0 || t >= n {
        return Err(Error::Invalid(format!(
            "spectral gap needs 1 ≤ t ≤ n−1, got t={t}, n={n}"
        )));
    }
    Ok(())
}

/// n/(t(n−t)).
pub fn spectral_gap_closed_form(n: usize, t: usize) -> Result<f64> {
    gap_range(n, t)?;
    Ok(n as f64 / (t * (n - t)) as f64)
}

/// 1 − λ₂ of the normalized walk matrix of J(n,t), by diagonalization.
pub fn spectral_gap_exact(n: usize, t: usize) -> Result<f64> {
    gap_range(n, t)?;
    let verts = subsets(n, t);
    let deg = (t * (n - t)) as f64;
    let dim = verts.len();
    let p = DMatrix::from_fn(dim, dim, |a, b| {
        if (verts[a] ^ verts[b]).count_ones() == 2 {
            1.0 / deg
        } else {
            0.0
        }
    });
    let mut ev: Vec<f64> = SymmetricEigen::new(p).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(1.0 - ev[1])
}

/// Largest vertex count for which [`spectral_gap`] diagonalizes.
pub const EXACT_GAP_MAX_VERTICES: usize = 400;

pub fn spectral_gap(n: usize, t: usize) -> Result<f64> {
    gap_range(n, t)?;
    if n <= 64 && binomial(n, t) <= EXACT_GAP_MAX_VERTICES as f64 {
        spectral_gap_exact(n, t)
    } else {
        spectral_gap_closed_form(n, t)
    }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Derived sizes of one walk search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub n: usize,
    pub t: usize,
    /// Hitting probability with a single marked index, t/n; a lower bound for any nonempty marked set.
    pub eps: f64,
    /// Spectral gap of J(n,t); taken as 1 when t = n (single vertex, no walk).
    pub delta: f64,
    pub iterations: usize,
    pub walk_steps_per_iteration: usize,
    pub checking_error_target: f64,
}

impl WalkParams {
    pub fn new(n: usize, t: usize, cfg: &WalkConfig) -> Result<Self> {
        cfg.check()?;
        if t == 0 || t > n {
            return Err(Error::Invalid(format!("need 1 ≤ t ≤ n, got t={t}, n={n}")));
        }
        let eps = epsilon(n, t, &[0])?;
        let (delta, steps) = if t == n {
            (1.0, 0)
        } else {
            let g = spectral_gap(n, t)?;
            (g, (cfg.c_delta / g.sqrt()).ceil() as usize)
        };
        Ok(WalkParams {
            n,
            t,
            eps,
            delta,
            iterations: (cfg.c_eps / eps.sqrt()).ceil() as usize,
            walk_steps_per_iteration: steps,
            checking_error_target: cfg.c * (t as f64 / n as f64).sqrt(),
        })
    }
}
