//! State space |I, bits(I), j, k⟩ of the Johnson-graph walk.
//!
//! `I` ranges over t-subsets of [n] in lexicographic order, `bits` holds one
//! stored bit per element of `I` (bit p for the p-th smallest element), `j`
//! is a position in `I` and `k` a position in the complement of `I`. When
//! t = n there is no coin.

use num_complex::Complex64;

use super::params::subsets;
use super::search::SearchSchedule;
use crate::error::{Error, Result};
use crate::qcore::{Bits, DEFAULT_QUBIT_CAP};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpace {
    pub n: usize,
    pub t: usize,
    verts: Vec<u64>,
}

impl WalkSpace {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if t == 0 || t > n {
            return Err(Error::Invalid(format!(
                "walk needs 1 ≤ t ≤ n, got t={t}, n={n}"
            )));
        }
        let dim = super::params::binomial(n, t) * 2f64.powi(t as i32) * (t * (n - t)).max(1) as f64;
        if dim > (1u64 << DEFAULT_QUBIT_CAP) as f64 || n > 63 {
            return Err(Error::CapExceeded {
                needed: dim.log2().ceil() as usize,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        Ok(WalkSpace {
            n,
            t,
            verts: subsets(n, t),
        })
    }

    pub fn vertices(&self) -> &[u64] {
        &self.verts
    }

    pub fn coins(&self) -> usize {
        (self.t * (self.n - self.t)).max(1)
    }

    pub fn dimension(&self) -> usize {
        self.verts.len() * (1 << self.t) * self.coins()
    }

    fn index(&self, vert: usize, bits: usize, coin: usize) -> usize {
        (vert * (1 << self.t) + bits) * self.coins() + coin
    }

    fn unpack(&self, idx: usize) -> (usize, usize, usize) {
        let c = self.coins();
        (idx / c / (1 << self.t), idx / c % (1 << self.t), idx % c)
    }

    fn rank(&self, mask: u64) -> usize {
        self.verts
            .binary_search_by_key(&elements(mask, self.n), |m| elements(*m, self.n))
            .expect("mask is a t-subset")
    }

    /// Elements of the vertex with rank `v`, ascending.
    pub fn members(&self, v: usize) -> Vec<usize> {
        elements(self.verts[v], self.n)
    }
}

fn elements(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    pub space: WalkSpace,
    pub amps: Vec<Complex64>,
}

impl WalkState {
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &WalkState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Probability of each vertex when the subset register is measured.
    pub fn vertex_distribution(&self) -> Vec<f64> {
        let per = (1 << self.space.t) * self.space.coins();
        self.amps
            .chunks(per)
            .map(|c| c.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }

    /// Probability mass on components whose stored bits differ from `x` restricted to `I`.
    pub fn bits_mismatch(&self, x: &Bits) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != ZERO)
            .filter(|(i, _)| {
                let (v, bits, _) = self.space.unpack(*i);
                bits != true_bits(&self.space.members(v), x)
            })
            .fold(0.0, |acc, (_, a)| acc + a.norm_sqr())
    }
}

fn true_bits(members: &[usize], x: &Bits) -> usize {
    members
        .iter()
        .enumerate()
        .fold(0, |acc, (p, &i)| acc | (usize::from(x.get(i)) << p))
}

/// Uniform superposition over subsets with stored bits and uniform coins.
/// Uses exactly t queries to `x`, one per position of `I`.
pub fn setup(x: &Bits, n: usize, t: usize) -> Result<(WalkState, usize)> {
    if x.len() != n {
        return Err(Error::Precondition(format!(
            "x has length {}, expected {n}",
            x.len()
        )));
    }
    let space = WalkSpace::new(n, t)?;
    let amp = Complex64::new(
        1.0 / ((space.verts.len() * space.coins()) as f64).sqrt(),
        0.0,
    );
    let mut amps = vec![ZERO; space.dimension()];
    for v in 0..space.verts.len() {
        for c in 0..space.coins() {
            amps[space.index(v, 0, c)] = amp;
        }
    }
    let mut state = WalkState { space, amps };
    for p in 0..t {
        state = query_position(&state, x, p);
    }
    Ok((state, t))
}

/// One query: XOR x at the p-th element of `I` into stored bit p.
fn query_position(state: &WalkState, x: &Bits, p: usize) -> WalkState {
    let sp = &state.space;
    let mut out = vec![ZERO; state.amps.len()];
    for (i, a) in state.amps.iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        let (v, bits, c) = sp.unpack(i);
        let e = sp.members(v)[p];
        out[sp.index(v, bits ^ (usize::from(x.get(e)) << p), c)] += a;
    }
    WalkState {
        space: sp.clone(),
        amps: out,
    }
}

/// |I, bits, j, k⟩ ↦ |I∖{j}∪{k}, bits', k, j⟩: erase x_j, load x_k (2 queries).
pub fn exchange(state: &WalkState, x: &Bits) -> Result<(WalkState, usize)> {
    let sp = &state.space;
    if sp.t == sp.n {
        return Err(Error::Invalid("no exchange possible when t = n".into()));
    }
    let out_of = sp.n - sp.t;
    let mut out = vec![ZERO; state.amps.len()];
    for (i, a) in state.amps.iter().enumerate() {
        if *a == ZERO {
            continue;
        }
        let (v, bits, c) = sp.unpack(i);
        let members = sp.members(v);
        let mask = sp.verts[v];
        let comp: Vec<usize> = (0..sp.n).filter(|e| mask >> e & 1 == 0).collect();
        let (jp, kp) = (c / out_of, c % out_of);
        let (j, k) = (members[jp], comp[kp]);
        if (bits >> jp & 1 == 1) != x.get(j) {
            return Err(Error::Invalid(format!(
                "stored bit for index {j} does not match the oracle"
            )));
        }
        let new_mask = mask & !(1 << j) | (1 << k);
        let new_members = elements(new_mask, sp.n);
        let mut new_bits = 0;
        for (q, &e) in new_members.iter().enumerate() {
            let b = if e == k {
                x.get(k)
            } else {
                let old = members.iter().position(|&m| m == e).expect("kept element");
                bits >> old & 1 == 1
            };
            new_bits |= usize::from(b) << q;
        }
        let new_comp_pos = (0..sp.n)
            .filter(|e| new_mask >> e & 1 == 0)
            .position(|e| e == j)
            .expect("j left the subset");
        let new_j_pos = new_members.iter().position(|&e| e == k).expect("k joined");
        let nv = sp.rank(new_mask);
        out[sp.index(nv, new_bits, new_j_pos * out_of + new_comp_pos)] += a;
    }
    Ok((
        WalkState {
            space: sp.clone(),
            amps: out,
        },
        2,
    ))
}

/// Reflect the coin about its uniform superposition, for every (I, bits).
pub fn coin_reflection(state: &WalkState) -> WalkState {
    let c = state.space.coins();
    let mut amps = state.amps.clone();
    for block in amps.chunks_mut(c) {
        let mean = block.iter().sum::<Complex64>() / c as f64;
        for a in block.iter_mut() {
            *a = 2.0 * mean - *a;
        }
    }
    WalkState {
        space: state.space.clone(),
        amps,
    }
}

/// One walk step: coin reflection followed by the exchange; 2 queries to `x`.
pub fn update_step(state: &WalkState, x: &Bits) -> Result<(WalkState, usize)> {
    exchange(&coin_reflection(state), x)
}

/// Marked-phase factor of each (vertex, bits) block under imperfect checking:
/// 1 − (1 − e^{iβ})·q, with q the detection probability of the search over `I`.
fn check_factors(
    space: &WalkSpace,
    y: &Bits,
    sched: Option<&SearchSchedule>,
    beta: f64,
) -> Vec<Complex64> {
    let phase = Complex64::from_polar(1.0, beta);
    let mut out = Vec::with_capacity(space.verts.len() << space.t);
    for v in 0..space.verts.len() {
        let members = space.members(v);
        for bits in 0..1usize << space.t {
            let marked = members
                .iter()
                .enumerate()
                .filter(|(p, &e)| bits >> p & 1 == 1 && y.get(e))
                .count();
            let q = match sched {
                Some(s) => s.detection_probability(marked),
                None => f64::from(u8::from(marked > 0)),
            };
            out.push(Complex64::new(1.0, 0.0) - (Complex64::new(1.0, 0.0) - phase) * q);
        }
    }
    out
}

/// Generalized checking: multiply components whose `I` holds an index with
/// stored x-bit 1 and y-bit 1 by e^{iβ}. With `sched`, the phase is applied
/// only with the search's detection probability; without it the check is exact.
/// Returns the y-query count of one invocation.
pub fn checking_phase(
    state: &WalkState,
    y: &Bits,
    sched: Option<&SearchSchedule>,
    beta: f64,
) -> (WalkState, usize) {
    let sp = &state.space;
    let factors = check_factors(sp, y, sched, beta);
    let c = sp.coins();
    let mut amps = state.amps.clone();
    for (block, f) in amps.chunks_mut(c).zip(&factors) {
        for a in block.iter_mut() {
            *a *= f;
        }
    }
    let queries = sched.map_or(sp.t, |s| s.queries());
    (
        WalkState {
            space: sp.clone(),
            amps,
        },
        queries,
    )
}

/// The Checking reflection: phase −1 on marked components.
pub fn checking_reflection(
    state: &WalkState,
    y: &Bits,
    sched: Option<&SearchSchedule>,
) -> (WalkState, usize) {
    checking_phase(state, y, sched, std::f64::consts::PI)
}

/// ψ ↦ ψ − (1 − e^{−iα})⟨π|ψ⟩π for the stationary state π.
pub fn stationary_phase(state: &WalkState, pi: &WalkState, alpha: f64) -> WalkState {
    let overlap = pi.inner(state);
    let k = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -alpha)) * overlap;
    let amps = state
        .amps
        .iter()
        .zip(&pi.amps)
        .map(|(a, p)| a - k * p)
        .collect();
    WalkState {
        space: state.space.clone(),
        amps,
    }
}
