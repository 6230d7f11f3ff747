//! Closed-form round and query bounds for Set Disjointness on the line and in
//! the delay-d two-oracle model.
//!
//! Asymptotic expressions are evaluated with constant 1. They are shape
//! functions: they order and cross over correctly but are not absolute round
//! counts. Logs are base 2 with arguments clamped below at 2.

mod grid;

pub use grid::{emit_sweep, Grid, GridPoint};

use crate::disjwalk::{choose_t, cube_regime, round_cost};
use crate::error::{Error, Result};

/// Relative slack for comparing shape functions that meet exactly.
pub const TIE_TOL: f64 = 1e-9;

fn lg(v: f64) -> f64 {
    v.max(2.0).log2()
}

fn check_nd(n: usize, d: usize) -> Result<()> {
    if n == 0 || d == 0 || d > n {
        return Err(Error::Invalid(format!("need 1 ≤ d ≤ n, got n={n}, d={d}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineLowerBounds {
    /// max(√n/b, d).
    pub simple: f64,
    /// (n·d²/b)^{1/3}.
    pub cube: f64,
    pub log_exact_1: f64,
    pub log_exact_2: f64,
}

pub fn lb_line_rounds(n: usize, d: usize, b: usize) -> Result<LineLowerBounds> {
    if n == 0 || d == 0 || b == 0 {
        return Err(Error::Invalid("n, d, b must be positive".into()));
    }
    let (nf, df, bf) = (n as f64, d as f64, b as f64);
    let ln = lg(nf);
    let lln = lg(ln);
    Ok(LineLowerBounds {
        simple: (nf.sqrt() / bf).max(df),
        cube: (nf * df * df / bf).cbrt(),
        log_exact_1: (nf * df).sqrt() / (ln.sqrt() * lg(nf / (df * ln)).powi(4)),
        log_exact_2: (nf * df).cbrt() / (lln.cbrt() * lg(nf / (df * df * lln)).powf(8.0 / 3.0)),
    })
}

/// Whether the cube term is at least the simple term, up to [`TIE_TOL`].
pub fn cube_dominates(n: usize, d: usize, b: usize) -> Result<bool> {
    let lb = lb_line_rounds(n, d, b)?;
    Ok(lb.cube >= lb.simple * (1.0 - TIE_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryLowerBounds {
    /// √n/d.
    pub rounds_a: f64,
    /// (n/(d log n))^{1/3}.
    pub rounds_b: f64,
    /// √n.
    pub queries_a: f64,
    /// (n d²/log n)^{1/3}.
    pub queries_b: f64,
}

pub fn lb_query(n: usize, d: usize) -> Result<QueryLowerBounds> {
    check_nd(n, d)?;
    let (nf, df) = (n as f64, d as f64);
    let ln = lg(nf);
    Ok(QueryLowerBounds {
        rounds_a: nf.sqrt() / df,
        rounds_b: (nf / (df * ln)).cbrt(),
        queries_a: nf.sqrt(),
        queries_b: (nf * df * df / ln).cbrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperBranch {
    /// d⁴ < n log³n: √(n log n)/d rounds, √(n log n) queries.
    SquareRoot,
    /// d⁴ ≥ n log³n: (n/d)^{1/3} rounds, (n d²)^{1/3} queries.
    CubeRoot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBound {
    pub rounds: f64,
    pub queries: f64,
    pub branch: UpperBranch,
}

/// Both branch expressions as (rounds, queries), regardless of which applies.
pub fn ub_branches(n: usize, d: usize) -> Result<[(f64, f64); 2]> {
    check_nd(n, d)?;
    let (nf, df) = (n as f64, d as f64);
    let s = (nf * lg(nf)).sqrt();
    Ok([(s / df, s), ((nf / df).cbrt(), (nf * df * df).cbrt())])
}

pub fn ub_rounds(n: usize, d: usize) -> Result<UpperBound> {
    let [sq, cu] = ub_branches(n, d)?;
    let (branch, (rounds, queries)) = if cube_regime(n, d) {
        (UpperBranch::CubeRoot, cu)
    } else {
        (UpperBranch::SquareRoot, sq)
    };
    Ok(UpperBound {
        rounds,
        queries,
        branch,
    })
}

/// Smallest t minimizing the round cost over 1..=n, with that cost.
pub fn optimize_t_bruteforce(n: usize, d: usize) -> Result<(usize, f64)> {
    check_nd(n, d)?;
    let mut best = (1, round_cost(n, d, 1)?);
    for t in 2..=n {
        let c = round_cost(n, d, t)?;
        if c < best.1 {
            best = (t, c);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub d: usize,
    pub b: usize,
    pub line: LineLowerBounds,
    pub query: QueryLowerBounds,
    pub upper: UpperBound,
    pub chosen_t: usize,
    pub bruteforce_t: usize,
    pub cost_at_chosen: f64,
    pub cost_at_bruteforce: f64,
}

impl BoundsReport {
    pub fn new(n: usize, d: usize, b: usize) -> Result<Self> {
        check_nd(n, d)?;
        let chosen_t = choose_t(n, d)?;
        let (bruteforce_t, cost_at_bruteforce) = optimize_t_bruteforce(n, d)?;
        Ok(BoundsReport {
            n,
            d,
            b,
            line: lb_line_rounds(n, d, b)?,
            query: lb_query(n, d)?,
            upper: ub_rounds(n, d)?,
            chosen_t,
            bruteforce_t,
            cost_at_chosen: round_cost(n, d, chosen_t)?,
            cost_at_bruteforce,
        })
    }

    pub const CSV_HEADER: &'static str = "n,d,b,lb_line_simple,lb_line_cube,lb_line_log1,lb_line_log2,\
lb_query_rounds_a,lb_query_rounds_b,lb_query_queries_a,lb_query_queries_b,ub_rounds,ub_queries,ub_branch,\
chosen_t,bruteforce_t,cost_at_chosen,cost_at_bruteforce";

    pub fn csv_row(&self) -> String {
        let f = |v: f64| format!("{v:.9}");
        [
            self.n.to_string(),
            self.d.to_string(),
            self.b.to_string(),
            f(self.line.simple),
            f(self.line.cube),
            f(self.line.log_exact_1),
            f(self.line.log_exact_2),
            f(self.query.rounds_a),
            f(self.query.rounds_b),
            f(self.query.queries_a),
            f(self.query.queries_b),
            f(self.upper.rounds),
            f(self.upper.queries),
            match self.upper.branch {
                UpperBranch::SquareRoot => "1".into(),
                UpperBranch::CubeRoot => "2".into(),
            },
            self.chosen_t.to_string(),
            self.bruteforce_t.to_string(),
            f(self.cost_at_chosen),
            f(self.cost_at_bruteforce),
        ]
        .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_values() {
        let lb = lb_line_rounds(1_000_000, 100, 20).unwrap();
        assert!((lb.cube - 793.700_525_984).abs() < 1e-6);
        let two_party = lb_line_rounds(4096, 1, 1).unwrap();
        assert_eq!(two_party.simple, 64.0);
        assert!(lb_line_rounds(4, 1, 0).is_err());
    }

    #[test]
    fn query_values() {
        let q = lb_query(4096, 8).unwrap();
        assert!((q.rounds_b - (4096f64 / 96.0).cbrt()).abs() < 1e-12);
        assert!((q.rounds_b - 3.4943).abs() < 1e-4);
        assert_eq!(lb_query(64, 1).unwrap().rounds_a, 8.0);
    }

    #[test]
    fn upper_values() {
        let u = ub_rounds(16, 16).unwrap();
        assert_eq!(u.branch, UpperBranch::CubeRoot);
        assert!((u.rounds - 1.0).abs() < 1e-12 && (u.queries - 16.0).abs() < 1e-9);
        let u = ub_rounds(65536, 4).unwrap();
        assert_eq!(u.branch, UpperBranch::SquareRoot);
        assert!((u.rounds - 256.0).abs() < 1e-9);
    }

    #[test]
    fn bruteforce_extremes() {
        let (t, c) = optimize_t_bruteforce(64, 64).unwrap();
        assert_eq!((t, c), (64, 3.0));
        let r = BoundsReport::new(256, 8, 1).unwrap();
        assert!(r.cost_at_bruteforce <= r.cost_at_chosen);
        assert!((r.cost_at_chosen - 12.313_708_498_984_761).abs() < 1e-9);
    }
}
