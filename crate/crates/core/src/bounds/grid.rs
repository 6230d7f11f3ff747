use std::fmt;
use std::str::FromStr;

use super::BoundsReport;
use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPoint {
    pub n: usize,
    pub d: usize,
    pub b: usize,
}

/// Cartesian grid `n=<list> d=<list> b=<list>`.
///
/// A list is comma-separated; each item is an integer, a power `p^k`, an
/// inclusive range `lo..hi`, or a power range `p^a..p^b` (powers of `p`).
/// Points with d > n are skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub n: Vec<usize>,
    pub d: Vec<usize>,
    pub b: Vec<usize>,
}

fn bad(msg: String) -> Error {
    Error::parse(1, msg)
}

fn value(s: &str) -> Result<(usize, Option<(usize, u32)>)> {
    let int = |v: &str| {
        v.parse::<usize>()
            .map_err(|_| bad(format!("bad number `{v}`")))
    };
    match s.split_once('^') {
        Some((p, k)) => {
            let (p, k) = (int(p)?, int(k)? as u32);
            let v = p
                .checked_pow(k)
                .ok_or_else(|| bad(format!("`{s}` overflows")))?;
            Ok((v, Some((p, k))))
        }
        None => Ok((int(s)?, None)),
    }
}

fn list(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in s.split(',') {
        match item.split_once("..") {
            Some((lo, hi)) => match (value(lo)?, value(hi)?) {
                ((_, Some((p, a))), (_, Some((q, b)))) if p == q => {
                    out.extend((a..=b).map(|k| p.pow(k)));
                }
                ((lo, _), (hi, _)) => out.extend(lo..=hi),
            },
            None => out.push(value(item)?.0),
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(bad(format!("list `{s}` must hold positive values")));
    }
    Ok(out)
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut n, mut d, mut b) = (None, None, None);
        for tok in s.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key=list`, got `{tok}`")))?;
            let slot = match k {
                "n" => &mut n,
                "d" => &mut d,
                "b" => &mut b,
                _ => return Err(bad(format!("unknown grid key `{k}`"))),
            };
            if slot.replace(list(v)?).is_some() {
                return Err(bad(format!("`{k}` given twice")));
            }
        }
        Ok(Grid {
            n: n.ok_or_else(|| bad("grid needs n=".into()))?,
            d: d.ok_or_else(|| bad("grid needs d=".into()))?,
            b: b.unwrap_or_else(|| vec![1]),
        })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "n={} d={} b={}", j(&self.n), j(&self.d), j(&self.b))
    }
}

impl Grid {
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &d in self.d.iter().filter(|&&d| d <= n) {
                for &b in &self.b {
                    out.push(GridPoint { n, d, b });
                }
            }
        }
        out
    }
}

/// CSV with one row per grid point, in grid order.
pub fn emit_sweep(grid: &Grid, exec: Execution) -> Result<String> {
    let points = grid.points();
    if points.is_empty() {
        return Err(Error::Invalid(format!(
            "grid `{grid}` has no point with d ≤ n"
        )));
    }
    let rows = exec.map(&points, |p| {
        BoundsReport::new(p.n, p.d, p.b).map(|r| r.csv_row())
    });
    let mut out =
        String::from("# asymptotic columns are shape functions (constant 1, log base 2)\n");
    out.push_str(BoundsReport::CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r?);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_lists() {
        let g: Grid = "n=2^4..2^6,100 d=1..3 b=1,8".parse().unwrap();
        assert_eq!(g.n, vec![16, 32, 64, 100]);
        assert_eq!(g.d, vec![1, 2, 3]);
        assert_eq!(g.points().len(), 24);
        assert!("n=4 d=x".parse::<Grid>().is_err());
        assert!("n=4".parse::<Grid>().is_err());
        assert!("n=4 d=0".parse::<Grid>().is_err());
    }

    #[test]
    fn single_point() {
        let g: Grid = "n=64 d=4 b=2".parse().unwrap();
        let csv = emit_sweep(&g, Execution::Sequential).unwrap();
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 2);
    }
}
