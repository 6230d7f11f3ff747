//! Shared pieces of the line-oriented text formats.
//!
//! Gate syntax: `KIND reg[idx]... [ctrl=REG[j]] [mat=re,im;re,im;...]`, where
//! `mat` lists a U1/U2 matrix in row-major order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{CMatrix, Gate, GateKind, QubitRef};

/// A non-blank, non-comment source line split on whitespace.
pub(crate) struct SourceLine<'a> {
    pub no: usize,
    pub tokens: Vec<&'a str>,
}

pub(crate) fn source_lines(text: &str) -> impl Iterator<Item = SourceLine<'_>> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            None
        } else {
            Some(SourceLine {
                no: i + 1,
                tokens: l.split_whitespace().collect(),
            })
        }
    })
}

/// `key=value` tokens of a line; bare tokens are returned separately in order.
pub(crate) fn split_pairs<'a>(
    tokens: &[&'a str],
    line: usize,
) -> Result<(BTreeMap<&'a str, &'a str>, Vec<&'a str>)> {
    let mut pairs = BTreeMap::new();
    let mut bare = Vec::new();
    for t in tokens {
        match t.split_once('=') {
            Some((k, v)) => {
                if pairs.insert(k, v).is_some() {
                    return Err(Error::parse(line, format!("`{k}` given twice")));
                }
            }
            None => bare.push(*t),
        }
    }
    Ok((pairs, bare))
}

pub(crate) fn take<T: FromStr>(
    pairs: &mut BTreeMap<&str, &str>,
    key: &str,
    line: usize,
) -> Result<T> {
    let v = pairs
        .remove(key)
        .ok_or_else(|| Error::parse(line, format!("missing `{key}=`")))?;
    v.parse()
        .map_err(|_| Error::parse(line, format!("bad value `{v}` for `{key}`")))
}

pub(crate) fn no_leftovers(pairs: &BTreeMap<&str, &str>, line: usize) -> Result<()> {
    match pairs.keys().next() {
        Some(k) => Err(Error::parse(line, format!("unexpected `{k}=`"))),
        None => Ok(()),
    }
}

pub(crate) fn parse_qubit(tok: &str, line: usize) -> Result<QubitRef> {
    let bad = || Error::parse(line, format!("expected `reg[idx]`, got `{tok}`"));
    let (name, rest) = tok.split_once('[').ok_or_else(bad)?;
    let idx = rest.strip_suffix(']').ok_or_else(bad)?;
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(bad());
    }
    let index = idx.parse().map_err(|_| bad())?;
    Ok(QubitRef::new(name, index))
}

fn parse_matrix(v: &str, dim: usize, line: usize) -> Result<CMatrix> {
    let entries = v
        .split(';')
        .map(|e| {
            let (re, im) = e
                .split_once(',')
                .ok_or_else(|| Error::parse(line, format!("matrix entry `{e}` is not `re,im`")))?;
            let p = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::parse(line, format!("bad number `{s}`")))
            };
            Ok(Complex64::new(p(re)?, p(im)?))
        })
        .collect::<Result<Vec<_>>>()?;
    if entries.len() != dim * dim {
        return Err(Error::parse(
            line,
            format!("matrix needs {} entries, got {}", dim * dim, entries.len()),
        ));
    }
    Ok(CMatrix::from_row_slice(dim, dim, &entries))
}

/// Parse gate tokens (kind first). Structural validity is not checked here.
pub(crate) fn parse_gate(tokens: &[&str], line: usize) -> Result<Gate> {
    let (mut pairs, bare) = split_pairs(tokens, line)?;
    let (&kind, targets) = bare
        .split_first()
        .ok_or_else(|| Error::parse(line, "missing gate kind"))?;
    let mat = pairs.remove("mat");
    let kind = match kind {
        "H" => GateKind::H,
        "X" => GateKind::X,
        "Z" => GateKind::Z,
        "S" => GateKind::S,
        "T" => GateKind::T,
        "CNOT" => GateKind::Cnot,
        "CZ" => GateKind::Cz,
        "CCNOT" => GateKind::Ccnot,
        "SWAP" => GateKind::Swap,
        "U1" | "U2" => {
            let dim = if kind == "U1" { 2 } else { 4 };
            let m = mat.ok_or_else(|| Error::parse(line, format!("{kind} needs `mat=`")))?;
            let m = parse_matrix(m, dim, line)?;
            if dim == 2 {
                GateKind::U1(m)
            } else {
                GateKind::U2(m)
            }
        }
        other => return Err(Error::parse(line, format!("unknown gate kind `{other}`"))),
    };
    if mat.is_some() && !matches!(kind, GateKind::U1(_) | GateKind::U2(_)) {
        return Err(Error::parse(line, "`mat=` only applies to U1/U2"));
    }
    let targets = targets
        .iter()
        .map(|t| parse_qubit(t, line))
        .collect::<Result<Vec<_>>>()?;
    if targets.len() != kind.arity() {
        return Err(Error::parse(
            line,
            format!(
                "{} takes {} target(s), got {}",
                kind.name(),
                kind.arity(),
                targets.len()
            ),
        ));
    }
    let control = pairs
        .remove("ctrl")
        .map(|c| parse_qubit(c, line))
        .transpose()?;
    no_leftovers(&pairs, line)?;
    Ok(Gate {
        kind,
        targets,
        control,
    })
}

/// Inverse of [`parse_gate`]. Matrix entries use shortest round-trip formatting.
pub fn format_gate(g: &Gate) -> String {
    let mut s = g.kind.name().to_string();
    for t in &g.targets {
        write!(s, " {t}").unwrap();
    }
    if let Some(c) = &g.control {
        write!(s, " ctrl={c}").unwrap();
    }
    if let GateKind::U1(m) | GateKind::U2(m) = &g.kind {
        let entries: Vec<String> = (0..m.nrows())
            .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
            .map(|(r, c)| format!("{},{}", m[(r, c)].re, m[(r, c)].im))
            .collect();
        write!(s, " mat={}", entries.join(";")).unwrap();
    }
    s
}
