use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use super::{LineParams, LineProtocol, Measurement};
use crate::error::{Error, Result};
use crate::ir::{
    format_gate, no_leftovers, parse_gate, parse_qubit, source_lines, split_pairs, take,
};

impl LineProtocol {
    /// Parse the line-protocol text format.
    ///
    /// ```text
    /// line n=1 d=2 r=2 b=1 s=0
    /// gate t=1 party=2 X L[0] ctrl=Y[0]
    /// gate t=2 party=1 SWAP R[0] L[0]
    /// measure party=0
    /// output R[0]
    /// ```
    pub fn parse(text: &str) -> Result<LineProtocol> {
        let mut lines = source_lines(text);
        let head = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty protocol"))?;
        if head.tokens[0] != "line" {
            return Err(Error::parse(
                head.no,
                "expected header `line n= d= r= b= s=`",
            ));
        }
        let (mut kv, bare) = split_pairs(&head.tokens[1..], head.no)?;
        if let Some(b) = bare.first() {
            return Err(Error::parse(head.no, format!("unexpected `{b}` in header")));
        }
        let params = LineParams {
            n: take(&mut kv, "n", head.no)?,
            d: take(&mut kv, "d", head.no)?,
            r: take(&mut kv, "r", head.no)?,
            b: take(&mut kv, "b", head.no)?,
            s: take(&mut kv, "s", head.no)?,
        };
        no_leftovers(&kv, head.no)?;
        params
            .check()
            .map_err(|e| Error::parse(head.no, e.to_string()))?;

        let mut circuits: BTreeMap<(usize, usize), Vec<_>> = BTreeMap::new();
        let mut measure: Option<Measurement> = None;
        let mut in_block = false;
        let mut seen_measure = false;
        for line in lines {
            let no = line.no;
            match line.tokens[0] {
                "gate" if in_block => {
                    if line
                        .tokens
                        .iter()
                        .any(|t| t.starts_with("t=") || t.starts_with("party="))
                    {
                        return Err(Error::parse(no, "round gate inside measure block"));
                    }
                    let g = parse_gate(&line.tokens[1..], no)?;
                    measure
                        .get_or_insert_with(Measurement::default)
                        .gates
                        .push(g);
                }
                "gate" => {
                    if seen_measure {
                        return Err(Error::parse(no, "round gate after the measure block"));
                    }
                    let (loc, rest): (Vec<&str>, Vec<&str>) = line.tokens[1..]
                        .iter()
                        .partition(|t| t.starts_with("t=") || t.starts_with("party="));
                    let (mut kv, _) = split_pairs(&loc, no)?;
                    let t: usize = take(&mut kv, "t", no)?;
                    let party: usize = take(&mut kv, "party", no)?;
                    let g = parse_gate(&rest, no)?;
                    circuits.entry((t, party)).or_default().push(g);
                }
                "measure" => {
                    if seen_measure {
                        return Err(Error::parse(no, "second measure block"));
                    }
                    let (mut kv, bare) = split_pairs(&line.tokens[1..], no)?;
                    let party: usize = take(&mut kv, "party", no)?;
                    no_leftovers(&kv, no)?;
                    if party != 0 || !bare.is_empty() {
                        return Err(Error::parse(no, "expected `measure party=0`"));
                    }
                    seen_measure = true;
                    in_block = true;
                    measure = Some(Measurement {
                        gates: Vec::new(),
                        output: Measurement::default().output,
                    });
                }
                "output" if in_block => {
                    if line.tokens.len() != 2 {
                        return Err(Error::parse(no, "expected `output reg[idx]`"));
                    }
                    let q = parse_qubit(line.tokens[1], no)?;
                    measure.as_mut().expect("inside block").output = q;
                    in_block = false;
                }
                other => return Err(Error::parse(no, format!("unexpected `{other}`"))),
            }
        }
        if in_block {
            return Err(Error::parse(
                text.lines().count().max(1),
                "measure block without `output`",
            ));
        }
        Ok(LineProtocol::from_parts(
            params,
            circuits,
            measure.unwrap_or_default(),
        ))
    }

    /// Serialize to the text format; `parse(to_ir(p)) == p`.
    pub fn to_ir(&self) -> String {
        let p = self.params();
        let mut s = format!("line n={} d={} r={} b={} s={}\n", p.n, p.d, p.r, p.b, p.s);
        for (&(t, i), gates) in self.circuits() {
            for g in gates {
                writeln!(s, "gate t={t} party={i} {}", format_gate(g)).unwrap();
            }
        }
        let m = self.measurement();
        s.push_str("measure party=0\n");
        for g in &m.gates {
            writeln!(s, "gate {}", format_gate(g)).unwrap();
        }
        writeln!(s, "output {}", m.output).unwrap();
        s
    }
}

impl FromStr for LineProtocol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LineProtocol::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RELAY: &str = "\
# relay y_1 from party 2 to party 0
line n=1 d=2 r=2 b=1 s=0
gate t=1 party=2 X L[0] ctrl=Y[0]
gate t=2 party=1 SWAP R[0] L[0]
measure party=0
output R[0]
";

    #[test]
    fn parse_and_round_trip() {
        let p = LineProtocol::parse(RELAY).unwrap();
        assert_eq!(p.params().d, 2);
        assert_eq!(p.circuit(1, 2).len(), 1);
        assert!(p.validate().is_valid());
        assert_eq!(LineProtocol::parse(&p.to_ir()).unwrap(), p);
    }

    #[test]
    fn malformed_header_reports_line() {
        let e = LineProtocol::parse("# c\nline n=1 d=2 r=x b=1 s=0\n").unwrap_err();
        assert_eq!(e, Error::parse(2, "bad value `x` for `r`"));
        assert!(matches!(
            LineProtocol::parse("gate t=1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            LineProtocol::parse("line n=1 d=0 r=1 b=1 s=0"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn block_errors() {
        let unterminated = "line n=1 d=1 r=1 b=1 s=0\nmeasure party=0\ngate H R[0]\n";
        assert!(LineProtocol::parse(unterminated).is_err());
        let late =
            "line n=1 d=1 r=1 b=1 s=0\nmeasure party=0\noutput R[0]\ngate t=1 party=0 H R[0]\n";
        assert!(matches!(
            LineProtocol::parse(late),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn missing_measure_defaults_to_r0() {
        let p = LineProtocol::parse("line n=1 d=1 r=1 b=1 s=0\n").unwrap();
        assert_eq!(p.measurement(), &Measurement::default());
    }
}
