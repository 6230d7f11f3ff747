use std::fmt::Write as _;
use std::str::FromStr;

use super::{Oracle, QueryAlgorithm, Step};
use crate::error::{Error, Result};
use crate::ir::{
    format_gate, no_leftovers, parse_gate, parse_qubit, source_lines, split_pairs, take,
};
use crate::qcore::Register;

impl QueryAlgorithm {
    /// Parse the query-algorithm text format.
    ///
    /// ```text
    /// query n=4
    /// register W 2
    /// gate X I[1]
    /// query x
    /// gate SWAP B[0] W[0]
    /// query y
    /// output W[0]
    /// ```
    pub fn parse(text: &str) -> Result<QueryAlgorithm> {
        let mut lines = source_lines(text);
        let head = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty algorithm"))?;
        if head.tokens[0] != "query" {
            return Err(Error::parse(head.no, "expected header `query n=`"));
        }
        let (mut kv, bare) = split_pairs(&head.tokens[1..], head.no)?;
        if let Some(b) = bare.first() {
            return Err(Error::parse(head.no, format!("unexpected `{b}` in header")));
        }
        let n: usize = take(&mut kv, "n", head.no)?;
        no_leftovers(&kv, head.no)?;
        let mut aux = Vec::new();
        let mut steps = Vec::new();
        let mut output = None;
        for line in lines {
            let no = line.no;
            let args = &line.tokens[1..];
            match line.tokens[0] {
                "register" => {
                    if !steps.is_empty() {
                        return Err(Error::parse(no, "registers must precede steps"));
                    }
                    let [name, width] = args else {
                        return Err(Error::parse(no, "expected `register NAME WIDTH`"));
                    };
                    let width = width
                        .parse()
                        .map_err(|_| Error::parse(no, format!("bad width `{width}`")))?;
                    aux.push(Register::new(*name, width));
                }
                "gate" => steps.push(Step::Gate(parse_gate(args, no)?)),
                "query" => match args {
                    ["x"] => steps.push(Step::Query(Oracle::X)),
                    ["y"] => steps.push(Step::Query(Oracle::Y)),
                    _ => return Err(Error::parse(no, "expected `query x` or `query y`")),
                },
                "output" => {
                    let [q] = args else {
                        return Err(Error::parse(no, "expected `output REG[idx]`"));
                    };
                    if output.replace(parse_qubit(q, no)?).is_some() {
                        return Err(Error::parse(no, "second output line"));
                    }
                }
                other => return Err(Error::parse(no, format!("unknown directive `{other}`"))),
            }
        }
        let mut alg = QueryAlgorithm::new(n, aux).map_err(|e| match e {
            Error::CapExceeded { .. } => e,
            other => Error::parse(head.no, other.to_string()),
        })?;
        alg.steps = steps;
        if let Some(q) = output {
            alg.output = q;
        }
        Ok(alg)
    }

    pub fn to_ir(&self) -> String {
        let mut s = format!("query n={}\n", self.n);
        for r in &self.aux {
            let _ = writeln!(s, "register {} {}", r.name, r.width);
        }
        for step in &self.steps {
            match step {
                Step::Gate(g) => {
                    let _ = writeln!(s, "gate {}", format_gate(g));
                }
                Step::Query(o) => {
                    let _ = writeln!(s, "query {o}");
                }
            }
        }
        let _ = writeln!(s, "output {}[{}]", self.output.register, self.output.index);
        s
    }
}

impl FromStr for QueryAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QueryAlgorithm::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "query n=4\nregister W 2\ngate X I[1]\nquery x\ngate SWAP B[0] W[0]\nquery y\noutput W[0]\n";
        let alg = QueryAlgorithm::parse(text).unwrap();
        assert_eq!(alg.to_ir(), text);
        assert_eq!(alg.trace(), vec![Oracle::X, Oracle::Y]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = QueryAlgorithm::parse("query n=4\n\nquery z\n").unwrap_err();
        assert_eq!(e, Error::parse(3, "expected `query x` or `query y`"));
    }
}
