use std::fmt::Write as _;
use std::str::FromStr;

use super::{Party, TwoPartyProtocol, TwoPartyRound};
use crate::error::{Error, Result};
use crate::ir::{
    format_gate, no_leftovers, parse_gate, parse_qubit, source_lines, split_pairs, take,
};
use crate::qcore::{QubitRef, Register};

impl TwoPartyProtocol {
    /// Parse the two-party text format.
    ///
    /// ```text
    /// twoparty m=2 n=1
    /// register R0 1
    /// register L1 1
    /// alice R0
    /// round k=1 sender=alice
    /// gate X R0[0] ctrl=X[0]
    /// send R0
    /// round k=2 sender=bob
    /// send R0
    /// measure party=alice
    /// output R0[0]
    /// ```
    pub fn parse(text: &str) -> Result<TwoPartyProtocol> {
        let mut lines = source_lines(text);
        let head = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty protocol"))?;
        if head.tokens[0] != "twoparty" {
            return Err(Error::parse(head.no, "expected header `twoparty m= n=`"));
        }
        let (mut kv, bare) = split_pairs(&head.tokens[1..], head.no)?;
        if let Some(b) = bare.first() {
            return Err(Error::parse(head.no, format!("unexpected `{b}` in header")));
        }
        let m: usize = take(&mut kv, "m", head.no)?;
        let n: usize = take(&mut kv, "n", head.no)?;
        no_leftovers(&kv, head.no)?;

        let mut registers = Vec::new();
        let mut alice_initial = Vec::new();
        let mut rounds: Vec<TwoPartyRound> = Vec::new();
        let mut measurer: Option<Party> = None;
        let mut measurement = Vec::new();
        let mut output: Option<QubitRef> = None;
        for line in lines {
            let no = line.no;
            let toks = &line.tokens;
            match toks[0] {
                "register" if rounds.is_empty() => {
                    if toks.len() != 3 {
                        return Err(Error::parse(no, "expected `register NAME WIDTH`"));
                    }
                    let w = toks[2]
                        .parse()
                        .map_err(|_| Error::parse(no, format!("bad width `{}`", toks[2])))?;
                    registers.push(Register::new(toks[1], w));
                }
                "alice" if rounds.is_empty() => {
                    alice_initial.extend(toks[1..].iter().map(|s| s.to_string()));
                }
                "round" if measurer.is_none() => {
                    let (mut kv, bare) = split_pairs(&toks[1..], no)?;
                    let k: usize = take(&mut kv, "k", no)?;
                    let sender: Party = take::<String>(&mut kv, "sender", no)?
                        .parse()
                        .map_err(|e: Error| Error::parse(no, e.to_string()))?;
                    no_leftovers(&kv, no)?;
                    if !bare.is_empty() || k != rounds.len() + 1 {
                        return Err(Error::parse(
                            no,
                            format!("expected round k={}", rounds.len() + 1),
                        ));
                    }
                    rounds.push(TwoPartyRound {
                        sender,
                        gates: Vec::new(),
                        message: Vec::new(),
                    });
                }
                "gate" => {
                    let g = parse_gate(&toks[1..], no)?;
                    match (measurer, rounds.last_mut()) {
                        (Some(_), _) if output.is_none() => measurement.push(g),
                        (None, Some(r)) => r.gates.push(g),
                        _ => return Err(Error::parse(no, "gate outside a round")),
                    }
                }
                "send" if measurer.is_none() => {
                    let r = rounds
                        .last_mut()
                        .ok_or_else(|| Error::parse(no, "send outside a round"))?;
                    r.message.extend(toks[1..].iter().map(|s| s.to_string()));
                }
                "measure" if measurer.is_none() => {
                    let (mut kv, _) = split_pairs(&toks[1..], no)?;
                    let p: Party = take::<String>(&mut kv, "party", no)?
                        .parse()
                        .map_err(|e: Error| Error::parse(no, e.to_string()))?;
                    no_leftovers(&kv, no)?;
                    measurer = Some(p);
                }
                "output" if measurer.is_some() && output.is_none() => {
                    if toks.len() != 2 {
                        return Err(Error::parse(no, "expected `output reg[idx]`"));
                    }
                    output = Some(parse_qubit(toks[1], no)?);
                }
                other => return Err(Error::parse(no, format!("unexpected `{other}`"))),
            }
        }
        let last = text.lines().count().max(1);
        if rounds.len() != m {
            return Err(Error::parse(
                last,
                format!("header says m={m}, found {} rounds", rounds.len()),
            ));
        }
        let measurer = measurer.ok_or_else(|| Error::parse(last, "missing measure block"))?;
        let output = output.ok_or_else(|| Error::parse(last, "missing `output`"))?;
        Ok(TwoPartyProtocol {
            n,
            registers,
            alice_initial,
            rounds,
            measurer,
            measurement,
            output,
        })
    }

    pub fn to_ir(&self) -> String {
        let mut s = format!("twoparty m={} n={}\n", self.m(), self.n);
        for r in &self.registers {
            writeln!(s, "register {} {}", r.name, r.width).unwrap();
        }
        writeln!(s, "alice {}", self.alice_initial.join(" ")).unwrap();
        for (i, r) in self.rounds.iter().enumerate() {
            writeln!(s, "round k={} sender={}", i + 1, r.sender).unwrap();
            for g in &r.gates {
                writeln!(s, "gate {}", format_gate(g)).unwrap();
            }
            writeln!(s, "send {}", r.message.join(" ")).unwrap();
        }
        writeln!(s, "measure party={}", self.measurer).unwrap();
        for g in &self.measurement {
            writeln!(s, "gate {}", format_gate(g)).unwrap();
        }
        writeln!(s, "output {}", self.output).unwrap();
        s
    }
}

impl FromStr for TwoPartyProtocol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TwoPartyProtocol::parse(s)
    }
}
