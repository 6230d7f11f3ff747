use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A classical bitstring; position 0 is the first input bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bits(pub Vec<bool>);

impl Bits {
    pub fn zeros(n: usize) -> Self {
        Bits(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        Bits(vec![true; n])
    }

    /// Bitstring of length `n` whose first bit is the most significant bit of `value`.
    pub fn from_value(value: u64, n: usize) -> Self {
        Bits((0..n).map(|i| (value >> (n - 1 - i)) & 1 == 1).collect())
    }

    pub fn value(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    /// All 2^n bitstrings of length n in increasing numeric order.
    pub fn all(n: usize) -> impl Iterator<Item = Bits> {
        (0..1u64 << n).map(move |v| Bits::from_value(v, n))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Invalid(format!("`{other}` is not a bit in `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Bits)
    }
}

/// Classical values bound to registers that are not part of a state vector.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassicalBits {
    entries: Vec<(String, Bits)>,
}

impl ClassicalBits {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, register: impl Into<String>, bits: Bits) -> Self {
        self.entries.push((register.into(), bits));
        self
    }

    pub fn get(&self, register: &str, index: usize) -> Option<bool> {
        self.entries
            .iter()
            .find(|(n, _)| n == register)
            .and_then(|(_, b)| b.0.get(index).copied())
    }

    pub fn register(&self, register: &str) -> Option<&Bits> {
        self.entries
            .iter()
            .find(|(n, _)| n == register)
            .map(|(_, b)| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_roundtrip() {
        let b: Bits = "0110".parse().unwrap();
        assert_eq!(b.value(), 6);
        assert_eq!(Bits::from_value(6, 4), b);
        assert_eq!(b.to_string(), "0110");
        assert!("01a".parse::<Bits>().is_err());
        assert_eq!(Bits::all(3).count(), 8);
    }
}
