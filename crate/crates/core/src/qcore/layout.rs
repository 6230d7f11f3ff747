use std::collections::HashSet;

use crate::error::{Error, Result};

/// Default ceiling on the number of qubits in a dense state vector.
pub const DEFAULT_QUBIT_CAP: usize = 26;

/// A named block of qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    pub name: String,
    pub width: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, width: usize) -> Self {
        Register {
            name: name.into(),
            width,
        }
    }
}

/// Ordered list of registers.
///
/// Amplitude indices are register-major and big-endian: the first register
/// holds the most significant bits, and qubit 0 of a register is that
/// register's most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
    offsets: Vec<usize>,
    total: usize,
}

impl RegisterLayout {
    pub fn new(registers: Vec<Register>) -> Result<Self> {
        Self::with_cap(registers, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap(registers: Vec<Register>, cap: usize) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut offsets = Vec::with_capacity(registers.len());
        let mut total = 0;
        for r in &registers {
            if r.width == 0 {
                return Err(Error::Invalid(format!("register `{}` has width 0", r.name)));
            }
            if !seen.insert(r.name.as_str()) {
                return Err(Error::Invalid(format!("duplicate register `{}`", r.name)));
            }
            offsets.push(total);
            total += r.width;
        }
        if total > cap {
            return Err(Error::CapExceeded { needed: total, cap });
        }
        Ok(RegisterLayout {
            registers,
            offsets,
            total,
        })
    }

    /// Convenience constructor from `(name, width)` pairs.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, usize)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(n, w)| Register::new(n.as_ref(), *w))
                .collect(),
        )
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn total_qubits(&self) -> usize {
        self.total
    }

    pub fn dimension(&self) -> usize {
        1usize << self.total
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.registers.iter().position(|r| r.name == name)
    }

    pub fn width(&self, name: &str) -> Result<usize> {
        self.position(name)
            .map(|p| self.registers[p].width)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    /// Global qubit position (0 = most significant) of `name[index]`.
    pub fn qubit(&self, name: &str, index: usize) -> Result<usize> {
        let p = self
            .position(name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))?;
        let width = self.registers[p].width;
        if index >= width {
            return Err(Error::QubitOutOfRange {
                register: name.to_string(),
                index,
                width,
            });
        }
        Ok(self.offsets[p] + index)
    }

    /// All global qubit positions of a register, most significant first.
    pub fn qubits_of(&self, name: &str) -> Result<Vec<usize>> {
        let p = self
            .position(name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))?;
        let off = self.offsets[p];
        Ok((off..off + self.registers[p].width).collect())
    }

    /// Qubit positions of a set of registers, in layout order.
    pub fn qubits_of_set<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        for n in names {
            if !self.contains(n.as_ref()) {
                return Err(Error::UnknownRegister(n.as_ref().to_string()));
            }
        }
        let mut out = Vec::new();
        for (i, r) in self.registers.iter().enumerate() {
            if names.iter().any(|n| n.as_ref() == r.name) {
                out.extend(self.offsets[i]..self.offsets[i] + r.width);
            }
        }
        Ok(out)
    }

    /// Sub-layout holding only `keep`, in this layout's order.
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<RegisterLayout> {
        for n in keep {
            if !self.contains(n.as_ref()) {
                return Err(Error::UnknownRegister(n.as_ref().to_string()));
            }
        }
        RegisterLayout::with_cap(
            self.registers
                .iter()
                .filter(|r| keep.iter().any(|k| k.as_ref() == r.name))
                .cloned()
                .collect(),
            usize::MAX,
        )
    }

    pub fn names(&self) -> Vec<String> {
        self.registers.iter().map(|r| r.name.clone()).collect()
    }

    /// Bit shift of a global qubit position inside an amplitude index.
    pub(crate) fn shift(&self, qubit: usize) -> usize {
        self.total - 1 - qubit
    }

    /// Concatenation of two layouts.
    pub fn concat(&self, other: &RegisterLayout) -> Result<RegisterLayout> {
        let mut regs = self.registers.clone();
        regs.extend(other.registers.iter().cloned());
        RegisterLayout::new(regs)
    }
}
