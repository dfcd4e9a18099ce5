use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered assignment of named registers to qubits.
///
/// The first listed register occupies the most significant qubits: a basis
/// index is the big-endian binary reading of the register contents, so
/// tensoring operators in layout order needs no index remapping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayoutDto", into = "LayoutDto")]
pub struct RegisterLayout {
    registers: Vec<(String, usize)>,
}

#[derive(Serialize, Deserialize)]
struct LayoutDto {
    registers: Vec<RegisterDto>,
}

#[derive(Serialize, Deserialize)]
struct RegisterDto {
    name: String,
    qubits: usize,
}

impl From<RegisterLayout> for LayoutDto {
    fn from(layout: RegisterLayout) -> Self {
        LayoutDto {
            registers: layout
                .registers
                .into_iter()
                .map(|(name, qubits)| RegisterDto { name, qubits })
                .collect(),
        }
    }
}

impl TryFrom<LayoutDto> for RegisterLayout {
    type Error = Error;

    fn try_from(dto: LayoutDto) -> Result<Self> {
        RegisterLayout::new(dto.registers.into_iter().map(|r| (r.name, r.qubits)).collect())
    }
}

impl RegisterLayout {
    /// An empty layout describes the one-dimensional scalar space.
    pub fn new(registers: Vec<(String, usize)>) -> Result<Self> {
        for (i, (name, qubits)) in registers.iter().enumerate() {
            if *qubits == 0 {
                return Err(Error::Layout(format!("register '{name}' has zero qubits")));
            }
            if registers[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::Layout(format!("duplicate register name '{name}'")));
            }
        }
        Ok(Self { registers })
    }

    pub fn single(name: &str, qubits: usize) -> Result<Self> {
        Self::new(vec![(name.to_string(), qubits)])
    }

    pub fn empty() -> Self {
        Self { registers: Vec::new() }
    }

    pub fn registers(&self) -> &[(String, usize)] {
        &self.registers
    }

    pub fn names(&self) -> Vec<&str> {
        self.registers.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn total_qubits(&self) -> usize {
        self.registers.iter().map(|(_, q)| q).sum()
    }

    pub fn dim(&self) -> usize {
        1usize << self.total_qubits()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.registers.iter().any(|(n, _)| n == name)
    }

    pub fn qubit_count(&self, name: &str) -> Result<usize> {
        self.registers
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, q)| *q)
            .ok_or_else(|| Error::Layout(format!("unknown register '{name}'")))
    }

    /// Position (from the most significant qubit) of the first qubit of a register.
    pub fn qubit_offset(&self, name: &str) -> Result<usize> {
        let mut offset = 0;
        for (n, q) in &self.registers {
            if n == name {
                return Ok(offset);
            }
            offset += q;
        }
        Err(Error::Layout(format!("unknown register '{name}'")))
    }

    /// Qubit positions of a register, most significant first.
    pub fn qubit_positions(&self, name: &str) -> Result<Vec<usize>> {
        let offset = self.qubit_offset(name)?;
        let count = self.qubit_count(name)?;
        Ok((offset..offset + count).collect())
    }

    /// Qubit positions of several registers, concatenated in the given order.
    pub fn qubit_positions_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut positions = Vec::new();
        for name in names {
            positions.extend(self.qubit_positions(name)?);
        }
        Ok(positions)
    }

    /// Layout of the registers that remain after removing `names`.
    pub fn without(&self, names: &[&str]) -> Result<RegisterLayout> {
        for name in names {
            if !self.contains(name) {
                return Err(Error::Layout(format!("unknown register '{name}'")));
            }
        }
        RegisterLayout::new(
            self.registers
                .iter()
                .filter(|(n, _)| !names.contains(&n.as_str()))
                .cloned()
                .collect(),
        )
    }

    /// Layout with the same registers listed in a new order.
    pub fn reordered(&self, new_order: &[&str]) -> Result<RegisterLayout> {
        if new_order.len() != self.registers.len() {
            return Err(Error::Layout(format!(
                "permutation lists {} registers, layout has {}",
                new_order.len(),
                self.registers.len()
            )));
        }
        let mut seen = Vec::with_capacity(new_order.len());
        let mut registers = Vec::with_capacity(new_order.len());
        for name in new_order {
            if seen.contains(name) {
                return Err(Error::Layout(format!("register '{name}' repeated in permutation")));
            }
            seen.push(name);
            registers.push((name.to_string(), self.qubit_count(name)?));
        }
        RegisterLayout::new(registers)
    }

    /// Merge all registers into a single one, preserving qubit order.
    pub fn merged(&self, name: &str) -> Result<RegisterLayout> {
        RegisterLayout::single(name, self.total_qubits())
    }
}
