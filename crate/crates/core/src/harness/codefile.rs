//! TOML description of a designed code: circuit shape, channel and frozen set.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::decoder::Code;
use crate::error::{Error, Result};
use crate::kernel::Kernel;

pub const CODE_FILE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub name: String,
    pub matrix: Vec<Vec<u8>>,
}

impl KernelEntry {
    pub fn from_kernel(kernel: &Kernel) -> Self {
        KernelEntry {
            name: kernel.name().to_string(),
            matrix: kernel.matrix().to_vec(),
        }
    }

    pub fn to_kernel(&self) -> Result<Kernel> {
        Kernel::new(self.matrix.clone(), &self.name)
    }

    pub fn load(path: &Path) -> Result<Kernel> {
        let text = std::fs::read_to_string(path)?;
        let entry: KernelEntry = toml::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
        entry.to_kernel()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeFile {
    pub spec_version: u32,
    pub block_length: usize,
    pub depth: usize,
    pub steps: usize,
    pub flip_probability: f64,
    pub info_count: usize,
    /// Frozen positions, 1-based and ascending.
    pub frozen: Vec<usize>,
    pub kernel: KernelEntry,
}

impl CodeFile {
    pub fn from_code(code: &Code, flip_probability: f64) -> Self {
        let circuit = code.circuit();
        CodeFile {
            spec_version: CODE_FILE_VERSION,
            block_length: circuit.len(),
            depth: circuit.depth(),
            steps: circuit.steps(),
            flip_probability,
            info_count: code.info_count(),
            frozen: code.frozen_indices().iter().map(|i| i + 1).collect(),
            kernel: KernelEntry::from_kernel(circuit.kernel()),
        }
    }

    pub fn to_code(&self) -> Result<Code> {
        if self.spec_version != CODE_FILE_VERSION {
            return Err(Error::Format(format!(
                "unsupported code file version {}",
                self.spec_version
            )));
        }
        let circuit = Circuit::new(self.kernel.to_kernel()?, self.depth, self.steps)?;
        let n = circuit.len();
        if n != self.block_length {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: self.block_length,
            });
        }
        if self.frozen.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format(
                "frozen positions must be strictly ascending".into(),
            ));
        }
        if let Some(&bad) = self.frozen.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::OutOfRange(format!(
                "frozen position {bad} outside 1..={n}"
            )));
        }
        if self.info_count + self.frozen.len() != n {
            return Err(Error::InvalidK {
                k: self.info_count,
                n,
            });
        }
        Code::new(circuit, self.frozen.iter().map(|i| i - 1))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let circuit = Circuit::new(Kernel::g3(), 2, 2).unwrap();
        let code = Code::new(circuit, [0, 1, 3, 4]).unwrap();
        let file = CodeFile::from_code(&code, 0.05);
        assert_eq!(file.frozen, vec![1, 2, 4, 5]);
        let text = file.to_toml().unwrap();
        let back = CodeFile::from_toml(&text).unwrap();
        assert_eq!(back, file);
        let code2 = back.to_code().unwrap();
        assert_eq!(code2.frozen_indices(), code.frozen_indices());
    }

    #[test]
    fn rejects_bad_files() {
        let circuit = Circuit::new(Kernel::cnot(), 1, 2).unwrap();
        let code = Code::new(circuit, [0]).unwrap();
        let good = CodeFile::from_code(&code, 0.1);

        let mut f = good.clone();
        f.spec_version = 9;
        assert!(f.to_code().is_err());
        let mut f = good.clone();
        f.frozen = vec![5];
        assert!(f.to_code().is_err());
        let mut f = good.clone();
        f.info_count = 1;
        assert!(f.to_code().is_err());
        let mut f = good;
        f.block_length = 8;
        assert!(f.to_code().is_err());
        assert!(CodeFile::from_toml("nonsense = [").is_err());
    }
}
