//! Polarization kernels: invertible F2-linear maps on `b` bits.
//!
//! A kernel is given by a `b x b` bit matrix `M`. A word `u` is mapped to
//! `x` with `x_j = XOR_i u_i * M[i][j]`, i.e. the word is treated as a row
//! vector multiplied on the right by `M`. With this convention the matrix
//! `[[1,0],[1,1]]` is the CNOT `(u1, u2) -> (u1 ^ u2, u2)`.
//!
//! Words are packed into integers with wire 1 in the least significant bit.

use std::fmt;

use crate::error::{check_bits, Error, Result};

/// Largest breadth accepted; the action table has `2^b` entries.
pub const MAX_BREADTH: usize = 16;

#[derive(Clone, PartialEq, Eq)]
pub struct Kernel {
    name: String,
    matrix: Vec<Vec<u8>>,
    /// `table[u] = x` for every packed input `u`.
    table: Vec<u32>,
}

impl Kernel {
    /// Validates `matrix` and builds the kernel. Fails with
    /// [`Error::SingularMatrix`] when the matrix is not invertible over F2.
    pub fn new(matrix: Vec<Vec<u8>>, name: impl Into<String>) -> Result<Self> {
        let b = matrix.len();
        for row in &matrix {
            if row.len() != b {
                return Err(Error::NotSquare {
                    rows: b,
                    cols: row.len(),
                });
            }
            check_bits(row)?;
        }
        if b < 2 {
            return Err(Error::NotSquare { rows: b, cols: b });
        }
        if b > MAX_BREADTH {
            return Err(Error::TooLarge {
                what: "kernel breadth",
                size: b,
                limit: MAX_BREADTH,
            });
        }
        let rows: Vec<u32> = matrix.iter().map(|r| pack(r)).collect();
        if rank(&rows, b) != b {
            return Err(Error::SingularMatrix);
        }

        // columns[j] has bit i set iff M[i][j] = 1
        let columns: Vec<u32> = (0..b)
            .map(|j| {
                (0..b)
                    .filter(|&i| matrix[i][j] == 1)
                    .fold(0u32, |acc, i| acc | (1 << i))
            })
            .collect();
        let table = (0..1u32 << b)
            .map(|u| {
                columns
                    .iter()
                    .enumerate()
                    .fold(0u32, |x, (j, col)| x | (((u & col).count_ones() & 1) << j))
            })
            .collect();

        Ok(Kernel {
            name: name.into(),
            matrix,
            table,
        })
    }

    /// The breadth-2 CNOT kernel.
    pub fn cnot() -> Self {
        Self::new(vec![vec![1, 0], vec![1, 1]], "cnot").expect("CNOT is invertible")
    }

    /// The breadth-3 kernel `G3`.
    pub fn g3() -> Self {
        Self::new(vec![vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 1]], "g3")
            .expect("G3 is invertible")
    }

    /// The breadth-4 kernel `G4`.
    pub fn g4() -> Self {
        Self::new(
            vec![
                vec![1, 0, 0, 0],
                vec![1, 1, 0, 0],
                vec![0, 1, 1, 0],
                vec![0, 0, 1, 1],
            ],
            "g4",
        )
        .expect("G4 is invertible")
    }

    /// The `b x b` identity (a non-polarizing kernel).
    pub fn identity(b: usize) -> Result<Self> {
        let matrix = (0..b)
            .map(|i| (0..b).map(|j| u8::from(i == j)).collect())
            .collect();
        Self::new(matrix, format!("id{b}"))
    }

    /// Looks up one of the built-in kernels by name.
    pub fn named(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "cnot" | "g2" => Some(Self::cnot()),
            "g3" => Some(Self::g3()),
            "g4" => Some(Self::g4()),
            _ => None,
        }
    }

    pub fn breadth(&self) -> usize {
        self.matrix.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &[Vec<u8>] {
        &self.matrix
    }

    /// Applies the kernel to a `b`-bit word.
    pub fn apply(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.breadth() {
            return Err(Error::LengthMismatch {
                expected: self.breadth(),
                actual: u.len(),
            });
        }
        check_bits(u)?;
        let x = self.apply_packed(pack(u));
        Ok((0..self.breadth()).map(|j| ((x >> j) & 1) as u8).collect())
    }

    /// Applies the kernel to a packed word (wire 1 in bit 0).
    #[inline]
    pub fn apply_packed(&self, u: u32) -> u32 {
        self.table[u as usize]
    }

    /// True unless the matrix is a permutation matrix.
    pub fn is_polarizing(&self) -> bool {
        let b = self.breadth();
        let rows_ok = self
            .matrix
            .iter()
            .all(|r| r.iter().filter(|&&v| v == 1).count() == 1);
        let cols_ok = (0..b).all(|j| self.matrix.iter().filter(|r| r[j] == 1).count() == 1);
        !(rows_ok && cols_ok)
    }

    /// The `2^b x 2^b` 0/1 matrix acting on probability vectors over `b`-bit
    /// strings: column `u` has its single 1 in row `apply(u)`.
    pub fn tensor(&self) -> Vec<Vec<u8>> {
        let size = self.table.len();
        let mut m = vec![vec![0u8; size]; size];
        for (u, &x) in self.table.iter().enumerate() {
            m[x as usize][u] = 1;
        }
        m
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("name", &self.name)
            .field("matrix", &self.matrix)
            .finish()
    }
}

fn pack(bits: &[u8]) -> u32 {
    bits.iter()
        .enumerate()
        .fold(0u32, |acc, (i, &v)| acc | (u32::from(v & 1) << i))
}

fn rank(rows: &[u32], b: usize) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for col in 0..b {
        let bit = 1u32 << col;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r] & bit != 0 {
                rows[r] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}
