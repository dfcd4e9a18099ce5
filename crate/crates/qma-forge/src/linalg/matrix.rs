use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Complex amplitude type used throughout the crate.
pub type C64 = num_complex::Complex<f64>;

/// Upper bound on the number of amplitudes a single dense matrix may hold.
pub const DENSE_AMPLITUDE_BUDGET: u128 = 1 << 24;

/// Dense complex matrix in row-major order.
///
/// All operators in the crate (circuits, acceptance operators, density
/// matrices) are stored in this one representation. Constructors reject
/// non-finite amplitudes and anything over the dense size budget.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        check_budget(rows, cols)?;
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Contract("matrix contains non-finite amplitudes".into()));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_budget(rows, cols)?;
        Ok(Self { rows, cols, entries: vec![C64::new(0.0, 0.0); rows * cols] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim, dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        check_budget(rows, cols)?;
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    /// Real diagonal matrix.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len(), values.len())?;
        for (i, v) in values.iter().enumerate() {
            m.entries[i * values.len() + i] = C64::new(*v, 0.0);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols)?;
        // ikj order keeps the inner loop contiguous in both operands.
        for i in 0..self.rows {
            let out_row = &mut out.entries[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.entries[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::Shape(format!(
                "cannot apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = C64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "dimension mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(*a, *b)).collect();
        Self::new(self.rows, self.cols, entries)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scaled_real(&self, factor: f64) -> Self {
        self.scaled(C64::new(factor, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut entries = vec![C64::new(0.0, 0.0); self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[j * self.rows + i] = self.entries[i * self.cols + j].conj();
            }
        }
        Self { rows: self.cols, cols: self.rows, entries }
    }

    pub fn trace(&self) -> C64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.entries[i * self.cols + i]).sum()
    }

    /// tr(self * rhs) without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Result<C64> {
        if self.cols != rhs.rows || self.rows != rhs.cols {
            return Err(Error::Shape("trace_product needs compatible shapes".into()));
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += self.entries[i * self.cols + j] * rhs.entries[j * rhs.cols + i];
            }
        }
        Ok(acc)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        debug_assert_eq!(self.rows, rhs.rows);
        debug_assert_eq!(self.cols, rhs.cols);
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self.entries[i * self.cols + j] - self.entries[j * self.cols + i].conj();
                if d.norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// (A + A†)/2; used before Hermitian decompositions.
    pub fn hermitized(&self) -> Self {
        let adj = self.adjoint();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&adj.entries)
                .map(|(a, b)| (a + b) * 0.5)
                .collect(),
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        // Gram matrix of columns against the identity.
        for a in 0..self.cols {
            for b in a..self.cols {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..self.rows {
                    acc += self.entries[i * self.cols + a].conj() * self.entries[i * self.cols + b];
                }
                let target = if a == b { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                if (acc - target).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.entries[i * self.cols + j]).collect()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{})", self.rows, self.cols)
    }
}

fn check_budget(rows: usize, cols: usize) -> Result<()> {
    let amplitudes = rows as u128 * cols as u128;
    if amplitudes > DENSE_AMPLITUDE_BUDGET {
        return Err(Error::SizeLimit { amplitudes, budget: DENSE_AMPLITUDE_BUDGET });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct MatrixDto {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = MatrixDto {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        };
        dto.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dto = MatrixDto::deserialize(deserializer)?;
        let entries = dto.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        ComplexMatrix::new(dto.rows, dto.cols, entries).map_err(D::Error::custom)
    }
}
