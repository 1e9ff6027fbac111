use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest total dimension a dense state may have.
pub const MAX_TOTAL_DIM: usize = 1 << 22;

/// Ordered list of named registers with their dimensions.
///
/// Register 0 is the most significant digit of the mixed-radix index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterShape {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl RegisterShape {
    pub fn new<I, S>(registers: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let (labels, dims): (Vec<String>, Vec<usize>) =
            registers.into_iter().map(|(l, d)| (l.into(), d)).unzip();
        if dims.is_empty() {
            return Err(Error::ShapeMismatch("a shape needs at least one register".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::ShapeMismatch(format!("register dimension {d} is below 2")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::ShapeMismatch(format!("duplicate register label `{l}`")));
            }
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= MAX_TOTAL_DIM)
                .ok_or_else(|| {
                    Error::Capacity(format!("total dimension exceeds {MAX_TOTAL_DIM}"))
                })?;
        }
        Ok(RegisterShape { dims, labels })
    }

    /// A single unnamed-ish register of dimension `dim`.
    pub fn single(label: &str, dim: usize) -> Result<Self> {
        Self::new([(label, dim)])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn dim(&self, reg: usize) -> usize {
        self.dims[reg]
    }

    /// Stride of register `reg` in the flat amplitude index.
    pub fn stride(&self, reg: usize) -> usize {
        self.dims[reg + 1..].iter().product()
    }

    pub fn resolve(&self, addr: impl Address) -> Result<usize> {
        addr.resolve(self)
    }

    /// Flat index of a mixed-radix tuple.
    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.dims.len() {
            return Err(Error::Address(format!(
                "tuple has {} digits, shape has {} registers",
                digits.len(),
                self.dims.len()
            )));
        }
        let mut idx = 0;
        for (&d, &dim) in digits.iter().zip(&self.dims) {
            if d >= dim {
                return Err(Error::Address(format!("digit {d} out of range for dimension {dim}")));
            }
            idx = idx * dim + d;
        }
        Ok(idx)
    }

    /// Mixed-radix digits of a flat index.
    pub fn digits_of(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &dim) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % dim;
            index /= dim;
        }
        out
    }

    /// Concatenation `self ⊗ other`. Labels of `other` that collide get `'` appended
    /// until unique.
    pub fn concat(&self, other: &RegisterShape) -> Result<Self> {
        let mut regs: Vec<(String, usize)> =
            self.labels.iter().cloned().zip(self.dims.iter().copied()).collect();
        for (l, &d) in other.labels.iter().zip(&other.dims) {
            let mut label = l.clone();
            while regs.iter().any(|(x, _)| *x == label) {
                label.push('\'');
            }
            regs.push((label, d));
        }
        Self::new(regs)
    }
}

/// Something that names a register of a shape: an index or a label.
pub trait Address {
    fn resolve(&self, shape: &RegisterShape) -> Result<usize>;
}

impl Address for usize {
    fn resolve(&self, shape: &RegisterShape) -> Result<usize> {
        if *self < shape.len() {
            Ok(*self)
        } else {
            Err(Error::Address(format!(
                "register index {self} out of range for {} registers",
                shape.len()
            )))
        }
    }
}

impl Address for &str {
    fn resolve(&self, shape: &RegisterShape) -> Result<usize> {
        shape
            .labels
            .iter()
            .position(|l| l == self)
            .ok_or_else(|| Error::Address(format!("no register labelled `{self}`")))
    }
}

impl Address for &String {
    fn resolve(&self, shape: &RegisterShape) -> Result<usize> {
        self.as_str().resolve(shape)
    }
}
