use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::shape::RegisterShape;
use crate::error::{Error, Result};

/// Squared-norm tolerance for states handed in by callers.
pub const INPUT_NORM_TOL: f64 = 1e-9;
/// Squared-norm tolerance for states produced internally.
pub const INTERNAL_NORM_TOL: f64 = 1e-12;

/// Dense pure state over a mixed-radix register shape.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    shape: RegisterShape,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps `amps`, which must already be normalized within [`INPUT_NORM_TOL`].
    pub fn new(shape: RegisterShape, amps: Vec<Complex64>) -> Result<Self> {
        check_len(&shape, amps.len())?;
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(PureState { shape, amps })
    }

    /// Normalizes `amps` first. Fails on the zero vector.
    pub fn normalized(shape: RegisterShape, mut amps: Vec<Complex64>) -> Result<Self> {
        check_len(&shape, amps.len())?;
        let n2 = norm_sqr(&amps);
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::NotNormalized(n2));
        }
        let s = 1.0 / n2.sqrt();
        amps.iter_mut().for_each(|a| *a *= s);
        Ok(PureState { shape, amps })
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(shape: RegisterShape, digits: &[usize]) -> Result<Self> {
        let idx = shape.index_of(digits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); shape.total_dim()];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(PureState { shape, amps })
    }

    /// Haar-random state: a normalized vector of i.i.d. complex Gaussians.
    pub fn haar_random<R: Rng + ?Sized>(shape: RegisterShape, rng: &mut R) -> Self {
        let amps: Vec<Complex64> = (0..shape.total_dim())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        // A Gaussian vector is zero with probability zero.
        Self::normalized(shape, amps).expect("gaussian vector has positive norm")
    }

    pub(crate) fn from_parts_unchecked(shape: RegisterShape, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(shape.total_dim(), amps.len());
        PureState { shape, amps }
    }

    pub fn shape(&self) -> &RegisterShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, digits: &[usize]) -> Result<Complex64> {
        Ok(self.amps[self.shape.index_of(digits)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// Computational-basis probabilities over the whole register list.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`. Only the dimensions have to agree, not the labels.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        self.check_same_dims(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap_sqr(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Fidelity up to global phase, `|⟨self|other⟩|²`; alias kept for readability at call sites.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        self.overlap_sqr(other)
    }

    pub(crate) fn check_same_dims(&self, other: &PureState) -> Result<()> {
        if self.shape.dims() != other.shape.dims() {
            return Err(Error::ShapeMismatch(format!(
                "dimensions {:?} vs {:?}",
                self.shape.dims(),
                other.shape.dims()
            )));
        }
        Ok(())
    }

    /// Same amplitudes under a relabelled shape with identical dimensions.
    pub fn with_shape(self, shape: RegisterShape) -> Result<Self> {
        if shape.dims() != self.shape.dims() {
            return Err(Error::ShapeMismatch(format!(
                "cannot view {:?} as {:?}",
                self.shape.dims(),
                shape.dims()
            )));
        }
        Ok(PureState { shape, amps: self.amps })
    }

    /// Removes register `reg`, which must be in basis state `value` (within `tol` of
    /// probability mass elsewhere). Used to drop disentangled ancillas.
    pub fn drop_register(&self, reg: usize, value: usize, tol: f64) -> Result<PureState> {
        let reg = self.shape.resolve(reg)?;
        if self.shape.len() < 2 {
            return Err(Error::Address("cannot drop the only register".into()));
        }
        let dim = self.shape.dim(reg);
        if value >= dim {
            return Err(Error::Address(format!("value {value} out of range {dim}")));
        }
        let stride = self.shape.stride(reg);
        let mut kept = Vec::with_capacity(self.amps.len() / dim);
        let mut stray = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            if (i / stride) % dim == value {
                kept.push(*a);
            } else {
                stray += a.norm_sqr();
            }
        }
        if stray > tol {
            return Err(Error::ShapeMismatch(format!(
                "register {reg} carries {stray:e} weight outside |{value}⟩"
            )));
        }
        let shape = RegisterShape::new(
            self.shape
                .labels()
                .iter()
                .zip(self.shape.dims())
                .enumerate()
                .filter(|(i, _)| *i != reg)
                .map(|(_, (l, &d))| (l.clone(), d)),
        )?;
        PureState::normalized(shape, kept)
    }
}

/// `a ⊗ b`; the amplitude of `(i, j)` is `a[i]·b[j]`.
pub fn tensor(a: &PureState, b: &PureState) -> Result<PureState> {
    let shape = a.shape.concat(&b.shape)?;
    let mut amps = Vec::with_capacity(shape.total_dim());
    for x in &a.amps {
        amps.extend(b.amps.iter().map(|y| x * y));
    }
    Ok(PureState { shape, amps })
}

/// `|u_m⟩`, the uniform superposition over `m` basis states. For `m = 1` this is the
/// scalar state `|0⟩`, represented as a single amplitude.
pub fn uniform_amplitudes(m: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0 / (m as f64).sqrt(), 0.0); m]
}

/// `|u_m⟩` on a single register labelled `u`. `m = 1` is allowed here and yields
/// the one-amplitude vector `[1]`, which has no register shape of its own, so it is
/// returned inside a dimension-2 register as `|0⟩`.
pub fn uniform_state(m: usize) -> Result<PureState> {
    match m {
        0 => Err(Error::InvalidArgument("uniform state needs m ≥ 1".into())),
        1 => PureState::basis(RegisterShape::single("u", 2)?, &[0]),
        _ => PureState::new(RegisterShape::single("u", m)?, uniform_amplitudes(m)),
    }
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

fn check_len(shape: &RegisterShape, len: usize) -> Result<()> {
    if shape.total_dim() != len {
        return Err(Error::ShapeMismatch(format!(
            "{} amplitudes for total dimension {}",
            len,
            shape.total_dim()
        )));
    }
    Ok(())
}
