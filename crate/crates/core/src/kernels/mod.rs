//! Translation-invariant positive definite kernels `K(x, y) = Φ(x - y)`.
//!
//! Every family here is radial, so `Φ` depends only on `r = ‖x - y‖₂` and
//! `K(x, x) = Φ(0) = 1`. Symmetry holds bit-for-bit because the distance is
//! accumulated from squared coordinate differences.

pub(crate) mod gram;
mod holder;

pub use gram::{assemble_gram, factorize, GramMatrix, JitterPolicy, AUTO_JITTER_LADDER};
pub use holder::{estimate_holder, fit_holder, HolderEstimate, HolderSample};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::distance_squared;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `exp(-(ε r)²)`
    Gaussian { shape: f64 },
    /// `(1 + (ε r)²)^(-1/2)`
    InverseMultiquadric { shape: f64 },
    /// `exp(-r^α)`, `α ∈ (0, 1]`
    GeneralizedExponential { exponent: f64 },
    /// `(1 - r/ρ)₊⁴ (4 r/ρ + 1)`, positive definite for `d <= 3`
    Wendland31 { support: f64 },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Gaussian { .. } => "gaussian",
            Family::InverseMultiquadric { .. } => "imq",
            Family::GeneralizedExponential { .. } => "genexp",
            Family::Wendland31 { .. } => "wendland31",
        }
    }

    /// Local Hölder order of the kernel translates.
    pub fn declared_holder_exponent(&self) -> f64 {
        match *self {
            Family::GeneralizedExponential { exponent } => exponent,
            _ => 1.0,
        }
    }
}

/// Declared constant `C` and radius `r` of the local Hölder condition
/// `|K_x(y₁) - K_x(y₂)| <= C ‖y₁ - y₂‖^α` for `‖y₁ - y₂‖ < r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderConstant {
    pub constant: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    family: Family,
    holder_exponent: Option<f64>,
    holder_constant: Option<HolderConstant>,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

fn holder_order(v: f64) -> Result<f64> {
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(Error::invalid(format!("Hölder exponent must lie in (0, 1], got {v}")))
    }
}

impl Kernel {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::Gaussian { shape } | Family::InverseMultiquadric { shape } => {
                positive("shape", shape)?;
            }
            Family::GeneralizedExponential { exponent } => {
                holder_order(exponent)?;
            }
            Family::Wendland31 { support } => {
                positive("support radius", support)?;
            }
        }
        Ok(Kernel {
            family,
            holder_exponent: Some(family.declared_holder_exponent()),
            holder_constant: None,
        })
    }

    pub fn gaussian(shape: f64) -> Result<Self> {
        Kernel::new(Family::Gaussian { shape })
    }

    pub fn inverse_multiquadric(shape: f64) -> Result<Self> {
        Kernel::new(Family::InverseMultiquadric { shape })
    }

    pub fn generalized_exponential(exponent: f64) -> Result<Self> {
        Kernel::new(Family::GeneralizedExponential { exponent })
    }

    pub fn wendland31(support: f64) -> Result<Self> {
        Kernel::new(Family::Wendland31 { support })
    }

    /// Overrides the declared Hölder exponent.
    pub fn with_holder_exponent(mut self, alpha: f64) -> Result<Self> {
        self.holder_exponent = Some(holder_order(alpha)?);
        Ok(self)
    }

    pub fn with_holder_constant(mut self, constant: f64, radius: f64) -> Result<Self> {
        self.holder_constant = Some(HolderConstant {
            constant: positive("Hölder constant", constant)?,
            radius: positive("Hölder radius", radius)?,
        });
        Ok(self)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn holder_exponent(&self) -> Option<f64> {
        self.holder_exponent
    }

    pub fn holder_constant(&self) -> Option<HolderConstant> {
        self.holder_constant
    }

    /// Two kernels describe the same function.
    pub fn same_function(&self, other: &Kernel) -> bool {
        self.family == other.family
    }

    /// The radial profile `Φ` as a function of the distance `r >= 0`.
    #[inline]
    pub fn profile(&self, r: f64) -> f64 {
        match self.family {
            Family::Gaussian { shape } => {
                let s = shape * r;
                (-s * s).exp()
            }
            Family::InverseMultiquadric { shape } => {
                let s = shape * r;
                1.0 / (1.0 + s * s).sqrt()
            }
            Family::GeneralizedExponential { exponent } => (-r.powf(exponent)).exp(),
            Family::Wendland31 { support } => {
                let t = r / support;
                if t >= 1.0 {
                    0.0
                } else {
                    let u = 1.0 - t;
                    let u2 = u * u;
                    u2 * u2 * (4.0 * t + 1.0)
                }
            }
        }
    }

    /// `Φ(0)`, which bounds `K(x, x)` for every family.
    pub fn diagonal(&self) -> f64 {
        self.profile(0.0)
    }

    /// `K(x, y)` without a dimension check.
    #[inline]
    pub fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        self.profile(distance_squared(x, y).sqrt())
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        Ok(self.eval_unchecked(x, y))
    }

    pub fn from_spec(spec: &KernelSpec) -> Result<Self> {
        let family = match spec.family {
            FamilyTag::Gaussian => Family::Gaussian {
                shape: spec.require_shape()?,
            },
            FamilyTag::Imq => Family::InverseMultiquadric {
                shape: spec.require_shape()?,
            },
            FamilyTag::Genexp => Family::GeneralizedExponential {
                exponent: spec.require_shape()?,
            },
            FamilyTag::Wendland31 => Family::Wendland31 {
                support: spec
                    .support
                    .or(spec.shape)
                    .ok_or_else(|| Error::config("wendland31 needs `support` (or `shape`)"))?,
            },
        };
        let kernel = Kernel::new(family)?;
        match spec.alpha {
            Some(alpha) => kernel.with_holder_exponent(alpha),
            None => Ok(kernel),
        }
    }

    pub fn spec(&self) -> KernelSpec {
        let default_alpha = self.family.declared_holder_exponent();
        let alpha = self.holder_exponent.filter(|&a| a != default_alpha);
        let (family, shape, support) = match self.family {
            Family::Gaussian { shape } => (FamilyTag::Gaussian, shape, None),
            Family::InverseMultiquadric { shape } => (FamilyTag::Imq, shape, None),
            Family::GeneralizedExponential { exponent } => (FamilyTag::Genexp, exponent, None),
            Family::Wendland31 { support } => (FamilyTag::Wendland31, support, Some(support)),
        };
        KernelSpec {
            family,
            shape: Some(shape),
            alpha,
            support,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    Gaussian,
    Imq,
    Genexp,
    Wendland31,
}

/// JSON description of a kernel:
/// `{"family": "gaussian"|"imq"|"genexp"|"wendland31", "shape": ..., "alpha": ..., "support": ...}`.
///
/// `shape` is the length scale ε for `gaussian` and `imq` and the exponent for
/// `genexp`. `support` is the Wendland radius (`shape` is accepted in its place).
/// `alpha` overrides the declared Hölder exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub family: FamilyTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<f64>,
}

impl KernelSpec {
    fn require_shape(&self) -> Result<f64> {
        self.shape
            .ok_or_else(|| Error::config("kernel spec is missing `shape`"))
    }
}
