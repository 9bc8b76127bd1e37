//! Symbols in the closed unit ball of H-infinity and their boundary data.

mod analysis;
mod boundary;
mod profile;

pub use analysis::{
    extremality_diagnostic, inner_diagnostic, moments_of_modulus_squared, parity_classify,
    taylor_coefficients, ExtremalityReport, ExtremalityVerdict, InnerReport, MomentSequence,
    Parity, ParityReport,
};
pub use boundary::{construct_outer_from_modulus, evaluate_boundary, BoundaryGrid};
pub use profile::{ModulusArc, ModulusProfile, Pocket, ProfileError, SineFactor};

use crate::C64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("symbol spec does not match the schema: {0}")]
    Schema(String),
    #[error("blaschke zero outside the open disk: |{0}| >= 1")]
    ZeroOutsideDisk(C64),
    #[error("scale exceeds the unit ball: |{0}| > 1")]
    ScaleTooLarge(C64),
    #[error("boundary norm exceeds the unit bound: max |b| = {0}")]
    NormExceeded(f64),
    #[error("grid size must be a power of two >= 16, got {0}")]
    BadGridSize(usize),
    #[error("truncation order {0} exceeds half the grid size {1}")]
    OrderTooLarge(usize, usize),
    #[error("zero coefficient vector")]
    ZeroVector,
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("empty product")]
    EmptyProduct,
}

/// Declared membership class of the symbol in the unit ball. The declared
/// class always overrides the numerical diagnostics for downstream
/// algorithm selection; extremality is not decidable from finite data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DeclaredClass {
    Inner,
    ExtremeNonInner,
    Nonextreme,
    #[default]
    Unknown,
}

/// Declarative description of a symbol b.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub kind: SymbolKind,
    #[serde(default)]
    pub declared_class: DeclaredClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolKind {
    /// Finite Blaschke product with the given zeros (with multiplicity).
    Blaschke {
        #[serde(
            serialize_with = "serialize_complex_vec",
            deserialize_with = "deserialize_complex_vec"
        )]
        zeros: Vec<C64>,
    },
    Polynomial {
        #[serde(
            serialize_with = "serialize_complex_vec",
            deserialize_with = "deserialize_complex_vec"
        )]
        coeffs: Vec<C64>,
    },
    OuterFromModulus { profile: ModulusProfile },
    Product { factors: Vec<SymbolSpec> },
    Scaled {
        #[serde(serialize_with = "serialize_complex", deserialize_with = "deserialize_complex")]
        scale: C64,
        factor: Box<SymbolSpec>,
    },
}

impl SymbolSpec {
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_class(mut self, class: DeclaredClass) -> Self {
        self.declared_class = class;
        self
    }

    pub fn blaschke(zeros: Vec<C64>) -> Self {
        SymbolSpec {
            name: None,
            kind: SymbolKind::Blaschke { zeros },
            declared_class: DeclaredClass::Inner,
        }
    }

    pub fn polynomial(coeffs: Vec<C64>) -> Self {
        SymbolSpec {
            name: None,
            kind: SymbolKind::Polynomial { coeffs },
            declared_class: DeclaredClass::Unknown,
        }
    }

    pub fn outer(profile: ModulusProfile) -> Self {
        SymbolSpec {
            name: None,
            kind: SymbolKind::OuterFromModulus { profile },
            declared_class: DeclaredClass::Unknown,
        }
    }

    pub fn product(factors: Vec<SymbolSpec>) -> Self {
        SymbolSpec {
            name: None,
            kind: SymbolKind::Product { factors },
            declared_class: DeclaredClass::Unknown,
        }
    }

    /// Structural validation: zeros inside the disk, |scale| <= 1, profile
    /// sanity. Boundary-norm checks happen at evaluation time.
    pub fn validate(&self) -> Result<(), SymbolError> {
        match &self.kind {
            SymbolKind::Blaschke { zeros } => {
                for &z in zeros {
                    if z.norm() >= 1.0 {
                        return Err(SymbolError::ZeroOutsideDisk(z));
                    }
                }
                Ok(())
            }
            SymbolKind::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return Err(SymbolError::Schema("polynomial needs coefficients".into()));
                }
                Ok(())
            }
            SymbolKind::OuterFromModulus { profile } => Ok(profile.validate()?),
            SymbolKind::Product { factors } => {
                if factors.is_empty() {
                    return Err(SymbolError::EmptyProduct);
                }
                for f in factors {
                    f.validate()?;
                }
                Ok(())
            }
            SymbolKind::Scaled { scale, factor } => {
                if scale.norm() > 1.0 {
                    return Err(SymbolError::ScaleTooLarge(*scale));
                }
                factor.validate()
            }
        }
    }

    /// Zeros of the symbol when it is a finite Blaschke product (possibly
    /// scaled by a unimodular constant); None otherwise.
    pub fn blaschke_zeros(&self) -> Option<Vec<C64>> {
        match &self.kind {
            SymbolKind::Blaschke { zeros } => Some(zeros.clone()),
            SymbolKind::Scaled { scale, factor } if (scale.norm() - 1.0).abs() < 1e-12 => {
                factor.blaschke_zeros()
            }
            SymbolKind::Product { factors } => {
                let mut all = Vec::new();
                for f in factors {
                    all.extend(f.blaschke_zeros()?);
                }
                Some(all)
            }
            _ => None,
        }
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "unnamed".into())
    }
}

/// Parses and validates a symbol-spec document (JSON).
pub fn parse_symbol(doc: &str) -> Result<SymbolSpec, SymbolError> {
    let spec: SymbolSpec =
        serde_json::from_str(doc).map_err(|e| SymbolError::Schema(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

// Complex numbers in spec documents: a bare number, an [re, im] pair, or
// {"re": .., "im": ..}. Serialization always uses the pair form.

#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexIn {
    Real(f64),
    Pair([f64; 2]),
    Parts { re: f64, im: f64 },
}

impl From<ComplexIn> for C64 {
    fn from(v: ComplexIn) -> C64 {
        match v {
            ComplexIn::Real(x) => C64::new(x, 0.0),
            ComplexIn::Pair([re, im]) => C64::new(re, im),
            ComplexIn::Parts { re, im } => C64::new(re, im),
        }
    }
}

fn deserialize_complex<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
    Ok(ComplexIn::deserialize(d)?.into())
}

fn deserialize_complex_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
    let raw = Vec::<ComplexIn>::deserialize(d)?;
    if raw.is_empty() {
        return Err(D::Error::custom("empty complex list"));
    }
    Ok(raw.into_iter().map(C64::from).collect())
}

fn serialize_complex<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn serialize_complex_vec<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
    pairs.serialize(s)
}
