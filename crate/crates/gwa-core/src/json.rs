//! JSON encodings of the core types. Polynomials serialize as arrays of
//! coefficient strings, constant term first, with rationals written as
//! "num/den" and prime-field residues as decimals. Parsing is context-aware:
//! the field tag comes from the enclosing algebra description.

use serde::{Deserialize, Serialize};

use crate::error::{MathError, MathResult};
use crate::factored::{FactoredElement, Profile, ProfileKind};
use crate::gwa::{FactorSpec, GwaSpec};
use crate::polyring::{FieldTag, Poly, Scalar, Sigma};
use crate::rankn::PolyMatrix;
use crate::weight::{WeightData, WeightSlot};

pub fn scalar_to_string(s: &Scalar) -> String {
    s.to_string()
}

pub fn poly_to_json(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(scalar_to_string).collect()
}

pub fn poly_from_json(field: FieldTag, coeffs: &[String]) -> MathResult<Poly> {
    let scalars = coeffs
        .iter()
        .map(|s| Scalar::parse(field, s))
        .collect::<MathResult<Vec<_>>>()?;
    Ok(Poly::new(field, scalars))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Name(String),
    Fp { #[serde(rename = "Fp")] p: u64 },
}

impl FieldJson {
    pub fn to_tag(&self) -> MathResult<FieldTag> {
        match self {
            FieldJson::Name(s) if s == "Q" => Ok(FieldTag::Q),
            FieldJson::Name(s) => Err(MathError::Parse(format!("unknown field {s:?}"))),
            FieldJson::Fp { p } => Ok(FieldTag::Fp(*p)),
        }
    }

    pub fn from_tag(tag: FieldTag) -> FieldJson {
        match tag {
            FieldTag::Q => FieldJson::Name("Q".into()),
            FieldTag::Fp(p) => FieldJson::Fp { p },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaJson {
    Classical { shift: String },
    Quantum { gamma: String },
}

impl SigmaJson {
    pub fn to_sigma(&self, field: FieldTag) -> MathResult<Sigma> {
        Ok(match self {
            SigmaJson::Classical { shift } => Sigma::Classical {
                shift: Scalar::parse(field, shift)?,
            },
            SigmaJson::Quantum { gamma } => Sigma::Quantum {
                gamma: Scalar::parse(field, gamma)?,
            },
        })
    }

    pub fn from_sigma(sigma: &Sigma) -> SigmaJson {
        match sigma {
            Sigma::Classical { shift } => SigmaJson::Classical {
                shift: shift.to_string(),
            },
            Sigma::Quantum { gamma } => SigmaJson::Quantum {
                gamma: gamma.to_string(),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorJson {
    pub poly: Vec<String>,
    pub mult: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub asserted: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactoredJson {
    pub unit: String,
    pub factors: Vec<FactorJson>,
}

impl FactoredJson {
    pub fn from_element(f: &FactoredElement) -> FactoredJson {
        FactoredJson {
            unit: f.unit().to_string(),
            factors: f
                .factors()
                .iter()
                .map(|(poly, mult)| FactorJson {
                    poly: poly_to_json(poly),
                    mult: *mult,
                    asserted: false,
                })
                .collect(),
        }
    }

    pub fn to_element(&self, field: FieldTag) -> MathResult<FactoredElement> {
        let unit = Scalar::parse(field, &self.unit)?;
        let factors = self
            .factors
            .iter()
            .map(|f| Ok((poly_from_json(field, &f.poly)?, f.mult)))
            .collect::<MathResult<Vec<_>>>()?;
        FactoredElement::new(unit, factors)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GwaSpecJson {
    pub field: FieldJson,
    pub sigma: SigmaJson,
    pub a: FactoredJson,
}

impl GwaSpecJson {
    pub fn from_spec(spec: &GwaSpec) -> GwaSpecJson {
        GwaSpecJson {
            field: FieldJson::from_tag(spec.field()),
            sigma: SigmaJson::from_sigma(spec.sigma()),
            a: FactoredJson::from_element(spec.a()),
        }
    }

    pub fn to_spec(&self) -> MathResult<GwaSpec> {
        let field = self.field.to_tag()?;
        let sigma = self.sigma.to_sigma(field)?;
        let unit = Scalar::parse(field, &self.a.unit)?;
        let factors = self
            .a
            .factors
            .iter()
            .map(|f| {
                Ok(FactorSpec {
                    poly: poly_from_json(field, &f.poly)?,
                    mult: f.mult,
                    asserted: f.asserted,
                })
            })
            .collect::<MathResult<Vec<_>>>()?;
        GwaSpec::new(field, sigma, unit, factors)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileKindJson {
    Line(String),
    Cycle { cycle: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileJson {
    pub rep: Vec<String>,
    pub kind: ProfileKindJson,
    pub values: std::collections::BTreeMap<i64, u32>,
}

impl ProfileJson {
    pub fn from_profile(profile: &Profile) -> ProfileJson {
        ProfileJson {
            rep: poly_to_json(profile.rep()),
            kind: match profile.kind() {
                ProfileKind::Line => ProfileKindJson::Line("line".into()),
                ProfileKind::Cycle(n) => ProfileKindJson::Cycle { cycle: n },
            },
            values: profile.values().clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightSlotJson {
    pub ideal: Vec<String>,
    pub dim: u32,
    #[serde(rename = "break")]
    pub is_break: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightDataJson {
    pub support: Vec<WeightSlotJson>,
    pub total_dim: u64,
}

impl WeightDataJson {
    pub fn from_data(data: &WeightData) -> WeightDataJson {
        WeightDataJson {
            support: data
                .support
                .iter()
                .map(|slot: &WeightSlot| WeightSlotJson {
                    ideal: poly_to_json(&slot.ideal),
                    dim: slot.dim,
                    is_break: slot.is_break,
                })
                .collect(),
            total_dim: data.total_dim,
        }
    }
}

pub fn matrix_to_json(m: &PolyMatrix) -> Vec<Vec<Vec<String>>> {
    m.rows()
        .map(|row| row.iter().map(poly_to_json).collect())
        .collect()
}

pub fn matrix_from_json(field: FieldTag, rows: &[Vec<Vec<String>>]) -> MathResult<PolyMatrix> {
    let parsed = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|coeffs| poly_from_json(field, coeffs))
                .collect::<MathResult<Vec<_>>>()
        })
        .collect::<MathResult<Vec<_>>>()?;
    PolyMatrix::from_rows(parsed)
}
