//! TOML schemas for parameter and sample files.
//!
//! Field elements and moduli are decimal strings so that values above
//! `2^63` survive TOML's signed 64-bit integers. Round constants are never
//! stored: they are re-derived from `seed`, which is what makes a parameter
//! file a complete description of an instance.

use std::path::Path;

use gbcrypt::algebra::{DenseMatrix, FieldElement, PrimeField};
use gbcrypt::ciminion::{CiminionParams, CiminionSample, Variant};
use gbcrypt::hydra::{derive_head_constants, HydraParams, HydraSamplePair, HydraWitness};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Parameter file, tagged by `cipher`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "cipher", rename_all = "lowercase", deny_unknown_fields)]
pub enum ParamsFile {
    Ciminion(CiminionParamsFile),
    Hydra(HydraParamsFile),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CiminionParamsFile {
    pub q: String,
    pub r_c: usize,
    pub r_e: usize,
    pub seed: String,
    /// `standard`, `fix` or `ciminion2`.
    pub variant: String,
    /// Fix coefficients, defaulting to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HydraParamsFile {
    pub q: String,
    pub r_h: usize,
    pub seed: String,
    /// Row-major matrices; `m_r` must equal `diag(m_i, m_i)` when present.
    pub m_e: Vec<Vec<String>>,
    pub m_i: Vec<Vec<String>>,
    pub m_j: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_r: Option<Vec<Vec<String>>>,
    /// Rolling constant, zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rolling_constant: Option<Vec<String>>,
}

/// Sample file, tagged by `cipher`. The optional `secret` table records the
/// generating key of a fixture; attacks never read it except to report
/// whether it was recovered.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "cipher", rename_all = "lowercase", deny_unknown_fields)]
pub enum SampleFile {
    Ciminion(CiminionSampleFile),
    Hydra(HydraSampleFile),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CiminionSampleFile {
    pub nonce: String,
    pub p1: String,
    pub p2: String,
    pub c1: String,
    pub c2: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<CiminionSecret>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CiminionSecret {
    pub k1: String,
    pub k2: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HydraSampleFile {
    pub c1: Vec<String>,
    pub c2: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<HydraSecret>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HydraSecret {
    pub k: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
}

/// Reads and parses a TOML file; both failures are usage errors.
pub fn read_toml<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn to_toml<T: Serialize>(value: &T) -> Result<String, CliError> {
    toml::to_string(value).map_err(|e| CliError::Usage(e.to_string()))
}

/// Parses a decimal modulus, accepting `2^k+c` and `2^k-c` shorthands.
pub fn parse_modulus(text: &str) -> Result<u128, CliError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Usage(format!("cannot parse modulus `{text}`"));
    if let Some(rest) = t.strip_prefix("2^") {
        let split = rest.find(['+', '-']).unwrap_or(rest.len());
        let k: u32 = rest[..split].parse().map_err(|_| bad())?;
        let base = 1u128.checked_shl(k).filter(|_| k < 128).ok_or_else(bad)?;
        if split == rest.len() {
            return Ok(base);
        }
        let c: u128 = rest[split + 1..].parse().map_err(|_| bad())?;
        return if &rest[split..=split] == "+" { base.checked_add(c).ok_or_else(bad) } else { base.checked_sub(c).ok_or_else(bad) };
    }
    t.parse().map_err(|_| bad())
}

pub fn field_from(text: &str) -> Result<PrimeField, CliError> {
    PrimeField::new(parse_modulus(text)?).map_err(|e| CliError::Usage(e.to_string()))
}

fn elem(f: PrimeField, text: &str) -> Result<FieldElement, CliError> {
    let v: u128 = text.trim().parse().map_err(|_| CliError::Usage(format!("cannot parse field element `{text}`")))?;
    if v >= f.modulus() {
        return Err(CliError::Usage(format!("field element {v} is not reduced modulo {}", f.modulus())));
    }
    Ok(f.elem(v))
}

fn elems<const N: usize>(f: PrimeField, texts: &[String]) -> Result<[FieldElement; N], CliError> {
    if texts.len() != N {
        return Err(CliError::Usage(format!("expected {N} field elements, got {}", texts.len())));
    }
    let v = texts.iter().map(|t| elem(f, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(v.try_into().expect("length checked"))
}

pub fn dec(x: FieldElement) -> String {
    x.value().to_string()
}

fn decs(xs: &[FieldElement]) -> Vec<String> {
    xs.iter().map(|&x| dec(x)).collect()
}

fn matrix(f: PrimeField, rows: &[Vec<String>]) -> Result<DenseMatrix, CliError> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|t| elem(f, t)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    DenseMatrix::from_rows(f, &rows).map_err(|e| CliError::Usage(e.to_string()))
}

fn matrix_text(m: &DenseMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| decs(r)).collect()
}

pub fn parse_variant(name: &str, alpha: Option<FieldElement>, beta: Option<FieldElement>) -> Result<Variant, CliError> {
    match name {
        "standard" => Ok(Variant::Standard),
        "ciminion2" => Ok(Variant::Ciminion2),
        "fix" => Ok(Variant::Fix { alpha: alpha.unwrap_or(FieldElement::ONE), beta: beta.unwrap_or(FieldElement::ONE) }),
        other => Err(CliError::Usage(format!("unknown variant `{other}`"))),
    }
}

impl CiminionParamsFile {
    pub fn from_params(p: &CiminionParams, seed: &str) -> Self {
        let (alpha, beta) = match p.variant() {
            Variant::Fix { alpha, beta } => (Some(dec(alpha)), Some(dec(beta))),
            _ => (None, None),
        };
        CiminionParamsFile {
            q: p.field().modulus().to_string(),
            r_c: p.r_c(),
            r_e: p.r_e(),
            seed: seed.to_string(),
            variant: p.variant().name().to_string(),
            alpha,
            beta,
        }
    }

    pub fn to_params(&self) -> Result<CiminionParams, CliError> {
        let f = field_from(&self.q)?;
        let alpha = self.alpha.as_deref().map(|t| elem(f, t)).transpose()?;
        let beta = self.beta.as_deref().map(|t| elem(f, t)).transpose()?;
        if self.variant != "fix" && (alpha.is_some() || beta.is_some()) {
            return Err(CliError::Usage("alpha and beta only apply to the fix variant".into()));
        }
        let variant = parse_variant(&self.variant, alpha, beta)?;
        CiminionParams::from_seed(f, self.r_c, self.r_e, self.seed.as_bytes(), variant).map_err(|e| CliError::Usage(e.to_string()))
    }
}

impl HydraParamsFile {
    pub fn from_params(p: &HydraParams, seed: &str) -> Self {
        let rolling = p.rolling_constant();
        HydraParamsFile {
            q: p.field().modulus().to_string(),
            r_h: p.rounds(),
            seed: seed.to_string(),
            m_e: matrix_text(p.m_e()),
            m_i: matrix_text(p.m_i()),
            m_j: matrix_text(p.m_j()),
            m_r: Some(matrix_text(p.m_r())),
            rolling_constant: if rolling.iter().all(|c| c.is_zero()) { None } else { Some(decs(rolling)) },
        }
    }

    pub fn to_params(&self) -> Result<HydraParams, CliError> {
        let f = field_from(&self.q)?;
        let consts = derive_head_constants(f, self.seed.as_bytes(), self.r_h);
        let rolling = match &self.rolling_constant {
            Some(c) => elems::<8>(f, c)?,
            None => [f.zero(); 8],
        };
        let p = HydraParams::new(f, self.r_h, matrix(f, &self.m_e)?, matrix(f, &self.m_i)?, matrix(f, &self.m_j)?, consts, rolling)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(m_r) = &self.m_r {
            if matrix(f, m_r)? != *p.m_r() {
                return Err(CliError::Usage("m_r must equal diag(m_i, m_i)".into()));
            }
        }
        Ok(p)
    }
}

impl CiminionSampleFile {
    pub fn new(s: &CiminionSample, keys: Option<(FieldElement, FieldElement)>) -> Self {
        CiminionSampleFile {
            nonce: dec(s.nonce),
            p1: dec(s.p1),
            p2: dec(s.p2),
            c1: dec(s.c1),
            c2: dec(s.c2),
            secret: keys.map(|(k1, k2)| CiminionSecret { k1: dec(k1), k2: dec(k2) }),
        }
    }

    pub fn sample(&self, f: PrimeField) -> Result<CiminionSample, CliError> {
        Ok(CiminionSample {
            nonce: elem(f, &self.nonce)?,
            p1: elem(f, &self.p1)?,
            p2: elem(f, &self.p2)?,
            c1: elem(f, &self.c1)?,
            c2: elem(f, &self.c2)?,
        })
    }

    pub fn secret(&self, f: PrimeField) -> Result<Option<(FieldElement, FieldElement)>, CliError> {
        self.secret.as_ref().map(|s| Ok((elem(f, &s.k1)?, elem(f, &s.k2)?))).transpose()
    }
}

impl HydraSampleFile {
    pub fn new(s: &HydraSamplePair, witness: Option<&HydraWitness>) -> Self {
        HydraSampleFile {
            c1: decs(&s.c1),
            c2: decs(&s.c2),
            secret: witness.map(|w| HydraSecret { k: decs(&w.k), y: decs(&w.y), z: decs(&w.z) }),
        }
    }

    pub fn sample(&self, f: PrimeField) -> Result<HydraSamplePair, CliError> {
        Ok(HydraSamplePair { c1: elems::<8>(f, &self.c1)?, c2: elems::<8>(f, &self.c2)? })
    }

    pub fn secret(&self, f: PrimeField) -> Result<Option<HydraWitness>, CliError> {
        self.secret
            .as_ref()
            .map(|s| Ok(HydraWitness { k: elems::<4>(f, &s.k)?, y: elems::<4>(f, &s.y)?, z: elems::<4>(f, &s.z)? }))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_shorthand() {
        assert_eq!(parse_modulus("7741").unwrap(), 7741);
        assert_eq!(parse_modulus("2^127+45").unwrap(), (1u128 << 127) + 45);
        assert_eq!(parse_modulus("2^61-1").unwrap(), (1u128 << 61) - 1);
        assert!(parse_modulus("2^128").is_err());
        assert!(parse_modulus("abc").is_err());
    }

    #[test]
    fn ciminion_params_round_trip() {
        let f = PrimeField::new(7741).unwrap();
        let p = CiminionParams::from_seed(f, 5, 2, b"s", Variant::Fix { alpha: f.elem(3), beta: f.elem(5) }).unwrap();
        let file = ParamsFile::Ciminion(CiminionParamsFile::from_params(&p, "s"));
        let text = to_toml(&file).unwrap();
        let back: ParamsFile = toml::from_str(&text).unwrap();
        assert_eq!(back, file);
        let ParamsFile::Ciminion(c) = back else { panic!() };
        assert_eq!(c.to_params().unwrap(), p);
    }

    #[test]
    fn hydra_params_round_trip() {
        let f = PrimeField::new(7741).unwrap();
        let p = HydraParams::concrete(f, 3, b"s").unwrap();
        let file = ParamsFile::Hydra(HydraParamsFile::from_params(&p, "s"));
        let back: ParamsFile = toml::from_str(&to_toml(&file).unwrap()).unwrap();
        let ParamsFile::Hydra(h) = back else { panic!() };
        assert_eq!(h.to_params().unwrap(), p);
    }

    #[test]
    fn unreduced_elements_are_rejected() {
        let f = PrimeField::new(31).unwrap();
        assert!(elem(f, "31").is_err());
        assert!(elem(f, "-1").is_err());
        assert_eq!(elem(f, "30").unwrap(), f.elem(30));
    }
}
