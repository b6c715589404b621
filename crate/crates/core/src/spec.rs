//! JSON descriptions of tradeoff functions and noise inputs, shared by
//! the CLI and the Python bindings.
//!
//! Tradeoff specs:
//! `{"kind":"eps_delta","eps":1.0,"delta":0.0}` |
//! `{"kind":"gdp","mu":1.0}` |
//! `{"kind":"family","base":"laplace","t":1.0}` |
//! `{"kind":"cauchy","m":1.0}` |
//! `{"kind":"iterate","inner":<spec>,"k":3}`.
//!
//! Noise specs:
//! `{"kind":"cdf-grid","x":[...],"F":[...]}` |
//! `{"kind":"pmf","support":[...],"mass":[...]}` |
//! `{"kind":"samples","path":"file.csv"}`,
//! each with an optional `"delta"` sensitivity declaration (default 1).

use std::path::Path;

use serde::Deserialize;

use crate::audit::NoiseSpec;
use crate::discrete::DiscretePmf;
use crate::error::{Error, Result};
use crate::logconcave::RivalNoise;
use crate::tradeoff::{cauchy_tradeoff, TradeoffFamily, TradeoffFunction};

#[derive(Clone, Debug)]
pub enum TradeoffSpec {
    EpsDelta { eps: f64, delta: f64 },
    Gdp { mu: f64 },
    Family { base: FamilyBase, t: f64 },
    Cauchy { m: f64 },
    Iterate { inner: Box<TradeoffSpec>, k: u32 },
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FamilyBase {
    Laplace,
    Gaussian,
    Logistic,
    Uniform,
}

impl FamilyBase {
    pub fn family(self) -> TradeoffFamily {
        match self {
            FamilyBase::Laplace => TradeoffFamily::laplace(),
            FamilyBase::Gaussian => TradeoffFamily::gaussian(),
            FamilyBase::Logistic => TradeoffFamily::logistic(),
            FamilyBase::Uniform => TradeoffFamily::uniform(),
        }
    }
}

impl TradeoffSpec {
    pub fn build(&self) -> Result<TradeoffFunction> {
        match self {
            TradeoffSpec::EpsDelta { eps, delta } => TradeoffFunction::eps_delta(*eps, *delta),
            TradeoffSpec::Gdp { mu } => TradeoffFunction::gdp(*mu),
            TradeoffSpec::Family { base, t } => base.family().member(*t),
            TradeoffSpec::Cauchy { m } => Ok(cauchy_tradeoff(*m)?.curve),
            TradeoffSpec::Iterate { inner, k } => inner.build()?.iterate(*k),
        }
    }
}

fn from_json_str<'a, T: Deserialize<'a>>(json: &'a str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(json);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

// Field-path-preserving variant deserialization: internally tagged serde
// enums buffer their content and lose path information, so the `kind`
// tag is dispatched by hand and each variant body is a plain struct.
fn from_value<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| Error::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn kind_of(value: &serde_json::Value) -> Result<String> {
    value
        .get("kind")
        .and_then(|k| k.as_str())
        .map(str::to_owned)
        .ok_or_else(|| Error::Json {
            path: "kind".into(),
            message: "missing or non-string `kind` tag".into(),
        })
}

fn parse_tradeoff_value(value: serde_json::Value) -> Result<TradeoffSpec> {
    #[derive(Deserialize)]
    struct EpsDeltaBody {
        eps: f64,
        delta: f64,
    }
    #[derive(Deserialize)]
    struct GdpBody {
        mu: f64,
    }
    #[derive(Deserialize)]
    struct FamilyBody {
        base: FamilyBase,
        t: f64,
    }
    #[derive(Deserialize)]
    struct CauchyBody {
        m: f64,
    }
    #[derive(Deserialize)]
    struct IterateBody {
        inner: serde_json::Value,
        k: u32,
    }

    match kind_of(&value)?.as_str() {
        "eps_delta" => {
            let b: EpsDeltaBody = from_value(value)?;
            Ok(TradeoffSpec::EpsDelta {
                eps: b.eps,
                delta: b.delta,
            })
        }
        "gdp" => {
            let b: GdpBody = from_value(value)?;
            Ok(TradeoffSpec::Gdp { mu: b.mu })
        }
        "family" => {
            let b: FamilyBody = from_value(value)?;
            Ok(TradeoffSpec::Family {
                base: b.base,
                t: b.t,
            })
        }
        "cauchy" => {
            let b: CauchyBody = from_value(value)?;
            Ok(TradeoffSpec::Cauchy { m: b.m })
        }
        "iterate" => {
            let b: IterateBody = from_value(value)?;
            Ok(TradeoffSpec::Iterate {
                inner: Box::new(parse_tradeoff_value(b.inner)?),
                k: b.k,
            })
        }
        other => Err(Error::Json {
            path: "kind".into(),
            message: format!(
                "unknown kind `{other}`; expected eps_delta | gdp | family | cauchy | iterate"
            ),
        }),
    }
}

pub fn parse_tradeoff_spec(json: &str) -> Result<TradeoffSpec> {
    parse_tradeoff_value(from_json_str(json)?)
}

#[derive(Clone, Debug)]
pub enum NoisePayloadJson {
    CdfGrid { x: Vec<f64>, f: Vec<f64> },
    Pmf { support: Vec<i64>, mass: Vec<f64> },
    Samples { path: String },
}

#[derive(Clone, Debug)]
pub struct NoiseSpecJson {
    pub payload: NoisePayloadJson,
    pub delta: u32,
}

fn default_sensitivity() -> u32 {
    1
}

pub fn parse_noise_spec(json: &str) -> Result<NoiseSpecJson> {
    #[derive(Deserialize)]
    struct GridBody {
        x: Vec<f64>,
        #[serde(rename = "F")]
        f: Vec<f64>,
        #[serde(default = "default_sensitivity")]
        delta: u32,
    }
    #[derive(Deserialize)]
    struct PmfBody {
        support: Vec<i64>,
        mass: Vec<f64>,
        #[serde(default = "default_sensitivity")]
        delta: u32,
    }
    #[derive(Deserialize)]
    struct SamplesBody {
        path: String,
        #[serde(default = "default_sensitivity")]
        delta: u32,
    }

    let value: serde_json::Value = from_json_str(json)?;
    match kind_of(&value)?.as_str() {
        "cdf-grid" => {
            let b: GridBody = from_value(value)?;
            Ok(NoiseSpecJson {
                payload: NoisePayloadJson::CdfGrid { x: b.x, f: b.f },
                delta: b.delta,
            })
        }
        "pmf" => {
            let b: PmfBody = from_value(value)?;
            Ok(NoiseSpecJson {
                payload: NoisePayloadJson::Pmf {
                    support: b.support,
                    mass: b.mass,
                },
                delta: b.delta,
            })
        }
        "samples" => {
            let b: SamplesBody = from_value(value)?;
            Ok(NoiseSpecJson {
                payload: NoisePayloadJson::Samples { path: b.path },
                delta: b.delta,
            })
        }
        other => Err(Error::Json {
            path: "kind".into(),
            message: format!("unknown kind `{other}`; expected cdf-grid | pmf | samples"),
        }),
    }
}

/// One numeric value per line (or per first CSV column); an optional
/// non-numeric header row is skipped.
fn read_samples_csv(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if i == 0 => continue, // header row
            Err(_) => {
                return Err(Error::InvalidDistribution(format!(
                    "{}: line {} is not numeric",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(values)
}

/// Assemble a (possibly sparse, unsorted) integer support into a
/// contiguous pmf.
pub fn pmf_from_support(support: &[i64], mass: &[f64]) -> Result<DiscretePmf> {
    if support.len() != mass.len() || support.is_empty() {
        return Err(Error::InvalidDistribution(
            "pmf support and mass arrays must be non-empty and equally long".into(),
        ));
    }
    let lo = *support.iter().min().unwrap();
    let hi = *support.iter().max().unwrap();
    if hi - lo > 1_000_000 {
        return Err(Error::InvalidDistribution(
            "pmf support range is implausibly large".into(),
        ));
    }
    let mut dense = vec![0.0; (hi - lo + 1) as usize];
    for (s, m) in support.iter().zip(mass.iter()) {
        dense[(s - lo) as usize] += m;
    }
    DiscretePmf::new(lo, dense)
}

impl NoiseSpecJson {
    /// Materialize the payload; `base_dir` anchors relative sample paths.
    pub fn build(&self, base_dir: &Path) -> Result<NoiseSpec> {
        let noise = match &self.payload {
            NoisePayloadJson::CdfGrid { x, f } => {
                RivalNoise::from_grid(x.clone(), f.clone(), "cdf-grid noise")?
            }
            NoisePayloadJson::Pmf { support, mass } => {
                RivalNoise::from_pmf(pmf_from_support(support, mass)?, "pmf noise")
            }
            NoisePayloadJson::Samples { path } => {
                let resolved = if Path::new(path).is_absolute() {
                    Path::new(path).to_path_buf()
                } else {
                    base_dir.join(path)
                };
                RivalNoise::from_samples(
                    read_samples_csv(&resolved)?,
                    format!("samples from {path}"),
                )?
            }
        };
        NoiseSpec::new(noise, self.delta)
    }
}

/// Pmf file schema consumed by `discrete verify`:
/// `{"lo": -5, "mass": [...]}`.
#[derive(Clone, Debug, Deserialize)]
pub struct PmfFileJson {
    pub lo: i64,
    pub mass: Vec<f64>,
}

pub fn parse_pmf_file(json: &str) -> Result<DiscretePmf> {
    let parsed: PmfFileJson = from_json_str(json)?;
    DiscretePmf::new(parsed.lo, parsed.mass)
}
