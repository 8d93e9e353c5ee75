//! JSON configuration schema and assembly into core types.

use serde::Deserialize;
use sodkit::presets::QuiverSpec;
use sodkit::ratlin::{Rat, RatMat, RatVec};
use sodkit::root_datum::{RootDatum, RootPair, DEFAULT_WEYL_CAP};
use sodkit::sod::{QuadraticNorm, SodConfig};
use sodkit::weights::SignedWeightMultiset;

use crate::CliError;

/// A rational number, written as an integer or an "a/b" string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RatDef {
    Int(i64),
    Str(String),
}

impl RatDef {
    pub fn to_rat(&self) -> Result<Rat, CliError> {
        match self {
            RatDef::Int(n) => Ok(sodkit::ratlin::rint(*n)),
            RatDef::Str(s) => s
                .trim()
                .parse::<Rat>()
                .map_err(|e| CliError::Config(format!("bad rational {s:?}: {e}"))),
        }
    }
}

fn rats(defs: &[RatDef]) -> Result<Vec<Rat>, CliError> {
    defs.iter().map(RatDef::to_rat).collect()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RootDatumDef {
    Preset {
        preset: String,
        #[serde(default)]
        rank: Option<usize>,
        #[serde(default)]
        blocks: Option<Vec<usize>>,
    },
    Explicit {
        rank: usize,
        roots: Vec<RootPairDef>,
        simple: Vec<usize>,
        #[serde(default)]
        weyl_cap: Option<usize>,
    },
}

#[derive(Clone, Debug, Deserialize)]
pub struct RootPairDef {
    pub root: Vec<i64>,
    pub coroot: Vec<i64>,
}

impl RootDatumDef {
    pub fn build(&self) -> Result<RootDatum, CliError> {
        match self {
            RootDatumDef::Preset {
                preset,
                rank,
                blocks,
            } => match preset.as_str() {
                "torus" => {
                    let r = rank.ok_or_else(|| {
                        CliError::Config("torus preset needs a rank".into())
                    })?;
                    Ok(RootDatum::torus(r))
                }
                "gl" => {
                    let b = blocks.clone().ok_or_else(|| {
                        CliError::Config("gl preset needs block sizes".into())
                    })?;
                    RootDatum::gl_blocks(&b).map_err(CliError::Core)
                }
                other => Err(CliError::Config(format!("unknown preset {other:?}"))),
            },
            RootDatumDef::Explicit {
                rank,
                roots,
                simple,
                weyl_cap,
            } => RootDatum::with_cap(
                *rank,
                roots
                    .iter()
                    .map(|r| RootPair {
                        root: r.root.clone(),
                        coroot: r.coroot.clone(),
                    })
                    .collect(),
                simple.clone(),
                weyl_cap.unwrap_or(DEFAULT_WEYL_CAP),
            )
            .map_err(CliError::Core),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct WeightDef {
    pub weight: Vec<i64>,
    #[serde(default = "one")]
    pub mult: i64,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, Deserialize)]
pub struct QuiverDef {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize)>,
    pub dimension: Vec<u32>,
    #[serde(default)]
    pub delta: Option<Vec<RatDef>>,
    #[serde(default)]
    pub preprojective: bool,
    /// Bound on the per-block integer weights enumerated by the quiver
    /// table command.
    #[serde(default)]
    pub w_bound: Option<i64>,
}

impl QuiverDef {
    pub fn spec(&self) -> Result<QuiverSpec, CliError> {
        let delta_vec = match &self.delta {
            Some(d) => rats(d)?,
            None => vec![Rat::default(); self.vertices],
        };
        Ok(QuiverSpec {
            vertices: self.vertices,
            arrows: self.arrows.clone(),
            dimension: self.dimension.clone(),
            delta_vec,
            preprojective: self.preprojective,
        })
    }
}

/// Top-level config file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    #[serde(default)]
    pub root_datum: Option<RootDatumDef>,
    #[serde(default)]
    pub representation: Option<Vec<WeightDef>>,
    /// Quadratic form matrix; identity when omitted.
    #[serde(default)]
    pub q: Option<Vec<Vec<RatDef>>>,
    /// Separate form for the positive-cone test of Levi labels; defaults to `q`.
    #[serde(default)]
    pub killing_q: Option<Vec<Vec<RatDef>>>,
    #[serde(default)]
    pub delta: Option<Vec<RatDef>>,
    #[serde(default)]
    pub radius: Option<RatDef>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Cap on checked inequality triples per label pair; unlimited when absent.
    #[serde(default)]
    pub sample_cap: Option<u64>,
    #[serde(default)]
    pub fm_cap: Option<usize>,
    #[serde(default)]
    pub quiver: Option<QuiverDef>,
}

impl ProjectConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn parse_matrix(defs: &[Vec<RatDef>]) -> Result<RatMat, CliError> {
        let rows: Result<Vec<RatVec>, CliError> = defs
            .iter()
            .map(|row| Ok(RatVec(rats(row)?)))
            .collect();
        RatMat::from_rows(rows?).map_err(CliError::Core)
    }

    pub fn representation_multiset(&self) -> Result<SignedWeightMultiset, CliError> {
        let defs = self
            .representation
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no representation".into()))?;
        Ok(SignedWeightMultiset::from_entries(
            defs.iter().map(|w| (w.weight.clone(), w.mult)),
        ))
    }

    /// Assemble the model: explicit root datum plus representation when
    /// present, otherwise the quiver preset.
    pub fn build_sod(&self) -> Result<SodConfig, CliError> {
        if self.root_datum.is_some() || self.representation.is_some() {
            let rd = self
                .root_datum
                .as_ref()
                .ok_or_else(|| CliError::Config("representation given without root_datum".into()))?
                .build()?;
            let rep = self.representation_multiset()?;
            let rank = rd.rank();
            let q = match &self.q {
                Some(m) => QuadraticNorm::new(Self::parse_matrix(m)?).map_err(CliError::Core)?,
                None => QuadraticNorm::standard(rank),
            };
            let delta = match &self.delta {
                Some(d) => RatVec(rats(d)?),
                None => RatVec::zeros(rank),
            };
            let fm_cap = self.fm_cap.unwrap_or(sodkit::ratlin::DEFAULT_FM_CAP);
            SodConfig::with_fm_cap(rd, rep, q, delta, fm_cap).map_err(CliError::Core)
        } else if let Some(qv) = &self.quiver {
            sodkit::presets::quiver_config(&qv.spec()?).map_err(CliError::Core)
        } else {
            Err(CliError::Config(
                "config needs either root_datum + representation or a quiver".into(),
            ))
        }
    }

    pub fn radius(&self, flag: Option<&str>) -> Result<Rat, CliError> {
        if let Some(r) = flag {
            return r
                .parse::<Rat>()
                .map_err(|e| CliError::Config(format!("bad radius {r:?}: {e}")));
        }
        match &self.radius {
            Some(r) => r.to_rat(),
            None => Ok(sodkit::ratlin::rint(3)),
        }
    }
}
