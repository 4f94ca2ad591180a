//! On-disk JSON documents and their conversion to core types.
//!
//! Numbers are written by `serde_json` in shortest round-trip form, so a
//! document written from a configuration parses back to identical values.
//! Axes are 0-based.

use kakeya_core::evaluator::Shape;
use kakeya_core::experiments::Anneal;
use kakeya_core::generators::{GenSpec, Regime};
use kakeya_core::geometry::TOLERANCE;
use kakeya_core::loomis_whitney::ProjectionFunction;
use kakeya_core::{Cube, Direction, Line, LipschitzCurve, Member, TubeFamily};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeDoc {
    pub min_corner: Vec<f64>,
    pub side: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolylineDoc {
    pub breakpoints: Vec<f64>,
    /// The `n-1` off-axis coordinates at each breakpoint.
    pub values: Vec<Vec<f64>>,
    pub lip: f64,
}

/// A straight member carries `anchor` and `dir`; a curve carries `polyline`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polyline: Option<PolylineDoc>,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub axis: usize,
    pub radius: f64,
    pub members: Vec<MemberDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub schema_version: u32,
    pub n: usize,
    pub cube: CubeDoc,
    pub families: Vec<FamilyDoc>,
}

/// A parsed configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub cube: Cube,
    pub families: Vec<TubeFamily>,
}

impl CubeDoc {
    pub fn from_cube(cube: &Cube) -> Self {
        CubeDoc {
            min_corner: cube.min_corner().to_vec(),
            side: cube.side(),
        }
    }

    pub fn to_cube(&self) -> Result<Cube, CliError> {
        Ok(Cube::new(self.min_corner.clone(), self.side)?)
    }
}

fn direction(v: Vec<f64>) -> Result<Direction, CliError> {
    // Unit input is kept bit for bit so that written files round-trip.
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (len - 1.0).abs() <= TOLERANCE {
        Ok(Direction::from_unit(v)?)
    } else {
        Ok(Direction::new(v)?)
    }
}

impl MemberDoc {
    fn from_member(m: &Member) -> Self {
        match &m.shape {
            Shape::Line(l) => MemberDoc {
                anchor: Some(l.anchor().to_vec()),
                dir: Some(l.dir().as_slice().to_vec()),
                polyline: None,
                weight: m.weight,
            },
            Shape::Curve(c) => MemberDoc {
                anchor: None,
                dir: None,
                polyline: Some(PolylineDoc {
                    breakpoints: c.breakpoints().to_vec(),
                    values: c.values().to_vec(),
                    lip: c.lip(),
                }),
                weight: m.weight,
            },
        }
    }

    fn to_member(&self, axis: usize, where_: &str) -> Result<Member, CliError> {
        let shape = match (&self.anchor, &self.dir, &self.polyline) {
            (Some(a), Some(d), None) => Shape::Line(Line::new(a.clone(), direction(d.clone())?)?),
            (None, None, Some(p)) => Shape::Curve(LipschitzCurve::new(
                axis,
                p.breakpoints.clone(),
                p.values.clone(),
                p.lip,
            )?),
            _ => {
                return Err(CliError::Usage(format!(
                    "{where_}: a member needs either anchor and dir, or polyline"
                )))
            }
        };
        Ok(Member {
            shape,
            weight: self.weight,
        })
    }
}

impl ConfigDoc {
    pub fn from_configuration(cfg: &Configuration) -> Self {
        ConfigDoc {
            schema_version: SCHEMA_VERSION,
            n: cfg.cube.dim(),
            cube: CubeDoc::from_cube(&cfg.cube),
            families: cfg
                .families
                .iter()
                .map(|f| FamilyDoc {
                    axis: f.axis(),
                    radius: f.radius(),
                    members: f.members().iter().map(MemberDoc::from_member).collect(),
                })
                .collect(),
        }
    }

    pub fn to_configuration(&self) -> Result<Configuration, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let cube = self.cube.to_cube()?;
        if cube.dim() != self.n || self.families.len() != self.n {
            return Err(CliError::Usage(format!(
                "n = {} but the cube has dimension {} and there are {} families",
                self.n,
                cube.dim(),
                self.families.len()
            )));
        }
        let families = self
            .families
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let members = f
                    .members
                    .iter()
                    .enumerate()
                    .map(|(a, m)| m.to_member(f.axis, &format!("families[{i}].members[{a}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(TubeFamily::new(self.n, f.axis, f.radius, members)?)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        kakeya_core::evaluator::check_families(&families)?;
        Ok(Configuration { cube, families })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegimeDoc {
    AxisParallel,
    SmallAngle {
        delta: f64,
    },
    General,
    Lipschitz {
        delta: f64,
        segments: usize,
    },
    Weighted {
        delta: f64,
        min_weight: f64,
        max_weight: f64,
        #[serde(default)]
        integer: bool,
    },
}

impl From<RegimeDoc> for Regime {
    fn from(r: RegimeDoc) -> Self {
        match r {
            RegimeDoc::AxisParallel => Regime::AxisParallel,
            RegimeDoc::SmallAngle { delta } => Regime::SmallAngle { delta },
            RegimeDoc::General => Regime::General,
            RegimeDoc::Lipschitz { delta, segments } => Regime::Lipschitz { delta, segments },
            RegimeDoc::Weighted {
                delta,
                min_weight,
                max_weight,
                integer,
            } => Regime::Weighted {
                delta,
                min_weight,
                max_weight,
                integer,
            },
        }
    }
}

/// Input of `gen`, and the template of `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenDoc {
    pub n: usize,
    pub counts: Vec<usize>,
    pub regime: RegimeDoc,
    pub cube: CubeDoc,
    /// Overridden by `--seed`.
    #[serde(default)]
    pub seed: Option<u64>,
}

impl GenDoc {
    pub fn to_spec(&self, seed: Option<u64>) -> Result<GenSpec, CliError> {
        let spec = GenSpec::new(
            self.n,
            self.counts.clone(),
            self.regime.into(),
            self.cube.to_cube()?,
            seed.or(self.seed).unwrap_or(0),
        );
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    pub template: GenDoc,
    pub scales: Vec<f64>,
    #[serde(default)]
    pub fixed_tubes: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnealDoc {
    pub initial: f64,
}

impl From<AnnealDoc> for Anneal {
    fn from(a: AnnealDoc) -> Self {
        Anneal { initial: a.initial }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchDoc {
    pub n: usize,
    pub counts: Vec<usize>,
    pub cube: CubeDoc,
    pub budget: usize,
    #[serde(default)]
    pub restarts: Option<usize>,
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub anneal: Option<AnnealDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFunctionDoc {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub cells: Vec<usize>,
    /// Cell values, first axis fastest.
    pub values: Vec<f64>,
}

/// Input of `verify-lw`: one function on `ℝⁿ⁻¹` per axis and the box
/// integrated over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LwDoc {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub functions: Vec<GridFunctionDoc>,
}

impl LwDoc {
    pub fn to_functions(&self) -> Result<Vec<ProjectionFunction>, CliError> {
        self.functions
            .iter()
            .map(|f| {
                Ok(ProjectionFunction::new(
                    f.lo.clone(),
                    f.hi.clone(),
                    f.cells.clone(),
                    f.values.clone(),
                )?)
            })
            .collect()
    }
}

/// Parses `text` as JSON, reporting failures as `path:line:column`.
pub fn parse<T: serde::de::DeserializeOwned>(path: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        msg: {
            let full = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            full.strip_suffix(&suffix).unwrap_or(&full).to_string()
        },
    })
}
