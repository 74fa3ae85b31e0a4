//! Declarative run configuration. Every key is optional except the wave
//! speed `c` and strip length `l`, which may also come from flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use viscowave::modal::MediumParams;

use crate::error::CliError;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub medium: MediumSection,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub green: GreenSection,
    #[serde(default)]
    pub solve: SolveSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub transform: TransformSection,
    #[serde(default)]
    pub probe: ProbeSection,
}

pub const DEFAULT_EPS: f64 = 0.05;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MediumSection {
    pub c: Option<f64>,
    pub l: Option<f64>,
    pub eps: Option<f64>,
}

/// Sample points along one axis: an explicit list, or `count` equispaced
/// points from `start` to `end`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Axis {
    List(Vec<f64>),
    Span { start: f64, end: f64, count: usize },
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Axis::List(v) => v.clone(),
            Axis::Span { start, end, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n).map(|i| start + (end - start) * i as f64 / (n - 1) as f64).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GreenSection {
    pub x: Option<Axis>,
    pub xi: Option<Axis>,
    pub t: Option<Axis>,
    pub max_modes: Option<usize>,
    pub tail_tol: Option<f64>,
}

/// Wall signal: `kind = "constant"` with `value`, or `kind = "sine"` with
/// `amplitude` and `frequency` (`A sin(ωt)`).
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WallSpec {
    Constant { value: f64 },
    Sine { amplitude: f64, frequency: f64 },
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SolveSection {
    /// Built-in data set: `sect5`, `zero`, `mode:N`, `pulse`, `smooth`.
    pub data: Option<String>,
    /// CSV with columns `x,f0,f1`, interpolated linearly; overrides `data`.
    pub table: Option<PathBuf>,
    pub x: Option<Axis>,
    pub t: Option<Axis>,
    pub modes: Option<usize>,
    pub phi: Option<WallSpec>,
    pub psi: Option<WallSpec>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub tolerance: Option<f64>,
    pub taus: Option<Vec<f64>>,
    pub chi0: Option<f64>,
    pub sigma0: Option<f64>,
    /// Remainder probe point `[x, xi, t]` in units of `l` and `l/c`.
    pub probe_point: Option<[f64; 3]>,
    pub ladder_rungs: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TransformSection {
    /// `mode:N`, `sine:OMEGA`, `constant:V` or `images:X:XI`.
    pub signal: Option<String>,
    pub t: Option<Axis>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub x: Option<f64>,
    pub xi: Option<f64>,
    pub t: Option<f64>,
    pub eps_ladder: Option<Vec<f64>>,
    /// Sum this many modes exactly instead of converging the series.
    pub modes: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn params(&self) -> Result<MediumParams, CliError> {
        let c = self.medium.c.ok_or_else(|| CliError::Usage("wave speed c is required (config or --c)".into()))?;
        let l = self.medium.l.ok_or_else(|| CliError::Usage("strip length l is required (config or --l)".into()))?;
        Ok(MediumParams::new(c, l, self.medium.eps.unwrap_or(DEFAULT_EPS))?)
    }
}
