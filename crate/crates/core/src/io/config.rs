use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::C64;
use crate::grid::{GridError, GridSpec};
use crate::lax::StencilSpec;
use crate::scattering::{Domain, DEFAULT_DOMAIN, DEFAULT_STEPS, MIN_STEPS};
use crate::soliton::{Family, SpectrumConfig, SpectrumError, VectorSeed};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("config parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("invalid spectrum: {0}")]
    Spectrum(#[from] SpectrumError),
    #[error("invalid spectrum: seed {index} has {got} components, {family} seeds need {want}")]
    SeedLength {
        index: usize,
        got: usize,
        want: usize,
        family: &'static str,
    },
    #[error("invalid grid: {0}")]
    Grid(#[from] GridError),
    #[error("invalid scattering settings: {0}")]
    Scattering(String),
}

/// Complex number encoded as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct JsonComplex(pub C64);

impl From<[f64; 2]> for JsonComplex {
    fn from([re, im]: [f64; 2]) -> Self {
        JsonComplex(C64::new(re, im))
    }
}

impl From<JsonComplex> for [f64; 2] {
    fn from(c: JsonComplex) -> Self {
        [c.0.re, c.0.im]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Pde,
    Cnls,
    ZeroCurvature,
    RhSymmetry,
    Scattering,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Pde,
        Check::Cnls,
        Check::ZeroCurvature,
        Check::RhSymmetry,
        Check::Scattering,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Pde => "pde",
            Check::Cnls => "cnls",
            Check::ZeroCurvature => "zero_curvature",
            Check::RhSymmetry => "rh_symmetry",
            Check::Scattering => "scattering",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Direct-scattering settings: time slice, x-domain and RK4 step count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScatteringSpec {
    pub t: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub n_steps: usize,
}

impl Default for ScatteringSpec {
    fn default() -> Self {
        Self {
            t: 0.0,
            x_min: DEFAULT_DOMAIN.x_min,
            x_max: DEFAULT_DOMAIN.x_max,
            n_steps: DEFAULT_STEPS,
        }
    }
}

impl ScatteringSpec {
    pub fn domain(&self) -> Domain {
        Domain { x_min: self.x_min, x_max: self.x_max }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !self.t.is_finite() || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return Err(ConfigError::Scattering("values must be finite".into()));
        }
        if self.x_min >= self.x_max {
            return Err(ConfigError::Scattering(format!(
                "x_min < x_max required, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.n_steps < MIN_STEPS {
            return Err(ConfigError::Scattering(format!(
                "n_steps must be at least {MIN_STEPS}, got {}",
                self.n_steps
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum FamilyDoc {
    #[serde(rename = "type1")]
    TypeI,
    #[serde(rename = "type2")]
    TypeII,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumDoc {
    family: FamilyDoc,
    zeros: Vec<JsonComplex>,
    seeds: Vec<Vec<JsonComplex>>,
}

fn default_checks() -> BTreeSet<Check> {
    BTreeSet::from([Check::Pde])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfigDoc {
    spectrum: SpectrumDoc,
    grid: GridSpec,
    #[serde(default)]
    stencil: StencilSpec,
    #[serde(default = "default_checks")]
    checks: BTreeSet<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output: Option<OutputSpec>,
    #[serde(default)]
    scattering: ScatteringSpec,
}

/// A validated run: spectrum, sampling grid, stencil, requested checks and
/// optional output target.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    spectrum: SpectrumConfig,
    grid: GridSpec,
    stencil: StencilSpec,
    checks: BTreeSet<Check>,
    output: Option<OutputSpec>,
    scattering: ScatteringSpec,
}

impl RunConfig {
    pub fn new(spectrum: SpectrumConfig, grid: GridSpec) -> Result<Self, ConfigError> {
        grid.validate()?;
        Ok(Self {
            spectrum,
            grid,
            stencil: StencilSpec::default(),
            checks: default_checks(),
            output: None,
            scattering: ScatteringSpec::default(),
        })
    }

    pub fn with_stencil(mut self, stencil: StencilSpec) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn with_checks(mut self, checks: impl IntoIterator<Item = Check>) -> Self {
        self.checks = checks.into_iter().collect();
        self
    }

    pub fn with_output(mut self, output: Option<OutputSpec>) -> Self {
        self.output = output;
        self
    }

    pub fn with_scattering(mut self, s: ScatteringSpec) -> Result<Self, ConfigError> {
        s.validate()?;
        self.scattering = s;
        Ok(self)
    }

    pub fn spectrum(&self) -> &SpectrumConfig {
        &self.spectrum
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn stencil(&self) -> &StencilSpec {
        &self.stencil
    }

    pub fn checks(&self) -> &BTreeSet<Check> {
        &self.checks
    }

    pub fn output(&self) -> Option<&OutputSpec> {
        self.output.as_ref()
    }

    pub fn scattering(&self) -> &ScatteringSpec {
        &self.scattering
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("config document always serializes")
    }

    fn to_doc(&self) -> RunConfigDoc {
        let family = match self.spectrum.family() {
            Family::TypeI => FamilyDoc::TypeI,
            Family::TypeII => FamilyDoc::TypeII,
        };
        let seeds = self
            .spectrum
            .seeds()
            .iter()
            .map(|s| match s {
                VectorSeed::TypeI(v) => v.iter().map(|&z| JsonComplex(z)).collect(),
                VectorSeed::TypeII(v) => v.iter().map(|&z| JsonComplex(z)).collect(),
            })
            .collect();
        RunConfigDoc {
            spectrum: SpectrumDoc {
                family,
                zeros: self.spectrum.zeros().iter().map(|&z| JsonComplex(z)).collect(),
                seeds,
            },
            grid: self.grid,
            stencil: self.stencil,
            checks: self.checks.clone(),
            output: self.output.clone(),
            scattering: self.scattering,
        }
    }

    fn from_doc(doc: RunConfigDoc) -> Result<Self, ConfigError> {
        let (family, want) = match doc.spectrum.family {
            FamilyDoc::TypeI => (Family::TypeI, 6),
            FamilyDoc::TypeII => (Family::TypeII, 3),
        };
        let mut seeds = Vec::with_capacity(doc.spectrum.seeds.len());
        for (index, s) in doc.spectrum.seeds.iter().enumerate() {
            if s.len() != want {
                return Err(ConfigError::SeedLength {
                    index,
                    got: s.len(),
                    want,
                    family: family.name(),
                });
            }
            let z: Vec<C64> = s.iter().map(|c| c.0).collect();
            seeds.push(match family {
                Family::TypeI => VectorSeed::TypeI([z[0], z[1], z[2], z[3], z[4], z[5]]),
                Family::TypeII => VectorSeed::TypeII([z[0], z[1], z[2]]),
            });
        }
        let zeros = doc.spectrum.zeros.iter().map(|c| c.0).collect();
        let spectrum = SpectrumConfig::new(family, zeros, seeds)?;
        RunConfig::new(spectrum, doc.grid)?
            .with_stencil(doc.stencil)
            .with_checks(doc.checks)
            .with_output(doc.output)
            .with_scattering(doc.scattering)
    }
}

/// Parses and validates a JSON run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: RunConfigDoc = serde_path_to_error::deserialize(&mut de).map_err(|e| ConfigError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| ConfigError::Parse {
        path: ".".into(),
        message: e.to_string(),
    })?;
    RunConfig::from_doc(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "spectrum": {"family": "type2", "zeros": [[0, 1]], "seeds": [[[1, 0], [2, 0], [3, 0]]]},
        "grid": {"x_min": -10, "x_max": 10, "nx": 201, "t_min": -2, "t_max": 2, "nt": 41}
    }"#;

    fn with_spectrum(spectrum: &str) -> String {
        format!(
            r#"{{"spectrum": {spectrum}, "grid": {{"x_min": -1, "x_max": 1, "nx": 3, "t_min": 0, "t_max": 0, "nt": 1}}}}"#
        )
    }

    #[test]
    fn minimal_type_two_document() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.spectrum().zeros(), &[C64::new(0.0, 1.0)]);
        assert_eq!(cfg.checks(), &default_checks());
        assert_eq!(cfg.stencil(), &StencilSpec::default());
        assert_eq!(cfg.scattering(), &ScatteringSpec::default());
    }

    #[test]
    fn lower_half_plane_zero_is_named() {
        let text = with_spectrum(r#"{"family": "type1", "zeros": [[0.5, -0.5]], "seeds": [[[1,0],[1,0],[1,0],[1,0],[1,0],[1,0]]]}"#);
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("zero not in upper half-plane"), "{err}");
        assert!(err.to_string().contains("zero 0"));
    }

    #[test]
    fn pure_imaginary_type_one_base_is_rejected() {
        let text = with_spectrum(r#"{"family": "type1", "zeros": [[0, 0.3]], "seeds": [[[1,0],[1,0],[1,0],[1,0],[1,0],[1,0]]]}"#);
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("TypeI base zero must not be pure imaginary"), "{err}");
    }

    #[test]
    fn schema_errors_carry_a_path() {
        let text = with_spectrum(r#"{"family": "type2", "zeros": [[0, 1, 2]], "seeds": [[[1,0],[2,0],[3,0]]]}"#);
        match parse_config(&text).unwrap_err() {
            ConfigError::Parse { path, .. } => assert_eq!(path, "spectrum.zeros[0]"),
            other => panic!("{other:?}"),
        }
        let text = with_spectrum(r#"{"family": "type3", "zeros": [], "seeds": []}"#);
        assert!(matches!(parse_config(&text), Err(ConfigError::Parse { path, .. }) if path == "spectrum.family"));
        assert!(matches!(parse_config("{"), Err(ConfigError::Parse { .. })));
        assert!(matches!(parse_config(&format!("{MINIMAL} x")), Err(ConfigError::Parse { .. })));
        let bad_stencil = MINIMAL.replacen('}', r#"}, "stencil": {"hx": 0.5, "ht": 0.001}"#, 1);
        assert!(matches!(parse_config(&bad_stencil), Err(ConfigError::Parse { path, .. }) if path == "stencil"));
    }

    #[test]
    fn seed_length_and_grid_are_validated() {
        let text = with_spectrum(r#"{"family": "type2", "zeros": [[0, 1]], "seeds": [[[1,0],[2,0]]]}"#);
        assert!(matches!(parse_config(&text), Err(ConfigError::SeedLength { got: 2, want: 3, .. })));
        let text = MINIMAL.replace(r#""nx": 201"#, r#""nx": 1"#);
        assert!(matches!(parse_config(&text), Err(ConfigError::Grid(_))));
        let text = with_spectrum(r#"{"family": "type2", "zeros": [[0, 1], [0, 1]], "seeds": [[[1,0],[2,0],[3,0]], [[1,0],[2,0],[3,0]]]}"#);
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::Spectrum(SpectrumError::Coincident { .. }))
        ));
    }

    #[test]
    fn round_trip() {
        let cfg = parse_config(MINIMAL)
            .unwrap()
            .with_checks(Check::ALL)
            .with_output(Some(OutputSpec { path: "out.csv".into(), format: OutputFormat::Json }));
        assert_eq!(parse_config(&cfg.to_json()).unwrap(), cfg);
    }
}
