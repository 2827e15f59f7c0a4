//! Run configuration: a flat TOML table of scalars plus one sweep axis.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use spinpump_core::dephasing::SplitterConfig;
use spinpump_core::pump::{PumpCycle, PumpingMode, DEFAULT_NODES};
use spinpump_core::soc::{BranchConvention, SocConfig};

/// Default number of grid points when only `start`/`stop` are given.
pub const DEFAULT_POINTS: usize = 400;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "kebab-case")]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = ConfigError;

            fn from_str(s: &str) -> Result<Self, ConfigError> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => {
                        let known: Vec<&str> = Self::ALL.iter().map(|v| v.as_str()).collect();
                        invalid(format!("unknown {} '{s}' (expected one of {})", stringify!($name).to_lowercase(), known.join(", ")))
                    }
                }
            }
        }
    };
}

keyword_enum!(Model { Coherent => "coherent", Soc => "soc", Dephased => "dephased" });
keyword_enum!(Mode { Weak => "weak", Cycle => "cycle" });
keyword_enum!(Observable { Current => "current", Heat => "heat" });
keyword_enum!(Axis {
    Energy => "energy",
    Amplitude => "x_p",
    Phase => "phi",
    Field => "b_x",
    Width => "d0",
    AlphaR => "alpha_r",
    AlphaD => "alpha_d",
    Epsilon => "epsilon",
});

impl Mode {
    pub fn pumping(self) -> PumpingMode {
        match self {
            Mode::Weak => PumpingMode::Weak,
            Mode::Cycle => PumpingMode::Cycle,
        }
    }
}

/// Scalar parameters of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub energy: f64,
    pub d0: f64,
    pub b_x: f64,
    pub x_p: f64,
    pub phi: f64,
    pub g_star: f64,
    pub q: f64,
    pub omega: f64,
    pub nodes: usize,
    pub alpha_r: f64,
    pub alpha_d: f64,
    pub soc_convention: BranchConvention,
    pub epsilon: f64,
    pub width_continuation: bool,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            energy: 30.0,
            d0: 5.0,
            b_x: 5.0,
            x_p: 0.1,
            phi: std::f64::consts::FRAC_PI_2,
            g_star: 0.44,
            q: 0.0,
            omega: 1.0,
            nodes: DEFAULT_NODES,
            alpha_r: 0.0,
            alpha_d: 0.0,
            soc_convention: BranchConvention::UpLowered,
            epsilon: 0.0,
            width_continuation: false,
        }
    }
}

impl Params {
    pub fn with_axis(mut self, axis: Axis, value: f64) -> Self {
        match axis {
            Axis::Energy => self.energy = value,
            Axis::Amplitude => self.x_p = value,
            Axis::Phase => self.phi = value,
            Axis::Field => self.b_x = value,
            Axis::Width => self.d0 = value,
            Axis::AlphaR => self.alpha_r = value,
            Axis::AlphaD => self.alpha_d = value,
            Axis::Epsilon => self.epsilon = value,
        }
        self
    }

    pub fn cycle(&self) -> spinpump_core::Result<PumpCycle> {
        PumpCycle::new(self.d0, self.b_x, 0.0, self.phi)?
            .with_width_continuation(self.width_continuation)?
            .with_amplitudes(self.x_p, self.x_p)?
            .with_omega(self.omega)?
            .with_nodes(self.nodes)
    }

    pub fn soc(&self) -> spinpump_core::Result<SocConfig> {
        Ok(SocConfig::new(self.alpha_r, self.alpha_d)?.with_convention(self.soc_convention))
    }

    /// `key = value` pairs in a fixed order, for headers and metadata.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        vec![
            ("energy", fmt_f64(self.energy)),
            ("d0", fmt_f64(self.d0)),
            ("b_x", fmt_f64(self.b_x)),
            ("x_p", fmt_f64(self.x_p)),
            ("phi", fmt_f64(self.phi)),
            ("g_star", fmt_f64(self.g_star)),
            ("q", fmt_f64(self.q)),
            ("omega", fmt_f64(self.omega)),
            ("nodes", self.nodes.to_string()),
            ("alpha_r", fmt_f64(self.alpha_r)),
            ("alpha_d", fmt_f64(self.alpha_d)),
            (
                "soc_convention",
                match self.soc_convention {
                    BranchConvention::UpLowered => "up-lowered".into(),
                    BranchConvention::UpRaised => "up-raised".into(),
                },
            ),
            ("epsilon", fmt_f64(self.epsilon)),
            ("width_continuation", self.width_continuation.to_string()),
        ]
    }
}

/// Shortest representation that round-trips.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// A validated sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub model: Model,
    pub mode: Mode,
    pub observable: Observable,
    pub params: Params,
    pub axis: Axis,
    pub grid: Vec<f64>,
    pub output_dir: PathBuf,
}

/// Keys accepted in a config file. Everything is optional except the sweep
/// axis and its grid.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    model: Option<String>,
    mode: Option<String>,
    observable: Option<String>,
    energy: Option<f64>,
    d0: Option<f64>,
    b_x: Option<f64>,
    x_p: Option<f64>,
    phi: Option<f64>,
    g_star: Option<f64>,
    q: Option<f64>,
    omega: Option<f64>,
    nodes: Option<usize>,
    alpha_r: Option<f64>,
    alpha_d: Option<f64>,
    soc_convention: Option<String>,
    epsilon: Option<f64>,
    width_continuation: Option<bool>,
    axis: Option<String>,
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
    values: Option<Vec<f64>>,
    output: Option<PathBuf>,
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        let defaults = Params::default();
        let params = Params {
            energy: raw.energy.unwrap_or(defaults.energy),
            d0: raw.d0.unwrap_or(defaults.d0),
            b_x: raw.b_x.unwrap_or(defaults.b_x),
            x_p: raw.x_p.unwrap_or(defaults.x_p),
            phi: raw.phi.unwrap_or(defaults.phi),
            g_star: raw.g_star.unwrap_or(defaults.g_star),
            q: raw.q.unwrap_or(defaults.q),
            omega: raw.omega.unwrap_or(defaults.omega),
            nodes: raw.nodes.unwrap_or(defaults.nodes),
            alpha_r: raw.alpha_r.unwrap_or(defaults.alpha_r),
            alpha_d: raw.alpha_d.unwrap_or(defaults.alpha_d),
            soc_convention: match raw.soc_convention.as_deref() {
                None | Some("up-lowered") => BranchConvention::UpLowered,
                Some("up-raised") => BranchConvention::UpRaised,
                Some(other) => return invalid(format!("unknown soc_convention '{other}' (expected up-lowered or up-raised)")),
            },
            epsilon: raw.epsilon.unwrap_or(defaults.epsilon),
            width_continuation: raw.width_continuation.unwrap_or(false),
        };
        let axis: Axis = match raw.axis.as_deref() {
            Some(a) => a.parse()?,
            None => return invalid("missing sweep axis ('axis = ...')"),
        };
        let grid = match (raw.values, raw.start, raw.stop) {
            (Some(values), None, None) => {
                if raw.points.is_some() {
                    return invalid("'points' cannot be combined with an explicit 'values' list");
                }
                values
            }
            (None, Some(start), Some(stop)) => linspace(start, stop, raw.points.unwrap_or(DEFAULT_POINTS)),
            (None, None, None) => return invalid("missing sweep grid: give 'values' or 'start' and 'stop'"),
            _ => return invalid("give either 'values' or 'start'/'stop', not a mix"),
        };
        let output = raw.output.unwrap_or_else(|| PathBuf::from("."));
        let config = RunConfig {
            name: raw.name.unwrap_or_else(|| "sweep".to_string()),
            model: raw.model.as_deref().unwrap_or("coherent").parse()?,
            mode: raw.mode.as_deref().unwrap_or("cycle").parse()?,
            observable: raw.observable.as_deref().unwrap_or("current").parse()?,
            params,
            axis,
            grid,
            output_dir: if output.is_absolute() { output } else { base_dir.join(output) },
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        RunConfig::from_toml_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Checks the grid and every module precondition that does not depend on
    /// the scattering itself (those surface as flagged rows).
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return invalid(format!("run name '{}' must be a plain file stem", self.name));
        }
        if self.grid.is_empty() {
            return invalid("sweep grid is empty");
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return invalid("sweep grid contains non-finite values");
        }
        let increasing = self.grid.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.grid.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return invalid("sweep grid must be strictly monotone (duplicate or unordered values)");
        }
        if self.model != Model::Soc && matches!(self.axis, Axis::AlphaR | Axis::AlphaD) {
            return invalid(format!("axis {} needs model = \"soc\"", self.axis));
        }
        if self.model != Model::Dephased && self.axis == Axis::Epsilon {
            return invalid("axis epsilon needs model = \"dephased\"");
        }
        for &value in &self.grid {
            let p = self.params.with_axis(self.axis, value);
            let context = |e: spinpump_core::Error| ConfigError::Invalid(format!("at {} = {value}: {e}", self.axis));
            p.cycle().map_err(context)?;
            if !(p.g_star.is_finite() && p.q.is_finite() && p.energy.is_finite()) {
                return invalid(format!("at {} = {value}: non-finite parameter", self.axis));
            }
            if 2.0 * p.energy <= p.q * p.q {
                return invalid(format!("at {} = {value}: no propagating lead mode (2E <= q^2)", self.axis));
            }
            match self.model {
                Model::Coherent => {}
                Model::Soc => {
                    p.soc().map_err(context)?;
                }
                Model::Dephased => {
                    SplitterConfig::new(p.epsilon).map_err(context)?;
                }
            }
        }
        Ok(())
    }

    /// Header echo of the full configuration.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("name", self.name.clone()),
            ("model", self.model.to_string()),
            ("mode", self.mode.to_string()),
            ("observable", self.observable.to_string()),
            ("axis", self.axis.to_string()),
            ("points", self.grid.len().to_string()),
            ("first", fmt_f64(self.grid[0])),
            ("last", fmt_f64(*self.grid.last().unwrap())),
        ];
        out.extend(self.params.echo().into_iter().filter(|(k, _)| *k != self.axis.as_str()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        RunConfig::from_toml_str(text, Path::new("/tmp"))
    }

    #[test]
    fn minimal_config() {
        let c = parse("axis = \"energy\"\nstart = 20.0\nstop = 30.0\npoints = 11\n").unwrap();
        assert_eq!(c.grid.len(), 11);
        assert_eq!(c.grid[10], 30.0);
        assert_eq!(c.model, Model::Coherent);
        assert_eq!(c.output_dir, PathBuf::from("/tmp/."));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(parse("axis = \"energy\"\nvalues = []\n").unwrap_err().to_string().contains("empty"));
        assert!(parse("axis = \"energy\"\nvalues = [20.0, 20.0]\n").unwrap_err().to_string().contains("monotone"));
        assert!(parse("axis = \"energy\"\nvalues = [20.0, 25.0, 21.0]\n").is_err());
        assert!(parse("axis = \"energy\"\nstart = 20.0\nstop = 20.0\npoints = 3\n").is_err());
        assert!(parse("axis = \"energy\"\nstart = 20.0\n").is_err());
        assert!(parse("values = [1.0]\n").unwrap_err().to_string().contains("axis"));
        assert!(parse("axis = \"energy\"\nvalues = [20.0]\nbogus = 1\n").is_err());
    }

    #[test]
    fn checks_module_preconditions_up_front() {
        let err = parse("axis = \"x_p\"\nvalues = [1.0, 6.0]\nd0 = 5.0\n").unwrap_err();
        assert!(err.to_string().contains("x_p = 6"), "{err}");
        assert!(parse("axis = \"x_p\"\nvalues = [1.0, 6.0]\nd0 = 5.0\nwidth_continuation = true\n").is_ok());
        assert!(parse("axis = \"epsilon\"\nvalues = [0.5]\n").is_err());
        assert!(parse("axis = \"epsilon\"\nmodel = \"dephased\"\nvalues = [0.5, 1.5]\n").is_err());
        assert!(parse("axis = \"alpha_r\"\nmodel = \"soc\"\nvalues = [0.5]\nalpha_d = 0.1\n").is_err());
        assert!(parse("axis = \"phi\"\nvalues = [0.5]\nnodes = 17\n").is_err());
        assert!(parse("axis = \"energy\"\nvalues = [0.1]\nq = 1.0\n").is_err());
        assert!(parse("axis = \"energy\"\nmodel = \"quantum\"\nvalues = [1.0]\n").is_err());
    }

    #[test]
    fn params_follow_axis() {
        let p = Params::default().with_axis(Axis::Epsilon, 0.3).with_axis(Axis::Amplitude, 0.7);
        assert_eq!((p.epsilon, p.x_p), (0.3, 0.7));
        let c = p.cycle().unwrap();
        assert_eq!((c.width_amplitude, c.field_amplitude), (0.7, 0.7));
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 0), Vec::<f64>::new());
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
        let v = linspace(0.0, 0.3, 4);
        assert_eq!(v[3], 0.3);
        assert!((v[1] - 0.1).abs() < 1e-16);
    }
}
