//! Flat JSON configuration merged with command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use btz_otto::cycle::EntropyConvention;
use btz_otto::response::{Boundary, DEFAULT_N_MAX, DEFAULT_TERM_TOL};
use btz_otto::sweep::Grid;
use clap::Args;
use serde::{Deserialize, Deserializer, Serialize};

/// A configuration problem, reported with the offending key.
#[derive(Debug)]
pub struct ConfigError {
    pub key: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.key, self.reason)
    }
}

/// `start:stop:count`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg(pub Grid);

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("expected start:stop:count, got `{s}`"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("count `{count}`: {e}"))?;
        Ok(GridArg(Grid {
            start: num(start)?,
            stop: num(stop)?,
            count,
        }))
    }
}

impl Serialize for GridArg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let g = self.0;
        s.serialize_str(&format!("{}:{}:{}", g.start, g.stop, g.count))
    }
}

impl<'de> Deserialize<'de> for GridArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Triple(f64, f64, usize),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Triple(start, stop, count) => Ok(GridArg(Grid { start, stop, count })),
        }
    }
}

fn zeta_list<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<i64>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        One(i64),
        Many(Vec<i64>),
    }
    Ok(Some(match Repr::deserialize(d)? {
        Repr::One(z) => vec![z],
        Repr::Many(v) => v,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Standard,
    Paper,
}

impl From<Convention> for EntropyConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Standard => EntropyConvention::Standard,
            Convention::Paper => EntropyConvention::Paper,
        }
    }
}

/// Every tunable parameter. Unset values fall back to per-command defaults.
/// The same shape is accepted from a JSON file and recorded in manifests.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Black hole mass parameter
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,

    /// Boundary condition(s) at infinity: -1 (Neumann), 0 (transparent), 1 (Dirichlet)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "zeta_list", skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Vec<i64>>,

    /// Detector gap for `rate` and the rate sweep
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,

    #[arg(long = "omega-c", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_c: Option<f64>,

    #[arg(long = "omega-h", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_h: Option<f64>,

    /// Hot bath temperature (the bath temperature for `rate`)
    #[arg(long = "Th", allow_negative_numbers = true)]
    #[serde(rename = "Th", skip_serializing_if = "Option::is_none")]
    pub t_h: Option<f64>,

    #[arg(long = "Tc", allow_negative_numbers = true)]
    #[serde(rename = "Tc", skip_serializing_if = "Option::is_none")]
    pub t_c: Option<f64>,

    #[arg(long = "tau-h", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_h: Option<f64>,

    #[arg(long = "tau-c", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_c: Option<f64>,

    /// Largest image index in the rate sums
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,

    /// Stop the image sum once the remaining terms are bounded by this
    #[arg(long = "term-tol")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term_tol: Option<f64>,

    #[arg(long = "entropy-convention", value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_convention: Option<Convention>,

    /// Sweep grid as start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridArg>,

    /// Output CSV path; a manifest is written next to it
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// Flat JSON file of parameters; flags take precedence
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($field:ident),*) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field.clone(); } )*
    };
}

impl Settings {
    /// Read the `--config` file, if any, and overlay the flags on it.
    pub fn resolve(flags: &Settings) -> Result<Settings, ConfigError> {
        let mut merged = match &flags.config {
            Some(path) => Self::from_file(path)?,
            None => Settings::default(),
        };
        merged.overlay(flags);
        merged.validate()?;
        Ok(merged)
    }

    pub fn from_file(path: &Path) -> Result<Settings, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        if text.trim().is_empty() {
            return Ok(Settings::default());
        }
        // A run manifest carries its resolved parameters under `params`.
        if let Ok(serde_json::Value::Object(map)) = serde_json::from_str::<serde_json::Value>(&text) {
            if map.contains_key("command") {
                if let Some(params) = map.get("params") {
                    return Self::from_value(params.clone());
                }
            }
        }
        Self::from_value(serde_json::from_str(&text).map_err(|e| ConfigError::new("config", e.to_string()))?)
    }

    fn from_value(value: serde_json::Value) -> Result<Settings, ConfigError> {
        serde_json::from_value(value).map_err(|e| {
            let msg = e.to_string();
            let key = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.starts_with("unknown field"))
                .unwrap_or("config")
                .to_string();
            ConfigError::new(key, msg)
        })
    }

    pub fn overlay(&mut self, other: &Settings) {
        overlay!(
            self, other, mass, zeta, omega, omega_c, omega_h, t_h, t_c, tau_h, tau_c, nmax, term_tol,
            entropy_convention, grid, out
        );
    }

    /// Domain checks that do not depend on the command.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("mass", self.mass),
            ("omega_c", self.omega_c),
            ("omega_h", self.omega_h),
            ("Th", self.t_h),
            ("Tc", self.t_c),
            ("term_tol", self.term_tol),
        ];
        for (key, v) in positive {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(ConfigError::new(key, format!("{v} must be positive and finite")));
                }
            }
        }
        for (key, v) in [("tau_h", self.tau_h), ("tau_c", self.tau_c)] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(ConfigError::new(key, format!("{v} must be nonnegative and finite")));
                }
            }
        }
        if let Some(omega) = self.omega {
            if !(omega != 0.0 && omega.is_finite()) {
                return Err(ConfigError::new("omega", format!("{omega} must be nonzero and finite")));
            }
        }
        if self.nmax == Some(0) {
            return Err(ConfigError::new("nmax", "must be at least 1"));
        }
        if let Some(zs) = &self.zeta {
            if zs.is_empty() {
                return Err(ConfigError::new("zeta", "list is empty"));
            }
            for &z in zs {
                Boundary::from_zeta(z).map_err(|_| ConfigError::new("zeta", format!("{z} is not one of -1, 0, 1")))?;
            }
        }
        if let Some(GridArg(g)) = self.grid {
            g.validate().map_err(|e| ConfigError::new("grid", e.to_string()))?;
        }
        Ok(())
    }

    pub fn boundaries(&self) -> Option<Vec<Boundary>> {
        self.zeta.as_ref().map(|zs| {
            zs.iter()
                .map(|&z| Boundary::from_zeta(z).expect("validated"))
                .collect()
        })
    }

    pub fn n_max(&self) -> usize {
        self.nmax.unwrap_or(DEFAULT_N_MAX)
    }

    pub fn term_tol(&self) -> f64 {
        self.term_tol.unwrap_or(DEFAULT_TERM_TOL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_text() {
        let g: GridArg = "0.01:2:200".parse().unwrap();
        assert_eq!(g.0, Grid { start: 0.01, stop: 2.0, count: 200 });
        assert!("1:2".parse::<GridArg>().is_err());
        assert!("a:2:3".parse::<GridArg>().is_err());
    }

    #[test]
    fn json_shapes() {
        let s: Settings = serde_json::from_str(r#"{"zeta": -1, "grid": [0, 1, 5], "Th": 2}"#).unwrap();
        assert_eq!(s.zeta, Some(vec![-1]));
        assert_eq!(s.grid.unwrap().0.count, 5);
        assert_eq!(s.t_h, Some(2.0));
        let s: Settings = serde_json::from_str(r#"{"zeta": [-1, 1], "grid": "0:1:3"}"#).unwrap();
        assert_eq!(s.zeta, Some(vec![-1, 1]));
        assert!(serde_json::from_str::<Settings>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn overlay_prefers_flags() {
        let mut file = Settings {
            mass: Some(0.5),
            t_h: Some(3.0),
            ..Settings::default()
        };
        let flags = Settings {
            mass: Some(0.01),
            ..Settings::default()
        };
        file.overlay(&flags);
        assert_eq!(file.mass, Some(0.01));
        assert_eq!(file.t_h, Some(3.0));
    }

    #[test]
    fn validation_names_keys() {
        let bad = Settings {
            zeta: Some(vec![2]),
            ..Settings::default()
        };
        assert_eq!(bad.validate().unwrap_err().key, "zeta");
        let bad = Settings {
            tau_h: Some(-1.0),
            ..Settings::default()
        };
        assert_eq!(bad.validate().unwrap_err().key, "tau_h");
    }
}
