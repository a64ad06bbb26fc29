//! Run configuration: a flat `key = value` file, `#` starts a comment.
//!
//! ```text
//! deformation = quadratic     # zero | quadratic | exponential | expr
//! alpha = 1
//! potential = zero            # zero | half-morse | expr
//! domain = -inf, inf
//! space = z                   # x | z | both
//! states = 4
//! grid_n = 4096
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{fmt_float, StageError};

pub const MIN_GRID: usize = 64;

const KEYS: &[&str] = &[
    "deformation",
    "alpha",
    "gamma",
    "mu",
    "potential",
    "v0",
    "v",
    "domain",
    "z_domain",
    "space",
    "states",
    "grid_n",
    "hbar",
    "mass",
    "out",
];

#[derive(Debug, Clone, PartialEq)]
pub enum DeformationSpec {
    Zero,
    Quadratic { alpha: f64 },
    Exponential { gamma: f64 },
    Expression { text: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    HalfMorse { v0: f64, gamma: f64 },
    Expression { text: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveSpace {
    X,
    Z,
    Both,
}

impl SolveSpace {
    pub fn name(self) -> &'static str {
        match self {
            SolveSpace::X => "x",
            SolveSpace::Z => "z",
            SolveSpace::Both => "both",
        }
    }
}

/// Fully resolved configuration, defaults expanded.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub deformation: DeformationSpec,
    pub potential: PotentialSpec,
    pub params: BTreeMap<String, f64>,
    pub hbar: f64,
    pub mass: f64,
    pub domain: (f64, f64),
    pub z_domain: Option<(f64, f64)>,
    pub space: SolveSpace,
    pub states: usize,
    pub grid_n: usize,
    pub out: PathBuf,
}

/// Raw key/value pairs before resolution; CLI overrides are applied here.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<RawConfig, StageError> {
        let mut entries = BTreeMap::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(StageError::input("config", format!("line {}: expected key = value", number + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            if !(KEYS.contains(&key) || key.strip_prefix("param.").is_some_and(valid_name)) {
                return Err(StageError::input("config", format!("line {}: unknown key '{key}'", number + 1)));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(StageError::input("config", format!("line {}: duplicate key '{key}'", number + 1)));
            }
        }
        Ok(RawConfig { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn number(&self, key: &str, default: f64) -> Result<f64, StageError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => {
                let x = parse_number(key, v)?;
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(StageError::input("config", format!("{key} must be finite, got '{v}'")))
                }
            }
        }
    }

    fn count(&self, key: &str, default: usize) -> Result<usize, StageError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| StageError::input("config", format!("{key} must be a positive integer, got '{v}'"))),
        }
    }

    fn interval(&self, key: &str) -> Result<Option<(f64, f64)>, StageError> {
        let Some(v) = self.get(key) else {
            return Ok(None);
        };
        let parts: Vec<&str> = v.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(StageError::input("config", format!("{key} must be 'lo, hi', got '{v}'")));
        }
        let (lo, hi) = (parse_number(key, parts[0])?, parse_number(key, parts[1])?);
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(StageError::input("config", format!("{key} needs lo < hi, got '{v}'")));
        }
        Ok(Some((lo, hi)))
    }

    pub fn resolve(&self) -> Result<RunConfig, StageError> {
        let kind = self.get("deformation").unwrap_or("quadratic");
        let deformation = match kind {
            "zero" => DeformationSpec::Zero,
            "quadratic" => DeformationSpec::Quadratic {
                alpha: self.number("alpha", 1.0)?,
            },
            "exponential" => DeformationSpec::Exponential {
                gamma: self.number("gamma", 1.0)?,
            },
            "expr" => DeformationSpec::Expression {
                text: self
                    .get("mu")
                    .ok_or_else(|| StageError::input("config", "deformation = expr needs mu = <expression>"))?
                    .to_string(),
            },
            other => return Err(StageError::input("config", format!("unknown deformation '{other}'"))),
        };
        let potential = match self.get("potential").unwrap_or("zero") {
            "zero" => PotentialSpec::Zero,
            "half-morse" => PotentialSpec::HalfMorse {
                v0: self.number("v0", 1.0)?,
                gamma: self.number("gamma", 1.0)?,
            },
            "expr" => PotentialSpec::Expression {
                text: self
                    .get("v")
                    .ok_or_else(|| StageError::input("config", "potential = expr needs v = <expression>"))?
                    .to_string(),
            },
            other => return Err(StageError::input("config", format!("unknown potential '{other}'"))),
        };
        let mut params = BTreeMap::new();
        for (key, value) in &self.entries {
            if let Some(name) = key.strip_prefix("param.") {
                params.insert(name.to_string(), self.number(key, f64::NAN).map_err(|_| {
                    StageError::input("config", format!("{key} must be a finite number, got '{value}'"))
                })?);
            }
        }
        let default_domain = match (&deformation, &potential) {
            (_, PotentialSpec::HalfMorse { .. }) => (0.0, f64::INFINITY),
            (DeformationSpec::Exponential { gamma }, _) => (-10.0 / gamma.abs(), 10.0 / gamma.abs()),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        };
        let space = match self.get("space").unwrap_or("z") {
            "x" => SolveSpace::X,
            "z" => SolveSpace::Z,
            "both" => SolveSpace::Both,
            other => return Err(StageError::input("config", format!("space must be x, z or both, got '{other}'"))),
        };
        let states = self.count("states", 4)?;
        if states < 1 {
            return Err(StageError::input("config", "states must be at least 1"));
        }
        let grid_n = self.count("grid_n", 4096)?;
        if grid_n < MIN_GRID {
            return Err(StageError::input("config", format!("grid_n must be at least {MIN_GRID}, got {grid_n}")));
        }
        if states > grid_n {
            return Err(StageError::input("config", format!("states ({states}) exceeds grid_n ({grid_n})")));
        }
        let hbar = self.number("hbar", 1.0)?;
        let mass = self.number("mass", 1.0)?;
        if hbar <= 0.0 || mass <= 0.0 {
            return Err(StageError::input("config", "hbar and mass must be positive"));
        }
        Ok(RunConfig {
            deformation,
            potential,
            params,
            hbar,
            mass,
            domain: self.interval("domain")?.unwrap_or(default_domain),
            z_domain: self.interval("z_domain")?,
            space,
            states,
            grid_n,
            out: PathBuf::from(self.get("out").unwrap_or("out")),
        })
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "x"
}

fn parse_number(key: &str, v: &str) -> Result<f64, StageError> {
    match v {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => v
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| StageError::input("config", format!("{key}: '{v}' is not a number"))),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, StageError> {
        RawConfig::parse(text)?.resolve()
    }

    /// The resolved configuration as `key = value` pairs, in the same
    /// syntax the parser accepts.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            out.insert(k.to_string(), v);
        };
        match &self.deformation {
            DeformationSpec::Zero => put("deformation", "zero".into()),
            DeformationSpec::Quadratic { alpha } => {
                put("deformation", "quadratic".into());
                put("alpha", fmt_float(*alpha));
            }
            DeformationSpec::Exponential { gamma } => {
                put("deformation", "exponential".into());
                put("gamma", fmt_float(*gamma));
            }
            DeformationSpec::Expression { text } => {
                put("deformation", "expr".into());
                put("mu", text.clone());
            }
        }
        match &self.potential {
            PotentialSpec::Zero => put("potential", "zero".into()),
            PotentialSpec::HalfMorse { v0, gamma } => {
                put("potential", "half-morse".into());
                put("v0", fmt_float(*v0));
                put("gamma", fmt_float(*gamma));
            }
            PotentialSpec::Expression { text } => {
                put("potential", "expr".into());
                put("v", text.clone());
            }
        }
        for (name, value) in &self.params {
            put(&format!("param.{name}"), fmt_float(*value));
        }
        let interval = |(lo, hi): (f64, f64)| format!("{}, {}", fmt_float(lo), fmt_float(hi));
        put("domain", interval(self.domain));
        if let Some(z) = self.z_domain {
            put("z_domain", interval(z));
        }
        put("space", self.space.name().into());
        put("states", self.states.to_string());
        put("grid_n", self.grid_n.to_string());
        put("hbar", fmt_float(self.hbar));
        put("mass", fmt_float(self.mass));
        put("out", self.out.display().to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::parse("").unwrap();
        assert_eq!(c.deformation, DeformationSpec::Quadratic { alpha: 1.0 });
        assert_eq!(c.potential, PotentialSpec::Zero);
        assert_eq!(c.domain, (f64::NEG_INFINITY, f64::INFINITY));
        assert_eq!((c.space, c.states, c.grid_n), (SolveSpace::Z, 4, 4096));
    }

    #[test]
    fn full_file_round_trips_through_pairs() {
        let text = "deformation = expr\nmu = k*x^2  # comment\nparam.k = 0.5\npotential = half-morse\n\
                    v0 = 2\ngamma = 1.5\ndomain = 0, 3\nz_domain = 0, 4\nspace = both\nstates = 3\ngrid_n = 128\n";
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(c.params["k"], 0.5);
        assert_eq!(c.potential, PotentialSpec::HalfMorse { v0: 2.0, gamma: 1.5 });
        let echoed: String = c.to_pairs().iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        assert_eq!(RunConfig::parse(&echoed).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "colour = red",
            "alpha = 1\nalpha = 2",
            "grid_n = 10",
            "states = 0",
            "space = y",
            "domain = 1, 0",
            "alpha = abc",
            "alpha = inf",
            "deformation = expr",
            "just text",
            "param.x = 1",
        ] {
            let e = RunConfig::parse(text).unwrap_err();
            assert_eq!((e.stage, e.exit_code()), ("config", 2), "{text}");
        }
    }

    #[test]
    fn overrides() {
        let mut raw = RawConfig::parse("alpha = 1\ngrid_n = 100").unwrap();
        raw.set("alpha", "2");
        raw.set("grid_n", "256");
        let c = raw.resolve().unwrap();
        assert_eq!(c.deformation, DeformationSpec::Quadratic { alpha: 2.0 });
        assert_eq!(c.grid_n, 256);
    }
}
