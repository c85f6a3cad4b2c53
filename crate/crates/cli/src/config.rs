//! Experiment configuration: a flat `key = value` schema shared by the
//! command-line flags and config files, with a canonical text form.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    MinMono,
    BhCheck,
    McfMono,
    Entropy,
    PharmMono,
    HeatMono,
    IdentitySuite,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::MinMono,
        Command::BhCheck,
        Command::McfMono,
        Command::Entropy,
        Command::PharmMono,
        Command::HeatMono,
        Command::IdentitySuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::MinMono => "min-mono",
            Command::BhCheck => "bh-check",
            Command::McfMono => "mcf-mono",
            Command::Entropy => "entropy",
            Command::PharmMono => "pharm-mono",
            Command::HeatMono => "heat-mono",
            Command::IdentitySuite => "identity-suite",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::MinMono => "Area ratio of a minimal surface on the moving-centre balls",
            Command::BhCheck => "Density lower bound at the centre y from the area ratio at s = 1",
            Command::McfMono => "Gaussian density of a mean curvature flow along a centre path",
            Command::Entropy => "Gaussian density scan of a self-shrinker",
            Command::PharmMono => "Energy ratio of a stationary p-harmonic map",
            Command::HeatMono => "Weighted energy of a harmonic map heat flow along a centre path",
            Command::IdentitySuite => "Randomized pointwise identities (seeded)",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Kind {
    Num,
    Count,
    Vector,
    /// `lo:hi:count`
    Grid,
    Choice(&'static [&'static str]),
    Flag,
    Path,
    /// A vector or one of the listed words.
    VectorOr(&'static [&'static str]),
}

pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    /// Empty means every command.
    pub commands: &'static [Command],
    pub help: &'static str,
}

impl Key {
    pub fn applies(&self, command: Command) -> bool {
        self.commands.is_empty() || self.commands.contains(&command)
    }
}

use Command::*;

const MINIMAL: &[Command] = &[MinMono, BhCheck];
const FLOWS: &[Command] = &[McfMono, HeatMono];

pub const SURFACES: &[&str] = &[
    "flat-disk",
    "tilted-plane",
    "catenoid",
    "helicoid",
    "spherical-cap",
    "pair-of-planes",
];

pub const KEYS: &[Key] = &[
    Key {
        name: "out-csv",
        kind: Kind::Path,
        commands: &[],
        help: "CSV series output",
    },
    Key {
        name: "out-svg",
        kind: Kind::Path,
        commands: &[],
        help: "SVG plot output",
    },
    Key {
        name: "quad-cells",
        kind: Kind::Count,
        commands: &[],
        help: "Base quadrature cells per axis",
    },
    Key {
        name: "quad-order",
        kind: Kind::Count,
        commands: &[],
        help: "Gauss points per axis per cell",
    },
    Key {
        name: "tol",
        kind: Kind::Num,
        commands: &[],
        help: "Quadrature tolerance",
    },
    Key {
        name: "seed",
        kind: Kind::Count,
        commands: &[IdentitySuite],
        help: "RNG seed",
    },
    Key {
        name: "samples",
        kind: Kind::Count,
        commands: &[IdentitySuite],
        help: "Random samples per identity",
    },
    Key {
        name: "inject-fault",
        kind: Kind::Choice(&["none", "negate-flux"]),
        commands: &[MinMono, McfMono, Entropy, PharmMono, HeatMono],
        help: "Deliberately corrupt the analytic derivative",
    },
    Key {
        name: "surface",
        kind: Kind::Choice(SURFACES),
        commands: MINIMAL,
        help: "Catalog surface",
    },
    Key {
        name: "neck",
        kind: Kind::Num,
        commands: MINIMAL,
        help: "Catenoid neck radius",
    },
    Key {
        name: "pitch",
        kind: Kind::Num,
        commands: MINIMAL,
        help: "Helicoid pitch",
    },
    Key {
        name: "angle",
        kind: Kind::Num,
        commands: MINIMAL,
        help: "Tilt angle of tilted-plane (radians)",
    },
    Key {
        name: "radius",
        kind: Kind::Num,
        commands: MINIMAL,
        help: "Spherical cap radius",
    },
    Key {
        name: "half-width",
        kind: Kind::Num,
        commands: MINIMAL,
        help: "Chart half-width",
    },
    Key {
        name: "orient-normal-to-y",
        kind: Kind::Flag,
        commands: MINIMAL,
        help: "Orient flat-disk orthogonally to y",
    },
    Key {
        name: "c-h",
        kind: Kind::Num,
        commands: &[MinMono],
        help: "Mean curvature bound C_H",
    },
    Key {
        name: "y",
        kind: Kind::VectorOr(&["on-surface-nearest-origin"]),
        commands: &[MinMono, BhCheck, Entropy, PharmMono],
        help: "Centre y",
    },
    Key {
        name: "s",
        kind: Kind::Grid,
        commands: &[MinMono, BhCheck, Entropy, PharmMono],
        help: "Scale grid lo:hi:count",
    },
    Key {
        name: "flow",
        kind: Kind::Choice(&["plane", "sphere", "circle", "cylinder"]),
        commands: &[McfMono],
        help: "Closed-form flow",
    },
    Key {
        name: "path",
        kind: Kind::Choice(&["constant", "line", "circle", "parabola"]),
        commands: FLOWS,
        help: "Centre path",
    },
    Key {
        name: "y0",
        kind: Kind::VectorOr(&["normal"]),
        commands: FLOWS,
        help: "Velocity of a line path",
    },
    Key {
        name: "x0",
        kind: Kind::Vector,
        commands: FLOWS,
        help: "Base point of a constant or line path",
    },
    Key {
        name: "eps",
        kind: Kind::Num,
        commands: FLOWS,
        help: "Amplitude of a circle or parabola path",
    },
    Key {
        name: "t0",
        kind: Kind::Num,
        commands: FLOWS,
        help: "Weight time t0",
    },
    Key {
        name: "t",
        kind: Kind::Grid,
        commands: FLOWS,
        help: "Time grid lo:hi:count",
    },
    Key {
        name: "shrinker",
        kind: Kind::Choice(&["circle", "sphere", "cylinder", "plane"]),
        commands: &[Entropy],
        help: "Self-shrinker",
    },
    Key {
        name: "a",
        kind: Kind::Num,
        commands: &[Entropy],
        help: "Scale parameter a",
    },
    Key {
        name: "map",
        kind: Kind::Choice(&["constant", "linear", "radial", "heat-kernel", "zero"]),
        commands: &[PharmMono, HeatMono],
        help: "Catalog map",
    },
    Key {
        name: "gradient",
        kind: Kind::Vector,
        commands: &[HeatMono],
        help: "Gradient of the static linear map",
    },
    Key {
        name: "p",
        kind: Kind::Num,
        commands: &[PharmMono],
        help: "Exponent p",
    },
    Key {
        name: "q",
        kind: Kind::Num,
        commands: &[PharmMono],
        help: "Family exponent q",
    },
];

pub fn key(name: &str) -> Option<&'static Key> {
    KEYS.iter().find(|k| k.name == name)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Count(u64),
    Vector(Vec<f64>),
    Grid(Grid),
    Word(String),
    Flag(bool),
    Path(PathBuf),
}

/// Where a raw entry came from, for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Flag,
    Line(usize),
}

#[derive(Debug, PartialEq)]
pub struct ConfigError {
    pub origin: Option<Source>,
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    pub fn new(origin: Option<Source>, field: Option<&str>, message: impl Into<String>) -> Self {
        ConfigError {
            origin,
            field: field.map(str::to_owned),
            message: message.into(),
        }
    }

    pub fn field(field: &str, message: impl Into<String>) -> Self {
        Self::new(None, Some(field), message)
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("config error")?;
        match self.origin {
            Some(Source::Line(n)) => write!(f, ", line {n}")?,
            Some(Source::Flag) => f.write_str(", command line")?,
            None => {}
        }
        if let Some(field) = &self.field {
            write!(f, ", field `{field}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Shortest decimal text that parses back to the same binary64.
pub fn format_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn parse_num(raw: &str) -> Result<f64, String> {
    let v: f64 = raw
        .parse()
        .map_err(|_| format!("`{raw}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{raw}` is not finite"))
    }
}

fn parse_vector(raw: &str) -> Result<Vec<f64>, String> {
    let v = raw
        .split(',')
        .map(|p| parse_num(p.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() || v.len() > 4 {
        return Err(format!("`{raw}` must have 1 to 4 comma-separated entries"));
    }
    Ok(v)
}

fn parse_value(kind: Kind, raw: &str) -> Result<Value, String> {
    match kind {
        Kind::Num => parse_num(raw).map(Value::Num),
        Kind::Count => raw
            .parse::<u64>()
            .map(Value::Count)
            .map_err(|_| format!("`{raw}` is not a nonnegative integer")),
        Kind::Vector => parse_vector(raw).map(Value::Vector),
        Kind::Grid => {
            let parts: Vec<&str> = raw.split(':').collect();
            let [lo, hi, count] = parts[..] else {
                return Err(format!("`{raw}` is not of the form lo:hi:count"));
            };
            let grid = Grid {
                lo: parse_num(lo)?,
                hi: parse_num(hi)?,
                count: count
                    .parse()
                    .map_err(|_| format!("`{count}` is not a sample count"))?,
            };
            if grid.hi <= grid.lo || grid.count < 2 {
                return Err(format!("`{raw}` needs lo < hi and at least 2 samples"));
            }
            Ok(Value::Grid(grid))
        }
        Kind::Choice(words) => {
            if words.contains(&raw) {
                Ok(Value::Word(raw.to_owned()))
            } else {
                Err(format!("`{raw}` is not one of {}", words.join(", ")))
            }
        }
        Kind::Flag => match raw {
            "true" => Ok(Value::Flag(true)),
            "false" => Ok(Value::Flag(false)),
            _ => Err(format!("`{raw}` is not true or false")),
        },
        Kind::Path => {
            if raw.is_empty() {
                Err("empty path".to_owned())
            } else {
                Ok(Value::Path(PathBuf::from(raw)))
            }
        }
        Kind::VectorOr(words) => {
            if words.contains(&raw) {
                Ok(Value::Word(raw.to_owned()))
            } else {
                parse_vector(raw)
                    .map(Value::Vector)
                    .map_err(|e| format!("{e} (or one of {})", words.join(", ")))
            }
        }
    }
}

fn format_value(v: &Value) -> String {
    match v {
        Value::Num(x) => format_num(*x),
        Value::Count(n) => n.to_string(),
        Value::Vector(xs) => xs
            .iter()
            .map(|x| format_num(*x))
            .collect::<Vec<_>>()
            .join(","),
        Value::Grid(g) => format!("{}:{}:{}", format_num(g.lo), format_num(g.hi), g.count),
        Value::Word(w) => w.clone(),
        Value::Flag(b) => b.to_string(),
        Value::Path(p) => p.display().to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub values: BTreeMap<&'static str, Value>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            values: BTreeMap::new(),
        }
    }

    /// Validates and stores one raw entry, replacing any earlier value.
    pub fn set(&mut self, name: &str, raw: &str, source: Source) -> Result<(), ConfigError> {
        let err = |msg: String| ConfigError::new(Some(source), Some(name), msg);
        let key = key(name).ok_or_else(|| err("unknown key".to_owned()))?;
        if !key.applies(self.command) {
            return Err(err(format!("not used by {}", self.command)));
        }
        let value = parse_value(key.kind, raw).map_err(err)?;
        self.values.insert(key.name, value);
        Ok(())
    }

    /// Applies a `key = value` file on top of the current values. A
    /// `command` entry must agree with the configured command.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let body = line.split_once('#').map_or(line, |(b, _)| b).trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(ConfigError::new(
                    Some(Source::Line(n)),
                    None,
                    format!("expected `key = value`, found `{body}`"),
                ));
            };
            let (k, v) = (k.trim(), v.trim());
            if let Some(first) = seen.insert(k.to_owned(), n) {
                return Err(ConfigError::new(
                    Some(Source::Line(n)),
                    Some(k),
                    format!("duplicate key (first set on line {first})"),
                ));
            }
            if k == "command" {
                if v != self.command.name() {
                    return Err(ConfigError::new(
                        Some(Source::Line(n)),
                        Some(k),
                        format!("file is for `{v}`, running `{}`", self.command),
                    ));
                }
                continue;
            }
            self.set(k, v, Source::Line(n))?;
        }
        Ok(())
    }

    /// Parses a complete config text; the `command` key is required.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let command = text
            .lines()
            .enumerate()
            .find_map(|(i, line)| {
                let body = line.split_once('#').map_or(line, |(b, _)| b);
                let (k, v) = body.split_once('=')?;
                (k.trim() == "command").then(|| (i + 1, v.trim().to_owned()))
            })
            .ok_or_else(|| ConfigError::field("command", "missing"))?;
        let cmd = Command::from_name(&command.1).ok_or_else(|| {
            ConfigError::new(
                Some(Source::Line(command.0)),
                Some("command"),
                format!("unknown command `{}`", command.1),
            )
        })?;
        let mut cfg = ExperimentConfig::new(cmd);
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// `command` first, then every set key in sorted order.
    pub fn canonical(&self) -> String {
        let mut out = format!("command = {}\n", self.command);
        for (k, v) in &self.values {
            out.push_str(&format!("{k} = {}\n", format_value(v)));
        }
        out
    }

    pub fn num(&self, name: &str) -> Option<f64> {
        match self.values.get(name) {
            Some(Value::Num(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn count(&self, name: &str) -> Option<u64> {
        match self.values.get(name) {
            Some(Value::Count(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn grid(&self, name: &str) -> Option<Grid> {
        match self.values.get(name) {
            Some(Value::Grid(g)) => Some(*g),
            _ => None,
        }
    }

    pub fn word(&self, name: &str) -> Option<&str> {
        match self.values.get(name) {
            Some(Value::Word(w)) => Some(w),
            _ => None,
        }
    }

    pub fn vector(&self, name: &str) -> Option<&[f64]> {
        match self.values.get(name) {
            Some(Value::Vector(v)) => Some(v),
            _ => None,
        }
    }

    pub fn flag(&self, name: &str) -> bool {
        matches!(self.values.get(name), Some(Value::Flag(true)))
    }

    pub fn path(&self, name: &str) -> Option<&PathBuf> {
        match self.values.get(name) {
            Some(Value::Path(p)) => Some(p),
            _ => None,
        }
    }
}
