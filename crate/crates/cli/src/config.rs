//! Experiment configuration files.
//!
//! ```text
//! # comment
//! [experiment]
//! kind = packing-scaling
//! seed = 7
//! trials = 8
//! format = csv
//! output = scaling.csv
//!
//! [generator]
//! family = halfplanes
//! dim = 2
//!
//! [params]
//! n = 512
//! k = 64
//! vary = delta
//! values = 4, 8, 16, 32
//! ```
//!
//! `output` is resolved against the directory of the config file; without it
//! the report goes to standard output.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use shallowpack::setsystem::{Family, Generator};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line of the offending entry, when it has one.
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn new(message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    PackingScaling,
    Tail,
    Net,
    Approx,
    Projection,
    Mst,
    Measures,
    Discrepancy,
    GridLowerBound,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::PackingScaling,
        Kind::Tail,
        Kind::Net,
        Kind::Approx,
        Kind::Projection,
        Kind::Mst,
        Kind::Measures,
        Kind::Discrepancy,
        Kind::GridLowerBound,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Kind::PackingScaling => "packing-scaling",
            Kind::Tail => "tail",
            Kind::Net => "net",
            Kind::Approx => "approx",
            Kind::Projection => "projection",
            Kind::Mst => "mst",
            Kind::Measures => "measures",
            Kind::Discrepancy => "discrepancy",
            Kind::GridLowerBound => "grid-lowerbound",
        }
    }

    /// Whether the experiment builds its system from a `[generator]` section.
    pub fn needs_generator(self) -> bool {
        !matches!(self, Kind::Tail | Kind::GridLowerBound)
    }

    /// Keys accepted in `[params]`.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Kind::PackingScaling => &["n", "k", "delta", "vary", "values", "separation"],
            Kind::Tail => &["n", "k", "m_j", "t"],
            Kind::Net => &["n", "k", "delta", "d", "c", "q"],
            Kind::Approx => &["n", "k", "delta", "d", "c", "q", "eta"],
            Kind::Projection => &["n", "k", "delta", "d0"],
            Kind::Mst => &["n", "k", "m", "delta", "method", "mu", "eta", "schedule"],
            Kind::Measures => &["n", "k", "m", "measure", "points", "clusters", "spread"],
            Kind::Discrepancy => &["n", "k", "delta", "d"],
            Kind::GridLowerBound => &["n", "delta"],
        }
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL.into_iter().find(|k| k.id() == s).ok_or_else(|| {
            let ids: Vec<_> = Kind::ALL.iter().map(|k| k.id()).collect();
            format!("unknown experiment kind `{s}` (expected one of {})", ids.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn id(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub kind: Kind,
    pub seed: u64,
    pub trials: usize,
    pub format: Format,
    pub output: Option<String>,
    pub generator: Option<Generator>,
    /// Raw `[params]` values, validated per kind when the experiment is built.
    pub params: BTreeMap<String, String>,
    lines: BTreeMap<String, usize>,
}

impl PartialEq for Config {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.seed == other.seed
            && self.trials == other.trials
            && self.format == other.format
            && self.output == other.output
            && self.generator == other.generator
            && self.params == other.params
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Experiment,
    Generator,
    Params,
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| ConfigError::at(line, format!("field `{key}`: {e}")))
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut section = None;
        let mut experiment: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        let mut generator: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        let mut params = BTreeMap::new();
        let mut lines = BTreeMap::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = Some(match name.trim() {
                    "experiment" => Section::Experiment,
                    "generator" => Section::Generator,
                    "params" => Section::Params,
                    other => return Err(ConfigError::at(line, format!("unknown section [{other}]"))),
                });
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| ConfigError::at(line, format!("expected `key = value`, found `{content}`")))?;
            if key.is_empty() {
                return Err(ConfigError::at(line, "empty key"));
            }
            let duplicate = match section {
                None => return Err(ConfigError::at(line, "entry before any [section]")),
                Some(Section::Experiment) => experiment.insert(key, (line, value)).is_some(),
                Some(Section::Generator) => generator.insert(key, (line, value)).is_some(),
                Some(Section::Params) => {
                    lines.insert(key.to_string(), line);
                    params.insert(key.to_string(), value.to_string()).is_some()
                }
            };
            if duplicate {
                return Err(ConfigError::at(line, format!("duplicate field `{key}`")));
            }
        }

        let mut kind = None;
        let mut seed = 0;
        let mut trials = 1;
        let mut format = Format::Csv;
        let mut output = None;
        for (&key, &(line, value)) in &experiment {
            match key {
                "kind" => kind = Some(parse_value::<Kind>(line, key, value)?),
                "seed" => seed = parse_value(line, key, value)?,
                "trials" => {
                    trials = parse_value(line, key, value)?;
                    if trials == 0 {
                        return Err(ConfigError::at(line, "field `trials`: must be >= 1"));
                    }
                }
                "format" => format = parse_value(line, key, value)?,
                "output" => output = Some(value.to_string()),
                other => return Err(ConfigError::at(line, format!("unknown field `{other}` in [experiment]"))),
            }
        }
        let kind = kind.ok_or_else(|| ConfigError::new("missing field `kind` in [experiment]"))?;

        let mut family = None;
        let mut dim = 2;
        let mut generator_line = 0;
        for (&key, &(line, value)) in &generator {
            generator_line = generator_line.max(line);
            match key {
                "family" => family = Some(parse_value::<Family>(line, key, value)?),
                "dim" => dim = parse_value(line, key, value)?,
                other => return Err(ConfigError::at(line, format!("unknown field `{other}` in [generator]"))),
            }
        }
        let generator = match family {
            Some(f) => Some(
                Generator::new(f, dim).map_err(|e| ConfigError::at(generator_line, format!("[generator]: {e}")))?,
            ),
            None if !generator.is_empty() => {
                return Err(ConfigError::at(generator_line, "missing field `family` in [generator]"))
            }
            None => None,
        };
        if kind.needs_generator() && generator.is_none() {
            return Err(ConfigError::new(format!("experiment `{}` needs a [generator] section", kind.id())));
        }

        let allowed = kind.params();
        if let Some(key) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(ConfigError::at(
                lines[key],
                format!("unknown field `{key}` for `{}` (accepted: {})", kind.id(), allowed.join(", ")),
            ));
        }

        Ok(Config {
            kind,
            seed,
            trials,
            format,
            output,
            generator,
            params,
            lines,
        })
    }

    /// Canonical text form; parses back to an equal config.
    pub fn to_text(&self) -> String {
        let mut out = String::from("[experiment]\n");
        let _ = writeln!(out, "kind = {}", self.kind.id());
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "trials = {}", self.trials);
        let _ = writeln!(out, "format = {}", self.format.id());
        if let Some(o) = &self.output {
            let _ = writeln!(out, "output = {o}");
        }
        if let Some(g) = &self.generator {
            let _ = write!(out, "\n[generator]\nfamily = {}\ndim = {}\n", g.family, g.dim);
        }
        if !self.params.is_empty() {
            out.push_str("\n[params]\n");
            for (k, v) in &self.params {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.lines.get(key).copied()
    }

    fn field_error(&self, key: &str, message: impl fmt::Display) -> ConfigError {
        let message = format!("field `{key}`: {message}");
        match self.line_of(key) {
            Some(line) => ConfigError::at(line, message),
            None => ConfigError::new(message),
        }
    }

    /// A typed `[params]` value; `default` is used when the key is absent.
    pub fn param<T: FromStr>(&self, key: &str, default: Option<T>) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.params.get(key) {
            Some(v) => v.parse().map_err(|e| self.field_error(key, e)),
            None => default.ok_or_else(|| ConfigError::new(format!("missing field `{key}` in [params]"))),
        }
    }

    pub fn optional_param<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        self.params
            .get(key)
            .map(|v| v.parse().map_err(|e| self.field_error(key, e)))
            .transpose()
    }

    /// A comma-separated `[params]` list.
    pub fn list_param<T: FromStr>(&self, key: &str) -> Result<Vec<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let raw = self
            .params
            .get(key)
            .ok_or_else(|| ConfigError::new(format!("missing field `{key}` in [params]")))?;
        raw.split(',')
            .map(|item| item.trim().parse().map_err(|e| self.field_error(key, e)))
            .collect()
    }

    /// Error tied to the line of `key` for a value that parsed but is out of range.
    pub fn invalid(&self, key: &str, message: impl fmt::Display) -> ConfigError {
        self.field_error(key, message)
    }
}
