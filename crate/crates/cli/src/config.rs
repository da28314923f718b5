//! Run configuration: a TOML file layered under command line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use lieconf_core::catalog::{sym, AlgebraId};
use lieconf_core::repr::ModuleKind;
use lieconf_core::suite::DEFAULT_SEED;
use lieconf_core::{MPoly, Scalar};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config `{path}` line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
}

impl ConfigError {
    pub(crate) fn field(field: &'static str, message: impl fmt::Display) -> Self {
        ConfigError::Field {
            field,
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// One layer of settings. Both the config file and the command line produce
/// a layer; unset fields fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Layer {
    /// Algebra identifier: csv, chv, cw, sv, hv, cvir, mfam or tsv.
    #[arg(long, global = true)]
    pub algebra: Option<String>,
    /// Parameter a: "p/q", "p/q+r/si" or "sym".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Parameter a' of the construction family.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a_prime: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b_prime: Option<String>,
    /// Index window N (module basis, derivation generators, tsv indices).
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Generator bound K for module checks and witness search.
    #[arg(long, global = true)]
    pub gen_bound: Option<i64>,
    /// Degree bound D on unknown polynomials.
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Largest witness degree searched by check-module.
    #[arg(long, global = true)]
    pub witness_degree: Option<u32>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Module kind: rank-one, vab or vab-bits.
    #[arg(long, global = true)]
    pub kind: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Constant of the extension coefficient.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub d0: Option<String>,
    /// Bit sequence A, leftmost bit at index `bits-start`.
    #[arg(long, global = true)]
    pub bits: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub bits_start: Option<i64>,
    /// Module document to check instead of the flag-built module.
    #[arg(long, global = true)]
    pub module_file: Option<PathBuf>,
    /// Derivation document to check and decompose.
    #[arg(long, global = true)]
    pub derivation_file: Option<PathBuf>,
    /// Classification grid as "a,b;a,b;...".
    #[arg(long, global = true, value_parser = parse_grid_arg, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Derivation degrees as a comma separated list.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub der_degrees: Option<Vec<i64>>,
}

/// Parameter points `(a, b)` as written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Grid(pub Vec<[String; 2]>);

fn parse_grid_arg(s: &str) -> Result<Grid, String> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| match p.split(',').map(str::trim).collect::<Vec<_>>()[..] {
            [a, b] => Ok([a.to_string(), b.to_string()]),
            _ => Err(format!("grid point `{p}` is not `a,b`")),
        })
        .collect::<Result<_, _>>()
        .map(Grid)
}

macro_rules! overlay {
    ($top:expr, $bottom:expr, $($f:ident),*) => {
        Layer { $($f: $top.$f.or($bottom.$f)),* }
    };
}

impl Layer {
    pub fn from_file(path: &Path) -> Result<Layer, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            line: e.span().map_or(0, |s| text[..s.start].matches('\n').count() + 1),
            message: e.message().to_string(),
        })
    }

    /// `self` wins over `below` field by field.
    pub fn over(self, below: Layer) -> Layer {
        overlay!(
            self, below, algebra, a, b, a_prime, b_prime, window, gen_bound, degree, witness_degree, seed,
            report, format, kind, alpha, beta, c, d0, bits, bits_start, module_file, derivation_file, grid,
            der_degrees
        )
    }
}

/// A parameter value as given: a Gaussian rational or a named symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    Value(Scalar),
    Sym(&'static str),
}

impl Param {
    fn parse(field: &'static str, s: &str) -> Result<Param, ConfigError> {
        if s.trim() == "sym" {
            return Ok(Param::Sym(field));
        }
        Scalar::from_str(s)
            .map(Param::Value)
            .map_err(|e| ConfigError::field(field, format!("`{s}` is neither a Gaussian rational nor `sym`: {e}")))
    }

    pub fn poly(&self) -> MPoly {
        match self {
            Param::Value(v) => MPoly::constant(v.clone()),
            Param::Sym(name) => sym(name),
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Value(v) => write!(f, "{v}"),
            Param::Sym(_) => f.write_str("sym"),
        }
    }
}

/// Settings after layering and validation. Knobs whose default depends on
/// the command stay optional.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algebra: AlgebraId,
    pub a: Param,
    pub b: Param,
    pub a_prime: Param,
    pub b_prime: Param,
    pub window: Option<i64>,
    pub gen_bound: Option<i64>,
    pub degree: Option<u32>,
    pub witness_degree: Option<u32>,
    pub seed: u64,
    pub report: Option<PathBuf>,
    pub format: Format,
    pub kind: ModuleKind,
    pub alpha: Param,
    pub beta: Param,
    pub c: Param,
    pub d0: Param,
    pub bits: Option<String>,
    pub bits_start: Option<i64>,
    pub module_file: Option<PathBuf>,
    pub derivation_file: Option<PathBuf>,
    pub grid: Vec<(Param, Param)>,
    pub der_degrees: Vec<i64>,
}

pub const DEFAULT_GRID: [(i64, i64); 5] = [(0, 0), (1, 0), (0, 1), (2, 5), (1, 1)];

impl RunConfig {
    /// Layers `cli` over the optional config file over the defaults.
    pub fn resolve(cli: Layer, file: Option<&Path>) -> Result<RunConfig, ConfigError> {
        let layer = match file {
            Some(p) => cli.over(Layer::from_file(p)?),
            None => cli,
        };
        RunConfig::from_layer(layer)
    }

    pub fn from_layer(l: Layer) -> Result<RunConfig, ConfigError> {
        let param = |field: &'static str, v: Option<String>, default: &str| {
            Param::parse(field, v.as_deref().unwrap_or(default))
        };
        let algebra = l.algebra.as_deref().unwrap_or("csv");
        let algebra = AlgebraId::from_str(algebra).map_err(|e| ConfigError::field("algebra", e))?;
        let kind = l.kind.as_deref().unwrap_or("rank-one");
        let kind = ModuleKind::from_str(kind).map_err(|e| ConfigError::field("kind", e))?;
        for (field, v) in [("window", l.window), ("gen-bound", l.gen_bound)] {
            if v.is_some_and(|v| v < 0) {
                return Err(ConfigError::field(field, "must be non-negative"));
            }
        }
        let grid = match l.grid {
            Some(Grid(g)) => g
                .into_iter()
                .map(|[a, b]| Ok((Param::parse("a", &a)?, Param::parse("b", &b)?)))
                .collect::<Result<Vec<_>, ConfigError>>()?,
            None => DEFAULT_GRID
                .iter()
                .map(|&(a, b)| (Param::Value(Scalar::from_int(a)), Param::Value(Scalar::from_int(b))))
                .collect(),
        };
        Ok(RunConfig {
            algebra,
            a: param("a", l.a, "sym")?,
            b: param("b", l.b, "sym")?,
            a_prime: param("a'", l.a_prime, "sym")?,
            b_prime: param("b'", l.b_prime, "sym")?,
            window: l.window,
            gen_bound: l.gen_bound,
            degree: l.degree,
            witness_degree: l.witness_degree,
            seed: l.seed.unwrap_or(DEFAULT_SEED),
            report: l.report,
            format: l.format.unwrap_or_default(),
            kind,
            alpha: param("alpha", l.alpha, "sym")?,
            beta: param("beta", l.beta, "sym")?,
            c: param("c", l.c, "sym")?,
            d0: param("d0", l.d0, "0")?,
            bits: l.bits,
            bits_start: l.bits_start,
            module_file: l.module_file,
            derivation_file: l.derivation_file,
            grid,
            der_degrees: l.der_degrees.unwrap_or_else(|| vec![-1, 0, 1]),
        })
    }
}
