use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::model::{ratio, CostKind, Domain, Grid, Rational};
use crate::solver::Arithmetic;

/// Resolution used when a config leaves `n` out.
pub const DEFAULT_CELLS_PER_AXIS: usize = 64;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Syntax or type error, with serde's line and column.
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config field `{field}`: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Audit {
    /// Exchange scan: no improving 2x2 exchange.
    Exchange,
    /// `value(q) = (q/p) value(p)` through the complement-reflection map.
    Conjugate,
    Transpose,
    Negate,
    /// Cost split across the saturation set and its complement.
    Complement,
    /// At most `rows + cols - 1` partial cells.
    Vertex,
    /// Agreement with the brute-force oracle on small instances.
    Oracle,
}

impl Audit {
    pub const ALL: [Audit; 7] = [
        Audit::Exchange,
        Audit::Conjugate,
        Audit::Transpose,
        Audit::Negate,
        Audit::Complement,
        Audit::Vertex,
        Audit::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Audit::Exchange => "exchange",
            Audit::Conjugate => "conjugate",
            Audit::Transpose => "transpose",
            Audit::Negate => "negate",
            Audit::Complement => "complement",
            Audit::Vertex => "vertex",
            Audit::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Audit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Audit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Audit::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown audit {s:?}"))
    }
}

/// Parses a comma-separated audit list, dropping duplicates.
pub fn parse_audit_list(text: &str) -> Result<Vec<Audit>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let audit: Audit = part.parse()?;
        if !out.contains(&audit) {
            out.push(audit);
        }
    }
    Ok(out)
}

pub fn parse_mode(text: &str) -> Result<Arithmetic, String> {
    match text {
        "exact" => Ok(Arithmetic::Exact),
        "float64" => Ok(Arithmetic::Float64),
        other => Err(format!(
            "unknown mode {other:?} (expected exact or float64)"
        )),
    }
}

pub fn mode_name(mode: Arithmetic) -> &'static str {
    match mode {
        Arithmetic::Exact => "exact",
        Arithmetic::Float64 => "float64",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MarginalSpec {
    Uniform,
    /// Masses per cell for each side; equal totals.
    Explicit {
        f: Vec<Rational>,
        g: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub cells_per_axis: usize,
    pub domain: Domain,
    pub cost: CostKind,
    /// Capacity densities, solved in order.
    pub densities: Vec<Rational>,
    pub marginals: MarginalSpec,
    pub mode: Arithmetic,
    pub audits: Vec<Audit>,
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Densities 3 and 3/2 on the centered segment.
    pub fn conjugate_sweep(cells_per_axis: usize) -> Self {
        Self {
            dim: 1,
            cells_per_axis,
            domain: Domain::Centered,
            cost: CostKind::NegDot,
            densities: vec![ratio(3, 1), ratio(3, 2)],
            marginals: MarginalSpec::Uniform,
            mode: Arithmetic::Exact,
            audits: vec![Audit::Conjugate],
            out_dir: None,
        }
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.dim, self.cells_per_axis, self.domain).expect("validated config")
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Frac { num: i64, den: i64 },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawDensity {
    One(RawRational),
    Sweep(Vec<RawRational>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMarginals {
    Named(String),
    Explicit {
        f: Vec<RawRational>,
        g: Vec<RawRational>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    d: Option<usize>,
    n: Option<usize>,
    domain: Option<String>,
    cost: Option<String>,
    hbar: Option<RawDensity>,
    marginals: Option<RawMarginals>,
    mode: Option<String>,
    audits: Option<Vec<String>>,
    out_dir: Option<PathBuf>,
}

fn to_rational(raw: &RawRational, field: &'static str) -> Result<Rational, ConfigError> {
    match *raw {
        RawRational::Int(v) => Ok(Rational::from_integer(BigInt::from(v))),
        RawRational::Frac { den: 0, .. } => Err(invalid(field, "denominator is zero")),
        RawRational::Frac { num, den } => Ok(ratio(num, den)),
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;

    let dim = raw.d.unwrap_or(1);
    if !(1..=2).contains(&dim) {
        return Err(invalid("d", format!("dimension {dim} is not 1 or 2")));
    }
    let cells_per_axis = raw.n.unwrap_or(DEFAULT_CELLS_PER_AXIS);
    if cells_per_axis == 0 {
        return Err(invalid("n", "needs at least one cell per axis"));
    }
    let domain = match raw.domain.as_deref().unwrap_or("centered") {
        "centered" => Domain::Centered,
        "unit" => Domain::Unit,
        other => return Err(invalid("domain", format!("unknown domain {other:?}"))),
    };
    let cost: CostKind = raw
        .cost
        .as_deref()
        .unwrap_or("neg_dot")
        .parse()
        .map_err(|e| invalid("cost", e))?;
    if cost == CostKind::Custom {
        return Err(invalid("cost", "custom costs cannot be given in a config"));
    }

    let densities = match raw.hbar {
        None => vec![ratio(3, 1), ratio(3, 2)],
        Some(RawDensity::One(r)) => vec![to_rational(&r, "hbar")?],
        Some(RawDensity::Sweep(list)) => list
            .iter()
            .map(|r| to_rational(r, "hbar"))
            .collect::<Result<_, _>>()?,
    };
    if densities.is_empty() {
        return Err(invalid("hbar", "sweep list is empty"));
    }
    if let Some(d) = densities.iter().find(|d| d.is_negative()) {
        return Err(invalid("hbar", format!("negative density {d}")));
    }

    let cells = cells_per_axis.pow(dim as u32);
    let marginals = match raw.marginals {
        None => MarginalSpec::Uniform,
        Some(RawMarginals::Named(name)) if name == "uniform" => MarginalSpec::Uniform,
        Some(RawMarginals::Named(name)) => {
            return Err(invalid(
                "marginals",
                format!("unknown marginal spec {name:?}"),
            ))
        }
        Some(RawMarginals::Explicit { f, g }) => {
            let convert = |list: &[RawRational], field| -> Result<Vec<Rational>, ConfigError> {
                let out = list
                    .iter()
                    .map(|r| to_rational(r, field))
                    .collect::<Result<Vec<_>, _>>()?;
                if out.len() != cells {
                    return Err(invalid(
                        field,
                        format!("{} weights for {cells} cells", out.len()),
                    ));
                }
                if out.iter().any(|w| w.is_negative()) {
                    return Err(invalid(field, "weights must be nonnegative"));
                }
                Ok(out)
            };
            let f = convert(&f, "marginals.f")?;
            let g = convert(&g, "marginals.g")?;
            let (sf, sg): (Rational, Rational) = (f.iter().sum(), g.iter().sum());
            if sf != sg {
                return Err(invalid(
                    "marginals",
                    format!("totals differ: f sums to {sf}, g to {sg}"),
                ));
            }
            if sf.is_zero() {
                return Err(invalid("marginals", "total mass is zero"));
            }
            MarginalSpec::Explicit { f, g }
        }
    };

    let mode =
        parse_mode(raw.mode.as_deref().unwrap_or("exact")).map_err(|e| invalid("mode", e))?;
    let audits = parse_audit_list(&raw.audits.unwrap_or_default().join(","))
        .map_err(|e| invalid("audits", e))?;

    Ok(ExperimentConfig {
        dim,
        cells_per_axis,
        domain,
        cost,
        densities,
        marginals,
        mode,
        audits,
        out_dir: raw.out_dir,
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = parse_config(
            r#"{"d":1,"n":4,"domain":"centered","cost":"neg_dot","hbar":{"num":2,"den":1}}"#,
        )
        .unwrap();
        assert_eq!(c.densities, vec![ratio(2, 1)]);
        assert_eq!(c.grid().num_cells(), 4);
        assert_eq!(c.mode, Arithmetic::Exact);
        assert!(c.audits.is_empty());
    }

    #[test]
    fn fractional_and_sweep() {
        let c = parse_config(r#"{"n":4,"hbar":{"num":3,"den":2}}"#).unwrap();
        assert_eq!(c.densities, vec![ratio(3, 2)]);
        let c =
            parse_config(r#"{"n":4,"hbar":[3,{"num":3,"den":2}],"audits":["conjugate"]}"#).unwrap();
        assert_eq!(c.densities, vec![ratio(3, 1), ratio(3, 2)]);
        assert_eq!(c.audits, vec![Audit::Conjugate]);
        let c = parse_config("{}").unwrap();
        let sweep = ExperimentConfig::conjugate_sweep(DEFAULT_CELLS_PER_AXIS);
        assert_eq!(c.densities, sweep.densities);
        assert_eq!(c.cells_per_axis, sweep.cells_per_axis);
    }

    #[test]
    fn rejections() {
        let err = parse_config(r#"{"n":4,"hbar":{"num":1,"den":0}}"#).unwrap_err();
        assert!(
            matches!(err, ConfigError::Invalid { field: "hbar", .. }),
            "{err}"
        );
        assert!(matches!(
            parse_config(r#"{"n":4,"hbar":[]}"#),
            Err(ConfigError::Invalid { field: "hbar", .. })
        ));
        assert!(matches!(
            parse_config(r#"{"n":4,"cost":"cubic"}"#),
            Err(ConfigError::Invalid { field: "cost", .. })
        ));
        assert!(matches!(
            parse_config(r#"{"n":4,"audits":["bogus"]}"#),
            Err(ConfigError::Invalid {
                field: "audits",
                ..
            })
        ));
        assert!(matches!(
            parse_config(r#"{"n":2,"marginals":{"f":[1,1],"g":[1,2]}}"#),
            Err(ConfigError::Invalid {
                field: "marginals",
                ..
            })
        ));
        assert!(matches!(
            parse_config(r#"{"n":2,"marginals":{"f":[1,-1],"g":[0,0]}}"#),
            Err(ConfigError::Invalid {
                field: "marginals.f",
                ..
            })
        ));
        let err = parse_config("{\n  \"n\": 4,\n  \"colour\": 1\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("colour") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn explicit_marginals() {
        let c =
            parse_config(r#"{"n":2,"marginals":{"f":[1,3],"g":[{"num":2,"den":1},2]}}"#).unwrap();
        assert_eq!(
            c.marginals,
            MarginalSpec::Explicit {
                f: vec![ratio(1, 1), ratio(3, 1)],
                g: vec![ratio(2, 1), ratio(2, 1)],
            }
        );
    }

    #[test]
    fn audit_lists() {
        assert_eq!(
            parse_audit_list("exchange, vertex,exchange").unwrap(),
            vec![Audit::Exchange, Audit::Vertex]
        );
        assert!(parse_audit_list("exchange,nope").is_err());
        assert_eq!(parse_mode("float64"), Ok(Arithmetic::Float64));
    }
}
