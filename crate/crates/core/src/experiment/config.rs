//! `key = value` experiment configs.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Each kind accepts a fixed key set; anything else is rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    VerifyLemmas,
    Simulate,
    TrackRadius,
    FitDecay,
    Convergence,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::VerifyLemmas,
        Kind::Simulate,
        Kind::TrackRadius,
        Kind::FitDecay,
        Kind::Convergence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Kind::VerifyLemmas => "verify-lemmas",
            Kind::Simulate => "simulate",
            Kind::TrackRadius => "track-radius",
            Kind::FitDecay => "fit-decay",
            Kind::Convergence => "convergence",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}` for kind {kind}")]
    UnknownKey { line: usize, key: String, kind: Kind },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("unknown kind {0:?} (expected one of verify-lemmas, simulate, track-radius, fit-decay, convergence)")]
    UnknownKind(String),
    #[error("`{key}` expects {expected}, got {found:?}")]
    Type { key: String, expected: &'static str, found: String },
    #[error("{0}")]
    Constraint(String),
    #[error("missing required keys for kind {kind}: {}", keys.join(", "))]
    Missing { kind: Kind, keys: Vec<String> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Bool(bool),
    Str(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v:?}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Str(v) => f.write_str(v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ty {
    Int,
    Float,
    Bool,
    Str,
}

impl Ty {
    fn expected(&self) -> &'static str {
        match self {
            Ty::Int => "a nonnegative integer",
            Ty::Float => "a finite number",
            Ty::Bool => "true or false",
            Ty::Str => "a string",
        }
    }

    fn parse(&self, key: &str, raw: &str) -> Result<Value, ConfigError> {
        let bad = || ConfigError::Type {
            key: key.to_string(),
            expected: self.expected(),
            found: raw.to_string(),
        };
        match self {
            Ty::Int => raw.parse().map(Value::Int).map_err(|_| bad()),
            Ty::Float => match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Value::Float(v)),
                _ => Err(bad()),
            },
            Ty::Bool => match raw {
                "true" => Ok(Value::Bool(true)),
                "false" => Ok(Value::Bool(false)),
                _ => Err(bad()),
            },
            Ty::Str if raw.is_empty() => Err(bad()),
            Ty::Str => Ok(Value::Str(raw.to_string())),
        }
    }
}

use Kind::*;

const GRID_KINDS: &[Kind] = &[VerifyLemmas, Simulate, TrackRadius, Convergence];
const RUN_KINDS: &[Kind] = &[Simulate, TrackRadius, Convergence];
const DATA_KINDS: &[Kind] = &[Simulate, TrackRadius, Convergence];

struct KeySpec {
    name: &'static str,
    ty: Ty,
    required: &'static [Kind],
    optional: &'static [Kind],
    default: Option<fn() -> Value>,
}

const fn key(name: &'static str, ty: Ty, required: &'static [Kind], optional: &'static [Kind]) -> KeySpec {
    KeySpec {
        name,
        ty,
        required,
        optional,
        default: None,
    }
}

const fn with_default(
    name: &'static str,
    ty: Ty,
    optional: &'static [Kind],
    default: fn() -> Value,
) -> KeySpec {
    KeySpec {
        name,
        ty,
        required: &[],
        optional,
        default: Some(default),
    }
}

const KEYS: &[KeySpec] = &[
    key("d", Ty::Int, GRID_KINDS, &[]),
    key("L", Ty::Float, GRID_KINDS, &[]),
    key("N", Ty::Int, GRID_KINDS, &[]),
    key("p", Ty::Int, &[VerifyLemmas, Simulate, TrackRadius, Convergence], &[]),
    key("dt", Ty::Float, RUN_KINDS, &[]),
    key("T", Ty::Float, RUN_KINDS, &[]),
    with_default("record_every", Ty::Int, &[Simulate, TrackRadius], || Value::Int(100)),
    with_default("levels", Ty::Int, &[Convergence], || Value::Int(3)),
    with_default("profile", Ty::Str, DATA_KINDS, || Value::Str("gaussian".into())),
    with_default("amplitude", Ty::Float, &[VerifyLemmas, Simulate, TrackRadius, Convergence], || {
        Value::Float(1.0)
    }),
    with_default("width", Ty::Float, DATA_KINDS, || Value::Float(1.0)),
    with_default("radius", Ty::Float, DATA_KINDS, || Value::Float(0.5)),
    key("sigma_max", Ty::Float, &[TrackRadius], &[]),
    with_default("tol", Ty::Float, &[TrackRadius], || Value::Float(1e-4)),
    key("sigma0", Ty::Float, &[TrackRadius], &[]),
    key("slope_lo", Ty::Float, &[TrackRadius], &[]),
    key("slope_hi", Ty::Float, &[TrackRadius], &[]),
    key("eps", Ty::Float, &[], &[TrackRadius]),
    key("decay_sigma", Ty::Float, &[VerifyLemmas], &[]),
    key("band_limit", Ty::Float, &[VerifyLemmas], &[]),
    key("samples", Ty::Int, &[VerifyLemmas], &[]),
    key("sigma", Ty::Float, &[VerifyLemmas], &[]),
    with_default("first_seed", Ty::Int, &[VerifyLemmas], || Value::Int(0)),
    with_default("theta", Ty::Float, &[VerifyLemmas], || Value::Float(0.5)),
    key("s", Ty::Float, &[], &[VerifyLemmas]),
    key("product_s", Ty::Float, &[], &[VerifyLemmas]),
    with_default("real", Ty::Bool, &[VerifyLemmas], || Value::Bool(false)),
    key("input", Ty::Str, &[FitDecay], &[]),
    key("t_min", Ty::Float, &[FitDecay], &[]),
    key("t_max", Ty::Float, &[FitDecay], &[]),
    with_default("column", Ty::Str, &[FitDecay], || Value::Str("sigma_energy".into())),
    key("out", Ty::Str, &[], &Kind::ALL),
];

fn spec_of(name: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.name == name)
}

/// Validated experiment configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    values: BTreeMap<String, Value>,
}

impl ExperimentConfig {
    /// Every key in effect, defaults included.
    pub fn values(&self) -> &BTreeMap<String, Value> {
        &self.values
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn float(&self, key: &str) -> Option<f64> {
        match self.values.get(key)? {
            Value::Float(v) => Some(*v),
            Value::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn int(&self, key: &str) -> Option<u64> {
        match self.values.get(key)? {
            Value::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn usize(&self, key: &str) -> Option<usize> {
        self.int(key).and_then(|v| usize::try_from(v).ok())
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        match self.values.get(key)? {
            Value::Str(v) => Some(v),
            _ => None,
        }
    }

    pub fn bool(&self, key: &str) -> Option<bool> {
        match self.values.get(key)? {
            Value::Bool(v) => Some(*v),
            _ => None,
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.str("out").map(PathBuf::from)
    }

    /// Canonical `key = value` text that parses back to this config.
    pub fn to_text(&self) -> String {
        let mut s = format!("kind = {}\n", self.kind);
        for (k, v) in &self.values {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }
}

/// Parse and validate. Never panics.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut raw: Vec<(usize, String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: line_no,
                text: line.to_string(),
            });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.contains(char::is_whitespace) {
            return Err(ConfigError::Malformed {
                line: line_no,
                text: line.to_string(),
            });
        }
        if raw.iter().any(|(_, seen, _)| seen == k) {
            return Err(ConfigError::DuplicateKey {
                line: line_no,
                key: k.to_string(),
            });
        }
        raw.push((line_no, k.to_string(), v.to_string()));
    }

    let kind = match raw.iter().find(|(_, k, _)| k == "kind") {
        Some((_, _, v)) => Kind::parse(v).ok_or_else(|| ConfigError::UnknownKind(v.clone()))?,
        None => Kind::Simulate,
    };

    let mut values = BTreeMap::new();
    for (line, k, v) in raw.iter().filter(|(_, k, _)| k != "kind") {
        let spec = spec_of(k)
            .filter(|s| s.required.contains(&kind) || s.optional.contains(&kind))
            .ok_or_else(|| ConfigError::UnknownKey {
                line: *line,
                key: k.clone(),
                kind,
            })?;
        let value = spec.ty.parse(k, v)?;
        check_value(k, &value)?;
        values.insert(k.clone(), value);
    }

    let missing: Vec<String> = KEYS
        .iter()
        .filter(|s| s.required.contains(&kind) && !values.contains_key(s.name))
        .map(|s| s.name.to_string())
        .collect();
    let needs_eps = kind == TrackRadius && matches!(values.get("d"), Some(Value::Int(2)));
    let mut missing = missing;
    if needs_eps && !values.contains_key("eps") {
        missing.push("eps".to_string());
    }
    if !missing.is_empty() {
        return Err(ConfigError::Missing { kind, keys: missing });
    }

    for s in KEYS {
        if let Some(default) = s.default {
            if s.optional.contains(&kind) && !values.contains_key(s.name) {
                values.insert(s.name.to_string(), default());
            }
        }
    }
    let cfg = ExperimentConfig { kind, values };
    check_combination(&cfg)?;
    Ok(cfg)
}

fn constraint(msg: impl Into<String>) -> ConfigError {
    ConfigError::Constraint(msg.into())
}

fn positive(key: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(constraint(format!("{key} must be positive, got {v}")))
    }
}

fn nonnegative(key: &str, v: f64) -> Result<(), ConfigError> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(constraint(format!("{key} must be >= 0, got {v}")))
    }
}

/// Single-key constraints.
fn check_value(key: &str, value: &Value) -> Result<(), ConfigError> {
    match (key, value) {
        ("d", Value::Int(d)) if !(1..=3).contains(d) => Err(constraint(format!("d must be 1, 2 or 3, got {d}"))),
        ("N", Value::Int(n)) if n % 2 == 1 || *n < 8 => {
            Err(constraint(format!("N must be even and >= 8, got {n}")))
        }
        ("N", Value::Int(n)) if *n > 1 << 20 => Err(constraint(format!("N = {n} is too large"))),
        ("p", Value::Int(p)) if *p < 3 || p % 2 == 0 => Err(constraint("p must be odd ≥ 3")),
        ("p", Value::Int(p)) if *p > 99 => Err(constraint(format!("p = {p} is too large"))),
        ("record_every" | "samples", Value::Int(0)) => Err(constraint(format!("{key} must be >= 1"))),
        ("levels", Value::Int(l)) if !(2..=12).contains(l) => {
            Err(constraint(format!("levels must lie in [2, 12], got {l}")))
        }
        ("profile", Value::Str(s)) if !matches!(s.as_str(), "gaussian" | "sech" | "poisson") => Err(constraint(
            format!("profile must be gaussian, sech or poisson, got {s:?}"),
        )),
        ("column", Value::Str(s)) if !matches!(s.as_str(), "sigma_energy" | "sigma_slope") => Err(constraint(
            format!("column must be sigma_energy or sigma_slope, got {s:?}"),
        )),
        ("eps", Value::Float(e)) if !(*e > 0.0 && *e < 1.0) => {
            Err(constraint(format!("eps must lie in (0, 1), got {e}")))
        }
        ("theta", Value::Float(t)) if !(0.0..=1.0).contains(t) => {
            Err(constraint(format!("theta must lie in [0, 1], got {t}")))
        }
        ("L" | "dt" | "width" | "radius" | "sigma_max" | "tol" | "decay_sigma" | "band_limit", Value::Float(v)) => {
            positive(key, *v)
        }
        ("T" | "amplitude" | "sigma0" | "sigma" | "slope_lo" | "t_min" | "t_max", Value::Float(v)) => {
            nonnegative(key, *v)
        }
        _ => Ok(()),
    }
}

/// Constraints across keys, after defaults are filled in.
fn check_combination(cfg: &ExperimentConfig) -> Result<(), ConfigError> {
    let d = cfg.int("d");
    if matches!(cfg.kind, TrackRadius | VerifyLemmas) && d == Some(3) {
        return Err(constraint(format!("kind {} supports d = 1, 2 only", cfg.kind)));
    }
    if let (Some(lo), Some(hi)) = (cfg.float("slope_lo"), cfg.float("slope_hi")) {
        if lo >= hi {
            return Err(constraint(format!("slope_lo {lo} must be below slope_hi {hi}")));
        }
    }
    if let (Some(lo), Some(hi)) = (cfg.float("t_min"), cfg.float("t_max")) {
        if lo > hi {
            return Err(constraint(format!("t_min {lo} must not exceed t_max {hi}")));
        }
    }
    if cfg.kind == VerifyLemmas {
        if let (Some(d), Some(theta)) = (d, cfg.float("theta")) {
            if d == 2 && !(theta > 0.0 && theta < 1.0) {
                return Err(constraint(format!("theta must lie in (0, 1) for d = 2, got {theta}")));
            }
        }
    }
    if let (Some(dt), Some(t)) = (cfg.float("dt"), cfg.float("T")) {
        if t / dt > 1e8 {
            return Err(constraint(format!("T / dt = {} steps is too many", t / dt)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_simulate_config() {
        let c = parse_config("kind = simulate\nd = 1\np = 3\nL = 100\nN = 1024\ndt = 0.001\nT = 10").unwrap();
        assert_eq!(c.kind, Kind::Simulate);
        assert_eq!(c.usize("N"), Some(1024));
        assert_eq!(c.float("L"), Some(100.0));
        assert_eq!(c.usize("record_every"), Some(100));
        assert_eq!(parse_config(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn even_p_rejected() {
        let e = parse_config("p = 4").unwrap_err();
        assert_eq!(e.to_string(), "p must be odd ≥ 3");
    }

    #[test]
    fn empty_lists_all_required() {
        match parse_config("").unwrap_err() {
            ConfigError::Missing { kind, keys } => {
                assert_eq!(kind, Kind::Simulate);
                assert_eq!(keys, ["d", "L", "N", "p", "dt", "T"]);
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(parse_config("d 1"), Err(ConfigError::Malformed { line: 1, .. })));
        assert!(matches!(parse_config("\n\nfoo = 1"), Err(ConfigError::UnknownKey { line: 3, .. })));
        assert!(matches!(parse_config("d = 1\nd = 2"), Err(ConfigError::DuplicateKey { line: 2, .. })));
        assert!(matches!(parse_config("d = one"), Err(ConfigError::Type { .. })));
        assert!(matches!(parse_config("kind = nope"), Err(ConfigError::UnknownKind(_))));
        // valid key, wrong kind
        assert!(matches!(parse_config("samples = 3"), Err(ConfigError::UnknownKey { .. })));
        assert!(matches!(parse_config("N = 7"), Err(ConfigError::Constraint(_))));
        assert!(matches!(parse_config("L = inf"), Err(ConfigError::Type { .. })));
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_config("# header\nkind = fit-decay # inline\n\ninput = r.csv\nt_min = 1\nt_max = 20\n").unwrap();
        assert_eq!(c.str("input"), Some("r.csv"));
        assert_eq!(c.str("column"), Some("sigma_energy"));
    }

    #[test]
    fn two_dimensional_tracking_needs_eps() {
        let base = "kind = track-radius\nd = 2\np = 3\nL = 30\nN = 64\ndt = 0.01\nT = 1\nsigma_max = 1\nsigma0 = 0.5\nslope_lo = 1\nslope_hi = 5\n";
        match parse_config(base).unwrap_err() {
            ConfigError::Missing { keys, .. } => assert_eq!(keys, ["eps"]),
            e => panic!("{e}"),
        }
        assert!(parse_config(&format!("{base}eps = 0.5")).is_ok());
    }
}
