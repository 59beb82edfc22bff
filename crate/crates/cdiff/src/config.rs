//! Run configuration shared by command-line flags and `--config` files.

use std::sync::Arc;

use cdiff_core::parse::{parse_element, ParseError};
use cdiff_core::{Elem, FieldContext, FieldError, PolyFunc};
use serde::{Deserialize, Serialize};

use crate::RunError;

/// Generic c-DDT work is refused above this order unless overridden.
pub const DEFAULT_DDT_CAP: u64 = 1 << 12;
/// Largest field built by sweeps.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Human,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_field_cap")]
    pub field_cap: u64,
    /// Lifts the generic c-DDT limit of [`DEFAULT_DDT_CAP`].
    #[serde(default)]
    pub allow_large: bool,
    #[serde(default)]
    pub strict: bool,
}

fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn default_field_cap() -> u64 {
    DEFAULT_FIELD_CAP
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            format: Format::Json,
            parallelism: default_parallelism(),
            seed: 0,
            field_cap: DEFAULT_FIELD_CAP,
            allow_large: false,
            strict: false,
        }
    }

    pub fn from_json(text: &str) -> Result<RunConfig, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Config(format!("config file: {e}")))
    }

    pub fn ddt_cap(&self) -> u64 {
        if self.allow_large {
            u64::MAX
        } else {
            DEFAULT_DDT_CAP
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    Analyze(AnalyzeArgs),
    Construct(ConstructArgs),
    Monomial(MonomialArgs),
    VerifyTheorems(VerifyArgs),
    Experiment(ExperimentArgs),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeArgs {
    pub field: String,
    pub function: String,
    /// `all` (default) or `subfield:<k>`.
    #[serde(default)]
    pub scope: Option<String>,
    /// Emit the full table for this `c` (CSV format).
    #[serde(default)]
    pub matrix: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// AGW permutations with constant multiplier.
    Pcn1,
    /// `b phi(x) + sum g_i(x^q - x)^(s_i)` over `F_{q^2}`.
    Quad,
    /// Characteristic-2 APcN family, `n` odd.
    Apcnagw,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Trace form.
    #[default]
    F1,
    /// Norm form.
    F2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub g: String,
    pub s: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructArgs {
    pub theorem: Theorem,
    /// Subfield order `q = p^m`.
    pub q: u64,
    /// Extension degree over `F_q`.
    pub n: u32,
    /// Optional modulus of `F_{q^n}` over `F_p`, constant term first.
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
    pub phi: String,
    #[serde(default)]
    pub g: Option<String>,
    /// Constant multiplier; mutually exclusive with `h`.
    #[serde(default)]
    pub b: Option<String>,
    #[serde(default)]
    pub h: Option<String>,
    #[serde(default)]
    pub kind: Kind,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
    #[serde(default = "yes")]
    pub validate: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialArgs {
    pub p: u64,
    pub h: u32,
    pub d: u64,
    pub c: String,
    pub rmax: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// Suite ids to run; empty means all.
    #[serde(default)]
    pub suites: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Probe {
    /// `x -> f(x + e) + c f(x) + e x` bijective for all `e != 0` (characteristic 2).
    PseudoPcn,
    /// Relaxed PcN versus permutation, odd characteristic.
    RelaxedOdd,
    /// Quadratic-exponent family with `s = 1 + p^k`.
    QuadExcluded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentArgs {
    pub probe: Probe,
    pub field: String,
    /// Function under test; random functions are sampled when absent.
    #[serde(default)]
    pub function: Option<String>,
    #[serde(default)]
    pub samples: Option<u64>,
    /// Subfield degree `m` for the quadratic-exponent probe.
    #[serde(default)]
    pub sub_degree: Option<u32>,
}

/// Parses `p^n`, `p^n/c0,c1,...,cn` (modulus coefficients, constant term
/// first) or a bare prime power such as `9`.
pub fn parse_field(text: &str) -> Result<FieldContext, RunError> {
    let bad = |why: &str| RunError::Config(format!("field spec {text:?}: {why}"));
    let (head, modulus) = match text.split_once('/') {
        Some((h, m)) => {
            let coeffs = m
                .split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|_| bad("modulus coefficients must be integers")))
                .collect::<Result<Vec<_>, _>>()?;
            (h, Some(coeffs))
        }
        None => (text, None),
    };
    let (p, n) = match head.split_once('^') {
        Some((p, n)) => (
            p.trim().parse::<u64>().map_err(|_| bad("bad characteristic"))?,
            n.trim().parse::<u32>().map_err(|_| bad("bad degree"))?,
        ),
        None => {
            let q = head.trim().parse::<u64>().map_err(|_| bad("expected p^n"))?;
            prime_power(q).ok_or_else(|| bad("not a prime power"))?
        }
    };
    FieldContext::new(p, n, modulus.as_deref(), Default::default()).map_err(RunError::Field)
}

/// `(p, m)` with `q = p^m`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

pub fn field_for_construct(args: &ConstructArgs) -> Result<FieldContext, RunError> {
    let (p, m) = prime_power(args.q).ok_or_else(|| RunError::Config(format!("q = {} is not a prime power", args.q)))?;
    if args.n == 0 {
        return Err(RunError::Config("n must be positive".into()));
    }
    FieldContext::new(p, m * args.n, args.modulus.as_deref(), Default::default()).map_err(RunError::Field)
}

pub fn parse_function(text: &str, ctx: &Arc<FieldContext>) -> Result<PolyFunc, RunError> {
    PolyFunc::parse(text, ctx).map_err(|e| parse_error("function", text, e))
}

pub fn parse_elem(text: &str, ctx: &FieldContext) -> Result<Elem, RunError> {
    parse_element(text, ctx).map_err(|e| parse_error("element", text, e))
}

fn parse_error(what: &str, text: &str, e: ParseError) -> RunError {
    RunError::Config(format!("{what} {text:?}: {e}"))
}

/// The multipliers selected by `all` or `subfield:<k>`.
pub fn c_scope(scope: Option<&str>, ctx: &FieldContext) -> Result<Vec<Elem>, RunError> {
    match scope.unwrap_or("all") {
        "all" => Ok(ctx.elements().collect()),
        other => {
            let k = other
                .strip_prefix("subfield:")
                .and_then(|k| k.parse::<u32>().ok())
                .ok_or_else(|| RunError::Config(format!("c-scope {other:?}: expected all or subfield:<k>")))?;
            ctx.subfield_elements(k).map_err(|e: FieldError| RunError::Field(e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_specs() {
        let k = parse_field("3^2").unwrap();
        assert_eq!(k.order(), 9);
        let k = parse_field("2^3/1,1,0,1").unwrap();
        assert_eq!(k.spec().modulus(), &[1, 1, 0, 1]);
        assert_eq!(parse_field("27").unwrap().degree(), 3);
        assert!(parse_field("6").is_err());
        assert!(parse_field("2^3/1,1,1,1").is_err());
    }

    #[test]
    fn config_roundtrip() {
        let text = r#"{"command":"analyze","field":"5^1","function":"x^2","parallelism":2}"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.parallelism, 2);
        assert!(matches!(cfg.command, Command::Analyze(ref a) if a.function == "x^2"));
        let back = RunConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(RunConfig::from_json(r#"{"command":"analyze","field":"5","function":"x","bogus":1}"#).is_err());
    }

    #[test]
    fn construct_config() {
        let text = r#"{"command":"construct","theorem":"apcnagw","q":4,"n":3,"phi":"x^2+x","g":"x","b":"1"}"#;
        let cfg = RunConfig::from_json(text).unwrap();
        let Command::Construct(args) = cfg.command else { panic!() };
        assert_eq!(field_for_construct(&args).unwrap().order(), 64);
        assert!(args.validate);
    }
}
