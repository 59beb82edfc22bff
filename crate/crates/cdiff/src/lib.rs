//! Batch analyses over `cdiff-core` with JSON, CSV and plain-text reports.
//!
//! [`run`] executes one [`RunConfig`] inside a rayon pool of the requested
//! size. Output is identical for every pool size.

pub mod config;
pub mod experiment;
pub mod report;
pub mod suites;

use std::sync::Arc;

use cdiff_core::cdiff::{c_ddt, report_entry, CdiffError, ClassificationReport};
use cdiff_core::construct::{
    self, build_agw_pp, build_apcn_2to1, build_quad_exponent_pp, quad_criterion, AgwKind, AgwParams, ConstructError,
    Multiplier, Target,
};
use cdiff_core::monomial::{MonomialError, SweepPlan};
use cdiff_core::{funcs, Elem, FieldContext, FieldError, PolyFunc};
use rayon::prelude::*;

use config::{Command, ConstructArgs, Format, Kind, RunConfig, Theorem};
use report::{to_json, AnalyzeJson, ConstructJson, EntryJson, FieldJson, MonomialJson, PropertiesJson, ValidationJson};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("field error: {0}")]
    Field(FieldError),
    #[error("field order {order} exceeds the generic c-DDT limit {cap}; pass --allow-large to override")]
    CapExceeded { order: u64, cap: u64 },
    #[error("construction error: {0}")]
    Construct(ConstructError),
    #[error("monomial analysis error: {0}")]
    Monomial(MonomialError),
    #[error("c-differential error: {0}")]
    Cdiff(CdiffError),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool error: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Rendered report plus whether every verification it contains held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub verified: bool,
}

pub fn run(config: &RunConfig) -> Result<Output, RunError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.parallelism.max(1)).build()?;
    pool.install(|| dispatch(config))
}

fn dispatch(config: &RunConfig) -> Result<Output, RunError> {
    match &config.command {
        Command::Analyze(args) => {
            let ctx = Arc::new(config::parse_field(&args.field)?);
            check_ddt_cap(config, &ctx)?;
            let f = config::parse_function(&args.function, &ctx)?;
            if let Some(c) = &args.matrix {
                if config.format != Format::Csv {
                    return Err(RunError::Config("--matrix is emitted as CSV; use --format csv".into()));
                }
                let c = config::parse_elem(c, &ctx)?;
                return Ok(Output { text: report::matrix_csv(&c_ddt(&f, c))?, verified: true });
            }
            let cs = config::c_scope(args.scope.as_deref(), &ctx)?;
            let report = classify(&f, &cs);
            let json = AnalyzeJson::new(&args.function, &report);
            let text = match config.format {
                Format::Json => to_json(&json),
                Format::Human => json.human(),
                Format::Csv => json.entries_csv()?,
            };
            Ok(Output { text, verified: true })
        }
        Command::Construct(args) => {
            let (json, verified) = run_construct(config, args)?;
            let text = match config.format {
                Format::Json => to_json(&json),
                Format::Human | Format::Csv => json.human(),
            };
            Ok(Output { text, verified })
        }
        Command::Monomial(args) => {
            let ctx_h = FieldContext::new(args.p, args.h, None, Default::default()).map_err(RunError::Field)?;
            let c = config::parse_elem(&args.c, &ctx_h)?;
            let plan = SweepPlan::new(&ctx_h, args.d, c, args.rmax, config.field_cap).map_err(RunError::Monomial)?;
            let verdicts = plan
                .extensions()
                .into_par_iter()
                .map(|r| plan.verdict(r))
                .collect::<Result<Vec<_>, _>>()
                .map_err(RunError::Monomial)?;
            let analysis = plan.finish(verdicts).map_err(RunError::Monomial)?;
            let json = MonomialJson::new(ctx_h.spec(), &analysis);
            let text = match config.format {
                Format::Json => to_json(&json),
                Format::Human | Format::Csv => json.human(),
            };
            Ok(Output { text, verified: true })
        }
        Command::VerifyTheorems(args) => {
            let json = suites::run_suites(&args.suites, config.seed, config.field_cap)?;
            let text = match config.format {
                Format::Json => to_json(&json),
                Format::Human => json.human(),
                Format::Csv => json.csv()?,
            };
            Ok(Output { text, verified: json.passed })
        }
        Command::Experiment(args) => {
            let ctx = Arc::new(config::parse_field(&args.field)?);
            check_ddt_cap(config, &ctx)?;
            let json = experiment::run(ctx, args, config.seed)?;
            let text = match config.format {
                Format::Json => to_json(&json),
                Format::Human | Format::Csv => json.human(),
            };
            Ok(Output { text, verified: true })
        }
    }
}

fn check_ddt_cap(config: &RunConfig, ctx: &FieldContext) -> Result<(), RunError> {
    let order = ctx.order() as u64;
    if order > config.ddt_cap() {
        return Err(RunError::CapExceeded { order, cap: config.ddt_cap() });
    }
    Ok(())
}

/// Per-`c` entries computed in parallel, collected in input order.
pub fn classify(f: &PolyFunc, cs: &[Elem]) -> ClassificationReport {
    let entries = cs.par_iter().map(|&c| report_entry(f, c)).collect();
    ClassificationReport::from_entries(f, entries)
}

fn run_construct(config: &RunConfig, args: &ConstructArgs) -> Result<(ConstructJson, bool), RunError> {
    let ctx = Arc::new(config::field_for_construct(args)?);
    check_ddt_cap(config, &ctx)?;
    let m = ctx.degree() / args.n;
    let parse = |t: &str| config::parse_function(t, &ctx);
    let phi = parse(&args.phi)?;
    let g = args.g.as_deref().map(parse).transpose()?.unwrap_or_else(|| PolyFunc::zero(&ctx));
    let b = args.b.as_deref().map(|t| config::parse_elem(t, &ctx)).transpose()?;
    let kind = match args.kind {
        Kind::F1 => AgwKind::Trace,
        Kind::F2 => AgwKind::Power,
    };
    let cons = RunError::Construct;
    let mut validation = None;
    let mut criterion = None;
    let f = match args.theorem {
        Theorem::Pcn1 => {
            let h = match (&args.h, b) {
                (Some(_), Some(_)) => return Err(RunError::Config("give either b or h, not both".into())),
                (Some(h), None) => Multiplier::Poly(parse(h)?),
                (None, b) => Multiplier::Const(b.unwrap_or(Elem::ONE)),
            };
            let params = AgwParams { sub_degree: m, phi, g, h, kind };
            validation = Some(construct::validate_preconditions(&params, Target::Permutation).map_err(cons)?);
            build_agw_pp(&params, args.validate).map_err(cons)?
        }
        Theorem::Quad => {
            let terms = args
                .terms
                .iter()
                .map(|t| Ok((parse(&t.g)?, t.s)))
                .collect::<Result<Vec<_>, RunError>>()?;
            criterion = Some(quad_criterion(&ctx, m, &phi).map_err(cons)?);
            build_quad_exponent_pp(&ctx, m, &phi, b.unwrap_or(Elem::ONE), &terms).map_err(cons)?
        }
        Theorem::Apcnagw => {
            let b = b.unwrap_or(Elem::ONE);
            let f = build_apcn_2to1(&ctx, m, &phi, b, &g, kind).map_err(cons)?;
            let params = AgwParams { sub_degree: m, phi, g, h: Multiplier::Const(b), kind };
            validation = Some(construct::validate_preconditions(&params, Target::TwoToOne).map_err(cons)?);
            f
        }
    };
    let cs = ctx.subfield_elements(m).map_err(RunError::Field)?;
    let report = classify(&f, &cs);
    let properties = PropertiesJson {
        permutation: funcs::is_permutation(&f),
        two_to_one: funcs::is_two_to_one(&f),
        complete_permutation: funcs::is_complete_permutation(&f),
    };
    let proper = || report.entries.iter().filter(|e| !e.ordinary);
    // The claim only applies when the hypotheses hold.
    let applies = match (&validation, &criterion) {
        (Some(v), _) => v.passed(),
        (None, Some(q)) => q.predicts_permutation(),
        (None, None) => true,
    };
    let holds = match args.theorem {
        Theorem::Pcn1 | Theorem::Quad => properties.permutation && proper().all(|e| e.delta == 1),
        Theorem::Apcnagw => properties.two_to_one && proper().all(|e| e.delta == 2),
    };
    let verified = !applies || holds;
    let json = ConstructJson {
        theorem: format!("{:?}", args.theorem).to_lowercase(),
        field: FieldJson::from(ctx.spec()),
        subfield_order: ctx.subfield_order(m).map_err(RunError::Field)?,
        polynomial: funcs::describe(&f),
        validation: validation.as_ref().map(ValidationJson::from),
        quad_criterion: criterion.as_ref().map(Into::into),
        properties,
        classification: report
            .entries
            .iter()
            .map(|e| EntryJson {
                c: e.c.0,
                delta: e.delta,
                label: report::label_text(e.label),
                ordinary: e.ordinary,
                degenerate: e.degenerate,
            })
            .collect(),
    };
    Ok((json, verified))
}
