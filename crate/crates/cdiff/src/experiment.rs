//! Open-ended probes. They report counts and examples and assert nothing.

use std::collections::BTreeMap;
use std::sync::Arc;

use cdiff_core::cdiff::{c_uniformity, is_pseudo_pcn, is_relaxed_pcn};
use cdiff_core::construct::{build_quad_sum_unchecked, quad_criterion, subspace_j};
use cdiff_core::{funcs, Elem, FieldContext, PolyFunc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{parse_function, ExperimentArgs, Probe};
use crate::report::FieldJson;
use crate::RunError;

const MAX_EXAMPLES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub key: String,
    pub counts: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentJson {
    pub probe: String,
    pub field: FieldJson,
    pub seed: u64,
    pub samples: u64,
    pub rows: Vec<ExperimentRow>,
    /// Value tables or polynomials of notable instances.
    pub examples: Vec<String>,
}

impl ExperimentJson {
    pub fn human(&self) -> String {
        let mut out = format!("{} over F_{}^{} ({} samples, seed {})\n", self.probe, self.field.p, self.field.n, self.samples, self.seed);
        for r in &self.rows {
            out.push_str(&format!("{}:", r.key));
            for (k, v) in &r.counts {
                out.push_str(&format!(" {k}={v}"));
            }
            out.push('\n');
        }
        for e in &self.examples {
            out.push_str(&format!("example: {e}\n"));
        }
        out
    }
}

fn random_table(ctx: &Arc<FieldContext>, rng: &mut impl Rng) -> PolyFunc {
    let table = (0..ctx.order()).map(|_| Elem(rng.gen_range(0..ctx.order()))).collect();
    PolyFunc::from_table(ctx, table)
}

/// The given function, or `samples` random value tables drawn from `seed`.
fn population(ctx: &Arc<FieldContext>, args: &ExperimentArgs, seed: u64, default: u64) -> Result<Vec<PolyFunc>, RunError> {
    if let Some(text) = &args.function {
        return Ok(vec![parse_function(text, ctx)?]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..args.samples.unwrap_or(default)).map(|_| random_table(ctx, &mut rng)).collect())
}

pub fn run(ctx: Arc<FieldContext>, args: &ExperimentArgs, seed: u64) -> Result<ExperimentJson, RunError> {
    match args.probe {
        Probe::PseudoPcn => pseudo_pcn(ctx, args, seed),
        Probe::RelaxedOdd => relaxed_odd(ctx, args, seed),
        Probe::QuadExcluded => quad_excluded(ctx, args, seed),
    }
}

fn pseudo_pcn(ctx: Arc<FieldContext>, args: &ExperimentArgs, seed: u64) -> Result<ExperimentJson, RunError> {
    if ctx.characteristic() != 2 {
        return Err(RunError::Config("pseudo-pcn needs a field of characteristic 2".into()));
    }
    let funcs = population(&ctx, args, seed, 1000)?;
    let rows = ctx
        .elements()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&c| {
            let hits = funcs.iter().filter(|f| is_pseudo_pcn(f, c).expect("characteristic 2")).count() as u64;
            let pp_hits = funcs
                .iter()
                .filter(|f| funcs::is_permutation(f) && is_pseudo_pcn(f, c).expect("characteristic 2"))
                .count() as u64;
            ExperimentRow {
                key: format!("c={c}"),
                counts: BTreeMap::from([("pseudo_pcn".into(), hits), ("pseudo_pcn_and_pp".into(), pp_hits)]),
            }
        })
        .collect();
    Ok(ExperimentJson {
        probe: "pseudo-pcn".into(),
        field: FieldJson::from(ctx.spec()),
        seed,
        samples: funcs.len() as u64,
        rows,
        examples: Vec::new(),
    })
}

fn relaxed_odd(ctx: Arc<FieldContext>, args: &ExperimentArgs, seed: u64) -> Result<ExperimentJson, RunError> {
    if ctx.characteristic() == 2 {
        return Err(RunError::Config("relaxed-odd needs odd characteristic".into()));
    }
    let funcs = population(&ctx, args, seed, 10_000)?;
    let cs: Vec<Elem> = ctx.elements().filter(|&c| c != Elem::ONE).collect();
    let per_c: Vec<(ExperimentRow, Vec<String>)> = cs
        .par_iter()
        .map(|&c| {
            let mut relaxed = 0u64;
            let mut not_pp = Vec::new();
            for f in &funcs {
                if is_relaxed_pcn(f, c) {
                    relaxed += 1;
                    if !funcs::is_permutation(f) {
                        not_pp.push(format!("c={c}: {:?}", f.table().iter().map(|e| e.0).collect::<Vec<_>>()));
                    }
                }
            }
            let counts = BTreeMap::from([("relaxed_pcn".into(), relaxed), ("relaxed_pcn_not_pp".into(), not_pp.len() as u64)]);
            (ExperimentRow { key: format!("c={c}"), counts }, not_pp)
        })
        .collect();
    let mut rows = Vec::new();
    let mut examples = Vec::new();
    for (row, ex) in per_c {
        rows.push(row);
        examples.extend(ex);
    }
    examples.truncate(MAX_EXAMPLES);
    Ok(ExperimentJson {
        probe: "relaxed-odd".into(),
        field: FieldJson::from(ctx.spec()),
        seed,
        samples: funcs.len() as u64,
        rows,
        examples,
    })
}

/// `b x + (g(x^q - x))^s` with `s = 1 + p^k`, `g = l x + delta`: the exponent
/// range the quadratic-exponent criterion leaves out.
fn quad_excluded(ctx: Arc<FieldContext>, args: &ExperimentArgs, seed: u64) -> Result<ExperimentJson, RunError> {
    let m = args.sub_degree.unwrap_or(ctx.degree() / 2);
    if m == 0 || ctx.degree() != 2 * m {
        return Err(RunError::Config("quad-excluded needs F_(q^2) with q = p^m; pass --sub-degree m".into()));
    }
    let j = subspace_j(&ctx, m).map_err(RunError::Construct)?;
    let sub = ctx.subfield_elements(m).map_err(RunError::Field)?;
    let phi = match &args.function {
        Some(text) => parse_function(text, &ctx)?,
        None => PolyFunc::identity(&ctx),
    };
    let criterion = quad_criterion(&ctx, m, &phi).map_err(RunError::Construct)?;
    let samples = args.samples.unwrap_or(20);
    let p = ctx.characteristic() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::new();
    for k in 0..2 * m {
        for _ in 0..samples {
            let b = sub[rng.gen_range(1..sub.len())];
            let l = sub[rng.gen_range(0..sub.len())];
            let delta = j.elements()[rng.gen_range(0..j.len())];
            jobs.push((k, b, l, delta));
        }
    }
    let outcomes: Vec<(u32, bool, bool, String)> = jobs
        .par_iter()
        .map(|&(k, b, l, delta)| {
            let g = PolyFunc::from_terms(&ctx, [(1, l), (0, delta)]);
            let s = 1 + p.pow(k);
            let f = build_quad_sum_unchecked(&ctx, m, &phi, b, &[(g.clone(), s)]).expect("g is J-stable");
            let pp = funcs::is_permutation(&f);
            let pcn = sub.iter().filter(|&&c| c != Elem::ONE).all(|&c| c_uniformity(&f, c) == 1);
            (k, pp, pcn, format!("s={s} b={b} g={g}"))
        })
        .collect();
    let mut rows = BTreeMap::<u32, BTreeMap<String, u64>>::new();
    let mut examples = Vec::new();
    for (k, pp, pcn, text) in outcomes {
        let row = rows.entry(k).or_default();
        *row.entry("instances".into()).or_default() += 1;
        *row.entry("pp".into()).or_default() += pp as u64;
        *row.entry("pcn_all_c".into()).or_default() += pcn as u64;
        let agrees = pp == criterion.predicts_permutation();
        *row.entry("criterion_agrees".into()).or_default() += agrees as u64;
        if !agrees && examples.len() < MAX_EXAMPLES {
            examples.push(text);
        }
    }
    Ok(ExperimentJson {
        probe: "quad-excluded".into(),
        field: FieldJson::from(ctx.spec()),
        seed,
        samples,
        rows: rows
            .into_iter()
            .map(|(k, counts)| ExperimentRow { key: format!("s=1+{p}^{k}"), counts })
            .collect(),
        examples,
    })
}
