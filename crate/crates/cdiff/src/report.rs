//! Serializable reports. JSON is canonical; CSV and human text are
//! projections of the same values. Field elements appear as their integer
//! encodings, and every report carries the modulus it was computed with.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use cdiff_core::cdiff::{CDiffSpectrum, ClassificationReport, Label};
use cdiff_core::construct::{QuadCriterion, ValidationReport};
use cdiff_core::funcs::Linearity;
use cdiff_core::monomial::{ExtensionVerdict, MonomialAnalysis};
use cdiff_core::{Elem, FieldSpec};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldJson {
    pub p: u32,
    pub n: u32,
    pub order: u32,
    /// Constant term first.
    pub modulus: Vec<u32>,
}

impl From<&FieldSpec> for FieldJson {
    fn from(s: &FieldSpec) -> Self {
        FieldJson { p: s.p(), n: s.n(), order: s.order(), modulus: s.modulus().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionJson {
    pub input: String,
    pub canonical: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryJson {
    pub c: u32,
    pub delta: u32,
    pub label: String,
    pub ordinary: bool,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryJson {
    pub pcn: Vec<u32>,
    pub apcn: Vec<u32>,
    pub planar: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalyzeJson {
    pub field: FieldJson,
    pub function: FunctionJson,
    pub entries: Vec<EntryJson>,
    pub summary: SummaryJson,
}

pub fn label_text(label: Label) -> String {
    label.to_string()
}

fn ints(v: &[Elem]) -> Vec<u32> {
    v.iter().map(|e| e.0).collect()
}

impl AnalyzeJson {
    pub fn new(input: &str, report: &ClassificationReport) -> AnalyzeJson {
        AnalyzeJson {
            field: FieldJson::from(&report.field),
            function: FunctionJson { input: input.to_string(), canonical: report.function.clone() },
            entries: report
                .entries
                .iter()
                .map(|e| EntryJson {
                    c: e.c.0,
                    delta: e.delta,
                    label: label_text(e.label),
                    ordinary: e.ordinary,
                    degenerate: e.degenerate,
                })
                .collect(),
            summary: SummaryJson { pcn: ints(&report.pcn), apcn: ints(&report.apcn), planar: report.planar },
        }
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "f = {} over F_{}^{} (modulus {:?})", self.function.canonical, self.field.p, self.field.n, self.field.modulus);
        for e in &self.entries {
            let note = match (e.ordinary, e.degenerate) {
                (true, true) => "  [ordinary, degenerate]",
                (true, false) => "  [ordinary]",
                (false, true) => "  [degenerate]",
                _ => "",
            };
            let _ = writeln!(out, "c = {:>4}  delta = {:>4}  {}{}", e.c, e.delta, e.label, note);
        }
        let _ = writeln!(out, "planar: {}", self.summary.planar);
        let _ = writeln!(out, "PcN for c != 1: {:?}", self.summary.pcn);
        let _ = writeln!(out, "APcN for c != 1: {:?}", self.summary.apcn);
        out
    }

    pub fn entries_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["c", "delta", "label", "ordinary", "degenerate"])?;
        for e in &self.entries {
            w.serialize((e.c, e.delta, &e.label, e.ordinary, e.degenerate))?;
        }
        finish_csv(w)
    }
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, csv::Error> {
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Rows indexed by `a`, header row of `b` values.
pub fn matrix_csv(spectrum: &CDiffSpectrum) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["a\\b".to_string()];
    header.extend((0..spectrum.order()).map(|b| b.to_string()));
    w.write_record(&header)?;
    for (a, row) in spectrum.rows().enumerate() {
        let mut record = vec![a.to_string()];
        record.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&record)?;
    }
    finish_csv(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckJson {
    pub hypothesis: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationJson {
    pub target: String,
    pub passed: bool,
    pub items: Vec<CheckJson>,
    pub phi_linearity: String,
}

pub fn linearity_text(l: Linearity) -> String {
    match l {
        Linearity::NotAdditive => "not additive".into(),
        Linearity::PrimeFieldLinear => "F_p-linear only".into(),
        Linearity::SubfieldLinear(m) => format!("F_(p^{m})-linear"),
    }
}

impl From<&ValidationReport> for ValidationJson {
    fn from(r: &ValidationReport) -> Self {
        ValidationJson {
            target: format!("{:?}", r.target).to_lowercase(),
            passed: r.passed(),
            items: r.items.iter().map(|i| CheckJson { hypothesis: i.hypothesis.to_string(), passed: i.passed }).collect(),
            phi_linearity: linearity_text(r.phi_linearity),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadCriterionJson {
    pub phi_permutes_j: bool,
    pub kernel_meets_subfield_trivially: bool,
    pub predicts_permutation: bool,
}

impl From<&QuadCriterion> for QuadCriterionJson {
    fn from(c: &QuadCriterion) -> Self {
        QuadCriterionJson {
            phi_permutes_j: c.phi_permutes_j,
            kernel_meets_subfield_trivially: c.kernel_meets_subfield_trivially,
            predicts_permutation: c.predicts_permutation(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertiesJson {
    pub permutation: bool,
    pub two_to_one: bool,
    pub complete_permutation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructJson {
    pub theorem: String,
    pub field: FieldJson,
    pub subfield_order: u32,
    pub polynomial: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_criterion: Option<QuadCriterionJson>,
    pub properties: PropertiesJson,
    /// One entry per `c` in `F_q`.
    pub classification: Vec<EntryJson>,
}

impl ConstructJson {
    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} over F_{}^{} (modulus {:?})", self.theorem, self.field.p, self.field.n, self.field.modulus);
        let _ = writeln!(out, "f = {}", self.polynomial);
        if let Some(v) = &self.validation {
            for i in &v.items {
                let _ = writeln!(out, "  [{}] {}", if i.passed { "ok" } else { "FAIL" }, i.hypothesis);
            }
            let _ = writeln!(out, "  phi is {}", v.phi_linearity);
        }
        let p = &self.properties;
        let _ = writeln!(out, "permutation: {}  2-to-1: {}  complete: {}", p.permutation, p.two_to_one, p.complete_permutation);
        for e in &self.classification {
            let _ = writeln!(out, "c = {:>4}  delta = {:>4}  {}", e.c, e.delta, e.label);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    pub a: u32,
    pub b: u32,
    pub solutions: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionJson {
    pub r: u32,
    pub field: FieldJson,
    pub order: u64,
    pub delta: u32,
    pub is_pcn: bool,
    pub is_apcn: bool,
    pub gcd_ok: bool,
    pub violation_witness: Option<WitnessJson>,
    pub split_witness: Option<u32>,
}

impl From<&ExtensionVerdict> for ExtensionJson {
    fn from(v: &ExtensionVerdict) -> Self {
        ExtensionJson {
            r: v.r,
            field: FieldJson::from(&v.field),
            order: v.order,
            delta: v.delta,
            is_pcn: v.is_pcn,
            is_apcn: v.is_apcn,
            gcd_ok: v.gcd_ok,
            violation_witness: v
                .violation_witness
                .as_ref()
                .map(|w| WitnessJson { a: w.a.0, b: w.b.0, solutions: ints(&w.solutions) }),
            split_witness: v.split_witness.map(|t| t.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialJson {
    pub p: u64,
    pub h: u32,
    pub d: u64,
    pub s: u32,
    pub base_field: FieldJson,
    pub c: u32,
    pub root_in_fps: bool,
    pub gcd_ok: bool,
    pub per_extension: Vec<ExtensionJson>,
    pub note: String,
}

impl MonomialJson {
    pub fn new(base: &FieldSpec, a: &MonomialAnalysis) -> MonomialJson {
        MonomialJson {
            p: a.p,
            h: a.h,
            d: a.d,
            s: a.s,
            base_field: FieldJson::from(base),
            c: a.c.0,
            root_in_fps: a.root_in_fps,
            gcd_ok: a.gcd_ok,
            per_extension: a.per_extension.iter().map(ExtensionJson::from).collect(),
            note: a.note.clone(),
        }
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "x^{} over F_{}^{}, c = {}, s = {}, root in F_(p^s): {}", self.d, self.p, self.h, self.c, self.s, self.root_in_fps);
        for e in &self.per_extension {
            let _ = write!(out, "r = {}  q = {:>8}  delta = {:>3}  PcN: {}  APcN: {}", e.r, e.order, e.delta, e.is_pcn, e.is_apcn);
            if let Some(w) = &e.violation_witness {
                let _ = write!(out, "  witness a={} b={} solutions={:?}", w.a, w.b, w.solutions);
            }
            if let Some(t) = e.split_witness {
                let _ = write!(out, "  split t={t}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{}", self.note);
        out
    }
}

/// Outcome of one property suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub id: u32,
    pub name: String,
    pub seed: u64,
    pub checked: u64,
    pub stats: BTreeMap<String, u64>,
    pub counterexamples: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyJson {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl VerifyJson {
    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {}", self.seed);
        for s in &self.suites {
            let _ = writeln!(out, "[{}] suite {} {}: {} checks", if s.passed { "PASS" } else { "FAIL" }, s.id, s.name, s.checked);
            for (k, v) in &s.stats {
                let _ = writeln!(out, "      {k}: {v}");
            }
            for c in &s.counterexamples {
                let _ = writeln!(out, "      counterexample: {c}");
            }
        }
        out
    }

    pub fn csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "name", "seed", "checked", "counterexamples", "passed"])?;
        for s in &self.suites {
            w.serialize((s.id, &s.name, s.seed, s.checked, s.counterexamples.len(), s.passed))?;
        }
        finish_csv(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
