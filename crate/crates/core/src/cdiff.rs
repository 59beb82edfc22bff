//! c-derivatives, c-difference distribution tables and PcN/APcN labels.
//!
//! For `f: F_q -> F_q` and `c in F_q`, the entry `N_c(a, b)` counts the `x`
//! with `f(x + a) - c f(x) = b`. The c-differential uniformity is the largest
//! entry over all `(a, b)` except the row `a = 0` when `c = 1`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Elem, FieldContext, FieldSpec};
use crate::funcs::{self, PolyFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CdiffError {
    NotQuadratic,
    OddCharacteristic,
    BadScope { degree: u32, n: u32 },
    /// The extended `c`-scope needs every exponent to be `q0^i + q0^j`.
    ScopeNotAllowed { degree: u32 },
}

impl fmt::Display for CdiffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdiffError::NotQuadratic => write!(f, "function is not quadratic"),
            CdiffError::OddCharacteristic => write!(f, "requires characteristic 2"),
            CdiffError::BadScope { degree, n } => {
                write!(f, "scope degree {degree} does not divide field degree {n}")
            }
            CdiffError::ScopeNotAllowed { degree } => write!(
                f,
                "c-scope of degree {degree} needs every exponent of the form q^i + q^j with q = p^{degree}"
            ),
        }
    }
}

impl core::error::Error for CdiffError {}

/// `x -> f(x + a) - c f(x)`.
pub fn c_derivative(f: &PolyFunc, a: Elem, c: Elem) -> PolyFunc {
    let ctx = f.field();
    PolyFunc::from_fn(f.ctx(), |x| ctx.sub(f.eval(ctx.add(x, a)), ctx.mul(c, f.eval(x))))
}

/// Precomputed `-c f(x)` for streaming rows of one `c`.
pub struct RowKernel<'a> {
    f: &'a PolyFunc,
    c: Elem,
    neg_cf: Vec<Elem>,
}

impl<'a> RowKernel<'a> {
    pub fn new(f: &'a PolyFunc, c: Elem) -> RowKernel<'a> {
        let ctx = f.field();
        let neg_cf = f.table().iter().map(|&v| ctx.neg(ctx.mul(c, v))).collect();
        RowKernel { f, c, neg_cf }
    }

    pub fn c(&self) -> Elem {
        self.c
    }

    /// Whether row `a` contributes to the uniformity.
    pub fn admissible(&self, a: Elem) -> bool {
        !(a.is_zero() && self.c == Elem::ONE)
    }

    /// Writes `N_c(a, b)` for all `b` into `counts` (length `q`).
    pub fn fill_row(&self, a: Elem, counts: &mut [u32]) {
        let ctx = self.f.field();
        counts.iter_mut().for_each(|v| *v = 0);
        for (x, &ncf) in ctx.elements().zip(&self.neg_cf) {
            let b = ctx.add(self.f.eval(ctx.add(x, a)), ncf);
            counts[b.index()] += 1;
        }
    }

    /// `max_b N_c(a, b)`.
    pub fn row_max(&self, a: Elem, scratch: &mut [u32]) -> u32 {
        self.fill_row(a, scratch);
        scratch.iter().copied().max().unwrap_or(0)
    }

    /// True iff `x -> f(x + a) - c f(x)` is a bijection.
    pub fn row_is_bijective(&self, a: Elem, scratch: &mut [u32]) -> bool {
        self.row_max(a, scratch) == 1
    }
}

/// Full c-difference distribution table for one `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CDiffSpectrum {
    c: Elem,
    q: usize,
    counts: Vec<u32>,
    row_max: Vec<u32>,
    delta: u32,
}

impl CDiffSpectrum {
    pub fn c(&self) -> Elem {
        self.c
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn count(&self, a: Elem, b: Elem) -> u32 {
        self.counts[a.index() * self.q + b.index()]
    }

    pub fn row(&self, a: Elem) -> &[u32] {
        let start = a.index() * self.q;
        &self.counts[start..start + self.q]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.counts.chunks(self.q)
    }

    pub fn row_max(&self) -> &[u32] {
        &self.row_max
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }
}

/// The whole `q x q` table, `O(q^2)` time and memory.
pub fn c_ddt(f: &PolyFunc, c: Elem) -> CDiffSpectrum {
    let q = f.field().order() as usize;
    let kernel = RowKernel::new(f, c);
    let mut counts = vec![0u32; q * q];
    let mut row_max = Vec::with_capacity(q);
    let mut delta = 0;
    for (a, row) in f.field().elements().zip(counts.chunks_mut(q)) {
        kernel.fill_row(a, row);
        let m = row.iter().copied().max().unwrap_or(0);
        row_max.push(m);
        if kernel.admissible(a) {
            delta = delta.max(m);
        }
    }
    CDiffSpectrum { c, q, counts, row_max, delta }
}

/// c-differential uniformity, one row at a time (`O(q)` memory).
pub fn c_uniformity(f: &PolyFunc, c: Elem) -> u32 {
    let kernel = RowKernel::new(f, c);
    let mut scratch = vec![0u32; f.field().order() as usize];
    f.field()
        .elements()
        .filter(|&a| kernel.admissible(a))
        .map(|a| kernel.row_max(a, &mut scratch))
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    PcN,
    APcN,
    Uniform(u32),
}

impl Label {
    pub fn from_delta(delta: u32) -> Label {
        match delta {
            1 => Label::PcN,
            2 => Label::APcN,
            d => Label::Uniform(d),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::PcN => write!(f, "PcN"),
            Label::APcN => write!(f, "APcN"),
            Label::Uniform(d) => write!(f, "uniform({d})"),
        }
    }
}

pub fn classify_c(f: &PolyFunc, c: Elem) -> Label {
    Label::from_delta(c_uniformity(f, c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportEntry {
    pub c: Elem,
    pub delta: u32,
    pub label: Label,
    /// `c = 1`: ordinary differential uniformity.
    pub ordinary: bool,
    /// Some admissible c-derivative is constant (`delta = q`).
    pub degenerate: bool,
}

pub fn report_entry(f: &PolyFunc, c: Elem) -> ReportEntry {
    let delta = c_uniformity(f, c);
    ReportEntry {
        c,
        delta,
        label: Label::from_delta(delta),
        ordinary: c == Elem::ONE,
        degenerate: delta == f.field().order(),
    }
}

/// Per-`c` verdicts for one function across the whole field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub function: String,
    pub field: FieldSpec,
    /// Sorted by the canonical encoding of `c`.
    pub entries: Vec<ReportEntry>,
    /// `c != 1` with label PcN.
    pub pcn: Vec<Elem>,
    /// `c != 1` with label APcN.
    pub apcn: Vec<Elem>,
    /// Ordinary (c = 1) uniformity is 1.
    pub planar: bool,
}

impl ClassificationReport {
    pub fn from_entries(f: &PolyFunc, mut entries: Vec<ReportEntry>) -> ClassificationReport {
        entries.sort_by_key(|e| e.c);
        let pick = |want: Label| {
            entries
                .iter()
                .filter(|e| !e.ordinary && e.label == want)
                .map(|e| e.c)
                .collect::<Vec<_>>()
        };
        let pcn = pick(Label::PcN);
        let apcn = pick(Label::APcN);
        let planar = entries.iter().any(|e| e.ordinary && e.delta == 1);
        ClassificationReport {
            function: funcs::describe(f),
            field: f.field().spec().clone(),
            entries,
            pcn,
            apcn,
            planar,
        }
    }

    pub fn entry(&self, c: Elem) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.c == c)
    }
}

pub fn full_report(f: &PolyFunc) -> ClassificationReport {
    let entries = f.field().elements().map(|c| report_entry(f, c)).collect();
    ClassificationReport::from_entries(f, entries)
}

/// `(1-c) f(x + g/(1-c)) + f(g) - (1-c) f(g/(1-c))` with `g = gamma`.
///
/// For quadratic `f` with `f(0) = 0` and `c` in the prime field this equals
/// the c-derivative in direction `gamma`; a constant term `k` makes the two
/// differ by `-c k`. `None` when `c = 1`.
pub fn quadratic_shift_form(f: &PolyFunc, c: Elem, gamma: Elem) -> Option<PolyFunc> {
    let ctx = f.field();
    let one_minus_c = ctx.sub(Elem::ONE, c);
    let shift = ctx.div(gamma, one_minus_c)?;
    let constant = ctx.sub(f.eval(gamma), ctx.mul(one_minus_c, f.eval(shift)));
    Some(PolyFunc::from_fn(f.ctx(), |x| {
        ctx.add(ctx.mul(one_minus_c, f.eval(ctx.add(x, shift))), constant)
    }))
}

/// Every exponent of `f` is `q0^i + q0^j` with `q0 = p^degree`.
fn has_subfield_do_shape(f: &PolyFunc, degree: u32) -> bool {
    let p = f.field().characteristic() as u64;
    f.coefficients().iter().all(|&(e, _)| {
        let mut digits = Vec::new();
        let mut rest = e as u64;
        let mut pos = 0u32;
        while rest > 0 {
            let d = rest % p;
            if d != 0 {
                digits.push((pos, d));
            }
            rest /= p;
            pos += 1;
        }
        let aligned = digits.iter().all(|&(pos, _)| pos % degree == 0);
        let weight: u64 = digits.iter().map(|&(_, d)| d).sum();
        aligned && weight == 2
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// 2-to-1 implies delta <= 2 for every tested `c`.
    TwoToOneImpliesApcn,
    /// DO: delta = 2 iff planar, for every tested `c`.
    DoApcnIffPlanar,
    /// Permutation iff delta = 1, for every tested `c`.
    PermutationIffPcn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    pub claim: Claim,
    /// Hypothesis held, so the claim says something about `f`.
    pub fired: bool,
    pub consistent: bool,
}

/// Brute-force audit of the quadratic characterization for one function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremDoVerdict {
    pub scope_degree: u32,
    pub deltas: Vec<(Elem, u32)>,
    pub two_to_one: bool,
    pub is_do: bool,
    pub planar: bool,
    pub permutation: bool,
    pub claims: Vec<ClaimCheck>,
}

impl TheoremDoVerdict {
    pub fn consistent(&self) -> bool {
        self.claims.iter().all(|c| c.consistent)
    }

    pub fn claim(&self, claim: Claim) -> &ClaimCheck {
        self.claims.iter().find(|c| c.claim == claim).expect("all claims are recorded")
    }
}

/// Checks the three claims of the quadratic characterization for `c` ranging
/// over the subfield of degree `scope_degree`, minus `1`.
///
/// `scope_degree = 1` (the prime field) is always allowed for quadratic `f`;
/// larger scopes need every exponent to be `q0^i + q0^j`.
pub fn check_theorem_do(f: &PolyFunc, scope_degree: u32) -> Result<TheoremDoVerdict, CdiffError> {
    let ctx = f.field();
    let shape = funcs::classify_shape(f);
    if !shape.is_quadratic {
        return Err(CdiffError::NotQuadratic);
    }
    let c_values = ctx
        .subfield_elements(scope_degree)
        .map_err(|_| CdiffError::BadScope { degree: scope_degree, n: ctx.degree() })?;
    if scope_degree > 1 && !has_subfield_do_shape(f, scope_degree) {
        return Err(CdiffError::ScopeNotAllowed { degree: scope_degree });
    }
    let deltas: Vec<(Elem, u32)> = c_values
        .into_iter()
        .filter(|&c| c != Elem::ONE)
        .map(|c| (c, c_uniformity(f, c)))
        .collect();
    let two_to_one = funcs::is_two_to_one(f);
    let planar = funcs::is_planar(f);
    let permutation = funcs::is_permutation(f);
    let claims = vec![
        ClaimCheck {
            claim: Claim::TwoToOneImpliesApcn,
            fired: two_to_one,
            consistent: !two_to_one || deltas.iter().all(|&(_, d)| d <= 2),
        },
        ClaimCheck {
            claim: Claim::DoApcnIffPlanar,
            fired: shape.is_do,
            consistent: !shape.is_do || deltas.iter().all(|&(_, d)| (d == 2) == planar),
        },
        ClaimCheck {
            claim: Claim::PermutationIffPcn,
            fired: true,
            consistent: deltas.iter().all(|&(_, d)| (d == 1) == permutation),
        },
    ];
    Ok(TheoremDoVerdict {
        scope_degree,
        deltas,
        two_to_one,
        is_do: shape.is_do,
        planar,
        permutation,
        claims,
    })
}

/// Every `x -> f(x + gamma) - c f(x)` with `gamma != 0` is a bijection (the
/// zero direction is not required).
pub fn is_relaxed_pcn(f: &PolyFunc, c: Elem) -> bool {
    let kernel = RowKernel::new(f, c);
    let mut scratch = vec![0u32; f.field().order() as usize];
    f.field().elements().skip(1).all(|g| kernel.row_is_bijective(g, &mut scratch))
}

/// Characteristic 2: every `x -> f(x + e) + c f(x) + e x` with `e != 0` is a
/// bijection.
pub fn is_pseudo_pcn(f: &PolyFunc, c: Elem) -> Result<bool, CdiffError> {
    let ctx: &FieldContext = f.field();
    if ctx.characteristic() != 2 {
        return Err(CdiffError::OddCharacteristic);
    }
    let mut seen = vec![false; ctx.order() as usize];
    Ok(ctx.elements().skip(1).all(|eps| {
        seen.iter_mut().for_each(|s| *s = false);
        ctx.elements().all(|x| {
            let v = ctx.add(ctx.add(f.eval(ctx.add(x, eps)), ctx.mul(c, f.eval(x))), ctx.mul(eps, x));
            !core::mem::replace(&mut seen[v.index()], true)
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use alloc::sync::Arc;

    fn field(p: u64, n: u32) -> Arc<FieldContext> {
        Arc::new(make_field(p, n, None).unwrap())
    }

    fn pf(text: &str, ctx: &Arc<FieldContext>) -> PolyFunc {
        PolyFunc::parse(text, ctx).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let k = field(3, 2);
        let f = pf("x^5 + g*x^2", &k);
        assert!(c_derivative(&f, Elem::ZERO, Elem::ONE).is_zero());

        let k7 = field(7, 1);
        let sq = pf("x^2", &k7);
        for a in k7.elements().skip(1) {
            let d = c_derivative(&sq, a, Elem::ONE);
            let expected = PolyFunc::from_terms(&k7, [(1, k7.mul(Elem(2), a)), (0, k7.mul(a, a))]);
            assert_eq!(d, expected);
            assert!(funcs::is_permutation(&d));
        }

        let k8 = field(2, 3);
        let cube = pf("x^3", &k8);
        for c in k8.elements().filter(|&c| c != Elem::ONE) {
            let d = c_derivative(&cube, Elem::ONE, c);
            for x in k8.elements() {
                let x1 = k8.add(x, Elem::ONE);
                let direct = k8.add(k8.mul(x1, k8.mul(x1, x1)), k8.mul(c, k8.mul(x, k8.mul(x, x))));
                assert_eq!(d.eval(x), direct);
            }
        }
    }

    #[test]
    fn ddt_examples() {
        let k32 = field(2, 5);
        assert_eq!(c_ddt(&pf("x^3", &k32), Elem::ONE).delta(), 2);
        let k9 = field(3, 2);
        for c in k9.elements().filter(|&c| c != Elem::ONE) {
            assert_eq!(c_ddt(&pf("x", &k9), c).delta(), 1);
        }
        assert_eq!(c_ddt(&pf("x^2", &field(5, 1)), Elem::ONE).delta(), 1);
    }

    #[test]
    fn rows_sum_to_q() {
        let k = field(3, 2);
        let f = pf("x^7 + g*x^3 + 2", &k);
        for c in k.elements() {
            let s = c_ddt(&f, c);
            for row in s.rows() {
                assert_eq!(row.iter().sum::<u32>(), 9);
            }
            assert_eq!(s.delta(), c_uniformity(&f, c));
        }
    }

    #[test]
    fn uniformity_examples() {
        let k5 = field(5, 1);
        assert_eq!(c_uniformity(&pf("x^2", &k5), Elem(2)), 2);
        assert_eq!(c_uniformity(&pf("x^2", &k5), Elem(0)), 2);
        let k9 = field(3, 2);
        for c in k9.elements().filter(|&c| c != Elem::ONE) {
            assert_eq!(c_uniformity(&pf("x", &k9), c), 1);
        }
    }

    #[test]
    fn labels() {
        assert_eq!(classify_c(&pf("x^2", &field(7, 1)), Elem::ONE), Label::PcN);
        let k9 = field(3, 2);
        match classify_c(&pf("x^2 + x^3", &k9), Elem(2)) {
            Label::Uniform(d) => assert!(d >= 3),
            other => panic!("unexpected {other}"),
        }
        assert_eq!(classify_c(&pf("x^3", &field(2, 5)), Elem::ONE), Label::APcN);
    }

    #[test]
    fn report_examples() {
        let k5 = field(5, 1);
        let r = full_report(&pf("x^2", &k5));
        assert_eq!(r.entry(Elem::ONE).unwrap().label, Label::PcN);
        assert!(r.planar);
        assert_eq!(r.apcn, vec![Elem(0), Elem(2), Elem(3), Elem(4)]);
        assert!(r.pcn.is_empty());

        let k4 = field(2, 2);
        let r = full_report(&pf("x", &k4));
        let one = r.entry(Elem::ONE).unwrap();
        assert_eq!(one.label, Label::Uniform(4));
        assert!(one.degenerate && one.ordinary);
        assert_eq!(r.pcn, vec![Elem(0), Elem(2), Elem(3)]);

        let k9 = field(3, 2);
        let r = full_report(&pf("x^2 + x^3", &k9));
        assert!(r.pcn.is_empty() && r.apcn.is_empty());
        assert!(r.planar);
        let cs: Vec<Elem> = r.entries.iter().map(|e| e.c).collect();
        assert_eq!(cs, k9.elements().collect::<Vec<_>>());
    }

    #[test]
    fn theorem_do_square_over_f9() {
        let k9 = field(3, 2);
        let v = check_theorem_do(&pf("x^2", &k9), 1).unwrap();
        assert!(v.consistent());
        assert_eq!(v.deltas.iter().map(|d| d.0).collect::<Vec<_>>(), vec![Elem(0), Elem(2)]);
        assert!(v.claim(Claim::TwoToOneImpliesApcn).fired);
        assert!(v.claim(Claim::DoApcnIffPlanar).fired);
    }

    #[test]
    fn theorem_do_paper_example_reports_branches() {
        let k9 = field(3, 2);
        let f = pf("x^2 + x^3", &k9);
        let v = check_theorem_do(&f, 1).unwrap();
        assert!(v.consistent());
        assert_eq!(v.claim(Claim::TwoToOneImpliesApcn).fired, funcs::is_two_to_one(&f));
        assert!(!v.claim(Claim::DoApcnIffPlanar).fired);
        assert!(!v.permutation);
    }

    #[test]
    fn theorem_do_linear_permutation_is_pcn() {
        let k8 = field(2, 3);
        let mut seen = 0;
        for a in k8.elements().skip(1) {
            let f = PolyFunc::from_terms(&k8, [(4, Elem::ONE), (2, a), (1, Elem::ONE)]);
            let v = check_theorem_do(&f, 1).unwrap();
            assert!(v.consistent());
            if v.permutation {
                seen += 1;
                for c in k8.elements().filter(|&c| c != Elem::ONE) {
                    assert_eq!(c_uniformity(&f, c), 1);
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn theorem_do_scope_rules() {
        let k9 = field(3, 2);
        assert_eq!(check_theorem_do(&pf("x^5", &k9), 1).unwrap_err(), CdiffError::NotQuadratic);
        // x^4 = x^(3+1) is not of the form 9^i + 9^j
        assert!(matches!(
            check_theorem_do(&pf("x^4", &k9), 2),
            Err(CdiffError::ScopeNotAllowed { .. })
        ));
        let k81 = field(3, 4);
        // x^10 = x^(9+1) has the subfield shape for q0 = 9
        let v = check_theorem_do(&pf("x^10", &k81), 2).unwrap();
        assert_eq!(v.deltas.len(), 8);
        assert!(v.consistent());
        assert!(matches!(check_theorem_do(&pf("x^2", &k81), 3), Err(CdiffError::BadScope { .. })));
    }

    #[test]
    fn shift_form_matches_derivative_for_quadratics() {
        let k = field(3, 3);
        let f = pf("g*x^4 + 2x^12 + x^6 + x^3", &k);
        let shifted = pf("g*x^4 + 2x^12 + x^6 + x^3 + g", &k);
        for c in [Elem(0), Elem(2)] {
            for gamma in k.elements() {
                assert_eq!(c_derivative(&f, gamma, c), quadratic_shift_form(&f, c, gamma).unwrap());
                let gap = c_derivative(&shifted, gamma, c).sub(&quadratic_shift_form(&shifted, c, gamma).unwrap());
                assert_eq!(gap, PolyFunc::constant(&k, k.neg(k.mul(c, k.indeterminate()))));
            }
        }
        assert!(quadratic_shift_form(&f, Elem::ONE, Elem(1)).is_none());
    }

    #[test]
    fn pseudo_pcn_examples() {
        let k8 = field(2, 3);
        assert!(is_pseudo_pcn(&PolyFunc::zero(&k8), Elem::ONE).unwrap());
        assert!(is_pseudo_pcn(&pf("x", &k8), Elem::ONE).unwrap());
        // oracle: collision search for f = x^3, c = 1
        let cube = pf("x^3", &k8);
        let brute = k8.elements().skip(1).all(|e| {
            let vals: Vec<Elem> = k8
                .elements()
                .map(|x| k8.add(k8.add(cube.eval(k8.add(x, e)), cube.eval(x)), k8.mul(e, x)))
                .collect();
            (0..8).all(|i| (0..i).all(|j| vals[i] != vals[j]))
        });
        assert_eq!(is_pseudo_pcn(&cube, Elem::ONE).unwrap(), brute);
        assert_eq!(
            is_pseudo_pcn(&pf("x", &field(3, 1)), Elem::ONE).unwrap_err(),
            CdiffError::OddCharacteristic
        );
    }

    #[test]
    fn known_planar_power_is_apcn_at_minus_one() {
        for (k, n) in [(1u32, 2u32), (1, 3), (3, 2)] {
            let ctx = field(3, n);
            let f = PolyFunc::monomial(&ctx, Elem::ONE, (3u64.pow(k) + 1) / 2);
            assert!(funcs::is_planar(&f));
            assert_eq!(c_uniformity(&f, ctx.neg(Elem::ONE)), 2, "k={k} n={n}");
        }
    }

    #[test]
    fn ordinary_uniformity_matches_classical_ddt() {
        for ctx in [field(2, 3), field(3, 2)] {
            for d in 1..=7u64 {
                let f = PolyFunc::monomial(&ctx, Elem::ONE, d);
                let mut classical = 0;
                for a in ctx.elements().skip(1) {
                    for b in ctx.elements() {
                        let n = ctx.elements().filter(|&x| ctx.sub(f.eval(ctx.add(x, a)), f.eval(x)) == b).count();
                        classical = classical.max(n as u32);
                    }
                }
                assert_eq!(c_ddt(&f, Elem::ONE).delta(), classical);
            }
        }
    }
}
