//! Permutation, PcN and APcN families built from the AGW criterion.
//!
//! Throughout, the working field is `F_{q^n}` with `q = p^m`, and
//! `psi(x) = x^q - x` with image `J`, an `F_q`-subspace of size `q^(n-1)`.
//! In characteristic 2, `x^q - x` and `x^q + x` coincide.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Elem, FieldContext};
use crate::funcs::{self, Linearity, PolyFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructError {
    BadSubfield { degree: u32, n: u32 },
    InvalidParams(&'static str),
    PreconditionFailed(ValidationReport),
    /// Not of the form `p^h + p^k` with `1 <= h <= k <= 2m - 1`.
    BadExponent(u64),
    /// `g_i(J)` is not contained in `J`; carries the term index.
    GNotJStable(usize),
    BadB,
    OddCharacteristic,
    EvenN,
    PhiNot2to1,
    PhiNotJPermuting,
}

impl fmt::Display for ConstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructError::BadSubfield { degree, n } => {
                write!(f, "subfield degree {degree} does not divide field degree {n}")
            }
            ConstructError::InvalidParams(why) => write!(f, "invalid parameters: {why}"),
            ConstructError::PreconditionFailed(report) => {
                write!(f, "preconditions failed:")?;
                for item in report.items.iter().filter(|i| !i.passed) {
                    write!(f, " [{}]", item.hypothesis)?;
                }
                Ok(())
            }
            ConstructError::BadExponent(s) => {
                write!(f, "exponent {s} is not p^h + p^k with 1 <= h <= k <= 2m-1")
            }
            ConstructError::GNotJStable(i) => write!(f, "term {i}: g does not map J into J"),
            ConstructError::BadB => write!(f, "b must be a nonzero element of the subfield"),
            ConstructError::OddCharacteristic => write!(f, "requires characteristic 2"),
            ConstructError::EvenN => write!(f, "extension degree n must be odd"),
            ConstructError::PhiNot2to1 => write!(f, "phi is not 2-to-1 on the subfield"),
            ConstructError::PhiNotJPermuting => write!(f, "phi does not permute J"),
        }
    }
}

impl core::error::Error for ConstructError {}

/// Image of `x -> x^q - x`, sorted by canonical encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JSubspace {
    elements: Vec<Elem>,
    membership: Vec<bool>,
}

impl JSubspace {
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.membership.get(x.index()).copied().unwrap_or(false)
    }

    /// `f` maps `J` bijectively onto `J`.
    pub fn is_permuted_by(&self, f: impl Fn(Elem) -> Elem) -> bool {
        let mut hit = vec![false; self.membership.len()];
        self.elements.iter().all(|&y| {
            let v = f(y);
            self.contains(v) && !core::mem::replace(&mut hit[v.index()], true)
        })
    }

    /// `f(J)` is contained in `J`.
    pub fn is_stable_under(&self, f: impl Fn(Elem) -> Elem) -> bool {
        self.elements.iter().all(|&y| self.contains(f(y)))
    }
}

fn check_subfield(ctx: &FieldContext, m: u32) -> Result<(), ConstructError> {
    if m == 0 || ctx.degree() % m != 0 {
        return Err(ConstructError::BadSubfield { degree: m, n: ctx.degree() });
    }
    Ok(())
}

/// `x^(p^m) - x`.
pub fn psi(ctx: &FieldContext, m: u32, x: Elem) -> Elem {
    ctx.sub(ctx.frobenius(x, m), x)
}

pub fn subspace_j(ctx: &FieldContext, m: u32) -> Result<JSubspace, ConstructError> {
    check_subfield(ctx, m)?;
    let mut membership = vec![false; ctx.order() as usize];
    for x in ctx.elements() {
        membership[psi(ctx, m, x).index()] = true;
    }
    let elements = ctx.elements().filter(|x| membership[x.index()]).collect();
    Ok(JSubspace { elements, membership })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Multiplier {
    /// `h` identically equal to a nonzero `b` in `F_q`.
    Const(Elem),
    Poly(PolyFunc),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgwKind {
    /// `h(psi) phi + Tr(g(psi))`.
    Trace,
    /// `h(psi) phi + g(psi)^((q^n - 1)/(q - 1))`.
    Power,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgwParams {
    /// `m` with `q = p^m`; the field of `phi` is `F_{q^n}`.
    pub sub_degree: u32,
    pub phi: PolyFunc,
    pub g: PolyFunc,
    pub h: Multiplier,
    pub kind: AgwKind,
}

impl AgwParams {
    pub fn ctx(&self) -> &Arc<FieldContext> {
        self.phi.ctx()
    }

    fn h_at(&self, y: Elem) -> Elem {
        match &self.h {
            Multiplier::Const(b) => *b,
            Multiplier::Poly(h) => h.eval(y),
        }
    }

    fn check(&self) -> Result<(), ConstructError> {
        let ctx = self.ctx();
        check_subfield(ctx, self.sub_degree)?;
        let same = |f: &PolyFunc| f.field().spec() == ctx.spec();
        if !same(&self.g) || matches!(&self.h, Multiplier::Poly(h) if !same(h)) {
            return Err(ConstructError::InvalidParams("phi, g and h must share one field"));
        }
        if let Multiplier::Const(b) = self.h {
            if !valid_b(ctx, self.sub_degree, b) {
                return Err(ConstructError::BadB);
            }
        }
        Ok(())
    }
}

fn valid_b(ctx: &FieldContext, m: u32, b: Elem) -> bool {
    ctx.contains(b) && !b.is_zero() && ctx.in_subfield(b, m)
}

/// Additivity read off the reduced coefficients: every exponent is a power of `p`.
fn is_additive_poly(f: &PolyFunc) -> bool {
    funcs::classify_shape(f).is_linearized
}

/// `phi` restricted to `F_q` is 2-to-1 there.
fn is_two_to_one_on_subfield(ctx: &FieldContext, m: u32, phi: &PolyFunc) -> bool {
    let Ok(sub) = ctx.subfield_elements(m) else { return false };
    let mut counts = vec![0u32; ctx.order() as usize];
    for &x in &sub {
        counts[phi.eval(x).index()] += 1;
    }
    let singles = counts.iter().filter(|&&c| c == 1).count();
    let all_small = counts.iter().all(|&c| c <= 2);
    let images_in_subfield = sub.iter().all(|&x| ctx.in_subfield(phi.eval(x), m));
    let expected_singles = if sub.len() % 2 == 0 { 0 } else { 1 };
    all_small && images_in_subfield && singles == expected_singles
}

fn commutes_with_psi(ctx: &FieldContext, m: u32, phi: &PolyFunc) -> bool {
    ctx.elements().all(|x| phi.eval(psi(ctx, m, x)) == psi(ctx, m, phi.eval(x)))
}

fn kernel_meets_subfield_trivially(ctx: &FieldContext, m: u32, phi: &PolyFunc) -> bool {
    ctx.subfield_elements(m)
        .map(|sub| sub.iter().all(|&x| x.is_zero() || !phi.eval(x).is_zero()))
        .unwrap_or(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// Permutation criterion for `f_1`, `f_2`.
    Permutation,
    /// Characteristic-2 criterion making `f_1`, `f_2` 2-to-1.
    TwoToOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    PhiAdditive,
    /// `phi(x^q - x) = phi(x)^q - phi(x)`, i.e. coefficients in `F_q`.
    PhiCommutesWithPsi,
    /// `ker(phi)` meets `F_q = ker(psi)` only in 0.
    KernelMeetsSubfieldTrivially,
    /// `h(J)` lies in `F_q` minus 0.
    HNonzeroSubfieldOnJ,
    /// `y -> h(y) phi(y)` permutes `J`.
    HPhiPermutesJ,
    CharacteristicTwo,
    PhiTwoToOneOnSubfield,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::PhiAdditive => "φ is additive",
            Hypothesis::PhiCommutesWithPsi => "φ(ψ(x)) = ψ(φ(x))",
            Hypothesis::KernelMeetsSubfieldTrivially => "ker(φ) ∩ ker(ψ) = {0}",
            Hypothesis::HNonzeroSubfieldOnJ => "h(ψ(F_{q^n})) ⊆ F_q∖{0}",
            Hypothesis::HPhiPermutesJ => "h(x)φ(x) permutes J = ψ(F_{q^n})",
            Hypothesis::CharacteristicTwo => "characteristic 2",
            Hypothesis::PhiTwoToOneOnSubfield => "φ is 2-to-1 over F_q",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub hypothesis: Hypothesis,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub target: Target,
    pub items: Vec<CheckItem>,
    pub phi_linearity: Linearity,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, h: Hypothesis) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.hypothesis == h)
    }
}

/// Every hypothesis of the chosen criterion, each decided by exhaustion.
pub fn validate_preconditions(params: &AgwParams, target: Target) -> Result<ValidationReport, ConstructError> {
    params.check()?;
    let ctx = params.ctx();
    let m = params.sub_degree;
    let phi = &params.phi;
    let j = subspace_j(ctx, m)?;
    let mut items = Vec::new();
    let mut push = |hypothesis, passed| items.push(CheckItem { hypothesis, passed });
    if target == Target::TwoToOne {
        push(Hypothesis::CharacteristicTwo, ctx.characteristic() == 2);
    }
    push(Hypothesis::PhiAdditive, is_additive_poly(phi));
    push(Hypothesis::PhiCommutesWithPsi, commutes_with_psi(ctx, m, phi));
    match target {
        Target::Permutation => {
            push(Hypothesis::KernelMeetsSubfieldTrivially, kernel_meets_subfield_trivially(ctx, m, phi))
        }
        Target::TwoToOne => push(Hypothesis::PhiTwoToOneOnSubfield, is_two_to_one_on_subfield(ctx, m, phi)),
    }
    push(
        Hypothesis::HNonzeroSubfieldOnJ,
        j.elements().iter().all(|&y| {
            let v = params.h_at(y);
            !v.is_zero() && ctx.in_subfield(v, m)
        }),
    );
    push(
        Hypothesis::HPhiPermutesJ,
        j.is_permuted_by(|y| ctx.mul(params.h_at(y), phi.eval(y))),
    );
    Ok(ValidationReport { target, items, phi_linearity: funcs::linearity(phi, m) })
}

/// `f_1` or `f_2` as a value table over `F_{q^n}`.
pub fn build_agw_pp(params: &AgwParams, validate: bool) -> Result<PolyFunc, ConstructError> {
    params.check()?;
    if validate {
        let report = validate_preconditions(params, Target::Permutation)?;
        if !report.passed() {
            return Err(ConstructError::PreconditionFailed(report));
        }
    }
    Ok(assemble(params))
}

fn assemble(params: &AgwParams) -> PolyFunc {
    let ctx = params.ctx();
    let m = params.sub_degree;
    PolyFunc::from_fn(ctx, |x| {
        let y = psi(ctx, m, x);
        let gy = params.g.eval(y);
        let tail = match params.kind {
            AgwKind::Trace => ctx.relative_trace(m, gy),
            AgwKind::Power => ctx.relative_norm(m, gy),
        }
        .expect("subfield checked");
        ctx.add(ctx.mul(params.h_at(y), params.phi.eval(x)), tail)
    })
}

/// Whether `s = p^h + p^k` for some `1 <= h <= k <= 2m - 1`.
pub fn is_admissible_quad_exponent(p: u32, m: u32, s: u64) -> bool {
    let powers: Vec<u64> = (1..2 * m).map(|i| (p as u64).pow(i)).collect();
    powers.iter().enumerate().any(|(i, &a)| powers[i..].iter().any(|&b| a + b == s))
}

/// The two facts deciding bijectivity of the quadratic-exponent family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadCriterion {
    pub phi_permutes_j: bool,
    /// Without this, `f` is constant along cosets of `ker(phi)` inside `F_q`.
    pub kernel_meets_subfield_trivially: bool,
}

impl QuadCriterion {
    pub fn predicts_permutation(&self) -> bool {
        self.phi_permutes_j && self.kernel_meets_subfield_trivially
    }
}

pub fn quad_criterion(ctx: &FieldContext, m: u32, phi: &PolyFunc) -> Result<QuadCriterion, ConstructError> {
    let j = subspace_j(ctx, m)?;
    Ok(QuadCriterion {
        phi_permutes_j: j.is_permuted_by(|y| phi.eval(y)),
        kernel_meets_subfield_trivially: kernel_meets_subfield_trivially(ctx, m, phi),
    })
}

/// `b phi(x) + sum_i g_i(x^q - x)^(s_i)` over `F_{q^2}`.
///
/// A PP exactly when `phi` permutes `J` and is injective on `F_q` (see
/// [`quad_criterion`]). Each `g_i` must map `J` into `J`.
pub fn build_quad_exponent_pp(
    ctx: &Arc<FieldContext>,
    m: u32,
    phi: &PolyFunc,
    b: Elem,
    terms: &[(PolyFunc, u64)],
) -> Result<PolyFunc, ConstructError> {
    check_subfield(ctx, m)?;
    if ctx.degree() != 2 * m {
        return Err(ConstructError::InvalidParams("the field must be a quadratic extension of F_q"));
    }
    if phi.field().spec() != ctx.spec() || terms.iter().any(|(g, _)| g.field().spec() != ctx.spec()) {
        return Err(ConstructError::InvalidParams("phi and every g must share one field"));
    }
    if !is_additive_poly(phi) {
        return Err(ConstructError::InvalidParams("phi must be additive"));
    }
    if !valid_b(ctx, m, b) {
        return Err(ConstructError::BadB);
    }
    if let Some(&(_, s)) = terms.iter().find(|(_, s)| !is_admissible_quad_exponent(ctx.characteristic(), m, *s)) {
        return Err(ConstructError::BadExponent(s));
    }
    build_quad_sum_unchecked(ctx, m, phi, b, terms)
}

/// Like [`build_quad_exponent_pp`] but with any exponents; only `J`-stability
/// of each `g_i` is enforced. For probing exponent ranges the criterion omits.
pub fn build_quad_sum_unchecked(
    ctx: &Arc<FieldContext>,
    m: u32,
    phi: &PolyFunc,
    b: Elem,
    terms: &[(PolyFunc, u64)],
) -> Result<PolyFunc, ConstructError> {
    let j = subspace_j(ctx, m)?;
    if let Some(i) = terms.iter().position(|(g, _)| !j.is_stable_under(|y| g.eval(y))) {
        return Err(ConstructError::GNotJStable(i));
    }
    Ok(PolyFunc::from_fn(ctx, |x| {
        let y = psi(ctx, m, x);
        terms
            .iter()
            .fold(ctx.mul(b, phi.eval(x)), |acc, (g, s)| ctx.add(acc, ctx.pow(g.eval(y), *s)))
    }))
}

/// `b phi(x) + Tr(g(x^q + x))` or `b phi(x) + g(x^q + x)^((q^n-1)/(q-1))`
/// with `q = 2^m` and `n` odd; APcN for every `c` in `F_q` minus 1.
pub fn build_apcn_2to1(
    ctx: &Arc<FieldContext>,
    m: u32,
    phi: &PolyFunc,
    b: Elem,
    g: &PolyFunc,
    kind: AgwKind,
) -> Result<PolyFunc, ConstructError> {
    if ctx.characteristic() != 2 {
        return Err(ConstructError::OddCharacteristic);
    }
    check_subfield(ctx, m)?;
    if (ctx.degree() / m) % 2 == 0 {
        return Err(ConstructError::EvenN);
    }
    let params = AgwParams { sub_degree: m, phi: phi.clone(), g: g.clone(), h: Multiplier::Const(b), kind };
    params.check()?;
    let report = validate_preconditions(&params, Target::TwoToOne)?;
    let failed = |h| !report.item(h).is_some_and(|i| i.passed);
    if failed(Hypothesis::PhiAdditive) {
        return Err(ConstructError::InvalidParams("phi must be additive"));
    }
    if failed(Hypothesis::PhiTwoToOneOnSubfield) {
        return Err(ConstructError::PhiNot2to1);
    }
    if failed(Hypothesis::HPhiPermutesJ) {
        return Err(ConstructError::PhiNotJPermuting);
    }
    Ok(assemble(&params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdiff::c_uniformity;
    use crate::field::make_field;

    fn field(p: u64, n: u32) -> Arc<FieldContext> {
        Arc::new(make_field(p, n, None).unwrap())
    }

    fn pf(text: &str, ctx: &Arc<FieldContext>) -> PolyFunc {
        PolyFunc::parse(text, ctx).unwrap()
    }

    fn params(ctx: &Arc<FieldContext>, m: u32, phi: &str, g: &str, b: u64, kind: AgwKind) -> AgwParams {
        AgwParams { sub_degree: m, phi: pf(phi, ctx), g: pf(g, ctx), h: Multiplier::Const(Elem(b as u32)), kind }
    }

    #[test]
    fn j_examples() {
        let k9 = field(3, 2);
        let j = subspace_j(&k9, 1).unwrap();
        assert_eq!(j.len(), 3);
        let kernel: Vec<Elem> = k9.elements().filter(|&x| k9.relative_trace(1, x).unwrap().is_zero()).collect();
        assert_eq!(j.elements(), kernel.as_slice());
        assert_eq!(subspace_j(&field(2, 6), 2).unwrap().len(), 16);
        assert_eq!(subspace_j(&k9, 2).unwrap().elements(), &[Elem::ZERO]);
        assert!(matches!(subspace_j(&field(2, 6), 4), Err(ConstructError::BadSubfield { .. })));
    }

    #[test]
    fn j_closed_under_subfield_scaling() {
        for (p, n, m) in [(3, 2, 1), (2, 6, 2), (5, 2, 1), (3, 3, 1)] {
            let ctx = field(p, n);
            let j = subspace_j(&ctx, m).unwrap();
            for l in ctx.subfield_elements(m).unwrap().into_iter().skip(1) {
                assert!(j.is_permuted_by(|y| ctx.mul(l, y)));
            }
            for &a in j.elements() {
                assert!(j.is_permuted_by(|y| ctx.add(a, y)));
            }
        }
    }

    #[test]
    fn agw_examples() {
        let k9 = field(3, 2);
        let f = build_agw_pp(&params(&k9, 1, "x", "x^2", 1, AgwKind::Trace), true).unwrap();
        assert!(funcs::is_permutation(&f));
        let f = build_agw_pp(&params(&k9, 1, "x", "0", 1, AgwKind::Trace), true).unwrap();
        assert_eq!(f, PolyFunc::identity(&k9));
        let k8 = field(2, 3);
        let err = build_agw_pp(&params(&k8, 1, "x^2 + x", "x", 1, AgwKind::Trace), true).unwrap_err();
        match err {
            ConstructError::PreconditionFailed(r) => {
                assert!(!r.item(Hypothesis::KernelMeetsSubfieldTrivially).unwrap().passed)
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn agw_criterion_both_directions() {
        // phi = x^9 + a x^3 + b x over F_27 with q = 3
        let k27 = field(3, 3);
        let g = pf("g*x^2 + x", &k27);
        for a in 0..3u32 {
            for b in 0..3u32 {
                let phi = PolyFunc::from_terms(&k27, [(9, Elem::ONE), (3, Elem(a)), (1, Elem(b))]);
                for kind in [AgwKind::Trace, AgwKind::Power] {
                    let p = AgwParams { sub_degree: 1, phi: phi.clone(), g: g.clone(), h: Multiplier::Const(Elem(2)), kind };
                    let report = validate_preconditions(&p, Target::Permutation).unwrap();
                    let f = build_agw_pp(&p, false).unwrap();
                    assert_eq!(funcs::is_permutation(&f), report.passed(), "a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn non_commuting_phi_is_flagged() {
        let k9 = field(3, 2);
        let p = params(&k9, 1, "x^3 + g*x", "x", 1, AgwKind::Trace);
        let r = validate_preconditions(&p, Target::Permutation).unwrap();
        assert!(!r.item(Hypothesis::PhiCommutesWithPsi).unwrap().passed);
    }

    #[test]
    fn validation_examples() {
        let k9 = field(3, 2);
        let ok = validate_preconditions(&params(&k9, 1, "x", "x", 1, AgwKind::Trace), Target::Permutation).unwrap();
        assert!(ok.item(Hypothesis::KernelMeetsSubfieldTrivially).unwrap().passed);
        assert_eq!(ok.phi_linearity, Linearity::SubfieldLinear(1));

        let zero_h = AgwParams { h: Multiplier::Poly(PolyFunc::zero(&k9)), ..params(&k9, 1, "x", "x", 1, AgwKind::Trace) };
        let r = validate_preconditions(&zero_h, Target::Permutation).unwrap();
        assert!(!r.item(Hypothesis::HNonzeroSubfieldOnJ).unwrap().passed);

        let k64 = field(2, 6);
        let r = validate_preconditions(&params(&k64, 2, "x^2 + x", "x", 1, AgwKind::Trace), Target::TwoToOne).unwrap();
        assert!(r.item(Hypothesis::PhiTwoToOneOnSubfield).unwrap().passed);
        assert_eq!(r.phi_linearity, Linearity::PrimeFieldLinear);
        assert!(r.passed());
    }

    #[test]
    fn constant_multiplier_pps_are_pcn() {
        let k9 = field(3, 2);
        let f = build_agw_pp(&params(&k9, 1, "x", "g*x^5 + x^2", 2, AgwKind::Power), true).unwrap();
        for c in [Elem(0), Elem(2)] {
            assert_eq!(c_uniformity(&f, c), 1);
        }
    }

    #[test]
    fn quad_examples() {
        let k25 = field(5, 2);
        let j = subspace_j(&k25, 1).unwrap();
        let delta = j.elements()[1];
        let g = PolyFunc::from_terms(&k25, [(1, Elem::ONE), (0, delta)]);
        let x = pf("x", &k25);
        let f = build_quad_exponent_pp(&k25, 1, &x, Elem::ONE, &[(g.clone(), 10)]).unwrap();
        assert!(funcs::is_permutation(&f));
        for c in k25.subfield_elements(1).unwrap().into_iter().filter(|&c| c != Elem::ONE) {
            assert_eq!(c_uniformity(&f, c), 1);
        }
        // 30 = 5 + 25 needs index 2 > 2m - 1
        assert_eq!(build_quad_exponent_pp(&k25, 1, &x, Elem::ONE, &[(x.clone(), 30)]), Err(ConstructError::BadExponent(30)));
        assert_eq!(build_quad_exponent_pp(&k25, 1, &x, Elem::ONE, &[(x.clone(), 6)]), Err(ConstructError::BadExponent(6)));
        let one = pf("x + 1", &k25);
        assert!(!j.contains(Elem::ONE));
        assert_eq!(build_quad_exponent_pp(&k25, 1, &x, Elem::ONE, &[(one, 10)]), Err(ConstructError::GNotJStable(0)));
        assert_eq!(build_quad_exponent_pp(&k25, 1, &x, Elem::ZERO, &[]), Err(ConstructError::BadB));
    }

    #[test]
    fn quad_pp_iff_phi_permutes_j() {
        let k81 = field(3, 4);
        let x = pf("x", &k81);
        // s = 3 + 9 has indices 1 and 2, within [1, 3]
        assert!(is_admissible_quad_exponent(3, 2, 12));
        let mut kernel_cases = 0;
        for a in k81.subfield_elements(2).unwrap() {
            let phi = PolyFunc::from_terms(&k81, [(9, Elem::ONE), (1, a)]);
            let f = build_quad_exponent_pp(&k81, 2, &phi, Elem::ONE, &[(x.clone(), 12)]).unwrap();
            let crit = quad_criterion(&k81, 2, &phi).unwrap();
            assert_eq!(funcs::is_permutation(&f), crit.predicts_permutation(), "a={a}");
            if crit.phi_permutes_j && !crit.kernel_meets_subfield_trivially {
                kernel_cases += 1;
                assert!(!funcs::is_permutation(&f));
            }
        }
        // phi = x^q - x permutes J yet kills F_q
        assert_eq!(kernel_cases, 1);
    }

    #[test]
    fn cpp_when_phi_is_identity() {
        let k9 = field(3, 2);
        let f = build_agw_pp(&params(&k9, 1, "x", "x^2", 1, AgwKind::Trace), true).unwrap();
        assert!(funcs::is_complete_permutation(&f));
        let f = build_agw_pp(&params(&k9, 1, "x", "x^2", 2, AgwKind::Trace), true).unwrap();
        assert!(!funcs::is_complete_permutation(&f));
    }

    #[test]
    fn apcn_examples() {
        let k64 = field(2, 6);
        let phi = pf("x^2 + x", &k64);
        for g in ["x", "0"] {
            let f = build_apcn_2to1(&k64, 2, &phi, Elem::ONE, &pf(g, &k64), AgwKind::Trace).unwrap();
            assert!(funcs::is_two_to_one(&f));
            for c in k64.subfield_elements(2).unwrap().into_iter().filter(|&c| c != Elem::ONE) {
                assert_eq!(c_uniformity(&f, c), 2);
            }
            if g == "0" {
                assert_eq!(f, phi);
            }
        }
        let k16 = field(2, 4);
        let phi16 = pf("x^2 + x", &k16);
        assert_eq!(build_apcn_2to1(&k16, 2, &phi16, Elem::ONE, &phi16, AgwKind::Trace), Err(ConstructError::EvenN));
        let k27 = field(3, 3);
        assert_eq!(
            build_apcn_2to1(&k27, 1, &pf("x", &k27), Elem::ONE, &pf("x", &k27), AgwKind::Trace),
            Err(ConstructError::OddCharacteristic)
        );
        assert_eq!(
            build_apcn_2to1(&k64, 2, &pf("x", &k64), Elem::ONE, &phi, AgwKind::Trace),
            Err(ConstructError::PhiNot2to1)
        );
    }

    #[test]
    fn frobenius_exponent_must_be_coprime_to_full_degree() {
        // x^8 + x is 2-to-1 on F_4 but kills F_8, and F_8 meets J nontrivially.
        let k64 = field(2, 6);
        let phi = pf("x^8 + x", &k64);
        assert_eq!(
            build_apcn_2to1(&k64, 2, &phi, Elem::ONE, &pf("x", &k64), AgwKind::Trace),
            Err(ConstructError::PhiNotJPermuting)
        );
        let ok = pf("x^32 + x", &k64);
        assert!(build_apcn_2to1(&k64, 2, &ok, Elem::ONE, &pf("x", &k64), AgwKind::Trace).is_ok());
    }
}
