//! Power maps `x -> x^d` and their c-differential behaviour across extensions.
//!
//! Exponents satisfy `p ∤ d(d-1)`. For `a != 0` the equation
//! `(x + a)^d - c x^d = b` becomes `(x + 1)^d - c x^d = b / a^d` under
//! `x -> a x`, so every nonzero row of the table has the fiber profile of
//! `x -> (x + 1)^d - c x^d`. The `a = 0` row is `(1 - c) x^d`, whose largest
//! fiber is `gcd(d, q - 1)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{is_prime, Elem, Embedding, FieldContext, FieldError, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialError {
    /// `p` divides `d(d-1)`, or `p` is not prime.
    BadExponent { p: u64, d: u64 },
    ZeroC,
    /// `c` is 0 or 1 where a proper multiplier is required.
    BadC,
    COne,
    CapExceeded { order: u128, cap: u64 },
    Field(FieldError),
}

impl fmt::Display for MonomialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialError::BadExponent { p, d } => write!(f, "exponent {d} is not admissible for p = {p} (need p ∤ d(d-1))"),
            MonomialError::ZeroC => write!(f, "c must be nonzero"),
            MonomialError::BadC => write!(f, "c must differ from 0 and 1"),
            MonomialError::COne => write!(f, "c = 1 is not allowed here"),
            MonomialError::CapExceeded { order, cap } => write!(f, "field order {order} exceeds cap {cap}"),
            MonomialError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MonomialError {}

impl From<FieldError> for MonomialError {
    fn from(e: FieldError) -> Self {
        MonomialError::Field(e)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a as u64, b as u64) as u32 * b
}

fn check_exponent(p: u64, d: u64) -> Result<(), MonomialError> {
    let bad = !is_prime(p) || d < 2 || d % p == 0 || (d - 1) % p == 0;
    if bad {
        return Err(MonomialError::BadExponent { p, d });
    }
    Ok(())
}

/// Multiplicative order of `p` modulo `d - 1`: the least `s > 0` with
/// `(d - 1) | p^s - 1`.
pub fn min_s(p: u64, d: u64) -> Result<u32, MonomialError> {
    check_exponent(p, d)?;
    let modulus = d - 1;
    if modulus == 1 {
        return Ok(1);
    }
    let base = (p % modulus) as u128;
    let mut acc = base;
    let mut s = 1;
    while acc != 1 {
        acc = acc * base % modulus as u128;
        s += 1;
    }
    Ok(s)
}

/// Whether `c` (an element of `ctx_h = F_{p^h}`) has a `(d-1)`-th root in
/// `F_{p^s}`.
///
/// Works in `F_{p^L}` with `L = lcm(h, s)`: `c` must lie in the copy of
/// `F_{p^s}` there and satisfy `c^((p^s - 1)/(d - 1)) = 1`.
pub fn root_in_fps(ctx_h: &FieldContext, d: u64, c: Elem) -> Result<bool, MonomialError> {
    let p = ctx_h.characteristic() as u64;
    let s = min_s(p, d)?;
    if c.is_zero() {
        return Err(MonomialError::ZeroC);
    }
    let big = FieldContext::new(p, lcm(ctx_h.degree(), s), None, Default::default())?;
    let c_big = Embedding::new(ctx_h, &big)?.apply(ctx_h, &big, c);
    if !big.in_subfield(c_big, s) {
        return Ok(false);
    }
    let exponent = ((p as u128).pow(s) - 1) / (d as u128 - 1);
    Ok(big.pow_u128(c_big, exponent) == Elem::ONE)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchWarning {
    /// The search field does not contain `F_{p^s}`; only points inside it
    /// are ruled out.
    FieldTooSmall { s: u32, degree: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoints {
    pub pairs: Vec<(Elem, Elem)>,
    pub warning: Option<SearchWarning>,
}

/// All `(x, y)` with `x != y`, `xy != 0`, `((x+1)/x)^(d-1) = c`,
/// `((y+1)/y)^(d-1) = c` and `(x/y)^(d-1) = 1`, found by exhaustion over
/// `ctx`. Pairs are ordered by `(x, y)`.
pub fn singular_points(ctx: &FieldContext, d: u64, c: Elem) -> Result<SingularPoints, MonomialError> {
    let s = min_s(ctx.characteristic() as u64, d)?;
    let e = d - 1;
    let on_branch: Vec<Elem> = ctx
        .elements()
        .skip(1)
        .filter(|&x| {
            let ratio = ctx.div(ctx.add(x, Elem::ONE), x).expect("x is nonzero");
            ctx.pow(ratio, e) == c
        })
        .collect();
    let mut pairs = Vec::new();
    for &x in &on_branch {
        for &y in &on_branch {
            if x != y && ctx.pow(ctx.div(x, y).expect("y is nonzero"), e) == Elem::ONE {
                pairs.push((x, y));
            }
        }
    }
    let warning = (ctx.degree() % s != 0).then_some(SearchWarning::FieldTooSmall { s, degree: ctx.degree() });
    Ok(SingularPoints { pairs, warning })
}

/// `(x + 1)^d - c x^d`.
pub fn unit_row_map(ctx: &FieldContext, d: u64, c: Elem, x: Elem) -> Elem {
    ctx.sub(ctx.pow(ctx.add(x, Elem::ONE), d), ctx.mul(c, ctx.pow(x, d)))
}

/// Fiber statistics of `x -> (x + 1)^d - c x^d` over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueDistribution {
    /// `histogram[k]` = number of `t` with exactly `k` preimages.
    pub histogram: Vec<u64>,
    pub max_fiber: u32,
    /// `t` with at least three preimages, ascending.
    pub violations: Vec<Elem>,
    /// `t` with exactly `d` preimages, ascending.
    pub split: Vec<Elem>,
}

pub fn value_distribution(ctx: &FieldContext, d: u64, c: Elem) -> Result<ValueDistribution, MonomialError> {
    if c == Elem::ONE {
        return Err(MonomialError::COne);
    }
    let mut counts = vec![0u32; ctx.order() as usize];
    for x in ctx.elements() {
        counts[unit_row_map(ctx, d, c, x).index()] += 1;
    }
    let max_fiber = counts.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0u64; max_fiber as usize + 1];
    for &k in &counts {
        histogram[k as usize] += 1;
    }
    let pick = |pred: &dyn Fn(u32) -> bool| {
        ctx.elements().filter(|t| pred(counts[t.index()])).collect::<Vec<_>>()
    };
    Ok(ValueDistribution {
        histogram,
        max_fiber,
        violations: pick(&|k| k >= 3),
        split: pick(&|k| k as u64 == d),
    })
}

/// Solutions of `(x + 1)^d - c x^d = t`, ascending.
pub fn unit_row_fiber(ctx: &FieldContext, d: u64, c: Elem, t: Elem) -> Vec<Elem> {
    ctx.elements().filter(|&x| unit_row_map(ctx, d, c, x) == t).collect()
}

/// `gcd(d, q - 1) <= 2`; when false the `a = 0` row already has a fiber of
/// size at least 3.
pub fn gcd_necessity(q: u64, d: u64) -> bool {
    gcd(d, q - 1) <= 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationWitness {
    pub a: Elem,
    pub b: Elem,
    /// All solutions of `(x + a)^d - c x^d = b`; at least three.
    pub solutions: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionVerdict {
    pub r: u32,
    pub field: FieldSpec,
    pub order: u64,
    /// c-differential uniformity of `x^d` over this field.
    pub delta: u32,
    pub is_pcn: bool,
    pub is_apcn: bool,
    pub gcd_ok: bool,
    pub violation_witness: Option<ViolationWitness>,
    /// `t` with exactly `d` preimages under `x -> (x + 1)^d - c x^d`.
    pub split_witness: Option<Elem>,
}

/// Classifies `x^d` over `ctx` for the multiplier `c` (already in `ctx`)
/// with the `O(q)` fast path.
pub fn extension_verdict(ctx: &FieldContext, r: u32, d: u64, c: Elem) -> Result<ExtensionVerdict, MonomialError> {
    let dist = value_distribution(ctx, d, c)?;
    let q = ctx.order() as u64;
    let zero_row_max = gcd(d, q - 1).max(1) as u32;
    let delta = dist.max_fiber.max(zero_row_max);
    let violation_witness = if let Some(&t) = dist.violations.first() {
        Some(ViolationWitness { a: Elem::ONE, b: t, solutions: unit_row_fiber(ctx, d, c, t) })
    } else if zero_row_max >= 3 {
        // (1 - c) x^d = 1 - c is solved by every d-th root of unity
        let b = ctx.sub(Elem::ONE, c);
        let solutions = ctx.elements().filter(|&x| ctx.pow(x, d) == Elem::ONE).collect();
        Some(ViolationWitness { a: Elem::ZERO, b, solutions })
    } else {
        None
    };
    Ok(ExtensionVerdict {
        r,
        field: ctx.spec().clone(),
        order: q,
        delta,
        is_pcn: delta == 1,
        is_apcn: delta == 2,
        gcd_ok: gcd_necessity(q, d),
        violation_witness,
        split_witness: dist.split.first().copied(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialAnalysis {
    pub p: u64,
    pub h: u32,
    pub d: u64,
    pub s: u32,
    /// In `F_{p^h}`.
    pub c: Elem,
    pub root_in_fps: bool,
    /// `gcd(d, q^r - 1) <= 2` for every swept `r`.
    pub gcd_ok: bool,
    pub per_extension: Vec<ExtensionVerdict>,
    pub note: String,
}

/// Validated input for a sweep; the per-extension work can be run in any
/// order or concurrently through [`SweepPlan::verdict`].
pub struct SweepPlan<'a> {
    ctx_h: &'a FieldContext,
    d: u64,
    c: Elem,
    r_max: u32,
}

impl<'a> SweepPlan<'a> {
    pub fn new(ctx_h: &'a FieldContext, d: u64, c: Elem, r_max: u32, cap: u64) -> Result<SweepPlan<'a>, MonomialError> {
        check_exponent(ctx_h.characteristic() as u64, d)?;
        if c.is_zero() || c == Elem::ONE || !ctx_h.contains(c) {
            return Err(MonomialError::BadC);
        }
        let order = (ctx_h.order() as u128).checked_pow(r_max).unwrap_or(u128::MAX);
        if order > cap as u128 {
            return Err(MonomialError::CapExceeded { order, cap });
        }
        Ok(SweepPlan { ctx_h, d, c, r_max })
    }

    pub fn extensions(&self) -> core::ops::RangeInclusive<u32> {
        1..=self.r_max
    }

    /// Builds `F_{q^r}`, embeds `c` and classifies `x^d` there.
    pub fn verdict(&self, r: u32) -> Result<ExtensionVerdict, MonomialError> {
        let p = self.ctx_h.characteristic() as u64;
        let ext = FieldContext::new(p, self.ctx_h.degree() * r, None, Default::default())?;
        let c = Embedding::new(self.ctx_h, &ext)?.apply(self.ctx_h, &ext, self.c);
        extension_verdict(&ext, r, self.d, c)
    }

    /// Assembles the report from verdicts in any order.
    pub fn finish(&self, mut per_extension: Vec<ExtensionVerdict>) -> Result<MonomialAnalysis, MonomialError> {
        per_extension.sort_by_key(|v| v.r);
        let p = self.ctx_h.characteristic() as u64;
        let note = match per_extension.iter().find(|v| v.violation_witness.is_some()) {
            Some(v) => format!("witness found at r={}", v.r),
            None => format!("no witness up to r_max={}", self.r_max),
        };
        Ok(MonomialAnalysis {
            p,
            h: self.ctx_h.degree(),
            d: self.d,
            s: min_s(p, self.d)?,
            c: self.c,
            root_in_fps: root_in_fps(self.ctx_h, self.d, self.c)?,
            gcd_ok: per_extension.iter().all(|v| v.gcd_ok),
            per_extension,
            note,
        })
    }
}

/// Sequential sweep over `r = 1..=r_max`. Certifies failure of PcN/APcN
/// only for the swept extensions.
pub fn exceptionality_sweep(
    ctx_h: &FieldContext,
    d: u64,
    c: Elem,
    r_max: u32,
    cap: u64,
) -> Result<MonomialAnalysis, MonomialError> {
    let plan = SweepPlan::new(ctx_h, d, c, r_max, cap)?;
    let verdicts = plan.extensions().map(|r| plan.verdict(r)).collect::<Result<Vec<_>, _>>()?;
    plan.finish(verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdiff::c_uniformity;
    use crate::field::make_field;
    use crate::funcs::PolyFunc;
    use alloc::sync::Arc;

    fn field(p: u64, n: u32) -> Arc<FieldContext> {
        Arc::new(make_field(p, n, None).unwrap())
    }

    #[test]
    fn min_s_examples() {
        assert_eq!(min_s(3, 5), Ok(2));
        assert_eq!(min_s(5, 3), Ok(1));
        assert_eq!(min_s(3, 2), Ok(1));
        assert!(matches!(min_s(3, 4), Err(MonomialError::BadExponent { .. })));
        assert!(matches!(min_s(3, 3), Err(MonomialError::BadExponent { .. })));
    }

    #[test]
    fn root_in_fps_examples() {
        let k27 = field(3, 3);
        for c in k27.elements().filter(|&c| !k27.in_subfield(c, 1)) {
            assert_eq!(root_in_fps(&k27, 5, c), Ok(false));
        }
        assert_eq!(root_in_fps(&field(3, 2), 5, Elem::ONE), Ok(true));
        assert_eq!(root_in_fps(&field(5, 1), 3, Elem(2)), Ok(false));
        assert_eq!(root_in_fps(&field(5, 1), 3, Elem(4)), Ok(true));
        assert_eq!(root_in_fps(&k27, 5, Elem::ZERO), Err(MonomialError::ZeroC));
    }

    #[test]
    fn root_in_fps_matches_search_in_f9_inside_f729() {
        let k27 = field(3, 3);
        let k729 = field(3, 6);
        let emb = Embedding::new(&k27, &k729).unwrap();
        let f9: Vec<Elem> = k729.subfield_elements(2).unwrap();
        for c in k27.elements().skip(1) {
            let cb = emb.apply(&k27, &k729, c);
            let found = f9.iter().any(|&r| k729.pow(r, 4) == cb);
            assert_eq!(root_in_fps(&k27, 5, c).unwrap(), found);
        }
    }

    #[test]
    fn singular_points_examples() {
        let k27 = field(3, 3);
        let k729 = field(3, 6);
        let emb = Embedding::new(&k27, &k729).unwrap();
        let c = k27.indeterminate();
        let sp = singular_points(&k729, 5, emb.apply(&k27, &k729, c)).unwrap();
        assert!(sp.pairs.is_empty());
        assert_eq!(sp.warning, None);
        let sp = singular_points(&k729, 5, Elem::ONE).unwrap();
        assert!(!sp.pairs.is_empty());
        assert!(singular_points(&k27, 5, Elem::ONE).unwrap().warning.is_some());
    }

    #[test]
    fn singular_points_d2_by_substitution() {
        let k = field(5, 2);
        for c in k.elements() {
            let pairs = singular_points(&k, 2, c).unwrap().pairs;
            let mut direct = Vec::new();
            for x in k.elements().skip(1) {
                for y in k.elements().skip(1) {
                    let ok = x != y
                        && k.div(k.add(x, Elem::ONE), x) == Some(c)
                        && k.div(k.add(y, Elem::ONE), y) == Some(c)
                        && k.div(x, y) == Some(Elem::ONE);
                    if ok {
                        direct.push((x, y));
                    }
                }
            }
            assert_eq!(pairs, direct);
            assert!(pairs.is_empty());
        }
    }

    #[test]
    fn value_distribution_examples() {
        let k = field(3, 3);
        let c = k.indeterminate();
        let dist = value_distribution(&k, 5, c).unwrap();
        let total: u64 = dist.histogram.iter().enumerate().map(|(k, &n)| k as u64 * n).sum();
        assert_eq!(total, 27);
        assert_eq!(dist.histogram.iter().sum::<u64>(), 27);
        for p in [3u64, 5, 7] {
            let kp = field(p, 2);
            for c in kp.elements().filter(|&c| c != Elem::ONE) {
                assert!(value_distribution(&kp, 2, c).unwrap().max_fiber <= 2);
            }
        }
        assert_eq!(value_distribution(&k, 5, Elem::ONE), Err(MonomialError::COne));
    }

    #[test]
    fn gcd_examples() {
        assert!(gcd_necessity(8, 3));
        assert!(!gcd_necessity(7, 3));
        assert!(!gcd_necessity(9, 4));
    }

    #[test]
    fn fast_path_matches_generic() {
        for (p, n, d) in [(3u64, 3u32, 5u64), (3, 2, 5), (5, 2, 3), (2, 4, 3), (2, 3, 5), (7, 1, 3)] {
            let k = field(p, n);
            for c in k.elements().filter(|&c| c != Elem::ONE) {
                let f = PolyFunc::monomial(&k, Elem::ONE, d);
                let fast = extension_verdict(&k, 1, d, c).unwrap().delta;
                assert_eq!(fast, c_uniformity(&f, c), "p={p} n={n} d={d} c={c}");
            }
        }
    }

    #[test]
    fn sweep_examples() {
        let k27 = field(3, 3);
        let c = k27.indeterminate();
        let a = exceptionality_sweep(&k27, 5, c, 2, 1 << 20).unwrap();
        assert_eq!(a.s, 2);
        assert!(!a.root_in_fps);
        assert_eq!(a.per_extension.len(), 2);
        for v in &a.per_extension {
            if let Some(w) = &v.violation_witness {
                assert!(w.solutions.len() >= 3);
                assert!(!v.is_pcn && !v.is_apcn);
            }
        }

        let k5 = field(5, 1);
        let a = exceptionality_sweep(&k5, 2, Elem(2), 3, 1 << 20).unwrap();
        assert!(a.per_extension.iter().all(|v| v.is_apcn));
        assert_eq!(a.note, "no witness up to r_max=3");

        assert_eq!(exceptionality_sweep(&k27, 5, Elem::ONE, 1, 1 << 20), Err(MonomialError::BadC));
        assert!(matches!(exceptionality_sweep(&k27, 5, c, 9, 1 << 20), Err(MonomialError::CapExceeded { .. })));
    }
}
