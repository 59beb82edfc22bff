//! Functions `F_q -> F_q` and the structural predicates on them.
//!
//! A [`PolyFunc`] always carries its full value table; predicates are decided
//! on the table alone. Coefficients are kept when the function was built from
//! a polynomial and recovered by interpolation otherwise.

use alloc::borrow::Cow;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Elem, FieldContext};
use crate::parse::{self, ParseError};

/// A function on `F_q`, as reduced polynomial plus value table.
#[derive(Clone)]
pub struct PolyFunc {
    ctx: Arc<FieldContext>,
    /// Sparse `(exponent, coefficient)` pairs, ascending, all exponents `< q`.
    coeffs: Option<Vec<(u32, Elem)>>,
    table: Vec<Elem>,
}

impl fmt::Debug for PolyFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFunc({self} over {}^{})", self.ctx.characteristic(), self.ctx.degree())
    }
}

impl PartialEq for PolyFunc {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.spec() == other.ctx.spec() && self.table == other.table
    }
}

impl Eq for PolyFunc {}

fn eval_terms(ctx: &FieldContext, terms: &[(u32, Elem)], x: Elem) -> Elem {
    terms
        .iter()
        .fold(Elem::ZERO, |acc, &(e, c)| ctx.add(acc, ctx.mul(c, ctx.pow(x, e as u64))))
}

impl PolyFunc {
    /// Builds a function from `(exponent, coefficient)` pairs, reducing
    /// exponents modulo `x^q - x` and merging like terms.
    pub fn from_terms<I>(ctx: &Arc<FieldContext>, terms: I) -> PolyFunc
    where
        I: IntoIterator<Item = (u64, Elem)>,
    {
        let mut merged = parse::Terms::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let e = parse::reduce_exponent(e, ctx.order());
            let slot = merged.entry(e).or_insert(Elem::ZERO);
            *slot = ctx.add(*slot, c);
            if slot.is_zero() {
                merged.remove(&e);
            }
        }
        let coeffs: Vec<(u32, Elem)> = merged.into_iter().map(|(e, c)| (e as u32, c)).collect();
        let table = ctx.elements().map(|x| eval_terms(ctx, &coeffs, x)).collect();
        PolyFunc { ctx: ctx.clone(), coeffs: Some(coeffs), table }
    }

    /// Wraps a value table; `table[x]` is the image of the element with
    /// canonical encoding `x`.
    ///
    /// # Panics
    /// If the table length is not `q` or a value lies outside the field.
    pub fn from_table(ctx: &Arc<FieldContext>, table: Vec<Elem>) -> PolyFunc {
        assert_eq!(table.len(), ctx.order() as usize, "value table must have q entries");
        assert!(table.iter().all(|&v| ctx.contains(v)), "table value outside the field");
        PolyFunc { ctx: ctx.clone(), coeffs: None, table }
    }

    pub fn from_fn(ctx: &Arc<FieldContext>, f: impl Fn(Elem) -> Elem) -> PolyFunc {
        let table = ctx.elements().map(f).collect();
        PolyFunc::from_table(ctx, table)
    }

    pub fn parse(text: &str, ctx: &Arc<FieldContext>) -> Result<PolyFunc, ParseError> {
        let terms = parse::parse_reduced(text, ctx)?;
        Ok(PolyFunc::from_terms(ctx, terms))
    }

    pub fn zero(ctx: &Arc<FieldContext>) -> PolyFunc {
        PolyFunc::from_terms(ctx, [])
    }

    pub fn constant(ctx: &Arc<FieldContext>, c: Elem) -> PolyFunc {
        PolyFunc::from_terms(ctx, [(0, c)])
    }

    pub fn monomial(ctx: &Arc<FieldContext>, c: Elem, e: u64) -> PolyFunc {
        PolyFunc::from_terms(ctx, [(e, c)])
    }

    pub fn identity(ctx: &Arc<FieldContext>) -> PolyFunc {
        PolyFunc::monomial(ctx, Elem::ONE, 1)
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn field(&self) -> &FieldContext {
        &self.ctx
    }

    #[inline]
    pub fn eval(&self, x: Elem) -> Elem {
        self.table[x.index()]
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    /// Reduced coefficients, interpolated from the table on demand (`O(q^2)`).
    pub fn coefficients(&self) -> Cow<'_, [(u32, Elem)]> {
        match &self.coeffs {
            Some(c) => Cow::Borrowed(c),
            None => Cow::Owned(interpolate(&self.ctx, &self.table)),
        }
    }

    pub fn has_stored_coefficients(&self) -> bool {
        self.coeffs.is_some()
    }

    /// Degree of the reduced polynomial, `None` for the zero function.
    pub fn degree(&self) -> Option<u32> {
        self.coefficients().last().map(|&(e, _)| e)
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| v.is_zero())
    }

    fn zip_with(&self, other: &PolyFunc, op: impl Fn(Elem, Elem) -> Elem) -> PolyFunc {
        assert_eq!(self.ctx.spec(), other.ctx.spec(), "functions over different fields");
        let table = self.table.iter().zip(&other.table).map(|(&a, &b)| op(a, b)).collect();
        PolyFunc { ctx: self.ctx.clone(), coeffs: None, table }
    }

    fn merge_coeffs(&self, other: &PolyFunc, negate: bool) -> Option<Vec<(u32, Elem)>> {
        let (a, b) = (self.coeffs.as_ref()?, other.coeffs.as_ref()?);
        let ctx = &self.ctx;
        let terms = a
            .iter()
            .map(|&(e, c)| (e as u64, c))
            .chain(b.iter().map(|&(e, c)| (e as u64, if negate { ctx.neg(c) } else { c })));
        PolyFunc::from_terms(ctx, terms).coeffs
    }

    pub fn add(&self, other: &PolyFunc) -> PolyFunc {
        let mut out = self.zip_with(other, |a, b| self.ctx.add(a, b));
        out.coeffs = self.merge_coeffs(other, false);
        out
    }

    pub fn sub(&self, other: &PolyFunc) -> PolyFunc {
        let mut out = self.zip_with(other, |a, b| self.ctx.sub(a, b));
        out.coeffs = self.merge_coeffs(other, true);
        out
    }

    /// Pointwise product.
    pub fn mul(&self, other: &PolyFunc) -> PolyFunc {
        self.zip_with(other, |a, b| self.ctx.mul(a, b))
    }

    pub fn scale(&self, c: Elem) -> PolyFunc {
        let ctx = &self.ctx;
        PolyFunc {
            ctx: ctx.clone(),
            coeffs: self.coeffs.as_ref().map(|cs| {
                if c.is_zero() {
                    Vec::new()
                } else {
                    cs.iter().map(|&(e, k)| (e, ctx.mul(c, k))).collect()
                }
            }),
            table: self.table.iter().map(|&v| ctx.mul(c, v)).collect(),
        }
    }

    /// `x -> self(inner(x))`.
    pub fn compose(&self, inner: &PolyFunc) -> PolyFunc {
        assert_eq!(self.ctx.spec(), inner.ctx.spec(), "functions over different fields");
        let table = inner.table.iter().map(|&v| self.eval(v)).collect();
        PolyFunc { ctx: self.ctx.clone(), coeffs: None, table }
    }

    /// Applies `op` to every value.
    pub fn map_values(&self, op: impl Fn(Elem) -> Elem) -> PolyFunc {
        let table = self.table.iter().map(|&v| op(v)).collect();
        PolyFunc::from_table(&self.ctx, table)
    }

    /// `x -> self(x + a)`.
    pub fn shift(&self, a: Elem) -> PolyFunc {
        let table = self.ctx.elements().map(|x| self.eval(self.ctx.add(x, a))).collect();
        PolyFunc { ctx: self.ctx.clone(), coeffs: None, table }
    }
}

/// Lagrange interpolation on all of `F_q`:
/// `c_0 = f(0)` and `c_k = -sum_a f(a) a^(q-1-k)` for `1 <= k <= q-1`.
fn interpolate(ctx: &FieldContext, table: &[Elem]) -> Vec<(u32, Elem)> {
    let q = ctx.order() as u64;
    let mut out = Vec::new();
    if !table[0].is_zero() {
        out.push((0, table[0]));
    }
    for k in 1..q {
        let s = ctx
            .elements()
            .zip(table)
            .filter(|(_, v)| !v.is_zero())
            .fold(Elem::ZERO, |acc, (a, &v)| ctx.add(acc, ctx.mul(v, ctx.pow(a, q - 1 - k))));
        let ck = ctx.neg(s);
        if !ck.is_zero() {
            out.push((k as u32, ck));
        }
    }
    out
}

impl fmt::Display for PolyFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coefficients();
        if coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in coeffs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (e, c.0) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (e, 1) => write!(f, "x^{e}")?,
                (e, c) => write!(f, "{c}*x^{e}")?,
            }
        }
        Ok(())
    }
}

/// Number of preimages of every field element.
pub fn preimage_counts(f: &PolyFunc) -> Vec<u32> {
    let mut counts = vec![0u32; f.table.len()];
    for v in &f.table {
        counts[v.index()] += 1;
    }
    counts
}

pub fn image_size(f: &PolyFunc) -> usize {
    preimage_counts(f).iter().filter(|&&c| c > 0).count()
}

pub fn is_permutation(f: &PolyFunc) -> bool {
    preimage_counts(f).iter().all(|&c| c == 1)
}

/// Both `f` and `f + x` permute the field.
pub fn is_complete_permutation(f: &PolyFunc) -> bool {
    is_permutation(f) && is_permutation(&f.add(&PolyFunc::identity(f.ctx())))
}

/// Even `q`: every fiber has size 0 or 2. Odd `q`: exactly one fiber has
/// size 1 and all others 0 or 2.
pub fn is_two_to_one(f: &PolyFunc) -> bool {
    let counts = preimage_counts(f);
    let mut singles = 0usize;
    for &c in &counts {
        match c {
            0 | 2 => {}
            1 => singles += 1,
            _ => return false,
        }
    }
    if f.ctx.order() % 2 == 0 {
        singles == 0
    } else {
        singles == 1
    }
}

/// Ordinary planarity: every derivative `x -> f(x+a) - f(x)`, `a != 0`,
/// is a bijection.
pub fn is_planar(f: &PolyFunc) -> bool {
    let ctx = f.field();
    let mut seen = vec![false; f.table.len()];
    ctx.elements().skip(1).all(|a| {
        seen.iter_mut().for_each(|s| *s = false);
        ctx.elements().all(|x| {
            let b = ctx.sub(f.eval(ctx.add(x, a)), f.eval(x));
            !core::mem::replace(&mut seen[b.index()], true)
        })
    })
}

/// Sum of the base-`p` digits of `e`.
pub fn p_weight(mut e: u64, p: u32) -> u32 {
    let mut w = 0;
    while e > 0 {
        w += (e % p as u64) as u32;
        e /= p as u64;
    }
    w
}

/// Degree-shape of a polynomial's exponent set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ShapeFlags {
    pub is_linearized: bool,
    pub is_affine: bool,
    pub is_do: bool,
    pub is_quadratic: bool,
}

fn shape_of(exponents: impl Iterator<Item = u64> + Clone, p: u32, q: u32) -> ShapeFlags {
    // exponents >= q would need digit positions >= n, outside every shape
    let weight = |e: u64| if e < q as u64 { Some(p_weight(e, p)) } else { None };
    ShapeFlags {
        is_linearized: exponents.clone().all(|e| weight(e) == Some(1)),
        is_affine: exponents.clone().all(|e| matches!(weight(e), Some(0 | 1))),
        is_do: exponents.clone().all(|e| weight(e) == Some(2)),
        is_quadratic: exponents.clone().all(|e| matches!(weight(e), Some(0..=2))),
    }
}

/// Shape of the reduced polynomial.
pub fn classify_shape(f: &PolyFunc) -> ShapeFlags {
    let coeffs = f.coefficients();
    shape_of(coeffs.iter().map(|&(e, _)| e as u64), f.ctx.characteristic(), f.ctx.order())
}

/// Shape of a polynomial as written, before reduction modulo `x^q - x`.
pub fn classify_unreduced(text: &str, ctx: &FieldContext) -> Result<ShapeFlags, ParseError> {
    let terms = parse::parse_unreduced(text, ctx)?;
    Ok(shape_of(terms.keys().copied(), ctx.characteristic(), ctx.order()))
}

/// Linearity class of an additive map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Linearity {
    NotAdditive,
    /// Additive (hence `F_p`-linear) but not linear over the given subfield.
    PrimeFieldLinear,
    /// Linear over the subfield of the recorded degree.
    SubfieldLinear(u32),
}

/// True iff `f(x + y) = f(x) + f(y)` for all `x, y`.
pub fn is_additive(f: &PolyFunc) -> bool {
    let ctx = f.field();
    if !f.eval(Elem::ZERO).is_zero() {
        return false;
    }
    // additivity on a basis of F_q over F_p plus F_p-homogeneity suffices,
    // but exhaustive checking keeps this independent of that argument
    ctx.elements().all(|x| {
        let fx = f.eval(x);
        ctx.elements().all(|y| f.eval(ctx.add(x, y)) == ctx.add(fx, f.eval(y)))
    })
}

/// Checks additivity and `f(l x) = l f(x)` for `l` in the subfield of
/// degree `sub_degree`.
pub fn linearity(f: &PolyFunc, sub_degree: u32) -> Linearity {
    if !is_additive(f) {
        return Linearity::NotAdditive;
    }
    let ctx = f.field();
    let Ok(scalars) = ctx.subfield_elements(sub_degree) else {
        return Linearity::PrimeFieldLinear;
    };
    let homogeneous = scalars
        .iter()
        .all(|&l| ctx.elements().all(|x| f.eval(ctx.mul(l, x)) == ctx.mul(l, f.eval(x))));
    if homogeneous {
        Linearity::SubfieldLinear(sub_degree)
    } else {
        Linearity::PrimeFieldLinear
    }
}

/// Human-readable name for a function, used in reports.
pub fn describe(f: &PolyFunc) -> String {
    alloc::format!("{f}")
}
