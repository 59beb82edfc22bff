//! Text syntax for polynomials in `x` with coefficients in `F_q`.
//!
//! Coefficients are either canonical integers (`0..q`) or expressions in the
//! generator `g`, e.g. `(2*g+1)*x^3 + g*x + 4`. Products may be written with
//! `*` or by juxtaposition, and whitespace is ignored.

use alloc::collections::BTreeMap;
use core::fmt;

use crate::field::{Elem, FieldContext};

/// Largest exponent kept when parsing without reduction mod `x^q - x`.
pub const MAX_UNREDUCED_DEGREE: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    ExpectedExponent,
    IntegerOverflow,
    CoefficientNotInField(u64),
    VariableInElement,
    ExponentTooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::ExpectedExponent => write!(f, "expected a non-negative integer exponent"),
            ParseErrorKind::IntegerOverflow => write!(f, "integer literal too large"),
            ParseErrorKind::CoefficientNotInField(v) => {
                write!(f, "coefficient {v} is not an element of the field")
            }
            ParseErrorKind::VariableInElement => write!(f, "field element may not contain x"),
            ParseErrorKind::ExponentTooLarge => write!(f, "unreduced exponent too large"),
        }
    }
}

impl core::error::Error for ParseError {}

/// Sparse polynomial: exponent -> nonzero coefficient.
pub(crate) type Terms = BTreeMap<u64, Elem>;

#[inline]
pub(crate) fn reduce_exponent(e: u64, q: u32) -> u64 {
    if e == 0 {
        0
    } else {
        (e - 1) % (q as u64 - 1) + 1
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a FieldContext,
    reduce: bool,
    allow_x: bool,
}

impl<'a> Parser<'a> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { position: self.pos, kind }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        match self.src.get(self.pos) {
            Some(&c) => self.err(ParseErrorKind::UnexpectedChar(c as char)),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add((c - b'0') as u64))
                .ok_or(ParseError { position: start, kind: ParseErrorKind::IntegerOverflow })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(ParseErrorKind::ExpectedExponent));
        }
        Ok(v)
    }

    fn add_into(&self, acc: &mut Terms, e: u64, c: Elem) {
        if c.is_zero() {
            return;
        }
        let slot = acc.entry(e).or_insert(Elem::ZERO);
        *slot = self.ctx.add(*slot, c);
        if slot.is_zero() {
            acc.remove(&e);
        }
    }

    fn mul(&self, a: &Terms, b: &Terms, at: usize) -> Result<Terms, ParseError> {
        let mut out = Terms::new();
        if !self.reduce {
            let top = a.keys().last().copied().unwrap_or(0) + b.keys().last().copied().unwrap_or(0);
            if top > MAX_UNREDUCED_DEGREE {
                return Err(ParseError { position: at, kind: ParseErrorKind::ExponentTooLarge });
            }
        }
        for (&ea, &ca) in a {
            for (&eb, &cb) in b {
                let e = if self.reduce {
                    reduce_exponent(ea + eb, self.ctx.order())
                } else {
                    ea + eb
                };
                self.add_into(&mut out, e, self.ctx.mul(ca, cb));
            }
        }
        Ok(out)
    }

    fn pow(&self, base: Terms, k: u64, at: usize) -> Result<Terms, ParseError> {
        let q = self.ctx.order();
        if k == 0 {
            return Ok(Terms::from([(0, Elem::ONE)]));
        }
        if base.len() == 1 {
            let (&e, &c) = base.iter().next().unwrap();
            let prod = (e as u128) * (k as u128);
            let e = if self.reduce {
                if e == 0 {
                    0
                } else {
                    ((prod - 1) % (q as u128 - 1) + 1) as u64
                }
            } else if prod > MAX_UNREDUCED_DEGREE as u128 {
                return Err(ParseError { position: at, kind: ParseErrorKind::ExponentTooLarge });
            } else {
                prod as u64
            };
            return Ok(Terms::from([(e, self.ctx.pow(c, k))]));
        }
        if base.is_empty() {
            return Ok(Terms::new());
        }
        let top = *base.keys().last().unwrap() as u128;
        if !self.reduce && top * k as u128 > MAX_UNREDUCED_DEGREE as u128 {
            return Err(ParseError { position: at, kind: ParseErrorKind::ExponentTooLarge });
        }
        // values of a function lie in F_q, so v^k = v^k' with k' the reduced exponent
        let mut k = if self.reduce { reduce_exponent(k, q) } else { k };
        let mut acc = Terms::from([(0, Elem::ONE)]);
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &b, at)?;
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b, at)?;
            }
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<Terms, ParseError> {
        let mut acc = Terms::new();
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            for (e, c) in t {
                let c = if negate { self.ctx.neg(c) } else { c };
                self.add_into(&mut acc, e, c);
            }
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn starts_factor(c: u8) -> bool {
        c.is_ascii_digit() || c == b'x' || c == b'g' || c == b'('
    }

    fn term(&mut self) -> Result<Terms, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let at = self.pos;
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = self.mul(&acc, &rhs, at)?;
                }
                Some(c) if Self::starts_factor(c) => {
                    let rhs = self.factor()?;
                    acc = self.mul(&acc, &rhs, at)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Terms, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            let k = if self.peek() == Some(b'(') {
                self.pos += 1;
                let k = self.integer()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                k
            } else {
                self.integer()?
            };
            return self.pow(base, k, at);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Terms, ParseError> {
        match self.peek() {
            Some(b'x') => {
                if !self.allow_x {
                    return Err(self.err(ParseErrorKind::VariableInElement));
                }
                self.pos += 1;
                Ok(Terms::from([(1, Elem::ONE)]))
            }
            Some(b'g') => {
                self.pos += 1;
                let g = self.ctx.indeterminate();
                Ok(if g.is_zero() { Terms::new() } else { Terms::from([(0, g)]) })
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let v = self.integer()?;
                if v >= self.ctx.order() as u64 {
                    return Err(ParseError {
                        position: start,
                        kind: ParseErrorKind::CoefficientNotInField(v),
                    });
                }
                Ok(if v == 0 { Terms::new() } else { Terms::from([(0, Elem(v as u32))]) })
            }
            _ => Err(self.unexpected()),
        }
    }

    fn finish(&mut self, t: Terms) -> Result<Terms, ParseError> {
        if self.peek().is_some() {
            return Err(self.unexpected());
        }
        Ok(t)
    }
}

fn run(text: &str, ctx: &FieldContext, reduce: bool, allow_x: bool) -> Result<Terms, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ctx, reduce, allow_x };
    let t = p.expr()?;
    p.finish(t)
}

/// Parses a polynomial, reducing modulo `x^q - x` as it goes.
pub(crate) fn parse_reduced(text: &str, ctx: &FieldContext) -> Result<Terms, ParseError> {
    run(text, ctx, true, true)
}

/// Parses a polynomial keeping exponents as written (after expansion).
pub fn parse_unreduced(text: &str, ctx: &FieldContext) -> Result<BTreeMap<u64, Elem>, ParseError> {
    run(text, ctx, false, true)
}

/// Parses a field element given either as a canonical integer or as an
/// expression in `g`.
pub fn parse_element(text: &str, ctx: &FieldContext) -> Result<Elem, ParseError> {
    let t = run(text, ctx, true, false)?;
    Ok(t.get(&0).copied().unwrap_or(Elem::ZERO))
}

/// Writes `x` as a polynomial in `g`, e.g. `2*g^2 + g + 1`.
pub fn format_element_symbolic(x: Elem, ctx: &FieldContext) -> alloc::string::String {
    use alloc::string::String;
    use core::fmt::Write;
    let coords = ctx.coords(x);
    let mut out = String::new();
    for (i, &c) in coords.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push_str(" + ");
        }
        match (i, c) {
            (0, c) => write!(out, "{c}").unwrap(),
            (1, 1) => out.push('g'),
            (1, c) => write!(out, "{c}*g").unwrap(),
            (i, 1) => write!(out, "g^{i}").unwrap(),
            (i, c) => write!(out, "{c}*g^{i}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
