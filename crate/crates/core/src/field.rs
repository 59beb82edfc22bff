//! Finite fields `F_{p^n}` in the polynomial basis `{1, g, ..., g^(n-1)}`.
//!
//! Elements are carried as their canonical integer encoding
//! `sum coords[i] * p^i`, so an element of `F_q` is just an index in `0..q`.
//! Small fields (`q` up to a configurable cap) get exponential, logarithm and
//! Zech-logarithm tables so that multiplication and addition are table
//! lookups; larger fields fall back to schoolbook polynomial arithmetic.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::zp_poly;

/// Default upper bound on `q` for building log/Zech tables.
pub const DEFAULT_LOG_TABLE_CAP: u64 = 1 << 20;

/// Largest supported extension degree (`2^31` is the largest binary field
/// whose order fits the element encoding).
pub const MAX_DEGREE: usize = 31;

const NO_ZECH: u32 = u32::MAX;

/// A field element in canonical integer encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    ZeroDegree,
    DegreeMismatch { expected: u32, found: usize },
    NotMonic,
    CoefficientOutOfRange { index: usize, value: u32 },
    ReducibleModulus,
    TooLarge { p: u64, n: u32 },
    IncompatibleTower { sub: (u32, u32), sup: (u32, u32) },
    BadSubfieldDegree { degree: u32, n: u32 },
    BadCoordinates,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::ZeroDegree => write!(f, "extension degree must be positive"),
            FieldError::DegreeMismatch { expected, found } => write!(
                f,
                "modulus must have degree {expected} ({} coefficients), got {found} coefficients",
                expected + 1
            ),
            FieldError::NotMonic => write!(f, "modulus is not monic"),
            FieldError::CoefficientOutOfRange { index, value } => {
                write!(f, "modulus coefficient {index} = {value} is not reduced mod p")
            }
            FieldError::ReducibleModulus => write!(f, "modulus is reducible"),
            FieldError::TooLarge { p, n } => write!(f, "field {p}^{n} is too large"),
            FieldError::IncompatibleTower { sub, sup } => write!(
                f,
                "F_{}^{} does not embed into F_{}^{}",
                sub.0, sub.1, sup.0, sup.1
            ),
            FieldError::BadSubfieldDegree { degree, n } => {
                write!(f, "subfield degree {degree} does not divide {n}")
            }
            FieldError::BadCoordinates => write!(f, "coordinate vector is not a field element"),
        }
    }
}

impl core::error::Error for FieldError {}

/// Characteristic, degree and defining polynomial of a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Modulus coefficients, low degree first, length `n + 1`, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MulMode {
    Direct,
    LogTable,
}

#[derive(Clone, Copy, Debug)]
pub struct FieldOptions {
    /// Build log/Zech tables when `q` is at most this value.
    pub log_table_cap: u64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions { log_table_cap: DEFAULT_LOG_TABLE_CAP }
    }
}

struct LogTables {
    generator: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NO_ZECH` when `1 + g^k = 0`.
    zech: Vec<u32>,
}

/// A fully materialized finite field. Immutable once built.
pub struct FieldContext {
    spec: FieldSpec,
    q: u32,
    pow_p: Vec<u32>,
    /// `frobenius[i][j]` is the image of basis vector `g^j` under `x -> x^(p^i)`.
    frobenius: Vec<Vec<Elem>>,
    tables: Option<LogTables>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("spec", &self.spec)
            .field("mode", &self.mul_mode())
            .finish()
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `m`, ascending.
pub(crate) fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Builds `F_{p^n}` with default options.
///
/// Without an explicit modulus the lexicographically smallest monic
/// irreducible of degree `n` is used, comparing coefficient vectors from the
/// constant term upwards.
pub fn make_field(p: u64, n: u32, modulus: Option<&[u32]>) -> Result<FieldContext, FieldError> {
    FieldContext::new(p, n, modulus, FieldOptions::default())
}

impl FieldContext {
    pub fn new(
        p: u64,
        n: u32,
        modulus: Option<&[u32]>,
        options: FieldOptions,
    ) -> Result<FieldContext, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(n).filter(|&q| q <= u32::MAX as u128);
        let q = match q {
            Some(q) if (n as usize) <= MAX_DEGREE => q as u32,
            _ => return Err(FieldError::TooLarge { p, n }),
        };
        let p = p as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 {
                    return Err(FieldError::DegreeMismatch { expected: n, found: m.len() });
                }
                if let Some((index, &value)) = m.iter().enumerate().find(|(_, &c)| c >= p) {
                    return Err(FieldError::CoefficientOutOfRange { index, value });
                }
                if m[n as usize] != 1 {
                    return Err(FieldError::NotMonic);
                }
                if !zp_poly::is_irreducible(m, p) {
                    return Err(FieldError::ReducibleModulus);
                }
                m.to_vec()
            }
            None => smallest_irreducible(p, n),
        };
        let spec = FieldSpec { p, n, modulus };
        let mut pow_p = Vec::with_capacity(n as usize);
        let mut acc = 1u32;
        for _ in 0..n {
            pow_p.push(acc);
            acc = acc.wrapping_mul(p);
        }
        let mut ctx = FieldContext { spec, q, pow_p, frobenius: Vec::new(), tables: None };
        ctx.frobenius = ctx.build_frobenius();
        if (q as u64) <= options.log_table_cap {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    fn build_frobenius(&self) -> Vec<Vec<Elem>> {
        let n = self.spec.n as usize;
        let mut out = Vec::with_capacity(n);
        let basis: Vec<Elem> = (0..n).map(|j| Elem(self.pow_p[j])).collect();
        let mut current = basis.clone();
        for _ in 0..n {
            out.push(current.clone());
            current = current.iter().map(|&b| self.pow_direct(b, self.spec.p as u64)).collect();
        }
        out
    }

    fn build_tables(&self) -> LogTables {
        let q1 = (self.q - 1) as u64;
        let generator = self.find_generator();
        let mut exp = Vec::with_capacity(q1 as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = Elem::ONE;
        for i in 0..q1 {
            exp.push(x.0);
            log[x.index()] = i as u32;
            x = self.mul_direct(x, generator);
        }
        let zech = exp
            .iter()
            .map(|&e| {
                let s = self.add_digitwise(Elem::ONE, Elem(e));
                if s.is_zero() {
                    NO_ZECH
                } else {
                    log[s.index()]
                }
            })
            .collect();
        LogTables { generator, exp, log, zech }
    }

    fn find_generator(&self) -> Elem {
        let q1 = (self.q - 1) as u64;
        let factors = prime_factors(q1);
        (1..self.q)
            .map(Elem)
            .find(|&x| factors.iter().all(|&r| self.pow_direct(x, q1 / r) != Elem::ONE))
            .expect("multiplicative group of a finite field is cyclic")
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.spec.n
    }

    pub fn mul_mode(&self) -> MulMode {
        if self.tables.is_some() {
            MulMode::LogTable
        } else {
            MulMode::Direct
        }
    }

    /// The primitive element behind the log tables, if they were built.
    pub fn generator(&self) -> Option<Elem> {
        self.tables.as_ref().map(|t| t.generator)
    }

    /// Discrete log base [`generator`](Self::generator) of a nonzero element.
    pub fn log(&self, x: Elem) -> Option<u32> {
        match &self.tables {
            Some(t) if !x.is_zero() => Some(t.log[x.index()]),
            _ => None,
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(Elem)
    }

    /// The residue class of the indeterminate modulo the defining polynomial.
    pub fn indeterminate(&self) -> Elem {
        if self.spec.n >= 2 {
            Elem(self.spec.p)
        } else {
            let c0 = self.spec.modulus[0];
            Elem((self.spec.p - c0) % self.spec.p)
        }
    }

    /// Embeds an integer into the prime field.
    pub fn from_int(&self, k: u64) -> Elem {
        Elem((k % self.spec.p as u64) as u32)
    }

    pub fn coords(&self, x: Elem) -> Vec<u32> {
        let mut d = [0u32; MAX_DEGREE];
        self.digits(x, &mut d);
        d[..self.spec.n as usize].to_vec()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Elem, FieldError> {
        if coords.len() != self.spec.n as usize || coords.iter().any(|&c| c >= self.spec.p) {
            return Err(FieldError::BadCoordinates);
        }
        Ok(self.pack_digits(coords))
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.q
    }

    #[inline]
    fn digits(&self, mut x: Elem, out: &mut [u32; MAX_DEGREE]) {
        let p = self.spec.p;
        for d in out.iter_mut().take(self.spec.n as usize) {
            *d = x.0 % p;
            x.0 /= p;
        }
    }

    #[inline]
    fn pack_digits(&self, d: &[u32]) -> Elem {
        Elem(d.iter().zip(&self.pow_p).map(|(&c, &w)| c * w).sum())
    }

    fn add_digitwise(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut a, mut b) = (a.0, b.0);
        let mut out = 0u32;
        for &w in &self.pow_p {
            out += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.spec.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        match &self.tables {
            Some(t) => {
                if a.is_zero() {
                    return b;
                }
                if b.is_zero() {
                    return a;
                }
                let q1 = self.q - 1;
                let la = t.log[a.index()];
                let lb = t.log[b.index()];
                let diff = if lb >= la { lb - la } else { lb + q1 - la };
                let z = t.zech[diff as usize];
                if z == NO_ZECH {
                    Elem::ZERO
                } else {
                    Elem(t.exp[((la as u64 + z as u64) % q1 as u64) as usize])
                }
            }
            None => self.add_digitwise(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 || a.is_zero() {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let q1 = (self.q - 1) as u64;
                let l = t.log[a.index()] as u64 + q1 / 2;
                Elem(t.exp[(l % q1) as usize])
            }
            None => {
                let mut x = a.0;
                let mut out = 0u32;
                for &w in &self.pow_p {
                    out += ((p - x % p) % p) * w;
                    x /= p;
                }
                Elem(out)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let q1 = self.q - 1;
                let s = t.log[a.index()] + t.log[b.index()];
                let s = if s >= q1 { s - q1 } else { s };
                Elem(t.exp[s as usize])
            }
            None => self.mul_direct(a, b),
        }
    }

    /// Schoolbook multiplication with reduction by the modulus; never uses
    /// the log tables.
    pub fn mul_direct(&self, a: Elem, b: Elem) -> Elem {
        let n = self.spec.n as usize;
        let p = self.spec.p as u64;
        let mut da = [0u32; MAX_DEGREE];
        let mut db = [0u32; MAX_DEGREE];
        self.digits(a, &mut da);
        self.digits(b, &mut db);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if da[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        let m = &self.spec.modulus;
        for k in (n..2 * n - 1).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let sub = top * m[i] as u64 % p;
                prod[k - n + i] = (prod[k - n + i] + p - sub) % p;
            }
        }
        let mut out = [0u32; MAX_DEGREE];
        for i in 0..n {
            out[i] = prod[i] as u32;
        }
        self.pack_digits(&out[..n])
    }

    fn pow_direct(&self, x: Elem, mut e: u64) -> Elem {
        let mut base = x;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_direct(acc, base);
            }
            base = self.mul_direct(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x^e` with `0^0 = 1`.
    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if x.is_zero() {
            return Elem::ZERO;
        }
        let q1 = (self.q - 1) as u64;
        let e = e % q1;
        match &self.tables {
            Some(t) => {
                let l = t.log[x.index()] as u64 * e % q1;
                Elem(t.exp[l as usize])
            }
            None => self.pow_direct(x, e),
        }
    }

    /// `x^e` for exponents beyond `u64`, given as a `u128`.
    pub fn pow_u128(&self, x: Elem, e: u128) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if x.is_zero() {
            return Elem::ZERO;
        }
        let q1 = (self.q - 1) as u128;
        let r = (e % q1) as u64;
        // r = 0 with e > 0 still means x^(q-1) = 1
        self.pow(x, r)
    }

    pub fn inv(&self, x: Elem) -> Option<Elem> {
        if x.is_zero() {
            return None;
        }
        let q1 = self.q - 1;
        Some(match &self.tables {
            Some(t) => Elem(t.exp[((q1 - t.log[x.index()]) % q1) as usize]),
            None => self.pow_direct(x, (q1 - 1) as u64),
        })
    }

    /// `a / b`, `None` when `b = 0`.
    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Multiplication of `x` by the prime-field scalar `k`, coordinate-wise.
    fn scale_digitwise(&self, k: u32, x: Elem) -> Elem {
        let p = self.spec.p;
        let mut d = [0u32; MAX_DEGREE];
        self.digits(x, &mut d);
        for v in d.iter_mut().take(self.spec.n as usize) {
            *v = *v * k % p;
        }
        self.pack_digits(&d[..self.spec.n as usize])
    }

    /// Applies `x -> x^(p^i)` through the precomputed Frobenius matrix.
    pub fn frobenius_by_matrix(&self, x: Elem, i: u32) -> Elem {
        let n = self.spec.n;
        let row = &self.frobenius[(i % n) as usize];
        let mut d = [0u32; MAX_DEGREE];
        self.digits(x, &mut d);
        let mut acc = Elem::ZERO;
        for (j, &img) in row.iter().enumerate() {
            if d[j] != 0 {
                acc = self.add_digitwise(acc, self.scale_digitwise(d[j], img));
            }
        }
        acc
    }

    /// `x^(p^i)`.
    pub fn frobenius(&self, x: Elem, i: u32) -> Elem {
        let i = i % self.spec.n;
        if i == 0 || x.is_zero() {
            return x;
        }
        match &self.tables {
            Some(t) => {
                let q1 = (self.q - 1) as u64;
                let mut e = 1u64;
                for _ in 0..i {
                    e = e * self.spec.p as u64 % q1;
                }
                Elem(t.exp[(t.log[x.index()] as u64 * e % q1) as usize])
            }
            None => self.frobenius_by_matrix(x, i),
        }
    }

    fn check_subfield(&self, sub_degree: u32) -> Result<(), FieldError> {
        if sub_degree == 0 || self.spec.n % sub_degree != 0 {
            return Err(FieldError::BadSubfieldDegree { degree: sub_degree, n: self.spec.n });
        }
        Ok(())
    }

    /// Order of the subfield of degree `sub_degree`.
    pub fn subfield_order(&self, sub_degree: u32) -> Result<u32, FieldError> {
        self.check_subfield(sub_degree)?;
        Ok(self.spec.p.pow(sub_degree))
    }

    /// `Tr(x) = x + x^{q0} + ... + x^{q0^{k-1}}` down to the subfield of order
    /// `q0 = p^sub_degree`.
    pub fn relative_trace(&self, sub_degree: u32, x: Elem) -> Result<Elem, FieldError> {
        self.check_subfield(sub_degree)?;
        let k = self.spec.n / sub_degree;
        Ok((0..k).fold(Elem::ZERO, |acc, i| self.add(acc, self.frobenius(x, i * sub_degree))))
    }

    /// `x^((q^n - 1)/(q0 - 1))`, the norm down to the subfield of order `q0`.
    pub fn relative_norm(&self, sub_degree: u32, x: Elem) -> Result<Elem, FieldError> {
        self.check_subfield(sub_degree)?;
        let q0 = self.spec.p.pow(sub_degree) as u64;
        Ok(self.pow(x, (self.q as u64 - 1) / (q0 - 1)))
    }

    pub fn in_subfield(&self, x: Elem, sub_degree: u32) -> bool {
        self.spec.n % sub_degree.max(1) == 0 && self.frobenius(x, sub_degree) == x
    }

    /// Elements of the subfield of degree `sub_degree`, canonical order.
    pub fn subfield_elements(&self, sub_degree: u32) -> Result<Vec<Elem>, FieldError> {
        self.check_subfield(sub_degree)?;
        Ok(self.elements().filter(|&x| self.frobenius(x, sub_degree) == x).collect())
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: Elem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let mut ord = (self.q - 1) as u64;
        for r in prime_factors(ord) {
            while ord % r == 0 && self.pow(x, ord / r) == Elem::ONE {
                ord /= r;
            }
        }
        Some(ord)
    }

    /// Evaluates a polynomial with prime-field coefficients (low degree
    /// first) at `x`.
    pub fn eval_prime_poly(&self, coeffs: &[u32], x: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| self.add(self.mul(acc, x), self.from_int(c as u64)))
    }
}

fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    // Lexicographic order with the constant term as the most significant key.
    let total = (p as u64).pow(n);
    for i in 0..total {
        let mut coeffs = vec![0u32; n as usize + 1];
        let mut rest = i;
        for j in (0..n as usize).rev() {
            coeffs[j] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[n as usize] = 1;
        if zp_poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A fixed ring embedding `F_{p^m} -> F_{p^{mk}}`, sending the generator of
/// the smaller field to the smallest root of its modulus in the larger one.
#[derive(Clone, Debug)]
pub struct Embedding {
    sub: FieldSpec,
    sup: FieldSpec,
    root: Elem,
    basis_images: Vec<Elem>,
}

impl Embedding {
    pub fn new(sub: &FieldContext, sup: &FieldContext) -> Result<Embedding, FieldError> {
        let (ss, ps) = (sub.spec(), sup.spec());
        if ss.p != ps.p || ps.n % ss.n != 0 {
            return Err(FieldError::IncompatibleTower { sub: (ss.p, ss.n), sup: (ps.p, ps.n) });
        }
        let root = sup
            .elements()
            .find(|&y| sup.eval_prime_poly(&ss.modulus, y).is_zero())
            .expect("a subfield modulus always splits in the larger field");
        let mut basis_images = Vec::with_capacity(ss.n as usize);
        let mut acc = Elem::ONE;
        for _ in 0..ss.n {
            basis_images.push(acc);
            acc = sup.mul(acc, root);
        }
        Ok(Embedding { sub: ss.clone(), sup: ps.clone(), root, basis_images })
    }

    /// The chosen root of the smaller field's modulus.
    pub fn root(&self) -> Elem {
        self.root
    }

    pub fn sub_spec(&self) -> &FieldSpec {
        &self.sub
    }

    pub fn sup_spec(&self) -> &FieldSpec {
        &self.sup
    }

    /// `sub` and `sup` must be the contexts this embedding was built from.
    pub fn apply(&self, sub: &FieldContext, sup: &FieldContext, x: Elem) -> Elem {
        debug_assert_eq!(sub.spec(), &self.sub);
        debug_assert_eq!(sup.spec(), &self.sup);
        if self.sub.n == 1 {
            return sup.mul(Elem(x.0), self.basis_images[0]);
        }
        sub.coords(x)
            .iter()
            .zip(&self.basis_images)
            .filter(|(&c, _)| c != 0)
            .fold(Elem::ZERO, |acc, (&c, &img)| sup.add(acc, sup.mul(Elem(c), img)))
    }
}

/// One-shot embedding of `x` from `sub` into `sup`.
pub fn embed(sub: &FieldContext, sup: &FieldContext, x: Elem) -> Result<Elem, FieldError> {
    Ok(Embedding::new(sub, sup)?.apply(sub, sup, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64, n: u32) -> FieldContext {
        make_field(p, n, None).unwrap()
    }

    #[test]
    fn prime_field_has_modulus_x() {
        let k = f(3, 1);
        assert_eq!(k.spec().modulus(), &[0, 1]);
        assert_eq!(k.order(), 3);
        assert_eq!(k.add(Elem(2), Elem(2)), Elem(1));
        assert_eq!(k.mul(Elem(2), Elem(2)), Elem(1));
    }

    #[test]
    fn explicit_f8_modulus() {
        let k = make_field(2, 3, Some(&[1, 1, 0, 1])).unwrap();
        assert_eq!(k.order(), 8);
        // g^3 = g + 1
        let g = k.indeterminate();
        assert_eq!(k.pow(g, 3), Elem(0b011));
    }

    #[test]
    fn f8_modulus_irreducible_by_root_check() {
        // a cubic over F_2 is irreducible iff it has no root in F_2
        let m = [1u32, 1, 0, 1];
        let roots = (0..2u32).filter(|&x| (m[0] + m[1] * x + m[2] * x * x + m[3] * x * x * x) % 2 == 0);
        assert_eq!(roots.count(), 0);
        assert!(zp_poly::is_irreducible(&m, 2));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 2, None).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field(2, 0, None).unwrap_err(), FieldError::ZeroDegree);
        assert_eq!(
            make_field(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            FieldError::ReducibleModulus
        );
        assert!(matches!(
            make_field(2, 3, Some(&[1, 1, 1])).unwrap_err(),
            FieldError::DegreeMismatch { .. }
        ));
        assert_eq!(make_field(3, 2, Some(&[1, 0, 2])).unwrap_err(), FieldError::NotMonic);
        assert!(matches!(make_field(2, 40, None).unwrap_err(), FieldError::TooLarge { .. }));
    }

    #[test]
    fn default_modulus_is_lexicographically_smallest() {
        // degree 3 over F_2: x^3+x^2+1 = [1,0,1,1] < [1,1,0,1]
        assert_eq!(f(2, 3).spec().modulus(), &[1, 0, 1, 1]);
        // degree 2 over F_3: x^2+1 = [1,0,1]
        assert_eq!(f(3, 2).spec().modulus(), &[1, 0, 1]);
        assert_eq!(f(2, 2).spec().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn generator_is_primitive() {
        for (p, n) in [(2, 1), (2, 4), (3, 2), (3, 3), (5, 2), (7, 1), (2, 8)] {
            let k = f(p, n);
            let g = k.generator().unwrap();
            assert_eq!(k.element_order(g), Some(k.order() as u64 - 1));
        }
    }

    #[test]
    fn log_table_and_direct_agree_exhaustively_small() {
        for (p, n) in [(2, 4), (3, 3), (5, 2), (7, 2)] {
            let k = f(p, n);
            let direct = FieldContext::new(p, n, None, FieldOptions { log_table_cap: 0 }).unwrap();
            assert_eq!(direct.mul_mode(), MulMode::Direct);
            for a in k.elements() {
                for b in k.elements() {
                    assert_eq!(k.mul(a, b), direct.mul(a, b));
                    assert_eq!(k.add(a, b), direct.add(a, b));
                }
                assert_eq!(k.neg(a), direct.neg(a));
                assert_eq!(k.inv(a), direct.inv(a));
                assert_eq!(k.frobenius(a, 1), direct.frobenius(a, 1));
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, n) in [(2, 3), (3, 2), (5, 1), (2, 4), (3, 3)] {
            let k = f(p, n);
            for a in k.elements() {
                assert_eq!(k.add(a, Elem::ZERO), a);
                assert_eq!(k.mul(a, Elem::ONE), a);
                assert_eq!(k.add(a, k.neg(a)), Elem::ZERO);
                if let Some(ai) = k.inv(a) {
                    assert_eq!(k.mul(a, ai), Elem::ONE);
                }
                for b in k.elements() {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    for c in k.elements().step_by(3) {
                        assert_eq!(k.mul(a, k.mul(b, c)), k.mul(k.mul(a, b), c));
                        assert_eq!(k.add(a, k.add(b, c)), k.add(k.add(a, b), c));
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_additive_and_fixes_prime_field() {
        for (p, n) in [(2, 6), (3, 4), (5, 3), (2, 12), (3, 7)] {
            let k = f(p, n);
            let fixed: Vec<Elem> = k.elements().filter(|&x| k.frobenius(x, 1) == x).collect();
            assert_eq!(fixed, (0..p as u32).map(Elem).collect::<Vec<_>>());
            if k.order() <= 729 {
                for a in k.elements() {
                    for b in k.elements().step_by(7) {
                        assert_eq!(
                            k.frobenius(k.add(a, b), 1),
                            k.add(k.frobenius(a, 1), k.frobenius(b, 1))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_matrix_matches_power_map() {
        let k = f(3, 4);
        for x in k.elements() {
            for i in 0..4 {
                assert_eq!(k.frobenius_by_matrix(x, i), k.pow(x, 3u64.pow(i)));
            }
        }
    }

    #[test]
    fn pow_examples() {
        let k8 = f(2, 3);
        for x in k8.elements().skip(1) {
            assert_eq!(k8.pow(x, 7), Elem::ONE);
        }
        assert_eq!(k8.pow(Elem::ZERO, 0), Elem::ONE);
        let k9 = f(3, 2);
        for x in k9.elements() {
            assert_eq!(k9.pow(x, 3), k9.frobenius(x, 1));
        }
        // non-cube in F_27 (cubing is bijective there, so take a generator)
        let k27 = f(3, 3);
        let c = k27.generator().unwrap();
        let naive = (0..13).fold(Elem::ONE, |acc, _| k27.mul_direct(acc, c));
        assert_eq!(k27.pow(c, 13), naive);
        assert_eq!(k27.pow_u128(c, 13 + 26 * (1u128 << 80)), naive);
    }

    #[test]
    fn pow_reduces_exponent_mod_q_minus_one() {
        let k = f(5, 2);
        for x in k.elements().skip(1) {
            for e in [1u64, 24, 25, 49, 1_000_003] {
                assert_eq!(k.pow(x, e), k.pow(x, e % 24));
            }
        }
    }

    #[test]
    fn trace_examples() {
        let k9 = f(3, 2);
        assert_eq!(k9.relative_trace(1, Elem::ONE).unwrap(), Elem(2));
        let k8 = f(2, 3);
        let traces: Vec<Elem> = k8.elements().map(|x| k8.relative_trace(1, x).unwrap()).collect();
        assert_eq!(traces.iter().filter(|t| t.0 == 0).count(), 4);
        assert_eq!(traces.iter().filter(|t| t.0 == 1).count(), 4);
        let k64 = f(2, 6);
        for y in k64.elements() {
            let t = k64.relative_trace(2, y).unwrap();
            assert_eq!(k64.frobenius(t, 2), t);
        }
        assert_eq!(
            k64.relative_trace(4, Elem::ONE).unwrap_err(),
            FieldError::BadSubfieldDegree { degree: 4, n: 6 }
        );
    }

    #[test]
    fn trace_is_subfield_linear() {
        let k = f(3, 4);
        let sub = k.subfield_elements(2).unwrap();
        assert_eq!(sub.len(), 9);
        for &lam in &sub {
            for x in k.elements().step_by(5) {
                for y in k.elements().step_by(11) {
                    let lhs = k.relative_trace(2, k.add(k.mul(lam, x), y)).unwrap();
                    let rhs = k.add(
                        k.mul(lam, k.relative_trace(2, x).unwrap()),
                        k.relative_trace(2, y).unwrap(),
                    );
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let f3 = f(3, 1);
        let f9 = f(3, 2);
        assert_eq!(embed(&f3, &f9, Elem(2)).unwrap(), Elem(2));

        let f4 = f(2, 2);
        let f16 = f(2, 4);
        let omega = f4.indeterminate();
        let img = embed(&f4, &f16, omega).unwrap();
        let roots: Vec<Elem> = f16
            .elements()
            .filter(|&y| f16.add(f16.add(f16.mul(y, y), y), Elem::ONE).is_zero())
            .collect();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&img));

        let f8 = f(2, 3);
        assert!(matches!(embed(&f4, &f8, omega), Err(FieldError::IncompatibleTower { .. })));
    }

    #[test]
    fn embedding_is_homomorphism() {
        let f9 = f(3, 2);
        let f729 = f(3, 6);
        let e = Embedding::new(&f9, &f729).unwrap();
        for x in f9.elements() {
            for y in f9.elements() {
                let ex = e.apply(&f9, &f729, x);
                let ey = e.apply(&f9, &f729, y);
                assert_eq!(e.apply(&f9, &f729, f9.mul(x, y)), f729.mul(ex, ey));
                assert_eq!(e.apply(&f9, &f729, f9.add(x, y)), f729.add(ex, ey));
            }
        }
    }

    #[test]
    fn three_level_tower_composes() {
        let f2 = f(2, 1);
        let f4 = f(2, 2);
        let f16 = f(2, 4);
        let a = Embedding::new(&f2, &f4).unwrap();
        let b = Embedding::new(&f4, &f16).unwrap();
        let direct = Embedding::new(&f2, &f16).unwrap();
        for x in f2.elements() {
            assert_eq!(b.apply(&f4, &f16, a.apply(&f2, &f4, x)), direct.apply(&f2, &f16, x));
        }
    }

    #[test]
    fn coords_roundtrip() {
        let k = f(5, 3);
        for x in k.elements().step_by(13) {
            assert_eq!(k.from_coords(&k.coords(x)).unwrap(), x);
        }
        assert_eq!(k.from_coords(&[5, 0, 0]).unwrap_err(), FieldError::BadCoordinates);
    }

    proptest! {
        #[test]
        fn sampled_axioms_large_field(a in 0u32..59049, b in 0u32..59049, c in 0u32..59049) {
            let k = large_field();
            let (a, b, c) = (Elem(a), Elem(b), Elem(c));
            prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
            prop_assert_eq!(k.mul(a, b), k.mul_direct(a, b));
            if let Some(ai) = k.inv(a) {
                prop_assert_eq!(k.mul(ai, a), Elem::ONE);
            }
        }
    }

    fn large_field() -> &'static FieldContext {
        extern crate std;
        static CELL: std::sync::OnceLock<FieldContext> = std::sync::OnceLock::new();
        CELL.get_or_init(|| f(3, 10))
    }
}
