//! Arithmetic in finite fields `F_{p^k}`.
//!
//! A field is fixed by its characteristic `p`, degree `k` and a monic
//! irreducible modulus of degree `k` over `F_p`. The modulus is always the
//! lexicographically smallest one, comparing coefficients from the constant
//! term upwards, so that a given `(p, k)` names the same concrete field in
//! every run.
//!
//! Elements are dense coefficient vectors packed into a single integer,
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. For small fields (`q^2 <= 2^16`)
//! addition and multiplication go through tables built once per field.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order whose elements we can represent.
pub const MAX_ORDER: u64 = 1 << 31;

const TABLE_MAX_ORDER: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field {p}^{k} is too large to represent")]
    DegreeTooLarge { p: u64, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{from} is not a subfield of {to}")]
    NotASubfield { from: String, to: String },
    #[error("invalid element coefficients for field {0}")]
    InvalidElement(String),
}

/// An element of some `F_{p^k}`.
///
/// The element remembers which `(p, k)` it belongs to so that mixing fields is
/// caught, but all arithmetic goes through the owning [`FieldSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GFElem {
    tag: u64,
    value: u32,
}

impl GFElem {
    /// Packed coefficient index in `0..q`.
    pub fn index(self) -> u32 {
        self.value
    }
}

fn field_tag(p: u32, k: u32) -> u64 {
    (u64::from(p) << 8) | u64::from(k)
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

/// A concrete finite field `F_{p^k}` with its canonical modulus.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tag: u64,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds the canonical field of order `p^k`.
pub fn make_field(p: u64, k: u32) -> Result<FieldSpec, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if k == 0 {
        return Err(GfError::DegreeTooLarge { p, k });
    }
    let q = p
        .checked_pow(k)
        .filter(|&q| q <= MAX_ORDER)
        .ok_or(GfError::DegreeTooLarge { p, k })?;
    let p32 = p as u32;
    let modulus = canonical_modulus(p32, k);
    let mut field = FieldSpec {
        p: p32,
        k,
        q: q as u32,
        modulus,
        tag: field_tag(p32, k),
        tables: None,
    };
    if field.q <= TABLE_MAX_ORDER {
        field.tables = Some(Arc::new(field.build_tables()));
    }
    Ok(field)
}

/// Parses a field name of the form `p^k`, or a bare order `q` which is
/// split into `p^k` when it is a prime power.
pub fn parse_field_name(name: &str) -> Option<(u64, u32)> {
    let name = name.trim();
    match name.split_once('^') {
        Some((p, k)) => Some((p.trim().parse().ok()?, k.trim().parse().ok()?)),
        None => {
            let q: u64 = name.parse().ok()?;
            Some(split_prime_power(q).unwrap_or((q, 1)))
        }
    }
}

fn split_prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first; length `k + 1`, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `"p^k"`.
    pub fn name(&self) -> String {
        format!("{}^{}", self.p, self.k)
    }

    pub fn modulus_string(&self) -> String {
        poly_to_string(&self.modulus)
    }

    /// True when `q` exceeds an enumeration ceiling. Arithmetic still works.
    pub fn exceeds(&self, ceiling: u64) -> bool {
        u64::from(self.q) > ceiling
    }

    pub fn contains(&self, x: GFElem) -> bool {
        x.tag == self.tag && x.value < self.q
    }

    fn wrap(&self, value: u32) -> GFElem {
        GFElem {
            tag: self.tag,
            value,
        }
    }

    pub fn zero(&self) -> GFElem {
        self.wrap(0)
    }

    pub fn one(&self) -> GFElem {
        self.wrap(1)
    }

    /// The class of `x` in the field, i.e. the root of the modulus.
    /// For prime fields the modulus is `x` itself, so this is zero.
    pub fn generator(&self) -> GFElem {
        if self.k == 1 {
            self.zero()
        } else {
            self.wrap(self.p)
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> GFElem {
        self.wrap(n.rem_euclid(i64::from(self.p)) as u32)
    }

    pub fn from_index(&self, index: u32) -> Result<GFElem, GfError> {
        if index < self.q {
            Ok(self.wrap(index))
        } else {
            Err(GfError::InvalidElement(self.name()))
        }
    }

    /// Element from its coefficient vector (constant term first).
    pub fn elem(&self, coeffs: &[u32]) -> Result<GFElem, GfError> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(GfError::InvalidElement(self.name()));
        }
        Ok(self.wrap(self.encode(coeffs)))
    }

    pub fn coeffs(&self, x: GFElem) -> Vec<u32> {
        self.decode(x.value)
    }

    /// All elements in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = GFElem> + '_ {
        (0..self.q).map(move |v| self.wrap(v))
    }

    fn decode(&self, mut v: u32) -> Vec<u32> {
        let mut out = vec![0; self.k as usize];
        for c in out.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
        out
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for x in 0..self.q {
            for y in 0..self.q {
                let i = x as usize * q + y as usize;
                add[i] = self.add_slow(x, y);
                mul[i] = self.mul_slow(x, y);
            }
        }
        Tables { add, mul }
    }

    fn add_slow(&self, x: u32, y: u32) -> u32 {
        if self.k == 1 {
            return ((u64::from(x) + u64::from(y)) % u64::from(self.p)) as u32;
        }
        let (a, b) = (self.decode(x), self.decode(y));
        let sum: Vec<u32> = a.iter().zip(&b).map(|(s, t)| (s + t) % self.p).collect();
        self.encode(&sum)
    }

    fn mul_slow(&self, x: u32, y: u32) -> u32 {
        if self.k == 1 {
            return ((u64::from(x) * u64::from(y)) % u64::from(self.p)) as u32;
        }
        let prod = poly_mul(&self.decode(x), &self.decode(y), self.p);
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.k as usize, 0);
        self.encode(&r)
    }

    #[inline]
    pub fn add(&self, x: GFElem, y: GFElem) -> GFElem {
        debug_assert!(self.contains(x) && self.contains(y));
        match &self.tables {
            Some(t) => self.wrap(t.add[(x.value * self.q + y.value) as usize]),
            None => self.wrap(self.add_slow(x.value, y.value)),
        }
    }

    #[inline]
    pub fn mul(&self, x: GFElem, y: GFElem) -> GFElem {
        debug_assert!(self.contains(x) && self.contains(y));
        match &self.tables {
            Some(t) => self.wrap(t.mul[(x.value * self.q + y.value) as usize]),
            None => self.wrap(self.mul_slow(x.value, y.value)),
        }
    }

    pub fn neg(&self, x: GFElem) -> GFElem {
        debug_assert!(self.contains(x));
        let c: Vec<u32> = self
            .decode(x.value)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        self.wrap(self.encode(&c))
    }

    pub fn sub(&self, x: GFElem, y: GFElem) -> GFElem {
        self.add(x, self.neg(y))
    }

    pub fn pow(&self, x: GFElem, mut e: u64) -> GFElem {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: GFElem) -> Result<GFElem, GfError> {
        if !self.contains(x) {
            return Err(GfError::FieldMismatch);
        }
        if x.value == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(x, u64::from(self.q) - 2))
    }

    pub fn try_add(&self, x: GFElem, y: GFElem) -> Result<GFElem, GfError> {
        self.check(x, y)?;
        Ok(self.add(x, y))
    }

    pub fn try_mul(&self, x: GFElem, y: GFElem) -> Result<GFElem, GfError> {
        self.check(x, y)?;
        Ok(self.mul(x, y))
    }

    pub fn try_neg(&self, x: GFElem) -> Result<GFElem, GfError> {
        self.check(x, x)?;
        Ok(self.neg(x))
    }

    fn check(&self, x: GFElem, y: GFElem) -> Result<(), GfError> {
        if self.contains(x) && self.contains(y) {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    /// `x^p`.
    pub fn frobenius(&self, x: GFElem) -> GFElem {
        if self.k == 1 {
            return x;
        }
        self.pow(x, u64::from(self.p))
    }

    pub fn frobenius_iter(&self, x: GFElem, times: u32) -> GFElem {
        (0..times).fold(x, |acc, _| self.frobenius(acc))
    }

    /// Degree over `F_p` of the subfield generated by `xs`.
    pub fn subfield_degree(&self, xs: &[GFElem]) -> u32 {
        divisors(self.k)
            .into_iter()
            .find(|&d| xs.iter().all(|&x| self.frobenius_iter(x, d) == x))
            .unwrap_or(self.k)
    }

    /// Compares two elements by coefficient vector, constant term first.
    pub fn lex_cmp(&self, x: GFElem, y: GFElem) -> Ordering {
        self.decode(x.value).cmp(&self.decode(y.value))
    }

    pub fn format(&self, x: GFElem) -> String {
        poly_to_string(&self.decode(x.value))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.name())
    }
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Ring embedding `F_{p^d} -> F_{p^k}` for `d | k`.
#[derive(Debug, Clone)]
pub struct Embedding {
    from: FieldSpec,
    to: FieldSpec,
    root_powers: Vec<GFElem>,
}

impl Embedding {
    /// The small field's generator goes to the root of its modulus in the
    /// large field that is minimal in coefficient-lexicographic order.
    pub fn new(from: &FieldSpec, to: &FieldSpec) -> Result<Self, GfError> {
        if from.p != to.p || to.k % from.k != 0 {
            return Err(GfError::NotASubfield {
                from: from.name(),
                to: to.name(),
            });
        }
        let root = if from.k == 1 {
            to.zero()
        } else {
            let lifted: Vec<GFElem> = from.modulus.iter().map(|&c| to.wrap(c)).collect();
            to.elements()
                .filter(|&r| {
                    let value = lifted
                        .iter()
                        .rev()
                        .fold(to.zero(), |acc, &c| to.add(to.mul(acc, r), c));
                    value == to.zero()
                })
                .min_by(|&a, &b| to.lex_cmp(a, b))
                .expect("an irreducible polynomial of degree d splits in F_{p^k} when d | k")
        };
        let mut root_powers = Vec::with_capacity(from.k as usize);
        let mut acc = to.one();
        for _ in 0..from.k {
            root_powers.push(acc);
            acc = to.mul(acc, root);
        }
        Ok(Embedding {
            from: from.clone(),
            to: to.clone(),
            root_powers,
        })
    }

    pub fn apply(&self, x: GFElem) -> GFElem {
        debug_assert!(self.from.contains(x));
        self.from
            .decode(x.value)
            .iter()
            .zip(&self.root_powers)
            .fold(self.to.zero(), |acc, (&c, &r)| {
                self.to.add(acc, self.to.mul(self.to.wrap(c), r))
            })
    }

    pub fn source(&self) -> &FieldSpec {
        &self.from
    }

    pub fn target(&self) -> &FieldSpec {
        &self.to
    }
}

pub fn embed(x: GFElem, from: &FieldSpec, to: &FieldSpec) -> Result<GFElem, GfError> {
    if !from.contains(x) {
        return Err(GfError::FieldMismatch);
    }
    Ok(Embedding::new(from, to)?.apply(x))
}

/// Serializable description of a field, as it appears in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub name: String,
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub modulus: String,
}

impl From<&FieldSpec> for FieldInfo {
    fn from(f: &FieldSpec) -> Self {
        FieldInfo {
            name: f.name(),
            p: f.p,
            k: f.k,
            q: f.q,
            modulus: f.modulus_string(),
        }
    }
}

// Polynomials over F_p as coefficient vectors, constant term first.

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = u64::from(p);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + u64::from(x) * u64::from(y)) % p64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

fn inv_mod_p(x: u32, p: u32) -> u32 {
    let (mut acc, mut base, mut e) = (1u64, u64::from(x), u64::from(p) - 2);
    let p64 = u64::from(p);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo a nonzero polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = u64::from(inv_mod_p(m[dm], p));
    let p64 = u64::from(p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = u64::from(*r.last().unwrap()) * lead_inv % p64;
        for (i, &c) in m.iter().enumerate() {
            let sub = factor * u64::from(c) % p64;
            r[shift + i] = ((u64::from(r[shift + i]) + p64 - sub) % p64) as u32;
        }
        trim(&mut r);
    }
    r
}

/// Monic polynomials of degree `d` in coefficient-lexicographic order.
fn monic_polys(p: u32, d: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = u64::from(p).pow(d);
    (0..count).map(move |n| {
        // Constant term is the most significant digit of the counter.
        let mut coeffs = vec![0u32; d as usize + 1];
        let mut n = n;
        for i in (0..d as usize).rev() {
            coeffs[i] = (n % u64::from(p)) as u32;
            n /= u64::from(p);
        }
        coeffs[d as usize] = 1;
        coeffs
    })
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = (f.len() - 1) as u32;
    if k <= 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    (1..=k / 2).all(|d| monic_polys(p, d).all(|g| !poly_rem(f, &g, p).is_empty()))
}

fn canonical_modulus(p: u32, k: u32) -> Vec<u32> {
    monic_polys(p, k)
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn poly_to_string(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}
