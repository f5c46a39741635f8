//! Arithmetic in the finite field `F_q`, `q = p^e`.
//!
//! A field is identified by `(p, e)` together with a deterministic defining
//! modulus: the lexicographically least monic irreducible polynomial of degree
//! `e` over `F_p`, comparing coefficients from the constant term upward. An
//! element is the residue vector of its coordinates with respect to
//! `1, g, ..., g^(e-1)`, where `g` is the class of the modulus variable.
//!
//! [`FqElem`] packs that residue vector into a single base-`p` integer
//! (`code = c_0 + c_1 p + ... + c_(e-1) p^(e-1)`), so elements are `Copy` and
//! the integers `0..q` enumerate the field. Extension fields keep discrete
//! log tables for multiplication; the tables are derived from, and tested
//! against, plain polynomial arithmetic modulo the defining polynomial.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_EXTENSION_DEGREE: u32 = 8;
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// An element of `F_q`, stored as the packed base-`p` coordinate vector.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    /// Packed coordinate code in `0..q`.
    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

struct LogTables {
    log: Vec<u32>,
    /// `exp[i] = gen^i` for `0 <= i < 2(q-1)`, so sums of two logs index directly.
    exp: Vec<u32>,
}

struct FieldInner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<LogTables>,
}

/// Description of `F_q`. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldDesc {
    inner: Arc<FieldInner>,
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.e == other.inner.e)
    }
}

impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, increasing.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q` as `p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut e = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        e += 1;
    }
    Some((p as u32, e))
}

// Dense polynomials over F_p as coefficient vectors, constant first. Used only
// while constructing a field (modulus search, table generation, inversion).
mod small {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        // extended Euclid on integers
        let (mut r0, mut r1) = (p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quo = r0 / r1;
            (r0, r1) = (r1, r0 - quo * r1);
            (t0, t1) = (t1, t0 - quo * t1);
        }
        debug_assert_eq!(r0, 1);
        t0.rem_euclid(p as i64) as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u64 * lead_inv) % p as u64;
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c * mi as u64) % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Quotient and remainder.
    pub fn divrem(a: &[u32], m: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        if r.len() <= dm {
            return (Vec::new(), r);
        }
        let mut quo = vec![0u32; r.len() - dm];
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u64 * lead_inv) % p as u64;
            let shift = top - dm;
            quo[shift] = c as u32;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c * mi as u64) % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        trim(&mut quo);
        (quo, r)
    }

    /// Monic polynomial of degree `d` with lower coefficients given by the
    /// base-`p` digits of `idx` (constant digit least significant).
    pub fn monic_from_index(mut idx: u64, d: usize, p: u32) -> Vec<u32> {
        let mut c = vec![0u32; d + 1];
        for slot in c.iter_mut().take(d) {
            *slot = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        c[d] = 1;
        c
    }

    /// Irreducibility over F_p by trial division with every monic polynomial
    /// of degree `1..=deg/2`.
    pub fn is_irreducible_exhaustive(f: &[u32], p: u32) -> bool {
        let d = f.len() - 1;
        for dd in 1..=d / 2 {
            let count = (p as u64).pow(dd as u32);
            for idx in 0..count {
                let g = monic_from_index(idx, dd, p);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FieldDesc {
    /// Builds `F_{p^e}` with its deterministic modulus.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 || e > MAX_EXTENSION_DEGREE {
            return Err(Error::InvalidField(format!(
                "extension degree {e} outside 1..={MAX_EXTENSION_DEGREE}"
            )));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or_else(|| {
                Error::InvalidField(format!("{p}^{e} exceeds the field size bound 2^20"))
            })?;
        let modulus = find_modulus(p, e);
        let tables = (e > 1).then(|| build_tables(p, e, q as u32, &modulus));
        Ok(FieldDesc {
            inner: Arc::new(FieldInner {
                p,
                e,
                q: q as u32,
                modulus,
                tables,
            }),
        })
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, e)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.e
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Coefficients `[c_0, ..., c_e]` of the defining modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.e == 1
    }

    /// The element with packed code `code`.
    pub fn elem(&self, code: u32) -> Result<FqElem> {
        if code >= self.inner.q {
            return Err(Error::Malformed(format!(
                "element code {code} out of range for F_{}",
                self.inner.q
            )));
        }
        Ok(FqElem(code))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.inner.q).map(FqElem)
    }

    pub fn units(&self) -> impl Iterator<Item = FqElem> {
        (1..self.inner.q).map(FqElem)
    }

    /// The class `g` of the modulus variable. In a prime field the modulus is
    /// `T` itself, so this is zero.
    pub fn generator(&self) -> FqElem {
        if self.inner.e == 1 {
            FqElem(0)
        } else {
            FqElem(self.inner.p)
        }
    }

    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        let p = self.inner.p;
        let mut c = a.0;
        (0..self.inner.e)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<FqElem> {
        if coords.len() != self.inner.e as usize {
            return Err(Error::Malformed(format!(
                "expected {} coordinates, got {}",
                self.inner.e,
                coords.len()
            )));
        }
        let p = self.inner.p;
        let mut code = 0u32;
        for &c in coords.iter().rev() {
            if c >= p {
                return Err(Error::Malformed(format!("coordinate {c} not reduced mod {p}")));
            }
            code = code * p + c;
        }
        Ok(FqElem(code))
    }

    /// Image of an integer in the prime subfield.
    #[inline]
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.inner.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.inner.p;
        if self.inner.e == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return FqElem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        while x != 0 || y != 0 {
            let s = (x % p + y % p) % p;
            out += s * place;
            place *= p;
            x /= p;
            y /= p;
        }
        FqElem(out)
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        if self.inner.e == 1 {
            return FqElem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        while x != 0 {
            out += ((p - x % p) % p) * place;
            place *= p;
            x /= p;
        }
        FqElem(out)
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        match &self.inner.tables {
            None => FqElem(((a.0 as u64 * b.0 as u64) % self.inner.p as u64) as u32),
            Some(t) => FqElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
        }
    }

    /// Multiplicative inverse via extended Euclid on polynomial representatives.
    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.inner.p;
        if self.inner.e == 1 {
            return Ok(FqElem(small::inv_mod(a.0, p)));
        }
        let mut r0 = self.inner.modulus.clone();
        let mut r1 = self.coords(a);
        small::trim(&mut r1);
        let mut t0: Vec<u32> = Vec::new();
        let mut t1: Vec<u32> = vec![1];
        while !r1.is_empty() {
            let (quo, rem) = small::divrem(&r0, &r1, p);
            let t2 = small::sub(&t0, &small::mul(&quo, &t1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            t0 = std::mem::replace(&mut t1, t2);
        }
        // r0 is a nonzero constant c; the inverse is t0 / c
        let c_inv = small::inv_mod(r0[0], p) as u64;
        let mut coords: Vec<u32> = t0
            .iter()
            .map(|&t| ((t as u64 * c_inv) % p as u64) as u32)
            .collect();
        coords.resize(self.inner.e as usize, 0);
        self.from_coords(&coords)
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, n: u64) -> FqElem {
        if n == 0 {
            return FqElem::ONE;
        }
        if a.is_zero() {
            return FqElem::ZERO;
        }
        let qm1 = (self.inner.q - 1) as u64;
        match &self.inner.tables {
            Some(t) => {
                let l = (t.log[a.0 as usize] as u64 * (n % qm1)) % qm1;
                FqElem(t.exp[l as usize])
            }
            None => {
                let p = self.inner.p as u64;
                let mut base = a.0 as u64;
                let mut n = n;
                let mut acc = 1u64;
                while n > 0 {
                    if n & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    n >>= 1;
                }
                FqElem(acc as u32)
            }
        }
    }

    /// Multiplication by polynomial arithmetic modulo the defining modulus,
    /// bypassing the log tables.
    pub fn mul_reference(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.inner.p;
        if self.inner.e == 1 {
            return FqElem(((a.0 as u64 * b.0 as u64) % p as u64) as u32);
        }
        let prod = small::mul(&self.coords(a), &self.coords(b), p);
        let mut r = small::rem(&prod, &self.inner.modulus, p);
        r.resize(self.inner.e as usize, 0);
        self.from_coords(&r).expect("reduced coordinates")
    }

    /// Renders an element as a polynomial in `g` (prime fields: a decimal residue).
    pub fn format_elem(&self, a: FqElem) -> String {
        if self.inner.e == 1 {
            return a.0.to_string();
        }
        let coords = self.coords(a);
        let mut terms = Vec::new();
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "g".to_string(),
                (1, _) => format!("{c}*g"),
                (_, 1) => format!("g^{i}"),
                _ => format!("{c}*g^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

/// `sum_{a in F_q^x} a^m`, by direct summation.
pub fn units_power_sum(field: &FieldDesc, m: u64) -> FqElem {
    field
        .units()
        .fold(FqElem::ZERO, |acc, a| field.add(acc, field.pow(a, m)))
}

fn find_modulus(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    let e = e as usize;
    let count = (p as u64).pow(e as u32);
    // Lexicographic order with c_0 compared first: c_0 is the most significant digit.
    for idx in 0..count {
        let mut c = vec![0u32; e + 1];
        let mut rest = idx;
        for j in (0..e).rev() {
            c[j] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        c[e] = 1;
        if c[0] != 0 && small::is_irreducible_exhaustive(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build_tables(p: u32, e: u32, q: u32, modulus: &[u32]) -> LogTables {
    let e = e as usize;
    let qm1 = (q - 1) as u64;
    let factors = prime_factors(qm1);
    let to_coords = |code: u32| -> Vec<u32> {
        let mut c = code;
        let mut v: Vec<u32> = (0..e)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect();
        small::trim(&mut v);
        v
    };
    let to_code = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &d| acc * p + d) };
    let mulmod = |a: &[u32], b: &[u32]| small::rem(&small::mul(a, b, p), modulus, p);
    let powmod = |a: &[u32], mut n: u64| {
        let mut acc = vec![1u32];
        let mut base = a.to_vec();
        while n > 0 {
            if n & 1 == 1 {
                acc = mulmod(&acc, &base);
            }
            base = mulmod(&base, &base);
            n >>= 1;
        }
        acc
    };
    let gen = (2..q)
        .map(to_coords)
        .find(|c| factors.iter().all(|&r| powmod(c, qm1 / r) != vec![1u32]))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; 2 * qm1 as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = vec![1u32];
    for i in 0..qm1 as usize {
        let code = to_code(&cur);
        exp[i] = code;
        exp[i + qm1 as usize] = code;
        log[code as usize] = i as u32;
        cur = mulmod(&cur, &gen);
    }
    LogTables { log, exp }
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    p: u32,
    e: u32,
    modulus: Vec<u32>,
}

impl Serialize for FieldDesc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldRepr {
            p: self.inner.p,
            e: self.inner.e,
            modulus: self.inner.modulus.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldDesc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FieldRepr::deserialize(d)?;
        let field = FieldDesc::new(repr.p, repr.e).map_err(serde::de::Error::custom)?;
        if field.modulus() != repr.modulus.as_slice() {
            return Err(serde::de::Error::custom(format!(
                "modulus {:?} is not the canonical modulus {:?}",
                repr.modulus,
                field.modulus()
            )));
        }
        Ok(field)
    }
}
