//! Dense polynomials over `F_q` and enumeration of monic and monic
//! irreducible polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{prime_factors, FieldDesc, FqElem};

/// A polynomial in `T` with coefficients in `F_q`, constant term first and no
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldDesc,
    coeffs: Vec<FqElem>,
}

impl Poly {
    pub fn new(field: &FieldDesc, mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &FieldDesc) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &FieldDesc) -> Poly {
        Poly::constant(field, FqElem::ONE)
    }

    pub fn constant(field: &FieldDesc, c: FqElem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The variable `T`.
    pub fn t(field: &FieldDesc) -> Poly {
        Poly::monomial(field, FqElem::ONE, 1)
    }

    /// `c * T^n`.
    pub fn monomial(field: &FieldDesc, c: FqElem, n: usize) -> Poly {
        let mut coeffs = vec![FqElem::ZERO; n + 1];
        coeffs[n] = c;
        Poly::new(field, coeffs)
    }

    /// Builds a polynomial over a prime field from integer coefficients.
    pub fn from_ints(field: &FieldDesc, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    #[inline]
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lead(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    fn check_field(&self, other: &Poly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn scale(&self, c: FqElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplies by `T^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![FqElem::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly::new(&self.field, coeffs)
    }

    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&c) if c.is_one() => self.clone(),
            Some(&c) => self.scale(self.field.inv(c).expect("nonzero leading coefficient")),
        }
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor);
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.lead())?;
        let mut r = self.coeffs.clone();
        let mut quo = vec![FqElem::ZERO; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = f.mul(r[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            let shift = top - dd;
            quo[shift] = c;
            for (i, &di) in divisor.coeffs.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, di));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f, quo), Poly::new(f, r)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact division; errors if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^n mod modulus`.
    pub fn powmod(&self, mut n: u64, modulus: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(&self.field).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = (&acc * &base).rem(modulus)?;
            }
            n >>= 1;
            if n > 0 {
                base = (&base * &base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// Rabin's test: `F` of degree `d` is irreducible iff `T^(q^d) = T mod F`
    /// and `gcd(T^(q^(d/r)) - T, F) = 1` for every prime `r | d`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let d = match self.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            Some(d) => d,
        };
        if d == 1 {
            return Ok(true);
        }
        let q = self.field.order() as u64;
        let t = Poly::t(&self.field).rem(self)?;
        // frob[i] = T^(q^i) mod F
        let mut frob = Vec::with_capacity(d + 1);
        frob.push(t.clone());
        for i in 1..=d {
            let next = frob[i - 1].powmod(q, self)?;
            frob.push(next);
        }
        if frob[d] != t {
            return Ok(false);
        }
        for r in prime_factors(d as u64) {
            let h = &frob[d / r as usize] - &t;
            if !h.gcd(self).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Evaluates the polynomial at another polynomial (Horner).
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.check_field(inner);
        let mut acc = Poly::zero(&self.field);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(&self.field, c);
        }
        acc
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Text form with a chosen variable name, highest degree first.
    pub fn format_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = f.format_elem(c);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let term = if i == 0 {
                cs
            } else if c.is_one() {
                mono
            } else if cs.contains('+') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            terms.push(term);
        }
        terms.join("+")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("T"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", self, self.field)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            f,
            (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            f,
            (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }
}

/// Number of monic polynomials of degree `d`, `q^d`, or `None` on overflow.
pub fn monic_count(field: &FieldDesc, d: usize) -> Option<u64> {
    (field.order() as u64).checked_pow(d as u32)
}

/// The monic polynomial of degree `d` whose lower coefficients are the
/// base-`q` digits of `index`, constant coefficient least significant.
pub fn monic_poly_at(field: &FieldDesc, d: usize, mut index: u64) -> Poly {
    let q = field.order() as u64;
    let mut coeffs = Vec::with_capacity(d + 1);
    for _ in 0..d {
        coeffs.push(field.elem((index % q) as u32).expect("digit below q"));
        index /= q;
    }
    coeffs.push(FqElem::ONE);
    Poly::new(field, coeffs)
}

/// Stream of all monic polynomials of a fixed degree; the constant
/// coefficient varies fastest.
pub struct MonicPolys {
    field: FieldDesc,
    degree: usize,
    next: u64,
    end: u64,
}

impl Iterator for MonicPolys {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.next >= self.end {
            return None;
        }
        let p = monic_poly_at(&self.field, self.degree, self.next);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

pub fn monic_polys(field: &FieldDesc, d: usize) -> MonicPolys {
    MonicPolys {
        field: field.clone(),
        degree: d,
        next: 0,
        end: monic_count(field, d).expect("enumeration size overflows u64"),
    }
}

pub fn monic_irreducibles(field: &FieldDesc, d: usize) -> impl Iterator<Item = Poly> {
    assert!(d >= 1, "irreducibles have degree at least 1");
    monic_polys(field, d).filter(|p| p.is_irreducible().expect("nonconstant"))
}

/// Monic irreducibles of degree `d` in enumeration order, tested in parallel
/// over index blocks.
pub fn monic_irreducibles_vec(field: &FieldDesc, d: usize) -> Vec<Poly> {
    let total = monic_count(field, d).expect("enumeration size overflows u64");
    const BLOCK: u64 = 256;
    let blocks = total.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(total);
            (lo..hi)
                .map(|i| monic_poly_at(field, d, i))
                .filter(|p| p.is_irreducible().expect("nonconstant"))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Enumerated counts `N_1, ..., N_dmax` of monic irreducibles per degree.
pub fn irreducible_counts(field: &FieldDesc, dmax: usize) -> Vec<u64> {
    (1..=dmax)
        .map(|d| monic_irreducibles_vec(field, d).len() as u64)
        .collect()
}

/// Checks `sum_{e | d} e N_e = q^d` for every `d <= dmax` against enumerated counts.
pub fn irreducible_count_check(field: &FieldDesc, dmax: usize) -> bool {
    let counts = irreducible_counts(field, dmax);
    (1..=dmax).all(|d| {
        let lhs: u64 = (1..=d)
            .filter(|e| d % e == 0)
            .map(|e| e as u64 * counts[e - 1])
            .sum();
        Some(lhs) == monic_count(field, d)
    })
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    field: FieldDesc,
    coeffs: Vec<Vec<u32>>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| self.field.coords(c)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| repr.field.from_coords(c))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        if coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(serde::de::Error::custom("trailing zero coefficient"));
        }
        Ok(Poly::new(&repr.field, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldDesc {
        FieldDesc::from_order(q).unwrap()
    }

    fn p2(coeffs: &[i64]) -> Poly {
        Poly::from_ints(&f(2), coeffs)
    }

    #[test]
    fn char_two_square() {
        let x = p2(&[1, 1]);
        assert_eq!(&x * &x, p2(&[1, 0, 1]));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p2(&[0, 1, 1]).gcd(&p2(&[0, 1])), p2(&[0, 1]));
        let f3 = f(3);
        let a = Poly::from_ints(&f3, &[0, 2]);
        assert_eq!(a.gcd(&Poly::zero(&f3)), Poly::t(&f3));
        assert!(Poly::zero(&f3).gcd(&Poly::zero(&f3)).is_zero());
    }

    #[test]
    fn powmod_example() {
        // T^4 = T^3 * T = T mod T^2+T+1; oracle: T^2 = T+1, T^3 = T^2+T = 1
        let m = p2(&[1, 1, 1]);
        assert_eq!(p2(&[0, 1]).powmod(4, &m).unwrap(), p2(&[0, 1]));
        assert_eq!(p2(&[0, 1]).powmod(3, &m).unwrap(), p2(&[1]));
    }

    #[test]
    fn division_errors() {
        let z = Poly::zero(&f(2));
        assert_eq!(p2(&[1, 1]).divrem(&z), Err(Error::DivisionByZero));
        assert_eq!(p2(&[1, 1]).powmod(3, &z), Err(Error::DivisionByZero));
        assert_eq!(p2(&[1]).is_irreducible(), Err(Error::ConstantPolynomial));
        assert_eq!(z.is_irreducible(), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn divrem_reconstructs() {
        let f9 = f(9);
        let g = f9.generator();
        let a = Poly::new(&f9, vec![g, FqElem::ONE, f9.from_int(2), g, g]);
        let b = Poly::new(&f9, vec![FqElem::ONE, g, f9.from_int(2)]);
        let (quo, r) = a.divrem(&b).unwrap();
        assert_eq!(&(&quo * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(p2(&[1, 1, 1]).is_irreducible().unwrap());
        assert!(!p2(&[1, 0, 1]).is_irreducible().unwrap());
        assert!(p2(&[1, 1, 0, 1]).is_irreducible().unwrap());
        assert!(p2(&[1, 0, 1, 1]).is_irreducible().unwrap());
    }

    #[test]
    fn monic_enumeration() {
        let f2 = f(2);
        assert_eq!(monic_polys(&f2, 0).collect::<Vec<_>>(), vec![Poly::one(&f2)]);
        assert_eq!(
            monic_polys(&f2, 1).collect::<Vec<_>>(),
            vec![p2(&[0, 1]), p2(&[1, 1])]
        );
        assert_eq!(monic_polys(&f(3), 2).count(), 9);
    }

    #[test]
    fn small_irreducible_lists() {
        let f2 = f(2);
        let all: Vec<Poly> = (1..=3).flat_map(|d| monic_irreducibles(&f2, d)).collect();
        assert_eq!(
            all,
            vec![
                p2(&[0, 1]),
                p2(&[1, 1]),
                p2(&[1, 1, 1]),
                p2(&[1, 1, 0, 1]),
                p2(&[1, 0, 1, 1]),
            ]
        );
        assert_eq!(monic_irreducibles(&f2, 4).count(), 3);
        assert_eq!(monic_irreducibles(&f(3), 1).count(), 3);
        assert_eq!(monic_irreducibles_vec(&f2, 7), monic_irreducibles(&f2, 7).collect::<Vec<_>>());
    }

    #[test]
    fn count_check_small() {
        // hand oracle: N_1 = 2, N_2 = 1, N_3 = 2 over F_2; N_1 = 3 over F_3
        assert_eq!(irreducible_counts(&f(2), 3), vec![2, 1, 2]);
        assert_eq!(irreducible_counts(&f(3), 1), vec![3]);
        assert!(irreducible_count_check(&f(2), 3));
    }

    #[test]
    fn rabin_matches_trial_division() {
        let f2 = f(2);
        for d in 1..=6 {
            for poly in monic_polys(&f2, d) {
                let trial = (1..=d / 2).all(|dd| {
                    monic_polys(&f2, dd).all(|g| !poly.rem(&g).unwrap().is_zero())
                });
                assert_eq!(poly.is_irreducible().unwrap(), trial, "{poly}");
            }
        }
    }

    #[test]
    fn text_forms() {
        assert_eq!(p2(&[1, 0, 1, 0, 1]).to_string(), "T^4+T^2+1");
        assert_eq!(Poly::zero(&f(2)).to_string(), "0");
        assert_eq!(Poly::from_ints(&f(3), &[2, 0, 2]).to_string(), "2*T^2+2");
        let f4 = f(4);
        let g = f4.generator();
        let g1 = f4.add(g, FqElem::ONE);
        let p = Poly::new(&f4, vec![g, FqElem::ZERO, g1]);
        assert_eq!(p.to_string(), "(g+1)*T^2+g");
        assert_eq!(Poly::new(&f4, vec![FqElem::ZERO, g]).to_string(), "g*T");
    }

    #[test]
    fn json_round_trip() {
        let f4 = f(4);
        let p = Poly::new(&f4, vec![f4.generator(), FqElem::ONE]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"field":{"p":2,"e":2,"modulus":[1,1,1]},"coeffs":[[0,1],[1,0]]}"#);
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
