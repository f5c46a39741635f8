//! Truncated Laurent series in `u = 1/T` with absolute precision.
//!
//! A [`USeries`] with precision `N` asserts exact knowledge of every
//! coefficient of `u^j` for `j < N`; nothing is claimed about `j >= N`.
//! Binary operations propagate precision: `add` keeps `min(N1, N2)` and
//! `mul` keeps `min(N1 + v2, N2 + v1)` with `v` the true valuations.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldDesc, FqElem};
use crate::polyring::Poly;
use crate::ratfun::RatFun;

#[derive(Clone)]
pub struct USeries {
    field: FieldDesc,
    /// Exponent of `coeffs[0]`.
    v: i64,
    /// Absolute precision.
    n: i64,
    coeffs: Vec<FqElem>,
}

impl USeries {
    /// Builds a series with coefficients for `u^v, u^(v+1), ...`; the
    /// precision is `v + coeffs.len()`.
    pub fn from_coeffs(field: &FieldDesc, v: i64, coeffs: Vec<FqElem>) -> USeries {
        let n = v + coeffs.len() as i64;
        USeries {
            field: field.clone(),
            v,
            n,
            coeffs,
        }
    }

    /// Zero, known on exponents `v..n`.
    pub fn zero(field: &FieldDesc, v: i64, n: i64) -> USeries {
        let v = v.min(n);
        USeries {
            field: field.clone(),
            v,
            n,
            coeffs: vec![FqElem::ZERO; (n - v) as usize],
        }
    }

    /// `c * u^exp` known through `u^(n-1)`.
    pub fn monomial(field: &FieldDesc, c: FqElem, exp: i64, n: i64) -> USeries {
        let mut s = USeries::zero(field, exp, n);
        if exp < n {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(field: &FieldDesc, n: i64) -> USeries {
        USeries::monomial(field, FqElem::ONE, 0, n)
    }

    /// A polynomial in `T` as a series (`T^i = u^(-i)`), known through `u^(n-1)`.
    pub fn from_poly(p: &Poly, n: i64) -> USeries {
        let field = p.field();
        let Some(d) = p.degree() else {
            return USeries::zero(field, 0, n);
        };
        let v = -(d as i64);
        let mut s = USeries::zero(field, v, n);
        for (i, slot) in s.coeffs.iter_mut().enumerate() {
            let exp = v + i as i64;
            if exp <= 0 {
                *slot = p.coeff((-exp) as usize);
            }
        }
        s
    }

    #[inline]
    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    /// Absolute precision `N`.
    #[inline]
    pub fn precision(&self) -> i64 {
        self.n
    }

    /// Lowest stored exponent.
    #[inline]
    pub fn start(&self) -> i64 {
        self.v
    }

    /// Stored coefficients for exponents `start()..precision()`.
    #[inline]
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// Coefficient of `u^j`, or `None` when `j` is beyond the precision.
    pub fn coeff(&self, j: i64) -> Option<FqElem> {
        if j >= self.n {
            None
        } else if j < self.v {
            Some(FqElem::ZERO)
        } else {
            Some(self.coeffs[(j - self.v) as usize])
        }
    }

    /// Exponent of the first nonzero coefficient, or `None` if the series is
    /// zero within its precision.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.v + i as i64)
    }

    pub fn is_zero_within_precision(&self) -> bool {
        self.valuation().is_none()
    }

    /// Drops leading zero coefficients.
    pub fn trimmed(&self) -> USeries {
        let start = self.valuation().unwrap_or(self.n);
        USeries {
            field: self.field.clone(),
            v: start,
            n: self.n,
            coeffs: self.coeffs[(start - self.v) as usize..].to_vec(),
        }
    }

    /// Restricts to precision `n` (no-op if already lower).
    pub fn truncate(&self, n: i64) -> USeries {
        if n >= self.n {
            return self.clone();
        }
        let v = self.v.min(n);
        USeries {
            field: self.field.clone(),
            v,
            n,
            coeffs: (v..n).map(|j| self.coeff(j).unwrap()).collect(),
        }
    }

    fn check_field(&self, other: &USeries) {
        assert_eq!(self.field, other.field, "series over different fields");
    }

    pub fn add(&self, other: &USeries) -> USeries {
        self.check_field(other);
        let f = &self.field;
        let n = self.n.min(other.n);
        let v = self.v.min(other.v).min(n);
        let coeffs = (v..n)
            .map(|j| f.add(self.coeff(j).unwrap(), other.coeff(j).unwrap()))
            .collect();
        USeries {
            field: f.clone(),
            v,
            n,
            coeffs,
        }
    }

    pub fn neg(&self) -> USeries {
        let f = &self.field;
        USeries {
            field: f.clone(),
            v: self.v,
            n: self.n,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &USeries) -> USeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FqElem) -> USeries {
        let f = &self.field;
        USeries {
            field: f.clone(),
            v: self.v,
            n: self.n,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &USeries) -> USeries {
        self.check_field(other);
        let f = &self.field;
        let a = self.trimmed();
        let b = other.trimmed();
        let n = (a.n + b.v).min(b.n + a.v);
        let v = a.v + b.v;
        if v >= n {
            return USeries::zero(f, n, n);
        }
        let len = (n - v) as usize;
        let mut out = vec![FqElem::ZERO; len];
        for (i, &x) in a.coeffs.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        USeries {
            field: f.clone(),
            v,
            n,
            coeffs: out,
        }
    }

    /// Multiplicative inverse. A series `u^v (c_0 + ...)` with `c_0 != 0`
    /// known to precision `N` inverts to valuation `-v` and precision `N - 2v`.
    pub fn invert(&self) -> Result<USeries> {
        let f = &self.field;
        let a = self.trimmed();
        if a.coeffs.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let len = a.coeffs.len();
        let c0_inv = f.inv(a.coeffs[0])?;
        let mut out = Vec::with_capacity(len);
        out.push(c0_inv);
        for i in 1..len {
            let mut acc = FqElem::ZERO;
            for j in 1..=i {
                let aj = a.coeffs[j];
                if !aj.is_zero() {
                    acc = f.add(acc, f.mul(aj, out[i - j]));
                }
            }
            out.push(f.neg(f.mul(acc, c0_inv)));
        }
        Ok(USeries {
            field: f.clone(),
            v: -a.v,
            n: a.n - 2 * a.v,
            coeffs: out,
        })
    }

    pub fn div(&self, other: &USeries) -> Result<USeries> {
        Ok(self.mul(&other.invert()?))
    }

    /// `self^k` by repeated squaring; `k = 0` gives `1` with the same
    /// relative precision as `self`.
    pub fn pow(&self, k: u64) -> USeries {
        if k == 0 {
            let rel = self.n - self.valuation().unwrap_or(self.n);
            return USeries::one(&self.field, rel.max(0));
        }
        let mut acc: Option<USeries> = None;
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// Product with an exact rational function, keeping the precision that
    /// multiplication by an exact factor allows.
    pub fn mul_exact(&self, r: &RatFun) -> USeries {
        if r.is_zero() {
            return USeries::zero(&self.field, self.n, self.n);
        }
        let vr = r.den().degree().unwrap() as i64 - r.num().degree().unwrap() as i64;
        let va = self.valuation().unwrap_or(self.n);
        let exact = expand(r, self.n + vr - va);
        self.mul(&exact)
    }

    /// First exponent in the common window where the two series differ.
    pub fn first_mismatch(&self, other: &USeries) -> Option<i64> {
        self.check_field(other);
        let n = self.n.min(other.n);
        let lo = self.v.min(other.v);
        (lo..n).find(|&j| self.coeff(j) != other.coeff(j))
    }

    /// Agreement on the common precision window.
    pub fn agrees_with(&self, other: &USeries) -> bool {
        self.first_mismatch(other).is_none()
    }
}

/// Strict equality: same precision and agreement on every known coefficient.
impl PartialEq for USeries {
    fn eq(&self, other: &USeries) -> bool {
        self.field == other.field && self.n == other.n && self.agrees_with(other)
    }
}

impl fmt::Display for USeries {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = self.v + i as i64;
            let mono = match j {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{j}"),
            };
            let cs = f.format_elem(c);
            terms.push(if j == 0 {
                cs
            } else if c.is_one() {
                mono
            } else if cs.contains('+') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        terms.push(format!("O(u^{})", self.n));
        out.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", self, self.field)
    }
}

/// Expansion of `num / den` in `u`, exact through `u^(n-1)`.
pub fn expand_fraction(num: &Poly, den: &Poly, n: i64) -> USeries {
    let field = num.field();
    let dd = den.degree().expect("nonzero denominator");
    let Some(dn) = num.degree() else {
        return USeries::zero(field, 0, n);
    };
    let v = dd as i64 - dn as i64;
    if v >= n {
        return USeries::zero(field, n, n);
    }
    let len = (n - v) as usize;
    // num = T^dn * rn(u), den = T^dd * rd(u), with rn, rd the reversed coefficient lists
    let rn = |i: usize| if i <= dn { num.coeff(dn - i) } else { FqElem::ZERO };
    let rd: Vec<FqElem> = (0..=dd).map(|i| den.coeff(dd - i)).collect();
    let d0_inv = field.inv(rd[0]).expect("nonzero leading coefficient");
    let mut out: Vec<FqElem> = Vec::with_capacity(len);
    for i in 0..len {
        let mut acc = rn(i);
        for j in 1..=i.min(dd) {
            if !rd[j].is_zero() {
                acc = field.sub(acc, field.mul(rd[j], out[i - j]));
            }
        }
        out.push(field.mul(acc, d0_inv));
    }
    USeries {
        field: field.clone(),
        v,
        n,
        coeffs: out,
    }
}

/// Expansion of a rational function in `u = 1/T`, exact through `u^(n-1)`.
/// The stored window starts at `deg(den) - deg(num)`.
pub fn expand(r: &RatFun, n: i64) -> USeries {
    expand_fraction(r.num(), r.den(), n)
}

/// Expansion of `1/(P^k - 1) = sum_{j >= 1} P^(-kj)` through `u^(n-1)`.
pub fn geometric_inverse_power(p: &Poly, k: u64, n: i64) -> Result<USeries> {
    match p.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        _ => {}
    }
    let den = &p.pow(k) - &Poly::one(p.field());
    Ok(expand_fraction(&Poly::one(p.field()), &den, n))
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    field: FieldDesc,
    v: i64,
    #[serde(rename = "N")]
    n: i64,
    coeffs: Vec<Vec<u32>>,
}

impl Serialize for USeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            field: self.field.clone(),
            v: self.v,
            n: self.n,
            coeffs: self.coeffs.iter().map(|&c| self.field.coords(c)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for USeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        if repr.n < repr.v || (repr.n - repr.v) as usize != repr.coeffs.len() {
            return Err(serde::de::Error::custom("coefficient count must equal N - v"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| repr.field.from_coords(c))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(USeries {
            field: repr.field,
            v: repr.v,
            n: repr.n,
            coeffs,
        })
    }
}
