//! Reduced rational functions in `F_q(T)`, the rational function
//! `G_p(U) = ((1 - U^p) - (1 - U)^p) / (p (1 - U)^p)`, and rational
//! reconstruction from truncated expansions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldDesc, FqElem};
use crate::laurent::{expand, USeries};
use crate::polyring::Poly;

/// `num / den` with `den` monic and `gcd(num, den) = 1`; zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = den.field().clone();
        if num.is_zero() {
            return Ok(RatFun::zero(&field));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        if !den.is_monic() {
            let c = field.inv(den.lead())?;
            num = num.scale(c);
            den = den.scale(c);
        }
        Ok(RatFun { num, den })
    }

    pub fn zero(field: &FieldDesc) -> RatFun {
        RatFun {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: &FieldDesc) -> RatFun {
        RatFun::from_poly(Poly::one(field))
    }

    pub fn from_poly(p: Poly) -> RatFun {
        let den = Poly::one(p.field());
        RatFun { num: p, den }
    }

    pub fn constant(field: &FieldDesc, c: FqElem) -> RatFun {
        RatFun::from_poly(Poly::constant(field, c))
    }

    #[inline]
    pub fn num(&self) -> &Poly {
        &self.num
    }

    #[inline]
    pub fn den(&self) -> &Poly {
        &self.den
    }

    #[inline]
    pub fn field(&self) -> &FieldDesc {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&self, c: FqElem) -> RatFun {
        if c.is_zero() {
            return RatFun::zero(self.field());
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: u64) -> RatFun {
        // reduced stays reduced under powers
        RatFun {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// Text form with a chosen variable name: `(num)/(den)`, or just the
    /// numerator when the denominator is 1.
    pub fn format_with(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.format_with(var)
        } else {
            format!("({})/({})", self.num.format_with(var), self.den.format_with(var))
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("T"))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", self, self.field())
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let g = self.den.gcd(&rhs.den);
        let a = rhs.den.div_exact(&g).expect("gcd divides");
        let b = self.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &a) + &(&rhs.num * &b);
        RatFun::new(num, &self.den * &a).expect("nonzero denominator")
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero(self.field());
        }
        // cross-cancel so the product is reduced without a full gcd
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = &self.num.div_exact(&g1).unwrap() * &rhs.num.div_exact(&g2).unwrap();
        let den = &self.den.div_exact(&g2).unwrap() * &rhs.den.div_exact(&g1).unwrap();
        let c = self.field().inv(den.lead()).expect("nonzero");
        RatFun {
            num: num.scale(c),
            den: den.scale(c),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RatFunRepr {
    num: Poly,
    den: Poly,
}

impl Serialize for RatFun {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFunRepr {
            num: self.num.clone(),
            den: self.den.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFun {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = RatFunRepr::deserialize(d)?;
        if repr.num.field() != repr.den.field() {
            return Err(serde::de::Error::custom("numerator and denominator fields differ"));
        }
        RatFun::new(repr.num, repr.den).map_err(serde::de::Error::custom)
    }
}

fn mod_inverse(a: u128, m: u128) -> u128 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let quo = r0 / r1;
        (r0, r1) = (r1, r0 - quo * r1);
        (t0, t1) = (t1, t0 - quo * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(m as i128) as u128
}

/// Integer coefficients of `((1 - U^p) - (1 - U)^p) / p` reduced mod `p`,
/// for `U^0..=U^p`.
///
/// Each integer coefficient is divisible by `p`; it is computed modulo `p^2`
/// (which determines the exact quotient modulo `p`) and divided by `p`
/// before any reduction to `F_p`.
pub fn gp_numerator_coeffs(p: u32) -> Vec<i64> {
    let p = p as u128;
    let p2 = p * p;
    // binom[j] = C(p, j) mod p^2
    let mut binom = vec![0u128; p as usize + 1];
    binom[0] = 1;
    for j in 1..p {
        binom[j as usize] = binom[j as usize - 1] * (p - j + 1) % p2 * mod_inverse(j, p2) % p2;
    }
    binom[p as usize] = 1;
    (0..=p)
        .map(|j| {
            // (1 - U^p) - (1 - U)^p at U^j: [j = 0] - [j = p] - (-1)^j C(p, j)
            let mut c: i128 = 0;
            if j == 0 {
                c += 1;
            }
            if j == p {
                c -= 1;
            }
            let b = binom[j as usize] as i128;
            c -= if j % 2 == 0 { b } else { -b };
            let c = c.rem_euclid(p2 as i128);
            debug_assert_eq!(c % p as i128, 0, "coefficient not divisible by p");
            ((c / p as i128) % p as i128) as i64
        })
        .collect()
}

/// `G_p(U)` as a reduced rational function over `F_p`; the variable is
/// represented by `T` of the prime field.
pub fn gp_ratfun(p: u32) -> Result<RatFun> {
    let fp = FieldDesc::new(p, 1)?;
    let num = Poly::from_ints(&fp, &gp_numerator_coeffs(p));
    // (1 - U)^p
    let one_minus_u = Poly::from_ints(&fp, &[1, -1]);
    RatFun::new(num, one_minus_u.pow(p as u64))
}

/// `G_p(1/X)` for `X` ranging over `F_q[T]`, prepared once per field: with
/// `G_p = A/B` reduced over `F_p` and `m = max(deg A, deg B)`, this is
/// `(X^m A(1/X)) / (X^m B(1/X))`.
#[derive(Clone, Debug)]
pub struct GpInverse {
    field: FieldDesc,
    /// coefficients of `X^m A(1/X)` as a polynomial in `X`
    num: Poly,
    den: Poly,
}

impl GpInverse {
    pub fn new(field: &FieldDesc) -> Result<GpInverse> {
        let g = gp_ratfun(field.characteristic())?;
        let m = g
            .num()
            .degree()
            .unwrap_or(0)
            .max(g.den().degree().unwrap_or(0));
        let lift_reversed = |a: &Poly| -> Poly {
            let coeffs = (0..=m)
                .map(|i| field.from_int(a.coeff(m - i).code() as i64))
                .collect();
            Poly::new(field, coeffs)
        };
        Ok(GpInverse {
            field: field.clone(),
            num: lift_reversed(g.num()),
            den: lift_reversed(g.den()),
        })
    }

    /// Unreduced numerator and denominator of `G_p(1/x)`.
    pub fn fraction_at(&self, x: &Poly) -> (Poly, Poly) {
        assert_eq!(x.field(), &self.field, "polynomial over a different field");
        (self.num.compose(x), self.den.compose(x))
    }

    /// Unreduced `G_p(1/P^k)`.
    pub fn fraction_at_power(&self, p: &Poly, k: u64) -> (Poly, Poly) {
        self.fraction_at(&p.pow(k))
    }
}

/// `G_p(1/P^k)` as a reduced element of `F_q(T)`, where `p` is the
/// characteristic of `P`'s field.
pub fn gp_at_inverse_power(p: u32, poly: &Poly, k: u64) -> Result<RatFun> {
    if poly.field().characteristic() != p {
        return Err(Error::InvalidArgument(format!(
            "characteristic {} does not match p = {p}",
            poly.field().characteristic()
        )));
    }
    match poly.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        _ => {}
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let (num, den) = GpInverse::new(poly.field())?.fraction_at_power(poly, k);
    RatFun::new(num, den)
}

/// Checks, over `F_q(X)`, that
/// `sum_{a in F_q^x} G_p(1/(aX)^k) = gcd(q-1, k) G_p(1/X^lcm(q-1, k))`, and in
/// characteristic 2 additionally `sum_a 1/((aX)^k - 1) = 1/(X^lcm - 1)`.
pub fn scaling_identity_check(field: &FieldDesc, k: u64) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let p = field.characteristic();
    let qm1 = field.order() as u64 - 1;
    let lcm = qm1.lcm(&k);
    let gcd = qm1.gcd(&k);
    let x = Poly::t(field);
    let gp = GpInverse::new(field)?;

    let mut left = RatFun::zero(field);
    for a in field.units() {
        let (n, d) = gp.fraction_at_power(&x.scale(a), k);
        left = &left + &RatFun::new(n, d)?;
    }
    let (n, d) = gp.fraction_at_power(&x, lcm);
    let right = RatFun::new(n, d)?.scale(field.from_int(gcd as i64));
    let mut ok = left == right;

    if p == 2 {
        let one = Poly::one(field);
        let mut left = RatFun::zero(field);
        for a in field.units() {
            left = &left + &RatFun::new(one.clone(), &x.scale(a).pow(k) - &one)?;
        }
        let right = RatFun::new(one.clone(), &x.pow(lcm) - &one)?;
        ok &= left == right;
    }
    Ok(ok)
}

/// Recovers a rational function in `T` from its truncated `u`-expansion.
///
/// Writing `s = u^v t(u)` with `t(0) != 0` known to relative precision
/// `M = N - v`, finds `a(u)/b(u)` with `deg a <= num_deg`, `deg b <= den_deg`,
/// `b(0) != 0` and `b t = a mod u^M` by the extended Euclidean algorithm on
/// `(u^M, t)`, then substitutes `u = 1/T`. Requires `M >= num_deg + den_deg + 2`.
pub fn pade_reconstruct(s: &USeries, num_deg: usize, den_deg: usize) -> Result<RatFun> {
    let field = s.field();
    let t = s.trimmed();
    if t.coeffs().is_empty() {
        return Ok(RatFun::zero(field));
    }
    let v = t.start();
    let m = t.coeffs().len();
    if m < num_deg + den_deg + 2 {
        return Err(Error::InsufficientPrecision(format!(
            "{m} known coefficients after the valuation, need at least {}",
            num_deg + den_deg + 2
        )));
    }
    let tp = Poly::new(field, t.coeffs().to_vec());
    let mut r0 = Poly::monomial(field, FqElem::ONE, m);
    let mut r1 = tp.clone();
    let mut s0 = Poly::zero(field);
    let mut s1 = Poly::one(field);
    while r1.degree().is_some_and(|d| d > num_deg) {
        let (quo, rem) = r0.divrem(&r1)?;
        let s2 = &s0 - &(&quo * &s1);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let (a, b) = (r1, s1);
    if b.degree().is_none_or(|d| d > den_deg) || b.coeff(0).is_zero() {
        return Err(Error::ReconstructionFailed(format!(
            "no approximant with degrees ({num_deg}, {den_deg})"
        )));
    }
    let g = a.gcd(&b);
    let a = a.div_exact(&g)?;
    let b = b.div_exact(&g)?;
    let check = (&b * &tp).coeffs().iter().take(m).copied().collect::<Vec<_>>();
    if Poly::new(field, check) != a.rem(&Poly::monomial(field, FqElem::ONE, m))? {
        return Err(Error::ReconstructionFailed("approximant disagrees with series".into()));
    }
    // u^v a(u)/b(u) with u = 1/T is T^(db - da - v) rev(a) / rev(b)
    let da = a.degree().expect("a(0) = b(0) t(0) is nonzero");
    let db = b.degree().expect("nonzero");
    let rev = |p: &Poly, d: usize| Poly::new(field, (0..=d).map(|i| p.coeff(d - i)).collect());
    let mut num = rev(&a, da);
    let mut den = rev(&b, db);
    let shift = db as i64 - da as i64 - v;
    if shift >= 0 {
        num = num.shift(shift as usize);
    } else {
        den = den.shift((-shift) as usize);
    }
    let r = RatFun::new(num, den)?;
    if !expand(&r, s.precision()).agrees_with(s) {
        return Err(Error::ReconstructionFailed("approximant disagrees with series".into()));
    }
    Ok(r)
}
