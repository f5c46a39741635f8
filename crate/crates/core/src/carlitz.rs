//! Carlitz data and the exact evaluation of prime sums.
//!
//! Symmetric functions of `(1/A^(q-1))` over monic `A` land in
//! `π̄^(m(q-1)) · F_q(T)`. The period `π̄` itself needs a `(q-1)`-th root of
//! `-T`, so only its `(q-1)`-th power is ever materialized; elsewhere the power
//! of `π̄` is carried as a formal grade.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldDesc, FqElem};
use crate::laurent::USeries;
use crate::polyring::Poly;
use crate::primesum::monic_power_sum;
use crate::ratfun::RatFun;
use crate::symfun::{gp_expansion, power_sum_in_e, ELinComb, PartSet};

/// Largest allowed `deg D_j = j q^j`.
pub const MAX_D_DEGREE: u64 = 100_000;

/// A value `π̄^pibar_degree · value` with `value ∈ F_q(T)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PibarRat {
    pub value: RatFun,
    pub pibar_degree: u64,
}

impl PibarRat {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn mul(&self, other: &PibarRat) -> PibarRat {
        PibarRat {
            value: &self.value * &other.value,
            pibar_degree: self.pibar_degree + other.pibar_degree,
        }
    }

    pub fn add(&self, other: &PibarRat) -> Result<PibarRat> {
        if self.pibar_degree != other.pibar_degree {
            return Err(Error::InvalidArgument(format!(
                "cannot add π̄-degrees {} and {}",
                self.pibar_degree, other.pibar_degree
            )));
        }
        Ok(PibarRat {
            value: &self.value + &other.value,
            pibar_degree: self.pibar_degree,
        })
    }

    pub fn pow(&self, k: u64) -> PibarRat {
        PibarRat {
            value: self.value.pow(k),
            pibar_degree: self.pibar_degree * k,
        }
    }
}

fn order(field: &FieldDesc) -> u64 {
    field.order() as u64
}

/// `D_j = prod_{i<j} (T^(q^j) - T^(q^i))`, with `D_0 = 1`.
pub fn carlitz_d(field: &FieldDesc, j: u32) -> Result<Poly> {
    let q = order(field);
    let qj = q
        .checked_pow(j)
        .filter(|&qj| (j as u64).saturating_mul(qj) <= MAX_D_DEGREE)
        .ok_or_else(|| {
            Error::SizeBound(format!("deg D_{j} = {j}*{q}^{j} exceeds {MAX_D_DEGREE}"))
        })?;
    let mut acc = Poly::one(field);
    let mut qi = 1u64;
    for _ in 0..j {
        acc = &acc.shift(qj as usize) - &acc.shift(qi as usize);
        qi *= q;
    }
    Ok(acc)
}

/// Coefficients `1/D_j` of `Z^(q^j)` in the Carlitz exponential, `j < n`.
pub fn carlitz_exp_coeffs(field: &FieldDesc, n: u32) -> Result<Vec<RatFun>> {
    (0..n)
        .map(|j| RatFun::new(Poly::one(field), carlitz_d(field, j)?))
        .collect()
}

/// If `m = (q^j - 1)/(q - 1)` returns `j`.
pub fn admissible_index(q: u64, m: u64) -> Option<u32> {
    let mut j = 0;
    let mut s = 0u64;
    while s < m {
        s = s * q + 1;
        j += 1;
    }
    (s == m).then_some(j)
}

/// Admissible parts `(q^j - 1)/(q - 1) <= n`, `j >= 1`.
pub fn admissible_parts(q: u64, n: u64) -> PartSet {
    let mut out = PartSet::new();
    let mut s = 1u64;
    while s <= n {
        out.insert(s as u32);
        s = s * q + 1;
    }
    out
}

fn minus_one_pow(field: &FieldDesc, m: u64) -> FqElem {
    if m.is_multiple_of(2) {
        FqElem::ONE
    } else {
        field.neg(FqElem::ONE)
    }
}

/// `e_m` at `(1/A^(q-1))` over monic `A`: `(-1)^m π̄^(m(q-1)) / D_j` when
/// `m = (q^j - 1)/(q - 1)` and zero otherwise.
pub fn spec_e_monic(field: &FieldDesc, m: u64) -> Result<PibarRat> {
    let q = order(field);
    let pibar_degree = m * (q - 1);
    let value = match admissible_index(q, m) {
        Some(j) => RatFun::new(
            Poly::constant(field, minus_one_pow(field, m)),
            carlitz_d(field, j)?,
        )?,
        None => RatFun::zero(field),
    };
    Ok(PibarRat {
        value,
        pibar_degree,
    })
}

/// Specialization of an e-basis combination at `(1/A^(q-1))` over monic `A`.
/// Terms are brought to the common denominator `prod_j D_j^(max multiplicity)`
/// before a single reduction.
pub fn spec_elincomb(field: &FieldDesc, a: &ELinComb) -> Result<PibarRat> {
    let q = order(field);
    let p = BigInt::from(field.characteristic());
    let pibar_degree = a.degree() as u64 * (q - 1);

    // per surviving term: field coefficient and multiplicity of each D_j
    let mut terms: Vec<(FqElem, BTreeMap<u32, u64>)> = Vec::new();
    let mut max_mult: BTreeMap<u32, u64> = BTreeMap::new();
    'terms: for (lambda, c) in a.terms() {
        let c = c.mod_floor(&p).to_i64().unwrap();
        if c == 0 {
            continue;
        }
        let mut coeff = field.from_int(c);
        let mut mult = BTreeMap::new();
        for &m in lambda.parts() {
            let Some(j) = admissible_index(q, m as u64) else {
                continue 'terms;
            };
            coeff = field.mul(coeff, minus_one_pow(field, m as u64));
            if j > 0 {
                *mult.entry(j).or_insert(0) += 1;
            }
        }
        for (&j, &e) in &mult {
            let slot = max_mult.entry(j).or_insert(0);
            *slot = (*slot).max(e);
        }
        terms.push((coeff, mult));
    }

    let mut d_cache: HashMap<u32, Poly> = HashMap::new();
    for &j in max_mult.keys() {
        d_cache.insert(j, carlitz_d(field, j)?);
    }
    let mut pow_cache: HashMap<(u32, u64), Poly> = HashMap::new();
    let mut power = |j: u32, e: u64| -> Poly {
        pow_cache
            .entry((j, e))
            .or_insert_with(|| d_cache[&j].pow(e))
            .clone()
    };

    let mut den = Poly::one(field);
    for (&j, &e) in &max_mult {
        den = &den * &power(j, e);
    }
    let mut num = Poly::zero(field);
    for (coeff, mult) in terms {
        let mut t = Poly::constant(field, coeff);
        for (&j, &e) in &max_mult {
            let missing = e - mult.get(&j).copied().unwrap_or(0);
            if missing > 0 {
                t = &t * &power(j, missing);
            }
        }
        num = &num + &t;
    }
    Ok(PibarRat {
        value: RatFun::new(num, den)?,
        pibar_degree,
    })
}

fn ell_of(field: &FieldDesc, k: u64) -> Result<u64> {
    let qm1 = order(field) - 1;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if !k.is_multiple_of(qm1) {
        return Err(Error::UnsupportedExponent { k, qm1 });
    }
    Ok(k / qm1)
}

fn symfun_degree(n: u64) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::SizeBound(format!("symmetric degree {n} too large")))
}

/// Exact `sum_{P monic irreducible} G_p(1/P^k)` for `(q-1) | k`, as the
/// quotient of `g_p` and `p_ℓ^p` specialized at `(1/A^(q-1))`.
pub fn exact_prime_sum(field: &FieldDesc, k: u64) -> Result<RatFun> {
    let ell = ell_of(field, k)?;
    let q = order(field);
    let p = field.characteristic() as u64;
    let n = symfun_degree(p * ell)?;
    let ell = symfun_degree(ell)?;
    let p32 = p as u32;

    let g = gp_expansion(p32, ell, Some(&admissible_parts(q, n as u64)))?;
    let num = spec_elincomb(field, &g)?;
    let pl = power_sum_in_e(ell, Some(&admissible_parts(q, ell as u64)))?;
    let den = spec_elincomb(field, &pl)?.pow(p);

    if num.pibar_degree != den.pibar_degree {
        return Err(Error::Internal(format!(
            "π̄-degrees {} and {} do not cancel",
            num.pibar_degree, den.pibar_degree
        )));
    }
    if den.is_zero() {
        return Err(Error::Internal("ζ(pk) specialized to zero".into()));
    }
    num.value.div(&den.value)
}

/// The explicit values for small `ℓ = k/(q-1)`: zero for `ℓ <= q/p`,
/// `(ℓ mod p) D_1^(q+1) / D_2` for `q/p < ℓ <= 2q/p`, `None` beyond.
pub fn closed_form(field: &FieldDesc, k: u64) -> Result<Option<RatFun>> {
    let ell = ell_of(field, k)?;
    let q = order(field);
    let p = field.characteristic() as u64;
    if ell * p <= q {
        return Ok(Some(RatFun::zero(field)));
    }
    if ell * p > 2 * q {
        return Ok(None);
    }
    let d1 = carlitz_d(field, 1)?;
    let d2 = carlitz_d(field, 2)?;
    let c = field.from_int((ell % p) as i64);
    Ok(Some(RatFun::new(d1.pow(q + 1).scale(c), d2)?))
}

/// Exact sum over all irreducibles, monic or not:
/// `gcd(q-1, k) · exact_prime_sum(lcm(q-1, k))`.
pub fn exact_all_prime_sum(field: &FieldDesc, k: u64) -> Result<RatFun> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let qm1 = order(field) - 1;
    let g = qm1.gcd(&k);
    let l = qm1.lcm(&k);
    let s = exact_prime_sum(field, l)?;
    Ok(s.scale(field.from_int((g % field.characteristic() as u64) as i64)))
}

/// Largest precision [`pibar_qm1_series`] supports for a given `dmax`.
pub fn pibar_qm1_precision(field: &FieldDesc, dmax: u32) -> i64 {
    let q = order(field) as i64;
    (q - 1) * (dmax as i64 + 1) - q
}

/// `π̄^(q-1) = -D_1 · sum_{A monic} 1/A^(q-1)`, from the monic polynomials of
/// degree at most `dmax`, known through `u^(n-1)`. The truncated sum is exact
/// below `(q-1)(dmax+1)` and the factor `D_1` costs `q` of that.
pub fn pibar_qm1_series(field: &FieldDesc, n: i64, dmax: u32) -> Result<USeries> {
    let limit = pibar_qm1_precision(field, dmax);
    if n > limit {
        return Err(Error::InsufficientPrecision(format!(
            "π̄^(q-1) from degrees <= {dmax} is known only below u^{limit}, {n} requested"
        )));
    }
    let q = order(field);
    let sum = monic_power_sum(field, q - 1, dmax, true);
    let minus_d1 = RatFun::from_poly(-&carlitz_d(field, 1)?);
    Ok(sum.mul_exact(&minus_d1).truncate(n))
}
