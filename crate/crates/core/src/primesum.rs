//! Truncated `u`-adic sums over enumerated polynomials.
//!
//! Every sum here is exact below its stated precision: a summand omitted for
//! having degree above `dmax` has valuation at least the precision. Work is
//! split into blocks of polynomials of one degree, reduced independently and
//! merged with exact field arithmetic, so the result does not depend on the
//! number of threads.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::carlitz::exact_prime_sum;
use crate::error::{Error, Result};
use crate::field::{FieldDesc, FqElem};
use crate::laurent::{expand, expand_fraction, USeries};
use crate::polyring::{monic_count, monic_irreducibles_vec, monic_poly_at, Poly};
use crate::ratfun::{GpInverse, RatFun};

const BLOCK: usize = 64;

/// Parameters of a truncated prime sum.
#[derive(Clone, Debug)]
pub struct SumRequest {
    pub field: FieldDesc,
    pub k: u64,
    pub dmax: u32,
    /// Sum over monic irreducibles only, or over all their unit multiples too.
    pub monic_only: bool,
}

impl SumRequest {
    pub fn new(field: &FieldDesc, k: u64, dmax: u32, monic_only: bool) -> Result<SumRequest> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        if dmax == 0 {
            return Err(Error::InvalidArgument("max degree must be positive".into()));
        }
        Ok(SumRequest {
            field: field.clone(),
            k,
            dmax,
            monic_only,
        })
    }

    /// `N = k (dmax + 1)`.
    pub fn precision(&self) -> i64 {
        self.k as i64 * (self.dmax as i64 + 1)
    }
}

fn zeros(n: i64) -> Vec<FqElem> {
    vec![FqElem::ZERO; n.max(0) as usize]
}

/// Adds the coefficients of `s` on exponents `0..acc.len()`.
fn accumulate(field: &FieldDesc, acc: &mut [FqElem], s: &USeries) {
    let lo = s.start().max(0);
    for j in lo..acc.len() as i64 {
        let c = s.coeff(j).expect("summand known through the target precision");
        if !c.is_zero() {
            acc[j as usize] = field.add(acc[j as usize], c);
        }
    }
}

fn merge(field: &FieldDesc, mut a: Vec<FqElem>, b: Vec<FqElem>) -> Vec<FqElem> {
    for (x, y) in a.iter_mut().zip(b) {
        *x = field.add(*x, y);
    }
    a
}

/// Sum of `term(P)` over `polys`, in parallel blocks, on exponents `0..n`.
fn block_sum<F>(field: &FieldDesc, polys: &[Poly], n: i64, term: F) -> Vec<FqElem>
where
    F: Fn(&Poly) -> USeries + Sync,
{
    polys
        .par_chunks(BLOCK)
        .map(|chunk| {
            let mut acc = zeros(n);
            for p in chunk {
                accumulate(field, &mut acc, &term(p));
            }
            acc
        })
        .reduce(|| zeros(n), |a, b| merge(field, a, b))
}

fn monic_of_degree(field: &FieldDesc, d: u32) -> Vec<Poly> {
    let count = monic_count(field, d as usize).expect("enumeration size overflows u64");
    (0..count)
        .into_par_iter()
        .map(|i| monic_poly_at(field, d as usize, i))
        .collect()
}

/// `sum_{P} G_p(1/P^k)` over irreducibles of degree at most `dmax`, known
/// through `u^(N-1)` with `N = k (dmax + 1)`.
pub fn numeric_prime_sum(req: &SumRequest) -> Result<USeries> {
    let field = &req.field;
    let n = req.precision();
    let gp = GpInverse::new(field)?;
    let units: Vec<FqElem> = if req.monic_only {
        vec![FqElem::ONE]
    } else {
        field.units().collect()
    };
    let mut total = zeros(n);
    for d in 1..=req.dmax {
        let primes = monic_irreducibles_vec(field, d as usize);
        let block = block_sum(field, &primes, n, |p| {
            let mut acc = zeros(n);
            for &a in &units {
                let (num, den) = gp.fraction_at_power(&p.scale(a), req.k);
                accumulate(field, &mut acc, &expand_fraction(&num, &den, n));
            }
            USeries::from_coeffs(field, 0, acc)
        });
        total = merge(field, total, block);
    }
    Ok(USeries::from_coeffs(field, 0, total))
}

/// `sum 1/A^k` over monic `A` with `1 <= deg A <= dmax`, plus `1` for `A = 1`
/// when `include_one`, known through `u^(k(dmax+1) - 1)`.
pub fn monic_power_sum(field: &FieldDesc, k: u64, dmax: u32, include_one: bool) -> USeries {
    let n = k as i64 * (dmax as i64 + 1);
    let mut total = zeros(n);
    if include_one && n > 0 {
        total[0] = FqElem::ONE;
    }
    let one = Poly::one(field);
    for d in 1..=dmax {
        let polys = monic_of_degree(field, d);
        let block = block_sum(field, &polys, n, |a| expand_fraction(&one, &a.pow(k), n));
        total = merge(field, total, block);
    }
    USeries::from_coeffs(field, 0, total)
}

/// Goss `ζ(k)` truncated: `sum 1/A^k` over monic `A` of degree at most `dmax`,
/// `A = 1` included, known through `u^(k(dmax+1) - 1)`.
pub fn numeric_zeta(field: &FieldDesc, k: u64, dmax: u32) -> Result<USeries> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    Ok(monic_power_sum(field, k, dmax, true))
}

/// Product of dense power series truncated to length `n`.
fn mul_trunc(field: &FieldDesc, a: &[FqElem], b: &[FqElem], n: usize) -> Vec<FqElem> {
    let mut out = vec![FqElem::ZERO; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
    }
    out
}

/// `[1, e_1, ..., e_m]` of a point set, each as a dense series of length `n`:
/// the coefficients of `prod (1 + x Z)` up to `Z^m`.
type EPoly = Vec<Vec<FqElem>>;

fn e_unit(m: usize, n: usize) -> EPoly {
    let mut e = vec![vec![FqElem::ZERO; n]; m + 1];
    if n > 0 {
        e[0][0] = FqElem::ONE;
    }
    e
}

fn e_push(field: &FieldDesc, e: &mut EPoly, x: &[FqElem], n: usize) {
    for j in (1..e.len()).rev() {
        let t = mul_trunc(field, x, &e[j - 1], n);
        for (a, b) in e[j].iter_mut().zip(t) {
            *a = field.add(*a, b);
        }
    }
}

fn e_merge(field: &FieldDesc, a: &EPoly, b: &EPoly, n: usize) -> EPoly {
    let m = a.len() - 1;
    let mut out = e_unit(m, n);
    out[0] = vec![FqElem::ZERO; n];
    for i in 0..=m {
        for j in 0..=(m - i) {
            let t = mul_trunc(field, &a[i], &b[j], n);
            for (c, d) in out[i + j].iter_mut().zip(t) {
                *c = field.add(*c, d);
            }
        }
    }
    out
}

/// `e_m` evaluated on enumerated points. Monic case: points `1/A^(q-1)` for
/// monic `A` of degree at most `dmax`, precision `(q-1)(dmax+1)`. Otherwise:
/// points `1/A` for every nonzero `A` of degree at most `dmax`, precision
/// `dmax + 1`.
pub fn numeric_e_spec(field: &FieldDesc, m: usize, dmax: u32, monic_only: bool) -> Result<USeries> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let q = field.order() as u64;
    let (k, n) = if monic_only {
        (q - 1, (q as i64 - 1) * (dmax as i64 + 1))
    } else {
        (1, dmax as i64 + 1)
    };
    let units: Vec<FqElem> = if monic_only {
        vec![FqElem::ONE]
    } else {
        field.units().collect()
    };
    let len = n as usize;
    let one = Poly::one(field);
    let mut total = e_unit(m, len);
    for d in 0..=dmax {
        let polys = monic_of_degree(field, d);
        let block = polys
            .par_chunks(BLOCK)
            .map(|chunk| {
                let mut e = e_unit(m, len);
                for a in chunk {
                    let base = expand_fraction(&one, &a.pow(k), n);
                    for &c in &units {
                        let ci = field.inv(c).expect("unit");
                        let x: Vec<FqElem> = (0..n)
                            .map(|j| field.mul(ci, base.coeff(j).expect("within precision")))
                            .collect();
                        e_push(field, &mut e, &x, len);
                    }
                }
                e
            })
            .reduce(|| e_unit(m, len), |a, b| e_merge(field, &a, &b, len));
        total = e_merge(field, &total, &block, len);
    }
    Ok(USeries::from_coeffs(field, 0, total.swap_remove(m)))
}

/// Number of `(r_1, ..., r_p)` of nonnegative integers with sum `r` and
/// minimum zero, by enumeration.
pub fn psi_count(p: u32, r: u32) -> u64 {
    fn go(slots: u32, rest: u32, seen_zero: bool) -> u64 {
        if slots == 0 {
            return u64::from(rest == 0 && seen_zero);
        }
        (0..=rest)
            .map(|x| go(slots - 1, rest - x, seen_zero || x == 0))
            .sum()
    }
    go(p, r, false)
}

/// Outcome of comparing the exact value with the truncated sum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub q: u64,
    pub k: u64,
    pub dmax: u32,
    pub precision: i64,
    #[serde(rename = "match")]
    pub matches: bool,
    pub first_mismatch: Option<i64>,
    pub exact: RatFun,
    pub numeric: USeries,
    /// Wall-clock time, recorded only on request so that reports are
    /// reproducible byte for byte.
    pub millis: Option<u64>,
}

/// Expands `exact_prime_sum(field, k)` to `N = k (dmax + 1)` and compares it
/// with the enumerated sum over monic irreducibles.
pub fn verify(field: &FieldDesc, k: u64, dmax: u32, timing: bool) -> Result<VerifyReport> {
    let start = Instant::now();
    let exact = exact_prime_sum(field, k)?;
    let req = SumRequest::new(field, k, dmax, true)?;
    let numeric = numeric_prime_sum(&req)?;
    let n = req.precision();
    let first_mismatch = expand(&exact, n).first_mismatch(&numeric);
    Ok(VerifyReport {
        q: field.order() as u64,
        k,
        dmax,
        precision: n,
        matches: first_mismatch.is_none(),
        first_mismatch,
        exact,
        numeric,
        millis: timing.then(|| start.elapsed().as_millis() as u64),
    })
}
