//! Acceptance suite: one line per criterion, then a nonzero exit if any
//! criterion outside `EXPECTED_FAILURES` fails (or an expected one passes).

use std::process::Command;
use std::time::Instant;

use irrsum::carlitz::{
    carlitz_d, exact_prime_sum, pibar_qm1_precision, pibar_qm1_series, spec_elincomb,
};
use irrsum::laurent::expand;
use irrsum::primesum::{numeric_e_spec, numeric_prime_sum, numeric_zeta, psi_count, verify, SumRequest};
use irrsum::ratfun::{pade_reconstruct, scaling_identity_check, GpInverse};
use irrsum::symfun::{gp_expansion, power_sum_in_e, Partition};
use irrsum::{FieldDesc, FqElem, Poly, RatFun};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};

/// Criteria that fail for a documented reason: at (p, q, ℓ) = (2, 2, 3) the
/// power sum p_ℓ already contains e_{q+1}, so c_{(q+1, 1^{pℓ-q-1})} = 0
/// rather than -d/p.
const EXPECTED_FAILURES: &[u32] = &[8];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(q: u64) -> FieldDesc {
    FieldDesc::from_order(q).unwrap()
}

fn e(err: irrsum::Error) -> String {
    err.to_string()
}

/// `D_1 = T^q - T`, `D_2 = (T^(q^2) - T^q)(T^(q^2) - T)`, built from monomials.
fn d1_d2(field: &FieldDesc) -> (Poly, Poly) {
    let q = field.order() as usize;
    let mono = |n| Poly::monomial(field, FqElem::ONE, n);
    let d1 = &mono(q) - &mono(1);
    let d2 = &(&mono(q * q) - &mono(q)) * &(&mono(q * q) - &mono(1));
    (d1, d2)
}

fn verify_at(q: u64, k: u64, dmax: u32) -> Result<(), String> {
    let r = verify(&f(q), k, dmax, false).map_err(e)?;
    ensure(r.matches && r.precision == k as i64 * (dmax as i64 + 1), || {
        format!("q={q} k={k} dmax={dmax}: mismatch at {:?}", r.first_mismatch)
    })
}

fn criterion_1() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let start = Instant::now();
    let s = pool
        .install(|| numeric_prime_sum(&SumRequest::new(&f(2), 1, 12, true).unwrap()))
        .map_err(e)?;
    let secs = start.elapsed().as_secs_f64();
    ensure(s.precision() == 13 && s.is_zero_within_precision(), || {
        format!("nonzero coefficient in {s}")
    })?;
    ensure(secs < 5.0, || format!("took {secs:.2}s"))?;
    Ok(format!("zero through u^12 in {secs:.2}s on one thread"))
}

fn criterion_2() -> Outcome {
    let f2 = f(2);
    let exact = exact_prime_sum(&f2, 3).map_err(e)?;
    let target = RatFun::new(Poly::one(&f2), Poly::from_ints(&f2, &[0, 0, 1, 0, 1])).map_err(e)?;
    ensure(exact == target, || format!("exact value {exact}"))?;
    let r = verify(&f2, 3, 6, false).map_err(e)?;
    ensure(r.matches && r.precision == 21, || format!("verify: {:?}", r.first_mismatch))?;
    Ok(format!("{exact}, agrees through u^20"))
}

fn criterion_3() -> Outcome {
    let cases = [(2, 1), (3, 1), (4, 1), (4, 2), (5, 1), (9, 1), (9, 2), (9, 3)];
    for (q, ell) in cases {
        let k = (q - 1) * ell;
        let s = exact_prime_sum(&f(q), k).map_err(e)?;
        ensure(s.is_zero(), || format!("q={q} ℓ={ell}: {s}"))?;
        verify_at(q, k, 3)?;
    }
    Ok(format!("{} cases zero, numerically confirmed at dmax 3", cases.len()))
}

fn criterion_4() -> Outcome {
    let cases = [(3, 2), (4, 3), (4, 4), (9, 4), (9, 5), (9, 6)];
    let mut boundary = Vec::new();
    for (q, ell) in cases {
        let fq = f(q);
        let p = fq.characteristic() as u64;
        let k = (q - 1) * ell;
        let (d1, d2) = d1_d2(&fq);
        let c = fq.from_int((ell % p) as i64);
        let expected = RatFun::new(d1.pow(q + 1).scale(c), d2).map_err(e)?;
        let s = exact_prime_sum(&fq, k).map_err(e)?;
        ensure(s == expected, || format!("q={q} ℓ={ell}: {s}"))?;
        if ell == q / p + 1 {
            ensure(!s.is_zero(), || format!("q={q} ℓ={ell}: boundary value is zero"))?;
            verify_at(q, k, 3)?;
            boundary.push(format!("(q={q}, ℓ={ell})"));
        }
    }
    Ok(format!(
        "all {} values exact; boundary {} confirmed numerically at dmax 3",
        cases.len(),
        boundary.join(", ")
    ))
}

fn criterion_5() -> Outcome {
    let f2 = f(2);
    let mut found = Vec::new();
    for k in [5, 7, 9] {
        let s = exact_prime_sum(&f2, k).map_err(e)?;
        let r = verify(&f2, k, 8, false).map_err(e)?;
        ensure(r.matches && r.precision == 9 * k as i64, || {
            format!("k={k}: mismatch at {:?}", r.first_mismatch)
        })?;
        found.push(format!("k={k}: {s}"));
    }
    Ok(found.join("; "))
}

fn criterion_6() -> Outcome {
    let dmax = 4;
    for q in [2, 3, 4] {
        let fq = f(q);
        let n = (q as i64 - 1) * (dmax as i64 + 1);
        let pibar = pibar_qm1_series(&fq, pibar_qm1_precision(&fq, dmax), dmax).map_err(e)?;
        for m in 1..=(q as usize + 2) {
            let s = numeric_e_spec(&fq, m, dmax, true).map_err(e)?;
            ensure(s.precision() == n, || format!("q={q} m={m}: precision {}", s.precision()))?;
            if m == 1 || m == q as usize + 1 {
                let j = if m == 1 { 1 } else { 2 };
                let dj = RatFun::from_poly(carlitz_d(&fq, j).map_err(e)?);
                let sign = if m % 2 == 0 { FqElem::ONE } else { fq.neg(FqElem::ONE) };
                let expected = pibar.pow(m as u64).mul_exact(&dj.inv().map_err(e)?).scale(sign);
                ensure(expected.precision() >= n, || format!("q={q} m={m}: π̄ precision too low"))?;
                ensure(s.agrees_with(&expected), || format!("q={q} m={m}: {s} vs {expected}"))?;
                ensure(!s.is_zero_within_precision(), || format!("q={q} m={m}: vanished"))?;
            } else {
                ensure(s.is_zero_within_precision(), || format!("q={q} m={m}: {s}"))?;
            }
        }
    }
    Ok("q ∈ {2,3,4}, m ≤ q+2, dmax 4".into())
}

fn criterion_7() -> Outcome {
    for q in [2u64, 3] {
        let fq = f(q);
        let p = fq.characteristic() as u64;
        for k in [q - 1, 2 * (q - 1)] {
            let a = numeric_zeta(&fq, p * k, 6).map_err(e)?;
            let b = numeric_zeta(&fq, k, 6).map_err(e)?.pow(p);
            ensure(a.agrees_with(&b), || format!("q={q} k={k}: numeric ζ(pk) ≠ ζ(k)^p"))?;
            let ell = (k / (q - 1)) as u32;
            let lhs = spec_elincomb(&fq, &power_sum_in_e(ell, None).map_err(e)?).map_err(e)?.pow(p);
            let rhs = spec_elincomb(&fq, &power_sum_in_e(p as u32 * ell, None).map_err(e)?).map_err(e)?;
            ensure(lhs == rhs, || format!("q={q} ℓ={ell}: exact routes differ"))?;
        }
    }
    Ok("numeric and exact routes agree".into())
}

fn criterion_8() -> Outcome {
    let big = BigInt::from;
    let part = |p: &[u32]| Partition::new(p.to_vec()).unwrap();
    for ell in 1..=12 {
        let c = power_sum_in_e(ell, None).map_err(e)?.coefficient(&Partition::repeated(1, ell as usize));
        ensure(c == big(1), || format!("d_1^{ell} = {c}"))?;
    }
    for p in [2u32, 3, 5] {
        for ell in 1..=4 {
            let c = gp_expansion(p, ell, None).map_err(e)?.coefficient(&Partition::repeated(1, (p * ell) as usize));
            ensure(c == big(0), || format!("c_1^{} = {c} for p={p}", p * ell))?;
        }
    }
    let p3 = power_sum_in_e(3, None).map_err(e)?;
    let p3_ok = p3.len() == 3
        && p3.coefficient(&part(&[1, 1, 1])) == big(1)
        && p3.coefficient(&part(&[3])) == big(3)
        && p3.coefficient(&part(&[2, 1])) == big(-3);
    ensure(p3_ok, || format!("p_3 = {p3}"))?;
    let p6 = power_sum_in_e(6, None).map_err(e)?;
    let p6_ok = p6.coefficient(&part(&[1; 6])) == big(1)
        && p6.coefficient(&part(&[3, 1, 1, 1])) == big(6)
        && p6.coefficient(&part(&[3, 3])) == big(3);
    ensure(p6_ok, || "p_6 display coefficients".into())?;
    let sq = p3.mul(&p3);
    let sq_ok = sq.coefficient(&part(&[1; 6])) == big(1)
        && sq.coefficient(&part(&[3, 1, 1, 1])) == big(6)
        && sq.coefficient(&part(&[3, 3])) == big(9);
    ensure(sq_ok, || "p_3^2 display coefficients".into())?;

    let mut failures = Vec::new();
    for (p, q, ell) in [(2u32, 2u32, 3u32), (3, 3, 2), (2, 4, 3)] {
        let n = p * ell;
        let hook = Partition::hook(q + 1, (n - q - 1) as usize);
        let d = power_sum_in_e(n, None).map_err(e)?.coefficient(&hook);
        let sign = if q % 2 == 0 { 1 } else { -1 };
        ensure(d == big(sign * n as i64), || format!("d at (p,q,ℓ)=({p},{q},{ell}) is {d}"))?;
        let c = gp_expansion(p, ell, None).map_err(e)?.coefficient(&hook);
        if &c * BigInt::from(p) != -&d {
            failures.push(format!("(p,q,ℓ)=({p},{q},{ell}): c = {c}, -d/p = {}", -&d / BigInt::from(p)));
        }
    }
    ensure(failures.is_empty(), || format!("c = -d/p fails at {}", failures.join("; ")))?;
    Ok("all coefficients match".into())
}

fn criterion_9() -> Outcome {
    for p in [2u32, 3, 5] {
        // (1 - U^p) / (1 - U)^p by integer series arithmetic
        let len = 13;
        let mut series = vec![0i64; len];
        series[0] = 1;
        for _ in 0..p {
            for i in 1..len {
                series[i] += series[i - 1];
            }
        }
        let gen: Vec<i64> = (0..len)
            .map(|r| series[r] - if r >= p as usize { series[r - p as usize] } else { 0 })
            .collect();
        for r in 0..=12u32 {
            let c = psi_count(p, r);
            ensure(c as i64 == gen[r as usize], || format!("ψ({p},{r}) = {c}, expected {}", gen[r as usize]))?;
        }
        let fp = f(p as u64);
        let gp = GpInverse::new(&fp).map_err(e)?;
        let (num, den) = gp.fraction_at(&Poly::t(&fp));
        let g = irrsum::laurent::expand_fraction(&num, &den, 13);
        for r in 1..=12u32 {
            let c = psi_count(p, r);
            ensure(c.is_multiple_of(p as u64), || format!("ψ({p},{r}) not divisible by p"))?;
            let expected = fp.from_int(((c / p as u64) % p as u64) as i64);
            ensure(g.coeff(r as i64) == Some(expected), || format!("G_{p} coefficient of U^{r}"))?;
        }
    }
    Ok("p ∈ {2,3,5}, r ≤ 12".into())
}

fn criterion_10() -> Outcome {
    for q in [2, 3, 4, 5] {
        for k in 1..=8 {
            ensure(scaling_identity_check(&f(q), k).map_err(e)?, || format!("q={q} k={k}"))?;
        }
    }
    Ok("q ∈ {2,3,4,5}, k ≤ 8; unit-sum form checked for q ∈ {2,4}".into())
}

fn criterion_11() -> Outcome {
    let f2 = f(2);
    let s = numeric_prime_sum(&SumRequest::new(&f2, 3, 6, true).unwrap()).map_err(e)?;
    let r = pade_reconstruct(&s, 0, 4).map_err(e)?;
    let exact = exact_prime_sum(&f2, 3).map_err(e)?;
    ensure(r == exact, || format!("reconstructed {r}"))?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let mut failures = 0;
    for i in 0..50 {
        let fq = if i % 2 == 0 { f(2) } else { f(3) };
        let q = fq.order();
        let mut random_poly = |deg: usize| {
            let coeffs = (0..=deg).map(|_| fq.elem(rng.gen_range(0..q)).unwrap()).collect();
            Poly::new(&fq, coeffs)
        };
        let num = random_poly(5);
        let mut den = random_poly(5);
        if den.is_zero() {
            den = Poly::one(&fq);
        }
        let r = RatFun::new(num, den).map_err(e)?;
        if pade_reconstruct(&expand(&r, 30), 5, 5).ok() != Some(r) {
            failures += 1;
        }
    }
    ensure(failures == 0, || format!("{failures} of 50 round trips failed"))?;
    Ok("(1)/(T^4+T^2) recovered; 50/50 round trips".into())
}

fn criterion_12() -> Outcome {
    let outputs: Vec<Vec<u8>> = [1, 2, 8]
        .iter()
        .map(|t| {
            let out = Command::new(env!("CARGO_BIN_EXE_irrsum"))
                .args(["--format", "json", "--threads", &t.to_string()])
                .args(["verify", "--q", "2", "--k", "3", "--max-degree", "6"])
                .output()
                .expect("binary runs");
            assert!(out.status.success());
            out.stdout
        })
        .collect();
    ensure(!outputs[0].is_empty(), || "empty output".into())?;
    ensure(outputs.iter().all(|o| o == &outputs[0]), || "outputs differ across thread counts".into())?;
    Ok(format!("{} identical bytes for 1, 2, 8 threads", outputs[0].len()))
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        (1, "q=2, k=1 sum vanishes through u^12", criterion_1),
        (2, "q=2, k=3 exact value and verification", criterion_2),
        (3, "vanishing for ℓ ≤ q/p", criterion_3),
        (4, "explicit value for q/p < ℓ ≤ 2q/p", criterion_4),
        (5, "q=2, k ∈ {5,7,9} beyond the explicit range", criterion_5),
        (6, "monic elementary symmetric values", criterion_6),
        (7, "ζ(pk) = ζ(k)^p", criterion_7),
        (8, "symmetric-function coefficients", criterion_8),
        (9, "ψ counts and G_p series", criterion_9),
        (10, "unit scaling identities", criterion_10),
        (11, "rational reconstruction", criterion_11),
        (12, "verify output independent of threads", criterion_12),
    ];
    let mut unexpected = Vec::new();
    for (id, title, run) in criteria {
        let outcome = run();
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        match &outcome {
            Ok(detail) => println!("PASS {id:>2} {title}: {detail}"),
            Err(why) if expected_fail => println!("FAIL {id:>2} {title}: {why} (known)"),
            Err(why) => println!("FAIL {id:>2} {title}: {why}"),
        }
        if outcome.is_ok() == expected_fail {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
    println!("acceptance: all outcomes as expected");
}
