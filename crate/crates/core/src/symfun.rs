//! Integer symmetric functions in the elementary basis `e_λ`.
//!
//! An [`ELinComb`] is a homogeneous integer combination of products
//! `e_λ = e_{λ_1} e_{λ_2} ...`. Products of basis elements concatenate parts,
//! so restricting every intermediate result to partitions whose parts lie in
//! an allowed set never loses a term of the restricted final answer.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldDesc, FqElem};

/// Largest degree for which unrestricted expansions are attempted.
pub const MAX_UNRESTRICTED_DEGREE: u32 = 40;

/// Set of admissible part sizes.
pub type PartSet = BTreeSet<u32>;

/// A partition, stored with parts weakly decreasing. Ordered
/// reverse-lexicographically: `[4] < [3, 1] < [2, 2] < [2, 1, 1] < [1, 1, 1, 1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Partition> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    /// `(m^count)`, e.g. `1^ℓ`.
    pub fn repeated(m: u32, count: usize) -> Partition {
        Partition(vec![m; count])
    }

    /// `(head, 1^ones)` for `head >= 1`.
    pub fn hook(head: u32, ones: usize) -> Partition {
        let mut parts = vec![head];
        parts.extend(std::iter::repeat_n(1, ones));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `|λ|`.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiset union of parts.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] >= other.0[j] {
                parts.push(self.0[i]);
                i += 1;
            } else {
                parts.push(other.0[j]);
                j += 1;
            }
        }
        parts.extend_from_slice(&self.0[i..]);
        parts.extend_from_slice(&other.0[j..]);
        Partition(parts)
    }

    /// Adds a single part.
    pub fn with_part(&self, m: u32) -> Partition {
        let pos = self.0.iter().position(|&x| x < m).unwrap_or(self.0.len());
        let mut parts = self.0.clone();
        parts.insert(pos, m);
        Partition(parts)
    }

    pub fn parts_within(&self, allowed: &PartSet) -> bool {
        self.0.iter().all(|m| allowed.contains(m))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All partitions of `n`, optionally with parts restricted to `allowed`, in
/// reverse-lexicographic order. `n = 0` yields the empty partition.
pub fn partitions(n: u32, allowed: Option<&PartSet>) -> impl Iterator<Item = Partition> {
    fn go(
        rest: u32,
        max_part: u32,
        allowed: Option<&PartSet>,
        cur: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=rest.min(max_part)).rev() {
            if allowed.is_some_and(|a| !a.contains(&part)) {
                continue;
            }
            cur.push(part);
            go(rest - part, part, allowed, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, allowed, &mut Vec::new(), &mut out);
    out.into_iter()
}

/// A homogeneous integer combination of `e_λ`.
#[derive(Clone, PartialEq, Eq)]
pub struct ELinComb {
    degree: u32,
    terms: BTreeMap<Partition, BigInt>,
}

impl ELinComb {
    pub fn zero(degree: u32) -> ELinComb {
        ELinComb {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `e_∅ = 1`.
    pub fn unit() -> ELinComb {
        ELinComb::basis(Partition::empty())
    }

    /// `e_m`.
    pub fn e(m: u32) -> ELinComb {
        ELinComb::basis(Partition(vec![m]))
    }

    pub fn basis(lambda: Partition) -> ELinComb {
        let mut c = ELinComb::zero(lambda.size());
        c.terms.insert(lambda, BigInt::one());
        c
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `e_λ` (zero if absent).
    pub fn coefficient(&self, lambda: &Partition) -> BigInt {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    /// Every stored partition has size equal to the declared degree.
    pub fn is_homogeneous(&self) -> bool {
        self.terms.keys().all(|l| l.size() == self.degree)
    }

    fn add_term(&mut self, lambda: Partition, c: BigInt) {
        debug_assert_eq!(lambda.size(), self.degree);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(lambda);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &ELinComb) -> ELinComb {
        assert_eq!(self.degree, other.degree, "sum of different degrees");
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigInt) -> ELinComb {
        if s.is_zero() {
            return ELinComb::zero(self.degree);
        }
        ELinComb {
            degree: self.degree,
            terms: self.terms.iter().map(|(l, c)| (l.clone(), c * s)).collect(),
        }
    }

    pub fn sub(&self, other: &ELinComb) -> ELinComb {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    /// Product in the e-basis: `e_λ e_μ = e_{λ ∪ μ}`.
    pub fn mul(&self, other: &ELinComb) -> ELinComb {
        let mut out = ELinComb::zero(self.degree + other.degree);
        for (la, ca) in &self.terms {
            for (lb, cb) in &other.terms {
                out.add_term(la.union(lb), ca * cb);
            }
        }
        out
    }

    /// Product with the single generator `e_m`.
    pub fn mul_e(&self, m: u32) -> ELinComb {
        ELinComb {
            degree: self.degree + m,
            terms: self
                .terms
                .iter()
                .map(|(l, c)| (l.with_part(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> ELinComb {
        let mut acc = ELinComb::unit();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Drops every term with a part outside `allowed`.
    pub fn restrict(&self, allowed: &PartSet) -> ELinComb {
        ELinComb {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| l.parts_within(allowed))
                .map(|(l, c)| (l.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact division of every coefficient by `d`; `None` if some
    /// coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<ELinComb> {
        let mut terms = BTreeMap::new();
        for (l, c) in &self.terms {
            let (quo, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            terms.insert(l.clone(), quo);
        }
        Some(ELinComb {
            degree: self.degree,
            terms,
        })
    }
}

impl fmt::Display for ELinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (l, c) in &self.terms {
            let mut mono = Vec::new();
            let mut i = 0;
            let parts = l.parts();
            while i < parts.len() {
                let j = parts[i..].iter().take_while(|&&x| x == parts[i]).count();
                mono.push(if j == 1 {
                    format!("e{}", parts[i])
                } else {
                    format!("e{}^{}", parts[i], j)
                });
                i += j;
            }
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ELinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_degree_bound(n: u32, allowed: Option<&PartSet>) -> Result<()> {
    if allowed.is_none() && n > MAX_UNRESTRICTED_DEGREE {
        return Err(Error::SizeBound(format!(
            "unrestricted expansion of degree {n} exceeds {MAX_UNRESTRICTED_DEGREE}"
        )));
    }
    Ok(())
}

/// Power sums `p_0, ..., p_n` in the e-basis via Newton's recurrence
/// `p_m = (-1)^(m-1) m e_m + sum_{i=1}^{m-1} (-1)^(i-1) e_i p_(m-i)`,
/// restricted to `allowed` at every step. `p_0` is returned as zero.
pub fn power_sums_in_e(n: u32, allowed: Option<&PartSet>) -> Result<Vec<ELinComb>> {
    check_degree_bound(n, allowed)?;
    let ok = |m: u32| allowed.is_none_or(|a| a.contains(&m));
    let sign = |i: u32| if i % 2 == 1 { BigInt::one() } else { BigInt::from(-1) };
    let mut ps = vec![ELinComb::zero(0)];
    for m in 1..=n {
        let mut acc = ELinComb::zero(m);
        if ok(m) {
            acc.add_term(Partition(vec![m]), sign(m) * BigInt::from(m));
        }
        for i in 1..m {
            if !ok(i) {
                continue;
            }
            let s = sign(i);
            for (l, c) in &ps[(m - i) as usize].terms {
                acc.add_term(l.with_part(i), &s * c);
            }
        }
        ps.push(acc);
    }
    Ok(ps)
}

/// `p_n` in the e-basis.
pub fn power_sum_in_e(n: u32, allowed: Option<&PartSet>) -> Result<ELinComb> {
    if n == 0 {
        return Err(Error::InvalidArgument("power sums start at degree 1".into()));
    }
    Ok(power_sums_in_e(n, allowed)?.pop().unwrap())
}

/// `g_p(X_1^ℓ, X_2^ℓ, ...) = (p_ℓ^p - p_{pℓ}) / p` in the e-basis, with exact
/// integer arithmetic throughout.
pub fn gp_expansion(p: u32, ell: u32, allowed: Option<&PartSet>) -> Result<ELinComb> {
    if ell == 0 {
        return Err(Error::InvalidArgument("ℓ must be positive".into()));
    }
    let n = p * ell;
    let ps = power_sums_in_e(n, allowed)?;
    let mut power = ps[ell as usize].pow(p);
    if let Some(a) = allowed {
        power = power.restrict(a);
    }
    let diff = power.sub(&ps[n as usize]);
    diff.div_exact(&BigInt::from(p)).ok_or_else(|| {
        Error::Internal(format!("p_{ell}^{p} - p_{n} has a coefficient not divisible by {p}"))
    })
}

/// Evaluates a symmetric function at a finite multiset of field elements,
/// computing each `e_m` directly from `prod (1 + x_i Z)`.
pub fn evaluate_on_points(a: &ELinComb, field: &FieldDesc, points: &[FqElem]) -> FqElem {
    let max_part = a
        .terms
        .keys()
        .flat_map(|l| l.parts().first().copied())
        .max()
        .unwrap_or(0) as usize;
    let mut e = vec![FqElem::ZERO; max_part + 1];
    e[0] = FqElem::ONE;
    for &x in points {
        for m in (1..=max_part).rev() {
            e[m] = field.add(e[m], field.mul(x, e[m - 1]));
        }
    }
    let p = BigInt::from(field.characteristic());
    let mut acc = FqElem::ZERO;
    for (l, c) in &a.terms {
        let c = c.mod_floor(&p).to_i64().unwrap();
        let mut term = field.from_int(c);
        for &m in l.parts() {
            term = field.mul(term, e[m as usize]);
        }
        acc = field.add(acc, term);
    }
    acc
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    parts: Vec<u32>,
    coeff: String,
}

impl Serialize for ELinComb {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(l, c)| TermRepr {
                parts: l.0.clone(),
                coeff: c.to_string(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ELinComb {
    /// The degree of an empty combination is not recoverable and reads as 0.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let degree = terms.first().map_or(0, |t| t.parts.iter().sum());
        let mut out = ELinComb::zero(degree);
        for t in terms {
            let lambda = Partition::new(t.parts).map_err(D::Error::custom)?;
            if lambda.size() != degree {
                return Err(D::Error::custom("inhomogeneous combination"));
            }
            let c: BigInt = t.coeff.parse().map_err(D::Error::custom)?;
            out.add_term(lambda, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn set(s: &[u32]) -> PartSet {
        s.iter().copied().collect()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn partition_streams() {
        assert_eq!(partitions(4, None).count(), 5);
        assert_eq!(
            partitions(4, None).collect::<Vec<_>>(),
            vec![part(&[4]), part(&[3, 1]), part(&[2, 2]), part(&[2, 1, 1]), part(&[1, 1, 1, 1])]
        );
        assert_eq!(
            partitions(6, Some(&set(&[1, 3]))).collect::<Vec<_>>(),
            vec![part(&[3, 3]), part(&[3, 1, 1, 1]), part(&[1, 1, 1, 1, 1, 1])]
        );
        assert_eq!(partitions(5, Some(&set(&[3]))).count(), 0);
        assert_eq!(partitions(0, None).collect::<Vec<_>>(), vec![Partition::empty()]);
        // sorted storage matches the iteration order
        let v: Vec<Partition> = partitions(7, None).collect();
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(v, sorted);
    }

    #[test]
    fn partition_counts() {
        // p(n) for n = 0..=12
        let expected = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
        for (n, &c) in expected.iter().enumerate() {
            assert_eq!(partitions(n as u32, None).count(), c);
        }
    }

    #[test]
    fn newton_small() {
        assert_eq!(power_sum_in_e(1, None).unwrap(), ELinComb::e(1));
        let p3 = power_sum_in_e(3, None).unwrap();
        assert_eq!(p3.len(), 3);
        assert_eq!(p3.coefficient(&part(&[1, 1, 1])), big(1));
        assert_eq!(p3.coefficient(&part(&[2, 1])), big(-3));
        assert_eq!(p3.coefficient(&part(&[3])), big(3));
        assert_eq!(p3.to_string(), "3*e3 - 3*e2*e1 + e1^3");
        let p6 = power_sum_in_e(6, Some(&set(&[1, 3]))).unwrap();
        assert_eq!(p6.len(), 3);
        assert_eq!(p6.coefficient(&part(&[1; 6])), big(1));
        assert_eq!(p6.coefficient(&part(&[3, 1, 1, 1])), big(6));
        assert_eq!(p6.coefficient(&part(&[3, 3])), big(3));
    }

    #[test]
    fn e_mul_examples() {
        assert_eq!(ELinComb::e(1).mul(&ELinComb::e(1)), ELinComb::basis(part(&[1, 1])));
        let p3 = power_sum_in_e(3, None).unwrap();
        let sq = p3.mul(&p3).restrict(&set(&[1, 3]));
        assert_eq!(sq.coefficient(&part(&[1; 6])), big(1));
        assert_eq!(sq.coefficient(&part(&[3, 1, 1, 1])), big(6));
        assert_eq!(sq.coefficient(&part(&[3, 3])), big(9));
        assert_eq!(p3.mul(&ELinComb::unit()), p3);
    }

    #[test]
    fn gp_expansion_examples() {
        let g = gp_expansion(2, 3, None).unwrap();
        assert_eq!(g.degree(), 6);
        assert_eq!(g.coefficient(&part(&[3, 3])), big(3));
        assert_eq!(g.coefficient(&part(&[1; 6])), big(0));
        assert_eq!(g.coefficient(&part(&[3, 1, 1, 1])), big(0));
        assert_eq!(gp_expansion(2, 1, None).unwrap(), ELinComb::e(2));
        assert!(gp_expansion(2, 0, None).is_err());
    }

    #[test]
    fn ledger_coefficients() {
        for ell in 1..=12 {
            let p = power_sum_in_e(ell, None).unwrap();
            assert_eq!(p.coefficient(&Partition::repeated(1, ell as usize)), big(1));
        }
        for &(p, q, ell) in &[(2u32, 2u32, 3u32), (3, 3, 2), (2, 4, 3)] {
            let n = p * ell;
            let hook = Partition::hook(q + 1, (n - q - 1) as usize);
            let d = power_sum_in_e(n, None).unwrap().coefficient(&hook);
            let sign = if q % 2 == 0 { 1 } else { -1 };
            assert_eq!(d, big(sign * n as i64), "(p,q,ℓ)=({p},{q},{ell})");
            let c = gp_expansion(p, ell, None).unwrap().coefficient(&hook);
            if ell < q + 1 {
                assert_eq!(c * BigInt::from(p), -d);
            } else {
                // p_ℓ itself contains e_{q+1}, and its p-th power cancels the hook
                assert_eq!(c, big(0));
            }
        }
    }

    #[test]
    fn all_ones_coefficient_vanishes() {
        for p in [2u32, 3, 5] {
            for ell in 1..=4 {
                let g = gp_expansion(p, ell, None).unwrap();
                assert_eq!(g.coefficient(&Partition::repeated(1, (p * ell) as usize)), big(0));
            }
        }
    }

    #[test]
    fn pruning_is_sound() {
        for p in [2u32, 3] {
            for q in [2u32, 3, 4] {
                let allowed = set(&[1, q + 1]);
                for ell in 1..=6 {
                    if p * ell > MAX_UNRESTRICTED_DEGREE {
                        continue;
                    }
                    let full = gp_expansion(p, ell, None).unwrap();
                    let pruned = gp_expansion(p, ell, Some(&allowed)).unwrap();
                    assert_eq!(pruned, full.restrict(&allowed), "p={p} q={q} ℓ={ell}");
                    assert!(pruned.is_homogeneous() && full.is_homogeneous());
                }
            }
        }
    }

    #[test]
    fn size_bound() {
        assert!(matches!(power_sum_in_e(41, None), Err(Error::SizeBound(_))));
        assert!(power_sum_in_e(200, Some(&set(&[1, 3, 7]))).is_ok());
    }

    #[test]
    fn evaluation_oracles() {
        let f4 = FieldDesc::from_order(4).unwrap();
        let p2 = power_sum_in_e(2, None).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                let direct = f4.add(f4.mul(a, a), f4.mul(b, b));
                assert_eq!(evaluate_on_points(&p2, &f4, &[a, b]), direct);
            }
        }
        // g_2(X^3) directly: ((sum x^3)^2 - sum x^6) / 2 = sum_{i<j} x_i^3 x_j^3
        let f2 = FieldDesc::from_order(2).unwrap();
        let g = gp_expansion(2, 3, None).unwrap();
        for x in f2.elements() {
            for y in f2.elements() {
                for z in f2.elements() {
                    let c = [x, y, z].map(|t| f2.pow(t, 3));
                    let direct = f2.add(
                        f2.add(f2.mul(c[0], c[1]), f2.mul(c[0], c[2])),
                        f2.mul(c[1], c[2]),
                    );
                    assert_eq!(evaluate_on_points(&g, &f2, &[x, y, z]), direct);
                }
            }
        }
        assert_eq!(evaluate_on_points(&ELinComb::e(2), &f2, &[]), FqElem::ZERO);
        assert_eq!(evaluate_on_points(&ELinComb::unit(), &f2, &[]), FqElem::ONE);
    }

    #[test]
    fn json_schema() {
        let p3 = power_sum_in_e(3, None).unwrap();
        let s = serde_json::to_string(&p3).unwrap();
        assert_eq!(
            s,
            r#"[{"parts":[3],"coeff":"3"},{"parts":[2,1],"coeff":"-3"},{"parts":[1,1,1],"coeff":"1"}]"#
        );
        let back: ELinComb = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn newton_matches_direct_power_sums(pts in proptest::collection::vec(0u32..5, 4), n in 1u32..=8) {
                let f5 = FieldDesc::from_order(5).unwrap();
                let pts: Vec<FqElem> = pts.into_iter().map(|c| f5.elem(c).unwrap()).collect();
                let direct = pts.iter().fold(FqElem::ZERO, |acc, &x| f5.add(acc, f5.pow(x, n as u64)));
                let pn = power_sum_in_e(n, None).unwrap();
                prop_assert_eq!(evaluate_on_points(&pn, &f5, &pts), direct);
            }
        }
    }
}
