//! Tensor products of recurrence operators.
//!
//! [`tensor_factored`] works on roots: the product of two sequences is
//! annihilated by the lcm over all root pairs of `(x - φψ)^(e + ε - 1)`.
//! [`mul_coeff`] never looks at roots. It multiplies power sums pointwise and
//! converts back with Newton's identities, which yields the full product
//! `∏∏ (x - φᵢψⱼ)` counted with multiplicity rather than the lcm.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::exactpoly::{
    is_squarefree, reverse, squarefree_decomposition, DensePoly, ExactScalar, FactoredPoly,
};

pub fn tensor_factored(p: &FactoredPoly, q: &FactoredPoly) -> FactoredPoly {
    let mut acc: BTreeMap<ExactScalar, u32> = BTreeMap::new();
    for (phi, e) in p.factors() {
        for (psi, eps) in q.factors() {
            let m = e + eps - 1;
            let slot = acc.entry(phi * psi).or_insert(0);
            *slot = (*slot).max(m);
        }
    }
    FactoredPoly::from_map(acc)
}

/// `P_1..P_K` of a polynomial's roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSums {
    values: Vec<ExactScalar>,
}

impl PowerSums {
    pub fn new(values: Vec<ExactScalar>) -> Self {
        PowerSums { values }
    }

    pub fn values(&self) -> &[ExactScalar] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `P_k`, one-based.
    pub fn get(&self, k: usize) -> &ExactScalar {
        &self.values[k - 1]
    }

    pub fn pointwise(&self, other: &PowerSums) -> PowerSums {
        PowerSums::new(self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect())
    }
}

fn sign(k: usize) -> ExactScalar {
    if k % 2 == 0 {
        ExactScalar::one()
    } else {
        -ExactScalar::one()
    }
}

fn scalar(k: usize) -> ExactScalar {
    ExactScalar::from_integer(k.into())
}

/// Elementary symmetric functions `e_0..e_d` of the roots of a monic polynomial.
fn elementary(p: &DensePoly) -> Vec<ExactScalar> {
    let d = p.degree().unwrap_or(0);
    (0..=d).map(|k| sign(k) * p.coeff(d - k)).collect()
}

pub fn power_sums(p: &DensePoly, k: usize) -> Result<PowerSums> {
    if p.is_zero() {
        return Err(invalid("power sums of the zero polynomial"));
    }
    let e = elementary(&p.monic());
    let e_at = |i: usize| e.get(i).cloned().unwrap_or_else(ExactScalar::zero);
    let mut ps: Vec<ExactScalar> = Vec::with_capacity(k);
    for n in 1..=k {
        let mut acc = sign(n - 1) * scalar(n) * e_at(n);
        for i in 1..n {
            let ei = e_at(i);
            if !ei.is_zero() {
                acc += sign(i - 1) * ei * &ps[n - i - 1];
            }
        }
        ps.push(acc);
    }
    Ok(PowerSums::new(ps))
}

/// The monic degree-`d` polynomial whose first `d` power sums are `ps`.
pub fn poly_from_power_sums(ps: &PowerSums, d: usize) -> Result<DensePoly> {
    if ps.len() < d {
        return Err(invalid(format!("need {d} power sums, got {}", ps.len())));
    }
    let mut e = vec![ExactScalar::one()];
    for k in 1..=d {
        let mut acc = ExactScalar::zero();
        for i in 1..=k {
            acc += sign(i - 1) * &e[k - i] * ps.get(i);
        }
        e.push(acc / scalar(k));
    }
    let mut coeffs = vec![ExactScalar::zero(); d + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[d - k] = sign(k) * ek;
    }
    Ok(DensePoly::new(coeffs))
}

/// `(c, e)` with `c` clearing denominators of the monic `p` and `e` the
/// elementary symmetric functions of the roots of `p` scaled by `c`.
fn scaled_elementary(p: &DensePoly) -> (BigInt, Vec<BigInt>) {
    let e = elementary(&p.monic());
    let c = e.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut pow = BigInt::one();
    let mut out = Vec::with_capacity(e.len());
    for x in &e {
        out.push((x * ExactScalar::from_integer(pow.clone())).to_integer());
        pow *= &c;
    }
    (c, out)
}

fn int_power_sums(e: &[BigInt], k: usize) -> Vec<BigInt> {
    let zero = BigInt::zero();
    let e_at = |i: usize| e.get(i).unwrap_or(&zero);
    let mut ps: Vec<BigInt> = Vec::with_capacity(k);
    for n in 1..=k {
        let mut acc = e_at(n) * BigInt::from(n);
        if n % 2 == 0 {
            acc = -acc;
        }
        for i in 1..n {
            let ei = e_at(i);
            if ei.is_zero() {
                continue;
            }
            let term = ei * &ps[n - i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        ps.push(acc);
    }
    ps
}

/// Full product of root multisets, from coefficients alone.
///
/// Runs over the integers after scaling both root sets by their
/// denominators.
pub fn mul_coeff(p: &DensePoly, q: &DensePoly) -> Result<DensePoly> {
    let (m, n) = match (p.degree(), q.degree()) {
        (Some(m), Some(n)) => (m, n),
        _ => return Err(invalid("mul of the zero polynomial")),
    };
    let k = m * n;
    let (cp, ep) = scaled_elementary(p);
    let (cq, eq) = scaled_elementary(q);
    let ps: Vec<BigInt> = int_power_sums(&ep, k)
        .into_iter()
        .zip(int_power_sums(&eq, k))
        .map(|(a, b)| a * b)
        .collect();
    let mut e = vec![BigInt::one()];
    for j in 1..=k {
        let mut acc = BigInt::zero();
        for i in 1..=j {
            let term = &e[j - i] * &ps[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(j));
        if !rem.is_zero() {
            return Err(Error::Internal("inexact Newton step".into()));
        }
        e.push(quot);
    }
    let c = ExactScalar::from_integer(cp * cq);
    let mut scale = ExactScalar::one();
    let mut coeffs = vec![ExactScalar::zero(); k + 1];
    for (j, ej) in e.into_iter().enumerate() {
        coeffs[k - j] = sign(j) * ExactScalar::from_integer(ej) / &scale;
        scale *= &c;
    }
    Ok(DensePoly::new(coeffs))
}

/// How many distinct roots occur with each multiplicity, highest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepetitionProfile {
    pairs: Vec<(u32, usize)>,
}

impl RepetitionProfile {
    pub fn new(mut pairs: Vec<(u32, usize)>) -> Self {
        pairs.retain(|(_, c)| *c > 0);
        pairs.sort_by_key(|p| std::cmp::Reverse(p.0));
        RepetitionProfile { pairs }
    }

    pub fn pairs(&self) -> &[(u32, usize)] {
        &self.pairs
    }

    pub fn degree(&self) -> usize {
        self.pairs.iter().map(|(m, c)| *m as usize * c).sum()
    }
}

/// Profile read off a squarefree decomposition, no root finding involved.
pub fn repetition_profile(r: &DensePoly) -> Result<RepetitionProfile> {
    let dec = squarefree_decomposition(r)?;
    Ok(RepetitionProfile::new(
        dec.into_iter()
            .map(|(a, i)| (i, a.degree().unwrap_or(0)))
            .collect(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    NotFactorable,
    PossiblyFactorable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFactReport {
    pub verdict: Verdict,
    pub profile: RepetitionProfile,
}

/// Screens a squarefree `r` of degree `d` through the profile of `r ⊗ r*`.
///
/// Every such product carries the root 1 with multiplicity `d`. Any
/// repetition beyond that is necessary for `r` to be a tensor product.
pub fn test_fact(r: &DensePoly) -> Result<TestFactReport> {
    let d = r.degree().ok_or_else(|| invalid("zero polynomial"))?;
    if d < 2 {
        return Err(invalid("degree must be at least 2"));
    }
    let r = r.monic();
    let rev = reverse(&r)?;
    if !is_squarefree(&r)? {
        return Err(invalid("polynomial is not squarefree"));
    }
    let big = mul_coeff(&r, &rev)?;
    let profile = repetition_profile(&big)?;
    let generic = RepetitionProfile::new(vec![(d as u32, 1), (1, d * d - d)]);
    let verdict = if profile == generic {
        Verdict::NotFactorable
    } else {
        Verdict::PossiblyFactorable
    };
    Ok(TestFactReport { verdict, profile })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{frac, int};

    fn fp(roots: &[ExactScalar]) -> FactoredPoly {
        FactoredPoly::from_roots(roots).unwrap()
    }

    #[test]
    fn degree_can_drop_below_sum() {
        let pm = fp(&[int(1), int(-1)]);
        assert_eq!(tensor_factored(&pm, &pm).degree(), 2);
        let one = fp(&[int(1)]);
        assert_eq!(tensor_factored(&one, &one).degree(), 1);
    }

    #[test]
    fn tensor_examples() {
        let p = fp(&[int(1), int(2)]);
        assert_eq!(tensor_factored(&p, &fp(&[int(3), int(4)])), fp(&[int(3), int(4), int(6), int(8)]));
        assert_eq!(tensor_factored(&p, &p), fp(&[int(1), int(2), int(4)]));
        let a = fp(&[int(1), int(2), int(4)]);
        let b = fp(&[frac(1, 2), frac(1, 4)]);
        assert_eq!(
            tensor_factored(&a, &b),
            fp(&[frac(1, 4), frac(1, 2), int(1), int(2)])
        );
        let unit = fp(&[int(1)]);
        assert_eq!(tensor_factored(&a, &unit), a);
    }

    #[test]
    fn power_sum_examples() {
        let ps = power_sums(&DensePoly::from_ints(&[-2, 1]), 4).unwrap();
        assert_eq!(ps.values(), &[int(2), int(4), int(8), int(16)]);
        let ps = power_sums(&DensePoly::from_ints(&[12, -7, 1]), 2).unwrap();
        assert_eq!(ps.values(), &[int(7), int(25)]);
        let ps = power_sums(&DensePoly::from_ints(&[-1, 0, 1]), 4).unwrap();
        assert_eq!(ps.values(), &[int(0), int(2), int(0), int(2)]);
    }

    #[test]
    fn from_power_sums_examples() {
        let p = poly_from_power_sums(&PowerSums::new(vec![int(7), int(25)]), 2).unwrap();
        assert_eq!(p, DensePoly::from_ints(&[12, -7, 1]));
        let p = poly_from_power_sums(&PowerSums::new(vec![int(0), int(4), int(0), int(4)]), 4).unwrap();
        assert_eq!(p, DensePoly::from_ints(&[1, 0, -2, 0, 1]));
        assert!(poly_from_power_sums(&PowerSums::new(vec![int(1)]), 2).is_err());
    }

    #[test]
    fn mul_examples() {
        let r = mul_coeff(&DensePoly::from_ints(&[2, -3, 1]), &DensePoly::from_ints(&[12, -7, 1])).unwrap();
        assert_eq!(r, DensePoly::from_ints(&[576, -504, 158, -21, 1]));
        let p = DensePoly::from_ints(&[5, 0, 3, 2]);
        assert_eq!(mul_coeff(&p, &DensePoly::from_ints(&[-1, 1])).unwrap(), p.monic());
        let s = DensePoly::from_ints(&[-1, 0, 1]);
        assert_eq!(mul_coeff(&s, &s).unwrap(), DensePoly::from_ints(&[1, 0, -2, 0, 1]));
    }

    #[test]
    fn testfact_examples() {
        let quartic = DensePoly::from_ints(&[576, -504, 158, -21, 1]);
        assert_eq!(test_fact(&quartic).unwrap().verdict, Verdict::PossiblyFactorable);
        let cubic = fp(&[int(2), int(3), int(5)]).expand();
        let rep = test_fact(&cubic).unwrap();
        assert_eq!(rep.verdict, Verdict::NotFactorable);
        assert_eq!(rep.profile.pairs(), &[(3, 1), (1, 6)]);
        let four = fp(&[int(1), int(2), int(3), int(4)]).expand();
        assert_eq!(test_fact(&four).unwrap().verdict, Verdict::PossiblyFactorable);
        let square = DensePoly::from_ints(&[1, -2, 1]);
        assert!(test_fact(&square).is_err());
    }
}
