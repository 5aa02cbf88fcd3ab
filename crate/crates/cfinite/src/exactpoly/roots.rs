use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_prime::nt_funcs::factorize;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dense::{squarefree_part, DensePoly};
use super::factored::FactoredPoly;
use crate::error::{invalid, Error, Result};

/// Integer coefficients with content 1 and positive leading coefficient.
fn primitive_integer_form(p: &DensePoly) -> Vec<BigInt> {
    let den_lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den_lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|c| sign.clone() * c / &content).collect()
}

fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    if n.is_one() {
        return out;
    }
    for (p, k) in factorize(n.clone()) {
        let base = out.clone();
        let mut pk = BigUint::one();
        for _ in 0..k {
            pk *= &p;
            out.extend(base.iter().map(|d| d * &pk));
        }
    }
    out.sort();
    out
}

/// Sign-free test of `p(u/v) = 0` on integer coefficients.
fn vanishes_at(coeffs: &[BigInt], u: &BigInt, v: &BigInt) -> bool {
    let d = coeffs.len() - 1;
    let mut acc = coeffs[d].clone();
    let mut vpow = BigInt::one();
    for i in (0..d).rev() {
        vpow *= v;
        acc = acc * u + &coeffs[i] * &vpow;
    }
    acc.is_zero()
}

/// All roots of `r` with multiplicities, provided they are all rational.
///
/// Candidates `u/v` come from the rational root theorem applied to the
/// squarefree part; multiplicities are then read off by dividing `r`.
pub fn rational_roots(r: &DensePoly) -> Result<FactoredPoly> {
    let d = r.degree().ok_or_else(|| invalid("roots of the zero polynomial"))?;
    if r.constant_term().is_zero() {
        return Err(Error::ZeroRoot);
    }
    if d == 0 {
        return Ok(FactoredPoly::one());
    }
    let sf = squarefree_part(r)?;
    let want = sf.degree().unwrap_or(0);
    let ints = primitive_integer_form(&sf);
    let a0 = ints[0].magnitude().clone();
    let ad = ints[want].magnitude().clone();
    let nums = divisors(&a0);
    let dens = divisors(&ad);

    let mut found = Vec::new();
    'outer: for v in &dens {
        let v = BigInt::from_biguint(Sign::Plus, v.clone());
        for u in &nums {
            let u = BigInt::from_biguint(Sign::Plus, u.clone());
            if !u.gcd(&v).is_one() {
                continue;
            }
            for s in [u.clone(), -u.clone()] {
                if vanishes_at(&ints, &s, &v) {
                    found.push(BigRational::new(s, v.clone()));
                    if found.len() == want {
                        break 'outer;
                    }
                }
            }
        }
    }
    if found.len() < want {
        return Err(Error::NotSplitOverRationals);
    }

    let mut rest = r.monic();
    let mut pairs = Vec::with_capacity(found.len());
    for root in found {
        let lin = DensePoly::linear(&root);
        let mut m = 0u32;
        while let Some(q) = rest.exact_div(&lin) {
            rest = q;
            m += 1;
        }
        pairs.push((root, m));
    }
    if rest.degree() != Some(0) {
        return Err(Error::Internal("root multiplicities do not exhaust the degree".into()));
    }
    FactoredPoly::new(pairs)
}
