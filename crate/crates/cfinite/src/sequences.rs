//! Concrete C-finite sequences and term-level checks of operator identities.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::exactpoly::{
    frac, int, lcm, rational_roots, squarefree_decomposition, squarefree_part, DensePoly, ExactScalar,
};
use crate::tensor::{mul_coeff, tensor_factored};

/// A recurrence operator together with its initial values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFiniteSeq {
    charpoly: DensePoly,
    initial: Vec<ExactScalar>,
}

impl CFiniteSeq {
    /// The operator is made monic; it needs a nonzero constant term and
    /// exactly `deg` initial values.
    pub fn new(charpoly: &DensePoly, initial: Vec<ExactScalar>) -> Result<Self> {
        let d = charpoly.degree().ok_or_else(|| invalid("zero operator"))?;
        if charpoly.constant_term().is_zero() {
            return Err(Error::ZeroRoot);
        }
        if initial.len() != d {
            return Err(invalid(format!("need {d} initial values, got {}", initial.len())));
        }
        Ok(CFiniteSeq {
            charpoly: charpoly.monic(),
            initial,
        })
    }

    pub fn charpoly(&self) -> &DensePoly {
        &self.charpoly
    }

    pub fn initial_values(&self) -> &[ExactScalar] {
        &self.initial
    }

    pub fn unroll(&self, n: usize) -> Vec<ExactScalar> {
        let d = self.initial.len();
        let c = self.charpoly.coeffs();
        let mut out: Vec<ExactScalar> = self.initial.iter().take(n).cloned().collect();
        while out.len() < n {
            let k = out.len();
            let mut next = ExactScalar::zero();
            for i in 0..d {
                next -= &c[i] * &out[k - d + i];
            }
            out.push(next);
        }
        out
    }
}

pub fn unroll(seq: &CFiniteSeq, n: usize) -> Vec<ExactScalar> {
    seq.unroll(n)
}

/// Whether `p` applied through the shift vanishes on every full window.
pub fn annihilates(p: &DensePoly, terms: &[ExactScalar]) -> bool {
    let Some(d) = p.degree() else {
        return true;
    };
    let c = p.coeffs();
    (0..terms.len().saturating_sub(d)).all(|n| {
        c.iter()
            .enumerate()
            .fold(ExactScalar::zero(), |acc, (k, ck)| acc + ck * &terms[n + k])
            .is_zero()
    })
}

/// One solution of `A x = b`, preferring a nonzero first coordinate.
fn solve_linear(mut rows: Vec<Vec<ExactScalar>>, nvars: usize) -> Option<Vec<ExactScalar>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][col].is_zero() {
                let f = rows[k][col].clone();
                for c in 0..=nvars {
                    let t = &f * &rows[r][c];
                    rows[k][c] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[nvars].is_zero()) {
        return None;
    }
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    let assemble = |set: Option<usize>| {
        let mut x = vec![ExactScalar::zero(); nvars];
        if let Some(f) = set {
            x[f] = ExactScalar::one();
        }
        for (i, &pc) in pivots.iter().enumerate() {
            let mut v = rows[i][nvars].clone();
            if let Some(f) = set {
                v -= &rows[i][f];
            }
            x[pc] = v;
        }
        x
    };
    let base = assemble(None);
    if !base[0].is_zero() {
        return Some(base);
    }
    free.iter()
        .map(|&f| assemble(Some(f)))
        .find(|x| !x[0].is_zero())
        .or(Some(base))
}

/// Monic operator of least degree annihilating `terms`, with nonzero
/// constant term. Degrees up to half the number of terms are tried.
pub fn guess_recurrence(terms: &[ExactScalar]) -> Result<DensePoly> {
    if terms.iter().all(Zero::is_zero) {
        return Err(invalid("all terms are zero"));
    }
    let len = terms.len();
    let mut degenerate = false;
    for d in 1..=len / 2 {
        let rows: Vec<Vec<ExactScalar>> = (0..len - d)
            .map(|n| {
                let mut row: Vec<ExactScalar> = terms[n..n + d].to_vec();
                row.push(-terms[n + d].clone());
                row
            })
            .collect();
        if let Some(mut c) = solve_linear(rows, d) {
            if c[0].is_zero() {
                degenerate = true;
                continue;
            }
            c.push(ExactScalar::one());
            return Ok(DensePoly::new(c));
        }
    }
    if degenerate {
        Err(Error::DegenerateLeadingOrTrailingCoefficient)
    } else {
        Err(Error::NoRecurrenceFound)
    }
}

/// Initial values are drawn from this list.
pub fn small_rational_pool() -> Vec<ExactScalar> {
    vec![
        int(-3),
        int(-2),
        int(-1),
        int(0),
        int(1),
        int(2),
        int(3),
        frac(1, 2),
        frac(-1, 2),
        frac(2, 3),
        frac(-3, 2),
    ]
}

fn random_seq(p: &DensePoly, rng: &mut ChaCha8Rng, pool: &[ExactScalar]) -> Result<CFiniteSeq> {
    let d = p.degree().unwrap_or(0);
    let init = (0..d)
        .map(|_| pool.choose(rng).expect("non-empty pool").clone())
        .collect();
    CFiniteSeq::new(p, init)
}

/// Operator for term-wise products: the lcm formula on rational roots,
/// otherwise the same formula applied to the squarefree strata of `p` and `q`.
pub fn product_operator(p: &DensePoly, q: &DensePoly) -> Result<DensePoly> {
    match (rational_roots(p), rational_roots(q)) {
        (Ok(a), Ok(b)) => Ok(tensor_factored(&a, &b).expand()),
        (Err(Error::NotSplitOverRationals), _) | (_, Err(Error::NotSplitOverRationals)) => {
            let mut r = DensePoly::one();
            for (pk, k) in squarefree_decomposition(p)? {
                for (ql, l) in squarefree_decomposition(q)? {
                    let stratum = squarefree_part(&mul_coeff(&pk, &ql)?)?;
                    r = lcm(&r, &stratum.pow(k + l - 1))?;
                }
            }
            Ok(r)
        }
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

/// Term-wise products of random solutions of `p` and `q`, `n + deg r` terms
/// long, checked against `r`.
pub fn check_product_annihilated(
    p: &DensePoly,
    q: &DensePoly,
    r: &DensePoly,
    trials: usize,
    n: usize,
    seed: u64,
) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = small_rational_pool();
    let len = n + r.degree().unwrap_or(0);
    for _ in 0..trials {
        let a = random_seq(p, &mut rng, &pool)?.unroll(len);
        let b = random_seq(q, &mut rng, &pool)?.unroll(len);
        let prod: Vec<ExactScalar> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        if !annihilates(r, &prod) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_product_closure(p: &DensePoly, q: &DensePoly, trials: usize, n: usize, seed: u64) -> Result<bool> {
    let r = product_operator(p, q)?;
    check_product_annihilated(p, q, &r, trials, n, seed)
}

pub fn check_sum_annihilated(
    p: &DensePoly,
    q: &DensePoly,
    r: &DensePoly,
    trials: usize,
    n: usize,
    seed: u64,
) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = small_rational_pool();
    let len = n + r.degree().unwrap_or(0);
    for _ in 0..trials {
        let a = random_seq(p, &mut rng, &pool)?.unroll(len);
        let b = random_seq(q, &mut rng, &pool)?.unroll(len);
        let sum: Vec<ExactScalar> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        if !annihilates(r, &sum) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn verify_sum_closure(p: &DensePoly, q: &DensePoly, trials: usize, n: usize, seed: u64) -> Result<bool> {
    let r = lcm(p, q)?;
    check_sum_annihilated(p, q, &r, trials, n, seed)
}

/// `b c + u v` for random solutions of the four operators, against
/// `lcm(p₁ ⊗ q₁, p₂ ⊗ q₂)`.
pub fn verify_lincomb_closure(
    (p1, q1): (&DensePoly, &DensePoly),
    (p2, q2): (&DensePoly, &DensePoly),
    trials: usize,
    n: usize,
    seed: u64,
) -> Result<bool> {
    let r = lcm(&product_operator(p1, q1)?, &product_operator(p2, q2)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = small_rational_pool();
    let len = n + r.degree().unwrap_or(0);
    for _ in 0..trials {
        let b = random_seq(p1, &mut rng, &pool)?.unroll(len);
        let c = random_seq(q1, &mut rng, &pool)?.unroll(len);
        let u = random_seq(p2, &mut rng, &pool)?.unroll(len);
        let v = random_seq(q2, &mut rng, &pool)?.unroll(len);
        let a: Vec<ExactScalar> = (0..len).map(|k| &b[k] * &c[k] + &u[k] * &v[k]).collect();
        if !annihilates(&r, &a) {
            return Ok(false);
        }
    }
    Ok(true)
}
