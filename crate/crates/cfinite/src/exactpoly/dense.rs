use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{format_scalar, int, parse_scalar_list, ExactScalar};
use crate::error::{invalid, Error, Result};

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// an empty coefficient vector and structural equality is mathematical
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DensePoly {
    coeffs: Vec<ExactScalar>,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::new(vec![c])
    }

    /// `x - root`
    pub fn linear(root: &ExactScalar) -> Self {
        Self::new(vec![-root.clone(), ExactScalar::one()])
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactScalar> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(ExactScalar::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division. Fails on a zero divisor.
    pub fn div_rem(&self, d: &DensePoly) -> Result<(DensePoly, DensePoly)> {
        let dd = d.degree().ok_or_else(|| invalid("division by the zero polynomial"))?;
        let lc_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![ExactScalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &DensePoly) -> Option<DensePoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (ca, a) = primitive_parts(&self.coeffs);
        let (cd, b) = primitive_parts(&d.coeffs);
        let scale = ca / cd;
        let q = int_quotient(&b, &a)?;
        Some(Self::new(q.into_iter().map(|x| ExactScalar::from_integer(x) * &scale).collect()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let coeffs = parse_scalar_list(text)?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        Ok(Self::new(coeffs))
    }

    /// Ascending comma separated coefficients, the inverse of [`DensePoly::parse`].
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(format_scalar).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let a = c.abs();
            let unit = a.is_one();
            match k {
                0 => write!(f, "{a}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{a}*x")?,
                _ if unit => write!(f, "x^{k}")?,
                _ => write!(f, "{a}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &DensePoly {
    type Output = DensePoly;
    fn sub(self, rhs: &DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &DensePoly {
    type Output = DensePoly;
    fn neg(self) -> DensePoly {
        DensePoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &DensePoly) -> DensePoly {
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero();
        }
        let mut out = vec![ExactScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DensePoly::new(out)
    }
}

/// `(c, f)` with `coeffs = c * f` and `f` integral with coprime entries.
fn primitive_parts(coeffs: &[ExactScalar]) -> (ExactScalar, Vec<BigInt>) {
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if content.is_zero() {
        return (ExactScalar::zero(), Vec::new());
    }
    let f = ints.into_iter().map(|x| x / &content).collect();
    (ExactScalar::new(content, den), f)
}

fn primitive_integer(coeffs: &[ExactScalar]) -> Vec<BigInt> {
    make_primitive(primitive_parts(coeffs).1)
}

fn make_primitive(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let content = c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if content > BigInt::one() {
        for x in c.iter_mut() {
            *x /= &content;
        }
    }
    c
}

/// Pseudo-remainder of `a` by `b` over the integers.
fn pseudo_rem(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    while a.len() > db {
        let la = a.pop().expect("non-empty");
        let shift = a.len() - db;
        for x in a.iter_mut() {
            *x *= lb;
        }
        for (j, bj) in b[..db].iter().enumerate() {
            a[shift + j] -= &la * bj;
        }
        while a.last().is_some_and(|x| x.is_zero()) {
            a.pop();
        }
    }
    a
}

fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, k| acc * x + k)
}

/// `a / g` in `Z[x]`, if `g` divides `a` there.
fn int_quotient(g: &[BigInt], a: &[BigInt]) -> Option<Vec<BigInt>> {
    let dg = g.len() - 1;
    let lg = &g[dg];
    if a.len() <= dg {
        return a.iter().all(Zero::is_zero).then(Vec::new);
    }
    let mut a = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - dg];
    while a.len() > dg {
        let la = a.pop().expect("non-empty");
        let (q, rem) = la.div_rem(lg);
        if !rem.is_zero() {
            return None;
        }
        let shift = a.len() - dg;
        for (j, gj) in g[..dg].iter().enumerate() {
            a[shift + j] -= &q * gj;
        }
        quot[shift] = q;
    }
    a.iter().all(Zero::is_zero).then_some(quot)
}

fn divides_int(g: &[BigInt], a: &[BigInt]) -> bool {
    int_quotient(g, a).is_some()
}

/// Heuristic gcd of primitive integer polynomials: gcd of values at a large
/// point, read back in balanced base `x`, accepted only if it divides both.
fn heuristic_gcd(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let norm = |c: &[BigInt]| c.iter().map(|x| x.abs()).max().unwrap_or_default();
    let (na, nb) = (norm(a), norm(b));
    let bound: BigInt = BigInt::from(2) * na.clone().min(nb.clone()) + 29;
    let lead_ratio: BigInt = (&na / a.last()?.abs()).min(&nb / b.last()?.abs());
    let capped: BigInt = bound.clone().min(bound.sqrt() * 99);
    let mut x: BigInt = capped.max(lead_ratio * 2 + 2);
    for _ in 0..6 {
        let h = eval_int(a, &x).gcd(&eval_int(b, &x));
        if !h.is_zero() {
            let half = &x / 2;
            let mut rest = h;
            let mut c = Vec::new();
            while !rest.is_zero() {
                let mut digit = rest.mod_floor(&x);
                if digit > half {
                    digit -= &x;
                }
                rest = (rest - &digit) / &x;
                c.push(digit);
            }
            let g = make_primitive(c);
            if !g.is_empty() && divides_int(&g, a) && divides_int(&g, b) {
                return Some(g);
            }
        }
        x = &x * 73794 * x.sqrt().sqrt() / 27011;
    }
    None
}

/// Monic greatest common divisor.
pub fn gcd(a: &DensePoly, b: &DensePoly) -> Result<DensePoly> {
    if a.is_zero() && b.is_zero() {
        return Err(invalid("gcd of two zero polynomials"));
    }
    let mut x = primitive_integer(&a.coeffs);
    let mut y = primitive_integer(&b.coeffs);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    if y.is_empty() {
        return Ok(DensePoly::new(x.into_iter().map(ExactScalar::from_integer).collect()).monic());
    }
    if let Some(g) = heuristic_gcd(&x, &y) {
        return Ok(DensePoly::new(g.into_iter().map(ExactScalar::from_integer).collect()).monic());
    }
    while !y.is_empty() {
        let r = make_primitive(pseudo_rem(x, &y));
        x = y;
        y = r;
    }
    Ok(DensePoly::new(x.into_iter().map(ExactScalar::from_integer).collect()).monic())
}

/// Monic least common multiple.
pub fn lcm(a: &DensePoly, b: &DensePoly) -> Result<DensePoly> {
    if a.is_zero() || b.is_zero() {
        return Err(invalid("lcm with the zero polynomial"));
    }
    let g = gcd(a, b)?;
    let q = a
        .exact_div(&g)
        .ok_or_else(|| Error::Internal("gcd does not divide its argument".into()))?;
    Ok((&q * b).monic())
}

/// `r / gcd(r, r')`, monic.
pub fn squarefree_part(r: &DensePoly) -> Result<DensePoly> {
    if r.is_zero() {
        return Err(invalid("squarefree part of the zero polynomial"));
    }
    let g = gcd(r, &r.derivative())?;
    r.exact_div(&g)
        .map(|q| q.monic())
        .ok_or_else(|| Error::Internal("gcd does not divide its argument".into()))
}

pub fn is_squarefree(r: &DensePoly) -> Result<bool> {
    Ok(gcd(r, &r.derivative())?.degree() == Some(0))
}

/// `x^d p(1/x)`, monic. Roots are inverted.
pub fn reverse(p: &DensePoly) -> Result<DensePoly> {
    if p.is_zero() {
        return Err(invalid("reverse of the zero polynomial"));
    }
    if p.constant_term().is_zero() {
        return Err(Error::ZeroRoot);
    }
    let mut c = p.coeffs.clone();
    c.reverse();
    Ok(DensePoly::new(c).monic())
}

/// Yun's algorithm: pairs `(a_i, i)` with `r = lc * prod a_i^i`, each `a_i`
/// monic, squarefree, pairwise coprime and non-constant.
pub fn squarefree_decomposition(r: &DensePoly) -> Result<Vec<(DensePoly, u32)>> {
    if r.is_zero() {
        return Err(invalid("squarefree decomposition of the zero polynomial"));
    }
    let f = r.monic();
    let df = f.derivative();
    let a0 = gcd(&f, &df)?;
    let div = |x: &DensePoly, y: &DensePoly| {
        x.exact_div(y)
            .ok_or_else(|| Error::Internal("inexact division in squarefree decomposition".into()))
    };
    let mut b = div(&f, &a0)?;
    let c = div(&df, &a0)?;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1u32;
    while b.degree().unwrap_or(0) > 0 {
        let a = gcd(&b, &d)?;
        b = div(&b, &a)?;
        let c = div(&d, &a)?;
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}
