use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dense::DensePoly;
use super::scalar::{height, ExactScalar};
use crate::error::{invalid, Result};

/// Monic polynomial held as `(root, multiplicity)` pairs.
///
/// Roots are distinct, nonzero and sorted ascending by value; multiplicities
/// are positive. Two values describing the same polynomial are therefore
/// structurally identical, and the derived ordering is lexicographic on the
/// sorted factor list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FactoredPoly {
    factors: Vec<(ExactScalar, u32)>,
}

impl FactoredPoly {
    /// The empty product, i.e. the constant polynomial 1.
    pub fn one() -> Self {
        Self::default()
    }

    /// Distinct nonzero roots with positive multiplicities, in any order.
    pub fn new(pairs: impl IntoIterator<Item = (ExactScalar, u32)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (root, mult) in pairs {
            if root.is_zero() {
                return Err(invalid("zero root"));
            }
            if mult == 0 {
                return Err(invalid(format!("zero multiplicity for root {root}")));
            }
            if map.insert(root.clone(), mult).is_some() {
                return Err(invalid(format!("repeated root {root}")));
            }
        }
        Ok(Self::from_map(map))
    }

    /// Roots listed with repetition; repeats add up.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a ExactScalar>) -> Result<Self> {
        let mut map: BTreeMap<ExactScalar, u32> = BTreeMap::new();
        for root in roots {
            if root.is_zero() {
                return Err(invalid("zero root"));
            }
            *map.entry(root.clone()).or_insert(0) += 1;
        }
        Ok(Self::from_map(map))
    }

    /// Distinct roots, all with multiplicity one; duplicates collapse.
    pub fn squarefree_from<'a>(roots: impl IntoIterator<Item = &'a ExactScalar>) -> Result<Self> {
        Ok(Self::from_roots(roots)?.squarefree())
    }

    pub(crate) fn from_map(map: BTreeMap<ExactScalar, u32>) -> Self {
        FactoredPoly {
            factors: map.into_iter().filter(|(_, m)| *m > 0).collect(),
        }
    }

    pub fn factors(&self) -> &[(ExactScalar, u32)] {
        &self.factors
    }

    pub fn roots(&self) -> impl Iterator<Item = &ExactScalar> + '_ {
        self.factors.iter().map(|(r, _)| r)
    }

    pub fn mults(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|(_, m)| *m)
    }

    /// Multiplicity of `root`, zero if absent.
    pub fn mult(&self, root: &ExactScalar) -> u32 {
        self.factors
            .binary_search_by(|(r, _)| r.cmp(root))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(_, m)| *m as usize).sum()
    }

    pub fn distinct_count(&self) -> usize {
        self.factors.len()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }

    pub fn max_mult(&self) -> u32 {
        self.mults().max().unwrap_or(0)
    }

    pub fn squarefree(&self) -> Self {
        FactoredPoly {
            factors: self.factors.iter().map(|(r, _)| (r.clone(), 1)).collect(),
        }
    }

    /// Every root multiplied by `xi` (nonzero).
    pub fn scale(&self, xi: &ExactScalar) -> Self {
        assert!(!xi.is_zero(), "scaling roots by zero");
        let mut factors: Vec<_> = self.factors.iter().map(|(r, m)| (r * xi, *m)).collect();
        if xi.is_negative() {
            factors.reverse();
        }
        FactoredPoly { factors }
    }

    /// Largest height over the roots, zero when there are none.
    pub fn height(&self) -> BigInt {
        self.roots().map(height).max().unwrap_or_else(BigInt::zero)
    }

    /// Root-wise maximum of multiplicities.
    pub fn lcm(&self, other: &FactoredPoly) -> Self {
        let mut map: BTreeMap<ExactScalar, u32> = self.factors.iter().cloned().collect();
        for (r, m) in &other.factors {
            let e = map.entry(r.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        Self::from_map(map)
    }

    pub fn expand(&self) -> DensePoly {
        self.factors.iter().fold(DensePoly::one(), |acc, (r, m)| {
            &acc * &DensePoly::linear(r).pow(*m)
        })
    }
}

pub fn expand(f: &FactoredPoly) -> DensePoly {
    f.expand()
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (r, m) in &self.factors {
            if r.is_negative() {
                write!(f, "(x + {})", -r)?;
            } else {
                write!(f, "(x - {r})")?;
            }
            if !m.is_one() {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::scalar::{frac, int};

    #[test]
    fn canonical_order() {
        let a = FactoredPoly::new([(int(4), 1), (int(-3), 2), (frac(1, 2), 1)]).unwrap();
        let b = FactoredPoly::new([(frac(1, 2), 1), (int(4), 1), (int(-3), 2)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.roots().cloned().collect::<Vec<_>>(), vec![int(-3), frac(1, 2), int(4)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FactoredPoly::new([(int(0), 1)]).is_err());
        assert!(FactoredPoly::new([(int(1), 0)]).is_err());
        assert!(FactoredPoly::new([(int(1), 1), (int(1), 2)]).is_err());
    }

    #[test]
    fn expand_examples() {
        let f = FactoredPoly::from_roots(&[int(3), int(4), int(6), int(8)]).unwrap();
        assert_eq!(f.expand(), DensePoly::from_ints(&[576, -504, 158, -21, 1]));
        let g = FactoredPoly::new([(int(1), 2)]).unwrap();
        assert_eq!(g.expand(), DensePoly::from_ints(&[1, -2, 1]));
        let h = FactoredPoly::new([(frac(1, 2), 1)]).unwrap();
        assert_eq!(h.expand(), DensePoly::new(vec![frac(-1, 2), int(1)]));
    }

    #[test]
    fn scaling_keeps_order() {
        let f = FactoredPoly::new([(int(1), 1), (int(2), 3)]).unwrap();
        let g = f.scale(&int(-1));
        assert_eq!(g.factors(), &[(int(-2), 3), (int(-1), 1)]);
    }

    #[test]
    fn display() {
        let f = FactoredPoly::new([(int(-3), 2), (frac(1, 2), 1)]).unwrap();
        assert_eq!(f.to_string(), "(x + 3)^2(x - 1/2)");
        assert_eq!(FactoredPoly::one().to_string(), "1");
    }
}
