//! Decompositions `r = lcm(p₁ ⊗ q₁, p₂ ⊗ q₂)`.
//!
//! Each product contributes a grid whose image need not cover all roots of
//! `r`; together the two images must. Grids here are partial: anchored at
//! their smallest root index, with at least two rows and two columns, and
//! not necessarily column-maximal.
//!
//! A pair is reported when its images cover every root, neither image does
//! so alone, and no row or column of either grid (when that grid keeps at
//! least two of them) can be removed without losing coverage. For each grid
//! of the single-product search the degenerate pair of that grid with itself
//! is also reported and flagged.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;

use crate::error::{invalid, Error, Result};
use crate::exactpoly::{rational_roots, DensePoly, ExactScalar, FactoredPoly};
use crate::gridsearch::{canonical_pair, grid_factor_roots, search_grids, CanonicalPair, GridMap, RootList};
use crate::multiplicity::{factor, solve_system, ClashEquation, ClashSystem, MultiplicityAssignment};
use crate::tensor::tensor_factored;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPair {
    first: GridMap,
    second: GridMap,
}

impl GridPair {
    /// Orders the two grids: smaller anchor index first, then grid order.
    pub fn new(a: GridMap, b: GridMap) -> Self {
        let key = |g: &GridMap| (g.cell(0, 0), g.clone());
        if key(&b) < key(&a) {
            GridPair { first: b, second: a }
        } else {
            GridPair { first: a, second: b }
        }
    }

    pub fn first(&self) -> &GridMap {
        &self.first
    }

    pub fn second(&self) -> &GridMap {
        &self.second
    }

    pub fn is_degenerate(&self) -> bool {
        self.first == self.second
    }
}

impl fmt::Display for GridPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.first, self.second)
    }
}

fn mask_of(g: &GridMap) -> u64 {
    g.cells().iter().flatten().fold(0u64, |acc, &k| acc | 1 << k)
}

fn column_subsets(cols: &[usize]) -> Vec<Vec<usize>> {
    (1u64..(1u64 << cols.len()))
        .map(|mask| {
            cols.iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &c)| c)
                .collect()
        })
        .collect()
}

struct PartialSearch<'a> {
    roots: &'a RootList,
    anchor: usize,
    found: BTreeSet<GridMap>,
}

impl PartialSearch<'_> {
    /// Extends the row list `rows` (first-column indices) by one row, keeping
    /// the columns whose products stay among the roots at or above the anchor.
    fn add_row(&mut self, rows: &[usize], survivors: &[usize]) {
        let s = self.anchor;
        let last = *rows.last().expect("anchor row");
        for p in last + 1..self.roots.len() {
            let ratio = self.roots.get(p) / self.roots.get(s);
            let mut cells_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &c in survivors {
                if let Some(k) = self.roots.index_of(&(self.roots.get(c) * &ratio)) {
                    if k >= s {
                        cells_of.insert(c, Vec::new());
                    }
                }
            }
            if cells_of.is_empty() {
                continue;
            }
            let next: Vec<usize> = cells_of.keys().copied().collect();
            let mut new_rows = rows.to_vec();
            new_rows.push(p);
            for cols in column_subsets(&next) {
                let cells = new_rows
                    .iter()
                    .map(|&r| {
                        let f = self.roots.get(r) / self.roots.get(s);
                        std::iter::once(r)
                            .chain(cols.iter().map(|&c| {
                                self.roots.index_of(&(self.roots.get(c) * &f)).expect("surviving column")
                            }))
                            .collect()
                    })
                    .collect();
                let g = GridMap::new(cells).expect("rectangular");
                self.found.insert(g.canonical());
            }
            self.add_row(&new_rows, &next);
        }
    }
}

/// Every grid with at least two rows and columns whose image lies among the
/// roots, in canonical form.
pub fn partial_grids(roots: &RootList) -> Vec<GridMap> {
    let mut found = BTreeSet::new();
    for anchor in 0..roots.len() {
        let mut s = PartialSearch {
            roots,
            anchor,
            found: BTreeSet::new(),
        };
        let cols: Vec<usize> = (anchor + 1..roots.len()).collect();
        s.add_row(&[anchor], &cols);
        found.extend(s.found);
    }
    found.into_iter().collect()
}

fn irredundant(g: &GridMap, other: u64, full: u64) -> bool {
    let rows: Vec<usize> = (0..g.n()).collect();
    let cols: Vec<usize> = (0..g.m()).collect();
    if g.n() > 2 {
        for i in 0..g.n() {
            let keep: Vec<usize> = rows.iter().copied().filter(|&k| k != i).collect();
            if mask_of(&g.restrict(&keep, &cols)) | other == full {
                return false;
            }
        }
    }
    if g.m() > 2 {
        for j in 0..g.m() {
            let keep: Vec<usize> = cols.iter().copied().filter(|&k| k != j).collect();
            if mask_of(&g.restrict(&rows, &keep)) | other == full {
                return false;
            }
        }
    }
    true
}

/// Degenerate pairs from the single-product search followed by all
/// non-degenerate pairs, sorted within each group.
pub fn search_grid_pairs(roots: &RootList) -> Result<Vec<GridPair>> {
    let len = roots.len();
    if len > 64 {
        return Err(invalid("at most 64 distinct roots supported"));
    }
    let mut out: Vec<GridPair> = search_grids(roots)
        .into_iter()
        .map(|g| GridPair::new(g.clone(), g))
        .collect();
    if len < 2 {
        return Ok(out);
    }
    let full = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    let grids = partial_grids(roots);
    let masks: Vec<u64> = grids.iter().map(mask_of).collect();
    let mut pairs = Vec::new();
    for a in 0..grids.len() {
        if masks[a] == full {
            continue;
        }
        for b in a + 1..grids.len() {
            if masks[b] == full || masks[a] | masks[b] != full {
                continue;
            }
            if irredundant(&grids[a], masks[b], full) && irredundant(&grids[b], masks[a], full) {
                pairs.push(GridPair::new(grids[a].clone(), grids[b].clone()));
            }
        }
    }
    pairs.sort();
    out.extend(pairs);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinCombDecomposition {
    pub p1: FactoredPoly,
    pub q1: FactoredPoly,
    pub p2: FactoredPoly,
    pub q2: FactoredPoly,
    pub pair: GridPair,
    pub assignment: MultiplicityAssignment,
    pub degenerate: bool,
}

impl LinCombDecomposition {
    /// The two products' canonical forms, smaller first.
    pub fn canonical(&self) -> (CanonicalPair, CanonicalPair) {
        let a = canonical_pair(&self.p1, &self.q1);
        let b = canonical_pair(&self.p2, &self.q2);
        if b < a {
            (b, a)
        } else {
            (a, b)
        }
    }

    pub fn expand(&self) -> FactoredPoly {
        tensor_factored(&self.p1, &self.q1).lcm(&tensor_factored(&self.p2, &self.q2))
    }
}

impl fmt::Display for LinCombDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lcm({} ⊗ {}, {} ⊗ {})", self.p1, self.q1, self.p2, self.q2)
    }
}

fn with_mults(roots: &[ExactScalar], mults: &[u32]) -> Result<FactoredPoly> {
    FactoredPoly::new(roots.iter().cloned().zip(mults.iter().copied()))
}

/// All two-product decompositions of `r`, degenerate ones (from
/// [`factor`]) first.
pub fn lincomb_decompose(r: &FactoredPoly) -> Result<Vec<LinCombDecomposition>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in factor(r)? {
        let item = LinCombDecomposition {
            p1: d.p.clone(),
            q1: d.q.clone(),
            p2: d.p,
            q2: d.q,
            pair: GridPair::new(d.grid.clone(), d.grid),
            assignment: MultiplicityAssignment {
                e: [d.assignment.e.clone(), d.assignment.e].concat(),
                eps: [d.assignment.eps.clone(), d.assignment.eps].concat(),
            },
            degenerate: true,
        };
        seen.insert(item.canonical());
        out.push(item);
    }

    let roots = RootList::from_factored(r);
    let one = ExactScalar::one();
    let mut rest = BTreeMap::new();
    for pair in search_grid_pairs(&roots)? {
        if pair.is_degenerate() {
            continue;
        }
        let (g1, g2) = (pair.first(), pair.second());
        let (phis1, psis1) = grid_factor_roots(&roots, g1, &one);
        let (phis2, psis2) = grid_factor_roots(&roots, g2, &one);
        let (n1, m1) = (g1.n(), g1.m());
        let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for i in 0..n1 {
            for j in 0..m1 {
                groups.entry(g1.cell(i, j)).or_default().push((i, j));
            }
        }
        for i in 0..g2.n() {
            for j in 0..g2.m() {
                groups.entry(g2.cell(i, j)).or_default().push((n1 + i, m1 + j));
            }
        }
        let equations = groups
            .into_iter()
            .map(|(k, pairs)| ClashEquation {
                root: roots.get(k).clone(),
                target: r.mult(roots.get(k)),
                pairs,
            })
            .collect();
        let sys = ClashSystem::new(n1 + g2.n(), m1 + g2.m(), equations)?;
        for a in solve_system(&sys) {
            let item = LinCombDecomposition {
                p1: with_mults(&phis1, &a.e[..n1])?,
                q1: with_mults(&psis1, &a.eps[..m1])?,
                p2: with_mults(&phis2, &a.e[n1..])?,
                q2: with_mults(&psis2, &a.eps[m1..])?,
                pair: pair.clone(),
                assignment: a,
                degenerate: false,
            };
            if item.expand() != *r {
                return Err(Error::Internal(format!("pair {pair} does not reproduce r")));
            }
            let key = item.canonical();
            if !seen.contains(&key) {
                rest.entry(key).or_insert(item);
            }
        }
    }
    out.extend(rest.into_values());
    Ok(out)
}

/// [`lincomb_decompose`] on a dense polynomial with rational roots.
pub fn lincomb_dense(r: &DensePoly) -> Result<Vec<LinCombDecomposition>> {
    lincomb_decompose(&rational_roots(r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::int;

    fn fp(roots: &[i64]) -> FactoredPoly {
        FactoredPoly::from_roots(&roots.iter().map(|&r| int(r)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn two_product_example() {
        let r = fp(&[1, 2, 3, 4, 6, 12]);
        let got = lincomb_decompose(&r).unwrap();
        let a = canonical_pair(&fp(&[1, 2]), &fp(&[2, 3]));
        let b = canonical_pair(&fp(&[1, 3]), &fp(&[1, 4]));
        let want = if b < a { (b, a) } else { (a, b) };
        assert!(got.iter().any(|d| !d.degenerate && d.canonical() == want));
    }

    #[test]
    fn degenerate_pair_for_true_product() {
        let rl = RootList::from_ints(&[3, 4, 6, 8]).unwrap();
        let pairs = search_grid_pairs(&rl).unwrap();
        assert!(pairs.iter().any(|p| p.is_degenerate() && p.first().covers(4)));
    }

    #[test]
    fn three_roots_have_no_pairs() {
        let rl = RootList::from_ints(&[1, 2, 3]).unwrap();
        assert!(search_grid_pairs(&rl).unwrap().is_empty());
    }
}
