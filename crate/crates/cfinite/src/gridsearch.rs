//! Factorizations of squarefree polynomials via grid maps.
//!
//! If `r = p ⊗ q` with `p` and `q` squarefree, arranging the roots of `r` in a
//! table indexed by the roots of `p` and `q` gives a rank-one pattern: every
//! row is a scalar multiple of the first one. The search here looks for such
//! tables directly among the roots of `r`, row by row, using exact index
//! lookups, and then reads `p` and `q` off the first column and first row.
//!
//! Symmetry is broken by putting root index 0 in the top-left cell and
//! requiring the first row and column to increase. The search reports a
//! branch as soon as it covers every root; columns that cannot be extended
//! are dropped.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::exactpoly::{ExactScalar, FactoredPoly};
use crate::tensor::tensor_factored;

/// Distinct nonzero roots with an exact value-to-index map.
#[derive(Clone, Debug)]
pub struct RootList {
    roots: Vec<ExactScalar>,
    index: HashMap<ExactScalar, usize>,
}

impl RootList {
    pub fn new(roots: Vec<ExactScalar>) -> Result<Self> {
        let mut index = HashMap::with_capacity(roots.len());
        for (i, r) in roots.iter().enumerate() {
            if r.is_zero() {
                return Err(invalid("zero root"));
            }
            if index.insert(r.clone(), i).is_some() {
                return Err(invalid(format!("repeated root {r}")));
            }
        }
        Ok(RootList { roots, index })
    }

    /// Distinct roots of `f` in ascending order.
    pub fn from_factored(f: &FactoredPoly) -> Self {
        Self::new(f.roots().cloned().collect()).expect("factored roots are distinct and nonzero")
    }

    pub fn from_ints(roots: &[i64]) -> Result<Self> {
        Self::new(roots.iter().map(|&r| crate::exactpoly::int(r)).collect())
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn get(&self, i: usize) -> &ExactScalar {
        &self.roots[i]
    }

    pub fn roots(&self) -> &[ExactScalar] {
        &self.roots
    }

    pub fn index_of(&self, x: &ExactScalar) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// The squarefree polynomial with exactly these roots.
    pub fn to_factored(&self) -> FactoredPoly {
        FactoredPoly::new(self.roots.iter().map(|r| (r.clone(), 1))).expect("validated roots")
    }
}

/// Working table of the row-by-row search; `None` marks an eliminated column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentTable {
    rows: Vec<Vec<Option<usize>>>,
}

impl AssignmentTable {
    fn new(len: usize) -> Self {
        AssignmentTable {
            rows: vec![(0..len).map(Some).collect()],
        }
    }

    pub fn rows_filled(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[Option<usize>] {
        &self.rows[i]
    }

    /// Row `i` with one-based indices and 0 for eliminated columns.
    pub fn row_one_based(&self, i: usize) -> Vec<usize> {
        self.rows[i].iter().map(|c| c.map_or(0, |k| k + 1)).collect()
    }
}

/// An `n × m` matrix of root indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridMap {
    cells: Vec<Vec<usize>>,
}

impl GridMap {
    pub fn new(cells: Vec<Vec<usize>>) -> Result<Self> {
        let m = cells.first().map_or(0, Vec::len);
        if m == 0 || cells.iter().any(|r| r.len() != m) {
            return Err(invalid("grid must be a non-empty rectangle"));
        }
        Ok(GridMap { cells })
    }

    pub fn from_one_based<R: AsRef<[usize]>>(rows: &[R]) -> Result<Self> {
        let mut cells = Vec::with_capacity(rows.len());
        for r in rows {
            let mut row = Vec::new();
            for &k in r.as_ref() {
                if k == 0 {
                    return Err(invalid("one-based grid entries must be positive"));
                }
                row.push(k - 1);
            }
            cells.push(row);
        }
        Self::new(cells)
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .map(|r| r.iter().map(|k| k + 1).collect())
            .collect()
    }

    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn m(&self) -> usize {
        self.cells[0].len()
    }

    pub fn cell(&self, i: usize, j: usize) -> usize {
        self.cells[i][j]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn first_column(&self) -> Vec<usize> {
        self.cells.iter().map(|r| r[0]).collect()
    }

    pub fn first_row(&self) -> Vec<usize> {
        self.cells[0].clone()
    }

    pub fn transpose(&self) -> GridMap {
        GridMap {
            cells: (0..self.m())
                .map(|j| self.cells.iter().map(|r| r[j]).collect())
                .collect(),
        }
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.cells.iter().flatten().copied().collect()
    }

    pub fn covers(&self, len: usize) -> bool {
        let img = self.image();
        img.len() == len && img.iter().all(|&k| k < len)
    }

    /// Sub-grid on the given row and column positions.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> GridMap {
        GridMap {
            cells: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.cells[i][j]).collect())
                .collect(),
        }
    }

    pub fn has_distinct_lines(&self) -> bool {
        let rows_ok = self
            .cells
            .iter()
            .all(|r| r.iter().collect::<BTreeSet<_>>().len() == r.len());
        let t = self.transpose();
        rows_ok
            && t.cells
                .iter()
                .all(|c| c.iter().collect::<BTreeSet<_>>().len() == c.len())
    }

    /// Rank-one pattern: `ρ(i,j) ρ(0,0) = ρ(i,0) ρ(0,j)` in every cell.
    pub fn satisfies_ratio_conditions(&self, roots: &RootList) -> bool {
        let at = |i: usize, j: usize| roots.get(self.cells[i][j]);
        (0..self.n()).all(|i| {
            (0..self.m()).all(|j| at(i, j) * at(0, 0) == at(i, 0) * at(0, j))
        })
    }

    /// Top-left cell holds the smallest index; first row and column increase.
    pub fn is_canonically_ordered(&self) -> bool {
        let min = *self.image().iter().next().expect("non-empty grid");
        let inc = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        self.cells[0][0] == min && inc(&self.first_row()) && inc(&self.first_column())
    }

    /// Representative of the grid up to row and column permutations and
    /// transposition: the smallest re-ordering that puts a minimal index
    /// top-left and sorts the first row and column, preferring fewer rows.
    pub fn canonical(&self) -> GridMap {
        let mut best: Option<GridMap> = None;
        for g in [self.clone(), self.transpose()] {
            let min = *g.image().iter().next().expect("non-empty grid");
            for i in 0..g.n() {
                for j in 0..g.m() {
                    if g.cells[i][j] != min {
                        continue;
                    }
                    let mut rows: Vec<usize> = (0..g.n()).filter(|&r| r != i).collect();
                    rows.sort_by_key(|&r| g.cells[r][j]);
                    rows.insert(0, i);
                    let mut cols: Vec<usize> = (0..g.m()).filter(|&c| c != j).collect();
                    cols.sort_by_key(|&c| g.cells[i][c]);
                    cols.insert(0, j);
                    let cand = g.restrict(&rows, &cols);
                    let better = match &best {
                        None => true,
                        Some(b) => (cand.n(), &cand) < (b.n(), b),
                    };
                    if better {
                        best = Some(cand);
                    }
                }
            }
        }
        best.expect("non-empty grid")
    }
}

impl fmt::Display for GridMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_one_based()
            .iter()
            .map(|r| {
                let s: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("({})", s.join(","))
            })
            .collect();
        write!(f, "({})", rows.join(","))
    }
}

struct Search<'a, F> {
    roots: &'a RootList,
    table: AssignmentTable,
    found: BTreeSet<GridMap>,
    observe: F,
}

impl<F: FnMut(&AssignmentTable)> Search<'_, F> {
    fn add_row(&mut self, n: usize) {
        let len = self.roots.len();
        let start = self.table.rows[n - 1][0].expect("first column is never eliminated") + 1;
        for p in start..len {
            let ratio = self.roots.get(p) / self.roots.get(0);
            let mut row = vec![None; len];
            row[0] = Some(p);
            for j in 1..len {
                if self.table.rows[n - 1][j].is_some() {
                    row[j] = self.roots.index_of(&(self.roots.get(j) * &ratio));
                }
            }
            self.table.rows.truncate(n);
            self.table.rows.push(row);
            (self.observe)(&self.table);

            let cols: Vec<usize> = (0..len).filter(|&j| self.table.rows[n][j].is_some()).collect();
            let mut hit = vec![false; len];
            for r in &self.table.rows {
                for &j in &cols {
                    hit[r[j].expect("surviving column")] = true;
                }
            }
            if hit.iter().all(|&h| h) {
                self.report(&cols);
            } else if cols.len() > n + 1 {
                self.add_row(n + 1);
            }
        }
    }

    fn report(&mut self, cols: &[usize]) {
        if cols.len() < 2 {
            return;
        }
        let cells = self
            .table
            .rows
            .iter()
            .map(|r| cols.iter().map(|&j| r[j].expect("surviving column")).collect())
            .collect();
        let g = GridMap { cells };
        let g = if g.n() > g.m() { g.transpose() } else { g };
        self.found.insert(g);
    }
}

/// All grids found by the row-by-row search, sorted.
pub fn search_grids(roots: &RootList) -> Vec<GridMap> {
    search_grids_traced(roots, |_| {})
}

/// [`search_grids`], calling `observe` each time a row has been filled in.
pub fn search_grids_traced<F: FnMut(&AssignmentTable)>(roots: &RootList, observe: F) -> Vec<GridMap> {
    if roots.len() < 2 {
        return Vec::new();
    }
    let mut s = Search {
        roots,
        table: AssignmentTable::new(roots.len()),
        found: BTreeSet::new(),
        observe,
    };
    s.add_row(1);
    s.found.into_iter().collect()
}

/// Roots of the factors read off the first column and first row, with the
/// top-left root of `p` equal to `phi1`. Duplicates collapse.
pub fn reconstruct(
    roots: &RootList,
    grid: &GridMap,
    phi1: &ExactScalar,
) -> Result<(FactoredPoly, FactoredPoly)> {
    if phi1.is_zero() {
        return Err(invalid("phi1 must be nonzero"));
    }
    let (phis, psis) = grid_factor_roots(roots, grid, phi1);
    Ok((
        FactoredPoly::squarefree_from(&phis)?,
        FactoredPoly::squarefree_from(&psis)?,
    ))
}

/// Per-row and per-column roots, in grid order.
pub(crate) fn grid_factor_roots(
    roots: &RootList,
    grid: &GridMap,
    phi1: &ExactScalar,
) -> (Vec<ExactScalar>, Vec<ExactScalar>) {
    let base = roots.get(grid.cell(0, 0));
    let phis = grid
        .first_column()
        .iter()
        .map(|&k| phi1 * roots.get(k) / base)
        .collect();
    let psis = grid.first_row().iter().map(|&k| roots.get(k) / phi1).collect();
    (phis, psis)
}

/// Orientation- and gauge-independent representative of `(p, q)`.
///
/// Candidates are both orderings of the pair, scaled so that some root of
/// the first factor becomes 1; the winner has the fewest distinct roots in
/// the first factor, then the smallest root height, then the smallest
/// factor lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalPair {
    pub p: FactoredPoly,
    pub q: FactoredPoly,
}

pub fn canonical_pair(p: &FactoredPoly, q: &FactoredPoly) -> CanonicalPair {
    let mut best = None;
    for (a, b) in [(p, q), (q, p)] {
        for root in a.roots() {
            let xi = root.recip();
            let cand = CanonicalPair {
                p: a.scale(&xi),
                q: b.scale(root),
            };
            let key = (
                cand.p.distinct_count(),
                cand.p.height().max(cand.q.height()),
                cand.clone(),
            );
            if best.as_ref().is_none_or(|b: &(usize, _, CanonicalPair)| key < *b) {
                best = Some(key);
            }
        }
    }
    match best {
        Some((_, _, c)) => c,
        None => CanonicalPair {
            p: p.clone(),
            q: q.clone(),
        },
    }
}

impl fmt::Display for CanonicalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.p, self.q)
    }
}

/// One factor alone already produces `r`: a single root of it, with its
/// multiplicity, tensored with the other factor gives `r`.
pub fn is_trivial(p: &FactoredPoly, q: &FactoredPoly, r: &FactoredPoly) -> bool {
    let single = |a: &FactoredPoly, b: &FactoredPoly| {
        a.factors().iter().any(|(root, m)| {
            let one = FactoredPoly::new([(root.clone(), *m)]).expect("valid factor");
            tensor_factored(&one, b) == *r
        })
    };
    single(p, q) || single(q, p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub p: FactoredPoly,
    pub q: FactoredPoly,
    pub grid: GridMap,
}

impl Factorization {
    pub fn canonical(&self) -> CanonicalPair {
        canonical_pair(&self.p, &self.q)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.p, self.q)
    }
}

/// Non-trivial factorizations of the squarefree polynomial on `roots`, one
/// per gauge class, ordered by canonical form.
pub fn factor_squarefree(roots: &RootList) -> Result<Vec<Factorization>> {
    let target = roots.to_factored();
    let mut classes: BTreeMap<CanonicalPair, Factorization> = BTreeMap::new();
    for grid in search_grids(roots) {
        let (p, q) = reconstruct(roots, &grid, &ExactScalar::one())?;
        if tensor_factored(&p, &q) != target {
            return Err(Error::Internal(format!("grid {grid} does not reproduce the input")));
        }
        if p.degree() < 2 || q.degree() < 2 || is_trivial(&p, &q, &target) {
            continue;
        }
        let f = Factorization { p, q, grid };
        classes.entry(f.canonical()).or_insert(f);
    }
    Ok(classes.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{frac, int};

    fn grid(rows: &[&[usize]]) -> GridMap {
        GridMap::from_one_based(rows).unwrap()
    }

    fn fp(roots: &[ExactScalar]) -> FactoredPoly {
        FactoredPoly::from_roots(roots).unwrap()
    }

    #[test]
    fn rootlist_rejects_duplicates_and_zero() {
        assert!(RootList::from_ints(&[1, 1]).is_err());
        assert!(RootList::from_ints(&[0, 1]).is_err());
        let rl = RootList::from_ints(&[4, 6, -6]).unwrap();
        assert_eq!(rl.index_of(&int(-6)), Some(2));
        assert_eq!(rl.index_of(&int(5)), None);
    }

    #[test]
    fn six_root_example() {
        let rl = RootList::from_ints(&[-8, -6, -4, -3, -2, -1]).unwrap();
        assert_eq!(search_grids(&rl), vec![grid(&[&[1, 2, 3, 5], &[3, 4, 5, 6]])]);
    }

    #[test]
    fn four_roots() {
        let rl = RootList::from_ints(&[4, 6, -6, -9]).unwrap();
        assert!(search_grids(&rl).contains(&grid(&[&[1, 2], &[3, 4]])));
        assert!(search_grids(&RootList::from_ints(&[1, 2, 3, 4]).unwrap()).is_empty());
    }

    #[test]
    fn plus_minus_one() {
        let rl = RootList::from_ints(&[1, -1]).unwrap();
        assert_eq!(search_grids(&rl), vec![grid(&[&[1, 2], &[2, 1]])]);
        assert!(search_grids(&RootList::from_ints(&[5]).unwrap()).is_empty());
    }

    #[test]
    fn reconstruction_examples() {
        let rl = RootList::from_ints(&[4, 6, -6, -9]).unwrap();
        let g = grid(&[&[1, 2], &[3, 4]]);
        let (p, q) = reconstruct(&rl, &g, &int(1)).unwrap();
        assert_eq!(p, fp(&[int(1), frac(-3, 2)]));
        assert_eq!(q, fp(&[int(4), int(6)]));
        let (p, q) = reconstruct(&rl, &g.transpose(), &int(15)).unwrap();
        assert_eq!(p, fp(&[int(15), frac(45, 2)]));
        assert_eq!(q, fp(&[frac(4, 15), frac(-2, 5)]));
        assert!(reconstruct(&rl, &g, &int(0)).is_err());
    }

    #[test]
    fn squarefree_classes() {
        let rl = RootList::from_ints(&[2, -2, 3, -3]).unwrap();
        let got: Vec<CanonicalPair> = factor_squarefree(&rl).unwrap().iter().map(|f| f.canonical()).collect();
        let a = canonical_pair(&fp(&[int(1), int(-1)]), &fp(&[int(2), int(-3)]));
        let b = canonical_pair(&fp(&[int(1), int(-1)]), &fp(&[int(2), int(3)]));
        assert_eq!(got.len(), 2);
        assert!(got.contains(&a) && got.contains(&b));

        let rl = RootList::from_ints(&[3, 4, 6, 8]).unwrap();
        let got = factor_squarefree(&rl).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].canonical(), CanonicalPair { p: fp(&[int(1), int(2)]), q: fp(&[int(3), int(4)]) });
    }

    #[test]
    fn canonical_grid_form() {
        let g = grid(&[&[3, 1], &[4, 2]]);
        assert_eq!(g.canonical(), grid(&[&[1, 2], &[3, 4]]));
        assert_eq!(grid(&[&[1, 3], &[2, 4]]).canonical(), grid(&[&[1, 2], &[3, 4]]));
    }
}
