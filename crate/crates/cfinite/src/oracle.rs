//! Exhaustive reference enumerations for small instances.
//!
//! Nothing here calls into the search or solver code; grids are produced by
//! trying every index in every cell, and multiplicity systems by trying every
//! vector in `[1, M]^(n+m)`.

use std::collections::BTreeSet;

use crate::error::{invalid, Error, Result};
use crate::exactpoly::ExactScalar;
use crate::gridsearch::{GridMap, RootList};
use crate::lincomb::GridPair;
use crate::multiplicity::{ClashSystem, MultiplicityAssignment};

pub const MAX_GRID_CELLS: usize = 12;
pub const MAX_ASSIGNMENTS: u64 = 1_000_000;

struct Enumerator<'a> {
    roots: &'a RootList,
    n: usize,
    m: usize,
    surjective: bool,
    cells: Vec<usize>,
    out: Vec<GridMap>,
}

impl Enumerator<'_> {
    fn rho(&self, i: usize, j: usize) -> &ExactScalar {
        self.roots.get(self.cells[i * self.m + j])
    }

    /// Checks the most recently filled cell `(i, j)` against earlier cells.
    fn admissible(&self, i: usize, j: usize) -> bool {
        let v = self.cells[i * self.m + j];
        let anchor = self.cells[0];
        if self.surjective && i == 0 && j == 0 && v != 0 {
            return false;
        }
        if v < anchor {
            return false;
        }
        if (0..j).any(|c| self.cells[i * self.m + c] == v) {
            return false;
        }
        if (0..i).any(|r| self.cells[r * self.m + j] == v) {
            return false;
        }
        if i == 0 && j > 0 && self.cells[j - 1] >= v {
            return false;
        }
        if j == 0 && i > 0 && self.cells[(i - 1) * self.m] >= v {
            return false;
        }
        // ratio along the row equals ratio along the first row,
        // ratio down the column equals ratio down the first column
        if i > 0 && j > 0 {
            let row_ratio = self.rho(i, j) / self.rho(i, 0);
            let top_ratio = self.rho(0, j) / self.rho(0, 0);
            let col_ratio = self.rho(i, j) / self.rho(0, j);
            let left_ratio = self.rho(i, 0) / self.rho(0, 0);
            if row_ratio != top_ratio || col_ratio != left_ratio {
                return false;
            }
        }
        true
    }

    fn fill(&mut self, k: usize) {
        if k == self.n * self.m {
            let seen: BTreeSet<usize> = self.cells.iter().copied().collect();
            if self.surjective && seen.len() != self.roots.len() {
                return;
            }
            let cells = (0..self.n)
                .map(|i| self.cells[i * self.m..(i + 1) * self.m].to_vec())
                .collect();
            self.out.push(GridMap::new(cells).expect("rectangular"));
            return;
        }
        let (i, j) = (k / self.m, k % self.m);
        for v in 0..self.roots.len() {
            self.cells[k] = v;
            if self.admissible(i, j) {
                self.fill(k + 1);
            }
        }
    }
}

fn enumerate(roots: &RootList, n: usize, m: usize, surjective: bool) -> Result<Vec<GridMap>> {
    if n == 0 || m == 0 || n > m {
        return Err(invalid("need 1 <= n <= m"));
    }
    if n * m > MAX_GRID_CELLS {
        return Err(Error::TooLarge(format!("{n}x{m} grid exceeds {MAX_GRID_CELLS} cells")));
    }
    let mut e = Enumerator {
        roots,
        n,
        m,
        surjective,
        cells: vec![0; n * m],
        out: Vec::new(),
    };
    if !roots.is_empty() {
        e.fill(0);
    }
    let out: Vec<GridMap> = e.out.into_iter().filter(|g| recheck(roots, g)).collect();
    Ok(out)
}

/// Substitutes every pair of cells into the ratio conditions once more.
fn recheck(roots: &RootList, g: &GridMap) -> bool {
    let rho = |i: usize, j: usize| roots.get(g.cell(i, j));
    for i1 in 0..g.n() {
        for i2 in 0..g.n() {
            for j1 in 0..g.m() {
                for j2 in 0..g.m() {
                    if rho(i1, j1) / rho(i1, j2) != rho(i2, j1) / rho(i2, j2) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every surjective `n × m` grid with index 0 top-left, increasing first row
/// and first column, and distinct entries along every row and column.
pub fn brute_force_grids(roots: &RootList, n: usize, m: usize) -> Result<Vec<GridMap>> {
    let mut out = enumerate(roots, n, m, true)?;
    out.sort();
    Ok(out)
}

/// Like [`brute_force_grids`] without surjectivity: the top-left entry is the
/// smallest index used.
pub fn brute_force_partial_grids(roots: &RootList, n: usize, m: usize) -> Result<Vec<GridMap>> {
    let mut out = enumerate(roots, n, m, false)?;
    out.sort();
    Ok(out)
}

/// Every shape `2 <= n <= m` with `n·m <= 12`.
pub fn small_shapes() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for n in 2..=MAX_GRID_CELLS {
        for m in n..=MAX_GRID_CELLS {
            if n * m <= MAX_GRID_CELLS {
                v.push((n, m));
            }
        }
    }
    v
}

/// Closed row/column index sets of a grid on `roots`, as used to compare
/// grid lists that may differ in which sub-grids they report.
///
/// For a set `X` of indices let `J(X)` be the indices `c` with
/// `ρ_x ρ_c / ρ_0 ∈ roots` for all `x ∈ X`. A grid with first column `R`
/// and first row `C` yields the closed pairs `{J(J(R)), J(R)}` and
/// `{J(C), J(J(C))}`, unordered.
pub fn closure_classes(roots: &RootList, g: &GridMap) -> Vec<BTreeSet<BTreeSet<usize>>> {
    let j = |xs: &BTreeSet<usize>| -> BTreeSet<usize> {
        (0..roots.len())
            .filter(|&c| {
                xs.iter().all(|&x| {
                    let v = roots.get(x) * roots.get(c) / roots.get(0);
                    roots.index_of(&v).is_some()
                })
            })
            .collect()
    };
    let rows: BTreeSet<usize> = g.first_column().into_iter().collect();
    let cols: BTreeSet<usize> = g.first_row().into_iter().collect();
    let c1 = j(&rows);
    let r1 = j(&c1);
    let r2 = j(&cols);
    let c2 = j(&r2);
    vec![[r1, c1].into_iter().collect(), [r2, c2].into_iter().collect()]
}

/// Union of [`closure_classes`] over a grid list.
pub fn closure_signature<'a>(
    roots: &RootList,
    grids: impl IntoIterator<Item = &'a GridMap>,
) -> BTreeSet<BTreeSet<BTreeSet<usize>>> {
    grids
        .into_iter()
        .flat_map(|g| closure_classes(roots, g))
        .collect()
}

/// Every surjective grid with at least two rows and columns and at most
/// twelve cells.
pub fn all_small_grids(roots: &RootList) -> Result<Vec<GridMap>> {
    let mut out = Vec::new();
    for (n, m) in small_shapes() {
        out.extend(brute_force_grids(roots, n, m)?);
    }
    Ok(out)
}

/// Non-degenerate grid pairs among grids of at most twelve cells: images
/// cover all roots together but neither alone, and no row or column of either
/// grid (keeping at least two) can be dropped without losing coverage.
pub fn brute_force_grid_pairs(roots: &RootList) -> Result<Vec<GridPair>> {
    let len = roots.len();
    let mut grids = BTreeSet::new();
    for (n, m) in small_shapes() {
        for g in brute_force_partial_grids(roots, n, m)? {
            grids.insert(g.canonical());
        }
    }
    let grids: Vec<GridMap> = grids.into_iter().collect();
    let images: Vec<BTreeSet<usize>> = grids.iter().map(GridMap::image).collect();

    let covers_with = |g: &GridMap, other: &BTreeSet<usize>| {
        let mut all = g.image();
        all.extend(other.iter().copied());
        all.len() == len
    };
    let irredundant = |g: &GridMap, other: &BTreeSet<usize>| {
        let rows: Vec<usize> = (0..g.n()).collect();
        let cols: Vec<usize> = (0..g.m()).collect();
        let drop_row = g.n() > 2
            && rows.iter().any(|&i| {
                let keep: Vec<usize> = rows.iter().copied().filter(|&k| k != i).collect();
                covers_with(&g.restrict(&keep, &cols), other)
            });
        let drop_col = g.m() > 2
            && cols.iter().any(|&j| {
                let keep: Vec<usize> = cols.iter().copied().filter(|&k| k != j).collect();
                covers_with(&g.restrict(&rows, &keep), other)
            });
        !drop_row && !drop_col
    };

    let mut out = Vec::new();
    for a in 0..grids.len() {
        if images[a].len() == len {
            continue;
        }
        for b in a + 1..grids.len() {
            if images[b].len() == len {
                continue;
            }
            if images[a].union(&images[b]).count() != len {
                continue;
            }
            if irredundant(&grids[a], &images[b]) && irredundant(&grids[b], &images[a]) {
                out.push(GridPair::new(grids[a].clone(), grids[b].clone()));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Every vector in `[1, M]^(n+m)` satisfying all equations.
pub fn brute_force_multiplicities(sys: &ClashSystem) -> Result<Vec<MultiplicityAssignment>> {
    let n = sys.n();
    let m = sys.m();
    let big_m = sys.max_target().max(1) as u64;
    let total = (0..n + m).try_fold(1u64, |acc, _| acc.checked_mul(big_m).filter(|&t| t <= MAX_ASSIGNMENTS));
    if total.is_none() {
        return Err(Error::TooLarge(format!("{big_m}^{} assignments", n + m)));
    }
    let mut vals = vec![1u32; n + m];
    let mut out = Vec::new();
    loop {
        let ok = sys.equations().iter().all(|eq| {
            let best = eq
                .pairs
                .iter()
                .map(|&(i, j)| vals[i] + vals[n + j] - 1)
                .max()
                .unwrap_or(0);
            best == eq.target
        });
        if ok {
            out.push(MultiplicityAssignment {
                e: vals[..n].to_vec(),
                eps: vals[n..].to_vec(),
            });
        }
        let mut k = n + m;
        loop {
            if k == 0 {
                out.sort();
                return Ok(out);
            }
            k -= 1;
            if (vals[k] as u64) < big_m {
                vals[k] += 1;
                break;
            }
            vals[k] = 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplicity::ClashEquation;
    use crate::exactpoly::int;

    fn grid(rows: &[&[usize]]) -> GridMap {
        GridMap::from_one_based(rows).unwrap()
    }

    #[test]
    fn two_bijections() {
        let rl = RootList::from_ints(&[2, -2, 3, -3]).unwrap();
        let got = brute_force_grids(&rl, 2, 2).unwrap();
        let want = vec![
            grid(&[&[1, 2], &[3, 4]]),
            grid(&[&[1, 2], &[4, 3]]),
            grid(&[&[1, 3], &[2, 4]]),
            grid(&[&[1, 4], &[2, 3]]),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn no_grid_for_one_to_four() {
        let rl = RootList::from_ints(&[1, 2, 3, 4]).unwrap();
        assert!(brute_force_grids(&rl, 2, 2).unwrap().is_empty());
    }

    #[test]
    fn plus_minus_one() {
        let rl = RootList::from_ints(&[1, -1]).unwrap();
        assert_eq!(brute_force_grids(&rl, 2, 2).unwrap(), vec![grid(&[&[1, 2], &[2, 1]])]);
    }

    #[test]
    fn guards() {
        let rl = RootList::from_ints(&[1, -1]).unwrap();
        assert!(matches!(brute_force_grids(&rl, 3, 5), Err(Error::TooLarge(_))));
        assert!(brute_force_grids(&rl, 3, 2).is_err());
        let eqs = (0..10)
            .map(|j| ClashEquation { root: int(j as i64 + 1), target: 5, pairs: vec![(0, j)] })
            .collect();
        let sys = ClashSystem::new(1, 10, eqs).unwrap();
        assert!(matches!(brute_force_multiplicities(&sys), Err(Error::TooLarge(_))));
    }

    #[test]
    fn all_ones() {
        let eqs = vec![
            ClashEquation { root: int(1), target: 1, pairs: vec![(0, 0)] },
            ClashEquation { root: int(2), target: 1, pairs: vec![(0, 1), (1, 0)] },
            ClashEquation { root: int(4), target: 1, pairs: vec![(1, 1)] },
        ];
        let sys = ClashSystem::new(2, 2, eqs).unwrap();
        let got = brute_force_multiplicities(&sys).unwrap();
        assert_eq!(got, vec![MultiplicityAssignment { e: vec![1, 1], eps: vec![1, 1] }]);
    }
}
