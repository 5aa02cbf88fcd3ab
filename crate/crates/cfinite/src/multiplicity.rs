//! Multiplicities for non-squarefree targets.
//!
//! A factorization of the squarefree part `r*` fixes which root pairs
//! `(φᵢ, ψⱼ)` multiply to each root `ρ` of `r`. Giving `φᵢ` multiplicity `eᵢ`
//! and `ψⱼ` multiplicity `εⱼ`, the root `ρ` appears in `p ⊗ q` with multiplicity
//! `max (eᵢ + εⱼ - 1)` over its pairs. Matching the multiplicities of `r`
//! is a max-plus ("tropical") system, and a linear one when every root has a
//! single pair.
//!
//! Every variable lies in `[1, M]` with `M` the largest target, since
//! `eᵢ + εⱼ - 1 ≥ max(eᵢ, εⱼ)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;

use crate::error::{invalid, Error, Result};
use crate::exactpoly::{rational_roots, DensePoly, ExactScalar, FactoredPoly};
use crate::gridsearch::{
    canonical_pair, grid_factor_roots, is_trivial, search_grids, CanonicalPair, GridMap, RootList,
};
use crate::tensor::tensor_factored;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClashEquation {
    pub root: ExactScalar,
    pub target: u32,
    pub pairs: Vec<(usize, usize)>,
}

/// `max over pairs of (e_i + eps_j - 1) = target`, one equation per root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClashSystem {
    n: usize,
    m: usize,
    equations: Vec<ClashEquation>,
}

impl ClashSystem {
    /// Each pair may occur in at most one equation, and every variable must
    /// occur somewhere.
    pub fn new(n: usize, m: usize, equations: Vec<ClashEquation>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut rows = vec![false; n];
        let mut cols = vec![false; m];
        for eq in &equations {
            if eq.target == 0 {
                return Err(invalid("targets must be positive"));
            }
            if eq.pairs.is_empty() {
                return Err(invalid("equation without pairs"));
            }
            for &(i, j) in &eq.pairs {
                if i >= n || j >= m {
                    return Err(invalid(format!("pair ({i},{j}) out of range")));
                }
                if !seen.insert((i, j)) {
                    return Err(invalid(format!("pair ({i},{j}) in two equations")));
                }
                rows[i] = true;
                cols[j] = true;
            }
        }
        if rows.iter().chain(&cols).any(|&b| !b) {
            return Err(invalid("some variable occurs in no equation"));
        }
        Ok(ClashSystem { n, m, equations })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn equations(&self) -> &[ClashEquation] {
        &self.equations
    }

    pub fn max_target(&self) -> u32 {
        self.equations.iter().map(|e| e.target).max().unwrap_or(0)
    }

    pub fn all_singletons(&self) -> bool {
        self.equations.iter().all(|e| e.pairs.len() == 1)
    }

    pub fn is_satisfied_by(&self, a: &MultiplicityAssignment) -> bool {
        a.e.len() == self.n
            && a.eps.len() == self.m
            && a.e.iter().chain(&a.eps).all(|&v| v >= 1)
            && self.equations.iter().all(|eq| {
                eq.pairs.iter().map(|&(i, j)| a.e[i] + a.eps[j] - 1).max() == Some(eq.target)
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityAssignment {
    pub e: Vec<u32>,
    pub eps: Vec<u32>,
}

impl fmt::Display for MultiplicityAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e={:?} eps={:?}", self.e, self.eps)
    }
}

/// Groups all pairs `(i, j)` by the product of the `i`-th root of `p` and the
/// `j`-th root of `q`, with targets taken from `r`.
pub fn clash_classes(p: &FactoredPoly, q: &FactoredPoly, r: &FactoredPoly) -> Result<ClashSystem> {
    let phis: Vec<&ExactScalar> = p.roots().collect();
    let psis: Vec<&ExactScalar> = q.roots().collect();
    let mut groups: BTreeMap<ExactScalar, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, phi) in phis.iter().enumerate() {
        for (j, psi) in psis.iter().enumerate() {
            groups.entry(*phi * *psi).or_default().push((i, j));
        }
    }
    let r_roots: BTreeSet<&ExactScalar> = r.roots().collect();
    if groups.len() != r_roots.len() || groups.keys().any(|k| !r_roots.contains(k)) {
        return Err(invalid("root products do not match the roots of the target"));
    }
    let equations = groups
        .into_iter()
        .map(|(root, pairs)| {
            let target = r.mult(&root);
            ClashEquation { root, target, pairs }
        })
        .collect();
    ClashSystem::new(phis.len(), psis.len(), equations)
}

/// Positive solutions of the linear system `e_i + eps_j - 1 = target`.
///
/// Each connected block of variables is pinned by one value and the rest is
/// forced; the blocks combine freely.
pub fn solve_exact_system(sys: &ClashSystem) -> Result<Vec<MultiplicityAssignment>> {
    if !sys.all_singletons() {
        return Err(invalid("exact solver needs one pair per root"));
    }
    let nv = sys.n + sys.m;
    let big_m = sys.max_target();
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); nv];
    for eq in &sys.equations {
        let (i, j) = eq.pairs[0];
        adj[i].push((sys.n + j, eq.target + 1));
        adj[sys.n + j].push((i, eq.target + 1));
    }

    let mut comp_of = vec![usize::MAX; nv];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..nv {
        if comp_of[s] != usize::MAX {
            continue;
        }
        let c = comps.len();
        let mut members = vec![s];
        comp_of[s] = c;
        let mut k = 0;
        while k < members.len() {
            for &(w, _) in &adj[members[k]] {
                if comp_of[w] == usize::MAX {
                    comp_of[w] = c;
                    members.push(w);
                }
            }
            k += 1;
        }
        comps.push(members);
    }

    let mut per_comp: Vec<Vec<Vec<(usize, u32)>>> = Vec::new();
    for members in &comps {
        let mut sols = Vec::new();
        'value: for v0 in 1..=big_m {
            let mut val: BTreeMap<usize, u32> = BTreeMap::new();
            val.insert(members[0], v0);
            let mut stack = vec![members[0]];
            while let Some(u) = stack.pop() {
                let vu = val[&u];
                for &(w, sum) in &adj[u] {
                    if vu >= sum {
                        continue 'value;
                    }
                    let vw = sum - vu;
                    match val.get(&w) {
                        Some(&x) if x != vw => continue 'value,
                        Some(_) => {}
                        None => {
                            val.insert(w, vw);
                            stack.push(w);
                        }
                    }
                }
            }
            sols.push(val.into_iter().collect());
        }
        if sols.is_empty() {
            return Ok(Vec::new());
        }
        per_comp.push(sols);
    }

    let mut out = vec![vec![0u32; nv]];
    for sols in &per_comp {
        let mut next = Vec::with_capacity(out.len() * sols.len());
        for partial in &out {
            for s in sols {
                let mut v = partial.clone();
                for &(k, x) in s {
                    v[k] = x;
                }
                next.push(v);
            }
        }
        out = next;
    }
    let mut res: Vec<MultiplicityAssignment> = out
        .into_iter()
        .map(|v| MultiplicityAssignment {
            e: v[..sys.n].to_vec(),
            eps: v[sys.n..].to_vec(),
        })
        .collect();
    res.sort();
    Ok(res)
}

struct Tropical<'a> {
    sys: &'a ClashSystem,
    big_m: u32,
    by_var: Vec<Vec<usize>>,
    vals: Vec<u32>,
    out: Vec<MultiplicityAssignment>,
}

impl Tropical<'_> {
    fn var(&self, i: usize, j: usize) -> (usize, usize) {
        (i, self.sys.n + j)
    }

    fn consistent(&self, eq: &ClashEquation) -> bool {
        let mut best = 0;
        let mut open = false;
        for &(i, j) in &eq.pairs {
            let (a, b) = self.var(i, j);
            if self.vals[a] == 0 || self.vals[b] == 0 {
                open = true;
                continue;
            }
            best = best.max(self.vals[a] + self.vals[b] - 1);
        }
        best <= eq.target && (open || best == eq.target)
    }

    fn dfs(&mut self, k: usize) {
        if k == self.vals.len() {
            self.out.push(MultiplicityAssignment {
                e: self.vals[..self.sys.n].to_vec(),
                eps: self.vals[self.sys.n..].to_vec(),
            });
            return;
        }
        for v in 1..=self.big_m {
            self.vals[k] = v;
            let ok = self.by_var[k]
                .iter()
                .all(|&q| self.consistent(&self.sys.equations[q]));
            if ok {
                self.dfs(k + 1);
            }
        }
        self.vals[k] = 0;
    }
}

/// All positive solutions of the max-plus system, by bounded depth-first
/// enumeration that rejects a partial assignment once some equation is
/// exceeded or has all its pairs decided below target.
pub fn solve_tropical_system(sys: &ClashSystem) -> Vec<MultiplicityAssignment> {
    let nv = sys.n + sys.m;
    let mut by_var = vec![Vec::new(); nv];
    for (q, eq) in sys.equations.iter().enumerate() {
        for &(i, j) in &eq.pairs {
            for v in [i, sys.n + j] {
                if by_var[v].last() != Some(&q) {
                    by_var[v].push(q);
                }
            }
        }
    }
    let mut t = Tropical {
        sys,
        big_m: sys.max_target(),
        by_var,
        vals: vec![0; nv],
        out: Vec::new(),
    };
    t.dfs(0);
    t.out
}

/// Exact solver when every root has one pair, tropical otherwise.
pub fn solve_system(sys: &ClashSystem) -> Vec<MultiplicityAssignment> {
    if sys.all_singletons() {
        solve_exact_system(sys).expect("singleton system")
    } else {
        solve_tropical_system(sys)
    }
}

/// A factorization `r = p ⊗ q` together with the grid and multiplicities
/// that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorDecomposition {
    pub p: FactoredPoly,
    pub q: FactoredPoly,
    pub grid: GridMap,
    pub assignment: MultiplicityAssignment,
}

impl TensorDecomposition {
    pub fn canonical(&self) -> CanonicalPair {
        canonical_pair(&self.p, &self.q)
    }
}

impl fmt::Display for TensorDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.p, self.q)
    }
}

fn subsets_of_size_at_least_two(n: usize) -> Vec<Vec<usize>> {
    (0u64..(1u64 << n))
        .filter(|mask| mask.count_ones() >= 2)
        .map(|mask| (0..n).filter(|k| mask >> k & 1 == 1).collect())
        .collect()
}

/// All factorizations of `r`, one per gauge class, in canonical order.
///
/// Each grid of the squarefree part is lifted on every row/column selection
/// that still covers all roots. Lifts that only repeat `r` through a single
/// root of one factor are discarded.
pub fn factor(r: &FactoredPoly) -> Result<Vec<TensorDecomposition>> {
    let roots = RootList::from_factored(r);
    let len = roots.len();
    let one = ExactScalar::one();
    let mut lifts: Vec<TensorDecomposition> = Vec::new();
    for grid in search_grids(&roots) {
        let (phis, psis) = grid_factor_roots(&roots, &grid, &one);
        let selections: Vec<(Vec<usize>, Vec<usize>)> = if r.is_squarefree() {
            vec![((0..grid.n()).collect(), (0..grid.m()).collect())]
        } else {
            let rs = subsets_of_size_at_least_two(grid.n());
            let cs = subsets_of_size_at_least_two(grid.m());
            rs.iter()
                .flat_map(|a| cs.iter().map(move |b| (a.clone(), b.clone())))
                .filter(|(a, b)| grid.restrict(a, b).covers(len))
                .collect()
        };

        for (rows, cols) in selections {
            let sub = grid.restrict(&rows, &cols);
            let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
            for i in 0..sub.n() {
                for j in 0..sub.m() {
                    groups.entry(sub.cell(i, j)).or_default().push((i, j));
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
            let sys = ClashSystem::new(sub.n(), sub.m(), equations)?;
            for a in solve_system(&sys) {
                let p = FactoredPoly::new(rows.iter().zip(&a.e).map(|(&i, &e)| (phis[i].clone(), e)))?;
                let q = FactoredPoly::new(cols.iter().zip(&a.eps).map(|(&j, &e)| (psis[j].clone(), e)))?;
                if tensor_factored(&p, &q) != *r {
                    return Err(Error::Internal(format!("lift of grid {grid} does not reproduce r")));
                }
                lifts.push(TensorDecomposition {
                    p,
                    q,
                    grid: sub.clone(),
                    assignment: a,
                });
            }
        }
    }

    let mut classes: BTreeMap<CanonicalPair, TensorDecomposition> = BTreeMap::new();
    for d in &lifts {
        if is_trivial(&d.p, &d.q, r) {
            continue;
        }
        classes.entry(d.canonical()).or_insert_with(|| d.clone());
    }
    Ok(classes.into_values().collect())
}

/// [`factor`] on a dense polynomial with rational roots.
pub fn factor_dense(r: &DensePoly) -> Result<Vec<TensorDecomposition>> {
    factor(&rational_roots(r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{frac, int};

    fn fp(pairs: &[(ExactScalar, u32)]) -> FactoredPoly {
        FactoredPoly::new(pairs.iter().cloned()).unwrap()
    }

    fn singleton_system(targets: &[&[u32]]) -> ClashSystem {
        let mut eqs = Vec::new();
        for (i, row) in targets.iter().enumerate() {
            for (j, &t) in row.iter().enumerate() {
                eqs.push(ClashEquation {
                    root: int((10 * i + j + 1) as i64),
                    target: t,
                    pairs: vec![(i, j)],
                });
            }
        }
        ClashSystem::new(targets.len(), targets[0].len(), eqs).unwrap()
    }

    #[test]
    fn clash_groups() {
        let p = fp(&[(int(1), 1), (int(2), 1), (int(4), 1)]);
        let q = fp(&[(frac(1, 4), 1), (frac(1, 2), 1)]);
        let r = tensor_factored(&p, &q);
        let sys = clash_classes(&p, &q, &r).unwrap();
        let by_root: BTreeMap<ExactScalar, Vec<(usize, usize)>> =
            sys.equations().iter().map(|e| (e.root.clone(), e.pairs.clone())).collect();
        assert_eq!(by_root[&frac(1, 2)], vec![(0, 1), (1, 0)]);
        assert_eq!(by_root[&int(1)], vec![(1, 1), (2, 0)]);
        assert_eq!(by_root[&int(2)], vec![(2, 1)]);
        assert_eq!(by_root[&frac(1, 4)], vec![(0, 0)]);

        let s = fp(&[(int(1), 1), (int(2), 1)]);
        let sys = clash_classes(&s, &s, &tensor_factored(&s, &s)).unwrap();
        let two = sys.equations().iter().find(|e| e.root == int(2)).unwrap();
        assert_eq!(two.pairs, vec![(0, 1), (1, 0)]);

        assert!(clash_classes(&s, &s, &fp(&[(int(1), 1)])).is_err());
    }

    #[test]
    fn exact_examples() {
        assert!(solve_exact_system(&singleton_system(&[&[2, 2], &[1, 3]])).unwrap().is_empty());
        let sols = solve_exact_system(&singleton_system(&[&[2, 3], &[1, 2]])).unwrap();
        assert_eq!(sols, vec![MultiplicityAssignment { e: vec![2, 1], eps: vec![1, 2] }]);
        let sols = solve_exact_system(&singleton_system(&[&[1, 1, 1], &[1, 1, 1]])).unwrap();
        assert_eq!(sols, vec![MultiplicityAssignment { e: vec![1, 1], eps: vec![1, 1, 1] }]);
    }

    #[test]
    fn propagation_forces_offset() {
        let sys = singleton_system(&[&[1, 3]]);
        let sols = solve_tropical_system(&sys);
        assert_eq!(sols, vec![MultiplicityAssignment { e: vec![1], eps: vec![1, 3] }]);
        assert_eq!(sols, solve_exact_system(&sys).unwrap());
    }

    #[test]
    fn tropical_example() {
        let p = fp(&[(frac(1, 4), 1), (frac(1, 2), 1)]);
        let q = fp(&[(int(1), 1), (int(2), 1), (int(4), 1)]);
        let r = fp(&[(frac(1, 4), 1), (frac(1, 2), 2), (int(1), 2), (int(2), 3)]);
        let sys = clash_classes(&p, &q, &r).unwrap();
        let sols = solve_tropical_system(&sys);
        for s in &sols {
            assert!(sys.is_satisfied_by(s));
        }
        assert!(sols.contains(&MultiplicityAssignment { e: vec![1, 2], eps: vec![1, 1, 2] }));
    }

    #[test]
    fn factor_quartic() {
        let r = DensePoly::from_ints(&[576, -504, 158, -21, 1]);
        let got = factor_dense(&r).unwrap();
        assert_eq!(got.len(), 1);
        let c = got[0].canonical();
        assert_eq!(c.p, fp(&[(int(1), 1), (int(2), 1)]));
        assert_eq!(c.q, fp(&[(int(3), 1), (int(4), 1)]));
    }

    #[test]
    fn factor_with_multiplicities() {
        let p = fp(&[(int(1), 2), (int(-1), 1)]);
        let q = fp(&[(int(-2), 1), (int(-3), 2)]);
        let r = tensor_factored(&p, &q);
        assert_eq!(
            r,
            fp(&[(int(2), 1), (int(-2), 2), (int(3), 2), (int(-3), 3)])
        );
        let got: Vec<CanonicalPair> = factor(&r).unwrap().iter().map(|d| d.canonical()).collect();
        assert!(got.contains(&canonical_pair(&p, &q)));
        // (x - 3) on the right only adds roots already present at lower multiplicity.
        let wider = fp(&[(int(-2), 1), (int(-3), 2), (int(3), 1)]);
        assert!(got.contains(&canonical_pair(&p, &wider)));
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn factor_none() {
        let r = DensePoly::from_ints(&[24, -50, 35, -10, 1]);
        assert!(factor_dense(&r).unwrap().is_empty());
    }
}
