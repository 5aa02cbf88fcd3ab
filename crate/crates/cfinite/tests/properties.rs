use std::collections::BTreeSet;

use cfinite::exactpoly::{
    format_scalar, frac, gcd, int, lcm, parse_scalar, rational_roots, reverse, squarefree_part, DensePoly,
    ExactScalar, FactoredPoly,
};
use cfinite::gridsearch::{factor_squarefree, reconstruct, search_grids, RootList};
use cfinite::lincomb::{lincomb_decompose, search_grid_pairs};
use cfinite::multiplicity::{
    factor, solve_exact_system, solve_tropical_system, ClashEquation, ClashSystem, MultiplicityAssignment,
};
use cfinite::oracle::{
    all_small_grids, brute_force_grid_pairs, brute_force_multiplicities, closure_signature, MAX_GRID_CELLS,
};
use cfinite::sequences::{
    check_product_annihilated, guess_recurrence, verify_lincomb_closure, verify_product_closure, verify_sum_closure,
    CFiniteSeq,
};
use cfinite::tensor::{mul_coeff, tensor_factored, test_fact, Verdict};
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (prop_oneof![-9i64..=-1, 1i64..=9], 1i64..=4).prop_map(|(a, b)| frac(a, b))
}

fn small_int_root() -> impl Strategy<Value = ExactScalar> {
    prop::sample::select(vec![-4i64, -3, -2, -1, 1, 2, 3, 4, 6, 8, 9, 12]).prop_map(int)
}

fn factored_from(
    root: impl Strategy<Value = ExactScalar>,
    distinct: std::ops::RangeInclusive<usize>,
    max_mult: u32,
) -> impl Strategy<Value = FactoredPoly> {
    let hi = *distinct.end();
    (prop::collection::btree_set(root, distinct), prop::collection::vec(1..=max_mult, hi))
        .prop_map(|(set, ms)| FactoredPoly::new(set.into_iter().zip(ms)).unwrap())
}

fn factored(distinct: std::ops::RangeInclusive<usize>, max_mult: u32) -> impl Strategy<Value = FactoredPoly> {
    factored_from(scalar(), distinct, max_mult)
}

fn dense() -> impl Strategy<Value = DensePoly> {
    (prop::collection::vec(-6i64..=6, 0..5), prop_oneof![-4i64..=-1, 1i64..=4]).prop_map(|(mut c, lead)| {
        c.push(lead);
        DensePoly::from_ints(&c)
    })
}

fn root_product(p: &FactoredPoly, q: &FactoredPoly) -> DensePoly {
    let mut all = Vec::new();
    for (a, ea) in p.factors() {
        for (b, eb) in q.factors() {
            all.extend(std::iter::repeat_n(a * b, (ea * eb) as usize));
        }
    }
    FactoredPoly::from_roots(&all).unwrap().expand()
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn gcd_times_lcm(a in dense(), b in dense()) {
        let lhs = (&a.monic() * &b.monic()).monic();
        let rhs = &gcd(&a, &b).unwrap().monic() * &lcm(&a, &b).unwrap().monic();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_roots_expand_back(f in factored(1..=4, 3)) {
        prop_assert_eq!(rational_roots(&f.expand()).unwrap(), f);
    }

    #[test]
    fn squarefree_part_drops_multiplicities(f in factored(1..=4, 3)) {
        prop_assert_eq!(squarefree_part(&f.expand()).unwrap(), f.squarefree().expand());
    }

    #[test]
    fn reverse_is_involution(f in factored(1..=4, 2)) {
        let p = f.expand();
        prop_assert_eq!(reverse(&reverse(&p).unwrap()).unwrap().monic(), p);
    }

    #[test]
    fn text_round_trip(p in dense(), x in scalar()) {
        prop_assert_eq!(DensePoly::parse(&p.to_text()).unwrap(), p);
        prop_assert_eq!(parse_scalar(&format_scalar(&x)).unwrap(), x);
    }

    #[test]
    fn mul_coeff_matches_root_products(p in factored(1..=3, 2), q in factored(1..=3, 2)) {
        prop_assume!(p.degree() <= 5 && q.degree() <= 5);
        prop_assert_eq!(mul_coeff(&p.expand(), &q.expand()).unwrap(), root_product(&p, &q));
    }

    #[test]
    fn mul_coeff_and_tensor_agree_when_squarefree(p in factored(1..=4, 1), q in factored(1..=4, 1)) {
        let full = mul_coeff(&p.expand(), &q.expand()).unwrap();
        prop_assert_eq!(squarefree_part(&full).unwrap(), tensor_factored(&p, &q).expand());
    }

    #[test]
    fn tensor_commutes(p in factored(1..=4, 3), q in factored(1..=4, 3)) {
        prop_assert_eq!(tensor_factored(&p, &q), tensor_factored(&q, &p));
    }

    #[test]
    fn tensor_degree_bounds(p in factored(1..=5, 3), q in factored(1..=5, 3)) {
        let d = tensor_factored(&p, &q).degree();
        let (sp, sq) = (p.squarefree(), q.squarefree());
        let ds = tensor_factored(&sp, &sq).degree();
        prop_assert!(ds <= sp.degree() * sq.degree());
        prop_assert!(d >= p.degree().max(q.degree()));
    }

    #[test]
    fn tensor_lower_bound_on_positive_roots(
        p in factored_from((1i64..=12, 1i64..=3).prop_map(|(a, b)| frac(a, b)), 1..=5, 1),
        q in factored_from((1i64..=12, 1i64..=3).prop_map(|(a, b)| frac(a, b)), 1..=5, 1),
    ) {
        prop_assert!(tensor_factored(&p, &q).degree() + 1 >= p.degree() + q.degree());
    }

    #[test]
    fn products_pass_the_screen(p in factored(2..=3, 1), q in factored(2..=3, 1)) {
        let r = tensor_factored(&p, &q).expand();
        prop_assert_eq!(test_fact(&r).unwrap().verdict, Verdict::PossiblyFactorable);
    }

    #[test]
    fn tensor_annihilates_term_products(p in factored(1..=2, 2), q in factored(1..=2, 2), seed in any::<u64>()) {
        let r = tensor_factored(&p, &q).expand();
        prop_assert!(check_product_annihilated(&p.expand(), &q.expand(), &r, 2, 12, seed).unwrap());
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn grids_are_well_formed(set in prop::collection::btree_set(small_int_root(), 2..=7)) {
        let roots = RootList::new(set.into_iter().collect()).unwrap();
        let grids = search_grids(&roots);
        for g in &grids {
            prop_assert!(g.is_canonically_ordered());
            prop_assert!(g.satisfies_ratio_conditions(&roots));
            prop_assert!(g.covers(roots.len()));
            prop_assert!(g.n() <= g.m() && g.n() >= 2);
        }
        prop_assert_eq!(&search_grids(&roots), &grids);
    }

    #[test]
    fn squarefree_factorizations_are_sound(p in factored_from(small_int_root(), 2..=3, 1), q in factored_from(small_int_root(), 2..=3, 1)) {
        let r = tensor_factored(&p, &q);
        let roots = RootList::from_factored(&r);
        for f in factor_squarefree(&roots).unwrap() {
            prop_assert_eq!(tensor_factored(&f.p, &f.q), r.clone());
        }
    }

    #[test]
    fn search_matches_enumeration(set in prop::collection::btree_set(small_int_root(), 2..=6)) {
        let roots = RootList::new(set.into_iter().collect()).unwrap();
        let ours = closure_signature(&roots, &search_grids(&roots));
        let brute = closure_signature(&roots, &all_small_grids(&roots).unwrap());
        prop_assert_eq!(ours, brute);
    }

    #[test]
    fn reconstruction_is_gauge_covariant(
        p in factored_from(small_int_root(), 2..=3, 1),
        q in factored_from(small_int_root(), 2..=3, 1),
        xi in scalar(),
    ) {
        let roots = RootList::from_factored(&tensor_factored(&p, &q));
        for g in search_grids(&roots) {
            let (p1, q1) = reconstruct(&roots, &g, &ExactScalar::one()).unwrap();
            let (px, qx) = reconstruct(&roots, &g, &xi).unwrap();
            prop_assert_eq!(px, p1.scale(&xi));
            prop_assert_eq!(qx, q1.scale(&xi.recip()));
        }
    }
}

fn clash_system() -> impl Strategy<Value = ClashSystem> {
    (1usize..=3, 1usize..=3)
        .prop_filter("n + m <= 6", |(n, m)| n + m <= 6)
        .prop_flat_map(|(n, m)| {
            let cells = n * m;
            (
                Just((n, m)),
                prop::collection::vec(0..cells, cells),
                prop::collection::vec(1u32..=4, cells),
            )
        })
        .prop_map(|((n, m), labels, targets)| {
            let mut groups: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
            for (k, &label) in labels.iter().enumerate() {
                groups.entry(label).or_default().push((k / m, k % m));
            }
            let equations = groups
                .into_iter()
                .map(|(label, pairs)| ClashEquation {
                    root: int(label as i64 + 1),
                    target: targets[label],
                    pairs,
                })
                .collect();
            ClashSystem::new(n, m, equations).unwrap()
        })
}

fn singleton_system() -> impl Strategy<Value = ClashSystem> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(n, m)| (Just((n, m)), prop::collection::vec(1u32..=4, n * m)))
        .prop_map(|((n, m), targets)| {
            let equations = targets
                .iter()
                .enumerate()
                .map(|(k, &t)| ClashEquation {
                    root: int(k as i64 + 1),
                    target: t,
                    pairs: vec![(k / m, k % m)],
                })
                .collect();
            ClashSystem::new(n, m, equations).unwrap()
        })
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn tropical_matches_enumeration(sys in clash_system()) {
        let ours: BTreeSet<MultiplicityAssignment> = solve_tropical_system(&sys).into_iter().collect();
        for a in &ours {
            prop_assert!(sys.is_satisfied_by(a));
        }
        let brute: BTreeSet<MultiplicityAssignment> = brute_force_multiplicities(&sys).unwrap().into_iter().collect();
        prop_assert_eq!(ours, brute);
    }

    #[test]
    fn tropical_agrees_with_exact_on_singletons(sys in singleton_system()) {
        let exact: BTreeSet<_> = solve_exact_system(&sys).unwrap().into_iter().collect();
        let tropical: BTreeSet<_> = solve_tropical_system(&sys).into_iter().collect();
        prop_assert_eq!(exact, tropical);
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn factor_is_sound_and_finds_products(p in factored(2..=3, 3), q in factored(2..=3, 3)) {
        let r = tensor_factored(&p, &q);
        let got = factor(&r).unwrap();
        prop_assert!(!got.is_empty());
        for d in &got {
            prop_assert_eq!(tensor_factored(&d.p, &d.q), r.clone());
        }
        prop_assert!(!lincomb_decompose(&r).unwrap().is_empty());
    }

    #[test]
    fn lincomb_is_sound(
        p1 in factored_from(small_int_root(), 2..=2, 2),
        q1 in factored_from(small_int_root(), 2..=2, 1),
        p2 in factored_from(small_int_root(), 2..=2, 1),
        q2 in factored_from(small_int_root(), 2..=2, 2),
    ) {
        let r = tensor_factored(&p1, &q1).lcm(&tensor_factored(&p2, &q2));
        prop_assume!(r.distinct_count() <= 8);
        for d in lincomb_decompose(&r).unwrap() {
            prop_assert_eq!(d.expand(), r.clone());
        }
    }

    #[test]
    fn lincomb_operators_annihilate(
        p1 in factored_from(small_int_root(), 1..=2, 1),
        q1 in factored_from(small_int_root(), 1..=2, 1),
        p2 in factored_from(small_int_root(), 1..=2, 1),
        q2 in factored_from(small_int_root(), 1..=2, 1),
        seed in any::<u64>(),
    ) {
        let ok = verify_lincomb_closure((&p1.expand(), &q1.expand()), (&p2.expand(), &q2.expand()), 2, 12, seed);
        prop_assert!(ok.unwrap());
    }

    #[test]
    fn guessed_operator_divides_charpoly(f in factored_from(small_int_root(), 1..=3, 2), init in prop::collection::vec(-3i64..=3, 6)) {
        let p = f.expand();
        let d = p.degree().unwrap();
        let init: Vec<ExactScalar> = init.into_iter().take(d).map(int).collect();
        prop_assume!(init.len() == d && init.iter().any(|x| *x != int(0)));
        let terms = CFiniteSeq::new(&p, init).unwrap().unroll(2 * d + 4);
        let g = guess_recurrence(&terms).unwrap();
        prop_assert!(p.exact_div(&g).is_some());
    }

    #[test]
    fn closure_witnesses(p in factored(1..=3, 1), q in factored(1..=3, 1), seed in any::<u64>()) {
        prop_assume!(p.degree() <= 3 && q.degree() <= 3);
        prop_assert!(verify_product_closure(&p.expand(), &q.expand(), 2, 10, seed).unwrap());
        prop_assert!(verify_sum_closure(&p.expand(), &q.expand(), 2, 10, seed).unwrap());
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn pair_search_matches_enumeration(set in prop::collection::btree_set(small_int_root(), 4..=6)) {
        let roots = RootList::new(set.into_iter().collect()).unwrap();
        let small = |g: &cfinite::gridsearch::GridMap| g.n() * g.m() <= MAX_GRID_CELLS;
        let ours: Vec<_> = search_grid_pairs(&roots)
            .unwrap()
            .into_iter()
            .filter(|p| !p.is_degenerate() && small(p.first()) && small(p.second()))
            .collect();
        prop_assert_eq!(ours, brute_force_grid_pairs(&roots).unwrap());
    }
}
