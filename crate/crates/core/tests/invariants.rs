use matchpoly::corpus::{
    closed_form_family, connected_simple_graphs_up_to, random_bernoulli, random_distribution,
    random_hypergraphs, small_multigraphs,
};
use matchpoly::coverings::{
    count_labelings, covering_graph, expected_cover_gen_poly, CoveringSpace, DEFAULT_BUDGET,
};
use matchpoly::distributions::{
    bivariate_multiaffine_stable, expected_induced_matching_poly, rayleigh_refute, tg_operator,
    SubsetDistribution,
};
use matchpoly::graphs::{Hypergraph, Multigraph};
use matchpoly::hypermatchings::{
    count_unlabeled_relaxed_matchings, enumerate_relaxed_matchings, relaxed_matching_poly,
};
use matchpoly::matchings::{
    matching_poly_matched, matching_poly_multivariate, matching_poly_univariate, subgraph_gen_poly,
};
use matchpoly::poly::{rat, refute_stability, MultiPoly, UniPoly};
use matchpoly::spectral::{check_roots_bounded, closed_form_rho, rho_estimate};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn multigraph(max_n: usize, max_edges: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_edges)
            .prop_map(move |e| Multigraph::new(n, e).unwrap())
    })
}

fn hypergraph() -> impl Strategy<Value = Hypergraph> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(0..n, 1..=n.min(4)), 0..=4).prop_map(
            move |e| {
                Hypergraph::new(n, e.into_iter().map(|s| s.into_iter().collect()).collect())
                    .unwrap()
            },
        )
    })
}

/// Same hypergraph after renaming vertices so that edge lists sort equal.
fn canonical(h: &Hypergraph) -> Vec<Vec<usize>> {
    let mut e: Vec<Vec<usize>> = h.edges().to_vec();
    e.sort();
    e
}

proptest! {
    #[test]
    fn adjacency_is_symmetric_with_degree_row_sums(g in multigraph(6, 8)) {
        let a = g.adjacency();
        for i in 0..g.n() {
            prop_assert_eq!(a[i].iter().sum::<i64>(), g.degree(i) as i64);
            for j in 0..g.n() {
                prop_assert_eq!(a[i][j], a[j][i]);
                prop_assert!(a[i][j] >= 0);
            }
        }
        prop_assert_eq!((0..g.n()).map(|v| g.degree(v)).sum::<usize>(), 2 * g.num_edges());
    }

    #[test]
    fn weak_deletions_commute(h in hypergraph(), a in 0usize..6, b in 0usize..6) {
        prop_assume!(a < h.n() && b < h.n() && a != b);
        let (ha, map_a) = h.delete_vertex_weak(a);
        let (hab, _) = ha.delete_vertex_weak(map_a[b].unwrap());
        let (hb, map_b) = h.delete_vertex_weak(b);
        let (hba, _) = hb.delete_vertex_weak(map_b[a].unwrap());
        // both orders relabel the survivors in increasing order
        prop_assert_eq!(canonical(&hab), canonical(&hba));
        prop_assert_eq!(canonical(&hab), canonical(&h.delete_vertices_weak(&[a, b]).0));
    }

    #[test]
    fn disjoint_union_is_associative(x in hypergraph(), y in hypergraph(), z in hypergraph()) {
        let left = x.disjoint_union(&y).disjoint_union(&z);
        let right = x.disjoint_union(&y.disjoint_union(&z));
        prop_assert_eq!(left.n(), x.n() + y.n() + z.n());
        prop_assert_eq!(canonical(&left), canonical(&right));
    }

    #[test]
    fn matching_conventions_agree(g in multigraph(5, 6)) {
        prop_assert_eq!(subgraph_gen_poly(&g).map_multiaffine_part(), matching_poly_matched(&g));
        prop_assert_eq!(matching_poly_multivariate(&g).diagonal(), matching_poly_univariate(&g));
        prop_assert_eq!(matching_poly_matched(&g).complement_transform().unwrap(), matching_poly_multivariate(&g));
        prop_assert!(matching_poly_univariate(&g).is_real_rooted());
    }

    #[test]
    fn coverings_are_fiberwise_regular(g in multigraph(4, 4), d in 1usize..=3, pick in 0u64..1_000_000) {
        let space = CoveringSpace::new(&g, d, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(num_bigint::BigInt::from(space.len()), count_labelings(d, g.num_edges()));
        let sigma = space.labeling_at(pick % space.len());
        let h = covering_graph(&g, &sigma);
        prop_assert_eq!(h.n(), g.n() * d);
        prop_assert_eq!(h.num_edges(), g.num_edges() * d);
        for v in 0..h.n() {
            prop_assert_eq!(h.degree(v), g.degree(v / d));
        }
        // the projection (v, i) ↦ v maps edges onto edges with multiplicity d
        let mut projected: Vec<(usize, usize)> = h.canonical_edges().iter().map(|&(a, b)| (a / d, b / d)).collect();
        projected.sort_unstable();
        let mut expected: Vec<(usize, usize)> = g.canonical_edges().into_iter().flat_map(|e| std::iter::repeat_n(e, d)).collect();
        expected.sort_unstable();
        prop_assert_eq!(projected, expected);
    }

    #[test]
    fn parallel_and_serial_averages_agree(g in multigraph(3, 3), d in 1usize..=3) {
        let space = CoveringSpace::new(&g, d, DEFAULT_BUDGET).unwrap();
        let f = |l: &_| matching_poly_matched(&covering_graph(&g, l));
        prop_assert_eq!(space.average_multi(true, g.n() * d, f), space.average_multi(false, g.n() * d, f));
        prop_assert_eq!(
            expected_cover_gen_poly(&g, d, DEFAULT_BUDGET).unwrap().map_multiaffine_part(),
            space.average_multi(false, g.n() * d, f)
        );
    }

    #[test]
    fn linear_hypergraphs_count_the_same_either_way(h in hypergraph()) {
        let labeled = enumerate_relaxed_matchings(&h).count();
        let unlabeled = count_unlabeled_relaxed_matchings(&h);
        prop_assert!(unlabeled <= labeled);
        if h.is_linear() {
            prop_assert_eq!(unlabeled, labeled);
        }
    }
}

#[test]
fn operator_reproduces_matching_polynomials() {
    for g in connected_simple_graphs_up_to(5) {
        let top = MultiPoly::subset_monomial(g.n(), 0..g.n());
        assert_eq!(
            tg_operator(&g).unwrap().apply(&top),
            matching_poly_multivariate(&g),
            "{}",
            g.to_json()
        );
    }
}

#[test]
fn matching_polynomials_are_not_refuted() {
    for (k, g) in small_multigraphs(4, 4).iter().enumerate() {
        let f = matching_poly_multivariate(g);
        assert!(
            !refute_stability(&f, 100, k as u64).is_refuted(),
            "{}",
            g.to_json()
        );
    }
}

#[test]
fn direct_and_operator_expectations_agree() {
    let graphs = connected_simple_graphs_up_to(5);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..200 {
        let g = &graphs[rng.gen_range(0..graphs.len())];
        let p = random_distribution(g.n(), &mut rng);
        // the call itself compares both computations
        let e = expected_induced_matching_poly(g, &p).unwrap();
        let direct = p.support().fold(MultiPoly::zero(g.n()), |acc, (s, q)| {
            &acc + &matching_poly_multivariate(&g.induced(&s))
                .embed(g.n(), &s)
                .scale(q)
        });
        assert_eq!(e, direct);
    }
}

#[test]
fn expected_induced_polynomials_are_real_rooted() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for g in connected_simple_graphs_up_to(5) {
        let mut dists: Vec<SubsetDistribution> = (0..=g.n())
            .map(|k| SubsetDistribution::uniform_k(g.n(), k).unwrap())
            .collect();
        dists.extend((0..3).map(|_| random_bernoulli(g.n(), &mut rng)));
        for p in dists {
            let u = expected_induced_matching_poly(&g, &p).unwrap().diagonal();
            assert!(u.is_real_rooted(), "{} {}", g.to_json(), p.to_json());
            assert!(!rayleigh_refute(&p, 20, 0).is_refuted(), "{}", p.to_json());
        }
    }
}

#[test]
fn stability_criterion_agrees_with_refuter_on_grid() {
    let mut checked = 0;
    for a in 0..=20i64 {
        for b in 0..=20 - a {
            for c in 0..=20 - a - b {
                let d = 20 - a - b - c;
                let q = [a, b, c, d].map(|k| rat(k, 20));
                let stable = bivariate_multiaffine_stable(&q[0], &q[1], &q[2], &q[3]).unwrap();
                let [qa, qb, qc, qd] = q;
                let z = SubsetDistribution::two_vertex(qa, qb, qc, qd)
                    .unwrap()
                    .partition_function();
                assert_eq!(
                    refute_stability(&z, 500, 0).is_refuted(),
                    !stable,
                    "(a,b,c,d) = ({a},{b},{c},{d})/20"
                );
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 1771);
}

#[test]
fn rho_estimates_are_monotone_and_below_closed_forms() {
    for g in connected_simple_graphs_up_to(5) {
        // the truncated cover grows like (Δ-1)^D, so only paths and cycles go deep
        let max_depth = if (0..g.n()).all(|v| g.degree(v) <= 2) {
            14
        } else {
            8
        };
        let mut prev = rat(0, 1);
        for depth in 0..=max_depth {
            let r = rho_estimate(&g, depth).unwrap().value;
            assert!(r >= prev, "{} depth {depth}", g.to_json());
            prev = r;
        }
        if let Some(c) = closed_form_rho(&g) {
            assert!(prev <= c.upper_bound, "{}", g.to_json());
        }
    }
}

#[test]
fn matching_roots_lie_within_rho() {
    for g in closed_form_family(6) {
        let bound = closed_form_rho(&g).unwrap().upper_bound;
        assert!(
            check_roots_bounded(&matching_poly_univariate(&g), &bound, true),
            "{}",
            g.to_json()
        );
    }
    let k3 = Multigraph::complete(3);
    assert!(check_roots_bounded(
        &matching_poly_univariate(&k3),
        &rat(2, 1),
        true
    ));
    assert!(!check_roots_bounded(
        &UniPoly::from_ints(&[-3, 1]),
        &rat(2, 1),
        false
    ));
    assert!(check_roots_bounded(&UniPoly::one(), &rat(0, 1), true));
}

#[test]
fn relaxed_polynomials_on_extra_corpus() {
    for case in random_hypergraphs(60, 99) {
        let eta = relaxed_matching_poly(&case.hypergraph);
        assert!(
            eta.diagonal().is_real_rooted(),
            "{}",
            case.hypergraph.to_json()
        );
        let lead = eta.diagonal().leading_coeff().unwrap().to_i64();
        assert_eq!(lead, Some(1));
    }
}
