//! Library results against independent brute-force computations written
//! from the definitions, plus fixed reference values.

use matchpoly::corpus::{connected_simple_graphs_up_to, small_multigraphs};
use matchpoly::coverings::{
    count_labelings, covering_graph, d_matching_poly, d_matching_poly_product_form, edge_factor,
    godsil_gutman_expected_charpoly, hps_identity_check, std_cover_charpoly, CoveringLabeling,
    CoveringSpace, Permutation, DEFAULT_BUDGET,
};
use matchpoly::distributions::{expected_induced_matching_poly, SubsetDistribution};
use matchpoly::graphs::{Hypergraph, Multigraph};
use matchpoly::hypermatchings::{
    edge_operator, enumerate_relaxed_matchings, relaxed_kappa_subgraph_poly, relaxed_matching_poly,
    relaxed_matching_poly_via_degrees, weight,
};
use matchpoly::matchings::{matching_poly_univariate, subgraph_gen_poly};
use matchpoly::poly::{charpoly, int, rat, DiffOperator, MultiPoly, Rational, UniPoly};
use matchpoly::spectral::{closed_form_rho, rho_estimate, universal_cover_truncation};
use num_traits::{One, Zero};

// ---------- independent oracles ----------

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut sign = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            sign = -sign;
        }
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    (0..n).fold(sign, |acc, i| acc * &m[i][i])
}

/// `det(xI - A)` by evaluation at `0..=n` and Lagrange interpolation.
fn charpoly_oracle(a: &[Vec<i64>]) -> UniPoly {
    let n = a.len();
    let mut out = UniPoly::zero();
    for k in 0..=n {
        let t = int(k as i64);
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            &t - int(a[i][j])
                        } else {
                            int(-a[i][j])
                        }
                    })
                    .collect()
            })
            .collect();
        let mut basis = UniPoly::constant(det(m));
        for j in (0..=n).filter(|&j| j != k) {
            let scale = Rational::one() / (int(k as i64) - int(j as i64));
            basis = &basis * &UniPoly::new(vec![int(-(j as i64)) * &scale, scale]);
        }
        out = &out + &basis;
    }
    out
}

/// `μ_G = x μ_{G-v} - Σ_{e = vu, u ≠ v} μ_{G-v-u}` on explicit edge lists.
fn matching_oracle(n: usize, edges: &[(usize, usize)]) -> UniPoly {
    let alive: Vec<usize> = (0..n).collect();
    fn rec(alive: &[usize], edges: &[(usize, usize)]) -> UniPoly {
        let Some((&v, rest)) = alive.split_first() else {
            return UniPoly::one();
        };
        let mut out = &UniPoly::x() * &rec(rest, edges);
        for &(a, b) in edges {
            let u = if a == v && b != v {
                b
            } else if b == v && a != v {
                a
            } else {
                continue;
            };
            if let Some(pos) = rest.iter().position(|&w| w == u) {
                let mut smaller = rest.to_vec();
                smaller.remove(pos);
                out = &out - &rec(&smaller, edges);
            }
        }
        out
    }
    rec(&alive, edges)
}

fn perms_oracle(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms_oracle(d - 1) {
        for pos in 0..d {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out
}

/// Every labeling as a list of image arrays, one per edge.
fn labelings_oracle(edges: usize, d: usize) -> Vec<Vec<Vec<usize>>> {
    let sd = perms_oracle(d);
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for _ in 0..edges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                sd.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.push(p.clone());
                    next
                })
            })
            .collect();
    }
    out
}

fn lift_edges(g: &Multigraph, d: usize, perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .zip(perms)
        .flat_map(|(&(h, t), p)| (0..d).map(move |i| (h * d + i, t * d + p[i])))
        .collect()
}

fn average(polys: Vec<UniPoly>) -> UniPoly {
    let k = int(polys.len() as i64);
    let sum = polys.into_iter().fold(UniPoly::zero(), |a, b| &a + &b);
    sum.scale(&(Rational::one() / k))
}

fn d_matching_oracle(g: &Multigraph, d: usize) -> UniPoly {
    average(
        labelings_oracle(g.num_edges(), d)
            .iter()
            .map(|perms| matching_oracle(g.n() * d, &lift_edges(g, d, perms)))
            .collect(),
    )
}

/// Matrix of the standard representation of the permutation `q` of
/// `0..=d`, in the basis `e_i - e_d`, `i < d`.
fn std_matrix(q: &[usize]) -> Vec<Vec<i64>> {
    let d = q.len() - 1;
    let mut m = vec![vec![0; d]; d];
    for i in 0..d {
        if q[i] != d {
            m[q[i]][i] += 1;
        }
        if q[d] != d {
            m[q[d]][i] -= 1;
        }
    }
    m
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        q[j] = i;
    }
    q
}

/// `E_σ det(xI - A_{σ,std})` with the block matrix written out explicitly:
/// the `(h, t)` block of edge `e` is `std(σ_e⁻¹)`, the `(t, h)` block
/// `std(σ_e)`.
fn expected_std_oracle(g: &Multigraph, d: usize) -> UniPoly {
    let n = g.n();
    let polys = labelings_oracle(g.num_edges(), d + 1)
        .iter()
        .map(|perms| {
            let mut a = vec![vec![0i64; n * d]; n * d];
            for (&(h, t), p) in g.edges().iter().zip(perms) {
                for (from, to, q) in [(h, t, inverse(p)), (t, h, p.clone())] {
                    let m = std_matrix(&q);
                    for i in 0..d {
                        for j in 0..d {
                            a[from * d + i][to * d + j] += m[i][j];
                        }
                    }
                }
            }
            charpoly_oracle(&a)
        })
        .collect();
    average(polys)
}

fn brute_relaxed(h: &Hypergraph) -> MultiPoly {
    let n = h.n();
    let mut out = MultiPoly::zero(n);
    fn rec(h: &Hypergraph, e: usize, used: u32, sign: i64, w: i64, out: &mut MultiPoly) {
        if e == h.num_edges() {
            let exp = (0..h.n()).map(|i| (used >> i & 1 == 0) as u16).collect();
            out.add_term(exp, int(sign * w));
            return;
        }
        rec(h, e + 1, used, sign, w, out);
        let edge = &h.edges()[e];
        for mask in 1u32..1 << edge.len() {
            if mask.count_ones() < 2 {
                continue;
            }
            let set = (0..edge.len())
                .filter(|k| mask >> k & 1 == 1)
                .fold(0u32, |a, k| a | 1 << edge[k]);
            if set & used == 0 {
                rec(
                    h,
                    e + 1,
                    used | set,
                    -sign,
                    w * (mask.count_ones() as i64 - 1),
                    out,
                );
            }
        }
    }
    rec(h, 0, 0, 1, 1, &mut out);
    out
}

fn graph(n: usize, edges: &[(usize, usize)]) -> Multigraph {
    Multigraph::new(n, edges.to_vec()).unwrap()
}

fn hyper(n: usize, edges: &[&[usize]]) -> Hypergraph {
    Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
}

fn p(c: &[i64]) -> UniPoly {
    UniPoly::from_ints(c)
}

// ---------- comparisons ----------

#[test]
fn charpoly_matches_determinant_oracle() {
    for g in connected_simple_graphs_up_to(5)
        .iter()
        .chain(small_multigraphs(3, 3).iter())
    {
        let a = g.adjacency();
        assert_eq!(charpoly(&a), charpoly_oracle(&a), "{}", g.to_json());
    }
    assert_eq!(
        charpoly(&Multigraph::complete(3).adjacency()),
        p(&[-2, -3, 0, 1])
    );
}

#[test]
fn matching_poly_matches_recursion_oracle() {
    for g in connected_simple_graphs_up_to(6)
        .iter()
        .chain(small_multigraphs(4, 4).iter())
    {
        assert_eq!(
            matching_poly_univariate(g),
            matching_oracle(g.n(), g.edges()),
            "{}",
            g.to_json()
        );
    }
    assert_eq!(
        matching_poly_univariate(&Multigraph::complete(3)),
        p(&[0, -3, 0, 1])
    );
    assert_eq!(
        matching_poly_univariate(&Multigraph::path(3)),
        p(&[0, -2, 0, 1])
    );
}

#[test]
fn d_matching_matches_enumeration_oracle() {
    for g in small_multigraphs(3, 3) {
        for d in 1..=3 {
            let oracle = d_matching_oracle(&g, d);
            assert_eq!(
                d_matching_poly(&g, d, DEFAULT_BUDGET).unwrap(),
                oracle,
                "{} d={d}",
                g.to_json()
            );
            assert_eq!(
                d_matching_poly_product_form(&g, d, DEFAULT_BUDGET).unwrap(),
                oracle
            );
        }
    }
}

#[test]
fn d_matching_reference_values() {
    let b1 = Multigraph::bouquet(1);
    let edge = Multigraph::path(2);
    assert_eq!(d_matching_oracle(&b1, 2), p(&[-1, 0, 1]));
    // both 2-sheeted lifts of an edge are two disjoint edges
    assert_eq!(d_matching_oracle(&edge, 2), p(&[1, 0, -2, 0, 1]));
    assert_eq!(
        d_matching_oracle(&Multigraph::complete(3), 2),
        p(&[-1, 0, 9, 0, -6, 0, 1])
    );
    for g in [b1, edge, Multigraph::complete(3)] {
        assert_eq!(d_matching_oracle(&g, 1), matching_poly_univariate(&g));
    }
}

#[test]
fn signing_average_matches_oracle() {
    for g in connected_simple_graphs_up_to(5) {
        let m = g.num_edges();
        let sum = (0..1u32 << m)
            .map(|s| {
                let mut a = vec![vec![0i64; g.n()]; g.n()];
                for (e, &(u, v)) in g.edges().iter().enumerate() {
                    let w = if s >> e & 1 == 1 { -1 } else { 1 };
                    a[u][v] = w;
                    a[v][u] = w;
                }
                charpoly_oracle(&a)
            })
            .collect();
        assert_eq!(
            godsil_gutman_expected_charpoly(&g, DEFAULT_BUDGET).unwrap(),
            average(sum)
        );
    }
    let k3 = Multigraph::complete(3);
    assert_eq!(
        godsil_gutman_expected_charpoly(&k3, DEFAULT_BUDGET).unwrap(),
        p(&[0, -3, 0, 1])
    );
}

#[test]
fn standard_representation_oracle() {
    let cases = [
        (Multigraph::bouquet(1), 1),
        (Multigraph::bouquet(1), 2),
        (Multigraph::path(2), 2),
        (Multigraph::complete(3), 1),
        (Multigraph::complete(3), 2),
        (graph(2, &[(0, 1), (1, 1), (0, 1)]), 2),
        (Multigraph::bouquet(2), 2),
        (Multigraph::path(3), 3),
    ];
    for (g, d) in cases {
        let oracle = expected_std_oracle(&g, d);
        let report = hps_identity_check(&g, d, DEFAULT_BUDGET).unwrap();
        assert!(report.holds, "{} d={d}", g.to_json());
        assert_eq!(
            report.expected_std_charpoly,
            oracle,
            "{} d={d}",
            g.to_json()
        );
        assert_eq!(oracle, d_matching_oracle(&g, d), "{} d={d}", g.to_json());
    }
}

#[test]
fn std_quotient_examples() {
    let b1 = Multigraph::bouquet(1);
    let swap =
        CoveringLabeling::new(&b1, 2, vec![Permutation::from_images(vec![1, 0]).unwrap()]).unwrap();
    assert_eq!(std_cover_charpoly(&b1, &swap).unwrap(), p(&[2, 1]));
    assert_eq!(charpoly_oracle(&[vec![2]]), p(&[-2, 1]));
    let edge = Multigraph::path(2);
    assert_eq!(
        std_cover_charpoly(&edge, &CoveringLabeling::trivial(&edge, 2)).unwrap(),
        p(&[-1, 0, 1])
    );
    assert_eq!(
        std_cover_charpoly(&edge, &CoveringLabeling::trivial(&edge, 1)).unwrap(),
        UniPoly::one()
    );
    // B1, d = 2: three 3-sheeted coverings up to the average
    let r = hps_identity_check(&b1, 2, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.expected_cover_charpoly, p(&[2, -1, -2, 1]));
}

#[test]
fn labeling_space_matches_oracle_order() {
    let g = graph(3, &[(0, 1), (1, 2), (2, 2)]);
    let space = CoveringSpace::new(&g, 3, DEFAULT_BUDGET).unwrap();
    let mut sorted = labelings_oracle(3, 3);
    sorted.sort();
    let ours: Vec<Vec<Vec<usize>>> = space
        .iter()
        .map(|l| l.perms().iter().map(|q| q.images().to_vec()).collect())
        .collect();
    assert_eq!(ours, sorted);
    let fig1 = graph(4, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 3)]);
    assert_eq!(
        count_labelings(4, fig1.num_edges()),
        num_bigint::BigInt::from(7_962_624u64)
    );
    assert_eq!(CoveringSpace::new(&g, 1, DEFAULT_BUDGET).unwrap().len(), 1);
}

#[test]
fn covering_graphs_match_definition() {
    for g in small_multigraphs(3, 3) {
        for (k, perms) in labelings_oracle(g.num_edges(), 2).into_iter().enumerate() {
            let sigma = CoveringLabeling::new(
                &g,
                2,
                perms
                    .iter()
                    .map(|q| Permutation::from_images(q.clone()).unwrap())
                    .collect(),
            )
            .unwrap();
            let h = covering_graph(&g, &sigma);
            let want = graph(g.n() * 2, &lift_edges(&g, 2, &perms));
            assert_eq!(
                h.canonical_edges(),
                want.canonical_edges(),
                "{} labeling {k}",
                g.to_json()
            );
        }
    }
    let b1 = Multigraph::bouquet(1);
    let swap =
        CoveringLabeling::new(&b1, 2, vec![Permutation::from_images(vec![1, 0]).unwrap()]).unwrap();
    assert_eq!(
        covering_graph(&b1, &swap).canonical_edges(),
        vec![(0, 1), (0, 1)]
    );
    let id = CoveringLabeling::trivial(&b1, 2);
    assert_eq!(
        covering_graph(&b1, &id).canonical_edges(),
        vec![(0, 0), (1, 1)]
    );
}

#[test]
fn relaxed_matching_matches_brute_force() {
    let cases = [
        hyper(3, &[&[0, 1, 2]]),
        hyper(4, &[&[0, 1, 2, 3], &[0, 1]]),
        hyper(5, &[&[0, 1, 2], &[2, 3, 4], &[0, 4], &[1]]),
        hyper(6, &[&[0, 1, 2, 3], &[2, 3, 4, 5], &[0, 5], &[0, 5]]),
        Hypergraph::empty(3),
    ];
    for h in cases {
        assert_eq!(
            relaxed_matching_poly(&h),
            brute_relaxed(&h),
            "{}",
            h.to_json()
        );
        assert_eq!(relaxed_matching_poly_via_degrees(&h), brute_relaxed(&h));
    }
    for g in small_multigraphs(4, 4) {
        let h = Hypergraph::from_graph(&g);
        assert_eq!(
            relaxed_matching_poly(&h).diagonal(),
            matching_poly_univariate(&g),
            "{}",
            g.to_json()
        );
    }
}

// ---------- reference values ----------

#[test]
fn edge_operator_expansion() {
    // MAP[(1 - ∂_e) Π (1 + ∂_i)] = 1 - Σ_{|S|>1} (|S| - 1) ∂^S
    let op = edge_operator(3, &[0, 1, 2]);
    let mut want = MultiPoly::one(3);
    for (s, w) in [
        (vec![0, 1], 1),
        (vec![0, 2], 1),
        (vec![1, 2], 1),
        (vec![0, 1, 2], 2),
    ] {
        want -= &MultiPoly::subset_monomial(3, s).scale(&int(w));
    }
    assert_eq!(op, DiffOperator::from_symbol(want));
    assert_eq!(
        relaxed_matching_poly(&hyper(3, &[&[0, 1, 2]])).to_text(),
        "x0*x1*x2 - x0 - x1 - x2 - 2"
    );
}

#[test]
fn relaxed_weights_and_kappa() {
    assert_eq!(weight(&[(0, vec![0, 1, 2])]), num_bigint::BigInt::from(2));
    // sizes 2, 2, 3
    assert_eq!(
        weight(&[(0, vec![0, 1]), (1, vec![2, 3]), (2, vec![4, 5, 6])]),
        num_bigint::BigInt::from(2)
    );
    assert_eq!(
        enumerate_relaxed_matchings(&hyper(3, &[&[0, 1, 2]])).count(),
        5
    );
    let h = hyper(4, &[&[0, 1, 2], &[1, 3]]);
    assert_eq!(
        relaxed_kappa_subgraph_poly(&h, &[1, 1, 1, 1]).unwrap(),
        relaxed_matching_poly(&h)
    );
}

#[test]
fn subgraph_polynomial_of_a_loop() {
    let b1 = Multigraph::bouquet(1);
    assert_eq!(
        subgraph_gen_poly(&b1),
        &MultiPoly::one(1) - &MultiPoly::monomial(vec![2], int(1))
    );
    let two = graph(2, &[(0, 1), (0, 1)]);
    let single = &MultiPoly::one(2) - &MultiPoly::subset_monomial(2, [0, 1]);
    assert_eq!(subgraph_gen_poly(&two), &single * &single);
}

#[test]
fn edge_factor_on_the_diagonal() {
    // Σ_{σ ∈ S_2} Π_k (1 - x_{h,k} x_{t,σ(k)}) with x_h = x, x_t = y is 2(1 - xy)²
    let f = edge_factor(&Multigraph::path(2), 0, 2);
    let xy = &MultiPoly::one(2) - &MultiPoly::subset_monomial(2, [0, 1]);
    assert_eq!(f.embed(2, &[0, 0, 1, 1]), (&xy * &xy).scale(&int(2)));
}

#[test]
fn example_expansions() {
    let (a, b, c, d) = (rat(2, 5), rat(1, 10), rat(1, 10), rat(2, 5));
    let dist = SubsetDistribution::two_vertex(a.clone(), b.clone(), c.clone(), d.clone()).unwrap();
    let e = expected_induced_matching_poly(&Multigraph::path(2), &dist).unwrap();
    let x0 = MultiPoly::var(2, 0);
    let x1 = MultiPoly::var(2, 1);
    let want = &(&(&(&x0 * &x1) - &MultiPoly::one(2)).scale(&a) + &x0.scale(&b))
        + &(&x1.scale(&c) + &MultiPoly::constant(2, d));
    assert_eq!(e, want);

    let probs = [rat(1, 3), rat(1, 2), rat(3, 4)];
    let z = SubsetDistribution::bernoulli(&probs)
        .unwrap()
        .partition_function();
    let prod = probs
        .iter()
        .enumerate()
        .fold(MultiPoly::one(3), |acc, (i, q)| {
            let factor =
                &MultiPoly::constant(3, Rational::one() - q) + &MultiPoly::var(3, i).scale(q);
            &acc * &factor
        });
    assert_eq!(z, prod);
}

/// Largest eigenvalue of a tree by power iteration on `A + cI`.
fn power_iteration(g: &Multigraph) -> f64 {
    let adj = g.neighbors();
    let c = g.max_degree() as f64;
    let mut v = vec![1.0f64; g.n()];
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let w: Vec<f64> = (0..g.n())
            .map(|i| c * v[i] + adj[i].iter().map(|&j| v[j]).sum::<f64>())
            .collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        lambda = w.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>()
            / v.iter().map(|x| x * x).sum::<f64>();
        v = w.into_iter().map(|x| x / norm).collect();
    }
    lambda - c
}

fn to_f64(r: &Rational) -> f64 {
    r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap()
}

#[test]
fn rho_estimates_against_numeric_oracle() {
    for (g, depth) in [
        (Multigraph::complete(4), 6),
        (Multigraph::cycle(5), 10),
        (Multigraph::star(3), 3),
    ] {
        let est = to_f64(&rho_estimate(&g, depth).unwrap().value);
        let numeric = (0..g.n())
            .map(|r| power_iteration(&universal_cover_truncation(&g, r, depth).unwrap().to_graph()))
            .fold(f64::MIN, f64::max);
        assert!(
            est <= numeric + 1e-9 && numeric - est < 1e-5,
            "{}: {est} vs {numeric}",
            g.to_json()
        );
    }
    // cycles: the depth-D truncation is a path on 2D + 1 vertices
    for depth in [3usize, 7, 18] {
        let est = to_f64(&rho_estimate(&Multigraph::cycle(6), depth).unwrap().value);
        let exact = 2.0 * (std::f64::consts::PI / (2 * depth + 2) as f64).cos();
        assert!(
            est <= exact && exact - est < 2f64.powi(-19),
            "depth {depth}: {est} vs {exact}"
        );
    }
    let k4 = to_f64(&rho_estimate(&Multigraph::complete(4), 12).unwrap().value);
    assert!(k4 < 8f64.sqrt() && k4 > 2.7, "{k4}");
}

#[test]
fn trees_are_their_own_universal_cover() {
    for g in connected_simple_graphs_up_to(6)
        .into_iter()
        .filter(|g| g.num_edges() + 1 == g.n())
    {
        let t = universal_cover_truncation(&g, 0, g.n()).unwrap();
        assert_eq!(t.len(), g.n());
        let top = to_f64(&closed_form_rho(&g).unwrap().upper_bound);
        let est = to_f64(&rho_estimate(&g, g.n()).unwrap().value);
        assert!(top - est < 2e-6 && est <= top, "{}", g.to_json());
    }
}
