//! Universal covering tree truncations and spectral radius bounds.
//!
//! The universal cover of a connected simple graph is the tree of
//! non-backtracking walks from a fixed root. Its depth-`D` truncation is a
//! finite induced subgraph, so the largest eigenvalue of the truncation is
//! a lower bound on `ρ(G)` that increases with `D`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::graphs::Multigraph;
use crate::poly::{charpoly, int, Rational, UniPoly};
use crate::{Error, Result};

/// Maximum number of nodes an explicit truncation may have.
pub const MAX_TREE_NODES: u64 = 200_000;

/// Bisection stops once the bracket is at most `2^-RHO_PRECISION_BITS` wide.
pub const RHO_PRECISION_BITS: u32 = 20;

/// Depth-`D` truncation of the universal cover rooted at a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeTruncation {
    pub root: usize,
    pub depth: usize,
    /// `parent[k]` is `None` for the root node 0.
    pub parent: Vec<Option<usize>>,
    /// Last vertex of the walk represented by each node.
    pub end: Vec<usize>,
}

impl TreeTruncation {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// The walk `root = i_0, i_1, …` represented by `node`.
    pub fn walk(&self, mut node: usize) -> Vec<usize> {
        let mut w = vec![self.end[node]];
        while let Some(p) = self.parent[node] {
            w.push(self.end[p]);
            node = p;
        }
        w.reverse();
        w
    }

    /// The truncation as a graph on its nodes.
    pub fn to_graph(&self) -> Multigraph {
        let edges = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(k, p)| p.map(|p| (p, k)))
            .collect();
        Multigraph::new(self.len(), edges).expect("parents precede children")
    }
}

fn require_simple_connected(g: &Multigraph) -> Result<()> {
    if !g.is_simple() {
        return Err(Error::invalid(
            "universal covers are supported for simple graphs only",
        ));
    }
    if !g.is_connected() {
        return Err(Error::invalid("universal covers need a connected graph"));
    }
    Ok(())
}

/// Number of non-backtracking walks of length at most `depth` from `root`,
/// saturating at `u64::MAX`.
pub fn truncation_size(g: &Multigraph, root: usize, depth: usize) -> u64 {
    let adj = g.neighbors();
    // (prev, cur) -> number of walks ending with that step
    let mut layer: HashMap<(usize, usize), u64> =
        adj[root].iter().map(|&w| ((root, w), 1)).collect();
    let mut total: u64 = 1;
    for _ in 0..depth {
        total = total.saturating_add(layer.values().fold(0u64, |a, &b| a.saturating_add(b)));
        let mut next = HashMap::new();
        for (&(prev, cur), &c) in &layer {
            for &w in adj[cur].iter().filter(|&&w| w != prev) {
                let slot = next.entry((cur, w)).or_insert(0u64);
                *slot = slot.saturating_add(c);
            }
        }
        layer = next;
    }
    total
}

/// All non-backtracking walks of length `≤ depth` from `root`, as a tree in
/// breadth-first order.
pub fn universal_cover_truncation(
    g: &Multigraph,
    root: usize,
    depth: usize,
) -> Result<TreeTruncation> {
    require_simple_connected(g)?;
    if root >= g.n() {
        return Err(Error::invalid(format!("root {root} outside 0..{}", g.n())));
    }
    let size = truncation_size(g, root, depth);
    if size > MAX_TREE_NODES {
        return Err(Error::BudgetExceeded {
            count: size.to_string(),
            cap: MAX_TREE_NODES,
        });
    }
    let adj = g.neighbors();
    let mut t = TreeTruncation {
        root,
        depth,
        parent: vec![None],
        end: vec![root],
    };
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &node in &frontier {
            let cur = t.end[node];
            let prev = t.parent[node].map(|p| t.end[p]);
            for &w in &adj[cur] {
                if Some(w) != prev {
                    t.parent.push(Some(node));
                    t.end.push(w);
                    next.push(t.parent.len() - 1);
                }
            }
        }
        frontier = next;
    }
    Ok(t)
}

/// Result of a truncation-based spectral radius estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoEstimate {
    /// Certified lower bound on `ρ(G)`.
    pub value: Rational,
    pub depth: usize,
    pub method: &'static str,
}

/// Per-state outcome of the tree diagonalization.
#[derive(Clone)]
struct Diag {
    value: Rational,
    /// The edge to the parent was removed.
    detached: bool,
    /// Positive diagonal entries in the subtree.
    positive: u64,
}

/// Diagonalizes `A + αI` for the walk tree below `(prev, cur)` with `rem`
/// levels left (Jacobs–Trevisan). Subtrees with equal state are isomorphic,
/// so results are memoized by state.
fn diagonalize(
    adj: &[Vec<usize>],
    alpha: &Rational,
    state: (Option<usize>, usize, usize),
    memo: &mut HashMap<(Option<usize>, usize, usize), Diag>,
) -> Diag {
    if let Some(d) = memo.get(&state) {
        return d.clone();
    }
    let (prev, cur, rem) = state;
    let mut value = alpha.clone();
    let mut positive = 0u64;
    let mut detached = false;
    if rem > 0 {
        let children: Vec<Diag> = adj[cur]
            .iter()
            .filter(|&&w| Some(w) != prev)
            .map(|&w| diagonalize(adj, alpha, (Some(cur), w, rem - 1), memo))
            .collect();
        positive = children.iter().map(|c| c.positive).sum();
        let attached: Vec<&Diag> = children.iter().filter(|c| !c.detached).collect();
        if attached.iter().any(|c| c.value.is_zero()) {
            // one zero child becomes 2, this node becomes -1/2 and is cut off
            positive += 1;
            value = Rational::new(BigInt::from(-1), BigInt::from(2));
            detached = true;
        } else {
            for c in attached {
                value -= c.value.recip();
            }
        }
    }
    if value.is_positive() {
        positive += 1;
    }
    let d = Diag {
        value,
        detached,
        positive,
    };
    memo.insert(state, d.clone());
    d
}

/// Number of eigenvalues greater than `lambda` of the depth-`depth` walk
/// tree rooted at `root`.
pub fn eigenvalues_above(g: &Multigraph, root: usize, depth: usize, lambda: &Rational) -> u64 {
    let adj = g.neighbors();
    let alpha = -lambda.clone();
    diagonalize(&adj, &alpha, (None, root, depth), &mut HashMap::new()).positive
}

/// Dyadic bisection for the largest value `lo` on the grid `2^-20 ℤ` with
/// `above(lo)` true, starting from `[0, hi]`.
fn bisect_lower(hi: Rational, above: impl Fn(&Rational) -> bool) -> Rational {
    let eps = Rational::new(BigInt::one(), BigInt::one() << RHO_PRECISION_BITS);
    let two = int(2);
    let (mut lo, mut hi) = (Rational::zero(), hi);
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / &two;
        if above(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn initial_upper(g: &Multigraph) -> Rational {
    // spectral radius of the tree is at most the maximum degree
    let mut hi = BigInt::one();
    while hi <= BigInt::from(g.max_degree()) {
        hi <<= 1;
    }
    Rational::from_integer(hi)
}

/// Lower bound on `ρ(G)` from the depth-`depth` truncations at every root.
///
/// The value is the largest point of the grid `2^-20 ℤ ∩ [0, 2^k]` below
/// the largest truncation eigenvalue, found by bisection on exact
/// eigenvalue counts. The grid depends only on `G`, so the estimate is
/// nondecreasing in `depth`.
pub fn rho_estimate(g: &Multigraph, depth: usize) -> Result<RhoEstimate> {
    require_simple_connected(g)?;
    let adj = g.neighbors();
    let roots: Vec<usize> = (0..g.n()).collect();
    let value = bisect_lower(initial_upper(g), |mid| {
        let alpha = -mid.clone();
        roots
            .iter()
            .any(|&r| diagonalize(&adj, &alpha, (None, r, depth), &mut HashMap::new()).positive > 0)
    });
    Ok(RhoEstimate {
        value,
        depth,
        method: "tree-inertia-bisection",
    })
}

/// The same estimate through characteristic polynomials of the explicit
/// truncations and Sturm counts. Subject to the node cap.
pub fn rho_estimate_charpoly(g: &Multigraph, depth: usize) -> Result<RhoEstimate> {
    require_simple_connected(g)?;
    let polys = (0..g.n())
        .map(|r| {
            universal_cover_truncation(g, r, depth).map(|t| charpoly(&t.to_graph().adjacency()))
        })
        .collect::<Result<Vec<UniPoly>>>()?;
    let value = bisect_lower(initial_upper(g), |mid| {
        polys.iter().any(|p| p.count_roots_above(mid) > 0)
    });
    Ok(RhoEstimate {
        value,
        depth,
        method: "charpoly-sturm-bisection",
    })
}

/// True iff `p` has no real root above `bound` (or, when two-sided, none
/// outside `[-bound, bound]`). Panics on the zero polynomial.
pub fn check_roots_bounded(p: &UniPoly, bound: &Rational, two_sided: bool) -> bool {
    assert!(!p.is_zero(), "the zero polynomial has unbounded roots");
    if p.count_roots_above(bound) > 0 {
        return false;
    }
    !two_sided || p.count_roots_below(&-bound.clone()) == 0
}

/// Closed-form spectral radius of the universal cover, as an exact
/// rational upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormRho {
    pub family: &'static str,
    /// Exact expression, e.g. `2`, `2*sqrt(3)` or `r(G)`.
    pub expression: String,
    /// Rational number `≥ ρ(G)`; equal to it when `ρ(G)` is rational.
    pub upper_bound: Rational,
}

fn is_cycle(g: &Multigraph) -> bool {
    g.n() >= 3 && g.is_simple() && g.is_connected() && (0..g.n()).all(|v| g.degree(v) == 2)
}

fn is_complete(g: &Multigraph) -> bool {
    let n = g.n();
    g.is_simple() && g.num_edges() == n * (n.saturating_sub(1)) / 2
}

fn is_tree(g: &Multigraph) -> bool {
    g.is_simple() && g.is_connected() && g.num_edges() + 1 == g.n()
}

/// `ρ(G)` for cycles (`2`), complete graphs `K_n`, `n ≥ 4` (`2√(n-2)`,
/// replaced by `⌈2√(n-2)·10⁷⌉/10⁷ + 10⁻⁶`) and trees (`r(G)`, replaced by
/// the upper end of a width-`10⁻⁹` isolating interval of the largest root of
/// the characteristic polynomial). `None` for other graphs.
pub fn closed_form_rho(g: &Multigraph) -> Option<ClosedFormRho> {
    if is_tree(g) {
        let p = charpoly(&g.adjacency());
        let width = Rational::new(BigInt::one(), BigInt::from(10u64.pow(9)));
        let top = p
            .isolate_real_roots(&width)
            .pop()
            .expect("trees have real eigenvalues");
        return Some(ClosedFormRho {
            family: "tree",
            expression: "r(G)".into(),
            upper_bound: top.hi,
        });
    }
    if is_cycle(g) {
        return Some(ClosedFormRho {
            family: "cycle",
            expression: "2".into(),
            upper_bound: int(2),
        });
    }
    if is_complete(g) && g.n() >= 4 {
        let n = g.n() as u64;
        let scale = BigInt::from(10u64.pow(7));
        // ⌈√(4(n-2))·10⁷⌉
        let target = BigInt::from(4 * (n - 2)) * &scale * &scale;
        let mut s = target.sqrt();
        if &s * &s < target {
            s += 1;
        }
        let bound =
            Rational::new(s, scale) + Rational::new(BigInt::one(), BigInt::from(10u64.pow(6)));
        return Some(ClosedFormRho {
            family: "complete",
            expression: format!("2*sqrt({})", n - 2),
            upper_bound: bound,
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn truncation_examples() {
        let p4 = Multigraph::path(4);
        let t = universal_cover_truncation(&p4, 0, 5).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.walk(3), vec![0, 1, 2, 3]);

        let c4 = Multigraph::cycle(4);
        let t = universal_cover_truncation(&c4, 0, 2).unwrap();
        assert_eq!(t.len(), 5);
        let degs: Vec<usize> = (0..5).map(|v| t.to_graph().degree(v)).collect();
        assert_eq!(degs.iter().filter(|&&d| d == 1).count(), 2);

        let k4 = Multigraph::complete(4);
        assert_eq!(universal_cover_truncation(&k4, 2, 0).unwrap().len(), 1);
        assert_eq!(truncation_size(&k4, 0, 3), 1 + 3 + 6 + 12);
        assert!(universal_cover_truncation(&Multigraph::bouquet(1), 0, 1).is_err());
        assert!(universal_cover_truncation(&Multigraph::empty(2), 0, 1).is_err());
        assert!(matches!(
            universal_cover_truncation(&k4, 0, 20),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn inertia_counts_match_sturm() {
        let g = Multigraph::complete(4);
        let t = universal_cover_truncation(&g, 0, 3).unwrap();
        let p = charpoly(&t.to_graph().adjacency());
        // with multiplicity: a root of multiplicity m survives m rounds of gcd(g, g')
        let above = |lambda: &Rational| {
            let mut g = p.clone();
            let mut total = 0;
            while g.degree().unwrap_or(0) > 0 {
                total += g.count_roots_above(lambda);
                g = UniPoly::gcd(&g, &g.derivative());
            }
            total
        };
        for lambda in [
            rat(0, 1),
            rat(1, 2),
            rat(2, 1),
            rat(-3, 2),
            rat(5, 2),
            rat(1, 1),
            rat(-1, 1),
        ] {
            assert_eq!(
                eigenvalues_above(&g, 0, 3, &lambda) as usize,
                above(&lambda),
                "{lambda}"
            );
        }
    }

    #[test]
    fn estimates_agree_and_increase() {
        let c5 = Multigraph::cycle(5);
        let mut last = Rational::zero();
        for d in 0..8 {
            let a = rho_estimate(&c5, d).unwrap();
            assert_eq!(a.value, rho_estimate_charpoly(&c5, d).unwrap().value);
            assert!(a.value >= last);
            last = a.value;
        }
        let star = Multigraph::star(3);
        let r = rho_estimate(&star, 1).unwrap().value;
        // √3 ≈ 1.7320508
        assert!(r < rat(17320509, 10000000) && r > rat(17320400, 10000000));
    }

    #[test]
    fn root_bounds() {
        let mu_k3 = UniPoly::from_ints(&[0, -3, 0, 1]);
        assert!(check_roots_bounded(&mu_k3, &int(2), true));
        assert!(!check_roots_bounded(
            &UniPoly::from_ints(&[-3, 1]),
            &int(2),
            false
        ));
        assert!(check_roots_bounded(&UniPoly::one(), &int(0), true));
        assert!(!check_roots_bounded(
            &UniPoly::from_ints(&[3, 1]),
            &int(2),
            true
        ));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(
            closed_form_rho(&Multigraph::cycle(5)).unwrap().upper_bound,
            int(2)
        );
        assert_eq!(
            closed_form_rho(&Multigraph::complete(3)).unwrap().family,
            "cycle"
        );
        let k4 = closed_form_rho(&Multigraph::complete(4)).unwrap();
        // 2√2 = 2.8284271247…
        assert_eq!(k4.upper_bound, rat(28284272, 10000000) + rat(1, 1000000));
        let star = closed_form_rho(&Multigraph::star(3)).unwrap();
        assert_eq!(star.family, "tree");
        assert!(
            star.upper_bound > rat(1732050807, 1000000000)
                && star.upper_bound < rat(1732050809, 1000000000)
        );
        let edge = closed_form_rho(&Multigraph::path(2)).unwrap().upper_bound;
        assert!(edge >= int(1) && edge < int(1) + rat(1, 1000000000));
        assert!(closed_form_rho(
            &Multigraph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap()
        )
        .is_none());
    }
}
