//! Reproducible end-to-end checks over generated corpora.
//!
//! Each criterion returns a [`CriterionResult`] carrying the number of
//! instances checked, the number refused by the enumeration budget and the
//! first counterexample found. Results are deterministic in the seed.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;

use crate::corpus::{
    bernoulli_pairs, connected_simple_graphs_up_to, random_hypergraphs, small_multigraphs,
    uniform_pairs, HyperCase,
};
use crate::coverings::{
    average_matched_poly, cayley_from_bouquet, covering_graph, d_matching_poly,
    expected_cover_gen_poly, godsil_gutman_expected_charpoly, hps_identity_check, CoveringLabeling,
    FiniteGroup, Permutation,
};
use crate::distributions::{
    bivariate_multiaffine_stable, expectation_stable, expected_induced_matching_poly,
    rayleigh_refute, rayleigh_refute_poly, SubsetDistribution,
};
use crate::graphs::Multigraph;
use crate::hypermatchings::{
    identity_suite, relaxed_kappa_subgraph_poly, relaxed_matching_poly,
    relaxed_matching_poly_univariate, relaxed_poly_via_operators,
};
use crate::matchings::matching_poly_univariate;
use crate::poly::{fmt_rational, rat, refute_stability, Rational};
use crate::spectral::{check_roots_bounded, closed_form_rho, rho_estimate};
use crate::{Error, Result};

/// Seeded hypergraphs shared by the relaxed-matching criteria.
pub const HYPERGRAPH_CORPUS: usize = 300;
/// Seeded (graph, product distribution) pairs.
pub const BERNOULLI_PAIRS: usize = 200;
/// Sheet counts checked on the multigraph corpus.
pub const SHEETS: [usize; 3] = [1, 2, 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Instances checked.
    pub cases: usize,
    /// Instances refused by the budget.
    pub skipped: usize,
    pub detail: String,
    pub counterexample: Option<String>,
}

impl CriterionResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "skipped": self.skipped,
            "detail": self.detail,
            "counterexample": self.counterexample,
        })
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {:<14} cases={} skipped={} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.cases,
            self.skipped,
            self.detail
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, " counterexample: {c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Gg,
    Dmatch,
    Hps,
    Map,
    Figures,
    Roots,
    Example43,
    Operator,
    Identities,
    RelaxedRoots,
    Rho,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 12] = [
        "gg",
        "dmatch",
        "hps",
        "map",
        "figures",
        "roots",
        "example43",
        "operator",
        "identities",
        "relaxed-roots",
        "rho",
        "all",
    ];

    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::Gg => vec![1],
            Suite::Dmatch => vec![2],
            Suite::Hps => vec![3],
            Suite::Map => vec![4],
            Suite::Figures => vec![5],
            Suite::Roots => vec![6],
            Suite::Example43 => vec![7],
            Suite::Operator => vec![8],
            Suite::Identities => vec![9],
            Suite::RelaxedRoots => vec![10],
            Suite::Rho => vec![11],
            Suite::All => (1..=11).collect(),
        }
    }

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        const ALL: [Suite; 12] = [
            Suite::Gg,
            Suite::Dmatch,
            Suite::Hps,
            Suite::Map,
            Suite::Figures,
            Suite::Roots,
            Suite::Example43,
            Suite::Operator,
            Suite::Identities,
            Suite::RelaxedRoots,
            Suite::Rho,
            Suite::All,
        ];
        ALL.into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown suite '{s}' (expected one of {})",
                    Self::NAMES.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "passed": self.passed(),
            "criteria": self.criteria.iter().map(CriterionResult::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            writeln!(f, "{c}")?;
        }
        let ok = self.criteria.iter().filter(|c| c.passed).count();
        write!(
            f,
            "suite {} seed {}: {ok}/{} passed",
            self.suite.name(),
            self.seed,
            self.criteria.len()
        )
    }
}

/// Runs every criterion of `suite`, in criterion order.
pub fn run_suite(suite: Suite, seed: u64, budget: u64) -> VerifyReport {
    let criteria = suite
        .criteria()
        .into_iter()
        .map(|id| run_criterion(id, seed, budget))
        .collect();
    VerifyReport {
        suite,
        seed,
        criteria,
    }
}

/// Runs criterion `id` (1 to 11). Panics on any other id.
pub fn run_criterion(id: u8, seed: u64, budget: u64) -> CriterionResult {
    match id {
        1 => godsil_gutman(budget),
        2 => d_matching_real_rooted(budget),
        3 => hps_identity(budget),
        4 => map_identity(budget),
        5 => figures(),
        6 => induced_roots(seed),
        7 => example_separation(seed),
        8 => operator_formula(seed),
        9 => hypergraph_identities(seed),
        10 => relaxed_real_rooted(seed),
        11 => rho_convergence(),
        _ => panic!("no criterion {id}"),
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

struct Tally {
    cases: usize,
    skipped: usize,
    counterexample: Option<String>,
}

fn tally<T: Sync>(items: &[T], check: impl Fn(&T) -> Outcome + Sync + Send) -> Tally {
    let outcomes: Vec<Outcome> = items.par_iter().map(check).collect();
    let mut t = Tally {
        cases: 0,
        skipped: 0,
        counterexample: None,
    };
    for o in outcomes {
        match o {
            Outcome::Pass => t.cases += 1,
            Outcome::Skip => t.skipped += 1,
            Outcome::Fail(msg) => {
                t.cases += 1;
                t.counterexample.get_or_insert(msg);
            }
        }
    }
    t
}

fn finish(id: u8, name: &'static str, t: Tally, detail: String) -> CriterionResult {
    CriterionResult {
        id,
        name,
        passed: t.counterexample.is_none(),
        cases: t.cases,
        skipped: t.skipped,
        detail,
        counterexample: t.counterexample,
    }
}

/// Budget refusals become skips; any other error is a failure.
fn guarded(what: impl Fn() -> std::result::Result<Option<String>, Error>) -> Outcome {
    match what() {
        Ok(None) => Outcome::Pass,
        Ok(Some(msg)) => Outcome::Fail(msg),
        Err(Error::BudgetExceeded { .. }) => Outcome::Skip,
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn godsil_gutman(budget: u64) -> CriterionResult {
    let graphs = connected_simple_graphs_up_to(6);
    let six = graphs.iter().filter(|g| g.n() == 6).count();
    let mut t = tally(&graphs, |g| {
        guarded(|| {
            let expected = godsil_gutman_expected_charpoly(g, budget)?;
            let mu = matching_poly_univariate(g);
            Ok((expected != mu).then(|| {
                format!(
                    "{}: {} vs {}",
                    g.to_json(),
                    expected.to_text(),
                    mu.to_text()
                )
            }))
        })
    });
    if six != 112 {
        t.counterexample.get_or_insert(format!(
            "{six} connected graphs on six vertices, expected 112"
        ));
    }
    finish(
        1,
        "gg",
        t,
        format!("connected simple graphs n ≤ 6 ({six} with n = 6)"),
    )
}

/// Every `(multigraph, d)` pair of the corpus.
fn covering_cases() -> Vec<(Multigraph, usize)> {
    small_multigraphs(4, 4)
        .into_iter()
        .flat_map(|g| SHEETS.map(|d| (g.clone(), d)))
        .collect()
}

fn d_matching_real_rooted(budget: u64) -> CriterionResult {
    let cases = covering_cases();
    let t = tally(&cases, |(g, d)| {
        guarded(|| {
            let mu = d_matching_poly(g, *d, budget)?;
            Ok((!mu.is_real_rooted()).then(|| format!("{} d={d}: {}", g.to_json(), mu.to_text())))
        })
    });
    finish(
        2,
        "dmatch",
        t,
        "multigraphs n ≤ 4, |E| ≤ 4, d ∈ {1,2,3}".into(),
    )
}

fn hps_identity(budget: u64) -> CriterionResult {
    let cases = covering_cases();
    let t = tally(&cases, |(g, d)| {
        guarded(|| {
            let r = hps_identity_check(g, *d, budget)?;
            Ok((!r.holds).then(|| {
                format!(
                    "{} d={d}: E charpoly = {}, μ_d·charpoly = {}",
                    g.to_json(),
                    r.expected_cover_charpoly.to_text(),
                    (&r.d_matching * &r.base_charpoly).to_text()
                )
            }))
        })
    });
    finish(
        3,
        "hps",
        t,
        "E charpoly(H) = μ_d·charpoly(G) over (d+1)-sheeted coverings".into(),
    )
}

fn map_identity(budget: u64) -> CriterionResult {
    let cases = covering_cases();
    let t = tally(&cases, |(g, d)| {
        guarded(|| {
            let lhs = expected_cover_gen_poly(g, *d, budget)?.map_multiaffine_part();
            let rhs = average_matched_poly(g, *d, budget)?;
            Ok((lhs != rhs).then(|| {
                format!(
                    "{} d={d}: {} vs {}",
                    g.to_json(),
                    lhs.to_text(),
                    rhs.to_text()
                )
            }))
        })
    });
    finish(
        4,
        "map",
        t,
        "MAP of the expected generating polynomial vs averaged matched polynomials".into(),
    )
}

/// The 4-vertex base graph (`a, b, c, d` = 0..3) with its 4-sheeted labeling
/// and the covering edges it must produce, sheets numbered from 0.
pub fn figure_fixture() -> (Multigraph, CoveringLabeling, Vec<(usize, usize)>) {
    let g = Multigraph::new(4, vec![(0, 1), (0, 2), (1, 2), (2, 3), (3, 3)]).expect("valid graph");
    let perms = [
        [1, 0, 2, 3],
        [1, 0, 3, 2],
        [2, 0, 1, 3],
        [1, 2, 3, 0],
        [1, 2, 0, 3],
    ]
    .iter()
    .map(|p| Permutation::from_images(p.to_vec()).expect("valid permutation"))
    .collect();
    let sigma = CoveringLabeling::new(&g, 4, perms).expect("valid labeling");
    let v = |name: char, sheet: usize| (name as usize - 'a' as usize) * 4 + sheet;
    let lifted = [
        ('a', 0, 'b', 1),
        ('a', 1, 'b', 0),
        ('a', 2, 'b', 2),
        ('a', 3, 'b', 3),
        ('a', 0, 'c', 1),
        ('a', 1, 'c', 0),
        ('a', 2, 'c', 3),
        ('a', 3, 'c', 2),
        ('b', 0, 'c', 2),
        ('b', 1, 'c', 0),
        ('b', 2, 'c', 1),
        ('b', 3, 'c', 3),
        ('c', 0, 'd', 1),
        ('c', 1, 'd', 2),
        ('c', 2, 'd', 3),
        ('c', 3, 'd', 0),
        ('d', 0, 'd', 1),
        ('d', 1, 'd', 2),
        ('d', 2, 'd', 0),
        ('d', 3, 'd', 3),
    ];
    let edges = lifted
        .iter()
        .map(|&(x, i, y, j)| (v(x, i), v(y, j)))
        .collect();
    (g, sigma, edges)
}

/// `S_3` listed as `ι, (12), (13), (23), (123), (132)` (points `1..3`
/// written `0..2`), the generator indices of `(123)` and `(12)`, and the
/// matrix `A` with `A[h][g·h] = 1` for each generator `g`.
pub fn cayley_fixture() -> (FiniteGroup, Vec<usize>, Vec<Vec<i64>>) {
    let cycles: [&[&[usize]]; 6] = [
        &[],
        &[&[0, 1]],
        &[&[0, 2]],
        &[&[1, 2]],
        &[&[0, 1, 2]],
        &[&[0, 2, 1]],
    ];
    let elements = cycles
        .iter()
        .map(|c| Permutation::from_cycles(3, c).expect("valid cycles"))
        .collect();
    let group = FiniteGroup::from_permutations(elements).expect("S_3 is closed");
    let a = vec![
        vec![0, 1, 0, 0, 1, 0],
        vec![1, 0, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 1],
        vec![0, 1, 0, 0, 1, 0],
        vec![0, 0, 0, 1, 0, 1],
        vec![1, 0, 1, 0, 0, 0],
    ];
    (group, vec![4, 1], a)
}

fn figures() -> CriterionResult {
    let mut t = Tally {
        cases: 0,
        skipped: 0,
        counterexample: None,
    };

    let (g, sigma, expected) = figure_fixture();
    let lift = covering_graph(&g, &sigma);
    let want = Multigraph::new(16, expected)
        .expect("valid fixture")
        .canonical_edges();
    t.cases += 1;
    if lift.canonical_edges() != want {
        t.counterexample = Some(format!(
            "covering edges {:?}, expected {want:?}",
            lift.canonical_edges()
        ));
    }

    let (group, gens, a) = cayley_fixture();
    let symmetric: Vec<Vec<i64>> = (0..6)
        .map(|i| (0..6).map(|j| a[i][j] + a[j][i]).collect())
        .collect();
    t.cases += 1;
    match cayley_from_bouquet(&group, &gens) {
        Ok(cayley) if cayley.adjacency() == symmetric => {}
        Ok(cayley) => {
            t.counterexample.get_or_insert(format!(
                "Cayley adjacency {:?}, expected {symmetric:?}",
                cayley.adjacency()
            ));
        }
        Err(e) => {
            t.counterexample.get_or_insert(e.to_string());
        }
    }
    finish(
        5,
        "figures",
        t,
        "4-sheeted covering fixture; Cayley graph of S_3".into(),
    )
}

fn induced_roots(seed: u64) -> CriterionResult {
    let check = |(g, p): &(Multigraph, SubsetDistribution), two_sided: bool| {
        guarded(|| {
            let rho = closed_form_rho(g).expect("family graphs have closed forms");
            let u = expected_induced_matching_poly(g, p)?.diagonal();
            let ok = u.is_real_rooted() && check_roots_bounded(&u, &rho.upper_bound, two_sided);
            Ok((!ok).then(|| {
                format!(
                    "{} P={}: {} against ρ ≤ {}",
                    g.to_json(),
                    p.to_json(),
                    u.to_text(),
                    fmt_rational(&rho.upper_bound)
                )
            }))
        })
    };
    let bern = bernoulli_pairs(BERNOULLI_PAIRS, seed);
    let uni = uniform_pairs();
    let a = tally(&bern, |c| check(c, false));
    let b = tally(&uni, |c| check(c, true));
    let t = Tally {
        cases: a.cases + b.cases,
        skipped: a.skipped + b.skipped,
        counterexample: a.counterexample.or(b.counterexample),
    };
    finish(
        6,
        "roots",
        t,
        format!(
            "{} product distributions (roots ≤ ρ), {} uniform k-subset ones (|roots| ≤ ρ)",
            bern.len(),
            uni.len()
        ),
    )
}

/// The distribution `P({0,1}) = a, P({0}) = b, P({1}) = c, P(∅) = d` used
/// to separate the two stability notions.
pub fn separation_example() -> [Rational; 4] {
    [rat(2, 5), rat(1, 10), rat(1, 10), rat(2, 5)]
}

pub const SEPARATION_TRIALS: usize = 500;

fn example_separation(seed: u64) -> CriterionResult {
    let [a, b, c, d] = separation_example();
    let mut t = Tally {
        cases: 1,
        skipped: 0,
        counterexample: None,
    };
    let mut fail = |msg: String| {
        t.counterexample.get_or_insert(msg);
    };
    if !matches!(bivariate_multiaffine_stable(&a, &b, &c, &d), Ok(false)) {
        fail("bc - ad is not negative".into());
    }
    if !matches!(expectation_stable(&a, &b, &c, &d), Ok(true)) {
        fail("bc - a(d - a) is negative".into());
    }
    let p = SubsetDistribution::two_vertex(a, b, c, d).expect("valid distribution");
    let z = p.partition_function();
    let z_verdict = rayleigh_refute(&p, SEPARATION_TRIALS, seed);
    match z_verdict.witness() {
        Some(w) if w.verify(&z) => {}
        Some(_) => fail("partition-function witness does not verify".into()),
        None => fail(format!(
            "no witness against Z_P = {} in {SEPARATION_TRIALS} trials",
            z.to_text()
        )),
    }
    let edge = Multigraph::path(2);
    match expected_induced_matching_poly(&edge, &p) {
        Ok(e) => {
            for verdict in [
                rayleigh_refute_poly(&e, SEPARATION_TRIALS, seed),
                refute_stability(&e, SEPARATION_TRIALS, seed),
            ] {
                if verdict.is_refuted() {
                    fail(format!(
                        "expectation {} refuted: {}",
                        e.to_text(),
                        verdict.to_json()
                    ));
                }
            }
        }
        Err(err) => fail(err.to_string()),
    }
    finish(
        7,
        "example43",
        t,
        "(a,b,c,d) = (2/5, 1/10, 1/10, 2/5): Z_P refuted, expectation not refuted".into(),
    )
}

fn hyper_label(c: &HyperCase) -> String {
    format!("{} κ={:?}", c.hypergraph.to_json(), c.kappa)
}

fn operator_formula(seed: u64) -> CriterionResult {
    let corpus = random_hypergraphs(HYPERGRAPH_CORPUS, seed);
    let t = tally(&corpus, |c| {
        guarded(|| {
            let sum = relaxed_kappa_subgraph_poly(&c.hypergraph, &c.kappa)?;
            let op = relaxed_poly_via_operators(&c.hypergraph, &c.kappa)?;
            Ok((sum != op)
                .then(|| format!("{}: {} vs {}", hyper_label(c), sum.to_text(), op.to_text())))
        })
    });
    finish(
        8,
        "operator",
        t,
        "κ-subgraph sum vs operator formula".into(),
    )
}

fn hypergraph_identities(seed: u64) -> CriterionResult {
    let corpus = random_hypergraphs(HYPERGRAPH_CORPUS, seed);
    let t = tally(&corpus, |c| {
        let report = identity_suite(&c.hypergraph);
        match report
            .checks
            .iter()
            .find_map(|k| k.counterexample.as_ref().map(|m| (k.name, m)))
        {
            None => Outcome::Pass,
            Some((name, msg)) => Outcome::Fail(format!("{} {name}: {msg}", hyper_label(c))),
        }
    });
    finish(
        9,
        "identities",
        t,
        "edge and vertex recursions, disjoint unions, derivatives".into(),
    )
}

pub const RELAXED_TRIALS: usize = 100;

fn relaxed_real_rooted(seed: u64) -> CriterionResult {
    let corpus = random_hypergraphs(HYPERGRAPH_CORPUS, seed);
    let t = tally(&corpus, |c| {
        let u = relaxed_matching_poly_univariate(&c.hypergraph);
        if !u.is_real_rooted() {
            return Outcome::Fail(format!(
                "{}: {} is not real-rooted",
                hyper_label(c),
                u.to_text()
            ));
        }
        let verdict = refute_stability(&relaxed_matching_poly(&c.hypergraph), RELAXED_TRIALS, seed);
        if verdict.is_refuted() {
            Outcome::Fail(format!(
                "{}: stability refuted: {}",
                hyper_label(c),
                verdict.to_json()
            ))
        } else {
            Outcome::Pass
        }
    });
    finish(
        10,
        "relaxed-roots",
        t,
        format!("Sturm real-rootedness; {RELAXED_TRIALS} line trials each"),
    )
}

pub const RHO_MAX_DEPTH: usize = 18;

fn rho_convergence() -> CriterionResult {
    let c6 = Multigraph::cycle(6);
    let mut t = Tally {
        cases: 0,
        skipped: 0,
        counterexample: None,
    };
    let mut prev: Option<Rational> = None;
    let mut last = None;
    for depth in 1..=RHO_MAX_DEPTH {
        t.cases += 1;
        match rho_estimate(&c6, depth) {
            Ok(r) => {
                if prev.as_ref().is_some_and(|p| &r.value < p) {
                    t.counterexample
                        .get_or_insert(format!("estimate decreases at depth {depth}"));
                }
                prev = Some(r.value.clone());
                last = Some(r.value);
            }
            Err(e) => {
                t.counterexample.get_or_insert(e.to_string());
            }
        }
    }
    let threshold = rat(199, 100);
    let value = last
        .map(|v| fmt_rational(&v))
        .unwrap_or_else(|| "none".into());
    if prev.is_some_and(|v| v <= threshold) {
        t.counterexample.get_or_insert(format!(
            "estimate {value} at depth {RHO_MAX_DEPTH} does not exceed 1.99"
        ));
    }
    finish(
        11,
        "rho",
        t,
        format!("C6 depths 1..={RHO_MAX_DEPTH}, final estimate {value}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("bogus".parse::<Suite>().is_err());
        assert_eq!(Suite::All.criteria().len(), 11);
    }

    #[test]
    fn quick_criteria_pass() {
        for id in [5, 7, 11] {
            let r = run_criterion(id, 0, crate::coverings::DEFAULT_BUDGET);
            assert!(r.passed, "{r}");
        }
    }
}
