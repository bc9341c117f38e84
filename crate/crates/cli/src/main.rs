use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matchpoly::coverings::{
    self, cayley_from_bouquet, d_matching_poly, d_matching_poly_multivariate,
    godsil_gutman_expected_charpoly, hps_identity_check, FiniteGroup,
};
use matchpoly::distributions::{
    expected_induced_matching_poly, rayleigh_refute, SubsetDistribution,
};
use matchpoly::graphs::{Hypergraph, Multigraph};
use matchpoly::hypermatchings::{
    identity_suite, relaxed_kappa_subgraph_poly, relaxed_poly_via_operators,
};
use matchpoly::matchings::{
    matching_poly_matched, matching_poly_multivariate, matching_poly_univariate,
};
use matchpoly::poly::{MultiPoly, UniPoly};
use matchpoly::spectral::{rho_estimate, rho_estimate_charpoly};
use matchpoly::verify::{run_suite, Suite};
use matchpoly::Error;

/// Exact matching, covering and hypermatching polynomials.
///
/// Input files hold JSON (or a plain edge list for graphs); `-` reads
/// standard input. Results go to standard output; errors are reported as a
/// single JSON line on standard error.
#[derive(Parser, Debug)]
#[command(name = "matchpoly", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Largest number of labelings or signings an enumeration may visit.
    #[arg(long, env = "MATCHPOLY_BUDGET", default_value_t = coverings::DEFAULT_BUDGET, global = true)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct GraphArg {
    /// Graph file: {"n":..,"edges":[[u,v],..]} or an edge list.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args, Debug)]
struct HyperArg {
    /// Hypergraph file: {"n":..,"edges":[[..],..]}.
    #[arg(long)]
    hypergraph: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Via {
    Enum,
    Operator,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RhoMethod {
    Inertia,
    Charpoly,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Matching polynomial of a multigraph.
    Matching {
        #[command(flatten)]
        input: GraphArg,
        /// One variable per vertex, monomials over unmatched vertices (default).
        #[arg(long, group = "form")]
        multivariate: bool,
        /// One variable per vertex, monomials over matched vertices.
        #[arg(long, group = "form")]
        matched: bool,
        /// μ_G(x) in a single variable.
        #[arg(long, group = "form")]
        univariate: bool,
    },
    /// Average matching polynomial over all d-sheeted coverings.
    Dmatch {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        #[arg(long)]
        multivariate: bool,
    },
    /// Expected characteristic polynomial over all edge signings.
    Gg {
        #[command(flatten)]
        input: GraphArg,
    },
    /// Expected characteristic polynomial of (d+1)-sheeted coverings versus
    /// the d-matching polynomial.
    HpsCheck {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
    },
    /// Cayley graph of a group as a covering of a bouquet of loops.
    Cayley {
        /// {"order":m,"table":[[..]]} or {"perm_gens":[[..],..]}.
        #[arg(long)]
        group: PathBuf,
        /// Comma-separated element indices.
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<usize>,
    },
    /// Expected matching polynomial of the induced subgraph G[S], S ~ P.
    Induced {
        #[command(flatten)]
        input: GraphArg,
        /// {"n":..,"support":[{"set":[..],"num":"..","den":".."},..]}.
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        univariate: bool,
    },
    /// Seeded search for a Rayleigh-inequality violation of Z_P.
    Rayleigh {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Certified lower bound on the universal-cover spectral radius.
    Rho {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = RhoMethod::Inertia)]
        method: RhoMethod,
    },
    /// Relaxed matching polynomial, or its κ-subgraph generalisation.
    Relaxed {
        #[command(flatten)]
        input: HyperArg,
        /// Comma-separated multiplicities, one per vertex (default all 1).
        #[arg(long, value_delimiter = ',')]
        kappa: Option<Vec<u16>>,
        #[arg(long, value_enum, default_value_t = Via::Enum)]
        via: Via,
        #[arg(long)]
        univariate: bool,
    },
    /// Recursion, union and derivative identities of the relaxed polynomial.
    Identities {
        #[command(flatten)]
        input: HyperArg,
    },
    /// Runs the reproducibility suites.
    Verify {
        /// gg, dmatch, hps, map, figures, roots, example43, operator,
        /// identities, relaxed-roots, rho or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A computed result: JSON form, text form, and whether a check failed.
struct Output {
    json: Value,
    text: String,
    failed: bool,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            failed: false,
        }
    }
}

fn read_input(path: &Path) -> Result<String, Error> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_graph(arg: &GraphArg) -> Result<Multigraph, Error> {
    Multigraph::parse(&read_input(&arg.graph)?)
}

fn load_hypergraph(arg: &HyperArg) -> Result<Hypergraph, Error> {
    Hypergraph::parse(&read_input(&arg.hypergraph)?)
}

fn multi_output(p: &MultiPoly) -> Output {
    let schema: Value = serde_json::from_str(&p.to_json()).expect("polynomial JSON is valid");
    Output::ok(json!({ "poly": schema, "text": p.to_text() }), p.to_text())
}

fn uni_output(p: &UniPoly) -> Output {
    Output::ok(json!({ "poly": p.to_text() }), p.to_text())
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let budget = cli.budget;
    Ok(match &cli.command {
        Command::Matching {
            input,
            matched,
            univariate,
            ..
        } => {
            let g = load_graph(input)?;
            if *univariate {
                uni_output(&matching_poly_univariate(&g))
            } else if *matched {
                multi_output(&matching_poly_matched(&g))
            } else {
                multi_output(&matching_poly_multivariate(&g))
            }
        }
        Command::Dmatch {
            input,
            d,
            multivariate,
        } => {
            let g = load_graph(input)?;
            let d = *d as usize;
            if *multivariate {
                multi_output(&d_matching_poly_multivariate(&g, d, budget)?)
            } else {
                let p = d_matching_poly(&g, d, budget)?;
                let real_rooted = p.is_real_rooted();
                Output::ok(
                    json!({ "d": d, "poly": p.to_text(), "real_rooted": real_rooted }),
                    p.to_text(),
                )
            }
        }
        Command::Gg { input } => {
            let g = load_graph(input)?;
            let expected = godsil_gutman_expected_charpoly(&g, budget)?;
            let mu = matching_poly_univariate(&g);
            let equal = expected == mu;
            Output {
                json: json!({
                    "expected_charpoly": expected.to_text(),
                    "matching_poly": mu.to_text(),
                    "equal": equal,
                }),
                text: format!(
                    "E charpoly = {}\nmatching   = {}\nequal: {equal}",
                    expected.to_text(),
                    mu.to_text()
                ),
                failed: !equal,
            }
        }
        Command::HpsCheck { input, d } => {
            let g = load_graph(input)?;
            let r = hps_identity_check(&g, *d as usize, budget)?;
            Output {
                json: json!({
                    "d": r.d,
                    "labelings": r.labelings,
                    "expected_cover_charpoly": r.expected_cover_charpoly.to_text(),
                    "expected_std_charpoly": r.expected_std_charpoly.to_text(),
                    "d_matching": r.d_matching.to_text(),
                    "base_charpoly": r.base_charpoly.to_text(),
                    "holds": r.holds,
                }),
                text: format!(
                    "E charpoly(H)      = {}\nE det(xI - A_std)  = {}\nmu_d               = {}\nholds: {}",
                    r.expected_cover_charpoly.to_text(),
                    r.expected_std_charpoly.to_text(),
                    r.d_matching.to_text(),
                    r.holds
                ),
                failed: !r.holds,
            }
        }
        Command::Cayley { group, gens } => {
            let group = FiniteGroup::parse(&read_input(group)?)?;
            let g = cayley_from_bouquet(&group, gens)?;
            let adjacency = g.adjacency();
            let text = adjacency
                .iter()
                .map(|row| row.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("\n");
            let graph: Value = serde_json::from_str(&g.to_json()).expect("graph JSON is valid");
            Output::ok(json!({ "graph": graph, "adjacency": adjacency }), text)
        }
        Command::Induced {
            input,
            dist,
            univariate,
        } => {
            let g = load_graph(input)?;
            let p = SubsetDistribution::parse(&read_input(dist)?)?;
            let e = expected_induced_matching_poly(&g, &p)?;
            if *univariate {
                uni_output(&e.diagonal())
            } else {
                multi_output(&e)
            }
        }
        Command::Rayleigh { dist, trials, seed } => {
            let p = SubsetDistribution::parse(&read_input(dist)?)?;
            let verdict = rayleigh_refute(&p, *trials, *seed);
            let json = verdict.to_json();
            let text = if verdict.is_refuted() {
                format!("refuted: {json}")
            } else {
                format!("not refuted in {trials} trials")
            };
            Output::ok(json, text)
        }
        Command::Rho {
            input,
            depth,
            method,
        } => {
            let g = load_graph(input)?;
            let r = match method {
                RhoMethod::Inertia => rho_estimate(&g, *depth)?,
                RhoMethod::Charpoly => rho_estimate_charpoly(&g, *depth)?,
            };
            let value = r.value.to_string();
            Output::ok(
                json!({ "depth": r.depth, "lower_bound": value, "method": r.method }),
                value,
            )
        }
        Command::Relaxed {
            input,
            kappa,
            via,
            univariate,
        } => {
            let h = load_hypergraph(input)?;
            let kappa = kappa.clone().unwrap_or_else(|| vec![1; h.n()]);
            let p = match via {
                Via::Enum => relaxed_kappa_subgraph_poly(&h, &kappa)?,
                Via::Operator => relaxed_poly_via_operators(&h, &kappa)?,
            };
            if *univariate {
                uni_output(&p.diagonal())
            } else {
                multi_output(&p)
            }
        }
        Command::Identities { input } => {
            let h = load_hypergraph(input)?;
            let report = identity_suite(&h);
            let text = report
                .checks
                .iter()
                .map(|c| {
                    let status = if c.passed() { "PASS" } else { "FAIL" };
                    let extra = c
                        .counterexample
                        .as_deref()
                        .map(|m| format!(" {m}"))
                        .unwrap_or_default();
                    format!("[{status}] {} ({} cases){extra}", c.name, c.cases)
                })
                .collect::<Vec<_>>()
                .join("\n");
            Output {
                json: report.to_json(),
                text,
                failed: !report.passed(),
            }
        }
        Command::Verify { suite, seed } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, *seed, budget);
            Output {
                json: report.to_json(),
                text: report.to_string(),
                failed: !report.passed(),
            }
        }
    })
}

fn error_line(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let first = first
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("{}", error_line("usage", first));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", out.json),
                Format::Text => println!("{}", out.text),
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let (kind, code) = match &e {
                Error::InvalidInput(_) => ("invalid_input", 2),
                Error::Parse(_) => ("parse", 2),
                Error::BudgetExceeded { .. } => ("budget_exceeded", 3),
                Error::Inconsistency(_) => ("inconsistency", 1),
            };
            eprintln!("{}", error_line(kind, &e.to_string().replace('\n', " ")));
            ExitCode::from(code)
        }
    }
}
