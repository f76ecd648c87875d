//! The bench subcommand: run algorithms over generated families and emit a
//! CSV of oracle counts, step counts, and bound-versus-actual checks.

use clap::Args;
use num_bigint::BigInt;
use num_traits::Signed;

use mconvex::instances::random::{random_mcf, random_pl, random_rap, random_tabulated};
use mconvex::oracle::{box_points, box_volume, MOracle};
use mconvex::polyhedral::{pm_lsd, pm_lsd2, PolyOracle, PolySolveResult, DEFAULT_PM_CAP};
use mconvex::unconstrained::{m_lsd, m_lsd2, m_sd, m_sd_prime, SolveResult};
use mconvex::verify::{enumerate_domain, DomainEnumeration, DEFAULT_ENUMERATION_CAP};

const HEADER: &str = "instance,algorithm,oracle_calls,steps,outer_iters,bound_minphi,bound_tau,bound_sqrt";

#[derive(Args)]
pub struct BenchArgs {
    /// Instance family: rap, mcf, tabulated, pl-separable.
    #[arg(long)]
    family: String,
    /// Dimensions to generate, comma separated (e.g. `3,4`).
    #[arg(long, value_name = "LIST")]
    sizes: String,
    /// Number of seeds per size (seeds run from `--seed` upward).
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Algorithms to run, comma separated.
    #[arg(long, value_name = "LIST")]
    algorithms: String,
    /// Check values and bounds against brute-force references.
    #[arg(long)]
    verify: bool,
    /// Exit with status 1 if any check fails.
    #[arg(long)]
    strict: bool,
    /// Enumeration cap for `--verify`.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

pub fn cmd_bench(args: &BenchArgs) -> i32 {
    let sizes: Result<Vec<usize>, _> = args.sizes.split(',').map(|s| s.trim().parse()).collect();
    let Ok(sizes) = sizes else {
        eprintln!("error: malformed --sizes");
        return 2;
    };
    let algorithms: Vec<&str> = args.algorithms.split(',').map(|s| s.trim()).collect();
    let lattice_family = matches!(args.family.as_str(), "rap" | "mcf" | "tabulated");
    if !lattice_family && args.family != "pl-separable" {
        eprintln!("error: unknown family {:?}", args.family);
        return 2;
    }
    for algo in &algorithms {
        let ok = if lattice_family {
            matches!(*algo, "m-sd" | "m-sd-prime" | "m-lsd" | "m-lsd2")
        } else {
            matches!(*algo, "pm-lsd" | "pm-lsd2")
        };
        if !ok {
            eprintln!("error: algorithm {algo:?} does not apply to family {}", args.family);
            return 2;
        }
    }

    let mut rows = vec![HEADER.to_string()];
    let mut any_fail = false;
    for &n in &sizes {
        for seed in args.seed..args.seed + args.seeds {
            let name = format!("{}-n{n}-s{seed}", args.family);
            let code = if lattice_family {
                bench_lattice(args, &name, n, seed, &algorithms, &mut rows, &mut any_fail)
            } else {
                bench_pl(args, &name, n, seed, &algorithms, &mut rows, &mut any_fail)
            };
            if code != 0 {
                return code;
            }
        }
    }

    let text = rows.join("\n") + "\n";
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {path}: {e}");
                return 1;
            }
        }
        None => print!("{text}"),
    }
    if args.strict && any_fail {
        return 1;
    }
    0
}

fn status(ok: bool, any_fail: &mut bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        *any_fail = true;
        "FAIL"
    }
}

#[allow(clippy::too_many_arguments)]
fn bench_lattice(
    args: &BenchArgs,
    name: &str,
    n: usize,
    seed: u64,
    algorithms: &[&str],
    rows: &mut Vec<String>,
    any_fail: &mut bool,
) -> i32 {
    let oracle: Box<dyn MOracle> = match args.family.as_str() {
        "rap" => match random_rap(seed, n) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        },
        "mcf" => {
            if !(3..=4).contains(&n) {
                eprintln!("error: mcf sizes are 3 or 4 terminals");
                return 2;
            }
            match random_mcf(seed, n) {
                Ok(f) => Box::new(f),
                Err(e) => {
                    eprintln!("error: {e}");
                    return 1;
                }
            }
        }
        _ => match random_tabulated(seed, n) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        },
    };
    let f = oracle.as_ref();

    let reference = if args.verify {
        let (lo, hi) = f.bounding_box();
        match box_volume(&lo, &hi) {
            Some(v) if v <= args.cap => {}
            _ => {
                eprintln!("error: {name}: box exceeds the enumeration cap; refusing --verify");
                return 5;
            }
        }
        Some(enumerate_domain(f, args.cap).expect("volume checked"))
    } else {
        None
    };

    // Start at the worst domain point (ties to the lexicographic first):
    // the most informative start for the iteration-count columns.
    let (lo, hi) = f.bounding_box();
    let mut x0 = None;
    let mut worst = None;
    for x in box_points(&lo, &hi) {
        if let Some(v) = f.eval(&x).finite().cloned() {
            if worst.as_ref().is_none_or(|w| v > *w) {
                worst = Some(v);
                x0 = Some(x);
            }
        }
    }
    let Some(x0) = x0 else {
        eprintln!("error: {name}: empty domain");
        return 1;
    };

    for algo in algorithms {
        let result: SolveResult = match *algo {
            "m-sd" => m_sd(f, &x0),
            "m-sd-prime" => m_sd_prime(f, &x0),
            "m-lsd" => m_lsd(f, &x0),
            _ => m_lsd2(f, &x0),
        }
        .expect("start point is in the domain");

        let mut bound_minphi = String::new();
        let mut bound_tau = String::new();
        let mut bound_sqrt = String::new();

        if *algo == "m-lsd2" {
            let outer = result.trace.outer_iterations;
            let phi0 = result
                .phi_history
                .first()
                .map(|p| p.abs().ceil().to_integer())
                .unwrap_or_default();
            let ok = BigInt::from(outer) <= phi0;
            bound_minphi = format!("{outer}<={phi0}:{}", status(ok, any_fail));
        }

        if let Some(dom) = &reference {
            let tau = tau_of(dom, &x0);
            let best = dom.min_value().unwrap().clone();
            if result.value != best {
                eprintln!("error: {name}/{algo}: value mismatch against brute force");
                *any_fail = true;
            }
            match *algo {
                "m-sd" | "m-sd-prime" => {
                    let steps = result.trace.steps.len() as i64;
                    let ok = steps * 2 == tau;
                    bound_tau = format!("{steps}={}:{}", tau / 2, status(ok, any_fail));
                }
                "m-lsd" => {
                    let len = result.trace.total_length();
                    let ok = len * 2 == tau;
                    bound_tau = format!("{len}={}:{}", tau / 2, status(ok, any_fail));
                }
                _ => {
                    let outer = result.trace.outer_iterations as i64;
                    let ok = outer * 2 <= tau;
                    bound_tau = format!("{outer}<={}:{}", tau / 2, status(ok, any_fail));
                    let start_value = dom.value_at(&x0).expect_finite("start").clone();
                    let gap = (&start_value - &best).to_integer();
                    let sqrt_bound = (BigInt::from(2) * gap).sqrt();
                    let ok = BigInt::from(outer) <= sqrt_bound;
                    bound_sqrt = format!("{outer}<={sqrt_bound}:{}", status(ok, any_fail));
                }
            }
        }

        rows.push(format!(
            "{name},{algo},{},{},{},{bound_minphi},{bound_tau},{bound_sqrt}",
            result.trace.evals,
            result.trace.steps.len(),
            result.trace.outer_iterations,
        ));
    }
    0
}

fn tau_of(dom: &DomainEnumeration, x0: &mconvex::point::IntPoint) -> i64 {
    let best = dom.min_value().unwrap().clone();
    dom.points
        .iter()
        .zip(&dom.values)
        .filter(|(_, v)| **v == best)
        .map(|(p, _)| p.l1_distance(x0))
        .min()
        .unwrap()
}

#[allow(clippy::too_many_arguments)]
fn bench_pl(
    args: &BenchArgs,
    name: &str,
    n: usize,
    seed: u64,
    algorithms: &[&str],
    rows: &mut Vec<String>,
    any_fail: &mut bool,
) -> i32 {
    let f = match random_pl(seed, n) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let x0 = f.start_point().expect("separable instances expose a vertex");
    let referee = if args.verify {
        f.grid_points(f.grid_denominator())
            .into_iter()
            .map(|p| f.eval(&p).expect_finite("grid point").clone())
            .min()
    } else {
        None
    };
    for algo in algorithms {
        let result: PolySolveResult = match *algo {
            "pm-lsd" => match pm_lsd(&f, &x0, DEFAULT_PM_CAP) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {name}/pm-lsd: {e}");
                    return 4;
                }
            },
            _ => match pm_lsd2(&f, &x0, None) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {name}/pm-lsd2: {e}");
                    return 1;
                }
            },
        };
        if let Some(best) = &referee {
            if result.value != *best {
                eprintln!("error: {name}/{algo}: value mismatch against grid referee");
                *any_fail = true;
            }
        }
        rows.push(format!(
            "{name},{algo},{},{},{},,,",
            result.trace.evals,
            result.trace.steps.len(),
            result.trace.outer_iterations,
        ));
    }
    0
}
