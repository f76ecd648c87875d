//! Command-line front end for the solvers: load an instance file, run an
//! algorithm, emit a trace and a verification report.

mod bench;
mod instance;
mod output;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Signed;

use mconvex::constrained::{
    const_m_lsd, const_m_lsd2, const_m_sd, const_mnat_lsd, const_mnat_lsd2, const_mnat_lsd3,
    greedy_sc, ConstrainedResult, ConstraintSpec,
};
use mconvex::error::SolveError;
use mconvex::oracle::{box_points, MOracle};
use mconvex::point::IntPoint;
use mconvex::polyhedral::{pm_lsd, pm_lsd2, PolyError, PolyOracle, RatPoint, DEFAULT_PM_CAP};
use mconvex::unconstrained::{m_lsd, m_lsd2, m_sd, m_sd_prime, SolveResult};
use mconvex::value::{format_rat, parse_rat, ExtValue, Rat};
use mconvex::verify::{
    brute_constrained, brute_min, check_domain_base_polyhedron, check_m_exc, check_mnat_exc,
    check_z_convexity, tau, VerifyError, DEFAULT_ENUMERATION_CAP,
};

use instance::{load_instance, Loaded, SchemaError};

// Exit codes: 2 schema/usage error, 3 infeasible, 4 iteration cap (pm-lsd),
// 5 enumeration cap, 1 internal invariant violation or strict-mode failure.
const EXIT_INTERNAL: i32 = 1;
const EXIT_SCHEMA: i32 = 2;
const EXIT_INFEASIBLE: i32 = 3;
const EXIT_CAP: i32 = 4;
const EXIT_ENUM_CAP: i32 = 5;

#[derive(Parser)]
#[command(
    name = "mconvex",
    about = "Steepest-descent minimization of M-convex functions with long steps",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver on an instance file.
    Solve(SolveArgs),
    /// Certify an instance: exchange axiom, domain shape, slice convexity.
    Check(CheckArgs),
    /// Run algorithms over generated instance families and emit a CSV of
    /// counts and bound checks.
    Bench(bench::BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (JSON).
    instance: String,
    /// One of: m-sd, m-sd-prime, m-lsd, m-lsd2, const-m-sd, const-m-lsd,
    /// const-m-lsd2, const-mnat-lsd, const-mnat-lsd2, const-mnat-lsd3,
    /// greedy-sc, pm-lsd, pm-lsd2.
    algorithm: String,
    /// Start point: `auto`, a comma-separated coordinate list, or `@file`.
    #[arg(long, default_value = "auto")]
    x0: String,
    /// Constrained index set, 1-based, comma separated (e.g. `1,3`).
    #[arg(long, value_name = "LIST")]
    r: Option<String>,
    /// Constraint target `k`.
    #[arg(long)]
    k: Option<i64>,
    /// Compare the result against brute-force references.
    #[arg(long)]
    verify: bool,
    /// Enumeration cap for `--verify` (lattice points).
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
    /// Write the step trace as CSV to this path.
    #[arg(long)]
    trace: Option<String>,
    /// Iteration cap for pm-lsd.
    #[arg(long, default_value_t = DEFAULT_PM_CAP)]
    pm_cap: usize,
}

#[derive(Args)]
struct CheckArgs {
    /// Instance file (JSON).
    instance: String,
    /// Enumeration cap (lattice points).
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
    /// Also check convexity of the slice optimum for every singleton set.
    #[arg(long)]
    z_convexity: bool,
    /// Check the M♮ exchange axiom (null decrease index admitted) instead
    /// of the plain one; implied for instances declared mnat.
    #[arg(long)]
    mnat: bool,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Bench(args) => bench::cmd_bench(&args),
    };
    std::process::exit(code);
}

fn schema_fail(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    EXIT_SCHEMA
}

fn solve_error_code(e: &SolveError) -> i32 {
    match e {
        SolveError::InfeasibleK { .. } | SolveError::StartOutsideDomain(_) => EXIT_INFEASIBLE,
        SolveError::EmptyDomain => EXIT_INFEASIBLE,
        SolveError::InvalidConstraint(_) => EXIT_SCHEMA,
        _ => EXIT_INTERNAL,
    }
}

fn verify_error_code(e: &VerifyError) -> i32 {
    match e {
        VerifyError::EnumerationTooLarge { .. } => EXIT_ENUM_CAP,
        _ => EXIT_INTERNAL,
    }
}

fn parse_index_list(text: &str, n: usize) -> Result<Vec<usize>, SchemaError> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| SchemaError(format!("malformed index {part:?}")))?;
        if v == 0 || v > n {
            return Err(SchemaError(format!("index {v} outside 1..={n}")));
        }
        out.push(v - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_int_point(text: &str, n: usize) -> Result<IntPoint, SchemaError> {
    let coords: Result<Vec<i64>, _> = text.split(',').map(|p| p.trim().parse()).collect();
    let coords = coords.map_err(|_| SchemaError(format!("malformed point {text:?}")))?;
    if coords.len() != n {
        return Err(SchemaError(format!(
            "point has {} coordinates, expected {n}",
            coords.len()
        )));
    }
    Ok(IntPoint::new(coords))
}

fn parse_rat_point(text: &str, n: usize) -> Result<RatPoint, SchemaError> {
    let coords: Option<Vec<Rat>> = text.split(',').map(|p| parse_rat(p.trim())).collect();
    let coords = coords.ok_or_else(|| SchemaError(format!("malformed point {text:?}")))?;
    if coords.len() != n {
        return Err(SchemaError(format!(
            "point has {} coordinates, expected {n}",
            coords.len()
        )));
    }
    Ok(RatPoint::new(coords))
}

/// `auto` scans the box in lexicographic order for the first finite point;
/// `@path` reads the same comma-separated format from a file.
fn resolve_x0(spec: &str, f: &dyn MOracle) -> Result<Option<IntPoint>, SchemaError> {
    if spec == "auto" {
        return Ok(None);
    }
    let text = if let Some(path) = spec.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| SchemaError(format!("cannot read {path}: {e}")))?
    } else {
        spec.to_string()
    };
    Ok(Some(parse_int_point(text.trim(), f.dim())?))
}

fn scan_first_domain_point(f: &dyn MOracle) -> Result<IntPoint, SolveError> {
    let (lo, hi) = f.bounding_box();
    box_points(&lo, &hi)
        .find(|x| f.eval(x).is_finite())
        .ok_or(SolveError::EmptyDomain)
}

fn cmd_solve(args: &SolveArgs) -> i32 {
    let loaded = match load_instance(&args.instance) {
        Ok(l) => l,
        Err(e) => return schema_fail(e),
    };
    match args.algorithm.as_str() {
        "m-sd" | "m-sd-prime" | "m-lsd" | "m-lsd2" => solve_unconstrained(args, &loaded),
        "const-m-sd" | "const-m-lsd" | "const-m-lsd2" | "const-mnat-lsd" | "const-mnat-lsd2" => {
            solve_constrained(args, &loaded)
        }
        "const-mnat-lsd3" => solve_lsd3(args, &loaded),
        "greedy-sc" => solve_greedy(args, &loaded),
        "pm-lsd" | "pm-lsd2" => solve_polyhedral(args, &loaded),
        other => schema_fail(format!("unknown algorithm {other:?}")),
    }
}

fn solve_unconstrained(args: &SolveArgs, loaded: &Loaded) -> i32 {
    let Some(f) = loaded.lattice() else {
        return schema_fail("this algorithm needs a lattice instance");
    };
    let x0 = match resolve_x0(&args.x0, f) {
        Ok(Some(x)) => x,
        Ok(None) => match scan_first_domain_point(f) {
            Ok(x) => x,
            Err(e) => {
                eprintln!("error: {e}");
                return solve_error_code(&e);
            }
        },
        Err(e) => return schema_fail(e),
    };
    let run = match args.algorithm.as_str() {
        "m-sd" => m_sd(f, &x0),
        "m-sd-prime" => m_sd_prime(f, &x0),
        "m-lsd" => m_lsd(f, &x0),
        _ => m_lsd2(f, &x0),
    };
    let result = match run {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return solve_error_code(&e);
        }
    };
    print_summary(args, loaded, &result, &x0);
    if let Some(path) = &args.trace {
        if let Err(e) = output::write_trace_csv(path, &result.trace) {
            eprintln!("error: cannot write trace: {e}");
            return EXIT_INTERNAL;
        }
    }
    if args.verify {
        return verify_unconstrained(args, f, &x0, &result);
    }
    0
}

fn print_summary(args: &SolveArgs, loaded: &Loaded, result: &SolveResult, x0: &IntPoint) {
    println!("instance: {} ({})", args.instance, loaded.kind());
    println!("algorithm: {}", args.algorithm);
    println!("x0: {x0}");
    println!("minimizer: {}", result.minimizer);
    println!("value: {}", format_rat(&result.value));
    println!("steps: {}", result.trace.steps.len());
    println!("total_step_length: {}", result.trace.total_length());
    println!("outer_iterations: {}", result.trace.outer_iterations);
    println!("oracle_calls: {}", result.trace.evals);
}

fn verify_unconstrained(args: &SolveArgs, f: &dyn MOracle, x0: &IntPoint, result: &SolveResult) -> i32 {
    let (best, _) = match brute_min(f, args.cap) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return verify_error_code(&e);
        }
    };
    let t = tau(f, x0, args.cap).expect("x0 checked by the solver");
    let value_ok = result.value == best;
    println!(
        "verify: brute_value={} value_check={}",
        format_rat(&best),
        pass(value_ok)
    );
    let mut all = value_ok;
    if matches!(args.algorithm.as_str(), "m-sd" | "m-sd-prime") {
        let count_ok = result.trace.steps.len() as i64 * 2 == t;
        println!("verify: tau={t} iteration_check={}", pass(count_ok));
        all &= count_ok;
    }
    if args.algorithm == "m-lsd" {
        let len_ok = result.trace.total_length() * 2 == t;
        println!("verify: tau={t} step_length_check={}", pass(len_ok));
        all &= len_ok;
    }
    if args.algorithm == "m-lsd2" {
        let outer = result.trace.outer_iterations as i64;
        let phi0 = result
            .phi_history
            .first()
            .map(as_abs_int)
            .unwrap_or_default();
        let bound_ok = outer <= t / 2 && BigInt::from(outer) <= phi0;
        println!(
            "verify: tau={t} min_phi={phi0} outer_bound_check={}",
            pass(bound_ok)
        );
        all &= bound_ok;
    }
    if all {
        0
    } else {
        EXIT_INTERNAL
    }
}

fn as_abs_int(v: &Rat) -> BigInt {
    v.abs().ceil().to_integer()
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn solve_constrained(args: &SolveArgs, loaded: &Loaded) -> i32 {
    let Some(f) = loaded.lattice() else {
        return schema_fail("this algorithm needs a lattice instance");
    };
    let (Some(r_text), Some(k)) = (&args.r, args.k) else {
        return schema_fail("constrained solvers need --r and --k");
    };
    let set = match parse_index_list(r_text, f.dim()) {
        Ok(s) => s,
        Err(e) => return schema_fail(e),
    };
    let spec = ConstraintSpec::new(set.clone(), k);
    let x_init = match resolve_x0(&args.x0, f) {
        Ok(v) => v,
        Err(e) => return schema_fail(e),
    };
    let native_mnat = args.algorithm.starts_with("const-mnat");
    if native_mnat && !loaded.is_mnat() {
        eprintln!("note: running an mnat solver on an instance not declared mnat");
    }
    let run = match args.algorithm.as_str() {
        "const-m-sd" => const_m_sd(f, &spec, x_init.as_ref()),
        "const-m-lsd" => const_m_lsd(f, &spec, x_init.as_ref()),
        "const-m-lsd2" => const_m_lsd2(f, &spec, x_init.as_ref()),
        "const-mnat-lsd" => const_mnat_lsd(f, &spec, x_init.as_ref()),
        _ => const_mnat_lsd2(f, &spec, x_init.as_ref()),
    };
    finish_constrained(args, loaded, f, &set, k, run)
}

fn solve_lsd3(args: &SolveArgs, loaded: &Loaded) -> i32 {
    let Some(f) = loaded.lattice() else {
        return schema_fail("this algorithm needs a lattice instance");
    };
    let Some(k) = args.k else {
        return schema_fail("const-mnat-lsd3 needs --k");
    };
    let x_init = match resolve_x0(&args.x0, f) {
        Ok(v) => v,
        Err(e) => return schema_fail(e),
    };
    let set: Vec<usize> = (0..f.dim()).collect();
    let run = const_mnat_lsd3(f, k, x_init.as_ref());
    finish_constrained(args, loaded, f, &set, k, run)
}

fn finish_constrained(
    args: &SolveArgs,
    loaded: &Loaded,
    f: &dyn MOracle,
    set: &[usize],
    k: i64,
    run: Result<ConstrainedResult, SolveError>,
) -> i32 {
    let result = match run {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return solve_error_code(&e);
        }
    };
    println!("instance: {} ({})", args.instance, loaded.kind());
    println!("algorithm: {}", args.algorithm);
    println!("k_min: {}", result.k_min);
    println!("k: {k}");
    println!("optimizer: {}", result.optimizer);
    println!("value: {}", format_rat(&result.value));
    println!("steps: {}", result.trace.steps.len());
    println!("total_step_length: {}", result.trace.total_length());
    println!("outer_iterations: {}", result.trace.outer_iterations);
    println!("oracle_calls: {}", result.trace.evals);
    if let Some(path) = &args.trace {
        if let Err(e) = output::write_trace_csv(path, &result.trace) {
            eprintln!("error: cannot write trace: {e}");
            return EXIT_INTERNAL;
        }
    }
    if args.verify {
        let (z, _) = match brute_constrained(f, set, k, args.cap) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return verify_error_code(&e);
            }
        };
        let ok = ExtValue::Finite(result.value.clone()) == z;
        println!("verify: z(k)={z} value_check={}", pass(ok));
        if !ok {
            return EXIT_INTERNAL;
        }
    }
    0
}

fn solve_greedy(args: &SolveArgs, loaded: &Loaded) -> i32 {
    let Some((rho, costs)) = loaded.sc_parts() else {
        return schema_fail("greedy-sc needs a rap instance");
    };
    let result = match greedy_sc(costs, rho) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return solve_error_code(&e);
        }
    };
    println!("instance: {} ({})", args.instance, loaded.kind());
    println!("algorithm: greedy-sc");
    println!("optimizer: {}", result.optimizer);
    println!("value: {}", format_rat(&result.value));
    println!("steps: {}", result.trace.steps.len());
    println!("total_step_length: {}", result.trace.total_length());
    if let Some(path) = &args.trace {
        if let Err(e) = output::write_trace_csv(path, &result.trace) {
            eprintln!("error: cannot write trace: {e}");
            return EXIT_INTERNAL;
        }
    }
    if args.verify {
        let Some(f) = loaded.lattice() else {
            return EXIT_INTERNAL;
        };
        // The greedy optimum is the base optimum: compare against the
        // lattice brute force restricted to x(N) = rho(N).
        let set: Vec<usize> = (0..f.dim()).collect();
        let rho_full = rho.rho_full();
        let (z, _) = match brute_constrained(f, &set, rho_full, args.cap) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return verify_error_code(&e);
            }
        };
        let ok = ExtValue::Finite(result.value.clone()) == z;
        println!("verify: base_optimum={z} value_check={}", pass(ok));
        if !ok {
            return EXIT_INTERNAL;
        }
    }
    0
}

fn solve_polyhedral(args: &SolveArgs, loaded: &Loaded) -> i32 {
    let Some(f) = loaded.pl() else {
        return schema_fail("pm solvers need a pl-separable instance");
    };
    let x0 = if args.x0 == "auto" {
        f.start_point().expect("separable instances expose a vertex")
    } else {
        match parse_rat_point(&args.x0, f.dim()) {
            Ok(x) => x,
            Err(e) => return schema_fail(e),
        }
    };
    let run = match args.algorithm.as_str() {
        "pm-lsd" => pm_lsd(f, &x0, args.pm_cap),
        _ => pm_lsd2(f, &x0, None),
    };
    let result = match run {
        Ok(r) => r,
        Err(PolyError::IterationCapExceeded(cap)) => {
            eprintln!("error: iteration cap {cap} exceeded");
            return EXIT_CAP;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                PolyError::EvalOutsideDomain(_) => EXIT_INFEASIBLE,
                _ => EXIT_INTERNAL,
            };
        }
    };
    println!("instance: {} ({})", args.instance, loaded.kind());
    println!("algorithm: {}", args.algorithm);
    println!("x0: {x0}");
    println!("minimizer: {}", result.minimizer);
    println!("value: {}", format_rat(&result.value));
    println!("steps: {}", result.trace.steps.len());
    println!("outer_iterations: {}", result.trace.outer_iterations);
    println!("oracle_calls: {}", result.trace.evals);
    if let Some(path) = &args.trace {
        if let Err(e) = output::write_poly_trace_csv(path, &result.trace) {
            eprintln!("error: cannot write trace: {e}");
            return EXIT_INTERNAL;
        }
    }
    if args.verify {
        let denom = f.grid_denominator();
        let referee = f
            .grid_points(denom)
            .into_iter()
            .map(|p| f.eval(&p).expect_finite("grid point").clone())
            .min();
        match referee {
            Some(best) => {
                let ok = result.value == best;
                println!(
                    "verify: grid_optimum={} value_check={}",
                    format_rat(&best),
                    pass(ok)
                );
                if !ok {
                    return EXIT_INTERNAL;
                }
            }
            None => {
                eprintln!("error: empty grid");
                return EXIT_INTERNAL;
            }
        }
    }
    0
}

fn cmd_check(args: &CheckArgs) -> i32 {
    let loaded = match load_instance(&args.instance) {
        Ok(l) => l,
        Err(e) => return schema_fail(e),
    };
    match &loaded {
        Loaded::Pl(f) => check_pl(args, f),
        _ => check_lattice(args, &loaded),
    }
}

fn check_lattice(args: &CheckArgs, loaded: &Loaded) -> i32 {
    let f = loaded.lattice().expect("non-pl instances are lattice");
    let mnat = loaded.is_mnat() || args.mnat;
    let report = if mnat {
        check_mnat_exc(f, args.cap)
    } else {
        check_m_exc(f, args.cap)
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return verify_error_code(&e);
        }
    };
    let label = if mnat { "M-NAT-EXC" } else { "M-EXC" };
    println!("{label}: {}", pass(report.holds));
    if let Some(w) = &report.witness {
        println!("witness: {w}");
    }
    let mut ok = report.holds;

    if !mnat {
        match check_domain_base_polyhedron(f, args.cap) {
            Ok(r) => {
                println!("domain-base-polyhedron: {}", pass(r.holds));
                ok &= r.holds;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return verify_error_code(&e);
            }
        }
    }

    if args.z_convexity {
        for i in 0..f.dim() {
            match check_z_convexity(f, &[i], args.cap) {
                Ok(holds) => {
                    println!("z-convexity R={{{}}}: {}", i + 1, pass(holds));
                    ok &= holds;
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return verify_error_code(&e);
                }
            }
        }
    }
    if ok {
        0
    } else {
        EXIT_INTERNAL
    }
}

/// Certifies a separable piecewise-linear instance through its scaled
/// integer restriction: on the grid `(1/D) Z^n` the function restricts to a
/// lattice function that must satisfy the exchange axiom.
fn check_pl(args: &CheckArgs, f: &mconvex::polyhedral::PlSeparable) -> i32 {
    let denom = f.grid_denominator();
    let grid = f.grid_points(denom);
    if grid.is_empty() {
        eprintln!("error: the base polytope is empty");
        return EXIT_INFEASIBLE;
    }
    if grid.len() as u128 > args.cap {
        eprintln!(
            "error: grid has {} points, enumeration cap is {}",
            grid.len(),
            args.cap
        );
        return EXIT_ENUM_CAP;
    }
    let scale = Rat::from_integer(denom.into());
    let entries: Vec<(IntPoint, Rat)> = grid
        .iter()
        .map(|p| {
            let coords: Vec<i64> = p
                .coords()
                .iter()
                .map(|c| (c * &scale).to_integer().try_into().unwrap())
                .collect();
            (
                IntPoint::new(coords),
                f.eval(p).expect_finite("grid point").clone(),
            )
        })
        .collect();
    let lo = IntPoint::new(
        (0..f.dim())
            .map(|i| entries.iter().map(|(p, _)| p[i]).min().unwrap())
            .collect(),
    );
    let hi = IntPoint::new(
        (0..f.dim())
            .map(|i| entries.iter().map(|(p, _)| p[i]).max().unwrap())
            .collect(),
    );
    let bound = entries
        .iter()
        .map(|(_, v)| v.abs().ceil().to_integer())
        .max()
        .unwrap()
        + 1;
    let restriction = match mconvex::instances::tabulated::tabulated_oracle(entries, lo, hi, bound)
    {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    match check_m_exc(&restriction, args.cap) {
        Ok(r) => {
            println!("M-EXC (scaled integer restriction): {}", pass(r.holds));
            if let Some(w) = &r.witness {
                println!("witness: {w}");
            }
            if r.holds {
                0
            } else {
                EXIT_INTERNAL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            verify_error_code(&e)
        }
    }
}
