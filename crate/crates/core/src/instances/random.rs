//! Seeded random instance generation. Every generator is deterministic in
//! its seed, and every emitted lattice oracle is certified against the
//! relevant exchange axiom before being returned.

use num_traits::Signed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::flow::{mcf_instance, FlowArc, FlowNetwork, McfOracle};
use super::rap::{rap_instance, ConvexTable, RapBaseOracle, RapPolymatroidOracle};
use super::submodular::SubmodularSpec;
use super::tabulated::{tabulated_oracle, TabulatedOracle};
use super::InstanceError;
use crate::oracle::MOracle;
use crate::point::IntPoint;
use crate::polyhedral::{pl_separable_instance, PiecewiseLinear, PlSeparable};
use crate::value::Rat;
use crate::verify::{check_m_exc, check_mnat_exc, enumerate_domain, DEFAULT_ENUMERATION_CAP};

const RETRIES: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomFamily {
    Rap,
    Mcf,
    TabulatedPerturbation,
}

impl RandomFamily {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "rap" => Some(RandomFamily::Rap),
            "mcf" => Some(RandomFamily::Mcf),
            "tabulated" | "tabulated-perturbation" => Some(RandomFamily::TabulatedPerturbation),
            _ => None,
        }
    }
}

/// A certified random M-convex oracle of the requested family; `n` is the
/// ambient dimension (for flows, the number of terminals).
pub fn random_instance(
    seed: u64,
    family: RandomFamily,
    n: usize,
) -> Result<Box<dyn MOracle>, InstanceError> {
    match family {
        RandomFamily::Rap => Ok(Box::new(random_rap(seed, n)?)),
        RandomFamily::Mcf => Ok(Box::new(random_mcf(seed, n)?)),
        RandomFamily::TabulatedPerturbation => Ok(Box::new(random_tabulated(seed, n)?)),
    }
}

fn rng_for(seed: u64, tag: u64, attempt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e3779b97f4a7c15) ^ (attempt << 56))
}

/// A random tabulated polymatroid rank function with all singleton ranks at
/// most `max_rank`: a weighted-coverage rank truncated at a random cap.
fn random_polymatroid(rng: &mut ChaCha8Rng, n: usize, max_rank: i64) -> SubmodularSpec {
    let universe = rng.gen_range(2..=4usize);
    let weights: Vec<i64> = (0..universe).map(|_| rng.gen_range(1..=2)).collect();
    let covers: Vec<u64> = (0..n)
        .map(|_| {
            let size = rng.gen_range(1..=2.min(universe));
            let mut mask = 0u64;
            while mask.count_ones() < size as u32 {
                mask |= 1 << rng.gen_range(0..universe);
            }
            mask
        })
        .collect();
    let coverage = SubmodularSpec::weighted_coverage(n, covers, weights).unwrap();
    let cap = rng.gen_range(1..=max_rank.min(coverage.rho_full()).max(1));
    let values: Vec<i64> = (0..(1u64 << n)).map(|m| coverage.rho(m).min(cap)).collect();
    SubmodularSpec::tabulated(n, values).expect("truncated coverage is submodular")
}

fn random_convex_table(rng: &mut ChaCha8Rng, index: usize, len: usize) -> ConvexTable {
    let mut increments: Vec<i64> = (1..len).map(|_| rng.gen_range(-3..=3)).collect();
    increments.sort_unstable();
    let mut values = vec![rng.gen_range(-2..=2i64)];
    for inc in increments {
        values.push(values.last().unwrap() + inc);
    }
    ConvexTable::new(index, values).expect("sorted increments are convex")
}

fn random_rho_costs(seed: u64, n: usize, attempt: u64) -> (SubmodularSpec, Vec<ConvexTable>) {
    let mut rng = rng_for(seed, 0x726170, attempt);
    let max_rank = if n <= 3 { 6 } else { 4 };
    let rho = random_polymatroid(&mut rng, n, max_rank);
    let len = rho.rho_full() as usize + 1;
    let costs: Vec<ConvexTable> = (0..n)
        .map(|i| random_convex_table(&mut rng, i, len))
        .collect();
    (rho, costs)
}

/// A random polymatroid rank function with matching convex cost tables,
/// suitable for the incremental greedy solver.
pub fn random_sc_instance(seed: u64, n: usize) -> (SubmodularSpec, Vec<ConvexTable>) {
    random_rho_costs(seed, n, 0)
}

fn rap_pair(seed: u64, n: usize, attempt: u64) -> (RapBaseOracle, RapPolymatroidOracle) {
    let (rho, costs) = random_rho_costs(seed, n, attempt);
    rap_instance(rho, costs).expect("generated tables cover the rank range")
}

/// A certified random base-form allocation oracle (M-convex).
pub fn random_rap(seed: u64, n: usize) -> Result<RapBaseOracle, InstanceError> {
    for attempt in 0..RETRIES {
        let (base, _) = rap_pair(seed, n, attempt);
        if check_m_exc(&base, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| InstanceError::GenerationFailed(e.to_string()))?
            .holds
        {
            return Ok(base);
        }
    }
    Err(InstanceError::GenerationFailed(format!(
        "rap seed {seed} n {n}: no certified instance in {RETRIES} attempts"
    )))
}

/// A certified random polymatroid-form allocation oracle (M♮-convex).
pub fn random_mnat(seed: u64, n: usize) -> Result<RapPolymatroidOracle, InstanceError> {
    for attempt in 0..RETRIES {
        let (_, poly) = rap_pair(seed, n, attempt);
        if check_mnat_exc(&poly, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| InstanceError::GenerationFailed(e.to_string()))?
            .holds
        {
            return Ok(poly);
        }
    }
    Err(InstanceError::GenerationFailed(format!(
        "mnat seed {seed} n {n}: no certified instance in {RETRIES} attempts"
    )))
}

/// A certified random flow-induced oracle with `n` terminals (2 sources and
/// `n - 2` sinks around one relay vertex).
pub fn random_mcf(seed: u64, n: usize) -> Result<McfOracle, InstanceError> {
    assert!((3..=4).contains(&n), "flow generator supports 3 or 4 terminals");
    for attempt in 0..RETRIES {
        let mut rng = rng_for(seed, 0x6d6366, attempt);
        let sources = 2usize;
        let sinks = n - sources;
        // Vertices: sources, then sinks, then one relay.
        let relay = n;
        let mut arcs = Vec::new();
        for s in 0..sources {
            let capacity = rng.gen_range(1..=2i64);
            arcs.push(FlowArc {
                from: s,
                to: relay,
                capacity,
                cost: random_convex_table(&mut rng, arcs.len(), capacity as usize + 1),
            });
        }
        for t in 0..sinks {
            let capacity = rng.gen_range(1..=2i64);
            arcs.push(FlowArc {
                from: relay,
                to: sources + t,
                capacity,
                cost: random_convex_table(&mut rng, arcs.len(), capacity as usize + 1),
            });
        }
        // One or two random shortcut arcs from a source to a sink.
        for _ in 0..rng.gen_range(1..=2) {
            let s = rng.gen_range(0..sources);
            let t = sources + rng.gen_range(0..sinks);
            let capacity = rng.gen_range(1..=2i64);
            arcs.push(FlowArc {
                from: s,
                to: t,
                capacity,
                cost: random_convex_table(&mut rng, arcs.len(), capacity as usize + 1),
            });
        }
        let net = FlowNetwork {
            num_vertices: n + 1,
            arcs,
            sources: (0..sources).collect(),
            sinks: (sources..n).collect(),
        };
        let oracle = mcf_instance(net)?;
        if check_m_exc(&oracle, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| InstanceError::GenerationFailed(e.to_string()))?
            .holds
        {
            return Ok(oracle);
        }
    }
    Err(InstanceError::GenerationFailed(format!(
        "mcf seed {seed} n {n}: no certified instance in {RETRIES} attempts"
    )))
}

/// A certified random tabulated oracle: a base-form allocation table with a
/// few random value bumps, each kept only if the exchange axiom survives.
pub fn random_tabulated(seed: u64, n: usize) -> Result<TabulatedOracle, InstanceError> {
    let base = random_rap(seed, n)?;
    let dom = enumerate_domain(&base, DEFAULT_ENUMERATION_CAP)
        .map_err(|e| InstanceError::GenerationFailed(e.to_string()))?;
    let mut rng = rng_for(seed, 0x706572, 0);
    let (lo, hi) = base.bounding_box();

    let mut entries: Vec<(IntPoint, Rat)> = dom
        .points
        .iter()
        .cloned()
        .zip(dom.values.iter().cloned())
        .collect();
    let attempts = rng.gen_range(2..=5usize);
    for _ in 0..attempts {
        let idx = rng.gen_range(0..entries.len());
        let bumped = &entries[idx].1 + Rat::from_integer(1.into());
        let old = std::mem::replace(&mut entries[idx].1, bumped);
        let candidate = tabulated_oracle(
            entries.clone(),
            lo.clone(),
            hi.clone(),
            perturbed_bound(&entries),
        )?;
        let holds = check_m_exc(&candidate, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| InstanceError::GenerationFailed(e.to_string()))?
            .holds;
        if !holds {
            entries[idx].1 = old;
        }
    }
    tabulated_oracle(entries.clone(), lo, hi, perturbed_bound(&entries))
}

fn perturbed_bound(entries: &[(IntPoint, Rat)]) -> num_bigint::BigInt {
    entries
        .iter()
        .map(|(_, v)| v.abs().ceil().to_integer())
        .max()
        .unwrap_or_else(|| 0.into())
        + 1
}

/// A random separable piecewise-linear instance over a small base polytope,
/// with breakpoint denominators 1 or 2.
pub fn random_pl(seed: u64, n: usize) -> Result<PlSeparable, InstanceError> {
    let mut rng = rng_for(seed, 0x706c73, 0);
    let rho = random_polymatroid(&mut rng, n, 4);
    let top = rho.rho_full();
    let costs: Vec<PiecewiseLinear> = (0..n)
        .map(|_| {
            let denom = *[1i64, 2].get(rng.gen_range(0..2usize)).unwrap();
            let count = rng.gen_range(1..=2usize);
            let mut numerators: Vec<i64> = Vec::new();
            while numerators.len() < count {
                let cand = rng.gen_range(0..=(top * denom).max(1));
                if !numerators.contains(&cand) {
                    numerators.push(cand);
                }
            }
            numerators.sort_unstable();
            let breakpoints: Vec<Rat> = numerators
                .iter()
                .map(|&v| Rat::new(v.into(), denom.into()))
                .collect();
            let mut slope_nums: Vec<i64> =
                (0..=count).map(|_| rng.gen_range(-4..=4i64)).collect();
            slope_nums.sort_unstable();
            let slopes: Vec<Rat> = slope_nums
                .iter()
                .map(|&v| Rat::new(v.into(), 2.into()))
                .collect();
            let anchor_t = breakpoints[0].clone();
            let anchor_value = Rat::from_integer(rng.gen_range(-2..=2i64).into());
            PiecewiseLinear::new(breakpoints, slopes, anchor_t, anchor_value)
                .expect("sorted construction is well formed")
        })
        .collect();
    pl_separable_instance(rho, costs)
        .map_err(|e| InstanceError::GenerationFailed(e.to_string()))
}
