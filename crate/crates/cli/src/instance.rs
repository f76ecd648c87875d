//! The JSON instance format and its loading into oracles.
//!
//! All indices in instance files are 1-based (elements, vertices, blocks).
//! Numeric values may be written as JSON integers or as strings `"p/q"` in
//! lowest terms.

use serde::Deserialize;

use mconvex::instances::flow::{mcf_instance, FlowArc, FlowNetwork, McfOracle};
use mconvex::instances::rap::{rap_instance, ConvexTable, RapBaseOracle, RapPolymatroidOracle};
use mconvex::instances::submodular::SubmodularSpec;
use mconvex::instances::tabulated::{tabulated_oracle, TabulatedOracle};
use mconvex::oracle::MOracle;
use mconvex::point::IntPoint;
use mconvex::polyhedral::{pl_separable_instance, PiecewiseLinear, PlSeparable};
use mconvex::value::{parse_rat, Rat};

#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SchemaError {}

fn err(msg: impl Into<String>) -> SchemaError {
    SchemaError(msg.into())
}

/// A JSON scalar that is either an integer or a `"p/q"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RatJson {
    Int(i64),
    Text(String),
}

impl RatJson {
    pub fn to_rat(&self) -> Result<Rat, SchemaError> {
        match self {
            RatJson::Int(v) => Ok(Rat::from_integer((*v).into())),
            RatJson::Text(s) => {
                parse_rat(s).ok_or_else(|| err(format!("malformed rational literal {s:?}")))
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RhoSpec {
    Tabulated {
        n: usize,
        values: Vec<i64>,
    },
    CardinalityTruncation {
        n: usize,
        slope: i64,
        cap: i64,
    },
    Partition {
        n: usize,
        blocks: Vec<Vec<usize>>,
        caps: Vec<i64>,
    },
    WeightedCoverage {
        n: usize,
        covers: Vec<Vec<usize>>,
        weights: Vec<i64>,
    },
}

impl RhoSpec {
    pub fn build(&self) -> Result<SubmodularSpec, SchemaError> {
        match self {
            RhoSpec::Tabulated { n, values } => SubmodularSpec::tabulated(*n, values.clone())
                .map_err(|e| err(e.to_string())),
            RhoSpec::CardinalityTruncation { n, slope, cap } => {
                if *slope < 0 || *cap < 0 {
                    return Err(err("cardinality truncation needs non-negative parameters"));
                }
                Ok(SubmodularSpec::CardinalityTruncation {
                    n: *n,
                    slope: *slope,
                    cap: *cap,
                })
            }
            RhoSpec::Partition { n, blocks, caps } => {
                let blocks0 = blocks
                    .iter()
                    .map(|b| to_zero_based(b, *n))
                    .collect::<Result<Vec<_>, _>>()?;
                SubmodularSpec::partition(*n, blocks0, caps.clone()).map_err(|e| err(e.to_string()))
            }
            RhoSpec::WeightedCoverage { n, covers, weights } => {
                let universe = weights.len();
                let masks = covers
                    .iter()
                    .map(|c| {
                        let idx = to_zero_based(c, universe)?;
                        Ok(idx.iter().fold(0u64, |m, &e| m | 1 << e))
                    })
                    .collect::<Result<Vec<_>, SchemaError>>()?;
                SubmodularSpec::weighted_coverage(*n, masks, weights.clone())
                    .map_err(|e| err(e.to_string()))
            }
        }
    }
}

fn to_zero_based(indices: &[usize], n: usize) -> Result<Vec<usize>, SchemaError> {
    indices
        .iter()
        .map(|&i| {
            if i == 0 || i > n {
                Err(err(format!("index {i} outside 1..={n}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub x: Vec<i64>,
    pub value: RatJson,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub from: usize,
    pub to: usize,
    pub capacity: i64,
    pub cost: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlCostSpec {
    pub breakpoints: Vec<RatJson>,
    pub slopes: Vec<RatJson>,
    pub anchor_t: RatJson,
    pub anchor_value: RatJson,
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum RapVariant {
    M,
    Mnat,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceFile {
    Tabulated {
        dim: usize,
        #[serde(rename = "box")]
        bounding: BoxSpec,
        value_bound: i64,
        points: Vec<PointEntry>,
    },
    Rap {
        variant: RapVariant,
        rho: RhoSpec,
        costs: Vec<Vec<i64>>,
    },
    Mcf {
        vertices: usize,
        sources: Vec<usize>,
        sinks: Vec<usize>,
        arcs: Vec<ArcSpec>,
    },
    PlSeparable {
        rho: RhoSpec,
        costs: Vec<PlCostSpec>,
    },
}

/// A loaded instance, ready to drive solvers.
pub enum Loaded {
    Tabulated(TabulatedOracle),
    RapM(RapBaseOracle),
    RapNat(RapPolymatroidOracle),
    Mcf(McfOracle),
    Pl(PlSeparable),
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Tabulated(_) => "tabulated",
            Loaded::RapM(_) => "rap",
            Loaded::RapNat(_) => "rap (mnat)",
            Loaded::Mcf(_) => "mcf",
            Loaded::Pl(_) => "pl-separable",
        }
    }

    /// The lattice oracle view, when the instance lives on `Z^n`.
    pub fn lattice(&self) -> Option<&dyn MOracle> {
        match self {
            Loaded::Tabulated(f) => Some(f),
            Loaded::RapM(f) => Some(f),
            Loaded::RapNat(f) => Some(f),
            Loaded::Mcf(f) => Some(f),
            Loaded::Pl(_) => None,
        }
    }

    /// Whether the instance is declared M♮ (null decrease index admitted).
    pub fn is_mnat(&self) -> bool {
        matches!(self, Loaded::RapNat(_))
    }

    pub fn pl(&self) -> Option<&PlSeparable> {
        match self {
            Loaded::Pl(f) => Some(f),
            _ => None,
        }
    }

    /// Rank function and cost tables, for the greedy solver.
    pub fn sc_parts(&self) -> Option<(&SubmodularSpec, &[ConvexTable])> {
        match self {
            Loaded::RapM(f) => Some((f.rho(), f.costs())),
            Loaded::RapNat(f) => Some((f.rho(), f.costs())),
            _ => None,
        }
    }
}

pub fn load_instance(path: &str) -> Result<Loaded, SchemaError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(format!("cannot read {path}: {e}")))?;
    let file: InstanceFile =
        serde_json::from_str(&text).map_err(|e| err(format!("{path}: {e}")))?;
    build(file).map_err(|e| err(format!("{path}: {e}")))
}

fn build(file: InstanceFile) -> Result<Loaded, SchemaError> {
    match file {
        InstanceFile::Tabulated {
            dim,
            bounding,
            value_bound,
            points,
        } => {
            if bounding.lo.len() != dim || bounding.hi.len() != dim {
                return Err(err("box bounds must have length dim"));
            }
            let entries = points
                .into_iter()
                .map(|p| {
                    if p.x.len() != dim {
                        return Err(err(format!("point {:?} has wrong dimension", p.x)));
                    }
                    Ok((IntPoint::new(p.x), p.value.to_rat()?))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let oracle = tabulated_oracle(
                entries,
                IntPoint::new(bounding.lo),
                IntPoint::new(bounding.hi),
                value_bound.into(),
            )
            .map_err(|e| err(e.to_string()))?;
            Ok(Loaded::Tabulated(oracle))
        }
        InstanceFile::Rap {
            variant,
            rho,
            costs,
        } => {
            let rho = rho.build()?;
            let tables = costs
                .into_iter()
                .enumerate()
                .map(|(i, values)| ConvexTable::new(i, values).map_err(|e| err(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            let (base, poly) = rap_instance(rho, tables).map_err(|e| err(e.to_string()))?;
            Ok(match variant {
                RapVariant::M => Loaded::RapM(base),
                RapVariant::Mnat => Loaded::RapNat(poly),
            })
        }
        InstanceFile::Mcf {
            vertices,
            sources,
            sinks,
            arcs,
        } => {
            let arcs = arcs
                .into_iter()
                .enumerate()
                .map(|(i, a)| {
                    let from = *to_zero_based(&[a.from], vertices)?.first().unwrap();
                    let to = *to_zero_based(&[a.to], vertices)?.first().unwrap();
                    Ok(FlowArc {
                        from,
                        to,
                        capacity: a.capacity,
                        cost: ConvexTable::new(i, a.cost).map_err(|e| err(e.to_string()))?,
                    })
                })
                .collect::<Result<Vec<_>, SchemaError>>()?;
            let net = FlowNetwork {
                num_vertices: vertices,
                arcs,
                sources: to_zero_based(&sources, vertices)?,
                sinks: to_zero_based(&sinks, vertices)?,
            };
            Ok(Loaded::Mcf(mcf_instance(net).map_err(|e| err(e.to_string()))?))
        }
        InstanceFile::PlSeparable { rho, costs } => {
            let rho = rho.build()?;
            let tables = costs
                .into_iter()
                .map(|c| {
                    let breakpoints = c
                        .breakpoints
                        .iter()
                        .map(RatJson::to_rat)
                        .collect::<Result<Vec<_>, _>>()?;
                    let slopes = c
                        .slopes
                        .iter()
                        .map(RatJson::to_rat)
                        .collect::<Result<Vec<_>, _>>()?;
                    PiecewiseLinear::new(
                        breakpoints,
                        slopes,
                        c.anchor_t.to_rat()?,
                        c.anchor_value.to_rat()?,
                    )
                    .map_err(|e| err(e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Loaded::Pl(
                pl_separable_instance(rho, tables).map_err(|e| err(e.to_string()))?,
            ))
        }
    }
}
