//! Oracles induced by minimum-cost flows with convex arc costs.
//!
//! The oracle value at a boundary vector `x` on the source/sink nodes is the
//! least total arc cost over feasible integer flows whose boundary realizes
//! `x` (and vanishes elsewhere); `+∞` when no such flow exists.

use num_bigint::BigInt;

use super::rap::ConvexTable;
use super::InstanceError;
use crate::oracle::MOracle;
use crate::point::IntPoint;
use crate::value::ExtValue;

#[derive(Clone, Debug)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub capacity: i64,
    /// Cost table on `0..=capacity`.
    pub cost: ConvexTable,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub num_vertices: usize,
    pub arcs: Vec<FlowArc>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

impl FlowNetwork {
    pub fn validate(&self) -> Result<(), InstanceError> {
        for arc in &self.arcs {
            if arc.from >= self.num_vertices || arc.to >= self.num_vertices {
                return Err(InstanceError::MalformedNetwork(
                    "arc endpoint outside the vertex range".into(),
                ));
            }
            if arc.capacity < 0 {
                return Err(InstanceError::MalformedNetwork(
                    "arc capacities must be non-negative".into(),
                ));
            }
            if arc.cost.range_len() != arc.capacity as usize + 1 {
                return Err(InstanceError::MalformedNetwork(
                    "each cost table must cover 0..=capacity".into(),
                ));
            }
        }
        for v in self.sources.iter().chain(&self.sinks) {
            if *v >= self.num_vertices {
                return Err(InstanceError::MalformedNetwork(
                    "terminal outside the vertex range".into(),
                ));
            }
        }
        if self.sources.iter().any(|s| self.sinks.contains(s)) {
            return Err(InstanceError::MalformedNetwork(
                "sources and sinks must be disjoint".into(),
            ));
        }
        Ok(())
    }

    /// Boundary coordinates: sources then sinks, in declaration order.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        self.sources.iter().chain(&self.sinks).copied().collect()
    }
}

pub struct McfOracle {
    net: FlowNetwork,
    boundary: Vec<usize>,
}

pub fn mcf_instance(net: FlowNetwork) -> Result<McfOracle, InstanceError> {
    net.validate()?;
    let boundary = net.boundary_nodes();
    Ok(McfOracle { net, boundary })
}

impl McfOracle {
    pub fn network(&self) -> &FlowNetwork {
        &self.net
    }

    /// Exhaustive minimum over all feasible flows; the independent referee
    /// for the successive-shortest-path path. Only usable on tiny networks.
    pub fn brute_eval(&self, x: &IntPoint) -> ExtValue {
        let arcs = &self.net.arcs;
        let mut best: Option<i64> = None;
        let mut flow = vec![0i64; arcs.len()];
        self.brute_rec(0, &mut flow, x, &mut best);
        match best {
            Some(v) => ExtValue::from_int(v),
            None => ExtValue::PlusInfinity,
        }
    }

    fn brute_rec(&self, idx: usize, flow: &mut Vec<i64>, x: &IntPoint, best: &mut Option<i64>) {
        if idx == self.net.arcs.len() {
            let mut boundary = vec![0i64; self.net.num_vertices];
            for (a, &f) in self.net.arcs.iter().zip(flow.iter()) {
                boundary[a.from] += f;
                boundary[a.to] -= f;
            }
            let on_terminals = self
                .boundary
                .iter()
                .enumerate()
                .all(|(c, &v)| boundary[v] == x[c]);
            let conserved = (0..self.net.num_vertices)
                .filter(|v| !self.boundary.contains(v))
                .all(|v| boundary[v] == 0);
            if on_terminals && conserved {
                let cost: i64 = self
                    .net
                    .arcs
                    .iter()
                    .zip(flow.iter())
                    .map(|(a, &f)| a.cost.eval(f))
                    .sum();
                *best = Some(best.map_or(cost, |b| b.min(cost)));
            }
            return;
        }
        for f in 0..=self.net.arcs[idx].capacity {
            flow[idx] = f;
            self.brute_rec(idx + 1, flow, x, best);
        }
        flow[idx] = 0;
    }
}

impl MOracle for McfOracle {
    fn dim(&self) -> usize {
        self.boundary.len()
    }

    fn eval(&self, x: &IntPoint) -> ExtValue {
        debug_assert_eq!(x.dim(), self.boundary.len());
        if x.sum() != 0 {
            return ExtValue::PlusInfinity;
        }
        let mut demand = vec![0i64; self.net.num_vertices];
        for (c, &v) in self.boundary.iter().enumerate() {
            demand[v] = x[c];
        }
        match min_cost_transshipment(&self.net, &demand) {
            Some(cost) => ExtValue::from_int(cost),
            None => ExtValue::PlusInfinity,
        }
    }

    fn bounding_box(&self) -> (IntPoint, IntPoint) {
        let mut lo = Vec::with_capacity(self.boundary.len());
        let mut hi = Vec::with_capacity(self.boundary.len());
        for &v in &self.boundary {
            let inflow: i64 = self
                .net
                .arcs
                .iter()
                .filter(|a| a.to == v)
                .map(|a| a.capacity)
                .sum();
            let outflow: i64 = self
                .net
                .arcs
                .iter()
                .filter(|a| a.from == v)
                .map(|a| a.capacity)
                .sum();
            lo.push(-inflow);
            hi.push(outflow);
        }
        (IntPoint::new(lo), IntPoint::new(hi))
    }

    fn value_bound(&self) -> BigInt {
        let total: i64 = self.net.arcs.iter().map(|a| a.cost.max_abs()).sum();
        BigInt::from(total.max(1))
    }

    fn witness(&self) -> Option<IntPoint> {
        // The zero flow always realizes the zero boundary.
        Some(IntPoint::zeros(self.boundary.len()))
    }
}

/// Minimum cost of an integer flow with prescribed net outflow `demand[v]`
/// at every vertex; `None` when infeasible.
///
/// Convex arc costs are decomposed into parallel unit-capacity arcs carrying
/// the incremental costs (non-decreasing by convexity), negative units are
/// pre-saturated and replaced by their residuals, and the remaining
/// non-negative-cost transshipment is solved by successive shortest paths.
fn min_cost_transshipment(net: &FlowNetwork, demand: &[i64]) -> Option<i64> {
    let n = net.num_vertices;
    let source = n;
    let sink = n + 1;
    let mut graph = Residual::new(n + 2);

    let mut base_cost = 0i64;
    let mut imbalance = demand.to_vec();
    for arc in &net.arcs {
        base_cost += arc.cost.eval(0);
        for t in 0..arc.capacity {
            let inc = arc.cost.increment(t);
            if inc < 0 {
                // Saturate this unit up front; its residual undoes it.
                base_cost += inc;
                imbalance[arc.from] -= 1;
                imbalance[arc.to] += 1;
                graph.add_edge(arc.to, arc.from, 1, -inc);
            } else {
                graph.add_edge(arc.from, arc.to, 1, inc);
            }
        }
    }

    let mut required = 0i64;
    for (v, &b) in imbalance.iter().enumerate() {
        if b > 0 {
            graph.add_edge(source, v, b, 0);
            required += b;
        } else if b < 0 {
            graph.add_edge(v, sink, -b, 0);
        }
    }

    let mut routed = 0i64;
    let mut path_cost = 0i64;
    while routed < required {
        let (amount, cost) = graph.augment_shortest(source, sink)?;
        routed += amount;
        path_cost += cost * amount;
    }
    Some(base_cost + path_cost)
}

struct Edge {
    to: usize,
    cap: i64,
    cost: i64,
    rev: usize,
}

struct Residual {
    adj: Vec<Vec<Edge>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual {
            adj: (0..n).map(|_| Vec::new()).collect(),
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64, cost: i64) {
        let rev_from = self.adj[to].len();
        let rev_to = self.adj[from].len();
        self.adj[from].push(Edge {
            to,
            cap,
            cost,
            rev: rev_from,
        });
        self.adj[to].push(Edge {
            to: from,
            cap: 0,
            cost: -cost,
            rev: rev_to,
        });
    }

    /// Bellman-Ford shortest path by cost, then one bottleneck augmentation.
    /// Returns `(amount, unit_cost)` or `None` when the sink is unreachable.
    fn augment_shortest(&mut self, source: usize, sink: usize) -> Option<(i64, i64)> {
        let n = self.adj.len();
        const UNREACHED: i64 = i64::MAX / 4;
        let mut dist = vec![UNREACHED; n];
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        dist[source] = 0;
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                if dist[u] >= UNREACHED {
                    continue;
                }
                for (idx, e) in self.adj[u].iter().enumerate() {
                    if e.cap > 0 && dist[u] + e.cost < dist[e.to] {
                        dist[e.to] = dist[u] + e.cost;
                        prev[e.to] = Some((u, idx));
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[sink] >= UNREACHED {
            return None;
        }

        let mut bottleneck = i64::MAX;
        let mut v = sink;
        while let Some((u, idx)) = prev[v] {
            bottleneck = bottleneck.min(self.adj[u][idx].cap);
            v = u;
        }
        let mut v = sink;
        while let Some((u, idx)) = prev[v] {
            self.adj[u][idx].cap -= bottleneck;
            let rev = self.adj[u][idx].rev;
            self.adj[v][rev].cap += bottleneck;
            v = u;
        }
        Some((bottleneck, dist[sink]))
    }
}

/// A single arc `s -> t` with capacity `cap` and the given cost table.
pub fn single_arc_network(cap: i64, cost: ConvexTable) -> FlowNetwork {
    FlowNetwork {
        num_vertices: 2,
        arcs: vec![FlowArc {
            from: 0,
            to: 1,
            capacity: cap,
            cost,
        }],
        sources: vec![0],
        sinks: vec![1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{box_points, MOracle};

    fn p(coords: &[i64]) -> IntPoint {
        IntPoint::new(coords.to_vec())
    }

    fn quadratic_single_arc() -> McfOracle {
        let cost = ConvexTable::new(0, vec![0, 1, 4]).unwrap();
        mcf_instance(single_arc_network(2, cost)).unwrap()
    }

    #[test]
    fn single_arc_matches_the_closed_form() {
        let f = quadratic_single_arc();
        for k in 0..=2 {
            assert_eq!(f.eval(&p(&[k, -k])), ExtValue::from_int(k * k));
        }
        assert_eq!(f.eval(&p(&[3, -3])), ExtValue::PlusInfinity);
        assert_eq!(f.eval(&p(&[-1, 1])), ExtValue::PlusInfinity);
        assert_eq!(f.eval(&p(&[1, 0])), ExtValue::PlusInfinity);
    }

    #[test]
    fn zero_cost_network_is_a_feasibility_indicator() {
        let cost = ConvexTable::new(0, vec![0, 0, 0]).unwrap();
        let f = mcf_instance(single_arc_network(2, cost)).unwrap();
        assert_eq!(f.eval(&p(&[2, -2])), ExtValue::from_int(0));
        assert_eq!(f.eval(&p(&[3, -3])), ExtValue::PlusInfinity);
    }

    #[test]
    fn negative_increments_are_handled_exactly() {
        // One arc whose cost decreases then increases: table (2, 0, 1).
        let cost = ConvexTable::new(0, vec![2, 0, 1]).unwrap();
        let f = mcf_instance(single_arc_network(2, cost)).unwrap();
        assert_eq!(f.eval(&p(&[0, 0])), ExtValue::from_int(2));
        assert_eq!(f.eval(&p(&[1, -1])), ExtValue::from_int(0));
        assert_eq!(f.eval(&p(&[2, -2])), ExtValue::from_int(1));
    }

    fn diamond_network() -> McfOracle {
        // Two sources 0, 1 feeding a middle vertex 2 and a sink 3.
        let net = FlowNetwork {
            num_vertices: 4,
            arcs: vec![
                FlowArc {
                    from: 0,
                    to: 2,
                    capacity: 2,
                    cost: ConvexTable::new(0, vec![0, 1, 3]).unwrap(),
                },
                FlowArc {
                    from: 1,
                    to: 2,
                    capacity: 2,
                    cost: ConvexTable::new(0, vec![0, 2, 5]).unwrap(),
                },
                FlowArc {
                    from: 2,
                    to: 3,
                    capacity: 3,
                    cost: ConvexTable::new(0, vec![1, 0, 1, 4]).unwrap(),
                },
                FlowArc {
                    from: 0,
                    to: 3,
                    capacity: 1,
                    cost: ConvexTable::new(0, vec![0, 2]).unwrap(),
                },
            ],
            sources: vec![0, 1],
            sinks: vec![3],
        };
        mcf_instance(net).unwrap()
    }

    #[test]
    fn solver_agrees_with_flow_enumeration_everywhere() {
        let f = diamond_network();
        let (lo, hi) = f.bounding_box();
        for x in box_points(&lo, &hi) {
            assert_eq!(f.eval(&x), f.brute_eval(&x), "boundary {x}");
        }
    }

    #[test]
    fn rejects_overlapping_terminals() {
        let cost = ConvexTable::new(0, vec![0, 0]).unwrap();
        let mut net = single_arc_network(1, cost);
        net.sinks = vec![0];
        assert!(matches!(
            mcf_instance(net),
            Err(InstanceError::MalformedNetwork(_))
        ));
    }
}
