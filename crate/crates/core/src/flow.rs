//! Integer max-flow (Dinic) over big-integer capacities.
//!
//! The preemptive solver reduces its capacity questions to max-flow /
//! min-cut computations on small job-interval networks. Capacities are
//! pre-scaled rationals, so the arithmetic here is exact integer.

use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: BigInt,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    arcs: Vec<Arc>,
    adjacency: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adjacency: vec![Vec::new(); nodes],
        }
    }

    /// Add a directed arc and its zero-capacity reverse. Returns the arc
    /// index; the flow pushed through it is later available via
    /// [`FlowNetwork::flow`].
    pub fn add_arc(&mut self, from: usize, to: usize, cap: BigInt) -> usize {
        debug_assert!(cap >= BigInt::zero());
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc {
            to: from,
            cap: BigInt::zero(),
        });
        self.adjacency[from].push(id);
        self.adjacency[to].push(id + 1);
        id
    }

    /// Flow currently on arc `id` (equals the residual capacity of its
    /// reverse arc).
    pub fn flow(&self, id: usize) -> &BigInt {
        &self.arcs[id ^ 1].cap
    }

    fn levels(&self, source: usize, sink: usize) -> Option<Vec<u32>> {
        let mut level = vec![u32::MAX; self.adjacency.len()];
        level[source] = 0;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adjacency[u] {
                let arc = &self.arcs[a];
                if arc.cap.is_zero() || level[arc.to] != u32::MAX {
                    continue;
                }
                level[arc.to] = level[u] + 1;
                queue.push_back(arc.to);
            }
        }
        (level[sink] != u32::MAX).then_some(level)
    }

    fn augment(
        &mut self,
        u: usize,
        sink: usize,
        pushed: Option<BigInt>,
        level: &[u32],
        iter: &mut [usize],
    ) -> Option<BigInt> {
        if u == sink {
            return pushed;
        }
        while iter[u] < self.adjacency[u].len() {
            let a = self.adjacency[u][iter[u]];
            let (to, cap) = {
                let arc = &self.arcs[a];
                (arc.to, arc.cap.clone())
            };
            if !cap.is_zero() && level[to] == level[u] + 1 {
                let bottleneck = match &pushed {
                    Some(p) => Some(p.clone().min(cap)),
                    None => Some(cap),
                };
                if let Some(flow) = self.augment(to, sink, bottleneck, level, iter) {
                    self.arcs[a].cap -= &flow;
                    self.arcs[a ^ 1].cap += &flow;
                    return Some(flow);
                }
            }
            iter[u] += 1;
        }
        None
    }

    /// Compute the maximum flow from `source` to `sink`.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> BigInt {
        let mut total = BigInt::zero();
        while let Some(level) = self.levels(source, sink) {
            let mut iter = vec![0usize; self.adjacency.len()];
            while let Some(flow) = self.augment(source, sink, None, &level, &mut iter) {
                total += flow;
            }
        }
        total
    }

    /// After a max-flow run: the source side of the *maximal* minimum
    /// cut, i.e. the complement of the set of nodes that can still reach
    /// the sink in the residual network.
    pub fn max_min_cut_source_side(&self, sink: usize) -> Vec<bool> {
        let n = self.adjacency.len();
        // Reverse residual reachability to the sink: node u reaches the
        // sink iff some residual arc u -> v exists with v reaching it.
        let mut reaches = vec![false; n];
        reaches[sink] = true;
        let mut queue = std::collections::VecDeque::from([sink]);
        while let Some(v) = queue.pop_front() {
            // Incoming residual arcs u -> v are exactly the reverses of
            // v's adjacency with residual capacity on the forward side.
            for &a in &self.adjacency[v] {
                let u = self.arcs[a].to;
                if reaches[u] || self.arcs[a ^ 1].cap.is_zero() {
                    continue;
                }
                reaches[u] = true;
                queue.push_back(u);
            }
        }
        reaches.iter().map(|r| !r).collect()
    }
}
