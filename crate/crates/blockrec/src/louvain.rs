//! Greedy modularity maximization (Louvain) over simple graphs.
//!
//! The method alternates local single-node moves with graph aggregation.
//! Because aggregated merges can open up new single-node improvements on
//! the original graph, the driver loops node-level stabilization and the
//! aggregation ladder until neither changes anything; the returned
//! partition therefore admits no improving single-node move. Output is
//! deterministic given the graph and the node scan order; randomness
//! enters only through [`louvain_best`], which samples orders.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::netgen::{ObservedGraph, Partition};
use crate::{Error, Result};

/// Minimum modularity improvement for a move to count; guards against
/// cycling on float noise.
const GAIN_EPS: f64 = 1e-12;

/// An unweighted simple graph (no self-loops).
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl SimpleGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        let mut m = 0;
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument("self-loops are not allowed".into()));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                continue;
            }
            adj[a].push(b);
            adj[b].push(a);
            m += 1;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, adj, m })
    }

    /// Observed edges become edges; unobserved pairs count as non-edges.
    pub fn from_observed(graph: &ObservedGraph) -> Self {
        let edges = graph
            .observations()
            .filter(|&(_, bit)| bit)
            .map(|(pair, _)| pair);
        Self::from_edges(graph.n(), edges).expect("observations are valid pairs")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }
}

/// Newman-Girvan modularity: Q = Σ_c [ e_c/m - (d_c/2m)² ].
pub fn modularity(g: &SimpleGraph, p: &Partition) -> Result<f64> {
    if p.n() != g.n {
        return Err(Error::DimensionMismatch { expected: g.n, got: p.n() });
    }
    if g.m == 0 {
        return Err(Error::InvalidArgument("modularity needs at least one edge".into()));
    }
    let m = g.m as f64;
    let mut intra = vec![0usize; p.r()];
    let mut deg = vec![0usize; p.r()];
    for v in 0..g.n {
        deg[p.label(v)] += g.degree(v);
        for &u in &g.adj[v] {
            if u > v && p.same_cluster(u, v) {
                intra[p.label(v)] += 1;
            }
        }
    }
    Ok((0..p.r())
        .map(|c| intra[c] as f64 / m - (deg[c] as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// Weighted multigraph used for the aggregation levels.
struct LevelGraph {
    n: usize,
    adj: Vec<Vec<(usize, f64)>>,
    self_loop: Vec<f64>,
    /// Σ_v k_v with k_v = Σ_u w(v,u) + 2·self_loop(v).
    two_m: f64,
    k: Vec<f64>,
}

impl LevelGraph {
    fn from_simple(g: &SimpleGraph) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = g
            .adj
            .iter()
            .map(|list| list.iter().map(|&u| (u, 1.0)).collect())
            .collect();
        let k: Vec<f64> = (0..g.n).map(|v| g.degree(v) as f64).collect();
        let two_m = k.iter().sum();
        Self { n: g.n, adj, self_loop: vec![0.0; g.n], two_m, k }
    }

    /// Collapses communities (compact labels in `0..nc`) into supernodes.
    fn aggregate(&self, comm: &[usize], nc: usize) -> Self {
        let mut self_loop = vec![0.0; nc];
        let mut weights: Vec<std::collections::BTreeMap<usize, f64>> =
            vec![std::collections::BTreeMap::new(); nc];
        for v in 0..self.n {
            let cv = comm[v];
            self_loop[cv] += self.self_loop[v];
            for &(u, w) in &self.adj[v] {
                if u <= v {
                    continue; // each undirected edge once
                }
                let cu = comm[u];
                if cu == cv {
                    self_loop[cv] += w;
                } else {
                    *weights[cv].entry(cu).or_insert(0.0) += w;
                    *weights[cu].entry(cv).or_insert(0.0) += w;
                }
            }
        }
        let adj: Vec<Vec<(usize, f64)>> = weights
            .into_iter()
            .map(|map| map.into_iter().collect())
            .collect();
        let k: Vec<f64> = (0..nc)
            .map(|c| adj[c].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_loop[c])
            .collect();
        let two_m = k.iter().sum();
        Self { n: nc, adj, self_loop, two_m, k }
    }

    #[cfg(test)]
    fn modularity(&self, comm: &[usize], nc: usize) -> f64 {
        let mut intra = vec![0.0; nc];
        let mut tot = vec![0.0; nc];
        for v in 0..self.n {
            let cv = comm[v];
            tot[cv] += self.k[v];
            intra[cv] += 2.0 * self.self_loop[v];
            for &(u, w) in &self.adj[v] {
                if comm[u] == cv {
                    intra[cv] += w; // ordered pairs: each intra edge twice
                }
            }
        }
        (0..nc)
            .map(|c| intra[c] / self.two_m - (tot[c] / self.two_m).powi(2))
            .sum()
    }

    /// Sweeps single-node moves until none improves modularity. Scan
    /// order is `order` when given, ascending index otherwise; candidate
    /// communities are scanned in ascending id so the first best wins.
    /// Returns the number of moves made.
    fn local_moves(&self, comm: &mut [usize], order: Option<&[usize]>) -> usize {
        let nc = comm.iter().copied().max().map_or(0, |c| c + 1);
        let mut sigma_tot = vec![0.0; nc];
        for v in 0..self.n {
            sigma_tot[comm[v]] += self.k[v];
        }
        let mut kvc = vec![0.0f64; nc];
        let mut touched: Vec<usize> = Vec::new();
        let mut total_moves = 0;
        loop {
            let mut moves = 0;
            for idx in 0..self.n {
                let v = order.map_or(idx, |o| o[idx]);
                let a = comm[v];
                sigma_tot[a] -= self.k[v];
                for &c in &touched {
                    kvc[c] = 0.0;
                }
                touched.clear();
                for &(u, w) in &self.adj[v] {
                    let c = comm[u];
                    if kvc[c] == 0.0 && !touched.contains(&c) {
                        touched.push(c);
                    }
                    kvc[c] += w;
                }
                touched.sort_unstable();
                let gain = |c: usize| kvc[c] - sigma_tot[c] * self.k[v] / self.two_m;
                let mut best = a;
                let mut best_gain = gain(a);
                for &c in &touched {
                    if c == a {
                        continue;
                    }
                    let g = gain(c);
                    if g > best_gain + GAIN_EPS {
                        best = c;
                        best_gain = g;
                    }
                }
                comm[v] = best;
                sigma_tot[best] += self.k[v];
                if best != a {
                    moves += 1;
                }
            }
            total_moves += moves;
            if moves == 0 {
                break;
            }
        }
        total_moves
    }
}

/// Renumbers labels to `0..count` in order of first appearance.
fn compact_labels(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = std::collections::HashMap::new();
    let compact = labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect();
    (compact, map.len())
}

/// Runs the method with a fixed node scan order. The `_seed` parameter is
/// reserved for randomized tie-breaking; the current policy is
/// deterministic (first best candidate in ascending community order).
pub fn louvain_cluster(g: &SimpleGraph, order: &[usize], _seed: u64) -> Result<Partition> {
    if g.m == 0 {
        return Err(Error::InvalidArgument("graph has no edges".into()));
    }
    if order.len() != g.n {
        return Err(Error::InvalidArgument("order must be a permutation of the nodes".into()));
    }
    let mut seen = vec![false; g.n];
    for &v in order {
        if v >= g.n || seen[v] {
            return Err(Error::InvalidArgument("order must be a permutation of the nodes".into()));
        }
        seen[v] = true;
    }

    let base = LevelGraph::from_simple(g);
    let mut labels: Vec<usize> = (0..g.n).collect();
    loop {
        base.local_moves(&mut labels, Some(order));
        let (compact, nc) = compact_labels(&labels);
        let mut maps: Vec<Vec<usize>> = vec![compact.clone()];
        let mut level = base.aggregate(&compact, nc);
        let mut upper_moves = 0;
        loop {
            let mut comm: Vec<usize> = (0..level.n).collect();
            let moved = level.local_moves(&mut comm, None);
            if moved == 0 {
                break;
            }
            upper_moves += moved;
            let (lc, lnc) = compact_labels(&comm);
            level = level.aggregate(&lc, lnc);
            maps.push(lc);
        }
        let mut composed = maps[0].clone();
        for map in &maps[1..] {
            for l in composed.iter_mut() {
                *l = map[*l];
            }
        }
        labels = composed;
        if upper_moves == 0 {
            break; // node-level stable and no aggregated merge helps
        }
    }
    Partition::from_arbitrary_labels(&labels)
}

/// Runs the method `num_orders` times with independently sampled uniform
/// node orders and returns every resulting partition (callers typically
/// average quality measures over them).
pub fn louvain_best(g: &SimpleGraph, num_orders: usize, seed: u64) -> Result<Vec<Partition>> {
    if num_orders == 0 {
        return Err(Error::InvalidArgument("need at least one ordering".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(num_orders);
    for run in 0..num_orders {
        let mut order: Vec<usize> = (0..g.n).collect();
        order.shuffle(&mut rng);
        out.push(louvain_cluster(g, &order, run as u64)?);
    }
    Ok(out)
}

/// The largest modularity improvement any single-node move could still
/// achieve against `p` (0 when `p` is move-stable).
pub fn best_single_move_gain(g: &SimpleGraph, p: &Partition) -> Result<f64> {
    if p.n() != g.n {
        return Err(Error::DimensionMismatch { expected: g.n, got: p.n() });
    }
    if g.m == 0 {
        return Err(Error::InvalidArgument("graph has no edges".into()));
    }
    let level = LevelGraph::from_simple(g);
    let comm = p.labels().to_vec();
    let nc = p.r();
    let mut sigma_tot = vec![0.0; nc];
    for v in 0..g.n {
        sigma_tot[comm[v]] += level.k[v];
    }
    let mut best = 0.0f64;
    for v in 0..g.n {
        let a = comm[v];
        let sig_a = sigma_tot[a] - level.k[v];
        let mut kvc = std::collections::BTreeMap::new();
        for &(u, w) in &level.adj[v] {
            *kvc.entry(comm[u]).or_insert(0.0) += w;
        }
        let stay = kvc.get(&a).copied().unwrap_or(0.0) - sig_a * level.k[v] / level.two_m;
        for (&c, &w) in &kvc {
            if c == a {
                continue;
            }
            let gain = w - sigma_tot[c] * level.k[v] / level.two_m;
            // per-move modularity delta is (gain - stay) * 2 / two_m
            best = best.max((gain - stay) * 2.0 / level.two_m);
        }
    }
    Ok(best)
}
