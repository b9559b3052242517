//! Synthetic benchmark networks with planted, non-overlapping clusters.
//!
//! Nodes are split into contiguous blocks whose sizes decay
//! geometrically with a ratio parameter `alpha` (alpha = 1 gives equal
//! blocks). The clean graph is the disjoint union of cliques on those
//! blocks; a fixed fraction of node pairs is then flipped
//! (edge <-> non-edge), which simultaneously removes in-cluster edges
//! and inserts cross-cluster ones. Partial observability is modelled by
//! sampling an exact-size random subset of the pairs as observed.
//!
//! File formats are plain UTF-8 text with LF endings and `#` comments;
//! indices are 1-based on disk, 0-based in memory.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::mat::{DenseSymMatrix, ObservationMask};
use crate::{Error, Result};

/// Identifier of the pseudo-random generator, recorded in run metadata so
/// experiments can be reproduced outside this crate.
pub const RNG_ALGORITHM: &str = "chacha12";

/// An assignment of `n` nodes to `r` disjoint clusters labelled `0..r`,
/// every label used at least once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    assignment: Vec<usize>,
    r: usize,
}

impl Partition {
    /// Builds from compact labels in `0..r` where every label occurs.
    pub fn from_labels(assignment: Vec<usize>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::InvalidArgument("partition must cover at least one node".into()));
        }
        let r = assignment.iter().copied().max().unwrap() + 1;
        let mut used = vec![false; r];
        for &label in &assignment {
            used[label] = true;
        }
        if !used.iter().all(|&u| u) {
            return Err(Error::Validation(format!(
                "labels must be compact: some label in 0..{r} is unused"
            )));
        }
        Ok(Self { n: assignment.len(), assignment, r })
    }

    /// Builds from arbitrary labels, renumbering clusters in order of
    /// first appearance.
    pub fn from_arbitrary_labels(labels: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("partition must cover at least one node".into()));
        }
        let mut map = std::collections::HashMap::new();
        let mut assignment = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = map.len();
            assignment.push(*map.entry(l).or_insert(next));
        }
        let r = map.len();
        Ok(Self { n: labels.len(), assignment, r })
    }

    /// Consecutive blocks of the given sizes: nodes `0..s0` in cluster 0,
    /// the next `s1` in cluster 1, and so on.
    pub fn contiguous_blocks(sizes: &[usize]) -> Self {
        assert!(!sizes.is_empty() && sizes.iter().all(|&s| s > 0));
        let n = sizes.iter().sum();
        let mut assignment = Vec::with_capacity(n);
        for (label, &s) in sizes.iter().enumerate() {
            assignment.extend(std::iter::repeat(label).take(s));
        }
        Self { n, assignment, r: sizes.len() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of clusters.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn label(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn labels(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.r];
        for &l in &self.assignment {
            sizes[l] += 1;
        }
        sizes
    }

    /// Node lists per cluster, each sorted ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.r];
        for (node, &l) in self.assignment.iter().enumerate() {
            out[l].push(node);
        }
        out
    }

    pub fn same_cluster(&self, i: usize, j: usize) -> bool {
        self.assignment[i] == self.assignment[j]
    }
}

/// Adjacency observations over a mask: every observed off-diagonal pair
/// carries a bit (1 = edge), the diagonal is implicitly all ones, and
/// unobserved pairs carry no information.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedGraph {
    mask: ObservationMask,
    /// Parallel to `mask.off_diagonal_pairs()`.
    bits: Vec<bool>,
}

impl ObservedGraph {
    pub fn new(mask: ObservationMask, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != mask.observed_pair_count() {
            return Err(Error::Validation(format!(
                "expected one bit per observed pair ({}), got {}",
                mask.observed_pair_count(),
                bits.len()
            )));
        }
        Ok(Self { mask, bits })
    }

    /// Fully observed graph from an edge set.
    pub fn from_edges(n: usize, edges: &HashSet<(usize, usize)>) -> Self {
        let mask = ObservationMask::full(n);
        let bits = mask
            .off_diagonal_pairs()
            .iter()
            .map(|&(i, j)| edges.contains(&(i, j)))
            .collect();
        Self { mask, bits }
    }

    pub fn n(&self) -> usize {
        self.mask.n()
    }

    pub fn mask(&self) -> &ObservationMask {
        &self.mask
    }

    /// `Some(true/false)` when the pair is observed, `None` otherwise;
    /// the diagonal is always `Some(true)`.
    pub fn edge(&self, i: usize, j: usize) -> Option<bool> {
        if i == j {
            return Some(true);
        }
        let key = (i.min(j), i.max(j));
        self.mask
            .off_diagonal_pairs()
            .binary_search(&key)
            .ok()
            .map(|idx| self.bits[idx])
    }

    /// Observed pairs with their bit, ascending pair order.
    pub fn observations(&self) -> impl Iterator<Item = ((usize, usize), bool)> + '_ {
        self.mask
            .off_diagonal_pairs()
            .iter()
            .copied()
            .zip(self.bits.iter().copied())
    }

    pub fn observed_edge_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Dense counterpart: ones on the diagonal, observed bits on the
    /// mask, zero everywhere unobserved (a placeholder that must only be
    /// read through the mask projection).
    pub fn to_dense(&self) -> (DenseSymMatrix, ObservationMask) {
        let n = self.n();
        let mut d = DenseSymMatrix::identity(n);
        for (&(i, j), &b) in self.mask.off_diagonal_pairs().iter().zip(&self.bits) {
            if b {
                d.set_sym(i, j, 1.0);
            }
        }
        (d, self.mask.clone())
    }

    /// Re-reads a dense matrix written by [`to_dense`](Self::to_dense).
    pub fn from_dense(d: &DenseSymMatrix, mask: &ObservationMask) -> Result<Self> {
        if d.n() != mask.n() {
            return Err(Error::DimensionMismatch { expected: d.n(), got: mask.n() });
        }
        let mut bits = Vec::with_capacity(mask.observed_pair_count());
        for &(i, j) in mask.off_diagonal_pairs() {
            let v = d.get(i, j);
            if v != 0.0 && v != 1.0 {
                return Err(Error::Validation(format!(
                    "entry ({i}, {j}) = {v} is not binary"
                )));
            }
            bits.push(v == 1.0);
        }
        Ok(Self { mask: mask.clone(), bits })
    }

    /// Keeps only the observations covered by `mask`, which must be a
    /// subset of (or equal to) the current one.
    pub fn restrict(&self, mask: &ObservationMask) -> Result<Self> {
        if !self.mask.contains(mask) {
            return Err(Error::InvalidArgument(
                "restriction mask observes pairs the graph does not".into(),
            ));
        }
        let bits = mask
            .off_diagonal_pairs()
            .iter()
            .map(|&(i, j)| self.edge(i, j).expect("pair is observed"))
            .collect();
        Ok(Self { mask: mask.clone(), bits })
    }
}

/// Parameters of the synthetic generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    /// Nominal node count; the generated instance has `sum(cluster sizes)`
    /// nodes, which can differ by rounding.
    pub n: usize,
    /// Cluster-size decay ratio in (0, 1]; 1 means equal sizes.
    pub alpha: f64,
    /// Fraction of node pairs whose edge state is flipped.
    pub flip_fraction: f64,
    /// Probability that a node pair is observable.
    pub p0: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(n: usize, alpha: f64, seed: u64) -> Self {
        Self { n, alpha, flip_fraction: 0.05, p0: 1.0, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be in (0, 1], got {}",
                self.alpha
            )));
        }
        if !(0.0..1.0).contains(&self.flip_fraction) {
            return Err(Error::InvalidArgument(format!(
                "flip fraction must be in [0, 1), got {}",
                self.flip_fraction
            )));
        }
        if !(self.p0 > 0.0 && self.p0 <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "p0 must be in (0, 1], got {}",
                self.p0
            )));
        }
        Ok(())
    }
}

/// Nearest integer with halves rounded away from zero.
fn nearest(x: f64) -> i64 {
    x.round() as i64
}

/// Cluster sizes for a nominal node count: r = ceil(0.05 n) clusters with
/// sizes proportional to alpha^(l-1), normalized to sum to n before
/// rounding; zero-size clusters are dropped. For alpha = 1 the limit n/r
/// is used for every cluster.
pub fn cluster_sizes(n: usize, alpha: f64) -> Vec<usize> {
    assert!(n >= 1 && alpha > 0.0 && alpha <= 1.0);
    let r = (0.05 * n as f64).ceil() as usize;
    let r = r.max(1);
    let mut sizes = Vec::with_capacity(r);
    for l in 1..=r {
        let ideal = if alpha == 1.0 {
            n as f64 / r as f64
        } else {
            (1.0 - alpha) / (1.0 - alpha.powi(r as i32)) * n as f64 * alpha.powi(l as i32 - 1)
        };
        let s = nearest(ideal);
        if s > 0 {
            sizes.push(s as usize);
        }
    }
    sizes
}

/// Generates a fully observed random network together with its planted
/// partition. Deterministic in the config, including the seed.
pub fn generate_network(cfg: &GeneratorConfig) -> Result<(ObservedGraph, Partition)> {
    cfg.validate()?;
    let sizes = cluster_sizes(cfg.n, cfg.alpha);
    let truth = Partition::contiguous_blocks(&sizes);
    let n = truth.n();
    let total_pairs = n * (n - 1) / 2;
    let flips = nearest(cfg.flip_fraction * total_pairs as f64) as usize;

    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let flipped: HashSet<usize> = rand::seq::index::sample(&mut rng, total_pairs, flips)
        .into_iter()
        .collect();

    let mut edges = HashSet::new();
    let mut k = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let intra = truth.same_cluster(i, j);
            if intra != flipped.contains(&k) {
                edges.insert((i, j));
            }
            k += 1;
        }
    }
    Ok((ObservedGraph::from_edges(n, &edges), truth))
}

/// Samples an observation mask with exactly
/// `nearest(p0 * n(n-1)/2)` off-diagonal pairs, uniformly without
/// replacement. The diagonal is always observed.
pub fn sample_mask(n: usize, p0: f64, seed: u64) -> Result<ObservationMask> {
    if !(p0 > 0.0 && p0 <= 1.0) {
        return Err(Error::InvalidArgument(format!("p0 must be in (0, 1], got {p0}")));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let total = n * (n - 1) / 2;
    let count = nearest(p0 * total as f64) as usize;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut picks: Vec<usize> = rand::seq::index::sample(&mut rng, total, count).into_vec();
    picks.sort_unstable();
    let pairs: Vec<(usize, usize)> = picks.into_iter().map(|k| decode_pair(n, k)).collect();
    ObservationMask::from_pairs(n, pairs)
}

/// Inverse of the row-major enumeration of pairs (i, j), i < j.
fn decode_pair(n: usize, k: usize) -> (usize, usize) {
    // offsets[i] = number of pairs with first index < i
    let mut i = 0usize;
    let mut base = 0usize;
    loop {
        let row = n - 1 - i;
        if k < base + row {
            return (i, i + 1 + (k - base));
        }
        base += row;
        i += 1;
    }
}

// ---------------------------------------------------------------------------
// file I/O

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Writes the graph format: header `n <n>`, then one `i j b` line per
/// observed pair with 1-based i < j.
pub fn write_graph_file(path: &Path, graph: &ObservedGraph) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "n {}", graph.n())?;
    for ((i, j), b) in graph.observations() {
        writeln!(out, "{} {} {}", i + 1, j + 1, u8::from(b))?;
    }
    Ok(())
}

pub fn read_graph_file(path: &Path) -> Result<ObservedGraph> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text)
}

pub fn parse_graph(text: &str) -> Result<ObservedGraph> {
    let mut lines = data_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header line `n <n>`"))?;
    let n = parse_header_n(header_no, header)?;
    let mut pairs = Vec::new();
    let mut bits = Vec::new();
    let mut seen = HashSet::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(line_no, format!("expected `i j b`, got `{line}`")));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(line_no, "invalid node index"))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(line_no, "invalid node index"))?;
        let b: u8 = fields[2]
            .parse()
            .map_err(|_| parse_err(line_no, "invalid bit"))?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(parse_err(line_no, format!("node index out of range 1..={n}")));
        }
        if i == j {
            return Err(parse_err(line_no, "diagonal pairs are implicit"));
        }
        if b > 1 {
            return Err(parse_err(line_no, "bit must be 0 or 1"));
        }
        let key = (i.min(j) - 1, i.max(j) - 1);
        if !seen.insert(key) {
            return Err(parse_err(line_no, format!("duplicate pair {} {}", i, j)));
        }
        pairs.push(key);
        bits.push(b == 1);
    }
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by_key(|&idx| pairs[idx]);
    let sorted_pairs: Vec<(usize, usize)> = order.iter().map(|&idx| pairs[idx]).collect();
    let sorted_bits: Vec<bool> = order.iter().map(|&idx| bits[idx]).collect();
    let mask = ObservationMask::from_pairs(n, sorted_pairs)?;
    ObservedGraph::new(mask, sorted_bits)
}

fn parse_header_n(line_no: usize, header: &str) -> Result<usize> {
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 || fields[0] != "n" {
        return Err(parse_err(line_no, "header must start with `n <n>`"));
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| parse_err(line_no, "invalid node count"))?;
    if n == 0 {
        return Err(parse_err(line_no, "node count must be positive"));
    }
    Ok(n)
}

/// Writes the partition format: header `n <n> r <r>`, then `i c` lines,
/// both 1-based.
pub fn write_partition_file(path: &Path, partition: &Partition) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "n {} r {}", partition.n(), partition.r())?;
    for (node, &label) in partition.labels().iter().enumerate() {
        writeln!(out, "{} {}", node + 1, label + 1)?;
    }
    Ok(())
}

pub fn read_partition_file(path: &Path) -> Result<Partition> {
    let text = std::fs::read_to_string(path)?;
    parse_partition(&text)
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let mut lines = data_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header line `n <n> r <r>`"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "n" || fields[2] != "r" {
        return Err(parse_err(header_no, "header must be `n <n> r <r>`"));
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| parse_err(header_no, "invalid node count"))?;
    let r: usize = fields[3]
        .parse()
        .map_err(|_| parse_err(header_no, "invalid cluster count"))?;
    if n == 0 || r == 0 || r > n {
        return Err(parse_err(header_no, "need 1 <= r <= n"));
    }
    let mut assignment = vec![usize::MAX; n];
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(line_no, format!("expected `i c`, got `{line}`")));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(line_no, "invalid node index"))?;
        let c: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(line_no, "invalid cluster label"))?;
        if i == 0 || i > n {
            return Err(parse_err(line_no, format!("node index out of range 1..={n}")));
        }
        if c == 0 || c > r {
            return Err(parse_err(line_no, format!("cluster label out of range 1..={r}")));
        }
        if assignment[i - 1] != usize::MAX {
            return Err(parse_err(line_no, format!("duplicate assignment for node {i}")));
        }
        assignment[i - 1] = c - 1;
    }
    if let Some(missing) = assignment.iter().position(|&l| l == usize::MAX) {
        return Err(Error::Validation(format!(
            "node {} has no cluster assignment",
            missing + 1
        )));
    }
    let partition = Partition::from_labels(assignment)?;
    if partition.r() != r {
        return Err(Error::Validation(format!(
            "header declares r = {r} but {} labels are used",
            partition.r()
        )));
    }
    Ok(partition)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_sizes_match_reference_rows() {
        assert_eq!(cluster_sizes(100, 1.0), vec![20, 20, 20, 20, 20]);
        assert_eq!(cluster_sizes(100, 0.9), vec![24, 22, 20, 18, 16]);
        assert_eq!(cluster_sizes(100, 0.8), vec![30, 24, 19, 15, 12]);
        assert_eq!(cluster_sizes(100, 0.7), vec![36, 25, 18, 12, 9]);
        assert_eq!(cluster_sizes(100, 0.6), vec![43, 26, 16, 9, 6]);
        assert_eq!(cluster_sizes(100, 0.5), vec![52, 26, 13, 6, 3]);
    }

    #[test]
    fn cluster_sizes_are_non_increasing_and_sum_close() {
        for &(n, alpha) in &[(100usize, 0.55f64), (200, 0.8), (333, 0.95), (500, 0.7), (57, 1.0)] {
            let sizes = cluster_sizes(n, alpha);
            assert!(!sizes.is_empty());
            assert!(sizes.windows(2).all(|w| w[0] >= w[1]), "n={n} alpha={alpha}");
            let sum: usize = sizes.iter().sum();
            let r = sizes.len();
            assert!(
                (sum as i64 - n as i64).unsigned_abs() as usize <= r.div_ceil(2),
                "n={n} alpha={alpha} sum={sum}"
            );
        }
        for alpha in [1.0, 0.9, 0.8, 0.7, 0.6, 0.5] {
            let sum: usize = cluster_sizes(100, alpha).iter().sum();
            assert_eq!(sum, 100);
        }
    }

    #[test]
    fn zero_flip_gives_block_diagonal_cliques() {
        let cfg = GeneratorConfig { flip_fraction: 0.0, ..GeneratorConfig::new(30, 0.8, 7) };
        let (graph, truth) = generate_network(&cfg).unwrap();
        for ((i, j), bit) in graph.observations() {
            assert_eq!(bit, truth.same_cluster(i, j));
        }
    }

    #[test]
    fn flip_count_is_exact() {
        let cfg = GeneratorConfig::new(100, 1.0, 3);
        let (graph, truth) = generate_network(&cfg).unwrap();
        let disagreements = graph
            .observations()
            .filter(|&((i, j), bit)| bit != truth.same_cluster(i, j))
            .count();
        // 0.05 * 4950 = 247.5, rounded away from zero
        assert_eq!(disagreements, 248);
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = GeneratorConfig::new(60, 0.7, 99);
        let a = generate_network(&cfg).unwrap();
        let b = generate_network(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mask_sampling_counts_are_exact() {
        let full = sample_mask(100, 1.0, 1).unwrap();
        assert_eq!(full.observed_pair_count(), 4950);
        assert!(full.is_full());
        let partial = sample_mask(100, 0.9, 1).unwrap();
        assert_eq!(partial.observed_pair_count(), 4455);
    }

    #[test]
    fn pair_decoding_is_the_enumeration_inverse() {
        let n = 9;
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                assert_eq!(decode_pair(n, k), (i, j));
                k += 1;
            }
        }
    }

    #[test]
    fn dense_round_trip() {
        let edges: HashSet<(usize, usize)> = [(0, 1)].into_iter().collect();
        let g = ObservedGraph::from_edges(2, &edges);
        let (d, mask) = g.to_dense();
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(0, 0), 1.0);
        let back = ObservedGraph::from_dense(&d, &mask).unwrap();
        assert_eq!(back, g);

        // unobserved pair: dense placeholder is zero, mask is diagonal-only
        let diag = ObservationMask::diagonal_only(2);
        let g2 = g.restrict(&diag).unwrap();
        let (d2, m2) = g2.to_dense();
        assert_eq!(d2.get(0, 1), 0.0);
        assert_eq!(d2.get(1, 1), 1.0);
        assert_eq!(m2.observed_pair_count(), 0);
        assert_eq!(ObservedGraph::from_dense(&d2, &m2).unwrap(), g2);
    }

    #[test]
    fn graph_file_round_trip() {
        let cfg = GeneratorConfig::new(25, 0.8, 11);
        let (graph, _) = generate_network(&cfg).unwrap();
        let mask = sample_mask(graph.n(), 0.7, 5).unwrap();
        let graph = graph.restrict(&mask).unwrap();
        let dir = std::env::temp_dir().join("blockrec_netgen_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("graph.txt");
        write_graph_file(&path, &graph).unwrap();
        let back = read_graph_file(&path).unwrap();
        assert_eq!(back, graph);
    }

    #[test]
    fn empty_edge_section_is_valid() {
        let g = parse_graph("n 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.mask().observed_pair_count(), 0);
        assert_eq!(g.edge(0, 1), None);
        assert_eq!(g.edge(2, 2), Some(true));
    }

    #[test]
    fn graph_parse_errors_carry_line_numbers() {
        let dup = parse_graph("n 3\n1 2 1\n2 1 0\n");
        match dup {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_graph("n 3\n1 5 1\n").is_err());
        assert!(parse_graph("n 3\n1 2 7\n").is_err());
        assert!(parse_graph("nodes 3\n").is_err());
        // comments and blank lines are skipped
        let ok = parse_graph("# generated\n\nn 2\n# edge list\n1 2 1\n").unwrap();
        assert_eq!(ok.observed_edge_count(), 1);
    }

    #[test]
    fn partition_file_round_trip_and_errors() {
        let p = Partition::contiguous_blocks(&[3, 2]);
        let dir = std::env::temp_dir().join("blockrec_netgen_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("partition.txt");
        write_partition_file(&path, &p).unwrap();
        assert_eq!(read_partition_file(&path).unwrap(), p);

        assert!(parse_partition("n 2 r 1\n1 1\n").is_err()); // node 2 missing
        assert!(parse_partition("n 2 r 2\n1 1\n2 1\n").is_err()); // label 2 unused
        assert!(parse_partition("n 2 r 1\n1 1\n2 1\n1 1\n").is_err()); // duplicate
    }

    #[test]
    fn restrict_requires_subset_mask() {
        let g = parse_graph("n 3\n1 2 1\n").unwrap();
        let bigger = ObservationMask::from_pairs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(g.restrict(&bigger).is_err());
    }
}
