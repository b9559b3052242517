//! Evaluation of recovered structure.
//!
//! Two complementary views: block-residual statistics compare a low-rank
//! iterate L* against the block-diagonal-of-ones matrix encoding the
//! ground truth, and partition similarity measures (Jaccard, NMI with
//! Strehl-Ghosh normalization, PERC) compare an extracted clustering
//! against the true one.

use ndarray::Array2;

use crate::mat::DenseSymMatrix;
use crate::netgen::Partition;
use crate::{Error, Result};

/// Per-cluster diagonal-block error threshold for calling a cluster
/// recovered.
pub const TAU1: f64 = 0.4;
/// Matching off-block error threshold.
pub const TAU2: f64 = 0.1;
/// Maximum diagonal deviation |L_ii - 1| tolerated during extraction.
pub const TAU_D: f64 = 0.05;
/// Entry threshold for linking two nodes during extraction.
pub const TAU_BAR: f64 = 0.55;

/// Residual statistics of a low-rank iterate against the ground-truth
/// block structure. All values lie in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct BlockStats {
    pub s_max: f64,
    pub s_min: f64,
    pub s_av: f64,
    pub s_off: f64,
    /// Fraction of clusters recovered.
    pub s_f: f64,
    /// Per-cluster (E_l, E_l^c) pairs.
    pub per_cluster: Vec<(f64, f64)>,
}

/// Similarity of two partitions, each measure in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityScores {
    pub jaccard: f64,
    pub nmi_sg: f64,
    pub perc: f64,
}

/// The block diagonal matrix of ones encoding a partition.
pub fn bdo_matrix(partition: &Partition) -> DenseSymMatrix {
    DenseSymMatrix::from_fn(partition.n(), |i, j| {
        if partition.same_cluster(i, j) {
            1.0
        } else {
            0.0
        }
    })
}

/// Frobenius residuals per cluster block: entry (a, b) is the distance of
/// L's (a, b) block from its target (all ones on the diagonal blocks,
/// zero off). Non-contiguous partitions are permuted to block order
/// first.
pub fn block_residuals(l: &DenseSymMatrix, truth: &Partition) -> Result<Array2<f64>> {
    if l.n() != truth.n() {
        return Err(Error::DimensionMismatch { expected: truth.n(), got: l.n() });
    }
    let clusters = truth.clusters();
    let r = clusters.len();
    let mut out = Array2::zeros((r, r));
    for a in 0..r {
        for b in a..r {
            let target = if a == b { 1.0 } else { 0.0 };
            let mut acc = 0.0;
            for &i in &clusters[a] {
                for &j in &clusters[b] {
                    let d = target - l.get(i, j);
                    acc += d * d;
                }
            }
            let v = acc.sqrt();
            out[(a, b)] = v;
            out[(b, a)] = v;
        }
    }
    Ok(out)
}

/// Summarizes a block-residual matrix into the five recovery statistics.
///
/// E_l = R_ll / n_l; E_l^c = sqrt(sum_{t != l} R_lt^2) / sqrt(sum_{t != l} n_l n_t);
/// cluster l counts as recovered when E_l < tau1 and E_l^c < tau2. With a
/// single cluster the off-block sums are empty and E_l^c and s_off are 0.
pub fn recovery_stats(residuals: &Array2<f64>, sizes: &[usize], tau1: f64, tau2: f64) -> Result<BlockStats> {
    let r = sizes.len();
    if residuals.nrows() != r || residuals.ncols() != r {
        return Err(Error::DimensionMismatch { expected: r, got: residuals.nrows() });
    }
    if r == 0 {
        return Err(Error::InvalidArgument("need at least one cluster".into()));
    }
    let mut per_cluster = Vec::with_capacity(r);
    let mut recovered = 0usize;
    for l in 0..r {
        let e_l = residuals[(l, l)] / sizes[l] as f64;
        let e_lc = if r == 1 {
            0.0
        } else {
            let num: f64 = (0..r)
                .filter(|&t| t != l)
                .map(|t| residuals[(l, t)].powi(2))
                .sum();
            let den: f64 = (0..r)
                .filter(|&t| t != l)
                .map(|t| (sizes[l] * sizes[t]) as f64)
                .sum();
            (num / den).sqrt()
        };
        if e_l < tau1 && e_lc < tau2 {
            recovered += 1;
        }
        per_cluster.push((e_l, e_lc));
    }
    let s_off = if r == 1 {
        0.0
    } else {
        let mut num = 0.0;
        let mut den = 0.0;
        for a in 0..r {
            for b in (a + 1)..r {
                num += residuals[(a, b)].powi(2);
                den += (sizes[a] * sizes[b]) as f64;
            }
        }
        (num / den).sqrt()
    };
    let diag_errors: Vec<f64> = per_cluster.iter().map(|&(e, _)| e).collect();
    Ok(BlockStats {
        s_max: diag_errors.iter().copied().fold(f64::MIN, f64::max),
        s_min: diag_errors.iter().copied().fold(f64::MAX, f64::min),
        s_av: diag_errors.iter().sum::<f64>() / r as f64,
        s_off,
        s_f: recovered as f64 / r as f64,
        per_cluster,
    })
}

/// Convenience wrapper: residuals of `l` against `truth`, summarized with
/// the default thresholds.
pub fn stats_against_truth(l: &DenseSymMatrix, truth: &Partition) -> Result<BlockStats> {
    let residuals = block_residuals(l, truth)?;
    recovery_stats(&residuals, &truth.cluster_sizes(), TAU1, TAU2)
}

/// Result of reading a clustering off a solved low-rank component.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtractOutcome {
    Clusters(Partition),
    /// Some diagonal entry strayed too far from 1 for the matrix to be
    /// interpreted as a cluster indicator.
    DiagonalFailure { node: usize, value: f64 },
}

impl ExtractOutcome {
    pub fn clusters(&self) -> Option<&Partition> {
        match self {
            ExtractOutcome::Clusters(p) => Some(p),
            ExtractOutcome::DiagonalFailure { .. } => None,
        }
    }
}

/// Thresholds L into a 0/1 link matrix and reads clusters off its
/// connected components. Fails (as a value, not an error) when any
/// diagonal entry is further than `tau_d` from 1.
pub fn extract_clusters(l: &DenseSymMatrix, tau_d: f64, tau_bar: f64) -> ExtractOutcome {
    let n = l.n();
    for i in 0..n {
        let v = l.get(i, i);
        if (v - 1.0).abs() > tau_d {
            return ExtractOutcome::DiagonalFailure { node: i, value: v };
        }
    }
    // union-find over pairs with L_ij >= tau_bar
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if l.get(i, j) >= tau_bar {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    ExtractOutcome::Clusters(
        Partition::from_arbitrary_labels(&roots).expect("components cover all nodes"),
    )
}

fn check_same_n(a: &Partition, b: &Partition) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: b.n() });
    }
    Ok(())
}

/// Jaccard index a / (a + b + c) over co-clustered node pairs; defined as
/// 1 when both partitions are all singletons (no co-clustered pairs at
/// all).
pub fn jaccard(c1: &Partition, c2: &Partition) -> Result<f64> {
    check_same_n(c1, c2)?;
    // contingency counts: pairs co-clustered in both = sum over cells of C(m_ij, 2)
    let (r1, r2) = (c1.r(), c2.r());
    let mut m = vec![0usize; r1 * r2];
    for node in 0..c1.n() {
        m[c1.label(node) * r2 + c2.label(node)] += 1;
    }
    let pairs2 = |x: usize| (x * (x - 1) / 2) as f64;
    let both: f64 = m.iter().map(|&x| if x > 1 { pairs2(x) } else { 0.0 }).sum();
    let in1: f64 = c1.cluster_sizes().iter().map(|&x| pairs2(x)).sum();
    let in2: f64 = c2.cluster_sizes().iter().map(|&x| pairs2(x)).sum();
    let a = both;
    let b = in1 - both;
    let c = in2 - both;
    if a + b + c == 0.0 {
        return Ok(1.0);
    }
    Ok(a / (a + b + c))
}

/// Mutual information between the partitions normalized by the geometric
/// mean of their entropies (base-2 logs). Degenerate single-cluster
/// partitions have zero entropy; then the score is 1 if the partitions
/// are identical and 0 otherwise.
pub fn nmi_sg(c1: &Partition, c2: &Partition) -> Result<f64> {
    check_same_n(c1, c2)?;
    let n = c1.n() as f64;
    let (r1, r2) = (c1.r(), c2.r());
    let mut m = vec![0usize; r1 * r2];
    for node in 0..c1.n() {
        m[c1.label(node) * r2 + c2.label(node)] += 1;
    }
    let sizes1 = c1.cluster_sizes();
    let sizes2 = c2.cluster_sizes();
    let entropy = |sizes: &[usize]| -> f64 {
        -sizes
            .iter()
            .filter(|&&s| s > 0)
            .map(|&s| {
                let p = s as f64 / n;
                p * p.log2()
            })
            .sum::<f64>()
    };
    let h1 = entropy(&sizes1);
    let h2 = entropy(&sizes2);
    if h1 == 0.0 || h2 == 0.0 {
        return Ok(if c1.labels() == c2.labels() && c1.r() == c2.r() { 1.0 } else { 0.0 });
    }
    let mut mi = 0.0;
    for i in 0..r1 {
        for j in 0..r2 {
            let mij = m[i * r2 + j] as f64;
            if mij > 0.0 {
                mi += mij / n * ((mij * n) / ((sizes1[i] * sizes2[j]) as f64)).log2();
            }
        }
    }
    Ok(mi / (h1 * h2).sqrt())
}

/// Portion of exactly recovered clusters: the fraction of ground-truth
/// clusters that appear in `found` as identical node sets. Asymmetric;
/// the first argument is the truth.
pub fn perc(truth: &Partition, found: &Partition) -> Result<f64> {
    check_same_n(truth, found)?;
    let truth_clusters = truth.clusters();
    let found_clusters: std::collections::HashSet<Vec<usize>> =
        found.clusters().into_iter().collect();
    let hit = truth_clusters
        .iter()
        .filter(|c| found_clusters.contains(*c))
        .count();
    Ok(hit as f64 / truth.r() as f64)
}

/// All three measures at once.
pub fn similarity(truth: &Partition, found: &Partition) -> Result<SimilarityScores> {
    Ok(SimilarityScores {
        jaccard: jaccard(truth, found)?,
        nmi_sg: nmi_sg(truth, found)?,
        perc: perc(truth, found)?,
    })
}
