//! Shared test oracles, all independent of the library's computation
//! paths: a textbook Jacobi eigensolver, a golden-section scalar
//! minimizer, brute-force partition metrics, and small instance builders.

#![allow(dead_code)]

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use blockrec::mat::DenseSymMatrix;
use blockrec::netgen::{ObservedGraph, Partition};

/// Full eigendecomposition by cyclic Jacobi rotations; returns
/// (eigenvalues descending, eigenvector columns).
pub fn jacobi_eig(m: &DenseSymMatrix) -> (Vec<f64>, Array2<f64>) {
    let n = m.n();
    let mut a = m.as_array().clone();
    let mut v = Array2::eye(n);
    let scale = a.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1e-300);
    for _sweep in 0..200 {
        let off: f64 = {
            let mut acc = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    acc += a[(p, q)] * a[(p, q)];
                }
            }
            acc.sqrt()
        };
        if off <= 1e-15 * scale * n as f64 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    (values, vectors)
}

/// PSD projection of `q - shift*I` computed entirely through the Jacobi
/// oracle.
pub fn oracle_psd_project(q: &DenseSymMatrix, shift: f64) -> DenseSymMatrix {
    let n = q.n();
    let (values, vectors) = jacobi_eig(q);
    DenseSymMatrix::from_fn(n, |i, j| {
        let mut acc = 0.0;
        for (k, &lam) in values.iter().enumerate() {
            let coeff = (lam - shift).max(0.0);
            if coeff > 0.0 {
                acc += coeff * vectors[(i, k)] * vectors[(j, k)];
            }
        }
        acc
    })
}

/// Golden-section minimizer for a unimodal function on [a, b].
pub fn golden_section_minimize(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Jaccard index by brute-force enumeration of node pairs.
pub fn oracle_jaccard(c1: &Partition, c2: &Partition) -> f64 {
    let n = c1.n();
    let (mut a, mut b, mut c) = (0u64, 0u64, 0u64);
    for i in 0..n {
        for j in (i + 1)..n {
            let s1 = c1.same_cluster(i, j);
            let s2 = c2.same_cluster(i, j);
            match (s1, s2) {
                (true, true) => a += 1,
                (true, false) => b += 1,
                (false, true) => c += 1,
                (false, false) => {}
            }
        }
    }
    if a + b + c == 0 {
        1.0
    } else {
        a as f64 / (a + b + c) as f64
    }
}

/// NMI with Strehl-Ghosh normalization, recomputed from scratch.
pub fn oracle_nmi_sg(c1: &Partition, c2: &Partition) -> f64 {
    let n = c1.n() as f64;
    let cl1 = c1.clusters();
    let cl2 = c2.clusters();
    let h = |cl: &Vec<Vec<usize>>| -> f64 {
        -cl.iter()
            .map(|c| {
                let p = c.len() as f64 / n;
                p * p.log2()
            })
            .sum::<f64>()
    };
    let h1 = h(&cl1);
    let h2 = h(&cl2);
    if h1 == 0.0 || h2 == 0.0 {
        let same = cl1.len() == cl2.len() && c1.labels() == c2.labels();
        return if same { 1.0 } else { 0.0 };
    }
    let mut mi = 0.0;
    for ci in &cl1 {
        for cj in &cl2 {
            let inter = ci.iter().filter(|x| cj.contains(x)).count() as f64;
            if inter > 0.0 {
                let pij = inter / n;
                let pi = ci.len() as f64 / n;
                let qj = cj.len() as f64 / n;
                mi += pij * (pij / (pi * qj)).log2();
            }
        }
    }
    mi / (h1 * h2).sqrt()
}

/// Uniformly random partition with labels in 0..max_r (compacted).
pub fn random_partition(rng: &mut ChaCha12Rng, n: usize, max_r: usize) -> Partition {
    loop {
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..max_r)).collect();
        if let Ok(p) = Partition::from_arbitrary_labels(&labels) {
            return p;
        }
    }
}

pub fn random_symmetric(rng: &mut ChaCha12Rng, n: usize, scale: f64) -> DenseSymMatrix {
    DenseSymMatrix::from_fn(n, |_, _| rng.gen_range(-scale..scale))
}

/// A planted two-block instance: intra-cluster cliques, `flips` random
/// pair flips, all pairs observed.
pub fn two_block_instance(sizes: [usize; 2], flips: usize, seed: u64) -> (ObservedGraph, Partition) {
    let truth = Partition::contiguous_blocks(&sizes);
    let n = truth.n();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    // uniform flip set without replacement
    for k in 0..flips.min(pairs.len()) {
        let pick = rng.gen_range(k..pairs.len());
        pairs.swap(k, pick);
    }
    let flipped: std::collections::HashSet<(usize, usize)> =
        pairs[..flips.min(pairs.len())].iter().copied().collect();
    let edges: std::collections::HashSet<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| truth.same_cluster(i, j) != flipped.contains(&(i, j)))
        .collect();
    (ObservedGraph::from_edges(n, &edges), truth)
}

/// Observed disagreement count of a partition against a graph: observed
/// off-diagonal pairs whose edge state contradicts the partition.
pub fn observed_disagreements(graph: &ObservedGraph, p: &Partition) -> usize {
    graph
        .observations()
        .filter(|&((i, j), bit)| bit != p.same_cluster(i, j))
        .count()
}

/// Minimum observed disagreement count over all two-cluster partitions
/// (node 0 pinned to the first cluster).
pub fn brute_force_two_cluster_min(graph: &ObservedGraph) -> usize {
    let n = graph.n();
    assert!(n <= 20, "exhaustive enumeration only feasible for small n");
    let mut best = usize::MAX;
    for bits in 1u32..(1 << (n - 1)) {
        let labels: Vec<usize> = (0..n)
            .map(|v| if v == 0 { 0 } else { ((bits >> (v - 1)) & 1) as usize })
            .collect();
        let p = Partition::from_arbitrary_labels(&labels).expect("two non-empty clusters");
        best = best.min(observed_disagreements(graph, &p));
    }
    best
}
