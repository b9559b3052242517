//! Dense symmetric matrices and observation masks.
//!
//! Everything the solvers touch lives in the space of real symmetric
//! n×n matrices. [`DenseSymMatrix`] enforces symmetry on construction
//! and every mutation; [`ObservationMask`] is the symmetric index set Ω
//! of observed entries (always containing the diagonal) that drives the
//! masked projections π_Ω and π_{Ω^c}.

use ndarray::Array2;

use crate::{Error, Result};

/// Asymmetry beyond this (relative to nothing, it is absolute) logs a warning
/// when constructing from raw data.
const ASYMMETRY_WARN: f64 = 1e-10;

/// An n×n real symmetric matrix, stored dense.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    data: Array2<f64>,
}

impl DenseSymMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix order must be at least 1");
        Self {
            data: Array2::zeros((n, n)),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[(i, i)] = 1.0;
        }
        m
    }

    /// Builds from a square array, symmetrizing as (M + Mᵀ)/2.
    ///
    /// Asymmetry above 1e-10 in any entry is tolerated but logged, so
    /// that drift introduced by file round-trips is visible.
    pub fn from_array(a: Array2<f64>) -> Result<Self> {
        let (rows, cols) = a.dim();
        if rows != cols {
            return Err(Error::InvalidArgument(format!(
                "matrix must be square, got {rows}x{cols}"
            )));
        }
        if rows == 0 {
            return Err(Error::InvalidArgument("matrix order must be at least 1".into()));
        }
        let mut worst = 0.0f64;
        let mut data = a;
        for i in 0..rows {
            for j in (i + 1)..rows {
                let d = (data[(i, j)] - data[(j, i)]).abs();
                worst = worst.max(d);
                let avg = 0.5 * (data[(i, j)] + data[(j, i)]);
                data[(i, j)] = avg;
                data[(j, i)] = avg;
            }
        }
        if worst > ASYMMETRY_WARN {
            log::warn!("symmetrized input with asymmetry {worst:.3e}");
        }
        Ok(Self { data })
    }

    /// Wraps an array the caller guarantees is already symmetric.
    pub(crate) fn from_symmetric_unchecked(data: Array2<f64>) -> Self {
        debug_assert_eq!(data.nrows(), data.ncols());
        debug_assert!(
            data.nrows() == 0
                || (0..data.nrows())
                    .all(|i| (0..i).all(|j| data[(i, j)] == data[(j, i)])),
            "internal constructor given an asymmetric array"
        );
        Self { data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[(i, i)] = f(i, i);
            for j in (i + 1)..n {
                let v = f(i, j);
                m.data[(i, j)] = v;
                m.data[(j, i)] = v;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    /// Sets entry (i, j) and its mirror (j, i).
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[(i, j)] = v;
        self.data[(j, i)] = v;
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.data[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Max absolute entry.
    pub fn inf_norm(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Keeps entries indexed by Ω, zeroes the rest.
    pub fn project_mask(&self, mask: &ObservationMask) -> Result<Self> {
        self.check_dim(mask)?;
        let n = self.n();
        let mut out = Array2::zeros((n, n));
        for i in 0..n {
            out[(i, i)] = self.data[(i, i)];
        }
        for &(i, j) in mask.off_diagonal_pairs() {
            out[(i, j)] = self.data[(i, j)];
            out[(j, i)] = self.data[(j, i)];
        }
        Ok(Self::from_symmetric_unchecked(out))
    }

    /// Keeps entries outside Ω, zeroes the rest. Complements
    /// [`project_mask`](Self::project_mask) exactly:
    /// `project_mask(M) + project_mask_complement(M) == M` entrywise.
    pub fn project_mask_complement(&self, mask: &ObservationMask) -> Result<Self> {
        self.check_dim(mask)?;
        let n = self.n();
        let mut out = self.data.clone();
        for i in 0..n {
            out[(i, i)] = 0.0;
        }
        for &(i, j) in mask.off_diagonal_pairs() {
            out[(i, j)] = 0.0;
            out[(j, i)] = 0.0;
        }
        Ok(Self::from_symmetric_unchecked(out))
    }

    fn check_dim(&self, mask: &ObservationMask) -> Result<()> {
        if self.n() != mask.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: mask.n(),
            });
        }
        Ok(())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_symmetric_unchecked(&self.data * c)
    }
}

impl std::ops::Add for &DenseSymMatrix {
    type Output = DenseSymMatrix;
    fn add(self, rhs: Self) -> DenseSymMatrix {
        assert_eq!(self.n(), rhs.n());
        DenseSymMatrix::from_symmetric_unchecked(&self.data + &rhs.data)
    }
}

impl std::ops::Sub for &DenseSymMatrix {
    type Output = DenseSymMatrix;
    fn sub(self, rhs: Self) -> DenseSymMatrix {
        assert_eq!(self.n(), rhs.n());
        DenseSymMatrix::from_symmetric_unchecked(&self.data - &rhs.data)
    }
}

/// The set Ω of observed indices: all diagonal entries plus a symmetric
/// set of off-diagonal pairs Ω̄, stored as unordered pairs (i < j).
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMask {
    n: usize,
    /// Sorted, deduplicated pairs with i < j.
    pairs: Vec<(usize, usize)>,
    /// Dense lookup over all n² index pairs; diagonal always true.
    lookup: Vec<bool>,
}

impl ObservationMask {
    /// Every pair observed.
    pub fn full(n: usize) -> Self {
        assert!(n >= 1);
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((i, j));
            }
        }
        Self::build(n, pairs)
    }

    /// Only the diagonal observed.
    pub fn diagonal_only(n: usize) -> Self {
        assert!(n >= 1);
        Self::build(n, Vec::new())
    }

    /// Builds from off-diagonal pairs (either orientation accepted).
    /// Duplicates (after normalization) and self-pairs are rejected.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("mask order must be at least 1".into()));
        }
        let mut normalized = Vec::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::InvalidArgument(format!(
                    "self-pair ({a}, {b}) not allowed in off-diagonal set"
                )));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "pair ({a}, {b}) out of range for n = {n}"
                )));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate pair in mask".into()));
        }
        Ok(Self::build(n, normalized))
    }

    fn build(n: usize, pairs: Vec<(usize, usize)>) -> Self {
        let mut lookup = vec![false; n * n];
        for i in 0..n {
            lookup[i * n + i] = true;
        }
        for &(i, j) in &pairs {
            lookup[i * n + j] = true;
            lookup[j * n + i] = true;
        }
        Self { n, pairs, lookup }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True iff (i, j) ∈ Ω. The diagonal is always observed.
    #[inline]
    pub fn observed(&self, i: usize, j: usize) -> bool {
        self.lookup[i * self.n + j]
    }

    /// The off-diagonal set Ω̄ as pairs with i < j, sorted.
    pub fn off_diagonal_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// |Ω̄|, the number of observed unordered off-diagonal pairs.
    pub fn observed_pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_full(&self) -> bool {
        self.pairs.len() == self.n * (self.n - 1) / 2
    }

    /// True iff every pair of `other` is observed here.
    pub fn contains(&self, other: &ObservationMask) -> bool {
        self.n == other.n && other.pairs.iter().all(|&(i, j)| self.observed(i, j))
    }
}
