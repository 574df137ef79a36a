//! Block-orthogonality operator bound: for a block-defined map f with
//! per-block bound C whose images of distinct blocks are orthogonal
//! outside r injective index maps, the operator norm obeys
//! ||f|| <= sqrt(r) C. This is the one deliberately float-backed check
//! in the crate: operator norms are computed as largest singular values
//! via a Jacobi eigensolver at tolerance 1e-9.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockBoundError {
    #[error("index map {0} is not injective on the instance")]
    NotInjective(usize),
    #[error("blocks {0} and {1} have non-orthogonal images but no index map relates them")]
    HypothesisViolated(usize, usize),
    #[error("instance is empty")]
    Empty,
}

/// A finite block instance: block i maps into the ambient space by the
/// columns of `maps[i]` (ambient_dim x block_dim, column-major per block
/// basis vector).
#[derive(Debug, Clone)]
pub struct BlockInstance {
    pub ambient_dim: usize,
    pub maps: Vec<Vec<Vec<f64>>>, // per block: list of image columns
    /// Index maps m_1..m_r given as permutations/injections on block
    /// indices; block j may have image non-orthogonal to block i only if
    /// j is in { m(i) } for some m.
    pub index_maps: Vec<Vec<usize>>,
}

const TOL: f64 = 1e-9;

impl BlockInstance {
    pub fn block_count(&self) -> usize {
        self.maps.len()
    }

    fn total_cols(&self) -> usize {
        self.maps.iter().map(|m| m.len()).sum()
    }

    /// Verifies the hypotheses: injectivity of each index map and the
    /// block-orthogonality pattern, then checks ||f|| <= sqrt(r) C where
    /// C is the largest per-block operator norm.
    pub fn check(&self) -> Result<BlockBoundReport, BlockBoundError> {
        let n = self.block_count();
        if n == 0 || self.ambient_dim == 0 {
            return Err(BlockBoundError::Empty);
        }
        for (mi, m) in self.index_maps.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for &t in m {
                if !seen.insert(t) {
                    return Err(BlockBoundError::NotInjective(mi));
                }
            }
        }
        // Orthogonality pattern.
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let allowed = self.index_maps.iter().any(|m| m.get(i) == Some(&j));
                if allowed {
                    continue;
                }
                let mut dot_max = 0.0f64;
                for a in &self.maps[i] {
                    for b in &self.maps[j] {
                        let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                        dot_max = dot_max.max(d.abs());
                    }
                }
                if dot_max > TOL {
                    return Err(BlockBoundError::HypothesisViolated(i, j));
                }
            }
        }

        let per_block_c = self
            .maps
            .iter()
            .map(|cols| operator_norm(self.ambient_dim, cols))
            .fold(0.0f64, f64::max);
        let full_cols: Vec<Vec<f64>> = self.maps.iter().flatten().cloned().collect();
        let full_norm = operator_norm(self.ambient_dim, &full_cols);
        let r = self.index_maps.len() as f64;
        let bound = r.sqrt() * per_block_c;
        Ok(BlockBoundReport {
            per_block_c,
            operator_norm: full_norm,
            bound,
            holds: full_norm <= bound + TOL,
            blocks: n,
            columns: self.total_cols(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct BlockBoundReport {
    pub per_block_c: f64,
    pub operator_norm: f64,
    pub bound: f64,
    pub holds: bool,
    pub blocks: usize,
    pub columns: usize,
}

/// Largest singular value of the map sending the standard basis to the
/// given columns: sqrt of the largest eigenvalue of A^T A, by cyclic
/// Jacobi on the symmetric Gram matrix.
pub fn operator_norm(ambient_dim: usize, cols: &[Vec<f64>]) -> f64 {
    let k = cols.len();
    if k == 0 {
        return 0.0;
    }
    assert!(cols.iter().all(|c| c.len() == ambient_dim));
    let mut gram = vec![vec![0.0f64; k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
        }
    }
    largest_eigenvalue_symmetric(&mut gram).max(0.0).sqrt()
}

/// Cyclic Jacobi eigenvalue iteration for small symmetric matrices.
pub fn largest_eigenvalue_symmetric(a: &mut [Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() < 1e-13 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-15 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::NEG_INFINITY, f64::max)
}

/// Deterministic random instance generator for the acceptance suite:
/// `blocks` blocks of dimension `block_dim`, image blocks shared between
/// i and its mirror c - i (an involutive index map), so r = 2 with
/// m_1 = id and m_2 the mirror.
pub fn random_instance(
    sampler: &mut crate::scalar::RatSampler,
    blocks: usize,
    block_dim: usize,
) -> BlockInstance {
    let c = blocks - 1; // mirror i -> c - i
    let targets = blocks.div_ceil(2);
    let ambient_dim = targets * block_dim;
    let mut maps = Vec::with_capacity(blocks);
    for i in 0..blocks {
        let t = std::cmp::min(i, c - i);
        let mut cols = Vec::with_capacity(block_dim);
        for _ in 0..block_dim {
            let mut col = vec![0.0f64; ambient_dim];
            for entry in col.iter_mut().skip(t * block_dim).take(block_dim) {
                *entry = sampler.next_f64();
            }
            cols.push(col);
        }
        maps.push(cols);
    }
    let id: Vec<usize> = (0..blocks).collect();
    let mirror: Vec<usize> = (0..blocks).map(|i| c - i).collect();
    BlockInstance {
        ambient_dim,
        maps,
        index_maps: vec![id, mirror],
    }
}
