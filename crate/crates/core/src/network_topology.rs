//! Network matrices: which cross links the IRS removes.
//!
//! Users are 0-based. `n(i, j)` refers to the link from transmitter `i` to
//! receiver `j`; a zero means the surface cancels that link.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest number of off-diagonal positions the eager enumerator accepts.
pub const MAX_ENUMERATION_BITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetworkMatrix {
    k: usize,
    bits: Vec<bool>,
}

/// Off-diagonal zeros of a network matrix, in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CancellationSet {
    pub pairs: Vec<(usize, usize)>,
}

impl CancellationSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// All `(i, j)` with `i != j` in row-major order.
pub fn off_diagonal_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

impl NetworkMatrix {
    pub fn full(k: usize) -> Self {
        Self { k, bits: vec![true; k * k] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self { k, bits: vec![false; k * k] };
        for i in 0..k {
            m.bits[i * k + i] = true;
        }
        m
    }

    pub fn from_bits(k: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != k * k {
            return Err(Error::Dimension(format!("{} bits for k = {k}", bits.len())));
        }
        if (0..k).any(|i| !bits[i * k + i]) {
            return Err(Error::Config("direct links (diagonal) must be 1".into()));
        }
        Ok(Self { k, bits })
    }

    /// Full matrix with the listed links removed.
    pub fn with_zeros(k: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::full(k);
        for &(i, j) in pairs {
            if i >= k || j >= k || i == j {
                return Err(Error::Config(format!("({i}, {j}) is not a cross link for k = {k}")));
            }
            m.bits[i * k + j] = false;
        }
        Ok(m)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.k + j]
    }

    pub fn zero_count(&self) -> usize {
        self.bits.iter().filter(|&&b| !b).count()
    }

    pub fn cancellation_set(&self) -> CancellationSet {
        CancellationSet {
            pairs: off_diagonal_pairs(self.k)
                .into_iter()
                .filter(|&(i, j)| !self.get(i, j))
                .collect(),
        }
    }

    /// Present cross links `(i, j)`, `i != j`, in row-major order.
    pub fn present_cross_links(&self) -> Vec<(usize, usize)> {
        off_diagonal_pairs(self.k)
            .into_iter()
            .filter(|&(i, j)| self.get(i, j))
            .collect()
    }

    /// Applies the user relabelling `perm` (old index → new index).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let k = self.k;
        let mut bits = vec![true; k * k];
        for i in 0..k {
            for j in 0..k {
                bits[perm[i] * k + perm[j]] = self.get(i, j);
            }
        }
        Self { k, bits }
    }
}

pub fn cancellation_set(n: &NetworkMatrix) -> CancellationSet {
    n.cancellation_set()
}

impl fmt::Display for NetworkMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.k {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.k {
                write!(f, "{}", if self.get(i, j) { '1' } else { '0' })?;
            }
        }
        Ok(())
    }
}

impl FromStr for NetworkMatrix {
    type Err = Error;

    /// K rows of `0`/`1` characters separated by newlines, `/` or `;`.
    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s
            .split(|c| c == '\n' || c == '/' || c == ';')
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .collect();
        let k = rows.len();
        let mut bits = Vec::with_capacity(k * k);
        for row in &rows {
            if row.chars().count() != k {
                return Err(Error::Config(format!("row {row:?} should have {k} entries")));
            }
            for ch in row.chars() {
                bits.push(match ch {
                    '1' => true,
                    '0' => false,
                    other => return Err(Error::Config(format!("unexpected character {other:?}"))),
                });
            }
        }
        Self::from_bits(k, bits)
    }
}

/// Lazily enumerates every network matrix with at most `min(q, K(K−1))`
/// zeros, ordered by zero count and then lexicographically by position.
pub fn enumerate_family(k: usize, q: usize) -> Result<impl Iterator<Item = NetworkMatrix>> {
    let pairs = off_diagonal_pairs(k);
    if pairs.len() > MAX_ENUMERATION_BITS {
        return Err(Error::SizeOverflow {
            what: "network family bits".into(),
            size: pairs.len(),
            budget: MAX_ENUMERATION_BITS,
        });
    }
    let top = q.min(pairs.len());
    Ok((0..=top).flat_map(move |z| {
        let pairs = pairs.clone();
        (0..pairs.len()).combinations(z).map(move |idx| {
            let zeros: Vec<(usize, usize)> = idx.iter().map(|&p| pairs[p]).collect();
            NetworkMatrix::with_zeros(k, &zeros).expect("pairs are off-diagonal")
        })
    }))
}

/// Number of zeros in a W-decomposable pattern.
pub fn w_pattern_zero_count(k: usize, w: usize) -> usize {
    w * (k - 1) + w * (k - w)
}

/// Pattern isolating users in `b`: nothing reaches a receiver in `b`, and no
/// transmitter in `b` reaches a receiver outside `b`.
pub fn w_pattern(k: usize, b: &[usize]) -> NetworkMatrix {
    let inside = |x: usize| b.contains(&x);
    let zeros: Vec<(usize, usize)> = off_diagonal_pairs(k)
        .into_iter()
        .filter(|&(i, j)| inside(j) || (inside(i) && !inside(j)))
        .collect();
    NetworkMatrix::with_zeros(k, &zeros).expect("pairs are off-diagonal")
}

fn isolates(n: &NetworkMatrix, b: &[usize]) -> bool {
    off_diagonal_pairs(n.k)
        .into_iter()
        .filter(|&(i, j)| b.contains(&j) || (b.contains(&i) && !b.contains(&j)))
        .all(|(i, j)| !n.get(i, j))
}

/// Largest `W` such that some user set of size `W` is isolated by `n`.
pub fn w_decomposition(n: &NetworkMatrix) -> usize {
    let k = n.k;
    (0u64..1 << k)
        .filter_map(|mask| {
            let b: Vec<usize> = (0..k).filter(|&u| mask >> u & 1 == 1).collect();
            isolates(n, &b).then_some(b.len())
        })
        .max()
        .unwrap_or(0)
}
