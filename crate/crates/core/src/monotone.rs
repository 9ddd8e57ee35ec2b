//! Arrows of the simplex category: weakly increasing maps `[m] -> [n]`.
//!
//! Degeneracy words of normal simplices are translated to and from
//! surjective arrows here, and the epi-mono factorization is what makes
//! Eilenberg-Zilber normal forms computable.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A weakly increasing map `[source_dim] -> [target_dim]`, stored by its
/// values on `0..=source_dim`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonotoneMap {
    values: Vec<usize>,
    target_dim: usize,
}

impl MonotoneMap {
    pub fn new(values: Vec<usize>, target_dim: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Malformed(alloc::string::String::from(
                "a simplex-category arrow needs at least one value",
            )));
        }
        let increasing = values.windows(2).all(|w| w[0] <= w[1]);
        if !increasing || *values.last().unwrap() > target_dim {
            return Err(Error::NotMonotone);
        }
        Ok(MonotoneMap { values, target_dim })
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap {
            values: (0..=n).collect(),
            target_dim: n,
        }
    }

    /// The coface `[n-1] -> [n]` that skips `i`; restriction along it is
    /// the face operator `d_i`.
    pub fn coface(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n);
        MonotoneMap {
            values: (0..n).map(|v| if v < i { v } else { v + 1 }).collect(),
            target_dim: n,
        }
    }

    /// The codegeneracy `[n+1] -> [n]` that hits `j` twice; restriction
    /// along it is the degeneracy operator `s_j`.
    pub fn codegeneracy(n: usize, j: usize) -> Self {
        assert!(j <= n);
        MonotoneMap {
            values: (0..=n + 1).map(|v| if v <= j { v } else { v - 1 }).collect(),
            target_dim: n,
        }
    }

    pub fn source_dim(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, v: usize) -> usize {
        self.values[v]
    }

    pub fn is_identity(&self) -> bool {
        self.source_dim() == self.target_dim && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        if self.values[0] != 0 || *self.values.last().unwrap() != self.target_dim {
            return false;
        }
        self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &MonotoneMap) -> Result<MonotoneMap> {
        if other.target_dim != self.source_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim(),
                found: other.target_dim,
            });
        }
        Ok(MonotoneMap {
            values: other.values.iter().map(|&v| self.values[v]).collect(),
            target_dim: self.target_dim,
        })
    }

    /// Unique factorization into a surjection followed by an injection.
    pub fn epi_mono_factor(&self) -> (MonotoneMap, MonotoneMap) {
        let mut image: Vec<usize> = self.values.clone();
        image.dedup();
        let epi_values = self
            .values
            .iter()
            .map(|&v| image.binary_search(&v).unwrap())
            .collect();
        let epi = MonotoneMap {
            values: epi_values,
            target_dim: image.len() - 1,
        };
        let mono = MonotoneMap {
            values: image,
            target_dim: self.target_dim,
        };
        (epi, mono)
    }

    /// Values of the target missed by this map, in decreasing order.
    pub fn missing_values(&self) -> Vec<usize> {
        let mut missing = Vec::new();
        let mut it = self.values.iter().peekable();
        for v in 0..=self.target_dim {
            while it.peek().is_some_and(|&&x| x < v) {
                it.next();
            }
            if it.peek() != Some(&&v) {
                missing.push(v);
            }
        }
        missing.reverse();
        missing
    }
}

/// The surjection `[base + word.len()] -> [base]` named by a strictly
/// decreasing degeneracy word (indices of `s_j`, applied right to left).
pub fn word_to_epi(word: &[usize], base_dim: usize) -> MonotoneMap {
    debug_assert!(word.windows(2).all(|w| w[0] > w[1]));
    let source_dim = base_dim + word.len();
    let values = (0..=source_dim)
        .map(|t| {
            let mut v = t;
            for &j in word {
                if v > j {
                    v -= 1;
                }
            }
            v
        })
        .collect();
    MonotoneMap {
        values,
        target_dim: base_dim,
    }
}

/// Inverse of [`word_to_epi`]: the strictly decreasing degeneracy word of
/// a surjective arrow.
pub fn word_from_epi(epi: &MonotoneMap) -> Vec<usize> {
    debug_assert!(epi.is_surjective());
    let mut values = epi.values.clone();
    let mut word = Vec::with_capacity(epi.source_dim() - epi.target_dim);
    while values.len() > epi.target_dim + 1 {
        let j = (0..values.len() - 1)
            .rev()
            .find(|&t| values[t] == values[t + 1])
            .expect("surjection with extra length has a duplicate");
        word.push(j);
        values.remove(j + 1);
    }
    word
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn factor_identity() {
        let f = MonotoneMap::identity(2);
        let (epi, mono) = f.epi_mono_factor();
        assert!(epi.is_identity());
        assert!(mono.is_identity());
    }

    #[test]
    fn factor_already_surjective() {
        let f = MonotoneMap::new(vec![0, 0, 1], 1).unwrap();
        let (epi, mono) = f.epi_mono_factor();
        assert_eq!(epi.values(), &[0, 0, 1]);
        assert!(mono.is_identity());
    }

    #[test]
    fn factor_already_injective() {
        let f = MonotoneMap::new(vec![0, 2], 2).unwrap();
        let (epi, mono) = f.epi_mono_factor();
        assert!(epi.is_identity());
        assert_eq!(mono.values(), &[0, 2]);
    }

    #[test]
    fn non_monotone_rejected() {
        assert_eq!(MonotoneMap::new(vec![1, 0], 1), Err(Error::NotMonotone));
        assert_eq!(MonotoneMap::new(vec![0, 3], 2), Err(Error::NotMonotone));
    }

    #[test]
    fn word_epi_roundtrip() {
        for (word, base) in [
            (vec![], 2usize),
            (vec![0], 0),
            (vec![1, 0], 0),
            (vec![2, 0], 1),
            (vec![3, 1], 2),
        ] {
            let epi = word_to_epi(&word, base);
            assert!(epi.is_surjective());
            assert_eq!(word_from_epi(&epi), word);
        }
    }

    #[test]
    fn missing_values_decreasing() {
        let f = MonotoneMap::new(vec![1, 3], 4).unwrap();
        assert_eq!(f.missing_values(), vec![4, 2, 0]);
    }
}
