//! Tokenization and feature hashing shared by the linker and the classifiers.

use std::hash::Hasher;

use fnv::FnvHasher;

/// Lowercased maximal runs of alphanumeric characters.
pub fn tokens(s: &str) -> Vec<String> {
    s.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// FNV-1a over the namespace byte followed by the feature text, reduced mod `dimension`.
pub fn hash_feature(namespace: u8, feature: &str, dimension: usize) -> usize {
    let mut h = FnvHasher::default();
    h.write(&[namespace]);
    h.write(feature.as_bytes());
    (h.finish() % dimension as u64) as usize
}

/// Sparse vector with strictly increasing indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVector {
    /// Builds from unordered (index, value) pairs, summing duplicates.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> Self {
        pairs.sort_by_key(|&(i, _)| i);
        let mut v = SparseVector::default();
        for (i, x) in pairs {
            if v.indices.last() == Some(&i) {
                *v.values.last_mut().expect("parallel vectors") += x;
            } else {
                v.indices.push(i);
                v.values.push(x);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn l2_normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.values.iter_mut().for_each(|x| *x /= n);
        }
        self
    }

    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.indices
            .iter()
            .zip(&self.values)
            .map(|(&i, &x)| dense[i] * x)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }
}
