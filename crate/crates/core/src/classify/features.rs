use crate::text::{hash_feature, tokens, SparseVector};

pub const DEFAULT_DIMENSION: usize = 1 << 18;

const WORD: u8 = b'w';
const TRIGRAM: u8 = b'c';

/// Character trigrams of a token padded with one space on each side.
pub fn trigrams(token: &str) -> Vec<String> {
    let padded: Vec<char> = std::iter::once(' ')
        .chain(token.chars())
        .chain(std::iter::once(' '))
        .collect();
    padded.windows(3).map(|w| w.iter().collect()).collect()
}

/// Unnormalized hashed counts of word tokens and their trigrams.
pub fn feature_counts(cleaned: &str, dimension: usize) -> SparseVector {
    assert!(dimension >= 2, "feature dimension must be at least 2");
    let mut pairs = Vec::new();
    for tok in tokens(cleaned) {
        pairs.push((hash_feature(WORD, &tok, dimension), 1.0));
        for tri in trigrams(&tok) {
            pairs.push((hash_feature(TRIGRAM, &tri, dimension), 1.0));
        }
    }
    SparseVector::from_pairs(pairs)
}

/// L2-normalized institution features; the empty string maps to the zero vector.
pub fn featurize_institution(cleaned: &str, dimension: usize) -> SparseVector {
    feature_counts(cleaned, dimension).l2_normalized()
}
