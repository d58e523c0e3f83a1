//! Finite permutations on `{1..n}`.
//!
//! A [`Permutation`] is stored as the dense array of its images, 1-based, so
//! that `images[i - 1]` is where `i` goes. Composition reads right to left:
//! `s.compose(&t)` applies `t` first.
//!
//! The left action convention used everywhere in this crate is: `σ` acts on a
//! term by relabelling leaf `i` to `σ(i)`, and on an `n`-ary function by
//! `(σ·f)(a_1, …, a_n) = f(a_σ(1), …, a_σ(n))`. Both satisfy
//! `(στ)·x = σ·(τ·x)`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("not a bijection on 1..={degree}: {images:?}")]
    NotBijective { degree: usize, images: Vec<usize> },
    #[error("expected {expected} block sizes, got {found}")]
    BlockCount { expected: usize, found: usize },
    #[error("cannot parse permutation: {0}")]
    Parse(String),
}

/// An element of the symmetric group `S_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Builds a permutation from its 1-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(PermError::NotBijective { degree: n, images });
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// "Apply `other`, then `self`".
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&j| self.apply(j)).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// Reorders a slice by the action on argument tuples:
    /// `result[i] = items[σ(i)]` (1-based on both sides).
    pub fn permute_args<T: Clone>(&self, items: &[T]) -> Vec<T> {
        debug_assert_eq!(items.len(), self.degree());
        self.images.iter().map(|&j| items[j - 1].clone()).collect()
    }

    /// Moves the `n` contiguous blocks of sizes `blocks` (in source layout)
    /// so that block `i` lands in slot `self(i)`, keeping the order inside
    /// each block.
    pub fn block_permutation(&self, blocks: &[usize]) -> Result<Permutation, PermError> {
        let n = self.degree();
        if blocks.len() != n {
            return Err(PermError::BlockCount {
                expected: n,
                found: blocks.len(),
            });
        }
        let inv = self.inverse();
        // offset of each target slot, laid out by the blocks that land there
        let mut slot_offset = vec![0; n + 1];
        for slot in 1..=n {
            slot_offset[slot] = slot_offset[slot - 1] + blocks[inv.apply(slot) - 1];
        }
        let mut images = Vec::with_capacity(slot_offset[n]);
        for (i, &size) in blocks.iter().enumerate() {
            let base = slot_offset[self.apply(i + 1) - 1];
            images.extend((1..=size).map(|r| base + r));
        }
        Ok(Permutation { images })
    }

    /// Block diagonal sum `τ_1 ⊕ … ⊕ τ_n`.
    pub fn direct_sum(parts: &[Permutation]) -> Permutation {
        let mut images = Vec::new();
        let mut offset = 0;
        for p in parts {
            images.extend(p.images.iter().map(|&v| v + offset));
            offset += p.degree();
        }
        Permutation { images }
    }

    /// All of `S_n` in lexicographic order of the image word.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (1..=n)
            .permutations(n)
            .map(|images| Permutation { images })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images.iter().join(","))
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| PermError::Parse(s.to_string()))?;
        let images = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| PermError::Parse(format!("{s}: {e}")))?
        };
        Permutation::from_images(images)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_values() {
        assert_eq!(Permutation::identity(0).degree(), 0);
        assert_eq!(Permutation::identity(3), p(&[1, 2, 3]));
        for s in Permutation::all(2) {
            assert_eq!(Permutation::identity(2).compose(&s).unwrap(), s);
        }
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p(&[2, 1]).compose(&p(&[2, 1])).unwrap(), p(&[1, 2]));
        assert_eq!(p(&[2, 3, 1]).compose(&p(&[2, 3, 1])).unwrap(), p(&[3, 1, 2]));
        assert_eq!(
            p(&[2, 1]).compose(&p(&[1, 2, 3])),
            Err(PermError::DegreeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn compose_matches_pointwise_brute_force() {
        for s in Permutation::all(4) {
            for t in Permutation::all(4) {
                let st = s.compose(&t).unwrap();
                for i in 1..=4 {
                    assert_eq!(st.apply(i), s.apply(t.apply(i)));
                }
            }
        }
    }

    #[test]
    fn invert_examples() {
        assert_eq!(p(&[1, 2]).inverse(), p(&[1, 2]));
        assert_eq!(p(&[2, 3, 1]).inverse(), p(&[3, 1, 2]));
    }

    #[test]
    fn group_laws_exhaustive() {
        for n in 0..=4 {
            let all: Vec<_> = Permutation::all(n).collect();
            let id = Permutation::identity(n);
            for s in &all {
                assert_eq!(s.inverse().inverse(), *s);
                assert_eq!(s.compose(&s.inverse()).unwrap(), id);
                assert_eq!(s.inverse().compose(s).unwrap(), id);
                assert_eq!(id.compose(s).unwrap(), *s);
                assert_eq!(s.compose(&id).unwrap(), *s);
            }
            if n <= 3 {
                for a in &all {
                    for b in &all {
                        for c in &all {
                            let l = a.compose(&b.compose(c).unwrap()).unwrap();
                            let r = a.compose(b).unwrap().compose(c).unwrap();
                            assert_eq!(l, r);
                        }
                    }
                }
            }
        }
    }

    /// Brute-force oracle: lay the blocks out explicitly and read off where
    /// every position went.
    fn block_oracle(s: &Permutation, blocks: &[usize]) -> Vec<usize> {
        let mut offset = 0;
        let mut tagged = Vec::new();
        for (i, &k) in blocks.iter().enumerate() {
            tagged.push((s.apply(i + 1), (offset + 1..=offset + k).collect::<Vec<_>>()));
            offset += k;
        }
        tagged.sort();
        let layout: Vec<usize> = tagged.into_iter().flat_map(|(_, b)| b).collect();
        let mut images = vec![0; offset];
        for (new_pos, &old) in layout.iter().enumerate() {
            images[old - 1] = new_pos + 1;
        }
        images
    }

    #[test]
    fn block_permutation_examples() {
        assert_eq!(
            Permutation::identity(2).block_permutation(&[3, 2]).unwrap(),
            Permutation::identity(5)
        );
        assert_eq!(p(&[2, 1]).block_permutation(&[1, 1]).unwrap(), p(&[2, 1]));
        // blocks ([1,2],[3]) laid out as ([3],[1,2])
        assert_eq!(p(&[2, 1]).block_permutation(&[2, 1]).unwrap(), p(&[2, 3, 1]));
        assert_eq!(
            p(&[2, 1]).block_permutation(&[1]),
            Err(PermError::BlockCount { expected: 2, found: 1 })
        );
    }

    #[test]
    fn block_permutation_matches_oracle() {
        for n in 0..=3 {
            for s in Permutation::all(n) {
                for blocks in (0..n).map(|_| 0..=2usize).multi_cartesian_product() {
                    let got = s.block_permutation(&blocks).unwrap();
                    assert_eq!(got.images(), block_oracle(&s, &blocks).as_slice());
                }
            }
        }
    }

    #[test]
    fn block_permutation_is_multiplicative() {
        // (σ∘τ) on blocks ks = (σ on blocks ks∘τ⁻¹) ∘ (τ on blocks ks)
        for s in Permutation::all(3) {
            for t in Permutation::all(3) {
                let ks = [1usize, 0, 2];
                let moved: Vec<usize> = (1..=3).map(|slot| ks[t.inverse().apply(slot) - 1]).collect();
                let lhs = s.compose(&t).unwrap().block_permutation(&ks).unwrap();
                let rhs = s
                    .block_permutation(&moved)
                    .unwrap()
                    .compose(&t.block_permutation(&ks).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn text_form() {
        let s: Permutation = "[2,3,1]".parse().unwrap();
        assert_eq!(s, p(&[2, 3, 1]));
        assert_eq!(s.to_string(), "[2,3,1]");
        assert_eq!("[]".parse::<Permutation>().unwrap(), Permutation::identity(0));
        assert!("[1,1]".parse::<Permutation>().is_err());
        assert!("1,2".parse::<Permutation>().is_err());
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[2,3,1]");
        assert!(serde_json::from_str::<Permutation>("[2,2]").is_err());
    }

    #[test]
    fn direct_sum_places_blocks() {
        let sum = Permutation::direct_sum(&[p(&[2, 1]), p(&[1]), p(&[3, 1, 2])]);
        assert_eq!(sum, p(&[2, 1, 3, 6, 4, 5]));
    }
}
