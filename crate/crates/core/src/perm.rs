//! Permutations on `{0, …, degree − 1}`.

use std::fmt;

use crate::error::{Error, Result};

/// A permutation stored by its image list. Ordering is lexicographic on the
/// images, which is the order used to index group elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    /// Builds a permutation from its images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::BadPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation of the given degree from disjoint or overlapping
    /// cycles. Cycles are composed left to right as functions, so the
    /// rightmost cycle acts first.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut acc = Permutation::identity(degree);
        for cycle in cycles {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            let mut seen = std::collections::HashSet::new();
            for (k, &a) in cycle.iter().enumerate() {
                if a as usize >= degree {
                    return Err(Error::BadPermutation(format!(
                        "point {a} out of range for degree {degree}"
                    )));
                }
                if !seen.insert(a) {
                    return Err(Error::BadPermutation(format!("point {a} repeated in cycle")));
                }
                images[a as usize] = cycle[(k + 1) % cycle.len()];
            }
            acc = acc.compose(&Permutation(images));
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.0[point as usize]
    }

    /// Function composition `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Shifts the points by `offset` and pads to `degree`, fixing the rest.
    pub(crate) fn embed(&self, offset: usize, degree: usize) -> Permutation {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &j) in self.0.iter().enumerate() {
            images[i + offset] = j + offset as u32;
        }
        Permutation(images)
    }

    /// Disjoint cycle decomposition, each cycle starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = vec![start as u32];
            seen[start] = true;
            let mut next = self.0[start] as usize;
            while next != start {
                seen[next] = true;
                cycle.push(next as u32);
                next = self.0[next] as usize;
            }
            out.push(cycle);
        }
        out
    }
}

/// Cycle notation with 0-based points, e.g. `(0 1 2)(3 4)`; identity is `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}
