use std::fmt;

use serde::{Deserialize, Serialize};

use super::ArcError;

/// Passage of an arc relative to an intermediate puncture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    pub fn letter(self) -> char {
        match self {
            Side::Above => 'a',
            Side::Below => 'b',
        }
    }

    pub fn from_letter(c: char) -> Option<Side> {
        match c {
            'a' => Some(Side::Above),
            'b' => Some(Side::Below),
            _ => None,
        }
    }

    /// Vertical code relative to the puncture: +1 above, -1 below.
    pub fn code(self) -> i8 {
        match self {
            Side::Above => 1,
            Side::Below => -1,
        }
    }
}

/// Homotopy class of an x-monotone arc between punctures `left < right`
/// (1-based), given by its above/below passage at each puncture strictly
/// between them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonotoneArc {
    left: usize,
    right: usize,
    signs: Vec<Side>,
}

impl MonotoneArc {
    pub fn new(left: usize, right: usize, signs: Vec<Side>) -> Result<Self, ArcError> {
        if left == 0 || left >= right {
            return Err(ArcError::BadEndpoints { left, right });
        }
        if signs.len() != right - left - 1 {
            return Err(ArcError::BadSignLength {
                left,
                right,
                len: signs.len(),
            });
        }
        Ok(Self { left, right, signs })
    }

    /// Builds an arc from a word over `a`/`b`; `-` or the empty string is the
    /// empty word.
    pub fn from_word(left: usize, right: usize, word: &str) -> Result<Self, ArcError> {
        let signs = if word == "-" {
            Vec::new()
        } else {
            word.chars()
                .map(|c| Side::from_letter(c).ok_or(ArcError::BadLetter(c)))
                .collect::<Result<Vec<_>, _>>()?
        };
        Self::new(left, right, signs)
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn signs(&self) -> &[Side] {
        &self.signs
    }

    pub fn word(&self) -> String {
        if self.signs.is_empty() {
            "-".to_string()
        } else {
            self.signs.iter().map(|s| s.letter()).collect()
        }
    }

    pub fn spans(&self, t: usize) -> bool {
        self.left <= t && t <= self.right
    }

    pub fn is_endpoint(&self, t: usize) -> bool {
        t == self.left || t == self.right
    }

    /// Side at puncture `t` when `t` is strictly inside the arc.
    pub fn side_at(&self, t: usize) -> Option<Side> {
        if self.left < t && t < self.right {
            Some(self.signs[t - self.left - 1])
        } else {
            None
        }
    }

    /// Vertical code at puncture `t`: +1/-1 when passing, 0 at an endpoint,
    /// `None` outside the span.
    pub fn code_at(&self, t: usize) -> Option<i8> {
        if !self.spans(t) {
            None
        } else if self.is_endpoint(t) {
            Some(0)
        } else {
            self.side_at(t).map(Side::code)
        }
    }
}

impl fmt::Display for MonotoneArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.left, self.right, self.word())
    }
}

/// A finite list of monotone arcs on `n` collinear punctures with a declared
/// intersection cap `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcSystem {
    puncture_count: usize,
    declared_k: u64,
    arcs: Vec<MonotoneArc>,
}

impl ArcSystem {
    pub fn new(
        puncture_count: usize,
        declared_k: u64,
        arcs: Vec<MonotoneArc>,
    ) -> Result<Self, ArcError> {
        for arc in &arcs {
            if arc.right > puncture_count {
                return Err(ArcError::OutOfRange {
                    arc: arc.to_string(),
                    n: puncture_count,
                });
            }
        }
        Ok(Self {
            puncture_count,
            declared_k,
            arcs,
        })
    }

    pub fn empty(puncture_count: usize, declared_k: u64) -> Self {
        Self {
            puncture_count,
            declared_k,
            arcs: Vec::new(),
        }
    }

    pub fn puncture_count(&self) -> usize {
        self.puncture_count
    }

    pub fn declared_k(&self) -> u64 {
        self.declared_k
    }

    pub fn arcs(&self) -> &[MonotoneArc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn push(&mut self, arc: MonotoneArc) -> Result<(), ArcError> {
        if arc.right > self.puncture_count {
            return Err(ArcError::OutOfRange {
                arc: arc.to_string(),
                n: self.puncture_count,
            });
        }
        self.arcs.push(arc);
        Ok(())
    }

    /// Degree of each puncture, indexed from 0 for puncture 1.
    pub fn degrees(&self) -> Vec<u64> {
        let mut degrees = vec![0u64; self.puncture_count];
        for arc in &self.arcs {
            degrees[arc.left - 1] += 1;
            degrees[arc.right - 1] += 1;
        }
        degrees
    }

    /// Subsystem made of the arcs at the given indices, in that order.
    pub fn select(&self, indices: &[usize]) -> ArcSystem {
        ArcSystem {
            puncture_count: self.puncture_count,
            declared_k: self.declared_k,
            arcs: indices.iter().map(|&i| self.arcs[i].clone()).collect(),
        }
    }
}
