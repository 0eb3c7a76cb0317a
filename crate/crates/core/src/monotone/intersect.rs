use serde::{Deserialize, Serialize};

use super::{ArcError, ArcSystem, MonotoneArc, Side};

/// Which of the two scanned arcs is forced to lie above the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Upper {
    First,
    Second,
}

/// Order constraints between two arcs at the punctures of their common
/// domain, by strictly increasing puncture.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ForcedOrderSequence {
    constraints: Vec<(usize, Upper)>,
}

impl ForcedOrderSequence {
    pub fn between(a: &MonotoneArc, b: &MonotoneArc) -> Self {
        let lo = a.left().max(b.left());
        let hi = a.right().min(b.right());
        let mut constraints = Vec::new();
        if lo >= hi {
            return Self { constraints };
        }
        for t in lo..=hi {
            let forced = match (a.side_at(t), b.side_at(t)) {
                (Some(sa), Some(sb)) if sa != sb => Some(if sa == Side::Above {
                    Upper::First
                } else {
                    Upper::Second
                }),
                (Some(_), Some(_)) => None,
                // b has an endpoint at t, a passes it.
                (Some(sa), None) => Some(if sa == Side::Above {
                    Upper::First
                } else {
                    Upper::Second
                }),
                (None, Some(sb)) => Some(if sb == Side::Above {
                    Upper::Second
                } else {
                    Upper::First
                }),
                (None, None) => None,
            };
            if let Some(upper) = forced {
                constraints.push((t, upper));
            }
        }
        Self { constraints }
    }

    pub fn constraints(&self) -> &[(usize, Upper)] {
        &self.constraints
    }

    /// Number of adjacent constraint pairs whose upper arc differs.
    pub fn alternations(&self) -> u64 {
        self.constraints
            .windows(2)
            .filter(|w| w[0].1 != w[1].1)
            .count() as u64
    }
}

/// Minimal number of interior intersections between the homotopy classes of
/// two monotone arcs.
pub fn pairwise_min_intersections(a: &MonotoneArc, b: &MonotoneArc) -> u64 {
    ForcedOrderSequence::between(a, b).alternations()
}

/// Checked variant of [`pairwise_min_intersections`] for arcs that belong to
/// systems with declared puncture counts.
pub fn pairwise_min_intersections_on(
    n_a: usize,
    a: &MonotoneArc,
    n_b: usize,
    b: &MonotoneArc,
) -> Result<u64, ArcError> {
    if n_a != n_b {
        return Err(ArcError::PunctureMismatch(n_a, n_b));
    }
    Ok(pairwise_min_intersections(a, b))
}

pub fn are_homotopic(a: &MonotoneArc, b: &MonotoneArc) -> bool {
    a == b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Homotopic {
        first: usize,
        second: usize,
    },
    TooManyIntersections {
        first: usize,
        second: usize,
        count: u64,
        k: u64,
    },
}

/// Lists every homotopic pair and every pair meeting more than `declared_k`
/// times. Empty means the system is a valid k-system.
pub fn validate_k_system(system: &ArcSystem) -> Vec<Violation> {
    let arcs = system.arcs();
    let k = system.declared_k();
    let mut out = Vec::new();
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            if are_homotopic(&arcs[i], &arcs[j]) {
                out.push(Violation::Homotopic {
                    first: i,
                    second: j,
                });
                continue;
            }
            let count = pairwise_min_intersections(&arcs[i], &arcs[j]);
            if count > k {
                out.push(Violation::TooManyIntersections {
                    first: i,
                    second: j,
                    count,
                    k,
                });
            }
        }
    }
    out
}

fn pair_counts(system: &ArcSystem) -> impl Iterator<Item = u64> + '_ {
    let arcs = system.arcs();
    (0..arcs.len()).flat_map(move |i| {
        (i + 1..arcs.len()).map(move |j| pairwise_min_intersections(&arcs[i], &arcs[j]))
    })
}

pub fn total_min_crossings(system: &ArcSystem) -> u64 {
    pair_counts(system).sum()
}

pub fn count_pairs_at_least(system: &ArcSystem, c: u64) -> u64 {
    pair_counts(system).filter(|&x| x >= c).count() as u64
}

/// All monotone arcs on `n` punctures in lexicographic order of
/// `(left, right, word)` with `a < b`. There are `2^n - n - 1` of them.
pub fn enumerate_universe(n: usize) -> Vec<MonotoneArc> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for left in 1..n {
        for right in left + 1..=n {
            let len = right - left - 1;
            for mask in 0u64..(1u64 << len) {
                // Most significant bit first so that `a...` precedes `b...`.
                let signs = (0..len)
                    .map(|p| {
                        if mask >> (len - 1 - p) & 1 == 0 {
                            Side::Above
                        } else {
                            Side::Below
                        }
                    })
                    .collect();
                out.push(MonotoneArc::new(left, right, signs).expect("valid by construction"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(l: usize, r: usize, w: &str) -> MonotoneArc {
        MonotoneArc::from_word(l, r, w).unwrap()
    }

    #[test]
    fn scan_examples() {
        assert_eq!(
            pairwise_min_intersections(&arc(1, 3, "a"), &arc(1, 3, "b")),
            0
        );
        assert_eq!(
            pairwise_min_intersections(&arc(1, 4, "ab"), &arc(1, 4, "ba")),
            1
        );
        assert_eq!(
            pairwise_min_intersections(&arc(1, 5, "aba"), &arc(1, 5, "bab")),
            2
        );
        assert_eq!(
            pairwise_min_intersections(&arc(1, 2, "-"), &arc(2, 3, "-")),
            0
        );
    }

    #[test]
    fn endpoint_constraints() {
        // (2,4) ends inside (1,5) on both sides: b passes above 2, below 4.
        let a = arc(2, 4, "a");
        let b = arc(1, 5, "aab");
        let seq = ForcedOrderSequence::between(&a, &b);
        assert_eq!(seq.constraints(), &[(2, Upper::Second), (4, Upper::First)]);
        assert_eq!(seq.alternations(), 1);
    }

    #[test]
    fn mismatched_puncture_counts() {
        let a = arc(1, 2, "-");
        assert!(matches!(
            pairwise_min_intersections_on(3, &a, 4, &a),
            Err(ArcError::PunctureMismatch(3, 4))
        ));
    }

    #[test]
    fn homotopy_by_triples() {
        let a = arc(1, 3, "a");
        assert!(are_homotopic(&a, &a.clone()));
        assert!(!are_homotopic(&a, &arc(1, 3, "b")));
        assert!(!are_homotopic(&arc(1, 2, "-"), &arc(2, 3, "-")));
    }

    #[test]
    fn validation() {
        let dup = ArcSystem::new(3, 1, vec![arc(1, 3, "a"), arc(1, 3, "a")]).unwrap();
        assert_eq!(
            validate_k_system(&dup),
            vec![Violation::Homotopic {
                first: 0,
                second: 1
            }]
        );

        let four = ArcSystem::new(3, 0, enumerate_universe(3)).unwrap();
        assert!(validate_k_system(&four).is_empty());
        assert_eq!(total_min_crossings(&four), 0);
        assert_eq!(count_pairs_at_least(&four, 1), 0);

        let crossing = ArcSystem::new(4, 0, vec![arc(1, 4, "ab"), arc(1, 4, "ba")]).unwrap();
        assert_eq!(
            validate_k_system(&crossing),
            vec![Violation::TooManyIntersections {
                first: 0,
                second: 1,
                count: 1,
                k: 0
            }]
        );
        assert_eq!(total_min_crossings(&crossing), 1);
        assert_eq!(count_pairs_at_least(&crossing, 1), 1);
        assert_eq!(count_pairs_at_least(&crossing, 2), 0);
    }

    #[test]
    fn single_arc_has_no_crossings() {
        let s = ArcSystem::new(5, 1, vec![arc(1, 5, "aba")]).unwrap();
        assert_eq!(total_min_crossings(&s), 0);
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(enumerate_universe(1).len(), 0);
        assert_eq!(enumerate_universe(2).len(), 1);
        assert_eq!(enumerate_universe(3).len(), 4);
        assert_eq!(enumerate_universe(4).len(), 11);
        for n in 2..=9 {
            let u = enumerate_universe(n);
            assert_eq!(u.len(), (1 << n) - n - 1);
            assert!(u.windows(2).all(|w| w[0] < w[1]), "lexicographic order");
        }
    }
}
