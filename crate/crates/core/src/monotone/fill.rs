use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{ArcError, ArcSystem, MonotoneArc};

/// Outcome of forgetting the punctures outside a keep set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillResult {
    /// One representative per surviving homotopy class, on the kept
    /// punctures renumbered `1..=keep.len()` in order.
    pub system: ArcSystem,
    /// Original index of each arc of `system`.
    pub kept: Vec<usize>,
    /// `(representative, erased)` pairs of original indices whose classes
    /// merged. The representative is the lowest index of its class.
    pub merged: Vec<(usize, usize)>,
    /// Kept punctures in increasing order (original numbering).
    pub punctures: Vec<usize>,
}

/// Fills every puncture not in `keep`: its sign entries are deleted and the
/// remaining punctures are renumbered preserving order. Arcs that become
/// homotopic are reported; all but the lowest-index one is dropped.
pub fn fill_punctures(system: &ArcSystem, keep: &BTreeSet<usize>) -> Result<FillResult, ArcError> {
    let n = system.puncture_count();
    let punctures: Vec<usize> = keep.iter().copied().filter(|&p| p >= 1 && p <= n).collect();
    let mut new_index = vec![0usize; n + 1];
    for (i, &p) in punctures.iter().enumerate() {
        new_index[p] = i + 1;
    }

    let mut seen: HashMap<MonotoneArc, usize> = HashMap::new();
    let mut arcs = Vec::new();
    let mut kept = Vec::new();
    let mut merged = Vec::new();
    for (idx, arc) in system.arcs().iter().enumerate() {
        let (l, r) = (arc.left(), arc.right());
        if new_index[l] == 0 || new_index[r] == 0 {
            return Err(ArcError::EndpointFilled {
                arc: arc.to_string(),
            });
        }
        let signs = (l + 1..r)
            .filter(|&t| new_index[t] != 0)
            .map(|t| arc.side_at(t).expect("interior puncture"))
            .collect();
        let filled = MonotoneArc::new(new_index[l], new_index[r], signs)?;
        match seen.get(&filled) {
            Some(&rep) => merged.push((rep, idx)),
            None => {
                seen.insert(filled.clone(), idx);
                arcs.push(filled);
                kept.push(idx);
            }
        }
    }
    Ok(FillResult {
        system: ArcSystem::new(punctures.len(), system.declared_k(), arcs)?,
        kept,
        merged,
        punctures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(l: usize, r: usize, w: &str) -> MonotoneArc {
        MonotoneArc::from_word(l, r, w).unwrap()
    }

    #[test]
    fn merging_pair() {
        let s = ArcSystem::new(3, 1, vec![arc(1, 3, "a"), arc(1, 3, "b")]).unwrap();
        let keep: BTreeSet<usize> = [1, 3].into_iter().collect();
        let f = fill_punctures(&s, &keep).unwrap();
        assert_eq!(f.system.arcs(), &[arc(1, 2, "-")]);
        assert_eq!(f.merged, vec![(0, 1)]);
        assert_eq!(f.kept, vec![0]);
    }

    #[test]
    fn keep_all_is_identity() {
        let s = ArcSystem::new(4, 2, super::super::enumerate_universe(4)).unwrap();
        let keep: BTreeSet<usize> = (1..=4).collect();
        let f = fill_punctures(&s, &keep).unwrap();
        assert_eq!(f.system, s);
        assert!(f.merged.is_empty());
    }

    #[test]
    fn no_interior_punctures() {
        let s = ArcSystem::new(2, 1, vec![arc(1, 2, "-")]).unwrap();
        let keep: BTreeSet<usize> = [1, 2].into_iter().collect();
        assert_eq!(fill_punctures(&s, &keep).unwrap().system, s);
    }

    #[test]
    fn filled_endpoint_is_an_error() {
        let s = ArcSystem::new(3, 1, vec![arc(1, 3, "a")]).unwrap();
        let keep: BTreeSet<usize> = [1, 2].into_iter().collect();
        assert!(matches!(
            fill_punctures(&s, &keep),
            Err(ArcError::EndpointFilled { .. })
        ));
    }
}
