use std::collections::BTreeSet;

use serde::Serialize;

use super::{planar_separator, DecomposeError};
use crate::bounds::bisection_width_bound;
use crate::maps::{crossing_augment, grid_blowup, DrawnSystem};
use crate::monotone::{
    fill_punctures, pairwise_min_intersections, realize, validate_k_system, ArcSystem, FillResult,
};

/// Two arcs that became homotopic once the other side's punctures were
/// filled; `erased` is dropped and charged to the erased set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergedPair {
    pub kept: usize,
    pub erased: usize,
    /// Intersection number of the two arcs before filling.
    pub intersections: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BisectionResult {
    /// Punctures of each side, 1-based in the input system.
    pub side1: Vec<usize>,
    pub side2: Vec<usize>,
    /// Erased arc indices: arcs through the separator, arcs joining the
    /// sides, and one arc of every merged pair.
    pub erased: Vec<usize>,
    pub separator_size: usize,
    pub merged: Vec<MergedPair>,
    #[serde(skip)]
    pub systems: [FillResult; 2],
    pub crossings_realized: u64,
    pub degree_square_sum: u64,
    pub erasure_bound: f64,
}

impl BisectionResult {
    pub fn puncture_count(&self) -> usize {
        self.side1.len() + self.side2.len()
    }

    pub fn is_balanced(&self) -> bool {
        let fifth = self.puncture_count() as f64 / 5.0;
        self.side1.len() as f64 >= fifth && self.side2.len() as f64 >= fifth
    }

    pub fn within_erasure_bound(&self) -> bool {
        self.erased.len() as f64 <= self.erasure_bound
    }

    pub fn sides_valid(&self) -> bool {
        self.systems
            .iter()
            .all(|s| validate_k_system(&s.system).is_empty())
    }
}

/// Splits the punctures of a sphere system into two sides of at least a
/// fifth each, erasing the arcs that a weighted planar separator of the
/// blown-up drawing cuts or that join the sides.
///
/// The drawing is the realization of the system with every puncture blown
/// up into a grid; each puncture weighs 1 on one grid corner. Separator
/// punctures go to the lighter side; the heavier side is separated again
/// while the lighter one holds less than a fifth.
pub fn bisect(system: &ArcSystem) -> Result<BisectionResult, DecomposeError> {
    let n = system.puncture_count();
    if n < 5 {
        return Err(DecomposeError::TooFewPunctures(n));
    }
    let realization = realize(system);
    let drawn = DrawnSystem::from_realization(system, &realization)?;
    let blown = grid_blowup(&drawn)?;
    let h = crossing_augment(&blown)?;

    // Puncture t keeps vertex t - 1 as its grid corner.
    let mut side_of: Vec<Option<u8>> = vec![None; n];
    let mut separator: BTreeSet<usize> = BTreeSet::new();
    let mut active: Vec<usize> = (0..h.vertex_count()).collect();
    loop {
        let sub = induced(&h, &active);
        let weights: Vec<f64> = active
            .iter()
            .map(|&v| if v < n { 1.0 } else { 0.0 })
            .collect();
        let sep = planar_separator(&sub, &weights)?;
        let a: Vec<usize> = sep.part_a.iter().map(|&i| active[i]).collect();
        let b: Vec<usize> = sep.part_b.iter().map(|&i| active[i]).collect();
        separator.extend(sep.separator.iter().map(|&i| active[i]));
        let count = |side: &[Option<u8>], s: u8| side.iter().filter(|&&x| x == Some(s)).count();
        // The part already assigned earlier keeps its label; the two new
        // parts are labelled relative to it.
        let (label_a, label_b) = if active.len() == h.vertex_count() {
            (0, 1)
        } else {
            let heavy = side_of[active
                .iter()
                .copied()
                .find(|&v| v < n)
                .expect("puncture in active part")]
            .expect("assigned");
            (heavy, 1 - heavy)
        };
        for &v in a.iter().filter(|&&v| v < n) {
            side_of[v] = Some(label_a);
        }
        for &v in b.iter().filter(|&&v| v < n) {
            side_of[v] = Some(label_b);
        }
        for &i in &sep.separator {
            let v = active[i];
            if v < n {
                let lighter = if count(&side_of, 0) <= count(&side_of, 1) {
                    0
                } else {
                    1
                };
                side_of[v] = Some(lighter);
            }
        }
        let (c0, c1) = (count(&side_of, 0), count(&side_of, 1));
        if 5 * c0.min(c1) >= n {
            break;
        }
        let heavy = if c0 > c1 { 0 } else { 1 };
        let next: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&v| !separator.contains(&v))
            .filter(|&v| {
                let p = blown.puncture_of_vertex(v);
                p.is_none_or(|p| side_of[p] == Some(heavy))
            })
            .collect();
        if next.len() == active.len() || next.iter().filter(|&&v| v < n).count() < 2 {
            return Err(DecomposeError::Unbalanced);
        }
        active = next;
    }

    let arcs = system.arcs();
    let mut erased: BTreeSet<usize> = BTreeSet::new();
    for (arc, route) in blown.routes().iter().enumerate() {
        let mut vertices = route.iter().map(|&d| h.vertex_of(d)).collect::<Vec<_>>();
        vertices.push(h.vertex_of(h.alpha(*route.last().expect("non-empty route"))));
        let (l, r) = (arcs[arc].left() - 1, arcs[arc].right() - 1);
        if vertices.iter().any(|v| separator.contains(v)) || side_of[l] != side_of[r] {
            erased.insert(arc);
        }
    }

    let mut sides: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (p, s) in side_of.iter().enumerate() {
        sides[s.expect("every puncture assigned") as usize].push(p + 1);
    }
    let mut merged = Vec::new();
    let mut fill = |side: &[usize]| -> Result<FillResult, DecomposeError> {
        let keep: BTreeSet<usize> = side.iter().copied().collect();
        let local: Vec<usize> = (0..arcs.len())
            .filter(|a| !erased.contains(a) && keep.contains(&arcs[*a].left()))
            .collect();
        let mut result = fill_punctures(&system.select(&local), &keep)?;
        result.kept = result.kept.iter().map(|&i| local[i]).collect();
        result.merged = result
            .merged
            .iter()
            .map(|&(r, e)| (local[r], local[e]))
            .collect();
        for &(kept, gone) in &result.merged {
            merged.push(MergedPair {
                kept,
                erased: gone,
                intersections: pairwise_min_intersections(&arcs[kept], &arcs[gone]),
            });
        }
        Ok(result)
    };
    let systems = [fill(&sides[0])?, fill(&sides[1])?];
    erased.extend(merged.iter().map(|m| m.erased));

    let degree_square_sum: u64 = system.degrees().iter().map(|d| d * d).sum();
    let [side1, side2] = sides;
    Ok(BisectionResult {
        side1,
        side2,
        erased: erased.into_iter().collect(),
        separator_size: separator.len(),
        merged,
        systems,
        crossings_realized: realization.crossings(),
        degree_square_sum,
        erasure_bound: bisection_width_bound(
            realization.crossings() as f64,
            degree_square_sum as f64,
            n as f64,
        ),
    })
}

/// Submap on `vertices` (sorted); vertex `i` of the result is `vertices[i]`.
fn induced(
    map: &crate::maps::CombinatorialMap,
    vertices: &[usize],
) -> crate::maps::CombinatorialMap {
    if vertices.len() == map.vertex_count() {
        return map.clone();
    }
    let inside: BTreeSet<usize> = vertices.iter().copied().collect();
    let dropped: BTreeSet<usize> = (0..map.dart_count())
        .filter(|&d| {
            !inside.contains(&map.vertex_of(d)) || !inside.contains(&map.vertex_of(map.alpha(d)))
        })
        .collect();
    let trimmed = map.remove_edges(&dropped);
    trimmed.select_vertices(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotone::{max_k_system_greedy, MonotoneArc};

    fn assert_contract(system: &ArcSystem, r: &BisectionResult) {
        assert!(r.is_balanced(), "{:?} {:?}", r.side1, r.side2);
        assert!(r.sides_valid());
        assert!(r.within_erasure_bound());
        let side1: BTreeSet<usize> = r.side1.iter().copied().collect();
        let erased: BTreeSet<usize> = r.erased.iter().copied().collect();
        for (i, a) in system.arcs().iter().enumerate() {
            if !erased.contains(&i) {
                assert_eq!(side1.contains(&a.left()), side1.contains(&a.right()));
            }
        }
        let kept: usize = r.systems.iter().map(|s| s.system.len()).sum();
        assert_eq!(kept + r.erased.len(), system.len());
    }

    #[test]
    fn disjoint_halves_need_no_erasure() {
        let mut arcs = Vec::new();
        for base in [0, 5] {
            arcs.push(MonotoneArc::from_word(base + 1, base + 5, "aba").unwrap());
            arcs.push(MonotoneArc::from_word(base + 1, base + 3, "b").unwrap());
            arcs.push(MonotoneArc::from_word(base + 2, base + 5, "aa").unwrap());
        }
        let s = ArcSystem::new(10, 1, arcs).unwrap();
        let r = bisect(&s).unwrap();
        assert!(r.erased.is_empty());
        assert_contract(&s, &r);
    }

    #[test]
    fn single_arc() {
        let s =
            ArcSystem::new(10, 1, vec![MonotoneArc::from_word(2, 8, "ababa").unwrap()]).unwrap();
        let r = bisect(&s).unwrap();
        assert!(r.erased.len() <= 1);
        assert_contract(&s, &r);
    }

    #[test]
    fn greedy_systems() {
        for seed in 0..8 {
            let s = max_k_system_greedy(7, 2, seed).unwrap();
            let r = bisect(&s).unwrap();
            assert_contract(&s, &r);
        }
    }

    #[test]
    fn too_small() {
        assert!(matches!(
            bisect(&ArcSystem::empty(4, 1)),
            Err(DecomposeError::TooFewPunctures(4))
        ));
    }
}
