use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    crossing_augment, grid_blowup, CombinatorialMap, Dart, DrawnSystem, MapError, UnionFind,
};
use crate::bounds::{dv_edge_bound, planarize_arc_bound};

/// Edges outside a spanning tree and a dual cotree; deleting them leaves a
/// planar map. Each cluster of `forbidden` edges is treated as a single
/// vertex, so no forbidden edge is ever returned.
///
/// The first tree is grown breadth first from the vertex of dart 0 and
/// visits darts in rotation order. The cotree is grown greedily over faces
/// in index order and only takes edges that keep tree plus cotree planar.
/// When that leaves more than `2g` edges, seeded trees and orders are tried
/// in turn. A full dual spanning tree gives exactly `2g` edges; some maps
/// admit no planarizing set that small, and then the smallest set found is
/// returned. Edges are identified by their smaller dart.
pub fn tree_cotree_planarize(
    map: &CombinatorialMap,
    forbidden: &BTreeSet<Dart>,
) -> Result<BTreeSet<Dart>, MapError> {
    let forbidden: BTreeSet<Dart> = forbidden.iter().map(|&d| map.edge_of(d)).collect();
    let (face_of, faces) = map.face_index();
    let components = map.components().len();
    if components > 1 {
        return Err(MapError::NonCellular { components, faces });
    }
    let edges = map.edges();
    let target = edges.len() + 2 - (map.vertex_count() + faces);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut best: Option<BTreeSet<Dart>> = None;
    for attempt in 0..=COTREE_RETRIES {
        let in_tree = if attempt % 2 == 0 {
            bfs_tree(map, &forbidden)
        } else {
            let mut order = edges.clone();
            order.shuffle(&mut rng);
            random_tree(map, &forbidden, &order)
        };
        let mut candidates: Vec<Dart> = edges.iter().copied().filter(|&e| !in_tree[e]).collect();
        candidates.sort_by_key(|&e| {
            let f = face_of[e].min(face_of[map.alpha(e)]);
            (!forbidden.contains(&e), f, e)
        });
        if attempt > 0 {
            let pinned = candidates.iter().filter(|e| forbidden.contains(e)).count();
            candidates[pinned..].shuffle(&mut rng);
        }
        let removed = grow_cotree(map, &in_tree, &face_of, faces, &candidates);
        if best.as_ref().is_none_or(|b| removed.len() < b.len()) {
            best = Some(removed);
        }
        if best.as_ref().is_some_and(|b| b.len() <= target) {
            break;
        }
    }
    let best = best.expect("at least one attempt");
    if best.iter().any(|e| forbidden.contains(e)) {
        return Err(MapError::ForbiddenUnavoidable);
    }
    Ok(best)
}

/// Further trees and cotree orders tried while more than `2g` edges are
/// left out.
const COTREE_RETRIES: usize = 256;

/// Spanning forest of the forbidden edges, extended breadth first over the
/// contracted clusters from the vertex of dart 0.
fn bfs_tree(map: &CombinatorialMap, forbidden: &BTreeSet<Dart>) -> Vec<bool> {
    let mut in_tree = vec![false; map.dart_count()];
    let mut clusters = UnionFind::new(map.vertex_count());
    for &e in forbidden {
        if clusters.union(map.vertex_of(e), map.vertex_of(map.alpha(e))) {
            in_tree[e] = true;
        }
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); map.vertex_count()];
    for v in 0..map.vertex_count() {
        members[clusters.find(v)].push(v);
    }
    if map.dart_count() > 0 {
        let mut seen = vec![false; map.vertex_count()];
        let mut queue = VecDeque::new();
        let root = clusters.find(map.vertex_of(0));
        seen[root] = true;
        queue.extend(members[root].iter().copied());
        while let Some(u) = queue.pop_front() {
            for &d in map.rotation(u) {
                let w = clusters.find(map.vertex_of(map.alpha(d)));
                if !seen[w] {
                    seen[w] = true;
                    in_tree[map.edge_of(d)] = true;
                    queue.extend(members[w].iter().copied());
                }
            }
        }
    }
    in_tree
}

/// Spanning tree taking forbidden edges first, then `order`.
fn random_tree(map: &CombinatorialMap, forbidden: &BTreeSet<Dart>, order: &[Dart]) -> Vec<bool> {
    let mut in_tree = vec![false; map.dart_count()];
    let mut uf = UnionFind::new(map.vertex_count());
    for &e in forbidden.iter().chain(order) {
        if uf.union(map.vertex_of(e), map.vertex_of(map.alpha(e))) {
            in_tree[e] = true;
        }
    }
    in_tree
}

/// Greedy dual forest over `candidates` in order, keeping tree plus forest
/// planar; returns the edges left out.
fn grow_cotree(
    map: &CombinatorialMap,
    in_tree: &[bool],
    face_of: &[usize],
    faces: usize,
    candidates: &[Dart],
) -> BTreeSet<Dart> {
    let mut kept = vec![false; map.dart_count()];
    for d in 0..map.dart_count() {
        kept[d] = in_tree[map.edge_of(d)];
    }
    let mut kept_faces = face_count(map, &kept);
    let mut dual = UnionFind::new(faces);
    let mut removed = BTreeSet::new();
    for &e in candidates {
        if dual.find(face_of[e]) == dual.find(face_of[map.alpha(e)]) {
            removed.insert(e);
            continue;
        }
        kept[e] = true;
        kept[map.alpha(e)] = true;
        let f = face_count(map, &kept);
        if f == kept_faces + 1 {
            kept_faces = f;
            dual.union(face_of[e], face_of[map.alpha(e)]);
        } else {
            kept[e] = false;
            kept[map.alpha(e)] = false;
            removed.insert(e);
        }
    }
    removed
}

/// Faces of the submap on the darts marked in `kept`.
fn face_count(map: &CombinatorialMap, kept: &[bool]) -> usize {
    let mut next = vec![usize::MAX; map.dart_count()];
    for rot in map.rotations() {
        let inside: Vec<Dart> = rot.iter().copied().filter(|&d| kept[d]).collect();
        for (i, &d) in inside.iter().enumerate() {
            next[d] = inside[(i + 1) % inside.len()];
        }
    }
    let mut seen = vec![false; map.dart_count()];
    let mut faces = 0;
    for start in (0..map.dart_count()).filter(|&d| kept[d]) {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            d = next[map.alpha(d)];
        }
    }
    // A lone vertex still bounds one face.
    faces.max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarizeReport {
    pub removed_edges: Vec<Dart>,
    pub hit_arcs: Vec<usize>,
    pub bound_value: f64,
    pub genus_before: u64,
    pub genus_after: u64,
    /// Vertices of the blown-up, crossing-augmented map.
    pub vertex_count: usize,
    pub edge_count: usize,
    pub crossings: usize,
    pub degree_square_sum: u64,
    pub puncture_count: usize,
    pub arc_count: usize,
    pub dv_bound: f64,
}

impl PlanarizeReport {
    pub fn within_bound(&self) -> bool {
        self.hit_arcs.len() as f64 <= self.bound_value
    }

    /// `E <= 3N + 2g`.
    pub fn euler_count_holds(&self) -> bool {
        self.edge_count as u64 <= 3 * self.vertex_count as u64 + 2 * self.genus_before
    }

    pub fn within_dv_bound(&self) -> bool {
        self.removed_edges.len() as f64 <= self.dv_bound
    }
}

/// Blows up the punctures, planarizes the augmented map away from the grid
/// edges, and reports which arcs the removed edges lie on.
pub fn planarize_pipeline(drawn: &DrawnSystem) -> Result<PlanarizeReport, MapError> {
    let genus = drawn.map().genus()?;
    let crossings = drawn.crossing_count();
    let degree_square_sum = drawn.blown_degree_square_sum();
    let n = drawn.puncture_count();
    let mut report = PlanarizeReport {
        removed_edges: Vec::new(),
        hit_arcs: Vec::new(),
        bound_value: planarize_arc_bound(
            genus,
            crossings as f64,
            degree_square_sum as f64,
            n as f64,
        ),
        genus_before: genus,
        genus_after: genus,
        vertex_count: drawn.map().vertex_count(),
        edge_count: drawn.map().edge_count(),
        crossings,
        degree_square_sum,
        puncture_count: n,
        arc_count: drawn.arc_count(),
        dv_bound: 0.0,
    };
    if genus == 0 {
        return Ok(report);
    }
    let blown = grid_blowup(drawn)?;
    let h = crossing_augment(&blown)?;
    let removed = tree_cotree_planarize(&h, &blown.grid_edges())?;
    let genus_after = h.remove_edges(&removed).genus()?;
    if genus_after != 0 {
        return Err(MapError::NotPlanar { genus: genus_after });
    }
    let arc_of = blown.arc_of_edge();
    let hit: BTreeSet<usize> = removed
        .iter()
        .filter_map(|e| arc_of.get(e).copied())
        .collect();
    report.vertex_count = h.vertex_count();
    report.edge_count = h.edge_count();
    report.genus_after = genus_after;
    report.dv_bound = dv_edge_bound(4.0, genus as f64, h.edge_count() as f64);
    report.removed_edges = removed.into_iter().collect();
    report.hit_arcs = hit.into_iter().collect();
    Ok(report)
}

/// Parameters of the sphere system left after cutting along the removed
/// edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CutStatistics {
    pub punctures_after: usize,
    pub arcs_after: usize,
    pub k_after: u64,
}

/// `(n + 2g, m - |hit arcs|, k)`.
pub fn cut_statistics(report: &PlanarizeReport, k: u64) -> CutStatistics {
    CutStatistics {
        punctures_after: report.puncture_count + 2 * report.genus_before as usize,
        arcs_after: report.arc_count - report.hit_arcs.len(),
        k_after: k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::map::tests::{tetrahedron, torus_bouquet};
    use crate::maps::{random_drawn_system, torus_two_loops};

    #[test]
    fn planar_map_needs_no_cut() {
        assert!(tree_cotree_planarize(&tetrahedron(), &BTreeSet::new())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn torus_bouquet_loses_both_loops() {
        let t = torus_bouquet();
        let x = tree_cotree_planarize(&t, &BTreeSet::new()).unwrap();
        assert_eq!(x.len(), 2);
        let rest = t.remove_edges(&x);
        assert_eq!((rest.vertex_count(), rest.edge_count()), (1, 0));
        assert_eq!(rest.genus().unwrap(), 0);
    }

    #[test]
    fn disconnected_map_is_rejected() {
        let m = CombinatorialMap::new(
            vec![vec![], vec![]],
            vec![],
            vec![super::super::VertexTag::Puncture; 2],
        )
        .unwrap();
        assert!(matches!(
            tree_cotree_planarize(&m, &BTreeSet::new()),
            Err(MapError::NonCellular { components: 2, .. })
        ));
    }

    #[test]
    fn two_loop_torus_pipeline() {
        let r = planarize_pipeline(&torus_two_loops()).unwrap();
        assert_eq!(r.removed_edges.len(), 2);
        assert!(r.hit_arcs.len() <= 2);
        assert!((r.bound_value - planarize_arc_bound(1, 1.0, 16.0, 1.0)).abs() < 1e-9);
        assert!(r.within_bound() && r.euler_count_holds() && r.within_dv_bound());
        let all_hit = PlanarizeReport {
            hit_arcs: vec![0, 1],
            ..r
        };
        assert_eq!(
            cut_statistics(&all_hit, 1),
            CutStatistics {
                punctures_after: 3,
                arcs_after: 0,
                k_after: 1
            }
        );
    }

    #[test]
    fn random_maps_planarize_avoiding_grids() {
        let mut exact = 0;
        for g in 1..=3 {
            for seed in 0..40 {
                let d = random_drawn_system(g, seed).unwrap();
                let blown = grid_blowup(&d).unwrap();
                let grid = blown.grid_edges();
                let x = tree_cotree_planarize(blown.map(), &grid).unwrap();
                assert!(x.len() as u64 >= 2 * g);
                exact += usize::from(x.len() as u64 == 2 * g);
                assert!(x.is_disjoint(&grid));
                assert_eq!(blown.map().remove_edges(&x).genus().unwrap(), 0);
                let r = planarize_pipeline(&d).unwrap();
                assert!(r.hit_arcs.len() <= r.removed_edges.len());
                assert!(r.within_bound());
            }
        }
        assert!(exact >= 115);
    }

    /// Every connected planar remainder of this torus map needs three
    /// deletions.
    #[test]
    fn some_maps_need_more_than_two_g_edges() {
        let d = random_drawn_system(1, 8).unwrap();
        let m = d.map();
        let edges = m.edges();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let rest = m.remove_edges(&[edges[i], edges[j]].into_iter().collect());
                assert!(!rest.is_connected() || rest.genus().unwrap() > 0);
            }
        }
        let x = tree_cotree_planarize(m, &BTreeSet::new()).unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(m.remove_edges(&x).genus().unwrap(), 0);
    }
}
