use std::collections::{BTreeMap, BTreeSet};

use super::map::UnionFind;
use super::{CombinatorialMap, Dart, MapError, VertexTag};
use crate::monotone::{ArcSystem, Realization, Side};

/// A drawing of an arc system: the map has a vertex at every puncture (or a
/// grid of vertices per puncture after blow-up) and at every crossing, and
/// each arc is the sequence of darts it leaves along.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrawnSystem {
    map: CombinatorialMap,
    routes: Vec<Vec<Dart>>,
    /// Vertices of each puncture, smallest first. A plain puncture has one
    /// vertex; a blown-up puncture has its whole grid.
    punctures: Vec<Vec<usize>>,
    puncture_of_vertex: Vec<Option<usize>>,
}

impl DrawnSystem {
    /// Validates routes against the map and groups puncture vertices: every
    /// `P` vertex is a puncture, and `G` vertices joined by edges that lie
    /// on no route form one blown-up puncture.
    pub fn new(map: CombinatorialMap, routes: Vec<Vec<Dart>>) -> Result<Self, MapError> {
        let mut on_route: Vec<Option<usize>> = vec![None; map.dart_count()];
        for (arc, route) in routes.iter().enumerate() {
            if route.is_empty() {
                return Err(MapError::BadRoute {
                    arc,
                    reason: "empty route".into(),
                });
            }
            for (i, &d) in route.iter().enumerate() {
                if d >= map.dart_count() {
                    return Err(MapError::BadRoute {
                        arc,
                        reason: format!("dart {d} out of range"),
                    });
                }
                for e in [d, map.alpha(d)] {
                    if on_route[e].is_some() {
                        return Err(MapError::BadRoute {
                            arc,
                            reason: format!("edge of dart {d} used twice"),
                        });
                    }
                    on_route[e] = Some(arc);
                }
                let v = map.vertex_of(d);
                let is_end = i == 0;
                if is_end && map.tag(v) == VertexTag::Crossing {
                    return Err(MapError::BadRoute {
                        arc,
                        reason: "route starts at a crossing".into(),
                    });
                }
                if i > 0 {
                    let entry = map.alpha(route[i - 1]);
                    if map.vertex_of(entry) != v || map.tag(v) != VertexTag::Crossing {
                        return Err(MapError::BadRoute {
                            arc,
                            reason: format!(
                                "dart {d} does not continue the route through a crossing"
                            ),
                        });
                    }
                    let rot = map.rotation(v);
                    let p = rot
                        .iter()
                        .position(|&x| x == entry)
                        .expect("entry dart at vertex");
                    if rot[(p + 2) % 4] != d {
                        return Err(MapError::BadRoute {
                            arc,
                            reason: format!("route turns at crossing vertex {v}"),
                        });
                    }
                }
            }
            let last = map.alpha(*route.last().expect("non-empty"));
            if map.tag(map.vertex_of(last)) == VertexTag::Crossing {
                return Err(MapError::BadRoute {
                    arc,
                    reason: "route ends at a crossing".into(),
                });
            }
        }
        for v in 0..map.vertex_count() {
            if map.tag(v) != VertexTag::Crossing {
                continue;
            }
            let arcs: BTreeSet<Option<usize>> =
                map.rotation(v).iter().map(|&d| on_route[d]).collect();
            if arcs.len() != 2 || arcs.contains(&None) {
                return Err(MapError::BadCrossing { vertex: v });
            }
        }

        let mut uf = UnionFind::new(map.vertex_count());
        for d in 0..map.dart_count() {
            let (a, b) = (map.vertex_of(d), map.vertex_of(map.alpha(d)));
            if on_route[d].is_none()
                && map.tag(a) == VertexTag::Grid
                && map.tag(b) == VertexTag::Grid
            {
                uf.union(a, b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..map.vertex_count() {
            if map.tag(v) != VertexTag::Crossing {
                groups.entry(uf.find(v)).or_default().push(v);
            }
        }
        let punctures: Vec<Vec<usize>> = groups.into_values().collect();
        let mut puncture_of_vertex = vec![None; map.vertex_count()];
        for (p, vs) in punctures.iter().enumerate() {
            for &v in vs {
                puncture_of_vertex[v] = Some(p);
            }
        }
        Ok(Self {
            map,
            routes,
            punctures,
            puncture_of_vertex,
        })
    }

    pub fn map(&self) -> &CombinatorialMap {
        &self.map
    }

    pub fn routes(&self) -> &[Vec<Dart>] {
        &self.routes
    }

    pub fn arc_count(&self) -> usize {
        self.routes.len()
    }

    pub fn puncture_count(&self) -> usize {
        self.punctures.len()
    }

    pub fn puncture_vertices(&self) -> &[Vec<usize>] {
        &self.punctures
    }

    pub fn puncture_of_vertex(&self, v: usize) -> Option<usize> {
        self.puncture_of_vertex[v]
    }

    pub fn crossing_count(&self) -> usize {
        self.map.count_of_tag(VertexTag::Crossing)
    }

    pub fn is_blown_up(&self) -> bool {
        self.map.count_of_tag(VertexTag::Grid) > 0
    }

    /// Puncture at each end of an arc.
    pub fn arc_ends(&self, arc: usize) -> (usize, usize) {
        let route = &self.routes[arc];
        let first = self.map.vertex_of(route[0]);
        let last = self
            .map
            .vertex_of(self.map.alpha(*route.last().expect("non-empty")));
        (
            self.puncture_of_vertex[first].expect("route starts at a puncture"),
            self.puncture_of_vertex[last].expect("route ends at a puncture"),
        )
    }

    /// Number of arc ends at each puncture (a loop counts twice).
    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0; self.puncture_count()];
        for arc in 0..self.arc_count() {
            let (a, b) = self.arc_ends(arc);
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// `sum max(d(v), 1)^2`.
    pub fn blown_degree_square_sum(&self) -> u64 {
        self.degrees().iter().map(|&d| d.max(1) * d.max(1)).sum()
    }

    /// Edge of every dart on a route mapped to its arc.
    pub fn arc_of_edge(&self) -> BTreeMap<Dart, usize> {
        let mut out = BTreeMap::new();
        for (arc, route) in self.routes.iter().enumerate() {
            for &d in route {
                out.insert(self.map.edge_of(d), arc);
            }
        }
        out
    }

    /// Edges lying on no arc route; after blow-up these are the grid edges.
    pub fn grid_edges(&self) -> BTreeSet<Dart> {
        let on_route = self.arc_of_edge();
        self.map
            .edges()
            .into_iter()
            .filter(|e| !on_route.contains_key(e))
            .collect()
    }

    pub(crate) fn into_parts(self) -> (CombinatorialMap, Vec<Vec<Dart>>) {
        (self.map, self.routes)
    }

    /// Planar drawing of a monotone system following a realization.
    ///
    /// The realization's station orders are turned into a wiring diagram:
    /// between stations strands are brought into the next order by adjacent
    /// transpositions, each one a crossing vertex. Puncture `t` of the
    /// system is vertex `t - 1`.
    pub fn from_realization(
        system: &ArcSystem,
        realization: &Realization,
    ) -> Result<Self, MapError> {
        let mut b = WiringBuilder::new(system.len());
        let n = system.puncture_count();
        let arcs = system.arcs();
        for _ in 0..n {
            b.rotations.push(Vec::new());
            b.tags.push(VertexTag::Puncture);
        }
        // Strands top to bottom as (arc, pending outgoing dart).
        let mut strands: Vec<(usize, Dart)> = Vec::new();
        for t in 1..=n {
            let class = |a: usize| -> u8 {
                match arcs[a].side_at(t) {
                    Some(Side::Above) => 0,
                    None => 1,
                    Some(Side::Below) => 2,
                }
            };
            let mut target: Vec<usize> = strands.iter().map(|s| s.0).collect();
            target.sort_by_key(|&a| class(a));
            b.permute(&mut strands, &target);

            let puncture = t - 1;
            let (mut above, mut rest): (Vec<(usize, Dart)>, Vec<(usize, Dart)>) =
                strands.drain(..).partition(|s| class(s.0) == 0);
            let below: Vec<(usize, Dart)> =
                rest.split_off(rest.iter().take_while(|s| class(s.0) == 1).count());
            let enders = rest;
            let starters: Vec<usize> = if t < n {
                realization
                    .gap_order(t - 1)
                    .iter()
                    .copied()
                    .filter(|&a| arcs[a].left() == t)
                    .collect()
            } else {
                Vec::new()
            };
            let mut west = Vec::new();
            for &(_, pending) in &enders {
                let d = b.dart();
                b.pair(pending, d);
                west.push(d);
            }
            let mut east = Vec::new();
            let mut emitted = Vec::new();
            for &arc in &starters {
                let d = b.dart();
                b.routes[arc].push(d);
                east.push(d);
                emitted.push((arc, d));
            }
            // Counterclockwise: east side bottom to top, then west side top
            // to bottom.
            let rot = &mut b.rotations[puncture];
            rot.extend(east.iter().rev());
            rot.extend(west.iter());

            strands = above.drain(..).chain(emitted).chain(below).collect();
            if t < n {
                let target = realization.gap_order(t - 1).to_vec();
                b.permute(&mut strands, &target);
            }
        }
        let map = CombinatorialMap::new(b.rotations, b.alpha, b.tags)?;
        DrawnSystem::new(map, b.routes)
    }
}

struct WiringBuilder {
    rotations: Vec<Vec<Dart>>,
    tags: Vec<VertexTag>,
    alpha: Vec<Dart>,
    routes: Vec<Vec<Dart>>,
}

impl WiringBuilder {
    fn new(arcs: usize) -> Self {
        Self {
            rotations: Vec::new(),
            tags: Vec::new(),
            alpha: Vec::new(),
            routes: vec![Vec::new(); arcs],
        }
    }

    /// Unpaired dart; the caller places it in a rotation.
    fn dart(&mut self) -> Dart {
        self.alpha.push(usize::MAX);
        self.alpha.len() - 1
    }

    fn pair(&mut self, a: Dart, b: Dart) {
        self.alpha[a] = b;
        self.alpha[b] = a;
    }

    /// Crossing of the strands at positions `p` (upper) and `p + 1`.
    fn cross(&mut self, strands: &mut [(usize, Dart)], p: usize) {
        let (upper, lower) = (strands[p], strands[p + 1]);
        let upper_in = self.dart();
        let lower_in = self.dart();
        let upper_out = self.dart();
        let lower_out = self.dart();
        self.pair(upper.1, upper_in);
        self.pair(lower.1, lower_in);
        // Counterclockwise from north-east: NE, NW, SW, SE.
        self.rotations
            .push(vec![lower_out, upper_in, lower_in, upper_out]);
        self.tags.push(VertexTag::Crossing);
        self.routes[upper.0].push(upper_out);
        self.routes[lower.0].push(lower_out);
        strands[p] = (lower.0, lower_out);
        strands[p + 1] = (upper.0, upper_out);
    }

    /// Bubble sort of the strands into `target` order.
    fn permute(&mut self, strands: &mut [(usize, Dart)], target: &[usize]) {
        let mut pos = BTreeMap::new();
        for (i, &a) in target.iter().enumerate() {
            pos.insert(a, i);
        }
        let len = strands.len();
        for pass in 0..len {
            let mut swapped = false;
            for p in 0..len.saturating_sub(1 + pass) {
                if pos[&strands[p].0] > pos[&strands[p + 1].0] {
                    self.cross(strands, p);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotone::{enumerate_universe, max_k_system_greedy, realize, MonotoneArc};

    fn drawn(system: &ArcSystem) -> DrawnSystem {
        DrawnSystem::from_realization(system, &realize(system)).unwrap()
    }

    #[test]
    fn crossing_pair_draws_one_crossing() {
        let s = ArcSystem::new(
            4,
            1,
            vec![
                MonotoneArc::from_word(1, 4, "ab").unwrap(),
                MonotoneArc::from_word(1, 4, "ba").unwrap(),
            ],
        )
        .unwrap();
        let d = drawn(&s);
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.puncture_count(), 4);
        assert_eq!(d.degrees(), vec![2, 0, 0, 2]);
        assert!(d.map().component_genera().unwrap().iter().all(|&g| g == 0));
    }

    #[test]
    fn drawings_are_planar_and_match_realizations() {
        for seed in 0..20 {
            for (n, k) in [(5, 1), (6, 2), (7, 1)] {
                let s = max_k_system_greedy(n, k, seed).unwrap();
                let r = realize(&s);
                let d = DrawnSystem::from_realization(&s, &r).unwrap();
                assert_eq!(d.crossing_count() as u64, r.crossings());
                assert!(d.map().component_genera().unwrap().iter().all(|&g| g == 0));
                assert_eq!(d.degrees(), s.degrees());
                for a in 0..s.len() {
                    let (l, rr) = d.arc_ends(a);
                    assert_eq!((l + 1, rr + 1), (s.arcs()[a].left(), s.arcs()[a].right()));
                }
            }
        }
    }

    #[test]
    fn full_universe_is_planar() {
        let s = ArcSystem::new(5, 9, enumerate_universe(5)).unwrap();
        let d = drawn(&s);
        assert!(d.map().component_genera().unwrap().iter().all(|&g| g == 0));
    }
}
