use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::MapError;

pub type Dart = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexTag {
    Puncture,
    Crossing,
    Grid,
}

impl VertexTag {
    pub fn letter(self) -> char {
        match self {
            VertexTag::Puncture => 'P',
            VertexTag::Crossing => 'C',
            VertexTag::Grid => 'G',
        }
    }

    pub fn from_letter(s: &str) -> Option<Self> {
        match s {
            "P" => Some(VertexTag::Puncture),
            "C" => Some(VertexTag::Crossing),
            "G" => Some(VertexTag::Grid),
            _ => None,
        }
    }
}

/// Rotation system of a graph drawn on an orientable surface.
///
/// Vertices are the cycles of the vertex rotation, listed explicitly so that
/// isolated vertices (empty cycles) are representable. Edges are the orbits
/// of the fixed-point-free involution `alpha`; faces are the cycles of
/// `sigma . alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialMap {
    rotations: Vec<Vec<Dart>>,
    alpha: Vec<Dart>,
    tags: Vec<VertexTag>,
    sigma: Vec<Dart>,
    vertex_of: Vec<usize>,
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

impl CombinatorialMap {
    pub fn new(
        rotations: Vec<Vec<Dart>>,
        alpha: Vec<Dart>,
        tags: Vec<VertexTag>,
    ) -> Result<Self, MapError> {
        let darts = alpha.len();
        if !darts.is_multiple_of(2) {
            return Err(MapError::Invalid(format!("odd dart count {darts}")));
        }
        if tags.len() != rotations.len() {
            return Err(MapError::Invalid(format!(
                "{} tags for {} vertices",
                tags.len(),
                rotations.len()
            )));
        }
        let mut vertex_of = vec![usize::MAX; darts];
        let mut sigma = vec![usize::MAX; darts];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d >= darts {
                    return Err(MapError::Invalid(format!("dart {d} out of range")));
                }
                if vertex_of[d] != usize::MAX {
                    return Err(MapError::Invalid(format!("dart {d} in two vertex cycles")));
                }
                vertex_of[d] = v;
                sigma[d] = rot[(i + 1) % rot.len()];
            }
        }
        if let Some(d) = vertex_of.iter().position(|&v| v == usize::MAX) {
            return Err(MapError::Invalid(format!("dart {d} belongs to no vertex")));
        }
        for (d, &e) in alpha.iter().enumerate() {
            if e >= darts || e == d || alpha[e] != d {
                return Err(MapError::Invalid(format!(
                    "alpha is not a fixed-point-free involution at dart {d}"
                )));
            }
        }
        for (v, tag) in tags.iter().enumerate() {
            if *tag == VertexTag::Crossing && rotations[v].len() != 4 {
                return Err(MapError::Invalid(format!(
                    "crossing vertex {v} has degree {}",
                    rotations[v].len()
                )));
            }
        }
        Ok(Self {
            rotations,
            alpha,
            tags,
            sigma,
            vertex_of,
        })
    }

    pub fn dart_count(&self) -> usize {
        self.alpha.len()
    }

    pub fn edge_count(&self) -> usize {
        self.alpha.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotations
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotations[v]
    }

    pub fn tags(&self) -> &[VertexTag] {
        &self.tags
    }

    pub fn tag(&self, v: usize) -> VertexTag {
        self.tags[v]
    }

    pub fn alpha(&self, d: Dart) -> Dart {
        self.alpha[d]
    }

    pub fn alphas(&self) -> &[Dart] {
        &self.alpha
    }

    pub fn sigma(&self, d: Dart) -> Dart {
        self.sigma[d]
    }

    /// Face permutation `sigma . alpha`.
    pub fn phi(&self, d: Dart) -> Dart {
        self.sigma[self.alpha[d]]
    }

    pub fn vertex_of(&self, d: Dart) -> usize {
        self.vertex_of[d]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.rotations.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edge identifier: the smaller of its two darts.
    pub fn edge_of(&self, d: Dart) -> Dart {
        d.min(self.alpha[d])
    }

    pub fn edges(&self) -> Vec<Dart> {
        (0..self.dart_count())
            .filter(|&d| d < self.alpha[d])
            .collect()
    }

    pub fn count_of_tag(&self, tag: VertexTag) -> usize {
        self.tags.iter().filter(|&&t| t == tag).count()
    }

    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = vec![false; self.dart_count()];
        let mut faces = Vec::new();
        for start in 0..self.dart_count() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                cycle.push(d);
                d = self.phi(d);
            }
            faces.push(cycle);
        }
        faces
    }

    /// Face index of every dart, faces numbered as in [`Self::faces`].
    pub fn face_index(&self) -> (Vec<usize>, usize) {
        let mut index = vec![usize::MAX; self.dart_count()];
        let mut count = 0;
        for start in 0..self.dart_count() {
            if index[start] != usize::MAX {
                continue;
            }
            let mut d = start;
            while index[d] == usize::MAX {
                index[d] = count;
                d = self.phi(d);
            }
            count += 1;
        }
        (index, count)
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertex_count());
        for d in 0..self.dart_count() {
            uf.union(self.vertex_of[d], self.vertex_of[self.alpha[d]]);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.vertex_count() {
            let r = uf.find(v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Genus of each connected component, in [`Self::components`] order.
    pub fn component_genera(&self) -> Result<Vec<u64>, MapError> {
        let comps = self.components();
        let mut comp_of = vec![0; self.vertex_count()];
        for (c, vs) in comps.iter().enumerate() {
            for &v in vs {
                comp_of[v] = c;
            }
        }
        let mut euler: Vec<i64> = comps.iter().map(|vs| vs.len() as i64).collect();
        for d in 0..self.dart_count() {
            if d < self.alpha[d] {
                euler[comp_of[self.vertex_of[d]]] -= 1;
            }
        }
        let (index, faces) = self.face_index();
        let mut first = vec![usize::MAX; faces];
        for d in 0..self.dart_count() {
            if first[index[d]] == usize::MAX {
                first[index[d]] = d;
                euler[comp_of[self.vertex_of[d]]] += 1;
            }
        }
        for (c, vs) in comps.iter().enumerate() {
            if vs.iter().all(|&v| self.rotations[v].is_empty()) {
                euler[c] += 1;
            }
        }
        euler
            .into_iter()
            .map(|chi| {
                let twice = 2 - chi;
                if twice < 0 || twice % 2 != 0 {
                    Err(MapError::NonIntegralGenus { euler: chi })
                } else {
                    Ok((twice / 2) as u64)
                }
            })
            .collect()
    }

    /// Genus from Euler's formula. Requires a connected map.
    pub fn genus(&self) -> Result<u64, MapError> {
        let genera = self.component_genera()?;
        if genera.len() > 1 {
            return Err(MapError::Disconnected {
                components: genera.len(),
            });
        }
        Ok(genera.first().copied().unwrap_or(0))
    }

    /// Submap on `vertices`, which must carry no edge to the other vertices;
    /// vertex `i` of the result is `vertices[i]`.
    pub fn select_vertices(&self, vertices: &[usize]) -> CombinatorialMap {
        let mut new_id = vec![usize::MAX; self.dart_count()];
        let mut next = 0;
        for &v in vertices {
            for &d in &self.rotations[v] {
                new_id[d] = next;
                next += 1;
            }
        }
        let rotations = vertices
            .iter()
            .map(|&v| self.rotations[v].iter().map(|&d| new_id[d]).collect())
            .collect();
        let mut alpha = vec![0; next];
        for &v in vertices {
            for &d in &self.rotations[v] {
                alpha[new_id[d]] = new_id[self.alpha[d]];
            }
        }
        let tags = vertices.iter().map(|&v| self.tags[v]).collect();
        CombinatorialMap::new(rotations, alpha, tags).expect("closed vertex set")
    }

    /// Map with the given edges (identified by any of their darts) deleted.
    /// Darts are renumbered in increasing order; vertices are kept.
    pub fn remove_edges(&self, edges: &BTreeSet<Dart>) -> CombinatorialMap {
        let removed = |d: Dart| edges.contains(&d) || edges.contains(&self.alpha[d]);
        let mut new_id = vec![usize::MAX; self.dart_count()];
        let mut next = 0;
        for (d, slot) in new_id.iter_mut().enumerate() {
            if !removed(d) {
                *slot = next;
                next += 1;
            }
        }
        let rotations = self
            .rotations
            .iter()
            .map(|rot| {
                rot.iter()
                    .filter(|&&d| !removed(d))
                    .map(|&d| new_id[d])
                    .collect()
            })
            .collect();
        let mut alpha = vec![0; next];
        for d in 0..self.dart_count() {
            if !removed(d) {
                alpha[new_id[d]] = new_id[self.alpha[d]];
            }
        }
        // A crossing that lost an edge is left as a plain vertex.
        let tags = self
            .tags
            .iter()
            .enumerate()
            .map(|(v, &t)| {
                if t == VertexTag::Crossing && self.rotations[v].iter().any(|&d| removed(d)) {
                    VertexTag::Puncture
                } else {
                    t
                }
            })
            .collect();
        CombinatorialMap::new(rotations, alpha, tags).expect("edge deletion keeps a valid map")
    }
}
