use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::DecomposeError;
use crate::maps::CombinatorialMap;

/// Target constant for `|separator| <= C * sqrt(V)`. Not guaranteed by the
/// level construction; reported sizes can be compared against it.
pub const SEPARATOR_CONSTANT: f64 = 4.0;

/// Fundamental cycles tried as separator candidates, shortest first.
const CYCLE_CANDIDATES: usize = 32;
/// Vertices whose non-tree edges are scanned for fundamental cycles.
const CYCLE_SCAN_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub part_a: Vec<usize>,
    pub part_b: Vec<usize>,
    pub separator: Vec<usize>,
}

struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn of_map(map: &CombinatorialMap) -> Self {
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); map.vertex_count()];
        for d in 0..map.dart_count() {
            let (u, v) = (map.vertex_of(d), map.vertex_of(map.alpha(d)));
            if u != v {
                adj[u].insert(v);
            }
        }
        Self {
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// Components of the graph minus `removed`, each sorted, ordered by
    /// smallest vertex.
    fn components(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        for s in 0..self.adj.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for &w in &self.adj[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

fn weight_of(vs: &[usize], weights: &[f64]) -> f64 {
    vs.iter().map(|&v| weights[v]).sum()
}

/// Splits components into two groups of weight at most `2W/3` each. A
/// component of weight at least `W/3` goes alone; otherwise components are
/// taken heaviest first until the first group reaches `W/3`.
fn group(components: Vec<Vec<usize>>, weights: &[f64], total: f64) -> (Vec<usize>, Vec<usize>) {
    let mut comps: Vec<(f64, Vec<usize>)> = components
        .into_iter()
        .map(|c| (weight_of(&c, weights), c))
        .collect();
    comps.sort_by(|x, y| y.0.total_cmp(&x.0).then_with(|| x.1[0].cmp(&y.1[0])));
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut wa = 0.0;
    let alone = comps.first().is_some_and(|c| c.0 >= total / 3.0);
    for (i, (w, c)) in comps.into_iter().enumerate() {
        let into_a = if alone { i == 0 } else { wa < total / 3.0 };
        if into_a {
            wa += w;
            a.extend(c);
        } else {
            b.extend(c);
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    (a, b)
}

/// Weighted separator of a planar map.
///
/// Components already light enough are grouped without a separator.
/// Otherwise the heavy component is cut by the smallest of: breadth-first
/// levels, pairs of levels, and short fundamental cycles of the
/// breadth-first tree, among those leaving every piece at most `W/2`. The
/// pieces are then grouped into two parts of weight at most `2W/3`.
pub fn planar_separator(
    map: &CombinatorialMap,
    weights: &[f64],
) -> Result<Separation, DecomposeError> {
    let v = map.vertex_count();
    if weights.len() != v {
        return Err(DecomposeError::WeightCount {
            weights: weights.len(),
            vertices: v,
        });
    }
    let genera = map.component_genera()?;
    if let Some(&g) = genera.iter().find(|&&g| g > 0) {
        return Err(DecomposeError::NotPlanar { genus: g });
    }
    if v <= 1 {
        return Ok(Separation {
            part_a: (0..v).collect(),
            part_b: Vec::new(),
            separator: Vec::new(),
        });
    }
    let total: f64 = weights.iter().sum();
    let graph = Graph::of_map(map);
    let none = vec![false; v];
    let comps = graph.components(&none);
    let heavy = comps
        .iter()
        .enumerate()
        .max_by(|x, y| {
            weight_of(x.1, weights)
                .total_cmp(&weight_of(y.1, weights))
                .then(y.0.cmp(&x.0))
        })
        .map(|(i, _)| i)
        .expect("non-empty graph");
    if weight_of(&comps[heavy], weights) <= 2.0 * total / 3.0 {
        let (part_a, part_b) = group(comps, weights, total);
        return Ok(Separation {
            part_a,
            part_b,
            separator: Vec::new(),
        });
    }

    let separator = heavy_separator(&graph, &comps[heavy], weights, total);
    let mut removed = vec![false; v];
    for &s in &separator {
        removed[s] = true;
    }
    let (part_a, part_b) = group(graph.components(&removed), weights, total);
    Ok(Separation {
        part_a,
        part_b,
        separator,
    })
}

fn heavy_separator(graph: &Graph, comp: &[usize], weights: &[f64], total: f64) -> Vec<usize> {
    let n = graph.adj.len();
    let root = comp[0];
    let mut level = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![root];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in &graph.adj[u] {
            if level[w] == usize::MAX {
                level[w] = level[u] + 1;
                parent[w] = u;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    let depth = order.iter().map(|&u| level[u]).max().unwrap_or(0) + 1;
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); depth];
    for &u in &order {
        levels[level[u]].push(u);
    }
    for l in &mut levels {
        l.sort_unstable();
    }
    let lw: Vec<f64> = levels.iter().map(|l| weight_of(l, weights)).collect();
    let mut prefix = vec![0.0; depth + 1];
    for i in 0..depth {
        prefix[i + 1] = prefix[i] + lw[i];
    }
    // Weight outside the component sits in separate pieces.
    let outside = total - prefix[depth];
    let half = total / 2.0;
    let range = |lo: usize, hi: usize| prefix[hi] - prefix[lo];

    let mut best: Option<Vec<usize>> = None;
    let offer = |cand: Vec<usize>, best: &mut Option<Vec<usize>>| {
        if best
            .as_ref()
            .is_none_or(|b| (cand.len(), &cand) < (b.len(), b))
        {
            *best = Some(cand);
        }
    };
    for l in 0..depth {
        if range(0, l) <= half && range(l + 1, depth) <= half {
            offer(levels[l].clone(), &mut best);
        }
    }
    if depth <= 2048 {
        for l1 in 0..depth {
            if range(0, l1) > half {
                break;
            }
            for l2 in l1 + 2..depth {
                if range(l1 + 1, l2) > half {
                    break;
                }
                if range(l2 + 1, depth) <= half {
                    let mut cand = levels[l1].clone();
                    cand.extend(&levels[l2]);
                    cand.sort_unstable();
                    offer(cand, &mut best);
                }
            }
        }
    }

    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for &u in comp.iter().take(CYCLE_SCAN_LIMIT) {
        for &w in &graph.adj[u] {
            if u < w && parent[w] != u && parent[u] != w {
                cycles.push(fundamental_cycle(&parent, &level, u, w));
            }
        }
    }
    cycles.sort_by(|x, y| (x.len(), x).cmp(&(y.len(), y)));
    cycles.dedup();
    for cycle in cycles.into_iter().take(CYCLE_CANDIDATES) {
        let mut removed = vec![true; n];
        for &u in comp {
            removed[u] = false;
        }
        for &c in &cycle {
            removed[c] = true;
        }
        let pieces = graph.components(&removed);
        if pieces.iter().all(|p| weight_of(p, weights) <= half) && outside <= half {
            offer(cycle, &mut best);
        }
    }
    best.expect("the median level always separates")
}

fn fundamental_cycle(parent: &[usize], level: &[usize], a: usize, b: usize) -> Vec<usize> {
    let (mut x, mut y) = (a, b);
    let mut path = vec![x, y];
    while x != y {
        if level[x] >= level[y] {
            x = parent[x];
            path.push(x);
        } else {
            y = parent[y];
            path.push(y);
        }
    }
    path.sort_unstable();
    path.dedup();
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::VertexTag;

    /// Path or cycle on `len` vertices.
    fn chain(len: usize, closed: bool) -> CombinatorialMap {
        let edges = if closed { len } else { len - 1 };
        let mut rotations = vec![Vec::new(); len];
        let mut alpha = vec![0; 2 * edges];
        for e in 0..edges {
            let (u, w) = (e, (e + 1) % len);
            rotations[u].push(2 * e);
            rotations[w].push(2 * e + 1);
            alpha[2 * e] = 2 * e + 1;
            alpha[2 * e + 1] = 2 * e;
        }
        CombinatorialMap::new(rotations, alpha, vec![VertexTag::Puncture; len]).unwrap()
    }

    fn check(map: &CombinatorialMap, weights: &[f64], sep: &Separation) {
        let total: f64 = weights.iter().sum();
        assert!(weight_of(&sep.part_a, weights) <= 2.0 * total / 3.0 + 1e-9);
        assert!(weight_of(&sep.part_b, weights) <= 2.0 * total / 3.0 + 1e-9);
        let mut all: Vec<usize> = sep
            .part_a
            .iter()
            .chain(&sep.part_b)
            .chain(&sep.separator)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..map.vertex_count()).collect::<Vec<_>>());
        let a: BTreeSet<usize> = sep.part_a.iter().copied().collect();
        for d in 0..map.dart_count() {
            let (u, w) = (map.vertex_of(d), map.vertex_of(map.alpha(d)));
            let side = |x: usize| {
                if a.contains(&x) {
                    Some(0)
                } else if sep.separator.contains(&x) {
                    None
                } else {
                    Some(1)
                }
            };
            if let (Some(p), Some(q)) = (side(u), side(w)) {
                assert_eq!(p, q);
            }
        }
    }

    #[test]
    fn path_of_three() {
        let m = chain(3, false);
        let s = planar_separator(&m, &[1.0; 3]).unwrap();
        assert_eq!(s.separator, vec![1]);
        check(&m, &[1.0; 3], &s);
    }

    #[test]
    fn even_cycles_need_two() {
        for half in 2..12 {
            let m = chain(2 * half, true);
            let w = vec![1.0; 2 * half];
            let s = planar_separator(&m, &w).unwrap();
            assert_eq!(s.separator.len(), 2, "cycle {}", 2 * half);
            check(&m, &w, &s);
        }
    }

    #[test]
    fn single_vertex_and_light_components() {
        let one = CombinatorialMap::new(vec![vec![]], vec![], vec![VertexTag::Puncture]).unwrap();
        assert!(planar_separator(&one, &[1.0]).unwrap().separator.is_empty());
        let two = CombinatorialMap::new(
            vec![vec![], vec![], vec![]],
            vec![],
            vec![VertexTag::Puncture; 3],
        )
        .unwrap();
        let s = planar_separator(&two, &[1.0; 3]).unwrap();
        assert!(s.separator.is_empty());
        check(&two, &[1.0; 3], &s);
    }

    #[test]
    fn torus_is_rejected() {
        let t = CombinatorialMap::new(
            vec![vec![0, 2, 1, 3]],
            vec![1, 0, 3, 2],
            vec![VertexTag::Puncture],
        )
        .unwrap();
        assert!(matches!(
            planar_separator(&t, &[1.0]),
            Err(DecomposeError::NotPlanar { genus: 1 })
        ));
    }

    #[test]
    fn long_paths_balance() {
        for len in 4..40 {
            let m = chain(len, false);
            let w: Vec<f64> = (0..len).map(|i| (i % 3) as f64).collect();
            let s = planar_separator(&m, &w).unwrap();
            check(&m, &w, &s);
        }
    }
}
