//! Seeded generators of drawn systems on surfaces of prescribed genus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CombinatorialMap, Dart, DrawnSystem, MapError, VertexTag};

const MAX_ATTEMPTS: usize = 200_000;

struct Layout {
    punctures: usize,
    /// Crossings met by each arc, in order.
    paths: Vec<Vec<usize>>,
    ends: Vec<(usize, usize)>,
    crossings: usize,
}

/// Builds the map of a layout. `first_arc[c]` is the arc entering the first
/// slot of crossing `c`'s rotation; `flip[c]` reverses the other strand.
fn build(
    layout: &Layout,
    puncture_rotations: &[Vec<usize>],
    flip: &[bool],
    first_arc: &[usize],
) -> (Vec<Vec<Dart>>, Vec<Dart>, Vec<VertexTag>, Vec<Vec<Dart>>) {
    let p = layout.punctures;
    let mut rotations = vec![Vec::new(); p + layout.crossings];
    let mut tags = vec![VertexTag::Puncture; p];
    tags.extend(std::iter::repeat_n(VertexTag::Crossing, layout.crossings));
    let mut alpha = Vec::new();
    let mut routes = Vec::new();
    // (in, out) darts of each arc at each crossing.
    let mut at_crossing = vec![Vec::new(); layout.crossings];
    // End darts at punctures in creation order.
    let mut puncture_darts: Vec<Vec<Dart>> = vec![Vec::new(); p];
    for (arc, path) in layout.paths.iter().enumerate() {
        let (s, e) = layout.ends[arc];
        let mut route = Vec::new();
        let start = alpha.len();
        alpha.push(usize::MAX);
        puncture_darts[s].push(start);
        route.push(start);
        let mut pending = start;
        for &c in path {
            let inn = alpha.len();
            let out = inn + 1;
            alpha.extend([pending, usize::MAX]);
            alpha[pending] = inn;
            at_crossing[c].push((arc, inn, out));
            route.push(out);
            pending = out;
        }
        let end = alpha.len();
        alpha.push(pending);
        alpha[pending] = end;
        puncture_darts[e].push(end);
        routes.push(route);
    }
    for (v, order) in puncture_rotations.iter().enumerate() {
        rotations[v] = order.iter().map(|&i| puncture_darts[v][i]).collect();
    }
    for c in 0..layout.crossings {
        let (mut a, mut b) = (at_crossing[c][0], at_crossing[c][1]);
        if a.0 != first_arc[c] {
            std::mem::swap(&mut a, &mut b);
        }
        rotations[p + c] = if flip[c] {
            vec![a.1, b.2, a.2, b.1]
        } else {
            vec![a.1, b.1, a.2, b.2]
        };
    }
    (rotations, alpha, tags, routes)
}

/// Connected drawn system of the given genus: one to three punctures, arcs
/// with random ends (loops allowed) and crossings each shared by two
/// distinct arcs, with random rotations, rejected until the genus matches.
pub fn random_drawn_system(genus: u64, seed: u64) -> Result<DrawnSystem, MapError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = genus as usize;
    for _ in 0..MAX_ATTEMPTS {
        let punctures = rng.gen_range(1..=3);
        let arcs = rng.gen_range(g.max(1) + 1..=g + 3);
        let crossings = if g == 0 {
            rng.gen_range(0..=2)
        } else {
            rng.gen_range(g..=2 * g + 2)
        };
        let mut paths = vec![Vec::new(); arcs];
        for c in 0..crossings {
            let a = rng.gen_range(0..arcs);
            let mut b = rng.gen_range(0..arcs - 1);
            if b >= a {
                b += 1;
            }
            paths[a].push(c);
            paths[b].push(c);
        }
        for path in &mut paths {
            path.shuffle(&mut rng);
        }
        let ends: Vec<(usize, usize)> = (0..arcs)
            .map(|_| (rng.gen_range(0..punctures), rng.gen_range(0..punctures)))
            .collect();
        let layout = Layout {
            punctures,
            paths,
            ends,
            crossings,
        };
        let mut degree = vec![0; punctures];
        for &(s, e) in &layout.ends {
            degree[s] += 1;
            degree[e] += 1;
        }
        let puncture_rotations: Vec<Vec<usize>> = degree
            .iter()
            .map(|&d| {
                let mut order: Vec<usize> = (0..d).collect();
                order.shuffle(&mut rng);
                order
            })
            .collect();
        let flip: Vec<bool> = (0..crossings).map(|_| rng.gen()).collect();
        let first_arc: Vec<usize> = (0..crossings)
            .map(|c| {
                let owners: Vec<usize> = (0..arcs)
                    .filter(|&a| layout.paths[a].contains(&c))
                    .collect();
                owners[rng.gen_range(0..owners.len())]
            })
            .collect();
        let (rotations, alpha, tags, routes) =
            build(&layout, &puncture_rotations, &flip, &first_arc);
        let map = CombinatorialMap::new(rotations, alpha, tags)?;
        if !map.is_connected() || map.genus()? != genus {
            continue;
        }
        return DrawnSystem::new(map, routes);
    }
    Err(MapError::Invalid(format!(
        "no drawn system of genus {genus} found"
    )))
}

/// One puncture with two loops crossing once, drawn on the torus.
pub fn torus_two_loops() -> DrawnSystem {
    let layout = Layout {
        punctures: 1,
        paths: vec![vec![0], vec![0]],
        ends: vec![(0, 0), (0, 0)],
        crossings: 1,
    };
    let mut order = vec![0, 1, 2, 3];
    loop {
        let (rotations, alpha, tags, routes) =
            build(&layout, std::slice::from_ref(&order), &[false], &[0]);
        let map = CombinatorialMap::new(rotations, alpha, tags).expect("valid map");
        if map.genus() == Ok(1) {
            return DrawnSystem::new(map, routes).expect("valid routes");
        }
        next_permutation(&mut order[1..]);
    }
}

fn next_permutation(v: &mut [usize]) {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        v.reverse();
        return;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("larger element");
    v.swap(i - 1, j);
    v[i..].reverse();
}
