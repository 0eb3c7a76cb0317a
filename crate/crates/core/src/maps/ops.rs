use super::{CombinatorialMap, Dart, DrawnSystem, MapError, VertexTag};

/// Rotation of `v` started at its smallest dart.
fn canonical_rotation(map: &CombinatorialMap, v: usize) -> Vec<Dart> {
    let rot = map.rotation(v);
    let start = rot
        .iter()
        .enumerate()
        .min_by_key(|(_, &d)| d)
        .map_or(0, |(i, _)| i);
    rot[start..].iter().chain(&rot[..start]).copied().collect()
}

fn surface_signature(map: &CombinatorialMap) -> Option<(usize, u64)> {
    let genera = map.component_genera().ok()?;
    Some((genera.len(), genera.iter().sum()))
}

/// Splits every puncture vertex of degree above `max_degree` into vertices
/// holding contiguous blocks of its rotation. The cut positions are shifted
/// cyclically until genus and component count are kept; if no shift does,
/// the unshifted cut is used. New vertices are appended, darts keep their
/// numbers.
pub fn vertex_split(drawn: &DrawnSystem, max_degree: usize) -> Result<DrawnSystem, MapError> {
    if max_degree == 0 {
        return Err(MapError::Invalid("degree cap must be positive".into()));
    }
    let map = drawn.map();
    let target = surface_signature(map);
    let mut rotations: Vec<Vec<Dart>> = map.rotations().to_vec();
    let mut tags: Vec<VertexTag> = map.tags().to_vec();
    for v in 0..map.vertex_count() {
        if map.tag(v) != VertexTag::Puncture || map.degree(v) <= max_degree {
            continue;
        }
        let rot = canonical_rotation(map, v);
        let mut chosen = None;
        for offset in 0..max_degree.min(rot.len()) {
            let blocks = cut(&rot, offset, max_degree);
            let mut trial_rot = rotations.clone();
            let mut trial_tags = tags.clone();
            place(&mut trial_rot, &mut trial_tags, v, &blocks);
            let trial = CombinatorialMap::new(trial_rot, map.alphas().to_vec(), trial_tags)?;
            if surface_signature(&trial) == target {
                chosen = Some(blocks);
                break;
            }
        }
        let blocks = chosen.unwrap_or_else(|| cut(&rot, 0, max_degree));
        place(&mut rotations, &mut tags, v, &blocks);
    }
    let map = CombinatorialMap::new(rotations, map.alphas().to_vec(), tags)?;
    DrawnSystem::new(map, drawn.routes().to_vec())
}

fn cut(rot: &[Dart], offset: usize, size: usize) -> Vec<Vec<Dart>> {
    let shifted: Vec<Dart> = rot[offset..]
        .iter()
        .chain(&rot[..offset])
        .copied()
        .collect();
    shifted.chunks(size).map(<[Dart]>::to_vec).collect()
}

fn place(
    rotations: &mut Vec<Vec<Dart>>,
    tags: &mut Vec<VertexTag>,
    v: usize,
    blocks: &[Vec<Dart>],
) {
    rotations[v] = blocks[0].clone();
    for b in &blocks[1..] {
        rotations.push(b.clone());
        tags.push(VertexTag::Puncture);
    }
}

/// Replaces every puncture vertex of degree `d` by a `max(d, 1)` square grid.
///
/// The rotation, started at its smallest dart, is laid along the bottom row
/// from left to right, one arc per grid vertex. Grid vertex `(0, 0)` keeps
/// the puncture's index; the others and all grid darts are appended.
pub fn grid_blowup(drawn: &DrawnSystem) -> Result<DrawnSystem, MapError> {
    let map = drawn.map();
    let mut rotations: Vec<Vec<Dart>> = map.rotations().to_vec();
    let mut tags: Vec<VertexTag> = map.tags().to_vec();
    let mut alpha = map.alphas().to_vec();
    for v in 0..map.vertex_count() {
        if map.tag(v) != VertexTag::Puncture {
            continue;
        }
        let arcs = canonical_rotation(map, v);
        let side = arcs.len().max(1);
        let mut id = vec![vec![usize::MAX; side]; side];
        for (r, row) in id.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                *slot = if r == 0 && c == 0 {
                    v
                } else {
                    rotations.push(Vec::new());
                    tags.push(VertexTag::Grid);
                    rotations.len() - 1
                };
            }
        }
        tags[v] = VertexTag::Grid;
        // Darts of each grid vertex by direction: east, north, west, south.
        let mut dirs = vec![vec![[None::<Dart>; 4]; side]; side];
        let new_edge = |alpha: &mut Vec<Dart>| {
            let d = alpha.len();
            alpha.push(d + 1);
            alpha.push(d);
            (d, d + 1)
        };
        for r in 0..side {
            for c in 0..side {
                if c + 1 < side {
                    let (a, b) = new_edge(&mut alpha);
                    dirs[r][c][0] = Some(a);
                    dirs[r][c + 1][2] = Some(b);
                }
                if r + 1 < side {
                    let (a, b) = new_edge(&mut alpha);
                    dirs[r][c][1] = Some(a);
                    dirs[r + 1][c][3] = Some(b);
                }
            }
        }
        for (c, &d) in arcs.iter().enumerate() {
            dirs[0][c][3] = Some(d);
        }
        for r in 0..side {
            for c in 0..side {
                rotations[id[r][c]] = dirs[r][c].iter().flatten().copied().collect();
            }
        }
    }
    let map = CombinatorialMap::new(rotations, alpha, tags)?;
    DrawnSystem::new(map, drawn.routes().to_vec())
}

/// Map in which every crossing of the drawing is a degree-4 vertex. Drawings
/// already carry their crossings as vertices, so this checks the routes and
/// returns the map.
pub fn crossing_augment(drawn: &DrawnSystem) -> Result<CombinatorialMap, MapError> {
    let (map, routes) = drawn.clone().into_parts();
    let checked = DrawnSystem::new(map, routes)?;
    Ok(checked.map().clone())
}
