//! Piecewise-linear realizations of monotone arc systems.
//!
//! Arcs are drawn through stations at every puncture `x = t` and every gap
//! `x = t + 1/2`. A realization is the top-to-bottom order of the arcs that
//! span each gap. At a puncture the arcs passing above sit above it, arcs
//! ending or starting there sit on it, arcs passing below sit below it; arcs
//! of the same class keep the order of the gap on their left. Two arcs cross
//! once in every strip between consecutive stations where their strict
//! vertical order flips.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{ArcSystem, MonotoneArc};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    puncture_count: usize,
    /// `gap_orders[g]`: arcs spanning the gap between punctures `g+1` and
    /// `g+2`, top to bottom.
    gap_orders: Vec<Vec<usize>>,
    crossings: u64,
}

/// Vertical codes met when walking from a gap towards one side, stopping at
/// the arc's endpoint.
fn codes_towards(arc: &MonotoneArc, start: usize, rightwards: bool) -> Vec<i8> {
    let mut out = Vec::new();
    let mut t = start;
    loop {
        let c = arc.code_at(t).expect("station inside span");
        out.push(c);
        if c == 0 {
            break;
        }
        if rightwards {
            t += 1;
        } else {
            t -= 1;
        }
    }
    out
}

fn spans_gap(arc: &MonotoneArc, g: usize) -> bool {
    arc.left() <= g + 1 && arc.right() >= g + 2
}

struct Ranks {
    /// `rank[g][arc]`, `usize::MAX` when the arc does not span the gap.
    rank: Vec<Vec<usize>>,
}

impl Ranks {
    fn new(n: usize, m: usize, orders: &[Vec<usize>]) -> Self {
        let mut rank = vec![vec![usize::MAX; m]; n.saturating_sub(1)];
        for (g, order) in orders.iter().enumerate() {
            for (r, &a) in order.iter().enumerate() {
                rank[g][a] = r;
            }
        }
        Self { rank }
    }
}

/// Strict vertical relation of two arcs at a station (`true` when `a` is
/// above `b`), `None` when both sit on the same puncture.
fn relation(
    arcs: &[MonotoneArc],
    ranks: &Ranks,
    a: usize,
    b: usize,
    station: usize,
) -> Option<bool> {
    if station % 2 == 1 {
        let g = station / 2;
        return Some(ranks.rank[g][a] < ranks.rank[g][b]);
    }
    let t = station / 2 + 1;
    let ca = arcs[a].code_at(t)?;
    let cb = arcs[b].code_at(t)?;
    match ca.cmp(&cb) {
        Ordering::Greater => Some(true),
        Ordering::Less => Some(false),
        Ordering::Equal if ca == 0 => None,
        Ordering::Equal => {
            let g = t - 2;
            Some(ranks.rank[g][a] < ranks.rank[g][b])
        }
    }
}

fn pair_crossings(arcs: &[MonotoneArc], ranks: &Ranks, a: usize, b: usize) -> u64 {
    let lo = arcs[a].left().max(arcs[b].left());
    let hi = arcs[a].right().min(arcs[b].right());
    if lo >= hi {
        return 0;
    }
    let mut count = 0;
    let mut prev: Option<bool> = None;
    for station in 2 * (lo - 1)..=2 * (hi - 1) {
        let cur = relation(arcs, ranks, a, b, station);
        if let (Some(p), Some(c)) = (prev, cur) {
            if p != c {
                count += 1;
            }
        }
        prev = cur;
    }
    count
}

fn descending(a: &[i8], b: &[i8]) -> Ordering {
    b.cmp(a)
}

/// Draws the system and returns the realization with its crossing count.
///
/// Each gap is first ordered by the arcs' vertical codes towards the right
/// (nearest forcing event first), then towards the left, then by index.
/// Adjacent transpositions that reduce the crossing count are applied until
/// none does.
pub fn realize(system: &ArcSystem) -> Realization {
    let n = system.puncture_count();
    let arcs = system.arcs();
    let m = arcs.len();
    let gaps = n.saturating_sub(1);

    let mut gap_orders: Vec<Vec<usize>> = Vec::with_capacity(gaps);
    for g in 0..gaps {
        let mut keyed: Vec<(Vec<i8>, Vec<i8>, usize)> = (0..m)
            .filter(|&a| spans_gap(&arcs[a], g))
            .map(|a| {
                (
                    codes_towards(&arcs[a], g + 2, true),
                    codes_towards(&arcs[a], g + 1, false),
                    a,
                )
            })
            .collect();
        keyed.sort_by(|x, y| {
            descending(&x.0, &y.0)
                .then_with(|| descending(&x.1, &y.1))
                .then(x.2.cmp(&y.2))
        });
        gap_orders.push(keyed.into_iter().map(|k| k.2).collect());
    }

    let mut ranks = Ranks::new(n, m, &gap_orders);
    loop {
        let mut improved = false;
        for g in 0..gaps {
            for p in 0..gap_orders[g].len().saturating_sub(1) {
                let (a, b) = (gap_orders[g][p], gap_orders[g][p + 1]);
                let before = pair_crossings(arcs, &ranks, a, b);
                if before == 0 {
                    continue;
                }
                ranks.rank[g][a] = p + 1;
                ranks.rank[g][b] = p;
                let after = pair_crossings(arcs, &ranks, a, b);
                if after < before {
                    gap_orders[g].swap(p, p + 1);
                    improved = true;
                } else {
                    ranks.rank[g][a] = p;
                    ranks.rank[g][b] = p + 1;
                }
            }
        }
        if !improved {
            break;
        }
    }

    let mut crossings = 0;
    for a in 0..m {
        for b in a + 1..m {
            crossings += pair_crossings(arcs, &ranks, a, b);
        }
    }
    Realization {
        puncture_count: n,
        gap_orders,
        crossings,
    }
}

impl Realization {
    pub fn crossings(&self) -> u64 {
        self.crossings
    }

    pub fn puncture_count(&self) -> usize {
        self.puncture_count
    }

    /// Arcs spanning gap `g` (between punctures `g+1` and `g+2`), top to
    /// bottom.
    pub fn gap_order(&self, g: usize) -> &[usize] {
        &self.gap_orders[g]
    }

    pub fn gap_orders(&self) -> &[Vec<usize>] {
        &self.gap_orders
    }

    /// Crossings between arcs `a` and `b` in this drawing.
    pub fn pair_crossings(&self, system: &ArcSystem, a: usize, b: usize) -> u64 {
        let ranks = Ranks::new(self.puncture_count, system.len(), &self.gap_orders);
        pair_crossings(system.arcs(), &ranks, a, b)
    }

    /// Polyline of arc `a` through its stations as `(x, y)` points.
    pub fn polyline(&self, system: &ArcSystem, a: usize) -> Vec<(f64, f64)> {
        let arc = &system.arcs()[a];
        let mut pts = Vec::new();
        for t in arc.left()..=arc.right() {
            let y = match arc.side_at(t) {
                None => 0.0,
                Some(side) => {
                    let left_gap = &self.gap_orders[t - 2];
                    let same: Vec<usize> = left_gap
                        .iter()
                        .copied()
                        .filter(|&b| system.arcs()[b].side_at(t) == Some(side))
                        .collect();
                    let idx = same.iter().position(|&b| b == a).expect("arc spans gap") as f64;
                    match side {
                        super::Side::Above => same.len() as f64 - idx,
                        super::Side::Below => -(idx + 1.0),
                    }
                }
            };
            pts.push((t as f64, y));
            if t < arc.right() {
                let order = &self.gap_orders[t - 1];
                let r = order.iter().position(|&b| b == a).expect("arc spans gap") as f64;
                pts.push((t as f64 + 0.5, (order.len() as f64 - 1.0) / 2.0 - r));
            }
        }
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotone::{enumerate_universe, total_min_crossings};

    fn arc(l: usize, r: usize, w: &str) -> MonotoneArc {
        MonotoneArc::from_word(l, r, w).unwrap()
    }

    #[test]
    fn examples() {
        let single = ArcSystem::new(4, 1, vec![arc(1, 4, "ab")]).unwrap();
        assert_eq!(realize(&single).crossings(), 0);
        let pair = ArcSystem::new(4, 1, vec![arc(1, 4, "ab"), arc(1, 4, "ba")]).unwrap();
        assert_eq!(realize(&pair).crossings(), 1);
        let four = ArcSystem::new(3, 0, enumerate_universe(3)).unwrap();
        assert_eq!(realize(&four).crossings(), 0);
    }

    #[test]
    fn every_pair_of_small_universes_realizes_minimally() {
        for n in 2..=5 {
            let u = enumerate_universe(n);
            for i in 0..u.len() {
                for j in i + 1..u.len() {
                    let s = ArcSystem::new(n, 9, vec![u[i].clone(), u[j].clone()]).unwrap();
                    assert_eq!(
                        realize(&s).crossings(),
                        total_min_crossings(&s),
                        "{} {}",
                        u[i],
                        u[j]
                    );
                }
            }
        }
    }

    #[test]
    fn polyline_shape() {
        let s = ArcSystem::new(4, 1, vec![arc(1, 4, "ab"), arc(2, 3, "-")]).unwrap();
        let r = realize(&s);
        let p = r.polyline(&s, 0);
        assert_eq!(p.len(), 7);
        assert_eq!(p[0], (1.0, 0.0));
        assert!(p[2].1 > 0.0 && p[4].1 < 0.0);
        assert_eq!(p[6], (4.0, 0.0));
    }
}
