use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{ArcError, ArcSystem, MonotoneArc, Side};

/// A system whose high-degree punctures were split into runs of collinear
/// punctures of degree at most `max_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    pub system: ArcSystem,
    /// Original puncture of each new puncture (both 1-based; index 0 of the
    /// vector is new puncture 1).
    pub origin: Vec<usize>,
    pub max_degree: u64,
}

/// Codes of `arc` read from puncture `t` outwards in one direction.
fn codes_from(arc: &MonotoneArc, t: usize, rightwards: bool) -> Vec<i8> {
    let mut out = Vec::new();
    let mut s = t;
    while let Some(c) = arc.code_at(s) {
        if s != t || c != 0 {
            out.push(c);
        }
        if (rightwards && s == arc.right()) || (!rightwards && s == arc.left()) {
            break;
        }
        if rightwards {
            s += 1;
        } else {
            s -= 1;
        }
    }
    out
}

/// Splits every puncture of degree larger than `max_degree`.
///
/// Around a puncture, the arcs ending there (top to bottom) followed by the
/// arcs starting there (bottom to top) form its rotation read from the top.
/// That sequence is cut into consecutive blocks of `max_degree` arcs, and
/// block `q` is attached to the `q`-th of a run of new punctures placed left
/// to right. An ending arc passes below the earlier punctures of the run, a
/// starting arc below the later ones, and passing arcs keep their side on
/// all of them. Pairwise intersection numbers are unchanged.
pub fn split_punctures(system: &ArcSystem, max_degree: u64) -> Result<SplitResult, ArcError> {
    if max_degree == 0 {
        return Err(ArcError::ZeroDegreeCap);
    }
    let n = system.puncture_count();
    let arcs = system.arcs();
    let delta = max_degree as usize;

    // block[arc][end] with end 0 = left, 1 = right.
    let mut block = vec![[0usize; 2]; arcs.len()];
    let mut run_len = vec![1usize; n + 1];
    for t in 1..=n {
        let mut enders: Vec<usize> = (0..arcs.len()).filter(|&a| arcs[a].right() == t).collect();
        let mut starters: Vec<usize> = (0..arcs.len()).filter(|&a| arcs[a].left() == t).collect();
        let degree = enders.len() + starters.len();
        if degree <= delta {
            continue;
        }
        // Top to bottom: larger codes first.
        let rank = |a: usize, b: usize, rightwards: bool| -> Ordering {
            codes_from(&arcs[b], t, rightwards)
                .cmp(&codes_from(&arcs[a], t, rightwards))
                .then(a.cmp(&b))
        };
        enders.sort_by(|&a, &b| rank(a, b, false));
        starters.sort_by(|&a, &b| rank(a, b, true));
        starters.reverse();
        let sequence = enders
            .iter()
            .map(|&a| (a, 1))
            .chain(starters.iter().map(|&a| (a, 0)));
        for (pos, (a, end)) in sequence.enumerate() {
            block[a][end] = pos / delta;
        }
        run_len[t] = degree.div_ceil(delta);
    }

    let mut base = vec![0usize; n + 2];
    let mut origin = Vec::new();
    base[1] = 1;
    for t in 1..=n {
        base[t + 1] = base[t] + run_len[t];
        origin.extend(std::iter::repeat_n(t, run_len[t]));
    }

    let mut new_arcs = Vec::with_capacity(arcs.len());
    for (a, arc) in arcs.iter().enumerate() {
        let (l, r) = (arc.left(), arc.right());
        let ql = block[a][0];
        let qr = block[a][1];
        let mut signs = Vec::new();
        signs.extend(std::iter::repeat_n(Side::Below, run_len[l] - 1 - ql));
        for t in l + 1..r {
            let side = arc.side_at(t).expect("interior");
            signs.extend(std::iter::repeat_n(side, run_len[t]));
        }
        signs.extend(std::iter::repeat_n(Side::Below, qr));
        new_arcs.push(MonotoneArc::new(base[l] + ql, base[r] + qr, signs)?);
    }
    Ok(SplitResult {
        system: ArcSystem::new(origin.len(), system.declared_k(), new_arcs)?,
        origin,
        max_degree,
    })
}
