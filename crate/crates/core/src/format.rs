//! Text formats for arc systems (`arcsys 1`) and maps (`cmap 1`).

use std::fmt::Write as _;

use thiserror::Error;

use crate::maps::{CombinatorialMap, Dart, DrawnSystem, VertexTag};
use crate::monotone::{ArcSystem, MonotoneArc};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

/// Non-blank lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn number<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, ParseError> {
    s.parse()
        .map_err(|_| err(line, format!("expected a number, found `{s}`")))
}

pub fn emit_arcsys(system: &ArcSystem) -> String {
    let mut out = format!(
        "arcsys 1\nn {} k {}\n",
        system.puncture_count(),
        system.declared_k()
    );
    for a in system.arcs() {
        let w = a.word();
        let w = if w.is_empty() { "-".to_string() } else { w };
        writeln!(out, "arc {} {} {}", a.left(), a.right(), w).expect("write to string");
    }
    out
}

pub fn parse_arcsys(text: &str) -> Result<ArcSystem, ParseError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "arcsys 1")) => {}
        Some((l, other)) => return Err(err(l, format!("expected `arcsys 1`, found `{other}`"))),
        None => return Err(err(1, "empty input")),
    }
    let (l, header) = lines
        .next()
        .ok_or_else(|| err(2, "missing `n <n> k <k>` line"))?;
    let f: Vec<&str> = header.split_whitespace().collect();
    let ["n", n, "k", k] = f[..] else {
        return Err(err(l, "expected `n <n> k <k>`"));
    };
    let (n, k): (usize, u64) = (number(l, n)?, number(l, k)?);
    let mut arcs = Vec::new();
    for (l, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        let ["arc", i, j, w] = f[..] else {
            return Err(err(l, "expected `arc <i> <j> <word>`"));
        };
        let word = if w == "-" { "" } else { w };
        let arc = MonotoneArc::from_word(number(l, i)?, number(l, j)?, word)
            .map_err(|e| err(l, e.to_string()))?;
        arcs.push((l, arc));
    }
    let mut system = ArcSystem::empty(n, k);
    for (l, arc) in arcs {
        system.push(arc).map_err(|e| err(l, e.to_string()))?;
    }
    Ok(system)
}

fn cycles(parts: impl Iterator<Item = Vec<usize>>) -> String {
    let mut out = String::new();
    for c in parts {
        out.push('(');
        out.push_str(
            &c.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push(')');
    }
    out
}

fn parse_cycles(line: usize, s: &str) -> Result<Vec<Vec<usize>>, ParseError> {
    let s = s.trim();
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(err(line, "expected `(`"));
        };
        let close = body.find(')').ok_or_else(|| err(line, "unclosed `(`"))?;
        out.push(
            body[..close]
                .split_whitespace()
                .map(|t| number(line, t))
                .collect::<Result<_, _>>()?,
        );
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

fn emit_map_lines(map: &CombinatorialMap) -> String {
    let pairs = (0..map.dart_count())
        .filter(|&d| d < map.alpha(d))
        .map(|d| vec![d, map.alpha(d)]);
    let tags: Vec<String> = map.tags().iter().map(|t| t.letter().to_string()).collect();
    format!(
        "cmap 1\ndarts {}\nsigma {}\nalpha {}\ntags {}\n",
        map.dart_count(),
        cycles(map.rotations().iter().cloned()),
        cycles(pairs),
        tags.join(" ")
    )
}

pub fn emit_cmap(map: &CombinatorialMap) -> String {
    emit_map_lines(map)
}

pub fn emit_drawn(drawn: &DrawnSystem) -> String {
    let mut out = emit_map_lines(drawn.map());
    for (i, r) in drawn.routes().iter().enumerate() {
        let darts: Vec<String> = r.iter().map(|d| d.to_string()).collect();
        writeln!(out, "route {i} {}", darts.join(" ")).expect("write to string");
    }
    out
}

/// Parsed map file; `routes` is empty when the file has no route lines.
#[derive(Debug, Clone, PartialEq)]
pub struct MapFile {
    pub map: CombinatorialMap,
    pub routes: Vec<Vec<Dart>>,
}

impl MapFile {
    pub fn into_drawn(self) -> Result<DrawnSystem, crate::maps::MapError> {
        DrawnSystem::new(self.map, self.routes)
    }
}

pub fn parse_cmap(text: &str) -> Result<MapFile, ParseError> {
    let mut lines = content_lines(text);
    let mut field = |key: &str, expected: usize| -> Result<(usize, String), ParseError> {
        let (l, line) = lines
            .next()
            .ok_or_else(|| err(expected, format!("missing `{key}` line")))?;
        if line == key {
            return Ok((l, String::new()));
        }
        match line.split_once(' ') {
            Some((k, rest)) if k == key => Ok((l, rest.to_string())),
            _ => Err(err(l, format!("expected `{key} ...`, found `{line}`"))),
        }
    };
    let (l, version) = field("cmap", 1)?;
    if version.trim() != "1" {
        return Err(err(l, format!("unsupported cmap version `{version}`")));
    }
    let (l, darts) = field("darts", 2)?;
    let darts: usize = number(l, darts.trim())?;
    let (ls, sigma) = field("sigma", 3)?;
    let rotations = parse_cycles(ls, &sigma)?;
    let (la, alpha_line) = field("alpha", 4)?;
    let mut alpha = vec![usize::MAX; darts];
    for pair in parse_cycles(la, &alpha_line)? {
        let [a, b] = pair[..] else {
            return Err(err(la, "alpha cycles must be pairs"));
        };
        if a >= darts || b >= darts || alpha[a] != usize::MAX || alpha[b] != usize::MAX || a == b {
            return Err(err(la, format!("bad alpha pair ({a} {b})")));
        }
        alpha[a] = b;
        alpha[b] = a;
    }
    if alpha.contains(&usize::MAX) {
        return Err(err(la, "alpha does not cover every dart"));
    }
    let (lt, tags) = field("tags", 5)?;
    let tags = tags
        .split_whitespace()
        .map(|t| VertexTag::from_letter(t).ok_or_else(|| err(lt, format!("unknown tag `{t}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let map = CombinatorialMap::new(rotations, alpha, tags).map_err(|e| err(ls, e.to_string()))?;
    let mut routes = Vec::new();
    for (l, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.first() != Some(&"route") || f.len() < 3 {
            return Err(err(l, "expected `route <arc> <darts>`"));
        }
        let id: usize = number(l, f[1])?;
        if id != routes.len() {
            return Err(err(l, format!("route {id} out of order")));
        }
        routes.push(
            f[2..]
                .iter()
                .map(|t| number(l, t))
                .collect::<Result<Vec<Dart>, _>>()?,
        );
    }
    Ok(MapFile { map, routes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::random_drawn_system;
    use crate::monotone::max_k_system_greedy;

    #[test]
    fn arcsys_text() {
        let text = "arcsys 1\n# comment\nn 4 k 1\narc 1 4 ab\narc 1 2 -\n";
        let s = parse_arcsys(text).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(
            emit_arcsys(&s),
            "arcsys 1\nn 4 k 1\narc 1 4 ab\narc 1 2 -\n"
        );
    }

    #[test]
    fn arcsys_errors_carry_lines() {
        assert_eq!(parse_arcsys("arcsys 2\n").unwrap_err().line, 1);
        assert_eq!(
            parse_arcsys("arcsys 1\nn 4 k 1\narc 1 4 a\n")
                .unwrap_err()
                .line,
            3
        );
        assert_eq!(
            parse_arcsys("arcsys 1\nn 4 k 1\narc 1 3 a\narc 2 5 aa\n")
                .unwrap_err()
                .line,
            4
        );
        assert_eq!(
            parse_arcsys("arcsys 1\nn 4 k 1\narc 1 3 a\narc 1 3 a\n")
                .unwrap()
                .len(),
            2
        );
        assert_eq!(parse_arcsys("arcsys 1\nn x k 1\n").unwrap_err().line, 2);
    }

    #[test]
    fn arcsys_round_trip() {
        for seed in 0..10 {
            let s = max_k_system_greedy(6, 2, seed).unwrap();
            assert_eq!(parse_arcsys(&emit_arcsys(&s)).unwrap(), s);
        }
    }

    #[test]
    fn cmap_round_trip() {
        for seed in 0..10 {
            let d = random_drawn_system(1 + seed % 3, seed).unwrap();
            let text = emit_drawn(&d);
            assert_eq!(parse_cmap(&text).unwrap().into_drawn().unwrap(), d);
            let bare = parse_cmap(&emit_cmap(d.map())).unwrap();
            assert!(bare.routes.is_empty());
            assert_eq!(&bare.map, d.map());
        }
    }

    #[test]
    fn isolated_vertex() {
        let text = "cmap 1\ndarts 2\nsigma (0 1)()\nalpha (0 1)\ntags P P\n";
        let f = parse_cmap(text).unwrap();
        assert_eq!(f.map.vertex_count(), 2);
        assert_eq!(emit_cmap(&f.map), text);
    }
}
