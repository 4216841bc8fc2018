//! The line-oriented diagram file format.
//!
//! One directive per line; `#` starts a comment; whitespace between tokens is
//! free.
//!
//! ```text
//! level <p>: <d0> <d1> ...
//! edges <p>-><p+1>: <i> <j> <m>; ...
//! periodic from <p> period <k>
//! ```
//!
//! A periodic declaration must be accompanied by levels `0..p+k` and edge
//! blocks `0..p+k` (the last block, `edges p+k-1->p+k`, wraps into the next
//! period). Duplicate `(i, j)` triples sum their multiplicities.

use bratteli_core::{BratteliDiagram, Edge, PeriodicTail};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn parse_diagram(text: &str) -> Result<BratteliDiagram, ParseError> {
    let mut levels: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    let mut edges: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
    let mut periodic: Option<(usize, PeriodicTail)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("level") {
            let (p, dims_text) = rest
                .split_once(':')
                .ok_or_else(|| err(lineno, "expected `level <p>: <d0> <d1> ...`"))?;
            let p: usize = p
                .trim()
                .parse()
                .map_err(|_| err(lineno, "level number must be a nonnegative integer"))?;
            let mut dims = Vec::new();
            for tok in dims_text.split_whitespace() {
                let d: u64 = tok
                    .parse()
                    .map_err(|_| err(lineno, format!("bad dimension `{tok}`")))?;
                dims.push(d);
            }
            if dims.is_empty() {
                return Err(err(lineno, "a level needs at least one dimension"));
            }
            if levels.insert(p, dims).is_some() {
                return Err(err(lineno, format!("level {p} declared twice")));
            }
        } else if let Some(rest) = line.strip_prefix("edges") {
            let (span, triples) = rest
                .split_once(':')
                .ok_or_else(|| err(lineno, "expected `edges <p>-><p+1>: <i> <j> <m>; ...`"))?;
            let (from, to) = span
                .split_once("->")
                .ok_or_else(|| err(lineno, "expected `<p>-><p+1>` before the colon"))?;
            let p: usize = from
                .trim()
                .parse()
                .map_err(|_| err(lineno, "bad source level"))?;
            let q: usize = to
                .trim()
                .parse()
                .map_err(|_| err(lineno, "bad target level"))?;
            if q != p + 1 {
                return Err(err(lineno, format!("edges must connect {p} to {}, found {q}", p + 1)));
            }
            let mut block = Vec::new();
            for part in triples.split(';') {
                let toks: Vec<&str> = part.split_whitespace().collect();
                if toks.is_empty() {
                    continue;
                }
                if toks.len() != 3 {
                    return Err(err(
                        lineno,
                        format!("expected `<i> <j> <m>` triple, found `{}`", part.trim()),
                    ));
                }
                let source: usize =
                    toks[0].parse().map_err(|_| err(lineno, "bad source index"))?;
                let target: usize =
                    toks[1].parse().map_err(|_| err(lineno, "bad target index"))?;
                let multiplicity: u64 =
                    toks[2].parse().map_err(|_| err(lineno, "bad multiplicity"))?;
                block.push(Edge { source, target, multiplicity });
            }
            if block.is_empty() {
                return Err(err(lineno, "an edges line needs at least one triple"));
            }
            edges.entry(p).or_default().extend(block);
        } else if let Some(rest) = line.strip_prefix("periodic") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "from" || toks[2] != "period" {
                return Err(err(lineno, "expected `periodic from <p> period <k>`"));
            }
            let start_level: usize =
                toks[1].parse().map_err(|_| err(lineno, "bad start level"))?;
            let period: usize = toks[3].parse().map_err(|_| err(lineno, "bad period"))?;
            if period == 0 {
                return Err(err(lineno, "period must be at least 1"));
            }
            if periodic.replace((lineno, PeriodicTail { start_level, period })).is_some() {
                return Err(err(lineno, "periodic declared twice"));
            }
        } else {
            return Err(err(
                lineno,
                format!("unknown directive `{}`", line.split_whitespace().next().unwrap_or("")),
            ));
        }
    }

    let n_levels = match &periodic {
        Some((lineno, t)) => {
            let want = t.start_level + t.period;
            if levels.len() != want || levels.keys().next_back() != Some(&(want - 1)) {
                return Err(err(
                    *lineno,
                    format!(
                        "periodic from {} period {} needs levels 0..{} exactly",
                        t.start_level,
                        t.period,
                        want - 1
                    ),
                ));
            }
            want
        }
        None => levels.len(),
    };
    let mut level_vec = Vec::with_capacity(n_levels);
    for p in 0..n_levels {
        match levels.remove(&p) {
            Some(dims) => level_vec.push(dims),
            None => return Err(err(0, format!("missing `level {p}` line"))),
        }
    }
    if let Some(&extra) = levels.keys().next() {
        return Err(err(0, format!("level {extra} lies beyond the stored window")));
    }
    let n_blocks = if periodic.is_some() { n_levels } else { n_levels.saturating_sub(1) };
    let mut edge_vec = Vec::with_capacity(n_blocks);
    for p in 0..n_blocks {
        match edges.remove(&p) {
            Some(block) => edge_vec.push(block),
            None => return Err(err(0, format!("missing `edges {p}->{}` line", p + 1))),
        }
    }
    if let Some(&extra) = edges.keys().next() {
        return Err(err(0, format!("edges {extra}->{} lie beyond the stored window", extra + 1)));
    }
    BratteliDiagram::new(level_vec, edge_vec, periodic.map(|(_, t)| t))
        .map_err(|e| err(0, e.to_string()))
}

/// Canonical serialization: level lines ascending, edge blocks ascending, the
/// periodic declaration before its wrap block. `parse(serialize(d)) == d` and
/// serialization of a parsed canonical file is byte-identical.
pub fn serialize_diagram(d: &BratteliDiagram) -> String {
    let mut out = String::new();
    for (p, dims) in d.stored_dims().iter().enumerate() {
        out.push_str(&format!(
            "level {p}: {}\n",
            dims.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
        ));
    }
    let fmt_block = |p: usize, block: &[Edge]| {
        format!(
            "edges {p}->{}: {}\n",
            p + 1,
            block
                .iter()
                .map(|e| format!("{} {} {}", e.source, e.target, e.multiplicity))
                .collect::<Vec<_>>()
                .join("; ")
        )
    };
    let blocks = d.stored_edges();
    let wrap = if d.is_periodic() { blocks.len() - 1 } else { blocks.len() };
    for (p, block) in blocks.iter().take(wrap).enumerate() {
        out.push_str(&fmt_block(p, block));
    }
    if let Some(t) = d.periodic_tail() {
        out.push_str(&format!("periodic from {} period {}\n", t.start_level, t.period));
        out.push_str(&fmt_block(blocks.len() - 1, &blocks[blocks.len() - 1]));
    }
    out
}

/// Parses `p:i,p:i,...` generator lists (or the literal `full`) and returns
/// the generated ideal.
pub fn parse_ideal_spec(
    d: &BratteliDiagram,
    spec: &str,
    opts: &bratteli_core::ClosureOptions,
) -> Result<bratteli_core::IdealSet, String> {
    use bratteli_core::{ideal, IdealSet, LevelSet, VertexId};
    let spec = spec.trim();
    if spec == "full" {
        return Ok(IdealSet::full(d));
    }
    if spec.is_empty() || spec == "empty" {
        return Ok(IdealSet::empty());
    }
    let mut vertices = Vec::new();
    for part in spec.split(',') {
        let (p, i) = part
            .trim()
            .split_once(':')
            .ok_or_else(|| format!("bad generator `{part}`; expected `level:index`"))?;
        let level: usize = p.trim().parse().map_err(|_| format!("bad level in `{part}`"))?;
        let index: usize = i.trim().parse().map_err(|_| format!("bad index in `{part}`"))?;
        let count = d
            .vertex_count(level)
            .map_err(|e| format!("generator `{part}`: {e}"))?;
        if index >= count {
            return Err(format!("generator `{part}`: index {index} out of range (level has {count} vertices)"));
        }
        vertices.push(VertexId::new(level, index));
    }
    ideal::closure(d, &LevelSet::from_vertices(vertices), opts).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAR: &str = "level 0: 1\nlevel 1: 2\nedges 0->1: 0 0 2\nperiodic from 1 period 1\nedges 1->2: 0 0 2\n";

    #[test]
    fn parses_the_car_file() {
        let d = parse_diagram(CAR).unwrap();
        assert!(d.is_periodic());
        assert_eq!(d.stored_dims(), &[vec![1], vec![2]]);
        assert!(d.validate().is_valid());
    }

    #[test]
    fn round_trip_is_byte_identical_on_canonical_form() {
        let d = parse_diagram(CAR).unwrap();
        let text = serialize_diagram(&d);
        assert_eq!(text, CAR);
        let d2 = parse_diagram(&text).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn missing_edges_line_is_an_error_with_position() {
        let text = "level 0: 1\nlevel 1: 2\n";
        let e = parse_diagram(text).unwrap_err();
        assert!(e.to_string().contains("edges 0->1"));
    }

    #[test]
    fn syntax_error_carries_line_number() {
        let text = "level 0: 1\nlevel 1: 2\nedges 0->1: 0 0\n";
        let e = parse_diagram(text).unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn duplicate_triples_sum() {
        let text = "level 0: 1\nlevel 1: 2\nedges 0->1: 0 0 1; 0 0 1\n";
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.stored_edges()[0], vec![Edge { source: 0, target: 0, multiplicity: 2 }]);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# the CAR diagram\n\nlevel 0: 1  # unit\nlevel 1: 2\nedges 0->1: 0 0 2\nperiodic from 1 period 1\nedges 1->2: 0 0 2\n";
        let d = parse_diagram(text).unwrap();
        assert!(d.validate().is_valid());
    }

    #[test]
    fn wrong_edge_target_level_is_rejected() {
        let text = "level 0: 1\nlevel 1: 2\nedges 0->2: 0 0 2\n";
        assert!(parse_diagram(text).is_err());
    }
}
