//! Bratteli diagrams: leveled multigraphs with vertex dimensions and edge
//! multiplicities, in finite (truncated) or eventually-periodic presentation.
//!
//! A diagram stores explicit data for its prefix levels plus, when periodic,
//! exactly one period of levels and edge blocks (including the wrap-around
//! block that connects the last period level back to the first). Levels past
//! the stored window repeat the period structure verbatim; their dimensions
//! are derived from the unitality equation `d(p+1,j) = Σ mult(i,j)·d(p,i)`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A vertex, addressed by level and index within the level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub level: usize,
    pub index: usize,
}

impl VertexId {
    pub fn new(level: usize, index: usize) -> Self {
        VertexId { level, index }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.level, self.index)
    }
}

/// An edge between consecutive levels with a positive multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub multiplicity: u64,
}

/// Declares that levels and edge blocks repeat from `start_level` onward with
/// the given period. The stored presentation covers levels
/// `0..start_level + period` and edge blocks `0..start_level + period`, the
/// last block being the wrap-around transition into the next period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicTail {
    pub start_level: usize,
    pub period: usize,
}

/// Structural (shape-level) construction errors. Semantic invariant
/// violations are reported by [`BratteliDiagram::validate`] instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramError {
    /// Number of edge blocks does not match the number of levels.
    EdgeBlockCount { expected: usize, found: usize },
    /// Periodic declaration inconsistent with the stored levels.
    BadPeriodicTail(String),
    /// An edge references a vertex index out of range.
    EdgeOutOfRange { block: usize, edge: Edge },
    /// A stored level has no vertices.
    EmptyLevel(usize),
    /// Requested level is outside the diagram.
    LevelOutOfRange { level: usize, len: usize },
    /// Derived dimensions exceed the representable range.
    DimensionOverflow { level: usize },
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramError::EdgeBlockCount { expected, found } => {
                write!(f, "expected {expected} edge blocks, found {found}")
            }
            DiagramError::BadPeriodicTail(msg) => write!(f, "bad periodic declaration: {msg}"),
            DiagramError::EdgeOutOfRange { block, edge } => write!(
                f,
                "edge {} -> {} (x{}) in block {} references a vertex out of range",
                edge.source, edge.target, edge.multiplicity, block
            ),
            DiagramError::EmptyLevel(p) => write!(f, "level {p} has no vertices"),
            DiagramError::LevelOutOfRange { level, len } => {
                write!(f, "level {level} out of range for a diagram of depth {len}")
            }
            DiagramError::DimensionOverflow { level } => {
                write!(f, "dimensions overflow u64 at level {level}")
            }
        }
    }
}

impl core::error::Error for DiagramError {}

/// A single invariant violation found by [`BratteliDiagram::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ZeroDimension(VertexId),
    ZeroMultiplicity { block: usize, edge: Edge },
    /// `d(p+1,j)` differs from the incoming multiplicity-weighted sum.
    Unitality { vertex: VertexId, expected: u64, found: u64 },
    NoOutgoing(VertexId),
    NoIncoming(VertexId),
    /// A dimension-1 vertex must have exactly one incoming edge, of
    /// multiplicity 1, from a dimension-1 vertex.
    DimensionOneIncoming { vertex: VertexId, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDimension(v) => write!(f, "vertex {v} has dimension 0"),
            Violation::ZeroMultiplicity { block, edge } => write!(
                f,
                "edge {} -> {} in block {} has multiplicity 0",
                edge.source, edge.target, block
            ),
            Violation::Unitality { vertex, expected, found } => write!(
                f,
                "unitality fails at {vertex}: dimension {found}, incoming sum {expected}"
            ),
            Violation::NoOutgoing(v) => write!(f, "vertex {v} has no outgoing edge"),
            Violation::NoIncoming(v) => write!(f, "vertex {v} has no incoming edge"),
            Violation::DimensionOneIncoming { vertex, detail } => {
                write!(f, "dimension-1 vertex {vertex}: {detail}")
            }
        }
    }
}

/// Outcome of semantic validation; empty means the diagram is a valid unital
/// Bratteli diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// The capped-dimension structure of a diagram: per-level dimensions with
/// values saturated at 2, which is all the character machinery needs. For a
/// periodic diagram the capped dimensions become periodic; `stable_start` and
/// `cycle` describe that eventual cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimStructure {
    /// Capped dimensions for levels `0..stable_start`.
    pub prefix: Vec<Vec<u64>>,
    /// First level of the periodic regime (equals the depth for truncated
    /// diagrams, with `cycle` empty).
    pub stable_start: usize,
    /// Capped dimensions for one full cycle starting at `stable_start`; the
    /// length is a multiple of the diagram period.
    pub cycle: Vec<Vec<u64>>,
}

impl DimStructure {
    /// Capped dimension vector at an arbitrary level.
    pub fn capped_dims_at(&self, level: usize) -> &[u64] {
        if level < self.stable_start {
            &self.prefix[level]
        } else {
            debug_assert!(!self.cycle.is_empty(), "level beyond a truncated diagram");
            &self.cycle[(level - self.stable_start) % self.cycle.len()]
        }
    }

    pub fn is_dim_one(&self, level: usize, index: usize) -> bool {
        self.capped_dims_at(level)[index] == 1
    }
}

/// A Bratteli diagram presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BratteliDiagram {
    levels: Vec<Vec<u64>>,
    edges: Vec<Vec<Edge>>,
    tail: Option<PeriodicTail>,
}

impl BratteliDiagram {
    /// Builds a diagram from raw data, checking only shape-level consistency
    /// (lengths, index ranges, tail declaration). Duplicate `(source,
    /// target)` edges are merged by summing multiplicities.
    pub fn new(
        levels: Vec<Vec<u64>>,
        edges: Vec<Vec<Edge>>,
        tail: Option<PeriodicTail>,
    ) -> Result<Self, DiagramError> {
        if let Some(t) = tail {
            if t.period == 0 {
                return Err(DiagramError::BadPeriodicTail("period must be >= 1".into()));
            }
            if levels.len() != t.start_level + t.period {
                return Err(DiagramError::BadPeriodicTail(alloc::format!(
                    "periodic from {} period {} requires exactly {} stored levels, found {}",
                    t.start_level,
                    t.period,
                    t.start_level + t.period,
                    levels.len()
                )));
            }
            if edges.len() != levels.len() {
                return Err(DiagramError::EdgeBlockCount {
                    expected: levels.len(),
                    found: edges.len(),
                });
            }
        } else if edges.len() + 1 != levels.len().max(1) {
            return Err(DiagramError::EdgeBlockCount {
                expected: levels.len().saturating_sub(1),
                found: edges.len(),
            });
        }
        for (p, l) in levels.iter().enumerate() {
            if l.is_empty() {
                return Err(DiagramError::EmptyLevel(p));
            }
        }
        let mut merged: Vec<Vec<Edge>> = Vec::with_capacity(edges.len());
        for (b, block) in edges.into_iter().enumerate() {
            let src_count = levels[b].len();
            let tgt_level = if b + 1 < levels.len() {
                b + 1
            } else {
                // wrap-around block of a periodic tail
                tail.expect("block count checked above").start_level
            };
            let tgt_count = levels[tgt_level].len();
            let mut acc: BTreeMap<(usize, usize), u64> = BTreeMap::new();
            for e in block {
                if e.source >= src_count || e.target >= tgt_count {
                    return Err(DiagramError::EdgeOutOfRange { block: b, edge: e });
                }
                *acc.entry((e.source, e.target)).or_insert(0) += e.multiplicity;
            }
            merged.push(
                acc.into_iter()
                    .map(|((source, target), multiplicity)| Edge { source, target, multiplicity })
                    .collect(),
            );
        }
        Ok(BratteliDiagram { levels, edges: merged, tail })
    }

    /// The empty diagram (zero levels).
    pub fn empty() -> Self {
        BratteliDiagram { levels: Vec::new(), edges: Vec::new(), tail: None }
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn is_periodic(&self) -> bool {
        self.tail.is_some()
    }

    pub fn periodic_tail(&self) -> Option<PeriodicTail> {
        self.tail
    }

    /// Number of explicitly stored levels.
    pub fn stored_levels(&self) -> usize {
        self.levels.len()
    }

    /// Length of the non-repeating prefix (`start_level` for periodic
    /// diagrams, the full depth otherwise).
    pub fn prefix_len(&self) -> usize {
        match self.tail {
            Some(t) => t.start_level,
            None => self.levels.len(),
        }
    }

    /// Period length, or 0 for truncated diagrams.
    pub fn period(&self) -> usize {
        self.tail.map_or(0, |t| t.period)
    }

    /// Stored level index housing the structure of an arbitrary level.
    pub fn position(&self, level: usize) -> usize {
        match self.tail {
            Some(t) if level >= t.start_level => {
                t.start_level + (level - t.start_level) % t.period
            }
            _ => level,
        }
    }

    /// Whether `level` exists in the (possibly infinite) diagram.
    pub fn has_level(&self, level: usize) -> bool {
        self.is_periodic() || level < self.levels.len()
    }

    pub fn vertex_count(&self, level: usize) -> Result<usize, DiagramError> {
        if !self.has_level(level) {
            return Err(DiagramError::LevelOutOfRange { level, len: self.levels.len() });
        }
        Ok(self.levels[self.position(level)].len())
    }

    /// Stored dimensions, prefix plus one period.
    pub fn stored_dims(&self) -> &[Vec<u64>] {
        &self.levels
    }

    /// Edge block for the transition `level -> level + 1`, if that transition
    /// exists.
    pub fn edge_block(&self, level: usize) -> Option<&[Edge]> {
        match self.tail {
            Some(t) => {
                let pos = if level >= t.start_level {
                    t.start_level + (level - t.start_level) % t.period
                } else {
                    level
                };
                self.edges.get(pos).map(Vec::as_slice)
            }
            None => {
                if level + 1 < self.levels.len() {
                    Some(&self.edges[level])
                } else {
                    None
                }
            }
        }
    }

    /// All stored edge blocks (including the wrap block when periodic).
    pub fn stored_edges(&self) -> &[Vec<Edge>] {
        &self.edges
    }

    /// Exact dimensions at every level below `depth`, derived past the stored
    /// window via the unitality equation. Fails on u64 overflow.
    pub fn dims_window(&self, depth: usize) -> Result<Vec<Vec<u64>>, DiagramError> {
        let mut out: Vec<Vec<u64>> = Vec::with_capacity(depth);
        for p in 0..depth {
            if !self.has_level(p) {
                return Err(DiagramError::LevelOutOfRange { level: p, len: self.levels.len() });
            }
            if p < self.levels.len() {
                out.push(self.levels[p].clone());
                continue;
            }
            let block = self
                .edge_block(p - 1)
                .expect("periodic diagrams have all transitions");
            let count = self.vertex_count(p)?;
            let prev = &out[p - 1];
            let mut dims = vec![0u64; count];
            for e in block {
                let add = e
                    .multiplicity
                    .checked_mul(prev[e.source])
                    .ok_or(DiagramError::DimensionOverflow { level: p })?;
                dims[e.target] = dims[e.target]
                    .checked_add(add)
                    .ok_or(DiagramError::DimensionOverflow { level: p })?;
            }
            out.push(dims);
        }
        Ok(out)
    }

    /// Exact dimensions at a single level.
    pub fn dims_at(&self, level: usize) -> Result<Vec<u64>, DiagramError> {
        let mut w = self.dims_window(level + 1)?;
        Ok(w.pop().expect("window of depth level+1"))
    }

    /// Capped-dimension structure (values saturated at 2). For periodic
    /// diagrams this detects the level where the capped dimensions become
    /// periodic and the resulting cycle; the capped dynamics are exact for
    /// deciding `d == 1`.
    pub fn dim_structure(&self) -> DimStructure {
        let cap = |d: u64| d.min(2).max(1);
        if !self.is_periodic() {
            let prefix: Vec<Vec<u64>> =
                self.levels.iter().map(|l| l.iter().map(|&d| cap(d)).collect()).collect();
            let stable_start = prefix.len();
            return DimStructure { prefix, stable_start, cycle: Vec::new() };
        }
        let tail = self.tail.expect("periodic");
        let mut capped: Vec<Vec<u64>> = Vec::new();
        for (p, l) in self.levels.iter().enumerate() {
            let _ = p;
            capped.push(l.iter().map(|&d| cap(d)).collect());
        }
        // Simulate the capped dynamics until a (position, capped-dims) state
        // repeats; state space is finite so this terminates.
        let mut seen: BTreeMap<(usize, Vec<u64>), usize> = BTreeMap::new();
        let mut p = tail.start_level;
        loop {
            if p >= capped.len() {
                let block = self.edge_block(p - 1).expect("periodic");
                let count = self.levels[self.position(p)].len();
                let prev = &capped[p - 1];
                let mut next = vec![0u64; count];
                for e in block {
                    next[e.target] =
                        (next[e.target] + e.multiplicity.min(2) * prev[e.source]).min(2);
                }
                for d in next.iter_mut() {
                    *d = cap(*d);
                }
                capped.push(next);
            }
            let state = (self.position(p), capped[p].clone());
            if let Some(&q) = seen.get(&state) {
                let cycle = capped[q..p].to_vec();
                let prefix = capped[..q].to_vec();
                return DimStructure { prefix, stable_start: q, cycle };
            }
            seen.insert(state, p);
            p += 1;
        }
    }

    /// Checks every semantic invariant and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.levels.len();
        for (p, dims) in self.levels.iter().enumerate() {
            for (i, &d) in dims.iter().enumerate() {
                if d == 0 {
                    violations.push(Violation::ZeroDimension(VertexId::new(p, i)));
                }
            }
        }
        for (b, block) in self.edges.iter().enumerate() {
            for e in block {
                if e.multiplicity == 0 {
                    violations.push(Violation::ZeroMultiplicity { block: b, edge: *e });
                }
            }
        }
        // Unitality and the dimension-1 consequence at stored levels with
        // stored incoming blocks. The wrap block feeds derived levels whose
        // dimensions are defined by the equation, so only stored data can
        // disagree.
        for p in 1..n {
            let block = &self.edges[p - 1];
            let prev = &self.levels[p - 1];
            let here = &self.levels[p];
            let mut incoming: Vec<Vec<Edge>> = vec![Vec::new(); here.len()];
            for e in block {
                incoming[e.target].push(*e);
            }
            for (j, &d) in here.iter().enumerate() {
                let v = VertexId::new(p, j);
                let sum: u64 = incoming[j]
                    .iter()
                    .map(|e| e.multiplicity.saturating_mul(prev[e.source]))
                    .fold(0u64, u64::saturating_add);
                if sum != d {
                    violations.push(Violation::Unitality { vertex: v, expected: sum, found: d });
                }
                if d == 1 {
                    let ok = incoming[j].len() == 1
                        && incoming[j][0].multiplicity == 1
                        && prev[incoming[j][0].source] == 1;
                    if !ok {
                        violations.push(Violation::DimensionOneIncoming {
                            vertex: v,
                            detail: alloc::format!(
                                "expected a single multiplicity-1 edge from a dimension-1 \
                                 vertex, found {} incoming edges",
                                incoming[j].len()
                            ),
                        });
                    }
                }
            }
        }
        // Degree conditions. Outgoing degree applies to every stored level
        // that has a stored transition (for periodic diagrams that is all of
        // them, the last via the wrap block); incoming applies to stored
        // levels >= 1 and, when periodic, to the period start as the target
        // of the wrap block.
        for (b, block) in self.edges.iter().enumerate() {
            let mut out_deg = vec![0usize; self.levels[b].len()];
            for e in block {
                out_deg[e.source] += 1;
            }
            for (i, &dgr) in out_deg.iter().enumerate() {
                if dgr == 0 {
                    violations.push(Violation::NoOutgoing(VertexId::new(b, i)));
                }
            }
        }
        for p in 1..n {
            let mut in_deg = vec![0usize; self.levels[p].len()];
            for e in &self.edges[p - 1] {
                in_deg[e.target] += 1;
            }
            for (j, &dgr) in in_deg.iter().enumerate() {
                if dgr == 0 {
                    violations.push(Violation::NoIncoming(VertexId::new(p, j)));
                }
            }
        }
        if let Some(t) = self.tail {
            let wrap = &self.edges[n - 1];
            let mut in_deg = vec![0usize; self.levels[t.start_level].len()];
            for e in wrap {
                in_deg[e.target] += 1;
            }
            for (j, &dgr) in in_deg.iter().enumerate() {
                if dgr == 0 {
                    violations.push(Violation::NoIncoming(VertexId::new(n, j)));
                }
            }
        }
        ValidationReport { violations }
    }

    /// Materializes the first `depth` levels as a truncated diagram.
    pub fn unroll(&self, depth: usize) -> Result<BratteliDiagram, DiagramError> {
        if depth < self.prefix_len().max(1) || (!self.is_periodic() && depth != self.levels.len())
        {
            return Err(DiagramError::LevelOutOfRange { level: depth, len: self.levels.len() });
        }
        if !self.is_periodic() {
            return Ok(self.clone());
        }
        let levels = self.dims_window(depth)?;
        let mut edges = Vec::with_capacity(depth.saturating_sub(1));
        for p in 0..depth.saturating_sub(1) {
            edges.push(self.edge_block(p).expect("periodic").to_vec());
        }
        BratteliDiagram::new(levels, edges, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{b3, car, cgrow};

    #[test]
    fn car_is_valid() {
        let d = car();
        assert!(d.validate().is_valid());
        let dims = d.dims_window(4).unwrap();
        assert_eq!(dims, vec![vec![1], vec![2], vec![4], vec![8]]);
    }

    #[test]
    fn b3_and_cgrow_are_valid() {
        assert!(b3().validate().is_valid());
        let d = cgrow();
        assert!(d.validate().is_valid());
        // n_{p+1} = 2 n_p + 1 with n_0 = 1
        let dims = d.dims_window(4).unwrap();
        assert_eq!(dims, vec![vec![1, 1], vec![1, 3], vec![1, 7], vec![1, 15]]);
    }

    #[test]
    fn unitality_violation_is_reported() {
        // d(1,0) = 3 but the incoming multiplicity sum is 2
        let d = BratteliDiagram::new(
            vec![vec![1], vec![3]],
            vec![vec![Edge { source: 0, target: 0, multiplicity: 2 }]],
            None,
        )
        .unwrap();
        let report = d.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Unitality { vertex, expected: 2, found: 3 }
                if *vertex == VertexId::new(1, 0))));
    }

    #[test]
    fn dimension_one_consequence_is_reported() {
        // dimension-1 vertex with two incoming edges
        let d = BratteliDiagram::new(
            vec![vec![1, 1], vec![1]],
            vec![vec![
                Edge { source: 0, target: 0, multiplicity: 1 },
                Edge { source: 1, target: 0, multiplicity: 1 },
            ]],
            None,
        )
        .unwrap();
        let report = d.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DimensionOneIncoming { .. })));
    }

    #[test]
    fn duplicate_edges_merge_multiplicities() {
        let d = BratteliDiagram::new(
            vec![vec![1], vec![2]],
            vec![vec![
                Edge { source: 0, target: 0, multiplicity: 1 },
                Edge { source: 0, target: 0, multiplicity: 1 },
            ]],
            None,
        )
        .unwrap();
        assert_eq!(
            d.stored_edges()[0],
            vec![Edge { source: 0, target: 0, multiplicity: 2 }]
        );
        assert!(d.validate().is_valid());
    }

    #[test]
    fn unroll_car() {
        let d = car().unroll(4).unwrap();
        assert!(!d.is_periodic());
        assert_eq!(d.stored_dims(), &[vec![1], vec![2], vec![4], vec![8]]);
        assert!(d.validate().is_valid());
        // unrolling a truncated diagram at its own depth is the identity
        let again = d.unroll(4).unwrap();
        assert_eq!(again, d);
        assert!(d.unroll(3).is_err());
    }

    #[test]
    fn unroll_b3_three_levels() {
        let d = b3().unroll(3).unwrap();
        assert_eq!(
            d.stored_dims(),
            &[vec![1, 1, 1], vec![2, 2, 2], vec![4, 4, 4]]
        );
    }

    #[test]
    fn capped_dim_structure_of_cgrow() {
        let s = cgrow().dim_structure();
        // capped dims are [1,1] at level 0 and [1,2] forever after
        assert!(s.is_dim_one(0, 1));
        assert!(s.is_dim_one(5, 0));
        assert!(!s.is_dim_one(5, 1));
    }

    #[test]
    fn oscillating_dims_stabilize_with_longer_cycle() {
        // two swapped vertices: dims [2,1] and [1,2] alternate forever
        let d = BratteliDiagram::new(
            vec![vec![2, 1]],
            vec![vec![
                Edge { source: 0, target: 1, multiplicity: 1 },
                Edge { source: 1, target: 0, multiplicity: 1 },
            ]],
            Some(PeriodicTail { start_level: 0, period: 1 }),
        )
        .unwrap();
        assert!(d.validate().is_valid());
        let s = d.dim_structure();
        assert_eq!(s.cycle.len() % 2, 0);
        assert!(s.is_dim_one(s.stable_start + 1, 0) != s.is_dim_one(s.stable_start, 0));
        let dims = d.dims_window(4).unwrap();
        assert_eq!(dims, vec![vec![2, 1], vec![1, 2], vec![2, 1], vec![1, 2]]);
    }
}
