//! Directed and hereditary vertex subsets of a diagram — the combinatorial
//! form of closed two-sided ideals — and the least-fixed-point closure that
//! generates them.
//!
//! Membership is represented per level: an explicit finite prefix plus, for
//! eventually-periodic sets, a repeating block of per-level index sets
//! anchored at the end of the prefix. The closure operator works on an
//! unrolled window and certifies stabilization before returning; it never
//! assumes that a pattern repeats.

use crate::diagram::{BratteliDiagram, DiagramError, VertexId};
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

static EMPTY_SET: BTreeSet<usize> = BTreeSet::new();

/// Errors for set/diagram mismatches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealError {
    /// A member references a vertex that does not exist.
    VertexOutOfRange(VertexId),
    /// The set's shape is incompatible with the diagram's presentation.
    ShapeMismatch(String),
    /// The set is not directed and hereditary.
    NotAnIdeal(String),
    Diagram(DiagramError),
}

impl fmt::Display for IdealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealError::VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
            IdealError::ShapeMismatch(m) => write!(f, "set shape mismatch: {m}"),
            IdealError::NotAnIdeal(m) => write!(f, "not directed and hereditary: {m}"),
            IdealError::Diagram(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for IdealError {}

impl From<DiagramError> for IdealError {
    fn from(e: DiagramError) -> Self {
        IdealError::Diagram(e)
    }
}

/// Failure of the windowed fixed-point computation to certify a periodic
/// result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureError {
    /// No window up to the configured cap produced a certified periodic
    /// pattern. Re-declaring the diagram with a multiplied period may help.
    Unstable { window: usize },
    Input(IdealError),
}

impl fmt::Display for ClosureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureError::Unstable { window } => write!(
                f,
                "fixed point did not stabilize within a window of {window} levels; \
                 re-declare the diagram with a multiplied period or raise the cap"
            ),
            ClosureError::Input(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ClosureError {}

impl From<IdealError> for ClosureError {
    fn from(e: IdealError) -> Self {
        ClosureError::Input(e)
    }
}

/// Controls for the windowed fixed-point computation.
#[derive(Clone, Copy, Debug)]
pub struct ClosureOptions {
    /// Hard cap on the number of unrolled levels.
    pub max_window: usize,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions { max_window: 4096 }
    }
}

/// An eventually-periodic family of per-level vertex index sets.
///
/// `prefix[p]` gives the members at level `p`; levels at and beyond
/// `prefix.len()` are empty when `tail` is `None` and otherwise repeat
/// `tail` cyclically. Values are canonicalized against a diagram (minimal
/// tail period, maximally absorbed prefix), so structural equality coincides
/// with equality of membership functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelSet {
    prefix: Vec<BTreeSet<usize>>,
    tail: Option<Vec<BTreeSet<usize>>>,
}

impl LevelSet {
    /// The empty set.
    pub fn empty() -> Self {
        LevelSet { prefix: Vec::new(), tail: None }
    }

    /// A finite set of vertices.
    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(vertices: I) -> Self {
        let mut prefix: Vec<BTreeSet<usize>> = Vec::new();
        for v in vertices {
            if prefix.len() <= v.level {
                prefix.resize(v.level + 1, BTreeSet::new());
            }
            prefix[v.level].insert(v.index);
        }
        LevelSet { prefix, tail: None }
    }

    /// Builds a set from explicit parts. `tail`, when present, is anchored at
    /// `prefix.len()`.
    pub fn from_parts(prefix: Vec<BTreeSet<usize>>, tail: Option<Vec<BTreeSet<usize>>>) -> Self {
        let tail = match tail {
            Some(t) if t.is_empty() => None,
            other => other,
        };
        LevelSet { prefix, tail }
    }

    /// The full vertex set of a diagram.
    pub fn full(d: &BratteliDiagram) -> Self {
        let full_level =
            |p: usize| -> BTreeSet<usize> { (0..d.stored_dims()[p].len()).collect() };
        if d.is_periodic() {
            let s = d.prefix_len();
            let k = d.period();
            let prefix = (0..s).map(full_level).collect();
            let tail = (s..s + k).map(full_level).collect();
            LevelSet { prefix, tail: Some(tail) }.canonical(d)
        } else {
            let prefix = (0..d.stored_levels()).map(full_level).collect();
            LevelSet { prefix, tail: None }.canonical(d)
        }
    }

    pub fn anchor(&self) -> usize {
        self.prefix.len()
    }

    pub fn prefix_sets(&self) -> &[BTreeSet<usize>] {
        &self.prefix
    }

    pub fn tail_sets(&self) -> Option<&[BTreeSet<usize>]> {
        self.tail.as_deref()
    }

    /// Tail period (0 when the set is finite).
    pub fn tail_len(&self) -> usize {
        self.tail.as_ref().map_or(0, Vec::len)
    }

    /// Members at an arbitrary level.
    pub fn set_at(&self, level: usize) -> &BTreeSet<usize> {
        if level < self.prefix.len() {
            &self.prefix[level]
        } else {
            match &self.tail {
                Some(t) => &t[(level - self.prefix.len()) % t.len()],
                None => &EMPTY_SET,
            }
        }
    }

    pub fn contains(&self, level: usize, index: usize) -> bool {
        self.set_at(level).contains(&index)
    }

    pub fn is_empty_set(&self) -> bool {
        self.prefix.iter().all(BTreeSet::is_empty)
            && self.tail.as_ref().is_none_or(|t| t.iter().all(BTreeSet::is_empty))
    }

    /// Checks that members reference existing vertices and that the tail is
    /// compatible with the diagram's periodic presentation.
    pub fn check_shape(&self, d: &BratteliDiagram) -> Result<(), IdealError> {
        if let Some(t) = &self.tail {
            if !d.is_periodic() {
                return Err(IdealError::ShapeMismatch(
                    "periodic tail on a truncated diagram".into(),
                ));
            }
            let s = d.prefix_len();
            let k = d.period();
            if self.prefix.len() < s {
                return Err(IdealError::ShapeMismatch(alloc::format!(
                    "tail anchored at {} before the periodic part starts at {s}",
                    self.prefix.len()
                )));
            }
            if (self.prefix.len() - s) % k != 0 || t.len() % k != 0 {
                return Err(IdealError::ShapeMismatch(alloc::format!(
                    "tail (anchor {}, period {}) not aligned with diagram period {k}",
                    self.prefix.len(),
                    t.len()
                )));
            }
        } else if !d.is_periodic() && self.prefix.len() > d.stored_levels() {
            return Err(IdealError::ShapeMismatch(alloc::format!(
                "prefix of depth {} exceeds diagram depth {}",
                self.prefix.len(),
                d.stored_levels()
            )));
        }
        let depth = self.prefix.len() + self.tail_len();
        for p in 0..depth {
            let count = d.vertex_count(p).map_err(IdealError::from)?;
            if let Some(&i) = self.set_at(p).iter().next_back() {
                if i >= count {
                    return Err(IdealError::VertexOutOfRange(VertexId::new(p, i)));
                }
            }
        }
        Ok(())
    }

    /// Canonical form: minimal tail period, prefix absorbed into the tail as
    /// far as possible, trailing empty prefix levels trimmed for finite sets.
    pub fn canonical(mut self, d: &BratteliDiagram) -> Self {
        if let Some(t) = &self.tail {
            if t.iter().all(BTreeSet::is_empty) {
                self.tail = None;
            }
        }
        if let Some(t) = self.tail.take() {
            let k = d.period().max(1);
            // minimal period that is a multiple of the diagram period
            let mut best = t.len();
            let mut div = k;
            while div < t.len() {
                if t.len() % div == 0 && t.chunks(div).all(|c| c == &t[..div]) {
                    best = div;
                    break;
                }
                div += k;
            }
            let mut t: Vec<BTreeSet<usize>> = t[..best].to_vec();
            // absorb prefix blocks into the tail
            let s = d.prefix_len();
            while self.prefix.len() >= s + k && t.len() >= k {
                let a = self.prefix.len();
                let rot = t.len() - (k % t.len());
                // membership the tail would predict for levels a-k..a
                let matches = (0..k).all(|j| {
                    let idx = (rot + j) % t.len();
                    self.prefix[a - k + j] == t[idx]
                });
                if !matches {
                    break;
                }
                for _ in 0..k {
                    self.prefix.pop();
                }
                let r = k % t.len();
                t.rotate_right(r);
            }
            self.tail = Some(t);
        } else {
            while self.prefix.last().is_some_and(BTreeSet::is_empty) {
                self.prefix.pop();
            }
        }
        self
    }

    /// Union of membership functions.
    pub fn union(&self, other: &Self, d: &BratteliDiagram) -> Self {
        merge(self, other, d, |a, b| a.union(b).copied().collect())
    }

    /// Members of `self` that are not members of `other`.
    pub fn difference(&self, other: &Self, d: &BratteliDiagram) -> Self {
        merge(self, other, d, |a, b| a.difference(b).copied().collect())
    }

    /// Members of `self` whose levels lie below `depth`.
    pub fn truncated_to(&self, depth: usize) -> Self {
        let prefix = (0..depth).map(|p| self.set_at(p).clone()).collect();
        LevelSet { prefix, tail: None }
    }

    /// Whether every member of `self` is a member of `other`.
    pub fn subset_of(&self, other: &Self, _d: &BratteliDiagram) -> bool {
        let horizon = compare_horizon(self, other);
        (0..horizon).all(|p| self.set_at(p).is_subset(other.set_at(p)))
    }

    /// Membership-function equality.
    pub fn same_members(&self, other: &Self) -> bool {
        let horizon = compare_horizon(self, other);
        (0..horizon).all(|p| self.set_at(p) == other.set_at(p))
    }

    /// Total order by the per-level membership bitstrings of the unrolled
    /// window (level-major, then vertex-major; a member sorts after a
    /// non-member).
    pub fn cmp_levelwise(&self, other: &Self) -> Ordering {
        let horizon = compare_horizon(self, other);
        for p in 0..horizon {
            let (a, b) = (self.set_at(p), other.set_at(p));
            if a != b {
                let top = a.iter().chain(b.iter()).max().copied().unwrap_or(0);
                for i in 0..=top {
                    match (a.contains(&i), b.contains(&i)) {
                        (false, true) => return Ordering::Less,
                        (true, false) => return Ordering::Greater,
                        _ => {}
                    }
                }
            }
        }
        Ordering::Equal
    }
}

fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        let gcd = {
            let (mut x, mut y) = (a, b);
            while y != 0 {
                let r = x % y;
                x = y;
                y = r;
            }
            x
        };
        a / gcd * b
    }
}

/// Levels that must agree for two eventually-periodic sets to agree
/// everywhere.
fn compare_horizon(a: &LevelSet, b: &LevelSet) -> usize {
    let anchor = a.anchor().max(b.anchor());
    anchor + lcm(a.tail_len().max(1), b.tail_len().max(1))
}

fn merge(
    a: &LevelSet,
    b: &LevelSet,
    d: &BratteliDiagram,
    op: impl Fn(&BTreeSet<usize>, &BTreeSet<usize>) -> BTreeSet<usize>,
) -> LevelSet {
    let anchor = a.anchor().max(b.anchor());
    let prefix: Vec<BTreeSet<usize>> = (0..anchor).map(|p| op(a.set_at(p), b.set_at(p))).collect();
    let t = lcm(a.tail_len(), b.tail_len());
    let tail = if t == 0 {
        None
    } else {
        Some((anchor..anchor + t).map(|p| op(a.set_at(p), b.set_at(p))).collect())
    };
    LevelSet::from_parts(prefix, tail).canonical(d)
}

/// A validated directed and hereditary vertex subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealSet(LevelSet);

impl IdealSet {
    /// Validates directedness and heredity of an explicit set.
    pub fn new(d: &BratteliDiagram, set: LevelSet) -> Result<Self, IdealError> {
        let set = set.canonical(d);
        set.check_shape(d)?;
        match first_rule_violation(d, &set) {
            None => Ok(IdealSet(set)),
            Some(msg) => Err(IdealError::NotAnIdeal(msg)),
        }
    }

    pub fn empty() -> Self {
        IdealSet(LevelSet::empty())
    }

    pub fn full(d: &BratteliDiagram) -> Self {
        IdealSet(LevelSet::full(d))
    }

    pub fn as_level_set(&self) -> &LevelSet {
        &self.0
    }

    pub fn into_level_set(self) -> LevelSet {
        self.0
    }

    pub fn set_at(&self, level: usize) -> &BTreeSet<usize> {
        self.0.set_at(level)
    }

    pub fn contains(&self, level: usize, index: usize) -> bool {
        self.0.contains(level, index)
    }

    pub fn is_empty_set(&self) -> bool {
        self.0.is_empty_set()
    }

    pub fn is_full(&self, d: &BratteliDiagram) -> bool {
        self.0.same_members(&LevelSet::full(d))
    }

    pub fn subset_of(&self, other: &Self, d: &BratteliDiagram) -> bool {
        self.0.subset_of(&other.0, d)
    }

    pub fn cmp_levelwise(&self, other: &Self) -> Ordering {
        self.0.cmp_levelwise(&other.0)
    }
}

/// Decides whether a vertex subset is directed and hereditary.
pub fn is_ideal_set(d: &BratteliDiagram, set: &LevelSet) -> Result<bool, IdealError> {
    set.check_shape(d)?;
    Ok(first_rule_violation(d, set).is_none())
}

/// Returns a description of the first directedness/heredity violation, if
/// any. Checks every level class of an eventually-periodic set exactly.
fn first_rule_violation(d: &BratteliDiagram, set: &LevelSet) -> Option<String> {
    let up_to = if set.tail.is_some() {
        set.anchor() + set.tail_len()
    } else if d.is_periodic() {
        set.anchor() + 1
    } else {
        d.stored_levels()
    };
    for p in 0..up_to {
        let Some(block) = d.edge_block(p) else { continue };
        let here = set.set_at(p);
        let next = set.set_at(p + 1);
        for e in block {
            if here.contains(&e.source) && !next.contains(&e.target) {
                return Some(alloc::format!(
                    "directedness fails at {} -> {}",
                    VertexId::new(p, e.source),
                    VertexId::new(p + 1, e.target)
                ));
            }
        }
        // heredity: group edges by source
        let count = d.vertex_count(p).unwrap_or(0);
        let mut all_in = vec![true; count];
        let mut has_edge = vec![false; count];
        for e in block {
            has_edge[e.source] = true;
            if !next.contains(&e.target) {
                all_in[e.source] = false;
            }
        }
        for v in 0..count {
            if has_edge[v] && all_in[v] && !here.contains(&v) {
                return Some(alloc::format!(
                    "heredity fails at {}: every outgoing edge lands in the set",
                    VertexId::new(p, v)
                ));
            }
        }
    }
    None
}

/// Per-position adjacency of a diagram, shared by the window computations.
struct Adjacency {
    /// `targets[pos][v]`: distinct targets of edges out of `v` in block `pos`.
    targets: Vec<Vec<Vec<usize>>>,
    /// `sources[pos][w]`: distinct sources of edges into `w` in block `pos`.
    sources: Vec<Vec<Vec<usize>>>,
}

impl Adjacency {
    fn build(d: &BratteliDiagram) -> Self {
        let mut targets = Vec::with_capacity(d.stored_edges().len());
        let mut sources = Vec::with_capacity(d.stored_edges().len());
        for (b, block) in d.stored_edges().iter().enumerate() {
            let src_count = d.stored_dims()[b].len();
            let tgt_level = if b + 1 < d.stored_levels() {
                b + 1
            } else {
                d.periodic_tail().map(|t| t.start_level).unwrap_or(b + 1)
            };
            let tgt_count = d.stored_dims().get(tgt_level).map_or(0, Vec::len);
            let mut t = vec![Vec::new(); src_count];
            let mut s = vec![Vec::new(); tgt_count];
            for e in block {
                t[e.source].push(e.target);
                s[e.target].push(e.source);
            }
            targets.push(t);
            sources.push(s);
        }
        Adjacency { targets, sources }
    }
}

/// Least fixed point of directedness and heredity over a finite window of
/// `depth` levels. Heredity at a level only fires from successors that exist
/// inside the window, so members are exactly the vertices with a finite
/// derivation contained in the window.
fn closure_window(d: &BratteliDiagram, adj: &Adjacency, seed: &LevelSet, depth: usize) -> Vec<Vec<bool>> {
    let mut member: Vec<Vec<bool>> = (0..depth)
        .map(|p| vec![false; d.vertex_count(p).expect("level in window")])
        .collect();
    let mut work: Vec<(usize, usize)> = Vec::new();
    let seed_depth = depth.min(if seed.tail.is_some() { depth } else { seed.anchor() });
    for p in 0..seed_depth {
        for &v in seed.set_at(p) {
            if !member[p][v] {
                member[p][v] = true;
                work.push((p, v));
            }
        }
    }
    while let Some((p, v)) = work.pop() {
        // directedness forward
        if p + 1 < depth {
            if let Some(t) = adj.targets.get(d.position(p)) {
                for &w in &t[v] {
                    if !member[p + 1][w] {
                        member[p + 1][w] = true;
                        work.push((p + 1, w));
                    }
                }
            }
        }
        // heredity backward: predecessors of v may now have every successor in
        if p >= 1 {
            let pos = d.position(p - 1);
            for &u in &adj.sources[pos][v] {
                if member[p - 1][u] {
                    continue;
                }
                let outs = &adj.targets[pos][u];
                if !outs.is_empty() && outs.iter().all(|&w| member[p][w]) {
                    member[p - 1][u] = true;
                    work.push((p - 1, u));
                }
            }
        }
    }
    member
}

fn window_to_sets(member: &[Vec<bool>]) -> Vec<BTreeSet<usize>> {
    member
        .iter()
        .map(|lvl| lvl.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect())
        .collect()
}

/// The least directed and hereditary set containing `seed`.
///
/// On a periodic diagram the fixed point is computed on an unrolled window;
/// the eventual pattern is certified by exact rule checking plus agreement
/// with a strictly larger window before it is returned, and the window grows
/// (then errors out at the cap) when certification fails.
pub fn closure(
    d: &BratteliDiagram,
    seed: &LevelSet,
    opts: &ClosureOptions,
) -> Result<IdealSet, ClosureError> {
    seed.check_shape(d).map_err(ClosureError::from)?;
    let adj = Adjacency::build(d);
    if !d.is_periodic() {
        let depth = d.stored_levels();
        let member = closure_window(d, &adj, seed, depth);
        let set = LevelSet::from_parts(window_to_sets(&member), None).canonical(d);
        return Ok(IdealSet(set));
    }
    let k = d.period();
    let base_t = seed.tail_len().max(k);
    let start = {
        // first aligned level past both the diagram prefix and the seed prefix
        let s = d.prefix_len();
        let raw = s.max(seed.anchor());
        s + (raw - s).div_ceil(k) * k
    };
    let per_t: usize = (start..start + base_t)
        .map(|p| d.vertex_count(p).expect("periodic"))
        .sum();
    let mut blocks = (per_t + 1).max(4);
    loop {
        let window = start + blocks * base_t;
        if window > opts.max_window {
            return Err(ClosureError::Unstable { window });
        }
        let member = closure_window(d, &adj, seed, window);
        let sets = window_to_sets(&member);
        // Levels near the window boundary are under-derived: a vertex whose
        // derivation climbs past the boundary is not yet a member there. The
        // compared blocks sit a margin below the end, and the margin grows
        // with the window so bounded derivation heights are always cleared
        // eventually.
        let margin = (blocks / 4).max(1) * base_t;
        let mut mult = 1;
        loop {
            let t = base_t * mult;
            if start + margin + 2 * t > window {
                break;
            }
            let a = window - margin - 2 * t;
            let tail_a = &sets[a..a + t];
            let tail_b = &sets[a + t..a + 2 * t];
            if tail_a == tail_b {
                let candidate =
                    LevelSet::from_parts(sets[..a].to_vec(), Some(tail_a.to_vec())).canonical(d);
                if candidate_certified(d, &adj, seed, &candidate, window, t, margin) {
                    return Ok(IdealSet(candidate));
                }
            }
            mult += 1;
        }
        blocks *= 2;
    }
}

/// A candidate pattern is accepted only if it is exactly directed and
/// hereditary, contains the seed, and reproduces the fixed point of a
/// strictly larger window on that window's interior.
fn candidate_certified(
    d: &BratteliDiagram,
    adj: &Adjacency,
    seed: &LevelSet,
    candidate: &LevelSet,
    window: usize,
    t: usize,
    margin: usize,
) -> bool {
    if first_rule_violation(d, candidate).is_some() {
        return false;
    }
    if !seed.subset_of(candidate, d) {
        return false;
    }
    let bigger = window + 2 * t;
    let member = closure_window(d, adj, seed, bigger);
    (0..bigger - margin).all(|p| {
        let got = &member[p];
        let want = candidate.set_at(p);
        got.iter().enumerate().all(|(i, &m)| m == want.contains(&i))
    })
}

/// Join in the ideal lattice: the closure of the union.
pub fn join(
    d: &BratteliDiagram,
    a: &IdealSet,
    b: &IdealSet,
    opts: &ClosureOptions,
) -> Result<IdealSet, ClosureError> {
    closure(d, &a.as_level_set().union(b.as_level_set(), d), opts)
}

/// Meet in the ideal lattice: the intersection (which is already directed and
/// hereditary).
pub fn meet(d: &BratteliDiagram, a: &IdealSet, b: &IdealSet) -> IdealSet {
    let anchor = a.as_level_set().anchor().max(b.as_level_set().anchor());
    let prefix = (0..anchor)
        .map(|p| a.set_at(p).intersection(b.set_at(p)).copied().collect())
        .collect();
    let t = lcm(a.as_level_set().tail_len(), b.as_level_set().tail_len());
    let tail = if t == 0 {
        None
    } else {
        Some(
            (anchor..anchor + t)
                .map(|p| a.set_at(p).intersection(b.set_at(p)).copied().collect())
                .collect(),
        )
    };
    IdealSet(LevelSet::from_parts(prefix, tail).canonical(d))
}

/// Diagram of the quotient algebra: the complement of an ideal set with
/// induced edges. The result of quotienting a valid diagram is again valid.
pub fn quotient_diagram(d: &BratteliDiagram, s: &IdealSet) -> Result<BratteliDiagram, IdealError> {
    let complement = LevelSet::full(d).difference(s.as_level_set(), d);
    induced_subdiagram(d, &complement, true)
}

/// Diagram of the ideal itself, as a (generally non-unital) subdiagram.
/// Levels before the first nonempty level are dropped. The result can have
/// vertices with no incoming edge; unitality is not asserted.
pub fn restrict_diagram(d: &BratteliDiagram, s: &IdealSet) -> Result<BratteliDiagram, IdealError> {
    induced_subdiagram(d, s.as_level_set(), false)
}

fn induced_subdiagram(
    d: &BratteliDiagram,
    keep: &LevelSet,
    is_quotient: bool,
) -> Result<BratteliDiagram, IdealError> {
    if keep.is_empty_set() {
        return Ok(BratteliDiagram::empty());
    }
    // first retained level; for quotients of valid data this is 0
    let mut entry = 0;
    while keep.set_at(entry).is_empty() {
        entry += 1;
        if !d.has_level(entry) {
            return Ok(BratteliDiagram::empty());
        }
    }
    let (stored_depth, tail) = if d.is_periodic() {
        let k = d.period();
        let t = keep.tail_len().max(k);
        let s = d.prefix_len();
        let raw = s.max(keep.anchor()).max(entry);
        let anchor = s + (raw - s).div_ceil(k) * k;
        (
            anchor + t,
            Some(crate::diagram::PeriodicTail {
                start_level: anchor - entry,
                period: t,
            }),
        )
    } else {
        (d.stored_levels(), None)
    };
    // any empty retained level inside the window means the retained part dies
    // out, which for ideals can only happen when it is empty everywhere
    for p in entry..stored_depth {
        if keep.set_at(p).is_empty() {
            return Err(IdealError::ShapeMismatch(alloc::format!(
                "retained set is empty at level {p} but not everywhere"
            )));
        }
    }
    let dims = d.dims_window(stored_depth).map_err(IdealError::from)?;
    let relabel: Vec<Vec<Option<usize>>> = (entry..stored_depth)
        .map(|p| {
            let mut map = vec![None; dims[p].len()];
            for (new, &old) in keep.set_at(p).iter().enumerate() {
                map[old] = Some(new);
            }
            map
        })
        .collect();
    let levels: Vec<Vec<u64>> = (entry..stored_depth)
        .map(|p| keep.set_at(p).iter().map(|&i| dims[p][i]).collect())
        .collect();
    let n_blocks = if tail.is_some() { levels.len() } else { levels.len() - 1 };
    let mut edges = Vec::with_capacity(n_blocks);
    for bp in 0..n_blocks {
        let p = entry + bp;
        let block = d.edge_block(p).expect("transition in window");
        let tgt_level_new = if bp + 1 < levels.len() {
            bp + 1
        } else {
            tail.expect("wrap only when periodic").start_level
        };
        let tgt_keep = keep.set_at(entry + tgt_level_new);
        let tgt_map: Vec<Option<usize>> = {
            let count = d.vertex_count(entry + tgt_level_new).map_err(IdealError::from)?;
            let mut map = vec![None; count];
            for (new, &old) in tgt_keep.iter().enumerate() {
                map[old] = Some(new);
            }
            map
        };
        let mut out = Vec::new();
        for e in block {
            if let (Some(ns), Some(nt)) = (relabel[bp][e.source], tgt_map[e.target]) {
                out.push(crate::diagram::Edge {
                    source: ns,
                    target: nt,
                    multiplicity: e.multiplicity,
                });
            }
        }
        edges.push(out);
    }
    let result = BratteliDiagram::new(levels, edges, tail).map_err(IdealError::from)?;
    if is_quotient && d.validate().is_valid() {
        debug_assert!(
            result.validate().is_valid(),
            "quotient of a valid diagram must be valid"
        );
    }
    Ok(result)
}
