//! Classification of ideals: characters, perfectness, the largest perfect
//! ideal, lattice enumeration, the normal-subgroup correspondence, and the
//! topological-simplicity signature.
//!
//! A character of (the algebra presented by) a directed hereditary set `S`
//! corresponds to a maximal infinite path of dimension-1 vertices inside `S`.
//! On an eventually-periodic presentation such paths are found by cycle
//! detection on a finite quotient of the dimension-1 subgraph; perfectness is
//! decided by that oracle and cross-checked against two independent
//! criteria, with any disagreement surfaced as a hard diagnostic.

use crate::diagram::{BratteliDiagram, DimStructure, VertexId};
use crate::ideal::{
    self, closure, ClosureError, ClosureOptions, IdealError, IdealSet, LevelSet,
};
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Number of characters; `Infinite` means the dimension-1 cycle structure
/// supports uncountably many paths and only cycle generators are reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharacterCount {
    Finite(usize),
    Infinite,
}

/// One maximal infinite path of dimension-1 vertices: an explicit run of
/// vertex indices from `start`, followed by a repeating cycle of indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterWitness {
    pub start: VertexId,
    /// Vertex index at each level from `start.level` up to (excluding)
    /// `cycle_start_level`.
    pub prefix_indices: Vec<usize>,
    pub cycle_start_level: usize,
    /// Vertex index at each level of one full cycle, starting at
    /// `cycle_start_level`.
    pub cycle_indices: Vec<usize>,
}

impl fmt::Display for CharacterWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "start {} path", self.start)?;
        for i in &self.prefix_indices {
            write!(f, " {i}")?;
        }
        write!(f, " | cycle from level {}:", self.cycle_start_level)?;
        for i in &self.cycle_indices {
            write!(f, " {i}")?;
        }
        Ok(())
    }
}

/// A cycle of dimension-1 vertices, reported as a generator when the path
/// count is infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDescription {
    pub start_level: usize,
    pub indices: Vec<usize>,
}

/// Characters of the subalgebra carried by an ideal set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterReport {
    pub count: CharacterCount,
    pub witnesses: Vec<CharacterWitness>,
    pub cycles: Vec<CycleDescription>,
}

impl CharacterReport {
    pub fn none() -> Self {
        CharacterReport {
            count: CharacterCount::Finite(0),
            witnesses: Vec::new(),
            cycles: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.count == CharacterCount::Finite(0)
    }
}

/// Disagreement between the character oracle and the cross-check criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub character_oracle: bool,
    pub closure_criterion: bool,
    pub path_criterion: bool,
    pub detail: String,
}

impl fmt::Display for CrossCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "perfectness cross-check disagreement: character oracle {}, closure criterion {}, \
             path criterion {} ({})",
            self.character_oracle, self.closure_criterion, self.path_criterion, self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnalysisError {
    /// Characters are undecidable on a truncation; supply a periodic tail or
    /// use the finite-dimensional character count at a level.
    TruncatedCharacters,
    Input(IdealError),
    Closure(ClosureError),
    CrossCheck(CrossCheckReport),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::TruncatedCharacters => write!(
                f,
                "characters undecidable on truncation; supply a periodic tail or use \
                 finite-dimensional character counts on a level"
            ),
            AnalysisError::Input(e) => write!(f, "{e}"),
            AnalysisError::Closure(e) => write!(f, "{e}"),
            AnalysisError::CrossCheck(r) => write!(f, "{r}"),
        }
    }
}

impl core::error::Error for AnalysisError {}

impl From<IdealError> for AnalysisError {
    fn from(e: IdealError) -> Self {
        AnalysisError::Input(e)
    }
}

impl From<ClosureError> for AnalysisError {
    fn from(e: ClosureError) -> Self {
        AnalysisError::Closure(e)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    let gcd = {
        let (mut x, mut y) = (a.max(1), b.max(1));
        while y != 0 {
            let r = x % y;
            x = y;
            y = r;
        }
        x
    };
    a.max(1) / gcd * b.max(1)
}

/// The dimension-1 subgraph of `s`, organized as an explicit run of levels
/// `0..window_start` followed by a quotient on `window_start..window_start +
/// period` whose last level wraps to the first.
struct DimOneGraph {
    window_start: usize,
    period: usize,
    /// For each level `0..window_start + period`, the dim-1 members of `s`.
    nodes: Vec<BTreeSet<usize>>,
    /// Forward adjacency between dim-1 member vertices; index aligned with
    /// `nodes`, the last level mapping into level `window_start`.
    succ: Vec<alloc::collections::BTreeMap<usize, Vec<usize>>>,
}

impl DimOneGraph {
    fn build(d: &BratteliDiagram, s: &IdealSet, ds: &DimStructure) -> Self {
        let t_s = s.as_level_set().tail_len().max(d.period());
        let cyc = ds.cycle.len().max(1);
        let period = lcm(lcm(cyc, t_s), d.period().max(1));
        let k = d.period().max(1);
        let raw = ds
            .stable_start
            .max(s.as_level_set().anchor())
            .max(d.prefix_len());
        // aligned so that eventually-periodic sets anchored here are valid
        let window_start = d.prefix_len() + (raw - d.prefix_len()).div_ceil(k) * k;
        let depth = window_start + period;
        let node_at = |p: usize| -> BTreeSet<usize> {
            s.set_at(p)
                .iter()
                .copied()
                .filter(|&i| ds.is_dim_one(p, i))
                .collect()
        };
        let nodes: Vec<BTreeSet<usize>> = (0..depth).map(node_at).collect();
        let mut succ = Vec::with_capacity(depth);
        for p in 0..depth {
            let mut adj = alloc::collections::BTreeMap::new();
            let next_level = if p + 1 < depth { p + 1 } else { window_start };
            if let Some(block) = d.edge_block(p) {
                for e in block {
                    if nodes[p].contains(&e.source) && nodes[next_level].contains(&e.target) {
                        adj.entry(e.source).or_insert_with(Vec::new).push(e.target);
                    }
                }
            }
            succ.push(adj);
        }
        DimOneGraph { window_start, period, nodes, succ }
    }

    fn quotient_node_ids(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in self.window_start..self.window_start + self.period {
            for &i in &self.nodes[p] {
                out.push((p, i));
            }
        }
        out
    }

    fn quotient_successors(&self, (p, i): (usize, usize)) -> Vec<(usize, usize)> {
        let next = if p + 1 < self.window_start + self.period { p + 1 } else { self.window_start };
        self.succ[p]
            .get(&i)
            .map(|v| v.iter().map(|&j| (next, j)).collect())
            .unwrap_or_default()
    }
}

/// Strongly connected components of the quotient zone (iterative Tarjan).
fn sccs(g: &DimOneGraph) -> Vec<Vec<(usize, usize)>> {
    let ids = g.quotient_node_ids();
    let index_of: alloc::collections::BTreeMap<(usize, usize), usize> =
        ids.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let n = ids.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comps = Vec::new();
    // explicit DFS stack: (node, next successor position)
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&(v, pos)) = call.last() {
            if pos == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let succs = g.quotient_successors(ids[v]);
            if pos < succs.len() {
                call.last_mut().expect("nonempty").1 += 1;
                let w = index_of[&succs[pos]];
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(ids[w]);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
            }
        }
    }
    comps
}

/// Enumerates the maximal infinite dimension-1 paths inside `s`.
pub fn characters(d: &BratteliDiagram, s: &IdealSet) -> Result<CharacterReport, AnalysisError> {
    if !d.is_periodic() {
        return Err(AnalysisError::TruncatedCharacters);
    }
    if s.is_empty_set() {
        return Ok(CharacterReport::none());
    }
    let ds = d.dim_structure();
    let g = DimOneGraph::build(d, s, &ds);
    let comps = sccs(&g);
    let mut cyclic: Vec<Vec<(usize, usize)>> = Vec::new();
    for comp in comps {
        let has_cycle = comp.len() > 1
            || g.quotient_successors(comp[0]).contains(&comp[0]);
        if has_cycle {
            cyclic.push(comp);
        }
    }
    // sort component representatives for deterministic output
    for c in cyclic.iter_mut() {
        c.sort_unstable();
    }
    cyclic.sort_unstable();

    let cycle_sets: Vec<BTreeSet<(usize, usize)>> =
        cyclic.iter().map(|c| c.iter().copied().collect()).collect();
    let in_any_cycle = |node: (usize, usize)| cycle_sets.iter().position(|c| c.contains(&node));

    // Infinite-count conditions: a cyclic component that is not a simple
    // cycle, an edge entering a cycle from outside it, or a path from one
    // cycle to another.
    let mut infinite = false;
    for (ci, comp) in cyclic.iter().enumerate() {
        for &node in comp {
            let succs = g.quotient_successors(node);
            let inside: Vec<_> =
                succs.iter().filter(|w| cycle_sets[ci].contains(w)).collect();
            if inside.len() != 1 {
                infinite = true;
            }
            for w in &succs {
                if let Some(cj) = in_any_cycle(*w) {
                    if cj != ci {
                        infinite = true;
                    }
                }
            }
        }
    }
    for node in g.quotient_node_ids() {
        if in_any_cycle(node).is_none() {
            for w in g.quotient_successors(node) {
                if in_any_cycle(w).is_some() {
                    infinite = true;
                }
            }
        }
    }
    if infinite {
        let cycles = cyclic
            .iter()
            .map(|c| {
                let start = c.iter().min().copied().expect("nonempty component");
                CycleDescription {
                    start_level: start.0,
                    indices: c.iter().map(|&(_, i)| i).collect(),
                }
            })
            .collect();
        return Ok(CharacterReport {
            count: CharacterCount::Infinite,
            witnesses: Vec::new(),
            cycles,
        });
    }

    // Finite mode: every cyclic component is a simple, unentered cycle. Each
    // of its nodes at the first quotient level anchors exactly one maximal
    // path: unique forward continuation around the cycle, unique backward
    // extension down the dimension-1 parent chain while it stays in `s`.
    let mut witnesses = Vec::new();
    for (ci, comp) in cyclic.iter().enumerate() {
        let anchors: Vec<(usize, usize)> = comp
            .iter()
            .copied()
            .filter(|&(p, _)| p == g.window_start)
            .collect();
        for &anchor in &anchors {
            // forward around the cycle: |comp| steps return to the anchor
            let mut cycle_indices = Vec::with_capacity(comp.len());
            let mut node = anchor;
            for _ in 0..comp.len() {
                cycle_indices.push(node.1);
                let succs = g.quotient_successors(node);
                node = *succs
                    .iter()
                    .find(|w| cycle_sets[ci].contains(w))
                    .expect("simple cycle has a successor inside");
            }
            debug_assert_eq!(node, anchor);
            // backward: unique dimension-1 parent while inside `s`
            let mut chain: Vec<usize> = Vec::new();
            let mut level = g.window_start;
            let mut idx = anchor.1;
            while level > 0 {
                let block = d.edge_block(level - 1).expect("level > 0 has a block");
                let parents: Vec<usize> = block
                    .iter()
                    .filter(|e| e.target == idx && ds.is_dim_one(level - 1, e.source))
                    .map(|e| e.source)
                    .collect();
                if parents.len() != 1 || !s.contains(level - 1, parents[0]) {
                    break;
                }
                idx = parents[0];
                level -= 1;
                chain.push(idx);
            }
            chain.reverse();
            witnesses.push(CharacterWitness {
                start: VertexId::new(level, *chain.first().unwrap_or(&anchor.1)),
                prefix_indices: chain,
                cycle_start_level: g.window_start,
                cycle_indices,
            });
        }
    }
    witnesses.sort_by(|a, b| {
        (a.start.level, a.start.index, &a.prefix_indices, &a.cycle_indices).cmp(&(
            b.start.level,
            b.start.index,
            &b.prefix_indices,
            &b.cycle_indices,
        ))
    });
    Ok(CharacterReport {
        count: CharacterCount::Finite(witnesses.len()),
        witnesses,
        cycles: Vec::new(),
    })
}

/// The witness path as a level set (for removal checks).
fn witness_level_set(d: &BratteliDiagram, w: &CharacterWitness) -> LevelSet {
    let mut prefix: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); w.cycle_start_level];
    for (off, &i) in w.prefix_indices.iter().enumerate() {
        prefix[w.start.level + off].insert(i);
    }
    let tail: Vec<BTreeSet<usize>> = w
        .cycle_indices
        .iter()
        .map(|&i| {
            let mut s = BTreeSet::new();
            s.insert(i);
            s
        })
        .collect();
    LevelSet::from_parts(prefix, Some(tail)).canonical(d)
}

/// Members of `s` whose dimension is at least 2, as a closure seed.
fn dim_ge2_part(d: &BratteliDiagram, s: &IdealSet) -> LevelSet {
    let ds = d.dim_structure();
    if !d.is_periodic() {
        let depth = d.stored_levels();
        let prefix = (0..depth)
            .map(|p| {
                s.set_at(p)
                    .iter()
                    .copied()
                    .filter(|&i| !ds.is_dim_one(p, i))
                    .collect()
            })
            .collect();
        return LevelSet::from_parts(prefix, None).canonical(d);
    }
    let t_s = s.as_level_set().tail_len().max(d.period());
    let cyc = ds.cycle.len().max(1);
    let period = lcm(lcm(cyc, t_s), d.period().max(1));
    let raw = ds
        .stable_start
        .max(s.as_level_set().anchor())
        .max(d.prefix_len());
    let k = d.period();
    let anchor = d.prefix_len() + (raw - d.prefix_len()).div_ceil(k) * k;
    let pick = |p: usize| -> BTreeSet<usize> {
        s.set_at(p)
            .iter()
            .copied()
            .filter(|&i| !ds.is_dim_one(p, i))
            .collect()
    };
    let prefix = (0..anchor).map(pick).collect();
    let tail = (anchor..anchor + period).map(pick).collect();
    LevelSet::from_parts(prefix, Some(tail)).canonical(d)
}

/// Largest perfect ideal contained in `s`: the closure of its dimension≥2
/// members.
pub fn largest_perfect(
    d: &BratteliDiagram,
    s: &IdealSet,
    opts: &ClosureOptions,
) -> Result<IdealSet, AnalysisError> {
    let seed = dim_ge2_part(d, s);
    let result = closure(d, &seed, opts)?;
    if !result.subset_of(s, d) {
        return Err(AnalysisError::CrossCheck(CrossCheckReport {
            character_oracle: false,
            closure_criterion: false,
            path_criterion: false,
            detail: "largest_perfect produced a set not contained in its input".into(),
        }));
    }
    Ok(result)
}

/// Perfectness by the character oracle, cross-checked against the closure
/// criterion (`closure of the dim>=2 part equals the set`) and the path
/// criterion (`some maximal dimension-1 path whose removal leaves an ideal
/// set`). Any disagreement is a hard error carrying all three verdicts.
pub fn is_perfect(
    d: &BratteliDiagram,
    s: &IdealSet,
    opts: &ClosureOptions,
) -> Result<bool, AnalysisError> {
    if s.is_empty_set() {
        return Ok(true);
    }
    let report = characters(d, s)?;
    let oracle = report.is_zero();
    let closure_criterion = {
        let lp = largest_perfect(d, s, opts)?;
        lp.as_level_set().same_members(s.as_level_set())
    };
    let path_criterion = match report.count {
        CharacterCount::Infinite => false,
        CharacterCount::Finite(_) => {
            let mut removable = false;
            for w in &report.witnesses {
                let path = witness_level_set(d, w);
                let remainder = s.as_level_set().difference(&path, d);
                if ideal::is_ideal_set(d, &remainder)? {
                    removable = true;
                    break;
                }
            }
            !removable
        }
    };
    if oracle == closure_criterion && oracle == path_criterion {
        Ok(oracle)
    } else {
        Err(AnalysisError::CrossCheck(CrossCheckReport {
            character_oracle: oracle,
            closure_criterion,
            path_criterion,
            detail: alloc::format!(
                "character count {:?}, {} witnesses",
                report.count,
                report.witnesses.len()
            ),
        }))
    }
}

/// Result of ideal enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub ideals: Vec<IdealSet>,
    /// Claimed only when raising the seed horizon by one period adds nothing.
    pub complete: bool,
    pub hit_cap: bool,
}

/// All distinct closures of vertex subsets at levels up to `max_seed_level`,
/// via joins of the principal (single-vertex) closures. Canonically ordered;
/// capped at `cap` entries with an explicit incompleteness flag.
pub fn enumerate_ideals(
    d: &BratteliDiagram,
    max_seed_level: usize,
    cap: usize,
    opts: &ClosureOptions,
) -> Result<Enumeration, AnalysisError> {
    let (ideals, hit_cap) = enumerate_at(d, max_seed_level, cap, opts)?;
    let complete = if hit_cap {
        false
    } else if d.is_periodic() {
        let (more, more_cap) = enumerate_at(d, max_seed_level + d.period(), cap, opts)?;
        !more_cap && more.len() == ideals.len()
    } else {
        max_seed_level + 1 >= d.stored_levels()
    };
    let mut ideals = ideals;
    ideals.sort_by(|a, b| a.cmp_levelwise(b));
    Ok(Enumeration { ideals, complete, hit_cap })
}

fn enumerate_at(
    d: &BratteliDiagram,
    max_seed_level: usize,
    cap: usize,
    opts: &ClosureOptions,
) -> Result<(Vec<IdealSet>, bool), AnalysisError> {
    if d.is_empty() {
        return Ok((vec![IdealSet::empty()], false));
    }
    let top = if d.is_periodic() {
        max_seed_level
    } else {
        max_seed_level.min(d.stored_levels().saturating_sub(1))
    };
    let mut principals: Vec<IdealSet> = Vec::new();
    for p in 0..=top {
        let count = d.vertex_count(p).map_err(IdealError::from)?;
        for i in 0..count {
            let seed = LevelSet::from_vertices([VertexId::new(p, i)]);
            let c = closure(d, &seed, opts)?;
            if !principals.contains(&c) {
                principals.push(c);
            }
        }
    }
    let mut ideals: Vec<IdealSet> = vec![IdealSet::empty(), IdealSet::full(d)];
    ideals.dedup();
    let mut frontier: Vec<IdealSet> = ideals.clone();
    while let Some(x) = frontier.pop() {
        for g in &principals {
            let j = ideal::join(d, &x, g, opts)?;
            if !ideals.contains(&j) {
                if ideals.len() >= cap {
                    return Ok((ideals, true));
                }
                ideals.push(j.clone());
                frontier.push(j);
            }
        }
    }
    Ok((ideals, false))
}

/// Label of a normal subgroup relative to the trivial and full ideals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupLabel {
    Trivial,
    Proper,
    Full,
}

impl fmt::Display for SubgroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupLabel::Trivial => write!(f, "trivial"),
            SubgroupLabel::Proper => write!(f, "proper"),
            SubgroupLabel::Full => write!(f, "full"),
        }
    }
}

/// A closed normal subgroup of the approximately-inner automorphism group,
/// identified by its perfect ideal.
#[derive(Clone, Debug)]
pub struct NormalSubgroupDescriptor {
    pub ideal: IdealSet,
    pub label: SubgroupLabel,
    pub sandwich_note: String,
}

/// The closed normal subgroups of `V_A`: one per perfect ideal.
pub fn normal_subgroups(
    d: &BratteliDiagram,
    max_seed_level: usize,
    cap: usize,
    opts: &ClosureOptions,
) -> Result<(Vec<NormalSubgroupDescriptor>, Enumeration), AnalysisError> {
    let enumeration = enumerate_ideals(d, max_seed_level, cap, opts)?;
    let mut out = Vec::new();
    for ideal in &enumeration.ideals {
        if is_perfect(d, ideal, opts)? {
            let label = if ideal.is_empty_set() {
                SubgroupLabel::Trivial
            } else if ideal.is_full(d) {
                SubgroupLabel::Full
            } else {
                SubgroupLabel::Proper
            };
            out.push(NormalSubgroupDescriptor {
                ideal: ideal.clone(),
                label,
                sandwich_note: String::from(
                    "H = V_I = ker(P_I): the sandwich V_I <= H <= ker(P_I) collapses for AF \
                     presentations",
                ),
            });
        }
    }
    Ok((out, enumeration))
}

/// Signature of topological simplicity: the only perfect ideals are the
/// trivial one and the largest perfect ideal of the full set.
#[derive(Clone, Debug)]
pub struct SimplicityReport {
    pub condition_holds: bool,
    /// Only meaningful when the enumeration was complete.
    pub conclusive: bool,
    pub perfect_count: usize,
    pub ideal_count: usize,
    pub largest_perfect_of_full: IdealSet,
}

pub fn simplicity_report(
    d: &BratteliDiagram,
    max_seed_level: usize,
    cap: usize,
    opts: &ClosureOptions,
) -> Result<SimplicityReport, AnalysisError> {
    let enumeration = enumerate_ideals(d, max_seed_level, cap, opts)?;
    let full = IdealSet::full(d);
    let lp_full = largest_perfect(d, &full, opts)?;
    let mut perfect: Vec<&IdealSet> = Vec::new();
    for ideal in &enumeration.ideals {
        if is_perfect(d, ideal, opts)? {
            perfect.push(ideal);
        }
    }
    let condition_holds = perfect
        .iter()
        .all(|p| p.is_empty_set() || p.as_level_set().same_members(lp_full.as_level_set()));
    Ok(SimplicityReport {
        condition_holds,
        conclusive: enumeration.complete,
        perfect_count: perfect.len(),
        ideal_count: enumeration.ideals.len(),
        largest_perfect_of_full: lp_full,
    })
}
