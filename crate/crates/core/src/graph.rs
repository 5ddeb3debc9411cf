//! The fuzzy weighted graph: every vertex pair is a real edge, a fuzzy edge or
//! a nonedge, and only fuzzy edges carry weight zero.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::simple::SimpleGraph;
use crate::structure::{self, ClosureReport, DegeneracyOrdering};

/// Index of a vertex. Ids stay stable across deletions (dead ids are tombstoned).
pub type VertexId = usize;

/// Classification of a vertex pair.
///
/// The derived order (`Real < Non < Fuzzy`) is the record order of the
/// canonical instance serialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Real,
    Non,
    Fuzzy,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 3] = [EdgeKind::Real, EdgeKind::Non, EdgeKind::Fuzzy];

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Real => "real",
            EdgeKind::Non => "non",
            EdgeKind::Fuzzy => "fuzzy",
        }
    }

    pub fn from_name(s: &str) -> Option<EdgeKind> {
        match s {
            "real" => Some(EdgeKind::Real),
            "non" => Some(EdgeKind::Non),
            "fuzzy" => Some(EdgeKind::Fuzzy),
            _ => None,
        }
    }

    fn check_weight(self, weight: u32) -> Result<()> {
        match (self, weight) {
            (EdgeKind::Fuzzy, 0) => Ok(()),
            (EdgeKind::Fuzzy, w) => Err(Error::Invariant(format!(
                "fuzzy pair must have weight 0, got {w}"
            ))),
            (kind, 0) => Err(Error::Invariant(format!(
                "{} pair must have positive weight",
                kind.name()
            ))),
            _ => Ok(()),
        }
    }
}

/// Dense fuzzy graph with bitset adjacency rows for real and fuzzy edges.
///
/// Nonedges are implicit: a live pair that is neither real nor fuzzy. The
/// weight matrix is stored in full (`capacity × capacity`) so every pair
/// query is O(1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzyGraph {
    capacity: usize,
    alive: FixedBitSet,
    live: usize,
    real: Vec<FixedBitSet>,
    fuzzy: Vec<FixedBitSet>,
    weights: Vec<u32>,
}

impl FuzzyGraph {
    /// `n` vertices, every pair fuzzy.
    pub fn new(n: usize) -> Self {
        let mut alive = FixedBitSet::with_capacity(n);
        alive.insert_range(..);
        let mut fuzzy = vec![alive.clone(); n];
        for (v, row) in fuzzy.iter_mut().enumerate() {
            row.set(v, false);
        }
        FuzzyGraph {
            capacity: n,
            alive,
            live: n,
            real: vec![FixedBitSet::with_capacity(n); n],
            fuzzy,
            weights: vec![0; n * n],
        }
    }

    /// `n` vertices, every pair a nonedge of the given weight.
    pub fn with_nonedges(n: usize, weight: u32) -> Result<Self> {
        EdgeKind::Non.check_weight(weight)?;
        let mut alive = FixedBitSet::with_capacity(n);
        alive.insert_range(..);
        let mut weights = vec![weight; n * n];
        for v in 0..n {
            weights[v * n + v] = 0;
        }
        Ok(FuzzyGraph {
            capacity: n,
            alive,
            live: n,
            real: vec![FixedBitSet::with_capacity(n); n],
            fuzzy: vec![FixedBitSet::with_capacity(n); n],
            weights,
        })
    }

    /// Number of ids ever allocated, live or dead.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Number of live vertices.
    pub fn vertex_count(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn is_live(&self, v: VertexId) -> bool {
        v < self.capacity && self.alive.contains(v)
    }

    /// True when no id has been tombstoned.
    pub fn is_compact(&self) -> bool {
        self.live == self.capacity
    }

    /// Live vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive.ones()
    }

    pub fn alive_set(&self) -> &FixedBitSet {
        &self.alive
    }

    /// Kind of a pair of distinct live vertices. Not validated.
    #[inline]
    pub fn kind(&self, u: VertexId, v: VertexId) -> EdgeKind {
        if self.real[u].contains(v) {
            EdgeKind::Real
        } else if self.fuzzy[u].contains(v) {
            EdgeKind::Fuzzy
        } else {
            EdgeKind::Non
        }
    }

    /// Weight of a pair of distinct live vertices. Not validated.
    #[inline]
    pub fn weight(&self, u: VertexId, v: VertexId) -> u32 {
        self.weights[u * self.capacity + v]
    }

    fn check_pair(&self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::usage(format!("pair ({u}, {u}) is a self loop")));
        }
        for x in [u, v] {
            if !self.is_live(x) {
                return Err(Error::usage(format!("vertex {x} is not live")));
            }
        }
        Ok(())
    }

    /// The stored kind and weight of `{u, v}`.
    pub fn classify(&self, u: VertexId, v: VertexId) -> Result<(EdgeKind, u32)> {
        self.check_pair(u, v)?;
        Ok((self.kind(u, v), self.weight(u, v)))
    }

    /// Reclassifies `{u, v}`. The weight must be 0 exactly for fuzzy pairs.
    pub fn set_pair(&mut self, u: VertexId, v: VertexId, kind: EdgeKind, weight: u32) -> Result<()> {
        self.check_pair(u, v)?;
        kind.check_weight(weight)?;
        let is_real = kind == EdgeKind::Real;
        let is_fuzzy = kind == EdgeKind::Fuzzy;
        self.real[u].set(v, is_real);
        self.real[v].set(u, is_real);
        self.fuzzy[u].set(v, is_fuzzy);
        self.fuzzy[v].set(u, is_fuzzy);
        self.weights[u * self.capacity + v] = weight;
        self.weights[v * self.capacity + u] = weight;
        Ok(())
    }

    /// Removes `v` and all its pair classifications. The id is not reused.
    pub fn delete_vertex(&mut self, v: VertexId) -> Result<()> {
        if !self.is_live(v) {
            return Err(Error::usage(format!("vertex {v} is not live")));
        }
        let neighbors: Vec<VertexId> = self.real[v].ones().chain(self.fuzzy[v].ones()).collect();
        for u in neighbors {
            self.real[u].set(v, false);
            self.fuzzy[u].set(v, false);
        }
        self.real[v].clear();
        self.fuzzy[v].clear();
        let cap = self.capacity;
        for u in 0..cap {
            self.weights[u * cap + v] = 0;
            self.weights[v * cap + u] = 0;
        }
        self.alive.set(v, false);
        self.live -= 1;
        Ok(())
    }

    /// A dense copy of the live part together with the old id of every new id.
    pub fn compact(&self) -> (FuzzyGraph, Vec<VertexId>) {
        let old: Vec<VertexId> = self.vertices().collect();
        let n = old.len();
        let mut g = FuzzyGraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (old[i], old[j]);
                g.set_pair(i, j, self.kind(a, b), self.weight(a, b))
                    .expect("source graph satisfies the pair invariants");
            }
        }
        (g, old)
    }

    pub fn real_row(&self, v: VertexId) -> &FixedBitSet {
        &self.real[v]
    }

    pub fn fuzzy_row(&self, v: VertexId) -> &FixedBitSet {
        &self.fuzzy[v]
    }

    /// Live nonneighbors of `v` as a bitset.
    pub fn non_row(&self, v: VertexId) -> FixedBitSet {
        let mut row = self.alive.clone();
        row.difference_with(&self.real[v]);
        row.difference_with(&self.fuzzy[v]);
        row.set(v, false);
        row
    }

    /// Neighbors of `v` of the given kind, as a bitset.
    pub fn row(&self, v: VertexId, kind: EdgeKind) -> FixedBitSet {
        match kind {
            EdgeKind::Real => self.real[v].clone(),
            EdgeKind::Fuzzy => self.fuzzy[v].clone(),
            EdgeKind::Non => self.non_row(v),
        }
    }

    pub fn real_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.real[v].ones()
    }

    pub fn fuzzy_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.fuzzy[v].ones()
    }

    pub fn non_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices()
            .filter(move |&u| u != v && !self.real[v].contains(u) && !self.fuzzy[v].contains(u))
    }

    pub fn real_degree(&self, v: VertexId) -> usize {
        self.real[v].count_ones(..)
    }

    pub fn fuzzy_degree(&self, v: VertexId) -> usize {
        self.fuzzy[v].count_ones(..)
    }

    pub fn non_degree(&self, v: VertexId) -> usize {
        self.live - 1 - self.real_degree(v) - self.fuzzy_degree(v)
    }

    /// `|{w ∉ {u,v} : kind(u,w) = kind_u ∧ kind(v,w) = kind_v}|`.
    pub fn common_neighbors(&self, u: VertexId, v: VertexId, kind_u: EdgeKind, kind_v: EdgeKind) -> usize {
        // Rows never contain their own vertex, so u and v drop out of the intersection.
        let count = |a: &FixedBitSet, b: &FixedBitSet| a.intersection_count(b);
        match (kind_u, kind_v) {
            (EdgeKind::Non, EdgeKind::Non) => count(&self.non_row(u), &self.non_row(v)),
            (EdgeKind::Non, kv) => count(&self.non_row(u), self.stored_row(v, kv)),
            (ku, EdgeKind::Non) => count(self.stored_row(u, ku), &self.non_row(v)),
            (ku, kv) => count(self.stored_row(u, ku), self.stored_row(v, kv)),
        }
    }

    fn stored_row(&self, v: VertexId, kind: EdgeKind) -> &FixedBitSet {
        match kind {
            EdgeKind::Real => &self.real[v],
            EdgeKind::Fuzzy => &self.fuzzy[v],
            EdgeKind::Non => unreachable!("nonedge rows are not stored"),
        }
    }

    /// Number of common real neighbors, the quantity most rules test.
    #[inline]
    pub fn common_real(&self, u: VertexId, v: VertexId) -> usize {
        self.real[u].intersection_count(&self.real[v])
    }

    /// Number of real neighbors of `u` that are nonneighbors of `v`.
    pub fn real_non(&self, u: VertexId, v: VertexId) -> usize {
        // N⁺(u) ∩ N⁻(v) = N⁺(u) \ (N⁺(v) ∪ N⁰(v) ∪ {v})
        let mut c = self.real_degree(u)
            - self.real[u].intersection_count(&self.real[v])
            - self.real[u].intersection_count(&self.fuzzy[v]);
        if self.real[u].contains(v) {
            c -= 1;
        }
        c
    }

    /// Connected components of the real-edge graph, each sorted, ordered by smallest member.
    pub fn real_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = FixedBitSet::with_capacity(self.capacity);
        let mut components = Vec::new();
        for s in self.vertices() {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let x = comp[head];
                head += 1;
                for y in self.real[x].ones() {
                    if !seen.contains(y) {
                        seen.insert(y);
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn fuzzy_degeneracy_ordering(&self) -> DegeneracyOrdering {
        structure::degeneracy_ordering(&self.alive, &self.fuzzy)
    }

    pub fn fuzzy_closure(&self) -> ClosureReport {
        structure::closure(&self.alive, &self.fuzzy)
    }

    /// Classes of vertices with identical closed real neighborhoods, ordered by smallest member.
    pub fn critical_cliques(&self) -> Vec<Vec<VertexId>> {
        let mut classes: Vec<Vec<VertexId>> = Vec::new();
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        for v in self.vertices() {
            let mut closed = self.real[v].clone();
            closed.insert(v);
            match index.get(&closed) {
                Some(&i) => classes[i].push(v),
                None => {
                    index.insert(closed, classes.len());
                    classes.push(vec![v]);
                }
            }
        }
        classes
    }

    /// True when every pair inside `set` is real.
    pub fn is_real_clique(&self, set: &[VertexId]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.real[u].contains(v)))
    }

    /// True when every pair inside `set` is fuzzy.
    pub fn is_fuzzy_clique(&self, set: &[VertexId]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.fuzzy[u].contains(v)))
    }

    /// The graph of real edges on the same id space.
    pub fn real_graph(&self) -> SimpleGraph {
        SimpleGraph::from_rows(self.alive.clone(), self.real.clone())
    }

    /// The graph of fuzzy edges on the same id space.
    pub fn fuzzy_graph(&self) -> SimpleGraph {
        SimpleGraph::from_rows(self.alive.clone(), self.fuzzy.clone())
    }

    /// Per-kind pair counts and total weights over live pairs.
    pub fn pair_summary(&self) -> PairSummary {
        let mut s = PairSummary::default();
        let vs: Vec<VertexId> = self.vertices().collect();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                let w = u64::from(self.weight(u, v));
                match self.kind(u, v) {
                    EdgeKind::Real => {
                        s.real += 1;
                        s.real_weight += w;
                    }
                    EdgeKind::Non => {
                        s.non += 1;
                        s.non_weight += w;
                    }
                    EdgeKind::Fuzzy => s.fuzzy += 1,
                }
            }
        }
        s
    }

    /// Number of live fuzzy pairs.
    pub fn fuzzy_pair_count(&self) -> usize {
        self.vertices().map(|v| self.fuzzy_degree(v)).sum::<usize>() / 2
    }

    /// Full rescan of the pair invariants and the adjacency rows.
    pub fn check_invariants(&self) -> Result<()> {
        if self.alive.count_ones(..) != self.live {
            return Err(Error::Internal("live count out of sync".into()));
        }
        for u in 0..self.capacity {
            let live_u = self.alive.contains(u);
            if self.real[u].contains(u) || self.fuzzy[u].contains(u) {
                return Err(Error::Internal(format!("self loop at {u}")));
            }
            if self.real[u].intersection_count(&self.fuzzy[u]) > 0 {
                return Err(Error::Internal(format!("vertex {u} has a pair that is both real and fuzzy")));
            }
            for v in 0..self.capacity {
                if u == v {
                    continue;
                }
                let live_pair = live_u && self.alive.contains(v);
                let (r, f) = (self.real[u].contains(v), self.fuzzy[u].contains(v));
                if r != self.real[v].contains(u) || f != self.fuzzy[v].contains(u) {
                    return Err(Error::Internal(format!("asymmetric rows at ({u}, {v})")));
                }
                if self.weight(u, v) != self.weight(v, u) {
                    return Err(Error::Internal(format!("asymmetric weight at ({u}, {v})")));
                }
                if !live_pair {
                    if r || f || self.weight(u, v) != 0 {
                        return Err(Error::Internal(format!("dead pair ({u}, {v}) still classified")));
                    }
                    continue;
                }
                if let Err(e) = self.kind(u, v).check_weight(self.weight(u, v)) {
                    return Err(Error::Internal(format!("pair ({u}, {v}): {e}")));
                }
            }
        }
        Ok(())
    }
}

/// Counts and weight totals of the three pair kinds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairSummary {
    pub real: usize,
    pub fuzzy: usize,
    pub non: usize,
    pub real_weight: u64,
    pub non_weight: u64,
}
