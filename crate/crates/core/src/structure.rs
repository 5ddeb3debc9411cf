//! Degeneracy and closure of a graph given as bitset adjacency rows.
//!
//! Both the fuzzy-edge graph of a [`FuzzyGraph`](crate::FuzzyGraph) and plain
//! [`SimpleGraph`](crate::SimpleGraph)s are measured through these functions.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::graph::VertexId;

/// A vertex ordering in which every vertex has few neighbors later in the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyOrdering {
    /// The live vertices in peeling order.
    pub sigma: Vec<VertexId>,
    /// `ordering_degree[i]` is the number of neighbors of `sigma[i]` in `sigma[i+1..]`.
    pub ordering_degree: Vec<usize>,
    /// Maximum ordering degree; equals the degeneracy of the graph.
    pub d: usize,
    position: Vec<usize>,
}

impl DegeneracyOrdering {
    /// Position of `v` in `sigma`, or `None` for vertices not in the ordering.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        match self.position.get(v) {
            Some(&p) if p != usize::MAX => Some(p),
            _ => None,
        }
    }

    /// The vertices `sigma[i..=j]`.
    pub fn slice(&self, i: usize, j: usize) -> &[VertexId] {
        &self.sigma[i..=j]
    }

    /// Restricts the ordering to `subset`, keeping relative order.
    pub fn restrict(&self, subset: &[VertexId]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = subset
            .iter()
            .copied()
            .filter(|&v| self.position(v).is_some())
            .collect();
        out.sort_by_key(|&v| self.position[v]);
        out
    }

    /// The first vertex of `subset` according to the ordering.
    pub fn first_of(&self, subset: impl IntoIterator<Item = VertexId>) -> Option<VertexId> {
        subset
            .into_iter()
            .filter_map(|v| self.position(v).map(|p| (p, v)))
            .min()
            .map(|(_, v)| v)
    }
}

/// The closure of a graph together with a witness pair attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub c: usize,
    /// A nonadjacent pair with exactly `c - 1` common neighbors, when `c > 0`.
    pub witness: Option<(VertexId, VertexId)>,
}

/// Min-degree peeling with ties broken by smallest vertex id.
pub fn degeneracy_ordering(alive: &FixedBitSet, rows: &[FixedBitSet]) -> DegeneracyOrdering {
    let capacity = rows.len();
    let mut degree = vec![0usize; capacity];
    let mut queue = BTreeSet::new();
    for v in alive.ones() {
        degree[v] = rows[v].intersection_count(alive);
        queue.insert((degree[v], v));
    }
    let mut removed = FixedBitSet::with_capacity(capacity);
    let mut sigma = Vec::with_capacity(queue.len());
    let mut ordering_degree = Vec::with_capacity(queue.len());
    let mut position = vec![usize::MAX; capacity];
    while let Some((deg, v)) = queue.pop_first() {
        position[v] = sigma.len();
        sigma.push(v);
        ordering_degree.push(deg);
        removed.insert(v);
        for u in rows[v].ones() {
            if alive.contains(u) && !removed.contains(u) {
                queue.remove(&(degree[u], u));
                degree[u] -= 1;
                queue.insert((degree[u], u));
            }
        }
    }
    let d = ordering_degree.iter().copied().max().unwrap_or(0);
    DegeneracyOrdering {
        sigma,
        ordering_degree,
        d,
        position,
    }
}

/// `c = 0` for complete graphs (and graphs with at most one vertex); otherwise
/// one more than the largest common neighborhood of a nonadjacent pair.
pub fn closure(alive: &FixedBitSet, rows: &[FixedBitSet]) -> ClosureReport {
    let vertices: Vec<VertexId> = alive.ones().collect();
    let mut best: Option<(usize, (VertexId, VertexId))> = None;
    let mut common = FixedBitSet::with_capacity(rows.len());
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            if rows[u].contains(v) {
                continue;
            }
            common.clone_from(&rows[u]);
            common.intersect_with(&rows[v]);
            let count = common.intersection_count(alive);
            if best.is_none_or(|(b, _)| count > b) {
                best = Some((count, (u, v)));
            }
        }
    }
    match best {
        None => ClosureReport {
            c: 0,
            witness: None,
        },
        Some((count, pair)) => ClosureReport {
            c: count + 1,
            witness: Some(pair),
        },
    }
}
