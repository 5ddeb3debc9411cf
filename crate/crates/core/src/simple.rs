//! Plain undirected graphs, used as the input side of the hardness
//! constructions and for measuring the real-edge graph of an instance.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::structure::{self, ClosureReport, DegeneracyOrdering};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    alive: FixedBitSet,
    rows: Vec<FixedBitSet>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        let mut alive = FixedBitSet::with_capacity(n);
        alive.insert_range(..);
        SimpleGraph {
            alive,
            rows: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, parallel edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::usage(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::usage(format!("self loop at {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::usage(format!("duplicate edge ({u}, {v})")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn from_rows(alive: FixedBitSet, rows: Vec<FixedBitSet>) -> Self {
        SimpleGraph { alive, rows }
    }

    /// Number of vertex ids (live or not).
    pub fn capacity(&self) -> usize {
        self.rows.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.count_ones(..)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive.ones()
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) {
        debug_assert_ne!(u, v);
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.rows[v].ones()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rows[v].count_ones(..)
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.vertices()
            .flat_map(|u| self.rows[u].ones().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    pub fn degeneracy_ordering(&self) -> DegeneracyOrdering {
        structure::degeneracy_ordering(&self.alive, &self.rows)
    }

    pub fn degeneracy(&self) -> usize {
        self.degeneracy_ordering().d
    }

    pub fn closure(&self) -> ClosureReport {
        structure::closure(&self.alive, &self.rows)
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices().next() else {
            return true;
        };
        let mut seen = FixedBitSet::with_capacity(self.capacity());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in self.rows[x].ones() {
                if !seen.contains(y) {
                    seen.insert(y);
                    stack.push(y);
                }
            }
        }
        seen.count_ones(..) == self.vertex_count()
    }

    pub fn is_tree(&self) -> bool {
        let n = self.vertex_count();
        self.is_connected() && self.edge_count() + 1 == n.max(1)
    }

    /// A tree that can be rooted so that every vertex has at most two children.
    pub fn is_binary_tree(&self) -> bool {
        self.is_tree()
            && self.vertices().all(|v| self.degree(v) <= 3)
            && (self.vertex_count() == 0 || self.vertices().any(|v| self.degree(v) <= 2))
    }

    /// A star: one center adjacent to every other vertex and no further edges.
    pub fn is_star(&self) -> bool {
        let n = self.vertex_count();
        if n <= 2 {
            return self.is_tree();
        }
        self.edge_count() == n - 1 && self.vertices().any(|v| self.degree(v) == n - 1)
    }

    /// True when no vertex has degree above one.
    pub fn is_matching(&self) -> bool {
        self.vertices().all(|v| self.degree(v) <= 1)
    }
}
