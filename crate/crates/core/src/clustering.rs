//! Partitions of the vertex set and the correlation clustering cost.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, FuzzyGraph, VertexId};

/// A partition of a vertex set into nonempty clusters.
///
/// Clusters are kept canonical: each cluster is sorted and clusters are
/// ordered by their smallest vertex.
#[derive(Clone, Debug)]
pub struct Clustering {
    clusters: Vec<Vec<VertexId>>,
    cluster_of: HashMap<VertexId, usize>,
}

impl PartialEq for Clustering {
    fn eq(&self, other: &Self) -> bool {
        self.clusters == other.clusters
    }
}

impl Eq for Clustering {}

impl std::hash::Hash for Clustering {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.clusters.hash(state);
    }
}

impl Clustering {
    /// Builds a clustering from explicit clusters. Empty clusters are dropped;
    /// a vertex appearing twice is an error.
    pub fn from_clusters(clusters: Vec<Vec<VertexId>>) -> Result<Self> {
        let mut clusters: Vec<Vec<VertexId>> = clusters
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        clusters.sort_unstable_by_key(|c| c[0]);
        let mut cluster_of = HashMap::new();
        for (i, c) in clusters.iter().enumerate() {
            for &v in c {
                if cluster_of.insert(v, i).is_some() {
                    return Err(Error::usage(format!("vertex {v} appears in two clusters")));
                }
            }
        }
        Ok(Clustering {
            clusters,
            cluster_of,
        })
    }

    /// Builds a clustering from `(vertex, label)` pairs; equal labels share a cluster.
    pub fn from_labels(labels: impl IntoIterator<Item = (VertexId, usize)>) -> Result<Self> {
        let mut groups: HashMap<usize, Vec<VertexId>> = HashMap::new();
        for (v, l) in labels {
            groups.entry(l).or_default().push(v);
        }
        Clustering::from_clusters(groups.into_values().collect())
    }

    /// Every vertex in its own cluster.
    pub fn singletons(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        Clustering::from_clusters(vertices.into_iter().map(|v| vec![v]).collect())
            .expect("distinct vertices")
    }

    pub fn clusters(&self) -> &[Vec<VertexId>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Index of the cluster containing `v`.
    pub fn cluster_of(&self, v: VertexId) -> Option<usize> {
        self.cluster_of.get(&v).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.cluster_of.len()
    }

    fn check_partitions(&self, g: &FuzzyGraph) -> Result<()> {
        if self.vertex_count() != g.vertex_count() || g.vertices().any(|v| self.cluster_of(v).is_none()) {
            return Err(Error::usage(
                "clustering does not partition the live vertices of the graph",
            ));
        }
        Ok(())
    }

    /// True when `self` refines `coarser` (every cluster lies inside one of its clusters).
    pub fn refines(&self, coarser: &Clustering) -> bool {
        self.clusters.iter().all(|c| {
            let target = coarser.cluster_of(c[0]);
            target.is_some() && c.iter().all(|&v| coarser.cluster_of(v) == target)
        })
    }
}

/// Total weight of real pairs split across clusters plus nonedges inside clusters.
pub fn cost(g: &FuzzyGraph, cl: &Clustering) -> Result<i64> {
    cl.check_partitions(g)?;
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut total = 0i64;
    for (i, &u) in vs.iter().enumerate() {
        let cu = cl.cluster_of[&u];
        for &v in &vs[i + 1..] {
            let same = cu == cl.cluster_of[&v];
            match g.kind(u, v) {
                EdgeKind::Real if !same => total += i64::from(g.weight(u, v)),
                EdgeKind::Non if same => total += i64::from(g.weight(u, v)),
                _ => {}
            }
        }
    }
    Ok(total)
}

/// `cost(g, cl) <= k`. Negative budgets are never met.
pub fn is_solution(g: &FuzzyGraph, cl: &Clustering, k: i64) -> Result<bool> {
    Ok(cost(g, cl)? <= k)
}

/// Splits every cluster into the connected components of its real-edge subgraph.
/// The result refines the input and never costs more.
pub fn split_disconnected(g: &FuzzyGraph, cl: &Clustering) -> Clustering {
    let mut out = Vec::new();
    for c in cl.clusters() {
        let mut remaining: Vec<VertexId> = c.clone();
        while let Some(start) = remaining.pop() {
            let mut part = vec![start];
            let mut head = 0;
            while head < part.len() {
                let x = part[head];
                head += 1;
                let mut i = 0;
                while i < remaining.len() {
                    let y = remaining[i];
                    if g.is_live(x) && g.is_live(y) && g.kind(x, y) == EdgeKind::Real {
                        part.push(y);
                        remaining.swap_remove(i);
                    } else {
                        i += 1;
                    }
                }
            }
            out.push(part);
        }
    }
    Clustering::from_clusters(out).expect("refinement of a partition is a partition")
}
