//! Seeded instance generators.
//!
//! All randomness comes from `ChaCha8Rng` seeded with `GenSpec::seed`, so a
//! spec produces the same instance on every platform.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, FuzzyGraph, VertexId};

/// Parameters of a generated instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub n: usize,
    #[serde(default)]
    pub p_real: f64,
    #[serde(default)]
    pub p_fuzzy: f64,
    #[serde(default = "one")]
    pub w_max: u32,
    pub seed: u64,
    /// Budget written with the instance. Planted instances use their own.
    #[serde(default)]
    pub k: i64,
    /// Cap on the fuzzy degeneracy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<usize>,
    /// Cap on the fuzzy closure, enforced by turning bad pairs fuzzy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted: Option<Planted>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Planted {
    pub cluster_sizes: Vec<usize>,
    /// Number of Real/Non flips applied to the clean instance.
    pub budget: usize,
}

impl GenSpec {
    pub fn new(n: usize, p_real: f64, p_fuzzy: f64, w_max: u32, seed: u64) -> Self {
        GenSpec {
            n,
            p_real,
            p_fuzzy,
            w_max,
            seed,
            k: 0,
            d_max: None,
            c_max: None,
            planted: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if !prob(self.p_real) || !prob(self.p_fuzzy) {
            return Err(Error::usage("p_real and p_fuzzy must lie in [0, 1]"));
        }
        if self.p_real + self.p_fuzzy > 1.0 + 1e-9 {
            return Err(Error::usage("p_real + p_fuzzy exceeds 1"));
        }
        if self.w_max == 0 {
            return Err(Error::usage("w_max must be at least 1"));
        }
        if let Some(p) = &self.planted {
            if p.cluster_sizes.contains(&0) {
                return Err(Error::usage("planted cluster sizes must be positive"));
            }
            if p.cluster_sizes.iter().sum::<usize>() != self.n {
                return Err(Error::usage("planted cluster sizes must sum to n"));
            }
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn random_weight(rng: &mut ChaCha8Rng, w_max: u32) -> u32 {
    rng.gen_range(1..=w_max)
}

/// Every pair independently Real, Fuzzy or Non with the given probabilities.
pub fn random_fuzzy_graph(spec: &GenSpec) -> Result<FuzzyGraph> {
    spec.validate()?;
    let mut rng = spec.rng();
    let mut g = FuzzyGraph::new(spec.n);
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            let r: f64 = rng.gen();
            if r < spec.p_real {
                g.set_pair(u, v, EdgeKind::Real, random_weight(&mut rng, spec.w_max))?;
            } else if r >= spec.p_real + spec.p_fuzzy {
                g.set_pair(u, v, EdgeKind::Non, random_weight(&mut rng, spec.w_max))?;
            }
        }
    }
    Ok(g)
}

/// Fuzzy pairs of a graph whose fuzzy degeneracy is at most `d_max`: walking
/// a random ordering from the back, each vertex picks `min(d_max, #later)`
/// later vertices.
fn fuzzy_overlay(rng: &mut ChaCha8Rng, n: usize, d_max: usize) -> Vec<Vec<bool>> {
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(rng);
    let mut fuzzy = vec![vec![false; n]; n];
    for i in (0..n).rev() {
        let later = &order[i + 1..];
        let picks = d_max.min(later.len());
        for j in sample(rng, later.len(), picks) {
            let (u, v) = (order[i], later[j]);
            fuzzy[u][v] = true;
            fuzzy[v][u] = true;
        }
    }
    fuzzy
}

/// A graph with fuzzy degeneracy at most `spec.d_max`; the remaining pairs
/// are Real with probability `p_real` and Non otherwise.
pub fn degenerate_fuzzy_overlay(spec: &GenSpec) -> Result<FuzzyGraph> {
    spec.validate()?;
    let d_max = spec
        .d_max
        .ok_or_else(|| Error::usage("degenerate overlay needs d_max"))?;
    let mut rng = spec.rng();
    let fuzzy = fuzzy_overlay(&mut rng, spec.n, d_max);
    let mut g = FuzzyGraph::new(spec.n);
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            if fuzzy[u][v] {
                continue;
            }
            let kind = if rng.gen_bool(spec.p_real) {
                EdgeKind::Real
            } else {
                EdgeKind::Non
            };
            g.set_pair(u, v, kind, random_weight(&mut rng, spec.w_max))?;
        }
    }
    Ok(g)
}

/// A planted instance together with the clustering it was built from.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub graph: FuzzyGraph,
    pub k: i64,
    pub witness: Clustering,
}

/// Clusters of the given sizes over a random vertex assignment. Intra pairs
/// are Real(1), inter pairs Non(1), except the fuzzy ones (chosen by the
/// overlay if `d_max` is set, else with probability `p_fuzzy`). Then exactly
/// `budget` distinct non-fuzzy pairs are flipped between Real and Non.
pub fn planted_clusters(spec: &GenSpec) -> Result<PlantedInstance> {
    spec.validate()?;
    let planted = spec
        .planted
        .as_ref()
        .ok_or_else(|| Error::usage("planted generator needs cluster sizes"))?;
    let n = spec.n;
    let mut rng = spec.rng();
    let mut perm: Vec<VertexId> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut label = vec![0; n];
    let mut at = 0;
    for (c, &size) in planted.cluster_sizes.iter().enumerate() {
        for &v in &perm[at..at + size] {
            label[v] = c;
        }
        at += size;
    }

    let fuzzy = match spec.d_max {
        Some(d) => fuzzy_overlay(&mut rng, n, d),
        None => {
            let mut f = vec![vec![false; n]; n];
            for u in 0..n {
                for v in u + 1..n {
                    let coin = rng.gen_bool(spec.p_fuzzy);
                    f[u][v] = coin;
                    f[v][u] = coin;
                }
            }
            f
        }
    };
    let mut g = FuzzyGraph::new(n);
    let mut candidates = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if fuzzy[u][v] {
                continue;
            }
            let kind = if label[u] == label[v] {
                EdgeKind::Real
            } else {
                EdgeKind::Non
            };
            g.set_pair(u, v, kind, 1)?;
            candidates.push((u, v));
        }
    }
    if planted.budget > candidates.len() {
        return Err(Error::usage(format!(
            "budget {} exceeds the {} non-fuzzy pairs",
            planted.budget,
            candidates.len()
        )));
    }
    let mut flips: Vec<usize> = sample(&mut rng, candidates.len(), planted.budget).into_vec();
    flips.sort_unstable();
    for i in flips {
        let (u, v) = candidates[i];
        let flipped = match g.kind(u, v) {
            EdgeKind::Real => EdgeKind::Non,
            _ => EdgeKind::Real,
        };
        g.set_pair(u, v, flipped, 1)?;
    }
    let witness = Clustering::from_labels(label.into_iter().enumerate())?;
    Ok(PlantedInstance {
        graph: g,
        k: planted.budget as i64,
        witness,
    })
}

/// Turns witness pairs of the fuzzy closure fuzzy until the closure is at
/// most `c_max`. Returns the number of converted pairs.
pub fn repair_closure(g: &mut FuzzyGraph, c_max: usize) -> usize {
    let mut converted = 0;
    loop {
        let report = g.fuzzy_closure();
        if report.c <= c_max {
            return converted;
        }
        let (u, v) = report.witness.expect("positive closure has a witness");
        g.set_pair(u, v, EdgeKind::Fuzzy, 0).expect("live pair");
        converted += 1;
    }
}

/// Output of [`generate`].
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: FuzzyGraph,
    pub k: i64,
    pub witness: Option<Clustering>,
}

/// Dispatches on the `GenSpec`: planted if `planted` is set, the overlay if
/// `d_max` is set, plain random otherwise; then applies the closure repair.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    let mut out = if spec.planted.is_some() {
        let p = planted_clusters(spec)?;
        Generated {
            graph: p.graph,
            k: p.k,
            witness: Some(p.witness),
        }
    } else {
        let graph = if spec.d_max.is_some() {
            degenerate_fuzzy_overlay(spec)?
        } else {
            random_fuzzy_graph(spec)?
        };
        Generated {
            graph,
            k: spec.k,
            witness: None,
        }
    };
    if let Some(c) = spec.c_max {
        repair_closure(&mut out.graph, c);
    }
    Ok(out)
}
