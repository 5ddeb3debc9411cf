//! Instance families shared by the benchmarks.

use fuzzycc_core::{generate, GenSpec, Generated, Planted};

/// `clusters` planted clusters of `size` vertices with a bounded fuzzy
/// overlay and `budget` flips.
pub fn planted(clusters: usize, size: usize, d_max: usize, budget: usize, seed: u64) -> Generated {
    let n = clusters * size;
    let spec = GenSpec {
        d_max: Some(d_max),
        planted: Some(Planted {
            cluster_sizes: vec![size; clusters],
            budget,
        }),
        ..GenSpec::new(n, 0.0, 0.0, 1, seed)
    };
    generate(&spec).expect("valid planted spec")
}

/// A dense random instance with weights up to 3.
pub fn random(n: usize, seed: u64) -> Generated {
    generate(&GenSpec::new(n, 0.4, 0.2, 3, seed)).expect("valid random spec")
}
