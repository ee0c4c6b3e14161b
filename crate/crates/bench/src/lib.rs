//! Fixed inputs shared by the benchmarks.

use ccsched::gen::{self, CcParams};
use ccsched::openshop::PdInstance;
use ccsched::Instance;

/// Dense open shop matrix with integer entries in `1..=50`, as floats.
pub fn open_shop_f64(n: usize, m: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let pd = open_shop(n, m, seed);
    (pd.x_f64(), pd.weights_f64())
}

pub fn open_shop(n: usize, m: usize, seed: u64) -> PdInstance {
    gen::random_pd(n, m, 50, 9, &mut gen::rng(seed)).expect("valid parameters")
}

/// Cluster instance with exactly `n` jobs over three clusters.
pub fn cluster_instance(n: usize, seed: u64) -> Instance {
    let params = CcParams {
        jobs: n..=n,
        clusters: 3..=3,
        ..CcParams::default()
    };
    gen::random_cc(&params, None, &mut gen::rng(seed)).expect("valid parameters")
}
