//! Shared fixtures for the benchmark suite.

use annealab::{generate_instance, PartitionInstance, WeightDistribution};

pub fn int_instance(n: usize) -> PartitionInstance {
    generate_instance(WeightDistribution::UniformInt, n, 1000 + n as u64).unwrap()
}
