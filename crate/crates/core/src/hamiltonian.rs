//! The three Hamiltonians of the model: transverse field −Σσ̂ˣᵢ, the
//! number-partitioning cost (Σnᵢσ̂ᶻᵢ)², and their linear interpolation,
//! plus the uniform-superposition initial state and instance generators.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{check_size, HermitianOperator, QuantumState};
use crate::error::{Error, Result};

/// Positive weights n_1..n_N of a number-partitioning instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionInstance {
    weights: Vec<f64>,
}

impl PartitionInstance {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidInstance(format!(
                "need at least 2 weights, got {}",
                weights.len()
            )));
        }
        check_size(weights.len())?;
        for (i, &w) in weights.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "weight {} at position {} is not strictly positive",
                    w,
                    i + 1
                )));
            }
        }
        Ok(Self { weights })
    }

    pub fn num_qubits(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// True when every weight is an exactly representable nonnegative integer,
    /// enabling exact zero tests.
    pub fn is_integer(&self) -> bool {
        self.weights.iter().all(|&w| w.fract() == 0.0 && w <= 2f64.powi(52))
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Parse `{"weights": [n_1, ..., n_N]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            weights: Vec<f64>,
        }
        let f: File = serde_json::from_str(text)?;
        Self::new(f.weights)
    }

    /// Parse a plain text file, one weight per line; blank lines are skipped.
    pub fn from_plain_text(text: &str) -> Result<Self> {
        let mut weights = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let w: f64 = trimmed.parse().map_err(|_| Error::InstanceParse {
                line: lineno + 1,
                msg: format!("cannot parse {trimmed:?} as a number"),
            })?;
            if !(w > 0.0) {
                return Err(Error::InstanceParse {
                    line: lineno + 1,
                    msg: format!("weight {w} is not strictly positive"),
                });
            }
            weights.push(w);
        }
        Self::new(weights)
    }

    /// Parse either format, keyed on a leading '{'.
    pub fn from_text(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_plain_text(text)
        }
    }
}

/// Seeded instance ensembles used in experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightDistribution {
    /// Uniform integers in [1, 2^N] — the hard regime for number partitioning.
    UniformInt,
    /// Uniform reals in (0, 1].
    UniformReal,
}

/// Draw one instance of `n` weights from the distribution.
pub fn generate_instance(
    dist: WeightDistribution,
    n: usize,
    seed: u64,
) -> Result<PartitionInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = match dist {
        WeightDistribution::UniformInt => {
            let hi = (1u64 << n) as f64;
            (0..n)
                .map(|_| rng.gen_range(1..=(hi as u64)) as f64)
                .collect()
        }
        WeightDistribution::UniformReal => (0..n)
            .map(|_| {
                // (0,1]: flip the half-open unit interval
                1.0 - rng.gen::<f64>()
            })
            .collect(),
    };
    PartitionInstance::new(weights)
}

/// Linear ramp s(t) = t / total_time over `num_steps` integrator steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSpec {
    pub total_time: f64,
    pub num_steps: usize,
}

impl ScheduleSpec {
    pub fn new(total_time: f64, num_steps: usize) -> Result<Self> {
        if total_time < 0.0 || !total_time.is_finite() {
            return Err(Error::InvalidInstance(format!(
                "total_time {total_time} must be nonnegative and finite"
            )));
        }
        if total_time > 0.0 && num_steps == 0 {
            return Err(Error::InvalidInstance(
                "num_steps must be positive for a nonzero evolution time".into(),
            ));
        }
        Ok(Self {
            total_time,
            num_steps,
        })
    }

    /// Degenerate zero-time schedule: a sudden quench that projects the
    /// initial state directly onto the final measurement basis.
    pub fn sudden() -> Self {
        Self {
            total_time: 0.0,
            num_steps: 0,
        }
    }

    pub fn s_of(&self, t: f64) -> f64 {
        if self.total_time == 0.0 {
            1.0
        } else {
            (t / self.total_time).clamp(0.0, 1.0)
        }
    }
}

/// H_trans = −Σᵢ σ̂ˣᵢ. Ground energy −N; ground state is the uniform superposition.
pub fn build_transverse(n: usize) -> Result<HermitianOperator> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!(
            "transverse Hamiltonian needs N ≥ 2, got {n}"
        )));
    }
    check_size(n)?;
    let dim = 1usize << n;
    let mut triplets = Vec::with_capacity(n * dim);
    for col in 0..dim {
        for i in 0..n {
            let row = col ^ (1 << (n - 1 - i));
            triplets.push((row, col, Complex64::new(-1.0, 0.0)));
        }
    }
    HermitianOperator::from_entries(dim, triplets)
}

/// Diagonal value (Σ nᵢ yᵢ(z))² at basis index z, with yᵢ = +1 for bit 0.
pub fn ising_diagonal_value(instance: &PartitionInstance, z: usize) -> f64 {
    let n = instance.num_qubits();
    let mut sum = 0.0;
    for (i, &w) in instance.weights().iter().enumerate() {
        let bit = (z >> (n - 1 - i)) & 1;
        sum += if bit == 0 { w } else { -w };
    }
    sum * sum
}

/// H_Ising = (Σᵢ nᵢ σ̂ᶻᵢ)², diagonal in the computational basis.
pub fn build_ising(instance: &PartitionInstance) -> Result<HermitianOperator> {
    let dim = 1usize << instance.num_qubits();
    let diag: Vec<f64> = (0..dim).map(|z| ising_diagonal_value(instance, z)).collect();
    HermitianOperator::diagonal(diag)
}

/// H(s) = (1−s)·H_trans + s·H_Ising.
pub fn interpolate(
    h_trans: &HermitianOperator,
    h_ising: &HermitianOperator,
    s: f64,
) -> Result<HermitianOperator> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::ScheduleOutOfRange(s));
    }
    h_trans.affine_combine(h_ising, s)
}

/// The uniform superposition: every amplitude 2^{−N/2}. Ground state of H_trans.
pub fn initial_state(n: usize) -> Result<QuantumState> {
    if n < 1 {
        return Err(Error::SizeOverflow { n, max: 0 });
    }
    check_size(n)?;
    let dim = 1usize << n;
    let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
    QuantumState::normalized(n, vec![amp; dim])
}

/// Conservative bound on ‖H(s)‖ for step control: N + (Σnᵢ)².
pub fn hamiltonian_norm_bound(instance: &PartitionInstance) -> f64 {
    let s = instance.weight_sum();
    instance.num_qubits() as f64 + s * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expectation;
    use approx::assert_abs_diff_eq;

    fn dense_eigenvalues(op: &HermitianOperator) -> Vec<f64> {
        crate::spectrum::dense_eigenvalues_for_tests(op)
    }

    #[test]
    fn transverse_n2_spectrum() {
        let h = build_transverse(2).unwrap();
        let evals = dense_eigenvalues(&h);
        let want = [-2.0, 0.0, 0.0, 2.0];
        for (a, b) in evals.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn transverse_ground_energy_matches_size() {
        for n in 2..=5 {
            let h = build_transverse(n).unwrap();
            let evals = dense_eigenvalues(&h);
            assert_abs_diff_eq!(evals[0], -(n as f64), epsilon = 1e-9);
        }
    }

    #[test]
    fn uniform_state_is_transverse_ground_state() {
        for n in 2..=6 {
            let h = build_transverse(n).unwrap();
            let psi = initial_state(n).unwrap();
            let applied = h.apply(&psi).unwrap();
            for (out, a) in applied.iter().zip(psi.amplitudes()) {
                assert_abs_diff_eq!(out.re, -(n as f64) * a.re, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(expectation(&psi, &h).unwrap(), -(n as f64), epsilon = 1e-12);
        }
    }

    #[test]
    fn ising_pair_diagonal() {
        let inst = PartitionInstance::new(vec![1.0, 1.0]).unwrap();
        let h = build_ising(&inst).unwrap();
        let diag: Vec<f64> = (0..4).map(|z| ising_diagonal_value(&inst, z)).collect();
        assert_eq!(diag, vec![4.0, 0.0, 0.0, 4.0]);
        // the sparse operator stores exactly the nonzero diagonal
        assert!(h
            .entries()
            .iter()
            .all(|&(r, c, v)| r == c && v.im == 0.0 && v.re >= 0.0));
    }

    #[test]
    fn ising_perfect_split_entry() {
        let inst = PartitionInstance::new(vec![3.0, 1.0, 1.0, 1.0]).unwrap();
        // basis 0111: y = (+1, −1, −1, −1) → 3−1−1−1 = 0
        assert_eq!(ising_diagonal_value(&inst, 0b0111), 0.0);
    }

    #[test]
    fn ising_min_entry_by_enumeration() {
        let inst = PartitionInstance::new(vec![1.0, 1.0, 3.0]).unwrap();
        let min = (0..8)
            .map(|z| ising_diagonal_value(&inst, z))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min, 1.0);
    }

    #[test]
    fn interpolation_endpoints_exact() {
        let inst = PartitionInstance::new(vec![1.0, 1.0]).unwrap();
        let ht = build_transverse(2).unwrap();
        let hi = build_ising(&inst).unwrap();
        assert_eq!(interpolate(&ht, &hi, 0.0).unwrap(), ht);
        assert_eq!(interpolate(&ht, &hi, 1.0).unwrap(), hi);
        assert!(interpolate(&ht, &hi, 1.5).is_err());
    }

    #[test]
    fn interpolation_midpoint_entries() {
        let inst = PartitionInstance::new(vec![1.0, 1.0]).unwrap();
        let ht = build_transverse(2).unwrap();
        let hi = build_ising(&inst).unwrap();
        let h = interpolate(&ht, &hi, 0.5).unwrap();
        let get = |r: usize, c: usize| {
            h.entries()
                .iter()
                .find(|&&(rr, cc, _)| rr == r && cc == c)
                .map(|&(_, _, v)| v.re)
                .unwrap_or(0.0)
        };
        assert_abs_diff_eq!(get(0, 0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(get(0, 1), -0.5, epsilon = 1e-15);
    }

    #[test]
    fn interpolation_is_affine() {
        let inst = PartitionInstance::new(vec![2.0, 1.0, 1.0]).unwrap();
        let ht = build_transverse(3).unwrap();
        let hi = build_ising(&inst).unwrap();
        let (s1, s2) = (0.2, 0.8);
        let ha = interpolate(&ht, &hi, s1).unwrap();
        let hb = interpolate(&ht, &hi, s2).unwrap();
        let hm = interpolate(&ht, &hi, (s1 + s2) / 2.0).unwrap();
        let avg = ha.affine_combine(&hb, 0.5).unwrap();
        for (&(r1, c1, v1), &(r2, c2, v2)) in hm.entries().iter().zip(avg.entries()) {
            assert_eq!((r1, c1), (r2, c2));
            assert_abs_diff_eq!(v1.re, v2.re, epsilon = 1e-14);
        }
    }

    #[test]
    fn initial_state_values() {
        let s1 = initial_state(1).unwrap();
        assert_abs_diff_eq!(s1.amplitudes()[0].re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        let s2 = initial_state(2).unwrap();
        for a in s2.amplitudes() {
            assert_abs_diff_eq!(a.re, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn instance_parsing() {
        let inst = PartitionInstance::from_json(r#"{"weights": [1, 2.5, 3]}"#).unwrap();
        assert_eq!(inst.weights(), &[1.0, 2.5, 3.0]);
        let inst = PartitionInstance::from_plain_text("1\n2\n\n3\n").unwrap();
        assert_eq!(inst.weights(), &[1.0, 2.0, 3.0]);
        let err = PartitionInstance::from_plain_text("1\n-2\n3\n").unwrap_err();
        assert!(matches!(err, Error::InstanceParse { line: 2, .. }));
        assert!(PartitionInstance::new(vec![5.0]).is_err());
        assert!(PartitionInstance::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn generators_are_seeded_and_in_range() {
        let a = generate_instance(WeightDistribution::UniformInt, 6, 42).unwrap();
        let b = generate_instance(WeightDistribution::UniformInt, 6, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.is_integer());
        assert!(a.weights().iter().all(|&w| (1.0..=64.0).contains(&w)));
        let r = generate_instance(WeightDistribution::UniformReal, 6, 7).unwrap();
        assert!(r.weights().iter().all(|&w| 0.0 < w && w <= 1.0));
    }
}
