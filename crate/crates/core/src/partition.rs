//! Classical ground truth for number partitioning: exact cost evaluation on
//! spin assignments, O(N) verification of zero-cost membership, brute-force
//! enumeration of the optimum, and computational-basis sampling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::QuantumState;
use crate::error::{Error, Result};
use crate::hamiltonian::PartitionInstance;

/// Hard cap on brute-force enumeration.
pub const BRUTE_FORCE_MAX_QUBITS: usize = 24;

/// A classical spin configuration y_1..y_N ∈ {+1, −1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinAssignment {
    pub values: Vec<i8>,
}

impl SpinAssignment {
    pub fn new(values: Vec<i8>) -> Self {
        debug_assert!(values.iter().all(|&v| v == 1 || v == -1));
        Self { values }
    }

    /// Basis index under the crate convention: bit 0 ↦ y = +1, qubit i owns
    /// bit N−1−i.
    pub fn basis_index(&self) -> usize {
        let n = self.values.len();
        self.values
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &y)| {
                if y == -1 {
                    acc | (1 << (n - 1 - i))
                } else {
                    acc
                }
            })
    }

    pub fn from_basis_index(n: usize, index: usize) -> Self {
        let values = (0..n)
            .map(|i| if (index >> (n - 1 - i)) & 1 == 0 { 1 } else { -1 })
            .collect();
        Self { values }
    }

    pub fn flipped(&self) -> Self {
        Self {
            values: self.values.iter().map(|&v| -v).collect(),
        }
    }
}

/// (Σ nᵢ yᵢ)². Integer-valued instances are evaluated in exact integer
/// arithmetic; weights are bounded well inside i64 range for N ≤ 24.
pub fn evaluate_ising(assignment: &SpinAssignment, instance: &PartitionInstance) -> Result<f64> {
    if assignment.values.len() != instance.num_qubits() {
        return Err(Error::LengthMismatch {
            got: assignment.values.len(),
            expected: instance.num_qubits(),
        });
    }
    if instance.is_integer() {
        let sum: i64 = instance
            .weights()
            .iter()
            .zip(&assignment.values)
            .map(|(&w, &y)| w as i64 * y as i64)
            .sum();
        Ok((sum * sum) as f64)
    } else {
        let sum: f64 = instance
            .weights()
            .iter()
            .zip(&assignment.values)
            .map(|(&w, &y)| w * y as f64)
            .sum();
        Ok(sum * sum)
    }
}

/// Zero test tolerance: exact for integer weights, relative for reals.
pub fn zero_tolerance(instance: &PartitionInstance) -> f64 {
    if instance.is_integer() {
        0.0
    } else {
        let s = instance.weight_sum();
        1e-9 * s * s
    }
}

/// Number of classical operations verify_zero_ground charges: N multiply-adds
/// plus one square. The ledger's T_g datum.
pub fn verification_op_count(n: usize) -> usize {
    n + 1
}

/// True iff the assignment is a perfect partition.
pub fn verify_zero_ground(
    assignment: &SpinAssignment,
    instance: &PartitionInstance,
) -> Result<bool> {
    let value = evaluate_ising(assignment, instance)?;
    Ok(value <= zero_tolerance(instance))
}

/// Exact optimum of the partitioning cost.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionSolution {
    pub min_value: f64,
    pub optimal_assignments: Vec<SpinAssignment>,
    pub is_perfect: bool,
}

impl PartitionSolution {
    /// Basis indices of the optimal assignments, sorted.
    pub fn basis_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .optimal_assignments
            .iter()
            .map(|a| a.basis_index())
            .collect();
        v.sort_unstable();
        v
    }
}

/// Enumerate all 2^N assignments (mirror symmetry halves the work) and return
/// the exact optimum with every optimal assignment.
pub fn brute_force(instance: &PartitionInstance) -> Result<PartitionSolution> {
    let n = instance.num_qubits();
    if n > BRUTE_FORCE_MAX_QUBITS {
        return Err(Error::EnumerationCap {
            n,
            max: BRUTE_FORCE_MAX_QUBITS,
        });
    }
    let half = 1usize << (n - 1);
    let mut best = f64::INFINITY;
    let mut optimal: Vec<usize> = Vec::new();
    // y_1 fixed to +1 (leading bit 0); mirrors are added afterwards
    for z in 0..half {
        let a = SpinAssignment::from_basis_index(n, z);
        let v = evaluate_ising(&a, instance)?;
        if v < best {
            best = v;
            optimal.clear();
            optimal.push(z);
        } else if v == best {
            optimal.push(z);
        }
    }
    let mask = (1usize << n) - 1;
    let mut assignments: Vec<SpinAssignment> = Vec::with_capacity(optimal.len() * 2);
    for &z in &optimal {
        assignments.push(SpinAssignment::from_basis_index(n, z));
        assignments.push(SpinAssignment::from_basis_index(n, z ^ mask));
    }
    assignments.sort_by_key(|a| a.basis_index());
    Ok(PartitionSolution {
        min_value: best,
        is_perfect: best <= zero_tolerance(instance),
        optimal_assignments: assignments,
    })
}

/// Born-rule sample of a computational-basis outcome, mapped to spins.
pub fn measure_basis(state: &QuantumState, seed: u64) -> SpinAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r: f64 = rng.gen();
    let mut acc = 0.0;
    let mut index = state.dim() - 1;
    for (i, a) in state.amplitudes().iter().enumerate() {
        acc += a.norm_sqr();
        if r < acc {
            index = i;
            break;
        }
    }
    SpinAssignment::from_basis_index(state.num_qubits(), index)
}

/// Convenience: exact sampling distribution check helper used by tests.
pub fn basis_probabilities(state: &QuantumState) -> Vec<f64> {
    state.amplitudes().iter().map(Complex64::norm_sqr).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{generate_instance, initial_state, WeightDistribution};

    fn inst(w: &[f64]) -> PartitionInstance {
        PartitionInstance::new(w.to_vec()).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let i = inst(&[3.0, 1.0, 1.0, 1.0]);
        let y = SpinAssignment::new(vec![1, -1, -1, -1]);
        assert_eq!(evaluate_ising(&y, &i).unwrap(), 0.0);

        let i = inst(&[1.0, 1.0]);
        let y = SpinAssignment::new(vec![1, 1]);
        assert_eq!(evaluate_ising(&y, &i).unwrap(), 4.0);

        let i = inst(&[1.0, 1.0, 3.0]);
        let min = (0..8)
            .map(|z| evaluate_ising(&SpinAssignment::from_basis_index(3, z), &i).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min, 1.0);
    }

    #[test]
    fn verify_zero_ground_examples() {
        let i = inst(&[3.0, 1.0, 1.0, 1.0]);
        assert!(verify_zero_ground(&SpinAssignment::new(vec![1, -1, -1, -1]), &i).unwrap());
        let i3 = inst(&[1.0, 1.0, 3.0]);
        for z in 0..8 {
            assert!(!verify_zero_ground(&SpinAssignment::from_basis_index(3, z), &i3).unwrap());
        }
        let i2 = inst(&[1.0, 1.0]);
        assert!(verify_zero_ground(&SpinAssignment::new(vec![1, -1]), &i2).unwrap());
        assert!(verify_zero_ground(
            &SpinAssignment::new(vec![1, -1, 1]),
            &i2
        )
        .is_err());
    }

    #[test]
    fn brute_force_examples() {
        let sol = brute_force(&inst(&[1.0, 1.0])).unwrap();
        assert_eq!(sol.min_value, 0.0);
        assert!(sol.is_perfect);
        assert_eq!(sol.basis_indices(), vec![1, 2]);

        let sol = brute_force(&inst(&[3.0, 1.0, 1.0, 1.0])).unwrap();
        assert_eq!(sol.min_value, 0.0);
        assert_eq!(sol.optimal_assignments.len(), 2);

        let sol = brute_force(&inst(&[1.0, 2.0, 4.0])).unwrap();
        assert_eq!(sol.min_value, 1.0);
    }

    #[test]
    fn optimal_set_closed_under_flip() {
        for seed in 0..20 {
            let i = generate_instance(WeightDistribution::UniformInt, 6, seed).unwrap();
            let sol = brute_force(&i).unwrap();
            for a in &sol.optimal_assignments {
                assert!(sol.optimal_assignments.contains(&a.flipped()));
                assert_eq!(evaluate_ising(a, &i).unwrap(), sol.min_value);
                assert_eq!(
                    evaluate_ising(&a.flipped(), &i).unwrap(),
                    evaluate_ising(a, &i).unwrap()
                );
            }
        }
    }

    #[test]
    fn measure_deterministic_on_basis_state() {
        let s = QuantumState::basis(2, 1).unwrap(); // |01⟩
        for seed in 0..16 {
            assert_eq!(measure_basis(&s, seed).values, vec![1, -1]);
        }
    }

    #[test]
    fn measure_uniform_distribution() {
        let s = initial_state(2).unwrap();
        let mut counts = [0usize; 4];
        let shots = 10_000;
        for seed in 0..shots {
            counts[measure_basis(&s, seed as u64).basis_index()] += 1;
        }
        // 5σ multinomial bound around 2500: σ = √(n p (1−p)) ≈ 43.3
        for &c in &counts {
            assert!((c as f64 - 2500.0).abs() < 5.0 * 43.4, "count {c}");
        }
    }

    #[test]
    fn basis_index_round_trip() {
        for z in 0..32 {
            assert_eq!(SpinAssignment::from_basis_index(5, z).basis_index(), z);
        }
    }
}
