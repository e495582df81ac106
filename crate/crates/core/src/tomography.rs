//! Simulated projective measurements with finite shot counts, product-state
//! reconstruction from per-qubit Bloch vectors, full linear-inversion
//! tomography over the Pauli basis, and the operation-count budgets.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::algebra::{expectation, pauli_matrix, product_state, Pauli, PauliString, QuantumState};
use crate::error::{Error, Result};

/// Shot statistics for one ±1-valued observable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub observable: PauliString,
    pub shots: u64,
    pub count_plus: u64,
    /// (2·count_plus − shots)/shots ∈ [−1, 1].
    pub estimate: f64,
}

/// Which reconstruction the operation count refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TomographyMode {
    Full,
    Product,
}

/// Measurement-setting count for a given mode and system size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomographyBudget {
    pub mode: TomographyMode,
    pub num_qubits: usize,
    pub operation_count: u64,
}

/// Distinct measurement settings: 4^N − 1 for full tomography, 3N for the
/// product form. Shots are counted separately.
pub fn budget(mode: TomographyMode, n: usize) -> TomographyBudget {
    let operation_count = match mode {
        TomographyMode::Full => 4u64.pow(n as u32) - 1,
        TomographyMode::Product => 3 * n as u64,
    };
    TomographyBudget {
        mode,
        num_qubits: n,
        operation_count,
    }
}

/// Draw binomial shot statistics for one observable.
///
/// p(+1) = (1 + ⟨P⟩)/2 is computed exactly, then `count_plus` is sampled from
/// Binomial(shots, p). The generator is seeded by `seed ⊕ fingerprint(P)`, so
/// simulations of distinct observables are order-independent.
pub fn simulate_measurement(
    state: &QuantumState,
    observable: &PauliString,
    shots: u64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if observable.is_identity() {
        return Err(Error::IdentityObservable);
    }
    let op = pauli_matrix(observable)?;
    let exp = expectation(state, &op)?;
    let p = ((1.0 + exp) / 2.0).clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ observable.fingerprint());
    let count_plus = Binomial::new(shots, p).unwrap().sample(&mut rng);
    Ok(MeasurementRecord {
        observable: observable.clone(),
        shots,
        count_plus,
        estimate: (2.0 * count_plus as f64 - shots as f64) / shots as f64,
    })
}

/// Exact (infinite-shot) Bloch vector of qubit `site`.
pub fn exact_bloch(state: &QuantumState, site: usize) -> Result<(f64, f64, f64)> {
    let n = state.num_qubits();
    let x = expectation(state, &pauli_matrix(&PauliString::single(n, site, Pauli::X))?)?;
    let y = expectation(state, &pauli_matrix(&PauliString::single(n, site, Pauli::Y))?)?;
    let z = expectation(state, &pauli_matrix(&PauliString::single(n, site, Pauli::Z))?)?;
    Ok((x, y, z))
}

/// Beyond this Bloch norm the records are treated as inconsistent rather than
/// shot noise.
const BLOCH_CLIP_LIMIT: f64 = 1.05;

/// Map one Bloch vector to single-qubit amplitudes with a₁ real ≥ 0
/// (and a₂ real ≥ 0 when a₁ = 0).
fn bloch_to_amplitudes(index: usize, bloch: (f64, f64, f64)) -> Result<(Complex64, Complex64)> {
    let (x, y, z) = bloch;
    let norm = (x * x + y * y + z * z).sqrt();
    if norm > BLOCH_CLIP_LIMIT {
        return Err(Error::BlochNormExceeded { index, norm });
    }
    if norm < 1e-12 {
        // fully ambiguous direction; pick |0⟩
        return Ok((Complex64::ONE, Complex64::ZERO));
    }
    // clip mild overshoot, renormalize undershoot: a pure state needs a unit
    // direction either way
    let (x, y, z) = (x / norm, y / norm, z / norm);
    let theta = z.clamp(-1.0, 1.0).acos();
    let a1 = (theta / 2.0).cos();
    let a2_mag = (theta / 2.0).sin();
    if a1.abs() < 1e-12 {
        return Ok((Complex64::ZERO, Complex64::ONE));
    }
    let phi = y.atan2(x);
    Ok((
        Complex64::new(a1, 0.0),
        Complex64::from_polar(a2_mag, phi),
    ))
}

/// Rebuild the product state from per-qubit (X, Y, Z) measurement records.
pub fn reconstruct_product_state(records: &[[MeasurementRecord; 3]]) -> Result<QuantumState> {
    let blochs: Vec<(f64, f64, f64)> = records
        .iter()
        .map(|r| (r[0].estimate, r[1].estimate, r[2].estimate))
        .collect();
    reconstruct_from_bloch(&blochs)
}

/// Same, from pre-computed Bloch vectors.
pub fn reconstruct_from_bloch(blochs: &[(f64, f64, f64)]) -> Result<QuantumState> {
    let factors: Vec<(Complex64, Complex64)> = blochs
        .iter()
        .enumerate()
        .map(|(i, &b)| bloch_to_amplitudes(i, b))
        .collect::<Result<_>>()?;
    product_state(&factors)
}

/// All 4^N Pauli strings in lexicographic (I < X < Y < Z) order, the identity
/// first.
pub fn all_pauli_strings(n: usize) -> Vec<PauliString> {
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let total = 4usize.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        // two bits per site, most-significant site first
        let word = (0..n)
            .rev()
            .map(|i| letters[(code >> (2 * i)) & 3])
            .collect();
        out.push(PauliString::new(word));
    }
    out
}

/// Linear-inversion density matrix ρ = 2^{−N}(I + Σ_P ⟨P⟩·P) over the
/// complete non-identity Pauli basis.
pub fn full_state_reconstruct(
    expectations: &std::collections::BTreeMap<String, f64>,
    n: usize,
) -> Result<nalgebra::DMatrix<Complex64>> {
    let dim = 1usize << n;
    let strings = all_pauli_strings(n);
    let missing: Vec<String> = strings
        .iter()
        .skip(1)
        .filter(|p| !expectations.contains_key(&p.label()))
        .map(|p| p.label())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingPaulis(missing));
    }
    let scale = 1.0 / dim as f64;
    let mut rho = nalgebra::DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(scale, 0.0);
    for p in strings.iter().skip(1) {
        let coeff = Complex64::new(expectations[&p.label()] * scale, 0.0);
        let op = pauli_matrix(p)?;
        for &(r, c, v) in op.entries() {
            rho[(r, c)] += coeff * v;
        }
    }
    Ok(rho)
}

/// Largest eigenpair of a dense Hermitian matrix.
pub fn dominant_eigenvector(rho: &nalgebra::DMatrix<Complex64>) -> (f64, Vec<Complex64>) {
    let eig = nalgebra::SymmetricEigen::new(rho.clone());
    let (best, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    (
        eig.eigenvalues[best],
        eig.eigenvectors.column(best).iter().copied().collect(),
    )
}

/// ⟨ψ|ρ|ψ⟩ for a pure reference state.
pub fn state_fidelity_to_density(
    rho: &nalgebra::DMatrix<Complex64>,
    state: &QuantumState,
) -> f64 {
    let v = nalgebra::DVector::from_column_slice(state.amplitudes());
    let rv = rho * &v;
    v.dotc(&rv).re
}

/// |⟨a|b⟩|² for pure states.
pub fn pure_fidelity(a: &QuantumState, b: &QuantumState) -> f64 {
    crate::algebra::inner_product(a, b).map(|c| c.norm_sqr()).unwrap_or(0.0)
}

/// Exact expectations of every non-identity Pauli string of `state`.
pub fn exact_expectations(state: &QuantumState) -> Result<std::collections::BTreeMap<String, f64>> {
    let n = state.num_qubits();
    let mut out = std::collections::BTreeMap::new();
    for p in all_pauli_strings(n).into_iter().skip(1) {
        let op = pauli_matrix(&p)?;
        out.insert(p.label(), expectation(state, &op)?);
    }
    Ok(out)
}

/// Sampled expectations at a fixed shot budget per setting.
pub fn sampled_expectations(
    state: &QuantumState,
    shots: u64,
    seed: u64,
) -> Result<std::collections::BTreeMap<String, f64>> {
    let n = state.num_qubits();
    let mut out = std::collections::BTreeMap::new();
    for p in all_pauli_strings(n).into_iter().skip(1) {
        let rec = simulate_measurement(state, &p, shots, seed)?;
        out.insert(p.label(), rec.estimate);
    }
    Ok(out)
}

/// Product tomography records: (X, Y, Z) per qubit at a shot budget.
pub fn product_tomography_records(
    state: &QuantumState,
    shots: u64,
    seed: u64,
) -> Result<Vec<[MeasurementRecord; 3]>> {
    let n = state.num_qubits();
    (0..n)
        .map(|i| {
            Ok([
                simulate_measurement(state, &PauliString::single(n, i, Pauli::X), shots, seed)?,
                simulate_measurement(state, &PauliString::single(n, i, Pauli::Y), shots, seed)?,
                simulate_measurement(state, &PauliString::single(n, i, Pauli::Z), shots, seed)?,
            ])
        })
        .collect()
}
