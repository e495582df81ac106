//! N-qubit states, Pauli strings, and sparse Hermitian operators.
//!
//! Basis convention used everywhere in this crate: for an N-qubit system the
//! computational basis index is read most-significant bit first, so qubit `i`
//! (0-based) owns bit `N-1-i`. Bit value 0 encodes the spin value +1 and bit
//! value 1 encodes −1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest system size accepted by default (state vectors stay under ~256 MiB).
pub const DEFAULT_MAX_QUBITS: usize = 24;

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > DEFAULT_MAX_QUBITS {
        return Err(Error::SizeOverflow {
            n,
            max: DEFAULT_MAX_QUBITS,
        });
    }
    Ok(())
}

/// Single-site Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A length-N word over {I, X, Y, Z}, acting site-wise by tensor product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters }
    }

    /// Single non-identity letter at `site`, identities elsewhere.
    pub fn single(n: usize, site: usize, p: Pauli) -> Self {
        let mut letters = vec![Pauli::I; n];
        letters[site] = p;
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Stable label such as "XIZ", independent of hasher state.
    pub fn label(&self) -> String {
        self.letters.iter().map(|p| p.as_char()).collect()
    }

    /// Order-independent 64-bit fingerprint used to derive per-observable seeds.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &p in &self.letters {
            h ^= p as u64 + 1;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

/// Unit vector over the 2^N computational basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// Construct from amplitudes, enforcing unit norm within 1e-12.
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(num_qubits)?;
        if amplitudes.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch {
                op_dim: 1 << num_qubits,
                state_dim: amplitudes.len(),
            });
        }
        let norm = l2_norm(&amplitudes);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::UnnormalizedState { norm });
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Construct after renormalizing; errors only on the zero vector.
    pub fn normalized(num_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = l2_norm(&amplitudes);
        if norm == 0.0 {
            return Err(Error::UnnormalizedState { norm });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(num_qubits, amplitudes)
    }

    /// Computational basis state |index⟩.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let mut amplitudes = vec![Complex64::ZERO; 1 << num_qubits];
        amplitudes[index] = Complex64::ONE;
        Self::new(num_qubits, amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }
}

pub(crate) fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Sparse 2^N × 2^N complex Hermitian matrix in coordinate form.
///
/// Entries are sorted by (row, col), deduplicated, and closed under conjugate
/// transpose by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dimension: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl HermitianOperator {
    /// Build from raw triplets: duplicates are summed, exact zeros dropped,
    /// and conjugate-transpose closure is verified.
    pub fn from_entries(
        dimension: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, Complex64)> = triplets.into_iter().collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != Complex64::ZERO);
        let op = Self {
            dimension,
            entries: merged,
        };
        op.verify_hermitian()?;
        Ok(op)
    }

    fn verify_hermitian(&self) -> Result<()> {
        for &(r, c, v) in &self.entries {
            if r == c {
                if v.im != 0.0 {
                    return Err(Error::NotHermitian { row: r, col: c });
                }
                continue;
            }
            // sorted entries: binary search for the transpose partner
            let partner = self
                .entries
                .binary_search_by_key(&(c, r), |&(rr, cc, _)| (rr, cc))
                .ok()
                .map(|i| self.entries[i].2);
            if partner != Some(v.conj()) {
                return Err(Error::NotHermitian { row: r, col: c });
            }
        }
        Ok(())
    }

    /// Diagonal operator from real diagonal values.
    pub fn diagonal(values: Vec<f64>) -> Result<Self> {
        let dimension = values.len();
        Self::from_entries(
            dimension,
            values
                .into_iter()
                .enumerate()
                .map(|(i, v)| (i, i, Complex64::new(v, 0.0))),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Sparse matrix–vector product into a fresh buffer.
    pub fn apply_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                op_dim: self.dimension,
                state_dim: v.len(),
            });
        }
        let mut out = vec![Complex64::ZERO; self.dimension];
        for &(r, c, val) in &self.entries {
            out[r] += val * v[c];
        }
        Ok(out)
    }

    /// op · |state⟩; output need not be unit norm.
    pub fn apply(&self, state: &QuantumState) -> Result<Vec<Complex64>> {
        self.apply_vec(state.amplitudes())
    }

    /// (1-weight)·self + weight·other, entrywise.
    pub fn affine_combine(&self, other: &Self, weight: f64) -> Result<Self> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                op_dim: self.dimension,
                state_dim: other.dimension,
            });
        }
        let a = 1.0 - weight;
        let triplets = self
            .entries
            .iter()
            .map(|&(r, c, v)| (r, c, v * a))
            .chain(other.entries.iter().map(|&(r, c, v)| (r, c, v * weight)));
        Self::from_entries(self.dimension, triplets)
    }

    /// Largest row sum of absolute values; an upper bound on the operator norm.
    pub fn inf_norm(&self) -> f64 {
        let mut rows = vec![0.0f64; self.dimension];
        for &(r, _, v) in &self.entries {
            rows[r] += v.norm();
        }
        rows.into_iter().fold(0.0, f64::max)
    }
}

/// Kronecker-product lift of a Pauli word to the full 2^N space.
///
/// Every column holds exactly one nonzero: P|c⟩ = phase(c)·|c ⊕ xmask⟩.
pub fn pauli_matrix(string: &PauliString) -> Result<HermitianOperator> {
    let n = string.len();
    if n == 0 {
        return Err(Error::SizeOverflow {
            n: 0,
            max: DEFAULT_MAX_QUBITS,
        });
    }
    check_size(n)?;
    let dim = 1usize << n;
    let mut xmask = 0usize;
    for (i, &p) in string.letters.iter().enumerate() {
        if matches!(p, Pauli::X | Pauli::Y) {
            xmask |= 1 << (n - 1 - i);
        }
    }
    let mut triplets = Vec::with_capacity(dim);
    for col in 0..dim {
        let mut phase = Complex64::ONE;
        for (i, &p) in string.letters.iter().enumerate() {
            let bit = (col >> (n - 1 - i)) & 1;
            match p {
                Pauli::I | Pauli::X => {}
                Pauli::Y => {
                    // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                    phase *= if bit == 0 {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    };
                }
                Pauli::Z => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
            }
        }
        triplets.push((col ^ xmask, col, phase));
    }
    HermitianOperator::from_entries(dim, triplets)
}

/// ⟨a|b⟩, conjugate-linear in `a`.
pub fn inner_product(a: &QuantumState, b: &QuantumState) -> Result<Complex64> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::DimensionMismatch {
            op_dim: a.dim(),
            state_dim: b.dim(),
        });
    }
    Ok(inner_product_raw(a.amplitudes(), b.amplitudes()))
}

pub(crate) fn inner_product_raw(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Real part of ⟨state|op|state⟩; errors if the imaginary part exceeds 1e-10.
pub fn expectation(state: &QuantumState, op: &HermitianOperator) -> Result<f64> {
    let applied = op.apply(state)?;
    let val = inner_product_raw(state.amplitudes(), &applied);
    if val.im.abs() >= 1e-10 {
        return Err(Error::NonHermitianDrift { imag: val.im });
    }
    Ok(val.re)
}

/// Tensor product of single-qubit states (a_{i,0}|0⟩ + a_{i,1}|1⟩).
pub fn product_state(factors: &[(Complex64, Complex64)]) -> Result<QuantumState> {
    let n = factors.len();
    check_size(n)?;
    for (i, &(a0, a1)) in factors.iter().enumerate() {
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::UnnormalizedFactor { index: i, norm });
        }
    }
    let mut amps = vec![Complex64::ONE];
    for &(a0, a1) in factors {
        let mut next = Vec::with_capacity(amps.len() * 2);
        for a in &amps {
            next.push(a * a0);
            next.push(a * a1);
        }
        amps = next;
    }
    QuantumState::normalized(n, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_x_single_qubit() {
        let op = pauli_matrix(&PauliString::new(vec![Pauli::X])).unwrap();
        assert_eq!(op.entries(), &[(0, 1, Complex64::ONE), (1, 0, Complex64::ONE)]);
    }

    #[test]
    fn pauli_zi_diagonal() {
        let op = pauli_matrix(&PauliString::new(vec![Pauli::Z, Pauli::I])).unwrap();
        let diag: Vec<f64> = (0..4)
            .map(|i| {
                op.entries()
                    .iter()
                    .find(|&&(r, c2, _)| r == i && c2 == i)
                    .map(|&(_, _, v)| v.re)
                    .unwrap_or(0.0)
            })
            .collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn pauli_xx_flips_00_to_11() {
        let op = pauli_matrix(&PauliString::new(vec![Pauli::X, Pauli::X])).unwrap();
        let state = QuantumState::basis(2, 0).unwrap();
        let out = op.apply(&state).unwrap();
        assert_eq!(out[3], Complex64::ONE);
        assert_eq!(out[0], Complex64::ZERO);
    }

    #[test]
    fn apply_identity_preserves_amplitudes() {
        let op = pauli_matrix(&PauliString::new(vec![Pauli::I, Pauli::I])).unwrap();
        let state = product_state(&[
            (c(0.6, 0.0), c(0.0, 0.8)),
            (c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0)),
        ])
        .unwrap();
        let out = op.apply(&state).unwrap();
        assert_eq!(out, state.amplitudes());
    }

    #[test]
    fn minus_sigma_x_eigenvector() {
        let op = pauli_matrix(&PauliString::new(vec![Pauli::X])).unwrap();
        let neg = HermitianOperator::from_entries(
            2,
            op.entries().iter().map(|&(r, c2, v)| (r, c2, -v)),
        )
        .unwrap();
        let plus = product_state(&[(c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0))]).unwrap();
        let out = neg.apply(&plus).unwrap();
        for (o, a) in out.iter().zip(plus.amplitudes()) {
            assert_abs_diff_eq!(o.re, -a.re, epsilon = 1e-15);
        }
    }

    #[test]
    fn inner_product_basics() {
        let zero = QuantumState::basis(1, 0).unwrap();
        let one = QuantumState::basis(1, 1).unwrap();
        let plus = product_state(&[(c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0))]).unwrap();
        assert_abs_diff_eq!(inner_product(&plus, &plus).unwrap().re, 1.0, epsilon = 1e-14);
        assert_eq!(inner_product(&zero, &one).unwrap(), Complex64::ZERO);
        assert_abs_diff_eq!(
            inner_product(&plus, &zero).unwrap().re,
            1.0 / 2f64.sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn expectation_plus_state() {
        let plus = product_state(&[(c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0))]).unwrap();
        let x = pauli_matrix(&PauliString::new(vec![Pauli::X])).unwrap();
        let z = pauli_matrix(&PauliString::new(vec![Pauli::Z])).unwrap();
        assert_abs_diff_eq!(expectation(&plus, &x).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(expectation(&plus, &z).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn product_state_basis_ordering() {
        // (1,0) ⊗ (0,1) = |01⟩ → amplitude 1 at index 1
        let s = product_state(&[(c(1.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(1.0, 0.0))]).unwrap();
        assert_eq!(s.amplitudes()[1], Complex64::ONE);
        assert_eq!(s.amplitudes()[0], Complex64::ZERO);
    }

    #[test]
    fn product_state_uniform() {
        let f = (c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0));
        let s = product_state(&[f, f, f]).unwrap();
        for a in s.amplitudes() {
            assert_abs_diff_eq!(a.re, (1.0f64 / 8.0).sqrt(), epsilon = 1e-14);
        }
    }

    #[test]
    fn unnormalized_factor_rejected() {
        let bad = product_state(&[(c(1.0, 0.0), c(0.5, 0.0))]);
        assert!(matches!(bad, Err(Error::UnnormalizedFactor { .. })));
    }

    #[test]
    fn pauli_squares_to_identity() {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let op = pauli_matrix(&PauliString::new(vec![p, Pauli::I])).unwrap();
            for idx in 0..4 {
                let e = QuantumState::basis(2, idx).unwrap();
                let once = op.apply(&e).unwrap();
                let twice = op.apply_vec(&once).unwrap();
                for (k, v) in twice.iter().enumerate() {
                    let want = if k == idx { Complex64::ONE } else { Complex64::ZERO };
                    assert_eq!(*v, want, "P²|{idx}⟩ at {k} for {p:?}");
                }
            }
        }
    }

    #[test]
    fn hermiticity_verified_on_construction() {
        let bad = HermitianOperator::from_entries(2, vec![(0, 1, c(1.0, 0.0))]);
        assert!(matches!(bad, Err(Error::NotHermitian { .. })));
        let bad_diag = HermitianOperator::from_entries(2, vec![(0, 0, c(0.0, 1.0))]);
        assert!(matches!(bad_diag, Err(Error::NotHermitian { .. })));
    }
}
