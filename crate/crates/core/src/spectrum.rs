//! Instantaneous low-lying spectra of H(s), minimum-gap extraction, the
//! global spin-flip symmetry sector, and gap-versus-size scaling fits.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::HermitianOperator;
use crate::error::{Error, Result};
use crate::fitting::linear_fit;
use crate::hamiltonian::{build_ising, build_transverse, interpolate, PartitionInstance};
use crate::davidson;

/// Which symmetry sector the spectrum refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    /// The whole 2^N space.
    Full,
    /// The +1 eigenspace of X^⊗N, which contains the uniform initial state
    /// and is preserved by H(s). Dimension 2^{N−1}.
    FlipSymmetric,
}

/// Matrices up to this dimension go through the dense solver.
const DENSE_DIM_LIMIT: usize = 256;

/// Project onto the +1 eigenspace of the global bit-flip X^⊗N.
///
/// Sector basis: b_z = (|z⟩ + |z̄⟩)/√2 for z with leading bit 0, z̄ the full
/// bitwise complement. Requires [H, X^⊗N] = 0; violations surface as a
/// Hermiticity failure when assembling the projected matrix.
pub fn flip_symmetric_operator(h: &HermitianOperator) -> Result<HermitianOperator> {
    let dim = h.dimension();
    let half = dim / 2;
    let mask = dim - 1;
    let triplets = h
        .entries()
        .iter()
        .filter(|&&(r, _, _)| r < half)
        .map(|&(r, c, v)| {
            let col = if c < half { c } else { c ^ mask };
            (r, col, v)
        });
    HermitianOperator::from_entries(half, triplets)
}

/// Lift a sector vector back to the full 2^N space.
pub fn embed_flip_symmetric(vec: &[Complex64]) -> Vec<Complex64> {
    let half = vec.len();
    let dim = half * 2;
    let mask = dim - 1;
    let scale = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut out = vec![Complex64::ZERO; dim];
    for (z, &c) in vec.iter().enumerate() {
        out[z] = c * scale;
        out[z ^ mask] = c * scale;
    }
    out
}

fn to_dense(h: &HermitianOperator) -> nalgebra::DMatrix<Complex64> {
    let dim = h.dimension();
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
    for &(r, c, v) in h.entries() {
        m[(r, c)] = v;
    }
    m
}

/// Dense Hermitian eigenpairs, ascending. Oracle path for small dimensions.
pub fn dense_eigenpairs(h: &HermitianOperator) -> Vec<(f64, Vec<Complex64>)> {
    let eig = nalgebra::SymmetricEigen::new(to_dense(h));
    let dim = h.dimension();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    order
        .into_iter()
        .map(|i| {
            (
                eig.eigenvalues[i],
                eig.eigenvectors.column(i).iter().copied().collect(),
            )
        })
        .collect()
}

/// All eigenvalues of the sector-restricted operator, ascending, via the
/// dense solver. Intended as the test oracle.
pub fn dense_spectrum(h: &HermitianOperator, sector: Sector) -> Result<Vec<f64>> {
    let op = match sector {
        Sector::Full => h.clone(),
        Sector::FlipSymmetric => flip_symmetric_operator(h)?,
    };
    Ok(dense_eigenpairs(&op).into_iter().map(|p| p.0).collect())
}

#[doc(hidden)]
pub fn dense_eigenvalues_for_tests(h: &HermitianOperator) -> Vec<f64> {
    dense_eigenpairs(h).into_iter().map(|p| p.0).collect()
}

fn sector_restrict(h: &HermitianOperator, sector: Sector) -> Result<HermitianOperator> {
    match sector {
        Sector::Full => Ok(h.clone()),
        Sector::FlipSymmetric => flip_symmetric_operator(h),
    }
}

fn lowest_pairs_restricted(
    op: &HermitianOperator,
    k: usize,
) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let dim = op.dimension();
    if k > dim {
        return Err(Error::InsufficientData(format!(
            "requested {k} levels from a {dim}-dimensional space"
        )));
    }
    if dim <= DENSE_DIM_LIMIT {
        Ok(dense_eigenpairs(op).into_iter().take(k).collect())
    } else {
        // dense diagonalization is slow at these sizes but always lands;
        // keep it as the safety net when the subspace iteration stalls
        match davidson::lowest_eigenpairs(op, k) {
            Ok(pairs) => Ok(pairs),
            Err(Error::EigensolverFailure { .. }) => {
                Ok(dense_eigenpairs(op).into_iter().take(k).collect())
            }
            Err(e) => Err(e),
        }
    }
}

/// The k smallest eigenvalues of H restricted to `sector`, ascending.
pub fn lowest_levels(h: &HermitianOperator, k: usize, sector: Sector) -> Result<Vec<f64>> {
    let op = sector_restrict(h, sector)?;
    Ok(lowest_pairs_restricted(&op, k)?.into_iter().map(|p| p.0).collect())
}

/// Ground eigenpair of H restricted to `sector`, with the eigenvector lifted
/// back to the full 2^N space.
pub fn ground_state(h: &HermitianOperator, sector: Sector) -> Result<(f64, Vec<Complex64>)> {
    let op = sector_restrict(h, sector)?;
    let pairs = lowest_pairs_restricted(&op, 1)?;
    let (e0, vec) = pairs.into_iter().next().unwrap();
    let full = match sector {
        Sector::Full => vec,
        Sector::FlipSymmetric => embed_flip_symmetric(&vec),
    };
    Ok((e0, full))
}

/// Sampled E0(s), E1(s) with the minimum gap over the stored grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapProfile {
    pub s_grid: Vec<f64>,
    pub e0: Vec<f64>,
    pub e1: Vec<f64>,
    pub sector: Sector,
    pub min_gap: f64,
    pub argmin_s: f64,
}

impl GapProfile {
    pub fn gaps(&self) -> Vec<f64> {
        self.e0.iter().zip(&self.e1).map(|(a, b)| b - a).collect()
    }
}

fn levels_at(
    h_trans: &HermitianOperator,
    h_ising: &HermitianOperator,
    s: f64,
    sector: Sector,
) -> Result<(f64, f64)> {
    let h = interpolate(h_trans, h_ising, s)?;
    let levels = lowest_levels(&h, 2, sector).map_err(|e| match e {
        Error::EigensolverFailure { msg, .. } => Error::EigensolverFailure { s, msg },
        other => other,
    })?;
    Ok((levels[0], levels[1]))
}

/// Scan the two lowest levels of H(s) over a uniform grid (both endpoints
/// included), then refine once around the coarse minimum with three extra
/// points at half spacing.
pub fn gap_profile(
    instance: &PartitionInstance,
    grid_size: usize,
    sector: Sector,
) -> Result<GapProfile> {
    if grid_size < 3 {
        return Err(Error::InsufficientData(format!(
            "grid_size {grid_size} < 3"
        )));
    }
    let n = instance.num_qubits();
    let h_trans = build_transverse(n)?;
    let h_ising = build_ising(instance)?;

    let coarse: Vec<f64> = (0..grid_size)
        .map(|k| k as f64 / (grid_size - 1) as f64)
        .collect();
    let mut points: Vec<(f64, f64, f64)> = coarse
        .par_iter()
        .map(|&s| levels_at(&h_trans, &h_ising, s, sector).map(|(a, b)| (s, a, b)))
        .collect::<Result<_>>()?;

    // refinement: half-spacing neighbors of the coarse minimum, then one more
    // step toward whichever side came out lower
    let spacing = 1.0 / (grid_size - 1) as f64;
    let argmin = points
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 .2 - a.1 .1).partial_cmp(&(b.1 .2 - b.1 .1)).unwrap())
        .map(|(_, &(s, _, _))| s)
        .unwrap();
    let mut extra: Vec<f64> = Vec::new();
    for cand in [argmin - spacing / 2.0, argmin + spacing / 2.0] {
        if (0.0..=1.0).contains(&cand) {
            extra.push(cand);
        }
    }
    let mut evaluated: Vec<(f64, f64, f64)> = extra
        .iter()
        .map(|&s| levels_at(&h_trans, &h_ising, s, sector).map(|(a, b)| (s, a, b)))
        .collect::<Result<_>>()?;
    let best = evaluated
        .iter()
        .chain(points.iter().filter(|p| (p.0 - argmin).abs() < 1e-12))
        .min_by(|a, b| (a.2 - a.1).partial_cmp(&(b.2 - b.1)).unwrap())
        .map(|&(s, _, _)| s)
        .unwrap();
    for cand in [best - spacing / 4.0, best + spacing / 4.0] {
        if (0.0..=1.0).contains(&cand)
            && !points.iter().any(|p| (p.0 - cand).abs() < 1e-12)
            && !evaluated.iter().any(|p| (p.0 - cand).abs() < 1e-12)
        {
            let (a, b) = levels_at(&h_trans, &h_ising, cand, sector)?;
            evaluated.push((cand, a, b));
            break;
        }
    }
    points.append(&mut evaluated);
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    points.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12);

    let (mut min_gap, mut argmin_s) = (f64::INFINITY, 0.0);
    for &(s, e0, e1) in &points {
        let g = e1 - e0;
        if g < min_gap {
            min_gap = g;
            argmin_s = s;
        }
    }
    Ok(GapProfile {
        s_grid: points.iter().map(|p| p.0).collect(),
        e0: points.iter().map(|p| p.1).collect(),
        e1: points.iter().map(|p| p.2).collect(),
        sector,
        min_gap,
        argmin_s,
    })
}

/// Exponential and power-law fits of median minimum gap against system size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapScalingFit {
    /// (N, median Δ_min) pairs the fit acted on.
    pub samples: Vec<(usize, f64)>,
    /// Decay rate in Δ_min ≈ A·exp(−cN).
    pub c: f64,
    /// RMS residual of the log-linear (exponential) fit.
    pub log_residual: f64,
    /// Exponent in Δ_min ≈ A·N^{−p}.
    pub power_exponent: f64,
    /// RMS residual of the log-log (power-law) fit.
    pub power_residual: f64,
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Fit the per-N median minimum gaps to both scaling models.
pub fn fit_gap_scaling(data: &[(usize, Vec<f64>)]) -> Result<GapScalingFit> {
    let distinct: std::collections::BTreeSet<usize> = data.iter().map(|d| d.0).collect();
    if distinct.len() < 4 {
        return Err(Error::InvalidFitInput(format!(
            "need ≥ 4 distinct N, got {}",
            distinct.len()
        )));
    }
    for (n, gaps) in data {
        if gaps.len() < 5 {
            return Err(Error::InvalidFitInput(format!(
                "need ≥ 5 instances per N, got {} at N={n}",
                gaps.len()
            )));
        }
        if let Some(&bad) = gaps.iter().find(|&&g| g <= 0.0) {
            return Err(Error::InvalidFitInput(format!(
                "nonpositive minimum gap {bad} at N={n} (degenerate sector?)"
            )));
        }
    }
    let samples: Vec<(usize, f64)> = data
        .iter()
        .map(|(n, gaps)| {
            let mut g = gaps.clone();
            (*n, median(&mut g))
        })
        .collect();
    let xs_n: Vec<f64> = samples.iter().map(|&(n, _)| n as f64).collect();
    let xs_logn: Vec<f64> = samples.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, g)| g.ln()).collect();
    let exp_fit = linear_fit(&xs_n, &ys);
    let pow_fit = linear_fit(&xs_logn, &ys);
    Ok(GapScalingFit {
        samples,
        c: -exp_fit.slope,
        log_residual: exp_fit.rms_residual,
        power_exponent: -pow_fit.slope,
        power_residual: pow_fit.rms_residual,
    })
}
