//! Time-dependent Schrödinger evolution under the interpolating Hamiltonian,
//! success probability against the Ising ground space, threshold-time scans,
//! and the adiabatic criterion ratio T·Δ².
//!
//! The production integrator is midpoint piecewise-constant exponential
//! stepping: each step applies exp(−i·H(s_mid)·Δt) through a Krylov
//! approximation, so unitarity holds to machine precision per step and the
//! remaining error is attributable purely to time discretization. ħ = 1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{l2_norm, HermitianOperator, QuantumState};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    build_ising, build_transverse, hamiltonian_norm_bound, initial_state, interpolate,
    PartitionInstance, ScheduleSpec,
};
use crate::lanczos::expm_multiply;
use crate::partition::brute_force;
use crate::spectrum::{ground_state, Sector};

const EXPM_TOL: f64 = 1e-12;
const MAX_STEP_ANGLE: f64 = 0.5;
const TARGET_STEP_ANGLE: f64 = 0.1;

/// First-order short-time propagator v ↦ (I − i·H·δt)·v.
///
/// A verification oracle for the exact exponential, not the production
/// integrator; it is not unitary.
pub struct ShortTimePropagator<'a> {
    h: &'a HermitianOperator,
    dt: f64,
}

pub fn short_time_propagator(h: &HermitianOperator, dt: f64) -> ShortTimePropagator<'_> {
    ShortTimePropagator { h, dt }
}

impl ShortTimePropagator<'_> {
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let hv = self.h.apply_vec(v)?;
        let factor = Complex64::new(0.0, -self.dt);
        Ok(v.iter().zip(hv).map(|(a, b)| a + factor * b).collect())
    }
}

/// Computational-basis indices spanning the minimal-energy space of H_Ising.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundSpaceProjector {
    pub basis_indices: Vec<usize>,
}

impl GroundSpaceProjector {
    pub fn from_instance(instance: &PartitionInstance) -> Result<Self> {
        Ok(Self {
            basis_indices: brute_force(instance)?.basis_indices(),
        })
    }

    pub fn new(basis_indices: Vec<usize>) -> Self {
        Self { basis_indices }
    }
}

/// Σ |⟨b|Ψ⟩|² over the projector's basis indices.
pub fn success_probability(amplitudes: &[Complex64], projector: &GroundSpaceProjector) -> f64 {
    projector
        .basis_indices
        .iter()
        .map(|&i| amplitudes[i].norm_sqr())
        .sum()
}

/// Outcome of one adiabatic evolution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolutionResult {
    pub num_qubits: usize,
    /// Raw final amplitudes; never renormalized.
    pub final_amplitudes: Vec<Complex64>,
    /// |‖Ψ_final‖ − 1| before any normalization.
    pub norm_drift: f64,
    /// (s, overlap² with the instantaneous flip-symmetric ground state).
    pub ground_overlap_trace: Vec<(f64, f64)>,
    pub success_probability: f64,
    pub total_time: f64,
    pub steps: usize,
    /// False when norm_drift reached 1e-6.
    pub valid: bool,
}

impl EvolutionResult {
    /// Final state after renormalization (for downstream consumers such as
    /// tomography that require a unit vector).
    pub fn final_state(&self) -> Result<QuantumState> {
        QuantumState::normalized(self.num_qubits, self.final_amplitudes.clone())
    }
}

/// Shared sparsity pattern of (1−s)·H_trans + s·H_Ising, evaluated per step
/// without rebuilding the operator.
struct InterpolatedAction {
    dim: usize,
    /// (row, col, transverse value, ising value); values are real.
    pattern: Vec<(u32, u32, f64, f64)>,
}

impl InterpolatedAction {
    fn new(instance: &PartitionInstance) -> Result<Self> {
        let n = instance.num_qubits();
        let h_trans = build_transverse(n)?;
        let h_ising = build_ising(instance)?;
        let mut map: std::collections::BTreeMap<(u32, u32), (f64, f64)> = Default::default();
        for &(r, c, v) in h_trans.entries() {
            map.entry((r as u32, c as u32)).or_default().0 = v.re;
        }
        for &(r, c, v) in h_ising.entries() {
            map.entry((r as u32, c as u32)).or_default().1 = v.re;
        }
        Ok(Self {
            dim: h_trans.dimension(),
            pattern: map
                .into_iter()
                .map(|((r, c), (t, i))| (r, c, t, i))
                .collect(),
        })
    }

    fn matvec(&self, s: f64, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::ZERO; self.dim];
        let a = 1.0 - s;
        for &(r, c, t, i) in &self.pattern {
            out[r as usize] += (a * t + s * i) * v[c as usize];
        }
        out
    }
}

/// Steps needed so the conservative per-step angle bound stays at 0.1.
pub fn default_steps(instance: &PartitionInstance, total_time: f64) -> usize {
    ((total_time * hamiltonian_norm_bound(instance) / TARGET_STEP_ANGLE).ceil() as usize).max(1)
}

/// Evolve the uniform initial state from s=0 to s=1 under the linear
/// schedule, recording the ground-overlap trace at `checkpoints` points.
///
/// `seed` is recorded for provenance only; the dynamics is deterministic.
pub fn propagate_with(
    instance: &PartitionInstance,
    schedule: &ScheduleSpec,
    _seed: u64,
    checkpoints: usize,
) -> Result<EvolutionResult> {
    let n = instance.num_qubits();
    let projector = GroundSpaceProjector::from_instance(instance)?;
    let psi0 = initial_state(n)?;

    if schedule.total_time == 0.0 {
        // sudden quench: the state has no time to move
        let amps = psi0.amplitudes().to_vec();
        let success = success_probability(&amps, &projector);
        return Ok(EvolutionResult {
            num_qubits: n,
            final_amplitudes: amps,
            norm_drift: 0.0,
            ground_overlap_trace: Vec::new(),
            success_probability: success,
            total_time: 0.0,
            steps: 0,
            valid: true,
        });
    }

    let steps = schedule.num_steps;
    let dt = schedule.total_time / steps as f64;
    let angle = hamiltonian_norm_bound(instance) * dt;
    if angle >= MAX_STEP_ANGLE {
        return Err(Error::StepTooCoarse { angle });
    }

    let action = InterpolatedAction::new(instance)?;
    let h_trans = build_transverse(n)?;
    let h_ising = build_ising(instance)?;

    let mut checkpoint_steps: Vec<usize> = if checkpoints == 0 {
        Vec::new()
    } else {
        // `checkpoints` uniform interior points plus both endpoints
        let mut v: Vec<usize> = (0..=checkpoints)
            .map(|k| (k * steps) / checkpoints)
            .collect();
        v.dedup();
        v
    };
    checkpoint_steps.reverse();

    let mut psi = psi0.amplitudes().to_vec();
    let mut trace: Vec<(f64, f64)> = Vec::new();
    let mut record = |s: f64, psi: &[Complex64]| -> Result<()> {
        let h = interpolate(&h_trans, &h_ising, s)?;
        let (_, gs) = ground_state(&h, Sector::FlipSymmetric)?;
        let overlap: Complex64 = gs.iter().zip(psi).map(|(a, b)| a.conj() * b).sum();
        trace.push((s, overlap.norm_sqr()));
        Ok(())
    };

    if checkpoint_steps.last() == Some(&0) {
        checkpoint_steps.pop();
        record(0.0, &psi)?;
    }
    for j in 0..steps {
        let s_mid = (j as f64 + 0.5) / steps as f64;
        psi = expm_multiply(|v| action.matvec(s_mid, v), &psi, dt, EXPM_TOL);
        if checkpoint_steps.last() == Some(&(j + 1)) {
            checkpoint_steps.pop();
            record((j + 1) as f64 / steps as f64, &psi)?;
        }
    }

    let norm_drift = (l2_norm(&psi) - 1.0).abs();
    let success = success_probability(&psi, &projector);
    Ok(EvolutionResult {
        num_qubits: n,
        final_amplitudes: psi,
        norm_drift,
        ground_overlap_trace: trace,
        success_probability: success,
        total_time: schedule.total_time,
        steps,
        valid: norm_drift < 1e-6,
    })
}

/// `propagate_with` at the default 16 checkpoints.
pub fn propagate(
    instance: &PartitionInstance,
    schedule: &ScheduleSpec,
    seed: u64,
) -> Result<EvolutionResult> {
    propagate_with(instance, schedule, seed, 16)
}

/// Run the schedule backwards (s: 1 → 0) on given amplitudes, applying the
/// inverse of each forward step in reverse order.
pub fn propagate_reversed(
    instance: &PartitionInstance,
    schedule: &ScheduleSpec,
    amplitudes: &[Complex64],
) -> Result<Vec<Complex64>> {
    if schedule.total_time == 0.0 {
        return Ok(amplitudes.to_vec());
    }
    let steps = schedule.num_steps;
    let dt = schedule.total_time / steps as f64;
    let angle = hamiltonian_norm_bound(instance) * dt;
    if angle >= MAX_STEP_ANGLE {
        return Err(Error::StepTooCoarse { angle });
    }
    let action = InterpolatedAction::new(instance)?;
    let mut psi = amplitudes.to_vec();
    for j in (0..steps).rev() {
        let s_mid = (j as f64 + 0.5) / steps as f64;
        psi = expm_multiply(|v| action.matvec(s_mid, v), &psi, -dt, EXPM_TOL);
    }
    Ok(psi)
}

/// Result of a threshold-time scan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThresholdTime {
    pub time: f64,
    /// The geometric scan hit its cap before reaching the target.
    pub capped: bool,
    /// The scan floor already met the target; the threshold is a boundary
    /// value, not a measured crossing.
    pub at_floor: bool,
}

/// Knobs for `find_threshold_time`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThresholdScanConfig {
    pub floor: f64,
    pub cap: f64,
    /// Relative bisection resolution.
    pub resolution: f64,
}

impl Default for ThresholdScanConfig {
    fn default() -> Self {
        Self {
            floor: 1.0,
            cap: 1e6,
            resolution: 0.05,
        }
    }
}

fn success_at(instance: &PartitionInstance, t: f64) -> Result<f64> {
    let schedule = if t == 0.0 {
        ScheduleSpec::sudden()
    } else {
        ScheduleSpec::new(t, default_steps(instance, t))?
    };
    Ok(propagate_with(instance, &schedule, 0, 0)?.success_probability)
}

/// Geometric scan T ∈ {floor, 2·floor, 4·floor, …} followed by bisection,
/// returning the least T reaching `target` success within the configured
/// resolution. A capped scan is reported in the result, not as an error.
pub fn find_threshold_time(
    instance: &PartitionInstance,
    target: f64,
    config: &ThresholdScanConfig,
) -> Result<ThresholdTime> {
    if !(0.0..1.0).contains(&target) {
        return Err(Error::InvalidInstance(format!(
            "target success {target} must lie in (0,1)"
        )));
    }
    if success_at(instance, 0.0)? >= target {
        return Ok(ThresholdTime {
            time: 0.0,
            capped: false,
            at_floor: true,
        });
    }
    if success_at(instance, config.floor)? >= target {
        return Ok(ThresholdTime {
            time: config.floor,
            capped: false,
            at_floor: true,
        });
    }
    let mut lo = config.floor;
    let mut hi = config.floor;
    loop {
        hi *= 2.0;
        if hi > config.cap {
            return Ok(ThresholdTime {
                time: config.cap,
                capped: true,
                at_floor: false,
            });
        }
        if success_at(instance, hi)? >= target {
            break;
        }
        lo = hi;
    }
    while (hi - lo) / hi > config.resolution {
        let mid = 0.5 * (lo + hi);
        if success_at(instance, mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdTime {
        time: hi,
        capped: false,
        at_floor: false,
    })
}

/// T·Δ_min², the dimensionless adiabatic-criterion ratio.
pub fn criterion_ratio(total_time: f64, min_gap: f64) -> Result<f64> {
    if min_gap <= 0.0 {
        return Err(Error::NonpositiveGap(min_gap));
    }
    Ok(total_time * min_gap * min_gap)
}
