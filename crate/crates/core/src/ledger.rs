//! The cost ledger: tomography budgets T_f, verification counts T_g, and
//! threshold evolution times T over a range of system sizes, with scaling
//! fits and a verdict on whether the evolution cost is consistent with a
//! polynomial trend at the tested scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{find_threshold_time, ThresholdScanConfig};
use crate::fitting::linear_fit;
use crate::hamiltonian::{generate_instance, WeightDistribution};
use crate::partition::{brute_force, verification_op_count};
use crate::spectrum::{median, GapScalingFit, Sector};
use crate::tomography::{budget, TomographyMode};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CostLabel {
    #[serde(rename = "f_full")]
    FFull,
    #[serde(rename = "f_product")]
    FProduct,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "T_evolution")]
    TEvolution,
}

impl CostLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CostLabel::FFull => "f_full",
            CostLabel::FProduct => "f_product",
            CostLabel::G => "g",
            CostLabel::TEvolution => "T_evolution",
        }
    }
}

/// One per-N cost record. Exactly one of `operation_count` /
/// `threshold_time` is set, matching the label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphismCost {
    pub label: CostLabel,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operation_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_time: Option<f64>,
    pub capped: bool,
}

/// Tomography budget as a ledger record.
pub fn measure_f(n: usize, mode: TomographyMode) -> MorphismCost {
    let b = budget(mode, n);
    MorphismCost {
        label: match mode {
            TomographyMode::Full => CostLabel::FFull,
            TomographyMode::Product => CostLabel::FProduct,
        },
        n,
        operation_count: Some(b.operation_count),
        threshold_time: None,
        capped: false,
    }
}

/// Classical verification count as a ledger record.
pub fn measure_g(n: usize) -> Result<MorphismCost> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!("measure_g needs N ≥ 2, got {n}")));
    }
    Ok(MorphismCost {
        label: CostLabel::G,
        n,
        operation_count: Some(verification_op_count(n) as u64),
        threshold_time: None,
        capped: false,
    })
}

fn mix_seed(seed: u64, n: usize, instance: usize, attempt: usize) -> u64 {
    let mut x = seed
        ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ (instance as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9)
        ^ (attempt as u64).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

const REJECTION_LIMIT: usize = 10_000;

/// Seeded uniform-integer instance guaranteed to admit a perfect partition,
/// found by rejection sampling.
pub fn perfect_partition_instance(
    n: usize,
    seed: u64,
    instance_index: usize,
) -> Result<crate::hamiltonian::PartitionInstance> {
    for attempt in 0..REJECTION_LIMIT {
        let inst = generate_instance(
            WeightDistribution::UniformInt,
            n,
            mix_seed(seed, n, instance_index, attempt),
        )?;
        if brute_force(&inst)?.is_perfect {
            return Ok(inst);
        }
    }
    Err(Error::RejectionExhausted {
        n,
        tries: REJECTION_LIMIT,
    })
}

/// Threshold evolution times over an ensemble of perfect-partition instances.
pub fn measure_evolution(
    n: usize,
    instances: usize,
    target: f64,
    seed: u64,
    scan: &ThresholdScanConfig,
) -> Result<Vec<MorphismCost>> {
    if instances < 1 {
        return Err(Error::InsufficientData("instances must be ≥ 1".into()));
    }
    (0..instances)
        .map(|i| {
            let inst = perfect_partition_instance(n, seed, i)?;
            let t = find_threshold_time(&inst, target, scan)?;
            Ok(MorphismCost {
                label: CostLabel::TEvolution,
                n,
                operation_count: None,
                threshold_time: Some(t.time),
                capped: t.capped,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConsistentWithPoly,
    InconsistentWithPoly,
    Inconclusive,
}

/// Exponential and polynomial fits of median threshold time against N.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeScalingFit {
    pub samples: Vec<(usize, f64)>,
    /// Rate in T ≈ A·exp(c·N).
    pub exp_rate: f64,
    pub exp_residual: f64,
    /// Degree in T ≈ A·N^p.
    pub poly_degree: f64,
    pub poly_residual: f64,
}

/// Everything needed to rerun the experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub n_values: Vec<usize>,
    pub instances_per_n: usize,
    pub target: f64,
    pub distribution: WeightDistribution,
    pub sector: Sector,
    pub grid_size: usize,
    pub scan_floor: f64,
    pub scan_cap: f64,
    pub scan_resolution: f64,
    /// The verdict compares finite-N model residuals; it makes no asymptotic
    /// claim beyond the tested sizes.
    pub verdict_protocol: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerReport {
    pub schema_version: String,
    pub costs: Vec<MorphismCost>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_fit: Option<GapScalingFit>,
    pub time_fit: TimeScalingFit,
    pub condition_verdict: Verdict,
    pub cap_events: usize,
    pub provenance: Provenance,
}

/// Residuals within this relative margin of each other are a tie.
const VERDICT_TIE_MARGIN: f64 = 0.1;

fn verdict_from_residuals(exp_residual: f64, poly_residual: f64) -> Verdict {
    let scale = exp_residual.max(poly_residual);
    if scale == 0.0 || (exp_residual - poly_residual).abs() <= VERDICT_TIE_MARGIN * scale {
        Verdict::Inconclusive
    } else if exp_residual < poly_residual {
        Verdict::InconsistentWithPoly
    } else {
        Verdict::ConsistentWithPoly
    }
}

/// Fit the evolution-time records and render the verdict.
pub fn assemble(
    costs: Vec<MorphismCost>,
    gap_fit: Option<GapScalingFit>,
    provenance: Provenance,
) -> Result<LedgerReport> {
    let mut by_n: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    let mut cap_events = 0usize;
    for c in &costs {
        if c.label == CostLabel::TEvolution {
            if let Some(t) = c.threshold_time {
                by_n.entry(c.n).or_default().push(t);
            }
            if c.capped {
                cap_events += 1;
            }
        }
    }
    if by_n.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "need ≥ 4 distinct N in evolution costs, got {}",
            by_n.len()
        )));
    }
    let samples: Vec<(usize, f64)> = by_n
        .into_iter()
        .map(|(n, mut ts)| (n, median(&mut ts)))
        .collect();
    if let Some(&(n, t)) = samples.iter().find(|&&(_, t)| t <= 0.0) {
        return Err(Error::InvalidFitInput(format!(
            "median threshold time {t} at N={n} is nonpositive; cannot fit logs"
        )));
    }
    let xs_n: Vec<f64> = samples.iter().map(|&(n, _)| n as f64).collect();
    let xs_logn: Vec<f64> = samples.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, t)| t.ln()).collect();
    let exp_fit = linear_fit(&xs_n, &ys);
    let poly_fit = linear_fit(&xs_logn, &ys);
    let time_fit = TimeScalingFit {
        samples,
        exp_rate: exp_fit.slope,
        exp_residual: exp_fit.rms_residual,
        poly_degree: poly_fit.slope,
        poly_residual: poly_fit.rms_residual,
    };
    let condition_verdict = verdict_from_residuals(time_fit.exp_residual, time_fit.poly_residual);
    Ok(LedgerReport {
        schema_version: SCHEMA_VERSION.to_string(),
        costs,
        gap_fit,
        time_fit,
        condition_verdict,
        cap_events,
        provenance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmitFormat {
    Json,
    Csv,
}

impl std::str::FromStr for EmitFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(EmitFormat::Json),
            "csv" => Ok(EmitFormat::Csv),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Render the report in the requested format.
pub fn render(report: &LedgerReport, format: EmitFormat) -> Result<String> {
    match format {
        EmitFormat::Json => Ok(serde_json::to_string_pretty(report)?),
        EmitFormat::Csv => {
            let mut out = String::from("label,N,value,capped,schema_version\n");
            for c in &report.costs {
                let value = match (c.operation_count, c.threshold_time) {
                    (Some(ops), None) => ops.to_string(),
                    (None, Some(t)) => format!("{t}"),
                    _ => String::from("invalid"),
                };
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.label.as_str(),
                    c.n,
                    value,
                    c.capped,
                    report.schema_version
                ));
            }
            Ok(out)
        }
    }
}

/// Write the report atomically (temp file in the target directory + rename).
pub fn emit(report: &LedgerReport, format: EmitFormat, path: &std::path::Path) -> Result<()> {
    let text = render(report, format)?;
    let tmp = path.with_extension("tmp-write");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
