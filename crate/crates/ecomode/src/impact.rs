//! Downstream arithmetic: national-scale CO2 extrapolation and the health
//! effect of the additional cycling an optimized assignment implies.
//!
//! These are deliberate back-of-envelope estimates: pure functions of
//! explicit inputs, with every constant configurable and echoed in the
//! output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{ModeMapping, TransportMeans};
use crate::optimizer::{Assignment, Instance};
use crate::report::CyclingSummary;

/// Yearly transport-sector CO2 of China in megatonnes, the default
/// national figure the observed reduction fraction is applied to.
pub const DEFAULT_NATIONAL_CO2_MT: f64 = 843.9;

/// Metabolic equivalent of moderate cycling.
pub const DEFAULT_MET_FACTOR: f64 = 4.0;

/// The WHO physical-activity recommendation, MET-hours per week
/// (78.75 MET-hours over 7 days).
pub const DEFAULT_RECOMMENDED_METH: f64 = 11.25;

/// All-cause mortality risk reduction attributed to meeting the full
/// recommendation, percent.
pub const DEFAULT_FULL_BENEFIT_PCT: f64 = 10.0;

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Config(msg.into()))
    }
}

/// Scales a national yearly CO2 figure by an observed reduction fraction.
///
/// Bilinear in both arguments. The fraction must lie in `[0, 1]` and the
/// national figure must be positive.
pub fn extrapolate_national(
    reduction_fraction: f64,
    national_transport_co2_mt: f64,
) -> Result<f64> {
    require(
        reduction_fraction.is_finite() && (0.0..=1.0).contains(&reduction_fraction),
        "reduction fraction must lie in [0, 1]",
    )?;
    require(
        national_transport_co2_mt.is_finite() && national_transport_co2_mt > 0.0,
        "national CO2 figure must be positive",
    )?;
    Ok(reduction_fraction * national_transport_co2_mt)
}

/// Converts daily cycling minutes into an activity dose in MET-hours.
pub fn compute_meth(cycling_min_per_day: f64, met_factor: f64) -> Result<f64> {
    require(
        cycling_min_per_day.is_finite() && cycling_min_per_day >= 0.0,
        "cycling minutes must be non-negative",
    )?;
    require(
        met_factor.is_finite() && met_factor >= 0.0,
        "MET factor must be non-negative",
    )?;
    Ok(cycling_min_per_day * met_factor / 60.0)
}

/// Linear risk model output: how much of the activity recommendation the
/// dose covers and the mortality risk reduction that share buys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskReduction {
    pub pct_of_recommendation: f64,
    pub risk_reduction_pct: f64,
    /// The dose exceeds the recommendation; values are reported unclamped
    /// and callers should surface a warning.
    pub exceeds_recommendation: bool,
}

/// Interpolates the mortality benefit linearly in the activity dose.
///
/// `pct = 100 x meth / recommendation` and
/// `risk = full_benefit_pct x pct / 100`, with no cap above the
/// recommendation.
pub fn risk_reduction(
    meth: f64,
    recommendation: f64,
    full_benefit_pct: f64,
) -> Result<RiskReduction> {
    require(
        meth.is_finite() && meth >= 0.0,
        "MET-hours must be non-negative",
    )?;
    require(
        recommendation.is_finite() && recommendation > 0.0,
        "recommendation must be positive",
    )?;
    require(
        full_benefit_pct.is_finite() && full_benefit_pct >= 0.0,
        "full-benefit percentage must be non-negative",
    )?;
    let pct_of_recommendation = 100.0 * meth / recommendation;
    Ok(RiskReduction {
        pct_of_recommendation,
        risk_reduction_pct: full_benefit_pct * pct_of_recommendation / 100.0,
        exceeds_recommendation: meth > recommendation,
    })
}

/// Which population the cycling time is averaged over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CyclingDenominator {
    /// Sessions whose optimized means is cycling (the default).
    CyclingSessions,
    /// Every session in the instance.
    AllSessions,
}

impl CyclingDenominator {
    pub fn as_str(self) -> &'static str {
        match self {
            CyclingDenominator::CyclingSessions => "cycling_sessions",
            CyclingDenominator::AllSessions => "all_sessions",
        }
    }
}

impl std::str::FromStr for CyclingDenominator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycling_sessions" | "cycling-sessions" => Ok(CyclingDenominator::CyclingSessions),
            "all_sessions" | "all-sessions" => Ok(CyclingDenominator::AllSessions),
            other => Err(Error::Config(format!(
                "unknown cycling denominator {other:?}; use cycling-sessions or all-sessions"
            ))),
        }
    }
}

/// Sums the travel time of sessions assigned to cycling and averages it
/// over the chosen denominator and the observation period.
pub fn cycling_summary(
    instance: &Instance,
    assignment: &Assignment,
    mapping: &ModeMapping,
    days: u64,
    denominator: CyclingDenominator,
) -> Result<CyclingSummary> {
    require(days > 0, "days must be positive")?;
    if assignment.chosen.len() != instance.m() {
        return Err(Error::Domain(format!(
            "assignment has {} entries for {} sessions",
            assignment.chosen.len(),
            instance.m()
        )));
    }
    let mut sessions = 0usize;
    let mut total_eta_s = 0u64;
    for (i, &j) in assignment.chosen.iter().enumerate() {
        let cell = instance
            .cell(i, j)
            .ok_or_else(|| Error::Domain(format!("row {i}: chosen mode was not displayed")))?;
        if mapping.means_of(instance.mode_of_col(j)) == TransportMeans::Cycling {
            sessions += 1;
            total_eta_s += cell.eta_s;
        }
    }
    let count = match denominator {
        CyclingDenominator::CyclingSessions => sessions,
        CyclingDenominator::AllSessions => {
            if instance.m() == 0 {
                return Err(Error::EmptySimulation);
            }
            instance.m()
        }
    };
    // No cycling at all averages to zero rather than dividing by zero.
    let mean_minutes_per_day = if count == 0 {
        0.0
    } else {
        total_eta_s as f64 / count as f64 / days as f64 / 60.0
    };
    Ok(CyclingSummary {
        sessions,
        total_eta_s,
        mean_minutes_per_day,
        denominator: denominator.as_str().into(),
        days,
    })
}

/// Average cycling minutes per day under the optimized assignment.
pub fn mean_cycling_duration(
    instance: &Instance,
    assignment: &Assignment,
    mapping: &ModeMapping,
    days: u64,
    denominator: CyclingDenominator,
) -> Result<f64> {
    Ok(cycling_summary(instance, assignment, mapping, days, denominator)?.mean_minutes_per_day)
}

/// Every knob the combined estimate depends on, echoed into the output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactInputs {
    /// Observed CO2 reduction as a fraction in `[0, 1]`.
    pub reduction_fraction: f64,
    pub national_transport_co2_mt: f64,
    pub cycling_min_per_day: f64,
    pub met_factor: f64,
    pub recommendation_meth: f64,
    pub full_benefit_pct: f64,
}

impl Default for ImpactInputs {
    fn default() -> Self {
        ImpactInputs {
            reduction_fraction: 0.0,
            national_transport_co2_mt: DEFAULT_NATIONAL_CO2_MT,
            cycling_min_per_day: 0.0,
            met_factor: DEFAULT_MET_FACTOR,
            recommendation_meth: DEFAULT_RECOMMENDED_METH,
            full_benefit_pct: DEFAULT_FULL_BENEFIT_PCT,
        }
    }
}

/// The combined scale-up: national CO2 savings plus the health reading of
/// the induced cycling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImpactEstimate {
    pub national_reduction_mt: f64,
    pub meth_per_week: f64,
    pub pct_of_recommendation: f64,
    pub mortality_risk_reduction_pct: f64,
    pub exceeds_recommendation: bool,
}

/// Runs the full impact arithmetic over validated inputs.
pub fn estimate_impact(inputs: &ImpactInputs) -> Result<ImpactEstimate> {
    let national_reduction_mt =
        extrapolate_national(inputs.reduction_fraction, inputs.national_transport_co2_mt)?;
    let meth = compute_meth(inputs.cycling_min_per_day, inputs.met_factor)?;
    let risk = risk_reduction(meth, inputs.recommendation_meth, inputs.full_benefit_pct)?;
    Ok(ImpactEstimate {
        national_reduction_mt,
        meth_per_week: meth,
        pct_of_recommendation: risk.pct_of_recommendation,
        mortality_risk_reduction_pct: risk.risk_reduction_pct,
        exceeds_recommendation: risk.exceeds_recommendation,
    })
}
