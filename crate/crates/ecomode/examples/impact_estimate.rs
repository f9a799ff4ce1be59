//! Scales an observed per-corpus CO2 reduction up to national yearly
//! figures and derives the health co-benefit of the added cycling.
//!
//! Run with: cargo run --example impact_estimate

use ecomode::{estimate_impact, ImpactInputs};

fn main() -> anyhow::Result<()> {
    let inputs = ImpactInputs {
        reduction_fraction: 0.0923,
        cycling_min_per_day: 23.04,
        ..ImpactInputs::default()
    };
    let estimate = estimate_impact(&inputs)?;

    println!(
        "a {:.2}% reduction of {:.1} Mt national transport CO2 saves {:.2} Mt per year",
        inputs.reduction_fraction * 100.0,
        inputs.national_transport_co2_mt,
        estimate.national_reduction_mt
    );
    println!(
        "{:.2} min/day of cycling at MET {:.1} is {:.3} MET-hours/week, {:.2}% of the {:.2} MET-hour recommendation",
        inputs.cycling_min_per_day,
        inputs.met_factor,
        estimate.meth_per_week,
        estimate.pct_of_recommendation,
        inputs.recommendation_meth
    );
    println!(
        "estimated all-cause mortality risk reduction: {:.3}%{}",
        estimate.mortality_risk_reduction_pct,
        if estimate.exceeds_recommendation {
            " (dose exceeds the recommendation; linear model unclamped)"
        } else {
            ""
        }
    );
    Ok(())
}
