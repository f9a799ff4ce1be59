//! End-to-end run entirely in memory: synthesize a corpus, parse and join
//! it, infer the mapping, solve the assignment, and build the report.
//!
//! Run with: cargo run --example full_pipeline

use ecomode::emission::EmissionTable;
use ecomode::impact::CyclingDenominator;
use ecomode::modes::FareSchedule;
use ecomode::report::{build_report, RunMetadata};
use ecomode::synth::{generate, SynthConfig};
use ecomode::{
    build_instance, infer_mapping, join_sessions, parse_clicks, parse_plans, parse_queries, solve,
};

fn main() -> anyhow::Result<()> {
    let cfg = SynthConfig {
        sessions: 1_000,
        seed: 3,
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?;

    let queries = parse_queries(corpus.queries_jsonl.as_bytes())?;
    let plans = parse_plans(corpus.plans_jsonl.as_bytes())?;
    let clicks = parse_clicks(corpus.clicks_jsonl.as_bytes())?;

    let mapping = infer_mapping(&plans.records, &FareSchedule::beijing())?;
    let allowed = ecomode::ingest::default_mode_filter();
    let (sessions, diag) =
        join_sessions(&queries.records, &plans.records, &clicks.records, &allowed);
    println!(
        "joined {} sessions ({} dropped)",
        sessions.len(),
        diag.total_dropped()
    );

    let table = EmissionTable::default();
    let instance = build_instance(&sessions, &mapping, &table, 1.0, 1.0)?;
    let solution = solve(&instance);

    let report = build_report(
        &instance,
        &solution.assignment,
        &mapping,
        5,
        1,
        CyclingDenominator::CyclingSessions,
        RunMetadata::unspecified(),
    )?;

    println!(
        "co2: {:.2} t -> {:.2} t ({:.2}% lower)",
        report.co2.baseline.total / 1e6,
        report.co2.optimized.total / 1e6,
        report.co2.reduction_pct
    );
    println!(
        "time: mean {:.0} s -> {:.0} s ({:.2}% lower)",
        report.travel_time.baseline.mean,
        report.travel_time.optimized.mean,
        report.travel_time.reduction_pct
    );
    println!(
        "{} of {} sessions changed mode; cycling {:.1} min/day over {} cycling sessions",
        report.sessions_changed,
        report.sessions,
        report.cycling.mean_minutes_per_day,
        report.cycling.sessions
    );
    println!("\ntop examples:");
    for row in &report.examples {
        println!(
            "  {}: {} -> {}, saves {:.0} g and {} s",
            row.sid,
            row.baseline_mode,
            row.optimized_mode,
            row.co2_saved_g(),
            row.time_saved_s()
        );
    }
    Ok(())
}
