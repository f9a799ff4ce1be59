//! Exports the per-session mode changes of a small corpus as GeoJSON
//! line features, ready for a map viewer.
//!
//! Run with: cargo run --example export_geojson

use ecomode::emission::EmissionTable;
use ecomode::report::export_geojson;
use ecomode::synth::{generate, SynthConfig};
use ecomode::{build_instance, join_sessions, parse_clicks, parse_plans, parse_queries, solve};

fn main() -> anyhow::Result<()> {
    let cfg = SynthConfig {
        sessions: 50,
        seed: 9,
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?;
    let queries = parse_queries(corpus.queries_jsonl.as_bytes())?;
    let plans = parse_plans(corpus.plans_jsonl.as_bytes())?;
    let clicks = parse_clicks(corpus.clicks_jsonl.as_bytes())?;
    let allowed = ecomode::ingest::default_mode_filter();
    let (sessions, _) = join_sessions(&queries.records, &plans.records, &clicks.records, &allowed);

    let mapping = cfg.mapping.clone();
    let instance = build_instance(&sessions, &mapping, &EmissionTable::default(), 1.0, 1.0)?;
    let solution = solve(&instance);

    let collection = export_geojson(&instance, &solution.assignment, &mapping);
    let features = collection["features"].as_array().unwrap();
    let changed = features
        .iter()
        .filter(|f| f["properties"]["changed"].as_bool() == Some(true))
        .count();
    println!(
        "{} features, {} of them mode changes",
        features.len(),
        changed
    );
    println!(
        "first feature:\n{}",
        serde_json::to_string_pretty(&features[0])?
    );

    let path = std::env::temp_dir().join("changes.geojson");
    std::fs::write(&path, serde_json::to_string_pretty(&collection)?)?;
    println!("full collection written to {}", path.display());
    Ok(())
}
