//! Generates a seeded synthetic corpus and prints the first records of
//! each file.
//!
//! Run with: cargo run --example synth_corpus

use ecomode::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    let cfg = SynthConfig {
        sessions: 200,
        seed: 42,
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?;

    let dir = tempfile::tempdir()?;
    corpus.write(dir.path())?;
    println!("corpus written to {}", dir.path().display());

    for (name, text) in [
        ("queries.jsonl", &corpus.queries_jsonl),
        ("plans.jsonl", &corpus.plans_jsonl),
        ("clicks.jsonl", &corpus.clicks_jsonl),
    ] {
        println!("\n--- {name} (first 3 lines) ---");
        for line in text.lines().take(3) {
            let shown = if line.len() > 120 { &line[..120] } else { line };
            println!("{shown}");
        }
    }

    let truth: serde_json::Value = serde_json::from_str(&corpus.ground_truth_json)?;
    println!("\nground truth digest: {}", truth["config_digest"]);
    Ok(())
}
