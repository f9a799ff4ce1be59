//! Recovers the meaning of opaque mode ids from a display log and checks
//! the result against the generator's ground truth.
//!
//! Run with: cargo run --example infer_mapping

use ecomode::modes::FareSchedule;
use ecomode::synth::{generate, SynthConfig};
use ecomode::{infer_mapping, parse_plans};

fn main() -> anyhow::Result<()> {
    let cfg = SynthConfig {
        sessions: 2_000,
        seed: 11,
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?;

    let plans = parse_plans(corpus.plans_jsonl.as_bytes())?;
    let inferred = infer_mapping(&plans.records, &FareSchedule::beijing())?;

    println!("{:<8} {:<22} recovered?", "mode id", "inferred means");
    let mut all_match = true;
    for (id, means) in inferred.iter() {
        let expected = cfg.mapping.means_of(id);
        let ok = means == expected;
        all_match &= ok;
        println!(
            "{:<8} {:<22} {}",
            id.get(),
            means.to_string(),
            if ok { "yes" } else { "NO" }
        );
    }
    println!(
        "\nfull mapping recovered from {} sessions: {}",
        cfg.sessions,
        if all_match { "yes" } else { "no" }
    );
    Ok(())
}
