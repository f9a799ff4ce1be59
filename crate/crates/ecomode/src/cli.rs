//! Command line front end: `synth`, `infer`, `simulate` and `impact`.
//!
//! Exit status contract: 0 on success, 1 on diagnosed domain failures,
//! 2 on usage or configuration errors. Every output file embeds the digest
//! of the resolved configuration that produced it, and no output contains
//! paths or timestamps, so reruns with the same configuration and inputs
//! are byte-identical regardless of worker count.
//!
//! A `--config` JSON file may accompany each subcommand; keys present in
//! the file override the corresponding flags.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::digest::{config_digest, sha256_hex};
use crate::emission::EmissionTable;
use crate::error::{Error, Result};
use crate::impact::{estimate_impact, CyclingDenominator, ImpactInputs};
use crate::ingest::{
    default_mode_filter, join_sessions, parse_clicks, parse_plans, parse_queries, ModeId,
};
use crate::modes::{infer_mapping, FareSchedule, ModeMapping, TransportMeans};
use crate::optimizer::{build_instance, solve, Assignment, Instance};
use crate::report::{self, RunMetadata, StatsConventions};
use crate::synth::{generate, ClickModel, OdBox, SpeedBand, SynthConfig};

#[derive(Parser)]
#[command(
    name = "ecomode",
    version,
    about = "Quantifies the CO2 savings of eco-friendly transport choices over map-search logs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic search-log corpus with known ground truth.
    Synth(SynthArgs),
    /// Infer which transport means each opaque mode id stands for.
    Infer(InferArgs),
    /// Solve the mode-selection program and write the full report.
    Simulate(SimulateArgs),
    /// Scale an observed reduction to national and health figures.
    Impact(ImpactArgs),
}

/// Entry point used by the binary. Returns the process exit status.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Applies `ECOMODE_THREADS` to the global worker pool; 0 or unset keeps
/// the automatic count.
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("ECOMODE_THREADS") else {
        return Ok(());
    };
    let workers: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("ECOMODE_THREADS must be a number, got {raw:?}")))?;
    if workers == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot configure {workers} worker threads: {e}")))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Synth(args) => run_synth(args),
        Command::Infer(args) => run_infer(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Impact(args) => run_impact(args),
    }
}

fn load_file_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Config(format!("cannot open config file {}: {e}", path.display())))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| Error::Config(format!("bad config file {}: {e}", path.display())))
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path)
        .map_err(|e| Error::Config(format!("cannot open input file {}: {e}", path.display())))
}

fn write_text(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn ensure_out_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

// ---------------------------------------------------------------- synth

#[derive(Args)]
struct SynthArgs {
    /// Number of sessions to generate.
    #[arg(long, allow_negative_numbers = true)]
    sessions: Option<usize>,
    /// Seed for the generator's random stream.
    #[arg(long)]
    seed: Option<u64>,
    /// Click model: fastest, cheapest, uniform or sticky-bus.
    #[arg(long)]
    click_model: Option<String>,
    /// Directory the corpus files are written to.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// JSON config file; its keys override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// File-config counterpart of the synth flags; every generator knob is
/// available here.
#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SynthFileConfig {
    sessions: Option<usize>,
    seed: Option<u64>,
    click_model: Option<ClickModel>,
    mapping: Option<ModeMapping>,
    fares: Option<FareSchedule>,
    speed_bands: Option<BTreeMap<TransportMeans, SpeedBand>>,
    detour_factors: Option<BTreeMap<TransportMeans, f64>>,
    display_probs: Option<BTreeMap<TransportMeans, f64>>,
    od_box: Option<OdBox>,
    min_trip_m: Option<f64>,
    price_noise_pct: Option<f64>,
    out_dir: Option<PathBuf>,
}

fn run_synth(args: SynthArgs) -> Result<()> {
    let mut cfg = SynthConfig::default();
    let mut out_dir = args.out_dir;
    if let Some(v) = args.sessions {
        cfg.sessions = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = &args.click_model {
        cfg.click_model = v.parse()?;
    }
    if let Some(path) = &args.config {
        let file: SynthFileConfig = load_file_config(path)?;
        if let Some(v) = file.sessions {
            cfg.sessions = v;
        }
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
        if let Some(v) = file.click_model {
            cfg.click_model = v;
        }
        if let Some(v) = file.mapping {
            cfg.mapping = v;
        }
        if let Some(v) = file.fares {
            cfg.fares = v;
        }
        if let Some(v) = file.speed_bands {
            cfg.speed_bands = v;
        }
        if let Some(v) = file.detour_factors {
            cfg.detour_factors = v;
        }
        if let Some(v) = file.display_probs {
            cfg.display_probs = v;
        }
        if let Some(v) = file.od_box {
            cfg.od_box = v;
        }
        if let Some(v) = file.min_trip_m {
            cfg.min_trip_m = v;
        }
        if let Some(v) = file.price_noise_pct {
            cfg.price_noise_pct = v;
        }
        if let Some(v) = file.out_dir {
            out_dir = v;
        }
    }

    let corpus = generate(&cfg)?;
    ensure_out_dir(&out_dir)?;
    corpus.write(&out_dir)?;
    eprintln!("generated {} sessions (seed {})", cfg.sessions, cfg.seed);
    eprintln!("wrote corpus to {}", out_dir.display());
    println!(
        "sessions={} seed={} click_model={} out_dir={}",
        cfg.sessions,
        cfg.seed,
        cfg.click_model,
        out_dir.display()
    );
    Ok(())
}

// ---------------------------------------------------------------- infer

#[derive(Args)]
struct InferArgs {
    /// Display log (plans.jsonl) to infer from.
    #[arg(long)]
    plans: Option<PathBuf>,
    /// Fare schedule JSON; bundled city defaults when omitted.
    #[arg(long)]
    fares: Option<PathBuf>,
    /// Directory mapping.json is written to.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// JSON config file; its keys override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct InferFileConfig {
    plans: Option<PathBuf>,
    fares: Option<PathBuf>,
    out_dir: Option<PathBuf>,
}

fn run_infer(args: InferArgs) -> Result<()> {
    let mut plans_path = args.plans;
    let mut fares_path = args.fares;
    let mut out_dir = args.out_dir;
    if let Some(path) = &args.config {
        let file: InferFileConfig = load_file_config(path)?;
        if let Some(v) = file.plans {
            plans_path = Some(v);
        }
        if let Some(v) = file.fares {
            fares_path = Some(v);
        }
        if let Some(v) = file.out_dir {
            out_dir = v;
        }
    }
    let plans_path = plans_path.ok_or_else(|| Error::Config("missing --plans input".into()))?;

    let fares = match &fares_path {
        Some(path) => FareSchedule::from_file(path)?,
        None => FareSchedule::beijing(),
    };
    let plans_bytes = read_input(&plans_path)?;
    let plans = parse_plans(plans_bytes.as_slice())?;
    eprintln!(
        "parsed {} display records ({} lines rejected)",
        plans.records.len(),
        plans.stats.rejected_lines
    );

    let mapping = infer_mapping(&plans.records, &fares)?;
    let resolved = serde_json::json!({
        "command": "infer",
        "fares": fares,
        "input_digests": { "plans": sha256_hex(&plans_bytes) },
    });
    let digest = config_digest(&resolved)?;

    ensure_out_dir(&out_dir)?;
    let mapping_path = out_dir.join("mapping.json");
    mapping.write_file(&mapping_path, Some(&digest))?;
    eprintln!("wrote {}", mapping_path.display());
    for (id, means) in mapping.iter() {
        println!("{id} -> {means}");
    }
    Ok(())
}

// ------------------------------------------------------------- simulate

#[derive(Args)]
struct SimulateArgs {
    /// Query log (queries.jsonl).
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Display log (plans.jsonl).
    #[arg(long)]
    plans: Option<PathBuf>,
    /// Click log (clicks.jsonl).
    #[arg(long)]
    clicks: Option<PathBuf>,
    /// Mode mapping: a JSON file path, or the literal "infer" to recover
    /// it from the displays; bundled default when omitted.
    #[arg(long)]
    mapping: Option<String>,
    /// Emission rate table JSON; bundled rates when omitted.
    #[arg(long)]
    emission_table: Option<PathBuf>,
    /// Fare schedule JSON, used only when mapping is "infer".
    #[arg(long)]
    fares: Option<PathBuf>,
    /// Objective weight per gram of CO2.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Objective weight per second of travel time.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Comma-separated mode ids admitted into the simulation.
    #[arg(long)]
    modes: Option<String>,
    /// Directory the report files are written to.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Representative example rows kept in the report.
    #[arg(long)]
    example_k: Option<usize>,
    /// Example selection rule; top-savings is the only defined rule.
    #[arg(long)]
    example_rule: Option<String>,
    /// Observation period in days for the cycling summary.
    #[arg(long)]
    days: Option<u64>,
    /// Cycling average denominator: cycling-sessions or all-sessions.
    #[arg(long)]
    cycling_denominator: Option<String>,
    /// JSON config file; its keys override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SimulateFileConfig {
    queries: Option<PathBuf>,
    plans: Option<PathBuf>,
    clicks: Option<PathBuf>,
    mapping: Option<String>,
    emission_table: Option<PathBuf>,
    fares: Option<PathBuf>,
    alpha: Option<f64>,
    beta: Option<f64>,
    modes: Option<Vec<u8>>,
    out_dir: Option<PathBuf>,
    example_k: Option<usize>,
    example_rule: Option<String>,
    days: Option<u64>,
    cycling_denominator: Option<String>,
}

#[derive(Debug)]
struct SimulateResolved {
    queries: PathBuf,
    plans: PathBuf,
    clicks: PathBuf,
    mapping: Option<String>,
    emission_table: Option<PathBuf>,
    fares: Option<PathBuf>,
    alpha: f64,
    beta: f64,
    modes: BTreeSet<ModeId>,
    out_dir: PathBuf,
    example_k: usize,
    days: u64,
    denominator: CyclingDenominator,
}

fn parse_mode_list(raw: &str) -> Result<BTreeSet<ModeId>> {
    let mut modes = BTreeSet::new();
    for part in raw.split(',') {
        let part = part.trim();
        let id = part
            .parse::<u8>()
            .ok()
            .and_then(ModeId::new)
            .ok_or_else(|| Error::Config(format!("bad mode id {part:?} in mode list")))?;
        modes.insert(id);
    }
    Ok(modes)
}

fn mode_set_from_ids(ids: &[u8]) -> Result<BTreeSet<ModeId>> {
    ids.iter()
        .map(|&raw| {
            ModeId::new(raw).ok_or_else(|| Error::Config(format!("bad mode id {raw} in mode list")))
        })
        .collect()
}

fn validate_example_rule(rule: &str) -> Result<()> {
    match rule {
        "top_savings" | "top-savings" => Ok(()),
        other => Err(Error::Config(format!(
            "unknown example rule {other:?}; top-savings is the only defined rule"
        ))),
    }
}

fn resolve_simulate(args: SimulateArgs) -> Result<SimulateResolved> {
    let mut queries = args.queries;
    let mut plans = args.plans;
    let mut clicks = args.clicks;
    let mut mapping = args.mapping;
    let mut emission_table = args.emission_table;
    let mut fares = args.fares;
    let mut alpha = args.alpha.unwrap_or(1.0);
    let mut beta = args.beta.unwrap_or(1.0);
    let mut modes = match &args.modes {
        Some(raw) => parse_mode_list(raw)?,
        None => default_mode_filter(),
    };
    let mut out_dir = args.out_dir;
    let mut example_k = args.example_k.unwrap_or(5);
    let mut example_rule = args.example_rule.unwrap_or_else(|| "top_savings".into());
    let mut days = args.days.unwrap_or(1);
    let mut denominator = match &args.cycling_denominator {
        Some(raw) => raw.parse()?,
        None => CyclingDenominator::CyclingSessions,
    };

    if let Some(path) = &args.config {
        let file: SimulateFileConfig = load_file_config(path)?;
        if let Some(v) = file.queries {
            queries = Some(v);
        }
        if let Some(v) = file.plans {
            plans = Some(v);
        }
        if let Some(v) = file.clicks {
            clicks = Some(v);
        }
        if let Some(v) = file.mapping {
            mapping = Some(v);
        }
        if let Some(v) = file.emission_table {
            emission_table = Some(v);
        }
        if let Some(v) = file.fares {
            fares = Some(v);
        }
        if let Some(v) = file.alpha {
            alpha = v;
        }
        if let Some(v) = file.beta {
            beta = v;
        }
        if let Some(v) = file.modes {
            modes = mode_set_from_ids(&v)?;
        }
        if let Some(v) = file.out_dir {
            out_dir = v;
        }
        if let Some(v) = file.example_k {
            example_k = v;
        }
        if let Some(v) = file.example_rule {
            example_rule = v;
        }
        if let Some(v) = file.days {
            days = v;
        }
        if let Some(v) = file.cycling_denominator {
            denominator = v.parse()?;
        }
    }

    validate_example_rule(&example_rule)?;
    if modes.is_empty() {
        return Err(Error::Config("mode list is empty".into()));
    }
    let missing = |name: &str| Error::Config(format!("missing --{name} input"));
    Ok(SimulateResolved {
        queries: queries.ok_or_else(|| missing("queries"))?,
        plans: plans.ok_or_else(|| missing("plans"))?,
        clicks: clicks.ok_or_else(|| missing("clicks"))?,
        mapping,
        emission_table,
        fares,
        alpha,
        beta,
        modes,
        out_dir,
        example_k,
        days,
        denominator,
    })
}

fn write_assignment_file(
    path: &Path,
    instance: &Instance,
    assignment: &Assignment,
    mapping: &ModeMapping,
    digest: &str,
) -> Result<()> {
    let mut out = format!("# config_digest={digest}\n");
    for (i, &j) in assignment.chosen.iter().enumerate() {
        let session = &instance.sessions()[i];
        let clicked = instance.clicked_cell(i);
        let chosen = instance.cell(i, j).expect("chosen entry is defined");
        let row = serde_json::json!({
            "sid": session.sid,
            "clicked_mode": session.clicked_mode_id.get(),
            "clicked_means": mapping.means_of(session.clicked_mode_id),
            "clicked_eta_s": clicked.eta_s,
            "clicked_co2_g": clicked.co2_g,
            "chosen_mode": instance.mode_of_col(j).get(),
            "chosen_means": mapping.means_of(instance.mode_of_col(j)),
            "chosen_eta_s": chosen.eta_s,
            "chosen_co2_g": chosen.co2_g,
        });
        out.push_str(&row.to_string());
        out.push('\n');
    }
    write_text(path, &out)
}

fn run_simulate(args: SimulateArgs) -> Result<()> {
    let resolved = resolve_simulate(args)?;

    let queries_bytes = read_input(&resolved.queries)?;
    let plans_bytes = read_input(&resolved.plans)?;
    let clicks_bytes = read_input(&resolved.clicks)?;
    let queries = parse_queries(queries_bytes.as_slice())?;
    let plans = parse_plans(plans_bytes.as_slice())?;
    let clicks = parse_clicks(clicks_bytes.as_slice())?;
    eprintln!(
        "parsed {} queries, {} displays, {} clicks",
        queries.records.len(),
        plans.records.len(),
        clicks.records.len()
    );

    let mut fares_used: Option<FareSchedule> = None;
    let (mapping, mapping_source) = match resolved.mapping.as_deref() {
        None => (ModeMapping::bundled_default(), "default"),
        Some("infer") => {
            let fares = match &resolved.fares {
                Some(path) => FareSchedule::from_file(path)?,
                None => FareSchedule::beijing(),
            };
            let mapping = infer_mapping(&plans.records, &fares)?;
            fares_used = Some(fares);
            (mapping, "infer")
        }
        Some(path) => (ModeMapping::from_file(Path::new(path))?, "file"),
    };
    let table = match &resolved.emission_table {
        Some(path) => EmissionTable::from_file(path)?,
        None => EmissionTable::default(),
    };

    let (sessions, join_diag) = join_sessions(
        &queries.records,
        &plans.records,
        &clicks.records,
        &resolved.modes,
    );
    eprintln!(
        "joined {} sessions ({} dropped)",
        sessions.len(),
        join_diag.total_dropped()
    );
    if sessions.is_empty() {
        return Err(Error::EmptySimulation);
    }

    let instance = build_instance(&sessions, &mapping, &table, resolved.alpha, resolved.beta)?;
    let solution = solve(&instance);
    eprintln!(
        "solved {} sessions: objective {:.3} (baseline {:.3})",
        instance.m(),
        solution.objective,
        instance.baseline_objective()
    );

    let mut input_digests = BTreeMap::new();
    input_digests.insert("queries".to_string(), sha256_hex(&queries_bytes));
    input_digests.insert("plans".to_string(), sha256_hex(&plans_bytes));
    input_digests.insert("clicks".to_string(), sha256_hex(&clicks_bytes));
    let config_echo = serde_json::json!({
        "command": "simulate",
        "alpha": resolved.alpha,
        "beta": resolved.beta,
        "modes": resolved.modes.iter().map(|m| m.get()).collect::<Vec<u8>>(),
        "mapping_source": mapping_source,
        "mapping": mapping,
        "fares": fares_used,
        "emission_table": table,
        "example_k": resolved.example_k,
        "example_rule": "top_savings",
        "days": resolved.days,
        "cycling_denominator": resolved.denominator,
        "input_digests": input_digests,
    });
    let digest = config_digest(&config_echo)?;
    let metadata = RunMetadata {
        config_digest: digest.clone(),
        config: config_echo,
        input_digests,
        stats_conventions: StatsConventions::default(),
        diagnostics: serde_json::json!({
            "parse": {
                "queries": queries.stats,
                "plans": plans.stats,
                "clicks": clicks.stats,
            },
            "join": join_diag,
        }),
    };

    let report = report::build_report(
        &instance,
        &solution.assignment,
        &mapping,
        resolved.example_k,
        resolved.days,
        resolved.denominator,
        metadata,
    )?;

    ensure_out_dir(&resolved.out_dir)?;
    let out = |name: &str| resolved.out_dir.join(name);
    let mut report_json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::Domain(format!("report serialization failed: {e}")))?;
    report_json.push('\n');
    write_text(&out("report.json"), &report_json)?;
    report::write_co2_table(&out("table2.csv"), &report)?;
    report::write_time_table(&out("table3.csv"), &report)?;
    report::write_mode_change_table(&out("table4.csv"), &report)?;
    report::write_examples_table(&out("table5.csv"), &report)?;

    let mut geojson = report::export_geojson(&instance, &solution.assignment, &mapping);
    geojson
        .as_object_mut()
        .expect("feature collection is an object")
        .insert("config_digest".into(), digest.clone().into());
    let mut geojson_text = serde_json::to_string_pretty(&geojson)
        .map_err(|e| Error::Domain(format!("geometry serialization failed: {e}")))?;
    geojson_text.push('\n');
    write_text(&out("changes.geojson"), &geojson_text)?;

    write_assignment_file(
        &out("assignment.jsonl"),
        &instance,
        &solution.assignment,
        &mapping,
        &digest,
    )?;
    eprintln!("wrote 7 report files to {}", resolved.out_dir.display());

    println!(
        "sessions={} changed={} co2_reduction={:.2}% time_reduction={:.2}%",
        report.sessions,
        report.sessions_changed,
        report.co2.reduction_pct,
        report.travel_time.reduction_pct
    );
    println!(
        "cycling_minutes_per_day={:.2} config_digest={}",
        report.cycling.mean_minutes_per_day, digest
    );
    Ok(())
}

// --------------------------------------------------------------- impact

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ImpactArgs {
    /// Observed CO2 reduction as a fraction in [0, 1].
    #[arg(long)]
    reduction: Option<f64>,
    /// National yearly transport CO2 in megatonnes.
    #[arg(long)]
    national_mt: Option<f64>,
    /// Average cycling minutes per day under the optimized assignment.
    #[arg(long)]
    cycling_min: Option<f64>,
    /// Metabolic equivalent assumed for cycling.
    #[arg(long)]
    met: Option<f64>,
    /// Physical-activity recommendation in MET-hours.
    #[arg(long)]
    recommendation: Option<f64>,
    /// Mortality risk reduction at the full recommendation, percent.
    #[arg(long)]
    full_benefit_pct: Option<f64>,
    /// Directory impact.json is written to.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// JSON config file; its keys override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ImpactFileConfig {
    reduction: Option<f64>,
    national_mt: Option<f64>,
    cycling_min: Option<f64>,
    met: Option<f64>,
    recommendation: Option<f64>,
    full_benefit_pct: Option<f64>,
    out_dir: Option<PathBuf>,
}

fn run_impact(args: ImpactArgs) -> Result<()> {
    let mut inputs = ImpactInputs::default();
    let mut out_dir = args.out_dir;
    if let Some(v) = args.reduction {
        inputs.reduction_fraction = v;
    }
    if let Some(v) = args.national_mt {
        inputs.national_transport_co2_mt = v;
    }
    if let Some(v) = args.cycling_min {
        inputs.cycling_min_per_day = v;
    }
    if let Some(v) = args.met {
        inputs.met_factor = v;
    }
    if let Some(v) = args.recommendation {
        inputs.recommendation_meth = v;
    }
    if let Some(v) = args.full_benefit_pct {
        inputs.full_benefit_pct = v;
    }
    if let Some(path) = &args.config {
        let file: ImpactFileConfig = load_file_config(path)?;
        if let Some(v) = file.reduction {
            inputs.reduction_fraction = v;
        }
        if let Some(v) = file.national_mt {
            inputs.national_transport_co2_mt = v;
        }
        if let Some(v) = file.cycling_min {
            inputs.cycling_min_per_day = v;
        }
        if let Some(v) = file.met {
            inputs.met_factor = v;
        }
        if let Some(v) = file.recommendation {
            inputs.recommendation_meth = v;
        }
        if let Some(v) = file.full_benefit_pct {
            inputs.full_benefit_pct = v;
        }
        if let Some(v) = file.out_dir {
            out_dir = v;
        }
    }

    let estimate = estimate_impact(&inputs)?;
    if estimate.exceeds_recommendation {
        eprintln!(
            "warning: activity dose exceeds the recommendation; linear model reported unclamped"
        );
    }
    let resolved = serde_json::json!({ "command": "impact", "inputs": inputs });
    let digest = config_digest(&resolved)?;
    let doc = serde_json::json!({
        "config_digest": digest,
        "inputs": inputs,
        "estimate": estimate,
    });
    ensure_out_dir(&out_dir)?;
    let path = out_dir.join("impact.json");
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::Domain(format!("impact serialization failed: {e}")))?;
    text.push('\n');
    write_text(&path, &text)?;
    eprintln!("wrote {}", path.display());

    println!(
        "national_reduction_mt={:.2} meth={:.3} pct_of_recommendation={:.2} risk_reduction_pct={:.2}",
        estimate.national_reduction_mt,
        estimate.meth_per_week,
        estimate.pct_of_recommendation,
        estimate.mortality_risk_reduction_pct
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_list_parses_and_validates() {
        let modes = parse_mode_list("1, 2,11").unwrap();
        let ids: Vec<u8> = modes.iter().map(|m| m.get()).collect();
        assert_eq!(ids, [1, 2, 11]);
        assert!(parse_mode_list("0").is_err());
        assert!(parse_mode_list("1,twelve").is_err());
        assert!(parse_mode_list("12").is_err());
    }

    #[test]
    fn example_rule_accepts_both_spellings_only() {
        assert!(validate_example_rule("top_savings").is_ok());
        assert!(validate_example_rule("top-savings").is_ok());
        assert!(validate_example_rule("random").is_err());
    }

    fn simulate_args() -> SimulateArgs {
        SimulateArgs {
            queries: Some("q.jsonl".into()),
            plans: Some("p.jsonl".into()),
            clicks: Some("c.jsonl".into()),
            mapping: None,
            emission_table: None,
            fares: None,
            alpha: Some(0.5),
            beta: None,
            modes: Some("1,2".into()),
            out_dir: "out".into(),
            example_k: None,
            example_rule: None,
            days: None,
            cycling_denominator: None,
            config: None,
        }
    }

    #[test]
    fn simulate_flags_resolve_with_defaults() {
        let resolved = resolve_simulate(simulate_args()).unwrap();
        assert_eq!(resolved.alpha, 0.5);
        assert_eq!(resolved.beta, 1.0);
        assert_eq!(resolved.example_k, 5);
        assert_eq!(resolved.days, 1);
        assert_eq!(resolved.denominator, CyclingDenominator::CyclingSessions);
        assert_eq!(resolved.modes.len(), 2);
    }

    #[test]
    fn config_file_overrides_flags() {
        let dir = tempfile::tempdir().unwrap();
        let config_path = dir.path().join("run.json");
        std::fs::write(
            &config_path,
            r#"{"alpha": 2.0, "modes": [1, 2, 3], "days": 7}"#,
        )
        .unwrap();
        let mut args = simulate_args();
        args.config = Some(config_path);
        let resolved = resolve_simulate(args).unwrap();
        assert_eq!(resolved.alpha, 2.0);
        assert_eq!(resolved.modes.len(), 3);
        assert_eq!(resolved.days, 7);
        // Flags not named in the file keep their values.
        assert_eq!(resolved.beta, 1.0);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let config_path = dir.path().join("run.json");
        std::fs::write(&config_path, r#"{"alhpa": 2.0}"#).unwrap();
        let mut args = simulate_args();
        args.config = Some(config_path);
        assert!(matches!(resolve_simulate(args), Err(Error::Config(_))));
    }

    #[test]
    fn missing_inputs_are_config_errors() {
        let mut args = simulate_args();
        args.clicks = None;
        let err = resolve_simulate(args).unwrap_err();
        assert!(err.to_string().contains("clicks"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
