//! Evaluation artifacts: CO2 and travel-time comparisons, the mode-change
//! matrix, representative example rows, and map geometry.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::modes::{ModeMapping, TransportMeans};
use crate::optimizer::{verify_assignment, Assignment, Instance};

/// Compensated (Kahan) sum; partial aggregation over chunks agrees with a
/// single pass to well under 1e-9 relative.
pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Summary statistics over one per-session quantity.
///
/// The median is the lower-middle element for even counts and the standard
/// deviation is the population one; both conventions are echoed in the
/// report metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonStats {
    pub total: f64,
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
}

impl ComparisonStats {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySimulation);
        }
        let m = values.len() as f64;
        let total = kahan_sum(values.iter().copied());
        let mean = total / m;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[(sorted.len() - 1) / 2];
        let variance = kahan_sum(values.iter().map(|v| (v - mean) * (v - mean))) / m;
        Ok(ComparisonStats {
            total,
            mean,
            median,
            stddev: variance.sqrt(),
        })
    }
}

/// Baseline-vs-optimized stats with the headline reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonBlock {
    pub baseline: ComparisonStats,
    pub optimized: ComparisonStats,
    /// 100 x (baseline total - optimized total) / baseline total;
    /// 0 when the baseline total is 0.
    pub reduction_pct: f64,
}

impl ComparisonBlock {
    fn new(baseline: ComparisonStats, optimized: ComparisonStats) -> Self {
        let reduction_pct = if baseline.total == 0.0 {
            0.0
        } else {
            100.0 * (baseline.total - optimized.total) / baseline.total
        };
        ComparisonBlock {
            baseline,
            optimized,
            reduction_pct,
        }
    }
}

/// Per-session CO2 grams of the clicked modes vs the optimized ones.
///
/// The assignment must already be verified against the instance.
pub fn compare_emissions(instance: &Instance, assignment: &Assignment) -> Result<ComparisonBlock> {
    if instance.m() == 0 {
        return Err(Error::EmptySimulation);
    }
    let baseline: Vec<f64> = (0..instance.m())
        .map(|i| instance.clicked_cell(i).co2_g)
        .collect();
    let optimized: Vec<f64> = assignment
        .chosen
        .iter()
        .enumerate()
        .map(|(i, &j)| instance.cell(i, j).expect("chosen entry is defined").co2_g)
        .collect();
    Ok(ComparisonBlock::new(
        ComparisonStats::from_values(&baseline)?,
        ComparisonStats::from_values(&optimized)?,
    ))
}

/// Per-session travel seconds of the clicked modes vs the optimized ones.
pub fn compare_times(instance: &Instance, assignment: &Assignment) -> Result<ComparisonBlock> {
    if instance.m() == 0 {
        return Err(Error::EmptySimulation);
    }
    let baseline: Vec<f64> = (0..instance.m())
        .map(|i| instance.clicked_cell(i).eta_s as f64)
        .collect();
    let optimized: Vec<f64> = assignment
        .chosen
        .iter()
        .enumerate()
        .map(|(i, &j)| instance.cell(i, j).expect("chosen entry is defined").eta_s as f64)
        .collect();
    Ok(ComparisonBlock::new(
        ComparisonStats::from_values(&baseline)?,
        ComparisonStats::from_values(&optimized)?,
    ))
}

/// Counts of (baseline means, optimized means) transitions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModeChangeMatrix {
    counts: BTreeMap<(TransportMeans, TransportMeans), usize>,
}

impl ModeChangeMatrix {
    pub fn count(&self, baseline: TransportMeans, optimized: TransportMeans) -> usize {
        self.counts
            .get(&(baseline, optimized))
            .copied()
            .unwrap_or(0)
    }

    /// Sum over all cells; equals the session count.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Sessions whose mode changed.
    pub fn off_diagonal(&self) -> usize {
        self.counts
            .iter()
            .filter(|((b, o), _)| b != o)
            .map(|(_, &c)| c)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TransportMeans, TransportMeans, usize)> + '_ {
        self.counts.iter().map(|(&(b, o), &c)| (b, o, c))
    }

    fn cells(&self) -> Vec<ModeChangeCell> {
        self.iter()
            .map(|(baseline, optimized, count)| ModeChangeCell {
                baseline,
                optimized,
                count,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModeChangeCell {
    pub baseline: TransportMeans,
    pub optimized: TransportMeans,
    pub count: usize,
}

/// Tallies baseline-to-optimized means transitions over all sessions.
pub fn mode_change_matrix(
    instance: &Instance,
    assignment: &Assignment,
    mapping: &ModeMapping,
) -> ModeChangeMatrix {
    let mut matrix = ModeChangeMatrix::default();
    for (i, &j) in assignment.chosen.iter().enumerate() {
        let baseline = mapping.means_of(instance.sessions()[i].clicked_mode_id);
        let optimized = mapping.means_of(instance.mode_of_col(j));
        *matrix.counts.entry((baseline, optimized)).or_insert(0) += 1;
    }
    matrix
}

/// One representative session for the example table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleRow {
    pub sid: String,
    pub baseline_mode: TransportMeans,
    pub baseline_co2_g: f64,
    pub baseline_eta_s: u64,
    pub optimized_mode: TransportMeans,
    pub optimized_co2_g: f64,
    pub optimized_eta_s: u64,
}

impl ExampleRow {
    pub fn co2_saved_g(&self) -> f64 {
        self.baseline_co2_g - self.optimized_co2_g
    }

    pub fn time_saved_s(&self) -> i64 {
        self.baseline_eta_s as i64 - self.optimized_eta_s as i64
    }
}

/// Selects the `k` sessions with the largest CO2 savings, sid order within
/// equal savings.
pub fn example_rows(
    instance: &Instance,
    assignment: &Assignment,
    mapping: &ModeMapping,
    k: usize,
) -> Vec<ExampleRow> {
    let mut rows: Vec<ExampleRow> = assignment
        .chosen
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let session = &instance.sessions()[i];
            let baseline = instance.clicked_cell(i);
            let optimized = instance.cell(i, j).expect("chosen entry is defined");
            ExampleRow {
                sid: session.sid.clone(),
                baseline_mode: mapping.means_of(session.clicked_mode_id),
                baseline_co2_g: baseline.co2_g,
                baseline_eta_s: baseline.eta_s,
                optimized_mode: mapping.means_of(instance.mode_of_col(j)),
                optimized_co2_g: optimized.co2_g,
                optimized_eta_s: optimized.eta_s,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        b.co2_saved_g()
            .total_cmp(&a.co2_saved_g())
            .then_with(|| a.sid.cmp(&b.sid))
    });
    rows.truncate(k);
    rows
}

/// GeoJSON FeatureCollection with one origin-to-destination LineString per
/// session, annotated with the mode change and the savings.
pub fn export_geojson(
    instance: &Instance,
    assignment: &Assignment,
    mapping: &ModeMapping,
) -> serde_json::Value {
    let features: Vec<serde_json::Value> = assignment
        .chosen
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let session = &instance.sessions()[i];
            let baseline = instance.clicked_cell(i);
            let optimized = instance.cell(i, j).expect("chosen entry is defined");
            let baseline_means = mapping.means_of(session.clicked_mode_id);
            let optimized_means = mapping.means_of(instance.mode_of_col(j));
            json!({
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [
                        [session.origin.lng, session.origin.lat],
                        [session.destination.lng, session.destination.lat],
                    ],
                },
                "properties": {
                    "sid": session.sid,
                    "baseline": baseline_means,
                    "optimized": optimized_means,
                    "co2_saved_g": baseline.co2_g - optimized.co2_g,
                    "time_saved_s": baseline.eta_s as i64 - optimized.eta_s as i64,
                    "changed": baseline_means != optimized_means,
                    "degenerate": session.degenerate_od(),
                },
            })
        })
        .collect();
    json!({
        "type": "FeatureCollection",
        "features": features,
    })
}

/// Conventions baked into the statistics, echoed for auditability.
#[derive(Debug, Clone, Serialize)]
pub struct StatsConventions {
    pub stddev: &'static str,
    pub median: &'static str,
}

impl Default for StatsConventions {
    fn default() -> Self {
        StatsConventions {
            stddev: "population",
            median: "lower_middle",
        }
    }
}

/// Run provenance: the resolved configuration, its digest, and input
/// digests. Contains no paths or timestamps, so identical runs serialize
/// to identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub config_digest: String,
    pub config: serde_json::Value,
    pub input_digests: BTreeMap<String, String>,
    pub stats_conventions: StatsConventions,
    pub diagnostics: serde_json::Value,
}

impl RunMetadata {
    /// Placeholder metadata for library-only runs.
    pub fn unspecified() -> Self {
        RunMetadata {
            config_digest: String::new(),
            config: serde_json::Value::Null,
            input_digests: BTreeMap::new(),
            stats_conventions: StatsConventions::default(),
            diagnostics: serde_json::Value::Null,
        }
    }
}

/// Cycling exposure of the optimized assignment, input to the health
/// impact arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CyclingSummary {
    pub sessions: usize,
    pub total_eta_s: u64,
    pub mean_minutes_per_day: f64,
    pub denominator: String,
    pub days: u64,
}

/// The full structured report: everything the tables and the map are
/// generated from, at full precision.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub sessions: usize,
    pub sessions_changed: usize,
    pub co2: ComparisonBlock,
    pub travel_time: ComparisonBlock,
    pub mode_changes: Vec<ModeChangeCell>,
    pub examples: Vec<ExampleRow>,
    pub cycling: CyclingSummary,
    pub metadata: RunMetadata,
}

/// Assembles the full report. Verifies the assignment first and refuses
/// empty simulations.
pub fn build_report(
    instance: &Instance,
    assignment: &Assignment,
    mapping: &ModeMapping,
    example_k: usize,
    days: u64,
    denominator: crate::impact::CyclingDenominator,
    metadata: RunMetadata,
) -> Result<SimulationReport> {
    if instance.m() == 0 {
        return Err(Error::EmptySimulation);
    }
    let violations = verify_assignment(instance, assignment);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::Domain(format!(
            "assignment fails verification: {}",
            list.join("; ")
        )));
    }
    let matrix = mode_change_matrix(instance, assignment, mapping);
    let cycling = crate::impact::cycling_summary(instance, assignment, mapping, days, denominator)?;
    Ok(SimulationReport {
        sessions: instance.m(),
        sessions_changed: matrix.off_diagonal(),
        co2: compare_emissions(instance, assignment)?,
        travel_time: compare_times(instance, assignment)?,
        mode_changes: matrix.cells(),
        examples: example_rows(instance, assignment, mapping, example_k),
        cycling,
        metadata,
    })
}

fn open_with_digest_comment(path: &Path, digest: &str) -> Result<std::fs::File> {
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    writeln!(file, "# config_digest={digest}").map_err(|e| Error::io(path, e))?;
    Ok(file)
}

/// Writes the CO2 comparison table (totals in tonnes, rest in grams,
/// two decimals).
pub fn write_co2_table(path: &Path, report: &SimulationReport) -> Result<()> {
    let file = open_with_digest_comment(path, &report.metadata.config_digest)?;
    let mut w = csv::Writer::from_writer(file);
    let io_err = |e: csv::Error| Error::Domain(format!("csv write failed: {e}"));
    w.write_record(["method", "total_t", "avg_g", "median_g", "sd_g"])
        .map_err(io_err)?;
    for (method, stats) in [
        ("baseline", report.co2.baseline),
        ("optimized", report.co2.optimized),
    ] {
        w.write_record([
            method.to_string(),
            format!("{:.2}", stats.total / 1e6),
            format!("{:.2}", stats.mean),
            format!("{:.2}", stats.median),
            format!("{:.2}", stats.stddev),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Writes the travel-time comparison table (seconds, two decimals).
pub fn write_time_table(path: &Path, report: &SimulationReport) -> Result<()> {
    let file = open_with_digest_comment(path, &report.metadata.config_digest)?;
    let mut w = csv::Writer::from_writer(file);
    let io_err = |e: csv::Error| Error::Domain(format!("csv write failed: {e}"));
    w.write_record(["method", "avg_s", "median_s", "sd_s"])
        .map_err(io_err)?;
    for (method, stats) in [
        ("baseline", report.travel_time.baseline),
        ("optimized", report.travel_time.optimized),
    ] {
        w.write_record([
            method.to_string(),
            format!("{:.2}", stats.mean),
            format!("{:.2}", stats.median),
            format!("{:.2}", stats.stddev),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Writes the mode-change matrix; pairs that never occur are omitted.
pub fn write_mode_change_table(path: &Path, report: &SimulationReport) -> Result<()> {
    let file = open_with_digest_comment(path, &report.metadata.config_digest)?;
    let mut w = csv::Writer::from_writer(file);
    let io_err = |e: csv::Error| Error::Domain(format!("csv write failed: {e}"));
    w.write_record(["baseline", "optimized", "count"])
        .map_err(io_err)?;
    for cell in &report.mode_changes {
        w.write_record([
            serde_plain_means(cell.baseline),
            serde_plain_means(cell.optimized),
            cell.count.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Writes the representative example rows (grams at three decimals).
pub fn write_examples_table(path: &Path, report: &SimulationReport) -> Result<()> {
    let file = open_with_digest_comment(path, &report.metadata.config_digest)?;
    let mut w = csv::Writer::from_writer(file);
    let io_err = |e: csv::Error| Error::Domain(format!("csv write failed: {e}"));
    w.write_record([
        "sid",
        "baseline_mode",
        "baseline_co2_g",
        "baseline_eta_s",
        "optimized_mode",
        "optimized_co2_g",
        "optimized_eta_s",
    ])
    .map_err(io_err)?;
    for row in &report.examples {
        w.write_record([
            row.sid.clone(),
            serde_plain_means(row.baseline_mode),
            format!("{:.3}", row.baseline_co2_g),
            row.baseline_eta_s.to_string(),
            serde_plain_means(row.optimized_mode),
            format!("{:.3}", row.optimized_co2_g),
            row.optimized_eta_s.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn serde_plain_means(means: TransportMeans) -> String {
    serde_json::to_value(means)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .expect("means serializes as a string")
}
