//! Deterministic generation of synthetic search-log corpora.
//!
//! Every generated corpus carries its own ground truth (the mode mapping
//! and fare schedule it was built from), so inference and the full
//! pipeline can be exercised end to end and checked for exact recovery.
//! Trips are straight-line distances scaled by a per-means detour factor;
//! travel times realize speeds inside configured per-means bands; prices
//! follow the fare schedule with bounded uniform noise. All randomness
//! comes from one seeded stream, so a config reproduces identical bytes.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digest::config_digest;
use crate::error::{Error, Result};
use crate::ingest::{GeoPoint, ModeId, PlanOption};
use crate::modes::{FareSchedule, ModeMapping, TransportMeans};

/// Inclusive speed range one means may realize, meters per second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedBand {
    pub min_mps: f64,
    pub max_mps: f64,
}

impl SpeedBand {
    pub fn contains(&self, speed_mps: f64) -> bool {
        (self.min_mps..=self.max_mps).contains(&speed_mps)
    }
}

/// Rectangle origins and destinations are sampled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdBox {
    pub min_lat: f64,
    pub max_lat: f64,
    pub min_lng: f64,
    pub max_lng: f64,
}

/// How the synthetic user picks a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClickModel {
    /// Lowest travel time, mode id breaking ties.
    Fastest,
    /// Lowest price, unpriced plans counting as free.
    Cheapest,
    /// Uniformly random among the displayed plans.
    Uniform,
    /// The bus whenever displayed, uniform otherwise.
    StickyBus,
}

impl std::str::FromStr for ClickModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fastest" => Ok(ClickModel::Fastest),
            "cheapest" => Ok(ClickModel::Cheapest),
            "uniform" => Ok(ClickModel::Uniform),
            "sticky-bus" => Ok(ClickModel::StickyBus),
            other => Err(Error::Config(format!(
                "unknown click model {other:?}; use fastest, cheapest, uniform or sticky-bus"
            ))),
        }
    }
}

impl std::fmt::Display for ClickModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ClickModel::Fastest => "fastest",
            ClickModel::Cheapest => "cheapest",
            ClickModel::Uniform => "uniform",
            ClickModel::StickyBus => "sticky-bus",
        };
        f.write_str(name)
    }
}

/// Full generator configuration; also the corpus's ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub sessions: usize,
    pub seed: u64,
    pub click_model: ClickModel,
    pub mapping: ModeMapping,
    pub fares: FareSchedule,
    pub speed_bands: BTreeMap<TransportMeans, SpeedBand>,
    /// Ratio of routed distance to straight-line distance, at least 1.
    pub detour_factors: BTreeMap<TransportMeans, f64>,
    /// Probability that a means appears among a session's plans.
    pub display_probs: BTreeMap<TransportMeans, f64>,
    pub od_box: OdBox,
    /// Sampled pairs closer than this straight-line distance are redrawn.
    pub min_trip_m: f64,
    /// Half-width of the uniform price noise, percent of the true fare.
    pub price_noise_pct: f64,
}

fn band_map(entries: [(TransportMeans, f64, f64); 8]) -> BTreeMap<TransportMeans, SpeedBand> {
    entries
        .into_iter()
        .map(|(m, min_mps, max_mps)| (m, SpeedBand { min_mps, max_mps }))
        .collect()
}

impl Default for SynthConfig {
    fn default() -> Self {
        use TransportMeans::*;
        SynthConfig {
            sessions: 0,
            seed: 0,
            click_model: ClickModel::StickyBus,
            mapping: ModeMapping::bundled_default(),
            fares: FareSchedule::beijing(),
            speed_bands: band_map([
                (Walking, 1.0, 1.6),
                (Cycling, 3.0, 5.0),
                (Driving, 7.0, 14.0),
                (Bus, 4.0, 8.0),
                (Subway, 8.0, 16.0),
                (Taxi, 6.0, 12.0),
                (BusAndSubway, 6.0, 12.0),
                (BusAndShareCycle, 3.5, 7.0),
            ]),
            detour_factors: [
                (Walking, 1.2),
                (Cycling, 1.3),
                (Driving, 1.5),
                (Bus, 1.6),
                (Subway, 1.3),
                (Taxi, 1.5),
                (BusAndSubway, 1.4),
                (BusAndShareCycle, 1.55),
            ]
            .into_iter()
            .collect(),
            display_probs: [
                (Walking, 0.60),
                (Cycling, 0.65),
                (Driving, 0.75),
                (Bus, 0.90),
                (Subway, 0.70),
                (Taxi, 0.65),
                (BusAndSubway, 0.55),
                (BusAndShareCycle, 0.06),
            ]
            .into_iter()
            .collect(),
            od_box: OdBox {
                min_lat: 39.70,
                max_lat: 40.20,
                min_lng: 116.10,
                max_lng: 116.70,
            },
            min_trip_m: 500.0,
            price_noise_pct: 10.0,
        }
    }
}

impl SynthConfig {
    /// Checks every invariant the generator relies on. Nothing is written
    /// when this fails.
    pub fn validate(&self) -> Result<()> {
        self.fares.validate()?;
        if !(self.min_trip_m.is_finite() && self.min_trip_m >= 1.0) {
            return Err(Error::Config("min_trip_m must be at least 1 meter".into()));
        }
        if !(self.price_noise_pct.is_finite() && (0.0..=50.0).contains(&self.price_noise_pct)) {
            return Err(Error::Config("price_noise_pct must lie in [0, 50]".into()));
        }
        for means in TransportMeans::ALL_KNOWN {
            let band = self
                .speed_bands
                .get(&means)
                .ok_or_else(|| Error::Config(format!("no speed band for {means}")))?;
            if !(band.min_mps.is_finite()
                && band.max_mps.is_finite()
                && band.min_mps > 0.0
                && band.min_mps < band.max_mps)
            {
                return Err(Error::Config(format!(
                    "speed band for {means} must satisfy 0 < min < max"
                )));
            }
            let detour = *self
                .detour_factors
                .get(&means)
                .ok_or_else(|| Error::Config(format!("no detour factor for {means}")))?;
            if !(detour.is_finite() && detour >= 1.0) {
                return Err(Error::Config(format!(
                    "detour factor for {means} must be at least 1"
                )));
            }
            let prob = *self
                .display_probs
                .get(&means)
                .ok_or_else(|| Error::Config(format!("no display probability for {means}")))?;
            if !(prob.is_finite() && (0.0..=1.0).contains(&prob)) {
                return Err(Error::Config(format!(
                    "display probability for {means} must lie in [0, 1]"
                )));
            }
            // The integer travel time needs at least a few candidate values
            // inside the band at the shortest allowed trip, otherwise
            // rounding could push realized speeds out of the band.
            let shortest = self.min_trip_m * detour;
            if shortest * (1.0 / band.min_mps - 1.0 / band.max_mps) < 3.0 {
                return Err(Error::Config(format!(
                    "speed band for {means} is too narrow for trips of {shortest:.0} m"
                )));
            }
        }

        // The unpriced means are recovered downstream by ordering their
        // mean speeds, so their bands must not overlap.
        use TransportMeans::{Cycling, Driving, Walking};
        let mut unpriced: Vec<(TransportMeans, SpeedBand)> = [Walking, Cycling, Driving]
            .into_iter()
            .map(|m| (m, self.speed_bands[&m]))
            .collect();
        unpriced.sort_by(|a, b| a.1.min_mps.total_cmp(&b.1.min_mps));
        for pair in unpriced.windows(2) {
            if pair[0].1.max_mps >= pair[1].1.min_mps {
                return Err(Error::Config(format!(
                    "speed bands for {} and {} overlap; the unpriced means must stay separable",
                    pair[0].0, pair[1].0
                )));
            }
        }

        let low = GeoPoint::new(self.od_box.min_lat, self.od_box.min_lng);
        let high = GeoPoint::new(self.od_box.max_lat, self.od_box.max_lng);
        let (Some(low), Some(high)) = (low, high) else {
            return Err(Error::Config(
                "od box corners are outside valid coordinates".into(),
            ));
        };
        if self.od_box.min_lat >= self.od_box.max_lat || self.od_box.min_lng >= self.od_box.max_lng
        {
            return Err(Error::Config("od box must have positive extent".into()));
        }
        if haversine_m(low, high) < 2.0 * self.min_trip_m {
            return Err(Error::Config(
                "od box is too small for the minimum trip distance".into(),
            ));
        }
        Ok(())
    }
}

const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Great-circle distance in meters.
pub fn haversine_m(a: GeoPoint, b: GeoPoint) -> f64 {
    let lat_a = a.lat.to_radians();
    let lat_b = b.lat.to_radians();
    let dlat = (b.lat - a.lat).to_radians();
    let dlng = (b.lng - a.lng).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat_a.cos() * lat_b.cos() * (dlng / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().asin()
}

/// One generated corpus, ready to write or parse back.
///
/// The jsonl members start with a `# config_digest=` header line; the
/// ground truth document echoes the full configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub queries_jsonl: String,
    pub plans_jsonl: String,
    pub clicks_jsonl: String,
    pub ground_truth_json: String,
}

impl Corpus {
    /// Writes `queries.jsonl`, `plans.jsonl`, `clicks.jsonl` and
    /// `ground_truth.json` into `out_dir`, creating it if needed.
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        let files = [
            ("queries.jsonl", &self.queries_jsonl),
            ("plans.jsonl", &self.plans_jsonl),
            ("clicks.jsonl", &self.clicks_jsonl),
            ("ground_truth.json", &self.ground_truth_json),
        ];
        for (name, content) in files {
            let path = out_dir.join(name);
            std::fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

fn sample_od(config: &SynthConfig, rng: &mut ChaCha8Rng) -> Result<(GeoPoint, GeoPoint, f64)> {
    for _ in 0..10_000 {
        let origin = GeoPoint::new(
            rng.gen_range(config.od_box.min_lat..=config.od_box.max_lat),
            rng.gen_range(config.od_box.min_lng..=config.od_box.max_lng),
        )
        .expect("od box is validated");
        let destination = GeoPoint::new(
            rng.gen_range(config.od_box.min_lat..=config.od_box.max_lat),
            rng.gen_range(config.od_box.min_lng..=config.od_box.max_lng),
        )
        .expect("od box is validated");
        let straight_m = haversine_m(origin, destination);
        if straight_m >= config.min_trip_m {
            return Ok((origin, destination, straight_m));
        }
    }
    Err(Error::Domain(
        "could not sample a trip meeting the minimum distance; od box too small".into(),
    ))
}

fn synth_option(
    config: &SynthConfig,
    mode_id: ModeId,
    means: TransportMeans,
    straight_m: f64,
    rng: &mut ChaCha8Rng,
) -> PlanOption {
    let band = config.speed_bands[&means];
    let detour = config.detour_factors[&means];
    let distance_m = ((straight_m * detour).round() as u64).max(1);

    // Integer seconds keeping the realized speed distance/eta inside the
    // band: the largest eta still at least min speed, the smallest still
    // at most max speed.
    let eta_min = ((distance_m as f64 / band.max_mps).ceil() as u64).max(1);
    let eta_max = ((distance_m as f64 / band.min_mps).floor() as u64).max(eta_min);
    let speed = rng.gen_range(band.min_mps..band.max_mps);
    let eta_s = ((distance_m as f64 / speed).round() as u64).clamp(eta_min, eta_max);

    let noise_unit: f64 = rng.gen_range(-1.0..=1.0);
    let price = config
        .fares
        .predicted_fare(means, distance_m as f64 / 1000.0)
        .map(|fare| {
            let noisy = fare * (1.0 + noise_unit * config.price_noise_pct / 100.0);
            noisy.round().max(0.0) as i64
        });
    PlanOption {
        mode_id,
        distance_m,
        eta_s,
        price,
    }
}

fn pick_click(config: &SynthConfig, options: &[PlanOption], rng: &mut ChaCha8Rng) -> ModeId {
    match config.click_model {
        ClickModel::Fastest => {
            options
                .iter()
                .min_by_key(|o| (o.eta_s, o.mode_id))
                .expect("options nonempty")
                .mode_id
        }
        ClickModel::Cheapest => {
            options
                .iter()
                .min_by_key(|o| (o.price.unwrap_or(0), o.mode_id))
                .expect("options nonempty")
                .mode_id
        }
        ClickModel::Uniform => options[rng.gen_range(0..options.len())].mode_id,
        ClickModel::StickyBus => {
            let bus = config
                .mapping
                .mode_for(TransportMeans::Bus)
                .expect("mapping is total");
            match options.iter().find(|o| o.mode_id == bus) {
                Some(o) => o.mode_id,
                None => options[rng.gen_range(0..options.len())].mode_id,
            }
        }
    }
}

fn plan_value(option: &PlanOption) -> serde_json::Value {
    let mut v = serde_json::json!({
        "mode": option.mode_id.get(),
        "dist": option.distance_m,
        "eta": option.eta_s,
    });
    if let Some(price) = option.price {
        v["price"] = price.into();
    }
    v
}

/// Generates a corpus: one query, display and click line per session,
/// plus the ground truth document. Byte-identical for identical configs.
pub fn generate(config: &SynthConfig) -> Result<Corpus> {
    config.validate()?;
    let digest = config_digest(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let known: Vec<(ModeId, TransportMeans)> = config
        .mapping
        .iter()
        .filter(|&(_, means)| means != TransportMeans::Unknown)
        .collect();

    let header = format!("# config_digest={digest}\n");
    let mut queries = header.clone();
    let mut plans = header.clone();
    let mut clicks = header;

    for i in 0..config.sessions {
        let sid = format!("s{:07}", i + 1);
        let (origin, destination, straight_m) = sample_od(config, &mut rng)?;

        let mut options: Vec<PlanOption> = Vec::new();
        for &(mode_id, means) in &known {
            if rng.gen_bool(config.display_probs[&means]) {
                options.push(synth_option(config, mode_id, means, straight_m, &mut rng));
            }
        }
        if options.is_empty() {
            // Every display draw missed; force one plan so the session
            // still has something to click.
            let (mode_id, means) = known[rng.gen_range(0..known.len())];
            options.push(synth_option(config, mode_id, means, straight_m, &mut rng));
        }
        let clicked = pick_click(config, &options, &mut rng);

        let ts = 1_700_000_000 + i as i64 * 60;
        let query = serde_json::json!({
            "sid": sid,
            "o": format!("{},{}", origin.lng, origin.lat),
            "d": format!("{},{}", destination.lng, destination.lat),
            "ts": ts,
        });
        let display = serde_json::json!({
            "sid": sid,
            "ts": ts + 1,
            "plans": options.iter().map(plan_value).collect::<Vec<_>>(),
        });
        let click = serde_json::json!({
            "sid": sid,
            "click": clicked.get(),
            "ts": ts + 5,
        });
        queries.push_str(&query.to_string());
        queries.push('\n');
        plans.push_str(&display.to_string());
        plans.push('\n');
        clicks.push_str(&click.to_string());
        clicks.push('\n');
    }

    let ground_truth = serde_json::json!({
        "config_digest": digest,
        "mapping": config.mapping,
        "config": config,
    });
    let mut ground_truth_json = serde_json::to_string_pretty(&ground_truth)
        .map_err(|e| Error::Domain(format!("ground truth serialization failed: {e}")))?;
    ground_truth_json.push('\n');

    Ok(Corpus {
        queries_jsonl: queries,
        plans_jsonl: plans,
        clicks_jsonl: clicks,
        ground_truth_json,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{
        default_mode_filter, join_sessions, parse_clicks, parse_plans, parse_queries,
    };
    use crate::modes::infer_mapping;
    use proptest::prelude::*;

    fn config(sessions: usize, seed: u64) -> SynthConfig {
        SynthConfig {
            sessions,
            seed,
            ..SynthConfig::default()
        }
    }

    #[test]
    fn default_config_validates() {
        assert!(SynthConfig::default().validate().is_ok());
    }

    #[test]
    fn overlapping_unpriced_bands_are_rejected() {
        let mut cfg = SynthConfig::default();
        cfg.speed_bands.insert(
            TransportMeans::Cycling,
            SpeedBand {
                min_mps: 1.5,
                max_mps: 5.0,
            },
        );
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn shrinking_detour_is_rejected() {
        let mut cfg = SynthConfig::default();
        cfg.detour_factors.insert(TransportMeans::Bus, 0.8);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn inverted_band_is_rejected() {
        let mut cfg = SynthConfig::default();
        cfg.speed_bands.insert(
            TransportMeans::Taxi,
            SpeedBand {
                min_mps: 9.0,
                max_mps: 6.0,
            },
        );
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn tiny_od_box_is_rejected() {
        let mut cfg = SynthConfig::default();
        cfg.od_box = OdBox {
            min_lat: 39.900,
            max_lat: 39.901,
            min_lng: 116.300,
            max_lng: 116.301,
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn haversine_matches_reference_scale() {
        let a = GeoPoint::new(39.9, 116.3).unwrap();
        let b = GeoPoint::new(39.9, 116.4).unwrap();
        let d = haversine_m(a, b);
        // One tenth of a longitude degree at this latitude.
        assert!((d - 8540.0).abs() < 100.0, "got {d}");
        assert_eq!(haversine_m(a, a), 0.0);
    }

    #[test]
    fn same_config_generates_identical_bytes() {
        let cfg = config(200, 7);
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a, b);
        let other_seed = generate(&config(200, 8)).unwrap();
        assert_ne!(a.queries_jsonl, other_seed.queries_jsonl);
    }

    #[test]
    fn zero_sessions_generate_headers_only() {
        let corpus = generate(&config(0, 1)).unwrap();
        for text in [
            &corpus.queries_jsonl,
            &corpus.plans_jsonl,
            &corpus.clicks_jsonl,
        ] {
            assert_eq!(text.lines().count(), 1);
            assert!(text.starts_with("# config_digest="));
        }
        let queries = parse_queries(corpus.queries_jsonl.as_bytes()).unwrap();
        assert!(queries.records.is_empty());
        assert_eq!(queries.stats.rejected_lines, 0);
    }

    #[test]
    fn corpus_parses_cleanly_and_joins_completely() {
        let corpus = generate(&config(300, 42)).unwrap();
        let queries = parse_queries(corpus.queries_jsonl.as_bytes()).unwrap();
        let plans = parse_plans(corpus.plans_jsonl.as_bytes()).unwrap();
        let clicks = parse_clicks(corpus.clicks_jsonl.as_bytes()).unwrap();
        for stats in [&queries.stats, &plans.stats, &clicks.stats] {
            assert_eq!(stats.rejected_lines, 0);
            assert_eq!(stats.duplicate_sids, 0);
            assert_eq!(stats.dropped_options, 0);
        }
        assert_eq!(queries.records.len(), 300);
        let (sessions, diag) = join_sessions(
            &queries.records,
            &plans.records,
            &clicks.records,
            &default_mode_filter(),
        );
        assert_eq!(sessions.len(), 300);
        assert_eq!(diag.total_dropped(), 0);
        for s in &sessions {
            assert!(s.validate().is_ok());
        }
    }

    #[test]
    fn realized_speeds_stay_inside_bands() {
        let cfg = config(400, 11);
        let corpus = generate(&cfg).unwrap();
        let plans = parse_plans(corpus.plans_jsonl.as_bytes()).unwrap();
        let mut checked = 0usize;
        for record in &plans.records {
            for opt in &record.options {
                let means = cfg.mapping.means_of(opt.mode_id);
                let band = cfg.speed_bands[&means];
                let speed = opt.distance_m as f64 / opt.eta_s as f64;
                assert!(
                    band.contains(speed),
                    "mode {} speed {speed} outside [{}, {}]",
                    opt.mode_id,
                    band.min_mps,
                    band.max_mps
                );
                checked += 1;
            }
        }
        assert!(checked > 400);
    }

    #[test]
    fn prices_stay_within_noise_of_the_schedule() {
        let cfg = config(400, 13);
        let corpus = generate(&cfg).unwrap();
        let plans = parse_plans(corpus.plans_jsonl.as_bytes()).unwrap();
        for record in &plans.records {
            for opt in &record.options {
                let means = cfg.mapping.means_of(opt.mode_id);
                match cfg
                    .fares
                    .predicted_fare(means, opt.distance_m as f64 / 1000.0)
                {
                    Some(fare) => {
                        let price = opt.price.expect("priced means carries a price") as f64;
                        // Half a unit of slack for the integer rounding.
                        assert!(
                            (price - fare).abs() <= fare * cfg.price_noise_pct / 100.0 + 0.5,
                            "price {price} too far from fare {fare}"
                        );
                    }
                    None => assert_eq!(opt.price, None),
                }
            }
        }
    }

    #[test]
    fn ground_truth_mapping_is_recovered_from_midsize_corpus() {
        let cfg = config(3000, 5);
        let corpus = generate(&cfg).unwrap();
        let plans = parse_plans(corpus.plans_jsonl.as_bytes()).unwrap();
        let inferred = infer_mapping(&plans.records, &cfg.fares).unwrap();
        assert_eq!(inferred, cfg.mapping);
    }

    #[test]
    fn ground_truth_document_echoes_config_and_digest() {
        let cfg = config(3, 9);
        let corpus = generate(&cfg).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&corpus.ground_truth_json).unwrap();
        assert_eq!(doc["mapping"]["1"], "bus");
        assert_eq!(doc["mapping"]["11"], "bus_and_share_cycle");
        assert_eq!(doc["config"]["sessions"], 3);
        let digest = doc["config_digest"].as_str().unwrap();
        assert_eq!(digest.len(), 64);
        assert!(corpus
            .queries_jsonl
            .starts_with(&format!("# config_digest={digest}")));
        let roundtrip: SynthConfig = serde_json::from_value(doc["config"].clone()).unwrap();
        assert_eq!(roundtrip, cfg);
    }

    fn fixed_options() -> Vec<PlanOption> {
        let opt = |mode: u8, eta: u64, price: Option<i64>| PlanOption {
            mode_id: ModeId::new(mode).unwrap(),
            distance_m: 4000,
            eta_s: eta,
            price,
        };
        vec![
            opt(1, 900, Some(200)),
            opt(2, 500, Some(300)),
            opt(5, 3000, None),
        ]
    }

    #[test]
    fn click_models_pick_as_documented() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let options = fixed_options();

        let mut cfg = SynthConfig::default();
        cfg.click_model = ClickModel::Fastest;
        assert_eq!(pick_click(&cfg, &options, &mut rng).get(), 2);

        cfg.click_model = ClickModel::Cheapest;
        assert_eq!(pick_click(&cfg, &options, &mut rng).get(), 5);

        cfg.click_model = ClickModel::StickyBus;
        assert_eq!(pick_click(&cfg, &options, &mut rng).get(), 1);

        cfg.click_model = ClickModel::Uniform;
        let picked = pick_click(&cfg, &options, &mut rng);
        assert!(options.iter().any(|o| o.mode_id == picked));
    }

    #[test]
    fn click_model_strings_parse() {
        assert_eq!(
            "sticky-bus".parse::<ClickModel>().unwrap(),
            ClickModel::StickyBus
        );
        assert_eq!(
            "fastest".parse::<ClickModel>().unwrap(),
            ClickModel::Fastest
        );
        assert!("slowest".parse::<ClickModel>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn small_corpora_always_parse_and_join(seed in 0u64..5000) {
            let cfg = config(40, seed);
            let corpus = generate(&cfg).unwrap();
            let queries = parse_queries(corpus.queries_jsonl.as_bytes()).unwrap();
            let plans = parse_plans(corpus.plans_jsonl.as_bytes()).unwrap();
            let clicks = parse_clicks(corpus.clicks_jsonl.as_bytes()).unwrap();
            prop_assert_eq!(queries.stats.rejected_lines, 0);
            prop_assert_eq!(plans.stats.rejected_lines, 0);
            prop_assert_eq!(clicks.stats.rejected_lines, 0);
            let (sessions, diag) = join_sessions(
                &queries.records,
                &plans.records,
                &clicks.records,
                &default_mode_filter(),
            );
            prop_assert_eq!(sessions.len(), 40);
            prop_assert_eq!(diag.total_dropped(), 0);
        }
    }
}
