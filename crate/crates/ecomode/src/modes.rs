//! Inference of the real transport means behind each opaque mode id.
//!
//! The logs never say which mode id is the bus and which is the subway.
//! Three signals pin them down: the unpriced modes are ordered by average
//! speed (walking < cycling < driving); the priced modes are matched
//! against fare schedules by how well each schedule predicts their
//! observed prices; and the two flat-fare modes are split by how often
//! they are displayed.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{DisplayRecord, ModeId};

/// Real-world transport means a mode id can stand for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransportMeans {
    Bus,
    Subway,
    Driving,
    Taxi,
    Walking,
    Cycling,
    BusAndSubway,
    BusAndShareCycle,
    /// Modes 8, 9 and 10, whose identity cannot be established.
    Unknown,
}

impl TransportMeans {
    pub const ALL_KNOWN: [TransportMeans; 8] = [
        TransportMeans::Bus,
        TransportMeans::Subway,
        TransportMeans::Driving,
        TransportMeans::Taxi,
        TransportMeans::Walking,
        TransportMeans::Cycling,
        TransportMeans::BusAndSubway,
        TransportMeans::BusAndShareCycle,
    ];
}

impl fmt::Display for TransportMeans {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TransportMeans::Bus => "Bus",
            TransportMeans::Subway => "Subway",
            TransportMeans::Driving => "Driving",
            TransportMeans::Taxi => "Taxi",
            TransportMeans::Walking => "Walking",
            TransportMeans::Cycling => "Cycling",
            TransportMeans::BusAndSubway => "Bus&Subway",
            TransportMeans::BusAndShareCycle => "Bus&Share Cycle",
            TransportMeans::Unknown => "Unknown",
        };
        f.write_str(name)
    }
}

/// Per-mode display statistics feeding the classifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeStats {
    pub mode_id: ModeId,
    /// Number of displayed options carrying this mode.
    pub display_count: usize,
    /// Arithmetic mean of per-option distance / eta.
    pub mean_speed_mps: f64,
    /// True when at least half of the options carry a price.
    pub has_price: bool,
    pub price_samples: Vec<(u64, i64)>,
}

/// City fare schedule the priced classifiers fit against.
///
/// Values live in configuration, not code; [`FareSchedule::beijing`] is the
/// bundled default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FareSchedule {
    /// Flat bus fare, minor units.
    #[serde(rename = "bus_flat")]
    pub flat_bus_fare: i64,
    /// Distance-stepped subway fare: `(km threshold, fare)` pairs with
    /// strictly increasing thresholds. Distances beyond the last threshold
    /// pay the last fare.
    #[serde(rename = "subway_steps")]
    pub subway_fare_steps: Vec<(f64, i64)>,
    pub taxi_base: i64,
    pub taxi_per_km: i64,
}

impl FareSchedule {
    /// Beijing-style defaults, minor units (fen).
    pub fn beijing() -> Self {
        FareSchedule {
            flat_bus_fare: 200,
            subway_fare_steps: vec![
                (6.0, 300),
                (12.0, 400),
                (22.0, 500),
                (32.0, 600),
                (52.0, 700),
                (72.0, 800),
            ],
            taxi_base: 1300,
            taxi_per_km: 230,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.flat_bus_fare < 0 || self.taxi_base < 0 || self.taxi_per_km < 0 {
            return Err(Error::Config("fares must be non-negative".into()));
        }
        if self.subway_fare_steps.is_empty() {
            return Err(Error::Config("subway fare steps are empty".into()));
        }
        let mut prev = f64::NEG_INFINITY;
        for &(threshold, fare) in &self.subway_fare_steps {
            if threshold <= prev {
                return Err(Error::Config(
                    "subway fare thresholds must be strictly increasing".into(),
                ));
            }
            if fare < 0 {
                return Err(Error::Config("fares must be non-negative".into()));
            }
            prev = threshold;
        }
        Ok(())
    }

    /// Subway fare for a trip of `distance_km`.
    pub fn subway_fare(&self, distance_km: f64) -> i64 {
        for &(threshold, fare) in &self.subway_fare_steps {
            if distance_km <= threshold {
                return fare;
            }
        }
        self.subway_fare_steps
            .last()
            .map(|&(_, fare)| fare)
            .unwrap_or(0)
    }

    pub fn taxi_fare(&self, distance_km: f64) -> f64 {
        self.taxi_base as f64 + self.taxi_per_km as f64 * distance_km
    }

    /// Predicted fare for `means` at `distance_km`, or `None` for means
    /// that carry no price.
    pub fn predicted_fare(&self, means: TransportMeans, distance_km: f64) -> Option<f64> {
        match means {
            TransportMeans::Bus => Some(self.flat_bus_fare as f64),
            TransportMeans::Subway => Some(self.subway_fare(distance_km) as f64),
            TransportMeans::Taxi => Some(self.taxi_fare(distance_km)),
            TransportMeans::BusAndSubway => {
                Some((self.flat_bus_fare as f64 + self.subway_fare(distance_km) as f64) / 2.0)
            }
            // The share-cycle leg adds nothing; the bus fare dominates.
            TransportMeans::BusAndShareCycle => Some(self.flat_bus_fare as f64),
            _ => None,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| {
            Error::Config(format!("cannot open fares file {}: {e}", path.display()))
        })?;
        let fares: FareSchedule = serde_json::from_reader(BufReader::new(file))
            .map_err(|e| Error::Config(format!("bad fares file {}: {e}", path.display())))?;
        fares.validate()?;
        Ok(fares)
    }
}

/// Total assignment of mode ids to transport means.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ModeMapping {
    map: BTreeMap<ModeId, TransportMeans>,
}

impl ModeMapping {
    /// Builds and validates a mapping: all ids 1..=11 present, ids 8-10
    /// unknown, every known means used exactly once.
    pub fn new(map: BTreeMap<ModeId, TransportMeans>) -> Result<Self> {
        for id in ModeId::all() {
            let Some(&means) = map.get(&id) else {
                return Err(Error::Inference(format!("mapping is missing mode {id}")));
            };
            let must_be_unknown = (8..=10).contains(&id.get());
            if must_be_unknown && means != TransportMeans::Unknown {
                return Err(Error::Inference(format!(
                    "mode {id} must map to unknown, found {means}"
                )));
            }
            if !must_be_unknown && means == TransportMeans::Unknown {
                return Err(Error::Inference(format!(
                    "mode {id} must not map to unknown"
                )));
            }
        }
        for means in TransportMeans::ALL_KNOWN {
            let count = map.values().filter(|&&m| m == means).count();
            if count != 1 {
                return Err(Error::Inference(format!(
                    "means {means} assigned to {count} modes, expected exactly 1"
                )));
            }
        }
        Ok(ModeMapping { map })
    }

    /// The assignment shipped as the default: 1 bus, 2 subway, 3 driving,
    /// 4 taxi, 5 walking, 6 cycling, 7 bus+subway, 11 bus+share-cycle.
    pub fn bundled_default() -> Self {
        use TransportMeans::*;
        let pairs = [
            (1, Bus),
            (2, Subway),
            (3, Driving),
            (4, Taxi),
            (5, Walking),
            (6, Cycling),
            (7, BusAndSubway),
            (8, Unknown),
            (9, Unknown),
            (10, Unknown),
            (11, BusAndShareCycle),
        ];
        let map = pairs
            .into_iter()
            .map(|(id, means)| (ModeId::new(id).unwrap(), means))
            .collect();
        ModeMapping { map }
    }

    pub fn means_of(&self, mode: ModeId) -> TransportMeans {
        self.map[&mode]
    }

    /// The mode id carrying a given means, if any.
    pub fn mode_for(&self, means: TransportMeans) -> Option<ModeId> {
        self.map
            .iter()
            .find(|(_, &m)| m == means)
            .map(|(&id, _)| id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeId, TransportMeans)> + '_ {
        self.map.iter().map(|(&id, &means)| (id, means))
    }

    /// Builds a mapping from string-keyed JSON entries, skipping metadata
    /// keys that start with `_`.
    fn from_raw_entries(raw: BTreeMap<String, serde_json::Value>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (key, value) in raw {
            // Keys starting with '_' are file metadata, not mode entries.
            if key.starts_with('_') {
                continue;
            }
            let id = key
                .parse::<u8>()
                .ok()
                .and_then(ModeId::new)
                .ok_or_else(|| Error::Config(format!("bad mode id {key:?} in mapping")))?;
            let means: TransportMeans = serde_json::from_value(value)
                .map_err(|e| Error::Config(format!("bad means for mode {key}: {e}")))?;
            map.insert(id, means);
        }
        ModeMapping::new(map)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| {
            Error::Config(format!("cannot open mapping file {}: {e}", path.display()))
        })?;
        let raw: BTreeMap<String, serde_json::Value> =
            serde_json::from_reader(BufReader::new(file))
                .map_err(|e| Error::Config(format!("bad mapping file {}: {e}", path.display())))?;
        ModeMapping::from_raw_entries(raw)
            .map_err(|e| Error::Config(format!("bad mapping file {}: {e}", path.display())))
    }

    /// Writes the mapping as a flat `{"1": "bus", ...}` object, with an
    /// optional `_config_digest` metadata member.
    pub fn write_file(&self, path: &Path, config_digest: Option<&str>) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let mut doc = serde_json::Map::new();
        for (id, means) in self.iter() {
            doc.insert(id.to_string(), serde_json::to_value(means).unwrap());
        }
        if let Some(digest) = config_digest {
            doc.insert("_config_digest".into(), digest.into());
        }
        serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::io(path, e.into()))?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

impl<'de> Deserialize<'de> for ModeMapping {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, serde_json::Value>::deserialize(deserializer)?;
        ModeMapping::from_raw_entries(raw).map_err(serde::de::Error::custom)
    }
}

/// Aggregates display records into per-mode statistics.
///
/// A mode with zero displayed options is simply absent from the result.
pub fn aggregate_mode_stats(displays: &[DisplayRecord]) -> Result<BTreeMap<ModeId, ModeStats>> {
    if displays.is_empty() {
        return Err(Error::Inference("no display records to aggregate".into()));
    }
    struct Acc {
        count: usize,
        speed_sum: f64,
        priced: usize,
        samples: Vec<(u64, i64)>,
    }
    let mut acc: BTreeMap<ModeId, Acc> = BTreeMap::new();
    for record in displays {
        for opt in &record.options {
            let entry = acc.entry(opt.mode_id).or_insert_with(|| Acc {
                count: 0,
                speed_sum: 0.0,
                priced: 0,
                samples: Vec::new(),
            });
            entry.count += 1;
            entry.speed_sum += opt.distance_m as f64 / opt.eta_s as f64;
            if let Some(price) = opt.price {
                entry.priced += 1;
                entry.samples.push((opt.distance_m, price));
            }
        }
    }
    Ok(acc
        .into_iter()
        .map(|(mode_id, a)| {
            let stats = ModeStats {
                mode_id,
                display_count: a.count,
                mean_speed_mps: a.speed_sum / a.count as f64,
                has_price: a.priced * 2 >= a.count,
                price_samples: a.samples,
            };
            (mode_id, stats)
        })
        .collect())
}

/// Classifies the three unpriced modes by speed: slowest is walking,
/// middle is cycling, fastest is driving. The rule follows the speeds,
/// not the ids.
pub fn classify_unpriced(stats: &[&ModeStats]) -> Result<BTreeMap<ModeId, TransportMeans>> {
    if stats.len() != 3 {
        let ids: Vec<String> = stats.iter().map(|s| s.mode_id.to_string()).collect();
        return Err(Error::Inference(format!(
            "expected 3 unpriced modes, found {} ({})",
            stats.len(),
            ids.join(", ")
        )));
    }
    let mut by_speed: Vec<&ModeStats> = stats.to_vec();
    by_speed.sort_by(|a, b| {
        a.mean_speed_mps
            .total_cmp(&b.mean_speed_mps)
            .then(a.mode_id.cmp(&b.mode_id))
    });
    Ok([
        (by_speed[0].mode_id, TransportMeans::Walking),
        (by_speed[1].mode_id, TransportMeans::Cycling),
        (by_speed[2].mode_id, TransportMeans::Driving),
    ]
    .into_iter()
    .collect())
}

const MIN_PRICE_SAMPLES: usize = 5;

/// Median absolute residual of a mode's price samples against one fare
/// hypothesis. Median is the lower-middle element for even counts.
fn median_abs_residual(samples: &[(u64, i64)], predict: impl Fn(f64) -> f64) -> f64 {
    let mut residuals: Vec<f64> = samples
        .iter()
        .map(|&(dist_m, price)| (price as f64 - predict(dist_m as f64 / 1000.0)).abs())
        .collect();
    residuals.sort_by(f64::total_cmp);
    residuals[(residuals.len() - 1) / 2]
}

/// Classifies the five priced modes against the fare schedule.
///
/// Subway, taxi and bus+subway each go to the mode whose prices their
/// schedule predicts best (lowest median absolute residual). The two
/// remaining modes both look like the flat bus fare; the one displayed
/// more often is the bus, the other the bus+share-cycle combination.
pub fn classify_priced(
    stats: &[&ModeStats],
    fares: &FareSchedule,
) -> Result<BTreeMap<ModeId, TransportMeans>> {
    fares.validate()?;
    if stats.len() != 5 {
        let ids: Vec<String> = stats.iter().map(|s| s.mode_id.to_string()).collect();
        return Err(Error::Inference(format!(
            "expected 5 priced modes for means bus, subway, taxi, bus&subway and \
             bus&share-cycle, found {} ({})",
            stats.len(),
            ids.join(", ")
        )));
    }
    for s in stats {
        if s.price_samples.len() < MIN_PRICE_SAMPLES {
            return Err(Error::Inference(format!(
                "mode {} has only {} price samples, need at least {MIN_PRICE_SAMPLES}",
                s.mode_id,
                s.price_samples.len()
            )));
        }
    }

    // Hypotheses with distinct predictors, assigned by exclusive argmin.
    let exclusive = [
        TransportMeans::Subway,
        TransportMeans::Taxi,
        TransportMeans::BusAndSubway,
    ];
    let mut assigned: BTreeMap<ModeId, TransportMeans> = BTreeMap::new();
    for means in exclusive {
        let best = stats
            .iter()
            .map(|s| {
                let mar = median_abs_residual(&s.price_samples, |km| {
                    fares.predicted_fare(means, km).unwrap()
                });
                (s.mode_id, mar)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .map(|(id, _)| id)
            .unwrap();
        if let Some(&earlier) = assigned.get(&best) {
            return Err(Error::Inference(format!(
                "modes tie: {earlier} and {means} both fit mode {best} best"
            )));
        }
        assigned.insert(best, means);
    }

    // The remaining pair should be the two flat-fare modes.
    let mut remaining: Vec<&&ModeStats> = stats
        .iter()
        .filter(|s| !assigned.contains_key(&s.mode_id))
        .collect();
    if remaining.len() != 2 {
        return Err(Error::Inference(format!(
            "expected 2 flat-fare modes left for bus and bus&share-cycle, found {}",
            remaining.len()
        )));
    }
    remaining.sort_by(|a, b| {
        b.display_count
            .cmp(&a.display_count)
            .then(a.mode_id.cmp(&b.mode_id))
    });
    if remaining[0].display_count == remaining[1].display_count {
        return Err(Error::Inference(format!(
            "modes {} and {} tie on display count {}; cannot split bus from bus&share-cycle",
            remaining[0].mode_id, remaining[1].mode_id, remaining[0].display_count
        )));
    }
    assigned.insert(remaining[0].mode_id, TransportMeans::Bus);
    assigned.insert(remaining[1].mode_id, TransportMeans::BusAndShareCycle);
    Ok(assigned)
}

/// Runs the whole inference over a display corpus and returns a total,
/// validated mapping. Modes 8-10 always map to unknown.
pub fn infer_mapping(displays: &[DisplayRecord], fares: &FareSchedule) -> Result<ModeMapping> {
    let stats = aggregate_mode_stats(displays)?;
    let candidates: Vec<&ModeStats> = stats
        .values()
        .filter(|s| !(8..=10).contains(&s.mode_id.get()))
        .collect();

    let unpriced: Vec<&ModeStats> = candidates
        .iter()
        .copied()
        .filter(|s| !s.has_price)
        .collect();
    let priced: Vec<&ModeStats> = candidates.iter().copied().filter(|s| s.has_price).collect();

    let mut map = classify_unpriced(&unpriced)?;
    map.extend(classify_priced(&priced, fares)?);
    for id in ModeId::all() {
        if (8..=10).contains(&id.get()) {
            map.insert(id, TransportMeans::Unknown);
        }
    }
    ModeMapping::new(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PlanOption;

    fn mode(id: u8) -> ModeId {
        ModeId::new(id).unwrap()
    }

    fn display_of(options: Vec<PlanOption>) -> DisplayRecord {
        DisplayRecord {
            sid: "s".into(),
            options,
            timestamp: 0,
        }
    }

    fn opt(id: u8, dist: u64, eta: u64, price: Option<i64>) -> PlanOption {
        PlanOption {
            mode_id: mode(id),
            distance_m: dist,
            eta_s: eta,
            price,
        }
    }

    #[test]
    fn mean_speed_is_arithmetic_mean_of_option_speeds() {
        let displays = vec![
            display_of(vec![opt(5, 1000, 900, None)]),
            display_of(vec![opt(5, 2000, 1500, None)]),
        ];
        let stats = aggregate_mode_stats(&displays).unwrap();
        let s = &stats[&mode(5)];
        let expected = (1000.0 / 900.0 + 2000.0 / 1500.0) / 2.0;
        assert!((s.mean_speed_mps - expected).abs() < 1e-12);
        assert!((s.mean_speed_mps - 1.222).abs() < 1e-3);
        assert_eq!(s.display_count, 2);
    }

    #[test]
    fn has_price_follows_majority_threshold() {
        let displays = vec![
            display_of(vec![opt(4, 1000, 100, Some(1500))]),
            display_of(vec![opt(4, 1200, 110, Some(1550))]),
            display_of(vec![opt(4, 900, 90, Some(1450))]),
            display_of(vec![opt(4, 800, 80, None)]),
        ];
        let stats = aggregate_mode_stats(&displays).unwrap();
        assert!(stats[&mode(4)].has_price);
        assert_eq!(stats[&mode(4)].price_samples.len(), 3);
    }

    #[test]
    fn empty_displays_is_an_error() {
        assert!(aggregate_mode_stats(&[]).is_err());
    }

    fn stats_with_speed(id: u8, speed: f64) -> ModeStats {
        ModeStats {
            mode_id: mode(id),
            display_count: 10,
            mean_speed_mps: speed,
            has_price: false,
            price_samples: Vec::new(),
        }
    }

    #[test]
    fn unpriced_modes_classify_by_speed_order() {
        let s5 = stats_with_speed(5, 1.2);
        let s6 = stats_with_speed(6, 3.5);
        let s3 = stats_with_speed(3, 8.0);
        let map = classify_unpriced(&[&s5, &s6, &s3]).unwrap();
        assert_eq!(map[&mode(5)], TransportMeans::Walking);
        assert_eq!(map[&mode(6)], TransportMeans::Cycling);
        assert_eq!(map[&mode(3)], TransportMeans::Driving);
    }

    #[test]
    fn unpriced_rule_follows_speed_not_id() {
        let s9 = stats_with_speed(9, 1.2);
        let s2 = stats_with_speed(2, 3.5);
        let s7 = stats_with_speed(7, 8.0);
        let map = classify_unpriced(&[&s9, &s2, &s7]).unwrap();
        assert_eq!(map[&mode(9)], TransportMeans::Walking);
        assert_eq!(map[&mode(2)], TransportMeans::Cycling);
        assert_eq!(map[&mode(7)], TransportMeans::Driving);
    }

    #[test]
    fn wrong_unpriced_count_is_an_error() {
        let s5 = stats_with_speed(5, 1.2);
        let s6 = stats_with_speed(6, 3.5);
        let err = classify_unpriced(&[&s5, &s6]).unwrap_err();
        assert!(err.to_string().contains("expected 3 unpriced modes"));
    }

    /// Stats whose prices follow a fare predictor exactly, over a spread
    /// of distances.
    fn priced_stats(id: u8, count: usize, fare_of_km: impl Fn(f64) -> f64) -> ModeStats {
        let samples: Vec<(u64, i64)> = (0..8)
            .map(|i| {
                let dist_m = 2_000 + i * 4_500;
                (dist_m, fare_of_km(dist_m as f64 / 1000.0).round() as i64)
            })
            .collect();
        ModeStats {
            mode_id: mode(id),
            display_count: count,
            mean_speed_mps: 5.0,
            has_price: true,
            price_samples: samples,
        }
    }

    fn beijing_priced_fixture() -> Vec<ModeStats> {
        let fares = FareSchedule::beijing();
        let f2 = fares.clone();
        let f4 = fares.clone();
        let f7 = fares.clone();
        vec![
            priced_stats(1, 20834, move |_| fares.flat_bus_fare as f64),
            priced_stats(2, 9000, move |km| f2.subway_fare(km) as f64),
            priced_stats(4, 4000, move |km| f4.taxi_fare(km)),
            priced_stats(7, 3000, move |km| {
                (f7.flat_bus_fare as f64 + f7.subway_fare(km) as f64) / 2.0
            }),
            priced_stats(11, 1332, |_| 200.0),
        ]
    }

    #[test]
    fn taxi_like_prices_recover_taxi() {
        let stats = beijing_priced_fixture();
        let refs: Vec<&ModeStats> = stats.iter().collect();
        let map = classify_priced(&refs, &FareSchedule::beijing()).unwrap();
        assert_eq!(map[&mode(4)], TransportMeans::Taxi);
    }

    #[test]
    fn flat_fare_pair_splits_by_display_count() {
        let stats = beijing_priced_fixture();
        let refs: Vec<&ModeStats> = stats.iter().collect();
        let map = classify_priced(&refs, &FareSchedule::beijing()).unwrap();
        assert_eq!(map[&mode(1)], TransportMeans::Bus);
        assert_eq!(map[&mode(11)], TransportMeans::BusAndShareCycle);
    }

    #[test]
    fn midpoint_prices_recover_bus_and_subway() {
        let stats = beijing_priced_fixture();
        let refs: Vec<&ModeStats> = stats.iter().collect();
        let map = classify_priced(&refs, &FareSchedule::beijing()).unwrap();
        assert_eq!(map[&mode(2)], TransportMeans::Subway);
        assert_eq!(map[&mode(7)], TransportMeans::BusAndSubway);
    }

    #[test]
    fn equal_display_counts_cannot_split_the_flat_pair() {
        let mut stats = beijing_priced_fixture();
        stats[0].display_count = 1332;
        let refs: Vec<&ModeStats> = stats.iter().collect();
        let err = classify_priced(&refs, &FareSchedule::beijing()).unwrap_err();
        assert!(err.to_string().contains("tie on display count"));
    }

    #[test]
    fn bundled_default_mapping_is_valid() {
        let mapping = ModeMapping::bundled_default();
        assert_eq!(mapping.means_of(mode(1)), TransportMeans::Bus);
        assert_eq!(mapping.means_of(mode(8)), TransportMeans::Unknown);
        assert_eq!(mapping.mode_for(TransportMeans::Cycling), Some(mode(6)));
        // Round-trips through the validating constructor.
        let rebuilt = ModeMapping::new(mapping.iter().collect()).unwrap();
        assert_eq!(rebuilt, mapping);
    }

    #[test]
    fn mapping_rejects_duplicate_means() {
        let mut map: BTreeMap<ModeId, TransportMeans> =
            ModeMapping::bundled_default().iter().collect();
        map.insert(mode(2), TransportMeans::Bus);
        let err = ModeMapping::new(map).unwrap_err();
        assert!(err.to_string().contains("Bus"));
    }

    #[test]
    fn subway_fare_steps_lookup() {
        let fares = FareSchedule::beijing();
        assert_eq!(fares.subway_fare(3.0), 300);
        assert_eq!(fares.subway_fare(6.0), 300);
        assert_eq!(fares.subway_fare(6.1), 400);
        assert_eq!(fares.subway_fare(25.0), 600);
        assert_eq!(fares.subway_fare(500.0), 800);
    }

    #[test]
    fn fare_schedule_validation_catches_bad_steps() {
        let mut fares = FareSchedule::beijing();
        fares.subway_fare_steps = vec![(6.0, 300), (6.0, 400)];
        assert!(fares.validate().is_err());
        fares.subway_fare_steps = vec![(6.0, -1)];
        assert!(fares.validate().is_err());
    }
}
