//! Parsing and joining of map-search logs.
//!
//! Three line-oriented JSON files describe one search interaction each:
//! a query (origin/destination), a display record (the route plans shown),
//! and a click record (the plan the user picked). Joining them by session
//! id yields the [`Session`]s that the optimizer works on.
//!
//! Blank lines and lines starting with `#` (such as digest headers) are
//! skipped silently; any other unparseable line is counted as rejected.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Opaque transport mode identifier from the logs, always in `1..=11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId(u8);

impl ModeId {
    pub const MIN: u8 = 1;
    pub const MAX: u8 = 11;

    pub fn new(raw: u8) -> Option<Self> {
        (Self::MIN..=Self::MAX)
            .contains(&raw)
            .then_some(ModeId(raw))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// All eleven ids, in order.
    pub fn all() -> impl Iterator<Item = ModeId> {
        (Self::MIN..=Self::MAX).map(ModeId)
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for ModeId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.0)
    }
}

impl<'de> Deserialize<'de> for ModeId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = u8::deserialize(deserializer)?;
        ModeId::new(raw)
            .ok_or_else(|| D::Error::custom(format!("mode id {raw} out of range 1..=11")))
    }
}

/// The mode filter used by default: every id except 8, 9 and 10, whose
/// real-world meaning cannot be established from the logs.
pub fn default_mode_filter() -> BTreeSet<ModeId> {
    [1u8, 2, 3, 4, 5, 6, 7, 11]
        .into_iter()
        .filter_map(ModeId::new)
        .collect()
}

/// WGS84 coordinate, stored internally as (lat, lng) regardless of the
/// on-disk "lng,lat" string order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lng: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lng: f64) -> Option<Self> {
        let ok = (-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lng);
        ok.then_some(GeoPoint { lat, lng })
    }

    /// Parses the on-disk `"lng,lat"` form.
    fn from_lng_lat_str(s: &str) -> Option<Self> {
        let (lng, lat) = s.split_once(',')?;
        GeoPoint::new(lat.trim().parse().ok()?, lng.trim().parse().ok()?)
    }
}

/// One search query: where the user wants to go.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    pub sid: String,
    pub origin: GeoPoint,
    pub destination: GeoPoint,
    pub timestamp: i64,
}

/// One route plan shown to the user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanOption {
    pub mode_id: ModeId,
    pub distance_m: u64,
    pub eta_s: u64,
    /// Estimated price in currency minor units; absent for modes that
    /// carry no price information.
    pub price: Option<i64>,
}

/// The ordered list of plans displayed for one session.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplayRecord {
    pub sid: String,
    pub options: Vec<PlanOption>,
    pub timestamp: i64,
}

/// The plan the user clicked; treated as the mode actually traveled.
#[derive(Debug, Clone, PartialEq)]
pub struct ClickRecord {
    pub sid: String,
    pub clicked_mode_id: ModeId,
    pub timestamp: i64,
}

/// Fully joined search interaction: the unit the optimizer assigns a mode to.
#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub sid: String,
    pub origin: GeoPoint,
    pub destination: GeoPoint,
    /// Displayed plans, restricted to the allowed mode set.
    pub options: Vec<PlanOption>,
    pub clicked_mode_id: ModeId,
    /// Travel time of the clicked plan; the per-session time budget.
    pub clicked_eta_s: u64,
    pub clicked_distance_m: u64,
}

impl Session {
    pub fn clicked_option(&self) -> &PlanOption {
        self.options
            .iter()
            .find(|o| o.mode_id == self.clicked_mode_id)
            .expect("clicked mode is always among the options")
    }

    /// Origin equals destination. Kept and flagged rather than dropped.
    pub fn degenerate_od(&self) -> bool {
        self.origin == self.destination
    }

    /// Re-checks every construction invariant; used by validation passes.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.sid.is_empty() {
            return Err("empty sid".into());
        }
        let clicked = self
            .options
            .iter()
            .find(|o| o.mode_id == self.clicked_mode_id)
            .ok_or("clicked mode not among options")?;
        if clicked.eta_s != self.clicked_eta_s {
            return Err("clicked_eta_s does not match the clicked option".into());
        }
        if clicked.distance_m != self.clicked_distance_m {
            return Err("clicked_distance_m does not match the clicked option".into());
        }
        let mut seen = BTreeSet::new();
        for opt in &self.options {
            if opt.eta_s == 0 {
                return Err(format!("option mode {} has zero eta", opt.mode_id));
            }
            if !seen.insert(opt.mode_id) {
                return Err(format!("duplicate option mode {}", opt.mode_id));
            }
        }
        Ok(())
    }
}

/// Per-file parse diagnostics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ParseStats {
    /// Non-blank lines that failed to parse or violated an invariant.
    pub rejected_lines: usize,
    /// Records superseded by a later record with the same sid.
    pub duplicate_sids: usize,
    /// Individually invalid plan options dropped from otherwise-valid records.
    pub dropped_options: usize,
}

/// Parse result: surviving records plus diagnostics.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub records: Vec<T>,
    pub stats: ParseStats,
}

#[derive(Deserialize)]
struct RawQuery {
    sid: String,
    o: String,
    d: String,
    ts: i64,
}

#[derive(Deserialize)]
struct RawPlanOption {
    mode: i64,
    dist: i64,
    eta: i64,
    #[serde(default)]
    price: Option<i64>,
}

#[derive(Deserialize)]
struct RawDisplay {
    sid: String,
    ts: i64,
    plans: Vec<RawPlanOption>,
}

#[derive(Deserialize)]
struct RawClick {
    sid: String,
    click: ModeId,
    ts: i64,
}

fn read_lines<T>(
    source: impl BufRead,
    mut parse_line: impl FnMut(&str, &mut ParseStats) -> Option<T>,
    sid_of: impl Fn(&T) -> &str,
) -> Result<Parsed<T>> {
    let mut records: Vec<T> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut stats = ParseStats::default();

    for line in source.lines() {
        let line = line.map_err(|e| Error::Domain(format!("unreadable input: {e}")))?;
        let trimmed = line.trim();
        // Blank lines and '#' comments (digest headers) are not records.
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_line(&line, &mut stats) {
            Some(record) => {
                let sid = sid_of(&record).to_owned();
                match index.get(&sid) {
                    // Last record wins; earlier one is replaced in place.
                    Some(&at) => {
                        records[at] = record;
                        stats.duplicate_sids += 1;
                    }
                    None => {
                        index.insert(sid, records.len());
                        records.push(record);
                    }
                }
            }
            None => stats.rejected_lines += 1,
        }
    }
    Ok(Parsed { records, stats })
}

/// Parses `queries.jsonl`. Malformed lines are skipped and counted;
/// a read failure on the source is fatal.
pub fn parse_queries(source: impl BufRead) -> Result<Parsed<QueryRecord>> {
    read_lines(
        source,
        |line, _| {
            let raw: RawQuery = serde_json::from_str(line).ok()?;
            if raw.sid.is_empty() {
                return None;
            }
            Some(QueryRecord {
                origin: GeoPoint::from_lng_lat_str(&raw.o)?,
                destination: GeoPoint::from_lng_lat_str(&raw.d)?,
                sid: raw.sid,
                timestamp: raw.ts,
            })
        },
        |q| &q.sid,
    )
}

/// Parses `plans.jsonl`. Invalid options are dropped individually; a record
/// is rejected when its sid is empty, a mode appears twice, or no valid
/// option remains.
pub fn parse_plans(source: impl BufRead) -> Result<Parsed<DisplayRecord>> {
    read_lines(
        source,
        |line, stats| {
            let raw: RawDisplay = serde_json::from_str(line).ok()?;
            if raw.sid.is_empty() {
                return None;
            }
            let mut options = Vec::with_capacity(raw.plans.len());
            let mut dropped = 0usize;
            let mut seen = BTreeSet::new();
            for p in raw.plans {
                let mode = u8::try_from(p.mode).ok().and_then(ModeId::new);
                let (Some(mode_id), Ok(distance_m)) = (mode, u64::try_from(p.dist)) else {
                    dropped += 1;
                    continue;
                };
                let Ok(eta_s @ 1..) = u64::try_from(p.eta) else {
                    dropped += 1;
                    continue;
                };
                if !seen.insert(mode_id) {
                    // Duplicate mode within one record: the whole record is bad.
                    return None;
                }
                options.push(PlanOption {
                    mode_id,
                    distance_m,
                    eta_s,
                    price: p.price,
                });
            }
            if options.is_empty() {
                return None;
            }
            stats.dropped_options += dropped;
            Some(DisplayRecord {
                sid: raw.sid,
                options,
                timestamp: raw.ts,
            })
        },
        |d| &d.sid,
    )
}

/// Parses `clicks.jsonl`. A click outside `1..=11` rejects the line;
/// duplicate sids keep the later record.
pub fn parse_clicks(source: impl BufRead) -> Result<Parsed<ClickRecord>> {
    read_lines(
        source,
        |line, _| {
            let raw: RawClick = serde_json::from_str(line).ok()?;
            if raw.sid.is_empty() {
                return None;
            }
            Some(ClickRecord {
                sid: raw.sid,
                clicked_mode_id: raw.click,
                timestamp: raw.ts,
            })
        },
        |c| &c.sid,
    )
}

/// Why a clicked session was dropped during the join.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct JoinDiagnostics {
    /// No query record for the clicked sid.
    pub missing_query: usize,
    /// No display record for the clicked sid.
    pub missing_display: usize,
    /// The clicked mode is outside the allowed set.
    pub click_mode_not_allowed: usize,
    /// The clicked mode was not among the displayed options.
    pub click_not_displayed: usize,
    /// Clicks superseded by a later click with the same sid.
    pub duplicate_clicks: usize,
    /// Sessions kept despite origin == destination.
    pub degenerate_od: usize,
}

impl JoinDiagnostics {
    /// Dropped sessions across all causes (duplicates are not drops).
    pub fn total_dropped(&self) -> usize {
        self.missing_query
            + self.missing_display
            + self.click_mode_not_allowed
            + self.click_not_displayed
    }
}

/// Joins the three parsed collections by sid into validated [`Session`]s.
///
/// One session is emitted per distinct clicked sid that has a query and a
/// display, whose clicked mode is allowed and actually displayed. Options
/// are restricted to `allowed_modes`. The result is sorted by sid, so the
/// output is independent of input record order.
pub fn join_sessions(
    queries: &[QueryRecord],
    displays: &[DisplayRecord],
    clicks: &[ClickRecord],
    allowed_modes: &BTreeSet<ModeId>,
) -> (Vec<Session>, JoinDiagnostics) {
    let query_by_sid: HashMap<&str, &QueryRecord> =
        queries.iter().map(|q| (q.sid.as_str(), q)).collect();
    let display_by_sid: HashMap<&str, &DisplayRecord> =
        displays.iter().map(|d| (d.sid.as_str(), d)).collect();

    let mut diag = JoinDiagnostics::default();
    let mut click_by_sid: HashMap<&str, &ClickRecord> = HashMap::new();
    for click in clicks {
        if click_by_sid.insert(click.sid.as_str(), click).is_some() {
            diag.duplicate_clicks += 1;
        }
    }

    let mut sessions = Vec::new();
    let mut sids: Vec<&str> = click_by_sid.keys().copied().collect();
    sids.sort_unstable();

    for sid in sids {
        let click = click_by_sid[sid];
        let Some(query) = query_by_sid.get(sid) else {
            diag.missing_query += 1;
            continue;
        };
        let Some(display) = display_by_sid.get(sid) else {
            diag.missing_display += 1;
            continue;
        };
        if !allowed_modes.contains(&click.clicked_mode_id) {
            diag.click_mode_not_allowed += 1;
            continue;
        }
        let options: Vec<PlanOption> = display
            .options
            .iter()
            .filter(|o| allowed_modes.contains(&o.mode_id))
            .cloned()
            .collect();
        let Some(clicked) = options.iter().find(|o| o.mode_id == click.clicked_mode_id) else {
            diag.click_not_displayed += 1;
            continue;
        };
        let session = Session {
            sid: sid.to_owned(),
            origin: query.origin,
            destination: query.destination,
            clicked_mode_id: click.clicked_mode_id,
            clicked_eta_s: clicked.eta_s,
            clicked_distance_m: clicked.distance_m,
            options,
        };
        if session.degenerate_od() {
            diag.degenerate_od += 1;
        }
        sessions.push(session);
    }
    (sessions, diag)
}
