//! Per-kilometer CO2 emission rates and per-plan emission amounts.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::TransportMeans;

/// Grams of CO2 emitted per person per kilometer, by base category.
///
/// Combined means use the mean of their components' rates; taxis and
/// private driving both use the passenger-car rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionTable {
    pub passenger_car: f64,
    pub bus: f64,
    pub railway: f64,
    pub cycling: f64,
    pub walking: f64,
}

impl Default for EmissionTable {
    /// Bundled per-km factors (g/person/km).
    fn default() -> Self {
        EmissionTable {
            passenger_car: 145.0,
            bus: 66.0,
            railway: 20.0,
            cycling: 0.0,
            walking: 0.0,
        }
    }
}

impl EmissionTable {
    pub fn validate(&self) -> Result<()> {
        let rates = [
            self.passenger_car,
            self.bus,
            self.railway,
            self.cycling,
            self.walking,
        ];
        if rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::Config(
                "emission rates must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Emission rate in g/person/km for one transport means.
    pub fn rate_for(&self, means: TransportMeans) -> Result<f64> {
        let rate = match means {
            TransportMeans::Bus => self.bus,
            TransportMeans::Subway => self.railway,
            TransportMeans::Driving | TransportMeans::Taxi => self.passenger_car,
            TransportMeans::Walking => self.walking,
            TransportMeans::Cycling => self.cycling,
            TransportMeans::BusAndSubway => (self.bus + self.railway) / 2.0,
            TransportMeans::BusAndShareCycle => (self.bus + self.cycling) / 2.0,
            TransportMeans::Unknown => {
                return Err(Error::Domain("unmapped means: cannot rate unknown".into()))
            }
        };
        Ok(rate)
    }

    /// Grams of CO2 for traveling `distance_m` meters by `means`.
    ///
    /// Double-precision product, no rounding; display formatting happens
    /// at the report layer.
    pub fn plan_emission_g(&self, distance_m: f64, means: TransportMeans) -> Result<f64> {
        if !(distance_m >= 0.0) {
            return Err(Error::Domain(format!("negative distance {distance_m} m")));
        }
        Ok(distance_m / 1000.0 * self.rate_for(means)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| {
            Error::Config(format!(
                "cannot open emissions file {}: {e}",
                path.display()
            ))
        })?;
        let table: EmissionTable = serde_json::from_reader(BufReader::new(file))
            .map_err(|e| Error::Config(format!("bad emissions file {}: {e}", path.display())))?;
        table.validate()?;
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn combined_bus_share_cycle_rate_is_33() {
        let table = EmissionTable::default();
        assert_eq!(
            table.rate_for(TransportMeans::BusAndShareCycle).unwrap(),
            33.0
        );
    }

    #[test]
    fn combined_bus_subway_rate_is_43() {
        let table = EmissionTable::default();
        assert_eq!(table.rate_for(TransportMeans::BusAndSubway).unwrap(), 43.0);
    }

    #[test]
    fn walking_rate_is_zero() {
        let table = EmissionTable::default();
        assert_eq!(table.rate_for(TransportMeans::Walking).unwrap(), 0.0);
    }

    #[test]
    fn taxi_and_driving_use_passenger_car_rate() {
        let table = EmissionTable::default();
        assert_eq!(table.rate_for(TransportMeans::Taxi).unwrap(), 145.0);
        assert_eq!(table.rate_for(TransportMeans::Driving).unwrap(), 145.0);
    }

    #[test]
    fn unknown_means_cannot_be_rated() {
        let table = EmissionTable::default();
        assert!(table.rate_for(TransportMeans::Unknown).is_err());
    }

    #[test]
    fn bus_emission_matches_reference_session() {
        let table = EmissionTable::default();
        let g = table.plan_emission_g(3457.0, TransportMeans::Bus).unwrap();
        assert!((g - 228.162).abs() < 1e-9);
    }

    #[test]
    fn cycling_emission_is_zero_at_any_distance() {
        let table = EmissionTable::default();
        assert_eq!(
            table
                .plan_emission_g(987_654.0, TransportMeans::Cycling)
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn combined_mode_emission_matches_reference_session() {
        let table = EmissionTable::default();
        // Distance reconstructed as emission / rate.
        let distance_m = (1879.315_f64 / 43.0 * 1000.0).round();
        assert_eq!(distance_m, 43705.0);
        let g = table
            .plan_emission_g(distance_m, TransportMeans::BusAndSubway)
            .unwrap();
        assert!((g - 1879.315).abs() < 1e-9);
    }

    #[test]
    fn negative_distance_is_an_error() {
        let table = EmissionTable::default();
        assert!(table.plan_emission_g(-1.0, TransportMeans::Bus).is_err());
    }

    proptest! {
        #[test]
        fn emission_is_linear_in_distance(a in 0.0f64..1e6, b in 0.0f64..1e6) {
            let table = EmissionTable::default();
            let means = TransportMeans::Bus;
            let whole = table.plan_emission_g(a + b, means).unwrap();
            let parts = table.plan_emission_g(a, means).unwrap()
                + table.plan_emission_g(b, means).unwrap();
            let tolerance = 1e-9 * whole.abs().max(1.0);
            prop_assert!((whole - parts).abs() <= tolerance);
        }

        #[test]
        fn emission_is_monotone_in_distance(a in 0.0f64..1e6, delta in 0.0f64..1e6) {
            let table = EmissionTable::default();
            let means = TransportMeans::Driving;
            let near = table.plan_emission_g(a, means).unwrap();
            let far = table.plan_emission_g(a + delta, means).unwrap();
            prop_assert!(far >= near);
        }

        #[test]
        fn share_cycle_rate_is_half_bus_rate(bus in 0.0f64..1000.0) {
            let table = EmissionTable { bus, ..EmissionTable::default() };
            let combined = table.rate_for(TransportMeans::BusAndShareCycle).unwrap();
            prop_assert_eq!(combined, bus / 2.0);
        }
    }
}
