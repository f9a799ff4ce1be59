//! Builds a tiny optimization instance by hand, solves it, and checks the
//! solution against the exhaustive oracle.
//!
//! Run with: cargo run --example solve_instance

use ecomode::emission::EmissionTable;
use ecomode::ingest::{GeoPoint, ModeId, PlanOption, Session};
use ecomode::modes::ModeMapping;
use ecomode::optimizer::{brute_force_oracle, build_instance, solve, verify_assignment};

fn session(sid: &str, options: Vec<PlanOption>, clicked: u8) -> Session {
    let clicked_mode_id = ModeId::new(clicked).unwrap();
    let picked = options
        .iter()
        .find(|o| o.mode_id == clicked_mode_id)
        .unwrap();
    Session {
        sid: sid.to_string(),
        origin: GeoPoint::new(39.90, 116.40).unwrap(),
        destination: GeoPoint::new(39.95, 116.45).unwrap(),
        clicked_eta_s: picked.eta_s,
        clicked_distance_m: picked.distance_m,
        clicked_mode_id,
        options,
    }
}

fn option(mode: u8, distance_m: u64, eta_s: u64) -> PlanOption {
    PlanOption {
        mode_id: ModeId::new(mode).unwrap(),
        distance_m,
        eta_s,
        price: None,
    }
}

fn main() -> anyhow::Result<()> {
    // Three commutes; the user clicked the bus each time. Faster or
    // cleaner displayed alternatives exist within the clicked time.
    let sessions = vec![
        session(
            "morning",
            vec![
                option(1, 6_000, 1_500),
                option(2, 7_000, 900),
                option(6, 5_500, 1_400),
            ],
            1,
        ),
        session(
            "lunch",
            vec![
                option(1, 2_000, 700),
                option(5, 1_800, 1_300),
                option(6, 1_900, 500),
            ],
            1,
        ),
        session(
            "evening",
            vec![
                option(1, 6_200, 1_600),
                option(3, 8_000, 800),
                option(2, 7_000, 1_000),
            ],
            1,
        ),
    ];

    let mapping = ModeMapping::bundled_default();
    let table = EmissionTable::default();
    let instance = build_instance(&sessions, &mapping, &table, 1.0, 1.0)?;

    let solution = solve(&instance);
    let violations = verify_assignment(&instance, &solution.assignment);
    assert!(
        violations.is_empty(),
        "solver broke a constraint: {violations:?}"
    );
    let oracle = brute_force_oracle(&instance)?;
    assert_eq!(solution.assignment.chosen, oracle.assignment.chosen);

    println!(
        "objective {:.1} (clicked baseline {:.1})",
        solution.objective,
        instance.baseline_objective()
    );
    for (row, &col) in solution.assignment.chosen.iter().enumerate() {
        let s = &instance.sessions()[row];
        let clicked = instance.clicked_cell(row);
        let chosen = instance.cell(row, col).unwrap();
        println!(
            "{:<8} {} -> {}: co2 {:.0} g -> {:.0} g, eta {} s -> {} s",
            s.sid,
            mapping.means_of(s.clicked_mode_id),
            mapping.means_of(instance.mode_of_col(col)),
            clicked.co2_g,
            chosen.co2_g,
            clicked.eta_s,
            chosen.eta_s,
        );
    }
    println!("oracle agrees with the per-session solver");
    Ok(())
}
