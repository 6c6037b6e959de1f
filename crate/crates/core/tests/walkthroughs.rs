//! Four-slot walk-throughs of the cooperative-nulling and side-information
//! schemes under the trace (1,1), (0,1), (1,0), (0,0).

use bursty_relay::sim::{run, run_logged, SimConfig};
use bursty_relay::{AntennaConfig, SchemeKind, TrafficTrace, User};

fn walk(config: AntennaConfig, scheme: SchemeKind, seed: u64) -> bursty_relay::Metrics {
    let trace = TrafficTrace::from_pairs(&[(1, 1), (0, 1), (1, 0), (0, 0)]);
    let mut sim = SimConfig::forced(config, scheme, trace, seed);
    sim.drain_slots = 0;
    sim.audit = true;
    run(&sim).unwrap()
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

#[test]
fn cooperative_nulling_schedule() {
    for seed in 0..5 {
        let m = walk(AntennaConfig::new(4, 1, 2), SchemeKind::CoopNullC2, seed);
        let (rx1, rx2) = (User::One, User::Two);
        assert_eq!(m.decoded_at(1, rx1), ["a3"]);
        assert_eq!(m.decoded_at(1, rx2), ["b3"]);
        assert_eq!(m.decoded_at(2, rx1), ["a1"]);
        assert_eq!(m.decoded_at(2, rx2), ["b6"]);
        assert_eq!(m.decoded_at(3, rx1), ["a6"]);
        assert_eq!(m.decoded_at(3, rx2), ["b1"]);
        assert_eq!(m.decoded_at(4, rx1), ["a4"]);
        assert_eq!(m.decoded_at(4, rx2), ["b4"]);
        assert!(m.exact());
        assert_eq!(m.foreign_observations, 0);
    }
}

#[test]
fn side_information_schedule() {
    for seed in 0..5 {
        let m = walk(AntennaConfig::new(7, 3, 1), SchemeKind::SideInfoC3, seed);
        let (rx1, rx2) = (User::One, User::Two);
        // slot 1: a3, a4 clean; a2 collides with the side information b1
        assert_eq!(sorted(m.decoded_at(1, rx1)), ["a3", "a4"]);
        assert_eq!(sorted(m.decoded_at(2, rx1)), ["a1", "a2", "b1", "b5"]);
        assert_eq!(
            sorted(m.decoded_at(3, rx2)),
            ["a1", "a5", "b1", "b2", "b6", "b7", "b8"]
        );
        assert_eq!(m.decoded_at(4, rx1), ["a5"]);
        assert_eq!(m.decoded_at(4, rx2), ["b5"]);
        assert!(m.exact());
    }
}

#[test]
fn slot_log_records_every_slot() {
    let trace = TrafficTrace::from_pairs(&[(1, 1), (0, 1), (1, 0), (0, 0)]);
    let sim = SimConfig::forced(
        AntennaConfig::new(4, 1, 2),
        SchemeKind::CoopNullC2,
        trace,
        1,
    );
    let mut buf = Vec::new();
    run_logged(&sim, Some(&mut buf)).unwrap();
    let lines: Vec<serde_json::Value> = String::from_utf8(buf)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines.len() >= 4);
    assert_eq!(lines[1]["decoded"]["rx1"], serde_json::json!(["a1"]));
    assert_eq!(
        lines[3]["emissions"]["relay"],
        serde_json::json!(["a4", "b4"])
    );
    assert_eq!(lines[0]["state"], serde_json::json!([1, 1]));
}
