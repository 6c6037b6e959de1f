//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use bursty_relay::sim::{run, SimConfig};
use bursty_relay::{
    achievable_per_user, classify, estimate_dof, relay_channel_dof, stability_report,
    AntennaConfig, DofEstimate, Metrics, RegimeClass, SchemeKind, TrafficModel, TrafficTrace, User,
    Q,
};
use bursty_relay_cli::{cmd_check, cmd_sweep, RunSpec};

const SLOTS: usize = 200_000;
const REPS: usize = 5;
const SEED: u64 = 7;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

/// Every Monte-Carlo run seen so far, for the exactness criterion.
#[derive(Default)]
struct Ledger {
    runs: usize,
    mismatches: u64,
    zf: u64,
    observation: u64,
}

impl Ledger {
    fn add(&mut self, runs: &[Metrics]) {
        for m in runs {
            self.runs += 1;
            self.mismatches += m.decode_mismatches;
            self.zf += m.zf_violations;
            self.observation += m.observation_mismatches;
        }
    }
}

fn estimate(
    config: AntennaConfig,
    scheme: SchemeKind,
    p: f64,
    eps: f64,
    ledger: &mut Ledger,
) -> DofEstimate {
    let sim = SimConfig::new(config, TrafficModel::new(p, eps), scheme, SLOTS, SEED);
    let est = estimate_dof(&sim, REPS).expect("simulation runs");
    ledger.add(&est.runs);
    est
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn c1_golden() -> Outcome {
    let config = AntennaConfig::new(10, 1, 2);
    let bad: Vec<i64> = (1..=9)
        .filter(|&k| {
            let p = Q::new(k, 10);
            relay_channel_dof(config, p) != (Q::from(3) * p).min(Q::from(1))
        })
        .collect();
    check(
        bad.is_empty(),
        format!("(10,1,2) min(3p,1) on p = 0.1..0.9, mismatches at k = {bad:?}"),
    )
}

fn c2_oracle() -> Outcome {
    let r = cmd_check(8, 8, 8, 99).expect("valid grid");
    check(
        r.disagreements.is_empty(),
        format!(
            "{} configs, {} disagreements",
            r.scanned,
            r.disagreements.len()
        ),
    )
}

fn c3_interference_free() -> Outcome {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for m in 1..=10 {
        for n in 1..=10 {
            for l in 0..=10 {
                let config = AntennaConfig::new(m, n, l);
                if !matches!(
                    classify(config),
                    RegimeClass::C1 | RegimeClass::C2 | RegimeClass::C3Prime
                ) {
                    continue;
                }
                for k in 1..=99 {
                    let p = Q::new(k, 100);
                    checked += 1;
                    if achievable_per_user(config, p).ok() != Some(relay_channel_dof(config, p)) {
                        bad.push((config, p));
                    }
                }
            }
        }
    }
    check(
        bad.is_empty(),
        format!("{checked} (config, p) points, {} mismatches", bad.len()),
    )
}

fn walk(config: AntennaConfig, scheme: SchemeKind) -> Metrics {
    let trace = TrafficTrace::from_pairs(&[(1, 1), (0, 1), (1, 0), (0, 0)]);
    let mut sim = SimConfig::forced(config, scheme, trace, SEED);
    sim.drain_slots = 0;
    sim.audit = true;
    run(&sim).expect("forced trace runs")
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

fn c4_coop_trace() -> Outcome {
    let m = walk(AntennaConfig::new(4, 1, 2), SchemeKind::CoopNullC2);
    let (r1, r2) = (User::One, User::Two);
    let ok = m.decoded_at(2, r1) == ["a1"]
        && m.decoded_at(3, r2) == ["b1"]
        && m.decoded_at(4, r1) == ["a4"]
        && m.decoded_at(4, r2) == ["b4"]
        && m.exact();
    check(
        ok,
        format!(
            "a1@2 {:?}, b1@3 {:?}, slot 4 {:?}/{:?}",
            m.decoded_at(2, r1),
            m.decoded_at(3, r2),
            m.decoded_at(4, r1),
            m.decoded_at(4, r2)
        ),
    )
}

fn c5_side_info_trace() -> Outcome {
    let m = walk(AntennaConfig::new(7, 3, 1), SchemeKind::SideInfoC3);
    let slot2 = sorted(m.decoded_at(2, User::One));
    let ok = ["a1", "b1", "b5"]
        .iter()
        .all(|s| slot2.iter().any(|x| x == s))
        && m.decoded_at(4, User::One) == ["a5"]
        && m.decoded_at(4, User::Two) == ["b5"]
        && m.exact();
    check(
        ok,
        format!(
            "rx1 slot 2 {slot2:?}, slot 4 {:?}/{:?}",
            m.decoded_at(4, User::One),
            m.decoded_at(4, User::Two)
        ),
    )
}

fn main() {
    let mut ledger = Ledger::default();
    let mut failures = 0;
    let mut report = |id: u32, limit: Duration, start: Instant, o: Outcome| {
        let elapsed = start.elapsed();
        let ok = o.ok && elapsed < limit;
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {id:>2}: {} ({}; {:.2?} of {:?})",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            elapsed,
            limit
        );
    };

    let t = Instant::now();
    report(1, Duration::from_secs(1), t, c1_golden());
    let t = Instant::now();
    report(2, Duration::from_secs(60), t, c2_oracle());
    let t = Instant::now();
    report(3, Duration::from_secs(60), t, c3_interference_free());
    let t = Instant::now();
    report(4, Duration::from_secs(1), t, c4_coop_trace());
    let t = Instant::now();
    report(5, Duration::from_secs(1), t, c5_side_info_trace());

    let c2 = AntennaConfig::new(4, 1, 2);
    let t = Instant::now();
    let low = estimate(c2, SchemeKind::CoopNullC2, 0.2, 0.01, &mut ledger);
    let verdicts: Vec<String> = low
        .runs
        .iter()
        .map(|m| stability_report(m).to_string())
        .collect();
    let stable = low.runs.iter().all(|m| stability_report(m).is_stable());
    let stable_max = low
        .runs
        .iter()
        .filter_map(|m| m.queue_max("type1"))
        .max()
        .unwrap_or(0);
    report(
        6,
        Duration::from_secs(30),
        t,
        check(
            within(low.mean[0], 0.6, 0.02) && within(low.mean[1], 0.6, 0.02) && stable,
            format!(
                "dof {:.4}/{:.4}, {}",
                low.mean[0],
                low.mean[1],
                if stable {
                    "stable".to_string()
                } else {
                    verdicts.join("; ")
                }
            ),
        ),
    );

    let t = Instant::now();
    let a = estimate(c2, SchemeKind::CoopNullC2, 0.6, 0.01, &mut ledger);
    let b = estimate(
        AntennaConfig::new(7, 3, 1),
        SchemeKind::SideInfoC3,
        0.75,
        0.01,
        &mut ledger,
    );
    let c = estimate(
        AntennaConfig::new(1, 1, 2),
        SchemeKind::SisoRelay,
        0.7,
        0.02,
        &mut ledger,
    );
    let ok = within(a.mean[0], 0.97, 0.02)
        && within(a.mean[1], 0.97, 0.02)
        && within(b.mean[0], 2.49, 0.03)
        && within(b.mean[1], 2.49, 0.03)
        && within(c.sum_mean, 0.98, 0.02);
    report(
        7,
        Duration::from_secs(120),
        t,
        check(
            ok,
            format!(
                "(4,1,2) {:.4}/{:.4}, (7,3,1) {:.4}/{:.4}, SISO sum {:.4}",
                a.mean[0], a.mean[1], b.mean[0], b.mean[1], c.sum_mean
            ),
        ),
    );

    let t = Instant::now();
    let d = estimate(
        AntennaConfig::new(7, 3, 1),
        SchemeKind::SideInfoC3,
        0.25,
        0.01,
        &mut ledger,
    );
    report(
        8,
        Duration::from_secs(30),
        t,
        check(
            within(d.mean[0], 1.0, 0.02) && within(d.mean[1], 1.0, 0.02),
            format!("dof {:.4}/{:.4}", d.mean[0], d.mean[1]),
        ),
    );

    let t = Instant::now();
    let off = SimConfig::new(
        c2,
        TrafficModel::new(0.5, 0.01).with_q(1.0),
        SchemeKind::CoopNullC2,
        SLOTS,
        SEED,
    );
    let off = run(&off).expect("simulation runs");
    ledger.add(std::slice::from_ref(&off));
    let verdict = stability_report(&off);
    let off_max = off.queue_max("type1").unwrap_or(0);
    let exact_so_far = (ledger.mismatches, ledger.zf, ledger.observation) == (0, 0, 0);
    let t9 = Instant::now();
    report(
        9,
        Duration::from_secs(1),
        t9,
        check(
            exact_so_far,
            format!(
                "{} runs, {} decode mismatches, {} zero-forcing violations, {} observation mismatches",
                ledger.runs, ledger.mismatches, ledger.zf, ledger.observation
            ),
        ),
    );
    report(
        10,
        Duration::from_secs(30),
        t,
        check(
            !verdict.is_stable() && off_max > 10 * stable_max,
            format!("{verdict}, type1 max {off_max} vs stable {stable_max}"),
        ),
    );

    let t = Instant::now();
    let spec = RunSpec {
        m: 4,
        n: 1,
        p_min: 0.05,
        p_max: 0.95,
        p_steps: 19,
        l_list: Some(vec![0, 2]),
        ..RunSpec::default()
    };
    let csv = cmd_sweep(&spec).expect("sweep runs");
    let rows: Vec<Vec<String>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    let column = |l: &str, col: usize| -> Vec<(String, String)> {
        rows.iter()
            .filter(|r| r[3] == l)
            .map(|r| (r[0].clone(), r[col].clone()))
            .collect()
    };
    let without = column("0", 4);
    let with = column("2", 6);
    let gaps: Vec<bool> = with
        .iter()
        .zip(&without)
        .map(|((p1, a), (p2, ind))| {
            let (a, ind, p): (f64, f64, f64) = (
                a.parse().unwrap(),
                ind.parse().unwrap(),
                p1.parse().unwrap(),
            );
            p1 == p2 && ind == p && a > ind
        })
        .collect();
    report(
        11,
        Duration::from_secs(60),
        t,
        check(
            gaps.len() == 19 && gaps.iter().all(|&g| g),
            format!(
                "{} of {} grid points show the relay gain",
                gaps.iter().filter(|&&g| g).count(),
                gaps.len()
            ),
        ),
    );

    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
