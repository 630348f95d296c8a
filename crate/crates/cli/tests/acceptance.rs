//! End-to-end acceptance run. Every criterion prints one PASS/FAIL line;
//! the process fails if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use fbl_bounds::bounds::{decision_radius, evaluate, p_pair};
use fbl_bounds::distance::{dmin_lower, dmin_upper};
use fbl_bounds::geometry::{angle_fraction, angle_fraction_quadrature};
use fbl_bounds::sim::{mc_p_pair, mc_radius_check};
use fbl_bounds::verify::{run_suite, Suite};
use fbl_bounds::{CapAngle, EnergySpec, SystemConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn fbl(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fbl")).args(args).output().expect("spawn fbl")
}

fn reference(n: u32, k: u32, energy: EnergySpec) -> SystemConfig {
    SystemConfig::new(2, n, k, 0.05, 0.5, energy).unwrap()
}

fn radius_correctness() -> Outcome {
    let sigma = 0.5f64.sqrt();
    let mut misses = Vec::new();
    for n in [8u32, 32, 128] {
        for eps in [0.05, 0.01] {
            let r = decision_radius(n, sigma, eps).unwrap();
            let est = mc_radius_check(n, sigma, r, 1_000_000, 1000 + n as u64).unwrap();
            if !est.contains(eps) {
                misses.push(format!("n={n} eps={eps} ci=[{:.5},{:.5}]", est.lower, est.upper));
            }
        }
    }
    Outcome::new(misses.is_empty(), if misses.is_empty() { "6 of 6 intervals contain eps".into() } else { misses.join("; ") })
}

fn pair_oracle() -> Outcome {
    let mut checked = 0;
    let mut misses = Vec::new();
    for n in [2u32, 8, 16] {
        let r = decision_radius(n, 1.0, 0.05).unwrap();
        for factor in [2.0, 2.2, 2.5] {
            let d = factor * r;
            let exact = p_pair(n, 1.0, r, d).unwrap().probability.value();
            if exact < 1e-4 {
                continue;
            }
            checked += 1;
            let est = mc_p_pair(n, 1.0, r, d, 10_000_000, 77 + n as u64).unwrap();
            if !est.contains(exact) {
                misses.push(format!("n={n} D={factor}R p={exact:.4e} ci=[{:.4e},{:.4e}]", est.lower, est.upper));
            }
        }
    }
    let passed = checked > 0 && misses.is_empty();
    let detail = if misses.is_empty() { format!("{checked} points inside the Monte Carlo interval") } else { misses.join("; ") };
    Outcome::new(passed, detail)
}

fn cap_fraction_dual() -> Outcome {
    let angles = [0.1, 0.5, 1.0, std::f64::consts::FRAC_PI_2, 2.0, 3.0];
    let mut worst = 0.0f64;
    for n in 3u32..=64 {
        for &theta in &angles {
            let t = CapAngle::new(theta).unwrap();
            let a = angle_fraction(n, t).unwrap().value();
            let b = angle_fraction_quadrature(n, t).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    Outcome::new(worst <= 1e-10, format!("largest absolute difference {worst:.3e}"))
}

fn hamming_bound() -> Outcome {
    let small = dmin_upper(2, 7, 4).unwrap();
    let mut bad = Vec::new();
    for m in [2u32, 3, 4, 8, 16] {
        for n in 2u32..=64 {
            let d = dmin_upper(m, n, n).unwrap();
            if d != 2 {
                bad.push(format!("M={m} n={n} gives {d}"));
            }
        }
    }
    let passed = small == 4 && bad.is_empty();
    Outcome::new(passed, format!("dmin_upper(2,7,4)={small}; full-rate mismatches: {}", bad.len()))
}

fn property_suites() -> Outcome {
    let suites = [
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Lemma4,
        Suite::Lemma5,
        Suite::Thm4,
        Suite::Thm5,
        Suite::Thm6,
        Suite::Thm7,
        Suite::Cor1,
    ];
    let mut parts = Vec::new();
    let mut passed = true;
    for s in suites {
        let report = run_suite(s).unwrap();
        let ok = report.checks.iter().filter(|c| c.passed).count();
        passed &= report.passed;
        parts.push(format!("{} {}/{}", s.name(), ok, report.checks.len()));
    }
    Outcome::new(passed, parts.join(", "))
}

struct Row {
    dmin_min: u64,
    dmin_max: u64,
    lb: f64,
    ub: f64,
    feasible: bool,
}

fn read_rows(csv_text: &[u8]) -> Vec<Row> {
    let mut reader = csv::Reader::from_reader(csv_text);
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            Row {
                dmin_min: r[8].parse().unwrap(),
                dmin_max: r[9].parse().unwrap(),
                lb: r[10].parse().unwrap(),
                ub: r[11].parse().unwrap(),
                feasible: r[14].parse().unwrap(),
            }
        })
        .collect()
}

fn blocklength_sweep_shape() -> Outcome {
    let ceiling = 0.05f64.log10() - 2.0;
    let mut passed = true;
    let mut parts = Vec::new();
    for k in [16u32, 32] {
        let grid = format!("{}:128:1", k + 1);
        let out = fbl(&["sweep", "--k", &k.to_string(), "--ebn0-db", "0", "--axis", "blocklength", "--grid", &grid]);
        assert!(out.status.success(), "sweep failed: {}", String::from_utf8_lossy(&out.stderr));
        let rows = read_rows(&out.stdout);
        let feasible: Vec<&Row> = rows.iter().filter(|r| r.feasible).collect();
        let below = feasible.iter().all(|r| r.lb < ceiling && r.ub < ceiling);
        let lb_rises = rows
            .windows(2)
            .filter(|w| w[0].dmin_max == w[1].dmin_max && w[1].lb > w[0].lb)
            .count();
        let ub_rises = rows
            .windows(2)
            .filter(|w| w[0].dmin_min == w[1].dmin_min && w[1].ub > w[0].ub)
            .count();
        passed &= !feasible.is_empty() && below && lb_rises == 0 && ub_rises == 0;
        let max_ub = feasible.iter().map(|r| r.ub).fold(f64::NEG_INFINITY, f64::max);
        parts.push(format!(
            "k={k}: {} feasible n, max log10 UB {max_ub:.2} (limit {ceiling:.2}), rises within intervals LB {lb_rises} UB {ub_rises}",
            feasible.len()
        ));
    }
    Outcome::new(passed, parts.join("; "))
}

fn energy_sweep_shape() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (n, k) in [(32u32, 16u32), (62, 32)] {
        let out = fbl(&[
            "sweep", "--n", &n.to_string(), "--k", &k.to_string(), "--axis", "ebn0-db", "--grid", "-3:12:0.125",
        ]);
        assert!(out.status.success(), "sweep failed: {}", String::from_utf8_lossy(&out.stderr));
        let rows = read_rows(&out.stdout);
        let mut bad = 0;
        let mut jumps = 0;
        for w in rows.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.dmin_min == b.dmin_min {
                bad += usize::from(!(b.lb < a.lb && b.ub < a.ub));
            } else {
                jumps += 1;
                bad += usize::from(!(b.lb < a.lb && b.ub > a.ub));
            }
        }
        // Each change of the smallest distance sits at E_i = 4R²/i,
        // and the upper bound steps up there.
        let template = reference(n, k, EnergySpec::Total(1.0));
        let r = template.radius().unwrap();
        let mut misplaced = 0;
        let first = evaluate(&template.with_energy(EnergySpec::EbN0Db(-3.0))).unwrap().distance.dmin_min;
        let last = evaluate(&template.with_energy(EnergySpec::EbN0Db(12.0))).unwrap().distance.dmin_min;
        for i in last..first {
            let ei = 4.0 * r * r / i as f64;
            let at = template.with_energy(EnergySpec::Total(ei));
            let left = template.with_energy(EnergySpec::Total(ei * (1.0 - 1e-12)));
            let step_ok = dmin_lower(&at).unwrap() == i && dmin_lower(&left).unwrap() == i + 1;
            let ub_at = evaluate(&at).unwrap().rates.pcon_ub.log_value();
            let ub_left = evaluate(&left).unwrap().rates.pcon_ub.log_value();
            misplaced += usize::from(!(step_ok && ub_at > ub_left));
        }
        passed &= bad == 0 && misplaced == 0 && jumps > 0;
        parts.push(format!("({n},{k}): {jumps} jumps, {bad} grid violations, {misplaced} misplaced jumps"));
    }
    Outcome::new(passed, parts.join("; "))
}

fn simulator() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sim.json");
    let out = fbl(&[
        "simulate",
        "--M", "2",
        "--n", "16",
        "--k", "8",
        "--epsilon", "0.05",
        "--distance-unit", "antipodal",
        "--ebn0-db", "10",
        "--min-distance", "auto",
        "--trials", "1000000",
        "--seed", "42",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "simulate failed: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let err = &v["summary"]["error"];
    let (lo, hi) = (err["lower"].as_f64().unwrap(), err["upper"].as_f64().unwrap());
    let ci_ok = lo <= 0.05 && 0.05 <= hi;
    let conf = v["summary"]["confusion"]["rate"].as_f64().unwrap();
    let ub = v["bounds"]["rates"]["pcon_ub"]["value"].as_f64().unwrap();
    let conf_ok = conf <= ub;
    let sweep = fbl(&["verify", "thm1"]);
    let sweep_ok = sweep.status.success();
    Outcome::new(
        ci_ok && conf_ok && sweep_ok,
        format!(
            "error ci [{lo:.5},{hi:.5}], confusion {conf:.3e} vs UB {ub:.3e}, radius sweep monotone: {sweep_ok}"
        ),
    )
}

fn run_twice(args: &[&str], dir: &Path, name: &str, threads: [&str; 2]) -> bool {
    let outputs: Vec<Vec<u8>> = threads
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let path = dir.join(format!("{name}-{i}"));
            let status = Command::new(env!("CARGO_BIN_EXE_fbl"))
                .args(args)
                .arg("--out")
                .arg(&path)
                .env("FBL_THREADS", t)
                .status()
                .unwrap();
            assert!(status.success(), "{name} run failed");
            std::fs::read(&path).unwrap()
        })
        .collect();
    !outputs[0].is_empty() && outputs[0] == outputs[1]
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let sweep = ["sweep", "--k", "16", "--axis", "blocklength", "--grid", "17:128:1"];
    let energy = ["sweep", "--n", "62", "--k", "32", "--axis", "ebn0-db", "--grid", "-3:12:0.5", "--format", "json"];
    let sim_csv = ["simulate", "--n", "16", "--k", "8", "--trials", "200000", "--seed", "42", "--format", "csv"];
    let sim_json = ["simulate", "--n", "12", "--k", "6", "--trials", "100000", "--seed", "3"];
    let results = [
        ("blocklength sweep", run_twice(&sweep, dir.path(), "a", ["1", "1"])),
        ("energy sweep", run_twice(&energy, dir.path(), "b", ["1", "4"])),
        ("simulate csv", run_twice(&sim_csv, dir.path(), "c", ["1", "4"])),
        ("simulate json", run_twice(&sim_json, dir.path(), "d", ["2", "2"])),
    ];
    let passed = results.iter().all(|r| r.1);
    let detail = results.iter().map(|(n, ok)| format!("{n} {}", if *ok { "identical" } else { "differs" })).collect::<Vec<_>>();
    Outcome::new(passed, detail.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("radius round trip", radius_correctness),
        ("pairwise probability vs Monte Carlo", pair_oracle),
        ("cap fraction two ways", cap_fraction_dual),
        ("Hamming bound", hamming_bound),
        ("property suites", property_suites),
        ("bounds versus blocklength", blocklength_sweep_shape),
        ("bounds versus Eb/N0", energy_sweep_shape),
        ("end-to-end simulator", simulator),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("acceptance {} {tag} {name} ({secs:.1} s): {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.passed);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
