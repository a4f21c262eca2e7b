//! Seeded Monte Carlo run of vertex degrees in G(n, ρ/n) with the theorems'
//! verdict.

use bellcord::tailsim::{sample_degree_experiment, theorem_verdict, ExperimentConfig};

const CONFIG: &str = r#"{
  "n_values": [1000, 10000, 100000],
  "rho_rule": {"kind": "chi_log_n", "chi": 2.0},
  "trials": 20000,
  "seed": 2024,
  "thresholds": [0.4, 0.6, 0.8],
  "measure": "single_vertex"
}"#;

fn main() -> bellcord::Result<()> {
    let cfg = ExperimentConfig::from_json(CONFIG)?;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let result = sample_degree_experiment(&cfg, threads)?;
    for s in &result.summaries {
        println!("n={:<7} rho={:.3} mean={:.4} max={} p99 |D/rho-1|={:.3}", s.n, s.rho, s.mean, s.max, s.p99_scaled_deviation);
    }
    let verdict = theorem_verdict(&cfg, &result)?;
    if let Some(t) = verdict.threshold_scale {
        println!("threshold scale e^v = {t:.5}");
    }
    for r in &verdict.rows {
        println!(
            "  n={:<7} s={:.2} freq={:.5} log10 bound={:>8.3} {:?} respected={}",
            r.n, r.threshold, r.frequency, r.log10_bound.unwrap_or(f64::NAN), r.prediction, r.bound_respected
        );
    }
    for (s, dec) in &verdict.trend_decreasing {
        println!("  s={s}: frequency decreasing in n: {dec}");
    }
    println!("{:.3}s", result.wall_time);
    Ok(())
}
