//! Moment-Markov bounds for the centred degree of a vertex.

use bellcord::tailsim::{markov_bound, tail_threshold, KStrategy, TailBoundQuery};

fn main() -> bellcord::Result<()> {
    let chi = 2.0;
    let t = tail_threshold(chi)?;
    println!("threshold e^v at chi=2: {t:.5}");
    for n in [1_000u64, 100_000, 10_000_000] {
        let rho = chi * (n as f64).ln();
        for mult in [1.1, 1.5, 2.0] {
            for strat in [KStrategy::FloorLogN, KStrategy::Optimize { max_k: None }] {
                let q = TailBoundQuery::relative(n, rho, mult * t, strat, false);
                let b = markov_bound(&q)?;
                println!(
                    "n={n:<9} s/rho={:.3} {:<12} k={:<3} log10 bound {:>9.4} finite-n {:>9.4}",
                    mult * t,
                    format!("{strat:?}").split_whitespace().next().unwrap(),
                    b.k_used,
                    b.bell_approx.log10_abs(),
                    b.finite_n.map_or(f64::NAN, |v| v.log10_abs())
                );
            }
        }
    }
    Ok(())
}
