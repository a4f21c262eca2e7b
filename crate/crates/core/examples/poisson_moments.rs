//! Evaluating the polynomials at real x: Horner, Dobinski series and the
//! log-domain path for large k.

use bellcord::evalnum::{
    centered_poisson_moment_series, eval_exact_poly, log_bell, log_restricted_bell, poisson_moment_series,
};
use bellcord::partitions::{bell_polynomial, restricted_bell_polynomial};

fn main() -> bellcord::Result<()> {
    println!("{:>5} {:>8} {:>24} {:>24} {:>6}", "k", "x", "Horner", "series", "terms");
    for (k, x) in [(10, 0.5), (20, 3.0), (40, 40.0), (100, 0.01)] {
        let horner = eval_exact_poly(&bell_polynomial(k)?, x, 256)?;
        let (series, trunc) = poisson_moment_series(k, x, 1e-15)?;
        println!("{k:>5} {x:>8} {:>24.16e} {:>24.16e} {:>6}", horner.to_f64(), series.to_f64(), trunc.terms_used);
    }

    // centred moments of Poisson(x): heavy cancellation in the series at small x
    for (k, x) in [(6, 1.0), (12, 0.2), (30, 5.0)] {
        let horner = eval_exact_poly(&restricted_bell_polynomial(k)?, x, 256)?;
        let (series, _) = centered_poisson_moment_series(k, x, 1e-14)?;
        println!("E(P-x)^{k} at x={x}: {:.15e} / {:.15e}", horner.to_f64(), series.to_f64());
    }

    // far outside f64 range
    for k in [1000, 20000, 100000] {
        let b = log_bell(k, k as f64)?;
        let r = log_restricted_bell(k, k as f64)?;
        println!("k={k}: log10 B_k(k) = {:.6}, log10 restricted = {:.6}", b.log10_abs(), r.log10_abs());
    }
    Ok(())
}
