//! Moments of Bernoulli sums converging to Poisson and centred Poisson moments.

use bellcord::moments::{
    centered_bernoulli_q, exact_binomial_moment, pmf_ratio_check, poisson_limit_gap, BernoulliSumSpec, SummandCount,
};

fn main() -> bellcord::Result<()> {
    let rho = 3.0;
    let k = 8;
    println!("{:>10} {:>14} {:>14}", "n", "raw gap", "centred gap");
    for e in [8, 11, 14, 17, 20] {
        let n = 1u64 << e;
        let (raw, centred) = poisson_limit_gap(n, rho, k)?;
        println!("{n:>10} {raw:>14.4e} {centred:>14.4e}");
    }

    let spec = BernoulliSumSpec::new(1000, rho, true, SummandCount::NMinusOne)?;
    let m = exact_binomial_moment(&spec, 6, 256)?;
    println!("E(D - {:.4})^6 with {} summands = {:.12}", spec.center(), spec.summands(), m.to_f64());

    let report = pmf_ratio_check(100_000, rho, 10)?;
    println!("max |pmf ratio - 1| for j <= 10 at n=1e5: {:.3e}", report.max_deviation);

    for m in [2, 3, 6] {
        let p = 0.01;
        let q = centered_bernoulli_q(m, p)?;
        println!("Q_{m}({p}) = {q:.8} <= (1+2p)^m = {:.8}", (1.0 + 2.0 * p).powi(m as i32));
    }
    Ok(())
}
