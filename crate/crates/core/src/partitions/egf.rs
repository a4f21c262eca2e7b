use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::BlockFilter;

/// `k!·[u^k] exp{x·g(u)}` for `k = 0..=max_k`, as rational coefficient
/// vectors in `x`, where `g(u) = Σ u^m/m!` over the block sizes `m` allowed by
/// `filter` (`e^u − 1`, `e^u − u − 1`, `cosh u − 1`).
///
/// Uses `n·e_n = Σ_m m·g_m·e_{n−m}` for the coefficients `e_n` of
/// `E = exp(G)`, which follows from `E' = G'E`.
pub fn egf_bell_family(filter: BlockFilter, max_k: usize) -> Vec<Vec<BigRational>> {
    let allowed = |m: usize| match filter {
        BlockFilter::All => m >= 1,
        BlockFilter::MinBlock2 => m >= 2,
        BlockFilter::EvenBlocks => m >= 2 && m.is_multiple_of(2),
    };

    // inv_fact[m] = 1/m!
    let mut inv_fact = vec![BigRational::one()];
    for m in 1..=max_k {
        let next = &inv_fact[m - 1] / BigRational::from_integer(BigInt::from(m));
        inv_fact.push(next);
    }

    let mut e: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    for n in 1..=max_k {
        let mut acc: Vec<BigRational> = vec![BigRational::zero(); n + 1];
        for m in (1..=n).filter(|&m| allowed(m)) {
            // m · (x / m!) · e_{n-m}
            let w = BigRational::from_integer(BigInt::from(m)) * &inv_fact[m];
            for (j, c) in e[n - m].iter().enumerate() {
                if !c.is_zero() {
                    acc[j + 1] += &w * c;
                }
            }
        }
        let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
        for c in acc.iter_mut() {
            *c *= &inv_n;
        }
        e.push(acc);
    }

    let mut fact = BigRational::one();
    e.into_iter()
        .enumerate()
        .map(|(k, coeffs)| {
            if k > 0 {
                fact *= BigRational::from_integer(BigInt::from(k));
            }
            let mut scaled: Vec<BigRational> = coeffs.into_iter().map(|c| c * &fact).collect();
            while scaled.last().is_some_and(Zero::is_zero) {
                scaled.pop();
            }
            scaled
        })
        .collect()
}
