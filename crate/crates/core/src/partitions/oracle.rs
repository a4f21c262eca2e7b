use num_bigint::BigInt;

use super::{BlockFilter, ExactPolynomial};
use crate::error::{Error, Result};

/// Largest `k` accepted by [`enumerate_partitions_oracle`]; `B_13` is already
/// 27 644 437 partitions.
pub const ORACLE_MAX_K: usize = 13;

/// Builds the Bell-family polynomial by visiting every set partition of
/// `{1..k}` as a restricted growth string, keeping those allowed by `filter`
/// and adding `x^{#blocks}` for each.
pub fn enumerate_partitions_oracle(k: usize, filter: BlockFilter) -> Result<ExactPolynomial> {
    if k > ORACLE_MAX_K {
        return Err(Error::Size {
            what: "oracle k",
            requested: k as u64,
            cap: ORACLE_MAX_K as u64,
        });
    }
    let mut counts = vec![0u64; k + 1];
    if k == 0 {
        counts[0] = 1;
        return Ok(to_poly(&counts));
    }

    // a[i] is the block of element i; prefix_max[i] = max(a[0..i]).
    let mut a = vec![0usize; k];
    let mut prefix_max = vec![0usize; k];
    let mut sizes = vec![0usize; k];
    loop {
        let blocks = prefix_max[k - 1].max(a[k - 1]) + 1;
        sizes[..blocks].iter_mut().for_each(|s| *s = 0);
        for &b in &a {
            sizes[b] += 1;
        }
        let keep = match filter {
            BlockFilter::All => true,
            BlockFilter::MinBlock2 => sizes[..blocks].iter().all(|&s| s >= 2),
            BlockFilter::EvenBlocks => sizes[..blocks].iter().all(|&s| s % 2 == 0),
        };
        if keep {
            counts[blocks] += 1;
        }

        // rightmost position that can still grow
        let Some(i) = (1..k).rev().find(|&i| a[i] <= prefix_max[i]) else {
            break;
        };
        a[i] += 1;
        for j in i + 1..k {
            a[j] = 0;
            prefix_max[j] = prefix_max[j - 1].max(a[j - 1]);
        }
    }
    Ok(to_poly(&counts))
}

fn to_poly(counts: &[u64]) -> ExactPolynomial {
    ExactPolynomial::new(counts.iter().map(|&c| BigInt::from(c)).collect())
}
