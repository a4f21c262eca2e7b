use rand::Rng;
use rand_distr::{Binomial, Distribution, Geometric};

use crate::error::{Error, Result};

/// Degree of one fixed vertex of G(n, ρ/n): a Binomial(n − 1, ρ/n) draw.
pub fn single_vertex_degree<R: Rng + ?Sized>(n: u64, rho: f64, rng: &mut R) -> Result<u64> {
    let p = rho / n as f64;
    let dist = Binomial::new(n - 1, p).map_err(|e| Error::domain(format!("binomial: {e}")))?;
    Ok(dist.sample(rng))
}

/// Maximal degree of one G(n, ρ/n) sample.
///
/// Edges are found by geometric skips over the pairs `(i, j)`, `i < j`,
/// listed row by row, so the work is proportional to `n` plus the number of
/// edges. `degrees` is scratch space reused between calls.
pub fn max_degree<R: Rng + ?Sized>(n: u64, rho: f64, rng: &mut R, degrees: &mut Vec<u32>) -> Result<u64> {
    let p = rho / n as f64;
    let skip = Geometric::new(p).map_err(|e| Error::domain(format!("geometric: {e}")))?;
    let nu = n as usize;
    degrees.clear();
    degrees.resize(nu, 0);
    let total = n * (n - 1) / 2;
    let mut row = 0u64;
    let mut row_start = 0u64;
    let mut row_len = n - 1;
    let mut pos = 0u64;
    loop {
        pos = pos.saturating_add(skip.sample(rng));
        if pos >= total {
            break;
        }
        while pos >= row_start + row_len {
            row_start += row_len;
            row += 1;
            row_len -= 1;
        }
        let col = row + 1 + (pos - row_start);
        degrees[row as usize] += 1;
        degrees[col as usize] += 1;
        pos += 1;
    }
    Ok(degrees.iter().copied().max().unwrap_or(0) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tailsim::rng::trial_rng;

    #[test]
    fn fair_coin_vertex() {
        let trials = 20_000;
        let ones: u64 = (0..trials)
            .map(|t| single_vertex_degree(2, 1.0, &mut trial_rng(1, 0, t)).unwrap())
            .sum();
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 4.0 * (0.25 / trials as f64).sqrt());
    }

    #[test]
    fn sparse_graph_is_empty() {
        let mut scratch = Vec::new();
        for t in 0..10 {
            let d = max_degree(100, 1e-9, &mut trial_rng(2, 0, t), &mut scratch).unwrap();
            assert_eq!(d, 0);
        }
    }

    #[test]
    fn edge_count_matches_expectation() {
        // total degree / 2 is the edge count, mean ρ(n−1)/2
        let n = 2000u64;
        let rho = 6.0;
        let trials = 50;
        let mut scratch = Vec::new();
        let mut total = 0u64;
        for t in 0..trials {
            max_degree(n, rho, &mut trial_rng(3, 0, t), &mut scratch).unwrap();
            total += scratch.iter().map(|&d| d as u64).sum::<u64>() / 2;
        }
        let mean = total as f64 / trials as f64;
        let expected = rho * (n - 1) as f64 / 2.0;
        let sd = (expected / trials as f64).sqrt();
        assert!((mean - expected).abs() < 5.0 * sd, "{mean} vs {expected}");
    }

    #[test]
    fn complete_graph_limit() {
        let mut scratch = Vec::new();
        let d = max_degree(30, 30.0 - 1e-12, &mut trial_rng(4, 0, 0), &mut scratch).unwrap();
        assert_eq!(d, 29);
    }
}
