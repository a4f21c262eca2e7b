//! Exact integer combinatorics for the Bell family.
//!
//! Three polynomial families are built from triangular tables of partition
//! counts:
//!
//! * classical: `B_k(x) = Σ_r S(k, r) x^r`, all set partitions;
//! * restricted: `B̃_k(x) = Σ_r S̃(k, r) x^r`, partitions without singleton
//!   blocks (the central moments of Poisson(x));
//! * even-block: partitions whose blocks all have even size.
//!
//! [`enumerate_partitions_oracle`] counts the same objects by walking every
//! restricted growth string, and [`egf_bell_family`] expands their exponential
//! generating functions over the rationals; neither shares code with the
//! recurrences.

mod egf;
mod oracle;
mod polynomial;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use egf::egf_bell_family;
pub use oracle::{enumerate_partitions_oracle, ORACLE_MAX_K};
pub use polynomial::ExactPolynomial;

/// Default upper bound on `max_k` for exact tables.
pub const DEFAULT_CAP: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableKind {
    Classical,
    Restricted,
    EvenBlock,
}

/// Which blocks a partition may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockFilter {
    All,
    MinBlock2,
    EvenBlocks,
}

impl TableKind {
    pub fn block_filter(self) -> BlockFilter {
        match self {
            TableKind::Classical => BlockFilter::All,
            TableKind::Restricted => BlockFilter::MinBlock2,
            TableKind::EvenBlock => BlockFilter::EvenBlocks,
        }
    }
}

/// Exponent convention for the even-block polynomial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EvenExponent {
    /// `x^{#blocks}`; the value at 1 counts even-block partitions.
    #[default]
    BlockCount,
    /// `x^{2·#blocks}`, the doubled exponent of the compound-Poisson form.
    Doubled,
}

/// Triangular table `entries[k][r]`, `0 ≤ r ≤ k ≤ max_k`, of partition counts
/// of a `k`-set into `r` blocks of the table's kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    kind: TableKind,
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn build(kind: TableKind, max_k: usize) -> Result<Self> {
        Self::build_with_cap(kind, max_k, DEFAULT_CAP)
    }

    pub fn build_with_cap(kind: TableKind, max_k: usize, cap: usize) -> Result<Self> {
        if max_k > cap {
            return Err(Error::Size {
                what: "max_k",
                requested: max_k as u64,
                cap: cap as u64,
            });
        }
        let rows = match kind {
            TableKind::Classical => classical_rows(max_k),
            TableKind::Restricted => restricted_rows(max_k),
            TableKind::EvenBlock => even_block_rows(max_k),
        };
        Ok(StirlingTable { kind, rows })
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn max_k(&self) -> usize {
        self.rows.len() - 1
    }

    /// Row `k`, of length `k + 1`.
    pub fn row(&self, k: usize) -> &[BigUint] {
        &self.rows[k]
    }

    pub fn get(&self, k: usize, r: usize) -> &BigUint {
        &self.rows[k][r]
    }

    pub fn row_sum(&self, k: usize) -> BigUint {
        self.rows[k].iter().sum()
    }

    /// `Σ_r entries[k][r] x^r`
    pub fn polynomial(&self, k: usize) -> ExactPolynomial {
        ExactPolynomial::from_unsigned(self.rows[k].iter().cloned())
    }
}

// S(k+1, r) = r S(k, r) + S(k, r-1)
fn classical_rows(max_k: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for k in 0..max_k {
        let prev = &rows[k];
        let mut next = vec![BigUint::zero(); k + 2];
        for r in 1..=k + 1 {
            let mut v = prev[r - 1].clone();
            if r <= k {
                v += &prev[r] * BigUint::from(r);
            }
            next[r] = v;
        }
        rows.push(next);
    }
    rows
}

// S̃(k+1, r) = r S̃(k, r) + k S̃(k-1, r-1), with S̃(k, 0) = δ_{k0} and
// S̃(k, r) = 0 for r ≥ k ≥ 1.
fn restricted_rows(max_k: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    if max_k >= 1 {
        rows.push(vec![BigUint::zero(); 2]);
    }
    for k in 1..max_k {
        let mut next = vec![BigUint::zero(); k + 2];
        for r in 1..=k {
            let a = &rows[k][r] * BigUint::from(r);
            let b = &rows[k - 1][r - 1] * BigUint::from(k);
            next[r] = a + b;
        }
        rows.push(next);
    }
    rows
}

// Condition on the block holding the last element: it has size 2j and the
// other 2j-1 members are chosen from the remaining k-1 elements.
fn even_block_rows(max_k: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_k + 1);
    rows.push(vec![BigUint::one()]);
    for k in 1..=max_k {
        let mut row = vec![BigUint::zero(); k + 1];
        if k % 2 == 0 {
            let mut binom = BigUint::one(); // C(k-1, 0); advanced two steps per j
            let mut i = 0usize;
            for j in 1..=k / 2 {
                let size = 2 * j;
                // advance binom from C(k-1, i) to C(k-1, size-1)
                while i < size - 1 {
                    binom = binom * BigUint::from(k - 1 - i) / BigUint::from(i + 1);
                    i += 1;
                }
                let rest = &rows[k - size];
                for (slot, v) in row[1..].iter_mut().zip(rest).take(k / 2) {
                    if !v.is_zero() {
                        *slot += &binom * v;
                    }
                }
            }
        }
        rows.push(row);
    }
    rows
}

pub fn build_stirling_table(kind: TableKind, max_k: usize) -> Result<StirlingTable> {
    StirlingTable::build(kind, max_k)
}

/// `B_k(x) = Σ_r S(k, r) x^r`.
pub fn bell_polynomial(k: usize) -> Result<ExactPolynomial> {
    Ok(StirlingTable::build(TableKind::Classical, k)?.polynomial(k))
}

/// `B̃_k(x)`, the Bell polynomial of partitions without singleton blocks.
pub fn restricted_bell_polynomial(k: usize) -> Result<ExactPolynomial> {
    Ok(StirlingTable::build(TableKind::Restricted, k)?.polynomial(k))
}

/// Bell polynomial of partitions of a `k2`-set into blocks of even size.
pub fn even_block_bell_polynomial(k2: usize, exponent: EvenExponent) -> Result<ExactPolynomial> {
    if k2 == 0 || k2 % 2 == 1 {
        return Err(Error::domain(format!(
            "even-block polynomial needs an even positive order, got {k2}"
        )));
    }
    let table = StirlingTable::build(TableKind::EvenBlock, k2)?;
    Ok(match exponent {
        EvenExponent::BlockCount => table.polynomial(k2),
        EvenExponent::Doubled => {
            let row = table.row(k2);
            let mut coeffs = vec![BigInt::zero(); 2 * row.len()];
            for (r, v) in row.iter().enumerate() {
                coeffs[2 * r] = BigInt::from(v.clone());
            }
            ExactPolynomial::new(coeffs)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_u64(t: &StirlingTable, k: usize) -> Vec<u64> {
        t.row(k).iter().map(|v| v.try_into().unwrap()).collect()
    }

    #[test]
    fn restricted_rows_match_enumeration() {
        let t = build_stirling_table(TableKind::Restricted, 6).unwrap();
        assert_eq!(row_u64(&t, 6), vec![0, 1, 25, 15, 0, 0, 0]);
        assert_eq!(row_u64(&t, 5), vec![0, 1, 10, 0, 0, 0]);
        assert_eq!(row_u64(&t, 1), vec![0, 0]);
        assert_eq!(row_u64(&t, 0), vec![1]);
    }

    #[test]
    fn classical_zero_table() {
        let t = build_stirling_table(TableKind::Classical, 0).unwrap();
        assert_eq!(t.max_k(), 0);
        assert_eq!(row_u64(&t, 0), vec![1]);
    }

    #[test]
    fn classical_recurrence_and_bell_numbers() {
        let t = build_stirling_table(TableKind::Classical, 12).unwrap();
        let bells: Vec<u64> = (0..=12).map(|k| (&t.row_sum(k)).try_into().unwrap()).collect();
        assert_eq!(
            bells,
            vec![1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597]
        );
        for k in 1..12 {
            assert!(t.get(k, 0).is_zero());
            for r in 1..=k {
                let lhs = t.get(k + 1, r).clone();
                let rhs = t.get(k, r) * BigUint::from(r) + t.get(k, r - 1);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn even_block_rows() {
        let t = build_stirling_table(TableKind::EvenBlock, 8).unwrap();
        assert_eq!(row_u64(&t, 4), vec![0, 1, 3, 0, 0]);
        assert_eq!(t.row_sum(6), BigUint::from(31u32));
        assert_eq!(t.row_sum(8), BigUint::from(379u32));
        assert!(t.row(7).iter().all(Zero::is_zero));
    }

    #[test]
    fn bell_polynomials() {
        assert_eq!(bell_polynomial(3).unwrap(), ExactPolynomial::from_i64s(&[0, 1, 3, 1]));
        assert_eq!(bell_polynomial(0).unwrap(), ExactPolynomial::one());
        assert_eq!(bell_polynomial(4).unwrap().value_at_one(), BigInt::from(15));
        assert_eq!(
            restricted_bell_polynomial(4).unwrap(),
            ExactPolynomial::from_i64s(&[0, 1, 3])
        );
        assert!(restricted_bell_polynomial(1).unwrap().is_zero());
        assert_eq!(restricted_bell_polynomial(6).unwrap().value_at_one(), BigInt::from(41));
    }

    #[test]
    fn even_block_polynomials() {
        let p4 = even_block_bell_polynomial(4, EvenExponent::BlockCount).unwrap();
        assert_eq!(p4, ExactPolynomial::from_i64s(&[0, 1, 3]));
        let p2 = even_block_bell_polynomial(2, EvenExponent::BlockCount).unwrap();
        assert_eq!(p2, ExactPolynomial::monomial(1));
        let p6 = even_block_bell_polynomial(6, EvenExponent::BlockCount).unwrap();
        assert_eq!(p6.value_at_one(), BigInt::from(31));
        let d4 = even_block_bell_polynomial(4, EvenExponent::Doubled).unwrap();
        assert_eq!(d4, ExactPolynomial::from_i64s(&[0, 0, 1, 0, 3]));
        assert_eq!(d4.value_at_one(), p4.value_at_one());
    }

    #[test]
    fn even_block_rejects_odd_order() {
        assert!(matches!(
            even_block_bell_polynomial(5, EvenExponent::BlockCount),
            Err(Error::Domain(_))
        ));
        assert!(even_block_bell_polynomial(0, EvenExponent::BlockCount).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            StirlingTable::build(TableKind::Classical, 513),
            Err(Error::Size { cap: 512, .. })
        ));
        assert!(StirlingTable::build_with_cap(TableKind::Restricted, 20, 10).is_err());
    }

    #[test]
    fn touchard_recurrence() {
        let t = build_stirling_table(TableKind::Classical, 30).unwrap();
        for k in 0..30 {
            let b = t.polynomial(k);
            let rhs = (&b.derivative() + &b).shift_up();
            assert_eq!(t.polynomial(k + 1), rhs, "k = {k}");
        }
    }

    #[test]
    fn restricted_degree_and_constant() {
        let t = build_stirling_table(TableKind::Restricted, 40).unwrap();
        for k in 2..=40 {
            let p = t.polynomial(k);
            assert_eq!(p.degree(), Some(k / 2));
            assert!(p.coeff(0).is_zero());
        }
    }
}
