//! Bell, restricted and even-block polynomials, checked against brute force.

use bellcord::partitions::{
    bell_polynomial, enumerate_partitions_oracle, even_block_bell_polynomial, restricted_bell_polynomial,
    BlockFilter, EvenExponent, StirlingTable, TableKind,
};

fn main() -> bellcord::Result<()> {
    let table = StirlingTable::build(TableKind::Restricted, 8)?;
    println!("restricted Stirling numbers (blocks of size >= 2)");
    for k in 0..=8 {
        let row: Vec<String> = table.row(k).iter().map(|c| c.to_string()).collect();
        println!("  k={k}: [{}]  sum {}", row.join(", "), table.row_sum(k));
    }

    for k in [5, 10] {
        println!("B_{k}(x)          = {:?}", bell_polynomial(k)?.coeffs());
        println!("restricted B_{k}  = {:?}", restricted_bell_polynomial(k)?.coeffs());
    }
    println!("E_6 by blocks      = {:?}", even_block_bell_polynomial(6, EvenExponent::BlockCount)?.coeffs());
    println!("E_6 doubled        = {:?}", even_block_bell_polynomial(6, EvenExponent::Doubled)?.coeffs());

    for filter in [BlockFilter::All, BlockFilter::MinBlock2, BlockFilter::EvenBlocks] {
        let brute = enumerate_partitions_oracle(10, filter)?;
        println!("enumerated k=10 {filter:?}: {:?}", brute.coeffs());
    }
    assert_eq!(enumerate_partitions_oracle(10, BlockFilter::MinBlock2)?, restricted_bell_polynomial(10)?);

    let b = bell_polynomial(60)?;
    println!("Bell number B_60 = {}", b.value_at_one());
    Ok(())
}
