//! The gonality sequence of K_d by closed form and by exhaustive search.

use chipfire::gonality::{gonality_table, GONALITY_HEADER};

fn main() -> chipfire::Result<()> {
    let d: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let g = ((d - 1) * (d - 2) / 2) as i64;
    println!("K_{d}, genus {g}");
    println!("{GONALITY_HEADER},witness_rank");
    for row in gonality_table(d, g + 2)? {
        println!("{},{}", row.csv(), row.witness_rank);
        assert!(row.agrees());
    }
    Ok(())
}
