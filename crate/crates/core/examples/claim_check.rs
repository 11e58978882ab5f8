//! Exhaustive check of min(t1, t2) <= k(k+1)/2 over the admissible
//! sequences, with the extremal profile and the case split.

use chipfire::sequences::{beta_sequence, solve_pq, verify_claim};

fn main() -> chipfire::Result<()> {
    let max_d: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(8);
    println!("d k sequences_checked violations   case counts");
    for d in 4..=max_d {
        for k in 1..=d as i64 - 3 {
            let report = verify_claim(d, k)?;
            println!("{:<32} {:?}", report.summary_line(), report.case_counts);
            assert!(report.is_clean());
        }
    }

    let beta = solve_pq(7, 3, 1, 2)?;
    println!(
        "extremal profile for d=7 k=3 a=1 b=2: p={} q={:?} {:?}",
        beta.p, beta.q, beta.values
    );
    assert_eq!(beta.values, beta_sequence(7, 1, beta.p, beta.q)?);
    Ok(())
}
