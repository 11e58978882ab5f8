//! The family sum (k - a_i)(v_i) with sum a_i = h: rank k(k+3)/2 - h, and
//! the test divisor that caps it.

use chipfire::gonality::{empties_linear_system, specialization_family};
use chipfire::{complete_graph, rank_oracle};

fn main() -> chipfire::Result<()> {
    let (d, k) = (5usize, 2i64);
    let kd = complete_graph(d)?;
    for a in [
        [0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0],
        [1, 1, 0, 0, 0],
        [0, 0, 2, 0, 0],
    ] {
        let w = specialization_family(d, k, &a)?;
        let rank = rank_oracle(&kd, &w.divisor)?.rank;
        let capped = empties_linear_system(&kd, &w.divisor, &w.test_divisor, w.base)?;
        println!(
            "a={a:?} D={} rank={rank} expected={} E={} empties={capped}",
            w.divisor, w.expected_rank, w.test_divisor
        );
        assert_eq!(rank, w.expected_rank);
        assert!(capped);
    }
    Ok(())
}
