//! Rank of k(d)·v_d on K_d: the chip-subtraction trace against its closed
//! form, and the exhaustive oracle on the same input.

use chipfire::rank::dst_closed_form;
use chipfire::{complete_graph, rank_complete_fast, rank_oracle, Divisor};

fn main() -> chipfire::Result<()> {
    let (d, k) = (6usize, 2i64);
    let kd = complete_graph(d)?;
    let div = Divisor::point(d, d - 1, k * d as i64);

    let fast = rank_complete_fast(&kd, &div)?;
    println!(
        "rank of {div} is {} (expected {})",
        fast.rank,
        k * (k + 3) / 2
    );
    for (line, step) in fast.trace_lines().iter().zip(&fast.decrement_trace) {
        println!("  {line:<10} {}", step.reduced);
    }
    for (j, step) in fast.decrement_trace.iter().enumerate() {
        let (s, t) = chipfire::rank::schedule_label(j);
        assert_eq!(step.reduced, dst_closed_form(d, k, s, t)?);
    }

    let slow = rank_oracle(&kd, &div)?;
    assert_eq!(slow.rank, fast.rank);
    println!(
        "oracle agrees; failing test divisor {}",
        slow.negative_witness.unwrap()
    );
    Ok(())
}
