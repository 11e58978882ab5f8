//! Reduce a divisor on a small multigraph and check the firing script.

use chipfire::{is_v_reduced, linearly_equivalent, principal_divisor, reduce, Divisor, Graph};

fn main() -> chipfire::Result<()> {
    // A triangle with one doubled edge.
    let g = Graph::new(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)])?;
    let d = Divisor::new(vec![-3, 5, 2]);

    let r = reduce(&g, &d, 2)?;
    println!("D        = {d}");
    println!("reduced  = {}", r.divisor);
    println!("script   = {}", r.script);

    assert!(is_v_reduced(&g, &r.divisor, 2)?);
    assert_eq!(&d - &r.divisor, principal_divisor(&g, r.script.values())?);
    assert!(linearly_equivalent(&g, &d, &r.divisor)?);
    println!("effective class: {}", r.base_coeff() >= 0);
    Ok(())
}
