//! Integer-length metric graphs through subdivision: ranks, the reduced
//! divisor conditions, and the seeded batteries.

use chipfire::metric::{
    check_metric_reduced, metric_experiment, metric_rank, subdivide, unit_metric_gonality,
    EdgeLengths, DEFAULT_VERTEX_CAP,
};
use chipfire::{complete_graph, gonality::gonality_formula, is_v_reduced, Divisor};

fn main() -> chipfire::Result<()> {
    let k4 = complete_graph(4)?;
    let lengths = EdgeLengths::new(vec![1, 1, 1, 1, 1, 3])?;
    let sg = subdivide(&k4, &lengths, DEFAULT_VERTEX_CAP)?;
    println!(
        "K_4 with one edge of length 3: {} vertices, {} edges",
        sg.graph.n_vertices(),
        sg.graph.n_edges()
    );

    let k5 = complete_graph(5)?;
    let l = EdgeLengths::new(vec![1, 2, 3, 1, 2, 1, 3, 1, 2, 1])?;
    let r = metric_rank(&k5, &l, &Divisor::new(vec![2; 5]), DEFAULT_VERTEX_CAP)?;
    println!(
        "rank of 2(v1+...+v5) on K_5({:?}) = {}",
        l.lengths(),
        r.rank
    );

    // One chip on each of two open edges, reduced at v_4.
    let doubled = subdivide(&k4, &EdgeLengths::uniform(6, 2)?, DEFAULT_VERTEX_CAP)?;
    let mut d = Divisor::zero(doubled.graph.n_vertices());
    d.set(doubled.interiors[0][0], 1);
    d.set(doubled.interiors[2][0], 1);
    let report = check_metric_reduced(&doubled, &d, 3)?;
    println!(
        "conditions: {report:?}; burning says {}",
        is_v_reduced(&doubled.graph, &d, 3)?
    );

    for r in 1..=3 {
        println!(
            "unit K_4: gamma_{r} = {} (formula {})",
            unit_metric_gonality(4, r)?,
            gonality_formula(4, r)?
        );
    }

    for row in metric_experiment(4, 3, 11, DEFAULT_VERTEX_CAP)? {
        println!("{}", row.csv_row());
    }
    Ok(())
}
