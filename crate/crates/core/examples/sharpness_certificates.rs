//! Lower-bound certificates: every reduced divisor of degree k(d-1) - 1 on
//! K_d gets an effective E of degree k(k+1)/2 with |D - E| empty.

use std::collections::BTreeMap;

use chipfire::gonality::{sharpness_certificate, sharpness_inputs};

fn main() -> chipfire::Result<()> {
    for d in 4..=6 {
        for k in 1..=d as i64 - 3 {
            let mut routes = BTreeMap::new();
            for div in sharpness_inputs(d, k) {
                let cert = sharpness_certificate(d, k, &div)?;
                *routes.entry(format!("{:?}", cert.route)).or_insert(0) += 1;
            }
            println!("d={d} k={k} deg(E)={}: {routes:?}", k * (k + 1) / 2);
        }
    }

    let example = chipfire::Divisor::new(vec![0, 1, 1, 1, 1, 5]);
    let cert = sharpness_certificate(6, 2, &example)?;
    println!(
        "D = {example}: E = {} via {:?}, (a, b, t1, t2) = {:?}",
        cert.e,
        cert.route,
        cert.profile.unwrap()
    );
    Ok(())
}
