//! The acceptance battery: nine criteria, one PASS/FAIL line each.
//! Run with `cargo test --test acceptance`; add `-- --slow` for K_7 in the
//! gonality criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use chipfire::gonality::{
    gonality_bruteforce, gonality_formula, sharpness_certificate, specialization_family,
};
use chipfire::metric::{
    exact_rank_trial, metric_rank, random_lengths, subdivide, uniform_bound_witness,
    unit_metric_gonality, upper_bound_trial, EdgeLengths, DEFAULT_VERTEX_CAP,
};
use chipfire::rank::{dst_closed_form, rank_oracle_on, schedule_label};
use chipfire::rng::SplitMix64;
use chipfire::sequences::{solve_pq, verify_claim, SequenceContext};
use chipfire::{
    complete_graph, is_v_reduced, rank_complete_fast, rank_oracle, reduce,
    reduced_witness_ordering, Divisor, Error,
};

use common::*;

type Outcome = Result<String, String>;
type Check = Box<dyn Fn() -> Outcome>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn genus_kd(d: usize) -> i64 {
    ((d - 1) * (d - 2) / 2) as i64
}

/// Off-base parts of the `v_d`-reduced divisors on `K_d`: tuples whose
/// ascending sort stays under the staircase `0, 1, ..., d-2`.
fn reduced_parts(d: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut c = vec![0i64; d - 1];
    loop {
        let mut sorted = c.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().all(|(i, &x)| x <= i as i64) {
            out.push(c.clone());
        }
        let mut i = 0;
        loop {
            if i == c.len() {
                return out;
            }
            c[i] += 1;
            if c[i] <= d as i64 - 2 {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

fn with_base(part: &[i64], total: i64) -> Divisor {
    let mut c = part.to_vec();
    c.push(total - part.iter().sum::<i64>());
    Divisor::new(c)
}

/// The reduced form of `d - e` is reduced by definition, equivalent to
/// `d - e` by the Laplacian solve, and negative at `base`.
fn independently_empty(
    g: &chipfire::Graph,
    d: &Divisor,
    e: &Divisor,
    base: usize,
    exact: bool,
) -> Result<(), String> {
    let diff = d - e;
    let r = reduce(g, &diff, base).map_err(|x| x.to_string())?;
    ensure!(
        r.base_coeff() < 0,
        "reduce({diff}) = {} is not negative at {base}",
        r.divisor
    );
    if exact {
        ensure!(
            subset_reduced(g, &r.divisor, base),
            "{} is not reduced by definition",
            r.divisor
        );
        ensure!(
            equivalent(g, &diff, &r.divisor),
            "{} is not equivalent to {diff}",
            r.divisor
        );
    }
    Ok(())
}

fn gonality(slow: bool) -> Outcome {
    let last = if slow { 7 } else { 6 };
    let mut rows = 0;
    for d in 4..=last {
        for r in 1..=genus_kd(d) + 2 {
            let brute = gonality_bruteforce(d, r).map_err(|e| e.to_string())?;
            let formula = gonality_formula(d, r).map_err(|e| e.to_string())?;
            let windows = gonality_by_windows(d, r);
            ensure!(
                brute == formula && formula == windows,
                "d={d} r={r}: search {brute}, formula {formula}, windows {windows}"
            );
            rows += 1;
        }
    }
    // The general-graph search, ranking by the exhaustive oracle, agrees on K_4.
    let k4 = complete_graph(4).unwrap();
    for r in 1..=5 {
        let general =
            chipfire::gonality::gonality_bruteforce_graph(&k4, r).map_err(|e| e.to_string())?;
        ensure!(
            general == gonality_by_windows(4, r),
            "general search on K_4, r={r}: {general}"
        );
    }
    Ok(format!("{rows} (d, r) pairs for d in 4..={last}"))
}

fn rank_of_multiples() -> Outcome {
    let mut steps = 0;
    for d in 4..=8usize {
        let kd = complete_graph(d).unwrap();
        for k in 1..=d as i64 - 3 {
            let div = Divisor::point(d, d - 1, k * d as i64);
            let res = rank_complete_fast(&kd, &div).map_err(|e| e.to_string())?;
            ensure!(
                res.rank == k * (k + 3) / 2,
                "d={d} k={k}: rank {}",
                res.rank
            );
            ensure!(
                res.decrement_trace.len() as i64 == res.rank + 1,
                "d={d} k={k}: trace length"
            );
            for (j, step) in res.decrement_trace.iter().enumerate() {
                let (s, t) = schedule_label(j);
                let closed = dst_closed_form(d, k, s, t).map_err(|e| e.to_string())?;
                ensure!(
                    step.reduced == closed,
                    "d={d} k={k} ({s},{t}): {} vs {closed}",
                    step.reduced
                );
                ensure!(
                    subset_reduced(&kd, &step.reduced, d - 1),
                    "d={d} k={k} ({s},{t}) not reduced"
                );
                steps += 1;
            }
        }
    }
    Ok(format!("15 (d, k) pairs, {steps} trace steps"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = SplitMix64::new(0xacce_0003);
    let mut count = 0;
    for d in 3..=6usize {
        let kd = complete_graph(d).unwrap();
        let g = genus_kd(d);
        for _ in 0..200 {
            let deg = rng.range_i64(-2, 2 * g);
            let div = random_divisor(d, deg, -3, d as i64, &mut rng);
            let fast = rank_complete_fast(&kd, &div).map_err(|e| e.to_string())?;
            let slow = rank_oracle(&kd, &div).map_err(|e| e.to_string())?;
            ensure!(
                fast.rank == slow.rank,
                "K_{d} {div}: fast {} oracle {}",
                fast.rank,
                slow.rank
            );
            if let Some(e) = &slow.negative_witness {
                ensure!(
                    e.is_effective() && e.degree() == slow.rank + 1,
                    "bad witness {e}"
                );
            }
            count += 1;
        }
    }
    Ok(format!("{count} seeded divisors on K_3..K_6"))
}

fn reduction() -> Outcome {
    let mut rng = SplitMix64::new(0xacce_0004);
    for trial in 0..50 {
        let n = 2 + trial % 6;
        let g = random_connected_graph(n, rng.below(6) as usize, &mut rng);
        let d = random_divisor(n, rng.range_i64(-4, 12), -4, 5, &mut rng);
        let v = rng.below(n as u64) as usize;
        let r = reduce(&g, &d, v).map_err(|e| e.to_string())?;
        ensure!(subset_reduced(&g, &r.divisor, v), "{d}: output not reduced");
        ensure!(equivalent(&g, &d, &r.divisor), "{d}: output not equivalent");
        let again = reduce(&g, &r.divisor, v).map_err(|e| e.to_string())?;
        ensure!(
            again.divisor == r.divisor && again.script.is_zero(),
            "{d}: not idempotent"
        );
        for _ in 0..50 {
            let f = random_script(n, 6, &mut rng);
            let moved = &d + &laplacian(&g, &f);
            let other = reduce(&g, &moved, v).map_err(|e| e.to_string())?;
            ensure!(
                other.divisor == r.divisor,
                "{d} shifted to {moved}: {} vs {}",
                other.divisor,
                r.divisor
            );
        }
    }
    let mut exhaustive = 0;
    for d in [4usize, 5] {
        let kd = complete_graph(d).unwrap();
        let v = d - 1;
        let mut c = vec![0i64; d - 1];
        'all: loop {
            let div = with_base(&c, c.iter().sum());
            let by_order = reduced_witness_ordering(&kd, &div, v)
                .map_err(|e| e.to_string())?
                .is_some();
            let by_subsets = subset_reduced(&kd, &div, v);
            let by_burning = is_v_reduced(&kd, &div, v).map_err(|e| e.to_string())?;
            ensure!(
                by_order == by_subsets && by_subsets == by_burning,
                "K_{d} {div}"
            );
            exhaustive += 1;
            let mut i = 0;
            loop {
                if i == c.len() {
                    break 'all;
                }
                c[i] += 1;
                if c[i] < d as i64 {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }
    Ok(format!(
        "50 divisors x 50 shifts, {exhaustive} exhaustive ordering checks"
    ))
}

/// `beta^(p,q)` from its description: `a+1` on the first `p` places, then
/// decreasing by one except for one repeat at place `q`.
fn beta_by_description(d: usize, a: i64, p: usize, q: usize) -> Vec<i64> {
    let mut out = vec![a + 1; p];
    let mut x = a + 1;
    for i in p + 1..d {
        if i != q {
            x -= 1;
        }
        out.push(x);
    }
    out
}

fn extremal_candidates(d: usize, a: i64, target: i64) -> Vec<Vec<i64>> {
    let mut all: Vec<Vec<i64>> = (1..d - 1)
        .flat_map(|p| (p + 2..=d).map(move |q| beta_by_description(d, a, p, q)))
        .collect();
    all.push(vec![a + 1; d - 1]);
    all.sort();
    all.dedup();
    all.into_iter()
        .filter(|b| b.iter().sum::<i64>() == target)
        .collect()
}

fn pos_sums(v: &[i64]) -> (i64, i64) {
    (
        v.iter().map(|&x| x.max(0)).sum(),
        v.iter().map(|&x| (x - 1).max(0)).sum(),
    )
}

fn claim() -> Outcome {
    let mut total = 0u64;
    for d in 4..=10usize {
        for k in 1..=d as i64 - 3 {
            let report = verify_claim(d, k).map_err(|e| e.to_string())?;
            ensure!(report.is_clean(), "d={d} k={k}: {}", report.summary_line());
            total += report.sequences_checked;

            if d <= 8 {
                // Profiles read straight off the reduced divisors.
                let budget = k * (k + 1) / 2;
                let m = d as i64 - 1;
                let mut profiles = BTreeSet::new();
                for part in reduced_parts(d) {
                    let div = with_base(&part, k * m - 1);
                    let top = div[d - 1];
                    if top < 0 {
                        continue;
                    }
                    let (a, b) = (top / m, top % m);
                    let mut order: Vec<usize> = (0..d - 1).collect();
                    order.sort_by_key(|&w| (div[w], w));
                    let alpha: Vec<i64> = order
                        .iter()
                        .enumerate()
                        .map(|(i, &w)| div[w] + a + 1 - i as i64)
                        .collect();
                    let (t1, p1) = pos_sums(&alpha);
                    let t2 = b + 1 + p1;
                    if top >= budget {
                        ensure!(t1.min(t2) <= budget, "d={d} k={k} D={div}: t1={t1} t2={t2}");
                    }
                    let target = k * m - (d as i64 - 2) * (d as i64 - 3) / 2 - b;
                    ensure!(
                        alpha.iter().sum::<i64>() == target,
                        "d={d} k={k} D={div}: profile sum"
                    );
                    let betas = extremal_candidates(d, a, target);
                    ensure!(
                        betas.len() == 1,
                        "d={d} k={k} a={a} b={b}: {} extremal profiles",
                        betas.len()
                    );
                    let (b0, b1) = pos_sums(&betas[0]);
                    ensure!(
                        t1 <= b0 && p1 <= b1,
                        "d={d} k={k} D={div}: not dominated by {:?}",
                        betas[0]
                    );
                    profiles.insert((a, b, alpha));
                }
                ensure!(
                    profiles.len() as u64 == report.sequences_checked,
                    "d={d} k={k}: {} profiles from divisors, {} enumerated",
                    profiles.len(),
                    report.sequences_checked
                );
            }
        }
    }
    let mut solved = 0;
    for d in 4..=12usize {
        for k in 1..=d as i64 - 3 {
            for a in 0..k {
                for b in 0..=d as i64 - 2 {
                    let ctx = SequenceContext { d, k, a, b };
                    let (lo, hi) = ctx.sum_range();
                    let target = ctx.target_sum();
                    let found = extremal_candidates(d, a, target);
                    match solve_pq(d, k, a, b) {
                        Ok(beta) => {
                            ensure!(
                                found == vec![beta.values.clone()],
                                "d={d} k={k} a={a} b={b}: {found:?}"
                            );
                            solved += 1;
                        }
                        Err(Error::OutOfRange(_)) => {
                            ensure!(
                                target < lo || target > hi,
                                "d={d} k={k} a={a} b={b}: refused in range"
                            );
                            ensure!(
                                found.is_empty(),
                                "d={d} k={k} a={a} b={b}: profile out of range"
                            );
                        }
                        Err(e) => return Err(format!("d={d} k={k} a={a} b={b}: {e}")),
                    }
                }
            }
        }
    }
    Ok(format!(
        "{total} sequences for d <= 10, {solved} unique extremal profiles for d <= 12"
    ))
}

fn certificates() -> Outcome {
    let mut count = 0;
    for d in 4..=6usize {
        let kd = complete_graph(d).unwrap();
        for k in 1..=d as i64 - 3 {
            let parts = reduced_parts(d);
            ensure!(
                parts.len() as u64 == (d as u64).pow(d as u32 - 2),
                "d={d}: {} reduced parts",
                parts.len()
            );
            for part in parts {
                let div = with_base(&part, k * (d as i64 - 1) - 1);
                let cert = sharpness_certificate(d, k, &div).map_err(|e| format!("{div}: {e}"))?;
                ensure!(cert.e.is_effective(), "{div}: E = {} not effective", cert.e);
                ensure!(
                    cert.e.degree() == k * (k + 1) / 2,
                    "{div}: deg E = {}",
                    cert.e.degree()
                );
                independently_empty(&kd, &div, &cert.e, d - 1, true)?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} reduced divisors certified"))
}

fn metric_subdivision() -> Outcome {
    let mut rng = SplitMix64::new(0xacce_0007);
    let mut count = 0;
    for d in [4usize, 5] {
        let kd = complete_graph(d).unwrap();
        let g = genus_kd(d);
        for m in [2u64, 3] {
            let l = EdgeLengths::uniform(kd.n_edges(), m).unwrap();
            for trial in 0..50 {
                let div = random_divisor(d, rng.range_i64(-1, 2 * g), -2, d as i64, &mut rng);
                let on_graph = rank_complete_fast(&kd, &div)
                    .map_err(|e| e.to_string())?
                    .rank;
                let on_metric = metric_rank(&kd, &l, &div, DEFAULT_VERTEX_CAP)
                    .map_err(|e| e.to_string())?
                    .rank;
                ensure!(
                    on_graph == on_metric,
                    "K_{d} m={m} {div}: {on_graph} vs {on_metric}"
                );
                if d == 4 && m == 2 && trial < 15 {
                    // Test divisors over every subdivision vertex.
                    let sg = subdivide(&kd, &l, DEFAULT_VERTEX_CAP).unwrap();
                    let all: Vec<usize> = (0..sg.graph.n_vertices()).collect();
                    let full = rank_oracle_on(&sg.graph, &sg.embed(&div).unwrap(), &all)
                        .map_err(|e| e.to_string())?
                        .rank;
                    ensure!(full == on_graph, "K_4 m=2 {div}: full support gives {full}");
                }
                count += 1;
            }
        }
    }
    let mut ranks = 0;
    for d in [4usize, 5] {
        for r in 1..=genus_kd(d) {
            let metric = unit_metric_gonality(d, r).map_err(|e| e.to_string())?;
            let expected = gonality_by_windows(d, r);
            ensure!(
                metric == expected,
                "unit K_{d} r={r}: {metric} vs {expected}"
            );
            ranks += 1;
        }
    }
    Ok(format!(
        "{count} subdivided ranks, {ranks} metric gonality values"
    ))
}

fn metric_batteries() -> Outcome {
    let mut rng = SplitMix64::new(0xacce_0008);
    let k5 = complete_graph(5).unwrap();
    for t in 0..10 {
        let l = random_lengths(&k5, 3, &mut rng);
        let trial = exact_rank_trial(&l, t, DEFAULT_VERTEX_CAP).map_err(|e| e.to_string())?;
        ensure!(
            trial.rank == 5,
            "exact rank, lengths {:?}: rank {}",
            l.lengths(),
            trial.rank
        );
    }
    let mut bounded = 0;
    for d in [4usize, 5] {
        let kd = complete_graph(d).unwrap();
        for k in 1..=d as i64 - 3 {
            let bound = k * (k + 3) / 2;
            let e = uniform_bound_witness(d, k).map_err(|e| e.to_string())?;
            ensure!(
                e.is_effective() && e.degree() == bound + 1,
                "witness {e} has the wrong shape"
            );
            for t in 0..20 {
                let l = random_lengths(&kd, 3, &mut rng);
                let trial = upper_bound_trial(d, k, &l, t, DEFAULT_VERTEX_CAP)
                    .map_err(|e| e.to_string())?;
                ensure!(
                    trial.rank <= bound,
                    "bound d={d} k={k} {:?}: rank {}",
                    l.lengths(),
                    trial.rank
                );
                let sg = subdivide(&kd, &l, DEFAULT_VERTEX_CAP).unwrap();
                let div = sg.embed(&Divisor::new(vec![k; d])).unwrap();
                let e_sub = sg.embed(&e).unwrap();
                independently_empty(&sg.graph, &div, &e_sub, 0, d == 4)?;
                bounded += 1;
            }
        }
    }
    Ok(format!(
        "10 exact-rank trials, {bounded} upper-bound trials"
    ))
}

/// Non-negative weight vectors of length `d` with sum `h`.
fn weights(d: usize, h: i64) -> Vec<Vec<i64>> {
    effective_of_degree(d, h)
        .into_iter()
        .map(|x| x.into_coeffs())
        .collect()
}

fn specialization() -> Outcome {
    let mut count = 0;
    for d in [5usize, 6] {
        let kd = complete_graph(d).unwrap();
        for k in 1..=d as i64 - 3 {
            for h in 0..=k {
                for a in weights(d, h) {
                    let w = specialization_family(d, k, &a).map_err(|e| e.to_string())?;
                    let expected = k * (k + 3) / 2 - h;
                    let coeffs: Vec<i64> = a.iter().map(|x| k - x).collect();
                    ensure!(
                        w.divisor.coeffs() == coeffs.as_slice(),
                        "a={a:?}: divisor {}",
                        w.divisor
                    );
                    let rank = rank_oracle(&kd, &w.divisor)
                        .map_err(|e| e.to_string())?
                        .rank;
                    let fast = rank_complete_fast(&kd, &w.divisor)
                        .map_err(|e| e.to_string())?
                        .rank;
                    ensure!(
                        rank == expected && fast == expected,
                        "d={d} k={k} a={a:?}: rank {rank}/{fast}, expected {expected}"
                    );
                    ensure!(
                        w.test_divisor.is_effective(),
                        "a={a:?}: E = {} not effective",
                        w.test_divisor
                    );
                    ensure!(
                        w.test_divisor.degree() == expected + 1,
                        "a={a:?}: deg E = {}",
                        w.test_divisor.degree()
                    );
                    ensure!(
                        a[w.base] == *a.iter().max().unwrap(),
                        "a={a:?}: base {} is not a largest weight",
                        w.base
                    );
                    independently_empty(&kd, &w.divisor, &w.test_divisor, w.base, true)?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} weight vectors on K_5, K_6"))
}

fn main() {
    let slow = std::env::args().any(|a| a == "--slow");
    let criteria: [(&str, Check); 9] = [
        (
            "gonality sequence of K_d, closed form vs exhaustive search",
            Box::new(move || gonality(slow)),
        ),
        (
            "rank of k d (v_d) and the subtraction trace",
            Box::new(rank_of_multiples),
        ),
        (
            "fast complete-graph rank vs exhaustive oracle",
            Box::new(oracle_equivalence),
        ),
        (
            "reduction: definition, idempotence, shifts, ordering",
            Box::new(reduction),
        ),
        (
            "sequence inequality, domination, extremal profiles",
            Box::new(claim),
        ),
        (
            "lower-bound certificates of exact degree",
            Box::new(certificates),
        ),
        (
            "subdivision invariance and unit metric gonality",
            Box::new(metric_subdivision),
        ),
        (
            "metric batteries with random lengths",
            Box::new(metric_batteries),
        ),
        (
            "specialization family ranks and test divisors",
            Box::new(specialization),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
