//! `v`-reduced divisors: Dhar burning, the reduction loop, and the ordering
//! certificate on complete graphs.

use crate::error::{invalid, Result};
use crate::graph::{Divisor, FiringScript, Graph};

/// The unique `v`-reduced divisor in a class, with the script that reaches it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedForm {
    pub divisor: Divisor,
    pub base: usize,
    /// Fire counts: `original - divisor = div(script)`.
    pub script: FiringScript,
    /// On `K_d`, the non-base vertices ordered so that `D(v_i) <= i - 1`.
    pub ordering: Option<Vec<usize>>,
}

impl ReducedForm {
    /// Coefficient at the base vertex. Negative iff the class has no
    /// effective member.
    pub fn base_coeff(&self) -> i64 {
        self.divisor[self.base]
    }
}

struct Burn {
    burnt: Vec<bool>,
    /// For unburnt vertices: edges into the burnt set, i.e. `outdeg_U`.
    into_burnt: Vec<i64>,
}

/// Dhar's burning from `v`: a vertex catches fire once the burnt edges
/// reaching it outnumber its chips.
fn burn(g: &Graph, coeffs: &[i64], v: usize) -> Burn {
    let n = g.n_vertices();
    let mut burnt = vec![false; n];
    let mut into_burnt = vec![0i64; n];
    let mut stack = vec![v];
    burnt[v] = true;
    while let Some(x) = stack.pop() {
        for &(y, m) in g.neighbours(x) {
            if burnt[y] {
                continue;
            }
            into_burnt[y] += m;
            if coeffs[y] < into_burnt[y] {
                burnt[y] = true;
                stack.push(y);
            }
        }
    }
    Burn { burnt, into_burnt }
}

/// True iff `d` is effective off `v` and every non-empty `A` in `V - {v}`
/// has a vertex with fewer chips than its out-degree from `A`.
pub fn is_v_reduced(g: &Graph, d: &Divisor, v: usize) -> Result<bool> {
    g.check_divisor(d)?;
    g.check_vertex(v)?;
    if !d.is_effective_off(v) {
        return Ok(false);
    }
    Ok(burn(g, d.coeffs(), v).burnt.iter().all(|&b| b))
}

/// BFS distance layers from `v`; `None` if some vertex is unreachable.
fn layers(g: &Graph, v: usize) -> Option<Vec<usize>> {
    let n = g.n_vertices();
    let mut dist = vec![usize::MAX; n];
    dist[v] = 0;
    let mut queue = std::collections::VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in g.neighbours(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist.iter().all(|&x| x != usize::MAX).then_some(dist)
}

fn fire_set(g: &Graph, coeffs: &mut [i64], script: &mut [i64], in_set: &[bool], times: i64) {
    for u in 0..g.n_vertices() {
        if !in_set[u] {
            continue;
        }
        script[u] += times;
        for &(w, m) in g.neighbours(u) {
            if !in_set[w] {
                coeffs[u] -= times * m;
                coeffs[w] += times * m;
            }
        }
    }
}

/// Computes the `v`-reduced divisor equivalent to `d`.
///
/// First every vertex is made non-negative, farthest BFS layer first, by
/// firing the ball of vertices strictly closer to `v`; firing that ball never
/// touches the layers already fixed. Then the unburnt set left by Dhar's
/// burning is fired, as many times as it stays legal, until everything burns.
pub fn reduce(g: &Graph, d: &Divisor, v: usize) -> Result<ReducedForm> {
    g.check_divisor(d)?;
    g.check_vertex(v)?;
    let dist = layers(g, v).ok_or_else(|| invalid("graph is not connected"))?;
    let n = g.n_vertices();
    let mut coeffs = d.coeffs().to_vec();
    let mut script = vec![0i64; n];

    let depth = dist.iter().copied().max().unwrap_or(0);
    for level in (1..=depth).rev() {
        let mut times = 0i64;
        for w in (0..n).filter(|&w| dist[w] == level && coeffs[w] < 0) {
            let inward: i64 = g
                .neighbours(w)
                .iter()
                .filter(|&&(x, _)| dist[x] + 1 == level)
                .map(|&(_, m)| m)
                .sum();
            times = times.max((-coeffs[w] + inward - 1) / inward);
        }
        if times > 0 {
            let ball: Vec<bool> = dist.iter().map(|&x| x < level).collect();
            fire_set(g, &mut coeffs, &mut script, &ball, times);
        }
    }

    loop {
        let Burn { burnt, into_burnt } = burn(g, &coeffs, v);
        if burnt.iter().all(|&b| b) {
            break;
        }
        let unburnt: Vec<bool> = burnt.iter().map(|&b| !b).collect();
        let times = (0..n)
            .filter(|&u| unburnt[u] && into_burnt[u] > 0)
            .map(|u| coeffs[u] / into_burnt[u])
            .min()
            .expect("connected graph: the unburnt set has a boundary");
        debug_assert!(times >= 1);
        fire_set(g, &mut coeffs, &mut script, &unburnt, times);
    }

    let divisor = Divisor::new(coeffs);
    let ordering = if g.is_complete() {
        witness_ordering(&divisor, v)
    } else {
        None
    };
    Ok(ReducedForm {
        divisor,
        base: v,
        script: FiringScript::new(script),
        ordering,
    })
}

/// Non-base vertices sorted by coefficient, ties by index.
pub(crate) fn sorted_off_base(d: &Divisor, v: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.len()).filter(|&w| w != v).collect();
    order.sort_by_key(|&w| (d[w], w));
    order
}

fn witness_ordering(d: &Divisor, v: usize) -> Option<Vec<usize>> {
    let order = sorted_off_base(d, v);
    order
        .iter()
        .enumerate()
        .all(|(i, &w)| (0..=i as i64).contains(&d[w]))
        .then_some(order)
}

/// On `K_d`: an ordering `v_1, ..., v_{d-1}` of the non-base vertices with
/// `0 <= D(v_i) <= i - 1`, if one exists. Such an ordering exists exactly when
/// `d` is `v`-reduced, and the ascending sort finds it whenever any does.
pub fn reduced_witness_ordering(g: &Graph, d: &Divisor, v: usize) -> Result<Option<Vec<usize>>> {
    g.require_complete()?;
    g.check_divisor(d)?;
    g.check_vertex(v)?;
    Ok(witness_ordering(d, v))
}
