//! Rank: a definition-level oracle for any graph and the
//! chip-subtraction algorithm for complete graphs.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::graph::{genus, Divisor, Graph};
use crate::reduction::reduce;

/// One subtraction of the complete-graph algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecrementStep {
    /// Vertex whose chip was removed.
    pub vertex: usize,
    /// Reduced form after the removal.
    pub reduced: Divisor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankResult {
    pub rank: i64,
    /// Base vertex used for the emptiness tests.
    pub base: usize,
    /// Effective `E` of degree `rank + 1` with `|D - E|` empty. Absent for
    /// rank `-1` and when the Riemann-Roch shortcut answered.
    pub negative_witness: Option<Divisor>,
    pub decrement_trace: Vec<DecrementStep>,
    pub riemann_roch_shortcut: bool,
}

impl RankResult {
    fn minus_one(base: usize) -> Self {
        RankResult {
            rank: -1,
            base,
            negative_witness: None,
            decrement_trace: Vec::new(),
            riemann_roch_shortcut: false,
        }
    }

    /// Trace lines `s t coeff`, where `(s, t)` runs through
    /// `(1,0), (1,1), (2,0), (2,1), (2,2), (3,0), ...` and `coeff` is the base
    /// coefficient after each subtraction.
    pub fn trace_lines(&self) -> Vec<String> {
        self.decrement_trace
            .iter()
            .enumerate()
            .map(|(j, step)| {
                let (s, t) = schedule_label(j);
                format!("{s} {t} {}", step.reduced[self.base])
            })
            .collect()
    }
}

/// `(s, t)` label of the `j`-th subtraction (0-based), lexicographic with
/// `0 <= t <= s`.
pub fn schedule_label(j: usize) -> (usize, usize) {
    let mut s = 1;
    let mut rest = j;
    while rest > s {
        rest -= s + 1;
        s += 1;
    }
    (s, rest)
}

/// `|D| != {}`, decided at `base`.
pub fn has_effective_member(g: &Graph, d: &Divisor, base: usize) -> Result<bool> {
    Ok(reduce(g, d, base)?.base_coeff() >= 0)
}

/// Effective divisors of a fixed degree on a vertex subset, in colex order of
/// their coefficient tuples.
#[derive(Debug, Clone)]
pub struct EffectiveDivisors {
    support: Vec<usize>,
    n: usize,
    tuple: Vec<i64>,
    done: bool,
}

impl EffectiveDivisors {
    pub fn new(n: usize, support: &[usize], degree: i64) -> Self {
        assert!(degree >= 0);
        let mut tuple = vec![0; support.len()];
        let done = support.is_empty() && degree > 0;
        if let Some(first) = tuple.first_mut() {
            *first = degree;
        }
        EffectiveDivisors {
            support: support.to_vec(),
            n,
            tuple,
            done,
        }
    }

    fn advance(&mut self) {
        let Some(i) = self.tuple.iter().position(|&x| x > 0) else {
            self.done = true;
            return;
        };
        if i + 1 == self.tuple.len() {
            self.done = true;
            return;
        }
        let v = self.tuple[i];
        self.tuple[i] = 0;
        self.tuple[i + 1] += 1;
        self.tuple[0] = v - 1;
    }
}

impl Iterator for EffectiveDivisors {
    type Item = Divisor;

    fn next(&mut self) -> Option<Divisor> {
        if self.done {
            return None;
        }
        let mut e = Divisor::zero(self.n);
        for (&v, &c) in self.support.iter().zip(&self.tuple) {
            e.set(v, c);
        }
        self.advance();
        Some(e)
    }
}

const CHUNK: usize = 4096;

/// First `E` (in enumeration order) with `|D - E|` empty.
fn first_failure(
    g: &Graph,
    d: &Divisor,
    base: usize,
    candidates: EffectiveDivisors,
) -> Result<Option<Divisor>> {
    let mut candidates = candidates.peekable();
    while candidates.peek().is_some() {
        let chunk: Vec<Divisor> = candidates.by_ref().take(CHUNK).collect();
        let hit = chunk
            .par_iter()
            .map(|e| has_effective_member(g, &(d - e), base).map(|ok| !ok))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .position(|failed| failed);
        if let Some(i) = hit {
            return Ok(chunk.into_iter().nth(i));
        }
    }
    Ok(None)
}

/// Exact rank by the definition, testing every effective `E` on all vertices.
///
/// Divisors of degree above `2g - 2` are answered by Riemann-Roch as
/// `deg - g` without a witness.
pub fn rank_oracle(g: &Graph, d: &Divisor) -> Result<RankResult> {
    let all: Vec<usize> = (0..g.n_vertices()).collect();
    rank_oracle_on(g, d, &all)
}

/// As [`rank_oracle`], but the test divisors `E` range over `support` only.
/// Exact whenever `support` is rank-determining, e.g. the original vertices
/// of a subdivided graph.
pub fn rank_oracle_on(g: &Graph, d: &Divisor, support: &[usize]) -> Result<RankResult> {
    g.check_divisor(d)?;
    let gen = genus(g)?;
    for &v in support {
        g.check_vertex(v)?;
    }
    let base = g.n_vertices() - 1;
    let deg = d.degree();
    if deg < 0 || !has_effective_member(g, d, base)? {
        return Ok(RankResult::minus_one(base));
    }
    if deg > 2 * gen - 2 {
        return Ok(RankResult {
            rank: deg - gen,
            base,
            negative_witness: None,
            decrement_trace: Vec::new(),
            riemann_roch_shortcut: true,
        });
    }
    for r in 1..=deg + 1 {
        let candidates = EffectiveDivisors::new(g.n_vertices(), support, r);
        if let Some(e) = first_failure(g, d, base, candidates)? {
            return Ok(RankResult {
                rank: r - 1,
                base,
                negative_witness: Some(e),
                decrement_trace: Vec::new(),
                riemann_roch_shortcut: false,
            });
        }
    }
    Err(crate::error::Error::Internal(
        "no failing divisor of degree deg(D) + 1 on a non-empty support".into(),
    ))
}

/// `rank(D) >= r`, testing the degree-`r` divisors on `support` only; stops
/// at the first failure.
pub fn rank_at_least_on(g: &Graph, d: &Divisor, r: i64, support: &[usize]) -> Result<bool> {
    g.check_divisor(d)?;
    let base = g.n_vertices() - 1;
    if r < 0 {
        return Ok(true);
    }
    let deg = d.degree();
    if deg < r {
        return Ok(false);
    }
    let gen = genus(g)?;
    if deg > 2 * gen - 2 {
        return Ok(deg - gen >= r);
    }
    let candidates = EffectiveDivisors::new(g.n_vertices(), support, r);
    Ok(first_failure(g, d, base, candidates)?.is_none())
}

/// Rank on `K_d`: reduce at `v_d`, then repeatedly remove a chip from the
/// zero-coefficient vertex of smallest index and re-reduce. Each removal
/// lowers the rank by exactly one, so the rank is one less than the number
/// of removals needed to empty the linear system.
pub fn rank_complete_fast(g: &Graph, d: &Divisor) -> Result<RankResult> {
    g.require_complete()?;
    g.check_divisor(d)?;
    let n = g.n_vertices();
    let base = n - 1;
    let mut current = reduce(g, d, base)?.divisor;
    let mut removed = Divisor::zero(n);
    let mut trace = Vec::new();
    while current[base] >= 0 {
        let w = (0..base)
            .find(|&w| current[w] == 0)
            .expect("a reduced divisor on K_d has a zero off the base");
        current.add_at(w, -1);
        removed.add_at(w, 1);
        current = reduce(g, &current, base)?.divisor;
        trace.push(DecrementStep {
            vertex: w,
            reduced: current.clone(),
        });
    }
    let rank = trace.len() as i64 - 1;
    Ok(RankResult {
        rank,
        base,
        negative_witness: (rank >= 0).then_some(removed),
        decrement_trace: trace,
        riemann_roch_shortcut: false,
    })
}

/// Fast path on complete graphs, oracle elsewhere.
pub fn rank(g: &Graph, d: &Divisor) -> Result<RankResult> {
    if g.is_complete() {
        rank_complete_fast(g, d)
    } else {
        rank_oracle(g, d)
    }
}

/// The reduced form of `kd(v_d)` after the `(s, t)` subtraction step:
/// `[kd - s(d-1) - t](v_d) + sum_{i=s+1}^{d-1} (s-t)(v_i)
///   + sum_{i=t+1}^{s} (i-t-1)(v_i) + sum_{i=1}^{t} (d-2-t+i)(v_i)`.
pub fn dst_closed_form(d: usize, k: i64, s: usize, t: usize) -> Result<Divisor> {
    if d < 2 || k < 1 || s < 1 || s > d - 1 || t > s {
        return Err(invalid(format!(
            "need d >= 2, k >= 1, 1 <= s <= d-1, 0 <= t <= s; got d={d} k={k} s={s} t={t}"
        )));
    }
    let (di, si, ti) = (d as i64, s as i64, t as i64);
    let mut out = Divisor::zero(d);
    out.set(d - 1, k * di - si * (di - 1) - ti);
    for i in 1..d {
        let ii = i as i64;
        let c = if i > s {
            si - ti
        } else if i > t {
            ii - ti - 1
        } else {
            di - 2 - ti + ii
        };
        out.set(i - 1, c);
    }
    Ok(out)
}
