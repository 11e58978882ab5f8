//! Integer sequences behind the lower bound for `K_d`.
//!
//! A divisor of degree `k(d-1) - 1`, reduced at `v_d` and sorted so that
//! `D(v_1) <= ... <= D(v_{d-1})`, has `D(v_d) = a(d-1) + b` and the profile
//! `alpha_i = D(v_i) + a - (i - 2)`. Such profiles satisfy the star
//! conditions
//!
//! ```text
//! alpha_i <= a + 1,   alpha_i >= a - i + 2,   alpha_{i+1} >= alpha_i - 1,
//! sum alpha_i = k(d-1) - (d-2)(d-3)/2 - b,
//! ```
//!
//! and the extremal profiles `beta^(p,q)` dominate every other profile with
//! the same sum.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::Divisor;
use crate::reduction::sorted_off_base;

/// Parameters shared by the star conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SequenceContext {
    pub d: usize,
    pub k: i64,
    pub a: i64,
    pub b: i64,
}

impl SequenceContext {
    /// `k(d-1) - (d-2)(d-3)/2 - b`.
    pub fn target_sum(&self) -> i64 {
        let d = self.d as i64;
        self.k * (d - 1) - (d - 2) * (d - 3) / 2 - self.b
    }

    /// `k(k+1)/2`, the degree budget of a certificate.
    pub fn budget(&self) -> i64 {
        self.k * (self.k + 1) / 2
    }

    /// Smallest and largest sums reachable under the star conditions:
    /// those of `beta^(1,d)` and of the constant `a + 1` sequence.
    pub fn sum_range(&self) -> (i64, i64) {
        let m = self.d as i64 - 1;
        (m * (self.a + 2) - m * (m + 1) / 2, m * (self.a + 1))
    }

    fn check_bounds(&self) -> Result<()> {
        let d = self.d as i64;
        if self.d < 4 || self.k < 1 || self.k > d - 3 {
            return Err(invalid(format!(
                "need 1 <= k <= d-3, got d={} k={}",
                self.d, self.k
            )));
        }
        if self.a < 0 || self.a > self.k - 1 {
            return Err(invalid(format!("need 0 <= a <= k-1, got a={}", self.a)));
        }
        if self.b < 0 || self.b > d - 2 {
            return Err(invalid(format!("need 0 <= b <= d-2, got b={}", self.b)));
        }
        Ok(())
    }
}

/// First violated star condition, if any.
pub fn star_violation(values: &[i64], ctx: &SequenceContext) -> Option<String> {
    if values.len() + 1 != ctx.d {
        return Some(format!("length {} instead of {}", values.len(), ctx.d - 1));
    }
    for (idx, &x) in values.iter().enumerate() {
        let i = idx as i64 + 1;
        if x > ctx.a + 1 {
            return Some(format!("alpha_{i} = {x} exceeds a+1 = {}", ctx.a + 1));
        }
        if x < ctx.a - i + 2 {
            return Some(format!("alpha_{i} = {x} below a-i+2 = {}", ctx.a - i + 2));
        }
        if idx > 0 && x < values[idx - 1] - 1 {
            return Some(format!("alpha_{i} = {x} drops by more than one"));
        }
    }
    let sum: i64 = values.iter().sum();
    if sum != ctx.target_sum() {
        return Some(format!("sum {sum} differs from {}", ctx.target_sum()));
    }
    None
}

/// A sequence satisfying the star conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSequence {
    values: Vec<i64>,
    ctx: SequenceContext,
}

impl StarSequence {
    pub fn new(values: Vec<i64>, ctx: SequenceContext) -> Result<Self> {
        match star_violation(&values, &ctx) {
            Some(why) => Err(invalid(why)),
            None => Ok(StarSequence { values, ctx }),
        }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn context(&self) -> SequenceContext {
        self.ctx
    }

    /// `(t1, t2) = (sum alpha_i^+, b + 1 + sum (alpha_i - 1)^+)`.
    pub fn t1_t2(&self) -> (i64, i64) {
        t_values(&self.values, self.ctx.b)
    }
}

pub(crate) fn positive_part_sums(values: &[i64]) -> (i64, i64) {
    values
        .iter()
        .fold((0, 0), |(p0, p1), &x| (p0 + x.max(0), p1 + (x - 1).max(0)))
}

pub(crate) fn t_values(values: &[i64], b: i64) -> (i64, i64) {
    let (p0, p1) = positive_part_sums(values);
    (p0, b + 1 + p1)
}

/// Splits the base coefficient as `a(d-1) + b` with `0 <= b <= d-2`.
pub fn split_base(d: usize, base_coeff: i64) -> (i64, i64) {
    let m = d as i64 - 1;
    (base_coeff.div_euclid(m), base_coeff.rem_euclid(m))
}

/// The profile `alpha_i = D(v_i) + a - (i - 2)` of a `v_d`-reduced divisor of
/// degree `k(d-1) - 1` on `K_d`, with the non-base vertices taken in
/// ascending coefficient order (ties by index). `k` is read off the degree
/// and `b = D(v_d) - a(d-1)`.
pub fn alpha_from_divisor(d: usize, divisor: &Divisor, a: i64) -> Result<StarSequence> {
    if d < 4 || divisor.len() != d {
        return Err(invalid(format!(
            "need a divisor on K_d with d >= 4, got {} coefficients",
            divisor.len()
        )));
    }
    let m = d as i64 - 1;
    let deg = divisor.degree();
    if (deg + 1).rem_euclid(m) != 0 {
        return Err(invalid(format!(
            "degree {deg} is not of the form k(d-1) - 1"
        )));
    }
    let k = (deg + 1) / m;
    let base = d - 1;
    let b = divisor[base] - a * m;
    let values = sorted_off_base(divisor, base)
        .iter()
        .enumerate()
        .map(|(idx, &w)| divisor[w] + a - (idx as i64 - 1))
        .collect();
    StarSequence::new(values, SequenceContext { d, k, a, b })
}

/// An extremal profile `beta^(p,q)`; `q` is absent for the constant
/// sequence `p = d - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaParams {
    pub p: usize,
    pub q: Option<usize>,
    pub values: Vec<i64>,
}

/// `beta^(p,q)`: `a+1` on the first `p` places, then descending by one with a
/// single repeat at place `q` (no repeat when `q = d`).
pub fn beta_sequence(d: usize, a: i64, p: usize, q: Option<usize>) -> Result<Vec<i64>> {
    match q {
        None if p == d - 1 => Ok(vec![a + 1; d - 1]),
        None => Err(invalid(format!(
            "q is required unless p = d-1 (p={p}, d={d})"
        ))),
        Some(q) => {
            if p < 1 || p > d.saturating_sub(2) || q < p + 2 || q > d {
                return Err(invalid(format!(
                    "need 1 <= p <= d-2 and p+2 <= q <= d, got p={p} q={q}"
                )));
            }
            let (p, q) = (p as i64, q as i64);
            Ok((1..d as i64)
                .map(|i| {
                    if i <= p {
                        a + 1
                    } else if i < q {
                        p + a + 1 - i
                    } else {
                        p + a + 2 - i
                    }
                })
                .collect())
        }
    }
}

/// `q(p) = (d-1)[p - (k-a)] - p(p-1)/2 + b + 2`.
pub fn q_formula(ctx: &SequenceContext, p: i64) -> i64 {
    let d = ctx.d as i64;
    (d - 1) * (p - (ctx.k - ctx.a)) - p * (p - 1) / 2 + ctx.b + 2
}

/// Every `(p, q)` whose `beta^(p,q)` has the target sum, found by scanning
/// `p` through the closed form for `q`. The constant sequence is reported as
/// `(d-1, None)`.
pub fn admissible_pq(ctx: &SequenceContext) -> Vec<(usize, Option<usize>)> {
    let d = ctx.d;
    let mut out: Vec<(usize, Option<usize>)> = (1..=d - 2)
        .filter_map(|p| {
            let q = q_formula(ctx, p as i64);
            (q >= p as i64 + 2 && q <= d as i64).then_some((p, Some(q as usize)))
        })
        .collect();
    if ctx.target_sum() == (d as i64 - 1) * (ctx.a + 1) {
        out.push((d - 1, None));
    }
    out
}

/// The unique extremal profile with the target sum.
///
/// Fails with `OutOfRange` when the target lies outside the sums any star
/// sequence can reach (then no profile exists at all), and with `Internal`
/// if the scan finds zero or several candidates inside that range.
pub fn solve_pq(d: usize, k: i64, a: i64, b: i64) -> Result<BetaParams> {
    let ctx = SequenceContext { d, k, a, b };
    ctx.check_bounds()?;
    let (lo, hi) = ctx.sum_range();
    let target = ctx.target_sum();
    if target < lo || target > hi {
        return Err(Error::OutOfRange(format!(
            "target sum {target} outside [{lo}, {hi}] for d={d} k={k} a={a} b={b}"
        )));
    }
    let found = admissible_pq(&ctx);
    let [(p, q)] = found[..] else {
        return Err(Error::Internal(format!(
            "expected exactly one admissible p for d={d} k={k} a={a} b={b}, found {found:?}"
        )));
    };
    let values = beta_sequence(d, a, p, q)?;
    let sum: i64 = values.iter().sum();
    if sum != target {
        return Err(Error::Internal(format!(
            "beta^({p},{q:?}) sums to {sum}, not {target}"
        )));
    }
    Ok(BetaParams { p, q, values })
}

/// True iff `beta` has at least the positive mass of `alpha`, both for
/// `x^+` and for `(x - 1)^+`.
pub fn check_domination(alpha: &StarSequence, beta: &BetaParams) -> Result<bool> {
    let sa: i64 = alpha.values().iter().sum();
    let sb: i64 = beta.values.iter().sum();
    if sa != sb {
        return Err(invalid(format!("sums differ: {sa} vs {sb}")));
    }
    let (a0, a1) = positive_part_sums(alpha.values());
    let (b0, b1) = positive_part_sums(&beta.values);
    Ok(a0 <= b0 && a1 <= b1)
}

/// The three cases of the argument bounding `min(t1, t2)` for an extremal
/// profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimCase {
    /// `beta_{d-1} > 0`.
    PositiveTail,
    /// `beta_{d-1} <= 0` and `q < a + p + 2`.
    RepeatAbovePositive,
    /// `beta_{d-1} <= 0`, `q >= a + p + 2` and `p = k - a`.
    RepeatLateMinimalP,
    /// `beta_{d-1} <= 0`, `q >= a + p + 2` and `p > k - a`.
    RepeatLate,
}

/// Which `t` a case bounds, and its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CasePrediction {
    pub case: ClaimCase,
    /// `1` or `2`.
    pub which: u8,
    pub formula: i64,
}

/// Classifies `beta` and evaluates the closed form of the case.
pub fn claim_case(ctx: &SequenceContext, beta: &BetaParams) -> CasePrediction {
    let d = ctx.d as i64;
    let (k, a) = (ctx.k, ctx.a);
    let p = beta.p as i64;
    let base = (k - 1) * (d - 1) - (d - 2) * (d - 3) / 2 + 1;
    let tail = *beta.values.last().expect("d >= 2");
    let m = d - p - a;
    if tail > 0 {
        return CasePrediction {
            case: ClaimCase::PositiveTail,
            which: 2,
            formula: base,
        };
    }
    let q = beta.q.expect("the constant profile has a positive tail") as i64;
    if q < a + p + 2 {
        CasePrediction {
            case: ClaimCase::RepeatAbovePositive,
            which: 2,
            formula: base + (m - 2) * (m - 1) / 2,
        }
    } else if p == k - a {
        CasePrediction {
            case: ClaimCase::RepeatLateMinimalP,
            which: 1,
            formula: k * (k + 1) / 2 - p * (p - 1) / 2,
        }
    } else {
        CasePrediction {
            case: ClaimCase::RepeatLate,
            which: 2,
            formula: base + (m - 1) * (m - 2) / 2 + q - p - a - 1,
        }
    }
}

/// Calls `visit` on every star sequence for `ctx`, depth first in
/// lexicographic order. `alpha_1 = a + 1` is forced; later places range over
/// `max(a - i + 2, alpha_{i-1} - 1) ..= a + 1`, pruned by the smallest and
/// largest sums the remaining places can still add.
pub fn for_each_star_sequence(ctx: &SequenceContext, mut visit: impl FnMut(&[i64])) {
    let len = ctx.d - 1;
    let target = ctx.target_sum();
    let mut buf = vec![0i64; len];
    buf[0] = ctx.a + 1;

    fn feasible(x: i64, sum: i64, remaining: i64, top: i64, target: i64) -> bool {
        let lo = sum + remaining * x - remaining * (remaining + 1) / 2;
        let hi = sum + remaining * top;
        lo <= target && target <= hi
    }

    fn go(
        i: usize,
        sum: i64,
        buf: &mut Vec<i64>,
        ctx: &SequenceContext,
        target: i64,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        let len = buf.len();
        if i == len {
            if sum == target {
                visit(buf);
            }
            return;
        }
        let top = ctx.a + 1;
        let lo = (ctx.a - i as i64 + 1).max(buf[i - 1] - 1);
        let remaining = (len - i - 1) as i64;
        for x in lo..=top {
            if feasible(x, sum + x, remaining, top, target) {
                buf[i] = x;
                go(i + 1, sum + x, buf, ctx, target, visit);
            }
        }
    }

    let first = buf[0];
    if feasible(first, first, len as i64 - 1, ctx.a + 1, target) {
        go(1, first, &mut buf, ctx, target, &mut visit);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimViolation {
    pub a: i64,
    pub b: i64,
    pub alpha: Vec<i64>,
    pub t1: i64,
    pub t2: i64,
}

/// Outcome of the exhaustive check for one `(d, k)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClaimReport {
    pub d: usize,
    pub k: i64,
    pub sequences_checked: u64,
    /// Profiles with `min(t1, t2) > k(k+1)/2`.
    pub violations: Vec<ClaimViolation>,
    /// Profiles not dominated by their extremal profile.
    pub domination_failures: Vec<Vec<i64>>,
    /// Profiles breaking `alpha_1 = a+1`, `alpha_{a+2} >= 0`, or lacking a
    /// unique extremal profile.
    pub invariant_failures: Vec<String>,
    /// `(a, b)` pairs whose case closed form disagrees with the direct `t`,
    /// or whose case bound exceeds the budget.
    pub case_mismatches: Vec<String>,
    /// Number of `(a, b)` pairs falling in each case.
    pub case_counts: [u64; 4],
}

impl ClaimReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
            && self.domination_failures.is_empty()
            && self.invariant_failures.is_empty()
            && self.case_mismatches.is_empty()
    }

    /// `d k sequences_checked violations`.
    pub fn summary_line(&self) -> String {
        let bad = self.violations.len()
            + self.domination_failures.len()
            + self.invariant_failures.len()
            + self.case_mismatches.len();
        format!("{} {} {} {}", self.d, self.k, self.sequences_checked, bad)
    }
}

fn check_pair(ctx: SequenceContext) -> ClaimReport {
    let mut report = ClaimReport {
        d: ctx.d,
        k: ctx.k,
        ..Default::default()
    };
    let budget = ctx.budget();
    let (lo, hi) = ctx.sum_range();
    let target = ctx.target_sum();
    let beta = if lo <= target && target <= hi {
        match solve_pq(ctx.d, ctx.k, ctx.a, ctx.b) {
            Ok(beta) => Some(beta),
            Err(e) => {
                report
                    .invariant_failures
                    .push(format!("a={} b={}: {e}", ctx.a, ctx.b));
                None
            }
        }
    } else {
        None
    };

    if let Some(beta) = &beta {
        let pred = claim_case(&ctx, beta);
        let (t1, t2) = t_values(&beta.values, ctx.b);
        let direct = if pred.which == 1 { t1 } else { t2 };
        let idx = match pred.case {
            ClaimCase::PositiveTail => 0,
            ClaimCase::RepeatAbovePositive => 1,
            ClaimCase::RepeatLateMinimalP => 2,
            ClaimCase::RepeatLate => 3,
        };
        report.case_counts[idx] += 1;
        if direct != pred.formula || pred.formula > budget {
            report.case_mismatches.push(format!(
                "a={} b={} p={} q={:?} {:?}: t{} direct {direct}, formula {}, budget {budget}",
                ctx.a, ctx.b, beta.p, beta.q, pred.case, pred.which, pred.formula
            ));
        }
        if (beta.p as i64) < ctx.k - ctx.a {
            report
                .invariant_failures
                .push(format!("a={} b={}: p={} < k-a", ctx.a, ctx.b, beta.p));
        }
    }

    for_each_star_sequence(&ctx, |alpha| {
        report.sequences_checked += 1;
        let a = ctx.a;
        if alpha[0] != a + 1 || alpha.get(a as usize + 1).is_some_and(|&x| x < 0) {
            report.invariant_failures.push(format!(
                "a={a} b={}: {alpha:?} breaks alpha_1 / alpha_(a+2)",
                ctx.b
            ));
        }
        let (t1, t2) = t_values(alpha, ctx.b);
        if t1.min(t2) > budget {
            report.violations.push(ClaimViolation {
                a,
                b: ctx.b,
                alpha: alpha.to_vec(),
                t1,
                t2,
            });
        }
        match &beta {
            Some(beta) => {
                let (a0, a1) = positive_part_sums(alpha);
                let (b0, b1) = positive_part_sums(&beta.values);
                if a0 > b0 || a1 > b1 {
                    report.domination_failures.push(alpha.to_vec());
                }
            }
            None => report.invariant_failures.push(format!(
                "a={a} b={}: {alpha:?} has no extremal profile",
                ctx.b
            )),
        }
    });
    report
}

/// Exhaustively checks `min(t1, t2) <= k(k+1)/2` over every `a in 0..k`,
/// `b in 0..=d-2` and every star sequence, together with the domination
/// of each sequence by its extremal profile and the case formulas.
pub fn verify_claim(d: usize, k: i64) -> Result<ClaimReport> {
    SequenceContext { d, k, a: 0, b: 0 }.check_bounds()?;
    let pairs: Vec<SequenceContext> = (0..k)
        .flat_map(|a| (0..=d as i64 - 2).map(move |b| SequenceContext { d, k, a, b }))
        .collect();
    let parts: Vec<ClaimReport> = pairs.into_par_iter().map(check_pair).collect();
    let mut total = ClaimReport {
        d,
        k,
        ..Default::default()
    };
    for part in parts {
        total.sequences_checked += part.sequences_checked;
        total.violations.extend(part.violations);
        total.domination_failures.extend(part.domination_failures);
        total.invariant_failures.extend(part.invariant_failures);
        total.case_mismatches.extend(part.case_mismatches);
        for (t, c) in total.case_counts.iter_mut().zip(part.case_counts) {
            *t += c;
        }
    }
    Ok(total)
}
