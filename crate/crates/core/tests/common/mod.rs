//! Oracles written from the definitions, independent of the crate's
//! algorithms, plus random generators for the property tests.
#![allow(dead_code)]

use chipfire::rng::SplitMix64;
use chipfire::{Divisor, Graph};

/// Edges from `w` to vertices outside `set` (mask over vertices).
fn outdeg(g: &Graph, w: usize, set: u64) -> i64 {
    g.neighbours(w)
        .iter()
        .filter(|&&(x, _)| set >> x & 1 == 0)
        .map(|&(_, m)| m)
        .sum()
}

/// `v`-reduced by definition: effective off `v`, and every non-empty
/// `A` in `V - {v}` contains a vertex with `D(w) < outdeg_A(w)`.
pub fn subset_reduced(g: &Graph, d: &Divisor, v: usize) -> bool {
    let n = g.n_vertices();
    assert!(n <= 20, "subset oracle is exponential");
    if (0..n).any(|w| w != v && d[w] < 0) {
        return false;
    }
    let others: Vec<usize> = (0..n).filter(|&w| w != v).collect();
    for mask in 1u64..(1 << others.len()) {
        let set: u64 = others
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &w)| 1u64 << w)
            .sum();
        let saturated = others
            .iter()
            .filter(|&&w| set >> w & 1 == 1)
            .all(|&w| d[w] >= outdeg(g, w, set));
        if saturated {
            return false;
        }
    }
    true
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Copy)]
struct Q(i128, i128);

impl Q {
    fn new(n: i128, d: i128) -> Q {
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Q(s * n / g, s * d / g)
    }
    fn sub(self, o: Q) -> Q {
        Q::new(self.0 * o.1 - o.0 * self.1, self.1 * o.1)
    }
    fn mul(self, o: Q) -> Q {
        Q::new(self.0 * o.0, self.1 * o.1)
    }
    fn div(self, o: Q) -> Q {
        Q::new(self.0 * o.1, self.1 * o.0)
    }
    fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Solves `L' f = x` over the rationals, where `L'` is the Laplacian with
/// the last row and column removed, and reports whether `f` is integral.
/// On a connected graph that decides whether `x` (degree 0) is principal.
pub fn is_principal(g: &Graph, x: &Divisor) -> bool {
    let n = g.n_vertices();
    if x.coeffs().iter().sum::<i64>() != 0 {
        return false;
    }
    let m = n - 1;
    let mut a: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut row: Vec<Q> = (0..m)
                .map(|j| {
                    let v = if i == j {
                        g.degree(i)
                    } else {
                        -g.multiplicity(i, j)
                    };
                    Q::new(v as i128, 1)
                })
                .collect();
            row.push(Q::new(x[i] as i128, 1));
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !a[r][col].is_zero())
            .expect("connected graph");
        a.swap(col, pivot);
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].div(a[col][col]);
                let pivot_row = a[col].clone();
                for (x, &p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x = x.sub(f.mul(p));
                }
            }
        }
    }
    (0..m).all(|i| a[i][m].div(a[i][i]).1 == 1)
}

pub fn equivalent(g: &Graph, d1: &Divisor, d2: &Divisor) -> bool {
    is_principal(g, &(d1 - d2))
}

/// Effective divisors of degree `deg` on `n` vertices, all of them.
pub fn effective_of_degree(n: usize, deg: i64) -> Vec<Divisor> {
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    fn go(i: usize, left: i64, c: &mut Vec<i64>, out: &mut Vec<Divisor>) {
        if i + 1 == c.len() {
            c[i] = left;
            out.push(Divisor::new(c.clone()));
            return;
        }
        for x in 0..=left {
            c[i] = x;
            go(i + 1, left - x, c, out);
        }
    }
    if deg >= 0 && n > 0 {
        go(0, deg, &mut c, &mut out);
    }
    out
}

/// `|D|` non-empty, by searching every effective divisor of the same degree.
pub fn has_effective_by_search(g: &Graph, d: &Divisor) -> bool {
    let deg: i64 = d.coeffs().iter().sum();
    effective_of_degree(g.n_vertices(), deg)
        .iter()
        .any(|f| equivalent(g, d, f))
}

/// Rank straight from the definition. Tiny inputs only.
pub fn rank_by_definition(g: &Graph, d: &Divisor) -> i64 {
    let mut r = 0;
    loop {
        let all = effective_of_degree(g.n_vertices(), r)
            .iter()
            .all(|e| has_effective_by_search(g, &(d - e)));
        if !all {
            return r - 1;
        }
        r += 1;
    }
}

/// `gamma_r` of `K_d` by searching `r = k(k+3)/2 - h` over the whole box
/// `1 <= k <= d-3`, `0 <= h <= k`.
pub fn gonality_by_windows(d: usize, r: i64) -> i64 {
    let d = d as i64;
    let g = (d - 1) * (d - 2) / 2;
    if r >= g {
        return g + r;
    }
    let hits: Vec<i64> = (1..=d - 3)
        .flat_map(|k| (0..=k).map(move |h| (k, h)))
        .filter(|&(k, h)| k * (k + 3) / 2 - h == r)
        .map(|(k, h)| k * d - h)
        .collect();
    assert_eq!(hits.len(), 1, "r = {r} must have exactly one window");
    hits[0]
}

/// Connected multigraph: a random spanning tree plus `extra` random edges.
pub fn random_connected_graph(n: usize, extra: usize, rng: &mut SplitMix64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.below(v as u64) as usize, v));
    }
    for _ in 0..extra {
        let u = rng.below(n as u64) as usize;
        let mut w = rng.below(n as u64 - 1) as usize;
        if w >= u {
            w += 1;
        }
        edges.push((u.min(w), u.max(w)));
    }
    Graph::new(n, edges).expect("valid edges")
}

/// Coefficients in `lo..=hi`, with the last vertex absorbing the rest so
/// the degree is exactly `deg`.
pub fn random_divisor(n: usize, deg: i64, lo: i64, hi: i64, rng: &mut SplitMix64) -> Divisor {
    let mut c: Vec<i64> = (0..n - 1).map(|_| rng.range_i64(lo, hi)).collect();
    let rest = deg - c.iter().sum::<i64>();
    c.push(rest);
    Divisor::new(c)
}

pub fn random_script(n: usize, span: i64, rng: &mut SplitMix64) -> Vec<i64> {
    (0..n).map(|_| rng.range_i64(-span, span)).collect()
}

/// Laplacian image written from the definition: `div(f)(v) = sum over
/// edges vw of f(v) - f(w)`.
pub fn laplacian(g: &Graph, f: &[i64]) -> Divisor {
    let mut out = vec![0i64; g.n_vertices()];
    for &(u, w) in g.edges() {
        out[u] += f[u] - f[w];
        out[w] += f[w] - f[u];
    }
    Divisor::new(out)
}
