//! Metric graphs with positive integer edge lengths, modelled by subdividing
//! every edge of length `l` into `l` unit edges.
//!
//! A divisor supported on the vertices of the subdivision has the same rank
//! on the subdivided graph as on the metric graph, and the original vertex
//! set is rank-determining, so ranks are computed with test divisors on the
//! original vertices only.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::gonality::gonality_formula;
use crate::graph::{complete_graph, Divisor, Graph};
use crate::rank::{rank_at_least_on, rank_oracle_on, RankResult};
use crate::reduction::{is_v_reduced, reduce};
use crate::rng::SplitMix64;

/// Default bound on the number of vertices of a subdivision.
pub const DEFAULT_VERTEX_CAP: usize = 200;

/// Positive integer edge lengths, aligned with [`Graph::edges`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeLengths(Vec<u64>);

impl EdgeLengths {
    pub fn new(lengths: Vec<u64>) -> Result<Self> {
        if let Some(i) = lengths.iter().position(|&l| l == 0) {
            return Err(invalid(format!("edge {i} has length 0")));
        }
        Ok(EdgeLengths(lengths))
    }

    pub fn uniform(n_edges: usize, length: u64) -> Result<Self> {
        EdgeLengths::new(vec![length; n_edges])
    }

    pub fn lengths(&self) -> &[u64] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&l| l == 1)
    }
}

/// Where a vertex of the subdivision sits on the original graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Vertex(usize),
    /// Interior point of `edge`, `position` unit steps from its first
    /// endpoint.
    Interior {
        edge: usize,
        position: u64,
    },
}

#[derive(Debug, Clone)]
pub struct SubdividedGraph {
    pub graph: Graph,
    pub original: Graph,
    pub lengths: EdgeLengths,
    /// Indexed by subdivision vertex; originals keep their indices.
    pub origin: Vec<Origin>,
    /// Interior vertices of each original edge, from its first endpoint on.
    pub interiors: Vec<Vec<usize>>,
}

impl SubdividedGraph {
    pub fn n_original(&self) -> usize {
        self.original.n_vertices()
    }

    pub fn originals(&self) -> Vec<usize> {
        (0..self.n_original()).collect()
    }

    /// A divisor on the original vertices, seen on the subdivision.
    pub fn embed(&self, d: &Divisor) -> Result<Divisor> {
        self.original.check_divisor(d)?;
        let mut coeffs = d.coeffs().to_vec();
        coeffs.resize(self.graph.n_vertices(), 0);
        Ok(Divisor::new(coeffs))
    }

    /// Chips on the open interior of each original edge.
    pub fn interior_chips(&self, d: &Divisor) -> Vec<i64> {
        self.interiors
            .iter()
            .map(|vs| vs.iter().map(|&x| d[x]).sum())
            .collect()
    }
}

/// Replaces every edge of length `l` by a path of `l` unit edges.
pub fn subdivide(g: &Graph, lengths: &EdgeLengths, cap: usize) -> Result<SubdividedGraph> {
    if lengths.lengths().len() != g.n_edges() {
        return Err(Error::Dimension {
            expected: g.n_edges(),
            got: lengths.lengths().len(),
        });
    }
    let needed = g.n_vertices()
        + lengths
            .lengths()
            .iter()
            .map(|&l| (l - 1) as usize)
            .sum::<usize>();
    if needed > cap {
        return Err(Error::ResourceLimit {
            what: "subdivision vertices",
            needed,
            cap,
        });
    }
    let mut origin: Vec<Origin> = (0..g.n_vertices()).map(Origin::Vertex).collect();
    let mut edges = Vec::new();
    let mut interiors = Vec::with_capacity(g.n_edges());
    for (e, (&(u, w), &l)) in g.edges().iter().zip(lengths.lengths()).enumerate() {
        let mut prev = u;
        let mut inner = Vec::new();
        for position in 1..l {
            let x = origin.len();
            origin.push(Origin::Interior { edge: e, position });
            edges.push((prev, x));
            inner.push(x);
            prev = x;
        }
        edges.push((prev, w));
        interiors.push(inner);
    }
    let graph = Graph::new(origin.len(), edges)?;
    Ok(SubdividedGraph {
        graph,
        original: g.clone(),
        lengths: lengths.clone(),
        origin,
        interiors,
    })
}

/// Rank of a divisor on the original vertices of the metric graph `g(l)`.
pub fn metric_rank(
    g: &Graph,
    lengths: &EdgeLengths,
    d: &Divisor,
    cap: usize,
) -> Result<RankResult> {
    let sg = subdivide(g, lengths, cap)?;
    let embedded = sg.embed(d)?;
    rank_oracle_on(&sg.graph, &embedded, &sg.originals())
}

/// `E = sum_{j=1}^{k+2} (k + 2 - j)(v_j)`, degree `k(k+3)/2 + 1`. With
/// `D = sum k(v_i)`, `D - E` is reduced at `v_1` for any edge lengths and
/// negative there, so `rank(D) <= k(k+3)/2`.
pub fn uniform_bound_witness(d: usize, k: i64) -> Result<Divisor> {
    if k < 1 || k + 2 > d as i64 {
        return Err(invalid(format!("need 1 <= k <= d-2, got d={d} k={k}")));
    }
    let mut e = Divisor::zero(d);
    for j in 1..=k + 2 {
        e.set(j as usize - 1, k + 2 - j);
    }
    Ok(e)
}

/// The three conditions characterizing divisors reduced at an original
/// vertex of a complete metric graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricReducedReport {
    pub effective_off_base: bool,
    /// At most one chip on each open edge.
    pub interiors_ok: bool,
    /// An ordering `v_1, ..., v_{d-1}` of the other original vertices with
    /// `deg(D|A_i) <= i - 1`, and those degrees.
    pub ordering: Option<(Vec<usize>, Vec<i64>)>,
}

impl MetricReducedReport {
    pub fn is_reduced(&self) -> bool {
        self.effective_off_base && self.interiors_ok && self.ordering.is_some()
    }
}

/// `deg(D|A_i)` for `w = v_i` placed after `before`:
/// `A_i = (v, v_i] + the half-open edges (v_j, v_i]` for `v_j` in `before`.
fn segment_degree(sg: &SubdividedGraph, d: &Divisor, v: usize, before: &[usize], w: usize) -> i64 {
    let edges = sg.original.edges();
    let mut total = d[w];
    for (e, &(x, y)) in edges.iter().enumerate() {
        let other = if x == w {
            y
        } else if y == w {
            x
        } else {
            continue;
        };
        if other == v || before.contains(&other) {
            total += sg.interiors[e].iter().map(|&p| d[p]).sum::<i64>();
        }
    }
    total
}

/// `deg(D|A_i)` along a given ordering of the non-base original vertices.
pub fn segment_degrees(
    sg: &SubdividedGraph,
    d: &Divisor,
    v: usize,
    ordering: &[usize],
) -> Vec<i64> {
    (0..ordering.len())
        .map(|i| segment_degree(sg, d, v, &ordering[..i], ordering[i]))
        .collect()
}

/// Evaluates the reduced-divisor conditions on a subdivided complete graph.
/// The ordering is searched over subsets of placed vertices, so it is found
/// whenever one exists.
pub fn check_metric_reduced(
    sg: &SubdividedGraph,
    d: &Divisor,
    v: usize,
) -> Result<MetricReducedReport> {
    sg.original.require_complete()?;
    sg.graph.check_divisor(d)?;
    if v >= sg.n_original() {
        return Err(invalid(format!("base {v} is not an original vertex")));
    }
    let effective_off_base = d.is_effective_off(v);
    let interiors_ok = sg.interior_chips(d).iter().all(|&c| c <= 1);

    let others: Vec<usize> = (0..sg.n_original()).filter(|&w| w != v).collect();
    let m = others.len();
    // reachable[mask]: the vertices in `mask` can fill the first |mask| slots.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; 1 << m];
    let mut reachable = vec![false; 1 << m];
    reachable[0] = true;
    for mask in 0..(1usize << m) {
        if !reachable[mask] {
            continue;
        }
        let placed: Vec<usize> = (0..m)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| others[i])
            .collect();
        let slot = placed.len() as i64;
        for i in (0..m).filter(|&i| mask >> i & 1 == 0) {
            let next = mask | 1 << i;
            if !reachable[next] && segment_degree(sg, d, v, &placed, others[i]) <= slot {
                reachable[next] = true;
                parent[next] = Some((mask, others[i]));
            }
        }
    }
    let full = (1usize << m) - 1;
    let ordering = reachable[full].then(|| {
        let mut order = Vec::with_capacity(m);
        let mut mask = full;
        while let Some((prev, w)) = parent[mask] {
            order.push(w);
            mask = prev;
        }
        order.reverse();
        let degrees = segment_degrees(sg, d, v, &order);
        (order, degrees)
    });
    Ok(MetricReducedReport {
        effective_off_base,
        interiors_ok,
        ordering,
    })
}

/// Gonality sequence of the unit complete metric graph `K_d`, searched over
/// classes of divisors supported on the vertices of the 2-subdivision
/// (original vertices and edge midpoints). Agreement with the closed form
/// is evidence, not proof: break points off the half-integer lattice are
/// not enumerated.
pub fn unit_metric_gonality(d: usize, r: i64) -> Result<i64> {
    if r < 1 {
        return Err(invalid(format!("rank must be positive, got {r}")));
    }
    let kd = complete_graph(d)?;
    let sg = subdivide(
        &kd,
        &EdgeLengths::uniform(kd.n_edges(), 2)?,
        DEFAULT_VERTEX_CAP,
    )?;
    let base = d - 1;
    let originals = sg.originals();
    let configs = metric_reduced_configurations(&sg, base)?;
    let g = ((d - 1) * (d - 2) / 2) as i64;
    for s in r..=g + r {
        for c in &configs {
            let rest: i64 = c.iter().sum();
            if rest > s {
                continue;
            }
            let mut div = Divisor::new(c.clone());
            div.set(base, s - rest);
            // rank_at_least_on reduces at the last subdivision vertex; any
            // base gives the same emptiness test.
            if rank_at_least_on(&sg.graph, &div, r, &originals)? {
                return Ok(s);
            }
        }
    }
    Err(Error::Internal(format!(
        "no class of degree g + r reached rank {r} (d={d})"
    )))
}

/// Off-base parts of the divisors on the 2-subdivision of `K_d` that are
/// reduced at `base`: at most `d - 2` chips per original vertex, at most one
/// per midpoint. Only the lexicographically least member of each orbit under
/// relabelings of the non-base vertices is kept; rank is invariant under
/// them.
fn metric_reduced_configurations(sg: &SubdividedGraph, base: usize) -> Result<Vec<Vec<i64>>> {
    let n = sg.graph.n_vertices();
    let d = sg.n_original();
    let caps: Vec<i64> = (0..n)
        .map(|x| match sg.origin[x] {
            Origin::Vertex(w) if w == base => 0,
            Origin::Vertex(_) => d as i64 - 2,
            Origin::Interior { .. } => 1,
        })
        .collect();
    let relabelings = vertex_relabelings(sg, base);
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    loop {
        let div = Divisor::new(c.clone());
        let canonical = relabelings.iter().all(|p| {
            let image: Vec<i64> = (0..n).map(|x| c[p[x]]).collect();
            image >= c
        });
        if canonical && is_v_reduced(&sg.graph, &div, base)? {
            out.push(c.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            c[i] += 1;
            if c[i] <= caps[i] {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

/// Permutations of the subdivision vertices induced by permuting the
/// original vertices other than `base` (the original graph is complete).
fn vertex_relabelings(sg: &SubdividedGraph, base: usize) -> Vec<Vec<usize>> {
    let d = sg.n_original();
    let edges = sg.original.edges();
    let edge_of = |u: usize, w: usize| {
        edges
            .iter()
            .position(|&e| e == (u.min(w), u.max(w)))
            .expect("complete graph")
    };
    let others: Vec<usize> = (0..d).filter(|&w| w != base).collect();
    let mut out = Vec::new();
    let mut perm = others.clone();
    permutations(&mut perm, 0, &mut |p| {
        let mut map: Vec<usize> = (0..d).collect();
        for (&from, &to) in others.iter().zip(p) {
            map[from] = to;
        }
        let mut full: Vec<usize> = (0..sg.graph.n_vertices()).collect();
        for (e, &(u, w)) in edges.iter().enumerate() {
            let image = edge_of(map[u], map[w]);
            let mut src = sg.interiors[e].clone();
            // Orientation flips when the image edge is traversed backwards.
            if map[u] > map[w] {
                src.reverse();
            }
            for (&x, &y) in src.iter().zip(&sg.interiors[image]) {
                full[y] = x;
            }
        }
        for w in 0..d {
            full[map[w]] = w;
        }
        out.push(full);
    });
    out
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// `reduce(D - E, v)` on the subdivision is negative at `v`.
pub fn certifies_bound(sg: &SubdividedGraph, d: &Divisor, e: &Divisor, v: usize) -> Result<bool> {
    let diff = &sg.embed(d)? - &sg.embed(e)?;
    Ok(reduce(&sg.graph, &diff, v)?.base_coeff() < 0)
}

/// Checks `gamma_r` of the unit metric `K_d` against the closed form.
pub fn unit_metric_gonality_matches(d: usize, r: i64) -> Result<(i64, i64)> {
    Ok((unit_metric_gonality(d, r)?, gonality_formula(d, r)?))
}

/// Random lengths in `1..=max_len` for every edge of `g`.
pub fn random_lengths(g: &Graph, max_len: u64, rng: &mut SplitMix64) -> EdgeLengths {
    EdgeLengths((0..g.n_edges()).map(|_| 1 + rng.below(max_len)).collect())
}

/// One run of a metric battery on `K_d(l)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricTrial {
    pub battery: Battery,
    pub d: usize,
    pub k: i64,
    pub trial: usize,
    pub lengths: EdgeLengths,
    pub rank: i64,
    /// The value the rank must equal (exact) or not exceed (bound).
    pub bound: i64,
    /// For the bound: the explicit test divisor empties `|D - E|`.
    pub witness_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Battery {
    /// `rank(2 sum (v_i)) = 5` on `K_5(l)`.
    ExactRank,
    /// `rank(k sum (v_i)) <= k(k+3)/2` on `K_d(l)`.
    UpperBound,
}

impl MetricTrial {
    pub fn passed(&self) -> bool {
        match self.battery {
            Battery::ExactRank => self.rank == self.bound,
            Battery::UpperBound => self.rank <= self.bound && self.witness_ok,
        }
    }

    /// `battery,d,k,trial,lengths,rank,bound,status`
    pub fn csv_row(&self) -> String {
        let name = match self.battery {
            Battery::ExactRank => "exact",
            Battery::UpperBound => "bound",
        };
        let lengths: Vec<String> = self.lengths.0.iter().map(u64::to_string).collect();
        format!(
            "{name},{},{},{},{},{},{},{}",
            self.d,
            self.k,
            self.trial,
            lengths.join(" "),
            self.rank,
            self.bound,
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

pub const TRIAL_HEADER: &str = "battery,d,k,trial,lengths,rank,bound,status";

/// `k sum (v_i)` on `d` vertices.
pub fn uniform_divisor(d: usize, k: i64) -> Divisor {
    Divisor::new(vec![k; d])
}

pub fn exact_rank_trial(lengths: &EdgeLengths, trial: usize, cap: usize) -> Result<MetricTrial> {
    let k5 = complete_graph(5)?;
    let rank = metric_rank(&k5, lengths, &uniform_divisor(5, 2), cap)?.rank;
    Ok(MetricTrial {
        battery: Battery::ExactRank,
        d: 5,
        k: 2,
        trial,
        lengths: lengths.clone(),
        rank,
        bound: 5,
        witness_ok: true,
    })
}

pub fn upper_bound_trial(
    d: usize,
    k: i64,
    lengths: &EdgeLengths,
    trial: usize,
    cap: usize,
) -> Result<MetricTrial> {
    let kd = complete_graph(d)?;
    let sg = subdivide(&kd, lengths, cap)?;
    let divisor = uniform_divisor(d, k);
    let rank = rank_oracle_on(&sg.graph, &sg.embed(&divisor)?, &sg.originals())?.rank;
    let witness = uniform_bound_witness(d, k)?;
    let witness_ok = certifies_bound(&sg, &divisor, &witness, 0)?;
    Ok(MetricTrial {
        battery: Battery::UpperBound,
        d,
        k,
        trial,
        lengths: lengths.clone(),
        rank,
        bound: k * (k + 3) / 2,
        witness_ok,
    })
}

/// Runs `trials` seeded trials of each applicable battery on `K_d` with
/// lengths in `1..=3`: the exact rank of `2 sum (v_i)` when `d = 5`, and
/// the bound for every `1 <= k <= d - 3`. Rows come out in a fixed order.
pub fn metric_experiment(
    d: usize,
    trials: usize,
    seed: u64,
    cap: usize,
) -> Result<Vec<MetricTrial>> {
    if d < 4 {
        return Err(invalid(format!("metric experiments need d >= 4, got {d}")));
    }
    let kd = complete_graph(d)?;
    let mut rng = SplitMix64::new(seed);
    let mut plan = Vec::new();
    if d == 5 {
        for t in 0..trials {
            plan.push((Battery::ExactRank, 2, t, random_lengths(&kd, 3, &mut rng)));
        }
    }
    for k in 1..=d as i64 - 3 {
        for t in 0..trials {
            plan.push((Battery::UpperBound, k, t, random_lengths(&kd, 3, &mut rng)));
        }
    }
    plan.into_par_iter()
        .map(|(battery, k, t, l)| match battery {
            Battery::ExactRank => exact_rank_trial(&l, t, cap),
            Battery::UpperBound => upper_bound_trial(d, k, &l, t, cap),
        })
        .collect()
}
