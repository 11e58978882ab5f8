//! Loopless multigraphs, divisors and principal divisors.
//!
//! Vertices are contiguous indices `0..n`. Results about `K_d` label the
//! distinguished base vertex `v_d` as index `d - 1`.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use crate::error::{invalid, Error, Result};
use crate::reduction;

/// A finite loopless multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// `(neighbour, multiplicity)` per vertex, neighbours ascending.
    adj: Vec<Vec<(usize, i64)>>,
    degree: Vec<i64>,
    complete: bool,
}

impl Graph {
    /// Builds a graph from an edge multiset. Loops and out-of-range
    /// endpoints are rejected; disconnected graphs are accepted here and
    /// refused by the operations that need connectivity.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("graph needs at least one vertex"));
        }
        let mut mult = vec![vec![0i64; n]; n];
        for (i, &(u, w)) in edges.iter().enumerate() {
            if u >= n || w >= n {
                return Err(invalid(format!(
                    "edge {i} ({u},{w}) has an endpoint outside 0..{n}"
                )));
            }
            if u == w {
                return Err(invalid(format!("edge {i} is a loop at vertex {u}")));
            }
            mult[u][w] += 1;
            mult[w][u] += 1;
        }
        let adj: Vec<Vec<(usize, i64)>> = mult
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(_, &m)| m > 0)
                    .map(|(w, &m)| (w, m))
                    .collect()
            })
            .collect();
        let degree = adj
            .iter()
            .map(|nb| nb.iter().map(|&(_, m)| m).sum())
            .collect();
        let complete = n >= 2 && (0..n).all(|u| (0..n).all(|w| u == w || mult[u][w] == 1));
        Ok(Graph {
            n,
            edges,
            adj,
            degree,
            complete,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Neighbours of `v` with edge multiplicities.
    pub fn neighbours(&self, v: usize) -> &[(usize, i64)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> i64 {
        self.degree[v]
    }

    /// Number of edges joining `u` and `w`.
    pub fn multiplicity(&self, u: usize, w: usize) -> i64 {
        self.adj[u]
            .binary_search_by_key(&w, |&(x, _)| x)
            .map(|i| self.adj[u][i].1)
            .unwrap_or(0)
    }

    /// True when the graph is the simple complete graph on its vertices.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(invalid("graph is not connected"))
        }
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::UnsupportedGraph(
                "operation is specific to the simple complete graph".into(),
            ))
        }
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(invalid(format!("vertex {v} outside 0..{}", self.n)))
        }
    }

    pub(crate) fn check_divisor(&self, d: &Divisor) -> Result<()> {
        if d.len() == self.n {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.n,
                got: d.len(),
            })
        }
    }
}

/// The complete graph `K_d`.
pub fn complete_graph(d: usize) -> Result<Graph> {
    if d < 2 {
        return Err(invalid(format!("complete graph needs d >= 2, got {d}")));
    }
    let edges = (0..d)
        .flat_map(|u| (u + 1..d).map(move |w| (u, w)))
        .collect();
    Graph::new(d, edges)
}

/// First Betti number `|E| - |V| + 1`.
pub fn genus(g: &Graph) -> Result<i64> {
    g.require_connected()?;
    Ok(g.n_edges() as i64 - g.n_vertices() as i64 + 1)
}

/// An integer combination of vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor(Vec<i64>);

impl Divisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Divisor(coeffs)
    }

    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    /// `c * (v)` on `n` vertices.
    pub fn point(n: usize, v: usize, c: i64) -> Self {
        let mut d = Divisor::zero(n);
        d.0[v] = c;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.0
    }

    pub fn degree(&self) -> i64 {
        self.0
            .iter()
            .try_fold(0i64, |acc, &c| acc.checked_add(c))
            .expect("divisor degree overflows i64")
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Effective away from `v`.
    pub fn is_effective_off(&self, v: usize) -> bool {
        self.0.iter().enumerate().all(|(w, &c)| w == v || c >= 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] != 0).collect()
    }

    pub fn set(&mut self, v: usize, c: i64) {
        self.0[v] = c;
    }

    /// Adds `c` chips at `v`.
    pub fn add_at(&mut self, v: usize, c: i64) {
        self.0[v] = self.0[v]
            .checked_add(c)
            .expect("divisor coefficient overflows i64");
    }
}

impl Index<usize> for Divisor {
    type Output = i64;

    fn index(&self, v: usize) -> &i64 {
        &self.0[v]
    }
}

fn zip_checked(a: &Divisor, b: &Divisor, op: fn(i64, i64) -> Option<i64>) -> Divisor {
    assert_eq!(a.len(), b.len(), "divisors live on different vertex sets");
    Divisor(
        a.0.iter()
            .zip(&b.0)
            .map(|(&x, &y)| op(x, y).expect("divisor coefficient overflows i64"))
            .collect(),
    )
}

impl Add for &Divisor {
    type Output = Divisor;

    fn add(self, rhs: &Divisor) -> Divisor {
        zip_checked(self, rhs, i64::checked_add)
    }
}

impl Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, rhs: &Divisor) -> Divisor {
        zip_checked(self, rhs, i64::checked_sub)
    }
}

impl Add for Divisor {
    type Output = Divisor;

    fn add(self, rhs: Divisor) -> Divisor {
        &self + &rhs
    }
}

impl Sub for Divisor {
    type Output = Divisor;

    fn sub(self, rhs: Divisor) -> Divisor {
        &self - &rhs
    }
}

impl Neg for &Divisor {
    type Output = Divisor;

    fn neg(self) -> Divisor {
        Divisor(
            self.0
                .iter()
                .map(|&c| c.checked_neg().expect("overflow"))
                .collect(),
        )
    }
}

/// Space separated coefficients, the divisor file format.
impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.0)
    }
}

pub(crate) fn write_joined(f: &mut fmt::Formatter<'_>, xs: &[i64]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// An integer function on the vertices, normalized so its minimum is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiringScript(Vec<i64>);

impl FiringScript {
    pub fn new(mut values: Vec<i64>) -> Self {
        if let Some(&min) = values.iter().min() {
            for x in &mut values {
                *x -= min;
            }
        }
        FiringScript(values)
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for FiringScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.0)
    }
}

/// `div(f)`: the coefficient at `v` is the sum over edges `vw` of `f(v) - f(w)`.
pub fn principal_divisor(g: &Graph, f: &[i64]) -> Result<Divisor> {
    if f.len() != g.n_vertices() {
        return Err(Error::Dimension {
            expected: g.n_vertices(),
            got: f.len(),
        });
    }
    let coeffs = (0..g.n_vertices())
        .map(|v| {
            g.neighbours(v)
                .iter()
                .map(|&(w, m)| m * (f[v] - f[w]))
                .sum()
        })
        .collect();
    Ok(Divisor(coeffs))
}

/// Linear equivalence, decided by comparing reduced forms at vertex 0.
pub fn linearly_equivalent(g: &Graph, d1: &Divisor, d2: &Divisor) -> Result<bool> {
    g.check_divisor(d1)?;
    g.check_divisor(d2)?;
    if d1.degree() != d2.degree() {
        return Ok(false);
    }
    let r1 = reduction::reduce(g, d1, 0)?;
    let r2 = reduction::reduce(g, d2, 0)?;
    Ok(r1.divisor == r2.divisor)
}

/// `K = sum (deg(v) - 2)(v)`.
pub fn canonical_divisor(g: &Graph) -> Divisor {
    Divisor((0..g.n_vertices()).map(|v| g.degree(v) - 2).collect())
}
