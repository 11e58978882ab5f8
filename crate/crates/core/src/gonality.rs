//! The gonality sequence `gamma_r` of `K_d`: closed form, exhaustive search,
//! and the divisors certifying both bounds.
//!
//! For `r < g = (d-1)(d-2)/2` write `r = k(k+3)/2 - h` with `1 <= k <= d-3`
//! and `0 <= h <= k`; then `gamma_r = kd - h`. For `r >= g`,
//! `gamma_r = g + r`.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::{complete_graph, genus, Divisor, Graph};
use crate::rank::{has_effective_member, rank_complete_fast, rank_oracle};
use crate::reduction::{is_v_reduced, reduce, sorted_off_base};
use crate::sequences::{split_base, t_values};

fn kd_genus(d: usize) -> i64 {
    let d = d as i64;
    (d - 1) * (d - 2) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GonalityDecomposition {
    pub r: i64,
    pub k: i64,
    pub h: i64,
    pub gamma: i64,
    pub g: i64,
}

/// The unique `(k, h)` with `r = k(k+3)/2 - h`, `1 <= k <= d-3`, `0 <= h <= k`.
pub fn decompose_rank(d: usize, r: i64) -> Result<GonalityDecomposition> {
    if d < 4 {
        return Err(invalid(format!("decomposition needs d >= 4, got {d}")));
    }
    let g = kd_genus(d);
    if r < 1 {
        return Err(invalid(format!("rank must be positive, got {r}")));
    }
    if r >= g {
        return Err(Error::OutOfRange(format!(
            "r = {r} >= g = {g}; gamma_r = g + r"
        )));
    }
    // The windows [k(k+1)/2, k(k+3)/2] tile 1..g, so the first k whose
    // upper end reaches r is the answer.
    let k = (1..=d as i64 - 3)
        .find(|&k| k * (k + 3) / 2 >= r)
        .expect("r < g lies in some window");
    let h = k * (k + 3) / 2 - r;
    Ok(GonalityDecomposition {
        r,
        k,
        h,
        gamma: k * d as i64 - h,
        g,
    })
}

/// `gamma_r` by the closed form.
pub fn gonality_formula(d: usize, r: i64) -> Result<i64> {
    if d < 2 || r < 1 {
        return Err(invalid(format!("need d >= 2 and r >= 1, got d={d} r={r}")));
    }
    let g = kd_genus(d);
    if r >= g {
        Ok(g + r)
    } else {
        Ok(decompose_rank(d, r)?.gamma)
    }
}

/// Off-base coefficient vectors of the `v_d`-reduced divisors on `K_d`:
/// every tuple in `[0, d-2]^{d-1}` whose ascending sort stays below the
/// staircase `0, 1, ..., d-2`.
pub fn reduced_configurations(d: usize) -> Vec<Vec<i64>> {
    let m = d - 1;
    let mut out = Vec::new();
    let mut c = vec![0i64; m];
    loop {
        let mut sorted = c.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().all(|(i, &x)| x <= i as i64) {
            out.push(c.clone());
        }
        let mut i = 0;
        loop {
            if i == m {
                return out;
            }
            c[i] += 1;
            if c[i] < m as i64 {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

/// All `v_d`-reduced divisors of degree `s` on `K_d` with a non-negative
/// base coefficient, one per effective class.
pub fn effective_classes(configs: &[Vec<i64>], s: i64) -> Vec<Divisor> {
    configs
        .iter()
        .filter_map(|c| {
            let base = s - c.iter().sum::<i64>();
            (base >= 0).then(|| {
                let mut coeffs = c.clone();
                coeffs.push(base);
                Divisor::new(coeffs)
            })
        })
        .collect()
}

/// `gamma_r` of `K_d` by exhaustion: the least `s >= r` such that some
/// reduced divisor of degree `s` has rank at least `r`.
pub fn gonality_bruteforce(d: usize, r: i64) -> Result<i64> {
    if r < 1 {
        return Err(invalid(format!("rank must be positive, got {r}")));
    }
    let kd = complete_graph(d)?;
    let g = kd_genus(d);
    let configs = reduced_configurations(d);
    for s in r..=g + r {
        let found = effective_classes(&configs, s)
            .par_iter()
            .map(|div| rank_complete_fast(&kd, div).map(|res| res.rank >= r))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .any(|x| x);
        if found {
            return Ok(s);
        }
    }
    Err(Error::Internal(format!(
        "no class of degree g + r = {} reached rank {r}",
        g + r
    )))
}

/// `gamma_r` of an arbitrary connected graph by exhaustion over reduced
/// divisors at the last vertex, ranks by the oracle. Small graphs only.
pub fn gonality_bruteforce_graph(g: &Graph, r: i64) -> Result<i64> {
    if r < 1 {
        return Err(invalid(format!("rank must be positive, got {r}")));
    }
    let gen = genus(g)?;
    let n = g.n_vertices();
    let base = n - 1;
    // Reduced divisors have D(w) < deg(w) off the base.
    let mut configs = Vec::new();
    let mut c = vec![0i64; n];
    'outer: loop {
        if is_v_reduced(g, &Divisor::new(c.clone()), base)? {
            configs.push(c.clone());
        }
        let mut i = 0;
        loop {
            if i == base {
                break 'outer;
            }
            c[i] += 1;
            if c[i] < g.degree(i) {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
    for s in r..=gen + r {
        for c in &configs {
            let mut coeffs = c.clone();
            coeffs[base] = s - c.iter().sum::<i64>();
            if coeffs[base] < 0 {
                continue;
            }
            if rank_oracle(g, &Divisor::new(coeffs))?.rank >= r {
                return Ok(s);
            }
        }
    }
    Err(Error::Internal(format!(
        "no class of degree g + r = {} reached rank {r}",
        gen + r
    )))
}

fn check_kh(d: usize, k: i64, h: i64) -> Result<()> {
    if d < 4 || k < 1 || k > d as i64 - 3 || h < 0 || h > k {
        return Err(invalid(format!(
            "need d >= 4, 1 <= k <= d-3, 0 <= h <= k; got d={d} k={k} h={h}"
        )));
    }
    Ok(())
}

/// `kd(v_d) - (v_1) - ... - (v_h)`: degree `kd - h`, rank `k(k+3)/2 - h`.
pub fn upper_witness(d: usize, k: i64, h: i64) -> Result<Divisor> {
    check_kh(d, k, h)?;
    let mut out = Divisor::point(d, d - 1, k * d as i64);
    for v in 0..h as usize {
        out.add_at(v, -1);
    }
    Ok(out)
}

/// The divisor `sum (k - a_i)(v_i)` together with the test divisor that caps
/// its rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationWitness {
    pub divisor: Divisor,
    /// Effective, degree `k(k+3)/2 - h + 1`, with `divisor - test_divisor`
    /// reduced at `base` and negative there.
    pub test_divisor: Divisor,
    pub base: usize,
    pub expected_rank: i64,
    /// Vertices ordered by `a` descending (ties by index); position `i` is
    /// `v_{i+1}` in the relabeled picture.
    pub relabeling: Vec<usize>,
}

/// Builds `D = sum (k - a_i)(v_i)` for a weight vector `a >= 0` with
/// `sum a = h <= k`, and the test divisor
/// `E = sum_{i=1}^{k+1} (k - a_i - (i - 2))(v_i)` in the labelling where `a`
/// is non-increasing. `D - E` is then `-(v_1) + 0(v_2) + (v_3) + ... +
/// (k-1)(v_{k+1}) + k(v_{k+2}) + ... + k(v_d)`.
pub fn specialization_family(d: usize, k: i64, a: &[i64]) -> Result<SpecializationWitness> {
    if a.len() != d {
        return Err(Error::Dimension {
            expected: d,
            got: a.len(),
        });
    }
    if a.iter().any(|&x| x < 0) {
        return Err(invalid("weights must be non-negative"));
    }
    let h: i64 = a.iter().sum();
    check_kh(d, k, h)?;
    let mut relabeling: Vec<usize> = (0..d).collect();
    relabeling.sort_by_key(|&v| (std::cmp::Reverse(a[v]), v));
    let divisor = Divisor::new(a.iter().map(|&x| k - x).collect());
    let mut test_divisor = Divisor::zero(d);
    for (idx, &v) in relabeling.iter().take(k as usize + 1).enumerate() {
        let i = idx as i64 + 1;
        test_divisor.set(v, k - a[v] - (i - 2));
    }
    debug_assert!(test_divisor.is_effective());
    Ok(SpecializationWitness {
        divisor,
        test_divisor,
        base: relabeling[0],
        expected_rank: k * (k + 3) / 2 - h,
        relabeling,
    })
}

/// One row of the gonality table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GonalityRow {
    pub r: i64,
    /// `(k, h)` when `r < g`.
    pub kh: Option<(i64, i64)>,
    pub formula: i64,
    pub bruteforce: i64,
    /// Rank of the upper-bound divisor of degree `formula`.
    pub witness_rank: i64,
}

impl GonalityRow {
    pub fn agrees(&self) -> bool {
        self.formula == self.bruteforce && self.witness_rank >= self.r
    }

    /// `r,k,h,gamma_formula,gamma_bruteforce`, with `-` for `k, h` past the
    /// genus.
    pub fn csv(&self) -> String {
        let (k, h) = match self.kh {
            Some((k, h)) => (k.to_string(), h.to_string()),
            None => ("-".into(), "-".into()),
        };
        format!("{},{k},{h},{},{}", self.r, self.formula, self.bruteforce)
    }
}

pub const GONALITY_HEADER: &str = "r,k,h,gamma_formula,gamma_bruteforce";

/// Formula, exhaustive search, and upper witness for `r = 1..=max_r`.
pub fn gonality_table(d: usize, max_r: i64) -> Result<Vec<GonalityRow>> {
    let kd = complete_graph(d)?;
    let g = kd_genus(d);
    (1..=max_r)
        .map(|r| {
            let formula = gonality_formula(d, r)?;
            let (kh, witness) = if r < g {
                let dec = decompose_rank(d, r)?;
                (Some((dec.k, dec.h)), upper_witness(d, dec.k, dec.h)?)
            } else {
                (None, Divisor::point(d, d - 1, g + r))
            };
            Ok(GonalityRow {
                r,
                kh,
                formula,
                bruteforce: gonality_bruteforce(d, r)?,
                witness_rank: rank_complete_fast(&kd, &witness)?.rank,
            })
        })
        .collect()
}

/// How a sharpness certificate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateRoute {
    /// `D(v_d) < k(k+1)/2`: removing `D(v_d) + 1` chips at `v_d` suffices.
    Immediate,
    /// `t1 <= k(k+1)/2`: `E = sum alpha_i^+ (v_i)` against
    /// `D' = (b - (d-1))(v_d) + sum (D(v_i) + a + 1)(v_i)`.
    Lowered,
    /// `t2 <= k(k+1)/2`: `E = (b+1)(v_d) + sum (alpha_i - 1)^+ (v_i)` against
    /// `D'' = b(v_d) + sum (D(v_i) + a)(v_i)`.
    Shifted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpnessCertificate {
    /// Effective, degree exactly `k(k+1)/2`, with `|D - E|` empty.
    pub e: Divisor,
    pub route: CertificateRoute,
    /// `(a, b, t1, t2)`; absent on the immediate route.
    pub profile: Option<(i64, i64, i64, i64)>,
    /// Non-base vertices sorted by coefficient: position `i` is `v_{i+1}`.
    pub labeling: Vec<usize>,
}

/// Proves `rank(D) < k(k+1)/2` for a `v_d`-reduced `D` of degree
/// `k(d-1) - 1` on `K_d` by exhibiting an effective `E` of degree
/// `k(k+1)/2` with `reduce(D - E, v_d)` negative at `v_d`. Chips beyond
/// what the route needs are placed on `v_1`.
pub fn sharpness_certificate(d: usize, k: i64, divisor: &Divisor) -> Result<SharpnessCertificate> {
    check_kh(d, k, 0)?;
    let kd = complete_graph(d)?;
    kd.check_divisor(divisor)?;
    let base = d - 1;
    let m = d as i64 - 1;
    if divisor.degree() != k * m - 1 {
        return Err(invalid(format!(
            "degree {} differs from k(d-1) - 1 = {}",
            divisor.degree(),
            k * m - 1
        )));
    }
    if !is_v_reduced(&kd, divisor, base)? {
        return Err(invalid("divisor is not reduced at v_d"));
    }
    let budget = k * (k + 1) / 2;
    let labeling = sorted_off_base(divisor, base);
    let first = labeling[0];
    let top = divisor[base];

    let mut e = Divisor::zero(d);
    let (route, profile) = if top < budget {
        e.set(base, (top + 1).max(0));
        (CertificateRoute::Immediate, None)
    } else {
        let (a, b) = split_base(d, top);
        let alpha: Vec<i64> = labeling
            .iter()
            .enumerate()
            .map(|(idx, &w)| divisor[w] + a - (idx as i64 - 1))
            .collect();
        let (t1, t2) = t_values(&alpha, b);
        let route = if t1 <= budget {
            for (&w, &x) in labeling.iter().zip(&alpha) {
                e.set(w, x.max(0));
            }
            CertificateRoute::Lowered
        } else if t2 <= budget {
            e.set(base, b + 1);
            for (&w, &x) in labeling.iter().zip(&alpha) {
                e.set(w, (x - 1).max(0));
            }
            CertificateRoute::Shifted
        } else {
            return Err(Error::Internal(format!(
                "min(t1, t2) = min({t1}, {t2}) exceeds k(k+1)/2 = {budget} for {divisor}"
            )));
        };
        (route, Some((a, b, t1, t2)))
    };
    let used = e.degree();
    if used > budget {
        return Err(Error::Internal(format!(
            "certificate uses {used} > {budget} chips"
        )));
    }
    e.add_at(first, budget - used);

    if has_effective_member(&kd, &(divisor - &e), base)? {
        return Err(Error::Internal(format!(
            "E = {e} does not empty |D - E| for D = {divisor}"
        )));
    }
    Ok(SharpnessCertificate {
        e,
        route,
        profile,
        labeling,
    })
}

/// Every `v_d`-reduced divisor of degree `k(d-1) - 1` on `K_d`, including
/// those with a negative base coefficient.
pub fn sharpness_inputs(d: usize, k: i64) -> Vec<Divisor> {
    let deg = k * (d as i64 - 1) - 1;
    reduced_configurations(d)
        .into_iter()
        .map(|mut c| {
            let base = deg - c.iter().sum::<i64>();
            c.push(base);
            Divisor::new(c)
        })
        .collect()
}

/// Checks that `reduce(D - E, base)` is negative at `base`.
pub fn empties_linear_system(g: &Graph, d: &Divisor, e: &Divisor, base: usize) -> Result<bool> {
    Ok(reduce(g, &(d - e), base)?.base_coeff() < 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompositions() {
        let d = decompose_rank(5, 1).unwrap();
        assert_eq!((d.k, d.h, d.gamma), (1, 1, 4));
        let d = decompose_rank(5, 3).unwrap();
        assert_eq!((d.k, d.h, d.gamma), (2, 2, 8));
        let d = decompose_rank(5, 5).unwrap();
        assert_eq!((d.k, d.h, d.gamma), (2, 0, 10));
        assert!(matches!(decompose_rank(5, 6), Err(Error::OutOfRange(_))));
        assert!(matches!(
            decompose_rank(3, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn decomposition_is_unique() {
        for d in 4..14usize {
            let g = kd_genus(d);
            for r in 1..g {
                let hits: Vec<_> = (1..=d as i64 - 3)
                    .flat_map(|k| (0..=k).map(move |h| (k, h)))
                    .filter(|&(k, h)| k * (k + 3) / 2 - h == r)
                    .collect();
                assert_eq!(hits.len(), 1, "d={d} r={r}");
                let dec = decompose_rank(d, r).unwrap();
                assert_eq!((dec.k, dec.h), hits[0]);
            }
        }
    }

    #[test]
    fn formula_values() {
        let seq: Vec<i64> = (1..=6).map(|r| gonality_formula(5, r).unwrap()).collect();
        assert_eq!(seq, vec![4, 5, 8, 9, 10, 12]);
        assert_eq!(gonality_formula(6, 1).unwrap(), 5);
        assert_eq!(gonality_formula(4, 3).unwrap(), 6);
    }

    #[test]
    fn configuration_counts_are_parking_numbers() {
        for d in 2..7usize {
            assert_eq!(reduced_configurations(d).len(), d.pow(d as u32 - 2));
        }
    }

    #[test]
    fn bruteforce_small() {
        assert_eq!(gonality_bruteforce(4, 1).unwrap(), 3);
        assert_eq!(gonality_bruteforce(5, 2).unwrap(), 5);
        assert_eq!(gonality_bruteforce(5, 6).unwrap(), 12);
    }

    #[test]
    fn bruteforce_general_graph_agrees_on_k4() {
        let k4 = complete_graph(4).unwrap();
        for r in 1..=4 {
            assert_eq!(
                gonality_bruteforce_graph(&k4, r).unwrap(),
                gonality_formula(4, r).unwrap()
            );
        }
        // The 4-cycle is hyperelliptic.
        let c4 = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(gonality_bruteforce_graph(&c4, 1).unwrap(), 2);
    }

    #[test]
    fn upper_witnesses() {
        assert_eq!(upper_witness(5, 1, 0).unwrap(), Divisor::point(5, 4, 5));
        assert_eq!(
            upper_witness(5, 1, 1).unwrap(),
            Divisor::new(vec![-1, 0, 0, 0, 5])
        );
        assert_eq!(
            upper_witness(6, 2, 2).unwrap(),
            Divisor::new(vec![-1, -1, 0, 0, 0, 12])
        );
        assert!(upper_witness(5, 3, 0).is_err());
        assert!(upper_witness(5, 1, 2).is_err());
    }

    #[test]
    fn specialization_display() {
        let w = specialization_family(6, 2, &[0; 6]).unwrap();
        assert_eq!(w.divisor, Divisor::new(vec![2; 6]));
        assert_eq!(w.expected_rank, 5);
        let diff = &w.divisor - &w.test_divisor;
        assert_eq!(diff, Divisor::new(vec![-1, 0, 1, 2, 2, 2]));
        assert_eq!(w.test_divisor.degree(), 6);

        let w = specialization_family(5, 2, &[0, 1, 0, 1, 0]).unwrap();
        assert_eq!(w.relabeling[..2], [1, 3]);
        assert_eq!(w.base, 1);
        assert_eq!(w.expected_rank, 3);
        assert!(specialization_family(5, 2, &[3, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn example_certificate_takes_shifted_route() {
        let d = Divisor::new(vec![0, 1, 1, 1, 1, 5]);
        let cert = sharpness_certificate(6, 2, &d).unwrap();
        assert_eq!(cert.route, CertificateRoute::Shifted);
        assert_eq!(cert.profile, Some((1, 0, 5, 3)));
        assert_eq!(cert.e, Divisor::new(vec![1, 1, 0, 0, 0, 1]));
    }

    #[test]
    fn zero_base_certificate_is_immediate() {
        let d = Divisor::new(vec![0, 1, 1, 1, 1, 0]);
        let cert = sharpness_certificate(6, 1, &d).unwrap();
        assert_eq!(cert.route, CertificateRoute::Immediate);
        assert_eq!(cert.e, Divisor::new(vec![0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn certificates_for_k5_degree_3() {
        let inputs = sharpness_inputs(5, 1);
        assert_eq!(inputs.len(), 125);
        for d in &inputs {
            let cert = sharpness_certificate(5, 1, d).unwrap();
            assert_eq!(cert.e.degree(), 1);
        }
    }

    #[test]
    fn certificate_preconditions() {
        assert!(sharpness_certificate(6, 2, &Divisor::new(vec![0, 1, 1, 1, 1, 4])).is_err());
        assert!(sharpness_certificate(6, 2, &Divisor::new(vec![1, 1, 1, 1, 1, 4])).is_err());
        assert!(sharpness_certificate(6, 4, &Divisor::new(vec![0, 1, 1, 1, 1, 15])).is_err());
    }
}
