//! Density measurements: palette density, sampled and exact minimum subset
//! density, and the per-triad product bound check. All densities are exact
//! rationals.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::partitioned::PartitionedHypergraph;
use crate::rational::{binomial3, ceil_to_usize, Rat};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityMode {
    Sampled,
    Exact,
}

/// Exact rational as {"num", "den"} on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RatJson {
    pub num: i64,
    pub den: i64,
}

impl From<&Rat> for RatJson {
    fn from(r: &Rat) -> Self {
        RatJson {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub mode: DensityMode,
    pub epsilon: RatJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub min_density: RatJson,
    pub argmin_subset: Vec<u32>,
    #[serde(skip)]
    pub min_density_exact: Rat,
}

impl DensityReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// |triples| / k^3, exact.
pub fn palette_density(palette: &crate::palette::Palette) -> Rat {
    palette.density()
}

/// Spanned-edge density of the induced sub-hypergraph, |E(H[S])| / C(|S|, 3).
pub fn subset_density(h: &Hypergraph, subset: &[u32]) -> Result<Rat> {
    let t = subset.len();
    if t < 3 {
        return Err(Error::DegenerateSubset(format!(
            "subset of size {t} spans no triples"
        )));
    }
    let spanned = count_spanned(h, subset);
    Ok(Rat::new(spanned as i64, binomial3(t) as i64))
}

/// Count edges inside `subset` by walking its triples against the canonical
/// edge list; cheaper than scanning all edges when the subset is small.
fn count_spanned(h: &Hypergraph, subset: &[u32]) -> u64 {
    let t = subset.len();
    let m = h.edge_count() as u64;
    if binomial3(t) <= m {
        let mut count = 0u64;
        for x in 0..t {
            for y in (x + 1)..t {
                for z in (y + 1)..t {
                    if h.has_edge(&[subset[x], subset[y], subset[z]]) {
                        count += 1;
                    }
                }
            }
        }
        count
    } else {
        h.count_induced_edges(subset)
    }
}

/// Minimum density over `samples` uniformly random subsets of size exactly
/// ceil(eps * n). Draw order per sample: reset a scratch array to the
/// identity, partial Fisher-Yates (position i takes `i + next_index(n - i)`)
/// for the first t slots, then sort the chosen t vertices ascending. Ties on
/// the minimum go to the earliest sample.
pub fn sampled_min_density(
    h: &Hypergraph,
    eps: &Rat,
    samples: u64,
    seed: u64,
) -> Result<DensityReport> {
    if samples == 0 {
        return Err(Error::malformed("need at least one sample".to_string()));
    }
    if *eps <= Rat::new(0, 1) || *eps > Rat::new(1, 1) {
        return Err(Error::malformed(format!("epsilon must be in (0, 1], got {eps}")));
    }
    let n = h.vertex_count();
    let t = ceil_to_usize(&(eps * Rat::from_integer(n as i64)));
    if t < 3 {
        return Err(Error::DegenerateSubset(format!(
            "ceil(eps * n) = {t} < 3: subsets span no triples"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut subsets: Vec<Vec<u32>> = Vec::with_capacity(samples as usize);
    for _ in 0..samples {
        let mut scratch: Vec<u32> = (0..n as u32).collect();
        for i in 0..t {
            let j = i + rng.next_index(n - i);
            scratch.swap(i, j);
        }
        let mut subset = scratch[..t].to_vec();
        subset.sort_unstable();
        subsets.push(subset);
    }
    // evaluations are independent; the reduction breaks ties by sample index
    let best = subsets
        .par_iter()
        .enumerate()
        .map(|(idx, subset)| {
            let d = Rat::new(count_spanned(h, subset) as i64, binomial3(t) as i64);
            (d, idx)
        })
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one sample");
    let (min_density, idx) = best;
    Ok(DensityReport {
        mode: DensityMode::Sampled,
        epsilon: RatJson::from(eps),
        samples: Some(samples),
        seed: Some(seed),
        min_density: RatJson::from(&min_density),
        argmin_subset: subsets[idx].clone(),
        min_density_exact: min_density,
    })
}

pub const DEFAULT_EXACT_CAP: usize = 20;

/// Exact minimum density over every subset of size >= max(3, ceil(eps * n)),
/// by full enumeration (so n is capped). Ties go to the first subset in
/// ascending-bitmask order.
pub fn exact_min_density(h: &Hypergraph, eps: &Rat, cap: usize) -> Result<DensityReport> {
    if *eps <= Rat::new(0, 1) || *eps > Rat::new(1, 1) {
        return Err(Error::malformed(format!("epsilon must be in (0, 1], got {eps}")));
    }
    let n = h.vertex_count();
    if n > cap || n > 30 {
        return Err(Error::CapExceeded(format!(
            "exact minimum density enumerates all subsets and needs n <= {}, got {n}",
            cap.min(30)
        )));
    }
    let threshold = ceil_to_usize(&(eps * Rat::from_integer(n as i64))).max(3);
    if threshold > n {
        return Err(Error::DegenerateSubset(format!(
            "no subsets of size >= {threshold} in a {n}-vertex hypergraph"
        )));
    }
    // edges as bitmasks for O(1) the subset-containment test
    let edge_masks: Vec<u32> = h
        .edges()
        .map(|e| e.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let mut best: Option<(Rat, u32)> = None;
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size < threshold {
            continue;
        }
        let spanned = edge_masks.iter().filter(|&&em| em & mask == em).count();
        let d = Rat::new(spanned as i64, binomial3(size) as i64);
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, mask));
        }
    }
    let (min_density, mask) = best.expect("threshold <= n guarantees a subset");
    let argmin_subset: Vec<u32> = (0..n as u32).filter(|&v| mask >> v & 1 == 1).collect();
    Ok(DensityReport {
        mode: DensityMode::Exact,
        epsilon: RatJson::from(eps),
        samples: None,
        seed: None,
        min_density: RatJson::from(&min_density),
        argmin_subset,
        min_density_exact: min_density,
    })
}

/// One triad's row in the product-bound report: density, the three
/// eps-significant fractions, and the slack of
/// density <= a*b*c + 3*eps (nonnegative slack means the bound holds).
#[derive(Debug, Clone)]
pub struct TriadProductRow {
    pub triad: (usize, usize, usize),
    pub density: Rat,
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub slack: Rat,
    pub violated: bool,
}

#[derive(Debug, Clone)]
pub struct TriadProductReport {
    pub epsilon: Rat,
    pub rows: Vec<TriadProductRow>,
    pub violations: usize,
}

/// Check density <= a*b*c + 3*eps on every triad (exact rationals). Each
/// edge either meets all three significant sets (at most a*b*c*s^3 of those)
/// or goes through a non-significant vertex of some part, and each such
/// vertex carries fewer than eps*s^2 edges, which bounds the remainder by
/// 3*eps*s^3. No valid host can violate this.
pub fn triad_product_check(ph: &PartitionedHypergraph, eps: &Rat) -> Result<TriadProductReport> {
    if *eps <= Rat::new(0, 1) || *eps >= Rat::new(1, 1) {
        return Err(Error::malformed(format!("epsilon must be in (0, 1), got {eps}")));
    }
    let three_eps = Rat::from_integer(3) * eps;
    let mut rows = Vec::new();
    let mut violations = 0;
    for (i, j, k) in ph.triad_indices() {
        let density = ph.triad_density(i, j, k)?;
        let (a, b, c) = ph.significant_fractions(i, j, k, eps)?;
        let bound = a * b * c + three_eps;
        let slack = bound - density;
        let violated = slack < Rat::new(0, 1);
        if violated {
            violations += 1;
        }
        rows.push(TriadProductRow {
            triad: (i, j, k),
            density,
            a,
            b,
            c,
            slack,
            violated,
        });
    }
    Ok(TriadProductReport {
        epsilon: *eps,
        rows,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random_palette_hypergraph;
    use crate::palette::Palette;
    use crate::partitioned::random_partitioned_from_palette;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn palette_densities() {
        assert_eq!(palette_density(&Palette::phi0()), rat(1, 27));
        assert_eq!(palette_density(&Palette::phi8()), rat(8, 27));
        assert_eq!(palette_density(&Palette::phi3()), rat(3, 343));
    }

    #[test]
    fn complete_hypergraph_sampled_min_is_one() {
        let edges = crate::hypergraph::combinations(12, 3);
        let h = Hypergraph::new(3, 12, edges).unwrap();
        let report = sampled_min_density(&h, &rat(1, 2), 20, 123).unwrap();
        assert_eq!(report.min_density_exact, rat(1, 1));
        assert_eq!(report.argmin_subset.len(), 6);
    }

    #[test]
    fn empty_hypergraph_sampled_min_is_zero() {
        let h = Hypergraph::empty(3, 10);
        let report = sampled_min_density(&h, &rat(1, 2), 5, 0).unwrap();
        assert_eq!(report.min_density_exact, rat(0, 1));
    }

    #[test]
    fn degenerate_subset_size_is_refused() {
        let h = Hypergraph::empty(3, 4);
        let err = sampled_min_density(&h, &rat(1, 4), 5, 0).unwrap_err();
        assert!(matches!(err, Error::DegenerateSubset(_)));
    }

    #[test]
    fn phi8_audit_stays_near_its_density() {
        let mut rng = SplitMix64::new(1);
        let (h, _) = random_palette_hypergraph(&Palette::phi8(), 300, &mut rng).unwrap();
        let report = sampled_min_density(&h, &rat(3, 10), 200, 9).unwrap();
        let lower = rat(8, 27) - rat(6, 100);
        assert!(
            report.min_density_exact >= lower,
            "min {} below 8/27 - 0.06",
            report.min_density_exact
        );
        // recount invariance: the reported subset reproduces the density
        assert_eq!(
            subset_density(&h, &report.argmin_subset).unwrap(),
            report.min_density_exact
        );
    }

    #[test]
    fn exact_min_on_complete_k4() {
        let h = Hypergraph::new(3, 4, crate::hypergraph::combinations(4, 3)).unwrap();
        let report = exact_min_density(&h, &rat(7, 10), DEFAULT_EXACT_CAP).unwrap();
        assert_eq!(report.min_density_exact, rat(1, 1));
    }

    #[test]
    fn exact_min_on_fan_is_zero() {
        let fan = Hypergraph::new(3, 5, [[0u32, 1, 3], [1, 2, 3], [1, 3, 4]]).unwrap();
        let report = exact_min_density(&fan, &rat(3, 5), DEFAULT_EXACT_CAP).unwrap();
        assert_eq!(report.min_density_exact, rat(0, 1));
        // some 3-subset spanning nothing, e.g. {0, 2, 4}
        assert_eq!(report.argmin_subset.len(), 3);
        assert_eq!(subset_density(&fan, &report.argmin_subset).unwrap(), rat(0, 1));
    }

    #[test]
    fn exact_min_single_edge_full_subset() {
        let h = Hypergraph::new(3, 3, [[0u32, 1, 2]]).unwrap();
        let report = exact_min_density(&h, &rat(1, 1), DEFAULT_EXACT_CAP).unwrap();
        assert_eq!(report.min_density_exact, rat(1, 1));
    }

    #[test]
    fn exact_cap_is_enforced() {
        let h = Hypergraph::empty(3, 21);
        assert!(matches!(
            exact_min_density(&h, &rat(1, 2), DEFAULT_EXACT_CAP),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn sampled_never_beats_exact() {
        let mut rng = SplitMix64::new(21);
        let (h, _) = random_palette_hypergraph(&Palette::phi8(), 12, &mut rng).unwrap();
        let eps = rat(1, 2);
        let exact = exact_min_density(&h, &eps, DEFAULT_EXACT_CAP).unwrap();
        let sampled = sampled_min_density(&h, &eps, 50, 4).unwrap();
        assert!(sampled.min_density_exact >= exact.min_density_exact);
    }

    #[test]
    fn exact_min_monotone_when_threshold_grows() {
        let mut rng = SplitMix64::new(33);
        let (h, _) = random_palette_hypergraph(&Palette::phi8(), 10, &mut rng).unwrap();
        let mut last: Option<(usize, Rat)> = None;
        for num in 3..=10 {
            let eps = rat(num, 10);
            let threshold = ceil_to_usize(&(eps * Rat::from_integer(10))).max(3);
            let report = exact_min_density(&h, &eps, DEFAULT_EXACT_CAP).unwrap();
            if let Some((prev_t, prev_min)) = last {
                if threshold > prev_t {
                    assert!(report.min_density_exact >= prev_min);
                }
            }
            last = Some((threshold, report.min_density_exact));
        }
    }

    #[test]
    fn product_bound_on_extreme_triads() {
        // complete triads: slack exactly 3*eps
        let mut ph = crate::partitioned::PartitionedHypergraph::new(3, 2).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    ph.add_edge(1, 2, 3, a, b, c).unwrap();
                }
            }
        }
        let eps = rat(1, 10);
        let report = triad_product_check(&ph, &eps).unwrap();
        assert_eq!(report.violations, 0);
        assert_eq!(report.rows[0].slack, rat(3, 10));

        // empty triads: 0 <= 3*eps
        let empty = crate::partitioned::PartitionedHypergraph::new(3, 2).unwrap();
        let report = triad_product_check(&empty, &eps).unwrap();
        assert_eq!(report.violations, 0);
        assert_eq!(report.rows[0].slack, rat(3, 10));
    }

    #[test]
    fn product_bound_sweep_has_no_violations() {
        for seed in 0..12u64 {
            let mut rng = SplitMix64::new(seed);
            let n = 4 + (seed % 5) as usize;
            let s = 3 + (seed % 7) as usize;
            let ph = random_partitioned_from_palette(&Palette::phi8(), n, s, &mut rng).unwrap();
            for eps in [rat(1, 20), rat(1, 10), rat(1, 5)] {
                let report = triad_product_check(&ph, &eps).unwrap();
                assert_eq!(report.violations, 0, "seed {seed} eps {eps}");
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let h = Hypergraph::new(3, 3, [[0u32, 1, 2]]).unwrap();
        let report = exact_min_density(&h, &rat(1, 1), DEFAULT_EXACT_CAP).unwrap();
        let text = report.to_json_string();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["mode"], "exact");
        assert_eq!(value["min_density"]["num"], 1);
        assert_eq!(value["min_density"]["den"], 1);
        assert!(value.get("samples").is_none());
    }
}
