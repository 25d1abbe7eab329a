//! Deciding palette colorability: is there a vertex ordering and a pair
//! coloring under which every edge's ordered color triple lies in the
//! palette?
//!
//! For a fixed ordering the question is a constraint satisfaction problem
//! over pair colors. We keep one domain bitmask per covered pair, enforce
//! generalized arc consistency (each edge prunes pair domains through the
//! palette triples consistent with the current domains, iterated to
//! fixpoint), and backtrack over the fail-first pair when propagation alone
//! does not settle it. Ordering search enumerates permutations
//! lexicographically with two sound prunings: subtrees rooted at a prefix
//! whose completed edges are already infeasible, and first vertices that are
//! interchangeable with an earlier one by a transposition automorphism.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::certificate::{total_pair_colors, ColoringCertificate};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::palette::Palette;
use crate::rng::SplitMix64;

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 10;
pub const DEFAULT_HEURISTIC_TRIES: u64 = 1000;

/// Projections of a palette onto its three triple positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionProfile {
    pub x: Vec<u8>,
    pub y: Vec<u8>,
    pub z: Vec<u8>,
    /// True iff the palette equals the full product X x Y x Z.
    pub is_product: bool,
}

pub fn position_profile(palette: &Palette) -> PositionProfile {
    let mut sets = [vec![], vec![], vec![]];
    for t in palette.triples() {
        for (pos, set) in sets.iter_mut().enumerate() {
            set.push(t[pos]);
        }
    }
    for set in &mut sets {
        set.sort_unstable();
        set.dedup();
    }
    let [x, y, z] = sets;
    let is_product = x.len() * y.len() * z.len() == palette.len();
    PositionProfile { x, y, z, is_product }
}

/// Which position a pair occupies inside one edge under the ordering:
/// X = (first, second), Y = (second, third), Z = (first, third).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairRole {
    X,
    Y,
    Z,
}

/// One edge's constraint on the pair whose domain emptied: the edge (original
/// labels, ascending), the role the pair plays in it, and the palette's
/// positional domain for that role.
#[derive(Debug, Clone)]
pub struct PairEdgeConstraint {
    pub edge: Vec<u32>,
    pub role: PairRole,
    pub domain: Vec<u8>,
}

/// Returned when no pair coloring exists for the fixed ordering.
#[derive(Debug, Clone)]
pub struct InfeasibilityWitness {
    /// Pair (original labels, u < v) whose domain emptied first.
    pub pair: (u32, u32),
    /// All edges containing the pair, in canonical edge order.
    pub constraints: Vec<PairEdgeConstraint>,
}

#[derive(Debug)]
pub enum FixedOrderingOutcome {
    Feasible(ColoringCertificate),
    Infeasible(InfeasibilityWitness),
}

/// Decide feasibility of one fixed ordering and either return a certificate
/// or a witness naming a pair whose domain emptied. Pairs in no edge get
/// color 0.
pub fn check_fixed_ordering(
    h: &Hypergraph,
    palette: &Palette,
    ordering: &[u32],
) -> Result<FixedOrderingOutcome> {
    require_three_uniform(h)?;
    let csp = PairCsp::build(h, palette, ordering, None)?;
    let mut doms = csp.initial_domains();
    let mut first_wipe = None;
    match csp.solve(&mut doms, &mut first_wipe) {
        Some(colors) => Ok(FixedOrderingOutcome::Feasible(csp.certificate(ordering, &colors)?)),
        None => {
            let var = first_wipe.expect("infeasible search recorded a domain wipe");
            Ok(FixedOrderingOutcome::Infeasible(csp.witness(var)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Heuristic,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Exhaustive mode refuses hypergraphs with more vertices than this.
    pub exhaustive_cap: usize,
    /// Number of orderings heuristic mode tries before giving up.
    pub heuristic_tries: u64,
    /// Sequential canonical enumeration; the returned certificate is the
    /// first in lexicographic ordering order.
    pub deterministic: bool,
    /// Seed for heuristic ordering shuffles.
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: SearchMode::Exhaustive,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            heuristic_tries: DEFAULT_HEURISTIC_TRIES,
            deterministic: true,
            seed: 0,
        }
    }
}

#[derive(Debug)]
pub enum SearchOutcome {
    Colorable(ColoringCertificate),
    NotColorable,
    Unknown { tried_orderings: u64 },
}

/// Search for an ordering witnessing colorability. Exhaustive mode returns
/// `NotColorable` only after covering every ordering (up to the prunings
/// described in the module docs); heuristic mode never returns it.
pub fn search_colorable(
    h: &Hypergraph,
    palette: &Palette,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    require_three_uniform(h)?;
    let n = h.vertex_count();
    match options.mode {
        SearchMode::Exhaustive => {
            if n > options.exhaustive_cap {
                return Err(Error::CapExceeded(format!(
                    "exhaustive ordering search over {n} vertices exceeds the cap of {} ({}! orderings); raise the cap or use heuristic mode",
                    options.exhaustive_cap, n
                )));
            }
            exhaustive_search(h, palette, options.deterministic)
        }
        SearchMode::Heuristic => heuristic_search(h, palette, options),
    }
}

fn exhaustive_search(
    h: &Hypergraph,
    palette: &Palette,
    deterministic: bool,
) -> Result<SearchOutcome> {
    let n = h.vertex_count();
    if n == 0 {
        let cert = ColoringCertificate::new(vec![], BTreeMap::new())?;
        return Ok(SearchOutcome::Colorable(cert));
    }
    let firsts = first_vertex_representatives(h);
    let run = |&first: &u32| -> Option<ColoringCertificate> {
        let mut prefix = Vec::with_capacity(n);
        prefix.push(first);
        let mut used = vec![false; n];
        used[first as usize] = true;
        extend_prefix(h, palette, &mut prefix, &mut used)
    };
    let found = if deterministic {
        firsts.iter().find_map(run)
    } else {
        firsts.par_iter().find_map_any(run)
    };
    Ok(match found {
        Some(cert) => SearchOutcome::Colorable(cert),
        None => SearchOutcome::NotColorable,
    })
}

/// Depth-first extension of an ordering prefix in lexicographic order.
/// A prefix is pruned when the edges it already completes admit no coloring;
/// a full coloring of those edges restricts to any extension, so the pruning
/// is sound.
fn extend_prefix(
    h: &Hypergraph,
    palette: &Palette,
    prefix: &mut Vec<u32>,
    used: &mut Vec<bool>,
) -> Option<ColoringCertificate> {
    let n = h.vertex_count();
    if prefix.len() == n {
        let csp = PairCsp::build(h, palette, prefix, None).ok()?;
        let mut doms = csp.initial_domains();
        let colors = csp.solve(&mut doms, &mut None)?;
        return csp.certificate(prefix, &colors).ok();
    }
    if prefix.len() >= 3 {
        let last = *prefix.last().unwrap();
        let completes_edge = h
            .edges()
            .any(|e| e.contains(&last) && e.iter().all(|&v| used[v as usize]));
        if completes_edge {
            let csp = PairCsp::build(h, palette, prefix, Some(used)).ok()?;
            let mut doms = csp.initial_domains();
            csp.solve(&mut doms, &mut None)?;
        }
    }
    for v in 0..n as u32 {
        if used[v as usize] {
            continue;
        }
        prefix.push(v);
        used[v as usize] = true;
        if let Some(cert) = extend_prefix(h, palette, prefix, used) {
            return Some(cert);
        }
        used[v as usize] = false;
        prefix.pop();
    }
    None
}

/// One representative per class of vertices interchangeable by a
/// transposition automorphism. Exploring orderings that start with a class
/// representative covers every first vertex: applying the transposition to a
/// feasible ordering keeps it feasible.
fn first_vertex_representatives(h: &Hypergraph) -> Vec<u32> {
    let n = h.vertex_count();
    let mut rep: Vec<u32> = (0..n as u32).collect();
    for v in 1..n as u32 {
        for u in 0..v {
            if rep[u as usize] == u && transposition_is_automorphism(h, u, v) {
                rep[v as usize] = u;
                break;
            }
        }
    }
    let mut out: Vec<u32> = (0..n as u32).filter(|&v| rep[v as usize] == v).collect();
    out.sort_unstable();
    out
}

fn transposition_is_automorphism(h: &Hypergraph, u: u32, v: u32) -> bool {
    let n = h.vertex_count();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.swap(u as usize, v as usize);
    match h.relabel(&perm) {
        Ok(swapped) => swapped == *h,
        Err(_) => false,
    }
}

fn heuristic_search(
    h: &Hypergraph,
    palette: &Palette,
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    let n = h.vertex_count();
    let mut rng = SplitMix64::new(options.seed);
    let mut ordering: Vec<u32> = (0..n as u32).collect();
    let mut tried = 0u64;
    while tried < options.heuristic_tries {
        // first try is the identity ordering, then seeded shuffles
        if tried > 0 {
            rng.shuffle(&mut ordering);
        }
        tried += 1;
        if let FixedOrderingOutcome::Feasible(cert) = check_fixed_ordering(h, palette, &ordering)? {
            return Ok(SearchOutcome::Colorable(cert));
        }
    }
    Ok(SearchOutcome::Unknown {
        tried_orderings: tried,
    })
}

#[derive(Debug)]
pub enum CertificateCheck {
    Valid,
    /// Lexicographically first violating edge and its ordered color triple.
    Violated { edge: Vec<u32>, triple: [u8; 3] },
}

/// Re-evaluate a certificate against the definition: every edge, read at its
/// ordering positions i < j < k, must have (c_ij, c_jk, c_ik) in the palette.
pub fn verify_certificate(
    h: &Hypergraph,
    palette: &Palette,
    cert: &ColoringCertificate,
) -> Result<CertificateCheck> {
    require_three_uniform(h)?;
    cert.check_against(h, palette)?;
    let pos = cert.positions();
    for e in h.edges() {
        let mut by_pos = [e[0], e[1], e[2]];
        by_pos.sort_unstable_by_key(|&v| pos[v as usize]);
        let [vi, vj, vk] = by_pos;
        let triple = [
            cert.color_of(vi, vj).ok_or_else(|| missing_pair(vi, vj))?,
            cert.color_of(vj, vk).ok_or_else(|| missing_pair(vj, vk))?,
            cert.color_of(vi, vk).ok_or_else(|| missing_pair(vi, vk))?,
        ];
        if !palette.contains(&triple) {
            return Ok(CertificateCheck::Violated {
                edge: e.to_vec(),
                triple,
            });
        }
    }
    Ok(CertificateCheck::Valid)
}

fn missing_pair(u: u32, v: u32) -> Error {
    Error::MalformedCertificate(format!("no color assigned to pair ({u}, {v})"))
}

fn require_three_uniform(h: &Hypergraph) -> Result<()> {
    if h.uniformity() != 3 {
        return Err(Error::malformed(format!(
            "colorability is defined for 3-uniform hypergraphs, got k={}",
            h.uniformity()
        )));
    }
    Ok(())
}

// ----------------------------------------------------------------------
// The pair-coloring CSP for one fixed ordering.
// ----------------------------------------------------------------------

struct PairCsp<'a> {
    palette: &'a Palette,
    /// Variable id -> pair of original labels (u < v), ids in lex pair order.
    pair_labels: Vec<(u32, u32)>,
    /// Per edge: variable ids for the X, Y, Z roles.
    edge_vars: Vec<[usize; 3]>,
    /// Edge labels (ascending) for witness reporting, canonical order.
    edge_labels: Vec<Vec<u32>>,
    /// Variable id -> (edge index, role) memberships.
    var_edges: Vec<Vec<(usize, PairRole)>>,
}

impl<'a> PairCsp<'a> {
    /// Build the CSP for the edges of `h` that lie inside the ordered prefix
    /// (`within` = None means the whole vertex set, and `ordering` must then
    /// be a permutation).
    fn build(
        h: &Hypergraph,
        palette: &'a Palette,
        ordering: &[u32],
        within: Option<&[bool]>,
    ) -> Result<Self> {
        if palette.color_count() > 64 {
            return Err(Error::CapExceeded(
                "the colorability solver supports at most 64 colors".to_string(),
            ));
        }
        let n = h.vertex_count();
        if within.is_none() {
            let mut seen = vec![false; n];
            if ordering.len() != n {
                return Err(Error::malformed("ordering length does not match vertex count"));
            }
            for &v in ordering {
                if v as usize >= n || seen[v as usize] {
                    return Err(Error::malformed("ordering is not a permutation"));
                }
                seen[v as usize] = true;
            }
        }
        let mut pos = vec![usize::MAX; n];
        for (p, &v) in ordering.iter().enumerate() {
            pos[v as usize] = p;
        }
        let mut pair_ids: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        let mut edge_vars = Vec::new();
        let mut edge_labels = Vec::new();
        for e in h.edges() {
            if let Some(mask) = within {
                if !e.iter().all(|&v| mask[v as usize]) {
                    continue;
                }
            }
            let mut by_pos = [e[0], e[1], e[2]];
            by_pos.sort_unstable_by_key(|&v| pos[v as usize]);
            let [vi, vj, vk] = by_pos;
            let mut var_of = |a: u32, b: u32| {
                let key = if a < b { (a, b) } else { (b, a) };
                let next = pair_ids.len();
                *pair_ids.entry(key).or_insert(next)
            };
            edge_vars.push([var_of(vi, vj), var_of(vj, vk), var_of(vi, vk)]);
            edge_labels.push(e.to_vec());
        }
        // Renumber variables so ids follow lexicographic pair order; the
        // fail-first tie break and the witness then have a canonical order.
        let sorted: Vec<(u32, u32)> = pair_ids.keys().copied().collect();
        let mut renumber = vec![0usize; sorted.len()];
        for (new_id, key) in sorted.iter().enumerate() {
            renumber[pair_ids[key]] = new_id;
        }
        for vars in &mut edge_vars {
            for v in vars.iter_mut() {
                *v = renumber[*v];
            }
        }
        let mut var_edges = vec![Vec::new(); sorted.len()];
        for (ei, vars) in edge_vars.iter().enumerate() {
            var_edges[vars[0]].push((ei, PairRole::X));
            var_edges[vars[1]].push((ei, PairRole::Y));
            var_edges[vars[2]].push((ei, PairRole::Z));
        }
        Ok(PairCsp {
            palette,
            pair_labels: sorted,
            edge_vars,
            edge_labels,
            var_edges,
        })
    }

    fn initial_domains(&self) -> Vec<u64> {
        let k = self.palette.color_count();
        let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        vec![full; self.pair_labels.len()]
    }

    /// Generalized arc consistency to fixpoint. On a domain wipe returns the
    /// wiped variable.
    fn propagate(&self, doms: &mut [u64]) -> std::result::Result<(), usize> {
        loop {
            let mut changed = false;
            for vars in &self.edge_vars {
                let [vx, vy, vz] = *vars;
                let (mut ux, mut uy, mut uz) = (0u64, 0u64, 0u64);
                for t in self.palette.triples() {
                    if doms[vx] >> t[0] & 1 == 1 && doms[vy] >> t[1] & 1 == 1 && doms[vz] >> t[2] & 1 == 1
                    {
                        ux |= 1 << t[0];
                        uy |= 1 << t[1];
                        uz |= 1 << t[2];
                    }
                }
                for (v, u) in [(vx, ux), (vy, uy), (vz, uz)] {
                    let new = doms[v] & u;
                    if new != doms[v] {
                        doms[v] = new;
                        changed = true;
                        if new == 0 {
                            return Err(v);
                        }
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    /// Backtracking search on top of propagation. Branch variable: smallest
    /// domain, ties by lexicographic pair; values tried in ascending color
    /// order. Records the first domain wipe seen (canonical search order).
    fn solve(&self, doms: &mut [u64], first_wipe: &mut Option<usize>) -> Option<Vec<u8>> {
        if let Err(var) = self.propagate(doms) {
            first_wipe.get_or_insert(var);
            return None;
        }
        let branch = (0..doms.len())
            .filter(|&v| doms[v].count_ones() >= 2)
            .min_by_key(|&v| (doms[v].count_ones(), v));
        let var = match branch {
            None => {
                return Some(doms.iter().map(|d| d.trailing_zeros() as u8).collect());
            }
            Some(v) => v,
        };
        let dom = doms[var];
        for c in 0..64u8 {
            if dom >> c & 1 == 0 {
                continue;
            }
            let mut next = doms.to_vec();
            next[var] = 1 << c;
            if let Some(sol) = self.solve(&mut next, first_wipe) {
                return Some(sol);
            }
        }
        None
    }

    fn certificate(&self, ordering: &[u32], colors: &[u8]) -> Result<ColoringCertificate> {
        let mut partial = BTreeMap::new();
        for (v, &(a, b)) in self.pair_labels.iter().enumerate() {
            partial.insert((a, b), colors[v]);
        }
        let total = total_pair_colors(ordering.len(), &partial);
        ColoringCertificate::new(ordering.to_vec(), total)
    }

    /// Witness for a wiped pair: each edge through the pair, the role the
    /// pair plays there, and the palette's positional domain for that role
    /// (the constraint the edge imposes before any propagation).
    fn witness(&self, var: usize) -> InfeasibilityWitness {
        let profile = position_profile(self.palette);
        let mut constraints: Vec<(usize, PairEdgeConstraint)> = self.var_edges[var]
            .iter()
            .map(|&(ei, role)| {
                let domain = match role {
                    PairRole::X => profile.x.clone(),
                    PairRole::Y => profile.y.clone(),
                    PairRole::Z => profile.z.clone(),
                };
                (
                    ei,
                    PairEdgeConstraint {
                        edge: self.edge_labels[ei].clone(),
                        role,
                        domain,
                    },
                )
            })
            .collect();
        constraints.sort_by_key(|(ei, _)| *ei);
        InfeasibilityWitness {
            pair: self.pair_labels[var],
            constraints: constraints.into_iter().map(|(_, c)| c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan() -> Hypergraph {
        Hypergraph::new(3, 5, [[0u32, 1, 3], [1, 2, 3], [1, 3, 4]]).unwrap()
    }

    #[test]
    fn profile_of_phi8_is_a_product() {
        let p = position_profile(&Palette::phi8());
        assert_eq!(p.x, vec![1, 2]); // beta, gamma
        assert_eq!(p.y, vec![0, 2]); // alpha, gamma
        assert_eq!(p.z, vec![0, 1]); // alpha, beta
        assert!(p.is_product);
    }

    #[test]
    fn profile_of_phi0_is_a_product() {
        let p = position_profile(&Palette::phi0());
        assert_eq!((p.x, p.y, p.z), (vec![0], vec![1], vec![2]));
        assert!(p.is_product);
    }

    #[test]
    fn profile_of_phi3_is_not_a_product() {
        let p = position_profile(&Palette::phi3());
        assert_eq!(p.x, vec![0, 1, 3]); // omega, alpha1, alpha2
        assert_eq!(p.y, vec![0, 2, 5]); // omega, beta1, beta3
        assert_eq!(p.z, vec![0, 4, 6]); // omega, gamma2, gamma3
        assert!(!p.is_product); // 27 product triples vs 3
    }

    #[test]
    fn fan_identity_phi8_is_infeasible_with_middle_pair_witness() {
        let ordering: Vec<u32> = (0..5).collect();
        let outcome = check_fixed_ordering(&fan(), &Palette::phi8(), &ordering).unwrap();
        let w = match outcome {
            FixedOrderingOutcome::Infeasible(w) => w,
            FixedOrderingOutcome::Feasible(_) => panic!("fan must be infeasible under identity"),
        };
        assert_eq!(w.pair, (1, 3));
        let domains: Vec<Vec<u8>> = w.constraints.iter().map(|c| c.domain.clone()).collect();
        // edges (0,1,3), (1,2,3), (1,3,4) constrain the pair through roles
        // Y, Z, X: {alpha,gamma}, {alpha,beta}, {beta,gamma}; empty meet.
        assert_eq!(domains, vec![vec![0, 2], vec![0, 1], vec![1, 2]]);
        assert_eq!(
            w.constraints.iter().map(|c| c.edge.clone()).collect::<Vec<_>>(),
            vec![vec![0, 1, 3], vec![1, 2, 3], vec![1, 3, 4]]
        );
    }

    #[test]
    fn single_edge_phi0_identity_is_forced() {
        let h = Hypergraph::new(3, 3, [[0u32, 1, 2]]).unwrap();
        let outcome = check_fixed_ordering(&h, &Palette::phi0(), &[0, 1, 2]).unwrap();
        match outcome {
            FixedOrderingOutcome::Feasible(cert) => {
                assert_eq!(cert.color_of(0, 1), Some(0)); // alpha
                assert_eq!(cert.color_of(1, 2), Some(1)); // beta
                assert_eq!(cert.color_of(0, 2), Some(2)); // gamma
            }
            FixedOrderingOutcome::Infeasible(_) => panic!("single edge must be colorable"),
        }
    }

    #[test]
    fn fan_reordered_phi8_is_feasible() {
        // Under (1,3,0,2,4) the pair {1,3} occupies the X position in all
        // three edges, so its three constraints agree.
        let outcome = check_fixed_ordering(&fan(), &Palette::phi8(), &[1, 3, 0, 2, 4]).unwrap();
        let cert = match outcome {
            FixedOrderingOutcome::Feasible(cert) => cert,
            FixedOrderingOutcome::Infeasible(_) => panic!("expected feasible"),
        };
        assert!(matches!(
            verify_certificate(&fan(), &Palette::phi8(), &cert).unwrap(),
            CertificateCheck::Valid
        ));
    }

    #[test]
    fn fan_reordered_agrees_with_exhaustive_coloring_enumeration() {
        // Independent oracle: try all 3^10 pair colorings for the fixed
        // ordering and compare against the CSP verdict.
        let h = fan();
        let palette = Palette::phi8();
        let cube = palette.membership_cube();
        let k = palette.color_count();
        for ordering in [[0u32, 1, 2, 3, 4], [1u32, 3, 0, 2, 4]] {
            let mut pos = [0usize; 5];
            for (p, &v) in ordering.iter().enumerate() {
                pos[v as usize] = p;
            }
            let pairs: Vec<(u32, u32)> = (0..5u32)
                .flat_map(|u| ((u + 1)..5).map(move |v| (u, v)))
                .collect();
            let slots: Vec<[usize; 3]> = h
                .edges()
                .map(|e| {
                    let mut by_pos = [e[0], e[1], e[2]];
                    by_pos.sort_unstable_by_key(|&v| pos[v as usize]);
                    let pair_slot = |a: u32, b: u32| {
                        pairs
                            .iter()
                            .position(|&p| p == (a.min(b), a.max(b)))
                            .unwrap()
                    };
                    [
                        pair_slot(by_pos[0], by_pos[1]),
                        pair_slot(by_pos[1], by_pos[2]),
                        pair_slot(by_pos[0], by_pos[2]),
                    ]
                })
                .collect();
            let mut colors = vec![0u8; pairs.len()];
            let mut feasible = false;
            'outer: loop {
                if slots.iter().all(|s| {
                    cube[(colors[s[0]] as usize * k + colors[s[1]] as usize) * k
                        + colors[s[2]] as usize]
                }) {
                    feasible = true;
                    break;
                }
                let mut i = 0;
                loop {
                    if i == colors.len() {
                        break 'outer;
                    }
                    colors[i] += 1;
                    if (colors[i] as usize) < k {
                        break;
                    }
                    colors[i] = 0;
                    i += 1;
                }
            }
            let got = matches!(
                check_fixed_ordering(&h, &palette, &ordering).unwrap(),
                FixedOrderingOutcome::Feasible(_)
            );
            assert_eq!(got, feasible, "ordering {ordering:?}");
        }
    }

    #[test]
    fn k4_minus_is_not_phi0_colorable() {
        let h = Hypergraph::new(3, 4, [[0u32, 1, 2], [0, 1, 3], [0, 2, 3]]).unwrap();
        let outcome = search_colorable(&h, &Palette::phi0(), &SearchOptions::default()).unwrap();
        assert!(matches!(outcome, SearchOutcome::NotColorable));
    }

    #[test]
    fn empty_hypergraph_is_colorable() {
        let h = Hypergraph::empty(3, 3);
        for palette in [Palette::phi0(), Palette::phi3(), Palette::phi8()] {
            let outcome = search_colorable(&h, &palette, &SearchOptions::default()).unwrap();
            assert!(matches!(outcome, SearchOutcome::Colorable(_)));
        }
    }

    #[test]
    fn fan_is_phi8_colorable_with_non_identity_ordering() {
        let outcome = search_colorable(&fan(), &Palette::phi8(), &SearchOptions::default()).unwrap();
        match outcome {
            SearchOutcome::Colorable(cert) => {
                assert_ne!(cert.ordering(), &[0, 1, 2, 3, 4]);
                assert!(matches!(
                    verify_certificate(&fan(), &Palette::phi8(), &cert).unwrap(),
                    CertificateCheck::Valid
                ));
            }
            _ => panic!("fan is phi8-colorable"),
        }
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        let h = Hypergraph::empty(3, 11);
        let err = search_colorable(&h, &Palette::phi0(), &SearchOptions::default()).unwrap_err();
        assert!(matches!(err, Error::CapExceeded(_)));
        let opts = SearchOptions {
            exhaustive_cap: 11,
            ..SearchOptions::default()
        };
        assert!(search_colorable(&h, &Palette::phi0(), &opts).is_ok());
    }

    #[test]
    fn verify_catches_first_violation() {
        let h = Hypergraph::new(3, 3, [[0u32, 1, 2]]).unwrap();
        let outcome = check_fixed_ordering(&h, &Palette::phi0(), &[0, 1, 2]).unwrap();
        let cert = match outcome {
            FixedOrderingOutcome::Feasible(c) => c,
            _ => unreachable!(),
        };
        let mut pairs = cert.pair_colors().clone();
        pairs.insert((0, 2), 0); // gamma -> alpha breaks the only triple
        let bad = ColoringCertificate::new(cert.ordering().to_vec(), pairs).unwrap();
        match verify_certificate(&h, &Palette::phi0(), &bad).unwrap() {
            CertificateCheck::Violated { edge, .. } => assert_eq!(edge, vec![0, 1, 2]),
            CertificateCheck::Valid => panic!("mutated certificate must fail"),
        }
    }

    #[test]
    fn rejects_bad_ordering() {
        let err = check_fixed_ordering(&fan(), &Palette::phi8(), &[0, 0, 1, 2, 3]).unwrap_err();
        assert!(matches!(err, Error::MalformedInput(_)));
    }

    #[test]
    fn heuristic_mode_finds_or_gives_up() {
        let opts = SearchOptions {
            mode: SearchMode::Heuristic,
            heuristic_tries: 50,
            seed: 3,
            ..SearchOptions::default()
        };
        match search_colorable(&fan(), &Palette::phi8(), &opts).unwrap() {
            SearchOutcome::Colorable(cert) => {
                assert!(matches!(
                    verify_certificate(&fan(), &Palette::phi8(), &cert).unwrap(),
                    CertificateCheck::Valid
                ));
            }
            SearchOutcome::Unknown { tried_orderings } => assert_eq!(tried_orderings, 50),
            SearchOutcome::NotColorable => panic!("heuristic mode never proves non-colorability"),
        }
        // K4- under phi0 is not colorable, so heuristic mode must say unknown
        let h = Hypergraph::new(3, 4, [[0u32, 1, 2], [0, 1, 3], [0, 2, 3]]).unwrap();
        assert!(matches!(
            search_colorable(&h, &Palette::phi0(), &opts).unwrap(),
            SearchOutcome::Unknown { .. }
        ));
    }

    #[test]
    fn restricting_edges_preserves_colorability() {
        // monotonicity: a certificate for H verifies on any edge-subset of H
        let h = fan();
        let cert = match search_colorable(&h, &Palette::phi8(), &SearchOptions::default()).unwrap() {
            SearchOutcome::Colorable(c) => c,
            _ => panic!(),
        };
        let sub = Hypergraph::new(3, 5, [[0u32, 1, 3], [1, 3, 4]]).unwrap();
        assert!(matches!(
            verify_certificate(&sub, &Palette::phi8(), &cert).unwrap(),
            CertificateCheck::Valid
        ));
    }
}
