//! k-uniform hypergraphs over dense 0-based integer vertices (k in {3, 5}),
//! kept in canonical form: each edge sorted ascending, the edge list sorted
//! lexicographically, no duplicates.

use crate::error::{Error, Result};
use crate::rational::binomial2;

pub const HG_FORMAT_VERSION: &str = "hg/1";

/// Canonical k-uniform hypergraph. Immutable after construction; all
/// operations are pure, so values can be shared freely across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    /// Flat edge storage, stride `k`; canonical order.
    edges: Vec<u32>,
}

impl Hypergraph {
    /// Build from arbitrary edge tuples: sorts each edge, deduplicates, and
    /// sorts the edge list. Rejects vertices outside [0, n) and edges with
    /// repeated vertices. Idempotent on already-canonical input.
    pub fn new<I, E>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        if k != 3 && k != 5 {
            return Err(Error::malformed(format!("uniformity must be 3 or 5, got {k}")));
        }
        let mut list: Vec<Vec<u32>> = Vec::new();
        for e in edges {
            let mut e = e.as_ref().to_vec();
            if e.len() != k {
                return Err(Error::malformed(format!(
                    "edge {:?} has {} vertices, expected {}",
                    e,
                    e.len(),
                    k
                )));
            }
            e.sort_unstable();
            for w in e.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::malformed(format!("edge {e:?} repeats vertex {}", w[0])));
                }
            }
            if let Some(&v) = e.last() {
                if v as usize >= n {
                    return Err(Error::malformed(format!(
                        "edge {e:?} references vertex {v} outside [0, {n})"
                    )));
                }
            }
            list.push(e);
        }
        list.sort_unstable();
        list.dedup();
        let mut flat = Vec::with_capacity(list.len() * k);
        for e in &list {
            flat.extend_from_slice(e);
        }
        Ok(Hypergraph { k, n, edges: flat })
    }

    /// Like [`Hypergraph::new`] but refuses input that is not already in
    /// canonical form (used by the strict parser).
    pub fn new_strict<I, E>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        let raw: Vec<Vec<u32>> = edges.into_iter().map(|e| e.as_ref().to_vec()).collect();
        let h = Self::new(k, n, raw.iter())?;
        if h.edge_count() != raw.len() || h.edges().zip(raw.iter()).any(|(a, b)| a != b.as_slice()) {
            return Err(Error::malformed(
                "edges are not in canonical order (sorted tuples, lexicographic list, no duplicates)"
                    .to_string(),
            ));
        }
        Ok(h)
    }

    pub fn empty(k: usize, n: usize) -> Self {
        Self::new(k, n, std::iter::empty::<[u32; 0]>().map(|e| e.to_vec())).expect("empty is valid")
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.k
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[u32]> + Clone + '_ {
        self.edges.chunks_exact(self.k)
    }

    pub fn edge(&self, idx: usize) -> &[u32] {
        &self.edges[idx * self.k..(idx + 1) * self.k]
    }

    /// Binary search in the canonical edge list.
    pub fn has_edge(&self, e: &[u32]) -> bool {
        debug_assert_eq!(e.len(), self.k);
        let m = self.edge_count();
        let (mut lo, mut hi) = (0usize, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(e) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Multiplicity of every unordered vertex pair across the edge list,
    /// indexed triangularly. Linearity and exact-cover checks read off this.
    fn pair_counts(&self) -> Vec<u32> {
        let n = self.n;
        let mut counts = vec![0u32; binomial2(n) as usize];
        for e in self.edges() {
            for i in 0..self.k {
                for j in (i + 1)..self.k {
                    counts[pair_index(n, e[i] as usize, e[j] as usize)] += 1;
                }
            }
        }
        counts
    }

    /// True iff every two distinct edges share at most one vertex
    /// (equivalently, no vertex pair appears in two edges).
    pub fn is_linear(&self) -> bool {
        self.pair_counts().iter().all(|&c| c <= 1)
    }

    /// True iff every unordered vertex pair lies in exactly one edge.
    pub fn covers_every_pair_exactly_once(&self) -> bool {
        self.pair_counts().iter().all(|&c| c == 1)
    }

    /// Spanned edge count of the induced sub-hypergraph on `subset`
    /// (`subset` sorted ascending).
    pub fn count_induced_edges(&self, subset: &[u32]) -> u64 {
        let mut mask = vec![false; self.n];
        for &v in subset {
            mask[v as usize] = true;
        }
        self.edges()
            .filter(|e| e.iter().all(|&v| mask[v as usize]))
            .count() as u64
    }

    /// Relabel vertices by `perm` (old label -> new label) and recanonicalize.
    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::malformed("permutation length mismatch".to_string()));
        }
        let edges: Vec<Vec<u32>> = self
            .edges()
            .map(|e| e.iter().map(|&v| perm[v as usize]).collect())
            .collect();
        Self::new(self.k, self.n, edges)
    }

    // ------------------------------------------------------------------
    // Text format: `hg <k> <n> <m>` header, then m lines of k ascending
    // vertex indices. '#' starts a comment line; blank lines are ignored.
    // ------------------------------------------------------------------

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("hg {} {} {}\n", self.k, self.n, self.edge_count()));
        for e in self.edges() {
            let words: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&words.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, strict: bool) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::malformed("empty hypergraph file".to_string()))?;
        let fields: Vec<&str> = header.split_ascii_whitespace().collect();
        if fields.len() != 4 || fields[0] != "hg" {
            return Err(Error::malformed(format!(
                "bad header {header:?}, expected `hg <k> <n> <m>`"
            )));
        }
        let k: usize = parse_num(fields[1], "k")?;
        let n: usize = parse_num(fields[2], "n")?;
        let m: usize = parse_num(fields[3], "m")?;
        let mut edges: Vec<Vec<u32>> = Vec::with_capacity(m);
        for line in lines {
            let edge: Vec<u32> = line
                .split_ascii_whitespace()
                .map(|w| parse_num::<u32>(w, "vertex"))
                .collect::<Result<_>>()?;
            edges.push(edge);
        }
        if edges.len() != m {
            return Err(Error::malformed(format!(
                "header declares {m} edges but file has {}",
                edges.len()
            )));
        }
        if strict {
            Self::new_strict(k, n, edges)
        } else {
            Self::new(k, n, edges)
        }
    }
}

fn parse_num<T: std::str::FromStr>(word: &str, what: &str) -> Result<T> {
    word.parse()
        .map_err(|_| Error::malformed(format!("bad {what}: {word:?}")))
}

/// Triangular index of the unordered pair {u, v} over n vertices.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u != v && u < n && v < n);
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

/// All k-element subsets of [0, n) in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<u32> = (0..k as u32).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (n - k + i) as u32 {
                cur[i] += 1;
                for j in (i + 1)..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}
