//! Colorability certificates: a vertex ordering plus a total coloring of
//! vertex pairs, witnessing that every edge's ordered color triple lies in a
//! palette.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::palette::Palette;

pub const CERT_FORMAT_VERSION: &str = "cert/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringCertificate {
    /// Position p holds the original label of the p-th vertex.
    ordering: Vec<u32>,
    /// Color of every unordered pair {u, v}, keyed by (u, v) with u < v in
    /// original labels.
    pair_colors: BTreeMap<(u32, u32), u8>,
}

impl ColoringCertificate {
    pub fn new(ordering: Vec<u32>, pair_colors: BTreeMap<(u32, u32), u8>) -> Result<Self> {
        let n = ordering.len();
        let mut seen = vec![false; n];
        for &v in &ordering {
            if v as usize >= n || seen[v as usize] {
                return Err(Error::MalformedCertificate(format!(
                    "ordering is not a permutation of [0, {n})"
                )));
            }
            seen[v as usize] = true;
        }
        for (&(u, v), &_c) in &pair_colors {
            if u >= v || v as usize >= n {
                return Err(Error::MalformedCertificate(format!(
                    "pair ({u}, {v}) is not an ordered pair of distinct vertices in [0, {n})"
                )));
            }
        }
        let expected = n * n.saturating_sub(1) / 2;
        if pair_colors.len() != expected {
            return Err(Error::MalformedCertificate(format!(
                "certificate colors {} pairs, expected {expected}",
                pair_colors.len()
            )));
        }
        Ok(ColoringCertificate {
            ordering,
            pair_colors,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.ordering.len()
    }

    pub fn ordering(&self) -> &[u32] {
        &self.ordering
    }

    pub fn pair_colors(&self) -> &BTreeMap<(u32, u32), u8> {
        &self.pair_colors
    }

    pub fn color_of(&self, u: u32, v: u32) -> Option<u8> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.pair_colors.get(&key).copied()
    }

    /// Position of each vertex under the ordering (inverse permutation).
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0usize; self.ordering.len()];
        for (p, &v) in self.ordering.iter().enumerate() {
            pos[v as usize] = p;
        }
        pos
    }

    // ------------------------------------------------------------------
    // JSON wire format:
    //   {"n": int, "ordering": [int...], "pair_colors": {"u,v": color}}
    // with u < v original labels; colors are palette indices.
    // ------------------------------------------------------------------

    pub fn to_json(&self) -> serde_json::Value {
        let pairs: serde_json::Map<String, serde_json::Value> = self
            .pair_colors
            .iter()
            .map(|(&(u, v), &c)| (format!("{u},{v}"), serde_json::Value::from(c)))
            .collect();
        serde_json::json!({
            "n": self.ordering.len(),
            "ordering": self.ordering,
            "pair_colors": pairs,
        })
    }

    pub fn to_json_string(&self) -> String {
        // serde_json maps are BTree-backed, so output is key-sorted and
        // byte-stable.
        serde_json::to_string_pretty(&self.to_json()).expect("certificate serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let n = value
            .get("n")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::MalformedCertificate("missing integer field `n`".to_string()))?
            as usize;
        let ordering: Vec<u32> = value
            .get("ordering")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::MalformedCertificate("missing array `ordering`".to_string()))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|v| v as u32)
                    .ok_or_else(|| Error::MalformedCertificate("non-integer in ordering".to_string()))
            })
            .collect::<Result<_>>()?;
        if ordering.len() != n {
            return Err(Error::MalformedCertificate(format!(
                "`n` is {n} but ordering has {} entries",
                ordering.len()
            )));
        }
        let raw_pairs = value
            .get("pair_colors")
            .and_then(|v| v.as_object())
            .ok_or_else(|| Error::MalformedCertificate("missing object `pair_colors`".to_string()))?;
        let mut pair_colors = BTreeMap::new();
        for (key, val) in raw_pairs {
            let (u, v) = key
                .split_once(',')
                .ok_or_else(|| Error::MalformedCertificate(format!("bad pair key {key:?}")))?;
            let u: u32 = u
                .trim()
                .parse()
                .map_err(|_| Error::MalformedCertificate(format!("bad pair key {key:?}")))?;
            let v: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::MalformedCertificate(format!("bad pair key {key:?}")))?;
            let c = val
                .as_u64()
                .filter(|&c| c < 256)
                .ok_or_else(|| Error::MalformedCertificate(format!("bad color for pair {key:?}")))?;
            pair_colors.insert((u, v), c as u8);
        }
        Self::new(ordering, pair_colors)
    }

    /// Check structural compatibility with a hypergraph and palette:
    /// matching vertex count and all colors below the palette's color count.
    pub fn check_against(&self, h: &Hypergraph, palette: &Palette) -> Result<()> {
        if self.vertex_count() != h.vertex_count() {
            return Err(Error::MalformedCertificate(format!(
                "certificate covers {} vertices, hypergraph has {}",
                self.vertex_count(),
                h.vertex_count()
            )));
        }
        for (&(u, v), &c) in &self.pair_colors {
            if c as usize >= palette.color_count() {
                return Err(Error::MalformedCertificate(format!(
                    "pair ({u}, {v}) has color {c} >= palette color count {}",
                    palette.color_count()
                )));
            }
        }
        Ok(())
    }
}

/// Build a total pair-color map from a partial one, filling unlisted pairs
/// with color 0.
pub fn total_pair_colors(
    n: usize,
    partial: &BTreeMap<(u32, u32), u8>,
) -> BTreeMap<(u32, u32), u8> {
    let mut out = BTreeMap::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            out.insert((u, v), partial.get(&(u, v)).copied().unwrap_or(0));
        }
    }
    out
}
