//! Palettes: sets of ordered color triples. An edge with vertices at
//! positions i < j < k is admissible when the triple of its pair colors
//! (c_ij, c_jk, c_ik) belongs to the palette.

use crate::error::{Error, Result};
use crate::rational::Rat;

pub const PALETTE_FORMAT_VERSION: &str = "palette/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    color_count: usize,
    /// Sorted, deduplicated triples of color indices.
    triples: Vec<[u8; 3]>,
}

impl Palette {
    /// `color_count` is the number of colors appearing in the triples, so the
    /// constructor requires every color in [0, color_count) to occur.
    pub fn new(color_count: usize, triples: impl IntoIterator<Item = [u8; 3]>) -> Result<Self> {
        if color_count == 0 || color_count > 255 {
            return Err(Error::malformed(format!(
                "palette color count must be in [1, 255], got {color_count}"
            )));
        }
        let mut triples: Vec<[u8; 3]> = triples.into_iter().collect();
        triples.sort_unstable();
        triples.dedup();
        let mut used = vec![false; color_count];
        for t in &triples {
            for &c in t {
                if c as usize >= color_count {
                    return Err(Error::malformed(format!(
                        "triple {t:?} uses color {c} outside [0, {color_count})"
                    )));
                }
                used[c as usize] = true;
            }
        }
        if let Some(missing) = used.iter().position(|&u| !u) {
            return Err(Error::malformed(format!(
                "color {missing} appears in no triple; color count must equal the number of colors used"
            )));
        }
        Ok(Palette {
            color_count,
            triples,
        })
    }

    /// Single triple (alpha, beta, gamma); characterizes the zero-density
    /// hypergraphs.
    pub fn phi0() -> Self {
        Self::new(3, [[0, 1, 2]]).expect("phi0 is valid")
    }

    /// Seven colors 0=omega, 1=alpha1, 2=beta1, 3=alpha2, 4=gamma2, 5=beta3,
    /// 6=gamma3; triples (alpha1, beta1, omega), (alpha2, omega, gamma2),
    /// (omega, beta3, gamma3).
    pub fn phi3() -> Self {
        Self::new(7, [[1, 2, 0], [3, 0, 4], [0, 5, 6]]).expect("phi3 is valid")
    }

    /// Colors 0=alpha, 1=beta, 2=gamma; the eight triples (x, y, z) with
    /// x in {beta, gamma}, y in {alpha, gamma}, z in {alpha, beta}.
    pub fn phi8() -> Self {
        let mut triples = Vec::new();
        for x in [1u8, 2] {
            for y in [0u8, 2] {
                for z in [0u8, 1] {
                    triples.push([x, y, z]);
                }
            }
        }
        Self::new(3, triples).expect("phi8 is valid")
    }

    /// Resolve a built-in name; `None` means the caller should try a file.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "phi0" => Some(Self::phi0()),
            "phi3" => Some(Self::phi3()),
            "phi8" => Some(Self::phi8()),
            _ => None,
        }
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    pub fn triples(&self) -> &[[u8; 3]] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &[u8; 3]) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    /// Membership cube indexed x*k^2 + y*k + z, for hot loops.
    pub fn membership_cube(&self) -> Vec<bool> {
        let k = self.color_count;
        let mut cube = vec![false; k * k * k];
        for t in &self.triples {
            cube[(t[0] as usize * k + t[1] as usize) * k + t[2] as usize] = true;
        }
        cube
    }

    /// |triples| / k^3 as an exact rational.
    pub fn density(&self) -> Rat {
        let k = self.color_count as i64;
        Rat::new(self.triples.len() as i64, k * k * k)
    }

    // ------------------------------------------------------------------
    // Text format: `palette <k> <t>` header, then t lines `x y z`.
    // ------------------------------------------------------------------

    pub fn to_text(&self) -> String {
        let mut out = format!("palette {} {}\n", self.color_count, self.triples.len());
        for t in &self.triples {
            out.push_str(&format!("{} {} {}\n", t[0], t[1], t[2]));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::malformed("empty palette file".to_string()))?;
        let fields: Vec<&str> = header.split_ascii_whitespace().collect();
        if fields.len() != 3 || fields[0] != "palette" {
            return Err(Error::malformed(format!(
                "bad header {header:?}, expected `palette <k> <t>`"
            )));
        }
        let k: usize = fields[1]
            .parse()
            .map_err(|_| Error::malformed(format!("bad color count {:?}", fields[1])))?;
        let t: usize = fields[2]
            .parse()
            .map_err(|_| Error::malformed(format!("bad triple count {:?}", fields[2])))?;
        let mut triples = Vec::with_capacity(t);
        for line in lines {
            let vals: Vec<u8> = line
                .split_ascii_whitespace()
                .map(|w| {
                    w.parse()
                        .map_err(|_| Error::malformed(format!("bad color {w:?}")))
                })
                .collect::<Result<_>>()?;
            if vals.len() != 3 {
                return Err(Error::malformed(format!("triple line {line:?} must have 3 colors")));
            }
            triples.push([vals[0], vals[1], vals[2]]);
        }
        if triples.len() != t {
            return Err(Error::malformed(format!(
                "header declares {t} triples but file has {}",
                triples.len()
            )));
        }
        Self::new(k, triples)
    }

    /// Palette containing all k^3 triples.
    pub fn complete(color_count: usize) -> Result<Self> {
        let k = color_count;
        if k > 255 {
            return Err(Error::malformed("color count too large".to_string()));
        }
        let mut triples = Vec::with_capacity(k * k * k);
        for x in 0..k as u8 {
            for y in 0..k as u8 {
                for z in 0..k as u8 {
                    triples.push([x, y, z]);
                }
            }
        }
        Self::new(k, triples)
    }
}
