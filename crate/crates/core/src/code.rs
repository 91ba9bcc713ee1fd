//! Code parameters, Reed-Muller rate profiles and the dyadic
//! information-bit partition used for special-node detection.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::precoder::ConnPoly;

/// Parameters of a PAC code: length `N = 2^n`, data length `K`, rate profile
/// and connection polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacCodeSpec {
    n: u32,
    k: usize,
    rate_profile: Vec<bool>,
    poly: ConnPoly,
}

impl PacCodeSpec {
    pub fn new(rate_profile: Vec<bool>, poly: ConnPoly) -> Result<Self> {
        let len = rate_profile.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::NotPowerOfTwo(len));
        }
        let k = rate_profile.iter().filter(|&&b| b).count();
        Ok(Self {
            n: len.trailing_zeros(),
            k,
            rate_profile,
            poly,
        })
    }

    /// Reed-Muller (weight-ordered) profile of the given size.
    pub fn reed_muller(n: u32, k: usize, poly: ConnPoly) -> Result<Self> {
        Self::new(rm_rate_profile(n, k, TieBreak::default())?, poly)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Code length `N`.
    pub fn len(&self) -> usize {
        self.rate_profile.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rate_profile.is_empty()
    }

    /// Data length `K`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.len() as f64
    }

    pub fn rate_profile(&self) -> &[bool] {
        &self.rate_profile
    }

    pub fn is_info(&self, i: usize) -> bool {
        self.rate_profile[i]
    }

    pub fn poly(&self) -> &ConnPoly {
        &self.poly
    }

    /// Zero-based indices of the information positions, ascending.
    pub fn info_positions(&self) -> Vec<usize> {
        self.rate_profile
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    /// Places `data` on the information positions; frozen positions are zero.
    pub fn embed(&self, data: &[u8]) -> Result<Vec<u8>> {
        if data.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                found: data.len(),
            });
        }
        let mut v = vec![0u8; self.len()];
        for (pos, &d) in self.info_positions().iter().zip(data) {
            v[*pos] = d & 1;
        }
        Ok(v)
    }

    /// Restricts a full-length carrier vector to the information positions.
    pub fn extract(&self, v: &[u8]) -> Vec<u8> {
        v.iter()
            .zip(&self.rate_profile)
            .filter_map(|(&b, &info)| info.then_some(b))
            .collect()
    }

    pub fn segment_counts(&self) -> SegmentCounts {
        calculate_s_values(&self.rate_profile)
    }
}

/// Order among rows of equal Hamming weight when the cut falls inside a
/// weight class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LargerIndexFirst,
    SmallerIndexFirst,
}

/// Weight-ordered rate profile: the `k` indices whose binary expansion has
/// the largest Hamming weight are information positions.
pub fn rm_rate_profile(n: u32, k: usize, tie: TieBreak) -> Result<Vec<bool>> {
    if n > 24 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
        });
    }
    let len = 1usize << n;
    if k > len {
        return Err(Error::DataLengthOutOfRange { k, n: len });
    }
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&a, &b| {
        let by_weight = b.count_ones().cmp(&a.count_ones());
        by_weight.then_with(|| match tie {
            TieBreak::LargerIndexFirst => b.cmp(&a),
            TieBreak::SmallerIndexFirst => a.cmp(&b),
        })
    });
    let mut profile = vec![false; len];
    for &i in &order[..k] {
        profile[i] = true;
    }
    Ok(profile)
}

/// Parses a rate profile written as a single line of `0`/`1` characters,
/// index one leftmost.
pub fn parse_rate_profile(text: &str) -> Result<Vec<bool>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, body) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty rate profile".into(),
    })?;
    if let Some((extra, _)) = lines.next() {
        return Err(Error::Parse {
            line: extra,
            msg: "rate profile must be a single line".into(),
        });
    }
    let profile = body
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse {
                line,
                msg: format!("unexpected character {other:?}"),
            }),
        })
        .collect::<Result<Vec<bool>>>()?;
    if !profile.len().is_power_of_two() || profile.len() < 2 {
        return Err(Error::NotPowerOfTwo(profile.len()));
    }
    Ok(profile)
}

pub fn format_rate_profile(profile: &[bool]) -> String {
    profile.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Number of information bits in every dyadic segment of the profile.
///
/// `level(d)[j]` counts the information bits of the `j`-th segment of
/// length `N / 2^d`, for `d = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentCounts {
    levels: Vec<Vec<usize>>,
}

impl SegmentCounts {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, d: usize) -> &[usize] {
        &self.levels[d]
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn count(&self, level: usize, chunk_index: usize) -> usize {
        self.levels[level][chunk_index]
    }
}

/// Builds the segment counts bottom-up from the profile.
///
/// Panics if the profile length is not a power of two.
pub fn calculate_s_values(rate_profile: &[bool]) -> SegmentCounts {
    let len = rate_profile.len();
    assert!(len.is_power_of_two(), "profile length must be a power of two");
    let depth = len.trailing_zeros() as usize;
    let mut levels = vec![Vec::new(); depth + 1];
    levels[depth] = rate_profile.iter().map(|&b| b as usize).collect();
    for d in (0..depth).rev() {
        levels[d] = levels[d + 1].chunks(2).map(|p| p[0] + p[1]).collect();
    }
    SegmentCounts { levels }
}

/// Special-node classification of a dyadic chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeType {
    /// All bits frozen.
    Rate0,
    /// Exactly one information bit.
    Rep,
    /// Exactly two information bits.
    TypeIV,
    /// All bits carry information.
    Rate1,
    NotSpecial,
}

impl NodeType {
    pub fn is_terminal(self) -> bool {
        self != NodeType::NotSpecial
    }
}

impl fmt::Display for NodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NodeType::Rate0 => "rate0",
            NodeType::Rep => "rep",
            NodeType::TypeIV => "type4",
            NodeType::Rate1 => "rate1",
            NodeType::NotSpecial => "none",
        };
        f.write_str(s)
    }
}

/// Set of special-node types the decoder may terminate on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AllowedTypes {
    pub rate0: bool,
    pub rep: bool,
    pub type_iv: bool,
    pub rate1: bool,
}

impl AllowedTypes {
    pub const ALL: Self = Self {
        rate0: true,
        rep: true,
        type_iv: true,
        rate1: true,
    };
    pub const NONE: Self = Self {
        rate0: false,
        rep: false,
        type_iv: false,
        rate1: false,
    };

    pub fn contains(&self, t: NodeType) -> bool {
        match t {
            NodeType::Rate0 => self.rate0,
            NodeType::Rep => self.rep,
            NodeType::TypeIV => self.type_iv,
            NodeType::Rate1 => self.rate1,
            NodeType::NotSpecial => false,
        }
    }
}

impl Default for AllowedTypes {
    fn default() -> Self {
        Self::ALL
    }
}

impl FromStr for AllowedTypes {
    type Err = Error;

    /// Comma-separated list of `rate0`, `rep`, `type4`, `rate1`, or the
    /// shorthands `all` and `none`.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = AllowedTypes::NONE;
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok.to_ascii_lowercase().as_str() {
                "all" => out = AllowedTypes::ALL,
                "none" => {}
                "rate0" => out.rate0 = true,
                "rep" => out.rep = true,
                "type4" | "typeiv" => out.type_iv = true,
                "rate1" => out.rate1 = true,
                other => return Err(Error::Config(format!("unknown node type {other:?}"))),
            }
        }
        Ok(out)
    }
}

/// Which chunks the fast decoder is allowed to stop at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChunkPolicy {
    pub allowed: AllowedTypes,
    /// Chunks larger than this are never special.
    pub max_chunk: usize,
}

impl ChunkPolicy {
    /// Leaf-by-leaf processing, as in conventional stack decoding.
    pub const LEAVES: Self = Self {
        allowed: AllowedTypes::ALL,
        max_chunk: 1,
    };
}

impl Default for ChunkPolicy {
    fn default() -> Self {
        Self {
            allowed: AllowedTypes::ALL,
            max_chunk: usize::MAX,
        }
    }
}

/// Classifies the `chunk_index`-th chunk of `level` from its information
/// count. Rate1 takes precedence, then Rate0, Rep and TypeIV. Leaves are
/// always terminal regardless of the policy.
pub fn classify_chunk(
    s_values: &SegmentCounts,
    level: usize,
    chunk_index: usize,
    chunk_size: usize,
    policy: &ChunkPolicy,
) -> NodeType {
    let count = s_values.count(level, chunk_index);
    let kind = if count == chunk_size {
        NodeType::Rate1
    } else if count == 0 {
        NodeType::Rate0
    } else if count == 1 {
        NodeType::Rep
    } else if count == 2 {
        NodeType::TypeIV
    } else {
        NodeType::NotSpecial
    };
    if chunk_size == 1 {
        return kind;
    }
    if chunk_size > policy.max_chunk || !policy.allowed.contains(kind) {
        NodeType::NotSpecial
    } else {
        kind
    }
}
