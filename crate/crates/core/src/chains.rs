//! Chains of consecutive integers encoding `A_q(λ)` modules.
//!
//! A [`SignedChain`] is a run `(A, A-1, …, a)` tagged with the block sizes
//! `(p_i, q_i)` of one `u(p_i, q_i)` factor of the Levi. An [`AqChain`] is
//! the ordered list of these runs.
//!
//! Text grammar:
//!
//! ```text
//! chain := block (';' block)*
//! block := INT ':' UINT ',' UINT      # top ':' p ',' q
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::weights::{rho_g, tau, BiWeight, HalfRat};

/// The run `(top, top-1, …, bottom)` with `p + q` entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedChain {
    top: i64,
    p: usize,
    q: usize,
}

impl SignedChain {
    pub fn new(top: i64, p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::invalid("chain block with p = q = 0"));
        }
        Ok(SignedChain { top, p, q })
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn bottom(&self) -> i64 {
        self.top - (self.len() as i64 - 1)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.p + self.q
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `top + bottom`, twice the midpoint.
    fn mid2(&self) -> i64 {
        self.top + self.bottom()
    }

    /// Values in descending order.
    pub fn values(&self) -> impl DoubleEndedIterator<Item = i64> {
        let top = self.top;
        (0..self.len()).map(move |k| top - k as i64)
    }

    pub fn contains(&self, v: i64) -> bool {
        self.bottom() <= v && v <= self.top
    }
}

/// Ordered union of signed chains.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AqChain {
    blocks: Vec<SignedChain>,
}

impl AqChain {
    pub fn new(blocks: Vec<SignedChain>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("chain needs at least one block"));
        }
        Ok(AqChain { blocks })
    }

    /// The chain `⋃ C_i(Z_i + λ_i)` with `Z_i = Σ_{j ≥ i} (p_j + q_j)`.
    pub fn from_lambda(blocks: &[(usize, usize)], lambda: &[i64]) -> Result<Self> {
        if blocks.len() != lambda.len() {
            return Err(Error::invalid(format!(
                "{} blocks but {} lambda entries",
                blocks.len(),
                lambda.len()
            )));
        }
        let mut z: i64 = blocks.iter().map(|&(p, q)| (p + q) as i64).sum();
        let mut chains = Vec::with_capacity(blocks.len());
        for (&(p, q), &l) in blocks.iter().zip(lambda) {
            chains.push(SignedChain::new(z + l, p, q)?);
            z -= (p + q) as i64;
        }
        AqChain::new(chains)
    }

    pub fn blocks(&self) -> &[SignedChain] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|b| (b.p, b.q)).collect()
    }

    pub fn p(&self) -> usize {
        self.blocks.iter().map(|b| b.p).sum()
    }

    pub fn q(&self) -> usize {
        self.blocks.iter().map(|b| b.q).sum()
    }

    pub fn rank(&self) -> usize {
        self.p() + self.q()
    }

    /// `λ_i = A_i - Z_i`.
    pub fn lambda(&self) -> Vec<i64> {
        let mut z = self.rank() as i64;
        self.blocks
            .iter()
            .map(|b| {
                let l = b.top - z;
                z -= b.len() as i64;
                l
            })
            .collect()
    }

    /// Concatenated block values `(A_1, …, a_1; …; A_k, …, a_k)`.
    pub fn values(&self) -> Vec<i64> {
        self.blocks.iter().flat_map(SignedChain::values).collect()
    }

    /// Human-readable form `(A,…,a)^{p,q} ∪ …`.
    pub fn notation(&self) -> String {
        self.blocks
            .iter()
            .map(|b| format!("({})^{{{},{}}}", b.values().join(","), b.p, b.q))
            .join(" ∪ ")
    }

    pub fn classify_range(&self) -> RangeFlags {
        let mut flags = RangeFlags {
            good: true,
            weakly_good: true,
            fair: true,
            weakly_fair: true,
        };
        for (x, y) in self.blocks.iter().tuple_windows() {
            flags.good &= x.bottom() > y.top;
            flags.weakly_good &= x.bottom() >= y.top;
            flags.fair &= x.mid2() > y.mid2();
            flags.weakly_fair &= x.mid2() >= y.mid2();
        }
        flags
    }

    /// Chain values minus `τ`, sorted descending.
    pub fn infinitesimal_character(&self) -> Vec<HalfRat> {
        let shift = HalfRat::from_halves(self.rank() as i64 + 1);
        let mut out: Vec<HalfRat> = self
            .values()
            .into_iter()
            .map(|v| HalfRat::from_int(v) - shift)
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn hp_condition(&self) -> HpCheck {
        let mut multiplicity = BTreeMap::new();
        for v in self.values() {
            *multiplicity.entry(v).or_insert(0usize) += 1;
        }
        let doubles = multiplicity.values().filter(|&&m| m == 2).count();
        let ok = multiplicity.values().all(|&m| m <= 2) && doubles <= self.p().min(self.q());
        HpCheck { ok, multiplicity }
    }

    /// Nonempty pairwise overlaps `R_ij` of block value sets, `i < j`
    /// (0-based).
    pub fn repeated_intersections(&self) -> Result<BTreeMap<(usize, usize), IntRange>> {
        if !self.hp_condition().ok {
            return Err(Error::HpViolated);
        }
        Ok(self.overlaps())
    }

    pub(crate) fn overlaps(&self) -> BTreeMap<(usize, usize), IntRange> {
        let mut out = BTreeMap::new();
        for (i, x) in self.blocks.iter().enumerate() {
            for (j, y) in self.blocks.iter().enumerate().skip(i + 1) {
                let top = x.top.min(y.top);
                let bottom = x.bottom().max(y.bottom());
                if bottom <= top {
                    out.insert((i, j), IntRange { top, bottom });
                }
            }
        }
        out
    }

    /// `λ + 2ρ(u∩p)`.
    pub fn lowest_k_type(&self) -> BiWeight {
        let sizes = self.block_sizes();
        let lambda = self.lambda();
        let mut p_part = Vec::new();
        let mut q_part = Vec::new();
        for (&(p, q), &l) in sizes.iter().zip(&lambda) {
            p_part.extend(std::iter::repeat_n(HalfRat::from_int(l), p));
            q_part.extend(std::iter::repeat_n(HalfRat::from_int(l), q));
        }
        let lambda = BiWeight::new(p_part, q_part);
        let sums = half_sums(&sizes).expect("chain has positive rank");
        &lambda + &sums.rho_u_cap_p.scale(2)
    }

    /// Shift by `τ` of the corresponding `U(p,q)`.
    pub fn tau(&self) -> BiWeight {
        tau(self.p(), self.q()).expect("chain has positive rank")
    }
}

impl fmt::Display for AqChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self
            .blocks
            .iter()
            .map(|b| format!("{}:{},{}", b.top, b.p, b.q))
            .join(";");
        f.write_str(&text)
    }
}

impl fmt::Debug for AqChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AqChain({self})")
    }
}

impl FromStr for AqChain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for piece in s.split(';') {
            blocks.push(parse_block(piece, offset)?);
            offset += piece.len() + 1;
        }
        AqChain::new(blocks)
    }
}

fn parse_block(piece: &str, offset: usize) -> Result<SignedChain> {
    let colon = piece
        .find(':')
        .ok_or_else(|| Error::parse(offset, "expected 'A:p,q'"))?;
    let (top, rest) = (&piece[..colon], &piece[colon + 1..]);
    let top: i64 = parse_int(top, offset)?;
    let comma = rest
        .find(',')
        .ok_or_else(|| Error::parse(offset + colon + 1, "expected ',' between p and q"))?;
    let p_at = offset + colon + 1;
    let q_at = p_at + comma + 1;
    let p: usize = parse_int(&rest[..comma], p_at)?;
    let q: usize = parse_int(&rest[comma + 1..], q_at)?;
    SignedChain::new(top, p, q).map_err(|_| Error::parse(p_at, "block has p = q = 0"))
}

fn parse_int<T: FromStr>(text: &str, at: usize) -> Result<T> {
    let lead = text.len() - text.trim_start().len();
    text.trim()
        .parse()
        .map_err(|_| Error::parse(at + lead, format!("invalid integer {:?}", text.trim())))
}

/// Parses `p,q;p,q;…`.
pub fn parse_blocks(s: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in s.split(';') {
        let comma = piece
            .find(',')
            .ok_or_else(|| Error::parse(offset, "expected 'p,q'"))?;
        let p = parse_int(&piece[..comma], offset)?;
        let q = parse_int(&piece[comma + 1..], offset + comma + 1)?;
        out.push((p, q));
        offset += piece.len() + 1;
    }
    Ok(out)
}

/// Parses `λ_1;λ_2;…`. Entries must be integers.
pub fn parse_lambda(s: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in s.split(';') {
        let value: HalfRat = piece
            .parse()
            .map_err(|_| Error::parse(offset, format!("invalid lambda entry {:?}", piece.trim())))?;
        if !value.is_integer() {
            return Err(Error::parse(offset, format!("lambda entry {value} is not an integer")));
        }
        out.push(value.halves() / 2);
        offset += piece.len() + 1;
    }
    Ok(out)
}

impl Serialize for AqChain {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AqChain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeFlags {
    pub good: bool,
    pub weakly_good: bool,
    pub fair: bool,
    pub weakly_fair: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HpCheck {
    pub ok: bool,
    /// Number of blocks containing each value.
    pub multiplicity: BTreeMap<i64, usize>,
}

/// Consecutive integers `top, top-1, …, bottom`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub top: i64,
    pub bottom: i64,
}

impl IntRange {
    pub fn len(&self) -> usize {
        (self.top - self.bottom + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.top < self.bottom
    }

    pub fn values(&self) -> impl Iterator<Item = i64> {
        (self.bottom..=self.top).rev()
    }
}

/// Half sums attached to the parabolic with the given block sizes, all in
/// the block-ordered coordinates of `U(p,q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSums {
    pub rho_u: BiWeight,
    pub rho_u_cap_p: BiWeight,
    pub rho_u_cap_k: BiWeight,
    pub rho_l: BiWeight,
    pub rho_c_l: BiWeight,
    pub rho_n_l: BiWeight,
}

#[derive(Clone, Copy)]
struct Coord {
    block: usize,
    compact_side: bool, // false: p, true: q
    index: usize,
}

fn block_coords(blocks: &[(usize, usize)]) -> (usize, Vec<Coord>) {
    let p: usize = blocks.iter().map(|b| b.0).sum();
    let mut coords = Vec::new();
    for side in [false, true] {
        for (block, &(bp, bq)) in blocks.iter().enumerate() {
            for index in 0..if side { bq } else { bp } {
                coords.push(Coord {
                    block,
                    compact_side: side,
                    index,
                });
            }
        }
    }
    (p, coords)
}

/// Computes every half sum by summing explicit roots `e_a - e_b`. A root lies
/// in `u` when `a` sits in an earlier block than `b`; inside a block the
/// p-coordinates precede the q-coordinates.
pub fn half_sums(blocks: &[(usize, usize)]) -> Result<HalfSums> {
    let (p, coords) = block_coords(blocks);
    let n = coords.len();
    if n == 0 {
        return Err(Error::InvalidDimension { p: 0, q: 0 });
    }
    let key = |c: &Coord| (c.block, c.compact_side, c.index);
    let mut sums = [(); 6].map(|_| vec![0i64; n]);
    let [u, u_p, u_k, l, l_c, l_n] = &mut sums;
    for a in 0..n {
        for b in 0..n {
            let (ca, cb) = (coords[a], coords[b]);
            if key(&ca) >= key(&cb) {
                continue;
            }
            let compact = ca.compact_side == cb.compact_side;
            let targets: [&mut Vec<i64>; 2] = if ca.block < cb.block {
                if compact {
                    [&mut *u, &mut *u_k]
                } else {
                    [&mut *u, &mut *u_p]
                }
            } else if compact {
                [&mut *l, &mut *l_c]
            } else {
                [&mut *l, &mut *l_n]
            };
            for t in targets {
                t[a] += 1;
                t[b] -= 1;
            }
        }
    }
    let to_weight = |doubled: &Vec<i64>| {
        BiWeight::from_parts(p, doubled.iter().copied().map(HalfRat::from_halves).collect())
            .expect("p never exceeds rank")
    };
    Ok(HalfSums {
        rho_u: to_weight(u),
        rho_u_cap_p: to_weight(u_p),
        rho_u_cap_k: to_weight(u_k),
        rho_l: to_weight(l),
        rho_c_l: to_weight(l_c),
        rho_n_l: to_weight(l_n),
    })
}

/// `ρ` of `u(p,q)` placed on block-ordered coordinates: block 1 takes the
/// top `p_1` values on its p-side, the next `q_1` on its q-side, and so on.
pub fn rho_by_blocks(blocks: &[(usize, usize)]) -> Result<BiWeight> {
    let p: usize = blocks.iter().map(|b| b.0).sum();
    let q: usize = blocks.iter().map(|b| b.1).sum();
    let mut values = rho_g(p, q)?.into_iter();
    let mut p_part = Vec::with_capacity(p);
    let mut q_part = Vec::with_capacity(q);
    for &(bp, bq) in blocks {
        p_part.extend(values.by_ref().take(bp));
        q_part.extend(values.by_ref().take(bq));
    }
    Ok(BiWeight::new(p_part, q_part))
}
