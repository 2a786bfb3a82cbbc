//! Exact weight arithmetic for `u(p) ⊕ u(q)`.
//!
//! Every coordinate is a [`HalfRat`], a rational with denominator 1 or 2,
//! stored as twice its value. A [`BiWeight`] is a coordinate vector split
//! into a p-block followed by a q-block.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use itertools::Itertools;
use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A half-integer, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfRat(i64);

impl HalfRat {
    pub const ZERO: HalfRat = HalfRat(0);

    pub const fn from_int(n: i64) -> Self {
        HalfRat(2 * n)
    }

    /// The value `halves / 2`.
    pub const fn from_halves(halves: i64) -> Self {
        HalfRat(halves)
    }

    pub const fn halves(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_rational(self) -> Rational64 {
        Rational64::new(self.0, 2)
    }
}

impl fmt::Display for HalfRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for HalfRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfRat {
    type Err = Error;

    /// Accepts `n` or `n/d` where the reduced denominator divides 2.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("not a half-integer: {s:?}"));
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfRat::from_int).map_err(|_| bad()),
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| bad())?;
                let den: i64 = den.trim().parse().map_err(|_| bad())?;
                if den == 0 || (2 * num) % den != 0 {
                    return Err(bad());
                }
                Ok(HalfRat(2 * num / den))
            }
        }
    }
}

impl Serialize for HalfRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for HalfRat {
    type Output = HalfRat;
    fn add(self, rhs: HalfRat) -> HalfRat {
        HalfRat(self.0 + rhs.0)
    }
}

impl AddAssign for HalfRat {
    fn add_assign(&mut self, rhs: HalfRat) {
        self.0 += rhs.0;
    }
}

impl Sub for HalfRat {
    type Output = HalfRat;
    fn sub(self, rhs: HalfRat) -> HalfRat {
        HalfRat(self.0 - rhs.0)
    }
}

impl Neg for HalfRat {
    type Output = HalfRat;
    fn neg(self) -> HalfRat {
        HalfRat(-self.0)
    }
}

impl Mul<i64> for HalfRat {
    type Output = HalfRat;
    fn mul(self, rhs: i64) -> HalfRat {
        HalfRat(self.0 * rhs)
    }
}

impl From<i64> for HalfRat {
    fn from(n: i64) -> Self {
        HalfRat::from_int(n)
    }
}

/// A determinant `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(count: usize) -> Self {
        if count.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A weight of the compact Cartan, split as `(p-block | q-block)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiWeight {
    p_len: usize,
    entries: Vec<HalfRat>,
}

impl BiWeight {
    pub fn new(p_block: Vec<HalfRat>, q_block: Vec<HalfRat>) -> Self {
        let p_len = p_block.len();
        let mut entries = p_block;
        entries.extend(q_block);
        BiWeight { p_len, entries }
    }

    pub fn from_ints(p_block: &[i64], q_block: &[i64]) -> Self {
        BiWeight::new(
            p_block.iter().copied().map(HalfRat::from_int).collect(),
            q_block.iter().copied().map(HalfRat::from_int).collect(),
        )
    }

    pub fn from_parts(p_len: usize, entries: Vec<HalfRat>) -> Result<Self> {
        if p_len > entries.len() {
            return Err(Error::invalid(format!(
                "p-block length {p_len} exceeds {} coordinates",
                entries.len()
            )));
        }
        Ok(BiWeight { p_len, entries })
    }

    pub fn zero(p: usize, q: usize) -> Self {
        BiWeight {
            p_len: p,
            entries: vec![HalfRat::ZERO; p + q],
        }
    }

    pub fn p_len(&self) -> usize {
        self.p_len
    }

    pub fn q_len(&self) -> usize {
        self.entries.len() - self.p_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[HalfRat] {
        &self.entries
    }

    pub fn p_block(&self) -> &[HalfRat] {
        &self.entries[..self.p_len]
    }

    pub fn q_block(&self) -> &[HalfRat] {
        &self.entries[self.p_len..]
    }

    pub fn same_shape(&self, other: &BiWeight) -> bool {
        self.p_len == other.p_len && self.entries.len() == other.entries.len()
    }

    /// Each block weakly descending.
    pub fn is_dominant(&self) -> bool {
        is_weakly_descending(self.p_block()) && is_weakly_descending(self.q_block())
    }

    /// Exact squared Euclidean norm.
    pub fn norm_sq(&self) -> Rational64 {
        let quarters: i64 = self.entries.iter().map(|x| x.halves() * x.halves()).sum();
        Rational64::new(quarters, 4)
    }

    /// Sorts each block weakly descending (the dominant conjugate under the
    /// compact Weyl group).
    pub fn dominant_conjugate(&self) -> BiWeight {
        let mut p = self.p_block().to_vec();
        let mut q = self.q_block().to_vec();
        p.sort_unstable_by(|a, b| b.cmp(a));
        q.sort_unstable_by(|a, b| b.cmp(a));
        BiWeight::new(p, q)
    }

    pub fn scale(&self, k: i64) -> BiWeight {
        BiWeight {
            p_len: self.p_len,
            entries: self.entries.iter().map(|&x| x * k).collect(),
        }
    }

    fn zip_with(&self, rhs: &BiWeight, f: impl Fn(HalfRat, HalfRat) -> HalfRat) -> BiWeight {
        assert!(
            self.same_shape(rhs),
            "weight shapes differ: {self} vs {rhs}"
        );
        BiWeight {
            p_len: self.p_len,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Add<&BiWeight> for &BiWeight {
    type Output = BiWeight;
    fn add(self, rhs: &BiWeight) -> BiWeight {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub<&BiWeight> for &BiWeight {
    type Output = BiWeight;
    fn sub(self, rhs: &BiWeight) -> BiWeight {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl fmt::Display for BiWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}|{})",
            self.p_block().iter().join(","),
            self.q_block().iter().join(",")
        )
    }
}

impl fmt::Debug for BiWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BiWeight {
    type Err = Error;

    /// Parses `a,b|c,d`; surrounding parentheses are optional and either
    /// block may be empty.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(trimmed);
        let (p, q) = inner
            .split_once('|')
            .ok_or_else(|| Error::invalid(format!("weight {s:?} lacks a '|' separator")))?;
        let block = |text: &str| -> Result<Vec<HalfRat>> {
            if text.trim().is_empty() {
                return Ok(Vec::new());
            }
            text.split(',').map(str::parse).collect()
        };
        Ok(BiWeight::new(block(p)?, block(q)?))
    }
}

#[derive(Serialize, Deserialize)]
struct BiWeightRepr {
    p: Vec<HalfRat>,
    q: Vec<HalfRat>,
}

impl Serialize for BiWeight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BiWeightRepr {
            p: self.p_block().to_vec(),
            q: self.q_block().to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BiWeight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BiWeightRepr::deserialize(deserializer)?;
        Ok(BiWeight::new(repr.p, repr.q))
    }
}

fn is_weakly_descending<T: Ord>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] >= w[1])
}

pub(crate) fn is_strictly_descending<T: Ord>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] > w[1])
}

/// Number of pairs `i < j` with `xs[i] < xs[j]`, i.e. the inversion count of
/// the permutation that sorts `xs` descending.
pub(crate) fn ascents<T: Ord>(xs: &[T]) -> usize {
    xs.iter()
        .enumerate()
        .map(|(i, a)| xs[i + 1..].iter().filter(|b| a < *b).count())
        .sum()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// `((p+q+1)/2, …, (p+q+1)/2)` split as `(p | q)`.
pub fn tau(p: usize, q: usize) -> Result<BiWeight> {
    let n = p + q;
    if n == 0 {
        return Err(Error::InvalidDimension { p, q });
    }
    let v = HalfRat::from_halves(n as i64 + 1);
    Ok(BiWeight::new(vec![v; p], vec![v; q]))
}

fn centered_run(len: usize) -> Vec<HalfRat> {
    let top = len as i64 - 1;
    (0..len as i64)
        .map(|k| HalfRat::from_halves(top - 2 * k))
        .collect()
}

/// Half sum of the compact positive roots `e_i - e_j`, `i < j` within a block.
pub fn rho_c(p: usize, q: usize) -> BiWeight {
    BiWeight::new(centered_run(p), centered_run(q))
}

/// `ρ` of `u(p,q)` as one descending sequence `((n-1)/2, …, -(n-1)/2)`.
pub fn rho_g(p: usize, q: usize) -> Result<Vec<HalfRat>> {
    if p + q == 0 {
        return Err(Error::InvalidDimension { p, q });
    }
    Ok(centered_run(p + q))
}

/// Outcome of sorting each block of a weight strictly descending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockSort {
    Regular { sorted: BiWeight, sign: Sign },
    Singular,
}

/// Sorts each block descending and reports the parity of the combined
/// sorting permutation, or `Singular` when a block repeats a value.
pub fn sort_blocks_signed(w: &BiWeight) -> BlockSort {
    let mut inversions = 0;
    let mut sorted_blocks = Vec::with_capacity(2);
    for block in [w.p_block(), w.q_block()] {
        let mut sorted = block.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        if sorted.windows(2).any(|pair| pair[0] == pair[1]) {
            return BlockSort::Singular;
        }
        inversions += ascents(block);
        sorted_blocks.push(sorted);
    }
    let q = sorted_blocks.pop().unwrap_or_default();
    let p = sorted_blocks.pop().unwrap_or_default();
    BlockSort::Regular {
        sorted: BiWeight::new(p, q),
        sign: Sign::from_parity(inversions),
    }
}

/// A choice of which of `n` descending slots go to the p-part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shuffle {
    n: usize,
    positions: Vec<usize>,
}

impl Shuffle {
    pub fn new(n: usize, positions: Vec<usize>) -> Result<Self> {
        if !positions.windows(2).all(|w| w[0] < w[1]) || positions.last().is_some_and(|&x| x >= n)
        {
            return Err(Error::invalid(format!(
                "shuffle positions {positions:?} must be strictly increasing below {n}"
            )));
        }
        Ok(Shuffle { n, positions })
    }

    pub fn identity(n: usize, p_count: usize) -> Self {
        Shuffle {
            n,
            positions: (0..p_count).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn p_count(&self) -> usize {
        self.positions.len()
    }

    pub fn is_identity(&self) -> bool {
        self.positions.iter().enumerate().all(|(k, &pos)| k == pos)
    }

    /// Parity of the shuffle: each p-slot is crossed by the q-slots above it.
    pub fn sign(&self) -> Sign {
        let crossings: usize = self
            .positions
            .iter()
            .enumerate()
            .map(|(k, &pos)| pos - k)
            .sum();
        Sign::from_parity(crossings)
    }

    /// Splits `values` (length `n`) into its p-part and q-part, both in the
    /// original order.
    pub fn split<T: Clone>(&self, values: &[T]) -> (Vec<T>, Vec<T>) {
        assert_eq!(values.len(), self.n, "shuffle applied to wrong length");
        let mut p = Vec::with_capacity(self.positions.len());
        let mut q = Vec::with_capacity(self.n - self.positions.len());
        let mut next = self.positions.iter().peekable();
        for (i, v) in values.iter().enumerate() {
            if next.peek() == Some(&&i) {
                next.next();
                p.push(v.clone());
            } else {
                q.push(v.clone());
            }
        }
        (p, q)
    }
}

/// All `C(n, p_count)` shuffles, lexicographic on positions.
pub fn enumerate_shuffles(n: usize, p_count: usize) -> impl Iterator<Item = Shuffle> {
    let combos = (p_count <= n).then(|| (0..n).combinations(p_count));
    combos
        .into_iter()
        .flatten()
        .map(move |positions| Shuffle { n, positions })
}

/// `(-1)^c` with `c` the number of pairs `(x, y)`, `x` in `p_part`, `y` in
/// `q_part`, `y > x`.
pub fn shuffle_sign<T: Ord>(p_part: &[T], q_part: &[T]) -> Result<Sign> {
    if !is_strictly_descending(p_part) || !is_strictly_descending(q_part) {
        return Err(Error::invalid("shuffle parts must be strictly descending"));
    }
    let mut crossings = 0;
    for x in p_part {
        for y in q_part {
            match y.cmp(x) {
                Ordering::Greater => crossings += 1,
                Ordering::Equal => {
                    return Err(Error::invalid("shuffle parts share a value"));
                }
                Ordering::Less => {}
            }
        }
    }
    Ok(Sign::from_parity(crossings))
}

pub fn multiset_equal<T: Ord + Clone>(a: &[T], b: &[T]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HalfRat {
        s.parse().unwrap()
    }

    fn w(s: &str) -> BiWeight {
        s.parse().unwrap()
    }

    /// Half sum of `e_i - e_j` over `i < j` inside each block, by direct
    /// summation over the root list.
    fn rho_c_by_roots(p: usize, q: usize) -> BiWeight {
        let n = p + q;
        let mut doubled = vec![0i64; n];
        for a in 0..n {
            for b in a + 1..n {
                if (a < p) == (b < p) {
                    doubled[a] += 1;
                    doubled[b] -= 1;
                }
            }
        }
        BiWeight::from_parts(p, doubled.into_iter().map(HalfRat::from_halves).collect()).unwrap()
    }

    fn perm_parity_by_swaps(mut xs: Vec<i64>) -> Sign {
        // selection sort to descending, counting swaps
        let mut swaps = 0;
        for i in 0..xs.len() {
            let m = (i..xs.len()).max_by_key(|&k| xs[k]).unwrap();
            if m != i {
                xs.swap(i, m);
                swaps += 1;
            }
        }
        Sign::from_parity(swaps)
    }

    #[test]
    fn half_rat_text() {
        assert_eq!(h("7/2").halves(), 7);
        assert_eq!(h("-3/2").to_string(), "-3/2");
        assert_eq!(h("4/2").to_string(), "2");
        assert_eq!(h("-5"), HalfRat::from_int(-5));
        assert!("1/3".parse::<HalfRat>().is_err());
        assert!("x".parse::<HalfRat>().is_err());
        assert!("1/0".parse::<HalfRat>().is_err());
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(2, 4).unwrap(), w("7/2,7/2|7/2,7/2,7/2,7/2"));
        assert_eq!(tau(1, 0).unwrap(), w("1|"));
        let t = tau(5, 6).unwrap();
        assert!(t.entries().iter().all(|&x| x == HalfRat::from_int(6)));
        assert_eq!((t.p_len(), t.q_len()), (5, 6));
        assert_eq!(tau(0, 0), Err(Error::InvalidDimension { p: 0, q: 0 }));
    }

    #[test]
    fn rho_c_matches_root_sum() {
        assert_eq!(rho_c(2, 4), w("1/2,-1/2|3/2,1/2,-1/2,-3/2"));
        assert_eq!(rho_c(1, 1), w("0|0"));
        assert_eq!(rho_c(2, 2), w("1/2,-1/2|1/2,-1/2"));
        for p in 0..6 {
            for q in 0..6 {
                assert_eq!(rho_c(p, q), rho_c_by_roots(p, q), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn rho_g_values() {
        assert_eq!(rho_g(1, 1).unwrap(), vec![h("1/2"), h("-1/2")]);
        let expect: Vec<_> = ["5/2", "3/2", "1/2", "-1/2", "-3/2", "-5/2"]
            .iter()
            .map(|s| h(s))
            .collect();
        assert_eq!(rho_g(2, 4).unwrap(), expect);
        // ρ_1 = (4,3|2,1) of U(2,2) is ρ + τ
        let shifted: Vec<_> = rho_g(2, 2)
            .unwrap()
            .into_iter()
            .map(|x| x + HalfRat::from_halves(5))
            .collect();
        assert_eq!(shifted, [4, 3, 2, 1].map(HalfRat::from_int));
        assert!(rho_g(0, 0).is_err());
    }

    #[test]
    fn block_sort_examples() {
        assert_eq!(
            sort_blocks_signed(&BiWeight::from_ints(&[5, 2], &[4, 4, 3, 1])),
            BlockSort::Singular
        );
        let sorted = BiWeight::from_ints(&[4, 3], &[5, 4, 3, 2]);
        assert_eq!(
            sort_blocks_signed(&sorted),
            BlockSort::Regular {
                sorted: sorted.clone(),
                sign: Sign::Plus
            }
        );
        assert_eq!(
            sort_blocks_signed(&BiWeight::from_ints(&[4, 3], &[4, 5, 2, 3])),
            BlockSort::Regular {
                sorted,
                sign: Sign::Plus
            }
        );
        match sort_blocks_signed(&BiWeight::from_ints(&[2, 5], &[1])) {
            BlockSort::Regular { sign, .. } => assert_eq!(sign, Sign::Minus),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(enumerate_shuffles(2, 1).count(), 2);
        assert_eq!(enumerate_shuffles(6, 2).count(), 15);
        assert_eq!(enumerate_shuffles(4, 4).count(), 1);
        assert_eq!(enumerate_shuffles(0, 0).count(), 1);
        assert_eq!(enumerate_shuffles(3, 4).count(), 0);
        let first = enumerate_shuffles(5, 2).next().unwrap();
        assert!(first.is_identity());
    }

    #[test]
    fn shuffle_sign_examples() {
        assert_eq!(shuffle_sign(&[6, 5], &[4, 3, 2]).unwrap(), Sign::Plus);
        assert_eq!(shuffle_sign(&[4, 2], &[6, 5, 3]).unwrap(), Sign::Minus);
        assert_eq!(shuffle_sign(&[9, 8, 7], &[11, 10]).unwrap(), Sign::Plus);
        // oracle: parity of the concatenation relative to the descending merge
        assert_eq!(perm_parity_by_swaps(vec![4, 2, 6, 5, 3]), Sign::Minus);
        assert_eq!(perm_parity_by_swaps(vec![9, 8, 7, 11, 10]), Sign::Plus);
        assert!(shuffle_sign(&[2, 4], &[1]).is_err());
        assert!(shuffle_sign(&[4, 2], &[2]).is_err());
    }

    #[test]
    fn multiset_examples() {
        assert!(multiset_equal(&[1, 0], &[0, 1]));
        assert!(!multiset_equal(&[1, 1, 0], &[1, 0, 0]));
        assert!(!multiset_equal(&[1], &[1, 1]));
    }

    #[test]
    fn weight_text_round_trip() {
        let x = w("(1/2,-1/2|3,0)");
        assert_eq!(x.to_string(), "(1/2,-1/2|3,0)");
        assert_eq!(w("|1"), BiWeight::from_ints(&[], &[1]));
        assert_eq!(w("2|"), BiWeight::from_ints(&[2], &[]));
        assert!("1,2".parse::<BiWeight>().is_err());
    }

    #[test]
    fn norm_is_exact() {
        assert_eq!(w("1/2|-1/2").norm_sq(), Rational64::new(1, 2));
        assert_eq!(w("3|1,1").norm_sq(), Rational64::from_integer(11));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn distinct_desc(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
            proptest::collection::btree_set(-20i64..20, 0..=max_len)
                .prop_map(|s| s.into_iter().rev().collect())
        }

        proptest! {
            #[test]
            fn shuffle_count_is_binomial(n in 0usize..9, k in 0usize..9) {
                let all: Vec<_> = enumerate_shuffles(n, k).collect();
                prop_assert_eq!(all.len() as u64, binomial(n, k));
                let mut dedup = all.clone();
                dedup.dedup();
                prop_assert_eq!(dedup.len(), all.len());
                prop_assert!(all.windows(2).all(|p| p[0].positions() < p[1].positions()));
            }

            #[test]
            fn block_sort_idempotent(p in proptest::collection::vec(-6i64..6, 0..5),
                                     q in proptest::collection::vec(-6i64..6, 0..5)) {
                let x = BiWeight::from_ints(&p, &q);
                if let BlockSort::Regular { sorted, .. } = sort_blocks_signed(&x) {
                    prop_assert_eq!(
                        sort_blocks_signed(&sorted),
                        BlockSort::Regular { sorted: sorted.clone(), sign: Sign::Plus }
                    );
                }
            }

            #[test]
            fn block_sort_sign_matches_swap_count(p in distinct_desc(5), q in distinct_desc(5), seed in any::<u64>()) {
                use rand::{seq::SliceRandom, SeedableRng};
                let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
                let mut ps = p.clone();
                let mut qs = q.clone();
                ps.shuffle(&mut rng);
                qs.shuffle(&mut rng);
                let expect = perm_parity_by_swaps(ps.clone()) * perm_parity_by_swaps(qs.clone());
                match sort_blocks_signed(&BiWeight::from_ints(&ps, &qs)) {
                    BlockSort::Regular { sorted, sign } => {
                        prop_assert_eq!(sign, expect);
                        prop_assert_eq!(sorted, BiWeight::from_ints(&p, &q));
                    }
                    BlockSort::Singular => prop_assert!(false),
                }
            }

            #[test]
            fn shuffle_sign_antisymmetry(values in distinct_desc(8), mask in any::<u8>()) {
                let (p, q): (Vec<i64>, Vec<i64>) = values
                    .iter()
                    .enumerate()
                    .partition_map(|(i, &v)| {
                        if mask >> i & 1 == 1 { itertools::Either::Left(v) } else { itertools::Either::Right(v) }
                    });
                let forward = shuffle_sign(&p, &q).unwrap();
                let back = shuffle_sign(&q, &p).unwrap();
                prop_assert_eq!(forward * back, Sign::from_parity(p.len() * q.len()));
                // positional sign agrees with the value-based sign
                let positions: Vec<usize> = (0..values.len()).filter(|i| mask >> i & 1 == 1).collect();
                let s = Shuffle::new(values.len(), positions).unwrap();
                prop_assert_eq!(s.sign(), forward);
                let mut concat = p.clone();
                concat.extend(&q);
                prop_assert_eq!(perm_parity_by_swaps(concat), forward);
            }

            #[test]
            fn identity_shuffle_is_even(values in distinct_desc(8), k in 0usize..8) {
                let k = k.min(values.len());
                prop_assert_eq!(shuffle_sign(&values[..k], &values[k..]).unwrap(), Sign::Plus);
            }
        }
    }
}
