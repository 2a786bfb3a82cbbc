//! Dirac index of weakly fair chains.
//!
//! Two routes produce the same [`VirtualKSum`]:
//!
//! * [`brute_force_index`] runs over every tuple of per-block shuffles of the
//!   chain values, regularises each resulting weight with [`e_tilde`] and
//!   adds the signed K̃-types.
//! * [`structured_index`] solves the feasibility system for the repeated
//!   entries ([`solve_system`]), fills only the regular arrangements and
//!   weights each by `∏ C(a_ij + b_ij, a_ij)`.
//!
//! Signs are determinants relative to the identity shuffle of each block
//! (top `p_i` values on the p-side), so the index is fixed up to one global
//! sign.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chains::AqChain;
use crate::error::{Error, Result};
use crate::weights::{
    binomial, enumerate_shuffles, rho_c, shuffle_sign, sort_blocks_signed, BiWeight, BlockSort,
    HalfRat, Shuffle, Sign,
};

/// A finite integer combination of K̃-types, keyed by dominant highest
/// weight `γ`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VirtualKSum {
    terms: BTreeMap<BiWeight, i64>,
}

impl VirtualKSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, gamma: BiWeight, coefficient: i64) {
        if coefficient == 0 {
            return;
        }
        let entry = self.terms.entry(gamma);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn get(&self, gamma: &BiWeight) -> i64 {
        self.terms.get(gamma).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographically descending order of weight.
    pub fn iter(&self) -> impl Iterator<Item = (&BiWeight, i64)> {
        self.terms.iter().rev().map(|(k, &v)| (k, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &BiWeight> {
        self.terms.keys().rev()
    }
}

impl FromIterator<(BiWeight, i64)> for VirtualKSum {
    fn from_iter<I: IntoIterator<Item = (BiWeight, i64)>>(iter: I) -> Self {
        let mut sum = VirtualKSum::new();
        for (k, v) in iter {
            sum.add(k, v);
        }
        sum
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    weight: BiWeight,
    coefficient: i64,
}

impl Serialize for VirtualKSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|(weight, coefficient)| TermRepr {
            weight: weight.clone(),
            coefficient,
        }))
    }
}

impl<'de> Deserialize<'de> for VirtualKSum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(deserializer)?;
        Ok(terms
            .into_iter()
            .map(|t| (t.weight, t.coefficient))
            .collect())
    }
}

/// Regularisation of a weight for the compact roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ETilde {
    Zero,
    Term { sign: Sign, gamma: BiWeight },
}

/// `0` when `nu` is singular for the compact roots, otherwise
/// `det(w) E_{w nu - ρ_c}` with `w nu` the block-sorted weight.
pub fn e_tilde(nu: &BiWeight) -> ETilde {
    match sort_blocks_signed(nu) {
        BlockSort::Singular => ETilde::Zero,
        BlockSort::Regular { sorted, sign } => {
            let gamma = &sorted - &rho_c(nu.p_len(), nu.q_len());
            ETilde::Term { sign, gamma }
        }
    }
}

/// Counters from a brute-force run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BruteForceStats {
    pub tuples_visited: u64,
    pub regular_terms: u64,
}

/// Calls `visit` on every index tuple of the box `∏ [0, lens[i])`, last
/// coordinate fastest.
fn for_each_tuple(lens: &[usize], mut visit: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if lens.contains(&0) {
        return Ok(());
    }
    let mut idx = vec![0; lens.len()];
    loop {
        visit(&idx)?;
        let mut pos = lens.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lens[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Assembles `(p-parts | q-parts) - τ` and its sign from per-block splits.
fn assemble(
    parts: impl Iterator<Item = (Vec<i64>, Vec<i64>)>,
    tau: HalfRat,
) -> Result<(Sign, BiWeight)> {
    let mut sign = Sign::Plus;
    let mut p_all = Vec::new();
    let mut q_all = Vec::new();
    for (p_part, q_part) in parts {
        sign = sign * shuffle_sign(&p_part, &q_part)?;
        p_all.extend(p_part.into_iter().map(|v| HalfRat::from_int(v) - tau));
        q_all.extend(q_part.into_iter().map(|v| HalfRat::from_int(v) - tau));
    }
    Ok((sign, BiWeight::new(p_all, q_all)))
}

fn require_weakly_fair(chain: &AqChain) -> Result<()> {
    if chain.classify_range().weakly_fair {
        Ok(())
    } else {
        Err(Error::NotWeaklyFair)
    }
}

pub fn brute_force_index(chain: &AqChain) -> Result<VirtualKSum> {
    brute_force_with_stats(chain).map(|(sum, _)| sum)
}

/// Sums `(∏_i det w_i) · Ẽ_ν` over all tuples of per-block shuffles.
///
/// Fails with [`Error::SignConflict`] if two nonzero contributions to the
/// same K̃-type carry opposite signs.
pub fn brute_force_with_stats(chain: &AqChain) -> Result<(VirtualKSum, BruteForceStats)> {
    require_weakly_fair(chain)?;
    let tau = HalfRat::from_halves(chain.rank() as i64 + 1);
    let block_values: Vec<Vec<i64>> = chain.blocks().iter().map(|b| b.values().collect()).collect();
    let shuffles: Vec<Vec<Shuffle>> = chain
        .blocks()
        .iter()
        .map(|b| enumerate_shuffles(b.len(), b.p()).collect())
        .collect();
    let lens: Vec<usize> = shuffles.iter().map(Vec::len).collect();

    let mut signs: BTreeMap<BiWeight, Sign> = BTreeMap::new();
    let mut sum = VirtualKSum::new();
    let mut stats = BruteForceStats::default();
    for_each_tuple(&lens, |idx| {
        stats.tuples_visited += 1;
        let parts = idx
            .iter()
            .enumerate()
            .map(|(block, &k)| shuffles[block][k].split(&block_values[block]));
        let (det, nu) = assemble(parts, tau)?;
        if let ETilde::Term { sign, gamma } = e_tilde(&nu) {
            let total = det * sign;
            match signs.get(&gamma) {
                Some(&seen) if seen != total => return Err(Error::SignConflict(gamma)),
                Some(_) => {}
                None => {
                    signs.insert(gamma.clone(), total);
                }
            }
            stats.regular_terms += 1;
            sum.add(gamma, total.as_i64());
        }
        Ok(())
    })?;
    Ok((sum, stats))
}

/// One solution `{(a_ij, b_ij)}` of the feasibility system, keyed by the
/// 0-based block pair `(i, j)`, `i < j`, with `R_ij` nonempty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SolutionMatrix {
    entries: BTreeMap<(usize, usize), (usize, usize)>,
}

impl SolutionMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        self.entries.get(&(i, j)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), (usize, usize))> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(a, b)` pairs flattened in pair order, e.g. `[a12, b12, a23, b23]`.
    pub fn flat(&self) -> Vec<usize> {
        self.entries.values().flat_map(|&(a, b)| [a, b]).collect()
    }
}

/// JSON form uses 1-based block indices.
#[derive(Serialize, Deserialize)]
struct SolutionEntryRepr {
    i: usize,
    j: usize,
    a: usize,
    b: usize,
}

impl Serialize for SolutionMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|((i, j), (a, b))| SolutionEntryRepr {
            i: i + 1,
            j: j + 1,
            a,
            b,
        }))
    }
}

impl<'de> Deserialize<'de> for SolutionMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<SolutionEntryRepr>::deserialize(deserializer)?;
        let mut out = SolutionMatrix::default();
        for e in entries {
            if e.i == 0 || e.j <= e.i {
                return Err(serde::de::Error::custom("solution indices must satisfy 1 <= i < j"));
            }
            out.entries.insert((e.i - 1, e.j - 1), (e.a, e.b));
        }
        Ok(out)
    }
}

/// All nonnegative integer solutions of
///
/// ```text
/// a_ij + b_ij = #R_ij
/// a_ij <= min(p_i, q_j),  b_ij <= min(p_j, q_i)
/// Σ_{j>i} a_ij + Σ_{l<i} b_li <= p_i
/// Σ_{l<i} a_li + Σ_{j>i} b_ij <= q_i
/// ```
///
/// by depth-first enumeration over the nonempty pairs, `a_ij` descending.
pub fn solve_system(chain: &AqChain) -> Result<Vec<SolutionMatrix>> {
    let overlaps = chain.repeated_intersections()?;
    let pairs: Vec<((usize, usize), usize)> =
        overlaps.iter().map(|(&k, r)| (k, r.len())).collect();
    let blocks = chain.block_sizes();
    let mut used_p = vec![0usize; blocks.len()];
    let mut used_q = vec![0usize; blocks.len()];
    let mut current = Vec::with_capacity(pairs.len());
    let mut out = Vec::new();
    solve_rec(&pairs, &blocks, &mut used_p, &mut used_q, &mut current, &mut out);
    Ok(out)
}

fn solve_rec(
    pairs: &[((usize, usize), usize)],
    blocks: &[(usize, usize)],
    used_p: &mut [usize],
    used_q: &mut [usize],
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<SolutionMatrix>,
) {
    let Some(&((i, j), size)) = pairs.get(current.len()) else {
        let entries = pairs.iter().map(|&(k, _)| k).zip(current.iter().copied()).collect();
        out.push(SolutionMatrix { entries });
        return;
    };
    let (p_i, q_i) = blocks[i];
    let (p_j, q_j) = blocks[j];
    for a in (0..=size).rev() {
        let b = size - a;
        let fits = a <= p_i.min(q_j)
            && b <= p_j.min(q_i)
            && used_p[i] + a <= p_i
            && used_q[j] + a <= q_j
            && used_p[j] + b <= p_j
            && used_q[i] + b <= q_i;
        if !fits {
            continue;
        }
        used_p[i] += a;
        used_q[j] += a;
        used_p[j] += b;
        used_q[i] += b;
        current.push((a, b));
        solve_rec(pairs, blocks, used_p, used_q, current, out);
        current.pop();
        used_p[i] -= a;
        used_q[j] -= a;
        used_p[j] -= b;
        used_q[i] -= b;
    }
}

/// Dirac index from the feasibility solutions.
///
/// For each solution the repeated entries are placed with the canonical
/// subset `S_ij` (the `a_ij` largest elements of `R_ij`) on the p-side of
/// block `i` and q-side of block `j`, and `R_ij \ S_ij` the other way
/// round. Every way of distributing the remaining entries of each block
/// over its free p-slots yields one K̃-type, counted with multiplicity
/// `∏ C(#R_ij, a_ij)`.
pub fn structured_index(chain: &AqChain) -> Result<VirtualKSum> {
    require_weakly_fair(chain)?;
    let overlaps = chain.repeated_intersections()?;
    let solutions = solve_system(chain)?;
    let tau = HalfRat::from_halves(chain.rank() as i64 + 1);
    let blocks = chain.blocks();
    let unrepeated: Vec<Vec<i64>> = blocks
        .iter()
        .map(|b| {
            b.values()
                .filter(|&v| !overlaps.values().any(|r| r.bottom <= v && v <= r.top))
                .collect()
        })
        .collect();

    let mut sum = VirtualKSum::new();
    for solution in &solutions {
        let mut preset_p: Vec<Vec<i64>> = vec![Vec::new(); blocks.len()];
        let mut preset_q: Vec<Vec<i64>> = vec![Vec::new(); blocks.len()];
        let mut multiplicity = 1i64;
        for ((i, j), (a, _b)) in solution.iter() {
            let range: Vec<i64> = overlaps[&(i, j)].values().collect();
            let (chosen, rest) = range.split_at(a);
            preset_p[i].extend_from_slice(chosen);
            preset_q[j].extend_from_slice(chosen);
            preset_p[j].extend_from_slice(rest);
            preset_q[i].extend_from_slice(rest);
            multiplicity *= binomial(range.len(), a) as i64;
        }
        let fills: Vec<Vec<Vec<usize>>> = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let free = b.p().checked_sub(preset_p[i].len());
                free.map(|f| (0..unrepeated[i].len()).combinations(f).collect())
                    .unwrap_or_default()
            })
            .collect();
        let lens: Vec<usize> = fills.iter().map(Vec::len).collect();
        for_each_tuple(&lens, |idx| {
            let parts = idx.iter().enumerate().map(|(i, &k)| {
                let picked = &fills[i][k];
                let mut p_part = preset_p[i].clone();
                let mut q_part = preset_q[i].clone();
                for (slot, &v) in unrepeated[i].iter().enumerate() {
                    if picked.contains(&slot) {
                        p_part.push(v);
                    } else {
                        q_part.push(v);
                    }
                }
                p_part.sort_unstable_by(|x, y| y.cmp(x));
                q_part.sort_unstable_by(|x, y| y.cmp(x));
                (p_part, q_part)
            });
            let (det, nu) = assemble(parts, tau)?;
            match e_tilde(&nu) {
                ETilde::Term { sign, gamma } => {
                    sum.add(gamma, (det * sign).as_i64() * multiplicity);
                }
                ETilde::Zero => {
                    debug_assert!(false, "feasible arrangement {nu} is singular");
                }
            }
            Ok(())
        })?;
    }
    Ok(sum)
}

/// Whether the index of a weakly fair chain is nonzero: the repeated-entry
/// condition holds and the feasibility system has a solution.
pub fn nonvanishing(chain: &AqChain) -> Result<bool> {
    require_weakly_fair(chain)?;
    if !chain.hp_condition().ok {
        return Ok(false);
    }
    Ok(!solve_system(chain)?.is_empty())
}
