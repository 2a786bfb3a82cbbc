//! Spin module, spin norm and u-small K-types for `U(p,q)`.
//!
//! The coset `W(g,t)^1` is realised as the `(p,q)`-shuffles of the
//! descending `ρ`: shuffle `j` puts the values at its positions into the
//! p-block. Weights are projected to the sum-zero hyperplane before the
//! u-small test because the polytope spanned by `{2wρ_n}` lives there.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_rational::{Ratio, Rational64};
use serde::{Deserialize, Serialize};

use crate::chains::AqChain;
use crate::error::{Error, Result};
use crate::weights::{enumerate_shuffles, rho_c, rho_g, BiWeight, HalfRat, Shuffle};

/// Highest weights `ρ_n^{(j)}` of the spin module, one per coset element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinDecomposition {
    pub weights: Vec<BiWeight>,
}

impl SpinDecomposition {
    pub fn dimensions(&self) -> Vec<u128> {
        self.weights
            .iter()
            .map(|w| ktype_dimension(w).expect("spin weights are dominant"))
            .collect()
    }

    pub fn total_dimension(&self) -> u128 {
        self.dimensions().into_iter().sum()
    }
}

fn check_rank(p: usize, q: usize) -> Result<()> {
    if p + q == 0 {
        Err(Error::InvalidDimension { p, q })
    } else {
        Ok(())
    }
}

fn shuffled(values: &[HalfRat], shuffle: &Shuffle) -> BiWeight {
    let (p, q) = shuffle.split(values);
    BiWeight::new(p, q)
}

/// `ρ^{(j)}` for every `(p,q)`-shuffle; index 0 is `ρ` itself.
pub fn w_g_t_one(p: usize, q: usize) -> Result<Vec<BiWeight>> {
    let rho = rho_g(p, q)?;
    Ok(enumerate_shuffles(p + q, p)
        .map(|s| shuffled(&rho, &s))
        .collect())
}

/// `ρ_n^{(j)} = ρ^{(j)} - ρ_c`.
pub fn spin_module(p: usize, q: usize) -> Result<SpinDecomposition> {
    let rc = rho_c(p, q);
    let weights = w_g_t_one(p, q)?.iter().map(|r| r - &rc).collect();
    Ok(SpinDecomposition { weights })
}

fn require_dominant(mu: &BiWeight) -> Result<()> {
    if mu.is_dominant() {
        Ok(())
    } else {
        Err(Error::NotDominant(mu.clone()))
    }
}

/// Weyl dimension formula on each block:
/// `∏_{i<j} (μ_i - μ_j + j - i) / (j - i)`.
pub fn ktype_dimension(mu: &BiWeight) -> Result<u128> {
    require_dominant(mu)?;
    let mut dim = Ratio::<i128>::from_integer(1);
    for block in [mu.p_block(), mu.q_block()] {
        for i in 0..block.len() {
            for j in i + 1..block.len() {
                let gap = (j - i) as i128;
                let num = (block[i].halves() - block[j].halves()) as i128 + 2 * gap;
                dim *= Ratio::new(num, 2 * gap);
            }
        }
    }
    if !dim.is_integer() {
        return Err(Error::invalid(format!(
            "weight {mu} has non-integral differences within a block"
        )));
    }
    Ok(dim.to_integer() as u128)
}

/// `min_j ‖{μ - ρ_n^{(j)}} + ρ_c‖²`, exact.
pub fn spin_norm_sq(mu: &BiWeight) -> Result<Rational64> {
    require_dominant(mu)?;
    let (p, q) = (mu.p_len(), mu.q_len());
    let rc = rho_c(p, q);
    let spin = spin_module(p, q)?;
    let norm = spin
        .weights
        .iter()
        .map(|rn| (&(mu - rn).dominant_conjugate() + &rc).norm_sq())
        .min()
        .expect("at least one shuffle");
    Ok(norm)
}

/// Coordinates of `ρ^{(j)}` ordered by decreasing value; the first `i` of
/// them support `w^{(j)} ξ_i` (up to the central correction).
fn descending_positions(rho_j: &BiWeight) -> Vec<usize> {
    let mut order: Vec<usize> = (0..rho_j.len()).collect();
    order.sort_by(|&a, &b| rho_j.entries()[b].cmp(&rho_j.entries()[a]));
    order
}

/// `δ` is u-small iff `⟨δ₀ - 2ρ_n^{(j)}, w^{(j)} ξ_i⟩ ≤ 0` for every coset
/// element `j` and fundamental weight `ξ_i`, with `δ₀` the projection of
/// `δ` to the sum-zero hyperplane.
pub fn is_u_small(delta: &BiWeight) -> Result<bool> {
    require_dominant(delta)?;
    let (p, q) = (delta.p_len(), delta.q_len());
    check_rank(p, q)?;
    let n = (p + q) as i64;
    let total: i64 = delta.entries().iter().map(|x| x.halves()).sum();
    let rc = rho_c(p, q);
    for rho_j in w_g_t_one(p, q)? {
        let rho_n_j = &rho_j - &rc;
        // n · (δ₀ - 2ρ_n^{(j)}) in half units; both terms sum to zero, so the
        // central part of ξ_i pairs to zero.
        let scaled: Vec<i64> = delta
            .entries()
            .iter()
            .zip(rho_n_j.entries())
            .map(|(d, r)| n * d.halves() - total - 2 * n * r.halves())
            .collect();
        let mut partial = 0;
        for &pos in descending_positions(&rho_j).iter().take(p + q - 1) {
            partial += scaled[pos];
            if partial > 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Coefficients of a descending weight in the fundamental-weight basis:
/// `λ_i = Λ_i - Λ_{i+1}`.
pub fn fundamental_coordinates(lambda: &[HalfRat]) -> Vec<HalfRat> {
    lambda.windows(2).map(|w| w[0] - w[1]).collect()
}

/// Every W(k)-conjugate of `x`: distinct permutations within each block.
fn compact_orbit(x: &BiWeight) -> BTreeSet<BiWeight> {
    let perms = |block: &[HalfRat]| -> BTreeSet<Vec<HalfRat>> {
        block.iter().copied().permutations(block.len()).collect()
    };
    let qs = perms(x.q_block());
    perms(x.p_block())
        .into_iter()
        .flat_map(|p| qs.iter().map(move |q| BiWeight::new(p.clone(), q.clone())))
        .collect()
}

/// All dominant `δ` with `{δ - ρ_n^{(j)}} + ρ_c = wΛ` for some coset
/// elements `j` and `w`, where `Λ` is the infinitesimal character of
/// `chain`. Such a pair only contributes when `wΛ - ρ_c` is itself
/// dominant; then `δ` runs over `ρ_n^{(j)} + w₁(wΛ - ρ_c)`, `w₁ ∈ W(k,t)`.
///
/// Each returned witness has been checked to be u-small; a failure is
/// reported as [`Error::NotUSmall`]. Requires every fundamental coordinate
/// of `Λ` to lie in `[0, 1]`.
pub fn u_small_lemma_witnesses(chain: &AqChain) -> Result<Vec<BiWeight>> {
    let lambda = chain.infinitesimal_character();
    let in_box = fundamental_coordinates(&lambda)
        .iter()
        .all(|c| (0..=2).contains(&c.halves()));
    if !in_box {
        return Err(Error::OutsideFundamentalBox);
    }
    let (p, q) = (chain.p(), chain.q());
    let rc = rho_c(p, q);
    let spin = spin_module(p, q)?;
    let mut witnesses = BTreeSet::new();
    for w in enumerate_shuffles(p + q, p) {
        let moved = &shuffled(&lambda, &w) - &rc;
        if !moved.is_dominant() {
            continue;
        }
        for conjugate in compact_orbit(&moved) {
            for rho_n_j in &spin.weights {
                let delta = rho_n_j + &conjugate;
                if delta.is_dominant() {
                    witnesses.insert(delta);
                }
            }
        }
    }
    for delta in &witnesses {
        if !is_u_small(delta)? {
            return Err(Error::NotUSmall(delta.clone()));
        }
    }
    Ok(witnesses.into_iter().collect())
}
