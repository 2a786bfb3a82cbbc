//! Random chains and the invariant checks run over them.

use std::fmt;

use rand::Rng;

use crate::chains::AqChain;
use crate::dirac::{brute_force_with_stats, nonvanishing, solve_system, structured_index, VirtualKSum};
use crate::error::Error;
use crate::weights::{binomial, multiset_equal, rho_c, rho_g, BiWeight, HalfRat};

/// `k ∈ [1, max_k]` blocks with `p_i + q_i ∈ [1, max_block]`.
pub fn random_block_sizes<R: Rng + ?Sized>(
    rng: &mut R,
    max_k: usize,
    max_block: usize,
) -> Vec<(usize, usize)> {
    let k = rng.gen_range(1..=max_k.max(1));
    (0..k)
        .map(|_| {
            let n = rng.gen_range(1..=max_block.max(1));
            let p = rng.gen_range(0..=n);
            (p, n - p)
        })
        .collect()
}

/// Random block sizes and `λ_i ∈ [-max_block, max_block]`, without any range
/// condition.
pub fn random_chain<R: Rng + ?Sized>(rng: &mut R, max_k: usize, max_block: usize) -> AqChain {
    let blocks = random_block_sizes(rng, max_k, max_block);
    let window = max_block.max(1) as i64;
    let lambda: Vec<i64> = blocks.iter().map(|_| rng.gen_range(-window..=window)).collect();
    AqChain::from_lambda(&blocks, &lambda).expect("blocks are nonempty")
}

/// Rejection-samples [`random_chain`] until it is weakly fair.
pub fn random_weakly_fair_chain<R: Rng + ?Sized>(
    rng: &mut R,
    max_k: usize,
    max_block: usize,
) -> AqChain {
    loop {
        let chain = random_chain(rng, max_k, max_block);
        if chain.classify_range().weakly_fair {
            return chain;
        }
    }
}

/// A weakly fair two-block chain with `{A_1..a_1} ⊆ {A_2..a_2}`,
/// `p_1 ≤ q_2` and `q_1 ≤ p_2`.
pub fn random_nested_chain<R: Rng + ?Sized>(rng: &mut R, max_outer: usize) -> AqChain {
    loop {
        let n2 = rng.gen_range(1..=max_outer.max(1));
        let p2 = rng.gen_range(0..=n2);
        let q2 = n2 - p2;
        let p1 = rng.gen_range(0..=q2);
        let q1 = rng.gen_range(0..=p2);
        let n1 = p1 + q1;
        if n1 == 0 {
            continue;
        }
        let top2: i64 = rng.gen_range(-3..=8);
        let bottom2 = top2 - n2 as i64 + 1;
        // inner run sits in the upper half of the outer run
        let lowest_bottom1 = bottom2.max(top2 - n2 as i64 + 1 + (n2 - n1) as i64 / 2);
        let highest_bottom1 = top2 - n1 as i64 + 1;
        if lowest_bottom1 > highest_bottom1 {
            continue;
        }
        let bottom1 = rng.gen_range(lowest_bottom1..=highest_bottom1);
        let top1 = bottom1 + n1 as i64 - 1;
        let text = format!("{top1}:{p1},{q1};{top2}:{p2},{q2}");
        let chain: AqChain = text.parse().expect("generated chain parses");
        if chain.classify_range().weakly_fair {
            return chain;
        }
    }
}

/// A failed invariant, with enough context to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub chain: AqChain,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chain {}: {}", self.chain, self.message)
    }
}

impl std::error::Error for Violation {}

/// Outcome of [`check_chain`] on a chain that passed every invariant.
#[derive(Clone, Debug)]
pub struct ChainCheck {
    pub hp_ok: bool,
    pub solvable: bool,
    pub index: VirtualKSum,
    pub tuples_visited: u64,
}

fn shuffle_count(chain: &AqChain) -> u64 {
    chain
        .blocks()
        .iter()
        .map(|b| binomial(b.len(), b.p()))
        .product()
}

/// Multiset of `γ + ρ_c` equals `Λ`, and so do the squared norms.
pub fn check_conservation(chain: &AqChain, index: &VirtualKSum) -> Result<(), String> {
    let lambda = chain.infinitesimal_character();
    let lambda_norm: num_rational::Rational64 = lambda
        .iter()
        .map(|x| num_rational::Rational64::new(x.halves() * x.halves(), 4))
        .sum();
    let rc = rho_c(chain.p(), chain.q());
    for gamma in index.keys() {
        let shifted = gamma + &rc;
        if !multiset_equal(shifted.entries(), &lambda) {
            return Err(format!("key {gamma}: γ+ρ_c is not conjugate to Λ"));
        }
        if shifted.norm_sq() != lambda_norm {
            return Err(format!("key {gamma}: ‖γ+ρ_c‖² ≠ ‖Λ‖²"));
        }
    }
    Ok(())
}

/// Runs every Dirac-index invariant on a weakly fair chain.
pub fn check_chain(chain: &AqChain) -> Result<ChainCheck, Violation> {
    let fail = |message: String| Violation {
        chain: chain.clone(),
        message,
    };
    let (index, stats) = match brute_force_with_stats(chain) {
        Ok(r) => r,
        Err(Error::SignConflict(w)) => {
            return Err(fail(format!("opposite signs accumulated on {w}")))
        }
        Err(e) => return Err(fail(e.to_string())),
    };
    let expected_tuples = shuffle_count(chain);
    if stats.tuples_visited != expected_tuples {
        return Err(fail(format!(
            "visited {} shuffle tuples, expected {expected_tuples}",
            stats.tuples_visited
        )));
    }
    let hp_ok = chain.hp_condition().ok;
    let solvable = if hp_ok {
        let structured = structured_index(chain).map_err(|e| fail(e.to_string()))?;
        if structured != index {
            return Err(fail("structured and brute-force indices differ".into()));
        }
        !solve_system(chain).map_err(|e| fail(e.to_string()))?.is_empty()
    } else {
        if !index.is_empty() {
            return Err(fail("repeated-entry condition fails but index is nonzero".into()));
        }
        false
    };
    if hp_ok && solvable == index.is_empty() {
        return Err(fail(format!(
            "solvable = {solvable} but index has {} terms",
            index.len()
        )));
    }
    let predicted = nonvanishing(chain).map_err(|e| fail(e.to_string()))?;
    if predicted == index.is_empty() {
        return Err(fail("nonvanishing disagrees with the index".into()));
    }
    check_conservation(chain, &index).map_err(fail)?;
    if chain.lambda().iter().all(|&l| l == 0) {
        check_aq0(chain, &index).map_err(fail)?;
    }
    Ok(ChainCheck {
        hp_ok,
        solvable,
        index,
        tuples_visited: stats.tuples_visited,
    })
}

/// For `λ = 0`: one term per coset element, all `±1`, each `γ + ρ_c` a
/// permutation of `ρ`.
pub fn check_aq0(chain: &AqChain, index: &VirtualKSum) -> Result<(), String> {
    let expected = shuffle_count(chain) as usize;
    if index.len() != expected {
        return Err(format!("A_q(0) index has {} keys, expected {expected}", index.len()));
    }
    if let Some((k, v)) = index.iter().find(|(_, v)| v.abs() != 1) {
        return Err(format!("A_q(0) coefficient {v} on {k}"));
    }
    let rho: Vec<HalfRat> = rho_g(chain.p(), chain.q()).map_err(|e| e.to_string())?;
    let rc = rho_c(chain.p(), chain.q());
    for gamma in index.keys() {
        let shifted: BiWeight = gamma + &rc;
        if !multiset_equal(shifted.entries(), &rho) {
            return Err(format!("A_q(0) key {gamma} is not a shuffle of ρ"));
        }
    }
    Ok(())
}
