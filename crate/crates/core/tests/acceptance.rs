//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line.
//!
//! Run with `cargo test -p aqdirac --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use aqdirac::chains::AqChain;
use aqdirac::dirac::{brute_force_index, brute_force_with_stats, nonvanishing, solve_system, structured_index};
use aqdirac::sample::{
    check_aq0, check_chain, check_conservation, random_block_sizes, random_chain,
    random_nested_chain, random_weakly_fair_chain,
};
use aqdirac::spin::{is_u_small, ktype_dimension, spin_module, u_small_lemma_witnesses};
use aqdirac::weights::{binomial, rho_c, tau, BiWeight, HalfRat};
use aqdirac::{Error, VirtualKSum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(id: u32, what: &str, outcome: Result<(), String>, elapsed: Duration, budget: Duration) {
    let outcome = outcome.and_then(|()| {
        if elapsed <= budget {
            Ok(())
        } else {
            Err(format!("took {elapsed:?}, budget {budget:?}"))
        }
    });
    match outcome {
        Ok(()) => println!("[PASS] criterion {id}: {what} ({elapsed:.2?})"),
        Err(msg) => {
            println!("[FAIL] criterion {id}: {what}: {msg}");
            panic!("criterion {id} failed: {msg}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn chain(s: &str) -> AqChain {
    s.parse().unwrap()
}

/// `(p-values | q-values) - τ - ρ_c`.
fn key(p: &[i64], q: &[i64]) -> BiWeight {
    let raw = BiWeight::from_ints(p, q);
    &(&raw - &tau(p.len(), q.len()).unwrap()) - &rho_c(p.len(), q.len())
}

fn halves(xs: &[i64]) -> Vec<HalfRat> {
    xs.iter().copied().map(HalfRat::from_halves).collect()
}

#[test]
fn criterion_01_u24_golden() {
    let start = Instant::now();
    let outcome = (|| {
        let c = chain("4:0,1;5:2,2;3:0,1");
        let flags = c.classify_range();
        ensure!(flags.fair && !flags.weakly_good, "range flags {flags:?}");
        let lambda = c.infinitesimal_character();
        ensure!(lambda == halves(&[3, 1, 1, -1, -1, -3]), "Λ = {lambda:?}");
        let idx = brute_force_index(&c).map_err(|e| e.to_string())?;
        ensure!(idx.len() == 1, "{} terms", idx.len());
        let coeff = idx.get(&BiWeight::zero(2, 4));
        ensure!(coeff.abs() == 1, "coefficient on (0,0|0,0,0,0) is {coeff}");
        let s = structured_index(&c).map_err(|e| e.to_string())?;
        ensure!(s == idx, "structured index differs");
        Ok(())
    })();
    report(1, "U(2,4) fair chain, single term at 0", outcome, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_02_u56_golden() {
    let start = Instant::now();
    let outcome = (|| {
        let c = chain("7:3,2;5:2,3;1:0,1");
        let sols: Vec<Vec<usize>> = solve_system(&c)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|s| s.flat())
            .collect();
        ensure!(sols == vec![vec![3, 0, 1, 0], vec![2, 1, 1, 0]], "solutions {sols:?}");
        let (idx, stats) = brute_force_with_stats(&c).map_err(|e| e.to_string())?;
        let expected_tuples = binomial(5, 3) * binomial(5, 2) * binomial(1, 0);
        ensure!(expected_tuples == 100, "tuple count formula");
        ensure!(stats.tuples_visited == 100, "visited {}", stats.tuples_visited);
        let expected: VirtualKSum = [
            (key(&[5, 4, 3, 2, 1], &[7, 6, 5, 4, 3, 1]), 1),
            (key(&[7, 5, 4, 3, 1], &[6, 5, 4, 3, 2, 1]), -3),
            (key(&[6, 5, 4, 3, 1], &[7, 5, 4, 3, 2, 1]), 3),
        ]
        .into_iter()
        .collect();
        ensure!(idx == expected, "index {idx:?}");
        let s = structured_index(&c).map_err(|e| e.to_string())?;
        ensure!(s == expected, "structured index {s:?}");
        Ok(())
    })();
    report(2, "U(5,6) chain: solutions and +1,-3,+3", outcome, start.elapsed(), Duration::from_secs(1));
}

/// Chain `(3)^{σ4} ∪ (3)^{σ3} ∪ (2)^{σ2} ∪ (2)^{σ1}` where `σ_j` is `(1,0)`
/// when `j` sits in the p-block of `ρ_i`.
fn translated_u22(p_values: [i64; 2]) -> AqChain {
    let sigma = |j: i64| if p_values.contains(&j) { "1,0" } else { "0,1" };
    chain(&format!(
        "3:{};3:{};2:{};2:{}",
        sigma(4),
        sigma(3),
        sigma(2),
        sigma(1)
    ))
}

#[test]
fn criterion_03_u22_translation() {
    let start = Instant::now();
    let outcome = (|| {
        let rhos = [[4, 3], [4, 2], [4, 1], [3, 2], [3, 1], [2, 1]];
        let listed: [Option<[usize; 4]>; 6] = [
            None,
            Some([1, 0, 1, 0]),
            Some([1, 0, 0, 1]),
            Some([0, 1, 1, 0]),
            Some([0, 1, 0, 1]),
            None,
        ];
        let target = key(&[3, 2], &[3, 2]);
        for (i, (rho, want)) in rhos.iter().zip(listed).enumerate() {
            let c = translated_u22(*rho);
            ensure!(c.classify_range().weakly_fair, "ρ_{} chain not weakly fair", i + 1);
            ensure!(c.hp_condition().ok, "ρ_{} chain fails HP", i + 1);
            let sols: Vec<Vec<usize>> = solve_system(&c)
                .map_err(|e| e.to_string())?
                .iter()
                .map(|s| s.flat())
                .collect();
            let idx = brute_force_index(&c).map_err(|e| e.to_string())?;
            let s = structured_index(&c).map_err(|e| e.to_string())?;
            ensure!(s == idx, "ρ_{}: methods differ", i + 1);
            match want {
                None => {
                    ensure!(sols.is_empty(), "ρ_{}: unexpected solutions {sols:?}", i + 1);
                    ensure!(idx.is_empty(), "ρ_{}: index {idx:?}", i + 1);
                }
                Some(sol) => {
                    ensure!(sols == vec![sol.to_vec()], "ρ_{}: solutions {sols:?}", i + 1);
                    ensure!(idx.len() == 1, "ρ_{}: {} terms", i + 1, idx.len());
                    ensure!(idx.get(&target).abs() == 1, "ρ_{}: index {idx:?}", i + 1);
                }
            }
        }
        Ok(())
    })();
    report(3, "U(2,2) translated discrete series", outcome, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_04_unipotent_multiplicity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x58);
    let outcome = (|| {
        for _ in 0..10 {
            let c = random_nested_chain(&mut rng, 7);
            let [inner, _] = c.blocks() else {
                return Err("expected two blocks".into());
            };
            let want = binomial(inner.len(), inner.p()) as i64;
            let idx = structured_index(&c).map_err(|e| format!("{c}: {e}"))?;
            ensure!(!idx.is_empty(), "{c}: empty index");
            for (w, v) in idx.iter() {
                ensure!(v.abs() == want, "{c}: coefficient {v} on {w}, expected ±{want}");
            }
            let brute = brute_force_index(&c).map_err(|e| format!("{c}: {e}"))?;
            ensure!(brute == idx, "{c}: methods differ");
        }
        Ok(())
    })();
    report(4, "nested two-block multiplicities C(p1+q1,p1)", outcome, start.elapsed(), Duration::from_secs(10));
}

fn campaign_chains(count: usize, seed: u64) -> Vec<AqChain> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c = random_weakly_fair_chain(&mut rng, 4, 5);
        if c.rank() <= 10 {
            out.push(c);
        }
    }
    out
}

#[test]
fn criterion_05_06_oracle_equivalence_and_vanishing() {
    let start = Instant::now();
    let chains = campaign_chains(500, 2024);
    let mut equivalence = Ok(());
    let mut vanishing = Ok(());
    let (mut non_hp, mut infeasible, mut with_repeats) = (0, 0, 0);
    for c in &chains {
        let hp = c.hp_condition().ok;
        let brute = match brute_force_index(c) {
            Ok(b) => b,
            Err(Error::SignConflict(w)) => {
                vanishing = Err(format!("{c}: opposite signs on {w}"));
                break;
            }
            Err(e) => {
                equivalence = Err(format!("{c}: {e}"));
                break;
            }
        };
        if c.hp_condition().multiplicity.values().any(|&m| m > 1) {
            with_repeats += 1;
        }
        if !hp {
            non_hp += 1;
            if !brute.is_empty() {
                vanishing = Err(format!("{c}: HP fails but index nonzero"));
                break;
            }
            continue;
        }
        match structured_index(c) {
            Ok(s) if s == brute => {}
            Ok(_) => {
                equivalence = Err(format!("{c}: structured != brute force"));
                break;
            }
            Err(e) => {
                equivalence = Err(format!("{c}: {e}"));
                break;
            }
        }
        let solvable = !solve_system(c).unwrap().is_empty();
        if !solvable {
            infeasible += 1;
        }
        if solvable == brute.is_empty() || nonvanishing(c).unwrap() != solvable {
            vanishing = Err(format!("{c}: solvable={solvable}, index terms={}", brute.len()));
            break;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "campaign: {} chains, {with_repeats} with repeated entries, {non_hp} failing HP, {infeasible} infeasible",
        chains.len()
    );
    report(5, "structured == brute force on 500 chains", equivalence, elapsed, Duration::from_secs(120));
    report(6, "(HP ∧ solvable) ⇔ index ≠ 0, same-sign accumulation", vanishing, elapsed, Duration::from_secs(120));
}

#[test]
fn criterion_07_aq0() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let outcome = (|| {
        let mut done = 0;
        while done < 100 {
            let blocks = random_block_sizes(&mut rng, 5, 6);
            let n: usize = blocks.iter().map(|b| b.0 + b.1).sum();
            if n > 10 {
                continue;
            }
            let c = AqChain::from_lambda(&blocks, &vec![0; blocks.len()]).unwrap();
            let idx = brute_force_index(&c).map_err(|e| format!("{c}: {e}"))?;
            let expected: u64 = blocks.iter().map(|&(p, q)| binomial(p + q, p)).product();
            ensure!(idx.len() as u64 == expected, "{c}: {} keys, expected {expected}", idx.len());
            check_aq0(&c, &idx).map_err(|e| format!("{c}: {e}"))?;
            done += 1;
        }
        Ok(())
    })();
    report(7, "A_q(0): ∏C(p_i+q_i,p_i) keys, ±1, γ+ρ_c ~ ρ", outcome, start.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_08_infinitesimal_character_conservation() {
    let start = Instant::now();
    let outcome = (|| {
        let mut chains: Vec<AqChain> = [
            "4:0,1;5:2,2;3:0,1",
            "7:3,2;5:2,3;1:0,1",
            "3:1,0;3:0,1;2:1,0;2:0,1",
            "3:1,0;3:1,0;2:0,1;2:0,1",
        ]
        .iter()
        .map(|s| chain(s))
        .collect();
        chains.extend(campaign_chains(500, 2024));
        let mut rng = ChaCha8Rng::seed_from_u64(0x58);
        chains.extend((0..10).map(|_| random_nested_chain(&mut rng, 7)));
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        chains.extend((0..100).filter_map(|_| {
            let b = random_block_sizes(&mut rng, 5, 6);
            let c = AqChain::from_lambda(&b, &vec![0; b.len()]).unwrap();
            (c.rank() <= 10).then_some(c)
        }));
        let mut keys = 0;
        for c in &chains {
            let checked = check_chain(c).map_err(|v| v.to_string())?;
            check_conservation(c, &checked.index).map_err(|e| format!("{c}: {e}"))?;
            keys += checked.index.len();
        }
        println!("conservation checked on {keys} keys from {} chains", chains.len());
        Ok(())
    })();
    report(8, "multiset and norm conservation on every key", outcome, start.elapsed(), Duration::from_secs(120));
}

#[test]
fn criterion_09_spin_module() {
    let start = Instant::now();
    let outcome = (|| {
        for n in 1..=8usize {
            for p in 0..=n {
                let q = n - p;
                let s = spin_module(p, q).map_err(|e| e.to_string())?;
                ensure!(s.weights.len() as u64 == binomial(n, p), "U({p},{q}): {} summands", s.weights.len());
                let total: u128 = s
                    .weights
                    .iter()
                    .map(|w| ktype_dimension(w).unwrap())
                    .sum();
                ensure!(total == 1u128 << (p * q), "U({p},{q}): total dimension {total}");
            }
        }
        Ok(())
    })();
    report(9, "spin module: C(p+q,p) summands, dimension 2^pq", outcome, start.elapsed(), Duration::from_secs(10));
}

#[test]
fn criterion_10_u_small_lemma() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let outcome = (|| {
        let mut tested = 0;
        let mut witnesses = 0;
        let mut attempts = 0;
        while tested < 50 {
            attempts += 1;
            ensure!(attempts < 100_000, "could not find 50 chains inside the box");
            let c = random_chain(&mut rng, 4, 3);
            if c.rank() > 6 {
                continue;
            }
            match u_small_lemma_witnesses(&c) {
                Err(Error::OutsideFundamentalBox) => continue,
                Err(Error::NotUSmall(d)) => return Err(format!("{c}: witness {d} is not u-small")),
                Err(e) => return Err(format!("{c}: {e}")),
                Ok(found) => {
                    for d in &found {
                        ensure!(is_u_small(d).unwrap(), "{c}: witness {d} is not u-small");
                    }
                    witnesses += found.len();
                    tested += 1;
                }
            }
        }
        println!("u-small: {tested} chains, {witnesses} dominant witnesses");
        Ok(())
    })();
    report(10, "dominant witnesses are u-small", outcome, start.elapsed(), Duration::from_secs(60));
}
