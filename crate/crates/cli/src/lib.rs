//! Commands behind the `aqdirac` binary.

use std::fmt::Write as _;

use aqdirac::chains::{parse_blocks, parse_lambda};
use aqdirac::dirac::{brute_force_index, solve_system, structured_index};
use aqdirac::sample::{check_chain, random_weakly_fair_chain, Violation};
use aqdirac::spin::{is_u_small, spin_module, spin_norm_sq};
use aqdirac::{AqChain, BiWeight, Error, HalfRat, HpCheck, RangeFlags, SolutionMatrix, VirtualKSum};
use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Structured,
}

/// Which index computations `analyze` runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MethodChoice {
    Brute,
    Structured,
    #[default]
    Both,
}

impl MethodChoice {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Brute => vec![Method::Brute],
            MethodChoice::Structured => vec![Method::Structured],
            MethodChoice::Both => vec![Method::Brute, Method::Structured],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub chain: AqChain,
    pub ranges: RangeFlags,
    pub infinitesimal_character: Vec<HalfRat>,
    pub hp_condition: HpCheck,
    pub solutions: Vec<SolutionMatrix>,
    pub dirac_index: VirtualKSum,
    pub methods: Vec<Method>,
    pub methods_agree: bool,
    pub nonzero: bool,
}

/// Chain from `--chain`, or from `--blocks` with `--lambda` (defaulting to
/// `λ = 0`).
pub fn resolve_chain(
    chain: Option<&str>,
    blocks: Option<&str>,
    lambda: Option<&str>,
) -> Result<AqChain, Error> {
    match (chain, blocks) {
        (Some(text), None) => text.parse(),
        (None, Some(blocks)) => {
            let blocks = parse_blocks(blocks)?;
            let lambda = match lambda {
                Some(l) => parse_lambda(l)?,
                None => vec![0; blocks.len()],
            };
            AqChain::from_lambda(&blocks, &lambda)
        }
        _ => Err(Error::InvalidInput(
            "give either --chain or --blocks (with optional --lambda)".into(),
        )),
    }
}

pub fn analyze(chain: &AqChain, choice: MethodChoice) -> Result<Report, Error> {
    let ranges = chain.classify_range();
    if !ranges.weakly_fair {
        return Err(Error::NotWeaklyFair);
    }
    let hp_condition = chain.hp_condition();
    let solutions = if hp_condition.ok {
        solve_system(chain)?
    } else {
        Vec::new()
    };
    let methods = choice.methods();
    let mut results = Vec::with_capacity(methods.len());
    for method in &methods {
        let index = match method {
            Method::Brute => brute_force_index(chain)?,
            // without the repeated-entry condition the index vanishes
            Method::Structured if !hp_condition.ok => VirtualKSum::new(),
            Method::Structured => structured_index(chain)?,
        };
        results.push(index);
    }
    let methods_agree = results.iter().all_equal();
    let dirac_index = results.swap_remove(0);
    Ok(Report {
        chain: chain.clone(),
        ranges,
        infinitesimal_character: chain.infinitesimal_character(),
        nonzero: !dirac_index.is_empty(),
        hp_condition,
        solutions,
        dirac_index,
        methods,
        methods_agree,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_report(report: &Report) -> String {
    let chain = &report.chain;
    let mut out = String::new();
    let _ = writeln!(out, "chain        {}", chain.notation());
    let _ = writeln!(out, "input        {chain}");
    let _ = writeln!(out, "group        U({},{})", chain.p(), chain.q());
    let r = report.ranges;
    let _ = writeln!(
        out,
        "ranges       good={} weakly_good={} fair={} weakly_fair={}",
        yes_no(r.good),
        yes_no(r.weakly_good),
        yes_no(r.fair),
        yes_no(r.weakly_fair)
    );
    let _ = writeln!(
        out,
        "inf. char.   ({})",
        report.infinitesimal_character.iter().join(",")
    );
    let doubles = report
        .hp_condition
        .multiplicity
        .iter()
        .filter(|(_, &m)| m >= 2)
        .map(|(v, m)| if *m == 2 { v.to_string() } else { format!("{v}×{m}") })
        .join(",");
    let _ = writeln!(
        out,
        "hp condition {} (repeated: {})",
        if report.hp_condition.ok { "ok" } else { "fails" },
        if doubles.is_empty() { "none" } else { &doubles }
    );
    if report.solutions.is_empty() {
        let _ = writeln!(out, "solutions    none");
    } else {
        for (k, sol) in report.solutions.iter().enumerate() {
            let body = sol
                .iter()
                .map(|((i, j), (a, b))| format!("(a{0}{1},b{0}{1})=({a},{b})", i + 1, j + 1))
                .join(" ");
            let label = if k == 0 { "solutions" } else { "" };
            let _ = writeln!(out, "{label:<12} {}", if body.is_empty() { "(no repeats)".into() } else { body });
        }
    }
    let _ = writeln!(out, "dirac index  {} term(s)", report.dirac_index.len());
    for (weight, coeff) in report.dirac_index.iter() {
        let _ = writeln!(out, "  {coeff:+} E{weight}");
    }
    let methods = report
        .methods
        .iter()
        .map(|m| match m {
            Method::Brute => "brute",
            Method::Structured => "structured",
        })
        .join(", ");
    let _ = writeln!(
        out,
        "methods      {methods} ({})",
        if report.methods_agree { "agree" } else { "DISAGREE" }
    );
    let _ = writeln!(out, "nonzero      {}", yes_no(report.nonzero));
    out
}

/// Campaign parameters for `check`.
#[derive(Clone, Copy, Debug)]
pub struct CheckParams {
    pub count: usize,
    pub max_k: usize,
    pub max_block: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub count: usize,
    pub passed: usize,
    pub with_repeats: usize,
    pub failing_hp: usize,
    pub infeasible: usize,
    pub nonzero: usize,
}

impl CheckSummary {
    pub fn render(&self) -> String {
        format!(
            "{}/{} ok\nrepeated entries: {}, failing hp: {}, infeasible: {}, nonzero index: {}\n",
            self.passed, self.count, self.with_repeats, self.failing_hp, self.infeasible, self.nonzero
        )
    }
}

pub fn check(params: CheckParams) -> Result<Result<CheckSummary, Violation>, Error> {
    if params.count == 0 || params.max_k == 0 || params.max_block == 0 {
        return Err(Error::InvalidInput(
            "--count, --max-k and --max-block must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut summary = CheckSummary {
        count: params.count,
        ..CheckSummary::default()
    };
    for _ in 0..params.count {
        let chain = random_weakly_fair_chain(&mut rng, params.max_k, params.max_block);
        let outcome = match check_chain(&chain) {
            Ok(outcome) => outcome,
            Err(v) => return Ok(Err(v)),
        };
        summary.passed += 1;
        if chain.hp_condition().multiplicity.values().any(|&m| m > 1) {
            summary.with_repeats += 1;
        }
        if !outcome.hp_ok {
            summary.failing_hp += 1;
        } else if !outcome.solvable {
            summary.infeasible += 1;
        }
        if !outcome.index.is_empty() {
            summary.nonzero += 1;
        }
    }
    Ok(Ok(summary))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinRow {
    pub weight: BiWeight,
    pub dimension: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinTable {
    pub p: usize,
    pub q: usize,
    pub rows: Vec<SpinRow>,
    pub total_dimension: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinNormReport {
    pub mu: BiWeight,
    pub spin_norm_sq: String,
    pub u_small: bool,
}

pub fn spin_table(p: usize, q: usize) -> Result<SpinTable, Error> {
    let decomposition = spin_module(p, q)?;
    let dims = decomposition.dimensions();
    let rows: Vec<SpinRow> = decomposition
        .weights
        .into_iter()
        .zip(dims)
        .map(|(weight, dimension)| SpinRow { weight, dimension })
        .collect();
    let total_dimension = rows.iter().map(|r| r.dimension).sum();
    Ok(SpinTable {
        p,
        q,
        rows,
        total_dimension,
    })
}

impl SpinTable {
    pub fn render(&self) -> String {
        let mut out = format!("spin module of U({},{})\n", self.p, self.q);
        for (j, row) in self.rows.iter().enumerate() {
            let _ = writeln!(out, "  j={j:<3} {:<32} dim {}", row.weight.to_string(), row.dimension);
        }
        let _ = writeln!(
            out,
            "total dimension {} = 2^{}",
            self.total_dimension,
            self.p * self.q
        );
        out
    }
}

pub fn spin_norm(p: usize, q: usize, mu: &str) -> Result<SpinNormReport, Error> {
    let mu: BiWeight = mu.parse()?;
    if mu.p_len() != p || mu.q_len() != q {
        return Err(Error::InvalidInput(format!(
            "weight {mu} does not have shape ({p}|{q})"
        )));
    }
    Ok(SpinNormReport {
        spin_norm_sq: spin_norm_sq(&mu)?.to_string(),
        u_small: is_u_small(&mu)?,
        mu,
    })
}

impl SpinNormReport {
    pub fn render(&self) -> String {
        format!(
            "mu           {}\nspin_norm_sq = {}\nu_small      {}\n",
            self.mu,
            self.spin_norm_sq,
            yes_no(self.u_small)
        )
    }
}
