//! Built-in verification suite.
//!
//! The full level runs the project's ten acceptance checks — exact
//! counting, the recursion cross-check, the exhaustive four-variable
//! census, enumeration bijectivity, the worked five- and four-variable
//! examples, formula/oracle agreement over every small NCF, bounds and
//! monotonicity, the closed-form maxima, the conjecture probe and sampler
//! uniformity. The quick level is a sub-second subset. Both are exposed
//! to the CLI and to the integration tests, so one implementation is the
//! single source of truth for pass/fail.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::anf::AnfPoly;
use crate::canalyze::{ncf_decompose, DecomposeVerdict, NotNcfReason};
use crate::dyadic::Dyadic;
use crate::enumerate::{compositions, enumerate_ncf, NcfSampler};
use crate::formulas::{
    activity_of_layer, average_sensitivity, conjecture_scan, count_ncf_total, count_recursive,
    sensitivity_bounds, weight_from_composition, Composition, MaxFamily,
};
use crate::oracle::{activity_bruteforce, classify_all, is_ncf_by_definition, sensitivity_profile};
use crate::table::TruthTable;

pub const Y_ANF: &str =
    "x1*x2*x3*x4*x5 + x1*x2*x3*x4 + x1*x2*x4*x5 + x1*x2*x4 + x1*x3*x4 + x1*x3 + x1*x4 + x1";
pub const N_ANF: &str = "x1*x2*x3 + x2*x3*x4 + x1*x3 + x3*x4 + 1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub label: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { failures: Vec::new(), notes: Vec::new() }
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    fn note(&mut self, msg: String) {
        self.notes.push(msg);
    }

    fn finish(mut self, label: &str, started: Instant, budget: Option<Duration>) -> Outcome {
        let elapsed = started.elapsed();
        if let Some(budget) = budget {
            if elapsed > budget {
                self.failures.push(format!(
                    "runtime {:.2?} exceeded the {:.0?} budget",
                    elapsed, budget
                ));
            }
        }
        let passed = self.failures.is_empty();
        let mut detail = if passed { self.notes.join("; ") } else { self.failures.join("; ") };
        if detail.is_empty() {
            detail = "ok".to_string();
        }
        Outcome { label: label.to_string(), passed, detail, elapsed }
    }
}

pub fn run(level: Level) -> Vec<Outcome> {
    match level {
        Level::Quick => run_quick(),
        Level::Full => run_full(),
    }
}

/// The ten acceptance checks, in order.
pub fn run_full() -> Vec<Outcome> {
    (1..=10).map(run_criterion).collect()
}

pub fn run_criterion(id: usize) -> Outcome {
    match id {
        1 => criterion_counts(),
        2 => criterion_recursion(),
        3 => criterion_census(),
        4 => criterion_enumeration_bijectivity(),
        5 => criterion_worked_examples(),
        6 => criterion_formula_oracle_agreement(),
        7 => criterion_bounds_and_monotonicity(),
        8 => criterion_closed_form_maxima(),
        9 => criterion_conjecture_probe(),
        10 => criterion_sampler_uniformity(),
        _ => panic!("criterion ids run 1..=10, got {id}"),
    }
}

/// Criterion 1: Exact NCF counts for n = 2..=5.
fn criterion_counts() -> Outcome {
    let started = Instant::now();
    let mut c = Check::new();
    for (n, expected) in [(2u32, 8u32), (3, 64), (4, 736), (5, 10624)] {
        let got = count_ncf_total(n).unwrap();
        c.expect(got == expected.into(), || format!("count({n}) = {got}, expected {expected}"));
    }
    c.note("counts 8, 64, 736, 10624 for n = 2..5".into());
    c.finish("1 counting", started, Some(Duration::from_secs(1)))
}

/// Criterion 2: The nonlinear recurrence equals the multinomial formula, n = 2..=30.
fn criterion_recursion() -> Outcome {
    let started = Instant::now();
    let mut c = Check::new();
    for n in 2..=30 {
        let a = count_recursive(n).unwrap();
        let b = count_ncf_total(n).unwrap();
        c.expect(a == b, || format!("n = {n}: recursion {a} != formula {b}"));
    }
    c.note(format!("agreement through n = 30 (count(30) has {} digits)", count_ncf_total(30).unwrap().to_string().len()));
    c.finish("2 recursion equivalence", started, Some(Duration::from_secs(5)))
}

/// Criterion 3: Exhaustive census of all 65536 four-variable functions, with
/// decomposer/definition agreement on each.
fn criterion_census() -> Outcome {
    let started = Instant::now();
    let mut c = Check::new();
    let census = classify_all(4);
    c.expect(census.total_ncf() == 736, || format!("census found {} NCFs, expected 736", census.total_ncf()));
    for (r, expected) in [(1usize, 32u64), (2, 320), (3, 384)] {
        let got = census.per_layer.get(&r).copied().unwrap_or(0);
        c.expect(got == expected, || format!("census r = {r}: {got}, expected {expected}"));
    }
    let disagreements: u64 = (0u64..1 << 16)
        .into_par_iter()
        .map(|bits| {
            let f = TruthTable::from_fn(4, |t| bits >> t & 1 == 1).unwrap();
            let by_decomposition = ncf_decompose(&f).is_ncf_nondegenerate();
            (by_decomposition != is_ncf_by_definition(&f)) as u64
        })
        .sum();
    c.expect(disagreements == 0, || format!("{disagreements} of 65536 verdicts disagree with the definition"));
    c.note("65536 functions: census {32, 320, 384} and zero verdict disagreements".into());
    c.finish("3 exhaustive census", started, Some(Duration::from_secs(120)))
}

/// Criterion 4: enumerate(5) yields 10624 structures with pairwise-distinct tables,
/// each decomposing back to its source.
fn criterion_enumeration_bijectivity() -> Outcome {
    let started = Instant::now();
    let mut c = Check::new();
    let structures: Vec<_> = enumerate_ncf(5, None).unwrap().collect();
    c.expect(structures.len() == 10624, || format!("enumerated {} structures, expected 10624", structures.len()));
    let mut tables = HashSet::with_capacity(structures.len());
    let mut round_trip_failures = 0u64;
    let mut duplicates = 0u64;
    for s in &structures {
        let table = s.reconstruct();
        if !tables.insert(table.to_bin_str()) {
            duplicates += 1;
        }
        if ncf_decompose(&table).structure() != Some(s) {
            round_trip_failures += 1;
        }
    }
    c.expect(duplicates == 0, || format!("{duplicates} duplicate truth tables"));
    c.expect(round_trip_failures == 0, || format!("{round_trip_failures} structures failed the decompose round trip"));
    c.note("10624 distinct tables, all round-tripping".into());
    c.finish("4 enumeration bijectivity", started, Some(Duration::from_secs(60)))
}

/// Criterion 5: The worked five-variable NCF and the four-variable non-NCF.
fn criterion_worked_examples() -> Outcome {
    let started = Instant::now();
    let mut c = Check::new();

    let y = AnfPoly::parse(Y_ANF, 5).unwrap().truth_table();
    match ncf_decompose(&y) {
        DecomposeVerdict::Ncf(s) => {
            c.expect(s.layer_number() == 3, || format!("layer number {}", s.layer_number()));
            let comp = s.composition().unwrap();
            c.expect(comp.parts() == [2, 1, 2], || format!("composition {comp}"));
            c.expect(
                s.to_string() == "0 ⊕ (x1)(x3') [ (x4) [ (x2)(x5') ] ]",
                || format!("structure text {s}"),
            );
            let weight = weight_from_composition(&comp, s.b());
            c.expect(weight == 5u32.into(), || format!("formula weight {weight}"));
            c.expect(y.hamming_weight() == 5, || format!("table weight {}", y.hamming_weight()));
            let sens = average_sensitivity(&comp);
            c.expect(sens == Dyadic::new(15, 4), || format!("formula sensitivity {sens}"));
            let profile = sensitivity_profile(&y);
            c.expect(profile.average == Dyadic::new(15, 4), || format!("oracle sensitivity {}", profile.average));
            for var in 1..=5u32 {
                let layer = s.layer_of(var).unwrap();
                let formula = activity_of_layer(&comp, layer).unwrap();
                let oracle = activity_bruteforce(&y, var);
                c.expect(formula == oracle, || format!("x{var}: formula {formula} vs oracle {oracle}"));
            }
        }
        other => c.expect(false, || format!("expected an NCF verdict, got {other:?}")),
    }

    let n_table = AnfPoly::parse(N_ANF, 4).unwrap().truth_table();
    match ncf_decompose(&n_table) {
        DecomposeVerdict::NotNcf(NotNcfReason::NoCanalyzingVariableAtDepth { depth, residual }) => {
            c.expect(depth == 2, || format!("witness depth {depth}"));
            c.expect(residual.anf_text() == "x1 + x4", || format!("residual {}", residual.anf_text()));
        }
        other => c.expect(false, || format!("expected a no-canalyzing witness, got {other:?}")),
    }
    c.note("five-variable example decomposes to (2,1,2) with weight 5 and sensitivity 15/16; quartic example rejected at depth 2".into());
    c.finish("5 worked examples", started, None)
}

/// Criterion 6: Formula/oracle agreement on every NCF with n <= 5: weight,
/// per-variable activity and average sensitivity, all exact.
fn criterion_formula_oracle_agreement() -> Outcome {
    let started = Instant::now();
    let mut c = Check::new();
    let mut checked = 0u64;
    for n in 2..=5u32 {
        let structures: Vec<_> = enumerate_ncf(n, None).unwrap().collect();
        let failures: Vec<String> = structures
            .par_iter()
            .filter_map(|s| {
                let table = s.reconstruct();
                let comp = s.composition().expect("n >= 2 structures are nondegenerate");
                if weight_from_composition(&comp, s.b()) != BigUint::from(table.hamming_weight()) {
                    return Some(format!("weight mismatch for {s}"));
                }
                for var in 1..=n {
                    let layer = s.layer_of(var).expect("all variables are in layers");
                    if activity_of_layer(&comp, layer).unwrap() != activity_bruteforce(&table, var) {
                        return Some(format!("activity mismatch for {s} at x{var}"));
                    }
                }
                if average_sensitivity(&comp) != sensitivity_profile(&table).average {
                    return Some(format!("sensitivity mismatch for {s}"));
                }
                None
            })
            .collect();
        checked += structures.len() as u64;
        for f in failures.into_iter().take(3) {
            c.expect(false, || f.clone());
        }
    }
    c.note(format!("{checked} structures checked exactly (weights, activities, sensitivities)"));
    c.finish("6 formula/oracle agreement", started, Some(Duration::from_secs(300)))
}

/// Criterion 7: For every composition with n <= 20: strictly decreasing layer
/// activities and the sensitivity range, attained below exactly at r = 1.
fn criterion_bounds_and_monotonicity() -> Outcome {
    let started = Instant::now();
    let mut c = Check::new();
    let mut checked = 0u64;
    for n in 3..=20u32 {
        let (lower, upper) = sensitivity_bounds(n).unwrap();
        let comps: Vec<Composition> = compositions(n).unwrap().collect();
        checked += comps.len() as u64;
        let failures: Vec<String> = comps
            .par_iter()
            .filter_map(|comp| {
                let acts: Vec<Dyadic> = (1..=comp.r())
                    .map(|l| activity_of_layer(comp, l).unwrap())
                    .collect();
                if !acts.windows(2).all(|w| w[0] > w[1]) {
                    return Some(format!("activities not strictly decreasing for {comp}"));
                }
                let s = average_sensitivity(comp);
                if s < lower || s >= upper {
                    return Some(format!("sensitivity {s} outside [{lower}, {upper}) for {comp}"));
                }
                if (s == lower) != (comp.r() == 1) {
                    return Some(format!("lower bound attainment wrong for {comp}"));
                }
                if !(s.is_positive() && s < Dyadic::new(2, 0)) {
                    return Some(format!("sensitivity {s} outside (0, 2) for {comp}"));
                }
                None
            })
            .collect();
        for f in failures.into_iter().take(3) {
            c.expect(false, || f.clone());
        }
    }
    c.note(format!("{checked} compositions checked for n = 3..20"));
    c.finish("7 bounds and monotonicity", started, None)
}

/// Criterion 8: The three closed-form maxima families match direct evaluation and
/// coincide at even n.
fn criterion_closed_form_maxima() -> Outcome {
    let started = Instant::now();
    let mut c = Check::new();
    for n in 3..=30u32 {
        let v1 = MaxFamily::OnesTwo.closed_form(n).unwrap();
        let direct = average_sensitivity(&MaxFamily::OnesTwo.composition(n).unwrap());
        c.expect(v1 == direct, || format!("n = {n}: (1,..,1,2) closed form {v1} != direct {direct}"));
        if n >= 4 {
            let v2 = MaxFamily::OnesThree.closed_form(n).unwrap();
            let direct = average_sensitivity(&MaxFamily::OnesThree.composition(n).unwrap());
            c.expect(v2 == direct, || format!("n = {n}: (1,..,1,3) closed form {v2} != direct {direct}"));
            if n % 2 == 0 {
                c.expect(v1 == v2, || format!("n = {n}: even-n equality v1 != v2"));
            }
        }
        if n >= 6 && n % 2 == 0 {
            let v3 = MaxFamily::OneTwosThree.closed_form(n).unwrap();
            let direct = average_sensitivity(&MaxFamily::OneTwosThree.composition(n).unwrap());
            c.expect(v3 == direct, || format!("n = {n}: (1,2,..,2,3) closed form {v3} != direct {direct}"));
            c.expect(v1 == v3, || format!("n = {n}: even-n equality v1 != v3"));
        }
    }
    c.note("closed forms match direct evaluation for n = 3..30; all coincide at even n".into());
    c.finish("8 closed-form maxima", started, None)
}

/// Criterion 9: Exhaustive scan for n = 3..=26. The scanner itself must be sound
/// (the maximum can never fall below the scanned (1,...,1,2) value, and
/// the n = 6 maximizer set is checked explicitly); disagreement with the
/// conjectured maximum is reported as a finding, not a failure.
fn criterion_conjecture_probe() -> Outcome {
    let started = Instant::now();
    let mut c = Check::new();
    let mut findings = Vec::new();
    for n in 3..=26u32 {
        let report = conjecture_scan(n).unwrap();
        let family = MaxFamily::OnesTwo.closed_form(n).unwrap();
        c.expect(
            report.max >= family,
            || format!("n = {n}: scan max {} below the scanned family value {family}", report.max),
        );
        if !report.consistent() {
            findings.push(format!(
                "n = {n}: max {} at {:?} deviates from the conjectured family",
                report.max,
                report.argmax.iter().map(|c| c.to_string()).collect::<Vec<_>>()
            ));
        }
        if n == 6 {
            c.expect(report.max == Dyadic::new(21, 4), || format!("n = 6 max {}", report.max));
            let parts: Vec<&[u32]> = report.argmax.iter().map(|c| c.parts()).collect();
            c.expect(parts.contains(&&[1, 2, 1, 2][..]), || "n = 6 argmax misses (1,2,1,2)".into());
            c.expect(parts.contains(&&[1, 1, 1, 1, 2][..]), || "n = 6 argmax misses (1,1,1,1,2)".into());
        }
    }
    if findings.is_empty() {
        c.note("consistent with the conjectured maximum at every n in 3..26".into());
    } else {
        for f in &findings {
            c.note(format!("FINDING: {f}"));
        }
    }
    c.finish("9 conjecture probe", started, None)
}

/// Criterion 10: 10^5 seeded draws at n = 4: per-layer frequencies within 4 sigma of
/// 32/736, 320/736, 384/736, plus a chi-square statistic check.
fn criterion_sampler_uniformity() -> Outcome {
    let started = Instant::now();
    let mut c = Check::new();
    let draws = 100_000u64;
    let mut sampler = NcfSampler::new(4, 0x5eed_cafe).unwrap();
    let mut by_r = [0u64; 4];
    for _ in 0..draws {
        by_r[sampler.sample().layer_number()] += 1;
    }
    let mut chi2 = 0.0f64;
    for (r, count) in [(1usize, 32.0), (2, 320.0), (3, 384.0)] {
        let p = count / 736.0;
        let expected = draws as f64 * p;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        let observed = by_r[r] as f64;
        c.expect(
            (observed - expected).abs() <= 4.0 * sigma,
            || format!("layer count {r}: {observed} draws vs expected {expected:.1} (4 sigma = {:.1})", 4.0 * sigma),
        );
        chi2 += (observed - expected).powi(2) / expected;
    }
    // 13.82 is the df = 2 quantile at p = 0.001; statistical, not logical.
    c.expect(chi2 < 13.82, || format!("chi-square statistic {chi2:.2} above 13.82"));
    c.note(format!(
        "draws by layer count: {}/{}/{} (chi2 = {chi2:.2})",
        by_r[1], by_r[2], by_r[3]
    ));
    c.finish("10 sampler uniformity", started, None)
}

/// Sub-second smoke checks: exhaustive agreement through n = 3, the fixed
/// worked examples, counts, and a small scan.
fn run_quick() -> Vec<Outcome> {
    let mut out = Vec::new();

    let started = Instant::now();
    let mut c = Check::new();
    for (n, expected) in [(2u32, 8u32), (3, 64), (4, 736), (5, 10624)] {
        let got = count_ncf_total(n).unwrap();
        c.expect(got == expected.into(), || format!("count({n}) = {got}"));
        c.expect(count_recursive(n).unwrap() == got, || format!("recursion mismatch at n = {n}"));
    }
    out.push(c.finish("quick counts", started, None));

    let started = Instant::now();
    let mut c = Check::new();
    let census = classify_all(3);
    c.expect(census.total_ncf() == 64, || format!("census(3) found {}", census.total_ncf()));
    for n in 0..=3u32 {
        let size = 1u64 << (1u64 << n);
        for bits in 0..size {
            let f = TruthTable::from_fn(n, |t| bits >> t & 1 == 1).unwrap();
            let decomposed = ncf_decompose(&f);
            let agree = if n <= 1 {
                // The raw definition admits the nonconstant single-variable
                // functions that the normal form flags as degenerate.
                is_ncf_by_definition(&f) == decomposed.is_ncf()
            } else {
                is_ncf_by_definition(&f) == decomposed.is_ncf_nondegenerate()
            };
            c.expect(agree, || format!("verdict disagreement at n = {n}, bits {bits:#x}"));
        }
    }
    out.push(c.finish("quick exhaustive n <= 3", started, None));

    let started = Instant::now();
    let mut c = Check::new();
    let y = AnfPoly::parse(Y_ANF, 5).unwrap().truth_table();
    let verdict = ncf_decompose(&y);
    c.expect(
        verdict.structure().map(|s| s.to_string())
            == Some("0 ⊕ (x1)(x3') [ (x4) [ (x2)(x5') ] ]".into()),
        || "five-variable example structure wrong".into(),
    );
    c.expect(y.hamming_weight() == 5, || "five-variable example weight wrong".into());
    c.expect(
        sensitivity_profile(&y).average == Dyadic::new(15, 4),
        || "five-variable example sensitivity wrong".into(),
    );
    let n_table = AnfPoly::parse(N_ANF, 4).unwrap().truth_table();
    c.expect(
        matches!(
            ncf_decompose(&n_table),
            DecomposeVerdict::NotNcf(NotNcfReason::NoCanalyzingVariableAtDepth { depth: 2, .. })
        ),
        || "quartic example verdict wrong".into(),
    );
    out.push(c.finish("quick worked examples", started, None));

    let started = Instant::now();
    let mut c = Check::new();
    let report = conjecture_scan(6).unwrap();
    c.expect(report.max == Dyadic::new(21, 4), || format!("scan(6) max {}", report.max));
    c.expect(report.consistent(), || "scan(6) inconsistent".into());
    out.push(c.finish("quick scan", started, None));

    out
}
