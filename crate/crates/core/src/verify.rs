//! The acceptance checks, each returning a structured report.

use std::time::Instant;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{delta_star_coefficient, gamma_graph_m, gamma_shadow, gamma_subgraph, lb_delta_star, lb_gamma, verify_gamma_delta_inequality};
use crate::caps::Caps;
use crate::combinatorics::{binom, binom_usize};
use crate::constructions::{build_construction_h, build_saturated_host, clique};
use crate::corpus::builtin_corpus;
use crate::count_polymatroid::{matroid_rank_bruteforce, matroid_rank_formula, CountParams, CountPolymatroid};
use crate::enumerate::iso_classes;
use crate::error::{Result, WsatError};
use crate::hypergraph::{delta_star, sparseness, Hypergraph, MultiEdgeSet};
use crate::kruskal_katona::verify_kk_exhaustive;
use crate::rational::{self, ceil_i64, int, ratio, Rational};
use crate::rhosat::{polymatroid_values_report, solve_rhosat, verify_polymatroid_axioms, SolveMode};
use crate::wsat::{closure, closure_shuffled, wsat_exact, Family, WsatOptions};

pub const CRITERIA: usize = 11;
const MAX_LISTED: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: usize,
    pub title: String,
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

struct Tally {
    checked: usize,
    failures: Vec<String>,
    failed: usize,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            failures: Vec::new(),
            failed: 0,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(what());
            }
        }
    }

    fn error(&mut self, what: &str, e: WsatError) {
        self.check(false, || format!("{what}: {e}"));
    }

    fn finish(mut self, id: usize, start: Instant) -> CriterionReport {
        if self.failed > self.failures.len() {
            self.notes.push(format!("{} failures, first {} listed", self.failed, self.failures.len()));
        }
        CriterionReport {
            id,
            title: title(id).into(),
            pass: self.failed == 0 && self.checked > 0,
            checked: self.checked,
            failures: self.failures,
            notes: self.notes,
            seconds: start.elapsed().as_secs_f64(),
        }
    }
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "clique graph formula",
        2 => "clique 3-graph formula",
        3 => "gamma identities",
        4 => "gamma against the codegree coefficient",
        5 => "lower bound sandwich",
        6 => "count matroid rank formula",
        7 => "Kruskal-Katona exhaustive",
        8 => "construction executability",
        9 => "rho_sat values and rho_sat <= wsat",
        10 => "polymatroid axioms",
        11 => "closure determinism",
        _ => "unknown",
    }
}

fn wsat(n: usize, h: &Hypergraph, caps: &Caps) -> Result<usize> {
    Ok(wsat_exact(n, &Family::single(h)?, &WsatOptions::default(), caps)?.value)
}

fn label(h: &Hypergraph) -> String {
    h.label().map(str::to_owned).unwrap_or_else(|| format!("{:?}", h.edge_lists()))
}

/// `wsat(n, K_{delta+1}) = (delta-1) n - C(delta, 2)`.
pub fn criterion_1(caps: &Caps) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let cases: Vec<(usize, usize)> = (3..=7).map(|n| (2, n)).chain((4..=7).map(|n| (3, n))).collect();
    let results: Vec<_> = cases
        .par_iter()
        .map(|&(d, n)| (d, n, wsat(n, &clique(d + 1, 2), caps)))
        .collect();
    for (d, n, got) in results {
        let want = (d as i64 - 1) * n as i64 - binom(d as u64, 2) as i64;
        match got {
            Ok(v) => t.check(v as i64 == want, || format!("K_{} n={n}: got {v}, want {want}", d + 1)),
            Err(e) => t.error(&format!("K_{} n={n}", d + 1), e),
        }
    }
    t.finish(1, start)
}

/// `wsat(n, K^3_{2+delta}) = C(n,3) - C(n-delta+1, 3)` for `delta = 2`.
pub fn criterion_2(caps: &Caps) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let delta = 2u64;
    let results: Vec<_> = (4..=6usize)
        .into_par_iter()
        .map(|n| (n, wsat(n, &clique(2 + delta as usize, 3), caps)))
        .collect();
    for (n, got) in results {
        let want = binom(n as u64, 3) - binom(n as u64 - delta + 1, 3);
        match got {
            Ok(v) => t.check(v as u128 == want, || format!("K^3_4 n={n}: got {v}, want {want}")),
            Err(e) => t.error(&format!("K^3_4 n={n}"), e),
        }
    }
    t.finish(2, start)
}

/// Subgraph and shadow forms of gamma agree; `gamma^1, gamma^2` of `K_5`.
pub fn criterion_3(caps: &Caps) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let corpus = match builtin_corpus(caps) {
        Ok(c) => c,
        Err(e) => {
            t.error("corpus", e);
            return t.finish(3, start);
        }
    };
    for h in &corpus {
        for s in 2..=h.r() {
            let a = gamma_subgraph(h, s, caps);
            let b = gamma_shadow(h, s, caps);
            match (a, b) {
                (Ok(a), Ok(b)) => t.check(a.value == b.value, || {
                    format!("{} s={s}: subgraph {} vs shadow {}", label(h), rational::format(&a.value), rational::format(&b.value))
                }),
                (Err(WsatError::Precondition(_)), Err(WsatError::Precondition(_))) => {}
                (a, b) => t.check(false, || format!("{} s={s}: {a:?} vs {b:?}", label(h))),
            }
        }
    }
    let k5 = clique(5, 2);
    for (m, want) in [(1, ratio(9, 4)), (2, ratio(8, 3))] {
        match gamma_graph_m(&k5, m, caps) {
            Ok(g) => t.check(g.value == want, || format!("gamma^{m}(K_5) = {}", rational::format(&g.value))),
            Err(e) => t.error(&format!("gamma^{m}(K_5)"), e),
        }
    }
    t.finish(3, start)
}

/// `gamma_{r,H} >= delta/r - 1/C(r+delta-1, r-1)` whenever `delta*(H) >= 2`.
pub fn criterion_4(caps: &Caps) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let corpus = builtin_corpus(caps).unwrap_or_default();
    let mut skipped = 0;
    for h in &corpus {
        if delta_star(h).map(|d| d < 2).unwrap_or(true) {
            skipped += 1;
            continue;
        }
        match verify_gamma_delta_inequality(h, caps) {
            Ok(rep) => t.check(rep.holds, || {
                format!("{}: gamma {} < {}", label(h), rational::format(&rep.gamma), rational::format(&rep.rhs))
            }),
            Err(e) => t.error(&label(h), e),
        }
    }
    t.notes.push(format!("{skipped} patterns with delta* < 2 are outside the statement"));
    t.finish(4, start)
}

/// Every (corpus pattern, `n <= 7`, `C(n,r) <= 24`) pair.
pub fn sandwich_instances(caps: &Caps) -> Result<Vec<(Hypergraph, usize)>> {
    let mut out = Vec::new();
    for h in builtin_corpus(caps)? {
        for n in h.n()..=7 {
            if binom_usize(n, h.r()) <= 24 {
                out.push((h.clone(), n));
            }
        }
    }
    Ok(out)
}

/// `ceil(lb_delta_star) <= ceil(lb_gamma) <= wsat`; only the outer
/// inequality when `s(H) < 2`, where `lb_gamma` is undefined.
pub fn criterion_5(caps: &Caps) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let instances = match sandwich_instances(caps) {
        Ok(v) => v,
        Err(e) => {
            t.error("instances", e);
            return t.finish(5, start);
        }
    };
    let results: Vec<_> = instances
        .par_iter()
        .map(|(h, n)| {
            let got = (|| -> Result<(i64, Option<i64>, usize)> {
                let d = ceil_i64(&lb_delta_star(h, *n)?);
                let g = if sparseness(h) >= 2 { Some(ceil_i64(&lb_gamma(h, *n, caps)?)) } else { None };
                Ok((d, g, wsat(*n, h, caps)?))
            })();
            (h, *n, got)
        })
        .collect();
    let mut gamma_cases = 0;
    for (h, n, got) in results {
        match got {
            Ok((d, Some(g), w)) => {
                gamma_cases += 1;
                t.check(d <= g && g <= w as i64, || format!("{} n={n}: {d} <= {g} <= {w} fails", label(h)))
            }
            Ok((d, None, w)) => t.check(d <= w as i64, || format!("{} n={n}: {d} <= {w} fails", label(h))),
            Err(e) => t.error(&format!("{} n={n}", label(h)), e),
        }
    }
    t.notes.push(format!(
        "{} pairs, {gamma_cases} with s(H) >= 2 checked in full",
        instances.len()
    ));
    t.finish(5, start)
}

/// Rank formula against brute force: `r = 2`, `n in 3..=5`, `q in 1..=2`,
/// `a_1, a_2 in 0..=3`, `a_0 in -6..=3`.
pub fn criterion_6(caps: &Caps) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut grid = Vec::new();
    for n in 3..=5usize {
        for q in 1..=2u32 {
            for a1 in 0..=3i64 {
                for a2 in 0..=3i64 {
                    for a0 in -6..=3i64 {
                        grid.push((n, q, [a0, a1, a2]));
                    }
                }
            }
        }
    }
    let results: Vec<_> = grid
        .par_iter()
        .map(|&(n, q, a)| {
            let got = (|| -> Result<(u64, BigInt)> {
                let params = CountParams::from_integers(2, &a)?;
                let full = MultiEdgeSet::multiplied(&clique(n, 2), q)?;
                Ok((matroid_rank_bruteforce(&full, &params, caps)?, matroid_rank_formula(n, q, &params)?))
            })();
            (n, q, a, got)
        })
        .collect();
    for (n, q, a, got) in results {
        match got {
            Ok((b, f)) => t.check(BigInt::from(b) == f, || format!("n={n} q={q} a={a:?}: brute {b}, formula {f}")),
            Err(e) => t.error(&format!("n={n} q={q} a={a:?}"), e),
        }
    }
    t.finish(6, start)
}

/// `verify_kk_exhaustive` for `n <= 6`, `r <= 3`, `1 <= e <= min(8, C(n,r))`, `1 <= m < r`.
pub fn criterion_7(caps: &Caps) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut cases = Vec::new();
    for n in 1..=6usize {
        for r in 2..=3usize.min(n) {
            for e in 1..=(binom_usize(n, r) as usize).min(8) {
                for m in 1..r {
                    cases.push((n, r, e, m));
                }
            }
        }
    }
    let results: Vec<_> = cases
        .par_iter()
        .map(|&(n, r, e, m)| ((n, r, e, m), verify_kk_exhaustive(n, r, e, m, caps)))
        .collect();
    for ((n, r, e, m), got) in results {
        match got {
            Ok(rep) => t.check(rep.pass, || {
                format!("n={n} r={r} e={e} m={m}: min shadow {} vs bound {}", rep.min_found, rep.bound)
            }),
            Err(e2) => t.error(&format!("n={n} r={r} e={e} m={m}"), e2),
        }
    }
    t.finish(7, start)
}

/// Hosts close at `n = 8` and the edge count over `n` at `n = 12` is
/// within `0.15` of `delta/r - 1/C(r+delta-1, r-1)`.
pub fn criterion_8(caps: &Caps) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    for k in [3usize, 4] {
        let g = clique(k, 2);
        let p: Vec<usize> = (0..k).collect();
        let delta = k - 1;
        let run = || -> Result<(bool, usize, Rational)> {
            let c = build_construction_h(&g, &p, caps)?;
            let fam = c.family()?;
            let host8 = build_saturated_host(&c, 8, caps)?;
            let res = closure(&host8.host, &fam, caps)?;
            let closes = res.is_complete() && res.certificate.validate_saturating(&fam).is_ok();
            let host12 = build_saturated_host(&c, 12, caps)?;
            let measured = ratio(host12.host.num_edges() as i64, 12);
            Ok((closes, host8.host.num_edges(), measured))
        };
        match run() {
            Ok((closes, e8, measured)) => {
                t.check(closes, || format!("K_{k}: host at n=8 ({e8} edges) does not close"));
                let target = delta_star_coefficient(2, delta);
                let gap = (rational::to_f64(&measured) - rational::to_f64(&target)).abs();
                t.check(gap <= 0.15, || {
                    format!("K_{k}: coefficient {} vs {} at n=12", rational::format(&measured), rational::format(&target))
                });
                t.notes.push(format!(
                    "K_{k}: {e8} edges at n=8, coefficient {} at n=12 against {}",
                    rational::format(&measured),
                    rational::format(&target)
                ));
            }
            Err(e) => t.error(&format!("K_{k}"), e),
        }
    }
    t.finish(8, start)
}

/// `rho_sat(4, K_3) = 3`, `rho_sat(5, K_3) = 4`, and `rho_sat <= wsat`
/// on every corpus instance with `C(n,r) <= 10`.
pub fn criterion_9(caps: &Caps) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let k3 = clique(3, 2);
    for (n, want) in [(4, 3), (5, 4)] {
        match solve_rhosat(&k3, n, SolveMode::Exact, caps) {
            Ok(res) => t.check(res.value == Some(int(want)) && res.dual_verified, || {
                format!("rho_sat({n}, K_3) = {:?}, dual verified {}", res.value, res.dual_verified)
            }),
            Err(e) => t.error(&format!("rho_sat({n}, K_3)"), e),
        }
    }
    let mut instances = Vec::new();
    for h in builtin_corpus(caps).unwrap_or_default() {
        for n in h.n()..=10 {
            if binom_usize(n, h.r()) <= 10 {
                instances.push((h.clone(), n));
            }
        }
    }
    let results: Vec<_> = instances
        .par_iter()
        .map(|(h, n)| {
            let got = (|| -> Result<(Rational, bool, usize)> {
                let res = solve_rhosat(h, *n, SolveMode::Exact, caps)?;
                Ok((res.value.expect("exact"), res.dual_verified, wsat(*n, h, caps)?))
            })();
            (h, *n, got)
        })
        .collect();
    let (mut equal, mut strict) = (0, Vec::new());
    for (h, n, got) in results {
        match got {
            Ok((rho, dual, w)) => {
                t.check(dual && rho <= int(w as i64), || {
                    format!("{} n={n}: rho_sat {} vs wsat {w}, dual {dual}", label(h), rational::format(&rho))
                });
                if rho == int(w as i64) {
                    equal += 1;
                } else {
                    strict.push(format!("{} n={n}: {} < {w}", label(h), rational::format(&rho)));
                }
            }
            Err(e) => t.error(&format!("{} n={n}", label(h)), e),
        }
    }
    t.notes.push(format!("rho_sat = wsat on {equal} of {} instances", instances.len()));
    if !strict.is_empty() {
        t.notes.push(format!("strict gaps: {}", strict.join("; ")));
    }
    t.finish(9, start)
}

/// Exhaustive axiom checks for LP optima on hosts `K_n^r` with at most 6
/// edges, and for count polymatroids on every host with at most 6 edges
/// on 4 or 5 vertices.
pub fn criterion_10(caps: &Caps) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut lp_cases = Vec::new();
    for h in builtin_corpus(caps).unwrap_or_default() {
        for n in h.n()..=6 {
            if binom_usize(n, h.r()) <= 6 {
                lp_cases.push((h.clone(), n));
            }
        }
    }
    let results: Vec<_> = lp_cases
        .par_iter()
        .map(|(h, n)| {
            let got = solve_rhosat(h, *n, SolveMode::Exact, caps).and_then(|res| verify_polymatroid_axioms(h, &res, caps));
            (h, *n, got)
        })
        .collect();
    for (h, n, got) in results {
        match got {
            Ok(rep) => t.check(rep.pass(), || format!("LP optimum {} n={n}: {rep:?}", label(h))),
            Err(e) => t.error(&format!("LP optimum {} n={n}", label(h)), e),
        }
    }
    let lp_checked = t.checked;
    let mut poly_cases = Vec::new();
    for (v, r) in [(4usize, 2usize), (5, 2), (4, 3), (5, 3)] {
        let m = binom_usize(v, r) as usize;
        for k in 1..=m.min(6) {
            for key in iso_classes(v, r, k, caps).map(|l| l.to_vec()).unwrap_or_default() {
                for params in param_grid(r) {
                    poly_cases.push((v, r, key.clone(), params));
                }
            }
        }
    }
    let results: Vec<_> = poly_cases
        .par_iter()
        .map(|(v, _, key, params)| {
            let got = CountPolymatroid::new(*v, params.clone(), caps)
                .and_then(|poly| poly.rho_all_subsets(key))
                .map(|values| polymatroid_values_report(&values));
            (key, params, got)
        })
        .collect();
    let mut capped = 0;
    for (key, params, got) in results {
        match got {
            Ok(rep) => t.check(rep.pass(), || format!("count polymatroid {key:?} a={:?}: {rep:?}", params.a())),
            Err(WsatError::CapExceeded { .. }) => capped += 1,
            Err(e) => t.error(&format!("count polymatroid {key:?}"), e),
        }
    }
    t.notes.push(format!(
        "{lp_checked} LP optima, {} count polymatroid tables, {capped} over the multiplicity cap",
        t.checked - lp_checked
    ));
    t.finish(10, start)
}

fn param_grid(r: usize) -> Vec<CountParams> {
    let mut out = Vec::new();
    let a0s = [int(-3), int(-1), ratio(-1, 2), int(0), int(1)];
    let lvl = [int(0), ratio(1, 2), int(1), int(2)];
    for a0 in &a0s {
        for a1 in &lvl {
            for a2 in [int(0), ratio(1, 3), int(1)] {
                let mut a = vec![a0.clone(), a1.clone(), a2];
                if r == 3 {
                    a.push(if a1 == &int(0) { int(1) } else { int(0) });
                }
                if let Ok(p) = CountParams::new(r, a) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Random `(F, family)` instances: 100 shuffled closure orders each give
/// the same closure, and every certificate replays to it.
pub fn criterion_11(caps: &Caps, seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let corpus = builtin_corpus(caps).unwrap_or_default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = Vec::new();
    while instances.len() < 20 {
        let r = if rng.gen_bool(0.7) { 2 } else { 3 };
        let n = if r == 2 { rng.gen_range(5..=8) } else { rng.gen_range(5..=6) };
        let pool: Vec<&Hypergraph> = corpus.iter().filter(|h| h.r() == r && h.n() <= n).collect();
        let k = if rng.gen_bool(0.25) { 2 } else { 1 };
        let patterns: Vec<Hypergraph> = pool.choose_multiple(&mut rng, k).map(|h| (*h).clone()).collect();
        let density = rng.gen_range(0.15..0.5);
        let edges: Vec<u64> = Hypergraph::complete(n, r)
            .edges()
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(density))
            .collect();
        let f = match Hypergraph::from_masks(n, r, edges) {
            Ok(f) => f,
            Err(e) => {
                t.error("random host", e);
                continue;
            }
        };
        instances.push((f, patterns, rng.gen::<u64>()));
    }
    let results: Vec<_> = instances
        .par_iter()
        .enumerate()
        .map(|(i, (f, patterns, seed))| {
            let got = (|| -> Result<(bool, bool)> {
                let fam = Family::new(patterns.clone())?;
                let base = closure(f, &fam, caps)?;
                let mut same = base.certificate.replay(&fam)? == base.closure;
                let mut replays = true;
                for j in 0..100u64 {
                    let run = closure_shuffled(f, &fam, seed.wrapping_add(j), caps)?;
                    same &= run.closure == base.closure;
                    replays &= run.certificate.replay(&fam)? == run.closure;
                }
                Ok((same, replays))
            })();
            (i, got)
        })
        .collect();
    for (i, got) in results {
        match got {
            Ok((same, replays)) => {
                t.check(same, || format!("instance {i}: closures differ"));
                t.check(replays, || format!("instance {i}: certificate fails to replay"));
            }
            Err(e) => t.error(&format!("instance {i}"), e),
        }
    }
    t.notes.push("20 instances, 100 shuffled orders each".into());
    t.finish(11, start)
}

/// Seed for the random instances of criterion 11 unless one is given.
pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn run_criterion(id: usize, caps: &Caps, seed: u64) -> Result<CriterionReport> {
    Ok(match id {
        1 => criterion_1(caps),
        2 => criterion_2(caps),
        3 => criterion_3(caps),
        4 => criterion_4(caps),
        5 => criterion_5(caps),
        6 => criterion_6(caps),
        7 => criterion_7(caps),
        8 => criterion_8(caps),
        9 => criterion_9(caps),
        10 => criterion_10(caps),
        11 => criterion_11(caps, seed),
        _ => return Err(WsatError::arg(format!("no criterion {id}"))),
    })
}

/// All criteria in order.
pub fn run_all(caps: &Caps, seed: u64) -> Vec<CriterionReport> {
    (1..=CRITERIA).map(|id| run_criterion(id, caps, seed).expect("valid id")).collect()
}

/// One `PASS`/`FAIL` line.
pub fn summary_line(rep: &CriterionReport) -> String {
    format!(
        "{} [{:>2}] {} ({} checks, {:.1}s)",
        if rep.pass { "PASS" } else { "FAIL" },
        rep.id,
        rep.title,
        rep.checked,
        rep.seconds
    )
}
