//! `rho_sat(n, H)`: the largest value of `rho(K_n^r)` over weakly
//! `H`-saturated 1-polymatroids, solved as a linear program.

pub mod lp;
pub mod simplex;

use std::collections::HashMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::combinatorics::binom_usize;
use crate::copies::copies_in_complete;
use crate::count_polymatroid::{CountParams, CountPolymatroid};
use crate::error::{Result, WsatError};
use crate::hypergraph::{sparseness, vertices_of, Hypergraph};
use crate::rational::{self, Rational};

pub use lp::{build_lp, expected_row_count, LpRow, OrbitLp, Rel, RowTag, SetFunctionLP};
use simplex::{maximize, verify_dual, verify_primal, LpNumber, LpOutcome, Row};

/// Full-LP cross-check threshold on `C(n,r)`.
pub const FULL_CHECK_EDGES: usize = 6;
/// Exhaustive feasibility threshold on `C(n,r)` for count polymatroids.
pub const FEASIBILITY_EXHAUSTIVE_EDGES: usize = 10;
/// Exhaustive axiom check threshold on `C(n,r)`.
pub const AXIOM_CHECK_EDGES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportKind {
    Full,
    Copy,
    CopyMinusEdge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportValue {
    pub kind: SupportKind,
    pub edges: Vec<Vec<usize>>,
    #[serde(with = "rational::option", skip_serializing_if = "Option::is_none", default)]
    pub value: Option<Rational>,
    pub approx: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RhosatResult {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub mode: SolveMode,
    /// False on the float path.
    pub exact: bool,
    #[serde(with = "rational::option", skip_serializing_if = "Option::is_none", default)]
    pub value: Option<Rational>,
    pub approx: f64,
    /// Orbit variables and rows actually solved.
    pub variables: usize,
    pub rows: usize,
    pub pivots: usize,
    pub dual_verified: bool,
    pub primal_verified: bool,
    /// Optimum of the unreduced LP when `m <= FULL_CHECK_EDGES`.
    #[serde(with = "rational::option", skip_serializing_if = "Option::is_none", default)]
    pub full_lp_value: Option<Rational>,
    pub support: Vec<SupportValue>,
    #[serde(skip)]
    class_values: Vec<Rational>,
    #[serde(skip)]
    class_approx: Vec<f64>,
    #[serde(skip)]
    orbit: Option<OrbitLp>,
}

impl RhosatResult {
    /// Optimal value of an edge set of `K_n^r` (exact mode only).
    pub fn rho_of(&self, edges: &[u64]) -> Option<Rational> {
        let orbit = self.orbit.as_ref()?;
        self.class_values.get(orbit.class_of(edges)).cloned()
    }

    pub fn approx_of(&self, edges: &[u64]) -> Option<f64> {
        let orbit = self.orbit.as_ref()?;
        self.class_approx.get(orbit.class_of(edges)).copied()
    }
}

fn to_rows<T: LpNumber>(orbit: &OrbitLp) -> Vec<Row<T>> {
    orbit
        .rows
        .iter()
        .map(|(_, lhs, rhs)| Row {
            lhs: lhs.iter().map(|&(v, c)| (v - 1, T::from_i64(c))).collect(),
            rhs: T::from_i64(*rhs),
        })
        .collect()
}

struct Solved<T> {
    values: Vec<T>,
    value: T,
    pivots: usize,
    dual_ok: bool,
    primal_ok: bool,
}

fn solve_orbit<T: LpNumber>(orbit: &OrbitLp) -> Result<Solved<T>> {
    let vars = orbit.num_variables();
    if vars == 0 {
        return Ok(Solved {
            values: vec![T::zero()],
            value: T::zero(),
            pivots: 0,
            dual_ok: true,
            primal_ok: true,
        });
    }
    let rows = to_rows::<T>(orbit);
    let c = vec![(orbit.full_class - 1, T::one())];
    let sol = match maximize(vars, &rows, &c) {
        LpOutcome::Optimal(sol) => sol,
        LpOutcome::Unbounded => return Err(WsatError::pre("set-function LP reported unbounded")),
    };
    let dual_ok = verify_dual(vars, &rows, &c, &sol);
    let primal_ok = verify_primal(&rows, &c, &sol);
    let mut values = vec![T::zero()];
    values.extend(sol.x.iter().cloned());
    Ok(Solved {
        values,
        value: sol.value,
        pivots: sol.pivots,
        dual_ok,
        primal_ok,
    })
}

/// Optimum of the unreduced LP, exact. `rho(∅)` is eliminated.
pub fn solve_full_lp(lp: &SetFunctionLP) -> Result<Rational> {
    if lp.m == 0 {
        return Ok(Rational::zero());
    }
    let rows: Vec<Row<Rational>> = lp
        .rows
        .iter()
        .filter(|row| row.tag != RowTag::EmptyZero)
        .map(|row| Row {
            lhs: row
                .lhs
                .iter()
                .filter(|&&(v, _)| v != 0)
                .map(|&(v, c)| (v - 1, rational::int(c)))
                .collect(),
            rhs: rational::int(row.rhs),
        })
        .collect();
    let c = vec![(lp.objective - 1, Rational::one())];
    match maximize(lp.variables - 1, &rows, &c) {
        LpOutcome::Optimal(sol) if verify_dual(lp.variables - 1, &rows, &c, &sol) => Ok(sol.value),
        LpOutcome::Optimal(_) => Err(WsatError::pre("full LP dual certificate failed")),
        LpOutcome::Unbounded => Err(WsatError::pre("full LP reported unbounded")),
    }
}

/// Solves the orbit-reduced LP. Exact mode is limited to
/// `C(n,r) <= caps.lp_exact_edges`; float mode runs up to the LP cap and
/// is flagged inexact.
pub fn solve_rhosat(h: &Hypergraph, n: usize, mode: SolveMode, caps: &Caps) -> Result<RhosatResult> {
    let orbit = OrbitLp::build(h, n, caps)?;
    let m = orbit.m;
    if mode == SolveMode::Exact {
        caps.check(
            "exact LP edge count (float mode allows more)",
            m as u128,
            caps.lp_exact_edges as u128,
        )?;
    }
    let (class_values, class_approx, value, approx, pivots, dual_ok, primal_ok) = match mode {
        SolveMode::Exact => {
            let s = solve_orbit::<Rational>(&orbit)?;
            let approx: Vec<f64> = s.values.iter().map(rational::to_f64).collect();
            let a = rational::to_f64(&s.value);
            (s.values, approx, Some(s.value), a, s.pivots, s.dual_ok, s.primal_ok)
        }
        SolveMode::Float => {
            let s = solve_orbit::<f64>(&orbit)?;
            (Vec::new(), s.values, None, s.value, s.pivots, s.dual_ok, s.primal_ok)
        }
    };
    let full_lp_value = if mode == SolveMode::Exact && m <= FULL_CHECK_EDGES {
        Some(solve_full_lp(&build_lp(h, n, caps)?)?)
    } else {
        None
    };
    let all = Hypergraph::complete(n, h.r()).edges().to_vec();
    let mut support = Vec::new();
    let mut add = |kind, edges: &[u64]| {
        let id = orbit.class_of(edges);
        support.push(SupportValue {
            kind,
            edges: edges.iter().map(|&e| vertices_of(e)).collect(),
            value: class_values.get(id).cloned(),
            approx: class_approx[id],
        });
    };
    add(SupportKind::Full, &all);
    for copy in copies_in_complete(h, n, caps)? {
        add(SupportKind::Copy, &copy);
        for e in &copy {
            let rest: Vec<u64> = copy.iter().copied().filter(|f| f != e).collect();
            add(SupportKind::CopyMinusEdge, &rest);
        }
    }
    Ok(RhosatResult {
        n,
        r: h.r(),
        m,
        mode,
        exact: mode == SolveMode::Exact,
        value,
        approx,
        variables: orbit.num_variables(),
        rows: orbit.rows.len(),
        pivots,
        dual_verified: dual_ok,
        primal_verified: primal_ok,
        full_lp_value,
        support,
        class_values,
        class_approx,
        orbit: Some(orbit),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub m: usize,
    pub normalized: bool,
    /// `0 <= rho(A) <= |A|` everywhere.
    pub bounded: bool,
    pub monotone: bool,
    pub submodular: bool,
    pub saturating: bool,
    /// Scale factors in `(0, 1]` for which every LP row still holds.
    #[serde(with = "rational::vec")]
    pub scales_checked: Vec<Rational>,
    pub scale_feasible: bool,
    /// A violating pair `(A, B)` as subset masks, if any.
    pub violation: Option<(usize, usize)>,
}

impl AxiomReport {
    pub fn pass(&self) -> bool {
        self.normalized && self.bounded && self.monotone && self.submodular && self.saturating && self.scale_feasible
    }
}

fn row_holds(row: &LpRow, values: &[Rational], scale: &Rational) -> bool {
    let lhs = row
        .lhs
        .iter()
        .fold(Rational::zero(), |acc, &(v, c)| acc + &values[v] * rational::int(c));
    let lhs = lhs * scale;
    let rhs = rational::int(row.rhs);
    match row.rel {
        Rel::Le => lhs <= rhs,
        Rel::Eq => lhs == rhs,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolymatroidCheck {
    pub m: usize,
    pub normalized: bool,
    /// `0 <= rho(A) <= |A|` everywhere.
    pub bounded: bool,
    pub monotone: bool,
    pub submodular: bool,
    /// A violating pair `(A, B)` as subset masks, if any.
    pub violation: Option<(usize, usize)>,
}

impl PolymatroidCheck {
    pub fn pass(&self) -> bool {
        self.normalized && self.bounded && self.monotone && self.submodular
    }
}

/// 1-polymatroid axioms over all pairs of subsets; `values` is indexed by
/// subset mask and has length `2^m`.
pub fn polymatroid_values_report(values: &[Rational]) -> PolymatroidCheck {
    let size = values.len();
    assert!(size.is_power_of_two(), "one value per subset");
    let m = size.trailing_zeros() as usize;
    let normalized = values[0].is_zero();
    let bounded = (0..size).all(|a| !values[a].is_negative() && values[a] <= rational::int(a.count_ones() as i64));
    let mut monotone = true;
    let mut submodular = true;
    let mut violation = None;
    'outer: for a in 0..size {
        for b in 0..size {
            let mono_ok = a & b != a || values[a] <= values[b];
            let sub_ok = &values[a | b] + &values[a & b] <= &values[a] + &values[b];
            monotone &= mono_ok;
            submodular &= sub_ok;
            if !(mono_ok && sub_ok) {
                violation = Some((a, b));
                break 'outer;
            }
        }
    }
    PolymatroidCheck {
        m,
        normalized,
        bounded,
        monotone,
        submodular,
        violation,
    }
}

/// [`polymatroid_values_report`] plus the saturation rows of `lp` and
/// feasibility of `c rho` for a few `c` in `(0, 1]`.
pub fn check_set_function(lp: &SetFunctionLP, values: &[Rational]) -> AxiomReport {
    assert_eq!(values.len(), 1usize << lp.m, "one value per subset");
    let base = polymatroid_values_report(values);
    let saturating = lp
        .rows
        .iter()
        .filter(|row| row.tag == RowTag::Saturation)
        .all(|row| row_holds(row, values, &Rational::one()));
    let scales_checked = vec![
        Rational::one(),
        rational::ratio(1, 2),
        rational::ratio(2, 7),
        rational::ratio(1, 1000),
    ];
    let scale_feasible = scales_checked
        .iter()
        .all(|c| lp.rows.iter().all(|row| row_holds(row, values, c)));
    AxiomReport {
        m: base.m,
        normalized: base.normalized,
        bounded: base.bounded,
        monotone: base.monotone,
        submodular: base.submodular,
        saturating,
        scales_checked,
        scale_feasible,
        violation: base.violation,
    }
}

/// Exhaustive axiom check of a solved optimum, for `C(n,r) <= 8`.
pub fn verify_polymatroid_axioms(h: &Hypergraph, res: &RhosatResult, caps: &Caps) -> Result<AxiomReport> {
    caps.check("axiom check edge count", res.m as u128, AXIOM_CHECK_EDGES as u128)?;
    if !res.exact {
        return Err(WsatError::pre("axiom check needs an exact solution"));
    }
    let lp = build_lp(h, res.n, caps)?;
    let all = Hypergraph::complete(res.n, res.r).edges().to_vec();
    let values: Vec<Rational> = (0..1usize << lp.m)
        .map(|sel| res.rho_of(&lp::subset_edges(&all, sel)).expect("exact values"))
        .collect();
    Ok(check_set_function(&lp, &values))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowFailure {
    pub tag: RowTag,
    /// `(edge set, coefficient)` per term.
    pub terms: Vec<(Vec<Vec<usize>>, i64)>,
    #[serde(with = "rational")]
    pub lhs: Rational,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub n: usize,
    /// "exhaustive" or "sampled".
    pub mode: String,
    pub rows_checked: usize,
    pub feasible: bool,
    pub first_failure: Option<RowFailure>,
    /// `rho(E(K_n^r))`, which equals `L_a(K_n^r)`.
    #[serde(with = "rational")]
    pub full_value: Rational,
    #[serde(with = "rational")]
    pub p: Rational,
    /// `full_value` when feasible and `p >= 1`: a lower bound on `rho_sat`.
    #[serde(with = "rational::option")]
    pub bound: Option<Rational>,
}

/// Sampled monotone and submodular rows per unit of `C(n,r)` above the
/// exhaustive threshold.
pub const FEASIBILITY_SAMPLES: usize = 400;

/// Checks that the count polymatroid with `params` is a feasible point of
/// the LP: every row exhaustively for `C(n,r) <= 10`, otherwise the
/// singleton and saturation rows in full plus seeded random elementary rows.
pub fn check_count_poly_feasible(
    h: &Hypergraph,
    n: usize,
    params: &CountParams,
    seed: u64,
    caps: &Caps,
) -> Result<FeasibilityReport> {
    if params.r() != h.r() {
        return Err(WsatError::arg("uniformity of params and pattern differ"));
    }
    if h.is_empty() {
        return Err(WsatError::arg("pattern must be non-empty"));
    }
    let poly = CountPolymatroid::new(n, params.clone(), caps)?;
    let all = Hypergraph::complete(n, h.r()).edges().to_vec();
    let m = all.len();
    let p = params.p();
    let full_value = poly.rho(&all)?;
    let describe = |row: &LpRow, lhs: Rational| RowFailure {
        tag: row.tag,
        terms: row
            .lhs
            .iter()
            .map(|&(v, c)| (lp::subset_edges(&all, v).iter().map(|&e| vertices_of(e)).collect(), c))
            .collect(),
        lhs,
        rhs: row.rhs,
    };
    let finish = |mode: &str, rows_checked, first_failure: Option<RowFailure>| {
        let feasible = first_failure.is_none();
        FeasibilityReport {
            n,
            mode: mode.into(),
            rows_checked,
            feasible,
            first_failure,
            bound: (feasible && p >= Rational::one()).then(|| full_value.clone()),
            full_value: full_value.clone(),
            p: p.clone(),
        }
    };
    let eval = |row: &LpRow, value: &dyn Fn(usize) -> Result<Rational>| -> Result<Option<Rational>> {
        let mut lhs = Rational::zero();
        for &(v, c) in &row.lhs {
            lhs += value(v)? * rational::int(c);
        }
        let ok = match row.rel {
            Rel::Le => lhs <= rational::int(row.rhs),
            Rel::Eq => lhs == rational::int(row.rhs),
        };
        Ok((!ok).then_some(lhs))
    };
    if m <= FEASIBILITY_EXHAUSTIVE_EDGES {
        let lp = build_lp(h, n, caps)?;
        let values = poly.rho_all_subsets(&all)?;
        let lookup = |v: usize| Ok(values[v].clone());
        for (i, row) in lp.rows.iter().enumerate() {
            if let Some(lhs) = eval(row, &lookup)? {
                return Ok(finish("exhaustive", i + 1, Some(describe(row, lhs))));
            }
        }
        return Ok(finish("exhaustive", lp.rows.len(), None));
    }
    if m >= 64 {
        return Err(WsatError::cap("feasibility edge count", m as u128, 63));
    }
    // subsets as u64 index masks over `all`
    let cache = std::sync::Mutex::new(HashMap::<u64, Rational>::new());
    let all_ref = &all;
    let value = |v: usize| -> Result<Rational> {
        let key = v as u64;
        if let Some(x) = cache.lock().expect("cache").get(&key) {
            return Ok(x.clone());
        }
        let x = poly.rho(&lp::subset_edges(all_ref, v))?;
        cache.lock().expect("cache").insert(key, x.clone());
        Ok(x)
    };
    let mut rows: Vec<LpRow> = Vec::new();
    for x in 0..m {
        rows.push(LpRow {
            tag: RowTag::SingletonCap,
            lhs: vec![(1 << x, 1)],
            rel: Rel::Le,
            rhs: 1,
        });
    }
    let pos: HashMap<u64, usize> = all.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    for copy in copies_in_complete(h, n, caps)? {
        let c = copy.iter().fold(0usize, |acc, e| acc | 1 << pos[e]);
        for &e in &copy {
            rows.push(LpRow {
                tag: RowTag::Saturation,
                lhs: vec![(c, 1), (c ^ 1 << pos[&e], -1)],
                rel: Rel::Le,
                rhs: 0,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order: Vec<usize> = (0..m).collect();
    for _ in 0..FEASIBILITY_SAMPLES * m {
        let mut perm = order.clone();
        perm.shuffle(&mut rng);
        let size = rng.gen_range(0..=m - 2);
        let a = perm[..size].iter().fold(0usize, |acc, &i| acc | 1 << i);
        let (x, y) = (perm[size], perm[size + 1]);
        rows.push(LpRow {
            tag: RowTag::ElementaryMonotone,
            lhs: vec![(a, 1), (a | 1 << x, -1)],
            rel: Rel::Le,
            rhs: 0,
        });
        rows.push(LpRow {
            tag: RowTag::ElementarySubmodular,
            lhs: vec![(a | 1 << x | 1 << y, 1), (a, 1), (a | 1 << x, -1), (a | 1 << y, -1)],
            rel: Rel::Le,
            rhs: 0,
        });
    }
    for (i, row) in rows.iter().enumerate() {
        if let Some(lhs) = eval(row, &value)? {
            return Ok(finish("sampled", i + 1, Some(describe(row, lhs))));
        }
    }
    Ok(finish("sampled", rows.len(), None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Nondecreasing,
    Nonincreasing,
    Constant,
    NotMonotone,
    TooShort,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub n: usize,
    #[serde(with = "rational::option", skip_serializing_if = "Option::is_none", default)]
    pub value: Option<Rational>,
    pub approx: f64,
    /// `rho_sat / C(n, s-1)`; absent when `s(H) < 1`.
    #[serde(with = "rational::option", skip_serializing_if = "Option::is_none", default)]
    pub normalized: Option<Rational>,
    pub normalized_approx: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendTable {
    pub s: i64,
    pub rows: Vec<TrendRow>,
    /// Direction of the normalized column; no limit is claimed.
    pub trend: Trend,
}

/// `rho_sat` over a range of `n`, solved concurrently.
pub fn rhosat_trend(h: &Hypergraph, ns: &[usize], mode: SolveMode, caps: &Caps) -> Result<TrendTable> {
    let s = sparseness(h);
    let rows = ns
        .par_iter()
        .map(|&n| -> Result<TrendRow> {
            let res = solve_rhosat(h, n, mode, caps)?;
            let denom = (s >= 1).then(|| binom_usize(n, s as usize - 1)).filter(|&d| d > 0);
            let normalized = match (&res.value, denom) {
                (Some(v), Some(d)) => Some(v / rational::from_u128(d)),
                _ => None,
            };
            let normalized_approx = denom.map(|d| res.approx / d.to_f64().unwrap_or(f64::INFINITY));
            Ok(TrendRow {
                n,
                value: res.value,
                approx: res.approx,
                normalized,
                normalized_approx,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let seq: Vec<f64> = rows.iter().filter_map(|r| r.normalized_approx).collect();
    let trend = if seq.len() < 2 {
        Trend::TooShort
    } else {
        let tol = simplex::FLOAT_CHECK_TOL;
        let up = seq.windows(2).all(|w| w[1] >= w[0] - tol);
        let down = seq.windows(2).all(|w| w[1] <= w[0] + tol);
        match (up, down) {
            (true, true) => Trend::Constant,
            (true, false) => Trend::Nondecreasing,
            (false, true) => Trend::Nonincreasing,
            (false, false) => Trend::NotMonotone,
        }
    };
    Ok(TrendTable { s, rows, trend })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::gamma_count_params;
    use crate::rational::{int, ratio};
    use crate::wsat::{wsat_exact, Family, WsatOptions};

    fn k(n: usize, r: usize) -> Hypergraph {
        Hypergraph::complete(n, r)
    }

    fn exact(h: &Hypergraph, n: usize) -> RhosatResult {
        solve_rhosat(h, n, SolveMode::Exact, &Caps::default()).unwrap()
    }

    #[test]
    fn triangle_values() {
        for (n, want) in [(3, 2), (4, 3), (5, 4)] {
            let res = exact(&k(3, 2), n);
            assert_eq!(res.value, Some(int(want)), "n={n}");
            assert!(res.dual_verified && res.primal_verified);
        }
    }

    #[test]
    fn full_lp_agrees_with_orbit_lp() {
        let caps = Caps::default();
        let path = Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let star = Hypergraph::new(4, 2, vec![vec![0, 1], vec![0, 2], vec![0, 3]]).unwrap();
        for (h, n) in [(k(3, 2), 3), (k(3, 2), 4), (path.clone(), 4), (star, 4), (k(4, 3), 4), (k(3, 3), 4)] {
            let res = exact(&h, n);
            let full = solve_full_lp(&build_lp(&h, n, &caps).unwrap()).unwrap();
            assert_eq!(res.full_lp_value.as_ref(), Some(&full));
            assert_eq!(res.value, Some(full));
        }
    }

    #[test]
    fn trivial_instances() {
        let res = exact(&k(4, 2), 3);
        assert_eq!(res.value, Some(int(3)));
        let res = exact(&k(3, 3), 2);
        assert_eq!((res.m, res.value), (0, Some(int(0))));
        let single = Hypergraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(exact(&single, 4).value, Some(int(0)));
    }

    #[test]
    fn bounded_by_wsat_and_edge_count() {
        let caps = Caps::default();
        let path = Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let c4 = Hypergraph::new(4, 2, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        for (h, n) in [(k(3, 2), 5), (path, 5), (c4, 5), (k(4, 3), 5), (k(4, 2), 5)] {
            let res = exact(&h, n);
            let v = res.value.clone().unwrap();
            assert!(!v.is_negative());
            assert!(v <= rational::from_u128(binom_usize(n, h.r())));
            let w = wsat_exact(n, &Family::single(&h).unwrap(), &WsatOptions::default(), &caps).unwrap();
            assert!(v <= int(w.value as i64), "{h:?} n={n}");
        }
    }

    #[test]
    fn support_lists_copies() {
        let res = exact(&k(3, 2), 4);
        let copies = res.support.iter().filter(|s| s.kind == SupportKind::Copy).count();
        let minus = res.support.iter().filter(|s| s.kind == SupportKind::CopyMinusEdge).count();
        assert_eq!((copies, minus), (4, 12));
        assert_eq!(res.support[0].kind, SupportKind::Full);
        assert_eq!(res.support[0].value, Some(int(3)));
        for s in &res.support {
            if s.kind == SupportKind::Copy {
                assert_eq!(s.value, Some(int(2)));
            }
        }
    }

    #[test]
    fn exact_cap_and_float_path() {
        let caps = Caps::default();
        let err = solve_rhosat(&k(3, 2), 6, SolveMode::Exact, &caps).unwrap_err();
        assert!(matches!(err, WsatError::CapExceeded { .. }));
        let res = solve_rhosat(&k(3, 2), 5, SolveMode::Float, &caps).unwrap();
        assert!(!res.exact && res.value.is_none());
        assert!((res.approx - 4.0).abs() < 1e-7 && res.dual_verified);
        let res = solve_rhosat(&k(3, 2), 6, SolveMode::Float, &caps).unwrap();
        assert!((res.approx - 5.0).abs() < 1e-7, "{}", res.approx);
    }

    #[test]
    fn axioms_hold_on_solutions() {
        let caps = Caps::default();
        let path = Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2]]).unwrap();
        for (h, n) in [(k(3, 2), 4), (path, 4), (k(4, 3), 5), (k(3, 3), 4)] {
            if binom_usize(n, h.r()) > 8 {
                assert!(verify_polymatroid_axioms(&h, &exact(&h, n), &caps).is_err());
                continue;
            }
            let rep = verify_polymatroid_axioms(&h, &exact(&h, n), &caps).unwrap();
            assert!(rep.pass(), "{rep:?}");
        }
    }

    #[test]
    fn axiom_check_catches_violations() {
        let lp = build_lp(&k(3, 2), 3, &Caps::default()).unwrap();
        let card: Vec<Rational> = (0..8usize).map(|a| int(a.count_ones() as i64)).collect();
        let rep = check_set_function(&lp, &card);
        assert!(rep.monotone && rep.submodular && !rep.saturating);
        let mut bad = card.clone();
        bad[7] = int(3);
        bad[3] = int(1);
        let rep = check_set_function(&lp, &bad);
        assert!(!rep.submodular && rep.violation.is_some());
        let mut sat: Vec<Rational> = (0..8usize).map(|a| int(a.count_ones().min(2) as i64)).collect();
        assert!(check_set_function(&lp, &sat).pass());
        sat[0] = int(1);
        assert!(!check_set_function(&lp, &sat).normalized);
    }

    #[test]
    fn gamma_parameters_are_feasible() {
        let caps = Caps::default();
        let params = gamma_count_params(&k(3, 2), &caps).unwrap();
        assert_eq!(params.a(), &[int(-1), int(1), int(0)]);
        let rep = check_count_poly_feasible(&k(3, 2), 5, &params, 1, &caps).unwrap();
        assert!(rep.feasible && rep.mode == "exhaustive");
        assert_eq!(rep.bound, Some(int(4)));
        let params = gamma_count_params(&k(4, 2), &caps).unwrap();
        assert_eq!(params.a(), &[int(-3), int(2), int(0)]);
        let rep = check_count_poly_feasible(&k(4, 2), 6, &params, 1, &caps).unwrap();
        assert!(rep.feasible && rep.mode == "sampled", "{rep:?}");
        assert_eq!(rep.bound, Some(int(9)));
    }

    #[test]
    fn violating_parameters_report_a_row() {
        let caps = Caps::default();
        let params = CountParams::from_integers(2, &[0, 1, 0]).unwrap();
        let rep = check_count_poly_feasible(&k(3, 2), 4, &params, 1, &caps).unwrap();
        assert!(!rep.feasible && rep.bound.is_none());
        let fail = rep.first_failure.unwrap();
        assert_eq!(fail.tag, RowTag::Saturation);
        assert!(fail.lhs > int(fail.rhs));
        // |A| itself: the free matroid never saturates
        let free = CountParams::from_integers(2, &[0, 0, 1]).unwrap();
        let rep = check_count_poly_feasible(&k(4, 2), 6, &free, 3, &caps).unwrap();
        assert_eq!(rep.first_failure.unwrap().tag, RowTag::Saturation);
    }

    #[test]
    fn count_certificate_below_rhosat() {
        let caps = Caps::default();
        for (h, n) in [(k(3, 2), 4), (k(3, 2), 5), (k(4, 2), 5)] {
            let params = gamma_count_params(&h, &caps).unwrap();
            let rep = check_count_poly_feasible(&h, n, &params, 0, &caps).unwrap();
            let v = exact(&h, n).value.unwrap();
            assert!(rep.bound.unwrap() <= v);
        }
    }

    #[test]
    fn triangle_trend() {
        let t = rhosat_trend(&k(3, 2), &[3, 4, 5], SolveMode::Exact, &Caps::default()).unwrap();
        let vals: Vec<_> = t.rows.iter().map(|r| r.value.clone().unwrap()).collect();
        assert_eq!(vals, vec![int(2), int(3), int(4)]);
        let norm: Vec<_> = t.rows.iter().map(|r| r.normalized.clone().unwrap()).collect();
        assert_eq!(norm, vec![ratio(2, 3), ratio(3, 4), ratio(4, 5)]);
        assert_eq!(t.trend, Trend::Nondecreasing);
        let empty = rhosat_trend(&k(3, 2), &[], SolveMode::Exact, &Caps::default()).unwrap();
        assert!(empty.rows.is_empty());
        assert_eq!(empty.trend, Trend::TooShort);
    }

    #[test]
    fn result_serializes() {
        let res = exact(&k(3, 2), 4);
        let json = serde_json::to_value(&res).unwrap();
        assert_eq!(json["value"], "3/1");
        assert_eq!(json["support"][0]["kind"], "full");
        let lp = build_lp(&k(3, 2), 3, &Caps::default()).unwrap();
        let json = serde_json::to_value(&lp.rows[0]).unwrap();
        assert_eq!(json["tag"], "empty-zero");
        assert_eq!(json["rel"], "=");
    }
}
