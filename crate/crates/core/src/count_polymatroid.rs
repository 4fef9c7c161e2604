//! Count functions `L_a`, count matroids on multiplied edge sets and
//! count polymatroids with rational coefficients.
//!
//! Independence test. Let `B` be a multiset of edges and write `w(S)` for
//! the number of elements of `B` whose edge lies in `S`. By definition `B`
//! is independent iff `|C| <= L(C)` for every non-empty `C` contained in `B`.
//! If some `C` violates this, so does the full preimage `C*` of `pi(C)`
//! inside `B`: `L(C*) = L(C)` since `L` only sees the projection, and
//! `|C*| >= |C|`. Conversely a violating full preimage is itself a
//! violating `C`. So `B` is independent iff `w(S) <= L(S)` for every
//! non-empty edge set `S` contained in `pi(B)`, which is `2^{|pi(B)|}`
//! checks instead of `2^{|B|}`.
//!
//! Greedy rank. Elements are added one edge at a time. When `B` is
//! independent and copies of edge `x` are offered, only sets `S`
//! containing `x` change their count, so the number of copies that can be
//! accepted is `min_{S ∋ x} (L(S) - w_B(S))`, clamped to what is offered.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::combinatorics::binom_usize;
use crate::copies::copies_in_complete;
use crate::error::{Result, WsatError};
use crate::hypergraph::{shadow_size, sub_masks, vertices_of, Hypergraph, MultiEdgeSet};
use crate::rational::{self, Rational};

/// Coefficients `a_0..a_r` of `L_a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountParams {
    #[serde(with = "rational::vec")]
    a: Vec<Rational>,
    r: usize,
}

impl CountParams {
    pub fn new(r: usize, a: Vec<Rational>) -> Result<Self> {
        if a.len() != r + 1 {
            return Err(WsatError::arg(format!(
                "expected {} coefficients for r={r}, got {}",
                r + 1,
                a.len()
            )));
        }
        if a.iter().skip(1).any(|x| x.is_negative()) {
            return Err(WsatError::arg("coefficients a_1..a_r must be non-negative"));
        }
        Ok(CountParams { a, r })
    }

    pub fn from_integers(r: usize, a: &[i64]) -> Result<Self> {
        Self::new(r, a.iter().map(|&x| rational::int(x)).collect())
    }

    /// `a_0 = c0`, `a_{level} = c`, all other coefficients zero.
    pub fn single_level(r: usize, level: usize, c: Rational, c0: Rational) -> Result<Self> {
        if level == 0 || level > r {
            return Err(WsatError::arg("level must be in 1..=r"));
        }
        let mut a = vec![Rational::zero(); r + 1];
        a[0] = c0;
        a[level] = c;
        Self::new(r, a)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    /// Least positive integer clearing all denominators.
    pub fn q(&self) -> u64 {
        rational::denominator_lcm(self.a.iter())
            .to_u64()
            .expect("denominator lcm fits u64")
    }

    /// `a_0 + sum_i a_i C(r, i)`, the value of `L` on a single edge.
    pub fn p(&self) -> Rational {
        let mut p = self.a[0].clone();
        for i in 1..=self.r {
            p += &self.a[i] * rational::from_u128(binom_usize(self.r, i));
        }
        p
    }

    /// All coefficients multiplied by `c > 0`.
    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(WsatError::arg("scale factor must be positive"));
        }
        Self::new(self.r, self.a.iter().map(|x| x * c).collect())
    }

    fn integral(&self) -> Result<Vec<i64>> {
        self.a
            .iter()
            .map(|x| {
                if rational::is_integer(x) {
                    x.to_integer()
                        .to_i64()
                        .ok_or_else(|| WsatError::arg("coefficient too large"))
                } else {
                    Err(WsatError::pre(format!(
                        "count matroid needs integer coefficients, got {}",
                        rational::format(x)
                    )))
                }
            })
            .collect()
    }

    /// `L_a(K_n^r)`.
    pub fn eval_complete(&self, n: usize) -> Rational {
        let mut v = self.a[0].clone();
        for i in 1..=self.r {
            v += &self.a[i] * rational::from_u128(binom_usize(n, i));
        }
        v
    }
}

fn check_r(g_r: usize, params: &CountParams) -> Result<()> {
    if g_r != params.r {
        return Err(WsatError::arg(format!(
            "uniformity mismatch: hypergraph r={g_r}, params r={}",
            params.r
        )));
    }
    Ok(())
}

/// `a_0 + sum_i a_i |shadow_i(G)|`.
pub fn eval_l(g: &Hypergraph, params: &CountParams) -> Result<Rational> {
    check_r(g.r(), params)?;
    let mut v = params.a[0].clone();
    for i in 1..=params.r {
        if !params.a[i].is_zero() {
            v += &params.a[i] * rational::int(shadow_size(g, i)? as i64);
        }
    }
    Ok(v)
}

/// `L_a` of a multiset, which only depends on its projection.
pub fn eval_l_multi(a: &MultiEdgeSet, params: &CountParams) -> Result<Rational> {
    eval_l(&a.projection(), params)
}

/// Integer-coefficient rank engine for `M(n, r, q, a)`.
#[derive(Debug, Clone)]
struct RankEngine {
    r: usize,
    a: Vec<i64>,
    q: u32,
    projection_cap: usize,
}

impl RankEngine {
    /// `min over S with x in S, S within support plus x, of L(S) - w(S)`,
    /// where `w` counts the given multiplicities.
    fn slack(&self, support: &[(u64, u32)], x: u64, x_mult: u32) -> i64 {
        let local: Vec<u64> = support.iter().map(|&(e, _)| e).filter(|&e| e != x).collect();
        let weights: Vec<i64> = support
            .iter()
            .filter(|&&(e, _)| e != x)
            .map(|&(_, m)| m as i64)
            .collect();
        // shadow element ids per level for x and every local edge
        let levels: Vec<usize> = (1..=self.r).filter(|&i| self.a[i] != 0).collect();
        let mut ids: HashMap<(usize, u64), usize> = HashMap::new();
        let mut subsets_of = |e: u64| -> Vec<(usize, usize)> {
            let mut out = Vec::new();
            for &i in &levels {
                for u in sub_masks(e, i) {
                    let next = ids.len();
                    let id = *ids.entry((i, u)).or_insert(next);
                    out.push((i, id));
                }
            }
            out
        };
        let x_subs = subsets_of(x);
        let local_subs: Vec<Vec<(usize, usize)>> = local.iter().map(|&e| subsets_of(e)).collect();
        let mut cnt = vec![0u32; ids.len()];
        let mut size = vec![0i64; self.r + 1];
        for &(i, id) in &x_subs {
            if cnt[id] == 0 {
                size[i] += 1;
            }
            cnt[id] += 1;
        }
        let mut w = x_mult as i64;
        let value = |size: &[i64], w: i64| -> i64 {
            let mut v = self.a[0];
            for &i in &levels {
                v += self.a[i] * size[i];
            }
            v - w
        };
        let mut best = value(&size, w);
        let d = local.len();
        let mut present = vec![false; d];
        for t in 1u64..(1u64 << d) {
            let j = t.trailing_zeros() as usize;
            if present[j] {
                present[j] = false;
                w -= weights[j];
                for &(i, id) in &local_subs[j] {
                    cnt[id] -= 1;
                    if cnt[id] == 0 {
                        size[i] -= 1;
                    }
                }
            } else {
                present[j] = true;
                w += weights[j];
                for &(i, id) in &local_subs[j] {
                    if cnt[id] == 0 {
                        size[i] += 1;
                    }
                    cnt[id] += 1;
                }
            }
            best = best.min(value(&size, w));
        }
        best
    }

    /// Copies of `x` added on top of the independent multiset `basis`.
    fn accept(&self, basis: &[(u64, u32)], x: u64, offered: u32) -> Result<u32> {
        if basis.len() + 1 > self.projection_cap {
            return Err(WsatError::cap(
                "independence test projection size",
                (basis.len() + 1) as u128,
                self.projection_cap as u128,
            ));
        }
        let current = basis.iter().find(|&&(e, _)| e == x).map_or(0, |&(_, m)| m);
        let room = self.slack(basis, x, current).max(0);
        Ok((room as u64).min(offered as u64).min((self.q - current) as u64) as u32)
    }

    /// Greedy rank of a multiset processed in the given edge order.
    fn rank_in_order(&self, entries: &[(u64, u32)]) -> Result<u64> {
        let mut basis: Vec<(u64, u32)> = Vec::new();
        for &(x, m) in entries {
            let k = self.accept(&basis, x, m)?;
            if k > 0 {
                basis.push((x, k));
            }
        }
        Ok(basis.iter().map(|&(_, m)| m as u64).sum())
    }
}

fn engine(params: &CountParams, q: u32, caps: &Caps) -> Result<RankEngine> {
    Ok(RankEngine {
        r: params.r,
        a: params.integral()?,
        q,
        projection_cap: caps.projection,
    })
}

/// Rank of `A` in the count matroid `M(n, r, q, a)` with `q = A.q()` and
/// integer coefficients `a`.
pub fn matroid_rank_bruteforce(a_set: &MultiEdgeSet, params: &CountParams, caps: &Caps) -> Result<u64> {
    check_r(a_set.base_r(), params)?;
    caps.check(
        "matroid ground multiset",
        a_set.total() as u128,
        caps.matroid_elements as u128,
    )?;
    engine(params, a_set.q(), caps)?.rank_in_order(a_set.entries())
}

/// Greedy rank with the edges of `A` visited in a caller-chosen order.
pub fn matroid_rank_in_order(
    a_set: &MultiEdgeSet,
    params: &CountParams,
    order: &[usize],
    caps: &Caps,
) -> Result<u64> {
    check_r(a_set.base_r(), params)?;
    let entries: Vec<(u64, u32)> = order.iter().map(|&i| a_set.entries()[i]).collect();
    engine(params, a_set.q(), caps)?.rank_in_order(&entries)
}

/// `min{ L_a(K_n^r), min(q, max(0, p)) C(n, r) }` for integer `a`,
/// floored at zero: `L_a(K_n^r) < 0` forces `p < 0` and rank 0.
pub fn matroid_rank_formula(n: usize, q: u32, params: &CountParams) -> Result<BigInt> {
    params.integral()?;
    let l = params.eval_complete(n).to_integer();
    let p = params.p().to_integer().max(BigInt::zero()).min(BigInt::from(q));
    Ok(l.min(p * BigInt::from(binom_usize(n, params.r))).max(BigInt::zero()))
}

/// Count polymatroid value `rk_N(G^{(q)}) / q` with `N = M(n, r, q, q a)`.
pub fn poly_rho(g: &Hypergraph, params: &CountParams, caps: &Caps) -> Result<Rational> {
    CountPolymatroid::new(g.n(), params.clone(), caps)?.rho(g.edges())
}

/// `min{ L_a(K_n^r), min(1, max(0, p)) C(n, r) }`, floored at zero as in
/// [`matroid_rank_formula`].
pub fn poly_rank_formula(n: usize, params: &CountParams) -> Rational {
    let l = params.eval_complete(n);
    let p = rational::max_zero(&params.p()).min(Rational::one());
    rational::max_zero(&l.min(p * rational::from_u128(binom_usize(n, params.r))))
}

/// A count polymatroid with cached integer scaling.
#[derive(Debug, Clone)]
pub struct CountPolymatroid {
    n: usize,
    params: CountParams,
    q: u32,
    engine: RankEngine,
    caps: Caps,
}

impl CountPolymatroid {
    pub fn new(n: usize, params: CountParams, caps: &Caps) -> Result<Self> {
        let q = u32::try_from(params.q()).map_err(|_| WsatError::arg("q too large"))?;
        let scaled = params.scaled(&rational::int(q as i64))?;
        let engine = engine(&scaled, q, caps)?;
        Ok(CountPolymatroid {
            n,
            params,
            q,
            engine,
            caps: caps.clone(),
        })
    }

    pub fn params(&self) -> &CountParams {
        &self.params
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `rho` of an edge set.
    pub fn rho(&self, edges: &[u64]) -> Result<Rational> {
        let total = edges.len() as u128 * self.q as u128;
        self.caps.check(
            "multiplied edge set size",
            total,
            self.caps.matroid_elements as u128,
        )?;
        let entries: Vec<(u64, u32)> = edges.iter().map(|&e| (e, self.q)).collect();
        let rank = self.engine.rank_in_order(&entries)?;
        Ok(rational::ratio(rank as i64, self.q as i64))
    }

    /// `rho` of every subset of `ground`, indexed by subset bit mask.
    ///
    /// The basis of `A` extends the basis of `A` minus its highest element,
    /// which is exactly the greedy run in index order.
    pub fn rho_all_subsets(&self, ground: &[u64]) -> Result<Vec<Rational>> {
        let m = ground.len();
        if m > self.caps.projection {
            return Err(WsatError::cap("subset table ground set", m as u128, self.caps.projection as u128));
        }
        let mut bases: Vec<Vec<(u64, u32)>> = vec![Vec::new(); 1usize << m];
        let mut ranks = vec![0u64; 1usize << m];
        for mask in 1usize..(1usize << m) {
            let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
            let base = mask ^ (1 << top);
            let mut basis = bases[base].clone();
            let k = self.engine.accept(&basis, ground[top], self.q)?;
            if k > 0 {
                basis.push((ground[top], k));
            }
            ranks[mask] = ranks[base] + k as u64;
            bases[mask] = basis;
        }
        Ok(ranks
            .into_iter()
            .map(|k| rational::ratio(k as i64, self.q as i64))
            .collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WsatConditionReport {
    pub n: usize,
    pub pass: bool,
    pub copies_checked: usize,
    /// A copy and an edge whose deletion lowers the value.
    pub failure: Option<(Vec<Vec<usize>>, Vec<usize>)>,
    #[serde(with = "rational")]
    pub p: Rational,
    /// The lower bound requires `p >= 1`.
    pub applicable: bool,
    #[serde(with = "rational::option")]
    pub bound: Option<Rational>,
}

/// Checks `rho(copy - e) = rho(copy)` for every copy of `H` in `K_n^r` and
/// every edge of it; on success with `p >= 1` the bound `L_a(K_n^r)` holds.
pub fn verify_wsat_condition(
    h: &Hypergraph,
    n: usize,
    params: &CountParams,
    caps: &Caps,
) -> Result<WsatConditionReport> {
    use rayon::prelude::*;
    check_r(h.r(), params)?;
    if h.is_empty() {
        return Err(WsatError::pre("pattern must be non-empty"));
    }
    let poly = CountPolymatroid::new(n, params.clone(), caps)?;
    let copies = copies_in_complete(h, n, caps)?;
    let failures: Vec<Option<(Vec<u64>, u64)>> = copies
        .par_iter()
        .map(|copy| -> Result<Option<(Vec<u64>, u64)>> {
            let full = poly.rho(copy)?;
            for &e in copy {
                let rest: Vec<u64> = copy.iter().copied().filter(|&f| f != e).collect();
                if poly.rho(&rest)? != full {
                    return Ok(Some((copy.clone(), e)));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    let failure = failures.into_iter().flatten().next();
    let p = params.p();
    let applicable = p >= Rational::one();
    let pass = failure.is_none();
    Ok(WsatConditionReport {
        n,
        pass,
        copies_checked: copies.len(),
        failure: failure.map(|(c, e)| (c.iter().map(|&x| vertices_of(x)).collect(), vertices_of(e))),
        bound: (pass && applicable).then(|| params.eval_complete(n)),
        p,
        applicable,
    })
}
