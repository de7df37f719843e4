//! Configurations of curves on a nonsingular surface.
//!
//! A [`CurveConfig`] records each curve's genus and self-intersection and
//! the intersection numbers between distinct curves. Curves are taken to be
//! irreducible and nonsingular, so `K·Γ = 2g − 2 − Γ²` by adjunction.
//! A [`Cycle`] is an integer combination `Σ nᵢΓᵢ` of the curves.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::lattice::{DivisorClass, Lattice, QDivisorClass};

/// Integer coefficients on the curves of a configuration.
pub type Cycle = Vec<i64>;

/// Default cap on the number of cycles visited by an exhaustive search.
pub const DEFAULT_CYCLE_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub genus: u32,
    #[serde(rename = "self")]
    pub self_int: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConfigJson", into = "ConfigJson")]
pub struct CurveConfig {
    curves: Vec<Curve>,
    gram: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigJson {
    curves: Vec<Curve>,
    #[serde(default)]
    pairs: Vec<(String, String, i64)>,
}

impl TryFrom<ConfigJson> for CurveConfig {
    type Error = Error;
    fn try_from(j: ConfigJson) -> Result<Self> {
        CurveConfig::new(j.curves, &j.pairs)
    }
}

impl From<CurveConfig> for ConfigJson {
    fn from(c: CurveConfig) -> Self {
        let pairs = c.pairs();
        ConfigJson { curves: c.curves, pairs }
    }
}

impl CurveConfig {
    pub fn new(curves: Vec<Curve>, pairs: &[(String, String, i64)]) -> Result<CurveConfig> {
        if curves.is_empty() {
            return Err(Error::InvalidConfig("no curves".into()));
        }
        let mut index = HashMap::new();
        for (i, c) in curves.iter().enumerate() {
            if index.insert(c.name.clone(), i).is_some() {
                return Err(Error::InvalidConfig(format!("duplicate curve name {:?}", c.name)));
            }
        }
        let n = curves.len();
        let mut gram = vec![vec![0i64; n]; n];
        for (i, c) in curves.iter().enumerate() {
            gram[i][i] = c.self_int;
        }
        let mut seen: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n];
        for (a, b, k) in pairs {
            let lookup = |s: &String| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown curve {s:?}")))
            };
            let (i, j) = (lookup(a)?, lookup(b)?);
            if i == j {
                return Err(Error::InvalidConfig(format!("pair ({a}, {a}) is not between distinct curves")));
            }
            if *k < 0 {
                return Err(Error::InvalidConfig(format!("negative intersection {a}·{b} = {k}")));
            }
            match seen[i][j] {
                Some(prev) if prev != *k => {
                    return Err(Error::InvalidConfig(format!("inconsistent values for {a}·{b}")));
                }
                _ => {}
            }
            seen[i][j] = Some(*k);
            seen[j][i] = Some(*k);
            gram[i][j] = *k;
            gram[j][i] = *k;
        }
        Ok(CurveConfig { curves, gram })
    }

    /// Configuration of `n` smooth rational `−2`-curves with the given
    /// simple edges. Curves are named `G1, …, Gn`.
    pub fn minus_two_graph(n: usize, edges: &[(usize, usize)]) -> Result<CurveConfig> {
        let curves = (1..=n)
            .map(|i| Curve {
                name: format!("G{i}"),
                genus: 0,
                self_int: -2,
            })
            .collect();
        let pairs: Vec<(String, String, i64)> = edges
            .iter()
            .map(|&(a, b)| (format!("G{}", a + 1), format!("G{}", b + 1), 1))
            .collect();
        CurveConfig::new(curves, &pairs)
    }

    /// Dynkin configuration in Bourbaki node order.
    ///
    /// `Aₙ` is a chain; `Dₙ` is a chain `0, …, n−2` with node `n−1` attached
    /// to node `n−3`; `Eₙ` is the chain `0, 2, 3, …, n−1` with node `1`
    /// attached to node `3`.
    pub fn dynkin(t: AdeType) -> CurveConfig {
        let (n, edges): (usize, Vec<(usize, usize)>) = match t {
            AdeType::A(n) => (n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()),
            AdeType::D(n) => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n - 1));
                (n, e)
            }
            AdeType::E6 | AdeType::E7 | AdeType::E8 => {
                let n = match t {
                    AdeType::E6 => 6,
                    AdeType::E7 => 7,
                    _ => 8,
                };
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                (n, e)
            }
        };
        CurveConfig::minus_two_graph(n, &edges).expect("Dynkin data is valid")
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.name == name)
    }

    /// Nonzero intersections between distinct curves, `i < j`.
    pub fn pairs(&self) -> Vec<(String, String, i64)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.gram[i][j] != 0 {
                    out.push((self.curves[i].name.clone(), self.curves[j].name.clone(), self.gram[i][j]));
                }
            }
        }
        out
    }

    /// The intersection lattice spanned by the curves.
    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.gram.clone())
            .and_then(|l| l.named("config").with_basis(self.curves.iter().map(|c| c.name.clone()).collect()))
            .expect("config gram is valid")
    }

    pub fn is_negative_definite(&self) -> bool {
        let neg: Vec<Vec<i64>> = self.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        exact::leading_minors_positive(&neg)
    }

    /// `K·Γᵢ` by adjunction.
    pub fn k_dot(&self, i: usize) -> i64 {
        let c = &self.curves[i];
        2 * c.genus as i64 - 2 - c.self_int
    }

    pub fn dot(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                for (j, &yj) in y.iter().enumerate() {
                    acc += xi * self.gram[i][j] * yj;
                }
            }
        }
        acc
    }

    /// `D·Γᵢ` for every curve.
    pub fn dots(&self, d: &[i64]) -> Vec<i64> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| d[j] * self.gram[j][i]).sum()).collect()
    }

    pub fn k_dot_cycle(&self, d: &[i64]) -> i64 {
        d.iter().enumerate().map(|(i, &n)| n * self.k_dot(i)).sum()
    }

    fn check_cycle(&self, d: &[i64]) -> Result<()> {
        if d.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: d.len(),
            });
        }
        Ok(())
    }

    /// Connected components of the dual graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in 0..n {
                    if w != v && self.gram[v][w] > 0 && comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// The subconfiguration on `idx`, in that order.
    pub fn restrict(&self, idx: &[usize]) -> CurveConfig {
        CurveConfig {
            curves: idx.iter().map(|&i| self.curves[i].clone()).collect(),
            gram: idx.iter().map(|&i| idx.iter().map(|&j| self.gram[i][j]).collect()).collect(),
        }
    }
}

fn adjunction_numerator(c: &CurveConfig, d: &[i64]) -> Result<i64> {
    c.check_cycle(d)?;
    let v = c.dot(d, d) + c.k_dot_cycle(d);
    if v % 2 != 0 {
        return Err(Error::InvariantViolation(format!("D² + KD = {v} is odd")));
    }
    Ok(v)
}

/// Arithmetic genus `p_a(D) = 1 + (D² + KD)/2`.
pub fn pa(c: &CurveConfig, d: &[i64]) -> Result<i64> {
    Ok(1 + adjunction_numerator(c, d)? / 2)
}

/// `χ(O_D) = −(D² + KD)/2`.
pub fn chi(c: &CurveConfig, d: &[i64]) -> Result<i64> {
    Ok(-adjunction_numerator(c, d)? / 2)
}

const ARTIN_STEP_CAP: usize = 1_000_000;

/// Artin's numerical cycle, increasing the lowest-index positive curve.
pub fn numerical_cycle(c: &CurveConfig) -> Result<Cycle> {
    let order: Vec<usize> = (0..c.len()).collect();
    numerical_cycle_with_order(c, &order)
}

/// [`numerical_cycle`] with ties broken by the first curve in `order`.
pub fn numerical_cycle_with_order(c: &CurveConfig, order: &[usize]) -> Result<Cycle> {
    if !c.is_connected() {
        return Err(Error::InvalidConfig("configuration is disconnected".into()));
    }
    if !c.is_negative_definite() {
        return Err(Error::NotContractible("intersection matrix is not negative definite".into()));
    }
    let mut z = vec![1i64; c.len()];
    let mut zg = c.dots(&z);
    for _ in 0..ARTIN_STEP_CAP {
        match order.iter().copied().find(|&i| zg[i] > 0) {
            None => return Ok(z),
            Some(i) => {
                z[i] += 1;
                for (j, v) in zg.iter_mut().enumerate() {
                    *v += c.gram[i][j];
                }
            }
        }
    }
    Err(Error::InvariantViolation("numerical cycle did not stabilize".into()))
}

/// Dynkin types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdeType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::A(n) => write!(f, "A{n}"),
            AdeType::D(n) => write!(f, "D{n}"),
            AdeType::E6 => f.write_str("E6"),
            AdeType::E7 => f.write_str("E7"),
            AdeType::E8 => f.write_str("E8"),
        }
    }
}

impl Serialize for AdeType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AdeVerdict {
    Ade { r#type: AdeType },
    NotMinus2,
    NotNegDef,
    Disconnected { components: Vec<(Vec<String>, AdeVerdict)> },
}

/// Dynkin type of a connected simple graph, read off from its shape alone.
pub fn dynkin_shape(n: usize, edges: &[(usize, usize)]) -> Option<AdeType> {
    if n == 0 || edges.len() != n - 1 {
        return None;
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a == b || adj[a].contains(&b) {
            return None;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    // n − 1 simple edges: a tree iff connected.
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    match branch.as_slice() {
        [] => Some(AdeType::A(n)),
        [c] if adj[*c].len() == 3 => {
            let mut arms: Vec<usize> = adj[*c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (*c, start, 1);
                    while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, k] => Some(AdeType::D(k + 3)),
                [1, 2, 2] => Some(AdeType::E6),
                [1, 2, 3] => Some(AdeType::E7),
                [1, 2, 4] => Some(AdeType::E8),
                _ => None,
            }
        }
        _ => None,
    }
}

fn is_minus_two(c: &Curve) -> bool {
    c.genus == 0 && c.self_int == -2
}

/// Du Val recognition: checks the shape against negative definiteness and
/// reports a disagreement as an error.
pub fn classify_ade(c: &CurveConfig) -> Result<AdeVerdict> {
    if !c.curves.iter().all(is_minus_two) {
        return Ok(AdeVerdict::NotMinus2);
    }
    let comps = c.components();
    if comps.len() > 1 {
        let components = comps
            .iter()
            .map(|idx| {
                let sub = c.restrict(idx);
                let names = sub.curves.iter().map(|x| x.name.clone()).collect();
                classify_ade(&sub).map(|v| (names, v))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(AdeVerdict::Disconnected { components });
    }
    let n = c.len();
    let mut edges = Vec::new();
    let mut simple = true;
    for i in 0..n {
        for j in i + 1..n {
            match c.gram[i][j] {
                0 => {}
                1 => edges.push((i, j)),
                _ => simple = false,
            }
        }
    }
    let shape = if simple { dynkin_shape(n, &edges) } else { None };
    match (shape, c.is_negative_definite()) {
        (Some(t), true) => Ok(AdeVerdict::Ade { r#type: t }),
        (None, false) => Ok(AdeVerdict::NotNegDef),
        (s, d) => Err(Error::InvariantViolation(format!(
            "shape {s:?} disagrees with definiteness {d}"
        ))),
    }
}

/// Result of an exhaustive arithmetic-genus search over `0 < D ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaSearch {
    pub max: i64,
    /// Lexicographically first cycle attaining `max`.
    pub argmax: Cycle,
    /// Number of cycles with `p_a ≥ 1`.
    pub positive: u128,
    /// Search nodes visited.
    pub visited: u128,
}

fn box_count(bound: &[i64]) -> u128 {
    bound.iter().fold(1u128, |acc, &b| acc.saturating_mul(b as u128 + 1))
}

/// Visits every `0 ≤ D ≤ bound` except `0`, in lexicographic order, with
/// `D²`, `KD` and the vector `D·Γᵢ` maintained incrementally.
fn walk_box(c: &CurveConfig, bound: &[i64], mut visit: impl FnMut(&[i64], i64, i64, &[i64])) {
    let n = c.len();
    let kd: Vec<i64> = (0..n).map(|i| c.k_dot(i)).collect();
    let mut d = vec![0i64; n];
    let mut dg = vec![0i64; n];
    let (mut d2, mut k) = (0i64, 0i64);
    'outer: loop {
        let mut i = n;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if d[i] < bound[i] {
                d2 += 2 * dg[i] + c.gram[i][i];
                k += kd[i];
                for (j, v) in dg.iter_mut().enumerate() {
                    *v += c.gram[i][j];
                }
                d[i] += 1;
                break;
            }
            let m = d[i];
            if m > 0 {
                d2 += -2 * m * dg[i] + m * m * c.gram[i][i];
                k -= m * kd[i];
                for (j, v) in dg.iter_mut().enumerate() {
                    *v -= m * c.gram[i][j];
                }
                d[i] = 0;
            }
        }
        visit(&d, d2, k, &dg);
    }
}

/// Pruning data for one depth of [`max_pa_bounded`].
///
/// With the first `l` coordinates fixed to `a` and the free block `C`
/// negative definite, the real maximum of `Q(D) = D² + KD` over the free
/// coordinates is `Q(a) − wᵀ·adj(C)·w / (4 det C)`, where `w = 2Bᵀa + k`
/// collects the cross terms `B` and the free part `k` of `K`.
struct Level {
    adj: Vec<Vec<i128>>,
    det: i128,
}

fn pruning_levels(c: &CurveConfig) -> Vec<Option<Level>> {
    let n = c.len();
    (0..n)
        .map(|l| {
            let sub: Vec<Vec<i64>> = (l..n).map(|i| (l..n).map(|j| c.gram[i][j]).collect()).collect();
            if !Lattice::new(sub.clone()).ok()?.is_negative_definite() {
                return None;
            }
            let det = exact::det(&sub);
            let q: Vec<Vec<Rational>> = sub.iter().map(|r| r.iter().map(|&x| exact::int(x)).collect()).collect();
            let inv = exact::inverse(&q)?;
            let det_q = Rational::from_integer(det.clone());
            let adj = inv
                .iter()
                .map(|r| r.iter().map(|x| (x * &det_q).to_integer().to_i128()).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()?;
            Some(Level {
                adj,
                det: det.to_i128()?,
            })
        })
        .collect()
}

struct PaWalk<'a> {
    c: &'a CurveConfig,
    bound: &'a [i64],
    kd: Vec<i64>,
    levels: Vec<Option<Level>>,
    d: Vec<i64>,
    best: Option<(i64, Cycle)>,
    positive: u128,
    visited: u128,
    budget: u128,
}

impl PaWalk<'_> {
    /// `true` when no completion of `d[..l]` can reach `p_a ≥ target`.
    fn hopeless(&self, l: usize, target: i64) -> bool {
        let Some(level) = &self.levels[l] else {
            return false;
        };
        self.upper_bound_test(l, level, target).unwrap_or(false)
    }

    fn upper_bound_test(&self, l: usize, level: &Level, target: i64) -> Option<bool> {
        let n = self.c.len();
        let g = &self.c.gram;
        let a = &self.d[..l];
        let mut q: i128 = 0;
        for i in 0..l {
            let mut row: i128 = self.kd[i] as i128;
            for j in 0..l {
                row = row.checked_add((g[i][j] as i128).checked_mul(a[j] as i128)?)?;
            }
            q = q.checked_add(row.checked_mul(a[i] as i128)?)?;
        }
        let w: Vec<i128> = (l..n)
            .map(|f| {
                let mut v = self.kd[f] as i128;
                for i in 0..l {
                    v = v.checked_add(2i128.checked_mul(g[i][f] as i128)?.checked_mul(a[i] as i128)?)?;
                }
                Some(v)
            })
            .collect::<Option<_>>()?;
        let mut s: i128 = 0;
        for (x, row) in w.iter().zip(&level.adj) {
            let mut r: i128 = 0;
            for (y, m) in w.iter().zip(row) {
                r = r.checked_add(m.checked_mul(*y)?)?;
            }
            s = s.checked_add(r.checked_mul(*x)?)?;
        }
        // p_a ≤ 1 + Q/2 < target  ⟺  4|δ|·Q < 8|δ|(target − 1).
        let det_abs = level.det.abs();
        let scaled = 4i128.checked_mul(det_abs)?.checked_mul(q)?.checked_sub(level.det.signum().checked_mul(s)?)?;
        let limit = 8i128.checked_mul(det_abs)?.checked_mul(target as i128 - 1)?;
        Some(scaled < limit)
    }

    fn leaf(&mut self) {
        if self.d.iter().all(|&x| x == 0) {
            return;
        }
        let p = pa(self.c, &self.d).expect("cycle has the right length");
        if p >= 1 {
            self.positive += 1;
        }
        if self.best.as_ref().map_or(true, |(m, _)| p > *m) {
            self.best = Some((p, self.d.clone()));
        }
    }

    fn walk(&mut self, l: usize) -> Result<()> {
        if l == self.c.len() {
            self.leaf();
            return Ok(());
        }
        for v in 0..=self.bound[l] {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::BudgetExceeded {
                    needed: box_count(self.bound) - 1,
                    budget: self.budget,
                });
            }
            self.d[l] = v;
            let target = self.best.as_ref().map(|(m, _)| (*m).min(1));
            if let Some(t) = target {
                if l + 1 < self.c.len() && self.hopeless(l + 1, t) {
                    continue;
                }
            }
            self.walk(l + 1)?;
        }
        self.d[l] = 0;
        Ok(())
    }
}

/// Maximum of `p_a(D)` over all `0 < D ≤ bound`.
///
/// Depth-first in lexicographic order. A partial cycle is skipped when the
/// real maximum of `D² + KD` over its completions already rules out
/// `p_a ≥ min(best, 1)`, so the maximum, its first witness and the count of
/// cycles with `p_a ≥ 1` are all exact. `budget` caps the search nodes.
pub fn max_pa_bounded(c: &CurveConfig, bound: &[i64], budget: u128) -> Result<PaSearch> {
    c.check_cycle(bound)?;
    if bound.iter().any(|&b| b < 1) {
        return Err(Error::InvalidArgument("bound must be at least 1 on every curve".into()));
    }
    let n = c.len();
    let mut w = PaWalk {
        c,
        bound,
        kd: (0..n).map(|i| c.k_dot(i)).collect(),
        levels: pruning_levels(c),
        d: vec![0; n],
        best: None,
        positive: 0,
        visited: 0,
        budget,
    };
    w.walk(0)?;
    let (max, argmax) = w.best.expect("box is nonempty");
    Ok(PaSearch {
        max,
        argmax,
        positive: w.positive,
        visited: w.visited,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SingularityType {
    Rational {
        mult: i64,
        embdim: i64,
        du_val: bool,
    },
    EllipticGorenstein {
        degree: i64,
        mult: i64,
        embdim: i64,
    },
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub z_num: Cycle,
    pub z_squared: i64,
    pub pa_z: i64,
    #[serde(with = "exact::serde_rational")]
    pub bound_factor: Rational,
    pub bound: Cycle,
    pub search: PaSearch,
    pub verdict: SingularityType,
}

/// Rational / elliptic Gorenstein test by exhaustive search over cycles up
/// to `⌈bound_factor · Z_num⌉`.
pub fn classify_singularity(c: &CurveConfig, bound_factor: &Rational, budget: u128) -> Result<SingularityReport> {
    if !c.is_connected() {
        return Err(Error::InvalidConfig("configuration is disconnected".into()));
    }
    if !c.is_negative_definite() {
        return Err(Error::NotNegDef);
    }
    if *bound_factor < exact::int(1) {
        return Err(Error::InvalidArgument("bound factor must be at least 1".into()));
    }
    let z = numerical_cycle(c)?;
    let z2 = c.dot(&z, &z);
    let pa_z = pa(c, &z)?;
    let bound: Cycle = z
        .iter()
        .map(|&zi| {
            (bound_factor * exact::int(zi))
                .ceil()
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::InvalidArgument("bound overflows".into()))
        })
        .collect::<Result<_>>()?;
    let search = max_pa_bounded(c, &bound, budget)?;
    let verdict = if search.max == 0 {
        let du_val = z2 == -2 && c.curves.iter().all(is_minus_two);
        SingularityType::Rational {
            mult: -z2,
            embdim: -z2 + 1,
            du_val,
        }
    } else {
        if let Some(i) = (0..c.len()).find(|&i| c.k_dot(i) < 0) {
            return Err(Error::NotMinimal(c.curves[i].name.clone()));
        }
        let kz = c.dots(&z);
        let adjoint_trivial = (0..c.len()).all(|i| c.k_dot(i) + kz[i] == 0);
        if pa_z == 1 && search.max == 1 && search.positive == 1 && adjoint_trivial {
            let conn = is_k_connected(c, &z, 2, budget)?;
            if !conn.connected {
                return Err(Error::InvariantViolation("canonical cycle is not 2-connected".into()));
            }
            let d = -z2;
            SingularityType::EllipticGorenstein {
                degree: d,
                mult: d.max(2),
                embdim: d.max(3),
            }
        } else {
            SingularityType::Other
        }
    };
    Ok(SingularityReport {
        z_num: z,
        z_squared: z2,
        pa_z,
        bound_factor: bound_factor.clone(),
        bound,
        search,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub k: i64,
    pub connected: bool,
    /// Least `D₁·D₂` over proper decompositions, if any exist.
    pub min_product: Option<i64>,
    pub worst: Option<(Cycle, Cycle)>,
}

/// Numerical `k`-connectedness of an effective cycle, by exhaustion.
pub fn is_k_connected(c: &CurveConfig, d: &[i64], k: i64, budget: u128) -> Result<Connectivity> {
    c.check_cycle(d)?;
    if d.iter().any(|&x| x < 0) || d.iter().all(|&x| x == 0) {
        return Err(Error::InvalidArgument("cycle must be effective and nonzero".into()));
    }
    let needed = box_count(d).saturating_sub(2);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let dd = c.dots(d);
    let mut best: Option<(i64, Cycle)> = None;
    walk_box(c, d, |d1, d1sq, _, _| {
        if d1 == d {
            return;
        }
        let prod = d1.iter().zip(&dd).map(|(a, b)| a * b).sum::<i64>() - d1sq;
        if best.as_ref().map_or(true, |(m, _)| prod < *m) {
            best = Some((prod, d1.to_vec()));
        }
    });
    Ok(match best {
        None => Connectivity {
            k,
            connected: true,
            min_product: None,
            worst: None,
        },
        Some((m, d1)) => {
            let d2 = d.iter().zip(&d1).map(|(a, b)| a - b).collect();
            Connectivity {
                k,
                connected: m >= k,
                min_product: Some(m),
                worst: Some((d1, d2)),
            }
        }
    })
}

/// Curves given as classes in an ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveLattice {
    pub lattice: Lattice,
    pub names: Vec<String>,
    pub curves: Vec<DivisorClass>,
}

impl CurveLattice {
    pub fn new(lattice: Lattice, named: Vec<(String, Vec<i64>)>) -> Result<CurveLattice> {
        let mut names = Vec::new();
        let mut curves = Vec::new();
        for (name, coords) in named {
            curves.push(lattice.class(coords)?);
            names.push(name);
        }
        Ok(CurveLattice {
            lattice,
            names,
            curves,
        })
    }

    /// The curves themselves as a basis, with the configuration's gram.
    pub fn from_config(c: &CurveConfig) -> CurveLattice {
        let lattice = c.lattice();
        let curves = (0..c.len()).map(|i| lattice.basis_vector(i)).collect();
        CurveLattice {
            lattice,
            names: c.curves.iter().map(|x| x.name.clone()).collect(),
            curves,
        }
    }

    fn dot(&self, x: &DivisorClass, y: &DivisorClass) -> Result<BigInt> {
        self.lattice.pair_int(x, y)
    }

    fn self_int(&self, i: usize) -> BigInt {
        self.lattice.dot(&self.curves[i].coords, &self.curves[i].coords)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MobileReduction {
    pub mobile: DivisorClass,
    pub fixed: DivisorClass,
    /// Indices of the curves subtracted, in order.
    pub steps: Vec<usize>,
    /// `M = aE + Γ` with `E² = 0`, `Γ² = −2`, `EΓ = 1`, `a ≥ 2`.
    pub monogonal: bool,
}

/// Subtracts `−2`-curves `Γ` with `D·Γ < 0` until none is left.
pub fn mobile_reduction(cl: &CurveLattice, d: &DivisorClass, k3_mode: bool) -> Result<MobileReduction> {
    let minus2: Vec<bool> = (0..cl.curves.len()).map(|i| cl.self_int(i) == BigInt::from(-2)).collect();
    if k3_mode {
        if let Some(i) = minus2.iter().position(|b| !b) {
            return Err(Error::InvalidConfig(format!("{} is not a -2-curve", cl.names[i])));
        }
    }
    let height: i64 = d.coords.iter().map(|x| x.abs()).sum();
    let cap = 10_000 + 1_000 * height as usize;
    let mut m = d.clone();
    let mut m2 = cl.dot(&m, &m)?;
    let d2 = m2.clone();
    let mut steps = Vec::new();
    loop {
        let mut next = None;
        for (i, g) in cl.curves.iter().enumerate() {
            if minus2[i] && cl.dot(&m, g)?.is_negative() {
                next = Some(i);
                break;
            }
        }
        let Some(i) = next else { break };
        if steps.len() >= cap {
            return Err(Error::InvariantViolation("mobile reduction did not terminate".into()));
        }
        m = m.sub(&cl.curves[i]);
        let new2 = cl.dot(&m, &m)?;
        if new2 < m2 || new2 < d2 {
            return Err(Error::InvariantViolation("self-intersection decreased".into()));
        }
        m2 = new2;
        steps.push(i);
    }
    let fixed = d.sub(&m);
    let monogonal = is_monogonal(cl, &m)?;
    Ok(MobileReduction {
        mobile: m,
        fixed,
        steps,
        monogonal,
    })
}

fn is_monogonal(cl: &CurveLattice, m: &DivisorClass) -> Result<bool> {
    let n = cl.curves.len();
    for e in 0..n {
        if !cl.self_int(e).is_zero() {
            continue;
        }
        for g in 0..n {
            if cl.self_int(g) != BigInt::from(-2) || cl.dot(&cl.curves[e], &cl.curves[g])? != BigInt::from(1) {
                continue;
            }
            let rest = m.sub(&cl.curves[g]);
            let e_coords = &cl.curves[e].coords;
            // rest must be a·E with a ≥ 2.
            let a = e_coords
                .iter()
                .zip(&rest.coords)
                .find(|(x, _)| **x != 0)
                .map(|(x, r)| if r % x == 0 { Some(r / x) } else { None });
            if let Some(Some(a)) = a {
                if a >= 2 && e_coords.iter().zip(&rest.coords).all(|(x, r)| x * a == *r) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZariskiResult {
    pub positive: QDivisorClass,
    pub negative: QDivisorClass,
    /// Curve indices in the support of the negative part, ascending.
    pub support: Vec<usize>,
    /// Coefficient of each support curve in the negative part.
    #[serde(with = "exact::serde_rational_vec")]
    pub coefficients: Vec<Rational>,
    /// Problems noticed at the fixed point, such as nonpositive coefficients.
    pub diagnostics: Vec<String>,
}

/// Zariski decomposition `D = P + N` relative to the declared curves.
pub fn zariski_decomposition(cl: &CurveLattice, d: &QDivisorClass) -> Result<ZariskiResult> {
    let n = cl.curves.len();
    let qcurves: Vec<QDivisorClass> = cl.curves.iter().map(|c| c.to_rational()).collect();
    let gram: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    cl.dot(&cl.curves[i], &cl.curves[j])
                        .and_then(|v| v.to_i64().ok_or_else(|| Error::InvalidArgument("pairing overflows".into())))
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    let d_dot: Vec<Rational> = qcurves.iter().map(|g| cl.lattice.pair(d, g)).collect::<Result<_>>()?;
    let mut support: Vec<usize> = Vec::new();
    loop {
        let coefficients = if support.is_empty() {
            Vec::new()
        } else {
            let sub: Vec<Vec<i64>> = support.iter().map(|&i| support.iter().map(|&j| gram[i][j]).collect()).collect();
            if !Lattice::new(sub.clone()).map(|l| l.is_negative_definite()).unwrap_or(false) {
                return Err(Error::NotNegDefSupport);
            }
            let a: Vec<Vec<Rational>> = sub.iter().map(|r| r.iter().map(|&x| exact::int(x)).collect()).collect();
            let b: Vec<Rational> = support.iter().map(|&i| d_dot[i].clone()).collect();
            exact::solve(&a, &b).ok_or(Error::NotNegDefSupport)?
        };
        // P·Γⱼ = D·Γⱼ − Σ qᵢ ΓᵢΓⱼ
        let p_dot: Vec<Rational> = (0..n)
            .map(|j| {
                let mut v = d_dot[j].clone();
                for (q, &i) in coefficients.iter().zip(&support) {
                    v -= q * exact::int(gram[i][j]);
                }
                v
            })
            .collect();
        let new: Vec<usize> = (0..n).filter(|j| !support.contains(j) && p_dot[*j].is_negative()).collect();
        if new.is_empty() {
            let mut neg = vec![Rational::zero(); d.coords.len()];
            for (q, &i) in coefficients.iter().zip(&support) {
                for (acc, x) in neg.iter_mut().zip(&qcurves[i].coords) {
                    *acc += q * x;
                }
            }
            let pos: Vec<Rational> = d.coords.iter().zip(&neg).map(|(a, b)| a - b).collect();
            let diagnostics = coefficients
                .iter()
                .zip(&support)
                .filter(|(q, _)| !q.is_positive())
                .map(|(q, &i)| format!("coefficient of {} is {}", cl.names[i], exact::format_rational(q)))
                .collect();
            return Ok(ZariskiResult {
                positive: QDivisorClass::new(d.lattice.clone(), pos),
                negative: QDivisorClass::new(d.lattice.clone(), neg),
                support,
                coefficients,
                diagnostics,
            });
        }
        support.extend(new);
        support.sort_unstable();
    }
}

/// Parses a cycle given either as an array of coefficients or as a map from
/// curve names to coefficients (missing names count as zero).
pub fn cycle_from_json(c: &CurveConfig, v: &serde_json::Value) -> Result<Cycle> {
    match v {
        serde_json::Value::Array(_) => {
            let d: Vec<i64> =
                serde_json::from_value(v.clone()).map_err(|e| Error::InvalidArgument(format!("bad cycle: {e}")))?;
            c.check_cycle(&d)?;
            Ok(d)
        }
        serde_json::Value::Object(_) => {
            let m: BTreeMap<String, i64> =
                serde_json::from_value(v.clone()).map_err(|e| Error::InvalidArgument(format!("bad cycle: {e}")))?;
            let mut d = vec![0; c.len()];
            for (name, k) in m {
                let i = c
                    .index_of(&name)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown curve {name:?}")))?;
                d[i] = k;
            }
            Ok(d)
        }
        _ => Err(Error::InvalidArgument("cycle must be an array or an object".into())),
    }
}

/// `gcd` of a cycle's coefficients, zero for the zero cycle.
pub fn content(d: &[i64]) -> i64 {
    d.iter().fold(0i64, |g, &x| g.gcd(&x))
}
