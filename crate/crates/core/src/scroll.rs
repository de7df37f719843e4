//! Divisor calculus on rational normal scrolls `F(a₁, …, aₙ)`.
//!
//! `Pic F = ZL ⊕ ZM`, where `L` is a fibre and `M` the tautological class.
//! A class `eL + dM` is written [`ScrollDivisor`] `{ e, d }`; its sections
//! are spanned by the monomials `t^k x₁^{d₁}⋯xₙ^{dₙ}` with `Σdᵢ = d` and
//! `k` of degree `Σdᵢaᵢ + e`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Twist vector of a scroll, kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ScrollSpec {
    twists: Vec<i64>,
}

impl TryFrom<Vec<i64>> for ScrollSpec {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        ScrollSpec::new(v)
    }
}

impl From<ScrollSpec> for Vec<i64> {
    fn from(s: ScrollSpec) -> Vec<i64> {
        s.twists
    }
}

impl ScrollSpec {
    pub fn new(mut twists: Vec<i64>) -> Result<ScrollSpec> {
        if twists.is_empty() {
            return Err(Error::InvalidArgument("scroll needs at least one twist".into()));
        }
        twists.sort_unstable();
        Ok(ScrollSpec { twists })
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn n(&self) -> usize {
        self.twists.len()
    }

    pub fn min_twist(&self) -> i64 {
        self.twists[0]
    }

    pub fn max_twist(&self) -> i64 {
        self.twists[self.twists.len() - 1]
    }

    /// The isomorphic scroll with `a₁ = 0`, and the shift that was removed.
    ///
    /// A class `(e, d)` on `self` corresponds to `(e + d·shift, d)` on the
    /// normalized scroll.
    pub fn normalized(&self) -> (ScrollSpec, i64) {
        let m = self.min_twist();
        let twists = self.twists.iter().map(|a| a - m).collect();
        (ScrollSpec { twists }, m)
    }

    /// Adds `b` to every twist.
    pub fn shifted(&self, b: i64) -> ScrollSpec {
        ScrollSpec {
            twists: self.twists.iter().map(|a| a + b).collect(),
        }
    }
}

/// The class `eL + dM`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScrollDivisor {
    pub e: i64,
    pub d: i64,
}

impl ScrollDivisor {
    pub fn new(e: i64, d: i64) -> ScrollDivisor {
        ScrollDivisor { e, d }
    }

    pub const L: ScrollDivisor = ScrollDivisor { e: 1, d: 0 };
    pub const M: ScrollDivisor = ScrollDivisor { e: 0, d: 1 };

    pub fn scale(self, k: i64) -> ScrollDivisor {
        ScrollDivisor::new(self.e * k, self.d * k)
    }
}

impl std::ops::Add for ScrollDivisor {
    type Output = ScrollDivisor;

    fn add(self, o: ScrollDivisor) -> ScrollDivisor {
        ScrollDivisor::new(self.e + o.e, self.d + o.d)
    }
}

/// Multiplicity of a negative subscroll in a base locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseMultiplicity {
    Multiplicity(u64),
    /// The linear system is empty.
    ContainsAll,
}

/// Calls `f` on every composition of `d` into `n` nonnegative parts, in
/// lexicographic order.
pub fn for_each_composition(n: usize, d: u64, mut f: impl FnMut(&[u64])) {
    fn go(parts: &mut Vec<u64>, n: usize, left: u64, f: &mut dyn FnMut(&[u64])) {
        if parts.len() + 1 == n {
            parts.push(left);
            f(parts);
            parts.pop();
            return;
        }
        for k in (0..=left).rev() {
            parts.push(k);
            go(parts, n, left - k, f);
            parts.pop();
        }
    }
    if n == 0 {
        if d == 0 {
            f(&[]);
        }
        return;
    }
    go(&mut Vec::with_capacity(n), n, d, &mut f);
}

/// How many compositions of `d` give each weight `Σdᵢaᵢ`.
fn weight_distribution(twists: &[i64], d: u64) -> BTreeMap<i64, BigInt> {
    // dist[j] after processing a prefix of the twists: total degree j.
    let d = d as usize;
    let mut dist: Vec<BTreeMap<i64, BigInt>> = vec![BTreeMap::new(); d + 1];
    dist[0].insert(0, BigInt::from(1));
    for &a in twists {
        // Unbounded-knapsack style: allow any number of copies of `a`.
        for j in 1..=d {
            let prev: Vec<(i64, BigInt)> =
                dist[j - 1].iter().map(|(w, c)| (w + a, c.clone())).collect();
            for (w, c) in prev {
                *dist[j].entry(w).or_insert_with(BigInt::zero) += c;
            }
        }
    }
    std::mem::take(&mut dist[d])
}

/// Dimension of the space of sections of `eL + dM`.
pub fn h0(f: &ScrollSpec, div: ScrollDivisor) -> BigInt {
    if div.d < 0 {
        return BigInt::zero();
    }
    weight_distribution(&f.twists, div.d as u64)
        .into_iter()
        .map(|(w, c)| {
            let k = w + div.e + 1;
            if k > 0 {
                c * BigInt::from(k)
            } else {
                BigInt::zero()
            }
        })
        .sum()
}

fn check_subscroll(f: &ScrollSpec, div: ScrollDivisor, b: i64) -> Result<()> {
    if div.d < 1 {
        return Err(Error::InvalidArgument(format!("need d >= 1, got {}", div.d)));
    }
    if !f.twists.contains(&b) {
        return Err(Error::InvalidSubscroll(format!("{b} is not a twist of {:?}", f.twists)));
    }
    if b == f.max_twist() {
        return Err(Error::InvalidSubscroll(format!("B_{b} is the whole scroll")));
    }
    Ok(())
}

/// Multiplicity of `B_b` in the base locus of `|eL + dM|`: the least
/// `s ∈ [0, d]` with `e + bd + (aₙ − b)s ≥ 0`.
pub fn base_multiplicity(f: &ScrollSpec, div: ScrollDivisor, b: i64) -> Result<BaseMultiplicity> {
    check_subscroll(f, div, b)?;
    let an = f.max_twist() as i128;
    let (e, d, b) = (div.e as i128, div.d as i128, b as i128);
    let base = e + b * d;
    if base >= 0 {
        return Ok(BaseMultiplicity::Multiplicity(0));
    }
    let step = an - b;
    let s = (-base + step - 1) / step;
    Ok(if s <= d {
        BaseMultiplicity::Multiplicity(s as u64)
    } else {
        BaseMultiplicity::ContainsAll
    })
}

/// Brute force over monomials: the least total degree in the variables
/// with `aᵢ > b` among monomials of the system.
pub fn base_multiplicity_oracle(f: &ScrollSpec, div: ScrollDivisor, b: i64) -> Result<BaseMultiplicity> {
    check_subscroll(f, div, b)?;
    let mut best: Option<u64> = None;
    for_each_composition(f.n(), div.d as u64, |parts| {
        let t_degree: i64 = parts.iter().zip(&f.twists).map(|(&p, &a)| p as i64 * a).sum::<i64>() + div.e;
        if t_degree < 0 {
            return;
        }
        let mu: u64 = parts
            .iter()
            .zip(&f.twists)
            .filter(|(_, &a)| a > b)
            .map(|(&p, _)| p)
            .sum();
        best = Some(best.map_or(mu, |x| x.min(mu)));
    });
    Ok(best.map_or(BaseMultiplicity::ContainsAll, BaseMultiplicity::Multiplicity))
}

/// Indices of the coordinates `xᵢ` that occur in no monomial of `|eL + M|`.
pub fn absent_variables(f: &ScrollSpec, e: i64) -> Vec<usize> {
    let mut present = vec![false; f.n()];
    for_each_composition(f.n(), 1, |parts| {
        let i = parts.iter().position(|&p| p == 1).expect("degree one");
        if f.twists[i] + e >= 0 {
            present[i] = true;
        }
    });
    (0..f.n()).filter(|&i| !present[i]).collect()
}

/// Indices of the coordinates spanning the negative subscroll `B_b`,
/// that is those with `aᵢ ≤ b`.
pub fn negative_subscroll(f: &ScrollSpec, b: i64) -> Vec<usize> {
    (0..f.n()).filter(|&i| f.twists[i] <= b).collect()
}

/// `K_F = (Σaᵢ − 2)L − nM`.
pub fn canonical_class(f: &ScrollSpec) -> ScrollDivisor {
    ScrollDivisor::new(f.twists.iter().sum::<i64>() - 2, -(f.n() as i64))
}

/// Intersection number of `n` classes, from `L² = 0`, `Mⁿ⁻¹L = 1`,
/// `Mⁿ = Σaᵢ`.
pub fn top_intersection(f: &ScrollSpec, factors: &[ScrollDivisor]) -> Result<BigInt> {
    if factors.len() != f.n() {
        return Err(Error::ArityError {
            expected: f.n(),
            got: factors.len(),
        });
    }
    let sum_a: BigInt = f.twists.iter().map(|&a| BigInt::from(a)).sum();
    let prod_d: BigInt = factors.iter().map(|x| BigInt::from(x.d)).product();
    let mut total = prod_d * sum_a;
    for (i, x) in factors.iter().enumerate() {
        let rest: BigInt = factors
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, y)| BigInt::from(y.d))
            .product();
        total += BigInt::from(x.e) * rest;
    }
    Ok(total)
}

/// A class `αA + βB` on the surface scroll `F_a`, where `A` is a fibre and
/// `B` the negative section.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceClass {
    pub alpha: i64,
    pub beta: i64,
}

impl SurfaceClass {
    pub const A: SurfaceClass = SurfaceClass { alpha: 1, beta: 0 };
    pub const B: SurfaceClass = SurfaceClass { alpha: 0, beta: 1 };

    pub fn new(alpha: i64, beta: i64) -> SurfaceClass {
        SurfaceClass { alpha, beta }
    }
}

impl std::ops::Add for SurfaceClass {
    type Output = SurfaceClass;

    fn add(self, o: SurfaceClass) -> SurfaceClass {
        SurfaceClass::new(self.alpha + o.alpha, self.beta + o.beta)
    }
}

/// `A² = 0`, `AB = 1`, `B² = −a`.
pub fn surface_scroll_pairing(a: i64, x: SurfaceClass, y: SurfaceClass) -> i64 {
    x.alpha * y.beta + y.alpha * x.beta - a * x.beta * y.beta
}

/// Rewrites `eL + dM` on `F(0, a)` as `αA + βB`, using `L = A`, `M = aA + B`.
pub fn to_surface_basis(a: i64, div: ScrollDivisor) -> SurfaceClass {
    SurfaceClass::new(div.e + div.d * a, div.d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MaroniCase {
    pub a1: i64,
    pub a2: i64,
    pub cone: bool,
}

/// Twists `(a₁, a₂)` of the surface scroll that can contain a trigonal
/// canonical curve of genus `g`: `a₁ + a₂ = g − 2` and `3(a₂ − a₁) ≤ g + 2`.
pub fn maroni_admissible(g: i64) -> Result<Vec<MaroniCase>> {
    if g < 3 {
        return Err(Error::InvalidArgument(format!("genus must be >= 3, got {g}")));
    }
    let mut out = Vec::new();
    for a1 in 0..=(g - 2) / 2 {
        let a2 = g - 2 - a1;
        if 3 * (a2 - a1) <= g + 2 {
            out.push(MaroniCase { a1, a2, cone: a1 == 0 });
        }
    }
    if out.iter().any(|c| c.cone && g > 4) {
        return Err(Error::InvariantViolation(format!("cone case admitted for g = {g}")));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CubicRangeEntry {
    pub a2: i64,
    pub a3: i64,
    /// `k + 2 < a₂ + a₃`, `k + 2 < a₃`, `k + 2 < a₃ − a₂`.
    pub flags: [bool; 3],
}

/// Twists `(0, a₂, a₃)` allowed for a nonsingular relative cubic with
/// `K = kL`: `0 ≤ a₂ ≤ k + 2` and `a₂ ≤ a₃ ≤ 2a₂ + k + 2`.
pub fn relative_cubic_range(k: i64) -> Vec<CubicRangeEntry> {
    let mut out = Vec::new();
    if k <= -3 {
        return out;
    }
    let c = k + 2;
    for a2 in 0..=c {
        for a3 in a2..=2 * a2 + c {
            out.push(CubicRangeEntry {
                a2,
                a3,
                flags: [c < a2 + a3, c < a3, c < a3 - a2],
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(t: &[i64]) -> ScrollSpec {
        ScrollSpec::new(t.to_vec()).unwrap()
    }

    fn h0_brute(f: &ScrollSpec, div: ScrollDivisor) -> i64 {
        if div.d < 0 {
            return 0;
        }
        let mut total = 0;
        for_each_composition(f.n(), div.d as u64, |p| {
            let w: i64 = p.iter().zip(f.twists()).map(|(&x, &a)| x as i64 * a).sum();
            total += (w + div.e + 1).max(0);
        });
        total
    }

    #[test]
    fn h0_examples() {
        assert_eq!(h0(&spec(&[1, 1]), ScrollDivisor::M), 4.into());
        for a in 0..8 {
            assert_eq!(h0(&spec(&[0, a]), ScrollDivisor::M), (a + 2).into());
        }
        assert_eq!(h0(&spec(&[3, 1, 2]), ScrollDivisor::new(0, 0)), 1.into());
        assert_eq!(h0(&spec(&[3, 1, 2]), ScrollDivisor::new(0, -1)), 0.into());
    }

    #[test]
    fn h0_matches_monomial_count() {
        for t in [vec![0, 1], vec![1, 2, 3], vec![-2, 0, 5], vec![0, 0, 0, 4]] {
            let f = spec(&t);
            for d in 0..5 {
                for e in -12..6 {
                    let div = ScrollDivisor::new(e, d);
                    assert_eq!(h0(&f, div), h0_brute(&f, div).into(), "{t:?} {e} {d}");
                }
            }
        }
    }

    #[test]
    fn h0_linear_is_sum_of_positive_terms() {
        let f = spec(&[-1, 2, 4]);
        for e in -8..4 {
            let expected: i64 = f.twists().iter().map(|a| (a + e + 1).max(0)).sum();
            assert_eq!(h0(&f, ScrollDivisor::new(e, 1)), expected.into());
        }
    }

    #[test]
    fn compositions_counted() {
        let mut c = 0;
        for_each_composition(4, 5, |_| c += 1);
        assert_eq!(c, 56);
    }

    #[test]
    fn base_multiplicity_examples() {
        let f = spec(&[1, 2, 3]);
        let m = |e, d, b| base_multiplicity(&f, ScrollDivisor::new(e, d), b).unwrap();
        assert_eq!(m(-4, 2, 1), BaseMultiplicity::Multiplicity(1));
        assert_eq!(m(0, 1, 1), BaseMultiplicity::Multiplicity(0));
        assert_eq!(m(-20, 2, 1), BaseMultiplicity::ContainsAll);
        assert_eq!(
            base_multiplicity_oracle(&f, ScrollDivisor::new(-4, 2), 1).unwrap(),
            BaseMultiplicity::Multiplicity(1)
        );
        for a in 1..6 {
            let g = spec(&[0, a]);
            assert_eq!(
                base_multiplicity(&g, ScrollDivisor::new(-1, 1), 0).unwrap(),
                BaseMultiplicity::Multiplicity(1)
            );
        }
    }

    #[test]
    fn base_multiplicity_errors() {
        let f = spec(&[1, 2, 3]);
        let d = ScrollDivisor::new(0, 1);
        assert!(matches!(base_multiplicity(&f, d, 3), Err(Error::InvalidSubscroll(_))));
        assert!(matches!(base_multiplicity(&f, d, 5), Err(Error::InvalidSubscroll(_))));
        assert!(matches!(
            base_multiplicity(&f, ScrollDivisor::new(0, 0), 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn base_multiplicity_agrees_with_oracle_small() {
        for t in [vec![0, 1], vec![0, 2, 2, 5], vec![1, 1, 4]] {
            let f = spec(&t);
            for &b in f.twists().iter().filter(|&&b| b < f.max_twist()) {
                for d in 1..4 {
                    for e in -15..5 {
                        let div = ScrollDivisor::new(e, d);
                        assert_eq!(
                            base_multiplicity(&f, div, b).unwrap(),
                            base_multiplicity_oracle(&f, div, b).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn base_locus_of_linear_system() {
        let f = spec(&[0, 1, 1, 3]);
        for e in -5..2 {
            assert_eq!(absent_variables(&f, e), negative_subscroll(&f, -e - 1));
        }
    }

    #[test]
    fn canonical_examples() {
        for a in 0..5 {
            assert_eq!(canonical_class(&spec(&[0, a])), ScrollDivisor::new(a - 2, -2));
        }
        assert_eq!(canonical_class(&spec(&[1, 1, 1])), ScrollDivisor::new(1, -3));
        let k = to_surface_basis(0, canonical_class(&spec(&[0, 0])));
        assert_eq!(k, SurfaceClass::new(-2, -2));
        for a in 0..6 {
            let k = to_surface_basis(a, canonical_class(&spec(&[0, a])));
            assert_eq!(k, SurfaceClass::new(-a - 2, -2));
        }
    }

    #[test]
    fn top_intersection_examples() {
        let f = spec(&[2, 5]);
        let (l, m) = (ScrollDivisor::L, ScrollDivisor::M);
        assert_eq!(top_intersection(&f, &[m, m]).unwrap(), 7.into());
        assert_eq!(top_intersection(&f, &[l, m]).unwrap(), 1.into());
        assert_eq!(top_intersection(&f, &[l, l]).unwrap(), 0.into());
        let g = spec(&[0, 1, 2, 3]);
        assert_eq!(top_intersection(&g, &[l, l, m, m]).unwrap(), 0.into());
        assert_eq!(top_intersection(&g, &[m, m, m, m]).unwrap(), 6.into());
        assert!(matches!(
            top_intersection(&g, &[m, m]),
            Err(Error::ArityError { expected: 4, got: 2 })
        ));
    }

    #[test]
    fn top_intersection_vanishes_on_coordinate_hyperplanes() {
        let f = spec(&[0, 2, 3, 7]);
        let ds: Vec<ScrollDivisor> = f.twists().iter().map(|&a| ScrollDivisor::new(-a, 1)).collect();
        assert_eq!(top_intersection(&f, &ds).unwrap(), 0.into());
        let mut with_l = ds.clone();
        with_l[0] = ScrollDivisor::L;
        assert_eq!(top_intersection(&f, &with_l).unwrap(), 1.into());
    }

    #[test]
    fn surface_pairing_matches_scroll_pairing() {
        for a in 0..5 {
            assert_eq!(surface_scroll_pairing(a, SurfaceClass::A, SurfaceClass::B), 1);
            assert_eq!(surface_scroll_pairing(a, SurfaceClass::B, SurfaceClass::B), -a);
            assert_eq!(surface_scroll_pairing(a, SurfaceClass::new(a, 1), SurfaceClass::B), 0);
            let f = spec(&[0, a]);
            for (x, y) in [(1, 0), (0, 1), (-3, 2), (4, -1)].iter().zip([(2, 1), (1, 1), (0, 3), (-2, 2)]) {
                let x = ScrollDivisor::new(x.0, x.1);
                let y = ScrollDivisor::new(y.0, y.1);
                let via_scroll = top_intersection(&f, &[x, y]).unwrap();
                let via_surface =
                    surface_scroll_pairing(a, to_surface_basis(a, x), to_surface_basis(a, y));
                assert_eq!(via_scroll, via_surface.into());
            }
        }
    }

    #[test]
    fn section_of_relative_cubic_is_rational() {
        // X ∈ |(−3k−6)L + 3M| on F(0, k+2, 3k+6); D₃ = (x₃ = 0) cuts X in 3C.
        for k in -1..6 {
            let f = spec(&[0, k + 2, 3 * k + 6]);
            let x = ScrollDivisor::new(-3 * k - 6, 3);
            let d3 = ScrollDivisor::new(-(3 * k + 6), 1);
            let c2_times_9 = top_intersection(&f, &[x, d3, d3]).unwrap();
            assert_eq!(c2_times_9, BigInt::from(9 * (-k - 2)));
            let lc_times_3 = top_intersection(&f, &[ScrollDivisor::L, x, d3]).unwrap();
            assert_eq!(lc_times_3, 3.into());
            let kx = canonical_class(&f) + x;
            assert_eq!(kx, ScrollDivisor::new(k, 0));
            let kc_times_3 = top_intersection(&f, &[kx, x, d3]).unwrap();
            assert_eq!(kc_times_3 / 3 + c2_times_9 / 9, BigInt::from(-2));
        }
    }

    #[test]
    fn maroni_examples() {
        let g4 = maroni_admissible(4).unwrap();
        assert_eq!(
            g4,
            vec![MaroniCase { a1: 0, a2: 2, cone: true }, MaroniCase { a1: 1, a2: 1, cone: false }]
        );
        let g5 = maroni_admissible(5).unwrap();
        assert_eq!(g5, vec![MaroniCase { a1: 1, a2: 2, cone: false }]);
        assert_eq!(maroni_admissible(3).unwrap(), vec![MaroniCase { a1: 0, a2: 1, cone: true }]);
        for g in 5..60 {
            assert!(maroni_admissible(g).unwrap().iter().all(|c| !c.cone));
        }
        assert!(maroni_admissible(2).is_err());
    }

    #[test]
    fn cubic_range_examples() {
        let r0 = relative_cubic_range(0);
        assert_eq!(r0.len(), 3 + 4 + 5);
        assert!(r0.iter().all(|c| c.a2 <= 2 && c.a2 <= c.a3 && c.a3 <= 2 * c.a2 + 2));
        for k in -1..8 {
            let r = relative_cubic_range(k);
            assert!(r.iter().any(|c| c.a2 == k + 2 && c.a3 == 3 * (k + 2)));
        }
        let w = relative_cubic_range(-2);
        assert_eq!(w.len(), 1);
        assert_eq!((w[0].a2, w[0].a3), (0, 0));
        assert!(relative_cubic_range(-3).is_empty());
    }

    #[test]
    fn normalization_shifts_classes() {
        let f = spec(&[3, 5, 4]);
        let (g, m) = f.normalized();
        assert_eq!(g.twists(), &[0, 1, 2]);
        assert_eq!(m, 3);
        for d in 0..4 {
            for e in -10..3 {
                assert_eq!(h0(&f, ScrollDivisor::new(e, d)), h0(&g, ScrollDivisor::new(e + d * m, d)));
            }
        }
    }
}
