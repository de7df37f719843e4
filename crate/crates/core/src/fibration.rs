//! Plurigenera of elliptic fibrations through fractional divisors on the
//! base curve.
//!
//! For `φ: X → B` with multiple fibres `Fᵢ = mᵢEᵢ`, the canonical class is
//! `K_X = φ*(K_B + L) + Σ aᵢEᵢ`, the pullback of
//! `Δ = (2b − 2 + deg L)Q + Σ (aᵢ/mᵢ)Qᵢ`, and `P_m = h⁰(B, ⌊mΔ⌋)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// A multiple fibre `mE`. `n` is the order of `O_E(E)` (equal to `m` for a
/// tame fibre) and `a` the local canonical class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    pub m: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
}

impl Fiber {
    pub fn tame(m: i64) -> Fiber {
        Fiber { m, n: None, a: None }
    }

    pub fn wild(m: i64, n: i64, a: i64) -> Fiber {
        Fiber {
            m,
            n: Some(n),
            a: Some(a),
        }
    }

    pub fn order(&self) -> i64 {
        self.n.unwrap_or(self.m)
    }

    pub fn local_canonical(&self) -> i64 {
        self.a.unwrap_or(self.m - 1)
    }

    pub fn is_wild(&self) -> bool {
        self.order() < self.m
    }

    fn validate(&self) -> Result<()> {
        let (m, n, a) = (self.m, self.order(), self.local_canonical());
        let bad = |why: &str| Err(Error::InvalidFiber(format!("(m={m}, n={n}, a={a}): {why}")));
        if m < 2 {
            return bad("m must be at least 2");
        }
        if !(0..m).contains(&a) {
            return bad("need 0 <= a < m");
        }
        if n < 1 || n > m || m % n != 0 {
            return bad("n must divide m");
        }
        if (a + 1) % n != 0 {
            return bad("n must divide a + 1");
        }
        if n < m && a != m - 1 && a != m - n - 1 {
            return bad("a wild fibre needs a = m - 1 or a = m - n - 1");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationSpec {
    pub base_genus: u32,
    #[serde(rename = "degL")]
    pub deg_l: i64,
    #[serde(default)]
    pub fibers: Vec<Fiber>,
}

impl FibrationSpec {
    /// Base `P¹`, `deg L = 0`, tame fibres of the given multiplicities.
    pub fn tame_rational(ms: &[i64]) -> FibrationSpec {
        FibrationSpec {
            base_genus: 0,
            deg_l: 0,
            fibers: ms.iter().map(|&m| Fiber::tame(m)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.fibers.iter().try_for_each(Fiber::validate)
    }
}

/// `deg0·Q + Σ pᵢQᵢ` on a curve of genus `base_genus`, with `0 ≤ pᵢ < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FracDivisor {
    pub base_genus: u32,
    pub deg0: i64,
    #[serde(with = "exact::serde_rational_vec")]
    pub points: Vec<Rational>,
}

impl FracDivisor {
    pub fn degree(&self) -> Rational {
        self.points.iter().fold(exact::int(self.deg0), |acc, p| acc + p)
    }

    /// `deg ⌊mΔ⌋`.
    pub fn floor_degree(&self, m: i64) -> BigInt {
        let mut d = BigInt::from(m) * self.deg0;
        for p in &self.points {
            d += (p.numer() * m).div_floor(p.denom());
        }
        d
    }

    /// Denominators of the marked points, ascending.
    pub fn multiset(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.points.iter().map(|p| p.denom().to_i64().expect("small denominator")).collect();
        v.sort_unstable();
        v
    }
}

/// `Δ` for the canonical class of the fibration.
pub fn delta_of(f: &FibrationSpec) -> Result<FracDivisor> {
    f.validate()?;
    Ok(FracDivisor {
        base_genus: f.base_genus,
        deg0: 2 * f.base_genus as i64 - 2 + f.deg_l,
        points: f.fibers.iter().map(|x| exact::rat(x.local_canonical(), x.m)).collect(),
    })
}

/// `h⁰` of a line bundle on the base, exact where degree data determine it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Plurigenus {
    Exact { value: u64 },
    /// Depends on the linear equivalence class, not only on the degree.
    Interval { lo: u64, hi: u64 },
}

impl Plurigenus {
    pub fn exact(&self) -> Option<u64> {
        match self {
            Plurigenus::Exact { value } => Some(*value),
            Plurigenus::Interval { .. } => None,
        }
    }

    /// Lower bound valid in both cases.
    pub fn lo(&self) -> u64 {
        match self {
            Plurigenus::Exact { value } => *value,
            Plurigenus::Interval { lo, .. } => *lo,
        }
    }
}

/// `h⁰` of a divisor of degree `d` on a curve of genus `b`, as far as the
/// degree determines it: Riemann–Roch above `2b − 2`, Clifford below.
pub fn h0_on_curve(b: u32, d: &BigInt) -> Plurigenus {
    let b = BigInt::from(b);
    let to_u64 = |x: BigInt| x.to_u64().expect("plurigenus fits in u64");
    if d.is_negative() {
        return Plurigenus::Exact { value: 0 };
    }
    if b.is_zero() {
        return Plurigenus::Exact { value: to_u64(d + 1) };
    }
    if *d > &b * 2 - 2 {
        return Plurigenus::Exact { value: to_u64(d + 1 - &b) };
    }
    let lo = std::cmp::max(d + 1 - &b, BigInt::zero());
    let hi: BigInt = d / 2 + 1;
    if lo == hi {
        Plurigenus::Exact { value: to_u64(lo) }
    } else {
        Plurigenus::Interval {
            lo: to_u64(lo),
            hi: to_u64(hi),
        }
    }
}

/// `P_m = h⁰(⌊mΔ⌋)`.
pub fn plurigenus(delta: &FracDivisor, m: i64) -> Result<Plurigenus> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("m must be positive, got {m}")));
    }
    Ok(h0_on_curve(delta.base_genus, &delta.floor_degree(m)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kappa {
    #[serde(rename = "-inf")]
    NegInf,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuKappa {
    pub kappa: Kappa,
    #[serde(with = "exact::serde_rational")]
    pub degree: Rational,
    /// `m` with `mK ∼ 0`, for `κ = 0` over `P¹`.
    pub torsion_order: Option<i64>,
    pub multiset: Vec<i64>,
    pub warning: Option<String>,
}

pub fn nu_kappa(delta: &FracDivisor) -> NuKappa {
    let degree = delta.degree();
    let multiset = delta.multiset();
    let (kappa, torsion_order, warning) = if degree.is_positive() {
        (Kappa::One, None, None)
    } else if degree.is_zero() {
        let order = (delta.base_genus == 0).then(|| multiset.iter().fold(1i64, |l, &m| l.lcm(&m)));
        (Kappa::Zero, order, None)
    } else {
        (Kappa::NegInf, None, Some("deg Δ < 0, so K is not nef".to_string()))
    };
    NuKappa {
        kappa,
        degree,
        torsion_order,
        multiset,
        warning,
    }
}

/// Nondecreasing sequences of `k` integers `≥ lo` with `Σ 1/mᵢ = target`.
fn reciprocal_solutions(k: usize, target: &Rational, lo: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if k == 0 {
        if target.is_zero() {
            out.push(prefix.clone());
        }
        return;
    }
    if !target.is_positive() {
        return;
    }
    // Each remaining part is at least the current one, so 1/m ≥ target/k,
    // that is m ≤ k/target.
    let hi = (exact::int(k as i64) / target).floor().to_integer().to_i64().unwrap_or(i64::MAX);
    for m in lo.max(2)..=hi {
        let rest = target - exact::rat(1, m);
        if rest.is_negative() {
            continue;
        }
        prefix.push(m);
        reciprocal_solutions(k - 1, &rest, m, prefix, out);
        prefix.pop();
    }
}

/// Multisets `{mᵢ ≥ 2}` of at most `parts_max` entries with
/// `Σ 1/mᵢ = (number of parts) − 2`, that is `deg Δ = 0` over `P¹`.
pub fn torsion_multisets(parts_max: usize) -> Result<Vec<Vec<i64>>> {
    if parts_max < 3 {
        return Err(Error::InvalidArgument(format!("parts_max must be at least 3, got {parts_max}")));
    }
    let mut out = Vec::new();
    // Σ 1/mᵢ ≤ k/2 forces k − 2 ≤ k/2, so k ≤ 4.
    for k in 3..=parts_max.min(4) {
        reciprocal_solutions(k, &exact::int(k as i64 - 2), 2, &mut Vec::new(), &mut out);
    }
    out.sort();
    let expected: Vec<Vec<i64>> = vec![vec![2, 2, 2, 2], vec![2, 3, 6], vec![2, 4, 4], vec![3, 3, 3]];
    if parts_max >= 4 && out != expected {
        return Err(Error::InvariantViolation(format!("unexpected torsion list {out:?}")));
    }
    Ok(out)
}

fn for_each_multiset(max_len: usize, lo: i64, hi: i64, prefix: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    f(prefix);
    if prefix.len() == max_len {
        return;
    }
    for m in lo..=hi {
        prefix.push(m);
        for_each_multiset(max_len, m, hi, prefix, f);
        prefix.pop();
    }
}

/// Multisets with `deg Δ > 0` and `P₁₂ ≤ 1` (base `P¹`, `deg L = 0`), with
/// parts in `2..=cap` and at most four parts.
pub fn p12_le1_multisets_with_cap(cap: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for_each_multiset(4, 2, cap, &mut Vec::new(), &mut |ms| {
        let delta = delta_of(&FibrationSpec::tame_rational(ms)).expect("tame fibres are valid");
        if delta.degree().is_positive() && plurigenus(&delta, 12).expect("m = 12").lo() <= 1 {
            out.push(ms.to_vec());
        }
    });
    out.sort();
    out
}

/// All multisets with `deg Δ > 0` and `P₁₂ ≤ 1`.
///
/// Each part contributes `⌊12 − 12/m⌋ ≥ 6` to `deg⌊12Δ⌋ = −24 + Σ⌊12 − 12/mᵢ⌋`,
/// and `P₁₂ ≤ 1` means this degree is `≤ 0`. So there are at most four
/// parts, and four parts means `(2,2,2,2)` with `deg Δ = 0`. With three
/// parts, `deg Δ > 0` rules out `(2,2,m)`, the other two parts then
/// contribute at least `6 + 8`, and a part `m ≥ 12` adds `11`, exceeding 24.
/// Parts up to 11 therefore suffice.
pub fn p12_le1_multisets() -> Vec<Vec<i64>> {
    p12_le1_multisets_with_cap(11)
}

/// Rewrites each wild fibre with `a = m − n − 1` as the two tame fractions
/// `(m−1)/m` and `(m/n − 1)/(m/n)`, lowering `deg0` by one for each.
pub fn wild_equivalent(f: &FibrationSpec) -> Result<FracDivisor> {
    let delta = delta_of(f)?;
    let mut deg0 = delta.deg0;
    let mut points = Vec::new();
    let mut rewritten = 0;
    for x in &f.fibers {
        let (m, n, a) = (x.m, x.order(), x.local_canonical());
        if n < m && a == m - n - 1 {
            let r = m / n;
            points.push(exact::rat(m - 1, m));
            points.push(exact::rat(r - 1, r));
            deg0 -= 1;
            rewritten += 1;
        } else {
            points.push(exact::rat(a, m));
        }
    }
    if rewritten == 0 {
        return Err(Error::InvalidFiber("no wild fibre with a = m - n - 1".into()));
    }
    let out = FracDivisor {
        base_genus: f.base_genus,
        deg0,
        points,
    };
    if out.degree() != delta.degree() {
        return Err(Error::InvariantViolation("wild rewriting changed the degree".into()));
    }
    Ok(out)
}

/// `true` when every `⌊(m+m′)Δ⌋ ≥ ⌊mΔ⌋ + ⌊m′Δ⌋` term by term.
pub fn floors_superadditive(delta: &FracDivisor, m: i64, m2: i64) -> bool {
    delta.points.iter().all(|p| {
        let fl = |k: i64| (p.numer() * k).div_floor(p.denom());
        fl(m + m2) >= fl(m) + fl(m2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn champion() -> FracDivisor {
        delta_of(&FibrationSpec::tame_rational(&[2, 3, 7])).unwrap()
    }

    fn pm(d: &FracDivisor, m: i64) -> u64 {
        plurigenus(d, m).unwrap().exact().unwrap()
    }

    #[test]
    fn champion_delta() {
        let d = champion();
        assert_eq!(d.deg0, -2);
        assert_eq!(d.points, vec![rat(1, 2), rat(2, 3), rat(6, 7)]);
        assert_eq!(d.degree(), rat(1, 42));
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"base_genus":0,"deg0":-2,"points":["1/2","2/3","6/7"]}"#);
    }

    #[test]
    fn champion_plurigenera() {
        let d = champion();
        for m in 1..=5 {
            assert_eq!(pm(&d, m), 0);
        }
        assert_eq!(pm(&d, 6), 1);
        assert_eq!(pm(&d, 42), 2);
        assert_eq!(pm(&d, 43), 0);
        assert_eq!(pm(&d, 85), 1);
        assert!((1..=41).all(|m| pm(&d, m) <= 1));
    }

    #[test]
    fn trivial_deltas() {
        let d = delta_of(&FibrationSpec {
            base_genus: 1,
            deg_l: 0,
            fibers: vec![],
        })
        .unwrap();
        assert_eq!(d.degree(), rat(0, 1));
        assert_eq!(plurigenus(&d, 3).unwrap(), Plurigenus::Interval { lo: 0, hi: 1 });
        let zero = FracDivisor {
            base_genus: 0,
            deg0: 0,
            points: vec![],
        };
        assert!((1..20).all(|m| pm(&zero, m) == 1));
        assert!(plurigenus(&zero, 0).is_err());
    }

    #[test]
    fn higher_genus_bases() {
        assert_eq!(h0_on_curve(3, &BigInt::from(5)), Plurigenus::Exact { value: 3 });
        assert_eq!(h0_on_curve(3, &BigInt::from(2)), Plurigenus::Interval { lo: 0, hi: 2 });
        assert_eq!(h0_on_curve(3, &BigInt::from(4)), Plurigenus::Interval { lo: 2, hi: 3 });
        assert_eq!(h0_on_curve(2, &BigInt::from(0)), Plurigenus::Interval { lo: 0, hi: 1 });
        assert_eq!(h0_on_curve(1, &BigInt::from(2)), Plurigenus::Exact { value: 2 });
        assert_eq!(h0_on_curve(4, &BigInt::from(-1)), Plurigenus::Exact { value: 0 });
    }

    #[test]
    fn fiber_validation() {
        let bad = |fib: Fiber| {
            let f = FibrationSpec {
                base_genus: 0,
                deg_l: 1,
                fibers: vec![fib],
            };
            matches!(delta_of(&f), Err(Error::InvalidFiber(_)))
        };
        assert!(bad(Fiber::tame(1)));
        assert!(bad(Fiber::wild(4, 3, 2)));
        assert!(bad(Fiber::wild(4, 2, 2)));
        assert!(bad(Fiber::wild(4, 4, 1)));
        assert!(bad(Fiber::wild(6, 2, 1)));
        assert!(!bad(Fiber::wild(4, 2, 1)));
        assert!(!bad(Fiber::wild(4, 2, 3)));
    }

    #[test]
    fn wild_examples() {
        let f = FibrationSpec {
            base_genus: 0,
            deg_l: 1,
            fibers: vec![Fiber::wild(4, 2, 1)],
        };
        let d = delta_of(&f).unwrap();
        assert_eq!((d.deg0, d.points.clone()), (-1, vec![rat(1, 4)]));
        let w = wild_equivalent(&f).unwrap();
        assert_eq!((w.deg0, w.points.clone()), (-2, vec![rat(3, 4), rat(1, 2)]));
        assert_eq!(w.degree(), d.degree());
        assert!(wild_equivalent(&FibrationSpec::tame_rational(&[2, 3, 7])).is_err());

        let torsion = FibrationSpec {
            base_genus: 0,
            deg_l: 1,
            fibers: vec![Fiber::wild(4, 2, 1), Fiber::tame(4)],
        };
        let nk = nu_kappa(&wild_equivalent(&torsion).unwrap());
        assert_eq!(nk.kappa, Kappa::Zero);
        assert_eq!(nk.multiset, vec![2, 4, 4]);
        assert_eq!(nk.torsion_order, Some(4));
    }

    #[test]
    fn kappa_examples() {
        let nk = nu_kappa(&delta_of(&FibrationSpec::tame_rational(&[2, 2, 2, 2])).unwrap());
        assert_eq!((nk.kappa, nk.torsion_order), (Kappa::Zero, Some(2)));
        assert_eq!(nu_kappa(&champion()).kappa, Kappa::One);
        let nk = nu_kappa(&delta_of(&FibrationSpec::tame_rational(&[])).unwrap());
        assert_eq!(nk.kappa, Kappa::NegInf);
        assert_eq!(nk.degree, rat(-2, 1));
        assert!(nk.warning.is_some());
    }

    #[test]
    fn torsion_lists() {
        let four = torsion_multisets(4).unwrap();
        assert_eq!(four, vec![vec![2, 2, 2, 2], vec![2, 3, 6], vec![2, 4, 4], vec![3, 3, 3]]);
        assert_eq!(torsion_multisets(3).unwrap(), vec![vec![2, 3, 6], vec![2, 4, 4], vec![3, 3, 3]]);
        assert_eq!(torsion_multisets(5).unwrap(), four);
        assert_eq!(torsion_multisets(9).unwrap(), four);
        assert!(torsion_multisets(2).is_err());
    }

    #[test]
    fn torsion_plurigenera_detect_order() {
        for ms in torsion_multisets(4).unwrap() {
            let d = delta_of(&FibrationSpec::tame_rational(&ms)).unwrap();
            let order = nu_kappa(&d).torsion_order.unwrap();
            assert_eq!(order, *ms.iter().max().unwrap());
            for m in 1..=60 {
                assert_eq!(pm(&d, m), u64::from(m % order == 0), "{ms:?} m={m}");
            }
        }
    }

    #[test]
    fn p12_list() {
        let got = p12_le1_multisets();
        let mut expected = vec![vec![2, 4, 5], vec![2, 5, 5]];
        expected.extend((7..=11).map(|m| vec![2, 3, m]));
        expected.sort();
        assert_eq!(got, expected);
        assert_eq!(p12_le1_multisets_with_cap(40), expected);
    }

    #[test]
    fn floors_are_superadditive() {
        let d = champion();
        for m in 1..50 {
            for m2 in 1..50 {
                assert!(floors_superadditive(&d, m, m2));
                assert!(d.floor_degree(m + m2) >= d.floor_degree(m) + d.floor_degree(m2));
            }
        }
    }
}
