//! Numerical bookkeeping for surfaces: Noether's formula, the table of
//! cases with `p_g ≤ 1`, Riemann–Roch, the index theorem, the nef
//! threshold and the case division by `ν`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Numerical invariants of a surface. `e` is the Euler number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    #[serde(rename = "K2")]
    pub k2: i64,
    pub chi: i64,
    pub pg: i64,
    pub q: i64,
    pub qprime: i64,
    #[serde(rename = "B2")]
    pub b2: i64,
    pub e: i64,
}

impl SurfaceInvariants {
    /// Fills in `χ = 1 − q′ + p_g` and `e = 2 − 4q + B₂`.
    pub fn new(k2: i64, pg: i64, q: i64, qprime: i64, b2: i64) -> SurfaceInvariants {
        SurfaceInvariants {
            k2,
            chi: 1 - qprime + pg,
            pg,
            q,
            qprime,
            b2,
            e: 2 - 4 * q + b2,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.k2 + self.e != 12 * self.chi {
            return Err(Error::InvalidInvariants(format!(
                "Noether fails: K2 + e = {} but 12 chi = {}",
                self.k2 + self.e,
                12 * self.chi
            )));
        }
        if self.chi != 1 - self.qprime + self.pg {
            return Err(Error::InvalidInvariants("chi != 1 - q' + pg".into()));
        }
        if self.qprime < self.q || self.q < 0 || self.pg < 0 || self.b2 < 1 {
            return Err(Error::InvalidInvariants("need q' >= q >= 0, pg >= 0, B2 >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct K2B2 {
    #[serde(rename = "K2")]
    pub k2: i64,
    #[serde(rename = "B2")]
    pub b2: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamousRow {
    pub case: String,
    pub pg: i64,
    pub qprime: i64,
    pub q: i64,
    pub chi: i64,
    /// Common value of `K² + B₂` over the row.
    pub sum: i64,
    pub constraint: String,
    pub remark: String,
    pub solutions: Vec<K2B2>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamousTable {
    pub assumptions: Vec<String>,
    pub rows: Vec<FamousRow>,
}

const CASES: [(&str, i64, i64, i64, &str); 7] = [
    ("1", 1, 0, 0, "if K ≡ 0 then K3"),
    ("2", 1, 1, 1, "does not exist with K ≡ 0"),
    ("3", 0, 0, 0, "if K ≡ 0 then Enriques"),
    ("3'", 1, 1, 0, "if K ≡ 0 then Enriques, char 2"),
    ("4", 1, 2, 2, "if K ≡ 0 then Abelian"),
    ("5", 0, 1, 1, "if K ≡ 0 then bielliptic"),
    ("5'", 1, 2, 1, "if K ≡ 0 then quasi-bielliptic"),
];

/// Solutions of `K² + 12(q′ − q) + 8q + B₂ = 10 + 12p_g` with `p_g ≤ 1`,
/// grouped by `(p_g, q′, q)`.
pub fn famous_table() -> FamousTable {
    let mut rows = Vec::new();
    for pg in 0..=1i64 {
        let rhs = 10 + 12 * pg;
        for q in (0..).take_while(|q| 8 * q <= rhs) {
            for qprime in q..=q + pg {
                let sum = rhs - 12 * (qprime - q) - 8 * q;
                let b2_min = if q >= 1 { 2 } else { 1 };
                let solutions: Vec<K2B2> = (0..=sum - b2_min).map(|k2| K2B2 { k2, b2: sum - k2 }).collect();
                if solutions.is_empty() {
                    continue;
                }
                for s in &solutions {
                    SurfaceInvariants::new(s.k2, pg, q, qprime, s.b2)
                        .check()
                        .expect("table rows satisfy Noether");
                }
                let (case, remark) = CASES
                    .iter()
                    .find(|c| (c.1, c.2, c.3) == (pg, qprime, q))
                    .map(|c| (c.0.to_string(), c.4.to_string()))
                    .unwrap_or_else(|| (format!("({pg},{qprime},{q})"), String::new()));
                let constraint = if solutions.len() == 1 {
                    format!("K2 = {}, B2 = {}", solutions[0].k2, solutions[0].b2)
                } else {
                    format!("K2 + B2 = {sum}")
                };
                rows.push(FamousRow {
                    case,
                    pg,
                    qprime,
                    q,
                    chi: 1 - qprime + pg,
                    sum,
                    constraint,
                    remark,
                    solutions,
                });
            }
        }
    }
    let rank = |r: &FamousRow| CASES.iter().position(|c| c.0 == r.case).unwrap_or(CASES.len());
    rows.sort_by_key(|r| (rank(r), r.pg, r.qprime, r.q));
    FamousTable {
        assumptions: vec![
            "p_g <= 1".into(),
            "q <= q' <= q + p_g (imposed)".into(),
            "K2 >= 0, B2 >= 1, B2 >= 2 when q >= 1".into(),
        ],
        rows,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegularInvariants {
    pub chi: i64,
    #[serde(rename = "K2")]
    pub k2: i64,
    pub e: i64,
    #[serde(rename = "B2")]
    pub b2: i64,
    #[serde(rename = "B2p")]
    pub b2_plus: i64,
    #[serde(rename = "B2m")]
    pub b2_minus: i64,
}

/// Betti numbers and signature of a surface with `q = 0`.
pub fn regular_invariants(chi: i64, k2: i64) -> Result<RegularInvariants> {
    let e = 12 * chi - k2;
    let r = RegularInvariants {
        chi,
        k2,
        e,
        b2: e - 2,
        b2_plus: 2 * chi - 1,
        b2_minus: e - 2 * chi - 1,
    };
    if r.b2_plus < 0 || r.b2_minus < 0 {
        return Err(Error::InvalidInvariants(format!(
            "chi={chi}, K2={k2} gives B2+ = {}, B2- = {}",
            r.b2_plus, r.b2_minus
        )));
    }
    if r.b2_plus - r.b2_minus != 4 * chi - e || r.b2_plus + r.b2_minus != r.b2 {
        return Err(Error::InvariantViolation("signature identity fails".into()));
    }
    Ok(r)
}

/// `χ(O_X(D)) = χ(O_X) + ½ D(D − K)`.
pub fn rr_surface(chi: i64, k_dot_d: i64, d2: i64) -> Result<i64> {
    let twice = d2 - k_dot_d;
    if twice % 2 != 0 {
        return Err(Error::InvariantViolation(format!("D^2 - K.D = {twice} is odd")));
    }
    Ok(chi + twice / 2)
}

/// Gram data `D₁², D₁D₂, D₂²` of two divisor classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairGram {
    pub d1_sq: i64,
    pub d1_d2: i64,
    pub d2_sq: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IndexVerdict {
    Ok { det: i128 },
    /// `λD₁ + μD₂ ≡ 0`.
    Equality { det: i128, witness: [i64; 2] },
    Violated { det: i128 },
}

/// Checks `D₁²D₂² − (D₁D₂)² ≤ 0` for classes spanning a positive vector.
pub fn index_determinant(g: PairGram) -> Result<IndexVerdict> {
    let (a, b, c) = (g.d1_sq as i128, g.d1_d2 as i128, g.d2_sq as i128);
    let det = a * c - b * b;
    if a <= 0 && c <= 0 && det >= 0 {
        return Err(Error::NotApplicable("no combination of D1, D2 has positive square".into()));
    }
    Ok(match det.signum() {
        -1 => IndexVerdict::Ok { det },
        1 => IndexVerdict::Violated { det },
        _ => {
            let (l, m) = if a != 0 { (b, -a) } else { (c, -b) };
            let (l, m) = if l == 0 && m == 0 { (1, 0) } else { (l, m) };
            let g = l.gcd(&m);
            let sign = if l < 0 || (l == 0 && m < 0) { -1 } else { 1 };
            IndexVerdict::Equality {
                det,
                witness: [(sign * l / g) as i64, (sign * m / g) as i64],
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClassDatum {
    pub name: String,
    #[serde(rename = "H_dot")]
    pub h_dot: i64,
    #[serde(rename = "K_dot")]
    pub k_dot: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NefThreshold {
    /// `None` is `+∞`: `K` is nonnegative on every declared class.
    #[serde(with = "exact::serde_rational_opt")]
    pub t0: Option<Rational>,
    pub minimizer: Option<String>,
    pub denominator_le_3: Option<bool>,
    pub scope: String,
}

/// `t₀ = sup{t : H + tK nef}` over the declared classes only.
///
/// Nefness is tested against the listed curves and nothing else, so the
/// value is an upper bound for the true threshold unless the list contains
/// every extremal curve.
pub fn nef_threshold(classes: &[CurveClassDatum]) -> Result<NefThreshold> {
    if let Some(c) = classes.iter().find(|c| c.h_dot <= 0) {
        return Err(Error::NotAmple(format!("H.{} = {} is not positive", c.name, c.h_dot)));
    }
    let mut best: Option<(Rational, &CurveClassDatum)> = None;
    for c in classes.iter().filter(|c| c.k_dot < 0) {
        let t = exact::rat(c.h_dot, -c.k_dot);
        if best.as_ref().map_or(true, |(b, _)| t < *b) {
            best = Some((t, c));
        }
    }
    let denominator_le_3 = best.as_ref().map(|(t, _)| *t.denom() <= 3.into());
    Ok(NefThreshold {
        minimizer: best.as_ref().map(|(_, c)| c.name.clone()),
        t0: best.map(|(t, _)| t),
        denominator_le_3,
        scope: "declared curves only".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuEntry {
    pub nu: u8,
    pub definition: String,
    pub growth: String,
    pub effective: Vec<String>,
    pub structure: String,
}

/// Case division for `K` nef by the numerical Kodaira dimension.
pub fn nu_table(k_nef: bool, k2: i64, k_num_zero: bool) -> Result<NuEntry> {
    if !k_nef {
        return Err(Error::NotInScope("K is not nef; run the minimal model program first".into()));
    }
    if k2 < 0 {
        return Err(Error::InvalidInvariants("K nef forces K2 >= 0".into()));
    }
    if k_num_zero && k2 != 0 {
        return Err(Error::InvalidInvariants("K numerically trivial forces K2 = 0".into()));
    }
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    Ok(if k2 > 0 {
        NuEntry {
            nu: 2,
            definition: "K2 > 0".into(),
            growth: "P_m ~ m^2, kappa = 2".into(),
            effective: s(&["P_m >= 2 for all m >= 2"]),
            structure: "canonical model X -> Y".into(),
        }
    } else if !k_num_zero {
        NuEntry {
            nu: 1,
            definition: "K2 = 0, K not numerically trivial".into(),
            growth: "P_m ~ m, kappa = 1".into(),
            effective: s(&["P_m >= 1 for some m in {1,2,3,4,6}", "P_m >= 2 for some m <= 42"]),
            structure: "elliptic fibre space X -> C".into(),
        }
    } else {
        NuEntry {
            nu: 0,
            definition: "K numerically trivial".into(),
            growth: "P_m = 1 for some m, kappa = 0".into(),
            effective: s(&["mK ~ 0 for some m in {1,2,3,4,6}"]),
            structure: "Abelian, K3, or etale quotient by Z/m".into(),
        }
    })
}

/// `H·Γ / (−K·Γ)` for a class with `K·Γ < 0`.
pub fn threshold_of(c: &CurveClassDatum) -> Option<Rational> {
    (c.k_dot < 0).then(|| exact::rat(c.h_dot, -c.k_dot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn famous_rows() {
        let t = famous_table();
        let got: Vec<(&str, i64, i64, i64, &str)> = t
            .rows
            .iter()
            .map(|r| (r.case.as_str(), r.pg, r.qprime, r.q, r.constraint.as_str()))
            .collect();
        assert_eq!(
            got,
            vec![
                ("1", 1, 0, 0, "K2 + B2 = 22"),
                ("2", 1, 1, 1, "K2 + B2 = 14"),
                ("3", 0, 0, 0, "K2 + B2 = 10"),
                ("3'", 1, 1, 0, "K2 + B2 = 10"),
                ("4", 1, 2, 2, "K2 + B2 = 6"),
                ("5", 0, 1, 1, "K2 = 0, B2 = 2"),
                ("5'", 1, 2, 1, "K2 = 0, B2 = 2"),
            ]
        );
        for r in &t.rows {
            assert_eq!(r.chi == 0, ["4", "5", "5'"].contains(&r.case.as_str()));
            assert!(r.chi >= 0);
            for s in &r.solutions {
                let inv = SurfaceInvariants::new(s.k2, r.pg, r.q, r.qprime, s.b2);
                assert_eq!(inv.k2 + inv.e, 12 * inv.chi);
            }
        }
    }

    #[test]
    fn regular_examples() {
        let k3 = regular_invariants(2, 0).unwrap();
        assert_eq!((k3.e, k3.b2, k3.b2_plus, k3.b2_minus), (24, 22, 3, 19));
        let p2 = regular_invariants(1, 9).unwrap();
        assert_eq!((p2.e, p2.b2, p2.b2_minus), (3, 1, 0));
        let enriques = regular_invariants(1, 0).unwrap();
        assert_eq!((enriques.e, enriques.b2), (12, 10));
        assert!(matches!(regular_invariants(1, 10), Err(Error::InvalidInvariants(_))));
        assert!(matches!(regular_invariants(0, 0), Err(Error::InvalidInvariants(_))));
    }

    #[test]
    fn rr_examples() {
        assert_eq!(rr_surface(2, 0, 2 * 5 - 2).unwrap(), 2 + 4);
        assert_eq!(rr_surface(7, 0, 0).unwrap(), 7);
        assert_eq!(rr_surface(1, -3, 3).unwrap(), 4);
        assert!(matches!(rr_surface(1, 0, 3), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn index_examples() {
        let g = |d1_sq, d1_d2, d2_sq| PairGram { d1_sq, d1_d2, d2_sq };
        assert_eq!(index_determinant(g(3, 0, -2)).unwrap(), IndexVerdict::Ok { det: -6 });
        assert_eq!(
            index_determinant(g(3, 6, 12)).unwrap(),
            IndexVerdict::Equality {
                det: 0,
                witness: [2, -1]
            }
        );
        assert_eq!(index_determinant(g(1, 0, 1)).unwrap(), IndexVerdict::Violated { det: 1 });
        assert!(matches!(index_determinant(g(-1, 0, -1)), Err(Error::NotApplicable(_))));
        assert!(matches!(index_determinant(g(0, 0, 0)), Err(Error::NotApplicable(_))));
        assert_eq!(index_determinant(g(0, 1, 0)).unwrap(), IndexVerdict::Ok { det: -1 });
    }

    fn datum(name: &str, h_dot: i64, k_dot: i64) -> CurveClassDatum {
        CurveClassDatum {
            name: name.into(),
            h_dot,
            k_dot,
        }
    }

    #[test]
    fn nef_threshold_examples() {
        let line = nef_threshold(&[datum("line", 1, -3)]).unwrap();
        assert_eq!(line.t0, Some(rat(1, 3)));
        assert_eq!(line.denominator_le_3, Some(true));
        let two = nef_threshold(&[datum("a", 1, -1), datum("b", 2, -1)]).unwrap();
        assert_eq!((two.t0, two.minimizer.as_deref()), (Some(rat(1, 1)), Some("a")));
        let inf = nef_threshold(&[datum("a", 1, 0), datum("b", 2, 3)]).unwrap();
        assert_eq!((&inf.t0, &inf.minimizer), (&None, &None));
        assert_eq!(
            serde_json::to_value(&inf).unwrap()["t0"],
            serde_json::Value::String("inf".into())
        );
        let odd = nef_threshold(&[datum("a", 5, -7)]).unwrap();
        assert_eq!(odd.denominator_le_3, Some(false));
        assert!(matches!(nef_threshold(&[datum("a", 0, -1)]), Err(Error::NotAmple(_))));
    }

    #[test]
    fn nef_threshold_scales() {
        let data = [datum("a", 3, -2), datum("b", 5, -4), datum("c", 2, 1)];
        let base = nef_threshold(&data).unwrap();
        for c in 2..6 {
            let scaled: Vec<_> = data.iter().map(|d| datum(&d.name, d.h_dot * c, d.k_dot)).collect();
            let s = nef_threshold(&scaled).unwrap();
            assert_eq!(s.minimizer, base.minimizer);
            assert_eq!(s.t0, base.t0.as_ref().map(|t| t * exact::int(c)));
        }
    }

    #[test]
    fn nu_cases() {
        assert_eq!(nu_table(true, 4, false).unwrap().nu, 2);
        assert_eq!(nu_table(true, 0, false).unwrap().nu, 1);
        assert_eq!(nu_table(true, 0, true).unwrap().nu, 0);
        assert!(matches!(nu_table(false, 1, false), Err(Error::NotInScope(_))));
        assert!(matches!(nu_table(true, 3, true), Err(Error::InvalidInvariants(_))));
        let mut seen = [0usize; 3];
        for k2 in -3..10 {
            for z in [false, true] {
                if let Ok(e) = nu_table(true, k2, z) {
                    seen[e.nu as usize] += 1;
                    assert_eq!(e.nu == 2, k2 > 0);
                    assert_eq!(e.nu == 0, z);
                } else {
                    assert!(k2 < 0 || (z && k2 != 0));
                }
            }
        }
        assert_eq!(seen, [1, 1, 9]);
    }
}
