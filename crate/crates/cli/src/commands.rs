//! Handlers for every subcommand except `golden`. Each returns the JSON
//! value to print.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use surfcalc::automorphism::DEFAULT_NODE_BUDGET;
use surfcalc::classify::{self, CurveClassDatum, PairGram};
use surfcalc::config::{self, Curve, CurveConfig, CurveLattice, DEFAULT_CYCLE_BUDGET};
use surfcalc::cubic27::{self, CubicLattice};
use surfcalc::exact::{self, Rational};
use surfcalc::fibration::{self, FibrationSpec};
use surfcalc::scroll::{self, ScrollDivisor, ScrollSpec};
use surfcalc::{DivisorClass, QDivisorClass};

use crate::{budget_override, ClassifyCmd, CliError, CliResult, Command, ConfigCmd, CubicCmd, FibCmd, ScrollCmd};

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output types serialize")
}

/// Reads and parses a JSON file; unreadable or malformed input is a usage error.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigInput {
    curves: Vec<Curve>,
    #[serde(default)]
    pairs: Vec<(String, String, i64)>,
}

/// Reads a curve configuration; JSON shape errors exit 2, invalid
/// configurations are domain errors.
pub fn read_config(path: &Path) -> CliResult<CurveConfig> {
    let raw: ConfigInput = read_json(path)?;
    Ok(CurveConfig::new(raw.curves, &raw.pairs)?)
}

fn parse_json_arg(s: &str, what: &str) -> CliResult<Value> {
    serde_json::from_str(s).map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn rational_entry(v: &Value) -> CliResult<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(exact::int)
            .ok_or_else(|| CliError::Usage(format!("coefficient {n} is not an integer"))),
        Value::String(s) => Ok(exact::parse_rational(s)?),
        other => Err(CliError::Usage(format!("bad coefficient {other}"))),
    }
}

/// Rational coefficients on the curves, from an array or a name map.
fn rational_cycle(c: &CurveConfig, v: &Value) -> CliResult<Vec<Rational>> {
    match v {
        Value::Array(a) => {
            if a.len() != c.len() {
                return Err(surfcalc::Error::DimensionMismatch {
                    expected: c.len(),
                    got: a.len(),
                }
                .into());
            }
            a.iter().map(rational_entry).collect()
        }
        Value::Object(m) => {
            let mut out = vec![exact::int(0); c.len()];
            for (name, x) in m {
                let i = c
                    .index_of(name)
                    .ok_or_else(|| surfcalc::Error::InvalidArgument(format!("unknown curve {name:?}")))?;
                out[i] = rational_entry(x)?;
            }
            Ok(out)
        }
        _ => Err(CliError::Usage("cycle must be a JSON array or object".into())),
    }
}

fn integer_cycle(c: &CurveConfig, v: &Value) -> CliResult<Vec<i64>> {
    rational_cycle(c, v)?
        .into_iter()
        .map(|q| {
            if q.is_integer() {
                num_traits::ToPrimitive::to_i64(&q.to_integer())
                    .ok_or_else(|| CliError::Usage("coefficient out of range".into()))
            } else {
                Err(CliError::Usage(format!("coefficient {} is not an integer", exact::format_rational(&q))))
            }
        })
        .collect()
}

fn named_cycle(c: &CurveConfig, d: &[i64]) -> Value {
    let m: serde_json::Map<String, Value> = c
        .curves()
        .iter()
        .zip(d)
        .filter(|(_, &k)| k != 0)
        .map(|(x, &k)| (x.name.clone(), json!(k)))
        .collect();
    Value::Object(m)
}

fn cycle_budget() -> CliResult<u128> {
    Ok(budget_override()?.unwrap_or(DEFAULT_CYCLE_BUDGET))
}

fn node_budget() -> CliResult<u64> {
    Ok(match budget_override()? {
        Some(b) => u64::try_from(b).unwrap_or(u64::MAX),
        None => DEFAULT_NODE_BUDGET,
    })
}

pub fn dispatch(cmd: &Command) -> CliResult<Value> {
    match cmd {
        Command::Cubic { cmd } => cubic(cmd),
        Command::Scroll { cmd } => scroll_cmd(cmd),
        Command::Config { cmd } => config_cmd(cmd),
        Command::Fib { cmd } => fib(cmd),
        Command::Classify { cmd } => classify_cmd(cmd),
        Command::Golden(_) => unreachable!("golden is handled by the caller"),
    }
}

fn line_labels(s: &cubic27::LineSet, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| s.lines[i].family.label()).collect()
}

fn cubic(cmd: &CubicCmd) -> CliResult<Value> {
    let c = CubicLattice::new();
    let s = cubic27::enumerate_lines(&c)?;
    Ok(match cmd {
        CubicCmd::Lines => {
            let mut lines: Vec<(String, &DivisorClass)> = s.lines.iter().map(|l| (l.family.label(), &l.class)).collect();
            lines.sort_by(|a, b| a.1.coords.cmp(&b.1.coords));
            Value::Array(lines.iter().map(|(label, class)| json!({"line": label, "class": class.coords})).collect())
        }
        CubicCmd::Triangles => {
            let t = cubic27::triangles(&c, &s);
            json!({"count": t.len(), "triangles": t.iter().map(|x| line_labels(&s, x)).collect::<Vec<_>>()})
        }
        CubicCmd::Doublesixes => {
            let d = cubic27::double_sixes(&c, &s);
            json!({
                "count": d.len(),
                "double_sixes": d.iter().map(|x| json!({"l": line_labels(&s, &x.l), "m": line_labels(&s, &x.m)})).collect::<Vec<_>>(),
            })
        }
        CubicCmd::Roots => {
            let r = cubic27::roots(&c)?;
            json!({"count": r.len(), "roots": r.iter().map(|x| &x.coords).collect::<Vec<_>>()})
        }
        CubicCmd::WeylOrder => {
            let g = cubic27::incidence_graph(&c, &s);
            let a = cubic27::incidence_automorphism_order(&g, node_budget()?)?;
            big_to_value(&a.order)
        }
    })
}

/// Integers that fit in `u64` as JSON numbers, larger ones as strings.
pub fn big_to_value<T: ToString + num_traits::ToPrimitive>(x: &T) -> Value {
    match x.to_u64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn scroll_spec(t: &crate::TwistArgs) -> CliResult<ScrollSpec> {
    Ok(ScrollSpec::new(t.twists.clone())?)
}

fn scroll_cmd(cmd: &ScrollCmd) -> CliResult<Value> {
    Ok(match cmd {
        ScrollCmd::H0 { twists, bidegree } => {
            let f = scroll_spec(twists)?;
            let (d, e) = *bidegree;
            if d < 0 {
                return Err(surfcalc::Error::InvalidArgument("d must be nonnegative".into()).into());
            }
            big_to_value(&scroll::h0(&f, ScrollDivisor::new(e, d)))
        }
        ScrollCmd::Baselocus { twists, bidegree } => {
            let f = scroll_spec(twists)?;
            let (d, e) = *bidegree;
            let div = ScrollDivisor::new(e, d);
            let mut bs: Vec<i64> = f.twists().iter().copied().filter(|&b| b < f.max_twist()).collect();
            bs.dedup();
            let mults = bs
                .iter()
                .map(|&b| {
                    let m = match scroll::base_multiplicity(&f, div, b)? {
                        scroll::BaseMultiplicity::Multiplicity(k) => json!(k),
                        scroll::BaseMultiplicity::ContainsAll => json!("contains_all"),
                    };
                    Ok(json!({"b": b, "multiplicity": m}))
                })
                .collect::<CliResult<Vec<_>>>()?;
            json!({
                "twists": f.twists(),
                "e": e,
                "d": d,
                "h0": big_to_value(&scroll::h0(&f, div)),
                "absent_variables": scroll::absent_variables(&f, e),
                "subscroll": -e - 1,
                "multiplicities": mults,
            })
        }
        ScrollCmd::Canon { twists } => to_value(&scroll::canonical_class(&scroll_spec(twists)?)),
        ScrollCmd::Intersect { twists, bidegree } => {
            let f = scroll_spec(twists)?;
            let factors: Vec<ScrollDivisor> = bidegree.iter().map(|&(d, e)| ScrollDivisor::new(e, d)).collect();
            big_to_value(&scroll::top_intersection(&f, &factors)?)
        }
        ScrollCmd::Maroni { genus } => to_value(&scroll::maroni_admissible(*genus)?),
        ScrollCmd::Cubicrange { k } => to_value(&scroll::relative_cubic_range(*k)),
    })
}

fn config_cmd(cmd: &ConfigCmd) -> CliResult<Value> {
    Ok(match cmd {
        ConfigCmd::Zcycle { input } => {
            let c = read_config(&input.input)?;
            let z = config::numerical_cycle(&c)?;
            json!({
                "z": named_cycle(&c, &z),
                "z_squared": c.dot(&z, &z),
                "pa": config::pa(&c, &z)?,
            })
        }
        ConfigCmd::Ade { input } => to_value(&config::classify_ade(&read_config(&input.input)?)?),
        ConfigCmd::Classify { input, bound_factor } => {
            let c = read_config(&input.input)?;
            let factor = exact::parse_rational(bound_factor)
                .map_err(|e| CliError::Usage(format!("--bound-factor: {e}")))?;
            to_value(&config::classify_singularity(&c, &factor, cycle_budget()?)?)
        }
        ConfigCmd::Connected { input, cycle, k } => {
            let c = read_config(&input.input)?;
            let d = integer_cycle(&c, &parse_json_arg(cycle, "cycle")?)?;
            to_value(&config::is_k_connected(&c, &d, *k, cycle_budget()?)?)
        }
        ConfigCmd::Zariski { input, divisor } => {
            let c = read_config(&input.input)?;
            let d = rational_cycle(&c, &parse_json_arg(divisor, "divisor")?)?;
            let cl = CurveLattice::from_config(&c);
            let d = QDivisorClass::new(cl.lattice.name().to_string(), d);
            let z = config::zariski_decomposition(&cl, &d)?;
            json!({
                "positive": z.positive.coords.iter().map(exact::format_rational).collect::<Vec<_>>(),
                "negative": z.negative.coords.iter().map(exact::format_rational).collect::<Vec<_>>(),
                "support": z.support.iter().map(|&i| c.curves()[i].name.clone()).collect::<Vec<_>>(),
                "diagnostics": z.diagnostics,
            })
        }
        ConfigCmd::Reduce { input, divisor, k3 } => {
            let c = read_config(&input.input)?;
            let d = integer_cycle(&c, &parse_json_arg(divisor, "divisor")?)?;
            let cl = CurveLattice::from_config(&c);
            let d = DivisorClass::new(cl.lattice.name().to_string(), d);
            let r = config::mobile_reduction(&cl, &d, *k3)?;
            json!({
                "mobile": named_cycle(&c, &r.mobile.coords),
                "fixed": named_cycle(&c, &r.fixed.coords),
                "steps": r.steps.iter().map(|&i| c.curves()[i].name.clone()).collect::<Vec<_>>(),
                "monogonal": r.monogonal,
            })
        }
    })
}

fn fib(cmd: &FibCmd) -> CliResult<Value> {
    Ok(match cmd {
        FibCmd::Delta { input } => {
            let f: FibrationSpec = read_json(&input.input)?;
            let d = fibration::delta_of(&f)?;
            let mut v = to_value(&d);
            v["degree"] = json!(exact::format_rational(&d.degree()));
            v
        }
        FibCmd::Pm { input, m } => {
            let f: FibrationSpec = read_json(&input.input)?;
            let d = fibration::delta_of(&f)?;
            let p = fibration::plurigenus(&d, *m)?;
            match p.exact() {
                Some(v) => json!(v),
                None => to_value(&p),
            }
        }
        FibCmd::Torsion { parts_max } => {
            let t = fibration::torsion_multisets(*parts_max)?;
            Value::Array(
                t.iter()
                    .map(|ms| {
                        let d = fibration::delta_of(&FibrationSpec::tame_rational(ms)).expect("tame fibres");
                        json!({"multiset": ms, "order": fibration::nu_kappa(&d).torsion_order})
                    })
                    .collect(),
            )
        }
        FibCmd::P12 => Value::Array(
            fibration::p12_le1_multisets()
                .iter()
                .map(|ms| {
                    let d = fibration::delta_of(&FibrationSpec::tame_rational(ms)).expect("tame fibres");
                    json!({
                        "multiset": ms,
                        "degree": exact::format_rational(&d.degree()),
                        "P12": fibration::plurigenus(&d, 12).expect("m = 12").lo(),
                    })
                })
                .collect(),
        ),
        FibCmd::Wild { input } => {
            let f: FibrationSpec = read_json(&input.input)?;
            let w = fibration::wild_equivalent(&f)?;
            json!({
                "equivalent": w,
                "degree": exact::format_rational(&w.degree()),
                "nu_kappa": fibration::nu_kappa(&w),
            })
        }
    })
}

fn classify_cmd(cmd: &ClassifyCmd) -> CliResult<Value> {
    Ok(match cmd {
        ClassifyCmd::Table => to_value(&classify::famous_table()),
        ClassifyCmd::Invariants { chi, k2 } => to_value(&classify::regular_invariants(*chi, *k2)?),
        ClassifyCmd::Rr { chi, k_dot_d, d2 } => json!(classify::rr_surface(*chi, *k_dot_d, *d2)?),
        ClassifyCmd::Index { d1_sq, d1_d2, d2_sq } => to_value(&classify::index_determinant(PairGram {
            d1_sq: *d1_sq,
            d1_d2: *d1_d2,
            d2_sq: *d2_sq,
        })?),
        ClassifyCmd::NefThreshold { input } => {
            let classes: Vec<CurveClassDatum> = read_json(&input.input)?;
            to_value(&classify::nef_threshold(&classes)?)
        }
        ClassifyCmd::Nu { k2, num_zero, not_nef } => to_value(&classify::nu_table(!not_nef, *k2, *num_zero)?),
    })
}
