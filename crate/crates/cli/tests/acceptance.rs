//! Acceptance runner: one PASS/FAIL line per criterion, each with a pinned
//! wall-clock limit. Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use surfcalc::automorphism::DEFAULT_NODE_BUDGET;
use surfcalc::classify;
use surfcalc::config::{self, AdeType, CurveConfig, SingularityType, DEFAULT_CYCLE_BUDGET};
use surfcalc::cubic27::{self, CubicLattice};
use surfcalc::exact;
use surfcalc::fibration::{self, FibrationSpec};
use surfcalc_cli::golden::{self, Outcome};

type Check = Result<(), String>;

/// Name, time limit in seconds, and the check itself.
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cubic_lines() -> Check {
    let c = CubicLattice::new();
    let s = cubic27::enumerate_lines(&c).map_err(err)?;
    ensure(s.len() == 27, || format!("{} lines", s.len()))?;
    ensure(s.family_counts() == (6, 15, 6), || format!("families {:?}", s.family_counts()))?;
    let g = cubic27::incidence_graph(&c, &s);
    ensure((0..g.order()).all(|v| g.degree(v) == 10), || "incidence graph not 10-regular".into())?;
    let t = cubic27::triangles(&c, &s).len();
    ensure(t == 45, || format!("{t} triangles"))?;
    let d = cubic27::double_sixes(&c, &s).len();
    ensure(d == 36, || format!("{d} double sixes"))?;
    let r = cubic27::roots(&c).map_err(err)?.len();
    ensure(r == 72, || format!("{r} roots"))?;
    let a = cubic27::incidence_automorphism_order(&g, DEFAULT_NODE_BUDGET).map_err(err)?;
    ensure(a.order == 51840u32.into(), || format!("automorphism order {}", a.order))
}

fn du_val() -> Check {
    for t in golden::du_val_types() {
        let c = CurveConfig::dynkin(t);
        let z = config::numerical_cycle(&c).map_err(err)?;
        ensure(c.dot(&z, &z) == -2, || format!("{t}: Z^2 = {}", c.dot(&z, &z)))?;
        let r = config::classify_singularity(&c, &exact::int(3), DEFAULT_CYCLE_BUDGET).map_err(err)?;
        let ok = matches!(r.verdict, SingularityType::Rational { mult: 2, embdim: 3, .. });
        ensure(ok, || format!("{t}: {:?}", r.verdict))?;
    }
    let e8 = CurveConfig::dynkin(AdeType::E8);
    let z = config::numerical_cycle(&e8).map_err(err)?;
    let oracle = golden::minimal_anti_nef_cycle(&e8, 6).ok_or("E8 oracle found no cycle")?;
    ensure(z == oracle, || format!("E8 cycle {z:?} vs oracle {oracle:?}"))
}

fn ade_exhaustive() -> Check {
    let rows = golden::ade(7).map_err(err)?;
    let expected: [&[&str]; 7] = [
        &["A1"],
        &["A2"],
        &["A3"],
        &["A4", "D4"],
        &["A5", "D5"],
        &["A6", "D6", "E6"],
        &["A7", "D7", "E7"],
    ];
    for (row, want) in rows.as_array().ok_or("ade rows")?.iter().zip(expected) {
        let n = &row["n"];
        ensure(row["disagreements"] == 0, || format!("n = {n}: {} disagreements", row["disagreements"]))?;
        let got: BTreeSet<&str> = row["by_type"].as_object().ok_or("by_type")?.keys().map(String::as_str).collect();
        let want: BTreeSet<&str> = want.iter().copied().collect();
        ensure(got == want, || format!("n = {n}: types {got:?}"))?;
    }
    Ok(())
}

fn champion() -> Check {
    let d = fibration::delta_of(&FibrationSpec::tame_rational(&[2, 3, 7])).map_err(err)?;
    let p = |m: i64| -> Result<u64, String> {
        fibration::plurigenus(&d, m).map_err(err)?.exact().ok_or_else(|| format!("P_{m} not exact"))
    };
    for m in 1..=5 {
        ensure(p(m)? == 0, || format!("P_{m} != 0"))?;
    }
    for (m, v) in [(6, 1), (42, 2), (43, 0), (85, 1)] {
        let got = p(m)?;
        ensure(got == v, || format!("P_{m} = {got}, expected {v}"))?;
    }
    for m in 1..=100 {
        let h = golden::champion_hilbert(m);
        ensure(p(m)? as i64 == h, || format!("P_{m} differs from Hilbert function {h}"))?;
    }
    Ok(())
}

fn torsion() -> Check {
    let got: BTreeSet<Vec<i64>> = fibration::torsion_multisets(4).map_err(err)?.into_iter().collect();
    let want: BTreeSet<Vec<i64>> = [vec![2, 2, 2, 2], vec![3, 3, 3], vec![2, 4, 4], vec![2, 3, 6]].into();
    ensure(got == want, || format!("torsion {got:?}"))?;
    let got = fibration::p12_le1_multisets();
    let mut want: BTreeSet<Vec<i64>> = [vec![2, 5, 5], vec![2, 4, 5]].into();
    want.extend((7..=11).map(|m| vec![2, 3, m]));
    ensure(got.len() == 7, || format!("{} multisets with P12 <= 1", got.len()))?;
    ensure(got.into_iter().collect::<BTreeSet<_>>() == want, || "p12 multisets differ".into())
}

fn sweep() -> Check {
    let v = golden::sweep(30);
    ensure(v["multisets"].as_u64().unwrap_or(0) > 0, || "no multisets swept".into())?;
    let failures = v["failures"].as_array().ok_or("failures")?;
    ensure(failures.is_empty(), || format!("failures {failures:?}"))
}

fn scroll_oracle() -> Check {
    let (mult_checks, mult_bad, locus_checks, locus_bad) = golden::scroll_oracle_sweep().map_err(err)?;
    ensure(mult_checks > 0 && locus_checks > 0, || "empty sweep".into())?;
    ensure(mult_bad == 0, || format!("{mult_bad} of {mult_checks} multiplicities differ"))?;
    ensure(locus_bad == 0, || format!("{locus_bad} of {locus_checks} base loci differ"))
}

fn famous() -> Check {
    let t = classify::famous_table();
    let sums: Vec<i64> = t.rows.iter().map(|r| r.sum).collect();
    ensure(sums == [22, 14, 10, 10, 6, 2, 2], || format!("sums {sums:?}"))?;
    for r in &t.rows[5..] {
        let ok = r.solutions.len() == 1 && r.solutions[0].k2 == 0 && r.solutions[0].b2 == 2;
        ensure(ok, || format!("row {} is not K2 = 0, B2 = 2", r.case))?;
    }
    match golden::check("famous", &golden::default_dir(), false).map_err(err)? {
        Outcome::Pass => Ok(()),
        other => Err(format!("golden diff: {other:?}")),
    }
}

fn zariski() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(golden::ZARISKI_SEED);
    for k in 0..500 {
        let (c, d) = golden::random_zariski_case(&mut rng, 5);
        let (_, bad) = golden::zariski_violations(&c, &d).map_err(err)?;
        ensure(bad.is_empty(), || format!("case {k}: {bad:?}"))?;
    }
    let p = golden::zariski_worked_example().map_err(err)?;
    ensure(p == ["1", "1/2"], || format!("worked example P = {p:?}"))
}

fn golden_all() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_surfcalc"))
        .args(["golden", "all"])
        .output()
        .map_err(err)?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.success(), || format!("exit {:?}: {stdout}", out.status.code()))?;
    let passed = stdout.lines().filter(|l| l.ends_with(": pass")).count();
    ensure(passed == golden::SUITES.len(), || format!("{passed} suites passed"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 cubic lines", 10, cubic_lines),
        ("2 du val", 5, du_val),
        ("3 ade exhaustive", 30, ade_exhaustive),
        ("4 champion", 1, champion),
        ("5 torsion", 5, torsion),
        ("6 plurigenera sweep", 10, sweep),
        ("7 scroll oracle", 60, scroll_oracle),
        ("8 famous table", 30, famous),
        ("9 zariski", 30, zariski),
        ("10 golden all", 120, golden_all),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(()) if elapsed <= Duration::from_secs(limit) => Ok(()),
            Ok(()) => Err(format!("took longer than {limit} s")),
            Err(e) => Err(e),
        };
        match verdict {
            Ok(()) => println!("PASS {name} ({} ms, limit {limit} s)", elapsed.as_millis()),
            Err(e) => {
                failed += 1;
                println!("FAIL {name} ({} ms, limit {limit} s): {e}", elapsed.as_millis());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
