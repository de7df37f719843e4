//! Golden-value suites: deterministic JSON documents recomputed on demand
//! and compared byte for byte with committed files.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use surfcalc::automorphism::DEFAULT_NODE_BUDGET;
use surfcalc::classify;
use surfcalc::config::{
    self, AdeType, AdeVerdict, Curve, CurveConfig, CurveLattice, SingularityType, DEFAULT_CYCLE_BUDGET,
};
use surfcalc::cubic27::{self, CubicLattice};
use surfcalc::exact::{self, Rational};
use surfcalc::fibration::{self, FibrationSpec};
use surfcalc::scroll::{self, ScrollDivisor, ScrollSpec};
use surfcalc::QDivisorClass;

use crate::commands::{big_to_value, to_value};
use crate::{CliError, CliResult, GoldenArgs};

pub const SUITES: [&str; 9] = [
    "cubic", "duval", "ade", "champion", "torsion", "sweep", "scroll", "famous", "zariski",
];

pub fn compute(suite: &str) -> CliResult<Value> {
    match suite {
        "cubic" => cubic(),
        "duval" => duval(),
        "ade" => ade(7),
        "champion" => Ok(champion(100)),
        "torsion" => torsion(),
        "sweep" => Ok(sweep(30)),
        "scroll" => scroll_suite(),
        "famous" => Ok(to_value(&classify::famous_table())),
        "zariski" => zariski(ZARISKI_SEED, 500),
        other => Err(CliError::Usage(format!("unknown suite {other:?}; known: all, {}", SUITES.join(", ")))),
    }
}

pub fn default_dir() -> PathBuf {
    std::env::var_os("SURFCALC_GOLDEN_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("golden"))
}

pub fn golden_path(dir: &Path, suite: &str) -> PathBuf {
    dir.join(format!("{suite}.json"))
}

pub fn serialize(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// First differing line number (1-based) with the expected and actual lines.
    Fail { line: usize, expected: String, actual: String },
    Blessed,
}

/// Recomputes `suite` and compares it with its golden file. A missing file
/// is a usage error unless `bless` is set.
pub fn check(suite: &str, dir: &Path, bless: bool) -> CliResult<Outcome> {
    let actual = serialize(&compute(suite)?);
    let path = golden_path(dir, suite);
    if bless {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
        std::fs::write(&path, &actual).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        return Ok(Outcome::Blessed);
    }
    let expected = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("missing golden file {}: {e}", path.display())))?;
    if expected == actual {
        return Ok(Outcome::Pass);
    }
    let (e, a): (Vec<&str>, Vec<&str>) = (expected.lines().collect(), actual.lines().collect());
    let line = (0..e.len().max(a.len()))
        .find(|&i| e.get(i) != a.get(i))
        .unwrap_or(0);
    Ok(Outcome::Fail {
        line: line + 1,
        expected: e.get(line).unwrap_or(&"<eof>").to_string(),
        actual: a.get(line).unwrap_or(&"<eof>").to_string(),
    })
}

pub fn run_cli(args: &GoldenArgs, out: &mut dyn Write) -> CliResult<()> {
    let suites: Vec<&str> = if args.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&args.suite.as_str()) {
        vec![args.suite.as_str()]
    } else {
        return Err(CliError::Usage(format!(
            "unknown suite {:?}; known: all, {}",
            args.suite,
            SUITES.join(", ")
        )));
    };
    let dir = args.dir.clone().unwrap_or_else(default_dir);
    let io = |e: std::io::Error| CliError::Usage(e.to_string());
    let mut failed = Vec::new();
    for s in suites {
        match check(s, &dir, args.bless)? {
            Outcome::Pass => writeln!(out, "{s}: pass").map_err(io)?,
            Outcome::Blessed => writeln!(out, "{s}: blessed").map_err(io)?,
            Outcome::Fail { line, expected, actual } => {
                writeln!(out, "{s}: FAIL at line {line}\n  expected: {expected}\n  actual:   {actual}").map_err(io)?;
                failed.push(s);
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::GoldenMismatch(failed.join(", ")))
    }
}

fn cubic() -> CliResult<Value> {
    let c = CubicLattice::new();
    let s = cubic27::enumerate_lines(&c)?;
    let (e, f, g) = s.family_counts();
    let graph = cubic27::incidence_graph(&c, &s);
    let mut degrees: Vec<usize> = (0..graph.order()).map(|v| graph.degree(v)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let aut = cubic27::incidence_automorphism_order(&graph, DEFAULT_NODE_BUDGET)?;
    Ok(json!({
        "lines": s.len(),
        "families": [e, f, g],
        "incidence_degrees": degrees,
        "triangles": cubic27::triangles(&c, &s).len(),
        "double_sixes": cubic27::double_sixes(&c, &s).len(),
        "roots": cubic27::roots(&c)?.len(),
        "automorphism_order": big_to_value(&aut.order),
        "vertex_orbits": aut.orbits.len(),
    }))
}

/// The ADE types of rank at most 10, in a fixed order.
pub fn du_val_types() -> Vec<AdeType> {
    let mut t: Vec<AdeType> = (1..=10).map(AdeType::A).collect();
    t.extend((4..=10).map(AdeType::D));
    t.extend([AdeType::E6, AdeType::E7, AdeType::E8]);
    t
}

/// Componentwise minimum of all nonzero `Z ∈ [0, cap]ⁿ` with `Z·Γ ≤ 0` for
/// every curve, by exhaustion.
pub fn minimal_anti_nef_cycle(c: &CurveConfig, cap: i64) -> Option<Vec<i64>> {
    let n = c.len();
    let gram = c.gram();
    let mut z = vec![0i64; n];
    let mut best: Option<Vec<i64>> = None;
    loop {
        let mut i = 0;
        while i < n && z[i] == cap {
            z[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        z[i] += 1;
        let anti_nef = (0..n).all(|j| (0..n).map(|k| z[k] * gram[k][j]).sum::<i64>() <= 0);
        if anti_nef {
            best = Some(match best {
                None => z.clone(),
                Some(b) => b.iter().zip(&z).map(|(x, y)| *x.min(y)).collect(),
            });
        }
    }
}

fn duval() -> CliResult<Value> {
    let mut rows = Vec::new();
    for t in du_val_types() {
        let c = CurveConfig::dynkin(t);
        let z = config::numerical_cycle(&c)?;
        let r = config::classify_singularity(&c, &exact::int(3), DEFAULT_CYCLE_BUDGET)?;
        let (mult, embdim) = match r.verdict {
            SingularityType::Rational { mult, embdim, .. } => (json!(mult), json!(embdim)),
            _ => (Value::Null, Value::Null),
        };
        rows.push(json!({
            "type": t.to_string(),
            "z": z,
            "z_squared": c.dot(&z, &z),
            "verdict": to_value(&r.verdict)["kind"],
            "mult": mult,
            "embdim": embdim,
        }));
    }
    let e8 = CurveConfig::dynkin(AdeType::E8);
    Ok(json!({
        "types": rows,
        "e8_oracle": minimal_anti_nef_cycle(&e8, 6),
    }))
}

/// Edge sets on `n` vertices, as adjacency bitmasks, whose labeling is a
/// breadth-first order from vertex 0: each later vertex has an earlier
/// neighbour, and the least such neighbours are nondecreasing. Every
/// connected graph has such a labeling.
pub fn bfs_labeled_graphs(n: usize, mut f: impl FnMut(&[u32], &[(usize, usize)])) {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut adj = vec![0u32; n];
    let mut edges = Vec::with_capacity(pairs.len());
    'masks: for mask in 0u64..(1u64 << pairs.len()) {
        adj.iter_mut().for_each(|a| *a = 0);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
        let mut last_parent = 0;
        for (v, &a) in adj.iter().enumerate().skip(1) {
            let parent = a.trailing_zeros() as usize;
            if parent >= v || parent < last_parent {
                continue 'masks;
            }
            last_parent = parent;
        }
        edges.clear();
        edges.extend(pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| *e));
        f(&adj, &edges);
    }
}

/// Over connected simple graphs on `n ≤ max_n` vertices of `−2`-curves (one
/// breadth-first labeling or more per isomorphism class), compares negative
/// definiteness with the Du Val verdict.
pub fn ade(max_n: usize) -> CliResult<Value> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let (mut graphs, mut definite, mut ade_count, mut disagree) = (0u64, 0u64, 0u64, 0u64);
        let mut by_type: BTreeMap<String, u64> = BTreeMap::new();
        let mut failure = None;
        bfs_labeled_graphs(n, |_, edges| {
            let c = match CurveConfig::minus_two_graph(n, edges) {
                Ok(c) => c,
                Err(e) => {
                    failure.get_or_insert(e);
                    return;
                }
            };
            graphs += 1;
            let neg_def = c.is_negative_definite();
            definite += u64::from(neg_def);
            match config::classify_ade(&c) {
                Ok(AdeVerdict::Ade { r#type }) => {
                    ade_count += 1;
                    *by_type.entry(r#type.to_string()).or_default() += 1;
                    disagree += u64::from(!neg_def);
                }
                Ok(_) => disagree += u64::from(neg_def),
                Err(_) => disagree += 1,
            }
        });
        if let Some(e) = failure {
            return Err(e.into());
        }
        rows.push(json!({
            "n": n,
            "bfs_labeled_graphs": graphs,
            "negative_definite": definite,
            "ade": ade_count,
            "disagreements": disagree,
            "by_type": by_type,
        }));
    }
    Ok(Value::Array(rows))
}

/// Number of `(i, j, k) ≥ 0` with `6i + 14j + 21k = m`.
pub fn weighted_monomials(m: i64) -> i64 {
    if m < 0 {
        return 0;
    }
    let mut count = 0;
    for k in 0..=m / 21 {
        for j in 0..=(m - 21 * k) / 14 {
            count += i64::from((m - 21 * k - 14 * j) % 6 == 0);
        }
    }
    count
}

/// Hilbert function of `k[x, y, z]/(x⁷ + y³ + z²)` with weights 6, 14, 21.
pub fn champion_hilbert(m: i64) -> i64 {
    weighted_monomials(m) - weighted_monomials(m - 42)
}

pub fn champion(max_m: i64) -> Value {
    let d = fibration::delta_of(&FibrationSpec::tame_rational(&[2, 3, 7])).expect("tame fibres");
    let p: Vec<u64> = (1..=max_m)
        .map(|m| fibration::plurigenus(&d, m).expect("m >= 1").lo())
        .collect();
    let mismatches: Vec<i64> = (1..=max_m)
        .filter(|&m| p[(m - 1) as usize] as i64 != champion_hilbert(m))
        .collect();
    json!({
        "delta": to_value(&d),
        "degree": exact::format_rational(&d.degree()),
        "plurigenera": p,
        "hilbert_mismatches": mismatches,
    })
}

fn torsion() -> CliResult<Value> {
    let t = fibration::torsion_multisets(4)?;
    let torsion: Vec<Value> = t
        .iter()
        .map(|ms| {
            let d = fibration::delta_of(&FibrationSpec::tame_rational(ms)).expect("tame fibres");
            json!({"multiset": ms, "order": fibration::nu_kappa(&d).torsion_order})
        })
        .collect();
    Ok(json!({
        "torsion": torsion,
        "p12_le1": fibration::p12_le1_multisets(),
        "p12_le1_rescan_cap40": fibration::p12_le1_multisets_with_cap(40),
    }))
}

fn partitions(max_sum: i64, lo: i64, prefix: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    f(prefix);
    let used: i64 = prefix.iter().sum();
    for m in lo..=max_sum - used {
        prefix.push(m);
        partitions(max_sum, m, prefix, f);
        prefix.pop();
    }
}

/// For each multiset with `Σmᵢ ≤ max_sum` and `deg Δ > 0` over `P¹` with
/// `deg L = 0`: the least `m ∈ {1,2,3,4,6}` with `P_m ≥ 1` and the least
/// `m ≤ 42` with `P_m ≥ 2`.
pub fn sweep(max_sum: i64) -> Value {
    let mut count = 0u64;
    let mut failures: Vec<Vec<i64>> = Vec::new();
    let mut first_ge1: BTreeMap<i64, u64> = BTreeMap::new();
    let mut first_ge2: BTreeMap<i64, u64> = BTreeMap::new();
    let mut worst_ge2: Option<(i64, Vec<i64>)> = None;
    partitions(max_sum, 2, &mut Vec::new(), &mut |ms| {
        let d = fibration::delta_of(&FibrationSpec::tame_rational(ms)).expect("tame fibres");
        if d.degree() <= exact::int(0) {
            return;
        }
        count += 1;
        let p = |m: i64| fibration::plurigenus(&d, m).expect("m >= 1").lo();
        let a = [1, 2, 3, 4, 6].into_iter().find(|&m| p(m) >= 1);
        let b = (1..=42).find(|&m| p(m) >= 2);
        match (a, b) {
            (Some(a), Some(b)) => {
                *first_ge1.entry(a).or_default() += 1;
                *first_ge2.entry(b).or_default() += 1;
                if worst_ge2.as_ref().map_or(true, |(w, _)| b > *w) {
                    worst_ge2 = Some((b, ms.to_vec()));
                }
            }
            _ => failures.push(ms.to_vec()),
        }
    });
    json!({
        "max_sum": max_sum,
        "multisets": count,
        "first_m_with_pm_ge_1": first_ge1.into_iter().collect::<Vec<_>>(),
        "first_m_with_pm_ge_2": first_ge2.into_iter().collect::<Vec<_>>(),
        "latest_pm_ge_2": worst_ge2,
        "failures": failures,
    })
}

/// Sorted twist vectors with `n ≤ max_n` entries in `0..=max_a`.
pub fn twist_vectors(max_n: usize, max_a: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    fn grow(max_n: usize, max_a: i64, lo: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_n {
            return;
        }
        for a in lo..=max_a {
            cur.push(a);
            grow(max_n, max_a, a, cur, out);
            cur.pop();
        }
    }
    grow(max_n, max_a, 0, &mut Vec::new(), &mut out);
    out
}

/// Base multiplicities against the monomial oracle, and the base locus of
/// `|eL + M|` against the subscroll `B_{−e−1}`.
pub fn scroll_oracle_sweep() -> CliResult<(u64, u64, u64, u64)> {
    let (mut mult_checks, mut mult_bad, mut locus_checks, mut locus_bad) = (0, 0, 0, 0);
    for t in twist_vectors(4, 6) {
        let f = ScrollSpec::new(t)?;
        let mut bs: Vec<i64> = f.twists().iter().copied().filter(|&b| b < f.max_twist()).collect();
        bs.dedup();
        for e in -20..=20 {
            locus_checks += 1;
            locus_bad += u64::from(scroll::absent_variables(&f, e) != scroll::negative_subscroll(&f, -e - 1));
            for d in 1..=4 {
                let div = ScrollDivisor::new(e, d);
                for &b in &bs {
                    mult_checks += 1;
                    let fast = scroll::base_multiplicity(&f, div, b)?;
                    let slow = scroll::base_multiplicity_oracle(&f, div, b)?;
                    mult_bad += u64::from(fast != slow);
                }
            }
        }
    }
    Ok((mult_checks, mult_bad, locus_checks, locus_bad))
}

fn scroll_suite() -> CliResult<Value> {
    let (mult_checks, mult_bad, locus_checks, locus_bad) = scroll_oracle_sweep()?;
    let maroni: Vec<Value> = (3..=12)
        .map(|g| Ok(json!({"genus": g, "cases": to_value(&scroll::maroni_admissible(g)?)})))
        .collect::<CliResult<_>>()?;
    let f = ScrollSpec::new(vec![0, 1, 2])?;
    Ok(json!({
        "base_multiplicity_checks": mult_checks,
        "base_multiplicity_mismatches": mult_bad,
        "base_locus_checks": locus_checks,
        "base_locus_mismatches": locus_bad,
        "h0_F012": (0..=3).map(|d| (-2..=4).map(|e| big_to_value(&scroll::h0(&f, ScrollDivisor::new(e, d)))).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "canonical_F012": to_value(&scroll::canonical_class(&f)),
        "maroni": maroni,
        "cubic_range": (-2..=4).map(|k| json!({"k": k, "entries": to_value(&scroll::relative_cubic_range(k))})).collect::<Vec<_>>(),
    }))
}

pub const ZARISKI_SEED: u64 = 20_240_601;

/// A configuration of up to `max_curves` curves: diagonally dominant
/// negative curves (so any subset is negative definite) plus curves of
/// nonnegative square, all meeting nonnegatively, with an effective
/// divisor on them.
pub fn random_zariski_case(rng: &mut ChaCha8Rng, max_curves: usize) -> (CurveConfig, Vec<i64>) {
    let n = rng.gen_range(2..=max_curves);
    let neg = rng.gen_range(1..n);
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = if j < neg { rng.gen_range(0..=1) } else { rng.gen_range(0..=2) };
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    for i in 0..n {
        gram[i][i] = if i < neg {
            let off: i64 = (0..neg).filter(|&j| j != i).map(|j| gram[i][j]).sum();
            -(off + rng.gen_range(1..=3))
        } else {
            rng.gen_range(0..=3)
        };
    }
    let curves = (0..n)
        .map(|i| Curve {
            name: format!("C{i}"),
            genus: 0,
            self_int: gram[i][i],
        })
        .collect();
    let pairs: Vec<(String, String, i64)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| gram[i][j] != 0)
        .map(|(i, j)| (format!("C{i}"), format!("C{j}"), gram[i][j]))
        .collect();
    let d = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    (CurveConfig::new(curves, &pairs).expect("generated configs are valid"), d)
}

/// Checks the defining properties of a Zariski decomposition; returns the
/// list of failed properties.
pub fn zariski_violations(c: &CurveConfig, d: &[i64]) -> CliResult<(usize, Vec<&'static str>)> {
    let cl = CurveLattice::from_config(c);
    let l = &cl.lattice;
    let dq = QDivisorClass::new(l.name().to_string(), d.iter().map(|&x| exact::int(x)).collect());
    let z = config::zariski_decomposition(&cl, &dq)?;
    let zero = exact::int(0);
    let mut bad = Vec::new();
    let p_dot = |j: usize| l.pair(&z.positive, &l.basis_vector(j)).expect("same lattice");
    if z.support.iter().any(|&i| p_dot(i) != zero) {
        bad.push("P.G != 0 on supp N");
    }
    if z.negative.coords.iter().any(|x| *x < zero) {
        bad.push("N not effective");
    }
    let sum: Vec<Rational> = z.positive.coords.iter().zip(&z.negative.coords).map(|(a, b)| a + b).collect();
    if sum != dq.coords {
        bad.push("P + N != D");
    }
    if !z.support.is_empty() && !c.restrict(&z.support).is_negative_definite() {
        bad.push("support not negative definite");
    }
    if (0..c.len()).any(|j| p_dot(j) < zero) {
        bad.push("P not nef");
    }
    Ok((z.support.len(), bad))
}

/// `D = E + Γ` with `E² = 0`, `Γ² = −2`, `EΓ = 1`; returns `P`.
pub fn zariski_worked_example() -> CliResult<Vec<String>> {
    let c = CurveConfig::new(
        vec![
            Curve {
                name: "E".into(),
                genus: 1,
                self_int: 0,
            },
            Curve {
                name: "G".into(),
                genus: 0,
                self_int: -2,
            },
        ],
        &[("E".into(), "G".into(), 1)],
    )?;
    let cl = CurveLattice::from_config(&c);
    let d = QDivisorClass::new(cl.lattice.name().to_string(), vec![exact::int(1), exact::int(1)]);
    let z = config::zariski_decomposition(&cl, &d)?;
    Ok(z.positive.coords.iter().map(exact::format_rational).collect())
}

fn zariski(seed: u64, count: usize) -> CliResult<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support_sizes: BTreeMap<usize, u64> = BTreeMap::new();
    let mut violations: Vec<Value> = Vec::new();
    for case in 0..count {
        let (c, d) = random_zariski_case(&mut rng, 5);
        match zariski_violations(&c, &d) {
            Ok((size, bad)) => {
                *support_sizes.entry(size).or_default() += 1;
                if !bad.is_empty() {
                    violations.push(json!({"case": case, "failed": bad}));
                }
            }
            Err(e) => violations.push(json!({"case": case, "error": e.to_string()})),
        }
    }
    Ok(json!({
        "seed": seed,
        "configs": count,
        "support_sizes": support_sizes.into_iter().collect::<Vec<_>>(),
        "violations": violations,
        "worked_example_P": zariski_worked_example()?,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Lexicographically least adjacency matrix over all relabelings.
    fn canonical(n: usize, adj: &[u32]) -> Vec<u32> {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<u32>> = None;
        loop {
            let form: Vec<u32> = (0..n)
                .map(|i| (0..n).filter(|&j| adj[perm[i]] >> perm[j] & 1 == 1).map(|j| 1 << j).sum())
                .collect();
            if best.as_ref().map_or(true, |b| form < *b) {
                best = Some(form);
            }
            // next permutation
            let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
            let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        best.unwrap()
    }

    #[test]
    fn bfs_labelings_cover_every_connected_graph() {
        // Connected graphs on n vertices up to isomorphism.
        let expected = [1, 1, 2, 6, 21, 112];
        for (n, &count) in (1..=6).zip(&expected) {
            let mut forms = std::collections::BTreeSet::new();
            bfs_labeled_graphs(n, |adj, _| {
                forms.insert(canonical(n, adj));
            });
            assert_eq!(forms.len(), count, "n = {n}");
        }
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        assert!(matches!(compute("nosuch"), Err(CliError::Usage(_))));
    }

    #[test]
    fn champion_has_no_mismatches() {
        let v = champion(100);
        assert_eq!(v["hilbert_mismatches"], json!([]));
        assert_eq!(v["plurigenera"][41], json!(2));
    }
}
