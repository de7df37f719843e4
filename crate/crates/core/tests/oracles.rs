use surfcalc::classify::famous_table;
use surfcalc::config::{classify_ade, classify_singularity, numerical_cycle, AdeType, AdeVerdict, CurveConfig, SingularityType, DEFAULT_CYCLE_BUDGET};
use surfcalc::exact::int;
use surfcalc::fibration::{delta_of, plurigenus, FibrationSpec};

/// Number of `(i, j, k) ≥ 0` with `6i + 14j + 21k = m`.
fn monomials(m: i64) -> i64 {
    if m < 0 {
        return 0;
    }
    let mut count = 0;
    for k in 0..=m / 21 {
        for j in 0..=(m - 21 * k) / 14 {
            if (m - 21 * k - 14 * j) % 6 == 0 {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn champion_matches_weighted_hypersurface() {
    let d = delta_of(&FibrationSpec::tame_rational(&[2, 3, 7])).unwrap();
    for m in 1..=100 {
        let hilbert = monomials(m) - monomials(m - 42);
        let p = plurigenus(&d, m).unwrap().exact().unwrap();
        assert_eq!(p as i64, hilbert, "m = {m}");
    }
}

#[test]
fn du_val_cycles_have_square_minus_two() {
    let mut types: Vec<AdeType> = (1..=10).map(AdeType::A).collect();
    types.extend((4..=10).map(AdeType::D));
    types.extend([AdeType::E6, AdeType::E7, AdeType::E8]);
    for t in types {
        let c = CurveConfig::dynkin(t);
        let z = numerical_cycle(&c).unwrap();
        assert_eq!(c.dot(&z, &z), -2, "{t}");
        assert_eq!(classify_ade(&c).unwrap(), AdeVerdict::Ade { r#type: t });
        let r = classify_singularity(&c, &int(3), DEFAULT_CYCLE_BUDGET).unwrap();
        assert_eq!(
            r.verdict,
            SingularityType::Rational {
                mult: 2,
                embdim: 3,
                du_val: true
            },
            "{t}"
        );
    }
}

#[test]
fn small_graphs_are_ade_iff_definite() {
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, e)| *e).collect();
            let c = CurveConfig::minus_two_graph(n, &edges).unwrap();
            if !c.is_connected() {
                continue;
            }
            let verdict = classify_ade(&c).unwrap();
            assert_eq!(matches!(verdict, AdeVerdict::Ade { .. }), c.is_negative_definite());
        }
    }
}

#[test]
fn famous_table_satisfies_noether() {
    let t = famous_table();
    assert_eq!(t.rows.len(), 7);
    for r in &t.rows {
        for s in &r.solutions {
            let e = 2 - 4 * r.q + s.b2;
            assert_eq!(s.k2 + e, 12 * (1 - r.qprime + r.pg));
            assert_eq!(s.k2 + 12 * (r.qprime - r.q) + 8 * r.q + s.b2, 10 + 12 * r.pg);
        }
    }
}
