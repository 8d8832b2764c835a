use super::*;

fn validated(key: CatalogKey) -> BraidedTensorSystem<f64> {
    get_system::<f64>(key).unwrap().braided().unwrap().clone()
}

fn outcomes(sys: &TensorSystem<f64>, a: &str, b: &str) -> Vec<String> {
    let (a, b) = (sys.id(a).unwrap(), sys.id(b).unwrap());
    sys.outcomes(a, b).iter().map(|&c| sys.name(c).to_string()).collect()
}

#[test]
fn braided_entries_pass_both_validators() {
    let mut keys = vec![CatalogKey::Fibonacci, CatalogKey::Ising];
    keys.extend((1..=6).map(|k| CatalogKey::Su2k { k }));
    keys.extend((1..=4).map(|n| CatalogKey::Cyclic { n }));
    for key in keys {
        let b = validated(key);
        let base = b.base().validate(1e-9);
        assert!(base.passed, "{key}: {base}");
        assert!(base.max_residual() < 1e-10, "{key}: {}", base.max_residual());
        let br = b.validate_braiding(1e-9).unwrap();
        assert!(br.passed, "{key}: {br}");
    }
}

#[test]
fn fib_x_fib_is_plain_and_valid() {
    let e = get_system::<f64>(CatalogKey::FibXFib).unwrap();
    assert!(e.braided().is_none());
    let sys = e.tensor_system().unwrap();
    assert!(sys.validate(1e-9).passed);
    assert_eq!(outcomes(sys, "(1,τ)", "(τ,1)"), vec!["(τ,τ)"]);
    let mut got = outcomes(sys, "(1,τ)", "(τ,τ)");
    got.sort();
    assert_eq!(got, vec!["(τ,1)", "(τ,τ)"]);
}

#[test]
fn fibonacci_fusion() {
    let b = validated(CatalogKey::Fibonacci);
    assert_eq!(b.base().labels().labels().len(), 2);
    assert_eq!(outcomes(b.base(), "τ", "τ"), vec!["1", "τ"]);
}

#[test]
fn su2k_truncated_fusion() {
    let b = validated(CatalogKey::Su2k { k: 3 });
    let s = b.base();
    let names: Vec<_> = s.labels().labels().iter().map(|l| l.0.clone()).collect();
    assert_eq!(names, vec!["0", "1", "1/2", "3/2"]);
    assert_eq!(outcomes(s, "1/2", "1/2"), vec!["0", "1"]);
    assert_eq!(outcomes(s, "1", "1"), vec!["0", "1"]);
    assert_eq!(outcomes(s, "3/2", "3/2"), vec!["0"]);
}

#[test]
fn su2k_integer_sector_matches_fibonacci() {
    let su = validated(CatalogKey::Su2k { k: 3 });
    let fib = validated(CatalogKey::Fibonacci);
    let (s, f) = (su.base(), fib.base());
    let map = [("0", "1"), ("1", "τ")];
    for (x, fx) in map {
        for (y, fy) in map {
            let a: Vec<_> = outcomes(s, x, y)
                .into_iter()
                .map(|c| map.iter().find(|m| m.0 == c).unwrap().1.to_string())
                .collect();
            assert_eq!(a, outcomes(f, fx, fy));
        }
    }
    // gauge-invariant diagonal entries agree
    let (one, t) = (s.id("1").unwrap(), f.id("τ").unwrap());
    for (e_s, e_f) in [(s.id("0").unwrap(), f.id("1").unwrap()), (one, t)] {
        let lhs = s.gauge_invariant_diagonal(one, one, e_s).unwrap();
        let rhs = f.gauge_invariant_diagonal(t, t, e_f).unwrap();
        assert!((lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
    }
}

#[test]
fn cyclic_three_is_one_dimensional_and_trivial() {
    let b = validated(CatalogKey::Cyclic { n: 3 });
    let s = b.base();
    for a in 0..3 {
        assert!(s.one_dim_profile(a).unwrap().is_one_dimensional);
        for c in 0..3 {
            assert_eq!(outcomes(s, &a.to_string(), &c.to_string()), vec![((a + c) % 3).to_string()]);
        }
    }
    assert!(s.fsym().f_entries().all(|(_, v)| (*v - 1.0).norm() == 0.0));
}

#[test]
fn fibonacci_diagonal_values() {
    let b = validated(CatalogKey::Fibonacci);
    let s = b.base();
    let (u, t) = (s.id("1").unwrap(), s.id("τ").unwrap());
    let inv_phi = 2.0 / (1.0 + 5f64.sqrt());
    assert!((s.gauge_invariant_diagonal(t, t, u).unwrap().re - inv_phi).abs() < 1e-12);
    assert!((s.gauge_invariant_diagonal(t, t, t).unwrap().re + inv_phi).abs() < 1e-12);
    assert_eq!(s.gauge_invariant_diagonal(u, u, u).unwrap().re, 1.0);
}

#[test]
fn section33_is_rules_only() {
    let e = get_system::<f64>(CatalogKey::Section33Rules).unwrap();
    assert!(matches!(e.tensor_system(), Err(Error::Unsupported(_))));
    let r = e.rules();
    let (z, o) = (r.labels().id("0").unwrap(), r.labels().id("1").unwrap());
    assert!(r.has(z, z, o));
}

#[test]
fn key_parsing() {
    assert_eq!("fibonacci".parse::<CatalogKey>().unwrap(), CatalogKey::Fibonacci);
    assert_eq!("su2k:3".parse::<CatalogKey>().unwrap(), CatalogKey::Su2k { k: 3 });
    assert_eq!("su2k(k=4)".parse::<CatalogKey>().unwrap(), CatalogKey::Su2k { k: 4 });
    assert_eq!("cyclic(n=2)".parse::<CatalogKey>().unwrap(), CatalogKey::Cyclic { n: 2 });
    assert!(matches!("su2k:0".parse::<CatalogKey>(), Err(Error::CatalogParam(_))));
    assert!(matches!("su2k".parse::<CatalogKey>(), Err(Error::CatalogParam(_))));
    match "quaternion".parse::<CatalogKey>() {
        Err(Error::UnknownCatalogKey { valid, .. }) => assert!(valid.contains("fibonacci")),
        other => panic!("{other:?}"),
    }
    for key in [CatalogKey::Ising, CatalogKey::Su2k { k: 5 }, CatalogKey::Cyclic { n: 4 }, CatalogKey::FibXFib] {
        assert_eq!(key.to_string().parse::<CatalogKey>().unwrap(), key);
    }
}

#[test]
fn aliases() {
    let b = validated(CatalogKey::Ising);
    let l = b.base().labels();
    assert_eq!(resolve_label(l, "sigma").unwrap(), l.id("σ").unwrap());
    assert_eq!(resolve_label(l, "psi").unwrap(), l.id("ψ").unwrap());
    assert!(resolve_label(l, "tau").is_err());
}

#[test]
fn single_precision_catalog_validates() {
    for key in [CatalogKey::Fibonacci, CatalogKey::Ising, CatalogKey::Su2k { k: 4 }] {
        let e = get_system::<f32>(key).unwrap();
        assert!(e.braided().unwrap().is_validated());
    }
}
