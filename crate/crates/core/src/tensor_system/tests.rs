use std::collections::HashMap;

use num_complex::Complex;
use proptest::prelude::*;

use super::*;
use crate::catalog::{fibonacci, get_system, ising, CatalogKey};

type C = Complex<f64>;

fn fib() -> BraidedTensorSystem<f64> {
    fibonacci::<f64>().unwrap().into_validated(1e-9).unwrap()
}

fn tables_close(a: &TensorSystem<f64>, b: &TensorSystem<f64>) -> f64 {
    a.fsym().max_difference(b.fsym())
}

#[test]
fn single_label_trivial_system_passes_exactly() {
    let mut b = TensorSystem::<f64>::builder(["ι"]).unwrap();
    b.fuse("ι", "ι", "ι").unwrap();
    b.f(["ι"; 6], C::new(1.0, 0.0)).unwrap();
    b.fbar(["ι"; 6], C::new(1.0, 0.0)).unwrap();
    let report = b.build().unwrap().validate(0.0);
    assert!(report.passed, "{report}");
    assert_eq!(report.max_residual(), 0.0);
}

#[test]
fn perturbed_fibonacci_fails_pentagon_and_inverse() {
    let sys = fib().into_base();
    let t = sys.id("τ").unwrap();
    let mut fsym = sys.fsym().clone();
    let k = [t, t, t, t, t, t];
    fsym.set_f(k, fsym.f(k) + 0.1);
    let report = sys.with_fsym(fsym).validate(1e-9);
    assert!(!report.passed);
    assert!(!report.check("F.2 pentagon").unwrap().passed);
    assert!(!report.check("F.3 left inverse").unwrap().passed);
    assert!(report.worst_failure().is_some());
}

#[test]
fn conjugating_r_alone_breaks_inverse() {
    let b = fib();
    let r = b.r_table().iter().map(|(k, v)| (*k, v.conj())).collect();
    let broken = b.with_tables(b.base().clone(), r, b.rbar_table().clone());
    let report = broken.validate_braiding(1e-9).unwrap();
    assert!(!report.check("R.4 inverse").unwrap().passed);
}

#[test]
fn braiding_requires_validated_base() {
    let raw = fibonacci::<f64>().unwrap();
    assert!(matches!(raw.validate_braiding(1e-9), Err(crate::Error::NotValidated(_))));
}

#[test]
fn multiplicity_is_rejected() {
    let mut b = TensorSystem::<f64>::builder(["a"]).unwrap();
    b.coefficient("a", "a", "a", 2).unwrap();
    assert!(matches!(b.build(), Err(crate::Error::Multiplicity { value: 2, .. })));
}

#[test]
fn extended_fusion_examples() {
    let sys = fib().into_base();
    assert_eq!(sys.extended_fusion_named(&["τ", "τ", "τ"], "1").unwrap(), 1);
    assert_eq!(sys.extended_fusion_named(&["τ", "τ", "τ"], "τ").unwrap(), 2);
    assert_eq!(sys.extended_fusion_named(&["τ"], "τ").unwrap(), 1);
    assert_eq!(sys.extended_fusion_named(&["τ"], "1").unwrap(), 0);
    assert!(sys.extended_fusion_named(&["x"], "1").is_err());
}

#[test]
fn one_dim_profiles() {
    let is = ising::<f64>().unwrap().into_validated(1e-9).unwrap().into_base();
    let (u, s, p) = (is.id("1").unwrap(), is.id("σ").unwrap(), is.id("ψ").unwrap());
    let prof = is.one_dim_profile(p).unwrap();
    assert!(prof.is_one_dimensional);
    assert_eq!(prof.phi_left[&s], s);
    assert_eq!(prof.phi_left[&p], u);

    let f = fib().into_base();
    let (one, t) = (f.id("1").unwrap(), f.id("τ").unwrap());
    let prof = f.one_dim_profile(t).unwrap();
    assert_eq!(prof.left_set.iter().copied().collect::<Vec<_>>(), vec![one]);
    assert!(!prof.is_one_dimensional);

    let prof = f.one_dim_profile(one).unwrap();
    assert!(prof.is_one_dimensional);
    assert!(prof.phi_left.iter().all(|(k, v)| k == v));
    assert!(prof.phi_right.iter().all(|(k, v)| k == v));
}

#[test]
fn identity_gauge_is_bit_identical() {
    let sys = fib().into_base();
    let g = GaugeTransform::identity(&sys);
    assert_eq!(g.apply(&sys).unwrap().fsym(), sys.fsym());
}

#[test]
fn incomplete_gauge_is_rejected() {
    let sys = fib().into_base();
    let g = GaugeTransform::from_map(HashMap::new()).unwrap();
    assert!(matches!(apply_gauge(&sys, &g), Err(crate::Error::IncompleteGauge { .. })));
    let mut m = HashMap::new();
    m.insert([0, 0, 0], C::new(0.0, 0.0));
    assert!(matches!(GaugeTransform::from_map(m), Err(crate::Error::ZeroGauge { .. })));
}

#[test]
fn random_gauges_keep_braided_catalog_valid() {
    for key in [CatalogKey::Fibonacci, CatalogKey::Ising, CatalogKey::Su2k { k: 3 }] {
        let b = get_system::<f64>(key).unwrap().braided().unwrap().clone();
        for seed in 0..3 {
            for g in [
                GaugeTransform::random_unit_modulus(b.base(), seed),
                GaugeTransform::random_general(b.base(), seed),
            ] {
                let gb = g.apply_braided(&b).unwrap().into_validated(1e-9).unwrap();
                assert!(gb.validate_braiding(1e-9).unwrap().passed, "{key} seed {seed}");
            }
        }
    }
}

#[test]
fn diagonal_is_invariant_under_symmetric_gauges() {
    let sys = fib().into_base();
    let t = sys.id("τ").unwrap();
    let before: Vec<C> = (0..2).map(|e| sys.gauge_invariant_diagonal(t, t, e).unwrap()).collect();
    for seed in 0..5 {
        let g = GaugeTransform::random_symmetric(&sys, seed);
        let gs = g.apply(&sys).unwrap().into_validated(1e-9).unwrap();
        for e in 0..2 {
            let after = gs.gauge_invariant_diagonal(t, t, e).unwrap();
            assert!((after - before[e]).norm() < 1e-12);
        }
    }
}

#[test]
fn diagonal_under_general_gauge_picks_up_vertex_ratio() {
    let sys = fib().into_base();
    let (u, t) = (sys.id("1").unwrap(), sys.id("τ").unwrap());
    let g = GaugeTransform::random_general(&sys, 7);
    let gs = g.apply(&sys).unwrap().into_validated(1e-9).unwrap();
    for e in [u, t] {
        let ratio = g.get(t, e, t).unwrap() / g.get(e, t, t).unwrap();
        let expect = sys.gauge_invariant_diagonal(t, t, e).unwrap() * ratio;
        assert!((gs.gauge_invariant_diagonal(t, t, e).unwrap() - expect).norm() < 1e-12);
    }
}

#[test]
fn direct_product_with_trivial_is_fibonacci() {
    let mut b = TensorSystem::<f64>::builder(["ι"]).unwrap();
    b.fuse("ι", "ι", "ι").unwrap();
    b.f(["ι"; 6], C::new(1.0, 0.0)).unwrap();
    b.fbar(["ι"; 6], C::new(1.0, 0.0)).unwrap();
    b.identity("ι").unwrap();
    b.dual("ι", "ι").unwrap();
    let triv = b.build().unwrap().into_validated(0.0).unwrap();
    let f = fib().into_base();
    let prod = direct_product(&triv, &f).unwrap().into_validated(1e-12).unwrap();
    let rename = |x: &str| format!("(ι,{x})");
    for (k, v) in f.fsym().f_entries() {
        let ids: Vec<usize> = k.iter().map(|&x| prod.id(&rename(f.name(x))).unwrap()).collect();
        let got = prod.f(ids[0], ids[1], ids[2], ids[3], ids[4], ids[5]);
        assert_eq!(got, *v);
    }
    assert_eq!(prod.fsym().f_entries().count(), f.fsym().f_entries().count());
}

#[test]
fn complete_fbar_recovers_catalog() {
    let f = fib().into_base();
    let mut fsym = f.fsym().clone();
    fsym.fbar.clear();
    let stripped = f.with_fsym(fsym);
    let done = stripped.complete_fbar(1e-12).unwrap();
    assert!(done.is_validated());
    for (k, v) in f.fsym().fbar_entries() {
        assert!((done.fsym().fbar(*k) - v).norm() < 1e-10);
    }
}

#[test]
fn complete_fbar_one_by_one() {
    let mut b = TensorSystem::<f64>::builder(["ι"]).unwrap();
    b.fuse("ι", "ι", "ι").unwrap();
    b.f(["ι"; 6], C::new(1.0, 0.0)).unwrap();
    let done = b.build().unwrap().complete_fbar(1e-12).unwrap();
    assert_eq!(done.fbar(0, 0, 0, 0, 0, 0), C::new(1.0, 0.0));
}

#[test]
fn complete_fbar_singular_block() {
    let f = fib().into_base();
    let t = f.id("τ").unwrap();
    let mut fsym = f.fsym().clone();
    fsym.fbar.clear();
    for e in 0..2 {
        for ff in 0..2 {
            fsym.set_f([t, t, t, t, e, ff], C::new(0.0, 0.0));
        }
    }
    match f.with_fsym(fsym).complete_fbar(1e-12) {
        Err(crate::Error::SingularBlock { a, d, smallest_singular_value, .. }) => {
            assert_eq!((a.as_str(), d.as_str()), ("τ", "τ"));
            assert_eq!(smallest_singular_value, 0.0);
        }
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_round_trip(seed in any::<u64>()) {
        let b = fib();
        let g = GaugeTransform::random_general(b.base(), seed);
        let there = g.apply_braided(&b).unwrap();
        let back = g.inverse().apply_braided(&there).unwrap();
        prop_assert!(tables_close(back.base(), b.base()) < 1e-12);
        for (k, v) in b.r_entries() {
            prop_assert!((back.r(k[0], k[1], k[2]) - v).norm() < 1e-12);
        }
    }

    #[test]
    fn one_dim_profile_consistent(key in 0usize..4, nu in 0usize..4) {
        let key = [CatalogKey::Fibonacci, CatalogKey::Ising, CatalogKey::Su2k { k: 4 }, CatalogKey::Cyclic { n: 4 }][key];
        let e = get_system::<f64>(key).unwrap();
        let sys = e.tensor_system().unwrap();
        let nu = nu % sys.len();
        let p = sys.one_dim_profile(nu).unwrap();
        for (&mu, &out) in &p.phi_left {
            for c in 0..sys.len() {
                prop_assert_eq!(sys.has(nu, mu, c), c == out);
            }
        }
        for mu in 0..sys.len() {
            prop_assert_eq!(p.left_set.contains(&mu), sys.outcomes(nu, mu).len() == 1);
            prop_assert_eq!(p.right_set.contains(&mu), sys.outcomes(mu, nu).len() == 1);
        }
    }

    #[test]
    fn catalog_fusion_is_associative(k in 1u32..7) {
        let e = get_system::<f64>(CatalogKey::Su2k { k }).unwrap();
        prop_assert!(e.rules().associativity_defect().is_none());
    }
}
