use dicke::synth::{prepare_dicke, synth_grid};
use dicke::verify::{
    audit_lower_bound, build_lightcone, dicke_reference, partial_trace, reachable, simulate, two_qubit_separability,
    Separability, StateVector,
};
use dicke::{Circuit64, ConnectivityGraph, StateVector64};
use num_complex::Complex64;
use proptest::prelude::*;

fn choose(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn choose_signed(n: usize, k: isize) -> f64 {
    if k < 0 || k as usize > n {
        0.0
    } else {
        choose(n, k as usize)
    }
}

/// Entries of the first/last reduced state of `|D^n_k⟩`, indexed by
/// (bit of first qubit) + 2·(bit of last qubit).
fn reduced_oracle(n: usize, k: usize) -> [[f64; 4]; 4] {
    let total = choose(n, k);
    let k = k as isize;
    let a = choose_signed(n - 2, k) / total;
    let b = choose_signed(n - 2, k - 1) / total;
    let c = choose_signed(n - 2, k - 2) / total;
    [[a, 0.0, 0.0, 0.0], [0.0, b, b, 0.0], [0.0, b, b, 0.0], [0.0, 0.0, 0.0, c]]
}

fn random_circuit(n: usize) -> impl Strategy<Value = Circuit64> {
    let gate = (0..n, 0..n, -3.0..3.0f64, -3.0..3.0f64, any::<bool>());
    prop::collection::vec(gate, 0..40).prop_map(move |gs| {
        let mut c = Circuit64::new(n);
        for (a, b, t, p, two) in gs {
            if two && a != b {
                c.cx(a, b);
            } else {
                c.u(a, t, p, -p, 0.0);
            }
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_density_matches_closed_form(n in 2usize..=14, kf in 0.0..1.0f64) {
        let k = 1 + ((n / 2 - 1) as f64 * kf).round() as usize;
        let d = dicke_reference::<f64>(n, k).unwrap();
        let rho = partial_trace(&d, &[0, n - 1]).unwrap();
        let want = reduced_oracle(n, k);
        for (r, row) in want.iter().enumerate() {
            for (c, &w) in row.iter().enumerate() {
                prop_assert!((rho.get(r, c) - Complex64::new(w, 0.0)).norm() < 1e-12);
            }
        }
        prop_assert_eq!(two_qubit_separability(&rho).unwrap(), Separability::Entangled);
    }

    #[test]
    fn partial_trace_has_unit_trace(c in random_circuit(5), keep in prop::sample::subsequence((0..5).collect::<Vec<_>>(), 1..=3)) {
        let s = simulate(&c, &StateVector::basis(5, 0)).unwrap();
        let rho = partial_trace(&s, &keep).unwrap();
        prop_assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        rho.validate(1e-9).unwrap();
    }

    #[test]
    fn simulation_preserves_norm(c in random_circuit(6), x in 0usize..64) {
        let s = simulate(&c, &StateVector64::basis(6, x)).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reachable_sets_double_at_most(c in random_circuit(6), origin in 0usize..6) {
        let g = build_lightcone(&c);
        let r = reachable(&g, origin);
        prop_assert!(r.doubling_holds());
        prop_assert!(r.reach.last().unwrap().contains(&origin));
    }
}

#[test]
fn product_marginals_are_not_entangled() {
    let mut c = Circuit64::new(3);
    c.h(0);
    c.ry(2, 0.7);
    let s = simulate(&c, &StateVector::basis(3, 0)).unwrap();
    let rho = partial_trace(&s, &[0, 2]).unwrap();
    assert_eq!(two_qubit_separability(&rho).unwrap(), Separability::Product);
}

#[test]
fn complete_circuits_pass_audit() {
    for n in [4usize, 8, 16, 32, 64] {
        for k in [1, 2, n / 4] {
            let c = prepare_dicke::<f64>(&ConnectivityGraph::complete(n), k.max(1)).unwrap();
            let a = audit_lower_bound(&c, &ConnectivityGraph::complete(n));
            assert!(a.pass && a.doubling_ok && a.caps_ok, "n={n} k={k}\n{}", a.to_text());
        }
    }
}

#[test]
fn grid_cones_respect_distance_caps() {
    for (n1, n2, k) in [(2, 4, 1), (3, 4, 2), (4, 8, 2), (2, 16, 1)] {
        let (c, _) = synth_grid::<f64>(n1, n2, k).unwrap();
        let g = ConnectivityGraph::grid(n1, n2);
        let a = audit_lower_bound(&c, &g);
        assert!(a.caps_ok && a.cones_intersect, "{n1}x{n2} k={k}");
        assert!(a.cnot_layers >= n2 / 2, "{n1}x{n2} k={k}");
    }
}
