use gti_asym::error::Error;
use gti_asym::gti::Gti;
use gti_asym::oracle::{refine_zero, refine_zero_with, CiSiIntegrator, QuadratureConfig};
use gti_asym::zeros::*;
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::extended()
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn first_ci_zero_moves_by_second_order_term() {
    let lead = solve_leading_ci(10.0, 1).unwrap();
    let r = refine_zero(10.0, Gti::Ci, 0.0, lead, &cfg()).unwrap();
    let shift = r.theta_star - lead;
    let c2 = QTable::shared().eval(2, lead).unwrap() / 100.0;
    assert!((shift / c2 - 1.0).abs() < 0.2, "{shift} vs {c2}");
}

#[test]
fn higher_orders_reduce_error() {
    let e2 = expand_zero(ZeroFamily::ci(), 40.0, 3, 2).unwrap();
    let e10 = expand_zero(ZeroFamily::ci(), 40.0, 3, 10).unwrap();
    let r = refine_zero(40.0, Gti::Ci, 0.0, e10.theta_assembled, &cfg()).unwrap();
    let err2 = (e2.theta_assembled_dd - r.theta_star_dd).abs().to_f64();
    let err10 = (e10.theta_assembled_dd - r.theta_star_dd).abs().to_f64();
    assert!(err10 < 1e-4 * err2, "{err2:e} {err10:e}");
    assert!(err10 / r.theta_star < 1e-11);
}

#[test]
fn si_and_ti_zeros_against_oracle() {
    let c = cfg();
    for (fam, g, alpha) in [
        (ZeroFamily::si(), Gti::Si, 0.0),
        (ZeroFamily::ti(0.25).unwrap(), Gti::Ti, 0.25),
        (ZeroFamily::ti(0.8).unwrap(), Gti::Ti, 0.8),
    ] {
        for m in [1, 5, 20] {
            let e = expand_zero(fam, 30.0, m, 10).unwrap();
            let r = refine_zero(30.0, g, alpha, e.theta_assembled, &c).unwrap();
            assert!((e.theta_assembled / r.theta_star - 1.0).abs() < 1e-10, "{g:?} m = {m}");
        }
    }
}

#[test]
fn convergence_order_in_a() {
    let c = cfg();
    for k in [2usize, 4, 6] {
        let pts: Vec<(f64, f64)> = [10.0f64, 20.0, 40.0, 80.0]
            .iter()
            .map(|&a| {
                let e = expand_zero(ZeroFamily::ci(), a, 3, k).unwrap();
                let r = refine_zero(a, Gti::Ci, 0.0, e.theta_assembled, &c).unwrap();
                (a.ln(), (e.theta_assembled_dd - r.theta_star_dd).abs().to_f64().ln())
            })
            .collect();
        let slope = fit_slope(&pts);
        assert!(slope <= -((k + 1) as f64) + 0.5, "K = {k}: slope {slope}");
    }
}

#[test]
fn lower_zeros_match_oracle_beyond_first_few() {
    let c = cfg();
    for &a in &[10.3, 9.7] {
        for (fam, g) in [(ZeroFamily::ci_lower(), Gti::LowerCi), (ZeroFamily::si_lower(), Gti::LowerSi)] {
            let mut integ = CiSiIntegrator::new(a, a * 20.0, &c).unwrap();
            let mut prev = 0.0;
            for m in 2..=50 {
                let e = expand_zero_lower(fam, a, m, 5).unwrap();
                assert!(!e.degenerate_flag);
                assert!(e.theta_assembled > prev);
                prev = e.theta_assembled;
                let r = refine_zero_with(&mut integ, g, 0.0, e.theta_assembled, &c).unwrap();
                let rel = (e.theta_assembled / r.theta_star - 1.0).abs();
                // first omitted term is of size q̃_6 / a^6
                let budget = if m < 8 { 5e-5 } else { 1e-6 };
                assert!(rel < budget, "a = {a}, {g:?}, m = {m}: {rel:e}");
            }
        }
    }
}

#[test]
fn lower_expansion_m5_example() {
    let e = expand_zero_lower(ZeroFamily::ci_lower(), 10.3, 5, 5).unwrap();
    let r = refine_zero(10.3, Gti::LowerCi, 0.0, e.theta_assembled, &cfg()).unwrap();
    assert!((e.theta_assembled / r.theta_star - 1.0).abs() <= 1e-6);
}

#[test]
fn fallback_agrees_with_expansion() {
    let a = 10.3;
    for fam in [ZeroFamily::ci_lower(), ZeroFamily::si_lower()] {
        let e = expand_zero_lower(fam, a, 4, 5).unwrap();
        let fb = refine_epsilon_fallback(a, fam, e.leading, 8).unwrap();
        assert!((fb / e.theta_assembled - 1.0).abs() < 3e-5);
        // ε is of the size of the missing k = 2 term
        let eps = fb - e.leading;
        assert!(eps.abs() < 2.0 / (a * a), "{eps}");
        assert!(eps.abs() > 1e-2 / (a * a));
    }
    // upper families use the same solver with zero right-hand side
    let e = expand_zero(ZeroFamily::ci(), 20.0, 3, 10).unwrap();
    let fb = refine_epsilon_fallback(20.0, ZeroFamily::ci(), e.leading, 10).unwrap();
    assert!((fb / e.theta_assembled - 1.0).abs() < 1e-8);
}

#[test]
fn ti_lower_through_fallback() {
    let (a, alpha) = (10.3, 0.25);
    let lead = solve_leading_ti_lower(a, 3, alpha).unwrap();
    assert!(branch_residual(a, alpha, lead.root, lead.branch).unwrap().abs() < 1e-13);
    let fam = ZeroFamily::ti_lower(alpha).unwrap();
    let fb = refine_epsilon_fallback(a, fam, lead.root, 8).unwrap();
    let r = refine_zero(a, Gti::LowerTi, alpha, fb, &cfg()).unwrap();
    assert!((fb / r.theta_star - 1.0).abs() <= 1e-6);
    // α = 0 is the ci case
    let t0 = solve_leading_ti_lower(a, 3, 0.0).unwrap();
    assert_eq!(t0.root, solve_leading_ci_lower(a, 3).unwrap().root);
}

#[test]
fn degenerate_audit_grid() {
    for &a in &[8.1, 9.7, 10.3, 15.9, 20.5, 30.1] {
        let l = lower_leadings(a, 0.0, 200).unwrap();
        assert_eq!(l.len(), 200);
        match detect_degenerate(a, &l).unwrap() {
            None => {}
            Some(d) => assert!(d.near_inverse_e, "a = {a}: {d:?}"),
        }
        let worst = l
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.gap().partial_cmp(&y.1.gap()).unwrap())
            .unwrap()
            .0;
        let spacing = a * (l[worst + 1].root - l[worst].root);
        assert!(spacing >= 2.4, "a = {a}: {spacing}");
    }
    assert!(matches!(
        detect_degenerate(11.05, &lower_leadings(11.05, 0.0, 3).unwrap()),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn degenerate_flag_on_constructed_case() {
    // scan a for a first leading root with |Sx - C| < τ
    let mut a = 9.5;
    let hit = loop {
        let l = lower_leadings(a, 0.0, 1).unwrap();
        if l[0].gap() < DEGENERACY_TAU {
            break a;
        }
        a += 0.001;
        assert!(a < 9.7, "no degenerate first root found");
    };
    let e = expand_zero_lower(ZeroFamily::ci_lower(), hit, 1, 5).unwrap();
    assert!(e.degenerate_flag);
    assert!(e.coeffs.is_empty());
    assert_eq!(e.theta_assembled, e.leading);
    assert!((e.leading - (-1f64).exp()).abs() < 0.5);

    // Close to a tangency the pair of leading roots may have no true
    // counterpart. The fallback either finds the zero or reports failure.
    let c = QuadratureConfig::standard();
    match refine_epsilon_fallback(hit, ZeroFamily::ci_lower(), e.leading, 6) {
        Ok(fb) => {
            let r = refine_zero(hit, Gti::LowerCi, 0.0, fb, &c).unwrap();
            assert!((fb / r.theta_star - 1.0).abs() < 1e-2);
        }
        Err(Error::MaxIterations(_)) => {
            let v0 = gti_asym::oracle::oracle_gti(hit, hit * 0.42, Gti::LowerCi, 0.0, &c).unwrap();
            let v1 = gti_asym::oracle::oracle_gti(hit, hit * 0.60, Gti::LowerCi, 0.0, &c).unwrap();
            assert_eq!(v0.signum(), v1.signum());
        }
        Err(other) => panic!("{other}"),
    }

    // just before the flag trips the fallback still tracks the true zero
    let a = hit - 0.01;
    let l = lower_leadings(a, 0.0, 1).unwrap();
    let fb = refine_epsilon_fallback(a, ZeroFamily::ci_lower(), l[0].root, 6).unwrap();
    let r = refine_zero(a, Gti::LowerCi, 0.0, fb, &c).unwrap();
    assert!((fb / r.theta_star - 1.0).abs() < 5e-3, "{fb} {}", r.theta_star);
}

#[test]
fn trig_zero_is_reported() {
    assert!(matches!(chi(3.0, 0.5), Err(Error::TrigZero { .. })));
    assert!(matches!(sigma(4.0, 0.5), Err(Error::TrigZero { .. })));
    assert!(matches!(solve_leading_ci_lower(5.0, 1), Err(Error::TrigZero { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]
    #[test]
    fn refined_zero_residual_contract(a in 2.0f64..40.0, m in 1u32..60, si in any::<bool>()) {
        let (fam, g) = if si { (ZeroFamily::si(), Gti::Si) } else { (ZeroFamily::ci(), Gti::Ci) };
        let e = expand_zero(fam, a, m, 6).unwrap();
        let c = QuadratureConfig::standard();
        let r = refine_zero(a, g, 0.0, e.theta_assembled, &c).unwrap();
        prop_assert!(r.residual.abs() <= c.rel_tol);
        prop_assert!(r.theta_star > 0.0);
    }
}
