use bandwidth_core::geometry::{curvature_oracle, CustomWarp};
use bandwidth_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn catalog(n: usize) -> Vec<WarpedBand<f64>> {
    let r = std::f64::consts::PI / n as f64;
    vec![
        WarpedBand::cosine(n, -0.85 * r, 0.85 * r).unwrap(),
        WarpedBand::sinh(n, 0.3, 1.8).unwrap(),
        WarpedBand::power(n, 0.3, 1.8).unwrap(),
        WarpedBand::flat(n, 0.0, 1.0).unwrap(),
    ]
}

#[test]
fn oracle_matches_closed_scalar_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-4;
    let bands = [
        WarpedBand::<f64>::cosine(3, -0.7, 0.7).unwrap(),
        WarpedBand::sinh(3, 0.5, 1.5).unwrap(),
        WarpedBand::power(3, 0.5, 1.5).unwrap(),
    ];
    for band in bands {
        let (t0, t1) = band.interval();
        for _ in 0..10_000 {
            let t = rng.gen_range(t0 + 2.0 * h..t1 - 2.0 * h);
            let est = curvature_oracle(&band, t, h).unwrap();
            let exact = scalar_curvature(&band, t).unwrap();
            assert!((est.value - exact).abs() <= 1e-6, "{band:?} t = {t}: {} vs {exact}", est.value);
        }
    }
}

#[test]
fn oracle_converges_at_second_order() {
    let band = WarpedBand::<f64>::sinh(4, 0.5, 1.5).unwrap();
    let exact = scalar_curvature(&band, 1.0).unwrap();
    let e1 = (curvature_oracle(&band, 1.0, 1e-3).unwrap().value - exact).abs();
    let e2 = (curvature_oracle(&band, 1.0, 5e-4).unwrap().value - exact).abs();
    let order = (e1 / e2).log2();
    assert!((order - 2.0).abs() < 0.2, "observed order {order}");
}

#[test]
fn oracle_examples() {
    let cos = WarpedBand::<f64>::cosine(3, -0.9, 0.9).unwrap();
    assert!((curvature_oracle(&cos, 0.3, 1e-4).unwrap().value - 6.0).abs() < 1e-6);
    let pow = WarpedBand::<f64>::power(3, 0.5, 1.5).unwrap();
    assert!(curvature_oracle(&pow, 1.0, 1e-4).unwrap().value.abs() < 1e-6);
    for n in 2..=6 {
        let flat = WarpedBand::<f64>::flat(n, 0.0, 1.0).unwrap();
        assert_eq!(curvature_oracle(&flat, 0.5, 1e-3).unwrap().value, 0.0);
    }
}

#[test]
fn mean_curvature_is_log_area_derivative() {
    let h = 2e-4;
    for n in 3..=7 {
        for band in catalog(n) {
            let (t0, t1) = band.interval();
            for i in 1..20 {
                let t = t0 + (t1 - t0) * i as f64 / 20.0;
                let log_area = |s: f64| (n - 1) as f64 * band.f(s).unwrap().ln();
                let fd = (log_area(t - 2.0 * h) - 8.0 * log_area(t - h) + 8.0 * log_area(t + h) - log_area(t + 2.0 * h))
                    / (12.0 * h);
                assert!((mean_curvature(&band, t).unwrap() - fd).abs() <= 1e-8, "n = {n} t = {t}");
            }
        }
    }
}

#[test]
fn example_identities() {
    for n in 3..=7 {
        let nf = n as f64;
        let r = std::f64::consts::PI / nf;
        let cases = [
            (WarpedBand::cosine(n, -0.9 * r, 0.9 * r).unwrap(), nf * (nf - 1.0)),
            (WarpedBand::sinh(n, 0.3, 2.0).unwrap(), -nf * (nf - 1.0)),
            (WarpedBand::power(n, 0.3, 2.0).unwrap(), 0.0),
        ];
        for (band, rg) in cases {
            let (t0, t1) = band.interval();
            let h_field = GridField1D::try_sample(t0, t1, 1000, |t| mean_curvature(&band, t)).unwrap();
            let dh_fd = h_field.derivative();
            for (i, (t, hv)) in h_field.iter().enumerate() {
                assert!((scalar_curvature(&band, t).unwrap() - rg).abs() < 1e-9);
                let dh = mean_curvature_dt(&band, t).unwrap();
                let analytic = rg + nf / (nf - 1.0) * hv * hv + 2.0 * dh;
                let scale = 1.0f64.max(hv * hv).max(dh.abs());
                assert!(analytic.abs() <= 1e-7 * scale, "n = {n} t = {t}: {analytic}");
                let numeric = rg + nf / (nf - 1.0) * hv * hv + 2.0 * dh_fd.values()[i];
                assert!(numeric.abs() <= 1e-5 * scale, "n = {n} t = {t}: {numeric}");
            }
        }
    }
}

#[test]
fn energy_density_is_same_source() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let specs = [
        ExtrinsicSpec::umbilic(0.7),
        ExtrinsicSpec::conformal(Profile::cosine(1.0, 1.0)),
        ExtrinsicSpec::Diagonal { a: Profile::Polynomial(vec![0.1, 0.4]), b: Profile::cosine(0.5, 2.0) },
    ];
    for band in catalog(4) {
        let (t0, t1) = band.interval();
        for k in &specs {
            for _ in 0..200 {
                let t = rng.gen_range(t0..t1);
                let c = constraint_sample(&band, k, t).unwrap();
                let tr = k.trace(4, t).unwrap();
                let lhs = 2.0 * c.mu - (scalar_curvature(&band, t).unwrap() - k.norm_sq(4, t).unwrap() + tr * tr);
                assert_eq!(lhs, 0.0);
            }
        }
    }
}

/// `(div k - d tr k)(d/dt)` from Christoffel symbols of finite-differenced
/// metric samples and finite-differenced components.
fn current_oracle(band: &WarpedBand<f64>, a: &dyn Fn(f64) -> f64, b: &dyn Fn(f64) -> f64, t: f64) -> f64 {
    let h = 1e-5;
    let n = band.n() as f64;
    let g = |s: f64| band.f(s).unwrap().powi(2);
    let dg = (g(t + h) - g(t - h)) / (2.0 * h);
    // Gamma^t_xx = -g'/2, Gamma^x_xt = g'/(2g)
    let gamma_t_xx = -0.5 * dg;
    let gamma_x_xt = 0.5 * dg / g(t);
    let k_xx = |s: f64| b(s) * g(s);
    let da = (a(t + h) - a(t - h)) / (2.0 * h);
    let div = da - (n - 1.0) / g(t) * (gamma_t_xx * a(t) + gamma_x_xt * k_xx(t));
    let tr = |s: f64| a(s) + (n - 1.0) * b(s);
    div - (tr(t + h) - tr(t - h)) / (2.0 * h)
}

#[test]
fn current_matches_divergence_oracle() {
    let band = WarpedBand::<f64>::cosine(3, -0.9, 0.9).unwrap();
    let k = ExtrinsicSpec::conformal(Profile::cosine(1.0, 1.0));
    let oracle = current_oracle(&band, &|t| t.cos(), &|t| t.cos(), 0.5);
    assert!((oracle - 0.958_851_077_208_406).abs() < 1e-8);
    assert!((constraint_sample(&band, &k, 0.5).unwrap().j_t - 0.958_851_077_208_406).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = Profile::Polynomial(vec![0.3, -0.2, 0.5]);
    let b = Profile::cosine(0.4, 1.7);
    let k = ExtrinsicSpec::Diagonal { a: a.clone(), b: b.clone() };
    for band in catalog(5) {
        let (t0, t1) = band.interval();
        for _ in 0..100 {
            let t = rng.gen_range(t0 + 1e-3..t1 - 1e-3);
            let oracle = current_oracle(&band, &|s| a.value(s).unwrap(), &|s| b.value(s).unwrap(), t);
            let j = constraint_sample(&band, &k, t).unwrap().j_t;
            assert!((j - oracle).abs() < 1e-6, "{band:?} t = {t}: {j} vs {oracle}");
        }
    }
}

#[test]
fn transfer_cancels_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let specs = [
        ExtrinsicSpec::umbilic(-1.2),
        ExtrinsicSpec::conformal(Profile::cosine(0.5, 1.0)),
        ExtrinsicSpec::Diagonal { a: Profile::Constant(0.3), b: Profile::Polynomial(vec![0.0, 1.0]) },
    ];
    let potentials = [Profile::Polynomial(vec![0.5, -1.0, 0.25]), Profile::cosine(2.0, 3.0)];
    for band in catalog(3) {
        let (t0, t1) = band.interval();
        for k in &specs {
            for p in &potentials {
                let kt = transfer_to_mots(&band, k, p).unwrap();
                for _ in 0..50 {
                    let t = rng.gen_range(t0..t1);
                    let lhs = null_expansion(&band, &kt, t, Side::Plus).unwrap() + p.value(t).unwrap()
                        - null_expansion(&band, k, t, Side::Plus).unwrap();
                    assert!(lhs.abs() <= 1e-12, "{lhs}");
                }
            }
        }
    }
}

#[test]
fn finite_difference_warp_matches_analytic() {
    let n = 3;
    let fd = Warp::Custom(CustomWarp::values_only("cos", move |t: f64| (1.5 * t).cos().powf(2.0 / 3.0), true));
    let band_fd = WarpedBand::new(n, -0.8, 0.8, fd).unwrap();
    let band = WarpedBand::<f64>::cosine(n, -0.8, 0.8).unwrap();
    for i in 0..=16 {
        let t = -0.8 + 0.1 * i as f64;
        let r_fd = scalar_curvature(&band_fd, t).unwrap();
        assert!((r_fd - 6.0).abs() < 1e-4, "t = {t}: {r_fd}");
        let h_fd = mean_curvature(&band_fd, t).unwrap();
        assert!((h_fd - mean_curvature(&band, t).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn construction_rejections() {
    assert!(matches!(WarpedBand::<f64>::cosine(3, -1.1, 0.5), Err(Error::InvalidBand(_))));
    assert!(matches!(WarpedBand::<f64>::sinh(3, 0.0, 0.5), Err(Error::InvalidBand(_))));
    assert!(WarpedBand::<f64>::power(1, 0.5, 1.0).is_err());
    let neg = Warp::Custom(CustomWarp::values_only("dip", |t: f64| t - 0.25, true));
    match WarpedBand::new(3, 0.0, 1.0, neg) {
        Err(Error::NonPositiveWarp { t, .. }) => assert!(t <= 0.25),
        other => panic!("{other:?}"),
    }
    let band = WarpedBand::<f64>::cosine(3, -0.5, 0.5).unwrap();
    assert!(matches!(mean_curvature(&band, 0.6), Err(Error::Domain { .. })));
    let bare = Warp::Custom(CustomWarp::values_only("bare", |_t: f64| 1.0, false));
    let b = WarpedBand::new(3, 0.0, 1.0, bare).unwrap();
    assert_eq!(mean_curvature(&b, 0.5), Err(Error::DerivativeUnavailable));
}

#[test]
fn warp_table_round_trip() {
    let mut text = String::from("# sinh band n = 3\nt,f,df,d2f\n");
    for i in 0..=200 {
        let t = 0.4 + 1.2 * i as f64 / 200.0;
        let band = WarpedBand::<f64>::sinh(3, 0.3, 2.0).unwrap();
        let j = band.jet(t).unwrap();
        text.push_str(&format!("{t:.17},{:.17},{:.17},{:.17}\n", j.f, j.df(), j.d2f()));
    }
    let (warp, (lo, hi)) = geometry::load_warp_table::<f64, _>(text.as_bytes(), "sinh").unwrap();
    let band = WarpedBand::new(3, lo, hi, Warp::Custom(warp)).unwrap();
    for t in [0.45, 0.8, 1.3, 1.55] {
        assert!((mean_curvature(&band, t).unwrap() - 2.0 / (1.5 * t).tanh()).abs() < 1e-7);
        assert!((scalar_curvature(&band, t).unwrap() + 6.0).abs() < 1e-2);
    }
}

#[test]
fn single_precision_geometry() {
    let band = WarpedBand::<f32>::cosine(3, -0.9, 0.9).unwrap();
    let h = mean_curvature(&band, std::f32::consts::FRAC_PI_6).unwrap();
    assert!((h + 2.0).abs() < 1e-5);
    assert!((scalar_curvature(&band, 0.4).unwrap() - 6.0).abs() < 1e-4);
}
