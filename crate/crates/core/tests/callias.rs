use bandwidth_core::*;

fn eta(sigma: f64, lambda: f64, n: usize) -> EtaSolution<f64> {
    eta_closed(&EtaParams::new(sigma, lambda, n, 0.0).unwrap())
}

struct Case {
    band: WarpedBand<f64>,
    k: ExtrinsicSpec<f64>,
    eta: EtaSolution<f64>,
    t: (f64, f64),
    eps: f64,
    plateaus: (f64, f64),
    variant: Variant,
    mode: WidthMode<f64>,
}

fn cases() -> Vec<Case> {
    let cmc = |lambda| WidthMode::Cmc { lambda };
    vec![
        Case {
            band: WarpedBand::cosine(3, -0.7, 0.7).unwrap(),
            k: ExtrinsicSpec::umbilic(0.0),
            eta: eta(6.0, 0.0, 3),
            t: (-0.7, 0.7),
            eps: 0.0,
            plateaus: (0.0, 0.0),
            variant: Variant::Rigid,
            mode: cmc(0.0),
        },
        Case {
            band: WarpedBand::cosine(3, -0.95, 0.95).unwrap(),
            k: ExtrinsicSpec::umbilic(0.0),
            eta: eta(6.0, 0.0, 3),
            t: (-0.7, 0.7),
            eps: 0.04,
            plateaus: (0.1, 0.1),
            variant: Variant::Strict,
            mode: cmc(0.0),
        },
        Case {
            band: WarpedBand::sinh(4, 0.3, 2.0).unwrap(),
            k: ExtrinsicSpec::umbilic(0.5),
            eta: eta(-10.0, 0.5, 4),
            t: (0.6, 1.4),
            eps: 0.05,
            plateaus: (0.15, 0.2),
            variant: Variant::Strict,
            mode: cmc(0.5),
        },
        Case {
            band: WarpedBand::power(3, 0.4, 2.2).unwrap(),
            k: ExtrinsicSpec::conformal(Profile::Polynomial(vec![0.05, 0.05])),
            eta: eta(-1.0, 0.5, 3),
            t: (0.7, 1.5),
            eps: 0.05,
            plateaus: (0.0, 0.3),
            variant: Variant::Strict,
            mode: WidthMode::SupTrace { lambda_sup: 0.5 },
        },
    ]
}

#[test]
fn scaling_identity_holds_on_every_node() {
    for c in cases() {
        let input =
            build_callias_input(&c.band, &c.eta, c.t.0, c.t.1, c.eps, c.plateaus, c.variant, 0.0, 1001).unwrap();
        let n = c.band.n() as f64;
        for (a, b) in input.psi_tilde.values().iter().zip(input.psi.values()) {
            assert!((a + 2.0 * (n - 1.0) * b / n).abs() <= 1e-15 * 1f64.max(a.abs()));
        }
    }
}

#[test]
fn bulk_bracket_is_the_modified_energy_margin() {
    for c in cases() {
        for re in [0.0, 0.1, 0.37] {
            let input =
                build_callias_input(&c.band, &c.eta, c.t.0, c.t.1, c.eps, c.plateaus, c.variant, re, 1001).unwrap();
            let (cert, bulk) = evaluate_certificate(&c.band, &c.k, &input, 1500, c.mode).unwrap();
            let fields = margin_fields(&c.band, &c.k, &input.build, c.eta.params.sigma, 1500, c.mode).unwrap();
            assert_eq!(bulk.len(), fields.mod_dec.len());
            for (b, m) in bulk.values().iter().zip(fields.mod_dec.values()) {
                assert!((b - (m - 2.0 * re)).abs() <= 1e-12 * 1f64.max(m.abs()), "{b} vs {m}");
            }
            assert!(cert.route_gap <= 1e-12);
        }
    }
}

#[test]
fn boundary_margins_are_width_margins() {
    for c in cases() {
        let input =
            build_callias_input(&c.band, &c.eta, c.t.0, c.t.1, c.eps, c.plateaus, c.variant, 0.0, 501).unwrap();
        let (cert, _) = evaluate_certificate(&c.band, &c.k, &input, 1000, c.mode).unwrap();
        let (width, _) =
            check_theorem_with(&c.band, &c.k, &c.eta, c.t.0 - c.eps, c.t.1 + c.eps, 1000, c.mode).unwrap();
        assert!((cert.boundary_margin_plus - width.boundary_plus).abs() <= 1e-12);
        assert!((cert.boundary_margin_minus - width.boundary_minus).abs() <= 1e-12);
    }
}

#[test]
fn rigid_configuration_is_marginal() {
    let c = &cases()[0];
    let input = build_callias_input(&c.band, &c.eta, -0.7, 0.7, 0.0, (0.0, 0.0), Variant::Rigid, 0.0, 2001).unwrap();
    let (cert, bulk) = evaluate_certificate(&c.band, &c.k, &input, 2000, c.mode).unwrap();
    assert_eq!(cert.verdict, CalliasVerdict::Marginal);
    assert!(bulk.max_abs() <= 1e-9);
    for m in [cert.bulk_margin, cert.boundary_margin_minus, cert.boundary_margin_plus] {
        assert!(m.abs() <= 1e-9);
    }
    let input = build_callias_input(&c.band, &c.eta, -0.7, 0.7, 0.0, (0.0, 0.0), Variant::Rigid, 0.1, 2001).unwrap();
    let (cert, _) = evaluate_certificate(&c.band, &c.k, &input, 2000, c.mode).unwrap();
    assert!((cert.bulk_margin + 0.2).abs() <= 1e-9);
    assert_eq!(cert.verdict, CalliasVerdict::NotCertified);
}

/// On a real band wider than `t+ - t- + 2 eps` the strict bulk bracket is
/// positive, but the boundary expansions miss `eta(t+- +- eps)`.
#[test]
fn wide_rigid_band_is_not_certified() {
    let c = &cases()[1];
    let input = build_callias_input(&c.band, &c.eta, -0.7, 0.7, 0.04, (0.1, 0.1), Variant::Strict, 0.0, 1001).unwrap();
    assert!(input.admissible);
    let (cert, _) = evaluate_certificate(&c.band, &c.k, &input, 2000, c.mode).unwrap();
    assert!(cert.bulk_margin > 0.0);
    assert!(cert.boundary_margin_minus < 0.0 && cert.boundary_margin_plus < 0.0);
    assert_eq!(cert.verdict, CalliasVerdict::NotCertified);
    assert_eq!(cert.assumptions.len(), 1);
}

#[test]
fn configuration_errors() {
    let c = &cases()[1];
    assert!(matches!(
        build_callias_input(&c.band, &c.eta, -0.7, 0.7, 0.04, (0.1, 0.1), Variant::Strict, -0.1, 101),
        Err(Error::Config(_))
    ));
    let input = build_callias_input(&c.band, &c.eta, -0.7, 0.7, 0.04, (0.1, 0.1), Variant::Strict, 0.0, 101).unwrap();
    assert!(evaluate_certificate(&c.band, &c.k, &input, 100, WidthMode::Cmc { lambda: 1.0 }).is_err());
}
