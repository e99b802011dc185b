//! Radii of the log and exp curves against closed forms through the
//! exponential integral `E1`, evaluated here by its series and continued
//! fraction.

use pml_core::{Curve, Family, RateFunction};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn e1(x: f64) -> f64 {
    assert!(x > 0.0);
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        -EULER_GAMMA - x.ln() + sum
    } else {
        // modified Lentz on E1(x) = e^{-x} / (x + 1 - 1²/(x + 3 - 2²/(x + 5 - ...)))
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let a = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

#[test]
fn e1_reference_values() {
    assert!((e1(1.0) - 0.219_383_934_395_520_27).abs() < 1e-15);
    assert!((e1(0.1) - 1.822_923_958_419_390_7).abs() < 1e-14);
    assert!((e1(5.0) - 0.001_148_295_591_275_325_8).abs() < 1e-17);
}

#[test]
fn log_radius_matches_exponential_integral() {
    // g(x) = exp(-1/x):  ∫₀ᵗ g = t e^{-1/t} - E1(1/t)
    let curve = Curve::qcurve(RateFunction::with_default_b(Family::Log, 1.0).unwrap());
    let b = curve.half_range();
    for i in 1..=200 {
        let t = b * i as f64 / 200.0;
        let exact = 1.0 + t * (-1.0 / t).exp() - e1(1.0 / t);
        let r = curve.radius(t).unwrap();
        assert!((r - exact).abs() <= 1e-12, "t={t} r={r} exact={exact}");
    }
}

#[test]
fn exp_radius_matches_exponential_integral() {
    // g(x) = 1/(-ln x):  ∫₀ᵗ g = E1(-ln t)
    let curve = Curve::qcurve(RateFunction::with_default_b(Family::Exp, 1.0).unwrap());
    let b = curve.half_range();
    for i in 1..=200 {
        let t = b * (i as f64 / 200.0).powi(2);
        let exact = 1.0 + e1(-t.ln());
        let r = curve.radius(t).unwrap();
        assert!((r - exact).abs() <= 1e-12, "t={t} r={r} exact={exact}");
    }
}

#[test]
fn poly_radius_matches_closed_form() {
    for gamma in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let rf = RateFunction::with_default_b(Family::Poly, gamma).unwrap();
        let curve = Curve::qcurve(rf.clone());
        for i in 0..=100 {
            let t = rf.bound() * i as f64 / 100.0;
            let exact = 1.0 + gamma / (1.0 + gamma) * t.powf(1.0 + 1.0 / gamma);
            assert!((curve.radius(t).unwrap() - exact).abs() <= 1e-12);
        }
    }
}
