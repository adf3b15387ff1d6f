//! Reference values frozen from independent high-precision evaluations
//! (mpmath at 30 digits: Bessel functions, the defining α-integral, K₁ and
//! direct radial quadrature). None of them come from this crate.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rsp_core::dispersion::{DispersionModel, WeightRule};
use rsp_core::dynamics::{correlator, CorrelatorQuery};
use rsp_core::fieldstate::Profile;
use rsp_core::numerics::{bessel_j, j0, j1, periodic_quadrature, BesselOrder};
use rsp_core::superosc::{superosc_closed, superosc_quadrature, Branch, SuperoscParams};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

#[test]
fn bessel_values() {
    let table = [
        (0.5, 0.9384698072408129, 0.24226845767487389),
        (3.0, -0.26005195490193344, 0.33905895852593646),
        (12.0, 0.047689310796833537, -0.22344710449062761),
        (40.0, 0.0073668905842372896, 0.126038318037585),
        (123.4, -0.071525536719260154, -0.0068509998856543724),
    ];
    for (x, a, b) in table {
        assert!((j0(x) - a).abs() < 1e-14, "J0({x})");
        assert!((j1(x) - b).abs() < 1e-14, "J1({x})");
    }
    let zero = 2.4048255576957728;
    assert!(bessel_j(BesselOrder::Zero, zero).unwrap().abs() < 1e-10);
}

#[test]
fn bessel_integral_representation() {
    let v = periodic_quadrature(|a| Complex64::new(0.0, a.cos()).exp(), 16, 1e-14).unwrap();
    assert!((v - Complex64::new(4.807878861268826, 0.0)).norm() < 1e-13);
}

#[test]
fn single_basis_function_values() {
    let origin = SuperoscParams::new(1.0, 1.0, 0.0, 1.0, 0.0, Branch::Plus, 1).unwrap();
    let expect = Complex64::new(0.95903307840421441, 0.0);
    assert!((superosc_quadrature(&origin, 0.0).unwrap() - expect).norm() < 1e-13);
    assert!((superosc_closed(&origin, 0.0).unwrap() - expect).norm() < 1e-13);

    let inv = 4.0 * PI + FRAC_PI_4;
    let p = SuperoscParams::new(1.0, inv.sqrt().recip(), 1.0, 1.0, 0.0, Branch::Plus, 2).unwrap();
    let expect = Complex64::new(0.95615688031594062, -0.14450897860448882);
    for v in [superosc_quadrature(&p, 0.3).unwrap(), superosc_closed(&p, 0.3).unwrap()] {
        assert!((v - expect).norm() < 1e-8 * expect.norm(), "{v}");
    }
}

#[test]
fn massive_equal_time_correlator() {
    for (m, r, expect) in [
        (1.0, 1.0, 0.01524648825161622),
        (1.3, 5.0, 5.1362885303641937e-6),
        (2.0, 7.5, 6.8504801594970361e-10),
    ] {
        let model = DispersionModel::relativistic_massive(m, WeightRule::InverseSqrtTwoOmega).unwrap();
        let c = correlator(&CorrelatorQuery::new(model, 3, r, 0.0).unwrap()).unwrap();
        assert!(close(c.value.re, expect, 1e-6) && c.value.im.abs() < 1e-6 * expect, "m = {m}, r = {r}: {c:?}");
    }
}

#[test]
fn shell_radial_transform_in_three_dimensions() {
    for (l, w, k, expect) in [
        (2.0, 0.5, 0.0, 66.935830101927214),
        (2.0, 0.5, 1.7, -5.9518270373974254),
        (3.0, 0.4, 6.0, -0.19085465535664243),
    ] {
        let p = Profile::GaussianShell { radius: l, width: w };
        let v = p.transform(3, k);
        assert!((v - expect).abs() < 1e-10 * 66.9, "L = {l}, w = {w}, k = {k}: {v}");
    }
}
