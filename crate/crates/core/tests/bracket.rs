use num_complex::Complex64;
use proptest::prelude::*;
use trisect_core::bracket::*;
use trisect_core::diagram::{catalog, cp2, cp2bar, s1xs3, standard_s4, Diagram};
use trisect_core::group::Group;
use trisect_core::triplet::{Color, HopfTriplet};
use trisect_core::Scalar;

fn gauss(n: usize) -> Complex64 {
    (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k * k) as f64 / n as f64)).sum()
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < 1e-9 * (1.0 + b.norm())
}

#[test]
fn kashaev_cp2_against_gauss_sums() {
    for n in 2..=6 {
        let cfg = BracketConfig::new(HopfTriplet::kashaev(n).unwrap());
        let b = trisection_bracket(&cp2(), &cfg).unwrap().to_complex();
        assert!(close(b, gauss(n) * n as f64), "n={n}: {b}");
        let bar = trisection_bracket(&cp2bar(), &cfg).unwrap().to_complex();
        assert!(close(bar, (gauss(n) * n as f64).conj()), "n={n}: {bar}");
        let st = stabilization_bracket(&cfg).unwrap();
        assert_eq!(st, Scalar::int((n as i64).pow(6)));
    }
}

#[test]
fn group_triplet_on_s4_counts_pairs() {
    // Each red curve of s4 meets one blue and one green curve once, so every
    // assignment of group elements is admissible.
    for (c, b) in [(2, 3), (3, 3), (4, 2)] {
        let t = HopfTriplet::group(&Group::cyclic(c), &Group::cyclic(b)).unwrap();
        let v = invariant(&standard_s4(), &BracketConfig::new(t)).unwrap();
        assert_eq!(v.exact(), Some(Scalar::one()), "Z/{c} Z/{b}");
    }
}

#[test]
fn connected_sums_multiply() {
    let cfg = BracketConfig::new(HopfTriplet::kashaev(3).unwrap());
    let ds: Vec<Diagram> = ["s4", "cp2", "cp2bar", "s1xs3"].iter().map(|n| catalog(n).unwrap()).collect();
    for a in &ds {
        for b in &ds {
            let r = bracket_multiplicativity_check(a, b, &cfg).unwrap();
            assert!(r.equal, "{} vs {}", r.sum.render(), r.product.render());
        }
    }
}

#[test]
fn triplet_files_round_trip() {
    let t = HopfTriplet::group(&Group::symmetric(3), &Group::cyclic(2)).unwrap();
    let back = HopfTriplet::from_json(&t.to_json().to_string()).unwrap();
    for d in [standard_s4(), cp2(), s1xs3()] {
        let (x, y) = (BracketConfig::new(t.clone()), BracketConfig::new(back.clone()));
        assert_eq!(trisection_bracket(&d, &x).unwrap(), trisection_bracket(&d, &y).unwrap());
    }
}

#[test]
fn shipped_triplet_fixtures_are_current() {
    let want = HopfTriplet::kashaev(3).unwrap().to_json();
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/triplets/kashaev3.json")).unwrap();
    let got: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(got, want);
    let bad = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/triplets/kashaev3_perturbed.json")).unwrap();
    assert!(!HopfTriplet::from_json(&bad).unwrap().check().passed());
}

#[test]
fn float_arithmetic_tracks_exact() {
    for t in [HopfTriplet::kashaev(4).unwrap(), HopfTriplet::group(&Group::symmetric(3), &Group::cyclic(2)).unwrap()] {
        let exact = BracketConfig::new(t.clone());
        let float = BracketConfig::new(t.to_float());
        for d in [standard_s4(), cp2()] {
            let (a, b) = (trisection_bracket(&d, &exact).unwrap(), trisection_bracket(&d, &float).unwrap());
            assert!(!b.is_exact());
            assert!(close(b.to_complex(), a.to_complex()), "{}: {} vs {}", t.name, a.render(), b.render());
        }
    }
}

#[test]
fn principal_branch_and_its_rotations() {
    let cfg = BracketConfig::new(HopfTriplet::kashaev(3).unwrap());
    let v = invariant(&cp2(), &cfg).unwrap();
    let [p, b1, b2] = v.branches();
    assert!(close(p, v.to_complex()));
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    assert!(close(b1, p * w.powi(-1)) || close(b1, p * w));
    assert!(close(b1 * b1 * b1, p * p * p) && close(b2 * b2 * b2, p * p * p));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn rescaling_an_integral_scales_by_z_to_the_genus(num in 1i64..7, den in 1i64..7, color in 0usize..3, which in 0usize..3) {
        let z = Scalar::frac(num, den);
        let d = [standard_s4(), cp2(), s1xs3()][which].clone();
        let c = Color::ALL[color];
        for backend in [Backend::Element, Backend::Rep] {
            let cfg = BracketConfig::new(HopfTriplet::kashaev(2).unwrap()).with_backend(backend);
            let base = trisection_bracket(&d, &cfg).unwrap();
            let scaled = trisection_bracket(&d, &cfg.clone().scale_integral(c, &z)).unwrap();
            prop_assert_eq!(scaled, base.mul(&z.pow(d.genus as u32)));
        }
    }

    #[test]
    fn evaluators_agree_on_group_triplets(c in 1usize..5, b in 1usize..4, which in 0usize..3) {
        let t = HopfTriplet::group(&Group::cyclic(c), &Group::cyclic(b)).unwrap();
        let d = [standard_s4(), cp2(), cp2bar()][which].clone();
        let r = cross_check(&d, &BracketConfig::new(t)).unwrap();
        prop_assert!(r.equal, "{} vs {}", r.element.render(), r.rep.render());
    }
}
