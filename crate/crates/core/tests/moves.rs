use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trisect_core::bracket::{invariant, trisection_bracket, BracketConfig};
use trisect_core::diagram::{catalog, cp2, standard_s4, Diagram};
use trisect_core::group::Group;
use trisect_core::moves::*;
use trisect_core::triplet::HopfTriplet;
use trisect_core::Error;

fn cfgs() -> Vec<BracketConfig> {
    vec![
        BracketConfig::new(HopfTriplet::kashaev(2).unwrap()),
        BracketConfig::new(HopfTriplet::kashaev(3).unwrap()),
        BracketConfig::new(HopfTriplet::group(&Group::cyclic(2), &Group::cyclic(3)).unwrap()),
    ]
}

fn walk(d: &Diagram, seed: u64, steps: usize) -> (Diagram, Vec<Move>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut cur, mut log) = (d.clone(), Vec::new());
    for _ in 0..steps {
        let m = random_move(&cur, &mut rng);
        cur = m.apply(&cur).unwrap();
        log.push(m);
    }
    (cur, log)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_walks_keep_the_bracket(seed in any::<u64>(), steps in 1usize..6, start in 0usize..2) {
        let d = if start == 0 { standard_s4() } else { cp2() };
        let (e, log) = walk(&d, seed, steps);
        prop_assert!(e.validate(true).is_ok(), "{:?}", log);
        for cfg in cfgs() {
            let (a, b) = (trisection_bracket(&d, &cfg).unwrap(), trisection_bracket(&e, &cfg).unwrap());
            prop_assert_eq!(a.render(), b.render(), "{} after {:?}", cfg.triplet.name, log);
        }
    }

    #[test]
    fn move_logs_replay(seed in any::<u64>(), steps in 1usize..8) {
        let (e, log) = walk(&cp2(), seed, steps);
        let text = serde_json::to_string(&log).unwrap();
        let replayed = apply_all(&cp2(), &parse_moves(&text).unwrap()).unwrap();
        prop_assert_eq!(replayed, e);
    }

    #[test]
    fn shifts_compose(k in 0i64..6, j in 0i64..6) {
        let d = standard_s4();
        let once = shift_basepoint(&d, "F3", k + j).unwrap();
        let twice = shift_basepoint(&shift_basepoint(&d, "F3", k).unwrap(), "F3", j).unwrap();
        prop_assert_eq!(once.curves, twice.curves);
    }

    #[test]
    fn insert_then_delete_is_identity(pl in 0usize..3, pm in 0usize..3, sign in prop_oneof![Just(1i8), Just(-1i8)]) {
        let d = cp2();
        let e = two_point_insert(&d, "a", pl, "b", pm, sign).unwrap();
        prop_assert_eq!(e.crossings.len(), d.crossings.len() + 2);
        let n = e.crossings.len();
        let back = two_point_delete(&e, &e.crossings[n - 2].id, &e.crossings[n - 1].id).unwrap();
        // moves drop region data
        let mut plain = d.clone();
        plain.embedding = None;
        prop_assert!(back.same_up_to_relabel(&plain));
    }
}

#[test]
fn reversing_twice_restores_the_diagram() {
    for name in ["s4", "cp2", "s1xs3"] {
        let d = catalog(name).unwrap();
        for c in &d.curves {
            let back = reverse_orientation(&reverse_orientation(&d, &c.id).unwrap(), &c.id).unwrap();
            assert_eq!(back.curves, d.curves, "{name}/{}", c.id);
        }
    }
}

#[test]
fn stabilization_keeps_the_invariant_not_the_bracket() {
    let cfg = BracketConfig::new(HopfTriplet::kashaev(3).unwrap());
    let d = cp2();
    let s = stabilize(&d).unwrap();
    assert_eq!(s.genus, d.genus + 3);
    assert_ne!(trisection_bracket(&d, &cfg).unwrap(), trisection_bracket(&s, &cfg).unwrap());
    assert!(invariant(&d, &cfg).unwrap().equals(&invariant(&s, &cfg).unwrap(), cfg.tol));
    assert!(destabilize(&s).unwrap().same_up_to_relabel(&d));
}

#[test]
fn destabilize_needs_a_split_summand() {
    assert!(matches!(destabilize(&cp2()), Err(Error::NoStandardSummand)));
}

#[test]
fn illegal_moves_are_rejected() {
    let d = cp2();
    assert!(matches!(shift_basepoint(&d, "nope", 1), Err(Error::InvalidMove(_))));
    assert!(matches!(two_point_insert(&d, "a", 0, "a", 0, 1), Err(Error::InvalidMove(_))));
    assert!(matches!(two_point_insert(&d, "a", 9, "b", 0, 1), Err(Error::InvalidMove(_))));
    assert!(matches!(two_point_insert(&d, "a", 0, "b", 0, 2), Err(Error::InvalidMove(_))));
    // x and y lie on different curve pairs, so they bound no bigon
    assert!(matches!(two_point_delete(&d, "x", "y"), Err(Error::InvalidMove(_))));
    assert!(matches!(handle_slide(&d, "a", "b", 0, 0, 1), Err(Error::InvalidMove(_))));
    assert!(matches!(three_point_flip(&d, "x", "y", "nope"), Err(Error::InvalidMove(_))));
}

#[test]
fn flip_sign_pattern_is_enforced() {
    // Crossings x, y, z of the triangle; only x = −1, y = +1, z = −1 is accepted.
    let base = two_point_insert(&two_point_insert(&cp2(), "a", 2, "b", 2, 1).unwrap(), "c", 2, "a", 4, 1).unwrap();
    let legal: Vec<u8> = (0..8u8)
        .filter(|s| {
            let mut d = base.clone();
            for (k, id) in ["x", "y", "z"].iter().enumerate() {
                let i = d.crossing_index(id).unwrap();
                d.crossings[i].sign = if s >> k & 1 == 1 { -1 } else { 1 };
            }
            three_point_flip(&d, "x", "y", "z").is_ok()
        })
        .collect();
    assert_eq!(legal, vec![5]);
}

#[test]
fn every_generator_keeps_the_bracket_on_s4() {
    let d = standard_s4();
    let ins = two_point_insert(&d, "F3", 1, "c1", 1, 1).unwrap();
    let slid = handle_slide(&d, "F1", "F2", 0, 0, 1).unwrap();
    let results = [
        shift_basepoint(&d, "b2", 1).unwrap(),
        reverse_orientation(&d, "F1").unwrap(),
        ins.clone(),
        handle_slide(&ins, "c3", "c1", 1, 0, 1).unwrap(),
        handle_slide(&slid, "F1", "F2", 1, 0, -1).unwrap(),
        slid,
    ];
    for cfg in cfgs() {
        let want = trisection_bracket(&d, &cfg).unwrap();
        for (i, e) in results.iter().enumerate() {
            assert_eq!(trisection_bracket(e, &cfg).unwrap(), want, "{} case {i}", cfg.triplet.name);
        }
    }
}
