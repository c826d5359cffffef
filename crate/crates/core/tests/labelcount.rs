use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trisect_core::diagram::{cp2, cp2bar, s1xs3, s4_disc, standard_s4, Diagram};
use trisect_core::group::{GSet, Group};
use trisect_core::labelcount::*;
use trisect_core::moves::{handle_slide, random_move, reverse_orientation, shift_basepoint, stabilize, two_point_insert};
use trisect_core::triplet::Color;
use trisect_core::bracket::{trisection_bracket, BracketConfig};
use trisect_core::Scalar;

fn g(s: &str) -> Group {
    Group::parse(s).unwrap()
}

/// Every transitive M with at most `max` points, one per conjugacy class of stabiliser.
fn configs(c: &str, b: &str, max: usize) -> Vec<WeakConfig> {
    let (cg, bg) = (g(c), g(b));
    let k = WeakConfig::k_group(&cg, &bg);
    k.subgroup_classes()
        .into_iter()
        .filter(|h| k.order() / h.len() <= max)
        .map(|h| WeakConfig::new(cg.clone(), bg.clone(), GSet::cosets(k.clone(), &h).unwrap()).unwrap())
        .collect()
}

const SMALL: [(&str, &str); 4] = [("Z/2", "Z/2"), ("Z/2", "Z/3"), ("Z/3", "Z/2"), ("Z/3", "Z/3")];

/// The first two-point insertion between `l` and `m` that keeps the curves cellular.
fn realizable_insert(d: &Diagram, l: &str, m: &str) -> Option<Diagram> {
    let (nl, nm) = (d.curves[d.curve_index(l)?].visits.len(), d.curves[d.curve_index(m)?].visits.len());
    for pl in 0..nl.max(1) {
        for pm in 0..nm.max(1) {
            for sign in [1, -1] {
                let e = two_point_insert(d, l, pl, m, pm, sign).ok()?;
                if e.cellular_embedding().is_some() {
                    return Some(e);
                }
            }
        }
    }
    None
}

fn embedded(mut d: Diagram) -> Diagram {
    d.embedding = d.cellular_embedding();
    d
}

/// Random handle slides, keeping each colour class.
fn slid_s4(seed: u64, steps: usize) -> Diagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = standard_s4();
    for _ in 0..steps {
        let col = [Color::Red, Color::Blue, Color::Green][rng.gen_range(0..3)];
        let ids: Vec<String> = d.curves.iter().filter(|c| c.color == col).map(|c| c.id.clone()).collect();
        let (l, m) = (&ids[rng.gen_range(0..3)], &ids[rng.gen_range(0..3)]);
        if l == m {
            continue;
        }
        let nl = d.curves[d.curve_index(l).unwrap()].visits.len().max(1);
        let nm = d.curves[d.curve_index(m).unwrap()].visits.len().max(1);
        let dir = if rng.gen_bool(0.5) { 1 } else { -1 };
        d = handle_slide(&d, l, m, rng.gen_range(0..nl), rng.gen_range(0..nm), dir).unwrap();
    }
    d
}

/// Plain enumeration of all curve labellings, multiplying in C and B separately.
fn naive_curve_count(d: &Diagram, c: &Group, b: &Group) -> u128 {
    let lab: Vec<usize> = (0..d.curves.len()).filter(|&i| d.curves[i].color != Color::Red).collect();
    let size = |i: usize| if d.curves[i].color == Color::Green { c.order() } else { b.order() };
    let total: usize = lab.iter().map(|&i| size(i)).product();
    let mut count = 0;
    for code in 0..total {
        let mut val = vec![0; d.curves.len()];
        let mut t = code;
        for &i in &lab {
            val[i] = t % size(i);
            t /= size(i);
        }
        let ok = d.curves.iter().enumerate().filter(|(_, r)| r.color == Color::Red).all(|(ri, r)| {
            let (mut pc, mut pb) = (c.identity(), b.identity());
            for &x in &r.visits {
                let p = d.partner(x, ri);
                let s = d.crossings[x].sign;
                if d.curves[p].color == Color::Green {
                    let e = if s > 0 { c.inv(val[p]) } else { val[p] };
                    pc = c.mul(e, pc);
                } else {
                    let e = if s > 0 { val[p] } else { b.inv(val[p]) };
                    pb = b.mul(pb, e);
                }
            }
            pc == c.identity() && pb == b.identity()
        });
        count += ok as u128;
    }
    count
}

#[test]
fn curve_counts_match_plain_enumeration() {
    let mut ds = vec![standard_s4(), cp2(), cp2bar(), stabilize(&cp2()).unwrap()];
    ds.extend((0..4).map(|s| slid_s4(s, 4)));
    for (c, b) in [("Z/2", "Z/3"), ("S3", "Z/2"), ("Z/2", "S3")] {
        for d in &ds {
            assert_eq!(count_curve_labellings(d, &g(c), &g(b)), naive_curve_count(d, &g(c), &g(b)), "C={c} B={b}");
        }
    }
}

#[test]
fn s4_counts() {
    assert_eq!(count_curve_labellings(&standard_s4(), &g("Z/2"), &g("Z/3")), 6);
    for (c, b) in SMALL {
        let n = (g(c).order() * g(b).order()) as u128;
        assert_eq!(count_curve_labellings(&standard_s4(), &g(c), &g(b)), n);
        assert_eq!(count_admissible(&standard_s4(), &WeakConfig::point(g(c), g(b)), None).unwrap(), n);
    }
}

#[test]
fn no_red_curves_is_vacuous() {
    let mut d = s1xs3();
    let red = d.curve_index("a").unwrap();
    d.curves.remove(red);
    assert_eq!(count_curve_labellings(&d, &g("Z/3"), &g("Z/2")), 6);
}

#[test]
fn cp2_counts() {
    assert_eq!(count_curve_labellings(&cp2(), &g("Z/2"), &g("Z/2")), 1);
    let cfg = WeakConfig::point(g("Z/2"), g("Z/2"));
    assert_eq!(count_admissible(&cp2(), &cfg, None).unwrap(), 1);
    assert_eq!(averaged_evaluation(&cp2(), &cfg, None).unwrap(), Scalar::int(4));
}

#[test]
fn disc_count_is_b_times_c_for_every_boundary_label() {
    for (c, b) in SMALL {
        for cfg in configs(c, b, 3) {
            let n = (cfg.b.order() * cfg.c.order()) as u128;
            for m in 0..cfg.m.size() {
                assert_eq!(count_admissible(&s4_disc(), &cfg, Some(m)).unwrap(), n);
                let av = averaged_evaluation(&s4_disc(), &cfg, Some(m)).unwrap();
                assert_eq!(av, Scalar::int((n * n * n * n) as i64));
            }
        }
    }
}

#[test]
fn boundary_label_needs_a_disc() {
    let cfg = WeakConfig::point(g("Z/2"), g("Z/2"));
    assert!(count_admissible(&standard_s4(), &cfg, Some(0)).is_err());
    assert!(count_admissible(&s4_disc(), &cfg, Some(1)).is_err());
    let mut bare = cp2();
    bare.embedding = None;
    assert!(count_admissible(&bare, &cfg, None).is_err());
}

#[test]
fn factorization_on_catalog() {
    for (c, b) in SMALL {
        for cfg in configs(c, b, 3) {
            for d in [standard_s4(), cp2(), cp2bar(), s1xs3()] {
                let l = count_admissible(&d, &cfg, None).unwrap();
                let curves = count_curve_labellings(&d, &cfg.c, &cfg.b);
                assert_eq!(l, cfg.m.size() as u128 * curves, "C={c} B={b} |M|={}", cfg.m.size());
            }
        }
    }
}

#[test]
fn factorization_nonabelian_on_realizable_moves() {
    let mut fixtures = vec![];
    let mut d = cp2();
    for _ in 0..3 {
        d = realizable_insert(&d, "a", "c").expect("a realizable red-green insertion");
        fixtures.push(embedded(d.clone()));
    }
    fixtures.push(embedded(realizable_insert(&d, "a", "b").unwrap()));
    assert!(fixtures.iter().all(|d| d.embedding.is_some()));
    for (c, b) in [("S3", "Z/2"), ("Z/2", "S3")] {
        for cfg in configs(c, b, 3) {
            for d in &fixtures {
                let l = count_admissible(d, &cfg, None).unwrap();
                assert_eq!(l, cfg.m.size() as u128 * count_curve_labellings(d, &cfg.c, &cfg.b));
            }
        }
    }
}

#[test]
fn averaged_evaluation_matches_literal_sum() {
    let mut cases: Vec<WeakConfig> = configs("Z/2", "Z/2", 2);
    cases.extend(configs("Z/2", "Z/3", 3));
    cases.extend(configs("S3", "Z/2", 2));
    for cfg in &cases {
        for d in [cp2(), cp2bar(), s1xs3()] {
            let av = averaged_evaluation(&d, cfg, None).unwrap();
            assert_eq!(brute_force_average(&d, cfg, None).unwrap(), av, "|M|={}", cfg.m.size());
        }
    }
}

#[test]
fn trivial_groups_single_region() {
    let cfg = WeakConfig::point(Group::trivial(), Group::trivial());
    let mut d = s1xs3();
    let e = d.embedding.as_mut().unwrap();
    e.regions.truncate(1);
    for s in e.sides.iter_mut() {
        s[0] = [0, 0];
    }
    let reps = weak_simple_reps(&cfg.m).unwrap();
    assert_eq!(reps.len(), 1);
    let l = FullLabelling { curves: vec![None, Some(0), Some(0)], reps: vec![Some(0), None, None] };
    assert_eq!(brute_force_evaluation(&d, &cfg, &reps, &l, None).unwrap(), Scalar::one());
}

#[test]
fn simple_rep_dimensions() {
    for (c, b, max) in [("Z/2", "Z/2", 3), ("Z/3", "Z/2", 3), ("S3", "Z/2", 3), ("Z/2", "S3", 2)] {
        for cfg in configs(c, b, max) {
            let reps = weak_simple_reps(&cfg.m).unwrap();
            let sum: usize = reps.iter().map(|r| r.dim * r.dim).sum();
            assert_eq!(sum, cfg.m.size().pow(2) * cfg.k().order());
        }
    }
    // M = K by translation, K abelian: |M|² orbits... one per orbit of K on K×K
    let (cg, bg) = (g("Z/2"), g("Z/2"));
    let k = WeakConfig::k_group(&cg, &bg);
    let m = GSet::cosets(k.clone(), &[k.identity()]).unwrap();
    let reps = weak_simple_reps(&m).unwrap();
    assert_eq!(reps.len(), 4);
    assert!(reps.iter().all(|r| r.dim == 4));
}

#[test]
fn count_invariant_values() {
    let cfg = WeakConfig::point(g("Z/2"), g("Z/3"));
    let (l, inv) = group_count_invariant(&standard_s4(), &cfg).unwrap();
    assert_eq!(l, 6);
    assert_eq!(inv.exact(), Some(Scalar::one()));
    for cfg in configs("Z/2", "Z/3", 3) {
        let (_, inv) = group_count_invariant(&standard_s4(), &cfg).unwrap();
        assert_eq!(inv.exact(), Some(Scalar::int(cfg.m.size() as i64)));
    }
    let (l, inv) = group_count_invariant(&cp2(), &WeakConfig::point(g("Z/2"), g("Z/2"))).unwrap();
    assert_eq!(l, 1);
    assert!((inv.to_complex().re - 4f64.powf(-1.0 / 3.0)).abs() < 1e-12);
    assert_eq!(inv.exact(), None);
}

#[test]
fn count_invariant_under_moves() {
    let cp2_moves: Vec<Diagram> = {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut v = vec![];
        let mut d = cp2();
        for _ in 0..6 {
            d = random_move(&d, &mut rng).apply(&d).unwrap();
            v.push(d.clone());
        }
        v.push(stabilize(&cp2()).unwrap());
        v
    };
    for (c, b) in [("Z/2", "Z/2"), ("Z/3", "Z/2"), ("S3", "Z/2")] {
        let cfg = WeakConfig::point(g(c), g(b));
        let base = group_count_invariant(&cp2(), &cfg).unwrap().1;
        for d in &cp2_moves {
            assert!(group_count_invariant(d, &cfg).unwrap().1.equals(&base, 1e-9), "C={c} B={b}");
        }
        let s4 = group_count_invariant(&standard_s4(), &cfg).unwrap().1;
        for seed in 0..10 {
            assert!(group_count_invariant(&slid_s4(seed, 6), &cfg).unwrap().1.equals(&s4, 1e-9));
        }
    }
}

#[test]
fn red_product_triviality_survives_basepoint_and_orientation() {
    let d = slid_s4(3, 6);
    let cfg = WeakConfig::point(g("S3"), g("Z/2"));
    let reds: Vec<usize> = (0..d.curves.len()).filter(|&i| d.curves[i].color == Color::Red).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let labels: Vec<Option<usize>> = d
            .curves
            .iter()
            .map(|c| match c.color {
                Color::Green => Some(rng.gen_range(0..6)),
                Color::Blue => Some(rng.gen_range(0..2)),
                Color::Red => None,
            })
            .collect();
        for &r in &reds {
            let id = d.curves[r].id.clone();
            let trivial = red_product(&d, r, &labels, &cfg).unwrap() == cfg.k().identity();
            let shifted = shift_basepoint(&d, &id, 1).unwrap();
            let reversed = reverse_orientation(&d, &id).unwrap();
            for e in [shifted, reversed] {
                let r2 = e.curve_index(&id).unwrap();
                assert_eq!(red_product(&e, r2, &labels, &cfg).unwrap() == cfg.k().identity(), trivial);
            }
        }
    }
}

#[test]
fn coincidence_with_group_triplet() {
    for (c, b) in [("Z/2", "Z/2"), ("Z/2", "Z/3")] {
        for cfg in configs(c, b, 3) {
            for d in [standard_s4(), cp2(), stabilize(&cp2()).unwrap()] {
                let r = coincidence_check(&d, &cfg, 1e-9).unwrap();
                assert!(r.equal, "C={c} B={b} |M|={}: {} vs {}", cfg.m.size(), r.count.render(), r.bracket.render());
            }
        }
    }
}

/// The weak-triplet bracket sees one M-label per corner-glued face, while the
/// count labels true regions; they agree when every face is a disc.
#[test]
fn weak_bracket_counts_faces() {
    let mut d = cp2();
    let mut cellular = vec![cp2(), cp2bar()];
    for _ in 0..2 {
        d = realizable_insert(&d, "a", "c").unwrap();
        cellular.push(embedded(d.clone()));
    }
    let mut cases = configs("Z/2", "Z/2", 4);
    cases.extend(configs("S3", "Z/2", 2));
    for cfg in &cases {
        let bc = BracketConfig::new(weak_triplet(cfg).unwrap());
        for d in &cellular {
            let l = count_admissible(d, cfg, None).unwrap();
            assert_eq!(trisection_bracket(d, &bc).unwrap(), Scalar::int(l as i64));
        }
        if cfg.c.order() == 2 {
            for d in [standard_s4(), s1xs3()] {
                let extra = d.face_count() - d.embedding.as_ref().unwrap().regions.len();
                let l = count_admissible(&d, cfg, None).unwrap() * (cfg.m.size() as u128).pow(extra as u32);
                assert_eq!(trisection_bracket(&d, &bc).unwrap(), Scalar::int(l as i64));
            }
        }
    }
}
