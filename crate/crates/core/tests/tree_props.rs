use std::sync::OnceLock;

use proptest::prelude::*;
use tamedyn::dendrite::build::{bonding_violations, invariant_violations};
use tamedyn::dendrite::io::{read_stage, write_stage};
use tamedyn::dendrite::{build_convex_cover, build_twocolor_stage, build_twocolor_tower, build_wazewski_stage};
use tamedyn::dendrite::{EndpointClass, GeometricPoint, Order, PointType, TreeStage};
use tamedyn::dynamics::beta::verify_beta_le_2;
use tamedyn::dynamics::stab::{stab_orbit_probe, Side};
use tamedyn::dynamics::{betweenness_preserved, collapse_map, leaf_class, pab_approx, tree_eps_derivative};
use tamedyn::rational::Rational;
use tamedyn::textio::FormatError;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

fn wazewski() -> &'static TreeStage {
    static S: OnceLock<TreeStage> = OnceLock::new();
    S.get_or_init(|| build_wazewski_stage(&[Order::Finite(3)], 4, 1).unwrap())
}

fn twocolor() -> &'static TreeStage {
    static S: OnceLock<TreeStage> = OnceLock::new();
    S.get_or_init(|| build_twocolor_stage(2, 1).unwrap())
}

/// A point of `stage` from an edge index and a sixteenth along it.
fn point(stage: &TreeStage, (e, k): (usize, i64)) -> GeometricPoint {
    stage.point(e % stage.edges().len(), q(k, 16))
}

fn spot() -> impl Strategy<Value = (usize, i64)> {
    (0usize..10_000, 0i64..=16)
}

fn eps() -> impl Strategy<Value = Rational> {
    (1u32..4).prop_map(|k| q(1, 1 << k))
}

/// Green and red leaves of the two-color stage that pass the one-switch
/// precondition, with the switch point and red length.
fn switching_pairs() -> &'static [(GeometricPoint, GeometricPoint, GeometricPoint, Rational)] {
    static P: OnceLock<Vec<(GeometricPoint, GeometricPoint, GeometricPoint, Rational)>> = OnceLock::new();
    P.get_or_init(|| {
        let s = twocolor();
        let of = |c: EndpointClass| -> Vec<usize> {
            s.leaves().into_iter().filter(|&l| leaf_class(s, l).is_ok_and(|k| k == c)).collect()
        };
        let mut out = Vec::new();
        for e in of(EndpointClass::GreenSoFar) {
            for f in of(EndpointClass::RedSoFar) {
                let (e, f) = (GeometricPoint::Vertex(e), GeometricPoint::Vertex(f));
                if let Ok(p) = stab_orbit_probe(s, &e, &f, &e, 0, 0, 0) {
                    out.push((e, f, p.switch, p.red_length));
                }
            }
        }
        assert!(!out.is_empty());
        out
    })
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn path_metric_is_a_tree_metric(a in spot(), b in spot(), c in spot()) {
        let s = wazewski();
        let (x, y, z) = (point(s, a), point(s, b), point(s, c));
        let d = |p: &GeometricPoint, r: &GeometricPoint| s.path_distance(p, r);
        prop_assert_eq!(d(&x, &x), Rational::from_integer(0.into()));
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        let m = s.median(&x, &y, &z);
        prop_assert!(s.is_between(&x, &m, &y) && s.is_between(&y, &m, &z) && s.is_between(&x, &m, &z));
        if s.is_between(&x, &z, &y) {
            prop_assert_eq!(d(&x, &z) + d(&z, &y), d(&x, &y));
        }
    }

    #[test]
    fn points_along_an_arc_lie_between(a in spot(), b in spot(), k in 0i64..=16) {
        let s = wazewski();
        let (x, y) = (point(s, a), point(s, b));
        let t = s.path_distance(&x, &y) * q(k, 16);
        let z = s.point_along(&x, &y, &t);
        prop_assert!(s.is_between(&x, &z, &y));
        prop_assert_eq!(s.path_distance(&x, &z), t);
    }

    #[test]
    fn truncated_stage_files_name_a_line(cut in 0usize..100_000) {
        let text = write_stage(twocolor());
        let cut = cut % text.len();
        let head = &text[..cut];
        match read_stage(head) {
            Ok(_) | Err(FormatError::MissingHeader) => {}
            Err(FormatError::Bad { line, .. }) => {
                prop_assert!(line >= 1 && line <= head.lines().count(), "line {line} of {}", head.lines().count());
            }
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn wazewski_stages_are_sound_and_round_trip(three in any::<bool>(), depth in 0u32..4, width in 1u32..3) {
        let orders = if three { vec![Order::Finite(3)] } else { vec![Order::Finite(3), Order::Finite(4)] };
        let s = build_wazewski_stage(&orders, depth, width).unwrap();
        prop_assert_eq!(invariant_violations(&s), Vec::<String>::new());
        prop_assert_eq!(s.edges().len() + 1, s.vertices().len());
        prop_assert_eq!(read_stage(&write_stage(&s)).unwrap(), s);
    }

    #[test]
    fn collapse_derivatives_stay_in_the_boundary(a in spot(), b in spot(), e in eps()) {
        let s = wazewski();
        let (x, y) = (point(s, a), point(s, b));
        let maps: Vec<_> = [collapse_map(s, &x, None), collapse_map(s, &x, Some(&y))].into_iter().filter_map(Result::ok).collect();
        let cover = build_convex_cover(s, &e).unwrap();
        for m in &maps {
            let d = tree_eps_derivative(s, m, &e).unwrap();
            let boundary = m.boundary_points();
            prop_assert!(d.iter().all(|p| boundary.contains(p)));
            prop_assert!(d.len() <= cover.boundary_total());
        }
        for check in verify_beta_le_2(s, &maps, &[e]) {
            prop_assert!(check.passed(), "{check:?}");
        }
    }

    #[test]
    fn smaller_eps_gives_larger_derivative(a in spot(), b in spot(), e1 in eps(), e2 in eps()) {
        let s = wazewski();
        let (x, y) = (point(s, a), point(s, b));
        prop_assume!(x != y);
        let m = collapse_map(s, &x, Some(&y)).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let small = tree_eps_derivative(s, &m, &hi).unwrap();
        let large = tree_eps_derivative(s, &m, &lo).unwrap();
        prop_assert!(small.iter().all(|p| large.contains(p)));
    }

    #[test]
    fn pab_witnesses_meet_the_bound(i in 0usize..1000, j in 0usize..1000, extra in prop::collection::vec(spot(), 1..3), e in (1u32..3).prop_map(|k| q(1, 1 << k))) {
        let s = wazewski();
        let leaves = s.leaves();
        let (a, b) = (GeometricPoint::Vertex(leaves[i % leaves.len()]), GeometricPoint::Vertex(leaves[j % leaves.len()]));
        prop_assume!(a != b);
        let mut sample: Vec<GeometricPoint> = extra.iter().map(|&p| point(s, p)).collect();
        sample.push(b.clone());
        // Draws beyond the stage's resolution are reported as errors, not approximated.
        let Ok(h) = pab_approx(s, &a, &b, &sample, &e) else { return Ok(()); };
        prop_assert_eq!(h.apply(s, &a), Some(a.clone()));
        prop_assert_eq!(h.apply(s, &b), Some(b.clone()));
        let inv = h.inverse(s);
        for x in &sample {
            let hx = h.apply(s, x).unwrap();
            if x != &b {
                prop_assert!(s.path_distance(&hx, &a) < e, "{x} -> {hx}");
            }
            prop_assert_eq!(inv.apply(s, &hx), Some(x.clone()));
            prop_assert_eq!(s.point_type(&hx), s.point_type(x));
        }
        let audit = betweenness_preserved(s, &h, 1000, 5);
        prop_assert!(audit.preserved(), "{audit:?}");
    }

    #[test]
    fn stabilizer_orbits_keep_their_side(pick in 0usize..1000, k in 1i64..16, red in any::<bool>(), seed in any::<u64>()) {
        let s = twocolor();
        let pairs = switching_pairs();
        let (e, f, switch, red_len) = &pairs[pick % pairs.len()];
        let x = if red {
            s.point_along(switch, f, &(red_len * q(k, 16)))
        } else {
            s.point_along(e, switch, &(s.path_distance(e, switch) * q(k, 16)))
        };
        let p = stab_orbit_probe(s, e, f, &x, 3, 3, seed).unwrap();
        prop_assert_eq!(p.start_side, if red { Side::Red } else { Side::Green });
        prop_assert!(p.certified(), "{p:?}");
        for g in &p.generators {
            prop_assert_eq!(g.apply(s, switch), Some(switch.clone()));
            prop_assert_ne!(s.point_type(switch), PointType::Endpoint);
        }
    }
}

#[test]
fn twocolor_stages_round_trip() {
    let tower = build_twocolor_tower(3, 2, 1).unwrap();
    for (prev, next) in tower.iter().zip(&tower[1..]) {
        assert_eq!(bonding_violations(prev, next), Vec::<String>::new());
    }
    for s in &tower {
        assert_eq!(invariant_violations(s), Vec::<String>::new());
        let text = write_stage(s);
        let back = read_stage(&text).unwrap();
        assert_eq!(&back, s);
        assert_eq!(write_stage(&back), text);
    }
}

#[test]
fn damaged_stage_lines_are_named() {
    let text = write_stage(twocolor());
    let lines: Vec<&str> = text.lines().collect();
    let edge = lines.iter().position(|l| l.starts_with("edge")).unwrap();
    let mut broken = lines.clone();
    broken[edge] = "edge 0";
    let err = read_stage(&broken.join("\n")).unwrap_err();
    assert_eq!(err.to_string(), format!("line {}: edge needs two endpoints", edge + 1));

    let short = lines[..lines.len() - 1].join("\n");
    let err = read_stage(&short).unwrap_err();
    assert!(err.to_string().starts_with(&format!("line {}: ", lines.len() - 1)), "{err}");
}
