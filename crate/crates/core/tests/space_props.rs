use proptest::prelude::*;
use proptest::sample::subsequence;
use tamedyn::betarank::{eps_grid, DerivativeSet, FlipSystem, SystemFunction, SystemPoint};
use tamedyn::cbspace::Cone;
use tamedyn::rational::Rational;
use tamedyn::{build_space, BaseSubset, CBSpace, Ordinal, PointAddress};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Successor ordinals below `w^2 * 3`.
fn successor() -> impl Strategy<Value = Ordinal> {
    (0u64..3, 0u64..4, 0u64..5).prop_map(|(c2, c1, c0)| {
        Ordinal::from_terms([(Ordinal::from(2), c2), (Ordinal::one(), c1), (Ordinal::zero(), c0)]).succ()
    })
}

/// Any ordinal below `w^2 * 3`.
fn threshold() -> impl Strategy<Value = Ordinal> {
    (0u64..3, 0u64..4, 0u64..5).prop_map(|(c2, c1, c0)| {
        Ordinal::from_terms([(Ordinal::from(2), c2), (Ordinal::one(), c1), (Ordinal::zero(), c0)])
    })
}

fn eps() -> impl Strategy<Value = Rational> {
    (1i64..9, 1i64..9).prop_map(|(p, q)| Rational::new(p.min(q).into(), q.into()))
}

fn points(space: &CBSpace) -> Vec<PointAddress> {
    space.enumerate_points(3, 4)
}

fn both_levels(pts: &[PointAddress]) -> Vec<SystemPoint> {
    pts.iter().flat_map(|p| [SystemPoint::new(p.clone(), 0), SystemPoint::new(p.clone(), 1)]).collect()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn built_space_has_target_rank(alpha in successor()) {
        prop_assert_eq!(build_space(&alpha).unwrap().cb_rank(), alpha);
    }

    #[test]
    fn point_rank_is_last_derivative_stage(alpha in successor()) {
        let space = build_space(&alpha).unwrap();
        let whole = BaseSubset::RankFilter(Ordinal::zero());
        for a in points(&space) {
            let r = space.point_rank(&a).unwrap();
            prop_assert!(space.contains(&space.iterate_derivative(&whole, &r), &a).unwrap());
            prop_assert!(!space.contains(&space.iterate_derivative(&whole, &r.succ()), &a).unwrap());
        }
    }

    #[test]
    fn derivative_shrinks(alpha in successor(), t in threshold(), picks in subsequence((0..40).collect::<Vec<usize>>(), 0..6)) {
        let space = build_space(&alpha).unwrap();
        let pts = points(&space);
        let finite = BaseSubset::Finite(picks.iter().filter_map(|&i| pts.get(i).cloned()).collect());
        for s in [BaseSubset::Empty, finite, BaseSubset::RankFilter(t)] {
            let d = space.cb_derivative(&s);
            for a in &pts {
                if space.contains(&d, a).unwrap() {
                    prop_assert!(space.contains(&s, a).unwrap(), "{} not in {}", a, s);
                }
            }
        }
    }

    #[test]
    fn copies_are_scaled_images(alpha in successor(), n in 0u64..4) {
        let space = build_space(&alpha).unwrap();
        let Some(desc) = CBSpace::child_descriptor(space.seed(), n) else { return Ok(()); };
        let copy = CBSpace::with_seed(desc);
        let width = |s: &CBSpace| { let (l, r) = s.interval(); r - l };
        let scale = width(&space) / width(&copy)
            * (Rational::new(1.into(), (n + 1).into()) - Rational::new(1.into(), (n + 2).into()));
        let inner = copy.enumerate_points(2, 3);
        let lift = |a: &PointAddress| PointAddress([vec![n], a.0.clone()].concat());
        for a in &inner {
            for b in &inner {
                let d = copy.distance(a, b).unwrap();
                prop_assert_eq!(space.distance(&lift(a), &lift(b)).unwrap(), d * &scale);
            }
        }
    }

    #[test]
    fn eps_derivative_is_antitone_in_eps(alpha in successor(), t in threshold(), e1 in eps(), e2 in eps()) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let sys = FlipSystem::new(build_space(&alpha).unwrap());
        let pts = both_levels(&points(sys.base()));
        let swap = SystemFunction::clopen_swap(vec![Cone { apex: PointAddress::root(), k: 1 }]).unwrap();
        for f in [SystemFunction::Identity, SystemFunction::ParityFlip, swap] {
            for a in [DerivativeSet::whole(), DerivativeSet::RankFilter(t.clone())] {
                let small = sys.eps_derivative(&f, &a, &hi).unwrap();
                let large = sys.eps_derivative(&f, &a, &lo).unwrap();
                for x in &pts {
                    if sys.contains(&small, x).unwrap() {
                        prop_assert!(sys.contains(&large, x).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn flip_derivatives_follow_the_base(alpha in successor(), e in eps(), t in threshold()) {
        let sys = FlipSystem::new(build_space(&alpha).unwrap());
        if t > alpha {
            return Ok(());
        }
        let pts = both_levels(&points(sys.base()));
        let whole = DerivativeSet::whole();
        let flip = sys.iterate_eps_derivative(&SystemFunction::ParityFlip, &whole, &e, &t).unwrap();
        let base = DerivativeSet::over(&sys.base().iterate_derivative(&BaseSubset::RankFilter(Ordinal::zero()), &t));
        for x in &pts {
            prop_assert_eq!(sys.contains(&flip, x).unwrap(), sys.contains(&base, x).unwrap());
        }
    }

    #[test]
    fn flip_rank_is_target(alpha in successor()) {
        let sys = FlipSystem::new(build_space(&alpha).unwrap());
        prop_assert_eq!(sys.beta_rank(&SystemFunction::ParityFlip), alpha);
        let grid = eps_grid();
        let ranks: Vec<Ordinal> = grid.iter().map(|e| sys.beta_rank_at_eps(&SystemFunction::ParityFlip, e).unwrap()).collect();
        // The grid is increasing, so ranks must not increase along it.
        for w in ranks.windows(2) {
            prop_assert!(w[1] <= w[0], "{ranks:?}");
        }
    }

    #[test]
    fn approximants_are_continuous_involutions(alpha in successor(), picks in subsequence((0..80).collect::<Vec<usize>>(), 1..8)) {
        let sys = FlipSystem::new(build_space(&alpha).unwrap());
        let pts = both_levels(&points(sys.base()));
        let sample: Vec<SystemPoint> = picks.iter().filter_map(|&i| pts.get(i).cloned()).collect();
        let g = sys.ellis_approximant(&sample).unwrap();
        for x in &sample {
            prop_assert_eq!(sys.apply(&g, x).unwrap(), sys.apply(&SystemFunction::ParityFlip, x).unwrap());
        }
        let mut images = Vec::new();
        for x in &pts {
            let y = sys.apply(&g, x).unwrap();
            prop_assert_eq!(&sys.apply(&g, &y).unwrap(), x);
            prop_assert_eq!(sys.oscillation(&g, x).unwrap(), Rational::from_integer(0.into()));
            images.push(y);
        }
        images.sort_by_key(|p| p.to_string());
        images.dedup();
        prop_assert_eq!(images.len(), pts.len());
    }
}
