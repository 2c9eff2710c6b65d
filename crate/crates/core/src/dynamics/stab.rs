//! Orbits under the stabilizer of a green and a red endpoint, on an arc
//! between them that changes color once.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dendrite::{Color, EndpointClass, GeometricPoint, TreeError, TreeStage};
use crate::rational::{int, Rational};

use super::homeo::TreeHomeo;
use super::partial::{leaf_class, PartialHomeo};
use super::DynError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Green,
    Switch,
    Red,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitProbe {
    /// Midpoint between the last green and the first red point of `[e, f]`.
    pub switch: GeometricPoint,
    /// Length of `[switch, f]`.
    pub red_length: Rational,
    pub start_side: Side,
    pub generators: Vec<TreeHomeo>,
    /// Orbit of `x` under words of bounded length, sorted.
    pub orbit: Vec<GeometricPoint>,
    pub sides: Vec<Side>,
    /// Least distance from an orbit point to `f`.
    pub min_distance_to_f: Rational,
}

impl OrbitProbe {
    /// Every orbit point stays on the side of `x`; from the green side the
    /// orbit keeps at least the red length away from `f`.
    pub fn certified(&self) -> bool {
        let same = self.sides.iter().all(|s| *s == self.start_side);
        match self.start_side {
            Side::Green => same && self.min_distance_to_f >= self.red_length,
            _ => same,
        }
    }
}

fn side_of(stage: &TreeStage, e: &GeometricPoint, s: &GeometricPoint, p: &GeometricPoint) -> Side {
    if p == s {
        Side::Switch
    } else if stage.is_between(e, p, s) {
        Side::Green
    } else {
        Side::Red
    }
}

/// Value at `t` of the increasing piecewise-linear map through `knots`.
fn interpolate(knots: &[(Rational, Rational)], t: &Rational) -> Rational {
    let i = knots.partition_point(|k| k.0 <= *t);
    if i == 0 || i == knots.len() {
        let k = &knots[i.saturating_sub(1)];
        debug_assert!(k.0 == *t, "off the arc");
        return k.1.clone();
    }
    let ((s0, t0), (s1, t1)) = (&knots[i - 1], &knots[i]);
    t0 + (t1 - t0) * (t - s0) / (s1 - s0)
}

/// Two points of `pool` of equal type, the first uniform.
fn random_pair(stage: &TreeStage, pool: &[GeometricPoint], rng: &mut ChaCha8Rng) -> Option<(GeometricPoint, GeometricPoint)> {
    if pool.is_empty() {
        return None;
    }
    let a = pool[rng.gen_range(0..pool.len())].clone();
    let like: Vec<&GeometricPoint> = pool.iter().filter(|p| stage.point_type(p) == stage.point_type(&a)).collect();
    let b = like[rng.gen_range(0..like.len())].clone();
    Some((a, b))
}

/// Two points inside one edge of the arc lying wholly on `side`, at
/// distinct eighths of its length.
fn random_slide(
    stage: &TreeStage,
    edges: &[(GeometricPoint, GeometricPoint)],
    side: Side,
    switch: &GeometricPoint,
    e: &GeometricPoint,
    rng: &mut ChaCha8Rng,
) -> Option<(GeometricPoint, GeometricPoint)> {
    let inside: Vec<&(GeometricPoint, GeometricPoint)> = edges
        .iter()
        .filter(|(u, w)| side_of(stage, e, switch, u) == side && side_of(stage, e, switch, w) == side)
        .collect();
    if inside.is_empty() {
        return None;
    }
    let (u, w) = inside[rng.gen_range(0..inside.len())];
    let len = stage.path_distance(u, w);
    let i = rng.gen_range(1..8i64);
    let j = (i + rng.gen_range(1..7i64) - 1) % 7 + 1;
    let at = |k: i64| stage.point_along(u, w, &(len.clone() * Rational::new(k.into(), 8.into())));
    Some((at(i), at(j)))
}

/// Random stabilizer elements fix `e`, the switch point and `f`, and move
/// one green point of the arc to another green point and one red point to
/// another red point. The orbit of `x` is explored over all words of
/// length at most `steps` in the generators and their inverses.
pub fn stab_orbit_probe(
    stage: &TreeStage,
    e: &GeometricPoint,
    f: &GeometricPoint,
    x: &GeometricPoint,
    generators: usize,
    steps: usize,
    seed: u64,
) -> Result<OrbitProbe, DynError> {
    if !stage.mode.is_twocolor() {
        return Err(TreeError::WrongMode("stabilizer probes need a two-color stage".into()).into());
    }
    let leaf_of = |p: &GeometricPoint| -> Result<usize, DynError> {
        stage.check_point(p)?;
        match p {
            GeometricPoint::Vertex(v) if stage.degree(*v) == 1 => Ok(*v),
            _ => Err(DynError::Incompatible(format!("{p} is not an endpoint"))),
        }
    };
    let (le, lf) = (leaf_of(e)?, leaf_of(f)?);
    if leaf_class(stage, le)? != EndpointClass::GreenSoFar || leaf_class(stage, lf)? != EndpointClass::RedSoFar {
        return Err(DynError::Incompatible("pins must be a green and a red endpoint".into()));
    }
    stage.check_point(x)?;
    if !stage.is_between(e, x, f) {
        return Err(DynError::Incompatible(format!("{x} is off [e, f]")));
    }
    // The free arcs carrying e and f are unresolved at this depth, so the
    // color pattern is read between their attachment marks.
    let mark = |l: usize| stage.vertex(l).parent.expect("classified leaves hang from a mark");
    let colored: Vec<(usize, Color)> = stage
        .vertex_path(mark(le), mark(lf))
        .into_iter()
        .map(|v| (v, stage.vertex(v).color))
        .filter(|c| c.1 != Color::Uncolored)
        .collect();
    let switches = colored.windows(2).filter(|w| w[0].1 != w[1].1).count();
    if switches != 1 || colored.first().map(|c| c.1) != Some(Color::Green) {
        return Err(DynError::Incompatible("[e, f] must change from green to red exactly once".into()));
    }
    let cut = colored.iter().position(|c| c.1 == Color::Red).expect("one switch");
    let (g_last, r_first) = (GeometricPoint::Vertex(colored[cut - 1].0), GeometricPoint::Vertex(colored[cut].0));
    let switch = stage.point_along(&g_last, &r_first, &(stage.path_distance(&g_last, &r_first) / int(2)));
    let on_arc = |c: Color, side: Side| -> Vec<GeometricPoint> {
        stage
            .arc_between(e, f)
            .points
            .into_iter()
            .filter(|p| matches!(p, GeometricPoint::Vertex(v) if stage.vertex(*v).color == c))
            .filter(|p| side_of(stage, e, &switch, p) == side)
            .collect()
    };
    let (greens, reds) = (on_arc(Color::Green, Side::Green), on_arc(Color::Red, Side::Red));
    let vertices: Vec<GeometricPoint> = stage
        .arc_between(e, f)
        .points
        .into_iter()
        .filter(|p| matches!(p, GeometricPoint::Vertex(_)))
        .collect();
    let edges: Vec<(GeometricPoint, GeometricPoint)> = vertices.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = Vec::new();
    for _ in 0..generators {
        let mut ph = PartialHomeo::pinned(stage, [(e.clone(), e.clone()), (f.clone(), f.clone())])?;
        ph.insert(stage, switch.clone(), switch.clone())?;
        for pool in [&greens, &reds] {
            if let Some((a, b)) = random_pair(stage, pool, &mut rng) {
                ph.insert(stage, a, b)?;
            }
        }
        for side in [Side::Green, Side::Red] {
            if let Some((a, b)) = random_slide(stage, &edges, side, &switch, e, &mut rng) {
                // A slide crossing a moved node is not order preserving; skip it.
                let _ = ph.insert(stage, a, b);
            }
        }
        gens.push(ph.to_homeo(stage)?);
    }
    // Every generator preserves [e, f], so orbits are computed on arc-length
    // coordinates measured from e.
    let coord = |p: &GeometricPoint| stage.path_distance(e, p);
    let moves: Vec<Vec<(Rational, Rational)>> = gens
        .iter()
        .flat_map(|g| {
            let mut fwd: Vec<(Rational, Rational)> = g.nodes().iter().map(|(s, t)| (coord(s), coord(t))).collect();
            fwd.sort();
            let mut back: Vec<(Rational, Rational)> = fwd.iter().map(|(s, t)| (t.clone(), s.clone())).collect();
            back.sort();
            [fwd, back]
        })
        .collect();
    let x0 = coord(x);
    let mut orbit: BTreeSet<Rational> = BTreeSet::from([x0.clone()]);
    let mut frontier = vec![x0];
    for _ in 0..steps {
        let mut next = Vec::new();
        for t in &frontier {
            for m in &moves {
                let u = interpolate(m, t);
                if orbit.insert(u.clone()) {
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    let length = coord(f);
    let cut = coord(&switch);
    let side = |t: &Rational| match t.cmp(&cut) {
        Ordering::Less => Side::Green,
        Ordering::Equal => Side::Switch,
        Ordering::Greater => Side::Red,
    };
    let sides = orbit.iter().map(side).collect();
    let min_distance_to_f = &length - orbit.iter().max().expect("nonempty orbit");
    let orbit = orbit.iter().map(|t| stage.point_along(e, f, t)).collect();
    Ok(OrbitProbe {
        red_length: stage.path_distance(&switch, f),
        start_side: side(&coord(x)),
        switch,
        generators: gens,
        orbit,
        sides,
        min_distance_to_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrite::build::{build_twocolor_stage, star};

    fn v(i: usize) -> GeometricPoint {
        GeometricPoint::Vertex(i)
    }

    fn leaves_of(stage: &TreeStage, class: EndpointClass) -> Vec<usize> {
        stage.leaves().into_iter().filter(|&l| leaf_class(stage, l).unwrap() == class).collect()
    }

    /// First green/red pair accepted by the probe.
    fn pair(stage: &TreeStage) -> (GeometricPoint, GeometricPoint, OrbitProbe) {
        for e in leaves_of(stage, EndpointClass::GreenSoFar) {
            for f in leaves_of(stage, EndpointClass::RedSoFar) {
                if let Ok(p) = stab_orbit_probe(stage, &v(e), &v(f), &v(e), 1, 0, 0) {
                    return (v(e), v(f), p);
                }
            }
        }
        panic!("no green/red pair with one switch");
    }

    #[test]
    fn switch_point_is_fixed() {
        let s = build_twocolor_stage(2, 1).unwrap();
        let (e, f, p) = pair(&s);
        let at = stab_orbit_probe(&s, &e, &f, &p.switch, 5, 4, 7).unwrap();
        assert_eq!(at.orbit, vec![p.switch.clone()]);
        assert_eq!(at.start_side, Side::Switch);
        assert_eq!(at.red_length, s.path_distance(&p.switch, &f));
    }

    #[test]
    fn green_orbit_stays_away_from_f() {
        let s = build_twocolor_stage(2, 1).unwrap();
        let (e, f, p) = pair(&s);
        let x = s.point_along(&e, &p.switch, &(s.path_distance(&e, &p.switch) / int(2)));
        let probe = stab_orbit_probe(&s, &e, &f, &x, 5, 4, 3).unwrap();
        assert_eq!(probe.start_side, Side::Green);
        assert!(probe.certified(), "{probe:?}");
        assert!(probe.min_distance_to_f >= probe.red_length);
        assert!(probe.orbit.len() > 1, "{:?}", probe.generators.iter().map(|g| g.nodes().to_vec()).collect::<Vec<_>>());
        for g in &probe.generators {
            assert_eq!(g.apply(&s, &e), Some(e.clone()));
            assert_eq!(g.apply(&s, &f), Some(f.clone()));
        }
    }

    #[test]
    fn red_orbit_stays_red() {
        let s = build_twocolor_stage(2, 1).unwrap();
        let (e, f, p) = pair(&s);
        let x = s.point_along(&p.switch, &f, &(p.red_length.clone() / int(2)));
        let probe = stab_orbit_probe(&s, &e, &f, &x, 5, 4, 11).unwrap();
        assert_eq!(probe.start_side, Side::Red);
        assert!(probe.certified());
    }

    #[test]
    fn rejects_alternating_pins_and_wrong_mode() {
        let s = build_twocolor_stage(3, 1).unwrap();
        let alt = leaves_of(&s, EndpointClass::Alternating);
        let (a, b) = (v(alt[0]), v(alt[1]));
        assert!(matches!(stab_orbit_probe(&s, &a, &b, &a, 5, 4, 0), Err(DynError::Incompatible(_))));
        let t = star(3, int(1));
        assert!(stab_orbit_probe(&t, &v(1), &v(2), &v(1), 5, 4, 0).is_err());
    }
}
