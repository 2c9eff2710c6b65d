//! Maps with finitely many values on a stage, exact oscillation, and
//! betweenness audits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dendrite::{GeometricPoint, TreeStage};
use crate::rational::{int, min_q, zero, Rational};

use super::homeo::{Outside, TreeHomeo};
use super::DynError;

/// A region of a finite-image map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Point(GeometricPoint),
    /// Open component of the stage minus `at` containing `toward`.
    Component { at: GeometricPoint, toward: GeometricPoint },
    /// Everything not covered by the other pieces.
    Rest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteImageTreeMap {
    pub pieces: Vec<(Piece, GeometricPoint)>,
}

fn in_open_component(stage: &TreeStage, at: &GeometricPoint, toward: &GeometricPoint, x: &GeometricPoint) -> bool {
    x != at && !stage.is_between(toward, at, x)
}

impl FiniteImageTreeMap {
    /// Pieces must be disjoint and end with a single `Rest`, so the regions
    /// cover the stage with finitely many boundary points.
    pub fn check_class(&self, stage: &TreeStage) -> Result<(), DynError> {
        let rests = self.pieces.iter().filter(|(p, _)| *p == Piece::Rest).count();
        if rests != 1 || self.pieces.last().map(|(p, _)| p) != Some(&Piece::Rest) {
            return Err(DynError::Unsupported("regions must end with one rest region covering the stage".into()));
        }
        for (i, (p, val)) in self.pieces.iter().enumerate() {
            stage.check_point(val)?;
            match p {
                Piece::Point(x) => stage.check_point(x)?,
                Piece::Component { at, toward } => {
                    stage.check_point(at)?;
                    stage.check_point(toward)?;
                    if at == toward {
                        return Err(DynError::Unsupported(format!("empty component at {at}")));
                    }
                }
                Piece::Rest => {}
            }
            for (q, _) in &self.pieces[i + 1..] {
                if !disjoint(stage, p, q) {
                    return Err(DynError::Unsupported("overlapping regions".into()));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, stage: &TreeStage, x: &GeometricPoint) -> GeometricPoint {
        for (p, val) in &self.pieces {
            let hit = match p {
                Piece::Point(y) => x == y,
                Piece::Component { at, toward } => in_open_component(stage, at, toward, x),
                Piece::Rest => true,
            };
            if hit {
                return val.clone();
            }
        }
        unreachable!("a rest region is required")
    }

    /// Points where regions meet.
    pub fn boundary_points(&self) -> Vec<GeometricPoint> {
        let mut out: Vec<GeometricPoint> = self
            .pieces
            .iter()
            .filter_map(|(p, _)| match p {
                Piece::Point(x) => Some(x.clone()),
                Piece::Component { at, .. } => Some(at.clone()),
                Piece::Rest => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Oscillation at `x`: the diameter of the values at `x` and just off
    /// `x` in every direction.
    pub fn oscillation(&self, stage: &TreeStage, x: &GeometricPoint) -> Rational {
        let mut vals = vec![self.apply(stage, x)];
        for probe in probes(stage, x, &self.boundary_points()) {
            vals.push(self.apply(stage, &probe));
        }
        diameter_of(stage, &vals)
    }
}

fn disjoint(stage: &TreeStage, p: &Piece, q: &Piece) -> bool {
    use Piece::*;
    match (p, q) {
        (Rest, _) | (_, Rest) => true,
        (Point(x), Point(y)) => x != y,
        (Point(x), Component { at, toward }) | (Component { at, toward }, Point(x)) => {
            !in_open_component(stage, at, toward, x)
        }
        (Component { at: a1, toward: t1 }, Component { at: a2, toward: t2 }) => {
            if a1 == a2 {
                !in_open_component(stage, a1, t1, t2)
            } else {
                !in_open_component(stage, a1, t1, a2) && !in_open_component(stage, a2, t2, a1)
            }
        }
    }
}

fn diameter_of(stage: &TreeStage, pts: &[GeometricPoint]) -> Rational {
    let mut best = zero();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let d = stage.path_distance(a, b);
            if d > best {
                best = d;
            }
        }
    }
    best
}

/// One point just off `x` in each direction, closer than any other point
/// of `marks`.
fn probes(stage: &TreeStage, x: &GeometricPoint, marks: &[GeometricPoint]) -> Vec<GeometricPoint> {
    let sep = marks
        .iter()
        .filter(|m| *m != x)
        .map(|m| stage.path_distance(x, m))
        .min();
    stage
        .directions_at(x)
        .into_iter()
        .map(|d| {
            let to = GeometricPoint::Vertex(d.toward);
            let mut delta = stage.path_distance(x, &to) / int(2);
            if let Some(s) = &sep {
                delta = min_q(delta, s / int(2));
            }
            stage.point_along(x, &to, &delta)
        })
        .collect()
}

/// `p_{a,b}` (`b` to itself, everything else to `a`) or the constant `p_a`.
pub fn collapse_map(stage: &TreeStage, a: &GeometricPoint, b: Option<&GeometricPoint>) -> Result<FiniteImageTreeMap, DynError> {
    stage.check_point(a)?;
    let pieces = match b {
        Some(b) => {
            stage.check_point(b)?;
            if a == b {
                return Err(crate::dendrite::TreeError::SamePoint(a.to_string()).into());
            }
            vec![(Piece::Point(b.clone()), b.clone()), (Piece::Rest, a.clone())]
        }
        None => vec![(Piece::Rest, a.clone())],
    };
    Ok(FiniteImageTreeMap { pieces })
}

/// Points of oscillation at least `eps`. Off the boundary the map is
/// locally constant, so only boundary points are candidates.
pub fn tree_eps_derivative(
    stage: &TreeStage,
    map: &FiniteImageTreeMap,
    eps: &Rational,
) -> Result<Vec<GeometricPoint>, DynError> {
    if *eps <= zero() {
        return Err(crate::dendrite::TreeError::NonPositive(eps.clone()).into());
    }
    map.check_class(stage)?;
    Ok(map
        .boundary_points()
        .into_iter()
        .filter(|x| map.oscillation(stage, x) >= *eps)
        .collect())
}

/// Points of the finite set `set` where the oscillation of `map` relative
/// to `set` is at least `eps`. Each point is isolated in `set`, so the
/// relevant values are those at the point alone.
pub fn relative_eps_derivative(
    stage: &TreeStage,
    map: &FiniteImageTreeMap,
    set: &[GeometricPoint],
    eps: &Rational,
) -> Vec<GeometricPoint> {
    set.iter()
        .filter(|x| {
            let sep = set.iter().filter(|y| y != x).map(|y| stage.path_distance(x, y)).min();
            let near: Vec<GeometricPoint> = set
                .iter()
                .filter(|y| sep.as_ref().map_or(*y == *x, |s| stage.path_distance(x, y) * int(2) < *s))
                .map(|y| map.apply(stage, y))
                .collect();
            diameter_of(stage, &near) >= *eps
        })
        .cloned()
        .collect()
}

/// Something that can be evaluated at stage points.
pub trait PointMap {
    /// `None` where the map is not defined.
    fn eval(&self, stage: &TreeStage, p: &GeometricPoint) -> Option<GeometricPoint>;
    /// A random point of the domain.
    fn sample_point(&self, stage: &TreeStage, rng: &mut ChaCha8Rng) -> GeometricPoint;
    /// Triples `(x, z, y)` with `z` on `[x, y]` worth testing first.
    fn probe_triples(&self, stage: &TreeStage) -> Vec<[GeometricPoint; 3]>;
}

pub(crate) fn random_point(stage: &TreeStage, rng: &mut ChaCha8Rng) -> GeometricPoint {
    let e = rng.gen_range(0..stage.edges().len().max(1));
    if stage.edges().is_empty() {
        return GeometricPoint::Vertex(0);
    }
    stage.point(e, Rational::new(rng.gen_range(0..=64).into(), 64.into()))
}

impl PointMap for FiniteImageTreeMap {
    fn eval(&self, stage: &TreeStage, p: &GeometricPoint) -> Option<GeometricPoint> {
        Some(self.apply(stage, p))
    }

    fn sample_point(&self, stage: &TreeStage, rng: &mut ChaCha8Rng) -> GeometricPoint {
        random_point(stage, rng)
    }

    fn probe_triples(&self, stage: &TreeStage) -> Vec<[GeometricPoint; 3]> {
        let marks = self.boundary_points();
        let mut out = Vec::new();
        for b in &marks {
            let ps = probes(stage, b, &marks);
            for (i, x) in ps.iter().enumerate() {
                for y in &ps[i + 1..] {
                    out.push([x.clone(), b.clone(), y.clone()]);
                }
            }
        }
        out
    }
}

impl PointMap for TreeHomeo {
    fn eval(&self, stage: &TreeStage, p: &GeometricPoint) -> Option<GeometricPoint> {
        self.apply(stage, p)
    }

    fn sample_point(&self, stage: &TreeStage, rng: &mut ChaCha8Rng) -> GeometricPoint {
        if self.links().is_empty() || (self.outside() == Outside::Identity && rng.gen_bool(0.25)) {
            if self.nodes().len() == 1 && self.outside() == Outside::Undefined {
                return self.nodes()[0].0.clone();
            }
            return random_point(stage, rng);
        }
        let (k, j) = self.links()[rng.gen_range(0..self.links().len())];
        let (a, b) = (&self.nodes()[k].0, &self.nodes()[j].0);
        let s = stage.path_distance(a, b) * Rational::new(rng.gen_range(0..=64).into(), 64.into());
        stage.point_along(a, b, &s)
    }

    fn probe_triples(&self, stage: &TreeStage) -> Vec<[GeometricPoint; 3]> {
        let src: Vec<&GeometricPoint> = self.nodes().iter().map(|(s, _)| s).take(12).collect();
        let mut out = Vec::new();
        for x in &src {
            for y in &src {
                for z in &src {
                    if x < y && z != x && z != y && stage.is_between(x, z, y) {
                        out.push([(*x).clone(), (*z).clone(), (*y).clone()]);
                    }
                }
            }
        }
        out
    }
}

/// Outcome of a betweenness audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetweennessAudit {
    pub tested: usize,
    /// `(x, z, y)` with `z` on `[x, y]` but `f(z)` off `[f(x), f(y)]`.
    pub counterexample: Option<[GeometricPoint; 3]>,
}

impl BetweennessAudit {
    pub fn preserved(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks `f(z) ∈ [f(x), f(y)]` on the map's probe triples and then on
/// `trials` random triples with `z ∈ [x, y]`.
pub fn betweenness_preserved<M: PointMap>(stage: &TreeStage, map: &M, trials: usize, seed: u64) -> BetweennessAudit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tested = 0;
    let check = |t: &[GeometricPoint; 3]| -> bool {
        match (map.eval(stage, &t[0]), map.eval(stage, &t[1]), map.eval(stage, &t[2])) {
            (Some(fx), Some(fz), Some(fy)) => stage.is_between(&fx, &fz, &fy),
            _ => true,
        }
    };
    for t in map.probe_triples(stage) {
        tested += 1;
        if !check(&t) {
            return BetweennessAudit {
                tested,
                counterexample: Some(t),
            };
        }
    }
    for _ in 0..trials {
        let x = map.sample_point(stage, &mut rng);
        let y = map.sample_point(stage, &mut rng);
        let s = stage.path_distance(&x, &y) * Rational::new(rng.gen_range(0..=64).into(), 64.into());
        let z = stage.point_along(&x, &y, &s);
        let t = [x, z, y];
        tested += 1;
        if !check(&t) {
            return BetweennessAudit {
                tested,
                counterexample: Some(t),
            };
        }
    }
    BetweennessAudit {
        tested,
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrite::build::star;
    use crate::rational::q;

    fn v(i: usize) -> GeometricPoint {
        GeometricPoint::Vertex(i)
    }

    #[test]
    fn collapse_values_and_idempotence() {
        let s = star(3, int(1));
        let p = collapse_map(&s, &v(1), Some(&v(2))).unwrap();
        assert_eq!(p.apply(&s, &v(2)), v(2));
        assert_eq!(p.apply(&s, &v(3)), v(1));
        for w in 0..4 {
            let once = p.apply(&s, &v(w));
            assert_eq!(p.apply(&s, &once), once);
        }
        let c = collapse_map(&s, &v(1), None).unwrap();
        assert_eq!(c.apply(&s, &v(2)), v(1));
        assert!(collapse_map(&s, &v(1), Some(&v(1))).is_err());
    }

    #[test]
    fn derivative_of_collapse() {
        let s = star(3, int(1));
        let p = collapse_map(&s, &v(1), Some(&v(2))).unwrap();
        assert_eq!(tree_eps_derivative(&s, &p, &int(2)).unwrap(), vec![v(2)]);
        assert_eq!(tree_eps_derivative(&s, &p, &q(1, 3)).unwrap(), vec![v(2)]);
        assert!(tree_eps_derivative(&s, &p, &q(5, 2)).unwrap().is_empty());
        let c = collapse_map(&s, &v(1), None).unwrap();
        assert!(tree_eps_derivative(&s, &c, &q(1, 100)).unwrap().is_empty());
        assert!(relative_eps_derivative(&s, &p, &[v(2)], &q(1, 100)).is_empty());
    }

    #[test]
    fn point_table_is_rejected() {
        let s = star(3, int(1));
        let id = FiniteImageTreeMap {
            pieces: (0..4).map(|w| (Piece::Point(v(w)), v(w))).collect(),
        };
        assert!(matches!(id.check_class(&s), Err(DynError::Unsupported(_))));
    }

    #[test]
    fn betweenness_of_collapses() {
        let s = star(3, int(1));
        let leaf = collapse_map(&s, &v(1), Some(&v(2))).unwrap();
        assert!(betweenness_preserved(&s, &leaf, 300, 1).preserved());
        let m = s.point(2, q(1, 2));
        let mid = collapse_map(&s, &v(1), Some(&m)).unwrap();
        let audit = betweenness_preserved(&s, &mid, 300, 1);
        let [x, z, y] = audit.counterexample.expect("interior collapse breaks betweenness");
        assert_eq!(z, m);
        assert!(s.is_between(&x, &z, &y));
    }
}
