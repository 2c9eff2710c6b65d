//! Audits of the finite first derivative of finite-image maps: the shadow
//! of `beta <= 2` for dendrites.

use crate::dendrite::{build_convex_cover, GeometricPoint, TreeStage};
use crate::rational::{int, min_q, Rational};

use super::finite_map::{relative_eps_derivative, tree_eps_derivative, FiniteImageTreeMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BetaOutcome {
    /// The map is outside the supported class.
    Rejected(String),
    Checked {
        derivative: Vec<GeometricPoint>,
        second: Vec<GeometricPoint>,
        cover_boundary: usize,
        /// `(x, y)`: at `x` the map oscillates by at least `eps/2` toward
        /// the cover boundary point `y` of the region holding `x`.
        witnesses: Vec<(GeometricPoint, GeometricPoint)>,
        failures: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaCheck {
    pub map: usize,
    pub eps: Rational,
    pub outcome: BetaOutcome,
}

impl BetaCheck {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, BetaOutcome::Checked { failures, .. } if failures.is_empty())
    }
}

/// For every map and every `eps`: the derivative lies in the map's
/// boundary, its relative derivative is empty, it is no larger than the
/// total boundary of a convex `eps` cover, and each of its points has an
/// `eps/2` oscillation direction pointing at a boundary point of its
/// cover region.
pub fn verify_beta_le_2(stage: &TreeStage, maps: &[FiniteImageTreeMap], grid: &[Rational]) -> Vec<BetaCheck> {
    let mut out = Vec::new();
    for (i, map) in maps.iter().enumerate() {
        for eps in grid {
            let outcome = match tree_eps_derivative(stage, map, eps) {
                Err(e) => BetaOutcome::Rejected(e.to_string()),
                Ok(derivative) => audit(stage, map, eps, derivative),
            };
            out.push(BetaCheck {
                map: i,
                eps: eps.clone(),
                outcome,
            });
        }
    }
    out
}

fn audit(stage: &TreeStage, map: &FiniteImageTreeMap, eps: &Rational, derivative: Vec<GeometricPoint>) -> BetaOutcome {
    let mut failures = Vec::new();
    let marks = map.boundary_points();
    if let Some(x) = derivative.iter().find(|x| !marks.contains(x)) {
        failures.push(format!("{x} is off the map's boundary"));
    }
    let second = relative_eps_derivative(stage, map, &derivative, eps);
    if !second.is_empty() {
        failures.push(format!("second derivative has {} points", second.len()));
    }
    let cover = match build_convex_cover(stage, eps) {
        Ok(c) => c,
        Err(e) => {
            return BetaOutcome::Rejected(e.to_string());
        }
    };
    let cover_boundary = cover.boundary_total();
    if derivative.len() > cover_boundary {
        failures.push(format!("{} derivative points exceed {} boundary points", derivative.len(), cover_boundary));
    }
    let half = eps / int(2);
    let fx_of = |x: &GeometricPoint| map.apply(stage, x);
    let mut witnesses = Vec::new();
    for x in &derivative {
        let sep = marks.iter().filter(|m| *m != x).map(|m| stage.path_distance(x, m)).min();
        let found = cover
            .regions
            .iter()
            .filter(|r| r.region.contains(stage, x))
            .flat_map(|r| r.boundary.iter())
            .find(|y| {
                if *y == x {
                    return false;
                }
                let mut delta = stage.path_distance(x, y) / int(2);
                if let Some(s) = &sep {
                    delta = min_q(delta, s / int(2));
                }
                let probe = stage.point_along(x, y, &delta);
                stage.path_distance(&fx_of(x), &fx_of(&probe)) >= half
            });
        match found {
            Some(y) => witnesses.push((x.clone(), y.clone())),
            None => failures.push(format!("no oscillation direction at {x}")),
        }
    }
    BetaOutcome::Checked {
        derivative,
        second,
        cover_boundary,
        witnesses,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrite::build::star;
    use crate::dynamics::finite_map::{collapse_map, Piece};
    use crate::rational::q;

    fn v(i: usize) -> GeometricPoint {
        GeometricPoint::Vertex(i)
    }

    #[test]
    fn collapses_pass() {
        let s = star(3, int(1));
        let maps = vec![collapse_map(&s, &v(1), Some(&v(2))).unwrap(), collapse_map(&s, &v(3), None).unwrap()];
        let checks = verify_beta_le_2(&s, &maps, &[q(1, 2), int(1), int(2), int(3)]);
        assert!(checks.iter().all(BetaCheck::passed), "{checks:?}");
        match &checks[0].outcome {
            BetaOutcome::Checked { derivative, .. } => assert_eq!(derivative, &vec![v(2)]),
            other => panic!("{other:?}"),
        }
        match &checks[3].outcome {
            BetaOutcome::Checked { derivative, .. } => assert!(derivative.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_table_is_rejected() {
        let s = star(3, int(1));
        let id = FiniteImageTreeMap {
            pieces: (0..4).map(|w| (Piece::Point(v(w)), v(w))).collect(),
        };
        let checks = verify_beta_le_2(&s, &[id], &[int(1)]);
        assert!(matches!(checks[0].outcome, BetaOutcome::Rejected(_)));
    }
}
