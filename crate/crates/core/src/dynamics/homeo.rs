//! Homeomorphisms between subtrees of a stage, given by a skeleton: finitely
//! many node pairs `src -> tgt` closed under medians, extended linearly in
//! arc length along the links between adjacent nodes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::dendrite::{GeometricPoint, Region, TreeStage};
use crate::rational::{one, zero, Rational};
use crate::textio::{bad, body_lines, FormatError};

use super::DynError;

/// What the map does off the source hull of its nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outside {
    Identity,
    Undefined,
}

impl Outside {
    fn as_str(self) -> &'static str {
        match self {
            Outside::Identity => "identity",
            Outside::Undefined => "undefined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeHomeo {
    nodes: Vec<(GeometricPoint, GeometricPoint)>,
    /// `(child, parent)` node indices; node 0 is the root.
    links: Vec<(usize, usize)>,
    outside: Outside,
}

/// Vertices of `r` where at least three of its pieces meet.
pub(crate) fn branch_vertices(stage: &TreeStage, r: &Region) -> Vec<usize> {
    r.vertices()
        .iter()
        .copied()
        .filter(|&v| {
            let deg = stage
                .neighbors(v)
                .iter()
                .filter(|&&(_, e)| {
                    let edge = stage.edge(e);
                    r.pieces().get(&e).is_some_and(|(lo, hi)| {
                        if v == edge.u {
                            *lo == zero() && *hi > zero()
                        } else {
                            *hi == one() && *lo < one()
                        }
                    })
                })
                .count();
            deg >= 3
        })
        .collect()
}

/// For each node other than 0, the nearest node on its arc back to node 0.
fn link_tree(stage: &TreeStage, pts: &[GeometricPoint]) -> Vec<(usize, usize)> {
    let root = &pts[0];
    (1..pts.len())
        .map(|k| {
            let parent = (0..pts.len())
                .filter(|&j| j != k && stage.is_between(root, &pts[j], &pts[k]))
                .max_by(|&a, &b| stage.path_distance(root, &pts[a]).cmp(&stage.path_distance(root, &pts[b])))
                .expect("root lies on every arc from the root");
            (k, parent)
        })
        .collect()
}

impl TreeHomeo {
    pub fn identity() -> Self {
        TreeHomeo {
            nodes: Vec::new(),
            links: Vec::new(),
            outside: Outside::Identity,
        }
    }

    /// Validates that the skeleton extends to a homeomorphism between the
    /// two hulls preserving the type of every node, and, for
    /// `Outside::Identity`, that the hulls agree with fixed boundary.
    pub fn new(
        stage: &TreeStage,
        nodes: Vec<(GeometricPoint, GeometricPoint)>,
        outside: Outside,
    ) -> Result<Self, DynError> {
        if nodes.is_empty() {
            return match outside {
                Outside::Identity => Ok(TreeHomeo::identity()),
                Outside::Undefined => Err(DynError::Invalid("empty skeleton".into())),
            };
        }
        for (s, t) in &nodes {
            stage.check_point(s)?;
            stage.check_point(t)?;
            if stage.point_type(s) != stage.point_type(t) {
                return Err(DynError::Invalid(format!("{s} -> {t} changes the point type")));
            }
        }
        let src: Vec<GeometricPoint> = nodes.iter().map(|(s, _)| s.clone()).collect();
        let tgt: Vec<GeometricPoint> = nodes.iter().map(|(_, t)| t.clone()).collect();
        if src.iter().collect::<BTreeSet<_>>().len() != src.len() || tgt.iter().collect::<BTreeSet<_>>().len() != tgt.len() {
            return Err(DynError::Invalid("repeated node".into()));
        }
        let src_hull = stage.hull(&src);
        let tgt_hull = stage.hull(&tgt);
        for side in [(&src, &src_hull, "source"), (&tgt, &tgt_hull, "target")] {
            for v in branch_vertices(stage, side.1) {
                if !side.0.contains(&GeometricPoint::Vertex(v)) {
                    return Err(DynError::Invalid(format!("{} hull branches at v{v} off the skeleton", side.2)));
                }
            }
        }
        let links = link_tree(stage, &src);
        let mut length = zero();
        for &(k, p) in &links {
            for (j, t) in tgt.iter().enumerate() {
                if j != k && j != p && stage.is_between(&tgt[k], t, &tgt[p]) {
                    return Err(DynError::Invalid(format!("target node {t} inside a link image")));
                }
            }
            length += stage.path_distance(&tgt[k], &tgt[p]);
        }
        if length != tgt_hull.total_length(stage) {
            return Err(DynError::Invalid("link images overlap".into()));
        }
        if outside == Outside::Identity {
            if src_hull != tgt_hull {
                return Err(DynError::Invalid("identity outside needs equal hulls".into()));
            }
            for b in src_hull.boundary(stage) {
                if !nodes.iter().any(|(s, t)| *s == b && *t == b) {
                    return Err(DynError::Invalid(format!("hull boundary point {b} is not fixed")));
                }
            }
        }
        Ok(TreeHomeo { nodes, links, outside })
    }

    pub fn nodes(&self) -> &[(GeometricPoint, GeometricPoint)] {
        &self.nodes
    }

    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn outside(&self) -> Outside {
        self.outside
    }

    pub fn is_identity(&self) -> bool {
        self.outside == Outside::Identity && self.nodes.iter().all(|(s, t)| s == t)
    }

    pub fn source_hull(&self, stage: &TreeStage) -> Region {
        stage.hull(&self.nodes.iter().map(|(s, _)| s.clone()).collect::<Vec<_>>())
    }

    pub fn target_hull(&self, stage: &TreeStage) -> Region {
        stage.hull(&self.nodes.iter().map(|(_, t)| t.clone()).collect::<Vec<_>>())
    }

    /// Image of `p`; `None` off the source hull when the outside is undefined.
    pub fn apply(&self, stage: &TreeStage, p: &GeometricPoint) -> Option<GeometricPoint> {
        if let Some((_, t)) = self.nodes.iter().find(|(s, _)| s == p) {
            return Some(t.clone());
        }
        for &(k, j) in &self.links {
            let (sk, tk) = &self.nodes[k];
            let (sj, tj) = &self.nodes[j];
            if stage.is_between(sk, p, sj) {
                let ds = stage.path_distance(sk, sj);
                let dt = stage.path_distance(tk, tj);
                let s: Rational = stage.path_distance(sk, p) * dt / ds;
                return Some(stage.point_along(tk, tj, &s));
            }
        }
        match self.outside {
            Outside::Identity => Some(p.clone()),
            Outside::Undefined => None,
        }
    }

    pub fn inverse(&self, stage: &TreeStage) -> TreeHomeo {
        let nodes = self.nodes.iter().map(|(s, t)| (t.clone(), s.clone())).collect::<Vec<_>>();
        if nodes.is_empty() {
            return TreeHomeo::identity();
        }
        let tgt: Vec<GeometricPoint> = nodes.iter().map(|(s, _)| s.clone()).collect();
        TreeHomeo {
            links: link_tree(stage, &tgt),
            nodes,
            outside: self.outside,
        }
    }

    /// Stage vertices inside the source hull whose image has another type.
    /// Only nodes are type-checked; these are transported linearly.
    pub fn interior_type_changes(&self, stage: &TreeStage) -> Vec<usize> {
        let hull = self.source_hull(stage);
        hull.vertices()
            .iter()
            .copied()
            .filter(|&v| {
                let p = GeometricPoint::Vertex(v);
                self.apply(stage, &p)
                    .is_some_and(|q| stage.point_type(&p) != stage.point_type(&q))
            })
            .collect()
    }
}

pub fn write_homeo(h: &TreeHomeo) -> String {
    let mut out = String::new();
    writeln!(out, "{}", crate::textio::HEADER).unwrap();
    writeln!(out, "homeo outside={}", h.outside.as_str()).unwrap();
    for (s, t) in &h.nodes {
        writeln!(out, "node {s} -> {t}").unwrap();
    }
    for (k, p) in &h.links {
        writeln!(out, "link {k} {p}").unwrap();
    }
    out
}

/// Reads a homeomorphism and revalidates it against `stage`.
pub fn read_homeo(stage: &TreeStage, text: &str) -> Result<TreeHomeo, FormatError> {
    let mut outside = None;
    let mut nodes = Vec::new();
    let mut links = Vec::new();
    for (n, line) in body_lines(text)? {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["homeo", o] => {
                outside = match o.strip_prefix("outside=") {
                    Some("identity") => Some(Outside::Identity),
                    Some("undefined") => Some(Outside::Undefined),
                    _ => return Err(bad(n, "unknown outside mode")),
                }
            }
            ["node", s, "->", t] => {
                let s = GeometricPoint::parse(s).ok_or_else(|| bad(n, "bad point"))?;
                let t = GeometricPoint::parse(t).ok_or_else(|| bad(n, "bad point"))?;
                nodes.push((s, t));
            }
            ["link", k, p] => {
                let k: usize = k.parse().map_err(|_| bad(n, "bad link"))?;
                let p: usize = p.parse().map_err(|_| bad(n, "bad link"))?;
                links.push((k, p));
            }
            _ => return Err(bad(n, "unknown record")),
        }
    }
    let outside = outside.ok_or_else(|| bad(1, "missing homeo record"))?;
    let h = TreeHomeo::new(stage, nodes, outside).map_err(|e| bad(1, &e.to_string()))?;
    if h.links != links {
        return Err(bad(1, "links disagree with the nodes"));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrite::build::star;
    use crate::rational::{int, q};

    fn v(i: usize) -> GeometricPoint {
        GeometricPoint::Vertex(i)
    }

    #[test]
    fn arm_swap_on_star() {
        let s = star(3, int(1));
        let h = TreeHomeo::new(&s, vec![(v(0), v(0)), (v(1), v(2)), (v(2), v(1)), (v(3), v(3))], Outside::Identity).unwrap();
        assert_eq!(h.apply(&s, &s.point(0, q(1, 4))), Some(s.point(1, q(1, 4))));
        let inv = h.inverse(&s);
        let p = s.point(1, q(1, 3));
        assert_eq!(inv.apply(&s, &h.apply(&s, &p).unwrap()), Some(p));
        assert!(!h.is_identity());
    }

    #[test]
    fn rejects_type_change_and_missing_branch() {
        let s = star(3, int(1));
        assert!(TreeHomeo::new(&s, vec![(v(0), v(1))], Outside::Undefined).is_err());
        assert!(TreeHomeo::new(&s, vec![(v(1), v(1)), (v(2), v(2)), (v(3), v(3))], Outside::Undefined).is_err());
        // Folding one arm over another.
        let bad = vec![(v(0), v(0)), (v(1), v(1)), (v(2), v(1)), (v(3), v(3))];
        assert!(TreeHomeo::new(&s, bad, Outside::Undefined).is_err());
    }

    #[test]
    fn linear_along_links() {
        let s = star(3, int(1));
        let a = s.point(0, q(1, 2));
        let h = TreeHomeo::new(&s, vec![(v(0), v(0)), (a, s.point(0, q(1, 4))), (v(1), v(1))], Outside::Identity).unwrap();
        assert_eq!(h.apply(&s, &s.point(0, q(1, 4))), Some(s.point(0, q(1, 8))));
        assert_eq!(h.apply(&s, &s.point(0, q(3, 4))), Some(s.point(0, q(5, 8))));
        assert_eq!(h.apply(&s, &v(2)), Some(v(2)));
    }

    #[test]
    fn text_round_trip() {
        let s = star(4, int(1));
        let h = TreeHomeo::new(
            &s,
            vec![(v(0), v(0)), (v(1), v(3)), (v(3), v(1)), (s.point(1, q(1, 3)), s.point(1, q(2, 3))), (v(2), v(2))],
            Outside::Undefined,
        )
        .unwrap();
        let text = write_homeo(&h);
        assert_eq!(read_homeo(&s, &text).unwrap(), h);
        assert!(read_homeo(&s, &text.replace("v3 -> v1", "v3 -> v3")).is_err());
    }
}
