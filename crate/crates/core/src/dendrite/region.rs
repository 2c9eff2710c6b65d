//! Closed connected subsets of a tree stage: whole edges, sub-edges with
//! rational cut points, and vertices.

use std::collections::{BTreeMap, BTreeSet};

use crate::rational::{max_q, min_q, one, zero, Rational};

use super::stage::{Arc, GeometricPoint, TreeStage};

/// A closed subset meeting each edge in at most one interval of edge
/// fractions. Every construction here yields a connected (hence convex) set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    vertices: BTreeSet<usize>,
    pieces: BTreeMap<usize, (Rational, Rational)>,
}

impl Region {
    pub fn new() -> Self {
        Region::default()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.pieces.is_empty()
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn pieces(&self) -> &BTreeMap<usize, (Rational, Rational)> {
        &self.pieces
    }

    pub fn add_vertex(&mut self, v: usize) {
        self.vertices.insert(v);
    }

    pub fn add_full_edge(&mut self, stage: &TreeStage, e: usize) {
        self.add_piece(stage, e, zero(), one());
    }

    /// Adds `[lo, hi]` on edge `e`, merged with any existing piece by taking
    /// the hull (valid because the region stays connected).
    pub fn add_piece(&mut self, stage: &TreeStage, e: usize, lo: Rational, hi: Rational) {
        let (lo, hi) = match self.pieces.remove(&e) {
            Some((a, b)) => (min_q(a, lo), max_q(b, hi)),
            None => (lo, hi),
        };
        let edge = stage.edge(e);
        if lo == zero() {
            self.vertices.insert(edge.u);
        }
        if hi == one() {
            self.vertices.insert(edge.v);
        }
        self.pieces.insert(e, (lo, hi));
    }

    pub fn add_point(&mut self, stage: &TreeStage, p: &GeometricPoint) {
        match p {
            GeometricPoint::Vertex(v) => self.add_vertex(*v),
            GeometricPoint::OnEdge(e, t) => self.add_piece(stage, *e, t.clone(), t.clone()),
        }
    }

    pub fn add_arc(&mut self, stage: &TreeStage, arc: &Arc) {
        for p in &arc.points {
            self.add_point(stage, p);
        }
        for w in arc.points.windows(2) {
            let e = stage.segment_edge(&w[0], &w[1]);
            let a = stage.edge_param(&w[0], e).expect("on segment edge");
            let b = stage.edge_param(&w[1], e).expect("on segment edge");
            self.add_piece(stage, e, min_q(a.clone(), b.clone()), max_q(a, b));
        }
    }

    pub fn contains(&self, _stage: &TreeStage, p: &GeometricPoint) -> bool {
        match p {
            GeometricPoint::Vertex(v) => self.vertices.contains(v),
            GeometricPoint::OnEdge(e, t) => self.pieces.get(e).is_some_and(|(lo, hi)| lo <= t && t <= hi),
        }
    }

    /// The segment between two points of one edge lies in the region.
    fn contains_segment(&self, stage: &TreeStage, a: &GeometricPoint, b: &GeometricPoint) -> bool {
        let e = stage.segment_edge(a, b);
        let ta = stage.edge_param(a, e).expect("on segment edge");
        let tb = stage.edge_param(b, e).expect("on segment edge");
        self.pieces
            .get(&e)
            .is_some_and(|(lo, hi)| *lo <= min_q(ta.clone(), tb.clone()) && max_q(ta, tb) <= *hi)
    }

    pub fn contains_arc(&self, stage: &TreeStage, arc: &Arc) -> bool {
        arc.points.iter().all(|p| self.contains(stage, p))
            && arc.points.windows(2).all(|w| self.contains_segment(stage, &w[0], &w[1]))
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let vertices = self.vertices.intersection(&other.vertices).copied().collect();
        let mut pieces = BTreeMap::new();
        for (e, (a, b)) in &self.pieces {
            if let Some((c, d)) = other.pieces.get(e) {
                let lo = max_q(a.clone(), c.clone());
                let hi = min_q(b.clone(), d.clone());
                if lo <= hi {
                    pieces.insert(*e, (lo, hi));
                }
            }
        }
        Region { vertices, pieces }
    }

    /// Piece ends and vertices: every leaf of the subtree is among these.
    pub fn extreme_points(&self, stage: &TreeStage) -> Vec<GeometricPoint> {
        let mut out = BTreeSet::new();
        for v in &self.vertices {
            out.insert(GeometricPoint::Vertex(*v));
        }
        for (e, (lo, hi)) in &self.pieces {
            out.insert(stage.point(*e, lo.clone()));
            out.insert(stage.point(*e, hi.clone()));
        }
        out.into_iter().collect()
    }

    pub fn farthest_from(&self, stage: &TreeStage, p: &GeometricPoint) -> Option<(GeometricPoint, Rational)> {
        let mut best: Option<(GeometricPoint, Rational)> = None;
        for x in self.extreme_points(stage) {
            let d = stage.path_distance(p, &x);
            if best.as_ref().map_or(true, |(_, bd)| d > *bd) {
                best = Some((x, d));
            }
        }
        best
    }

    /// Path diameter by double sweep over the extreme points.
    pub fn diameter(&self, stage: &TreeStage) -> Rational {
        let Some(start) = self.extreme_points(stage).into_iter().next() else {
            return zero();
        };
        let (far, _) = self.farthest_from(stage, &start).expect("nonempty");
        self.farthest_from(stage, &far).expect("nonempty").1
    }

    /// Topological boundary inside the stage.
    pub fn boundary(&self, stage: &TreeStage) -> Vec<GeometricPoint> {
        let mut out = BTreeSet::new();
        for (e, (lo, hi)) in &self.pieces {
            if *lo > zero() {
                out.insert(stage.point(*e, lo.clone()));
            }
            if *hi < one() {
                out.insert(stage.point(*e, hi.clone()));
            }
        }
        for &v in &self.vertices {
            let open = stage.neighbors(v).iter().any(|&(_, e)| {
                let edge = stage.edge(e);
                match self.pieces.get(&e) {
                    None => true,
                    Some((lo, hi)) if v == edge.u => !(*lo == zero() && *hi > zero()),
                    Some((lo, hi)) => !(*hi == one() && *lo < one()),
                }
            });
            if open {
                out.insert(GeometricPoint::Vertex(v));
            }
        }
        out.into_iter().collect()
    }

    /// Exhaustive convexity check over pairs of extreme points.
    pub fn is_convex(&self, stage: &TreeStage) -> bool {
        let pts = self.extreme_points(stage);
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                if !self.contains_arc(stage, &stage.arc_between(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn total_length(&self, stage: &TreeStage) -> Rational {
        self.pieces
            .iter()
            .map(|(e, (lo, hi))| (hi - lo) * &stage.edge(*e).len)
            .fold(zero(), |a, b| a + b)
    }
}
