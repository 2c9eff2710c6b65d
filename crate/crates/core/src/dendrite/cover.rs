//! Greedy convex covers with small pieces and finite boundaries.
//!
//! Rooted at vertex 0, each region is the part of the subtree below its
//! start point lying within `eps/8` of it, so its diameter is at most
//! `eps/4`. Where the budget runs out inside the subtree the region is cut
//! and a new region starts at the cut. Children are visited in adjacency
//! order, which follows vertex id.

use std::collections::{BTreeMap, VecDeque};

use crate::rational::{int, max_q, min_q, one, zero, Rational};

use super::region::Region;
use super::stage::{GeometricPoint, TreeStage};
use super::TreeError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverRegion {
    pub start: GeometricPoint,
    pub region: Region,
    pub boundary: Vec<GeometricPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexCover {
    pub eps: Rational,
    pub regions: Vec<CoverRegion>,
}

impl ConvexCover {
    pub fn boundary_total(&self) -> usize {
        self.regions.iter().map(|r| r.boundary.len()).sum()
    }

    /// Every boundary point of every region.
    pub fn boundary_points(&self) -> Vec<GeometricPoint> {
        let mut out: Vec<GeometricPoint> = self.regions.iter().flat_map(|r| r.boundary.iter().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Violations of: covers the stage, diameter at most `eps/4`, convex,
    /// recorded boundary equals the topological one.
    pub fn violations(&self, stage: &TreeStage) -> Vec<String> {
        let mut out = Vec::new();
        let budget = &self.eps / int(4);
        for (i, r) in self.regions.iter().enumerate() {
            let d = r.region.diameter(stage);
            if d > budget {
                out.push(format!("region {i} has diameter {d} above {budget}"));
            }
            if !r.region.is_convex(stage) {
                out.push(format!("region {i} is not convex"));
            }
            if r.region.boundary(stage) != r.boundary {
                out.push(format!("region {i} boundary record is off"));
            }
        }
        let mut per_edge: BTreeMap<usize, Vec<(Rational, Rational)>> = BTreeMap::new();
        for r in &self.regions {
            for (e, (lo, hi)) in r.region.pieces() {
                per_edge.entry(*e).or_default().push((lo.clone(), hi.clone()));
            }
        }
        for e in 0..stage.edges().len() {
            let mut ivs = per_edge.remove(&e).unwrap_or_default();
            ivs.sort();
            let mut reach = zero();
            for (lo, hi) in ivs {
                if lo > reach {
                    break;
                }
                reach = max_q(reach, hi);
            }
            if reach < one() {
                out.push(format!("edge {e} not covered"));
            }
        }
        for v in 0..stage.vertices().len() {
            if !self.regions.iter().any(|r| r.region.vertices().contains(&v)) {
                out.push(format!("vertex {v} not covered"));
            }
        }
        out
    }
}

/// Parent end and child end of an edge in the rooting at vertex 0.
fn oriented(stage: &TreeStage, e: usize) -> (usize, usize) {
    let edge = stage.edge(e);
    if stage.up(edge.v).map(|(_, f)| f) == Some(e) {
        (edge.u, edge.v)
    } else {
        (edge.v, edge.u)
    }
}

/// Edge fraction at distance `s` from end `from`.
fn frac(stage: &TreeStage, e: usize, from: usize, s: &Rational) -> Rational {
    let edge = stage.edge(e);
    let f = s / &edge.len;
    if from == edge.u {
        f
    } else {
        one() - f
    }
}

struct Grow<'a> {
    stage: &'a TreeStage,
    region: Region,
    cuts: Vec<GeometricPoint>,
}

impl Grow<'_> {
    /// Walks down edge `e` from offset `o` (measured from its parent end)
    /// with `rem` budget left.
    fn edge(&mut self, e: usize, o: Rational, rem: Rational) {
        let stage = self.stage;
        let (p, c) = oriented(stage, e);
        let len = stage.edge(e).len.clone();
        let seg = &len - &o;
        let a = frac(stage, e, p, &o);
        if seg <= rem {
            let b = frac(stage, e, p, &len);
            self.region.add_piece(stage, e, min_q(a.clone(), b.clone()), max_q(a, b));
            let left = rem - seg;
            let kids: Vec<usize> = stage.children(c).map(|(_, f)| f).collect();
            if left == zero() {
                if !kids.is_empty() {
                    self.cuts.push(GeometricPoint::Vertex(c));
                }
            } else {
                for f in kids {
                    self.edge(f, zero(), left.clone());
                }
            }
        } else {
            let end = &o + &rem;
            let b = frac(stage, e, p, &end);
            self.region.add_piece(stage, e, min_q(a.clone(), b.clone()), max_q(a, b.clone()));
            self.cuts.push(stage.point(e, b));
        }
    }
}

pub fn build_convex_cover(stage: &TreeStage, eps: &Rational) -> Result<ConvexCover, TreeError> {
    if *eps <= zero() {
        return Err(TreeError::NonPositive(eps.clone()));
    }
    if stage.diameter() * int(4) <= *eps {
        return Ok(ConvexCover {
            eps: eps.clone(),
            regions: vec![CoverRegion {
                start: GeometricPoint::Vertex(0),
                region: stage.whole(),
                boundary: Vec::new(),
            }],
        });
    }
    let radius = eps / int(8);
    let mut regions = Vec::new();
    let mut queue = VecDeque::from([GeometricPoint::Vertex(0)]);
    while let Some(start) = queue.pop_front() {
        let mut g = Grow {
            stage,
            region: Region::new(),
            cuts: Vec::new(),
        };
        g.region.add_point(stage, &start);
        match &start {
            GeometricPoint::Vertex(v) => {
                for (_, f) in stage.children(*v) {
                    g.edge(f, zero(), radius.clone());
                }
            }
            GeometricPoint::OnEdge(e, t) => {
                let (p, _) = oriented(stage, *e);
                let edge = stage.edge(*e);
                let off = if p == edge.u { t * &edge.len } else { (one() - t) * &edge.len };
                g.edge(*e, off, radius.clone());
            }
        }
        let mut boundary = g.cuts.clone();
        if start != GeometricPoint::Vertex(0) {
            boundary.push(start.clone());
        }
        boundary.sort();
        boundary.dedup();
        queue.extend(g.cuts);
        regions.push(CoverRegion {
            start,
            region: g.region,
            boundary,
        });
    }
    Ok(ConvexCover {
        eps: eps.clone(),
        regions,
    })
}
