//! Type-preserving placement of a median-closed point set into a region,
//! keeping the tree shape: the search behind the component maps of the
//! witnesses.

use std::collections::{BTreeSet, HashMap};

use crate::dendrite::{GeometricPoint, PointType, Region, TreeStage};
use crate::rational::{abs_diff, one, zero, Rational};

const CANDIDATES: usize = 16;
const BUDGET: usize = 20_000;

/// Adds the medians of all triples, so the set contains every branch point
/// of its hull.
pub(crate) fn median_closure(stage: &TreeStage, pts: &[GeometricPoint]) -> Vec<GeometricPoint> {
    let mut out: Vec<GeometricPoint> = Vec::new();
    for p in pts {
        if !out.contains(p) {
            out.push(p.clone());
        }
    }
    let base = out.clone();
    let n = base.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = stage.median(&base[i], &base[j], &base[k]);
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Points of `r` that can host a node, grouped by type: its vertices plus
/// the quarter points of every piece.
pub(crate) fn region_candidates(stage: &TreeStage, r: &Region) -> HashMap<PointType, Vec<GeometricPoint>> {
    let mut out: HashMap<PointType, Vec<GeometricPoint>> = HashMap::new();
    for &v in r.vertices() {
        let p = GeometricPoint::Vertex(v);
        out.entry(stage.point_type(&p)).or_default().push(p);
    }
    for (e, (lo, hi)) in r.pieces() {
        if lo < hi {
            for j in 1..4 {
                let t = lo + (hi - lo) * Rational::new(j.into(), 4.into());
                if t > zero() && t < one() {
                    out.entry(PointType::Regular).or_default().push(GeometricPoint::OnEdge(*e, t));
                }
            }
        }
    }
    out
}

/// Finds targets for `src` (median-closed) so that the linear extension
/// along links is a type-preserving homeomorphism of hulls. Nodes with a
/// `fixed` target keep it; the others land in `region`. Target distances
/// aim at `scale` times the source distances.
pub(crate) fn embed(
    stage: &TreeStage,
    src: &[GeometricPoint],
    fixed: &[Option<GeometricPoint>],
    region: &Region,
    scale: &Rational,
) -> Option<Vec<GeometricPoint>> {
    let n = src.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let root = fixed.iter().position(Option::is_some).unwrap_or(0);
    // Link tree rooted at `root`, as parent pointers and a BFS order.
    let mut parent = vec![usize::MAX; n];
    for k in 0..n {
        if k == root {
            continue;
        }
        parent[k] = (0..n)
            .filter(|&j| j != k && stage.is_between(&src[root], &src[j], &src[k]))
            .max_by_key(|&j| stage.path_distance(&src[root], &src[j]))
            .expect("root is on the arc");
    }
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let p = order[i];
        let mut kids: Vec<usize> = (0..n).filter(|&k| parent[k] == p).collect();
        kids.sort_by_key(|&k| fixed[k].is_none());
        order.extend(kids);
        i += 1;
    }
    let below = |k: usize, f: usize| {
        let mut x = f;
        while x != usize::MAX {
            if x == k {
                return true;
            }
            x = parent[x];
        }
        false
    };
    let fixed_below: Vec<Vec<usize>> = (0..n)
        .map(|k| (0..n).filter(|&f| f != k && fixed[f].is_some() && below(k, f)).collect())
        .collect();
    let pool = region_candidates(stage, region);

    let mut search = Search {
        stage,
        src,
        fixed,
        parent: &parent,
        order: &order,
        fixed_below: &fixed_below,
        below: &below,
        pool: &pool,
        scale,
        placed: vec![None; n],
        steps: 0,
    };
    if search.place(0) {
        Some(search.placed.into_iter().map(|p| p.expect("all placed")).collect())
    } else {
        None
    }
}

struct Search<'a, F: Fn(usize, usize) -> bool> {
    stage: &'a TreeStage,
    src: &'a [GeometricPoint],
    fixed: &'a [Option<GeometricPoint>],
    parent: &'a [usize],
    order: &'a [usize],
    fixed_below: &'a [Vec<usize>],
    below: &'a F,
    pool: &'a HashMap<PointType, Vec<GeometricPoint>>,
    scale: &'a Rational,
    placed: Vec<Option<GeometricPoint>>,
    steps: usize,
}

impl<F: Fn(usize, usize) -> bool> Search<'_, F> {
    fn admissible(&self, k: usize, t: &GeometricPoint) -> bool {
        let stage = self.stage;
        if stage.point_type(t) != stage.point_type(&self.src[k]) {
            return false;
        }
        let used = self.placed.iter().enumerate().any(|(j, q)| j != k && q.as_ref() == Some(t))
            || self.fixed.iter().enumerate().any(|(j, q)| j != k && q.as_ref() == Some(t));
        if used {
            return false;
        }
        let p = self.parent[k];
        if p == usize::MAX {
            return true;
        }
        let tp = self.placed[p].as_ref().expect("parent placed first");
        for f in &self.fixed_below[k] {
            let tf = self.fixed[*f].as_ref().expect("fixed");
            if !stage.is_between(tp, t, tf) {
                return false;
            }
        }
        let others = self
            .placed
            .iter()
            .enumerate()
            .filter_map(|(j, q)| q.as_ref().map(|q| (j, q)))
            .chain(self.fixed.iter().enumerate().filter_map(|(j, q)| q.as_ref().map(|q| (j, q))));
        for (j, q) in others {
            if j != p && j != k && !(self.below)(k, j) && !stage.is_between(t, tp, q) {
                return false;
            }
        }
        true
    }

    fn candidates(&self, k: usize) -> Vec<GeometricPoint> {
        if let Some(t) = &self.fixed[k] {
            return if self.admissible(k, t) { vec![t.clone()] } else { Vec::new() };
        }
        let Some(all) = self.pool.get(&self.stage.point_type(&self.src[k])) else {
            return Vec::new();
        };
        let p = self.parent[k];
        let mut scored: Vec<(Rational, GeometricPoint)> = match p {
            usize::MAX => all.iter().map(|t| (zero(), t.clone())).collect(),
            _ => {
                let tp = self.placed[p].as_ref().expect("parent placed first");
                let want = self.stage.path_distance(&self.src[p], &self.src[k]) * self.scale;
                all.iter()
                    .filter(|t| *t != tp)
                    .map(|t| (abs_diff(&self.stage.path_distance(tp, t), &want), t.clone()))
                    .collect()
            }
        };
        scored.sort();
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for (_, t) in scored {
            if out.len() >= CANDIDATES {
                break;
            }
            if seen.insert(t.clone()) && self.admissible(k, &t) {
                out.push(t);
            }
        }
        out
    }

    fn place(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return true;
        }
        let k = self.order[i];
        for t in self.candidates(k) {
            self.steps += 1;
            if self.steps > BUDGET {
                return false;
            }
            self.placed[k] = Some(t);
            if self.place(i + 1) {
                return true;
            }
            self.placed[k] = None;
        }
        false
    }
}
