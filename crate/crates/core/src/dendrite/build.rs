//! Stage constructions: Wazewski refinements and the two-color tower.
//!
//! Two-color stages. `X_0` is four `T0` arcs of length 1 joined at a red
//! center. Each arc carries colored marks: in block `n`, the open interval
//! `(n/(n+1), (n+1)/(n+2))`, the first `marks` dyadic rationals of the
//! coarsest dyadic level with enough of them. On `T0` even blocks are red and
//! odd blocks green; `T1` swaps them. Stage `i+1` attaches, at every mark of
//! a generation-`i` arc, two `T0` arcs if the mark is red and one `T1` arc if
//! green, each of length `2^-(i+3)`. The bonding map sends the new vertices
//! to their mark and fixes the rest.

use num::BigInt;

use crate::rational::{int, one, pow2_inv, q, zero, Rational};

use super::stage::{Color, Edge, Order, StageMode, TreeStage, Vertex};
use super::TreeError;

pub const DEFAULT_BLOCKS: u32 = 2;

/// Star with `k` arms of length `len` around vertex 0.
pub fn star(k: usize, len: Rational) -> TreeStage {
    let vertices = (0..=k)
        .map(|id| Vertex {
            id,
            color: Color::Uncolored,
            gen: 0,
            parent: None,
        })
        .collect();
    let edges = (1..=k).map(|v| Edge { u: 0, v, len: len.clone() }).collect();
    let mode = StageMode::Wazewski {
        orders: vec![Order::Finite(k as u32)],
        width: 1,
    };
    TreeStage::from_parts(0, mode, vertices, edges, None).expect("a star is a tree")
}

struct Builder {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl Builder {
    fn vertex(&mut self, color: Color, gen: u32, parent: Option<usize>) -> usize {
        let id = self.vertices.len();
        self.vertices.push(Vertex { id, color, gen, parent });
        id
    }
}

pub fn validate_orders(orders: &[Order], width: u32) -> Result<(), TreeError> {
    if orders.is_empty() {
        return Err(TreeError::InvalidOrders("no orders given".into()));
    }
    for o in orders {
        match o {
            Order::Finite(n) if *n < 3 => {
                return Err(TreeError::InvalidOrders(format!("order {n} is below 3")));
            }
            Order::Omega if width < 3 => {
                return Err(TreeError::InvalidOrders(format!("order w needs width >= 3, got {width}")));
            }
            _ => {}
        }
    }
    if width == 0 {
        return Err(TreeError::InvalidOrders("width must be positive".into()));
    }
    Ok(())
}

/// Stage `depth` of the Wazewski refinement: start from a star of the least
/// order; at step `s` split every edge into `width + 1` equal parts, the new
/// interior vertices cycling through the orders, each sprouting
/// `order - 2` branches of length `2^-(s+2)`.
pub fn build_wazewski_stage(orders: &[Order], depth: u32, width: u32) -> Result<TreeStage, TreeError> {
    validate_orders(orders, width)?;
    let mut sorted = orders.to_vec();
    sorted.sort();
    sorted.dedup();
    let mode = StageMode::Wazewski {
        orders: sorted.clone(),
        width,
    };
    let degrees: Vec<u32> = sorted.iter().map(|&o| mode.degree_of(o)).collect();
    let base = *degrees.iter().min().expect("nonempty");

    let mut b = Builder {
        vertices: Vec::new(),
        edges: Vec::new(),
    };
    let center = b.vertex(Color::Uncolored, 0, None);
    for _ in 0..base {
        let leaf = b.vertex(Color::Uncolored, 0, None);
        b.edges.push(Edge { u: center, v: leaf, len: one() });
    }

    for step in 1..=depth {
        let branch = pow2_inv(step + 2);
        let old = std::mem::take(&mut b.edges);
        let parts = int(width as i64 + 1);
        for e in old {
            let piece = &e.len / &parts;
            let mut prev = e.u;
            for k in 0..width as usize {
                let deg = degrees[k % degrees.len()];
                // Points inside a sprouted branch stay attached to its root.
                let owner = b.vertices[e.v].parent;
                let w = b.vertex(Color::Uncolored, step, owner);
                b.edges.push(Edge { u: prev, v: w, len: piece.clone() });
                for _ in 0..deg - 2 {
                    let leaf = b.vertex(Color::Uncolored, step, Some(w));
                    b.edges.push(Edge { u: w, v: leaf, len: branch.clone() });
                }
                prev = w;
            }
            b.edges.push(Edge { u: prev, v: e.v, len: piece });
        }
    }
    TreeStage::from_parts(depth, mode, b.vertices, b.edges, None)
}

/// Mark positions and colors on a `T0` (`swapped = false`) or `T1` arc.
pub fn arc_marks(blocks: u32, marks: u32, swapped: bool) -> Vec<(Rational, Color)> {
    let mut out = Vec::new();
    for n in 0..blocks as i64 {
        let lo = q(n, n + 1);
        let hi = q(n + 1, n + 2);
        let red = (n % 2 == 0) != swapped;
        let color = if red { Color::Red } else { Color::Green };
        for p in dyadics_inside(&lo, &hi, marks as usize) {
            out.push((p, color));
        }
    }
    out
}

/// First `m` dyadic rationals strictly inside `(lo, hi)` at the coarsest
/// level holding at least `m` of them.
fn dyadics_inside(lo: &Rational, hi: &Rational, m: usize) -> Vec<Rational> {
    if m == 0 {
        return Vec::new();
    }
    let mut level = 0u32;
    loop {
        let scale = Rational::from_integer(BigInt::from(1) << level as usize);
        let first: BigInt = (lo * &scale).floor().to_integer() + 1;
        let mut out = Vec::new();
        let mut j = first;
        loop {
            let p = Rational::new(j.clone(), scale.to_integer());
            if p >= *hi || out.len() == m {
                break;
            }
            out.push(p);
            j += 1;
        }
        if out.len() == m {
            return out;
        }
        level += 1;
    }
}

/// Adds an arc of length `len` hanging from `attach`. Arm vertices of `X_0`
/// have no parent; all later arcs record their attachment mark.
fn add_arc(
    b: &mut Builder,
    attach: usize,
    parent: Option<usize>,
    gen: u32,
    len: &Rational,
    marks: &[(Rational, Color)],
) -> Vec<usize> {
    let mut prev = attach;
    let mut prev_s = zero();
    let mut new_marks = Vec::new();
    for (s, c) in marks {
        let v = b.vertex(*c, gen, parent);
        b.edges.push(Edge {
            u: prev,
            v,
            len: (s - &prev_s) * len,
        });
        new_marks.push(v);
        prev = v;
        prev_s = s.clone();
    }
    let end = b.vertex(Color::Uncolored, gen, parent);
    b.edges.push(Edge {
        u: prev,
        v: end,
        len: (one() - prev_s) * len,
    });
    new_marks
}

/// Stages `X_0, ..., X_depth` of the two-color construction.
pub fn build_twocolor_tower(depth: u32, blocks: u32, marks: u32) -> Result<Vec<TreeStage>, TreeError> {
    if marks == 0 || blocks == 0 {
        return Err(TreeError::InvalidOrders("two-color stages need at least one block and one mark".into()));
    }
    let mode = StageMode::TwoColor { blocks, marks };
    let t0 = arc_marks(blocks, marks, false);
    let t1 = arc_marks(blocks, marks, true);
    let mut b = Builder {
        vertices: Vec::new(),
        edges: Vec::new(),
    };
    let center = b.vertex(Color::Red, 0, None);
    let mut frontier = Vec::new();
    for _ in 0..4 {
        frontier.extend(add_arc(&mut b, center, None, 0, &one(), &t0));
    }
    let mut tower = Vec::new();
    let mut prev_count = 0;
    for i in 0..=depth {
        if i > 0 {
            let len = pow2_inv(i + 2);
            let mut next = Vec::new();
            for &a in &frontier {
                match b.vertices[a].color {
                    Color::Red => {
                        for _ in 0..2 {
                            next.extend(add_arc(&mut b, a, Some(a), i, &len, &t0));
                        }
                    }
                    _ => next.extend(add_arc(&mut b, a, Some(a), i, &len, &t1)),
                }
            }
            frontier = next;
        }
        let bonding = (i > 0).then(|| {
            b.vertices
                .iter()
                .map(|v| if v.id < prev_count { v.id } else { v.parent.expect("attached vertex") })
                .collect()
        });
        prev_count = b.vertices.len();
        tower.push(TreeStage::from_parts(
            i,
            mode.clone(),
            b.vertices.clone(),
            b.edges.clone(),
            bonding,
        )?);
    }
    Ok(tower)
}

pub fn build_twocolor_stage(depth: u32, marks: u32) -> Result<TreeStage, TreeError> {
    Ok(build_twocolor_tower(depth, DEFAULT_BLOCKS, marks)?.pop().expect("nonempty tower"))
}

/// Vertices of the arc starting at neighbor `w`, in order away from the
/// attachment point: follows neighbors sharing `w`'s parent and generation.
pub fn arc_chain(stage: &TreeStage, from: usize, w: usize) -> Vec<usize> {
    let key = (stage.vertex(w).parent, stage.vertex(w).gen);
    let mut out = vec![w];
    let mut prev = from;
    let mut cur = w;
    loop {
        let next = stage
            .neighbors(cur)
            .iter()
            .map(|&(x, _)| x)
            .find(|&x| x != prev && (stage.vertex(x).parent, stage.vertex(x).gen) == key && x > cur);
        match next {
            Some(x) => {
                prev = cur;
                cur = x;
                out.push(x);
            }
            None => return out,
        }
    }
}

/// Arcs hanging from `a`: for the center of a two-color stage its four arms,
/// otherwise the arcs attached at mark `a`.
pub fn arcs_at(stage: &TreeStage, a: usize) -> Vec<Vec<usize>> {
    let root = stage.vertex(a).parent.is_none() && a == 0;
    stage
        .neighbors(a)
        .iter()
        .map(|&(w, _)| w)
        .filter(|&w| {
            let v = stage.vertex(w);
            if root {
                v.parent.is_none() && v.gen == 0
            } else {
                v.parent == Some(a)
            }
        })
        .map(|w| arc_chain(stage, a, w))
        .collect()
}

/// Vertices hanging from `a` through newer attachments, as a region:
/// `T(a)` for a two-color mark, the sprouted branches for a Wazewski vertex.
pub fn attached_subtree(stage: &TreeStage, a: usize) -> Option<super::region::Region> {
    let dirs: Vec<_> = stage
        .directions_at(&super::GeometricPoint::Vertex(a))
        .into_iter()
        .filter(|d| stage.vertex(d.toward).parent == Some(a))
        .collect();
    if dirs.is_empty() {
        return None;
    }
    let mut r = super::region::Region::new();
    for d in dirs {
        let c = stage.component(&super::GeometricPoint::Vertex(a), d);
        for v in c.vertices() {
            r.add_vertex(*v);
        }
        for (e, (lo, hi)) in c.pieces() {
            r.add_piece(stage, *e, lo.clone(), hi.clone());
        }
    }
    Some(r)
}

/// Generation at which the subtree hanging from `a` was attached.
pub fn attachment_stage(stage: &TreeStage, a: usize) -> u32 {
    match stage.mode {
        StageMode::TwoColor { .. } => stage.vertex(a).gen + 1,
        StageMode::Wazewski { .. } => stage.vertex(a).gen,
    }
}

/// Violations of the structural invariants of a stage, empty when sound.
pub fn invariant_violations(stage: &TreeStage) -> Vec<String> {
    let mut out = Vec::new();
    let n = stage.vertices().len();
    if stage.edges().len() + 1 != n {
        out.push("edge count is not vertex count minus one".into());
    }
    for v in stage.vertices() {
        let d = stage.degree(v.id) as u32;
        match &stage.mode {
            StageMode::Wazewski { orders, .. } => {
                if d >= 3 && !orders.iter().any(|&o| stage.mode.degree_of(o) == d) {
                    out.push(format!("vertex {} has degree {d} outside the orders", v.id));
                }
            }
            StageMode::TwoColor { .. } => {
                let bad = match v.color {
                    Color::Red => d >= 3 && d != 4,
                    Color::Green => d >= 3 && d != 3,
                    Color::Uncolored => d >= 3,
                };
                if bad {
                    out.push(format!("vertex {} is {} with degree {d}", v.id, v.color.as_str()));
                }
            }
        }
    }
    for a in 0..n {
        if let Some(r) = attached_subtree(stage, a) {
            let i = attachment_stage(stage, a);
            let diam = r.diameter(stage);
            if diam >= pow2_inv(i) {
                out.push(format!("subtree at {a} attached at stage {i} has diameter {diam}"));
            }
        }
    }
    out
}

/// Violations of the bonding map from `next` onto `prev`: it must fix the
/// old vertices, send every new vertex to its attachment mark, and hit every
/// old vertex.
pub fn bonding_violations(prev: &TreeStage, next: &TreeStage) -> Vec<String> {
    let mut out = Vec::new();
    let Some(bond) = next.bonding() else {
        out.push("stage has no bonding map".into());
        return out;
    };
    let old = prev.vertices().len();
    let mut hit = vec![false; old];
    for (v, &b) in bond.iter().enumerate() {
        if b >= old {
            out.push(format!("vertex {v} bonds outside the previous stage"));
            continue;
        }
        hit[b] = true;
        if v < old && b != v {
            out.push(format!("old vertex {v} moved to {b}"));
        }
        if v >= old && Some(b) != next.vertex(v).parent {
            out.push(format!("new vertex {v} not collapsed to its mark"));
        }
    }
    if let Some(missed) = hit.iter().position(|h| !h) {
        out.push(format!("bonding misses vertex {missed}"));
    }
    // Subtrees attached in this step hang from the previous stage's newest marks.
    for a in (0..old).filter(|&a| attachment_stage(next, a) == next.index) {
        if let Some(r) = attached_subtree(next, a) {
            for v in r.vertices() {
                if *v != a && bond[*v] != a {
                    out.push(format!("vertex {v} of T({a}) not collapsed to {a}"));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrite::stage::GeometricPoint;

    #[test]
    fn marks_are_dyadic_inside_blocks() {
        let m = arc_marks(2, 1, false);
        assert_eq!(m, vec![(q(1, 4), Color::Red), (q(5, 8), Color::Green)]);
        let m = arc_marks(2, 2, true);
        assert_eq!(
            m,
            vec![
                (q(1, 8), Color::Green),
                (q(1, 4), Color::Green),
                (q(9, 16), Color::Red),
                (q(5, 8), Color::Red)
            ]
        );
    }

    #[test]
    fn twocolor_base_stage() {
        let x0 = build_twocolor_stage(0, 1).unwrap();
        assert_eq!(x0.degree(0), 4);
        assert_eq!(x0.vertex(0).color, Color::Red);
        assert_eq!(x0.leaves().len(), 4);
        assert_eq!(arcs_at(&x0, 0).len(), 4);
        assert!(invariant_violations(&x0).is_empty());
    }

    #[test]
    fn twocolor_tower_is_sound() {
        let tower = build_twocolor_tower(3, 2, 1).unwrap();
        for s in &tower {
            assert_eq!(invariant_violations(s), Vec::<String>::new());
        }
        for w in tower.windows(2) {
            assert_eq!(bonding_violations(&w[0], &w[1]), Vec::<String>::new());
        }
        let x1 = &tower[1];
        let red = (0..x1.vertices().len())
            .filter(|&v| x1.vertex(v).color == Color::Red && x1.degree(v) >= 3)
            .count();
        assert_eq!(red, 1 + 4);
    }

    #[test]
    fn wazewski_stages() {
        let s0 = build_wazewski_stage(&[Order::Finite(3)], 0, 1).unwrap();
        assert_eq!(s0.degree(0), 3);
        assert_eq!(s0.leaves().len(), 3);
        let s = build_wazewski_stage(&[Order::Finite(3), Order::Finite(4)], 2, 2).unwrap();
        assert!(invariant_violations(&s).is_empty());
        assert!(build_wazewski_stage(&[Order::Finite(2)], 1, 1).is_err());
        assert!(build_wazewski_stage(&[Order::Omega], 1, 2).is_err());
        let w = build_wazewski_stage(&[Order::Omega], 1, 3).unwrap();
        assert!(invariant_violations(&w).is_empty());
    }

    #[test]
    fn every_old_edge_gets_a_new_ramification() {
        let prev = build_wazewski_stage(&[Order::Finite(3)], 1, 1).unwrap();
        let next = build_wazewski_stage(&[Order::Finite(3)], 2, 1).unwrap();
        for e in prev.edges() {
            let arc = next.arc_between(&GeometricPoint::Vertex(e.u), &GeometricPoint::Vertex(e.v));
            let inner = &arc.points[1..arc.points.len() - 1];
            assert!(inner.iter().any(|p| match p {
                GeometricPoint::Vertex(v) => next.degree(*v) == 3 && next.vertex(*v).gen == 2,
                _ => false,
            }));
        }
    }
}
