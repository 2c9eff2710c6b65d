//! Homeomorphisms witnessing proximality, approximation of `p_{a,b}`,
//! rigidity and minimality, each checked against its bound before it is
//! returned.

use std::collections::HashMap;

use crate::dendrite::{Direction, GeometricPoint, PointType, Region, TreeError, TreeStage};
use crate::rational::{int, min_q, one, pow2_inv, zero, Rational};

use super::embed::{embed, median_closure};
use super::homeo::{Outside, TreeHomeo};
use super::partial::{back_and_forth, leaf_class, PartialHomeo};
use super::DynError;

const CUT_TRIES: usize = 40;

fn positive(eps: &Rational) -> Result<(), DynError> {
    if *eps <= zero() {
        return Err(TreeError::NonPositive(eps.clone()).into());
    }
    Ok(())
}

fn endpoint(stage: &TreeStage, p: &GeometricPoint) -> Result<usize, DynError> {
    stage.check_point(p)?;
    match p {
        GeometricPoint::Vertex(v) if stage.degree(*v) == 1 => Ok(*v),
        _ => Err(DynError::Incompatible(format!("{p} is not an endpoint"))),
    }
}

/// `p` lies in the closed subtree below vertex `c` (rooting at vertex 0).
fn below(stage: &TreeStage, c: usize, p: &GeometricPoint) -> bool {
    let w = match p {
        GeometricPoint::Vertex(w) => *w,
        GeometricPoint::OnEdge(e, _) => {
            let edge = stage.edge(*e);
            if stage.up(edge.v).map(|(_, f)| f) == Some(*e) {
                edge.v
            } else {
                edge.u
            }
        }
    };
    stage.lca(c, w) == c
}

/// Height and diameter of the subtree below each vertex.
fn subtree_sizes(stage: &TreeStage) -> (Vec<Rational>, Vec<Rational>) {
    let n = stage.vertices().len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| stage.root_distance(*b).cmp(stage.root_distance(*a)));
    let mut height = vec![zero(); n];
    let mut diam = vec![zero(); n];
    for v in order {
        let mut top: Vec<Rational> = Vec::new();
        let mut d = zero();
        for (c, e) in stage.children(v) {
            top.push(&stage.edge(e).len + &height[c]);
            if diam[c] > d {
                d = diam[c].clone();
            }
        }
        top.sort_by(|a, b| b.cmp(a));
        if let Some(h) = top.first() {
            height[v] = h.clone();
        }
        let span = top.iter().take(2).fold(zero(), |a, b| a + b);
        diam[v] = if span > d { span } else { d };
    }
    (height, diam)
}

fn first_leaf_below(stage: &TreeStage, mut c: usize) -> usize {
    while let Some((w, _)) = stage.children(c).next() {
        c = w;
    }
    c
}

/// A homeomorphism bringing `x` and `y` within `eps`: cut at a regular
/// point `c` whose far side `C` is small and misses both, then swap the
/// sides: the hull of `x`, `y`, `c` goes into `C` and a leaf arc of `C`
/// comes back out, all fixing `c`.
pub fn proximal_witness(
    stage: &TreeStage,
    x: &GeometricPoint,
    y: &GeometricPoint,
    eps: &Rational,
) -> Result<TreeHomeo, DynError> {
    stage.check_point(x)?;
    stage.check_point(y)?;
    positive(eps)?;
    if x == y {
        return Err(TreeError::SamePoint(x.to_string()).into());
    }
    if stage.path_distance(x, y) < *eps {
        return Ok(TreeHomeo::identity());
    }
    let (height, diam) = subtree_sizes(stage);
    let on_edge = |p: &GeometricPoint, e: usize| matches!(p, GeometricPoint::OnEdge(f, _) if *f == e);
    let mut cuts: Vec<(Rational, usize, usize, Rational)> = Vec::new();
    for c in 1..stage.vertices().len() {
        let (_, e) = stage.up(c).expect("non-root vertex");
        if diam[c] >= *eps || height[c] >= *eps || below(stage, c, x) || below(stage, c, y) || on_edge(x, e) || on_edge(y, e) {
            continue;
        }
        let s = min_q(stage.edge(e).len.clone(), eps - &height[c]) / int(2);
        let size = if &s + &height[c] > diam[c] { &s + &height[c] } else { diam[c].clone() };
        cuts.push((size, c, e, s));
    }
    cuts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (size, c, e, s) in cuts.into_iter().take(CUT_TRIES) {
        let cut = stage.point_from(e, c, &s);
        let small = stage.component(&cut, Direction { edge: e, toward: c });
        let inner = GeometricPoint::Vertex(first_leaf_below(stage, c));
        let Some(outer) = stage.leaves().into_iter().find(|&l| !below(stage, c, &GeometricPoint::Vertex(l))) else {
            continue;
        };
        let src = median_closure(stage, &[cut.clone(), x.clone(), y.clone(), inner.clone()]);
        let fixed: Vec<Option<GeometricPoint>> = src
            .iter()
            .map(|p| {
                if *p == cut {
                    Some(cut.clone())
                } else if *p == inner {
                    Some(GeometricPoint::Vertex(outer))
                } else {
                    None
                }
            })
            .collect();
        let span = stage.path_distance(&cut, x) + stage.path_distance(&cut, y);
        let Some(tgt) = embed(stage, &src, &fixed, &small, &(size / span)) else {
            continue;
        };
        let Ok(h) = TreeHomeo::new(stage, src.into_iter().zip(tgt).collect(), Outside::Undefined) else {
            continue;
        };
        let (hx, hy) = (h.apply(stage, x).expect("node"), h.apply(stage, y).expect("node"));
        if stage.path_distance(&hx, &hy) < *eps {
            return Ok(h);
        }
    }
    Err(DynError::Resolution(format!("no small side avoiding {x} and {y} for eps {eps}")))
}

/// Memo of component diameters toward a fixed endpoint.
#[derive(Debug, Default)]
pub struct CutCache {
    diam: HashMap<(GeometricPoint, GeometricPoint), Rational>,
}

impl CutCache {
    fn diameter_toward(&mut self, stage: &TreeStage, z: &GeometricPoint, a: &GeometricPoint) -> Rational {
        self.diam
            .entry((z.clone(), a.clone()))
            .or_insert_with(|| stage.component_toward(z, a).expect("distinct").diameter(stage))
            .clone()
    }
}

/// Regular points `z` of `[a, b]` with `diam C_z(a) < eps`, farthest from
/// `a` first: three per edge of the arc, before `limit`.
fn small_cuts(
    stage: &TreeStage,
    a: &GeometricPoint,
    b: &GeometricPoint,
    limit: &Rational,
    eps: &Rational,
    cache: &mut CutCache,
) -> Vec<GeometricPoint> {
    let arc = stage.arc_between(a, b);
    let mut out = Vec::new();
    let mut start = zero();
    'scan: for w in arc.points.windows(2) {
        let seg = stage.path_distance(&w[0], &w[1]);
        for f in [Rational::new(1.into(), 2.into()), Rational::new(3.into(), 4.into()), Rational::new(7.into(), 8.into())] {
            let at = &start + &seg * f;
            if at >= *limit {
                break 'scan;
            }
            let z = stage.point_along(a, b, &at);
            if !matches!(z, GeometricPoint::OnEdge(..)) {
                continue;
            }
            if cache.diameter_toward(stage, &z, a) >= *eps {
                break 'scan;
            }
            out.push(z);
        }
        start += seg;
    }
    out.reverse();
    out
}

/// A homeomorphism fixing `a` and `b` that moves every sample point other
/// than `b` into a component at `a` of diameter below `eps`: cut `[a, b]`
/// at `y` next to `b` (past every sample point) and at `z` next to `a`,
/// then map `C_y(a)` onto part of `C_z(a)` and `C_y(b)` onto `C_z(b)`.
pub fn pab_approx(
    stage: &TreeStage,
    a: &GeometricPoint,
    b: &GeometricPoint,
    sample: &[GeometricPoint],
    eps: &Rational,
) -> Result<TreeHomeo, DynError> {
    pab_approx_cached(stage, a, b, sample, eps, &mut CutCache::default())
}

pub fn pab_approx_cached(
    stage: &TreeStage,
    a: &GeometricPoint,
    b: &GeometricPoint,
    sample: &[GeometricPoint],
    eps: &Rational,
    cache: &mut CutCache,
) -> Result<TreeHomeo, DynError> {
    endpoint(stage, a)?;
    endpoint(stage, b)?;
    positive(eps)?;
    if a == b {
        return Err(TreeError::SamePoint(a.to_string()).into());
    }
    for x in sample {
        stage.check_point(x)?;
    }
    let arc = stage.arc_between(a, b);
    let last = &arc.points[arc.points.len() - 2];
    let mut gap = stage.path_distance(last, b);
    for x in sample.iter().filter(|x| *x != b) {
        let d = stage.path_distance(&stage.median(a, b, x), b);
        if d < gap {
            gap = d;
        }
    }
    let dy = gap / int(2);
    let y = stage.point_along(b, a, &dy);
    let from_a = stage.path_distance(a, &y);
    let mut src_base = vec![a.clone(), y.clone(), b.clone()];
    src_base.extend(sample.iter().filter(|x| *x != b).cloned());
    let src = median_closure(stage, &src_base);
    for z in small_cuts(stage, a, b, &from_a, eps, cache).into_iter().take(6) {
        let room = stage.component_toward(&z, a)?;
        let fixed: Vec<Option<GeometricPoint>> = src
            .iter()
            .map(|p| {
                if p == a || p == b {
                    Some(p.clone())
                } else if *p == y {
                    Some(z.clone())
                } else {
                    None
                }
            })
            .collect();
        let scale = stage.path_distance(a, &z) / &from_a;
        let Some(tgt) = embed(stage, &src, &fixed, &room, &scale) else {
            continue;
        };
        let Ok(h) = TreeHomeo::new(stage, src.iter().cloned().zip(tgt).collect(), Outside::Undefined) else {
            continue;
        };
        let ok = sample.iter().all(|x| {
            let hx = h.apply(stage, x).expect("sample points are nodes");
            if x == b {
                hx == *b
            } else {
                stage.path_distance(&hx, a) < *eps
            }
        });
        if ok {
            return Ok(h);
        }
    }
    Err(DynError::Resolution(format!("no admissible cut near {a} for eps {eps}")))
}

/// One element of a rigid sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidStep {
    pub n: u32,
    pub a: GeometricPoint,
    pub b: GeometricPoint,
    pub homeo: TreeHomeo,
    /// A point the map moves.
    pub moved: GeometricPoint,
    /// Largest displacement over the sample.
    pub displacement: Rational,
}

/// `g_1, ..., g_N`: around the midpoint `c` of the longest edge, `a_n` and
/// `b_n` sit on either side of `c` with `diam [a_n, b_n] <= 2^-n`, and
/// `g_n` pushes `c` to the first quarter of `[a_n, b_n]`, fixing
/// everything outside.
pub fn rigidity_sequence(stage: &TreeStage, count: u32, sample: &[GeometricPoint]) -> Result<Vec<RigidStep>, DynError> {
    let (e, edge) = stage
        .edges()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.len.cmp(&b.1.len).then(b.0.cmp(&a.0)))
        .ok_or_else(|| DynError::Resolution("no edges".into()))?;
    let c = stage.point(e, Rational::new(1.into(), 2.into()));
    let (u, v) = (GeometricPoint::Vertex(edge.u), GeometricPoint::Vertex(edge.v));
    let reach = min_q(edge.len.clone(), one());
    let mut out = Vec::new();
    for n in 1..=count {
        let delta = &reach * pow2_inv(n + 1);
        let a = stage.point_along(&c, &u, &delta);
        let b = stage.point_along(&c, &v, &delta);
        let quarter = stage.point_along(&a, &b, &(&delta / int(2)));
        let homeo = TreeHomeo::new(stage, vec![(a.clone(), a.clone()), (c.clone(), quarter), (b.clone(), b.clone())], Outside::Identity)?;
        let displacement = sample
            .iter()
            .map(|x| stage.path_distance(x, &homeo.apply(stage, x).expect("total")))
            .max()
            .unwrap_or_else(zero);
        out.push(RigidStep {
            n,
            a,
            b,
            homeo,
            moved: c.clone(),
            displacement,
        });
    }
    Ok(out)
}

/// Pairs of distinct leaves within `eps` of `y` whose open arc carries a
/// point of type `want`, closest pairs first.
fn target_pairs(stage: &TreeStage, y: &GeometricPoint, eps: &Rational, want: PointType) -> Vec<(usize, usize)> {
    let mut near: Vec<(Rational, usize)> = stage
        .leaves()
        .into_iter()
        .map(|l| (stage.path_distance(y, &GeometricPoint::Vertex(l)), l))
        .filter(|(d, _)| d < eps)
        .collect();
    near.sort();
    near.truncate(12);
    let mut pairs = Vec::new();
    for (i, (di, f1)) in near.iter().enumerate() {
        for (dj, f2) in &near[i + 1..] {
            let (p, q) = (GeometricPoint::Vertex(*f1), GeometricPoint::Vertex(*f2));
            let fits = want == PointType::Regular
                || stage
                    .arc_between(&p, &q)
                    .points
                    .iter()
                    .any(|m| *m != p && *m != q && stage.point_type(m) == want);
            if fits {
                pairs.push((if di > dj { di.clone() } else { dj.clone() }, *f1, *f2));
            }
        }
    }
    pairs.sort();
    pairs.into_iter().map(|(_, a, b)| (a, b)).collect()
}

/// A homeomorphism taking the non-endpoint `x` within `eps` of `y`: pin
/// leaves `e1, e2` around `x` to leaves `f1, f2` near `y` of the same
/// endpoint classes, so `h(x)` lands on `[f1, f2]`.
pub fn minimal_witness(
    stage: &TreeStage,
    x: &GeometricPoint,
    y: &GeometricPoint,
    eps: &Rational,
) -> Result<TreeHomeo, DynError> {
    if !stage.mode.is_twocolor() {
        return Err(TreeError::WrongMode("minimality witnesses need a two-color stage".into()).into());
    }
    stage.check_point(x)?;
    stage.check_point(y)?;
    positive(eps)?;
    let want = stage.point_type(x);
    if want == PointType::Endpoint {
        return Err(DynError::Incompatible(format!("{x} is an endpoint")));
    }
    if x == y {
        return Ok(TreeHomeo::identity());
    }
    let leaves = stage.leaves();
    let class: HashMap<usize, _> = leaves.iter().map(|&l| Ok((l, leaf_class(stage, l)?))).collect::<Result<_, DynError>>()?;
    let side: HashMap<usize, Direction> = leaves
        .iter()
        .map(|&l| Ok((l, stage.direction(x, &GeometricPoint::Vertex(l))?)))
        .collect::<Result<_, DynError>>()?;
    for (f1, f2) in target_pairs(stage, y, eps, want).into_iter().take(CUT_TRIES) {
        let mut pins = None;
        'search: for &e1 in &leaves {
            if class[&e1] != class[&f1] {
                continue;
            }
            for &e2 in &leaves {
                if side[&e1] != side[&e2] && class[&e2] == class[&f2] {
                    pins = Some((e1, e2));
                    break 'search;
                }
            }
        }
        let Some((e1, e2)) = pins else { continue };
        let vx = |i: usize| GeometricPoint::Vertex(i);
        let marks: Vec<GeometricPoint> = leaves.iter().map(|&l| vx(l)).collect();
        let Ok(mut ph) = back_and_forth(stage, &marks, &marks, [(vx(e1), vx(f1)), (vx(e2), vx(f2))], 0) else {
            continue;
        };
        let Ok(hx) = PartialHomeo::refine(&mut ph, stage, x, true) else {
            continue;
        };
        if stage.path_distance(&hx, y) < *eps && stage.is_between(&vx(f1), &hx, &vx(f2)) {
            return ph.to_homeo(stage);
        }
    }
    Err(DynError::Resolution(format!("no leaf pair near {y} hosts the type of {x} within {eps}")))
}

/// `h_n` fixing `a` and `b` with `h_n(b_n) = a_n`, where `a_n`, `b_n` are
/// ramification points of `[a, b]` of order 4 (even `n`) or 3 (odd `n`)
/// moving out toward `a` and `b` until the stage runs out of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PabSequence {
    pub a: GeometricPoint,
    pub b: GeometricPoint,
    pub steps: Vec<(u32, GeometricPoint, GeometricPoint, TreeHomeo)>,
}

impl PabSequence {
    /// Per step: every sample value is within `d(a, a_n)` of its
    /// `p_{a,b}` value, and `b` is fixed exactly.
    pub fn matches(&self, stage: &TreeStage, sample: &[GeometricPoint]) -> Vec<bool> {
        self.steps
            .iter()
            .map(|(_, an, _, h)| {
                let radius = stage.path_distance(&self.a, an);
                sample.iter().all(|x| match h.apply(stage, x) {
                    Some(hx) if *x == self.b => hx == self.b,
                    Some(hx) => stage.path_distance(&hx, &self.a) <= radius,
                    None => false,
                })
            })
            .collect()
    }

    /// First index from which every step matches.
    pub fn threshold(&self, stage: &TreeStage, sample: &[GeometricPoint]) -> Option<u32> {
        let m = self.matches(stage, sample);
        let k = m.iter().rposition(|ok| !ok).map_or(0, |i| i + 1);
        self.steps.get(k).map(|s| s.0)
    }

    /// Nine points spread over `[a, b']` plus `b`, where `b'` is the
    /// nearer-to-`a` of the last `b_n` of each parity.
    pub fn default_sample(&self, stage: &TreeStage) -> Vec<GeometricPoint> {
        let last: Vec<&GeometricPoint> = self.steps.iter().rev().take(2).map(|s| &s.2).collect();
        let far = last
            .into_iter()
            .min_by_key(|p| stage.path_distance(&self.a, p))
            .cloned()
            .unwrap_or_else(|| self.b.clone());
        let d = stage.path_distance(&self.a, &far);
        let mut out: Vec<GeometricPoint> = (0..9)
            .map(|k| stage.point_along(&self.a, &far, &(&d * Rational::new(k.into(), 10.into()))))
            .collect();
        out.push(self.b.clone());
        out
    }
}

pub fn twocolor_pab_sequence(
    stage: &TreeStage,
    a: &GeometricPoint,
    b: &GeometricPoint,
    count: u32,
) -> Result<PabSequence, DynError> {
    if !stage.mode.is_twocolor() {
        return Err(TreeError::WrongMode("needs a two-color stage".into()).into());
    }
    let (la, lb) = (endpoint(stage, a)?, endpoint(stage, b)?);
    for l in [la, lb] {
        if leaf_class(stage, l)? != crate::dendrite::EndpointClass::Alternating {
            return Err(DynError::Incompatible(format!("v{l} is not alternating")));
        }
    }
    let arc = stage.arc_between(a, b).points;
    let of_order = |k: usize| -> Vec<GeometricPoint> {
        arc.iter().filter(|p| matches!(stage.point_type(p), PointType::Ramification { order, .. } if order == k)).cloned().collect()
    };
    let (fours, threes) = (of_order(4), of_order(3));
    if fours.len() < 2 || threes.len() < 2 {
        return Err(DynError::Resolution("[a, b] needs two ramification points of each order".into()));
    }
    let mut steps = Vec::new();
    for n in 1..=count {
        let list = if n % 2 == 0 { &fours } else { &threes };
        let mid = (list.len() - 1) / 2;
        let k = (n / 2) as usize;
        let an = list[mid.saturating_sub(k)].clone();
        let bn = list[(mid + 1 + k).min(list.len() - 1)].clone();
        let h = TreeHomeo::new(stage, vec![(a.clone(), a.clone()), (bn.clone(), an.clone()), (b.clone(), b.clone())], Outside::Undefined)?;
        steps.push((n, an, bn, h));
    }
    Ok(PabSequence {
        a: a.clone(),
        b: b.clone(),
        steps,
    })
}

/// Approximants of `p_{a,b_i}` evaluated at every `b_j`: entry `(i, j)` is
/// the value at `b_j` of `pab_approx(a, b_i, [b_j], eps)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllisFamily {
    pub a: GeometricPoint,
    pub bs: Vec<GeometricPoint>,
    pub values: Vec<Vec<GeometricPoint>>,
}

impl EllisFamily {
    /// Approximants of `p_{a,b_i}` and `p_{a,b_j}` differ at `b_i`.
    pub fn distinguishable(&self, i: usize, j: usize) -> bool {
        self.values[i][i] != self.values[j][i]
    }

    pub fn all_distinguishable(&self) -> bool {
        let n = self.bs.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.distinguishable(i, j)))
    }
}

pub fn ellis_family(stage: &TreeStage, a: &GeometricPoint, bs: &[GeometricPoint], eps: &Rational) -> Result<EllisFamily, DynError> {
    let mut cache = CutCache::default();
    let mut values = Vec::new();
    for bi in bs {
        let mut row = Vec::new();
        for bj in bs {
            let h = pab_approx_cached(stage, a, bi, std::slice::from_ref(bj), eps, &mut cache)?;
            row.push(h.apply(stage, bj).expect("sample point"));
        }
        values.push(row);
    }
    Ok(EllisFamily {
        a: a.clone(),
        bs: bs.to_vec(),
        values,
    })
}

/// Support of a rigid step: `C_{a_n, b_n}`.
pub fn rigid_support(stage: &TreeStage, step: &RigidStep) -> Result<Region, DynError> {
    Ok(stage.between_region(&step.a, &step.b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrite::build::{build_twocolor_stage, build_wazewski_stage, star};
    use crate::dendrite::Order;
    use crate::rational::q;

    fn v(i: usize) -> GeometricPoint {
        GeometricPoint::Vertex(i)
    }

    #[test]
    fn proximal_trivial_and_star() {
        let s = star(4, int(1));
        assert!(proximal_witness(&s, &v(1), &v(2), &int(3)).unwrap().is_identity());
        // The hull of two arms branches at the center, and no side of a cut
        // short enough carries a branch point.
        assert!(matches!(proximal_witness(&s, &v(1), &v(2), &int(1)), Err(DynError::Resolution(_))));
    }

    #[test]
    fn proximal_on_wazewski() {
        let s = build_wazewski_stage(&[Order::Finite(3)], 3, 1).unwrap();
        let leaves = s.leaves();
        let h = proximal_witness(&s, &v(leaves[0]), &v(leaves[leaves.len() - 1]), &q(1, 2)).unwrap();
        let d = s.path_distance(&h.apply(&s, &v(leaves[0])).unwrap(), &h.apply(&s, &v(leaves[leaves.len() - 1])).unwrap());
        assert!(d < q(1, 2));
    }

    #[test]
    fn pab_fixes_b_and_squeezes_rest() {
        let s = build_wazewski_stage(&[Order::Finite(3)], 3, 1).unwrap();
        let leaves = s.leaves();
        let (a, b) = (v(leaves[0]), v(leaves[5]));
        let h = pab_approx(&s, &a, &b, &[b.clone()], &q(1, 2)).unwrap();
        assert_eq!(h.apply(&s, &b), Some(b.clone()));
        let sample = vec![v(leaves[2]), v(0), s.point(3, q(1, 3))];
        let h = pab_approx(&s, &a, &b, &sample, &q(1, 2)).unwrap();
        for x in &sample {
            assert!(s.path_distance(&h.apply(&s, x).unwrap(), &a) < q(1, 2));
        }
    }

    #[test]
    fn rigid_steps_shrink() {
        let s = star(3, int(1));
        let sample: Vec<GeometricPoint> = (0..4).map(v).chain([s.point(0, q(1, 2)), s.point(0, q(5, 8))]).collect();
        let steps = rigidity_sequence(&s, 6, &sample).unwrap();
        for w in steps.windows(2) {
            assert!(w[1].displacement <= w[0].displacement);
        }
        for st in &steps {
            assert!(!st.homeo.is_identity());
            assert!(st.displacement <= pow2_inv(st.n));
            assert_ne!(st.homeo.apply(&s, &st.moved).unwrap(), st.moved);
        }
    }

    #[test]
    fn minimal_on_twocolor() {
        let s = build_twocolor_stage(3, 1).unwrap();
        let x = v(0);
        let y = v(*s.leaves().last().unwrap());
        let h = minimal_witness(&s, &x, &y, &q(1, 2)).unwrap();
        assert!(s.path_distance(&h.apply(&s, &x).unwrap(), &y) < q(1, 2));
    }

    #[test]
    fn twocolor_pab_moves_bn_to_an() {
        let s = build_twocolor_stage(3, 1).unwrap();
        let alt: Vec<usize> = s
            .leaves()
            .into_iter()
            .filter(|&l| leaf_class(&s, l).unwrap() == crate::dendrite::EndpointClass::Alternating)
            .collect();
        let seq = alt
            .iter()
            .flat_map(|&a| alt.iter().map(move |&b| (a, b)))
            .filter(|(a, b)| a != b)
            .find_map(|(a, b)| twocolor_pab_sequence(&s, &v(a), &v(b), 8).ok())
            .expect("some alternating pair hosts the sequence");
        assert_eq!(seq.steps.len(), 8);
        for (n, an, bn, h) in &seq.steps {
            let order = if n % 2 == 0 { 4 } else { 3 };
            assert!(matches!(s.point_type(an), PointType::Ramification { order: o, .. } if o == order));
            assert_eq!(s.point_type(an), s.point_type(bn));
            assert_eq!(h.apply(&s, bn).as_ref(), Some(an));
            assert_eq!(h.apply(&s, &seq.a).as_ref(), Some(&seq.a));
            assert_eq!(h.apply(&s, &seq.b).as_ref(), Some(&seq.b));
        }
        let sample = seq.default_sample(&s);
        assert!(seq.threshold(&s, &sample).is_some());
    }

    #[test]
    fn ellis_rows_separate() {
        let s = build_wazewski_stage(&[Order::Finite(3)], 3, 1).unwrap();
        let leaves = s.leaves();
        let a = v(leaves[0]);
        let bs: Vec<GeometricPoint> = leaves[1..].iter().step_by(7).map(|&l| v(l)).collect();
        let fam = ellis_family(&s, &a, &bs, &q(1, 4)).unwrap();
        for (i, b) in bs.iter().enumerate() {
            assert_eq!(&fam.values[i][i], b);
        }
        assert!(fam.all_distinguishable());
    }
}
