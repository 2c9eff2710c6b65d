//! Finite geometric trees with exact rational edge lengths.

use std::collections::VecDeque;
use std::fmt;

use crate::rational::{abs_diff, one, zero, Rational};

use super::region::Region;
use super::TreeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Green,
    Uncolored,
}

impl Color {
    pub fn as_str(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Uncolored => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Color> {
        match s {
            "red" => Some(Color::Red),
            "green" => Some(Color::Green),
            "none" => Some(Color::Uncolored),
            _ => None,
        }
    }

    pub fn opposite(self) -> Color {
        match self {
            Color::Red => Color::Green,
            Color::Green => Color::Red,
            Color::Uncolored => Color::Uncolored,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Endpoint,
    Regular,
    Ramification,
}

impl Role {
    pub fn of_degree(d: usize) -> Role {
        match d {
            0 | 1 => Role::Endpoint,
            2 => Role::Regular,
            _ => Role::Ramification,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Endpoint => "endpoint",
            Role::Regular => "regular",
            Role::Ramification => "ramification",
        }
    }
}

/// Ramification order allowed in a Wazewski stage; `Omega` is realized as
/// degree equal to the stage width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Omega,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Omega => f.write_str("w"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageMode {
    Wazewski { orders: Vec<Order>, width: u32 },
    /// `blocks` colored blocks per arc, `marks` dyadic marks in each block.
    TwoColor { blocks: u32, marks: u32 },
}

impl StageMode {
    pub fn is_twocolor(&self) -> bool {
        matches!(self, StageMode::TwoColor { .. })
    }

    /// Degree realizing an order in this stage.
    pub fn degree_of(&self, o: Order) -> u32 {
        match (self, o) {
            (_, Order::Finite(n)) => n,
            (StageMode::Wazewski { width, .. }, Order::Omega) => *width,
            (StageMode::TwoColor { .. }, Order::Omega) => u32::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: usize,
    pub color: Color,
    /// Construction step that created the vertex.
    pub gen: u32,
    /// Vertex this one hangs from: the attachment mark of its arc, or the
    /// sprouting vertex of its branch.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: Rational,
}

impl Edge {
    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A vertex, or a point strictly inside an edge at fraction `t` from `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeometricPoint {
    Vertex(usize),
    OnEdge(usize, Rational),
}

impl fmt::Display for GeometricPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometricPoint::Vertex(v) => write!(f, "v{v}"),
            GeometricPoint::OnEdge(e, t) => write!(f, "e{e}@{}/{}", t.numer(), t.denom()),
        }
    }
}

impl GeometricPoint {
    /// Inverse of the display form: `v3` or `e2@1/4`.
    pub fn parse(s: &str) -> Option<GeometricPoint> {
        if let Some(rest) = s.strip_prefix('v') {
            return rest.parse().ok().map(GeometricPoint::Vertex);
        }
        let (e, t) = s.strip_prefix('e')?.split_once('@')?;
        Some(GeometricPoint::OnEdge(e.parse().ok()?, crate::rational::parse_q(t)?))
    }
}

/// A branch at a point: leave along `edge` heading to vertex `toward`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    pub edge: usize,
    pub toward: usize,
}

/// The unique path between two points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub points: Vec<GeometricPoint>,
    pub length: Rational,
}

/// Kind of a point up to homeomorphism of the stage: what a homeomorphism
/// must preserve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointType {
    Endpoint,
    Regular,
    Ramification { order: usize, color: Color },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStage {
    pub index: u32,
    pub mode: StageMode,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    bonding: Option<Vec<usize>>,
    adj: Vec<Vec<(usize, usize)>>,
    up: Vec<Option<(usize, usize)>>,
    depth: Vec<u32>,
    root_dist: Vec<Rational>,
}

impl TreeStage {
    /// Validates that the edges form a tree on `0..vertices.len()` with
    /// positive lengths and computes the rooting at vertex 0.
    pub fn from_parts(
        index: u32,
        mode: StageMode,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        bonding: Option<Vec<usize>>,
    ) -> Result<Self, TreeError> {
        let n = vertices.len();
        if n == 0 {
            return Err(TreeError::NotATree("no vertices".into()));
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.id != i {
                return Err(TreeError::NotATree(format!("vertex ids not contiguous at {i}")));
            }
        }
        if edges.len() + 1 != n {
            return Err(TreeError::NotATree(format!("{} vertices but {} edges", n, edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n || e.u == e.v {
                return Err(TreeError::NotATree(format!("edge {i} has bad endpoints")));
            }
            if e.len <= zero() {
                return Err(TreeError::NotATree(format!("edge {i} has non-positive length")));
            }
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        if let Some(b) = &bonding {
            if b.len() != n {
                return Err(TreeError::NotATree("bonding map has wrong length".into()));
            }
        }
        let mut up = vec![None; n];
        let mut depth = vec![0u32; n];
        let mut root_dist = vec![zero(); n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(a) = queue.pop_front() {
            for &(b, e) in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    count += 1;
                    up[b] = Some((a, e));
                    depth[b] = depth[a] + 1;
                    root_dist[b] = &root_dist[a] + &edges[e].len;
                    queue.push_back(b);
                }
            }
        }
        if count != n {
            return Err(TreeError::NotATree("edges do not connect all vertices".into()));
        }
        Ok(TreeStage {
            index,
            mode,
            vertices,
            edges,
            bonding,
            adj,
            up,
            depth,
            root_dist,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn bonding(&self) -> Option<&[usize]> {
        self.bonding.as_deref()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn role(&self, v: usize) -> Role {
        Role::of_degree(self.degree(v))
    }

    /// Parent vertex and edge in the rooting at vertex 0.
    pub fn up(&self, v: usize) -> Option<(usize, usize)> {
        self.up[v]
    }

    pub fn root_distance(&self, v: usize) -> &Rational {
        &self.root_dist[v]
    }

    /// Children of `v` in the rooting at vertex 0, with the connecting edge.
    pub fn children(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let parent = self.up[v].map(|(p, _)| p);
        self.adj[v].iter().copied().filter(move |&(w, _)| Some(w) != parent)
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a].iter().find(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    pub fn check_point(&self, p: &GeometricPoint) -> Result<(), TreeError> {
        match p {
            GeometricPoint::Vertex(v) if *v < self.vertices.len() => Ok(()),
            GeometricPoint::Vertex(v) => Err(TreeError::UnknownVertex(*v)),
            GeometricPoint::OnEdge(e, _) if *e >= self.edges.len() => Err(TreeError::UnknownEdge(*e)),
            GeometricPoint::OnEdge(_, t) if *t <= zero() || *t >= one() => Err(TreeError::BadParam(p.to_string())),
            GeometricPoint::OnEdge(..) => Ok(()),
        }
    }

    /// Point at fraction `t` of edge `e`, collapsing `t = 0, 1` to vertices.
    pub fn point(&self, e: usize, t: Rational) -> GeometricPoint {
        let edge = &self.edges[e];
        if t <= zero() {
            GeometricPoint::Vertex(edge.u)
        } else if t >= one() {
            GeometricPoint::Vertex(edge.v)
        } else {
            GeometricPoint::OnEdge(e, t)
        }
    }

    /// Point on edge `e` at distance `s` from its end `from`.
    pub fn point_from(&self, e: usize, from: usize, s: &Rational) -> GeometricPoint {
        let edge = &self.edges[e];
        let frac = s / &edge.len;
        if from == edge.u {
            self.point(e, frac)
        } else {
            self.point(e, one() - frac)
        }
    }

    /// Fraction of `p` along edge `e`, if `p` lies on the closed edge.
    pub fn edge_param(&self, p: &GeometricPoint, e: usize) -> Option<Rational> {
        let edge = &self.edges[e];
        match p {
            GeometricPoint::Vertex(v) if *v == edge.u => Some(zero()),
            GeometricPoint::Vertex(v) if *v == edge.v => Some(one()),
            GeometricPoint::OnEdge(f, t) if *f == e => Some(t.clone()),
            _ => None,
        }
    }

    /// Vertices reachable from `p` at zero extra cost, with their distance.
    fn anchors(&self, p: &GeometricPoint) -> Vec<(usize, Rational)> {
        match p {
            GeometricPoint::Vertex(v) => vec![(*v, zero())],
            GeometricPoint::OnEdge(e, t) => {
                let edge = &self.edges[*e];
                vec![(edge.u, t * &edge.len), (edge.v, (one() - t) * &edge.len)]
            }
        }
    }

    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.depth[a] > self.depth[b] {
            a = self.up[a].expect("non-root").0;
        }
        while self.depth[b] > self.depth[a] {
            b = self.up[b].expect("non-root").0;
        }
        while a != b {
            a = self.up[a].expect("non-root").0;
            b = self.up[b].expect("non-root").0;
        }
        a
    }

    pub fn vertex_distance(&self, a: usize, b: usize) -> Rational {
        let c = self.lca(a, b);
        &self.root_dist[a] + &self.root_dist[b] - &self.root_dist[c] * Rational::from_integer(2.into())
    }

    /// Vertices on the path from `a` to `b`, inclusive.
    pub fn vertex_path(&self, a: usize, b: usize) -> Vec<usize> {
        let c = self.lca(a, b);
        let mut left = vec![a];
        let mut x = a;
        while x != c {
            x = self.up[x].expect("non-root").0;
            left.push(x);
        }
        let mut right = Vec::new();
        let mut y = b;
        while y != c {
            right.push(y);
            y = self.up[y].expect("non-root").0;
        }
        left.extend(right.into_iter().rev());
        left
    }

    fn best_anchors(&self, p: &GeometricPoint, q: &GeometricPoint) -> (usize, usize, Rational) {
        let mut best: Option<(usize, usize, Rational)> = None;
        for (a, da) in self.anchors(p) {
            for (b, db) in self.anchors(q) {
                let d = &da + &db + self.vertex_distance(a, b);
                if best.as_ref().map_or(true, |(_, _, bd)| d < *bd) {
                    best = Some((a, b, d));
                }
            }
        }
        best.expect("anchors are nonempty")
    }

    pub fn path_distance(&self, p: &GeometricPoint, q: &GeometricPoint) -> Rational {
        if let (GeometricPoint::OnEdge(e, s), GeometricPoint::OnEdge(f, t)) = (p, q) {
            if e == f {
                return abs_diff(s, t) * &self.edges[*e].len;
            }
        }
        self.best_anchors(p, q).2
    }

    pub fn arc_between(&self, p: &GeometricPoint, q: &GeometricPoint) -> Arc {
        if p == q {
            return Arc {
                points: vec![p.clone()],
                length: zero(),
            };
        }
        if let (GeometricPoint::OnEdge(e, _), GeometricPoint::OnEdge(f, _)) = (p, q) {
            if e == f {
                return Arc {
                    points: vec![p.clone(), q.clone()],
                    length: self.path_distance(p, q),
                };
            }
        }
        let (a, b, length) = self.best_anchors(p, q);
        let mut points = Vec::new();
        if !matches!(p, GeometricPoint::Vertex(_)) {
            points.push(p.clone());
        }
        points.extend(self.vertex_path(a, b).into_iter().map(GeometricPoint::Vertex));
        if !matches!(q, GeometricPoint::Vertex(_)) {
            points.push(q.clone());
        }
        Arc { points, length }
    }

    /// Edge carrying the segment between two consecutive arc points.
    pub fn segment_edge(&self, a: &GeometricPoint, b: &GeometricPoint) -> usize {
        match (a, b) {
            (GeometricPoint::OnEdge(e, _), _) | (_, GeometricPoint::OnEdge(e, _)) => *e,
            (GeometricPoint::Vertex(x), GeometricPoint::Vertex(y)) => {
                self.edge_between(*x, *y).expect("consecutive arc vertices are adjacent")
            }
        }
    }

    /// The point of `[p, q]` at distance `s` from `p` (clamped to the arc).
    pub fn point_along(&self, p: &GeometricPoint, q: &GeometricPoint, s: &Rational) -> GeometricPoint {
        if *s <= zero() {
            return p.clone();
        }
        let arc = self.arc_between(p, q);
        let mut rem = s.clone();
        for w in arc.points.windows(2) {
            let e = self.segment_edge(&w[0], &w[1]);
            let ta = self.edge_param(&w[0], e).expect("on segment edge");
            let tb = self.edge_param(&w[1], e).expect("on segment edge");
            let seg = abs_diff(&ta, &tb) * &self.edges[e].len;
            if rem < seg {
                let t = &ta + (&tb - &ta) * (&rem / &seg);
                return self.point(e, t);
            }
            rem -= seg;
        }
        q.clone()
    }

    /// `z` lies on the arc `[x, y]`.
    pub fn is_between(&self, x: &GeometricPoint, z: &GeometricPoint, y: &GeometricPoint) -> bool {
        self.path_distance(x, z) + self.path_distance(z, y) == self.path_distance(x, y)
    }

    /// The unique point common to `[x1,x2]`, `[x1,x3]` and `[x2,x3]`.
    pub fn median(&self, x1: &GeometricPoint, x2: &GeometricPoint, x3: &GeometricPoint) -> GeometricPoint {
        let d12 = self.path_distance(x1, x2);
        let d13 = self.path_distance(x1, x3);
        let d23 = self.path_distance(x2, x3);
        let s = (d12 + d13 - d23) / Rational::from_integer(2.into());
        self.point_along(x1, x2, &s)
    }

    pub fn directions_at(&self, x: &GeometricPoint) -> Vec<Direction> {
        match x {
            GeometricPoint::Vertex(v) => self.adj[*v].iter().map(|&(w, e)| Direction { edge: e, toward: w }).collect(),
            GeometricPoint::OnEdge(e, _) => {
                let edge = &self.edges[*e];
                vec![Direction { edge: *e, toward: edge.u }, Direction { edge: *e, toward: edge.v }]
            }
        }
    }

    pub fn order_of(&self, x: &GeometricPoint) -> usize {
        self.directions_at(x).len()
    }

    pub fn point_type(&self, x: &GeometricPoint) -> PointType {
        match x {
            GeometricPoint::OnEdge(..) => PointType::Regular,
            GeometricPoint::Vertex(v) => match self.degree(*v) {
                0 | 1 => PointType::Endpoint,
                2 => PointType::Regular,
                d => PointType::Ramification {
                    order: d,
                    color: self.vertices[*v].color,
                },
            },
        }
    }

    /// Branch at `x` containing `y`.
    pub fn direction(&self, x: &GeometricPoint, y: &GeometricPoint) -> Result<Direction, TreeError> {
        if x == y {
            return Err(TreeError::SamePoint(x.to_string()));
        }
        let arc = self.arc_between(x, y);
        let e = self.segment_edge(&arc.points[0], &arc.points[1]);
        let edge = &self.edges[e];
        let toward = match x {
            GeometricPoint::Vertex(v) => edge.other(*v),
            GeometricPoint::OnEdge(_, t) => {
                let next = self.edge_param(&arc.points[1], e).expect("on edge");
                if next > *t {
                    edge.v
                } else {
                    edge.u
                }
            }
        };
        Ok(Direction { edge: e, toward })
    }

    /// Closure of the component of the complement of `x` in direction `dir`.
    pub fn component(&self, x: &GeometricPoint, dir: Direction) -> Region {
        let mut r = Region::new();
        let edge = &self.edges[dir.edge];
        match x {
            GeometricPoint::Vertex(v) => {
                r.add_vertex(*v);
                r.add_full_edge(self, dir.edge);
            }
            GeometricPoint::OnEdge(_, t) => {
                if dir.toward == edge.u {
                    r.add_piece(self, dir.edge, zero(), t.clone());
                } else {
                    r.add_piece(self, dir.edge, t.clone(), one());
                }
            }
        }
        self.flood(&mut r, dir.toward, dir.edge);
        r
    }

    /// Adds everything reachable from `start` without crossing `blocked`.
    pub(crate) fn flood(&self, r: &mut Region, start: usize, blocked: usize) {
        let mut stack = vec![(start, blocked)];
        r.add_vertex(start);
        while let Some((a, from)) = stack.pop() {
            for &(b, e) in &self.adj[a] {
                if e != from {
                    r.add_full_edge(self, e);
                    stack.push((b, e));
                }
            }
        }
    }

    pub fn components_at(&self, x: &GeometricPoint) -> Vec<Region> {
        self.directions_at(x).into_iter().map(|d| self.component(x, d)).collect()
    }

    /// `C_x(y)`: the component of the complement of `x` holding `y`, plus `x`.
    pub fn component_toward(&self, x: &GeometricPoint, y: &GeometricPoint) -> Result<Region, TreeError> {
        Ok(self.component(x, self.direction(x, y)?))
    }

    /// `C_{x,y} = C_x(y) ∩ C_y(x)`.
    pub fn between_region(&self, x: &GeometricPoint, y: &GeometricPoint) -> Result<Region, TreeError> {
        Ok(self.component_toward(x, y)?.intersect(&self.component_toward(y, x)?))
    }

    /// Smallest subtree containing all `pts`.
    pub fn hull(&self, pts: &[GeometricPoint]) -> Region {
        let mut r = Region::new();
        let Some(p0) = pts.first() else {
            return r;
        };
        r.add_point(self, p0);
        for p in &pts[1..] {
            r.add_arc(self, &self.arc_between(p0, p));
        }
        r
    }

    pub fn whole(&self) -> Region {
        let mut r = Region::new();
        self.flood(&mut r, 0, usize::MAX);
        r
    }

    pub fn diameter(&self) -> Rational {
        self.whole().diameter(self)
    }
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
    fn star_metric() {
        let s = star(3, int(1));
        assert_eq!(s.path_distance(&v(1), &v(2)), int(2));
        assert_eq!(s.path_distance(&v(1), &v(1)), zero());
        let p = GeometricPoint::OnEdge(0, q(1, 4));
        assert_eq!(s.path_distance(&p, &v(0)), q(1, 4));
        assert_eq!(s.path_distance(&p, &v(2)), q(5, 4));
        assert_eq!(s.median(&v(1), &v(2), &v(3)), v(0));
        assert_eq!(s.median(&v(1), &v(1), &v(3)), v(1));
        assert_eq!(s.order_of(&v(0)), 3);
        assert_eq!(s.order_of(&p), 2);
        assert_eq!(s.order_of(&v(2)), 1);
    }

    #[test]
    fn arcs_and_along() {
        let s = star(3, int(1));
        let a = s.arc_between(&v(1), &v(2));
        assert_eq!(a.points, vec![v(1), v(0), v(2)]);
        assert_eq!(a.length, int(2));
        let adj = s.arc_between(&v(0), &v(1));
        assert_eq!(adj.length, int(1));
        let mid = s.point_along(&v(1), &v(2), &q(1, 2));
        assert_eq!(s.path_distance(&mid, &v(1)), q(1, 2));
        assert!(s.is_between(&v(1), &mid, &v(2)));
        assert!(!s.is_between(&v(1), &v(3), &v(2)));
    }

    #[test]
    fn components() {
        let s = star(4, int(1));
        let comps = s.components_at(&v(0));
        assert_eq!(comps.len(), 4);
        let c = s.component_toward(&v(0), &v(2)).unwrap();
        assert!(c.contains(&s, &v(2)));
        assert!(c.contains(&s, &v(0)));
        assert!(!c.contains(&s, &v(1)));
        assert!(c.boundary(&s).contains(&v(0)));
        assert!(s.component_toward(&v(0), &v(0)).is_err());
    }
}
