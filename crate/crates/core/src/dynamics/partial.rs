//! Back-and-forth construction of homeomorphisms matching marked endpoints.

use crate::dendrite::endpoint::classify_endpoint;
use crate::dendrite::{EndpointAddress, EndpointClass, GeometricPoint, PointType, TreeError, TreeStage};

use super::homeo::{Outside, TreeHomeo};
use super::DynError;

/// Class of the endpoint approximated by a leaf of a two-color stage, read
/// off the thread of marks its arc hangs from.
pub fn leaf_class(stage: &TreeStage, leaf: usize) -> Result<EndpointClass, DynError> {
    if stage.degree(leaf) != 1 {
        return Err(DynError::Incompatible(format!("v{leaf} is not an endpoint")));
    }
    let mut thread = Vec::new();
    let mut cur = stage.vertex(leaf).parent;
    while let Some(t) = cur {
        thread.push(t);
        cur = stage.vertex(t).parent;
    }
    thread.reverse();
    Ok(classify_endpoint(stage, &EndpointAddress { thread })?)
}

/// Endpoints of equal type: any two in a Wazewski stage, equal classes in a
/// two-color stage.
pub(crate) fn same_kind(stage: &TreeStage, a: usize, b: usize) -> Result<bool, DynError> {
    if !stage.mode.is_twocolor() {
        return Ok(true);
    }
    Ok(leaf_class(stage, a)? == leaf_class(stage, b)?)
}

fn leaf(stage: &TreeStage, p: &GeometricPoint) -> Result<usize, DynError> {
    stage.check_point(p)?;
    match p {
        GeometricPoint::Vertex(v) if stage.degree(*v) == 1 => Ok(*v),
        _ => Err(DynError::Incompatible(format!("{p} is not an endpoint"))),
    }
}

/// Matched node pairs whose linear extension along links is a partial
/// homeomorphism, grown one arc at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialHomeo {
    nodes: Vec<(GeometricPoint, GeometricPoint)>,
    /// Matched marked endpoints, in matching order.
    pub matched: Vec<(usize, usize)>,
}

impl PartialHomeo {
    /// The arc map `[e1, e2] -> [f1, f2]`.
    pub fn pinned(stage: &TreeStage, pins: [(GeometricPoint, GeometricPoint); 2]) -> Result<Self, DynError> {
        let mut matched = Vec::new();
        for (e, f) in &pins {
            let (a, b) = (leaf(stage, e)?, leaf(stage, f)?);
            if !same_kind(stage, a, b)? {
                return Err(DynError::Incompatible(format!("{e} and {f} have different endpoint types")));
            }
            matched.push((a, b));
        }
        if pins[0].0 == pins[1].0 || pins[0].1 == pins[1].1 {
            return Err(TreeError::SamePoint(pins[0].0.to_string()).into());
        }
        let p = PartialHomeo {
            nodes: pins.to_vec(),
            matched,
        };
        p.to_homeo(stage)?;
        Ok(p)
    }

    pub fn nodes(&self) -> &[(GeometricPoint, GeometricPoint)] {
        &self.nodes
    }

    pub fn to_homeo(&self, stage: &TreeStage) -> Result<TreeHomeo, DynError> {
        TreeHomeo::new(stage, self.nodes.clone(), Outside::Undefined)
    }

    /// Adds a node pair after checking the result is still consistent.
    pub fn insert(&mut self, stage: &TreeStage, src: GeometricPoint, tgt: GeometricPoint) -> Result<(), DynError> {
        if self.nodes.iter().any(|(s, t)| *s == src && *t == tgt) {
            return Ok(());
        }
        self.nodes.push((src, tgt));
        if let Err(e) = self.to_homeo(stage) {
            self.nodes.pop();
            return Err(e);
        }
        Ok(())
    }

    /// Makes `r` (a point of the source hull, or of the target hull when
    /// `forward` is false) a node whose partner has the same type, chosen
    /// on the image of the link through `r`: the linear image if its type
    /// fits, else the nearest fitting vertex.
    pub fn refine(&mut self, stage: &TreeStage, r: &GeometricPoint, forward: bool) -> Result<GeometricPoint, DynError> {
        let h = self.to_homeo(stage)?;
        let h = if forward { h } else { h.inverse(stage) };
        if let Some((_, t)) = h.nodes().iter().find(|(s, _)| s == r) {
            return Ok(t.clone());
        }
        let &(k, j) = h
            .links()
            .iter()
            .find(|&&(k, j)| stage.is_between(&h.nodes()[k].0, r, &h.nodes()[j].0))
            .ok_or_else(|| DynError::Incompatible(format!("{r} is off the hull")))?;
        let linear = h.apply(stage, r).expect("on a link");
        let want = stage.point_type(r);
        let s = if stage.point_type(&linear) == want {
            linear
        } else {
            let (tk, tj) = (&h.nodes()[k].1, &h.nodes()[j].1);
            stage
                .arc_between(tk, tj)
                .points
                .into_iter()
                .filter(|p| p != tk && p != tj && stage.point_type(p) == want)
                .min_by_key(|p| (stage.path_distance(&linear, p), p.clone()))
                .ok_or_else(|| DynError::Resolution(format!("no {want:?} point on the image arc of {r}")))?
        };
        if forward {
            self.insert(stage, r.clone(), s.clone())?;
        } else {
            self.insert(stage, s.clone(), r.clone())?;
        }
        Ok(s)
    }

    /// One extension step: `forward` matches the least unmatched element of
    /// `marks_src` into `marks_tgt`, otherwise the other way round.
    fn extend(
        &mut self,
        stage: &TreeStage,
        marks_src: &[usize],
        marks_tgt: &[usize],
        forward: bool,
    ) -> Result<bool, DynError> {
        let side = |p: &(GeometricPoint, GeometricPoint)| if forward { p.0.clone() } else { p.1.clone() };
        let other = |p: &(GeometricPoint, GeometricPoint)| if forward { p.1.clone() } else { p.0.clone() };
        let here: Vec<GeometricPoint> = self.nodes.iter().map(side).collect();
        let there: Vec<GeometricPoint> = self.nodes.iter().map(other).collect();
        let Some(&e) = marks_src.iter().find(|&&e| !here.contains(&GeometricPoint::Vertex(e))) else {
            return Ok(false);
        };
        let ep = GeometricPoint::Vertex(e);
        let h = self.to_homeo(stage)?;
        let h = if forward { h } else { h.inverse(stage) };
        let r = h
            .links()
            .iter()
            .map(|&(k, j)| stage.median(&ep, &h.nodes()[k].0, &h.nodes()[j].0))
            .min_by_key(|m| stage.path_distance(&ep, m))
            .unwrap_or_else(|| here[0].clone());
        let s = self.refine(stage, &r, forward)?;
        let mut pick = None;
        for &f in marks_tgt {
            let fp = GeometricPoint::Vertex(f);
            if there.contains(&fp) || fp == s {
                continue;
            }
            let fresh = there.iter().all(|q| stage.is_between(&fp, &s, q));
            let kind = same_kind(stage, e, f)?;
            if fresh && kind {
                pick = Some(f);
                break;
            }
        }
        let f = pick.ok_or_else(|| DynError::Resolution(format!("no free marked endpoint beyond {s}")))?;
        let fp = GeometricPoint::Vertex(f);
        if forward {
            self.insert(stage, ep, fp)?;
            self.matched.push((e, f));
        } else {
            self.insert(stage, fp, ep)?;
            self.matched.push((f, e));
        }
        Ok(true)
    }

    /// Violations of: consistency of the skeleton, and equal types at
    /// matched ramification points.
    pub fn violations(&self, stage: &TreeStage) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.to_homeo(stage) {
            out.push(e.to_string());
        }
        for (s, t) in &self.nodes {
            if let PointType::Ramification { .. } = stage.point_type(s) {
                if stage.point_type(s) != stage.point_type(t) {
                    out.push(format!("{s} -> {t} changes the ramification type"));
                }
            }
        }
        out
    }
}

/// Starts from the pinned arc map and runs `steps` alternating extensions,
/// beginning with a backward one; each picks least-index marked endpoints.
pub fn back_and_forth(
    stage: &TreeStage,
    marks_e: &[GeometricPoint],
    marks_f: &[GeometricPoint],
    pins: [(GeometricPoint, GeometricPoint); 2],
    steps: usize,
) -> Result<PartialHomeo, DynError> {
    let es = marks_e.iter().map(|p| leaf(stage, p)).collect::<Result<Vec<_>, _>>()?;
    let fs = marks_f.iter().map(|p| leaf(stage, p)).collect::<Result<Vec<_>, _>>()?;
    let mut ph = PartialHomeo::pinned(stage, pins)?;
    for i in 0..steps {
        let forward = i % 2 == 1;
        let grew = if forward {
            ph.extend(stage, &es, &fs, true)?
        } else {
            ph.extend(stage, &fs, &es, false)?
        };
        if !grew && !ph.extend(stage, if forward { &fs } else { &es }, if forward { &es } else { &fs }, !forward)? {
            break;
        }
    }
    Ok(ph)
}
