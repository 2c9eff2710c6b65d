//! Endpoints of the two-color dendrite at finite precision.
//!
//! An endpoint of the limit is addressed by a thread of marks
//! `t_0, t_1, ..., t_k`: `t_0` is a mark on an arm of `X_0` and `t_{j+1}`
//! is a mark on an arc attached at `t_j`. The marks converge to the
//! endpoint, and the ramification points on its arc tail are the colored
//! vertices passed on the way.

use super::build::arcs_at;
use super::stage::{Color, TreeStage};
use super::TreeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndpointKind {
    Green,
    Red,
    Alternating,
}

impl EndpointKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "green" => Some(EndpointKind::Green),
            "red" => Some(EndpointKind::Red),
            "alternating" => Some(EndpointKind::Alternating),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndpointClass {
    GreenSoFar,
    RedSoFar,
    Alternating,
    Undetermined,
}

impl EndpointClass {
    pub fn matches(self, kind: EndpointKind) -> bool {
        matches!(
            (self, kind),
            (EndpointClass::GreenSoFar, EndpointKind::Green)
                | (EndpointClass::RedSoFar, EndpointKind::Red)
                | (EndpointClass::Alternating, EndpointKind::Alternating)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EndpointAddress {
    pub thread: Vec<usize>,
}

impl EndpointAddress {
    pub fn depth(&self) -> usize {
        self.thread.len().saturating_sub(1)
    }

    /// Each `t_{j+1}` hangs from `t_j` and `t_0` is an arm mark.
    pub fn validate(&self, stage: &TreeStage) -> Result<(), TreeError> {
        let n = stage.vertices().len();
        for (j, &t) in self.thread.iter().enumerate() {
            if t >= n {
                return Err(TreeError::UnknownVertex(t));
            }
            let v = stage.vertex(t);
            let expected = if j == 0 { None } else { Some(self.thread[j - 1]) };
            if v.color == Color::Uncolored || v.gen as usize != j || v.parent != expected {
                return Err(TreeError::BadThread(format!("mark {t} at position {j}")));
            }
        }
        Ok(())
    }

    /// Uncolored endpoint closing the arc that carries the last mark.
    pub fn tip(&self, stage: &TreeStage) -> usize {
        let last = *self.thread.last().expect("nonempty thread");
        let key = (stage.vertex(last).parent, stage.vertex(last).gen);
        let mut cur = last;
        loop {
            let next = stage
                .neighbors(cur)
                .iter()
                .map(|&(x, _)| x)
                .find(|&x| x > cur && (stage.vertex(x).parent, stage.vertex(x).gen) == key);
            match next {
                Some(x) => cur = x,
                None => return cur,
            }
        }
    }

    /// Colors of the colored vertices on the path `t_1 -> t_k`.
    pub fn tail_colors(&self, stage: &TreeStage) -> Vec<Color> {
        if self.thread.len() < 2 {
            return Vec::new();
        }
        stage
            .vertex_path(self.thread[1], *self.thread.last().expect("nonempty"))
            .into_iter()
            .map(|v| stage.vertex(v).color)
            .filter(|c| *c != Color::Uncolored)
            .collect()
    }
}

pub fn classify_endpoint(stage: &TreeStage, addr: &EndpointAddress) -> Result<EndpointClass, TreeError> {
    if !stage.mode.is_twocolor() {
        return Err(TreeError::WrongMode("endpoint classes need a two-color stage".into()));
    }
    addr.validate(stage)?;
    if addr.depth() == 0 {
        return Ok(EndpointClass::Undetermined);
    }
    let colors = addr.tail_colors(stage);
    if colors.iter().all(|&c| c == Color::Green) {
        return Ok(EndpointClass::GreenSoFar);
    }
    if colors.iter().all(|&c| c == Color::Red) {
        return Ok(EndpointClass::RedSoFar);
    }
    let marks: Vec<Color> = addr.thread[1..].iter().map(|&t| stage.vertex(t).color).collect();
    if marks.len() >= 2 && marks.windows(2).all(|w| w[0] != w[1]) {
        Ok(EndpointClass::Alternating)
    } else {
        Ok(EndpointClass::Undetermined)
    }
}

fn marks_of(stage: &TreeStage, arc: &[usize], color: Color) -> Vec<usize> {
    arc.iter().copied().filter(|&v| stage.vertex(v).color == color).collect()
}

/// Thread of kind `kind` indexed by `bits`: the bit at step `j` picks which
/// of two admissible marks `t_{j+1}` is. Admissible marks keep the kind:
/// red threads take the first red mark of either `T0` arc at a red mark;
/// green threads take one of the first two green marks of the `T1` arc at a
/// green mark; alternating threads switch color each step.
pub fn type_witness(stage: &TreeStage, kind: EndpointKind, bits: &[bool]) -> Result<EndpointAddress, TreeError> {
    if !stage.mode.is_twocolor() {
        return Err(TreeError::WrongMode("endpoint witnesses need a two-color stage".into()));
    }
    if (stage.index as usize) < bits.len() {
        return Err(TreeError::InsufficientDepth {
            need: bits.len() as u32,
            have: stage.index,
        });
    }
    let arms = arcs_at(stage, 0);
    let first_color = if kind == EndpointKind::Green { Color::Green } else { Color::Red };
    let t0 = *marks_of(stage, &arms[0], first_color)
        .first()
        .ok_or(TreeError::NotEnoughMarks)?;
    let mut thread = vec![t0];
    for &bit in bits {
        let t = *thread.last().expect("nonempty");
        let c = stage.vertex(t).color;
        let want = match kind {
            EndpointKind::Alternating => c.opposite(),
            _ => c,
        };
        let arcs = arcs_at(stage, t);
        let next = if arcs.len() == 2 {
            marks_of(stage, &arcs[bit as usize], want).first().copied()
        } else {
            let arc = arcs.first().ok_or(TreeError::InsufficientDepth {
                need: bits.len() as u32,
                have: stage.index,
            })?;
            marks_of(stage, arc, want).get(bit as usize).copied()
        };
        thread.push(next.ok_or(TreeError::NotEnoughMarks)?);
    }
    Ok(EndpointAddress { thread })
}

/// Bit string from a `0`/`1` text.
pub fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrite::build::build_twocolor_stage;

    fn bits(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    #[test]
    fn root_thread_is_undetermined() {
        let s = build_twocolor_stage(2, 2).unwrap();
        let a = type_witness(&s, EndpointKind::Red, &[]).unwrap();
        assert_eq!(a.depth(), 0);
        assert_eq!(classify_endpoint(&s, &a).unwrap(), EndpointClass::Undetermined);
    }

    #[test]
    fn kinds_classify() {
        let s = build_twocolor_stage(3, 2).unwrap();
        for kind in [EndpointKind::Red, EndpointKind::Green, EndpointKind::Alternating] {
            for b in ["00", "01", "10", "11", "010", "111"] {
                let a = type_witness(&s, kind, &bits(b)).unwrap();
                assert!(classify_endpoint(&s, &a).unwrap().matches(kind), "{kind:?} {b}");
            }
        }
    }

    #[test]
    fn first_bit_separates() {
        let s = build_twocolor_stage(2, 2).unwrap();
        for kind in [EndpointKind::Red, EndpointKind::Alternating] {
            let a = type_witness(&s, kind, &bits("0")).unwrap();
            let b = type_witness(&s, kind, &bits("1")).unwrap();
            assert_ne!(a.thread[1], b.thread[1]);
            assert_eq!(a.thread[0], b.thread[0]);
        }
    }

    #[test]
    fn depth_is_checked() {
        let s = build_twocolor_stage(1, 1).unwrap();
        assert!(matches!(
            type_witness(&s, EndpointKind::Red, &bits("00")),
            Err(TreeError::InsufficientDepth { .. })
        ));
        assert!(matches!(
            type_witness(&s, EndpointKind::Green, &bits("1")),
            Err(TreeError::NotEnoughMarks)
        ));
    }
}
