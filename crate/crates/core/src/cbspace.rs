//! Countable compact subsets of the unit interval with prescribed
//! Cantor-Bendixson rank.
//!
//! The space `S(b)` for an ordinal `b` is a center point together with
//! countably many shrinking copies accumulating at it:
//!
//! * `S(0)` is a single point;
//! * copy `n` of `S(b+1)` is `S(b)`;
//! * copy `n` of `S(l)`, `l` a limit, is `S(l[n])` (canonical fundamental
//!   sequence).
//!
//! On an interval `[l, r]` the center sits at `l` and copy `n` occupies
//! `[l + (r-l)/(n+2), l + (r-l)/(n+1)]`. The center of `S(b)` has rank `b`
//! and `|S(b)|_CB = b + 1`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::rational::{abs_diff, int, one, zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("rank 0 is the empty space, which has no center to build from")]
    ZeroRank,
    #[error(
        "rank {0} is a limit: the first empty derivative of a compact space is never a limit \
         stage (nested nonempty compact sets meet)"
    )]
    LimitRank(Ordinal),
    #[error("address {addr} is invalid: step {step} descends below a single point")]
    InvalidAddress { addr: PointAddress, step: usize },
    #[error("interval must satisfy l < r")]
    EmptyInterval,
    #[error("malformed address {0:?}")]
    MalformedAddress(String),
}

/// Finite list of copy indices descending from the top center.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointAddress(pub Vec<u64>);

impl PointAddress {
    pub fn root() -> Self {
        PointAddress(Vec::new())
    }

    pub fn steps(&self) -> &[u64] {
        &self.0
    }

    pub fn child(&self, n: u64) -> Self {
        let mut steps = self.0.clone();
        steps.push(n);
        PointAddress(steps)
    }

    pub fn is_prefix_of(&self, other: &PointAddress) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for PointAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for PointAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for PointAddress {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(PointAddress::root());
        }
        s.split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map(PointAddress)
            .map_err(|_| SpaceError::MalformedAddress(s.to_string()))
    }
}

/// Subsets of a space closed under the derivative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseSubset {
    Empty,
    Finite(Vec<PointAddress>),
    /// All points of rank at least the threshold.
    RankFilter(Ordinal),
}

impl fmt::Display for BaseSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSubset::Empty => f.write_str("empty"),
            BaseSubset::Finite(pts) => {
                let parts: Vec<String> = pts.iter().map(|p| format!("[{p}]")).collect();
                write!(f, "finite{{{}}}", parts.join(";"))
            }
            BaseSubset::RankFilter(t) => write!(f, "rank>={t}"),
        }
    }
}

/// The clopen set `{a}` together with every copy of index `>= k` below `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: PointAddress,
    pub k: u64,
}

impl Cone {
    pub fn contains(&self, b: &PointAddress) -> bool {
        if !self.apex.is_prefix_of(b) {
            return false;
        }
        match b.0.get(self.apex.0.len()) {
            None => true,
            Some(&n) => n >= self.k,
        }
    }

    pub fn is_disjoint_from(&self, other: &Cone) -> bool {
        !(self.contains(&other.apex) || other.contains(&self.apex))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CBSpace {
    seed: Ordinal,
    left: Rational,
    right: Rational,
}

impl CBSpace {
    /// The space `S(seed)` on `[0, 1]`.
    pub fn with_seed(seed: Ordinal) -> Self {
        CBSpace {
            seed,
            left: zero(),
            right: one(),
        }
    }

    pub fn on_interval(seed: Ordinal, left: Rational, right: Rational) -> Result<Self, SpaceError> {
        if left >= right {
            return Err(SpaceError::EmptyInterval);
        }
        Ok(CBSpace { seed, left, right })
    }

    pub fn seed(&self) -> &Ordinal {
        &self.seed
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.left, &self.right)
    }

    /// Descriptor of copy `n` inside `S(desc)`; `None` for a single point.
    pub fn child_descriptor(desc: &Ordinal, n: u64) -> Option<Ordinal> {
        if desc.is_zero() {
            None
        } else if desc.is_successor() {
            Some(desc.predecessor().expect("successor"))
        } else {
            Some(desc.fundamental_sequence(n).expect("limit"))
        }
    }

    /// Descriptor and embedding interval of the copy an address ends in.
    fn locate(&self, a: &PointAddress) -> Result<(Ordinal, Rational, Rational), SpaceError> {
        let mut desc = self.seed.clone();
        let mut lo = self.left.clone();
        let mut hi = self.right.clone();
        for (i, &n) in a.0.iter().enumerate() {
            desc = Self::child_descriptor(&desc, n).ok_or_else(|| SpaceError::InvalidAddress {
                addr: a.clone(),
                step: i,
            })?;
            let w = &hi - &lo;
            let new_lo = &lo + &w / int(n as i64 + 2);
            hi = &lo + &w / int(n as i64 + 1);
            lo = new_lo;
        }
        Ok((desc, lo, hi))
    }

    pub fn is_valid(&self, a: &PointAddress) -> bool {
        self.locate(a).is_ok()
    }

    /// Rank of a point: the descriptor of the copy whose center it is.
    pub fn point_rank(&self, a: &PointAddress) -> Result<Ordinal, SpaceError> {
        self.locate(a).map(|(d, _, _)| d)
    }

    pub fn embed_point(&self, a: &PointAddress) -> Result<Rational, SpaceError> {
        self.locate(a).map(|(_, lo, _)| lo)
    }

    pub fn distance(&self, a: &PointAddress, b: &PointAddress) -> Result<Rational, SpaceError> {
        Ok(abs_diff(&self.embed_point(a)?, &self.embed_point(b)?))
    }

    pub fn contains(&self, s: &BaseSubset, a: &PointAddress) -> Result<bool, SpaceError> {
        let rank = self.point_rank(a)?;
        Ok(match s {
            BaseSubset::Empty => false,
            BaseSubset::Finite(pts) => pts.contains(a),
            BaseSubset::RankFilter(t) => rank >= *t,
        })
    }

    fn normalize(&self, s: BaseSubset) -> BaseSubset {
        match s {
            BaseSubset::RankFilter(t) if t > self.seed => BaseSubset::Empty,
            BaseSubset::Finite(pts) if pts.is_empty() => BaseSubset::Empty,
            other => other,
        }
    }

    /// The set of limit points of `s` inside `s`.
    pub fn cb_derivative(&self, s: &BaseSubset) -> BaseSubset {
        match s {
            BaseSubset::Empty | BaseSubset::Finite(_) => BaseSubset::Empty,
            BaseSubset::RankFilter(t) => self.normalize(BaseSubset::RankFilter(t.succ())),
        }
    }

    /// The derivative iterated `stages` times. Successor stages apply
    /// [`CBSpace::cb_derivative`]; at a limit `l` the chain of rank filters
    /// intersects to the filter at the supremum, so `RankFilter(t)` lands on
    /// `RankFilter(t + stages)`.
    pub fn iterate_derivative(&self, s: &BaseSubset, stages: &Ordinal) -> BaseSubset {
        if stages.is_zero() {
            return self.normalize(s.clone());
        }
        match s {
            BaseSubset::Empty | BaseSubset::Finite(_) => BaseSubset::Empty,
            BaseSubset::RankFilter(t) => self.normalize(BaseSubset::RankFilter(t.add(stages))),
        }
    }

    /// Least stage at which the iterated derivative of the whole space is
    /// empty.
    pub fn cb_rank(&self) -> Ordinal {
        let whole = BaseSubset::RankFilter(Ordinal::zero());
        // RankFilter(a) is nonempty exactly for a <= seed, so the first empty
        // stage is seed + 1.
        let rank = self.seed.succ();
        debug_assert_eq!(self.iterate_derivative(&whole, &rank), BaseSubset::Empty);
        debug_assert_ne!(self.iterate_derivative(&whole, &self.seed), BaseSubset::Empty);
        rank
    }

    /// Every valid address with at most `depth` steps, each step `< width`,
    /// in depth-first preorder.
    pub fn enumerate_points(&self, depth: usize, width: u64) -> Vec<PointAddress> {
        let mut out = Vec::new();
        self.enumerate_into(&PointAddress::root(), &self.seed, depth, width, &mut out);
        out
    }

    fn enumerate_into(&self, a: &PointAddress, desc: &Ordinal, depth: usize, width: u64, out: &mut Vec<PointAddress>) {
        out.push(a.clone());
        if depth == 0 {
            return;
        }
        for n in 0..width {
            if let Some(child) = Self::child_descriptor(desc, n) {
                self.enumerate_into(&a.child(n), &child, depth - 1, width, out);
            }
        }
    }

    /// The `k`-th basic clopen neighbourhood of `a`.
    pub fn neighborhood_cone(&self, a: &PointAddress, k: u64) -> Result<Cone, SpaceError> {
        self.locate(a)?;
        Ok(Cone { apex: a.clone(), k })
    }

    /// Half-open rational interval `[lo, hi)` whose trace on the space is the
    /// cone.
    pub fn cone_interval(&self, cone: &Cone) -> Result<(Rational, Rational), SpaceError> {
        let (_, lo, hi) = self.locate(&cone.apex)?;
        let w = &hi - &lo;
        let top = &lo + w / int(cone.k as i64 + 1);
        Ok((lo, top))
    }
}

pub fn build_space(target_rank: &Ordinal) -> Result<CBSpace, SpaceError> {
    if target_rank.is_zero() {
        return Err(SpaceError::ZeroRank);
    }
    if target_rank.is_limit() {
        return Err(SpaceError::LimitRank(target_rank.clone()));
    }
    Ok(CBSpace::with_seed(target_rank.predecessor().expect("successor")))
}
