//! Two-level systems `S(b) x {0,1}`, the parity flip, oscillation and the
//! transfinite epsilon-derivative.
//!
//! The carrier uses the max metric with an inter-level gap of exactly 1, so
//! every function here has oscillation 0 or 1 at every point and the
//! epsilon-derivative has a closed symbolic form:
//!
//! * continuous functions (identity, clopen level swaps) empty every set in
//!   one step;
//! * the parity flip with `0 < eps <= 1` shifts a rank filter by one and
//!   empties finite sets; for `eps > 1` it empties everything.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cbspace::{BaseSubset, CBSpace, Cone, PointAddress, SpaceError};
use crate::ordinal::{Ordinal, Parity};
use crate::rational::{max_q, one, q, zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BetaError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEps(Rational),
    #[error("level must be 0 or 1, got {0}")]
    BadLevel(u8),
    #[error("point {0} is not in the set")]
    NotInSet(SystemPoint),
    #[error("swap cones around [{0}] and [{1}] overlap")]
    OverlappingCones(PointAddress, PointAddress),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemPoint {
    pub base: PointAddress,
    pub level: u8,
}

impl SystemPoint {
    pub fn new(base: PointAddress, level: u8) -> Self {
        SystemPoint { base, level }
    }

    fn other_level(&self) -> SystemPoint {
        SystemPoint::new(self.base.clone(), 1 - self.level)
    }
}

impl fmt::Display for SystemPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]:{}", self.base, self.level)
    }
}

impl fmt::Debug for SystemPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemFunction {
    Identity,
    /// Swap levels over points of odd rank.
    ParityFlip,
    /// Swap levels over each listed cone; cones must be pairwise disjoint.
    ClopenLevelSwap(Vec<Cone>),
}

impl SystemFunction {
    /// Checked constructor for a level swap.
    pub fn clopen_swap(cones: Vec<Cone>) -> Result<Self, BetaError> {
        for (i, a) in cones.iter().enumerate() {
            for b in &cones[i + 1..] {
                if !a.is_disjoint_from(b) {
                    return Err(BetaError::OverlappingCones(a.apex.clone(), b.apex.clone()));
                }
            }
        }
        Ok(SystemFunction::ClopenLevelSwap(cones))
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self, SystemFunction::ParityFlip)
    }

    pub fn name(&self) -> &'static str {
        match self {
            SystemFunction::Identity => "identity",
            SystemFunction::ParityFlip => "parity-flip",
            SystemFunction::ClopenLevelSwap(_) => "clopen-swap",
        }
    }
}

/// Subsets of the carrier closed under the epsilon-derivative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivativeSet {
    Empty,
    Finite(Vec<SystemPoint>),
    /// Both levels over every base point of rank at least the threshold.
    RankFilter(Ordinal),
}

impl DerivativeSet {
    pub fn whole() -> Self {
        DerivativeSet::RankFilter(Ordinal::zero())
    }

    /// The carrier set lying over a base subset.
    pub fn over(base: &BaseSubset) -> Self {
        match base {
            BaseSubset::Empty => DerivativeSet::Empty,
            BaseSubset::Finite(pts) => DerivativeSet::Finite(
                pts.iter()
                    .flat_map(|p| [SystemPoint::new(p.clone(), 0), SystemPoint::new(p.clone(), 1)])
                    .collect(),
            ),
            BaseSubset::RankFilter(t) => DerivativeSet::RankFilter(t.clone()),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, DerivativeSet::Empty)
    }
}

impl fmt::Display for DerivativeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivativeSet::Empty => f.write_str("empty"),
            DerivativeSet::Finite(pts) => {
                let parts: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
                write!(f, "finite{{{}}}", parts.join(";"))
            }
            DerivativeSet::RankFilter(t) => write!(f, "rank>={t}"),
        }
    }
}

/// Probe grid for epsilon-independence checks.
pub fn eps_grid() -> Vec<Rational> {
    vec![q(1, 4), q(1, 2), q(3, 4), one()]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipSystem {
    base: CBSpace,
}

impl FlipSystem {
    pub fn new(base: CBSpace) -> Self {
        FlipSystem { base }
    }

    pub fn base(&self) -> &CBSpace {
        &self.base
    }

    fn check(&self, x: &SystemPoint) -> Result<Ordinal, BetaError> {
        if x.level > 1 {
            return Err(BetaError::BadLevel(x.level));
        }
        Ok(self.base.point_rank(&x.base)?)
    }

    /// Max metric: `max(|y - y'|, |i - j|)`.
    pub fn distance(&self, x: &SystemPoint, y: &SystemPoint) -> Result<Rational, BetaError> {
        self.check(x)?;
        self.check(y)?;
        let gap = if x.level == y.level { zero() } else { one() };
        Ok(max_q(self.base.distance(&x.base, &y.base)?, gap))
    }

    pub fn apply(&self, f: &SystemFunction, x: &SystemPoint) -> Result<SystemPoint, BetaError> {
        let rank = self.check(x)?;
        let swap = match f {
            SystemFunction::Identity => false,
            SystemFunction::ParityFlip => rank.parity() == Parity::Odd,
            SystemFunction::ClopenLevelSwap(cones) => cones.iter().any(|c| c.contains(&x.base)),
        };
        Ok(if swap { x.other_level() } else { x.clone() })
    }

    pub fn contains(&self, a: &DerivativeSet, x: &SystemPoint) -> Result<bool, BetaError> {
        let rank = self.check(x)?;
        Ok(match a {
            DerivativeSet::Empty => false,
            DerivativeSet::Finite(pts) => pts.contains(x),
            DerivativeSet::RankFilter(t) => rank >= *t,
        })
    }

    fn normalize(&self, a: DerivativeSet) -> DerivativeSet {
        match a {
            DerivativeSet::RankFilter(t) if t > *self.base.seed() => DerivativeSet::Empty,
            DerivativeSet::Finite(pts) if pts.is_empty() => DerivativeSet::Empty,
            other => other,
        }
    }

    pub fn oscillation(&self, f: &SystemFunction, x: &SystemPoint) -> Result<Rational, BetaError> {
        self.relative_oscillation(f, x, &DerivativeSet::whole())
    }

    /// Oscillation of `f` restricted to `a`, at `x in a`.
    ///
    /// For the parity flip inside `RankFilter(t)`: a point of rank `> t` is
    /// approached within the filter by points of rank `>= t` of both
    /// parities, which land on opposite levels, so the oscillation is the
    /// full gap. Points of rank exactly `t` are isolated in the filter.
    pub fn relative_oscillation(
        &self,
        f: &SystemFunction,
        x: &SystemPoint,
        a: &DerivativeSet,
    ) -> Result<Rational, BetaError> {
        if !self.contains(a, x)? {
            return Err(BetaError::NotInSet(x.clone()));
        }
        if f.is_continuous() {
            return Ok(zero());
        }
        let rank = self.check(x)?;
        Ok(match a {
            DerivativeSet::RankFilter(t) if rank > *t => one(),
            _ => zero(),
        })
    }

    /// `{x in a : osc(f, x, a) >= eps}`.
    pub fn eps_derivative(
        &self,
        f: &SystemFunction,
        a: &DerivativeSet,
        eps: &Rational,
    ) -> Result<DerivativeSet, BetaError> {
        check_eps(eps)?;
        if f.is_continuous() || *eps > one() {
            return Ok(DerivativeSet::Empty);
        }
        Ok(match self.normalize(a.clone()) {
            DerivativeSet::RankFilter(t) => self.normalize(DerivativeSet::RankFilter(t.succ())),
            _ => DerivativeSet::Empty,
        })
    }

    /// The derivative of `a` iterated `stages` times, limits taken as
    /// intersections. A decreasing chain of rank filters intersects to the
    /// filter at the supremum, so a shifting derivative sends
    /// `RankFilter(t)` to `RankFilter(t + stages)`.
    pub fn iterate_eps_derivative(
        &self,
        f: &SystemFunction,
        a: &DerivativeSet,
        eps: &Rational,
        stages: &Ordinal,
    ) -> Result<DerivativeSet, BetaError> {
        check_eps(eps)?;
        let a = self.normalize(a.clone());
        if stages.is_zero() {
            return Ok(a);
        }
        let one_step = self.eps_derivative(f, &a, eps)?;
        let shifts = match (&a, &one_step) {
            (DerivativeSet::RankFilter(t), DerivativeSet::RankFilter(u)) => {
                assert_eq!(*u, t.succ(), "derivative left the rank-filter family");
                true
            }
            _ => false,
        };
        Ok(match a {
            DerivativeSet::RankFilter(t) if shifts => self.normalize(DerivativeSet::RankFilter(t.add(stages))),
            _ if stages == &Ordinal::one() => one_step,
            // One step emptied a non-shifting set; everything after stays empty.
            _ => {
                assert!(one_step.is_empty(), "derivative left the symbolic family");
                DerivativeSet::Empty
            }
        })
    }

    /// Least stage at which the iterated epsilon-derivative of the whole
    /// carrier is empty.
    pub fn beta_rank_at_eps(&self, f: &SystemFunction, eps: &Rational) -> Result<Ordinal, BetaError> {
        let whole = DerivativeSet::whole();
        let first = self.eps_derivative(f, &whole, eps)?;
        let rank = if first.is_empty() {
            Ordinal::one()
        } else {
            // Shifting chain: stage s is RankFilter(s), nonempty iff s <= seed.
            self.base.seed().succ()
        };
        let at = self.iterate_eps_derivative(f, &whole, eps, &rank)?;
        assert!(at.is_empty(), "stage {rank} should be empty");
        if let Some(prev) = rank.predecessor().ok() {
            let before = self.iterate_eps_derivative(f, &whole, eps, &prev)?;
            assert!(!before.is_empty(), "stage {prev} should be nonempty");
        }
        Ok(rank)
    }

    /// Positive oscillation values attained anywhere on the carrier.
    pub fn positive_oscillation_values(&self, f: &SystemFunction) -> Vec<Rational> {
        // Non-isolated base points exist iff the seed is positive.
        if !f.is_continuous() && !self.base.seed().is_zero() {
            vec![one()]
        } else {
            Vec::new()
        }
    }

    /// Supremum over `eps > 0` of the epsilon rank, attained at the least
    /// positive oscillation value.
    pub fn beta_rank(&self, f: &SystemFunction) -> Ordinal {
        let probe = self
            .positive_oscillation_values(f)
            .into_iter()
            .min()
            .unwrap_or_else(one);
        let beta = self.beta_rank_at_eps(f, &probe).expect("probe is positive");
        for eps in eps_grid() {
            let at = self.beta_rank_at_eps(f, &eps).expect("grid is positive");
            if eps <= probe {
                assert_eq!(at, beta, "epsilon rank varies below the least oscillation value");
            } else {
                assert!(at <= beta);
            }
        }
        beta
    }

    /// A clopen level swap agreeing with the parity flip on `sample`.
    ///
    /// Each odd-rank sample point gets the cone `(a, k)` with `k` past every
    /// branch below `a` that leads to another sample point, so the cones are
    /// pairwise disjoint and contain no other sample point.
    pub fn ellis_approximant(&self, sample: &[SystemPoint]) -> Result<SystemFunction, BetaError> {
        let mut bases = BTreeSet::new();
        for x in sample {
            self.check(x)?;
            bases.insert(x.base.clone());
        }
        let mut cones = Vec::new();
        for a in &bases {
            if self.base.point_rank(a)?.parity() == Parity::Even {
                continue;
            }
            let depth = a.steps().len();
            let k = bases
                .iter()
                .filter(|b| b.steps().len() > depth && a.is_prefix_of(b))
                .map(|b| b.steps()[depth] + 1)
                .max()
                .unwrap_or(0);
            cones.push(self.base.neighborhood_cone(a, k)?);
        }
        SystemFunction::clopen_swap(cones)
    }
}

fn check_eps(eps: &Rational) -> Result<(), BetaError> {
    if *eps <= zero() {
        Err(BetaError::NonPositiveEps(eps.clone()))
    } else {
        Ok(())
    }
}

/// Diameter of a finite set of carrier points.
pub fn diameter(sys: &FlipSystem, pts: &[SystemPoint]) -> Result<Rational, BetaError> {
    let mut d = zero();
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i + 1..] {
            d = max_q(d, sys.distance(x, y)?);
        }
    }
    Ok(d)
}

/// Stages at which the derivative chains are compared: small naturals, every CNF
/// truncation of `alpha` and a few successors, the first fundamental
/// elements of limit truncations, and `alpha` itself.
pub fn milestone_stages(alpha: &Ordinal) -> Vec<Ordinal> {
    let mut out: BTreeSet<Ordinal> = (0..4u64).map(Ordinal::from).collect();
    let mut prefix = Ordinal::zero();
    for (e, c) in alpha.terms() {
        for _ in 0..*c {
            prefix = prefix.add(&Ordinal::omega_pow(e.clone()));
            let mut s = prefix.clone();
            for _ in 0..3 {
                out.insert(s.clone());
                s = s.succ();
            }
            if prefix.is_limit() {
                for n in 0..3 {
                    out.insert(prefix.fundamental_sequence(n).expect("limit"));
                }
            }
        }
    }
    out.insert(alpha.clone());
    out.into_iter().filter(|s| s <= alpha).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageLine {
    pub stage: Ordinal,
    pub cb: BaseSubset,
    pub eps: DerivativeSet,
    pub equal: bool,
}

impl fmt::Display for StageLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {} cb={} eps={} equal={}", self.stage, self.cb, self.eps, self.equal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub stages: Vec<StageLine>,
    pub beta: Ordinal,
    pub cb_rank: Ordinal,
    pub sampled: usize,
    pub sample_agree: usize,
}

impl RankReport {
    pub fn passed(&self) -> bool {
        self.beta == self.cb_rank && self.stages.iter().all(|s| s.equal) && self.sample_agree == self.sampled
    }
}

impl fmt::Display for RankReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stages {
            writeln!(f, "{s}")?;
        }
        writeln!(f, "rank beta={} cb={} equal={}", self.beta, self.cb_rank, self.beta == self.cb_rank)?;
        writeln!(f, "sample points={} agree={}", self.sampled, self.sample_agree)?;
        write!(f, "result {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

/// Base points for sampled membership: depth 4, widening until at least
/// `target` carrier points (two per base point) or the width cap.
fn membership_sample(space: &CBSpace, target: usize) -> Vec<PointAddress> {
    let mut width = 2;
    loop {
        let pts = space.enumerate_points(4, width);
        if 2 * pts.len() >= target || width >= 2 * target as u64 {
            return pts;
        }
        width += 1;
    }
}

/// Checks `beta(parity flip) = |base|_CB` and that the epsilon-derivative
/// chain equals the CB chain of the carrier at every milestone stage, for
/// every grid epsilon, symbolically and by sampled membership.
pub fn verify_rank_theorem(sys: &FlipSystem) -> RankReport {
    let f = SystemFunction::ParityFlip;
    let space = sys.base();
    let cb_rank = space.cb_rank();
    let beta = sys.beta_rank(&f);
    let whole_base = BaseSubset::RankFilter(Ordinal::zero());
    let whole = DerivativeSet::whole();
    let stages = milestone_stages(&cb_rank);
    let grid = eps_grid();

    let mut lines = Vec::new();
    let mut chains = Vec::new();
    for s in &stages {
        let cb = space.iterate_derivative(&whole_base, s);
        let mut equal = true;
        let mut shown = None;
        for eps in &grid {
            let e = sys.iterate_eps_derivative(&f, &whole, eps, s).expect("positive eps");
            equal &= e == DerivativeSet::over(&cb);
            if *eps == q(1, 2) {
                shown = Some(e.clone());
            }
            let prev = s
                .predecessor()
                .ok()
                .map(|p| sys.iterate_eps_derivative(&f, &whole, eps, &p).expect("positive eps"));
            chains.push((s.clone(), cb.clone(), eps.clone(), e, prev));
        }
        lines.push(StageLine {
            stage: s.clone(),
            cb,
            eps: shown.expect("grid holds 1/2"),
            equal,
        });
    }

    // Membership: structural rank vs both chains, and successor stages
    // rederived pointwise from the relative oscillation at the previous one.
    let sample = membership_sample(space, 1000);
    let mut sampled = 0;
    let mut agree = 0;
    for b in &sample {
        let rank = space.point_rank(b).expect("enumerated");
        for level in 0..2u8 {
            let x = SystemPoint::new(b.clone(), level);
            sampled += 1;
            let mut ok = true;
            for (s, cb_set, eps, set, prev) in &chains {
                let by_rank = rank >= *s;
                let cb = space.contains(cb_set, b).expect("enumerated");
                let in_eps = sys.contains(set, &x).expect("enumerated");
                ok &= by_rank == cb && cb == in_eps;
                if let Some(prev_set) = prev {
                    let pointwise = sys.contains(prev_set, &x).expect("enumerated")
                        && sys.relative_oscillation(&f, &x, prev_set).expect("member") >= *eps;
                    ok &= pointwise == in_eps;
                }
            }
            if ok {
                agree += 1;
            }
        }
    }

    RankReport {
        stages: lines,
        beta,
        cb_rank,
        sampled,
        sample_agree: agree,
    }
}

/// Largest distance from `f(x)` to `f(y)` over `y` in the enumerated part
/// of the `k`-th cone around `x`. Used as an oscillation oracle.
pub fn cone_image_spread(
    sys: &FlipSystem,
    f: &SystemFunction,
    x: &SystemPoint,
    k: u64,
    depth: usize,
    width: u64,
) -> Result<Rational, BetaError> {
    let cone = sys.base().neighborhood_cone(&x.base, k)?;
    let fx = sys.apply(f, x)?;
    let mut d = zero();
    for b in sys.base().enumerate_points(depth, width) {
        if cone.contains(&b) {
            let fy = sys.apply(f, &SystemPoint::new(b, x.level))?;
            d = max_q(d, sys.distance(&fx, &fy)?);
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cbspace::build_space;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn sys(alpha: &str) -> FlipSystem {
        FlipSystem::new(build_space(&o(alpha)).unwrap())
    }

    fn pt(a: &str, level: u8) -> SystemPoint {
        SystemPoint::new(a.parse().unwrap(), level)
    }

    #[test]
    fn parity_flip_moves_odd_ranks_only() {
        let s = sys("3");
        let f = SystemFunction::ParityFlip;
        assert_eq!(s.apply(&f, &pt("", 0)).unwrap(), pt("", 0));
        assert_eq!(s.apply(&f, &pt("4", 0)).unwrap(), pt("4", 1));
        assert_eq!(s.apply(&f, &pt("4,1", 1)).unwrap(), pt("4,1", 1));
    }

    #[test]
    fn oscillation_values() {
        let s = sys("3");
        let f = SystemFunction::ParityFlip;
        assert_eq!(s.oscillation(&SystemFunction::Identity, &pt("", 0)).unwrap(), zero());
        assert_eq!(s.oscillation(&f, &pt("0,0", 0)).unwrap(), zero());
        assert_eq!(s.oscillation(&f, &pt("", 1)).unwrap(), one());
    }

    #[test]
    fn cone_oracle_matches_closed_form() {
        let s = sys("3");
        let f = SystemFunction::ParityFlip;
        for x in [pt("", 0), pt("2", 1), pt("3,1", 0)] {
            let closed = s.oscillation(&f, &x).unwrap();
            for k in [1, 4, 16, 64] {
                assert_eq!(cone_image_spread(&s, &f, &x, k, 3, 70).unwrap(), closed);
            }
        }
    }

    #[test]
    fn relative_oscillation_inside_filter() {
        let s = sys("4");
        let f = SystemFunction::ParityFlip;
        let a = DerivativeSet::RankFilter(o("1"));
        assert_eq!(s.relative_oscillation(&f, &pt("0,0", 0), &a).unwrap(), zero());
        assert_eq!(s.relative_oscillation(&f, &pt("0", 0), &a).unwrap(), one());
        assert!(matches!(
            s.relative_oscillation(&f, &pt("0,0,0", 0), &a),
            Err(BetaError::NotInSet(_))
        ));
    }

    #[test]
    fn eps_derivative_forms() {
        let s = sys("3");
        let f = SystemFunction::ParityFlip;
        let w = DerivativeSet::whole();
        assert_eq!(s.eps_derivative(&SystemFunction::Identity, &w, &q(1, 2)).unwrap(), DerivativeSet::Empty);
        assert_eq!(s.eps_derivative(&f, &w, &q(1, 2)).unwrap(), DerivativeSet::RankFilter(o("1")));
        assert_eq!(s.eps_derivative(&f, &w, &q(2, 1)).unwrap(), DerivativeSet::Empty);
        assert!(matches!(s.eps_derivative(&f, &w, &zero()), Err(BetaError::NonPositiveEps(_))));
        let fin = DerivativeSet::Finite(vec![pt("", 0)]);
        assert_eq!(s.eps_derivative(&f, &fin, &q(1, 2)).unwrap(), DerivativeSet::Empty);
    }

    #[test]
    fn ranks() {
        assert_eq!(sys("5").beta_rank_at_eps(&SystemFunction::Identity, &q(1, 3)).unwrap(), o("1"));
        assert_eq!(sys("2").beta_rank_at_eps(&SystemFunction::ParityFlip, &q(1, 2)).unwrap(), o("2"));
        assert_eq!(sys("w+1").beta_rank_at_eps(&SystemFunction::ParityFlip, &q(1, 2)).unwrap(), o("w+1"));
        assert_eq!(sys("3").beta_rank(&SystemFunction::ParityFlip), o("3"));
        assert_eq!(sys("1").beta_rank(&SystemFunction::ParityFlip), o("1"));
        let swap = SystemFunction::clopen_swap(vec![Cone { apex: PointAddress::root(), k: 0 }]).unwrap();
        assert_eq!(sys("3").beta_rank(&swap), o("1"));
    }

    #[test]
    fn overlapping_cones_rejected() {
        let cones = vec![
            Cone { apex: PointAddress::root(), k: 0 },
            Cone { apex: "2".parse().unwrap(), k: 0 },
        ];
        assert!(SystemFunction::clopen_swap(cones).is_err());
    }

    #[test]
    fn approximant_agrees_on_sample() {
        let s = sys("2");
        let sample = vec![pt("", 0), pt("3", 1)];
        let g = s.ellis_approximant(&sample).unwrap();
        match &g {
            SystemFunction::ClopenLevelSwap(c) => assert_eq!(c, &vec![Cone { apex: PointAddress::root(), k: 4 }]),
            other => panic!("{other:?}"),
        }
        for x in &sample {
            assert_eq!(s.apply(&g, x).unwrap(), s.apply(&SystemFunction::ParityFlip, x).unwrap());
        }
        let even = s.ellis_approximant(&[pt("0", 0), pt("1", 1)]).unwrap();
        assert_eq!(even, SystemFunction::ClopenLevelSwap(vec![]));
    }

    #[test]
    fn milestones_cover_truncations() {
        let m = milestone_stages(&o("w*2+1"));
        for s in ["0", "3", "w", "w+2", "1", "w+1", "w*2", "w*2+1"] {
            assert!(m.contains(&o(s)), "{s}");
        }
        assert!(m.iter().all(|s| *s <= o("w*2+1")));
    }

    #[test]
    fn rank_report_small() {
        let r = verify_rank_theorem(&sys("2"));
        assert!(r.passed(), "{r}");
        assert!(r.sampled >= 1000);
        let text = r.to_string();
        assert!(text.contains("stage 1 cb=rank>=1 eps=rank>=1 equal=true"));
        assert!(text.contains("stage 2 cb=empty eps=empty equal=true"));
        let r0 = verify_rank_theorem(&sys("1"));
        assert_eq!(r0.beta, o("1"));
    }
}
