//! Verification suites. Each check builds its instances from a seed and
//! reports exact evidence; `run_suite` runs one check or all of them.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::betarank::{verify_rank_theorem, FlipSystem, SystemFunction, SystemPoint};
use crate::cbspace::{build_space, BaseSubset};
use crate::dendrite::build::{bonding_violations, build_twocolor_tower, invariant_violations, DEFAULT_BLOCKS};
use crate::dendrite::{build_twocolor_stage, build_wazewski_stage, EndpointClass, GeometricPoint, Order, PointType, TreeStage};
use crate::dynamics::finite_map::random_point;
use crate::dynamics::witness::rigid_support;
use crate::dynamics::{
    collapse_map, ellis_family, leaf_class, minimal_witness, pab_approx, proximal_witness, rigidity_sequence,
    stab_orbit_probe, tree_eps_derivative, twocolor_pab_sequence, verify_beta_le_2,
};
use crate::ordinal::{Ordinal, Parity};
use crate::rational::{fmt_q, int, pow2_inv, q, zero, Rational};
use crate::report::{Check, Report};

/// Check identifiers in running order.
pub const CHECKS: [&str; 12] = [
    "beta-rank",
    "cb-rank",
    "stagewise",
    "ellis-approximants",
    "dendrite-beta",
    "witness-bounds",
    "rigidity",
    "ellis-family",
    "twocolor-convergence",
    "stabilizer-orbit",
    "ordinal-arithmetic",
    "construction",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the instance count of randomized checks.
    pub trials: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 7, trials: None }
    }
}

impl SuiteConfig {
    fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default).max(1)
    }

    fn rng(&self, id: &str) -> ChaCha8Rng {
        let salt = CHECKS.iter().position(|c| *c == id).unwrap_or(CHECKS.len()) as u64;
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
    }
}

/// Runs the check named `suite`, or every check for `all`. Unknown names
/// return `None`.
pub fn run_suite(suite: &str, cfg: &SuiteConfig) -> Option<Report> {
    let ids: Vec<&str> = if suite == "all" {
        CHECKS.to_vec()
    } else if CHECKS.contains(&suite) {
        vec![suite]
    } else {
        return None;
    };
    Some(Report {
        suite: suite.to_string(),
        checks: ids.into_iter().map(|id| run_check(id, cfg)).collect(),
    })
}

pub fn run_check(id: &str, cfg: &SuiteConfig) -> Check {
    match id {
        "beta-rank" => beta_rank(),
        "cb-rank" => cb_rank(),
        "stagewise" => stagewise(),
        "ellis-approximants" => ellis_approximants(cfg),
        "dendrite-beta" => dendrite_beta(cfg),
        "witness-bounds" => witness_bounds(cfg),
        "rigidity" => rigidity(cfg),
        "ellis-family" => ellis_family_check(cfg),
        "twocolor-convergence" => twocolor_convergence(cfg),
        "stabilizer-orbit" => stabilizer_orbit(cfg),
        "ordinal-arithmetic" => ordinal_arithmetic(cfg),
        "construction" => construction(),
        other => Check::skip(other, "unknown check"),
    }
}

/// Target ranks of the parity-flip instances.
pub fn rank_instances() -> Vec<Ordinal> {
    ["2", "3", "5", "w+1", "w+2", "w*2+1", "w^2+1"]
        .iter()
        .map(|s| s.parse().expect("valid literal"))
        .collect()
}

fn beta_rank() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in rank_instances() {
        let beta = build_space(&alpha)
            .map(|s| FlipSystem::new(s).beta_rank(&SystemFunction::ParityFlip))
            .map(|b| b.to_string())
            .unwrap_or_else(|e| e.to_string());
        ok &= beta == alpha.to_string();
        parts.push(format!("{alpha}->{beta}"));
    }
    Check::new("beta-rank", ok, parts.join(" "))
}

fn cb_rank() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut compared = 0usize;
    for alpha in rank_instances() {
        let Ok(space) = build_space(&alpha) else {
            ok = false;
            parts.push(format!("{alpha}->error"));
            continue;
        };
        let rank = space.cb_rank();
        ok &= rank == alpha;
        let whole = BaseSubset::RankFilter(Ordinal::zero());
        let stages = crate::betarank::milestone_stages(&alpha);
        let chains: Vec<(Ordinal, BaseSubset)> = stages.iter().map(|s| (s.clone(), space.iterate_derivative(&whole, s))).collect();
        let mut disagree = 0usize;
        for a in space.enumerate_points(4, 6) {
            let r = space.point_rank(&a).expect("enumerated");
            for (s, set) in &chains {
                compared += 1;
                if space.contains(set, &a).expect("enumerated") != (r >= *s) {
                    disagree += 1;
                }
            }
        }
        ok &= disagree == 0;
        parts.push(format!("{alpha}->{rank}"));
    }
    Check::new("cb-rank", ok, format!("{} rank-oracle-comparisons={compared}", parts.join(" ")))
}

fn stagewise() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in rank_instances() {
        match build_space(&alpha) {
            Ok(space) => {
                let r = verify_rank_theorem(&FlipSystem::new(space));
                let good = r.passed() && r.sampled >= 1000;
                ok &= good;
                parts.push(format!("{alpha}:stages={},points={}/{}", r.stages.len(), r.sample_agree, r.sampled));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{alpha}:{e}"));
            }
        }
    }
    Check::new("stagewise", ok, parts.join(" "))
}

fn ellis_approximants(cfg: &SuiteConfig) -> Check {
    let id = "ellis-approximants";
    let mut rng = cfg.rng(id);
    let space = build_space(&"w+1".parse().expect("valid literal")).expect("buildable");
    let sys = FlipSystem::new(space);
    let pool: Vec<SystemPoint> = sys
        .base()
        .enumerate_points(4, 6)
        .into_iter()
        .flat_map(|b| [SystemPoint::new(b.clone(), 0), SystemPoint::new(b, 1)])
        .collect();
    let flip = SystemFunction::ParityFlip;
    let samples = cfg.trials(1000);
    let mut agree = 0usize;
    for _ in 0..samples {
        let k = rng.gen_range(1..=20);
        let sample: Vec<SystemPoint> = pool.choose_multiple(&mut rng, k).cloned().collect();
        let good = sys.ellis_approximant(&sample).is_ok_and(|g| {
            sample
                .iter()
                .all(|x| sys.apply(&g, x).ok() == sys.apply(&flip, x).ok())
        });
        agree += usize::from(good);
    }
    // Involution and bijectivity on a depth-3 enumeration.
    let grid: Vec<SystemPoint> = sys
        .base()
        .enumerate_points(3, 6)
        .into_iter()
        .flat_map(|b| [SystemPoint::new(b.clone(), 0), SystemPoint::new(b, 1)])
        .collect();
    let all: BTreeSet<&SystemPoint> = grid.iter().collect();
    let mut structural = 0usize;
    for f in [flip.clone(), sys.ellis_approximant(&grid[..grid.len().min(20)]).expect("valid sample")] {
        let images: Vec<SystemPoint> = grid.iter().map(|x| sys.apply(&f, x).expect("enumerated")).collect();
        let involution = grid
            .iter()
            .zip(&images)
            .all(|(x, y)| sys.apply(&f, y).expect("enumerated") == *x);
        let onto: BTreeSet<&SystemPoint> = images.iter().collect();
        structural += usize::from(involution) + usize::from(onto == all);
    }
    Check::new(
        id,
        agree == samples && structural == 4,
        format!("samples={agree}/{samples} involution-and-bijection={structural}/4 points={}", grid.len()),
    )
}

fn construction() -> Check {
    let id = "construction";
    let tower = match build_twocolor_tower(4, DEFAULT_BLOCKS, 1) {
        Ok(t) => t,
        Err(e) => return Check::new(id, false, e.to_string()),
    };
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (i, s) in tower.iter().enumerate() {
        checked += 1;
        failures.extend(invariant_violations(s).into_iter().map(|v| format!("stage {i}: {v}")));
        if i > 0 {
            checked += 1;
            failures.extend(bonding_violations(&tower[i - 1], s).into_iter().map(|v| format!("bond {i}: {v}")));
        }
    }
    let sizes: Vec<String> = tower.iter().map(|s| s.vertices().len().to_string()).collect();
    let evidence = match failures.first() {
        None => format!("stages=0..4 structural-checks={checked} vertices={}", sizes.join(",")),
        Some(f) => format!("violations={} first=\"{f}\"", failures.len()),
    };
    Check::new(id, failures.is_empty(), evidence)
}

/// `w^2*a + w*b + c` read off the normal form; `None` at or above `w^3`.
fn decode(x: &Ordinal) -> Option<[u64; 3]> {
    let mut out = [0u64; 3];
    for (e, c) in x.terms() {
        let k = e.as_finite().filter(|k| *k < 3)?;
        out[2 - k as usize] = *c;
    }
    Some(out)
}

fn encode(t: [u64; 3]) -> Ordinal {
    Ordinal::from_terms((0..3).map(|i| (Ordinal::from(2 - i as u64), t[i])).filter(|m| m.1 > 0))
}

/// Sum on coefficient triples: the right summand's leading term absorbs
/// every smaller term on the left.
fn oracle_add(x: [u64; 3], y: [u64; 3]) -> [u64; 3] {
    match y.iter().position(|&c| c > 0) {
        None => x,
        Some(i) => {
            let mut out = x;
            out[i] += y[i];
            out[i + 1..].copy_from_slice(&y[i + 1..]);
            out
        }
    }
}

fn oracle_parity(x: [u64; 3]) -> Parity {
    if x[2] % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn ordinal_arithmetic(cfg: &SuiteConfig) -> Check {
    let id = "ordinal-arithmetic";
    let mut failures = 0usize;
    let mut checks = 0usize;
    let mut expect = |ok: bool| {
        checks += 1;
        failures += usize::from(!ok);
    };
    // Enumerated order type below w*10: w*k + n for k, n < 10.
    let small: Vec<[u64; 3]> = (0..10).flat_map(|k| (0..10).map(move |n| [0, k, n])).collect();
    let ords: Vec<Ordinal> = small.iter().map(|t| encode(*t)).collect();
    for (x, t) in ords.iter().zip(&small) {
        expect(decode(x) == Some(*t));
        expect(x.parity() == oracle_parity(*t));
        expect(x.to_string().parse::<Ordinal>().as_ref() == Ok(x));
    }
    for (i, x) in ords.iter().enumerate() {
        for (j, y) in ords.iter().enumerate() {
            expect(x.cmp(y) == small[i].cmp(&small[j]));
            expect(decode(&x.add(y)) == Some(oracle_add(small[i], small[j])));
        }
    }
    let few: Vec<&Ordinal> = ords.iter().step_by(3).collect();
    for x in &few {
        for y in &few {
            for z in &few {
                expect(x.add(y).add(z) == x.add(&y.add(z)));
            }
        }
    }
    // Random triples below w^3.
    let mut rng = cfg.rng(id);
    let w = Ordinal::omega();
    let w2 = Ordinal::omega_pow(Ordinal::from(2));
    for _ in 0..cfg.trials(10_000) {
        let ts: Vec<[u64; 3]> = (0..3).map(|_| [rng.gen_range(0..4), rng.gen_range(0..4), rng.gen_range(0..6)]).collect();
        let [x, y, z] = [encode(ts[0]), encode(ts[1]), encode(ts[2])];
        expect(x.add(&y).add(&z) == x.add(&y.add(&z)));
        expect(decode(&x.add(&y)) == Some(oracle_add(ts[0], ts[1])));
        expect(x.cmp(&y) == ts[0].cmp(&ts[1]));
        expect(x.add(&y).parity() == oracle_parity(oracle_add(ts[0], ts[1])));
        if x < y {
            expect(z.add(&x) < z.add(&y));
            expect(x.add(&z) <= y.add(&z));
        }
        for big in [&w, &w2] {
            if x < *big {
                expect(x.add(big) == *big);
            }
        }
    }
    Check::new(id, failures == 0, format!("comparisons={checks} failures={failures}"))
}

fn vx(i: usize) -> GeometricPoint {
    GeometricPoint::Vertex(i)
}

fn two_leaves(stage: &TreeStage, rng: &mut ChaCha8Rng) -> (GeometricPoint, GeometricPoint) {
    let leaves = stage.leaves();
    let picked: Vec<&usize> = leaves.choose_multiple(rng, 2).collect();
    (vx(*picked[0]), vx(*picked[1]))
}

fn dendrite_beta(cfg: &SuiteConfig) -> Check {
    let id = "dendrite-beta";
    let mut rng = cfg.rng(id);
    let mut stages = Vec::new();
    for orders in [vec![Order::Finite(3)], vec![Order::Finite(3), Order::Finite(4)]] {
        for depth in 1..=5 {
            match build_wazewski_stage(&orders, depth, 1) {
                Ok(s) => stages.push(s),
                Err(e) => return Check::new(id, false, e.to_string()),
            }
        }
    }
    let pairs = cfg.trials(200);
    let (mut exact, mut audited, mut audits_passed, mut max_derivative, mut max_boundary) = (0, 0, 0, 0, 0);
    for _ in 0..pairs {
        let stage = &stages[rng.gen_range(0..stages.len())];
        let (a, b) = two_leaves(stage, &mut rng);
        let d = stage.path_distance(&a, &b);
        let map = collapse_map(stage, &a, Some(&b)).expect("leaves are points");
        let grid = vec![&d / int(2), d.clone(), &d * q(3, 2)];
        let right = grid.iter().all(|eps| {
            let want = if *eps <= d { vec![b.clone()] } else { Vec::new() };
            tree_eps_derivative(stage, &map, eps).is_ok_and(|got| got == want)
        });
        exact += usize::from(right);
        for c in verify_beta_le_2(stage, std::slice::from_ref(&map), &grid) {
            audited += 1;
            audits_passed += usize::from(c.passed());
            if let crate::dynamics::beta::BetaOutcome::Checked { derivative, cover_boundary, .. } = &c.outcome {
                max_derivative = max_derivative.max(derivative.len());
                max_boundary = max_boundary.max(*cover_boundary);
            }
        }
    }
    Check::new(
        id,
        exact == pairs && audits_passed == audited,
        format!(
            "pairs={pairs} exact-derivative={exact}/{pairs} second-empty-and-cover-bound={audits_passed}/{audited} max-derivative={max_derivative} max-cover-boundary={max_boundary}"
        ),
    )
}

/// Tally of one randomized witness family.
struct Tally {
    name: &'static str,
    produced: usize,
    within: usize,
    limited: usize,
    drawn: usize,
    errors: usize,
    /// Largest ratio of achieved distance to `eps`.
    worst: Rational,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            produced: 0,
            within: 0,
            limited: 0,
            drawn: 0,
            errors: 0,
            worst: zero(),
        }
    }

    fn record(&mut self, outcome: Result<Rational, crate::dynamics::DynError>, eps: &Rational) {
        self.drawn += 1;
        match outcome {
            Ok(dist) => {
                self.produced += 1;
                self.within += usize::from(dist < *eps);
                let r = dist / eps;
                if r > self.worst {
                    self.worst = r;
                }
            }
            Err(crate::dynamics::DynError::Resolution(_)) => self.limited += 1,
            Err(_) => self.errors += 1,
        }
    }

    fn ok(&self, target: usize) -> bool {
        self.produced == target && self.within == self.produced && self.errors == 0
    }

    fn evidence(&self) -> String {
        format!(
            "{}={}/{} drawn={} resolution-limited={} errors={} worst-ratio={}",
            self.name,
            self.within,
            self.produced,
            self.drawn,
            self.limited,
            self.errors,
            fmt_q(&self.worst)
        )
    }
}

/// Draws instances until `target` witnesses exist or `4 * target` draws;
/// instances beyond the stage's resolution are counted, not retried.
fn witness_bounds(cfg: &SuiteConfig) -> Check {
    let id = "witness-bounds";
    let mut rng = cfg.rng(id);
    let target = cfg.trials(150);
    let w3 = build_wazewski_stage(&[Order::Finite(3)], 3, 1).expect("buildable");
    let w4 = build_wazewski_stage(&[Order::Finite(3)], 4, 1).expect("buildable");
    let tc = build_twocolor_stage(3, 1).expect("buildable");

    let mut prox = Tally::new("proximal");
    while prox.produced < target && prox.drawn < 4 * target {
        let (x, y) = (random_point(&w3, &mut rng), random_point(&w3, &mut rng));
        if x == y {
            continue;
        }
        let eps = pow2_inv(rng.gen_range(1..=3));
        let out = proximal_witness(&w3, &x, &y, &eps).map(|h| {
            w3.path_distance(&h.apply(&w3, &x).expect("node"), &h.apply(&w3, &y).expect("node"))
        });
        prox.record(out, &eps);
    }

    let mut mini = Tally::new("minimal");
    while mini.produced < target && mini.drawn < 4 * target {
        let (x, y) = (random_point(&tc, &mut rng), random_point(&tc, &mut rng));
        if tc.point_type(&x) == PointType::Endpoint {
            continue;
        }
        let eps = pow2_inv(rng.gen_range(1..=3));
        let out = minimal_witness(&tc, &x, &y, &eps).map(|h| tc.path_distance(&h.apply(&tc, &x).expect("node"), &y));
        mini.record(out, &eps);
    }

    let mut pab = Tally::new("pab");
    while pab.produced < target && pab.drawn < 4 * target {
        let (a, b) = two_leaves(&w4, &mut rng);
        let eps = pow2_inv(rng.gen_range(1..=2));
        let k = rng.gen_range(1..=3);
        let mut sample: Vec<GeometricPoint> = (0..k).map(|_| random_point(&w4, &mut rng)).collect();
        sample.push(b.clone());
        // Largest distance to the collapse value over the sample.
        let out = pab_approx(&w4, &a, &b, &sample, &eps).map(|h| {
            sample
                .iter()
                .map(|x| {
                    let hx = h.apply(&w4, x).expect("sample points are nodes");
                    let want = if *x == b { &b } else { &a };
                    w4.path_distance(&hx, want)
                })
                .max()
                .expect("nonempty sample")
        });
        pab.record(out, &eps);
    }

    let ok = prox.ok(target) && mini.ok(target) && pab.ok(target);
    Check::new(id, ok, format!("{} {} {}", prox.evidence(), mini.evidence(), pab.evidence()))
}

fn rigidity(cfg: &SuiteConfig) -> Check {
    let id = "rigidity";
    let mut rng = cfg.rng(id);
    let stage = build_wazewski_stage(&[Order::Finite(3)], 3, 1).expect("buildable");
    let mut sample: Vec<GeometricPoint> = (0..30).map(|_| random_point(&stage, &mut rng)).collect();
    // Random points rarely land in the shrinking supports; add the points
    // the maps are built to move and rerun on the enlarged sample.
    let steps = match rigidity_sequence(&stage, 10, &sample) {
        Ok(s) => {
            sample.extend(s.into_iter().map(|st| st.moved));
            rigidity_sequence(&stage, 10, &sample)
        }
        Err(e) => Err(e),
    };
    let steps = match steps {
        Ok(s) => s,
        Err(e) => return Check::new(id, false, e.to_string()),
    };
    let mut failures = Vec::new();
    for st in &steps {
        if st.homeo.is_identity() {
            failures.push(format!("g{} is the identity", st.n));
        }
        let support = rigid_support(&stage, st).expect("distinct cut points");
        let moved_outside = st
            .homeo
            .nodes()
            .iter()
            .any(|(s, t)| s != t && !(support.contains(&stage, s) && support.contains(&stage, t)));
        let sample_outside = sample
            .iter()
            .any(|x| !support.contains(&stage, x) && st.homeo.apply(&stage, x).as_ref() != Some(x));
        if moved_outside || sample_outside {
            failures.push(format!("g{} moves points outside its support", st.n));
        }
        if st.displacement > pow2_inv(st.n) {
            failures.push(format!("g{} displaces by {}", st.n, fmt_q(&st.displacement)));
        }
    }
    if steps.windows(2).any(|w| w[1].displacement > w[0].displacement) {
        failures.push("displacements increase".into());
    }
    if !steps.iter().any(|s| s.displacement > zero()) {
        failures.push("no sample point moves".into());
    }
    let shown: Vec<String> = steps.iter().map(|s| fmt_q(&s.displacement)).collect();
    let evidence = match failures.first() {
        None => format!("n=1..{} displacements={}", steps.len(), shown.join(",")),
        Some(f) => format!("failures={} first=\"{f}\"", failures.len()),
    };
    Check::new(id, failures.is_empty() && steps.len() == 10, evidence)
}

fn ellis_family_check(cfg: &SuiteConfig) -> Check {
    let id = "ellis-family";
    let mut rng = cfg.rng(id);
    let stage = build_wazewski_stage(&[Order::Finite(3)], 5, 1).expect("buildable");
    let leaves = stage.leaves();
    let a = vx(leaves[0]);
    let eps = q(1, 4);
    // Endpoints closer than eps to a need not be moved by any approximant.
    let far: Vec<usize> = leaves[1..].iter().copied().filter(|&l| stage.path_distance(&a, &vx(l)) >= eps).collect();
    let count = cfg.trials(100).min(far.len());
    let bs: Vec<GeometricPoint> = far.choose_multiple(&mut rng, count).map(|&l| vx(l)).collect();
    match ellis_family(&stage, &a, &bs, &eps) {
        Ok(fam) => {
            let n = bs.len();
            let fixed = (0..n).all(|i| fam.values[i][i] == bs[i]);
            let pairs = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j);
            let separated = pairs.clone().filter(|&(i, j)| fam.distinguishable(i, j)).count();
            let total = pairs.count();
            Check::new(
                id,
                fixed && separated == total,
                format!("a={a} endpoints={n} eps={} distinguishable-pairs={separated}/{total}", fmt_q(&eps)),
            )
        }
        Err(e) => Check::new(id, false, e.to_string()),
    }
}

fn twocolor_convergence(cfg: &SuiteConfig) -> Check {
    let id = "twocolor-convergence";
    let mut rng = cfg.rng(id);
    let stage = build_twocolor_stage(3, 1).expect("buildable");
    let alt: Vec<usize> = stage
        .leaves()
        .into_iter()
        .filter(|&l| leaf_class(&stage, l).is_ok_and(|c| c == EndpointClass::Alternating))
        .collect();
    let mut pairs: Vec<(usize, usize)> = alt.iter().flat_map(|&a| alt.iter().map(move |&b| (a, b))).filter(|(a, b)| a != b).collect();
    pairs.shuffle(&mut rng);
    let want = cfg.trials(20);
    let (mut audited, mut converged, mut limited, mut worst) = (0usize, 0usize, 0usize, 0u32);
    let mut exact = true;
    for (a, b) in pairs {
        if audited == want {
            break;
        }
        let seq = match twocolor_pab_sequence(&stage, &vx(a), &vx(b), 8) {
            Ok(s) => s,
            Err(crate::dynamics::DynError::Resolution(_)) => {
                limited += 1;
                continue;
            }
            Err(e) => return Check::new(id, false, e.to_string()),
        };
        audited += 1;
        exact &= seq.steps.iter().all(|(_, an, bn, h)| h.apply(&stage, bn).as_ref() == Some(an));
        let sample = seq.default_sample(&stage);
        if let Some(t) = seq.threshold(&stage, &sample).filter(|_| sample.len() == 10) {
            converged += 1;
            worst = worst.max(t);
        }
    }
    Check::new(
        id,
        audited == want && converged == audited && exact,
        format!("pairs={audited} converged={converged} resolution-limited={limited} max-threshold={worst} n<=8 sample=10"),
    )
}

fn stabilizer_orbit(cfg: &SuiteConfig) -> Check {
    let id = "stabilizer-orbit";
    let mut rng = cfg.rng(id);
    let stage = build_twocolor_stage(2, 1).expect("buildable");
    let of = |class: EndpointClass| -> Vec<usize> {
        stage.leaves().into_iter().filter(|&l| leaf_class(&stage, l).is_ok_and(|c| c == class)).collect()
    };
    let (greens, reds) = (of(EndpointClass::GreenSoFar), of(EndpointClass::RedSoFar));
    let mut eligible: Vec<(GeometricPoint, GeometricPoint, GeometricPoint, Rational)> = Vec::new();
    for &e in &greens {
        for &f in &reds {
            if let Ok(p) = stab_orbit_probe(&stage, &vx(e), &vx(f), &vx(e), 0, 0, 0) {
                eligible.push((vx(e), vx(f), p.switch, p.red_length));
            }
        }
    }
    if eligible.is_empty() {
        return Check::new(id, false, "no green/red pair changes color once");
    }
    let want = cfg.trials(10).min(eligible.len());
    let (mut certified, mut red_kept, mut orbit_points) = (0usize, 0usize, 0usize);
    let mut margin: Option<Rational> = None;
    for (e, f, switch, red) in eligible.choose_multiple(&mut rng, want) {
        let green_len = stage.path_distance(e, switch);
        let frac = q(rng.gen_range(1..16), 16);
        let x = stage.point_along(e, switch, &(&green_len * &frac));
        let seed = rng.gen();
        match stab_orbit_probe(&stage, e, f, &x, 5, 4, seed) {
            Ok(p) => {
                certified += usize::from(p.certified() && p.start_side == crate::dynamics::stab::Side::Green);
                orbit_points += p.orbit.len();
                let m = &p.min_distance_to_f - red;
                if margin.as_ref().is_none_or(|old| m < *old) {
                    margin = Some(m);
                }
            }
            Err(e) => return Check::new(id, false, e.to_string()),
        }
        let y = stage.point_along(switch, f, &(red * &frac));
        if let Ok(p) = stab_orbit_probe(&stage, e, f, &y, 5, 4, seed) {
            red_kept += usize::from(p.certified() && p.start_side == crate::dynamics::stab::Side::Red);
        }
    }
    Check::new(
        id,
        certified == want && red_kept == want,
        format!(
            "pairs={want}/{} green-certified={certified} red-kept={red_kept} orbit-points={orbit_points} min-margin={}",
            eligible.len(),
            fmt_q(&margin.unwrap_or_else(zero))
        ),
    )
}
