//! Acceptance suite: every check of `tamedyn::suites` at its default
//! instance counts, one test and one printed line per check.

use std::time::{Duration, Instant};

use tamedyn::betarank::{FlipSystem, SystemFunction};
use tamedyn::build_space;
use tamedyn::report::Status;
use tamedyn::suites::{rank_instances, run_check, SuiteConfig};

fn accept(id: &str) {
    let check = run_check(id, &SuiteConfig::default());
    println!("{} {check}", if check.status == Status::Pass { "[PASS]" } else { "[FAIL]" });
    assert_eq!(check.status, Status::Pass, "{check}");
}

#[test]
fn beta_rank_equals_target() {
    accept("beta-rank");
    for alpha in rank_instances() {
        let start = Instant::now();
        let sys = FlipSystem::new(build_space(&alpha).unwrap());
        assert_eq!(sys.beta_rank(&SystemFunction::ParityFlip), alpha);
        assert!(start.elapsed() < Duration::from_secs(1), "{alpha} took {:?}", start.elapsed());
    }
}

#[test]
fn cb_rank_equals_target_and_point_ranks() {
    accept("cb-rank");
}

#[test]
fn derivative_chains_agree_stagewise() {
    accept("stagewise");
}

#[test]
fn clopen_swaps_approximate_parity_flip() {
    accept("ellis-approximants");
}

#[test]
fn collapse_maps_have_small_derivatives() {
    accept("dendrite-beta");
}

#[test]
fn witnesses_meet_eps_bounds() {
    accept("witness-bounds");
}

#[test]
fn rigid_sequence_shrinks() {
    accept("rigidity");
}

#[test]
fn collapse_approximants_are_distinguishable() {
    accept("ellis-family");
}

#[test]
fn twocolor_sequences_converge() {
    accept("twocolor-convergence");
}

#[test]
fn stabilizer_orbits_keep_their_side() {
    accept("stabilizer-orbit");
}

#[test]
fn ordinal_arithmetic_matches_oracle() {
    accept("ordinal-arithmetic");
}

#[test]
fn twocolor_construction_invariants() {
    accept("construction");
}
