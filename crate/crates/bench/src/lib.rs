//! Shared fixtures for the kernel benchmarks.

use relperc_core::groups::{build_ball, parse_group, BallGraph};

pub fn lattice_ball(radius: u32) -> BallGraph {
    let model = parse_group("lattice:2").expect("valid dsl");
    build_ball(&model, radius).expect("ball fits")
}

pub fn free_ball(radius: u32) -> BallGraph {
    let model = parse_group("free:2").expect("valid dsl");
    build_ball(&model, radius).expect("ball fits")
}
