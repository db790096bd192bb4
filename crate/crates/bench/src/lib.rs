//! Shared inputs for the benchmarks.

use kresolve_core::galedual::{gale_map, GaleMatrix};
use kresolve_core::koszul::{MapSpec, Mode};
use kresolve_core::poly::RingSpec;

pub fn example_two() -> MapSpec {
    let ring = RingSpec::with_default_pairs(&["u", "v", "w"]).unwrap();
    MapSpec::parse(&ring, &[("u*w", "v^2"), ("u^2", "v^2"), ("v^2", "w^2")], Mode::Strict).unwrap()
}

pub fn quartic() -> MapSpec {
    let ring = RingSpec::with_default_pairs(&["u", "v", "w"]).unwrap();
    let b: GaleMatrix = "1 0 0\n-2 1 0\n1 -2 1\n0 1 -2\n0 0 1\n".parse().unwrap();
    gale_map(&b, &ring, Mode::Strict).unwrap()
}
