#![allow(dead_code)]

use proptest::collection::{btree_map, vec};
use proptest::prelude::*;

use crnsig::{Network, Reaction};

pub const POOL: [&str; 6] = ["A", "B", "X", "Yp", "Ym", "Z_1"];

/// Rates that sum exactly in binary floating point.
pub fn dyadic_rate() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.25), Just(0.5), Just(1.0), Just(2.0), Just(3.0)]
}

pub fn any_rate() -> impl Strategy<Value = f64> {
    prop_oneof![dyadic_rate(), 1e-6f64..1e3]
}

fn side(
    names: &'static [&'static str],
    max_len: usize,
) -> impl Strategy<Value = Vec<(&'static str, u32)>> {
    btree_map(0..names.len(), 1u32..=3, 0..=max_len)
        .prop_map(move |m| m.into_iter().map(|(i, k)| (names[i], k)).collect())
}

pub fn reaction_over(
    names: &'static [&'static str],
    rate: impl Strategy<Value = f64>,
) -> impl Strategy<Value = Reaction> {
    (side(names, 3), side(names, 3), rate)
        .prop_map(|(r, p, k)| Reaction::new(&r, &p, k).expect("generated reaction is valid"))
}

pub fn reaction() -> impl Strategy<Value = Reaction> {
    reaction_over(&POOL, any_rate())
}

/// A network over `names` with random initial concentrations; every name is
/// declared, in order.
pub fn network_over(
    names: &'static [&'static str],
    rate: impl Strategy<Value = f64>,
    max_reactions: usize,
) -> impl Strategy<Value = Network> {
    (
        vec(prop_oneof![Just(0.0), 0.0f64..10.0], names.len()),
        vec(reaction_over(names, rate), 0..=max_reactions),
    )
        .prop_map(move |(inits, rxns)| {
            let mut n = Network::new();
            for (s, v) in names.iter().zip(inits) {
                n.add_species(s, v).expect("fresh species");
            }
            for r in rxns {
                n.add_reaction(r).expect("declared species");
            }
            n
        })
}

pub fn network() -> impl Strategy<Value = Network> {
    network_over(&POOL, any_rate(), 6)
}
