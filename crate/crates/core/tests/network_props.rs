mod common;

use std::fs;

use proptest::prelude::*;

use crnsig::network::{is_catalyst, net_effect};
use crnsig::{
    compose, network_from_json, network_to_json, parse_network, serialize_network, Network,
    Reaction,
};

proptest! {
    #[test]
    fn net_effect_is_antisymmetric(r in common::reaction(), s in prop::sample::select(&common::POOL[..])) {
        prop_assert_eq!(net_effect(&r.reversed(), s), -net_effect(&r, s));
    }

    #[test]
    fn catalysts_have_zero_net_effect(r in common::reaction(), s in prop::sample::select(&common::POOL[..])) {
        if is_catalyst(&r, s) {
            prop_assert_eq!(net_effect(&r, s), 0);
            prop_assert!(r.reactant_multiplicity(s) > 0);
        }
    }

    #[test]
    fn dsl_round_trip(n in common::network()) {
        let text = serialize_network(&n);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(&back, &n);
        prop_assert_eq!(serialize_network(&back), text);
    }

    #[test]
    fn json_round_trip(n in common::network()) {
        let back = network_from_json(&network_to_json(&n)).unwrap();
        prop_assert_eq!(back, n);
    }

    #[test]
    fn compose_is_associative_on_disjoint_networks(
        a in common::network_over(&["A1", "A2"], common::any_rate(), 3),
        b in common::network_over(&["B1", "B2", "B3"], common::any_rate(), 3),
        c in common::network_over(&["C1"], common::any_rate(), 3),
    ) {
        let left = compose(&compose(&a, &b, &[], "b").unwrap(), &c, &[], "c").unwrap();
        let right = compose(&a, &compose(&b, &c, &[], "c").unwrap(), &[], "bc").unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn compose_with_empty_is_identity(n in common::network()) {
        prop_assert_eq!(compose(&n, &Network::new(), &[], "e").unwrap(), n.clone());
        prop_assert_eq!(compose(&Network::new(), &n, &[], "e").unwrap(), n);
    }
}

#[test]
fn net_effect_examples() {
    let r = Reaction::new(&[("X", 2), ("Y", 1)], &[("Z", 1)], 1.0).unwrap();
    assert_eq!(
        [
            net_effect(&r, "X"),
            net_effect(&r, "Y"),
            net_effect(&r, "Z")
        ],
        [-2, -1, 1]
    );
    assert_eq!(net_effect(&r, "W"), 0);
    let r = Reaction::new(&[("X", 1), ("Z", 1)], &[("X", 2)], 1.0).unwrap();
    assert_eq!(net_effect(&r, "X"), 1);
    let r = Reaction::new(&[("A", 1), ("B", 1)], &[("A", 1), ("C", 1)], 1.0).unwrap();
    assert_eq!(net_effect(&r, "A"), 0);
}

#[test]
fn catalyst_examples() {
    let r = Reaction::new(
        &[("F", 1), ("Cp", 1)],
        &[("F", 1), ("Cp", 1), ("Sp", 1)],
        1.0,
    )
    .unwrap();
    assert!(is_catalyst(&r, "F"));
    let r = Reaction::new(&[("X", 1)], &[("X", 1), ("Y", 1)], 1.0).unwrap();
    assert!(!is_catalyst(&r, "Y"));
    let r = Reaction::new(&[("X", 2), ("Y", 1)], &[("X", 3)], 1.0).unwrap();
    assert!(!is_catalyst(&r, "X"));
}

#[test]
fn fixtures_are_stable_after_one_cycle() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("crn") {
            continue;
        }
        let n = parse_network(&fs::read_to_string(&path).unwrap()).unwrap();
        let once = serialize_network(&n);
        let twice = serialize_network(&parse_network(&once).unwrap());
        assert_eq!(once, twice, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 3);
}

#[test]
fn compose_builds_the_detector_chain() {
    let bp = parse_network("Xp ->{1} Xp + Yp\nYp ->{1} 0").unwrap();
    let lp = parse_network("Vout ->{0.5} 0\nVin ->{0.5} Vin + Vout").unwrap();
    let chain = compose(&bp, &lp, &[("Yp", "Vin")], "lp").unwrap();
    let names: Vec<&str> = chain.species().iter().map(|s| s.as_str()).collect();
    assert_eq!(names, ["Xp", "Yp", "Vout"]);
    assert_eq!(chain.reactions()[3].to_string(), "Yp ->{0.5} Vout + Yp");
}
