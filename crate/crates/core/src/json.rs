//! JSON interchange for networks.
//!
//! `{"species": [{"name", "init"}], "reactions": [{"reactants": [{"name", "mult"}], "products": [...], "rate"}]}`

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{Multiset, Network, NetworkError, Reaction, Species};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Serialize, Deserialize)]
struct NetworkDoc {
    species: Vec<SpeciesDoc>,
    reactions: Vec<ReactionDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SpeciesDoc {
    name: String,
    #[serde(default)]
    init: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReactionDoc {
    reactants: Vec<TermDoc>,
    products: Vec<TermDoc>,
    rate: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct TermDoc {
    name: String,
    mult: u32,
}

fn terms(ms: &Multiset) -> Vec<TermDoc> {
    ms.iter()
        .map(|(s, &m)| TermDoc {
            name: s.to_string(),
            mult: m,
        })
        .collect()
}

fn multiset(terms: &[TermDoc]) -> Result<Multiset, NetworkError> {
    let mut ms = Multiset::new();
    for t in terms {
        *ms.entry(Species::new(t.name.as_str())?).or_insert(0) += t.mult;
    }
    Ok(ms)
}

pub fn network_to_json(n: &Network) -> String {
    let doc = NetworkDoc {
        species: n
            .species()
            .iter()
            .zip(n.initial_concentrations())
            .map(|(s, &init)| SpeciesDoc {
                name: s.to_string(),
                init,
            })
            .collect(),
        reactions: n
            .reactions()
            .iter()
            .map(|r| ReactionDoc {
                reactants: terms(r.reactants()),
                products: terms(r.products()),
                rate: r.rate(),
            })
            .collect(),
    };
    let mut s =
        serde_json::to_string_pretty(&doc).expect("network document is always serializable");
    s.push('\n');
    s
}

pub fn network_from_json(text: &str) -> Result<Network, JsonError> {
    let doc: NetworkDoc = serde_json::from_str(text)?;
    let mut n = Network::new();
    for s in &doc.species {
        n.add_species(&s.name, s.init)?;
    }
    for r in &doc.reactions {
        let reaction =
            Reaction::from_multisets(multiset(&r.reactants)?, multiset(&r.products)?, r.rate)?;
        n.add_reaction(reaction)?;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_network;

    #[test]
    fn field_names() {
        let n = parse_network("species X = 0.5\n2X + Y ->{1.5} 0").unwrap();
        let v: serde_json::Value = serde_json::from_str(&network_to_json(&n)).unwrap();
        assert_eq!(v["species"][0]["name"], "X");
        assert_eq!(v["species"][0]["init"], 0.5);
        assert_eq!(v["reactions"][0]["reactants"][0]["name"], "X");
        assert_eq!(v["reactions"][0]["reactants"][0]["mult"], 2);
        assert_eq!(v["reactions"][0]["products"], serde_json::json!([]));
        assert_eq!(v["reactions"][0]["rate"], 1.5);
    }

    #[test]
    fn round_trip() {
        let n =
            parse_network("species A = 0.0045\nA + Xp ->{1} A + Xp + Yp\nYp + Ym ->{1} 0").unwrap();
        assert_eq!(network_from_json(&network_to_json(&n)).unwrap(), n);
    }

    #[test]
    fn rejects_invalid() {
        let bad_rate = r#"{"species": [], "reactions": [{"reactants": [], "products": [{"name": "X", "mult": 1}], "rate": 0}]}"#;
        assert!(matches!(
            network_from_json(bad_rate),
            Err(JsonError::Network(NetworkError::NonPositiveRate(_)))
        ));
        let dup =
            r#"{"species": [{"name": "X", "init": 0}, {"name": "X", "init": 1}], "reactions": []}"#;
        assert!(matches!(
            network_from_json(dup),
            Err(JsonError::Network(NetworkError::DuplicateSpecies(_)))
        ));
        assert!(matches!(network_from_json("{"), Err(JsonError::Json(_))));
    }
}
