//! Reaction-network data model.
//!
//! A [`Network`] is an ordered species list with initial concentrations plus a
//! list of mass-action [`Reaction`]s. Networks are immutable values once built;
//! the builder-style methods return errors instead of producing invalid state.

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

/// Largest multiplicity accepted for a single species on one side of a reaction.
pub const MAX_MULTIPLICITY: u32 = 9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("invalid species name `{0}`")]
    InvalidName(String),
    #[error("species `{0}` declared twice")]
    DuplicateSpecies(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("rate constant must be positive and finite, got {0}")]
    NonPositiveRate(f64),
    #[error("initial concentration of `{name}` must be nonnegative and finite, got {value}")]
    NegativeConcentration { name: String, value: f64 },
    #[error("multiplicity of `{name}` must be in 1..={MAX_MULTIPLICITY}, got {mult}")]
    BadMultiplicity { name: String, mult: u32 },
    #[error("dual-rail signal needs distinct rails, got `{0}` twice")]
    SameRails(String),
    #[error("shared species `{a}` and `{b}` have conflicting initial concentrations {init_a} and {init_b}")]
    ConflictingInit {
        a: String,
        b: String,
        init_a: f64,
        init_b: f64,
    },
}

/// A species name: a letter followed by letters, digits or underscores.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Species(String);

impl Species {
    pub fn new(name: impl Into<String>) -> Result<Self, NetworkError> {
        let name = name.into();
        if is_valid_name(&name) {
            Ok(Species(name))
        } else {
            Err(NetworkError::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Species {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Species {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A multiset of species, kept sorted by name.
pub type Multiset = BTreeMap<Species, u32>;

/// `reactants ->{rate} products` under mass-action kinetics.
#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    reactants: Multiset,
    products: Multiset,
    rate: f64,
}

impl Reaction {
    /// Builds a reaction from `(name, multiplicity)` pairs. Repeated names are
    /// merged, so `[("X", 1), ("X", 1)]` is the same as `[("X", 2)]`.
    pub fn new<S: AsRef<str>>(
        reactants: &[(S, u32)],
        products: &[(S, u32)],
        rate: f64,
    ) -> Result<Self, NetworkError> {
        Self::from_multisets(to_multiset(reactants)?, to_multiset(products)?, rate)
    }

    pub fn from_multisets(
        reactants: Multiset,
        products: Multiset,
        rate: f64,
    ) -> Result<Self, NetworkError> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(NetworkError::NonPositiveRate(rate));
        }
        for (s, &m) in reactants.iter().chain(products.iter()) {
            if m == 0 || m > MAX_MULTIPLICITY {
                return Err(NetworkError::BadMultiplicity {
                    name: s.to_string(),
                    mult: m,
                });
            }
        }
        Ok(Reaction {
            reactants,
            products,
            rate,
        })
    }

    pub fn reactants(&self) -> &Multiset {
        &self.reactants
    }

    pub fn products(&self) -> &Multiset {
        &self.products
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Total reactant multiplicity.
    pub fn order(&self) -> u32 {
        self.reactants.values().sum()
    }

    pub fn reactant_multiplicity(&self, s: &str) -> u32 {
        lookup(&self.reactants, s)
    }

    pub fn product_multiplicity(&self, s: &str) -> u32 {
        lookup(&self.products, s)
    }

    /// Product multiplicity minus reactant multiplicity of `s`.
    pub fn net_effect(&self, s: &str) -> i64 {
        i64::from(self.product_multiplicity(s)) - i64::from(self.reactant_multiplicity(s))
    }

    /// `s` is a reactant and the reaction leaves its amount unchanged.
    pub fn is_catalyst(&self, s: &str) -> bool {
        self.reactant_multiplicity(s) > 0 && self.net_effect(s) == 0
    }

    /// Two distinct species with unit multiplicity consumed into nothing,
    /// as in `Yp + Ym -> 0`.
    pub fn is_annihilation(&self) -> bool {
        self.products.is_empty()
            && self.reactants.len() == 2
            && self.reactants.values().all(|&m| m == 1)
    }

    /// Same reaction with reactants and products swapped.
    pub fn reversed(&self) -> Reaction {
        Reaction {
            reactants: self.products.clone(),
            products: self.reactants.clone(),
            rate: self.rate,
        }
    }

    /// Every species mentioned on either side, deduplicated, in name order.
    pub fn species(&self) -> impl Iterator<Item = &Species> {
        let mut all: Vec<&Species> = self.reactants.keys().chain(self.products.keys()).collect();
        all.sort();
        all.dedup();
        all.into_iter()
    }

    pub(crate) fn renamed(&self, map: &HashMap<String, Species>) -> Reaction {
        let rename = |ms: &Multiset| -> Multiset {
            let mut out = Multiset::new();
            for (s, &m) in ms {
                let target = map.get(s.as_str()).cloned().unwrap_or_else(|| s.clone());
                *out.entry(target).or_insert(0) += m;
            }
            out
        };
        Reaction {
            reactants: rename(&self.reactants),
            products: rename(&self.products),
            rate: self.rate,
        }
    }
}

fn lookup(ms: &Multiset, s: &str) -> u32 {
    ms.get(s).copied().unwrap_or(0)
}

fn to_multiset<S: AsRef<str>>(terms: &[(S, u32)]) -> Result<Multiset, NetworkError> {
    let mut ms = Multiset::new();
    for (name, m) in terms {
        let s = Species::new(name.as_ref())?;
        *ms.entry(s).or_insert(0) += *m;
    }
    Ok(ms)
}

impl fmt::Display for Reaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_side(f, &self.reactants)?;
        write!(f, " ->{{{}}} ", self.rate)?;
        write_side(f, &self.products)
    }
}

fn write_side(f: &mut fmt::Formatter<'_>, side: &Multiset) -> fmt::Result {
    if side.is_empty() {
        return f.write_str("0");
    }
    for (i, (s, &m)) in side.iter().enumerate() {
        if i > 0 {
            f.write_str(" + ")?;
        }
        if m > 1 {
            write!(f, "{m}{s}")?;
        } else {
            write!(f, "{s}")?;
        }
    }
    Ok(())
}

/// A signed signal carried by the difference of two nonnegative species.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualRailSignal {
    pub plus: Species,
    pub minus: Species,
}

impl DualRailSignal {
    pub fn new(plus: Species, minus: Species) -> Result<Self, NetworkError> {
        if plus == minus {
            return Err(NetworkError::SameRails(plus.to_string()));
        }
        Ok(DualRailSignal { plus, minus })
    }

    /// Logical signal `X` maps to rails `Xp` and `Xm`.
    pub fn named(base: &str) -> Result<Self, NetworkError> {
        Self::new(
            Species::new(format!("{base}p"))?,
            Species::new(format!("{base}m"))?,
        )
    }

    /// Logical value `plus - minus` for a state vector of `network`.
    pub fn value(&self, network: &Network, state: &[f64]) -> Option<f64> {
        let p = network.index_of(self.plus.as_str())?;
        let m = network.index_of(self.minus.as_str())?;
        Some(state[p] - state[m])
    }
}

/// A finite collection of reactions over an ordered species list.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Network {
    species: Vec<Species>,
    init: Vec<f64>,
    reactions: Vec<Reaction>,
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a new species. Fails if it is already present.
    pub fn add_species(&mut self, name: &str, init: f64) -> Result<&mut Self, NetworkError> {
        let s = Species::new(name)?;
        if self.index_of(name).is_some() {
            return Err(NetworkError::DuplicateSpecies(name.to_string()));
        }
        check_init(name, init)?;
        self.species.push(s);
        self.init.push(init);
        Ok(self)
    }

    /// Declares `name` if absent; leaves an existing declaration untouched.
    pub fn ensure_species(&mut self, name: &str) -> Result<usize, NetworkError> {
        if let Some(i) = self.index_of(name) {
            return Ok(i);
        }
        self.add_species(name, 0.0)?;
        Ok(self.species.len() - 1)
    }

    pub fn set_init(&mut self, name: &str, init: f64) -> Result<&mut Self, NetworkError> {
        let i = self
            .index_of(name)
            .ok_or_else(|| NetworkError::UnknownSpecies(name.to_string()))?;
        check_init(name, init)?;
        self.init[i] = init;
        Ok(self)
    }

    /// Appends a reaction, declaring any species it mentions that are not yet
    /// known (with initial concentration 0).
    pub fn add_reaction(&mut self, r: Reaction) -> Result<&mut Self, NetworkError> {
        let mentioned: Vec<String> = r.species().map(|s| s.to_string()).collect();
        for s in mentioned {
            self.ensure_species(&s)?;
        }
        self.reactions.push(r);
        Ok(self)
    }

    /// Convenience wrapper around [`Reaction::new`] + [`Network::add_reaction`].
    pub fn react(
        &mut self,
        reactants: &[(&str, u32)],
        products: &[(&str, u32)],
        rate: f64,
    ) -> Result<&mut Self, NetworkError> {
        let r = Reaction::new(reactants, products, rate)?;
        self.add_reaction(r)
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn initial_concentrations(&self) -> &[f64] {
        &self.init
    }

    pub fn init_of(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.init[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.as_str() == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.species.is_empty() && self.reactions.is_empty()
    }

    /// Copy keeping only the reactions for which `keep` returns true. The
    /// species list is unchanged.
    pub fn retain_reactions(&self, mut keep: impl FnMut(&Reaction) -> bool) -> Network {
        Network {
            species: self.species.clone(),
            init: self.init.clone(),
            reactions: self.reactions.iter().filter(|r| keep(r)).cloned().collect(),
        }
    }

    /// True when `s` never changes in any reaction that mentions it.
    pub fn is_only_catalytic(&self, s: &str) -> bool {
        self.reactions.iter().all(|r| r.net_effect(s) == 0)
    }
}

fn check_init(name: &str, init: f64) -> Result<(), NetworkError> {
    if init >= 0.0 && init.is_finite() {
        Ok(())
    } else {
        Err(NetworkError::NegativeConcentration {
            name: name.to_string(),
            value: init,
        })
    }
}

/// Product multiplicity minus reactant multiplicity of `s` in `r`.
pub fn net_effect(r: &Reaction, s: &str) -> i64 {
    r.net_effect(s)
}

/// `s` is a reactant of `r` with zero net effect.
pub fn is_catalyst(r: &Reaction, s: &str) -> bool {
    r.is_catalyst(s)
}

/// Merges `b` into `a`.
///
/// `shared` maps species of `a` to species of `b` that denote the same
/// chemical; each unified species keeps its name from `a` and the two initial
/// concentrations must agree. Any other species of `b` whose name already
/// exists in `a` is renamed to `{label}_{name}` (with a numeric suffix if that
/// is also taken).
pub fn compose(
    a: &Network,
    b: &Network,
    shared: &[(&str, &str)],
    label: &str,
) -> Result<Network, NetworkError> {
    let mut out = a.clone();
    let mut rename: HashMap<String, Species> = HashMap::new();

    for &(name_a, name_b) in shared {
        let ia = a
            .index_of(name_a)
            .ok_or_else(|| NetworkError::UnknownSpecies(name_a.to_string()))?;
        let ib = b
            .index_of(name_b)
            .ok_or_else(|| NetworkError::UnknownSpecies(name_b.to_string()))?;
        if a.init[ia] != b.init[ib] {
            return Err(NetworkError::ConflictingInit {
                a: name_a.to_string(),
                b: name_b.to_string(),
                init_a: a.init[ia],
                init_b: b.init[ib],
            });
        }
        rename.insert(name_b.to_string(), a.species[ia].clone());
    }

    for (s, &init) in b.species.iter().zip(&b.init) {
        if rename.contains_key(s.as_str()) {
            continue;
        }
        let target = if out.contains(s.as_str()) {
            fresh_name(&out, b, label, s.as_str())?
        } else {
            s.clone()
        };
        out.species.push(target.clone());
        out.init.push(init);
        rename.insert(s.to_string(), target);
    }

    out.reactions
        .extend(b.reactions.iter().map(|r| r.renamed(&rename)));
    Ok(out)
}

fn fresh_name(
    out: &Network,
    b: &Network,
    label: &str,
    name: &str,
) -> Result<Species, NetworkError> {
    let base = format!("{label}_{name}");
    let taken = |n: &str| out.contains(n) || b.contains(n);
    if !taken(&base) {
        return Species::new(base);
    }
    (2..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken(n))
        .map(Species::new)
        .expect("unbounded suffix search")
}
