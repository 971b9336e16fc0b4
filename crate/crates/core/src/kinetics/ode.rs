//! Symbolic mass-action ODEs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::network::{Network, Species};

use super::SimError;

/// `coeff * Π species^exponent`, with the powers sorted by species name.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub powers: Vec<(Species, u32)>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|(_, e)| e).sum()
    }
}

/// A sum of monomials in canonical order: sorted by their power lists and
/// with like terms combined. Zero coefficients never appear.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Polynomial {
    terms: Vec<Monomial>,
}

type PowerKey = Vec<(Species, u32)>;

impl Polynomial {
    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn from_map(map: BTreeMap<PowerKey, f64>) -> Self {
        Polynomial {
            terms: map
                .into_iter()
                .filter(|(_, c)| *c != 0.0)
                .map(|(powers, coeff)| Monomial { coeff, powers })
                .collect(),
        }
    }

    fn into_map(self) -> BTreeMap<PowerKey, f64> {
        self.terms
            .into_iter()
            .map(|m| (m.powers, m.coeff))
            .collect()
    }

    /// Builds a canonical polynomial from arbitrary `(coeff, powers)` terms.
    pub fn from_terms<S: AsRef<str>>(terms: &[(f64, &[(S, u32)])]) -> Self {
        let mut map: BTreeMap<PowerKey, f64> = BTreeMap::new();
        for (coeff, powers) in terms {
            let mut key: PowerKey = powers
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(s, e)| (Species::new(s.as_ref()).expect("valid species name"), *e))
                .collect();
            key.sort();
            *map.entry(key).or_insert(0.0) += coeff;
        }
        Self::from_map(map)
    }
}

/// One polynomial right-hand side per species, in network order.
#[derive(Debug, Clone)]
pub struct OdeSystem {
    variables: Vec<Species>,
    rhs: Vec<Polynomial>,
    kernel: Kernel,
}

impl PartialEq for OdeSystem {
    fn eq(&self, other: &Self) -> bool {
        self.variables == other.variables && self.rhs == other.rhs
    }
}

#[derive(Debug, Clone, Default)]
struct Kernel {
    // (target variable, coefficient, range into `powers`)
    terms: Vec<(usize, f64, usize, usize)>,
    powers: Vec<(usize, u32)>,
}

impl Kernel {
    fn build(variables: &[Species], rhs: &[Polynomial]) -> Kernel {
        let index: HashMap<&str, usize> = variables
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut k = Kernel::default();
        for (var, poly) in rhs.iter().enumerate() {
            for m in &poly.terms {
                let start = k.powers.len();
                k.powers
                    .extend(m.powers.iter().map(|(s, e)| (index[s.as_str()], *e)));
                k.terms.push((var, m.coeff, start, k.powers.len()));
            }
        }
        k
    }
}

impl OdeSystem {
    /// Assembles a system; every species in `rhs` must be one of `variables`.
    pub fn new(variables: Vec<Species>, rhs: Vec<Polynomial>) -> Self {
        assert_eq!(
            variables.len(),
            rhs.len(),
            "one right-hand side per variable"
        );
        let kernel = Kernel::build(&variables, &rhs);
        OdeSystem {
            variables,
            rhs,
            kernel,
        }
    }

    pub fn variables(&self) -> &[Species] {
        &self.variables
    }

    pub fn rhs(&self) -> &[Polynomial] {
        &self.rhs
    }

    pub fn rhs_of(&self, name: &str) -> Option<&Polynomial> {
        self.variables
            .iter()
            .position(|s| s.as_str() == name)
            .map(|i| &self.rhs[i])
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    /// Componentwise evaluation of the right-hand sides.
    pub fn evaluate(&self, state: &[f64]) -> Result<Vec<f64>, SimError> {
        if state.len() != self.dim() {
            return Err(SimError::DimensionMismatch {
                expected: self.dim(),
                got: state.len(),
            });
        }
        let mut out = vec![0.0; self.dim()];
        self.evaluate_into(state, &mut out);
        Ok(out)
    }

    pub(crate) fn evaluate_into(&self, state: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|d| *d = 0.0);
        let k = &self.kernel;
        for &(var, coeff, start, end) in &k.terms {
            let mut v = coeff;
            for &(i, e) in &k.powers[start..end] {
                let x = state[i];
                v *= match e {
                    1 => x,
                    2 => x * x,
                    _ => x.powi(e as i32),
                };
            }
            out[var] += v;
        }
    }

    /// Treats the named species as constants with the given values: their
    /// equations are dropped and their powers folded into the coefficients.
    pub fn substitute(&self, constants: &[(&str, f64)]) -> OdeSystem {
        let values: HashMap<&str, f64> = constants.iter().copied().collect();
        let mut variables = Vec::new();
        let mut rhs = Vec::new();
        for (s, poly) in self.variables.iter().zip(&self.rhs) {
            if values.contains_key(s.as_str()) {
                continue;
            }
            let mut map: BTreeMap<PowerKey, f64> = BTreeMap::new();
            for m in &poly.terms {
                let mut coeff = m.coeff;
                let mut key = PowerKey::new();
                for (sp, e) in &m.powers {
                    match values.get(sp.as_str()) {
                        Some(v) => coeff *= v.powi(*e as i32),
                        None => key.push((sp.clone(), *e)),
                    }
                }
                *map.entry(key).or_insert(0.0) += coeff;
            }
            variables.push(s.clone());
            rhs.push(Polynomial::from_map(map));
        }
        OdeSystem::new(variables, rhs)
    }

    /// Termwise sum of two systems; variables are matched by name.
    pub fn sum(&self, other: &OdeSystem) -> OdeSystem {
        let mut variables = self.variables.clone();
        let mut maps: Vec<BTreeMap<PowerKey, f64>> =
            self.rhs.iter().cloned().map(Polynomial::into_map).collect();
        for (s, poly) in other.variables.iter().zip(&other.rhs) {
            let i = match variables.iter().position(|v| v == s) {
                Some(i) => i,
                None => {
                    variables.push(s.clone());
                    maps.push(BTreeMap::new());
                    variables.len() - 1
                }
            };
            for m in &poly.terms {
                *maps[i].entry(m.powers.clone()).or_insert(0.0) += m.coeff;
            }
        }
        let rhs = maps.into_iter().map(Polynomial::from_map).collect();
        OdeSystem::new(variables, rhs)
    }
}

/// Mass-action ODEs of `n`: for each species X,
/// `dX/dt = Σ_ρ Δρ(X) · k_ρ · Π reactant^multiplicity`.
pub fn compile_odes(n: &Network) -> OdeSystem {
    let mut maps: Vec<BTreeMap<PowerKey, f64>> = vec![BTreeMap::new(); n.species().len()];
    for r in n.reactions() {
        let key: PowerKey = r.reactants().iter().map(|(s, &m)| (s.clone(), m)).collect();
        for s in r.species() {
            let delta = r.net_effect(s.as_str());
            if delta == 0 {
                continue;
            }
            let i = n
                .index_of(s.as_str())
                .expect("reaction species are declared");
            *maps[i].entry(key.clone()).or_insert(0.0) += delta as f64 * r.rate();
        }
    }
    OdeSystem::new(
        n.species().to_vec(),
        maps.into_iter().map(Polynomial::from_map).collect(),
    )
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            let mag = m.coeff.abs();
            match (i, m.coeff < 0.0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if mag != 1.0 || m.powers.is_empty() {
                parts.push(format!("{mag}"));
            }
            for (s, e) in &m.powers {
                parts.push(if *e == 1 {
                    s.to_string()
                } else {
                    format!("{s}^{e}")
                });
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for OdeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, p) in self.variables.iter().zip(&self.rhs) {
            writeln!(f, "d{s}/dt = {p}")?;
        }
        Ok(())
    }
}
