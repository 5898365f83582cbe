//! Reeb orbit records and finite orbit universes.

use crate::error::{Error, Result};
use crate::rational::{fmt_q, serde_opt_q, serde_q, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(b: u8) -> Self {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Self {
        Parity::from_bit(self.bit() + 1)
    }
}

/// A Reeb orbit identified by an opaque id. Equality of orbits is equality of
/// ids; actions are never compared to decide identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReebOrbit {
    pub id: String,
    #[serde(with = "serde_q")]
    pub action: Q,
    #[serde(default, with = "serde_opt_q", skip_serializing_if = "Option::is_none")]
    pub approx_action: Option<Q>,
    pub multiplicity: u32,
    #[serde(rename = "cz", default, skip_serializing_if = "Option::is_none")]
    pub cz_index: Option<i64>,
    pub parity: Parity,
    pub simple_id: String,
    #[serde(default)]
    pub odd_neg_eigenvalues: bool,
}

impl ReebOrbit {
    /// A simple orbit (multiplicity one, its own underlying orbit).
    pub fn simple(id: &str, action: Q, parity: Parity) -> Self {
        ReebOrbit {
            id: id.to_string(),
            action,
            approx_action: None,
            multiplicity: 1,
            cz_index: None,
            parity,
            simple_id: id.to_string(),
            odd_neg_eigenvalues: false,
        }
    }

    /// An `m`-fold cover of `simple`, with action scaled by `m`.
    pub fn cover(simple: &ReebOrbit, id: &str, m: u32, parity: Parity) -> Self {
        ReebOrbit {
            id: id.to_string(),
            action: &simple.action * Q::from_integer(m.into()),
            approx_action: None,
            multiplicity: m,
            cz_index: None,
            parity,
            simple_id: simple.id.clone(),
            odd_neg_eigenvalues: false,
        }
    }

    pub fn with_cz(mut self, cz: i64) -> Self {
        self.cz_index = Some(cz);
        self
    }

    fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.action.is_positive() {
            out.push(format!("orbit `{}`: action {} is not positive", self.id, fmt_q(&self.action)));
        }
        if let Some(a) = &self.approx_action {
            if !a.is_positive() {
                out.push(format!("orbit `{}`: approx_action {} is not positive", self.id, fmt_q(a)));
            }
        }
        if self.multiplicity == 0 {
            out.push(format!("orbit `{}`: multiplicity must be at least 1", self.id));
        }
        if self.multiplicity == 1 && self.simple_id != self.id {
            out.push(format!("orbit `{}`: multiplicity 1 requires simple_id = id", self.id));
        }
        out
    }
}

/// The orbits available to a computation together with the action bound `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitUniverse {
    #[serde(rename = "L", with = "serde_q")]
    pub action_bound: Q,
    #[serde(with = "orbit_list")]
    pub orbits: BTreeMap<String, ReebOrbit>,
}

mod orbit_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, ReebOrbit>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.values())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<String, ReebOrbit>, D::Error> {
        let v = Vec::<ReebOrbit>::deserialize(d)?;
        let mut m = BTreeMap::new();
        for o in v {
            let id = o.id.clone();
            if m.insert(id.clone(), o).is_some() {
                return Err(serde::de::Error::custom(format!("duplicate orbit id `{id}`")));
            }
        }
        Ok(m)
    }
}

impl OrbitUniverse {
    pub fn new(action_bound: Q, orbits: impl IntoIterator<Item = ReebOrbit>) -> Result<Self> {
        let mut m = BTreeMap::new();
        for o in orbits {
            if m.contains_key(&o.id) {
                return Err(Error::invalid(format!("duplicate orbit id `{}`", o.id)));
            }
            m.insert(o.id.clone(), o);
        }
        let u = OrbitUniverse { action_bound, orbits: m };
        u.validate()?;
        Ok(u)
    }

    /// Every structural problem with the universe, one message per problem.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.action_bound.is_positive() {
            out.push("action bound L must be positive".to_string());
        }
        for o in self.orbits.values() {
            out.extend(o.check());
            match self.orbits.get(&o.simple_id) {
                None => out.push(format!("orbit `{}`: simple orbit `{}` is missing", o.id, o.simple_id)),
                Some(s) => {
                    if s.simple_id != s.id {
                        out.push(format!("orbit `{}`: `{}` is not a simple orbit", o.id, s.id));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.diagnostics();
        if d.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(d.join("; ")))
        }
    }

    pub fn get(&self, id: &str) -> Result<&ReebOrbit> {
        self.orbits.get(id).ok_or_else(|| Error::UnknownOrbit(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.orbits.contains_key(id)
    }

    pub fn action(&self, id: &str) -> Result<&Q> {
        Ok(&self.get(id)?.action)
    }

    /// Orbits whose action does not exceed the bound `L`, in id order.
    pub fn within_bound(&self) -> impl Iterator<Item = &ReebOrbit> {
        self.orbits.values().filter(move |o| o.action <= self.action_bound)
    }

    /// Sum of actions of a multiset of orbit ids.
    pub fn total_action<'a>(&self, ids: impl IntoIterator<Item = &'a String>) -> Result<Q> {
        let mut s = Q::zero();
        for id in ids {
            s += self.action(id)?;
        }
        Ok(s)
    }
}
