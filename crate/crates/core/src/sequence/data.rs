use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;

pub type OrbitId = u32;

/// Local ideals at the points `c_j` of finitely many orbits.
///
/// Slot `j` of orbit `a` holds the ideal at `c_j(a)`; a missing slot (or a
/// missing orbit) is the unit ideal. Stored ideals are always proper,
/// nonzero and Artinian. Twisting by `σ^i` moves slot `j` to slot `j + i`
/// and leaves the local ideal unchanged.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitIdealData {
    vars: usize,
    orbits: BTreeMap<OrbitId, BTreeMap<i64, MonomialIdeal>>,
}

impl OrbitIdealData {
    /// The all-unit datum (empty cosupport).
    pub fn unit(vars: usize) -> Self {
        OrbitIdealData { vars, orbits: BTreeMap::new() }
    }

    /// Builds a datum from `(orbit, slot, ideal)` triples; repeated slots multiply.
    pub fn from_slots(vars: usize, slots: impl IntoIterator<Item = (OrbitId, i64, MonomialIdeal)>) -> Result<Self> {
        let mut d = Self::unit(vars);
        for (a, j, ideal) in slots {
            let cur = d.slot(a, j);
            d.set_slot(a, j, cur.multiply(&ideal)?)?;
        }
        Ok(d)
    }

    /// Single-orbit convenience constructor.
    pub fn single_orbit(vars: usize, slots: impl IntoIterator<Item = (i64, MonomialIdeal)>) -> Result<Self> {
        Self::from_slots(vars, slots.into_iter().map(|(j, i)| (0, j, i)))
    }

    pub fn set_slot(&mut self, orbit: OrbitId, slot: i64, ideal: MonomialIdeal) -> Result<()> {
        if ideal.vars() != self.vars {
            return Err(Error::VarMismatch(self.vars, ideal.vars()));
        }
        if ideal.is_zero() {
            return Err(Error::Input(format!("zero ideal at orbit {orbit} slot {slot}")));
        }
        if !ideal.is_artinian() {
            return Err(Error::Input(format!("ideal {ideal} at orbit {orbit} slot {slot} is not Artinian")));
        }
        if ideal.is_unit() {
            if let Some(o) = self.orbits.get_mut(&orbit) {
                o.remove(&slot);
                if o.is_empty() {
                    self.orbits.remove(&orbit);
                }
            }
        } else {
            self.orbits.entry(orbit).or_default().insert(slot, ideal);
        }
        Ok(())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// The local ideal at `(orbit, slot)`, unit when unoccupied.
    pub fn slot(&self, orbit: OrbitId, slot: i64) -> MonomialIdeal {
        self.orbits.get(&orbit).and_then(|o| o.get(&slot)).cloned().unwrap_or_else(|| MonomialIdeal::unit(self.vars))
    }

    pub fn orbit_ids(&self) -> impl Iterator<Item = OrbitId> + '_ {
        self.orbits.keys().copied()
    }

    /// Occupied slots of one orbit, in increasing order.
    pub fn slots(&self, orbit: OrbitId) -> impl Iterator<Item = (i64, &MonomialIdeal)> + '_ {
        self.orbits.get(&orbit).into_iter().flat_map(|o| o.iter().map(|(j, i)| (*j, i)))
    }

    pub fn is_unit(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn slot_range(&self, orbit: OrbitId) -> Option<(i64, i64)> {
        let o = self.orbits.get(&orbit)?;
        Some((*o.keys().next()?, *o.keys().next_back()?))
    }

    /// The datum restricted to a single orbit.
    pub fn restrict(&self, orbit: OrbitId) -> Self {
        let mut orbits = BTreeMap::new();
        if let Some(o) = self.orbits.get(&orbit) {
            orbits.insert(orbit, o.clone());
        }
        OrbitIdealData { vars: self.vars, orbits }
    }

    /// `D^{σ^i}`: slot `j` moves to `j + i`.
    pub fn twist(&self, i: i64) -> Self {
        let orbits =
            self.orbits.iter().map(|(a, o)| (*a, o.iter().map(|(j, id)| (j + i, id.clone())).collect())).collect();
        OrbitIdealData { vars: self.vars, orbits }
    }

    /// Twists each orbit by its own amount.
    pub fn twist_per_orbit(&self, shifts: &BTreeMap<OrbitId, i64>) -> Self {
        let orbits = self
            .orbits
            .iter()
            .map(|(a, o)| {
                let s = shifts.get(a).copied().unwrap_or(0);
                (*a, o.iter().map(|(j, id)| (j + s, id.clone())).collect())
            })
            .collect();
        OrbitIdealData { vars: self.vars, orbits }
    }

    /// Slotwise product; absent slots act as the unit ideal.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (a, o) in &other.orbits {
            for (j, ideal) in o {
                let cur = out.slot(*a, *j);
                let prod = cur.multiply(ideal)?;
                out.set_slot(*a, *j, prod)?;
            }
        }
        Ok(out)
    }

    /// Slotwise colon `self[j] : other[j]`, clamped to the unit ideal.
    ///
    /// Where `self` is unit the result is unit; where `other` is unit the
    /// result is `self[j]`.
    pub fn colon(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::unit(self.vars);
        for (a, o) in &self.orbits {
            for (j, ideal) in o {
                let q = ideal.colon(&other.slot(*a, *j))?;
                out.set_slot(*a, *j, q)?;
            }
        }
        Ok(out)
    }

    /// Slotwise containment.
    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        Ok(self.first_non_contained(other)?.is_none())
    }

    /// First `(orbit, slot)` where `self[j] ⊄ other[j]`.
    pub fn first_non_contained(&self, other: &Self) -> Result<Option<(OrbitId, i64)>> {
        self.check_vars(other)?;
        for (a, o) in &other.orbits {
            for (j, theirs) in o {
                if !self.slot(*a, *j).is_subset(theirs)? {
                    return Ok(Some((*a, *j)));
                }
            }
        }
        Ok(None)
    }

    /// First `(orbit, slot)` at which the two data differ.
    pub fn first_difference(&self, other: &Self) -> Option<(OrbitId, i64)> {
        let mut keys: Vec<(OrbitId, i64)> =
            self.orbits.iter().chain(other.orbits.iter()).flat_map(|(a, o)| o.keys().map(move |j| (*a, *j))).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find(|(a, j)| self.slot(*a, *j) != other.slot(*a, *j))
    }

    /// Per-orbit width: offset of the last occupied slot from the first.
    pub fn width(&self) -> BTreeMap<OrbitId, i64> {
        self.orbits
            .iter()
            .filter_map(|(a, o)| {
                let lo = o.keys().next()?;
                let hi = o.keys().next_back()?;
                Some((*a, hi - lo))
            })
            .collect()
    }

    /// Width of one orbit; undefined (an error) for an unoccupied orbit.
    pub fn orbit_width(&self, orbit: OrbitId) -> Result<i64> {
        self.width()
            .get(&orbit)
            .copied()
            .ok_or_else(|| Error::Input(format!("orbit {orbit} is empty; width undefined")))
    }

    /// Overall width, the maximum over orbits.
    pub fn max_width(&self) -> i64 {
        self.width().values().copied().max().unwrap_or(0)
    }

    /// Shifts each orbit so its first occupied slot is 0; returns the shift applied.
    pub fn normalized(&self) -> (Self, BTreeMap<OrbitId, i64>) {
        let shifts: BTreeMap<OrbitId, i64> =
            self.orbits.iter().filter_map(|(a, o)| o.keys().next().map(|lo| (*a, -lo))).collect();
        (self.twist_per_orbit(&shifts), shifts)
    }

    /// Reverses one orbit's slots inside `[0, span]`: slot `j` goes to `span - j`.
    pub fn reversed(&self, span: i64) -> Self {
        let orbits =
            self.orbits.iter().map(|(a, o)| (*a, o.iter().map(|(j, id)| (span - j, id.clone())).collect())).collect();
        OrbitIdealData { vars: self.vars, orbits }
    }

    /// Union of two data on disjoint orbit sets.
    pub fn merge_disjoint(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (a, o) in &other.orbits {
            if out.orbits.contains_key(a) {
                return Err(Error::Input(format!("orbit {a} present in both data")));
            }
            out.orbits.insert(*a, o.clone());
        }
        Ok(out)
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VarMismatch(self.vars, other.vars))
        }
    }
}

/// Wire form: `{"vars": 2, "orbits": [{"id": 0, "slots": {"0": [[1,0],[0,1]]}}]}`.
#[derive(Serialize, Deserialize)]
struct DataWire {
    vars: usize,
    orbits: Vec<OrbitWire>,
}

#[derive(Serialize, Deserialize)]
struct OrbitWire {
    id: OrbitId,
    slots: BTreeMap<String, Vec<Vec<u32>>>,
}

impl Serialize for OrbitIdealData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let orbits = self
            .orbits
            .iter()
            .map(|(a, o)| OrbitWire {
                id: *a,
                slots: o
                    .iter()
                    .map(|(j, id)| (j.to_string(), id.gens().iter().map(|g| g.exponents().to_vec()).collect()))
                    .collect(),
            })
            .collect();
        DataWire { vars: self.vars, orbits }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrbitIdealData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = DataWire::deserialize(d)?;
        let mut out = OrbitIdealData::unit(wire.vars);
        for o in wire.orbits {
            for (j, gens) in o.slots {
                let j: i64 = j.parse().map_err(D::Error::custom)?;
                let gens = gens
                    .into_iter()
                    .map(crate::monomial::Monomial::new)
                    .collect::<Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                let ideal = MonomialIdeal::minimalize(wire.vars, gens).map_err(D::Error::custom)?;
                out.set_slot(o.id, j, ideal).map_err(D::Error::custom)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for OrbitIdealData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let multi = self.orbits.len() > 1;
        let mut first = true;
        for (a, o) in &self.orbits {
            for (j, id) in o {
                if !first {
                    write!(f, " · ")?;
                }
                first = false;
                if multi {
                    write!(f, "{id}[{a}:{j}]")?;
                } else {
                    write!(f, "{id}[{j}]")?;
                }
            }
        }
        Ok(())
    }
}
