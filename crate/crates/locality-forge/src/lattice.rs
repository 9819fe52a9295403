//! The subgroup lattice of a finite p-group S, with stable ids.

use std::collections::HashMap;

use crate::bits::Bits;
use crate::error::Result;
use crate::group::{Caps, FiniteGroup, Subgroup};

pub type SubId = usize;

#[derive(Debug, Clone)]
pub struct SubLattice {
    grp: FiniteGroup,
    subs: Vec<Subgroup>,
    index: HashMap<Bits, SubId>,
    norm: Vec<SubId>,
    cent: Vec<SubId>,
}

impl SubLattice {
    pub fn new(grp: FiniteGroup, caps: &Caps) -> Result<Self> {
        let subs = grp.all_subgroups(caps)?;
        let index: HashMap<Bits, SubId> =
            subs.iter().enumerate().map(|(i, s)| (s.0.clone(), i)).collect();
        let whole = grp.whole();
        let norm = subs.iter().map(|h| index[&grp.normalizer_in(&whole, h).0]).collect();
        let cent = subs.iter().map(|h| index[&grp.centralizer_in(&whole, h).0]).collect();
        Ok(SubLattice { grp, subs, index, norm, cent })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.grp
    }
    pub fn len(&self) -> usize {
        self.subs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }
    pub fn get(&self, id: SubId) -> &Subgroup {
        &self.subs[id]
    }
    pub fn bits(&self, id: SubId) -> &Bits {
        &self.subs[id].0
    }
    pub fn order(&self, id: SubId) -> usize {
        self.subs[id].order()
    }
    pub fn trivial(&self) -> SubId {
        0
    }
    pub fn top(&self) -> SubId {
        self.subs.len() - 1
    }
    pub fn ids(&self) -> std::ops::Range<SubId> {
        0..self.subs.len()
    }
    pub fn lookup(&self, set: &Bits) -> Option<SubId> {
        self.index.get(set).copied()
    }
    pub fn id_of(&self, h: &Subgroup) -> Option<SubId> {
        self.lookup(&h.0)
    }
    pub fn normalizer(&self, id: SubId) -> SubId {
        self.norm[id]
    }
    pub fn centralizer(&self, id: SubId) -> SubId {
        self.cent[id]
    }
    pub fn le(&self, a: SubId, b: SubId) -> bool {
        self.subs[a].is_subgroup_of(&self.subs[b])
    }
    pub fn lt(&self, a: SubId, b: SubId) -> bool {
        a != b && self.le(a, b)
    }
    pub fn meet(&self, a: SubId, b: SubId) -> SubId {
        self.index[&self.subs[a].0.and(&self.subs[b].0)]
    }
    pub fn join(&self, a: SubId, b: SubId) -> SubId {
        self.index[&self.grp.join(&self.subs[a], &self.subs[b]).0]
    }
    pub fn generated(&self, set: &Bits) -> SubId {
        self.index[&self.grp.closure(set).0]
    }
    /// `N_a(b)` inside the subgroup `a`.
    pub fn normalizer_in(&self, a: SubId, b: SubId) -> SubId {
        self.meet(a, self.norm[b])
    }
    pub fn centralizer_in(&self, a: SubId, b: SubId) -> SubId {
        self.meet(a, self.cent[b])
    }
    pub fn center(&self, a: SubId) -> SubId {
        self.centralizer_in(a, a)
    }
    pub fn is_normal_in(&self, a: SubId, b: SubId) -> bool {
        self.le(a, b) && self.le(b, self.norm[a])
    }
    pub fn conjugate(&self, a: SubId, g: u32) -> SubId {
        self.index[&self.grp.conjugate_subgroup(&self.subs[a], g).0]
    }
    /// Subgroups of `a`, in id order.
    pub fn below(&self, a: SubId) -> impl Iterator<Item = SubId> + '_ {
        self.ids().filter(move |&x| self.le(x, a))
    }
    pub fn above(&self, a: SubId) -> impl Iterator<Item = SubId> + '_ {
        self.ids().filter(move |&x| self.le(a, x))
    }
    /// Image of `a` under a full-length element map (NONE outside the domain).
    pub fn image(&self, a: SubId, map: &[u32]) -> Option<SubId> {
        let mut b = Bits::new(self.grp.order());
        for x in self.subs[a].0.iter() {
            let y = map[x];
            if y == crate::NONE {
                return None;
            }
            b.insert(y as usize);
        }
        self.lookup(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn dihedral_lattice() {
        let g = fixtures::d8().unwrap();
        let lat = SubLattice::new(g, &Caps::default()).unwrap();
        assert_eq!(lat.len(), 10);
        assert_eq!(lat.order(lat.trivial()), 1);
        assert_eq!(lat.order(lat.top()), 8);
        let z = lat.center(lat.top());
        assert_eq!(lat.order(z), 2);
        assert_eq!(lat.centralizer(z), lat.top());
        let normal = lat.ids().filter(|&x| lat.is_normal_in(x, lat.top())).count();
        assert_eq!(normal, 6);
        for a in lat.ids() {
            assert!(lat.le(a, lat.normalizer(a)));
            assert_eq!(lat.meet(a, a), a);
            assert_eq!(lat.join(lat.trivial(), a), a);
            assert!(lat.below(a).all(|b| lat.le(b, a)));
        }
    }
}
