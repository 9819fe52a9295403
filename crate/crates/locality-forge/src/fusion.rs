//! Fusion systems over S: all morphisms into a base subgroup, as image tables.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{Caps, FiniteGroup};
use crate::lattice::{SubId, SubLattice};
use crate::locality::Locality;
use crate::NONE;

/// A morphism as a full-length map on S indices, `NONE` outside its domain.
pub type Hom = Vec<u32>;

#[derive(Debug, Clone)]
pub struct FusionSystem {
    lat: Arc<SubLattice>,
    base: SubId,
    /// `homs[X]`: every morphism `X → base`, sorted; empty unless `X ≤ base`.
    homs: Vec<Vec<Hom>>,
}

impl PartialEq for FusionSystem {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.homs == other.homs
    }
}

pub const HOM_CAP: usize = 2_000_000;

fn identity_on(lat: &SubLattice, x: SubId) -> Hom {
    let mut h = vec![NONE; lat.group().order()];
    for i in lat.bits(x).iter() {
        h[i] = i as u32;
    }
    h
}

fn invert(h: &Hom) -> Hom {
    let mut out = vec![NONE; h.len()];
    for (x, &y) in h.iter().enumerate() {
        if y != NONE {
            out[y as usize] = x as u32;
        }
    }
    out
}

impl FusionSystem {
    /// The fusion system on `base` generated by the given morphisms.
    pub fn from_generators(lat: Arc<SubLattice>, base: SubId, gens: &[(SubId, Hom)]) -> Result<Self> {
        let mut all: Vec<(SubId, Hom)> = Vec::new();
        let mut seen = HashSet::new();
        for (d, h) in gens {
            if !lat.le(*d, base) {
                return Err(Error::domain("generator domain is not inside the base"));
            }
            let img = lat
                .image(*d, h)
                .filter(|&i| lat.le(i, base))
                .ok_or_else(|| Error::domain("generator image is not a subgroup of the base"))?;
            for (dd, hh) in [(*d, h.clone()), (img, invert(h))] {
                if seen.insert(hh.clone()) {
                    all.push((dd, hh));
                }
            }
        }
        let mut homs = vec![Vec::new(); lat.len()];
        let mut total = 0usize;
        for x in lat.below(base).collect::<Vec<_>>() {
            let start = identity_on(&lat, x);
            let mut found: HashSet<Hom> = HashSet::from([start.clone()]);
            let mut list = vec![(start, x)];
            let mut head = 0;
            while head < list.len() {
                let (phi, img) = list[head].clone();
                for (d, psi) in &all {
                    if !lat.le(img, *d) {
                        continue;
                    }
                    let comp: Hom = phi.iter().map(|&y| if y == NONE { NONE } else { psi[y as usize] }).collect();
                    if !found.contains(&comp) {
                        let ci = lat.image(x, &comp).expect("image of a subgroup");
                        found.insert(comp.clone());
                        list.push((comp, ci));
                    }
                }
                head += 1;
            }
            total += list.len();
            if total > HOM_CAP {
                return Err(Error::Resource(format!("hom-set total exceeds {HOM_CAP}")));
            }
            let mut hs: Vec<Hom> = list.into_iter().map(|(h, _)| h).collect();
            hs.sort();
            homs[x] = hs;
        }
        Ok(FusionSystem { lat, base, homs })
    }

    /// Assembles a system from explicit hom-sets; nothing is checked.
    pub fn from_raw(lat: Arc<SubLattice>, base: SubId, homs: Vec<Vec<Hom>>) -> Self {
        FusionSystem { lat, base, homs }
    }

    /// The system with one morphism removed, for fault injection.
    pub fn without_hom(&self, x: SubId, index: usize) -> Self {
        let mut f = self.clone();
        f.homs[x].remove(index);
        f
    }

    /// `F_B(B)`: conjugation by elements of B only.
    pub fn inner(lat: Arc<SubLattice>, b: SubId) -> Result<Self> {
        let g = lat.group();
        let gens: Vec<(SubId, Hom)> = lat
            .bits(b)
            .iter()
            .map(|s| {
                let mut h = vec![NONE; g.order()];
                for x in lat.bits(b).iter() {
                    h[x] = g.conj(x as u32, s as u32);
                }
                (b, h)
            })
            .collect();
        FusionSystem::from_generators(lat, b, &gens)
    }

    pub fn of_locality(l: &Locality) -> Result<Self> {
        let lat = l.lattice().clone();
        let top = lat.top();
        FusionSystem::from_generators(lat, top, &l.conjugation_generators())
    }

    pub fn lattice(&self) -> &Arc<SubLattice> {
        &self.lat
    }
    pub fn base(&self) -> SubId {
        self.base
    }
    pub fn homs(&self, x: SubId) -> &[Hom] {
        &self.homs[x]
    }
    pub fn all_homs(&self) -> &[Vec<Hom>] {
        &self.homs
    }
    pub fn contains(&self, x: SubId, h: &Hom) -> bool {
        self.homs[x].binary_search(h).is_ok()
    }
    pub fn image(&self, x: SubId, h: &Hom) -> SubId {
        self.lat.image(x, h).expect("morphism image is a subgroup")
    }

    /// `Hom_F(X, Y)`.
    pub fn hom_set(&self, x: SubId, y: SubId) -> Vec<&Hom> {
        self.homs[x].iter().filter(|h| self.lat.le(self.image(x, h), y)).collect()
    }

    /// `Aut_F(X)`.
    pub fn aut(&self, x: SubId) -> Vec<&Hom> {
        self.homs[x].iter().filter(|h| self.image(x, h) == x).collect()
    }

    /// The F-conjugates of X, sorted.
    pub fn conjugates(&self, x: SubId) -> Vec<SubId> {
        let set: BTreeSet<SubId> = self.homs[x].iter().map(|h| self.image(x, h)).collect();
        set.into_iter().collect()
    }

    /// F-classes of subgroups of the base, each sorted, ordered by smallest member.
    pub fn classes(&self) -> Vec<Vec<SubId>> {
        let mut done = vec![false; self.lat.len()];
        let mut out = Vec::new();
        for x in self.lat.below(self.base) {
            if !done[x] {
                let c = self.conjugates(x);
                for &y in &c {
                    done[y] = true;
                }
                out.push(c);
            }
        }
        out
    }

    /// Least F-invariant overgroup-closed superset inside the base.
    pub fn f_closure(&self, gamma0: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.lat.len()];
        for x in self.lat.below(self.base).filter(|&x| gamma0[x]) {
            for y in self.conjugates(x) {
                for z in self.lat.above(y).filter(|&z| self.lat.le(z, self.base)) {
                    out[z] = true;
                }
            }
        }
        // overgroups of conjugates are again F-invariant
        out
    }

    pub fn f_closed_violation(&self, gamma: &[bool]) -> Option<SubId> {
        let cl = self.f_closure(gamma);
        self.lat.ids().find(|&x| cl[x] && !gamma[x])
    }

    fn restrict_hom(&self, h: &Hom, x: SubId) -> Hom {
        let b = self.lat.bits(x);
        h.iter().enumerate().map(|(i, &y)| if b.contains(i) { y } else { NONE }).collect()
    }

    /// `N_F(V)` on `N_base(V)`.
    pub fn normalizer_system(&self, v: SubId) -> FusionSystem {
        let lat = &self.lat;
        let nb = lat.normalizer_in(self.base, v);
        let mut homs = vec![Vec::new(); lat.len()];
        for x in lat.below(nb) {
            let xv = lat.join(x, v);
            let mut set: BTreeSet<Hom> = BTreeSet::new();
            for h in &self.homs[xv] {
                if lat.image(v, h) == Some(v) {
                    set.insert(self.restrict_hom(h, x));
                }
            }
            homs[x] = set.into_iter().collect();
        }
        FusionSystem { lat: lat.clone(), base: nb, homs }
    }

    /// `C_F(V)` on `C_base(V)`.
    pub fn centralizer_system(&self, v: SubId) -> FusionSystem {
        let lat = &self.lat;
        let cb = lat.centralizer_in(self.base, v);
        let vb = lat.bits(v).clone();
        let mut homs = vec![Vec::new(); lat.len()];
        for x in lat.below(cb) {
            let xv = lat.join(x, v);
            let mut set: BTreeSet<Hom> = BTreeSet::new();
            for h in &self.homs[xv] {
                if vb.iter().all(|i| h[i] == i as u32) {
                    set.insert(self.restrict_hom(h, x));
                }
            }
            homs[x] = set.into_iter().collect();
        }
        FusionSystem { lat: lat.clone(), base: cb, homs }
    }

    /// Is V normal in this system: every morphism extends over XV leaving V invariant?
    pub fn is_normal_subgroup(&self, v: SubId) -> bool {
        let lat = &self.lat;
        if !lat.is_normal_in(v, self.base) {
            return false;
        }
        for x in lat.below(self.base) {
            let xv = lat.join(x, v);
            let ext: Vec<&Hom> = self.homs[xv].iter().filter(|h| lat.image(v, h) == Some(v)).collect();
            let bx = lat.bits(x);
            for h in &self.homs[x] {
                if !ext.iter().any(|e| bx.iter().all(|i| e[i] == h[i])) {
                    return false;
                }
            }
        }
        true
    }

    /// `O_p(F)`, the largest subgroup normal in F.
    pub fn o_p(&self) -> SubId {
        let lat = &self.lat;
        let mut cands: Vec<SubId> = lat.below(self.base).filter(|&v| lat.is_normal_in(v, self.base)).collect();
        cands.reverse();
        cands
            .into_iter()
            .find(|&v| self.is_normal_subgroup(v))
            .unwrap_or(lat.trivial())
    }

    /// The socle, which for these systems coincides with `O_p`.
    pub fn socle(&self) -> SubId {
        self.o_p()
    }

    /// `Aut_F(X)` as a permutation group on the members of X; also returns the
    /// number of distinct automorphisms stored.
    pub fn aut_group(&self, x: SubId) -> Result<(FiniteGroup, usize)> {
        let members = self.lat.bits(x).to_vec();
        let pos = |s: u32| members.iter().position(|&m| m == s).expect("member") as u32;
        let perms: Vec<Vec<u32>> = self
            .aut(x)
            .iter()
            .map(|h| members.iter().map(|&m| pos(h[m as usize])).collect())
            .collect();
        let n = perms.len();
        let caps = Caps { order: 1_000_000, subgroups: usize::MAX };
        Ok((FiniteGroup::from_perms(members.len(), &perms, &caps)?, n))
    }

    /// Perm form of a restricted conjugation map inside `Aut(X)`.
    pub fn perm_of(&self, x: SubId, h: &Hom) -> Vec<u32> {
        let members = self.lat.bits(x).to_vec();
        members
            .iter()
            .map(|&m| members.iter().position(|&t| t == h[m as usize]).expect("automorphism") as u32)
            .collect()
    }

    /// `c_s|_X` for s normalizing X.
    pub fn conj_hom(&self, x: SubId, s: u32) -> Hom {
        let g = self.lat.group();
        let mut h = vec![NONE; g.order()];
        for i in self.lat.bits(x).iter() {
            h[i] = g.conj(i as u32, s);
        }
        h
    }
}

/// ψ with ψ(xα) = (xφ)α for every φ ∈ F, required to be in F'. Returns a witness on failure.
pub fn fusion_preserving_violation(alpha: &[u32], f: &FusionSystem, fp: &FusionSystem) -> Option<String> {
    let lat = f.lattice();
    let latp = fp.lattice();
    let np = latp.group().order();
    for x in lat.below(f.base()) {
        let xa = Bits::from_indices(np, lat.bits(x).iter().map(|i| alpha[i] as usize));
        let Some(xa_id) = latp.lookup(&xa) else {
            return Some(format!("image of {:?} is not a subgroup", lat.bits(x)));
        };
        for h in f.homs(x) {
            let mut psi = vec![NONE; np];
            for i in lat.bits(x).iter() {
                let (a, b) = (alpha[i] as usize, alpha[h[i] as usize]);
                if psi[a] != NONE && psi[a] != b {
                    return Some(format!("ψ is not well defined on the image of {:?}", lat.bits(x)));
                }
                psi[a] = b;
            }
            if !fp.contains(xa_id, &psi) {
                return Some(format!("induced map on {:?} is not a morphism of the target", xa));
            }
        }
    }
    None
}

pub fn is_fusion_preserving(alpha: &[u32], f: &FusionSystem, fp: &FusionSystem) -> bool {
    fusion_preserving_violation(alpha, f, fp).is_none()
}
