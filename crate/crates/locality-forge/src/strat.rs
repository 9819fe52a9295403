//! The stratification Ω = {S_w} with the star map and dimension.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::lattice::{SubId, SubLattice};
use crate::locality::Locality;
use crate::partial::PartialGroup;
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    /// Members of Ω in id order.
    pub omega: Vec<SubId>,
    in_omega: Vec<bool>,
    star: Vec<SubId>,
    dim: Vec<usize>,
}

impl Stratification {
    /// Builds the stratification from a set Ω assumed closed under intersection.
    pub fn from_omega(lat: &SubLattice, in_omega: Vec<bool>) -> Result<Self> {
        if !in_omega[lat.top()] {
            return Err(Error::internal("Ω does not contain S"));
        }
        let omega: Vec<SubId> = lat.ids().filter(|&i| in_omega[i]).collect();
        for &a in &omega {
            for &b in &omega {
                let m = lat.meet(a, b);
                if !in_omega[m] {
                    return Err(Error::internal(format!(
                        "Ω is not closed under intersection: {:?} ∩ {:?}",
                        lat.bits(a),
                        lat.bits(b)
                    )));
                }
            }
        }
        let star: Vec<SubId> = lat
            .ids()
            .map(|x| {
                omega
                    .iter()
                    .filter(|&&o| lat.le(x, o))
                    .fold(lat.top(), |acc, &o| lat.meet(acc, o))
            })
            .collect();
        // longest strict chain in Ω ending at each member; ids are sorted by order
        let mut dim_o = vec![0usize; lat.len()];
        for &o in &omega {
            dim_o[o] = omega
                .iter()
                .filter(|&&q| lat.lt(q, o))
                .map(|&q| dim_o[q] + 1)
                .max()
                .unwrap_or(0);
        }
        let dim = lat.ids().map(|x| dim_o[star[x]]).collect();
        Ok(Stratification { omega, in_omega, star, dim })
    }

    pub fn contains(&self, x: SubId) -> bool {
        self.in_omega[x]
    }
    pub fn star(&self, x: SubId) -> SubId {
        self.star[x]
    }
    pub fn dim(&self, x: SubId) -> usize {
        self.dim[x]
    }
    pub fn in_omega(&self) -> &[bool] {
        &self.in_omega
    }
    /// dim(Ω) = dim(S).
    pub fn dimension(&self, lat: &SubLattice) -> usize {
        self.dim[lat.top()]
    }
}

/// Ω as the least set containing S and every S_g, closed under pulling back along c_g.
pub fn stratification(l: &Locality) -> Result<Stratification> {
    let lat = l.lattice();
    let mut in_omega = vec![false; lat.len()];
    let mut list = Vec::new();
    let add = |x: SubId, in_omega: &mut Vec<bool>, list: &mut Vec<SubId>| {
        if !std::mem::replace(&mut in_omega[x], true) {
            list.push(x);
        }
    };
    add(lat.top(), &mut in_omega, &mut list);
    for g in 0..l.size() as u32 {
        add(l.s_dom(g), &mut in_omega, &mut list);
    }
    let mut head = 0;
    while head < list.len() {
        let x = list[head];
        for g in 0..l.size() as u32 {
            let y = l
                .preimage(g, x)
                .ok_or_else(|| Error::internal("pullback of a subgroup is not a subgroup"))?;
            add(y, &mut in_omega, &mut list);
        }
        head += 1;
    }
    let st = Stratification::from_omega(lat, in_omega)?;
    verify_stratification(l, &st).into_result()?;
    Ok(st)
}

/// (St1) F-invariance, (St2) X ≤ X⋆, (St3) extension of conjugation maps to X⋆.
pub fn verify_stratification(l: &Locality, st: &Stratification) -> Report {
    let lat = l.lattice();
    let mut rep = Report::new("stratification");
    for x in lat.ids() {
        rep.check(lat.le(x, st.star(x)), || format!("(St2) fails at {:?}", lat.bits(x)));
        rep.check(st.contains(st.star(x)), || "star leaves Ω".into());
    }
    for g in 0..l.size() as u32 {
        let dom = l.s_dom(g);
        for x in lat.below(dom) {
            let Some(xg) = l.conj_sub(x, g) else {
                rep.fail(format!("c_{g} image of {:?} is not a subgroup", lat.bits(x)));
                continue;
            };
            if st.contains(x) {
                rep.check(st.contains(xg), || format!("(St1) fails: {:?}^{g}", lat.bits(x)));
            }
            let sx = st.star(x);
            let ext = lat.le(sx, dom) && l.conj_sub(sx, g) == Some(st.star(xg));
            rep.check(ext, || format!("(St3)/equivariance fails: ({:?})⋆ under {g}", lat.bits(x)));
        }
    }
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Normalizer,
    Centralizer,
}

/// The induced stratification on N_F(V) or C_F(V).
#[derive(Debug, Clone)]
pub struct SubStratification {
    pub v: SubId,
    pub flavor: Flavor,
    /// The ambient subgroup R = N_S(V) or C_S(V).
    pub ambient: SubId,
    /// X ↦ X• (or A⊚) for X ≤ ambient; `usize::MAX` outside.
    pub retract: Vec<SubId>,
    /// Members of the induced poset.
    pub members: Vec<SubId>,
    pub dim_v: Vec<usize>,
}

impl SubStratification {
    pub fn dimension(&self) -> usize {
        self.dim_v[self.ambient]
    }
}

pub fn sub_stratification(lat: &SubLattice, st: &Stratification, v: SubId, flavor: Flavor) -> Result<SubStratification> {
    let ambient = match flavor {
        Flavor::Normalizer => lat.normalizer(v),
        Flavor::Centralizer => lat.centralizer(v),
    };
    let mut retract = vec![usize::MAX; lat.len()];
    for x in lat.below(ambient) {
        retract[x] = lat.meet(st.star(lat.join(v, x)), ambient);
    }
    let mut in_members = vec![false; lat.len()];
    for x in lat.below(ambient) {
        in_members[retract[x]] = true;
    }
    let members: Vec<SubId> = lat.ids().filter(|&i| in_members[i]).collect();
    for x in lat.below(ambient) {
        let r = retract[x];
        if !lat.le(x, r) || retract[r] != r {
            return Err(Error::internal(format!("retraction fails at {:?}", lat.bits(x))));
        }
    }
    for &a in &members {
        for &b in &members {
            if lat.le(a, b) && !lat.le(retract[a], retract[b]) {
                return Err(Error::internal("retraction is not monotone"));
            }
        }
    }
    let mut dim_m = vec![0usize; lat.len()];
    for &m in &members {
        dim_m[m] = members
            .iter()
            .filter(|&&q| lat.lt(q, m))
            .map(|&q| dim_m[q] + 1)
            .max()
            .unwrap_or(0);
    }
    let mut dim_v = vec![0usize; lat.len()];
    for x in lat.below(ambient) {
        dim_v[x] = dim_m[retract[x]];
    }
    Ok(SubStratification { v, flavor, ambient, retract, members, dim_v })
}

/// The injective poset map X ↦ X⋆ into Ω, and the dimension drop.
pub fn verify_sub_stratification(lat: &SubLattice, st: &Stratification, ss: &SubStratification) -> Report {
    let mut rep = Report::new("sub-stratification");
    let v = ss.v;
    if ss.flavor == Flavor::Normalizer {
        for &m in &ss.members {
            rep.check(st.star(m) == st.star(lat.join(v, m)), || "X⋆ ≠ (VX)⋆ on N_Ω(V)".into());
        }
    }
    let mut images = std::collections::HashMap::new();
    for &m in &ss.members {
        let img = st.star(m);
        rep.check(st.contains(img), || "image leaves Ω".into());
        if let Some(prev) = images.insert(img, m) {
            rep.fail(format!("poset map not injective: {:?} and {:?}", lat.bits(prev), lat.bits(m)));
        }
        for &m2 in &ss.members {
            if lat.lt(m, m2) {
                let img2 = st.star(m2);
                rep.check(lat.lt(img, img2), || "poset map not strictly monotone".into());
            }
        }
    }
    let o1 = st.star(lat.trivial());
    let outside = !lat.le(v, o1);
    let drop = ss.dimension() < st.dimension(lat);
    match ss.flavor {
        Flavor::Normalizer => {
            if outside {
                rep.check(drop, || format!("dim(N_Ω(V)) = dim(Ω) although V ≰ 1⋆, V = {:?}", lat.bits(v)));
            }
            if !drop {
                rep.check(st.star(ss.ambient) == lat.top(), || "dim(N_Ω(V)) = dim(Ω) but R⋆ ≠ S".into());
            }
        }
        Flavor::Centralizer => {
            let zv = lat.center(v);
            if !lat.le(zv, o1) {
                rep.check(drop, || format!("dim(C_Ω(V)) = dim(Ω) although Z(V) ≰ 1⋆, V = {:?}", lat.bits(v)));
            }
            if !drop {
                let vd = lat.join(v, ss.ambient);
                rep.check(st.star(vd) == lat.top(), || "dim(C_Ω(V)) = dim(Ω) but (VD)⋆ ≠ S".into());
            }
        }
    }
    rep
}

/// Bits helper: the set of Ω members as bits over ids.
pub fn omega_bits(st: &Stratification, lat: &SubLattice) -> Bits {
    Bits::from_indices(lat.len(), st.omega.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::Caps;
    use crate::locality::SylowContext;
    use std::sync::Arc;

    #[test]
    fn group_locality_stratification() {
        let ctx = SylowContext::new(Arc::new(fixtures::sym4().unwrap()), 2, &Caps::default()).unwrap();
        let l = ctx.group_locality().unwrap();
        let st = stratification(&l).unwrap();
        assert!(verify_stratification(&l, &st).ok());
        let lat = l.lattice();
        for x in lat.ids() {
            assert!(lat.le(x, st.star(x)));
            assert!(st.contains(st.star(x)));
        }
        assert!(st.contains(lat.top()));
        assert_eq!(st.dim(lat.top()), st.dimension(lat));
    }

    #[test]
    fn omega_must_contain_s() {
        let ctx = SylowContext::new(Arc::new(fixtures::d8().unwrap()), 2, &Caps::default()).unwrap();
        let lat = &ctx.lat;
        let mut om = vec![false; lat.len()];
        om[lat.trivial()] = true;
        assert!(Stratification::from_omega(lat, om).is_err());
    }
}
