//! Restriction and the local sub-localities L_V and C_V.

use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::Caps;
use crate::lattice::{SubId, SubLattice};
use crate::locality::{Locality, LocalityParts, Origin};
use crate::partial::PartialGroup;
use crate::strat::Stratification;
use crate::NONE;

/// A locality induced on a subset of the carrier, over a subgroup `S' ≤ S`.
/// The map sends new indices to parent indices.
#[derive(Debug, Clone)]
pub struct Induced {
    pub locality: Locality,
    pub map: Vec<u32>,
    /// New S index to parent S index.
    pub s_map: Vec<u32>,
}

/// Builds the induced locality. `carrier` must start with the identity and
/// `object` decides membership for parent lattice ids.
pub fn induced(
    parent: &Locality,
    s_prime: SubId,
    carrier: Vec<u32>,
    object: &dyn Fn(SubId) -> bool,
) -> Result<Induced> {
    let plat = parent.lattice();
    let (lat, s_map): (Arc<SubLattice>, Vec<u32>) = if s_prime == plat.top() {
        (plat.clone(), (0..parent.s_order() as u32).collect())
    } else {
        let (g, map) = plat.group().subgroup_as_group(plat.get(s_prime))?;
        let caps = Caps { order: usize::MAX, subgroups: usize::MAX };
        (Arc::new(SubLattice::new(g, &caps)?), map)
    };
    let ns = s_map.len();
    let mut back = vec![NONE; parent.s_order()];
    for (i, &x) in s_map.iter().enumerate() {
        back[x as usize] = i as u32;
    }
    let to_parent = |id: SubId| -> SubId {
        let b = Bits::from_indices(parent.s_order(), lat.bits(id).iter().map(|x| s_map[x] as usize));
        plat.lookup(&b).expect("subgroup of S' is a subgroup of S")
    };
    let delta: Vec<bool> = lat.ids().map(|id| object(to_parent(id))).collect();
    let n = carrier.len();
    if carrier.first() != Some(&0) {
        return Err(Error::internal("induced carrier must start with the identity"));
    }
    let mut pos = vec![NONE; parent.size()];
    for (i, &g) in carrier.iter().enumerate() {
        pos[g as usize] = i as u32;
    }
    let mut s_dom = Vec::with_capacity(n);
    let mut conj = Vec::with_capacity(n);
    for &g in &carrier {
        let c = parent.conj_map(g);
        let mut map = vec![NONE; ns];
        for (i, &x) in s_map.iter().enumerate() {
            let y = c[x as usize];
            if y != NONE && back[y as usize] != NONE {
                map[i] = back[y as usize];
            }
        }
        let b = Bits::from_indices(ns, (0..ns).filter(|&i| map[i] != NONE));
        let id = lat.lookup(&b).ok_or_else(|| Error::internal("induced S_g is not a subgroup"))?;
        if !delta[id] {
            return Err(Error::internal(format!("carrier element {g} has S'_g outside the object set")));
        }
        s_dom.push(id);
        conj.push(map);
    }
    let mut prod = vec![NONE; n * n];
    for a in 0..n {
        for b in 0..n {
            let (ca, cb) = (&conj[a], &conj[b]);
            let set = Bits::from_indices(ns, (0..ns).filter(|&x| ca[x] != NONE && cb[ca[x] as usize] != NONE));
            let id = lat.lookup(&set).ok_or_else(|| Error::internal("induced S_w is not a subgroup"))?;
            if delta[id] {
                let c = parent
                    .pair(carrier[a], carrier[b])
                    .ok_or_else(|| Error::internal("induced pair undefined in the parent"))?;
                if pos[c as usize] == NONE {
                    return Err(Error::internal(format!(
                        "product ({},{}) leaves the induced carrier",
                        carrier[a], carrier[b]
                    )));
                }
                prod[a * n + b] = pos[c as usize];
            }
        }
    }
    let mut inv = Vec::with_capacity(n);
    for &g in &carrier {
        let i = pos[parent.inv(g) as usize];
        if i == NONE {
            return Err(Error::internal("induced carrier not closed under inversion"));
        }
        inv.push(i);
    }
    let mut s_to_l = Vec::with_capacity(ns);
    for &x in &s_map {
        let i = pos[parent.s_to_l(x) as usize];
        if i == NONE {
            return Err(Error::internal("S' is not contained in the induced carrier"));
        }
        s_to_l.push(i);
    }
    let origin = parent.origin().map(|o| Origin {
        group: o.group.clone(),
        s_in_g: s_map.iter().map(|&x| o.s_in_g[x as usize]).collect(),
        elems: carrier.iter().map(|&g| o.elems[g as usize]).collect(),
    });
    let locality = Locality::from_parts(LocalityParts {
        p: parent.p(),
        inv,
        prod,
        lat,
        s_to_l,
        s_dom,
        conj,
        delta,
        origin,
    })?;
    Ok(Induced { locality, map: carrier, s_map })
}

/// Returns a witness when `delta` is not closed under overgroups and L-conjugation.
pub fn f_closed_violation(l: &Locality, delta: &[bool]) -> Option<String> {
    let lat = l.lattice();
    for p in lat.ids().filter(|&p| delta[p]) {
        if let Some(q) = lat.above(p).find(|&q| !delta[q]) {
            return Some(format!("overgroup {:?} of {:?} is missing", lat.bits(q), lat.bits(p)));
        }
        for g in 0..l.size() as u32 {
            if lat.le(p, l.s_dom(g)) {
                let q = l.conj_sub(p, g).expect("image subgroup");
                if !delta[q] {
                    return Some(format!("F-conjugate {:?} of {:?} is missing", lat.bits(q), lat.bits(p)));
                }
            }
        }
    }
    None
}

/// The restriction of L to an F-closed subset Δ' of Δ.
pub fn restrict(l: &Locality, delta_prime: &[bool]) -> Result<Induced> {
    let lat = l.lattice();
    if delta_prime.len() != lat.len() || !delta_prime.iter().any(|&d| d) {
        return Err(Error::domain("Δ' must be a nonempty set of subgroups of S"));
    }
    if let Some(p) = lat.ids().find(|&p| delta_prime[p] && !l.in_delta(p)) {
        return Err(Error::domain_with("Δ' is not contained in Δ", format!("{:?}", lat.bits(p))));
    }
    if let Some(w) = f_closed_violation(l, delta_prime) {
        return Err(Error::domain_with("Δ' is not F-closed", w));
    }
    let carrier: Vec<u32> = (0..l.size() as u32).filter(|&g| delta_prime[l.s_dom(g)]).collect();
    induced(l, lat.top(), carrier, &|id| delta_prime[id])
}

fn dims_over_class(l: &Locality, st: &Stratification, v: SubId, f: impl Fn(SubId) -> SubId) -> Option<SubId> {
    let orbit = l.subgroup_orbit(v);
    let best = orbit.iter().map(|&u| st.dim(f(u))).max().unwrap_or(0);
    if st.dim(f(v)) == best {
        None
    } else {
        orbit.into_iter().find(|&u| st.dim(f(u)) == best)
    }
}

/// `None` if V is fully normalized, else a fully normalized conjugate.
pub fn fully_normalized_alternative(l: &Locality, st: &Stratification, v: SubId) -> Option<SubId> {
    let lat = l.lattice();
    dims_over_class(l, st, v, |u| lat.normalizer(u))
}

/// `None` if V is fully centralized, else a fully centralized conjugate.
pub fn fully_centralized_alternative(l: &Locality, st: &Stratification, v: SubId) -> Option<SubId> {
    let lat = l.lattice();
    dims_over_class(l, st, v, |u| lat.join(lat.centralizer(u), u))
}

/// `(L_V, Δ_V, N_S(V))` with `Δ_V = {P ∈ Δ : V ⊴ P}`.
pub fn normalizer_locality(l: &Locality, st: &Stratification, v: SubId) -> Result<Induced> {
    let lat = l.lattice();
    if let Some(u) = fully_normalized_alternative(l, st, v) {
        return Err(Error::domain_with(
            "V is not fully normalized",
            format!("use the conjugate {:?}", lat.bits(u)),
        ));
    }
    let nv = lat.normalizer(v);
    let object = |p: SubId| l.in_delta(p) && lat.is_normal_in(v, p);
    let carrier: Vec<u32> = l
        .normalizer_elements(v)
        .into_iter()
        .filter(|&g| object(lat.normalizer_in(l.s_dom(g), v)))
        .collect();
    induced(l, nv, carrier, &object)
}

/// `(C_V, Σ_V, C_S(V))` with `Σ_V = {Q ≤ C_S(V) : Z(V) ≤ Q, QV ∈ Δ}`.
pub fn centralizer_locality(l: &Locality, st: &Stratification, v: SubId) -> Result<Induced> {
    let lat = l.lattice();
    if let Some(u) = fully_centralized_alternative(l, st, v) {
        return Err(Error::domain_with(
            "V is not fully centralized",
            format!("use the conjugate {:?}", lat.bits(u)),
        ));
    }
    let cv = lat.centralizer(v);
    let zv = lat.center(v);
    let object = |q: SubId| lat.le(q, cv) && lat.le(zv, q) && l.in_delta(lat.join(q, v));
    let carrier: Vec<u32> = l
        .centralizer_elements(v)
        .into_iter()
        .filter(|&g| object(lat.centralizer_in(l.s_dom(g), v)))
        .collect();
    induced(l, cv, carrier, &object)
}

/// `O_p(L) = 1⋆`.
pub fn o_p_locality(l: &Locality, st: &Stratification) -> SubId {
    st.star(l.lattice().trivial())
}
