//! Quotients L/N by partial normal subgroups, via maximal cosets, and the
//! Θ-quotient.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bits::Bits;
use crate::classify::{classify_subgroups, Classification};
use crate::error::{Error, Result};
use crate::fusion::{fusion_preserving_violation, FusionSystem};
use crate::group::{Caps, FiniteGroup};
use crate::lattice::SubLattice;
use crate::locality::{Locality, LocalityParts};
use crate::partial::{partial_normal_violation, PartialGroup};
use crate::proper::check_proper;
use crate::strat::stratification;
use crate::NONE;

#[derive(Debug, Clone)]
pub struct Quotient {
    pub locality: Locality,
    /// The projection ρ on carrier indices.
    pub rho: Vec<u32>,
    /// ρ restricted to S, on S indices.
    pub s_rho: Vec<u32>,
    /// Maximal cosets, each sorted.
    pub cosets: Vec<Vec<u32>>,
}

fn coset(l: &Locality, n: &[u32], g: u32) -> Bits {
    Bits::from_indices(l.size(), n.iter().filter_map(|&m| l.pair(m, g)).map(|x| x as usize))
}

pub fn quotient(l: &Locality, nset: &Bits) -> Result<Quotient> {
    if let Some(w) = partial_normal_violation(l, nset) {
        return Err(Error::domain_with("N is not a partial normal subgroup", w));
    }
    let n = l.size();
    let lat = l.lattice();
    let nlist = nset.to_vec();
    let cos: Vec<Bits> = (0..n as u32).map(|g| coset(l, &nlist, g)).collect();
    let up_max: Vec<bool> = (0..n)
        .map(|g| {
            let sg = l.s_dom(g as u32);
            !cos[g].iter().any(|f| lat.lt(sg, l.s_dom(f as u32)))
        })
        .collect();
    let mut classes: Vec<Bits> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for g in (0..n).filter(|&g| up_max[g]) {
        if seen.insert(cos[g].clone()) {
            classes.push(cos[g].clone());
        }
    }
    let mut rho = vec![NONE; n];
    classes.sort_by_key(|c| c.iter().next());
    for (ci, c) in classes.iter().enumerate() {
        for f in c.iter() {
            if rho[f] != NONE {
                return Err(Error::internal(format!("maximal cosets overlap at element {f}")));
            }
            rho[f] = ci as u32;
        }
    }
    if let Some(f) = rho.iter().position(|&r| r == NONE) {
        return Err(Error::internal(format!("maximal cosets do not cover element {f}")));
    }
    let nq = classes.len();
    // S̄ as a group in its own right
    let ns = l.s_order();
    let mut sbar_cosets: Vec<u32> = (0..ns as u32).map(|x| rho[l.s_to_l(x) as usize]).collect();
    sbar_cosets.sort();
    sbar_cosets.dedup();
    let pos: HashMap<u32, u32> = sbar_cosets.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
    let s_rho: Vec<u32> = (0..ns as u32).map(|x| pos[&rho[l.s_to_l(x) as usize]]).collect();
    let m = sbar_cosets.len();
    let mut table = vec![NONE; m * m];
    let sg = l.s_group();
    for x in 0..ns as u32 {
        for y in 0..ns as u32 {
            let (a, b, c) = (s_rho[x as usize], s_rho[y as usize], s_rho[sg.mul(x, y) as usize]);
            let slot = &mut table[(a * m as u32 + b) as usize];
            if *slot != NONE && *slot != c {
                return Err(Error::internal("S/T multiplication is not well defined"));
            }
            *slot = c;
        }
    }
    let sbar = FiniteGroup::from_table(m, table)?;
    let caps = Caps { order: usize::MAX, subgroups: usize::MAX };
    let qlat = Arc::new(SubLattice::new(sbar, &caps)?);
    let img = |id: usize| -> Result<usize> {
        let b = Bits::from_indices(m, lat.bits(id).iter().map(|x| s_rho[x] as usize));
        qlat.lookup(&b).ok_or_else(|| Error::internal("image of a subgroup of S is not a subgroup"))
    };
    // S_c and c_c from ↑-maximal representatives
    let mut s_dom = vec![usize::MAX; nq];
    let mut conj: Vec<Vec<u32>> = vec![vec![NONE; m]; nq];
    for f in (0..n).filter(|&f| up_max[f]) {
        let c = rho[f] as usize;
        let d = img(l.s_dom(f as u32))?;
        let mut map = vec![NONE; m];
        let cf = l.conj_map(f as u32);
        for x in lat.bits(l.s_dom(f as u32)).iter() {
            let (a, b) = (s_rho[x] as usize, s_rho[cf[x] as usize]);
            if map[a] != NONE && map[a] != b {
                return Err(Error::internal(format!("conjugation by coset of {f} is not well defined")));
            }
            map[a] = b;
        }
        if s_dom[c] == usize::MAX {
            s_dom[c] = d;
            conj[c] = map;
        } else if s_dom[c] != d || conj[c] != map {
            return Err(Error::internal(format!("maximal representatives of coset {c} disagree")));
        }
    }
    let mut delta = vec![false; qlat.len()];
    for p in l.delta_ids() {
        delta[img(p)?] = true;
    }
    let mut inv = vec![NONE; nq];
    for f in 0..n {
        let (a, b) = (rho[f], rho[l.inv(f as u32) as usize]);
        if inv[a as usize] != NONE && inv[a as usize] != b {
            return Err(Error::internal("inversion is not well defined on cosets"));
        }
        inv[a as usize] = b;
    }
    let mut prod = vec![NONE; nq * nq];
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if let Some(c) = l.pair(a, b) {
                let slot = &mut prod[rho[a as usize] as usize * nq + rho[b as usize] as usize];
                let v = rho[c as usize];
                if *slot != NONE && *slot != v {
                    return Err(Error::internal(format!("coset product not well defined at ({a},{b})")));
                }
                *slot = v;
            }
        }
    }
    let s_to_l: Vec<u32> = sbar_cosets.clone();
    let q = Locality::from_parts(LocalityParts {
        p: l.p(),
        inv,
        prod,
        lat: qlat.clone(),
        s_to_l,
        s_dom,
        conj,
        delta,
        origin: None,
    })?;
    // every objectively defined pair must come from a preimage pair, and conversely
    for a in 0..nq as u32 {
        for b in 0..nq as u32 {
            let objective = q.in_domain(&[a, b]);
            let table = q.pair(a, b).is_some();
            if objective != table {
                return Err(Error::internal(format!(
                    "quotient coverage fails at ({a},{b}): objective {objective}, from preimages {table}"
                )));
            }
        }
    }
    let kernel: Vec<usize> = (0..n).filter(|&f| rho[f] == 0).collect();
    if Bits::from_indices(n, kernel) != *nset {
        return Err(Error::internal("kernel of ρ differs from N"));
    }
    let cosets = classes.iter().map(|c| c.to_vec()).collect();
    Ok(Quotient { locality: q, rho, s_rho, cosets })
}

/// `Θ = ⋃_{P ∈ Δ} O_{p'}(N_L(P))`.
pub fn theta(l: &Locality) -> Result<Bits> {
    let mut th = Bits::new(l.size());
    for p in l.delta_ids() {
        let (grp, el) = l.normalizer_group(p)?;
        for i in grp.o_p_prime(l.p()).0.iter() {
            th.insert(el[i] as usize);
        }
    }
    Ok(th)
}

#[derive(Debug, Clone)]
pub struct ThetaQuotient {
    pub theta: Bits,
    pub quotient: Quotient,
    pub classification: Classification,
}

/// The Θ-quotient of a locality with F^cr ⊆ Δ ⊆ F^c over a normalizer-increasing S.
pub fn theta_quotient(l: &Locality, f: &FusionSystem, cl: &Classification) -> Result<ThetaQuotient> {
    let lat = l.lattice();
    let caps = Caps { order: usize::MAX, subgroups: usize::MAX };
    if !l.s_group().has_normalizer_increasing_property(&caps)? {
        return Err(Error::domain("precondition fails: S is not normalizer-increasing"));
    }
    let cr = cl.centric_radical();
    let c = cl.centric();
    if let Some(x) = lat.ids().find(|&x| cr[x] && !l.in_delta(x)) {
        return Err(Error::domain_with("precondition fails: F^cr ⊄ Δ", format!("{:?}", lat.bits(x))));
    }
    if let Some(x) = lat.ids().find(|&x| l.in_delta(x) && !c[x]) {
        return Err(Error::domain_with("precondition fails: Δ ⊄ F^c", format!("{:?}", lat.bits(x))));
    }
    let th = theta(l)?;
    if let Some(v) = partial_normal_violation(l, &th) {
        return Err(Error::internal(format!("Θ is not partial normal: {v}")));
    }
    if l.s_elements().iter().skip(1).any(|&s| th.contains(s as usize)) {
        return Err(Error::internal("S ∩ Θ ≠ 1"));
    }
    let q = quotient(l, &th)?;
    let fq = FusionSystem::of_locality(&q.locality)?;
    if let Some(w) = fusion_preserving_violation(&q.s_rho, f, &fq) {
        return Err(Error::internal(format!("ρ|_S is not fusion preserving: {w}")));
    }
    let mut back = vec![0u32; q.s_rho.len()];
    for (x, &y) in q.s_rho.iter().enumerate() {
        back[y as usize] = x as u32;
    }
    if let Some(w) = fusion_preserving_violation(&back, &fq, f) {
        return Err(Error::internal(format!("F_S(L/Θ) is larger than F: {w}")));
    }
    let st = stratification(&q.locality)?;
    let qcl = classify_subgroups(&fq, &st, l.p())?;
    check_proper(&q.locality, &qcl)?.into_result()?;
    Ok(ThetaQuotient { theta: th, quotient: q, classification: qcl })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::locality::SylowContext;

    #[test]
    fn quotient_of_sym4_by_v4() {
        let ctx = SylowContext::new(Arc::new(fixtures::sym4().unwrap()), 2, &Caps::default()).unwrap();
        let l = ctx.group_locality().unwrap();
        let v4 = ctx.group.o_p(2);
        let n = Bits::from_indices(l.size(), (0..l.size()).filter(|&g| v4.contains(l.origin().unwrap().elems[g])));
        let q = quotient(&l, &n).unwrap();
        assert_eq!(q.locality.size(), 6);
        assert_eq!(q.cosets.len(), 6);
        assert!(q.cosets.iter().all(|c| c.len() == 4));
        assert_eq!(q.locality.s_order(), 2);
        assert_eq!(theta(&l).unwrap().count(), 1);
    }

    #[test]
    fn non_normal_sets_are_rejected() {
        let ctx = SylowContext::new(Arc::new(fixtures::sym4().unwrap()), 2, &Caps::default()).unwrap();
        let l = ctx.group_locality().unwrap();
        let n = Bits::from_indices(l.size(), [0, l.s_to_l(1) as usize]);
        assert!(matches!(quotient(&l, &n), Err(Error::Domain { .. })));
    }
}
