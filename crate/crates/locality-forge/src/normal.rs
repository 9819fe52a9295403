//! Partial normal subgroups across expansions: lifting, the lattice
//! bijection, products, residuals and quotients.

use serde::Serialize;

use crate::bits::Bits;
use crate::classify::{classify_subgroups, Classification};
use crate::error::{ensure_internal, Error, Result};
use crate::expansion::{expand, rigid_isomorphism};
use crate::fusion::{fusion_preserving_violation, FusionSystem};
use crate::lattice::SubId;
use crate::local::restrict;
use crate::locality::Locality;
use crate::partial::{enumerate_partial_normal_subgroups, generated_partial_subgroup, partial_normal_violation, PartialGroup};
use crate::quotient::{quotient, Quotient};
use crate::report::Report;
use crate::strat::{stratification, Stratification};
use crate::NONE;

/// Default cap on the number of partial normal subgroups enumerated.
pub const LATTICE_CAP: usize = 4096;

/// The partial normal subgroups of a locality with their containment order.
#[derive(Debug, Clone)]
pub struct NormalLattice {
    pub members: Vec<Bits>,
    /// Covering pairs (i, j): members[i] ⊂ members[j] with nothing between.
    pub hasse: Vec<(usize, usize)>,
}

impl NormalLattice {
    pub fn of(l: &Locality, cap: usize) -> Result<Self> {
        let members = enumerate_partial_normal_subgroups(l, cap)?;
        let hasse = hasse_edges(&members);
        Ok(NormalLattice { members, hasse })
    }

    pub fn position(&self, n: &Bits) -> Option<usize> {
        self.members.iter().position(|m| m == n)
    }

    /// `S ∩ N` as S indices.
    pub fn s_part(l: &Locality, n: &Bits) -> Vec<u32> {
        (0..l.s_order() as u32).filter(|&x| n.contains(l.s_to_l(x) as usize)).collect()
    }
}

fn hasse_edges(members: &[Bits]) -> Vec<(usize, usize)> {
    let k = members.len();
    let lt = |i: usize, j: usize| i != j && members[i].is_subset(&members[j]) && members[i] != members[j];
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if lt(i, j) && !(0..k).any(|m| lt(i, m) && lt(m, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Membership report entry for the lattice file format.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeEntry {
    pub size: usize,
    pub s_cap_n: Vec<u32>,
}

fn carry(incl: &[u32], n_plus: usize, set: &Bits) -> Bits {
    Bits::from_indices(n_plus, set.iter().map(|g| incl[g] as usize))
}

fn pull(incl: &[u32], set: &Bits) -> Bits {
    Bits::from_indices(incl.len(), (0..incl.len()).filter(|&g| set.contains(incl[g] as usize)))
}

/// N⁺: the partial subgroup of L⁺ generated by the L⁺-conjugates of N.
/// `incl` sends L into L⁺.
pub fn lift_normal(l: &Locality, lplus: &Locality, incl: &[u32], n: &Bits) -> Result<Bits> {
    if let Some(w) = partial_normal_violation(l, n) {
        return Err(Error::domain_with("N is not partial normal in L", w));
    }
    let np = lplus.size();
    let mut x = Bits::new(np);
    for f in n.iter() {
        let f = incl[f];
        for g in 0..np as u32 {
            if let Some(c) = lplus.conjugate(f, g) {
                x.insert(c as usize);
            }
        }
    }
    let lifted = generated_partial_subgroup(lplus, &x);
    if let Some(w) = partial_normal_violation(lplus, &lifted) {
        return Err(Error::internal(format!("N⁺ is not partial normal in L⁺: {w}")));
    }
    ensure_internal!(pull(incl, &lifted) == *n, "N⁺ ∩ L ≠ N");
    let s_n: Vec<u32> = NormalLattice::s_part(l, n);
    let s_np: Vec<u32> = NormalLattice::s_part(lplus, &lifted);
    ensure_internal!(s_n == s_np, "S ∩ N ≠ S ∩ N⁺");
    Ok(lifted)
}

/// The correspondence N ↦ N⁺ between the two lattices.
#[derive(Debug, Clone)]
pub struct NormalCorrespondence {
    pub lower: NormalLattice,
    pub upper: NormalLattice,
    /// `lift[i]` is the position of members[i]⁺ in the upper lattice.
    pub lift: Vec<usize>,
    pub report: Report,
}

pub fn verify_normal_correspondence(l: &Locality, lplus: &Locality, incl: &[u32], cap: usize) -> Result<NormalCorrespondence> {
    let lower = NormalLattice::of(l, cap)?;
    let upper = NormalLattice::of(lplus, cap)?;
    let mut rep = Report::new("normal subgroup correspondence");
    rep.check(lower.members.len() == upper.members.len(), || {
        format!("|𝔑| = {} but |𝔑⁺| = {}", lower.members.len(), upper.members.len())
    });
    let mut lift = Vec::new();
    for n in &lower.members {
        let np = lift_normal(l, lplus, incl, n)?;
        let pos = upper.position(&np);
        rep.check(pos.is_some(), || format!("lift of a member of size {} is not enumerated", n.count()));
        lift.push(pos.unwrap_or(usize::MAX));
    }
    let mut hit = vec![false; upper.members.len()];
    for &j in lift.iter().filter(|&&j| j != usize::MAX) {
        rep.check(!std::mem::replace(&mut hit[j], true), || format!("two members lift to upper member {j}"));
    }
    for (j, m) in upper.members.iter().enumerate() {
        let back = pull(incl, m);
        let i = lower.position(&back);
        rep.check(i.is_some_and(|i| lift[i] == j), || format!("M ∩ L is not inverse to lifting at upper member {j}"));
    }
    // labelled posets: S ∩ N labels and Hasse diagrams agree through the bijection
    for (i, n) in lower.members.iter().enumerate() {
        if lift[i] == usize::MAX {
            continue;
        }
        let a = NormalLattice::s_part(l, n);
        let b = NormalLattice::s_part(lplus, &upper.members[lift[i]]);
        rep.check(a == b, || format!("S-labels differ at member {i}"));
    }
    let mapped: std::collections::BTreeSet<(usize, usize)> =
        lower.hasse.iter().map(|&(i, j)| (lift[i], lift[j])).collect();
    let upper_edges: std::collections::BTreeSet<(usize, usize)> = upper.hasse.iter().copied().collect();
    rep.check(mapped == upper_edges, || "Hasse diagrams differ".into());
    Ok(NormalCorrespondence { lower, upper, lift, report: rep })
}

/// ⟨N1 ∪ N2⟩, certified partial normal.
pub fn product_of_normals(l: &Locality, n1: &Bits, n2: &Bits) -> Result<Bits> {
    let m = generated_partial_subgroup(l, &n1.or(n2));
    if let Some(w) = partial_normal_violation(l, &m) {
        return Err(Error::internal(format!("product of partial normal subgroups is not normal: {w}")));
    }
    Ok(m)
}

/// (N1N2)⁺ = N1⁺N2⁺, and (N1 ∩ N2)⁺ = N1 ∩ N2 when N1 ∩ N2 ≤ S.
pub fn product_lift_compatibility(l: &Locality, lplus: &Locality, incl: &[u32], n1: &Bits, n2: &Bits) -> Result<Report> {
    let mut rep = Report::new("products across an expansion");
    let prod = product_of_normals(l, n1, n2)?;
    let lhs = lift_normal(l, lplus, incl, &prod)?;
    let rhs = product_of_normals(lplus, &lift_normal(l, lplus, incl, n1)?, &lift_normal(l, lplus, incl, n2)?)?;
    rep.check(lhs == rhs, || "(N1N2)⁺ ≠ N1⁺N2⁺".into());
    let meet = n1.and(n2);
    if meet.iter().all(|g| l.l_to_s(g as u32).is_some()) {
        let lifted = lift_normal(l, lplus, incl, &meet)?;
        rep.check(lifted == carry(incl, lplus.size(), &meet), || "(N1 ∩ N2)⁺ ≠ N1 ∩ N2".into());
    }
    Ok(rep)
}

fn s_bits(l: &Locality, n: &Bits) -> Bits {
    Bits::from_indices(l.size(), n.iter().filter(|&g| l.l_to_s(g as u32).is_some()))
}

/// {k·t : k ∈ K, t ∈ T}.
fn times_s(l: &Locality, k: &Bits, t: &Bits) -> Bits {
    let mut out = Bits::new(l.size());
    for a in k.iter() {
        for b in t.iter() {
            if let Some(c) = l.pair(a as u32, b as u32) {
                out.insert(c as usize);
            }
        }
    }
    out
}

fn meet_all(n: usize, sets: impl Iterator<Item = Bits>) -> Bits {
    let mut acc = Bits::full(n);
    for s in sets {
        acc = acc.and(&s);
    }
    acc
}

/// `O^p_L(N) = ⋂{K ⊴ L : KT = N}`, checked to lie in that family.
pub fn o_p_residual(l: &Locality, lat: &NormalLattice, n: &Bits) -> Result<Bits> {
    let t = s_bits(l, n);
    let family: Vec<Bits> = lat.members.iter().filter(|k| times_s(l, k, &t) == *n).cloned().collect();
    let r = meet_all(l.size(), family.into_iter());
    ensure_internal!(times_s(l, &r, &t) == *n, "O^p(N)·T ≠ N");
    // the image of N modulo O^p(N) lies in S̄
    let q = quotient(l, &r)?;
    ensure_internal!(
        n.iter().all(|g| q.locality.l_to_s(q.rho[g]).is_some()),
        "N/O^p(N) is not a p-group"
    );
    Ok(r)
}

/// `O^{p'}_L(N) = ⋂{K ⊴ L : T ≤ K}`.
pub fn o_p_prime_residual(l: &Locality, lat: &NormalLattice, n: &Bits) -> Result<Bits> {
    let t = s_bits(l, n);
    let r = meet_all(l.size(), lat.members.iter().filter(|k| t.is_subset(k)).cloned());
    ensure_internal!(t.is_subset(&r) && r.is_subset(n), "T ≤ O^p'(N) ≤ N fails");
    ensure_internal!(lat.position(&r).is_some(), "O^p'(N) is not partial normal");
    Ok(r)
}

/// Both residuals commute with lifting, and are monotone on nested pairs.
pub fn residual_expansion_compatibility(l: &Locality, lplus: &Locality, incl: &[u32], corr: &NormalCorrespondence) -> Result<Report> {
    let mut rep = Report::new("residuals");
    let lower = &corr.lower;
    let upper = &corr.upper;
    let mut res = Vec::new();
    for (i, n) in lower.members.iter().enumerate() {
        let np = &upper.members[corr.lift[i]];
        let (op, opp) = (o_p_residual(l, lower, n)?, o_p_prime_residual(l, lower, n)?);
        let (op_u, opp_u) = (o_p_residual(lplus, upper, np)?, o_p_prime_residual(lplus, upper, np)?);
        rep.check(lift_normal(l, lplus, incl, &op)? == op_u, || format!("O^p(N)⁺ ≠ O^p(N⁺) at member {i}"));
        rep.check(lift_normal(l, lplus, incl, &opp)? == opp_u, || format!("O^p'(N)⁺ ≠ O^p'(N⁺) at member {i}"));
        res.push((op, opp));
    }
    for (i, n) in lower.members.iter().enumerate() {
        for (j, m) in lower.members.iter().enumerate() {
            if i != j && n.is_subset(m) {
                rep.check(res[i].0.is_subset(&res[j].0), || format!("O^p not monotone on ({i},{j})"));
                rep.check(res[i].1.is_subset(&res[j].1), || format!("O^p' not monotone on ({i},{j})"));
            }
        }
    }
    Ok(rep)
}

/// The quotient L/N with its fusion system and classification.
#[derive(Debug, Clone)]
pub struct QuotientData {
    pub quotient: Quotient,
    pub fusion: FusionSystem,
    pub strat: Stratification,
    pub classification: Classification,
}

pub fn quotient_data(l: &Locality, n: &Bits) -> Result<QuotientData> {
    let q = quotient(l, n)?;
    let fusion = FusionSystem::of_locality(&q.locality)?;
    let strat = stratification(&q.locality)?;
    let classification = classify_subgroups(&fusion, &strat, l.p())?;
    Ok(QuotientData { quotient: q, fusion, strat, classification })
}

fn order_fully_normalized(f: &FusionSystem, x: SubId) -> bool {
    let lat = f.lattice();
    let best = f.conjugates(x).into_iter().map(|y| lat.order(lat.normalizer(y))).max().unwrap();
    lat.order(lat.normalizer(x)) == best
}

/// The relations between F and the fusion system of L/N.
pub fn verify_quotient_fusion(l: &Locality, f: &FusionSystem, cl: &Classification, n: &Bits) -> Result<Report> {
    let qd = quotient_data(l, n)?;
    let q = &qd.quotient;
    let lat = l.lattice();
    let qlat = q.locality.lattice();
    let sigma = &q.s_rho;
    let mut rep = Report::new("quotient fusion");
    let t: Vec<usize> = (0..l.s_order()).filter(|&x| n.contains(l.s_to_l(x as u32) as usize)).collect();
    let t_id = lat.lookup(&Bits::from_indices(l.s_order(), t.iter().copied())).ok_or_else(|| Error::internal("S ∩ N is not a subgroup"))?;
    let bar = |x: SubId| -> SubId {
        let b = Bits::from_indices(qlat.group().order(), lat.bits(x).iter().map(|i| sigma[i] as usize));
        qlat.lookup(&b).expect("image of a subgroup")
    };
    let preimage = |xb: SubId| -> SubId {
        let b = Bits::from_indices(l.s_order(), (0..l.s_order()).filter(|&i| qlat.bits(xb).contains(sigma[i] as usize)));
        lat.lookup(&b).expect("preimage of a subgroup")
    };
    let onto = (0..qlat.group().order() as u32).all(|y| sigma.contains(&y));
    rep.check(onto, || "σ: S → S̄ is not surjective".into());
    if let Some(w) = fusion_preserving_violation(sigma, f, &qd.fusion) {
        rep.fail(format!("σ is not fusion preserving: {w}"));
    }
    for x in lat.ids().filter(|&x| lat.le(t_id, x)) {
        let xb = bar(x);
        let mut induced = std::collections::HashSet::new();
        for h in f.homs(x) {
            let mut psi = vec![NONE; qlat.group().order()];
            for i in lat.bits(x).iter() {
                psi[sigma[i] as usize] = sigma[h[i] as usize];
            }
            induced.insert(psi);
        }
        let all = qd.fusion.homs(xb).iter().all(|h| induced.contains(h));
        rep.check(all, || format!("Hom_F̄ from the image of {:?} is not induced from F", lat.bits(x)));
    }
    for x in lat.ids().filter(|&x| lat.le(t_id, x)) {
        let a = order_fully_normalized(f, x);
        let b = order_fully_normalized(&qd.fusion, bar(x));
        rep.check(a == b, || format!("fully normalized disagrees at {:?}", lat.bits(x)));
    }
    let c_bar = qd.classification.centric();
    let cr_bar = qd.classification.centric_radical();
    let c = cl.centric();
    let cr = cl.centric_radical();
    for xb in qlat.ids() {
        let x = preimage(xb);
        if c_bar[xb] {
            rep.check(c[x], || format!("preimage {:?} of a centric subgroup is not centric", lat.bits(x)));
        }
        if cr_bar[xb] {
            rep.check(cr[x], || format!("preimage {:?} of a centric radical subgroup is not", lat.bits(x)));
        }
    }
    if lat.ids().all(|x| !cr[x] || l.in_delta(x)) {
        for xb in qlat.ids().filter(|&xb| cr_bar[xb]) {
            rep.check(q.locality.in_delta(xb), || format!("F̄^cr member {:?} is not an object of L/N", qlat.bits(xb)));
        }
    }
    Ok(rep)
}

/// L⁺, N⁺, the quotients and ρ⁺, with the checks of the commutative square.
#[derive(Debug, Clone)]
pub struct QuotientSquare {
    pub lplus: Locality,
    pub n_plus: Bits,
    pub lower: Quotient,
    pub upper: Quotient,
    /// L/N into (L⁺/N⁺), through ρ⁺.
    pub iota: Vec<u32>,
    pub report: Report,
}

pub fn quotient_expansion(
    l: &Locality,
    f: &FusionSystem,
    st: &Stratification,
    cl: &Classification,
    n: &Bits,
    delta_plus: &[bool],
    cap: usize,
) -> Result<QuotientSquare> {
    let mut rep = Report::new("quotient square");
    let lplus = expand(l, f, st, cl, delta_plus)?.locality;
    let incl: Vec<u32> = (0..l.size() as u32).collect();
    let n_plus = lift_normal(l, &lplus, &incl, n)?;
    let lower = quotient(l, n)?;
    let upper = quotient(&lplus, &n_plus)?;
    // ρ⁺|_L = ρ through ι: L/N → L⁺/N⁺
    let mut iota = vec![NONE; lower.locality.size()];
    for g in 0..l.size() {
        let (a, b) = (lower.rho[g] as usize, upper.rho[g]);
        rep.check(iota[a] == NONE || iota[a] == b, || format!("ρ⁺|_L does not factor through ρ at {g}"));
        iota[a] = b;
    }
    let mut seen = std::collections::HashSet::new();
    rep.check(iota.iter().all(|&x| seen.insert(x)), || "L/N does not embed in L⁺/N⁺".into());
    // Ker ρ⁺ = N⁺ is certified by the quotient itself; the restriction of L⁺/N⁺ to Δ̄ is L/N
    let ul = upper.locality.lattice();
    let ll = lower.locality.lattice();
    let mut s_map = vec![NONE; ll.group().order()];
    for x in 0..ll.group().order() as u32 {
        s_map[x as usize] = upper.locality.l_to_s(iota[lower.locality.s_to_l(x) as usize]).unwrap_or(NONE);
    }
    let mut dbar = vec![false; ul.len()];
    for p in ll.ids().filter(|&p| lower.locality.in_delta(p)) {
        match ul.image(p, &s_map) {
            Some(q) => dbar[q] = true,
            None => rep.fail("image of an object of L/N is not a subgroup".to_string()),
        }
    }
    if rep.ok() {
        let back = restrict(&upper.locality, &dbar)?;
        let mut pos = vec![NONE; upper.locality.size()];
        for (i, &g) in back.map.iter().enumerate() {
            pos[g as usize] = i as u32;
        }
        let base: Vec<u32> = iota.iter().map(|&x| pos[x as usize]).collect();
        rep.check(base.iter().all(|&x| x != NONE), || "L/N is not inside the restriction to Δ̄".into());
        if rep.ok() {
            let r = rigid_isomorphism(&lower.locality, &back.locality, &base);
            rep.check(r.is_ok(), || format!("restriction of L⁺/N⁺ to Δ̄ is not L/N: {:?}", r.err()));
        }
    }
    // the square of lattice bijections
    let lat_l = NormalLattice::of(l, cap)?;
    let lat_lp = NormalLattice::of(&lplus, cap)?;
    let lat_q = NormalLattice::of(&lower.locality, cap)?;
    let lat_qp = NormalLattice::of(&upper.locality, cap)?;
    let over_n: Vec<&Bits> = lat_l.members.iter().filter(|m| n.is_subset(m)).collect();
    let over_np: Vec<&Bits> = lat_lp.members.iter().filter(|m| n_plus.is_subset(m)).collect();
    rep.check(over_n.len() == over_np.len(), || "𝔑 and 𝔑⁺ over the kernels differ in size".into());
    rep.check(over_n.len() == lat_q.members.len(), || "𝔑 over N and 𝔑(L/N) differ in size".into());
    rep.check(lat_q.members.len() == lat_qp.members.len(), || "𝔑(L/N) and 𝔑(L⁺/N⁺) differ in size".into());
    let image = |q: &Quotient, set: &Bits, size: usize| -> Bits {
        Bits::from_indices(size, set.iter().map(|g| q.rho[g] as usize))
    };
    let qn = lower.locality.size();
    let qpn = upper.locality.size();
    for m in &over_n {
        let m_plus = lift_normal(l, &lplus, &incl, m)?;
        let right_down = image(&upper, &m_plus, qpn);
        let down = image(&lower, m, qn);
        // η̄: the unique member of 𝔑(L/N)⁺ meeting L/N in the image
        let candidates: Vec<&Bits> = lat_qp
            .members
            .iter()
            .filter(|k| {
                let pulled = Bits::from_indices(qn, (0..qn).filter(|&a| k.contains(iota[a] as usize)));
                pulled == down
            })
            .collect();
        rep.check(candidates.len() == 1, || format!("{} members of 𝔑(L⁺/N⁺) meet L/N in N̄", candidates.len()));
        if let Some(c) = candidates.first() {
            rep.check(**c == right_down, || "the square of lattice bijections does not commute".into());
        }
        rep.check(lat_q.position(&down).is_some(), || "image of a member is not partial normal in L/N".into());
    }
    Ok(QuotientSquare { lplus, n_plus, lower, upper, iota, report: rep })
}
