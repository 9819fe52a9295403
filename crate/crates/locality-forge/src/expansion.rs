//! Elementary expansion at one F-class R^F, iterated expansion, the
//! subcentric closure and rigid isomorphisms between expansions.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::classify::Classification;
use crate::error::{ensure_internal, Error, Result};
use crate::fusion::FusionSystem;
use crate::group::{p_part, FiniteGroup};
use crate::lattice::SubId;
use crate::local::restrict;
use crate::locality::{Locality, LocalityParts};
use crate::partial::{PartialGroup, VerifyBudget};
use crate::proper::check_proper;
use crate::report::Report;
use crate::strat::Stratification;
use crate::verify::verify_locality_axioms;
use crate::NONE;

/// Skip the pairwise ∼ check above this many triples.
const PAIRWISE_PHI_LIMIT: usize = 1500;

pub fn check_expansion_hypothesis(l: &Locality, f: &FusionSystem, st: &Stratification, r: SubId) -> Report {
    let lat = l.lattice();
    let mut rep = Report::new("expansion hypothesis");
    if l.in_delta(r) {
        rep.check(true, String::new);
        return rep;
    }
    rep.check(st.contains(r), || format!("R = {:?} is not in Ω", lat.bits(r)));
    // (1) proper overgroups of conjugates of R are objects
    'outer: for u in f.conjugates(r) {
        for q in lat.above(u).filter(|&q| q != u) {
            if !rep.check(l.in_delta(q), || {
                format!("(1) overgroup {:?} of the conjugate {:?} is not in Δ", lat.bits(q), lat.bits(u))
            }) {
                break 'outer;
            }
        }
    }
    if !rep.ok() {
        return rep;
    }
    // (2) every word in N_L(R) is in D: follow the partial maps words induce on S
    let m = l.normalizer_elements(r);
    let ns = l.s_order();
    let start: Vec<u32> = (0..ns as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        for &g in &m {
            let c = l.conj_map(g);
            let next: Vec<u32> = state.iter().map(|&y| if y == NONE { NONE } else { c[y as usize] }).collect();
            let dom = crate::bits::Bits::from_indices(ns, next.iter().enumerate().filter(|(_, &y)| y != NONE).map(|(x, _)| x));
            let ok = lat.lookup(&dom).is_some_and(|d| l.in_delta(d));
            if !rep.check(ok, || format!("(2) a word in N_L(R) ending with {g} leaves D: S_w = {dom:?}")) {
                return rep;
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    match l.subgroup_as_group(&m) {
        Ok(grp) => {
            let want = p_part(grp.order(), l.p() as usize);
            rep.check(lat.order(lat.normalizer(r)) == want, || {
                format!("(2) N_S(R) has order {} but |N_L(R)|_p = {want}", lat.order(lat.normalizer(r)))
            });
        }
        Err(e) => {
            rep.fail(format!("(2) N_L(R) is not a subgroup: {e}"));
        }
    }
    rep
}

/// The data realizing L⁺ from L and R: the sets 𝐘_V, a transversal and
/// the group M = N_L(R).
#[derive(Debug, Clone)]
pub struct ExpansionKit {
    pub r: SubId,
    /// R^F, sorted.
    pub class: Vec<SubId>,
    pub y_sets: Vec<Vec<u32>>,
    /// y_V, the smallest element of 𝐘_V; y_R = 1.
    pub transversal: Vec<u32>,
    /// N_L(R), ascending, starting with the identity.
    pub m: Vec<u32>,
    pub m_group: FiniteGroup,
    m_pos: HashMap<u32, u32>,
    class_pos: HashMap<SubId, usize>,
}

impl ExpansionKit {
    pub fn position(&self, u: SubId) -> Option<usize> {
        self.class_pos.get(&u).copied()
    }
    pub fn y(&self, u: SubId) -> u32 {
        self.transversal[self.class_pos[&u]]
    }
    /// Index of an element of N_L(R) inside `m`.
    pub fn m_index(&self, g: u32) -> Option<u32> {
        self.m_pos.get(&g).copied()
    }
}

fn member_of_y(l: &Locality, r: SubId, v: SubId, y: u32) -> bool {
    let lat = l.lattice();
    lat.le(r, l.s_dom(y))
        && l.conj_sub(r, y) == Some(v)
        && lat.le(lat.normalizer(v), l.s_dom(l.inv(y)))
}

pub fn build_kit(l: &Locality, f: &FusionSystem, st: &Stratification, r: SubId) -> Result<ExpansionKit> {
    let lat = l.lattice();
    let hyp = check_expansion_hypothesis(l, f, st, r);
    if let Some(w) = hyp.first_witness() {
        return Err(Error::domain_with("expansion hypothesis fails", w));
    }
    let class = f.conjugates(r);
    let class_pos: HashMap<SubId, usize> = class.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut y_sets = Vec::new();
    let mut transversal = Vec::new();
    for &v in &class {
        let ys: Vec<u32> = (0..l.size() as u32).filter(|&y| member_of_y(l, r, v, y)).collect();
        ensure_internal!(!ys.is_empty(), "𝐘_V is empty for V = {:?}", lat.bits(v));
        for &y in &ys {
            // N_S(V) ≤ N_S(R)^y
            let pulled = l.conj_sub(lat.normalizer(v), l.inv(y));
            ensure_internal!(
                pulled.is_some_and(|p| lat.le(p, lat.normalizer(r))),
                "N_S(V) is not inside N_S(R)^y for y = {y}"
            );
        }
        transversal.push(if v == r { 0 } else { ys[0] });
        y_sets.push(ys);
    }
    let m = l.normalizer_elements(r);
    let m_group = l.subgroup_as_group(&m)?;
    let m_pos = m.iter().enumerate().map(|(i, &g)| (g, i as u32)).collect();
    let kit = ExpansionKit { r, class, y_sets, transversal, m, m_group, m_pos, class_pos };
    check_equivalence(l, &kit)?;
    Ok(kit)
}

fn mprod(l: &Locality, w: &[u32]) -> Result<u32> {
    l.product(w)
        .ok_or_else(|| Error::internal(format!("word {w:?} expected in D is not")))
}

/// The canonical middle of a triple (x⁻¹, h, y) relative to the transversal.
fn canonical_middle(l: &Locality, kit: &ExpansionKit, x: u32, h: u32, y: u32) -> Result<(SubId, u32, SubId)> {
    let u = l.conj_sub(kit.r, x).ok_or_else(|| Error::internal("R^x undefined"))?;
    let v = l.conj_sub(kit.r, y).ok_or_else(|| Error::internal("R^y undefined"))?;
    let a = mprod(l, &[kit.y(u), l.inv(x)])?;
    let b = mprod(l, &[y, l.inv(kit.y(v))])?;
    let hc = kit.m_group.product(&[
        kit.m_index(a).ok_or_else(|| Error::internal("y_U x⁻¹ not in N_L(R)"))?,
        kit.m_index(h).ok_or_else(|| Error::internal("h not in N_L(R)"))?,
        kit.m_index(b).ok_or_else(|| Error::internal("y y_V⁻¹ not in N_L(R)"))?,
    ]);
    Ok((u, kit.m[hc as usize], v))
}

/// ∼ on Φ: every triple has a unique canonical middle (and ∼ is an
/// equivalence on small instances, checked pairwise).
fn check_equivalence(l: &Locality, kit: &ExpansionKit) -> Result<()> {
    let ys: Vec<u32> = kit.y_sets.iter().flatten().copied().collect();
    let mut phi = Vec::new();
    for &x in &ys {
        for &h in &kit.m {
            for &y in &ys {
                phi.push((x, h, y));
            }
        }
    }
    let mut keys = Vec::with_capacity(phi.len());
    for &(x, h, y) in &phi {
        let key = canonical_middle(l, kit, x, h, y)?;
        // relation (ii) between φ and (y_U⁻¹, h_c, y_V)
        let (u, hc, v) = key;
        let lhs = mprod(l, &[x, l.inv(kit.y(u))]).and_then(|a| mprod(l, &[a, hc]))?;
        let rhs = mprod(l, &[y, l.inv(kit.y(v))]).and_then(|b| mprod(l, &[h, b]))?;
        ensure_internal!(lhs == rhs, "triple ({x}⁻¹,{h},{y}) is not ∼ to its canonical form");
        keys.push(key);
    }
    if phi.len() <= PAIRWISE_PHI_LIMIT {
        let rel = |i: usize, j: usize| -> Result<bool> {
            let ((x, h, y), (xb, hb, yb)) = (phi[i], phi[j]);
            if keys[i].0 != keys[j].0 || keys[i].2 != keys[j].2 {
                return Ok(false);
            }
            let lhs = mprod(l, &[xb, l.inv(x)]).and_then(|a| mprod(l, &[a, h]))?;
            let rhs = mprod(l, &[yb, l.inv(y)]).and_then(|b| mprod(l, &[hb, b]))?;
            Ok(lhs == rhs)
        };
        for i in 0..phi.len() {
            for j in 0..phi.len() {
                ensure_internal!(rel(i, j)? == (keys[i] == keys[j]), "∼ disagrees with canonical forms at {i},{j}");
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ExpandedLocality {
    pub locality: Locality,
    /// Old index to new index; the old carrier is a prefix.
    pub inclusion: Vec<u32>,
    pub kit: ExpansionKit,
    /// New elements as (U, h, V), h ∈ N_L(R).
    pub added: Vec<(SubId, u32, SubId)>,
    pub r: SubId,
    /// Number of new binary pairs in the domain.
    pub pair_growth: usize,
    pub base: Locality,
    merge: HashMap<(SubId, u32, SubId), u32>,
}

impl ExpandedLocality {
    /// The element of L⁺ represented by (U, h, V).
    pub fn class_of(&self, u: SubId, h: u32, v: SubId) -> Option<u32> {
        self.merge.get(&(u, h, v)).copied()
    }
}

struct Builder<'a> {
    l: &'a Locality,
    kit: &'a ExpansionKit,
    merge: HashMap<(SubId, u32, SubId), u32>,
    added: Vec<(SubId, u32, SubId)>,
}

impl Builder<'_> {
    fn resolve(&self, t: (SubId, u32, SubId)) -> u32 {
        self.merge[&t]
    }
    fn n0(&self) -> u32 {
        self.l.size() as u32
    }
    fn triple_of(&self, a: u32) -> Option<(SubId, u32, SubId)> {
        (a >= self.n0()).then(|| self.added[(a - self.n0()) as usize])
    }
    /// κ_U(a): a read as (y_U⁻¹, κ, y_{U^a}).
    fn kappa(&self, u: SubId, a: u32, ua: SubId) -> Result<u32> {
        if let Some((tu, h, _)) = self.triple_of(a) {
            ensure_internal!(tu == u, "new element read at a foreign conjugate");
            return Ok(h);
        }
        let k = mprod(self.l, &[self.kit.y(u), a, self.l.inv(self.kit.y(ua))])?;
        ensure_internal!(self.kit.m_index(k).is_some(), "κ lands outside N_L(R)");
        Ok(k)
    }
}

/// Walks a word of L⁺ from U₀ along its conjugation maps and multiplies the
/// κ-middles in M.
fn gamma_product(b: &Builder, conj: &[Vec<u32>], u0: SubId, w: &[u32]) -> Result<u32> {
    let lat = b.l.lattice();
    let mut u = u0;
    let mut acc = 0u32;
    for &a in w {
        let ua = lat.image(u, &conj[a as usize]).ok_or_else(|| Error::internal("Γ-form walk leaves S"))?;
        let k = b.kappa(u, a, ua)?;
        acc = b.kit.m_group.mul(acc, b.kit.m_index(k).unwrap());
        u = ua;
    }
    Ok(b.resolve((u0, b.kit.m[acc as usize], u)))
}

/// Π⁺ on a word of L⁺ by Γ-forms. Every conjugate of R inside S_w gives a
/// Γ-form; all of them must agree.
pub fn expansion_product(x: &ExpandedLocality, w: &[u32]) -> Result<Option<u32>> {
    let lp = &x.locality;
    let lat = lp.lattice();
    let s = match lp.s_w(w) {
        Some(s) if lp.in_delta(s) => s,
        _ => return Ok(None),
    };
    let b = Builder { l: &x.base, kit: &x.kit, merge: x.merge.clone(), added: x.added.clone() };
    let conj: Vec<Vec<u32>> = (0..lp.size() as u32).map(|g| lp.conj_map(g).to_vec()).collect();
    let mut value = None;
    for &u0 in x.kit.class.iter().filter(|&&u| lat.le(u, s)) {
        let v = gamma_product(&b, &conj, u0, w)?;
        ensure_internal!(value.is_none_or(|p| p == v), "two Γ-forms of {w:?} disagree");
        value = Some(v);
    }
    let n0 = x.base.size() as u32;
    if w.iter().all(|&a| a < n0) && x.base.in_delta(s) {
        let v = x.base.product(w).ok_or_else(|| Error::internal("word of L with S_w ∈ Δ undefined"))?;
        ensure_internal!(value.is_none_or(|p| p == v), "Γ-form of {w:?} disagrees with Π");
        value = Some(v);
    }
    Ok(value)
}

/// Elementary expansion of L at R to Δ ∪ R^F.
pub fn elementary_expand(l: &Locality, f: &FusionSystem, st: &Stratification, r: SubId) -> Result<ExpandedLocality> {
    let kit = build_kit(l, f, st, r)?;
    let n0 = l.size();
    if l.in_delta(r) {
        return Ok(ExpandedLocality {
            locality: l.clone(),
            inclusion: (0..n0 as u32).collect(),
            kit,
            added: Vec::new(),
            r,
            pair_growth: 0,
            base: l.clone(),
            merge: HashMap::new(),
        });
    }
    let lat = l.lattice().clone();
    let ns = l.s_order();
    let mut b = Builder { l, kit: &kit, merge: HashMap::new(), added: Vec::new() };
    for &u in &kit.class {
        for &v in &kit.class {
            for &h in &kit.m {
                let w = [l.inv(kit.y(u)), h, kit.y(v)];
                let s = l.s_w(&w).ok_or_else(|| Error::internal("S_φ is not a subgroup"))?;
                ensure_internal!(lat.le(u, s), "U ⊄ S_φ");
                let idx = if s != u {
                    mprod(l, &w)?
                } else {
                    b.added.push((u, h, v));
                    (n0 + b.added.len() - 1) as u32
                };
                b.merge.insert((u, h, v), idx);
            }
        }
    }
    let n = n0 + b.added.len();
    let mut s_dom: Vec<SubId> = (0..n0 as u32).map(|g| l.s_dom(g)).collect();
    let mut conj: Vec<Vec<u32>> = (0..n0 as u32).map(|g| l.conj_map(g).to_vec()).collect();
    for &(u, h, v) in &b.added {
        let w = [l.inv(kit.y(u)), h, kit.y(v)];
        let mut map = vec![NONE; ns];
        for x in lat.bits(u).iter() {
            let mut y = x as u32;
            for &g in &w {
                y = l.conj_map(g)[y as usize];
            }
            map[x] = y;
        }
        ensure_internal!(lat.image(u, &map) == Some(v), "new element does not map U onto V");
        s_dom.push(u);
        conj.push(map);
    }
    let mut inv: Vec<u32> = (0..n0 as u32).map(|g| l.inv(g)).collect();
    for &(u, h, v) in &b.added {
        let hi = kit.m[kit.m_group.inv(kit.m_index(h).unwrap()) as usize];
        inv.push(b.resolve((v, hi, u)));
    }
    let mut delta = l.delta().to_vec();
    for &u in &kit.class {
        delta[u] = true;
    }
    let class_set: HashSet<SubId> = kit.class.iter().copied().collect();
    let mut prod = vec![NONE; n * n];
    for a in 0..n as u32 {
        for c in 0..n as u32 {
            let s = {
                let bits = crate::bits::Bits::from_indices(
                    ns,
                    (0..ns).filter(|&x| {
                        let y = conj[a as usize][x];
                        y != NONE && conj[c as usize][y as usize] != NONE
                    }),
                );
                lat.lookup(&bits).ok_or_else(|| Error::internal("S_(a,b) is not a subgroup"))?
            };
            let value = if l.in_delta(s) {
                ensure_internal!((a as usize) < n0 && (c as usize) < n0, "new element in a pair with S_w ∈ Δ");
                Some(l.pair(a, c).ok_or_else(|| Error::internal("pair with S_w ∈ Δ undefined in L"))?)
            } else if class_set.contains(&s) {
                Some(gamma_product(&b, &conj, s, &[a, c])?)
            } else {
                None
            };
            if let Some(v) = value {
                prod[a as usize * n + c as usize] = v;
            }
        }
    }
    let lp = Locality::from_parts(LocalityParts {
        p: l.p(),
        inv,
        prod,
        lat: lat.clone(),
        s_to_l: l.s_elements().to_vec(),
        s_dom,
        conj,
        delta,
        origin: None,
    })?;
    let pair_growth = lp.pair_count() - l.pair_count();
    let added = b.added.clone();
    let merge = std::mem::take(&mut b.merge);
    let x = ExpandedLocality {
        locality: lp,
        inclusion: (0..n0 as u32).collect(),
        kit,
        added,
        r,
        pair_growth,
        base: l.clone(),
        merge,
    };
    post_checks(l, f, st, &x)?.into_result()?;
    Ok(x)
}

fn post_checks(l: &Locality, f: &FusionSystem, st: &Stratification, x: &ExpandedLocality) -> Result<Report> {
    let lp = &x.locality;
    let lat = l.lattice();
    let mut rep = Report::new("elementary expansion");
    rep.absorb(verify_locality_axioms(lp, &VerifyBudget::default()));
    let back = restrict(lp, l.delta())?;
    rep.check(back.map.iter().enumerate().all(|(i, &g)| g == i as u32), || "restriction to Δ reorders L".into());
    if let Some(d) = back.locality.structural_diff(l) {
        rep.fail(format!("restriction to Δ differs from L: {d}"));
    }
    rep.check(lp.normalizer_elements(x.r) == x.kit.m, || "N_{L⁺}(R) ≠ N_L(R)".into());
    let fp = FusionSystem::of_locality(lp)?;
    rep.check(fp == *f, || "F_S(L⁺) ≠ F".into());
    let stp = crate::strat::stratification(lp)?;
    rep.check(stp.in_omega() == st.in_omega(), || "Ω changed".into());
    rep.check(lat.ids().all(|id| stp.star(id) == st.star(id)), || "⋆ changed".into());
    // an old g with U ≤ S_g is the class of (U, κ_U(g), U^g)
    let b = Builder { l, kit: &x.kit, merge: x.merge.clone(), added: x.added.clone() };
    for g in 0..l.size() as u32 {
        for &u in x.kit.class.iter().filter(|&&u| lat.le(u, l.s_dom(g))) {
            let ug = l.conj_sub(u, g).unwrap();
            let k = b.kappa(u, g, ug)?;
            rep.check(x.class_of(u, k, ug) == Some(g), || format!("old element {g} is not the class of its Γ-form at U = {:?}", lat.bits(u)));
        }
    }
    for (i, &(u, _, _)) in x.added.iter().enumerate() {
        let e = (l.size() + i) as u32;
        rep.check(lp.s_dom(e) == u, || format!("S of new element {e} is not U"));
    }
    // Γ-forms agree with the folded table on short words
    let n = lp.size() as u32;
    let mut words = 0u64;
    'outer: for a in 0..n {
        for c in 0..n {
            for d in 0..n {
                let w = [a, c, d];
                let byfold = lp.product(&w);
                let bygamma = expansion_product(x, &w)?;
                rep.check(byfold == bygamma, || format!("Π⁺{w:?}: table {byfold:?}, Γ-form {bygamma:?}"));
                words += 1;
                if words >= 200_000 {
                    break 'outer;
                }
            }
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Objects outside Ω added without touching the carrier.
    Relabel,
    Elementary,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    /// Representative subgroup as sorted S indices.
    pub representative: Vec<u32>,
    /// Number of subgroups added to Δ.
    pub class_count: usize,
    pub new_elements: usize,
    pub pair_growth: usize,
}

#[derive(Debug, Clone)]
pub struct Expansion {
    pub locality: Locality,
    pub trace: Vec<TraceStep>,
    /// The elementary steps, in order.
    pub steps: Vec<ExpandedLocality>,
}

fn delta_check(l: &Locality, f: &FusionSystem, cl: &Classification, delta_plus: &[bool]) -> Result<()> {
    let lat = l.lattice();
    ensure_domain(delta_plus.len() == lat.len(), "Δ⁺ has the wrong length", String::new())?;
    if let Some(x) = lat.ids().find(|&x| l.in_delta(x) && !delta_plus[x]) {
        return Err(Error::domain_with("Δ ⊄ Δ⁺", format!("{:?}", lat.bits(x))));
    }
    let sc = cl.subcentric();
    if let Some(x) = lat.ids().find(|&x| delta_plus[x] && !sc[x]) {
        return Err(Error::domain_with("Δ⁺ ⊄ F^s", format!("class of {:?}", lat.bits(cl.class(x).representative))));
    }
    if let Some(x) = f.f_closed_violation(delta_plus) {
        return Err(Error::domain_with("Δ⁺ is not F-closed", format!("{:?}", lat.bits(x))));
    }
    Ok(())
}

fn ensure_domain(cond: bool, msg: &str, w: String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain_with(msg, w))
    }
}

/// Adds every P ∈ Δ⁺∖Δ with P⋆ ∈ Δ; no word has such a P as S_w.
fn relabel(st: &Stratification, delta: &mut [bool], delta_plus: &[bool]) -> Vec<SubId> {
    let mut added = Vec::new();
    loop {
        let next: Vec<SubId> =
            (0..delta.len()).filter(|&p| delta_plus[p] && !delta[p] && delta[st.star(p)]).collect();
        if next.is_empty() {
            return added;
        }
        for &p in &next {
            delta[p] = true;
        }
        added.extend(next);
    }
}

/// Iterated expansion of a proper locality to Δ⁺ ⊆ F^s.
pub fn expand(
    l: &Locality,
    f: &FusionSystem,
    st: &Stratification,
    cl: &Classification,
    delta_plus: &[bool],
) -> Result<Expansion> {
    delta_check(l, f, cl, delta_plus)?;
    let pre = check_proper(l, cl)?;
    if let Some(w) = pre.first_witness() {
        return Err(Error::domain_with("L is not proper", w));
    }
    let lat = l.lattice().clone();
    let mut cur = l.clone();
    let mut trace = Vec::new();
    let mut steps = Vec::new();
    loop {
        let mut delta = cur.delta().to_vec();
        let added = relabel(st, &mut delta, delta_plus);
        if !added.is_empty() {
            trace.push(TraceStep {
                kind: StepKind::Relabel,
                representative: lat.bits(added[0]).iter().map(|x| x as u32).collect(),
                class_count: added.len(),
                new_elements: 0,
                pair_growth: 0,
            });
            cur = cur.with_delta(delta.clone());
        }
        let missing: Vec<SubId> = lat.ids().filter(|&p| delta_plus[p] && !delta[p]).collect();
        if missing.is_empty() {
            break;
        }
        let best = missing.iter().map(|&p| st.dim(p)).max().unwrap();
        let pick = *missing.iter().find(|&&p| st.contains(p) && st.dim(p) == best).ok_or_else(|| {
            Error::internal("a missing object of maximal dimension lies outside Ω after relabelling")
        })?;
        let r = *cl.class(pick).fully_normalized.iter().min().unwrap();
        let x = elementary_expand(&cur, f, st, r)?;
        trace.push(TraceStep {
            kind: StepKind::Elementary,
            representative: lat.bits(r).iter().map(|x| x as u32).collect(),
            class_count: x.kit.class.len(),
            new_elements: x.added.len(),
            pair_growth: x.pair_growth,
        });
        cur = x.locality.clone();
        steps.push(x);
    }
    let mut rep = check_proper(&cur, cl)?;
    rep.name = "expanded locality".into();
    let fp = FusionSystem::of_locality(&cur)?;
    rep.check(fp == *f, || "F_S(L⁺) ≠ F".into());
    let base = crate::bits::Bits::from_indices(cur.size(), 0..l.size());
    let gen = crate::partial::generated_partial_subgroup(&cur, &base);
    rep.check(gen.count() == cur.size(), || format!("L generates only {} of {} elements", gen.count(), cur.size()));
    rep.into_result()?;
    Ok(Expansion { locality: cur, trace, steps })
}

/// The expansion of a proper locality to F^s.
pub fn subcentric_closure(l: &Locality, f: &FusionSystem, st: &Stratification, cl: &Classification) -> Result<Expansion> {
    expand(l, f, st, cl, &cl.subcentric())
}

/// For every F-closed Δ′ between Δ and F^s (up to `max_sets` of them), the
/// expansion to Δ′ is rigidly isomorphic to the restriction of the
/// subcentric closure.
pub fn verify_closure_universality(
    l: &Locality,
    f: &FusionSystem,
    st: &Stratification,
    cl: &Classification,
    max_sets: usize,
) -> Result<Report> {
    let lat = l.lattice();
    let closure = subcentric_closure(l, f, st, cl)?.locality;
    let sc = cl.subcentric();
    let classes: Vec<Vec<SubId>> =
        f.classes().into_iter().filter(|c| sc[c[0]] && !l.in_delta(c[0])).collect();
    let mut rep = Report::new("subcentric closure universality");
    if classes.len() > 20 {
        rep.fail(format!("{} classes between Δ and F^s; enumeration skipped", classes.len()));
        return Ok(rep);
    }
    let mut tried = 0;
    for mask in 0u32..(1 << classes.len()) {
        let mut d = l.delta().to_vec();
        for (i, c) in classes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for &x in c {
                    d[x] = true;
                }
            }
        }
        if f.f_closed_violation(&d).is_some() {
            continue;
        }
        tried += 1;
        if tried > max_sets {
            break;
        }
        let e = expand(l, f, st, cl, &d)?.locality;
        let back = restrict(&closure, &d)?;
        let mut pos = vec![NONE; closure.size()];
        for (i, &g) in back.map.iter().enumerate() {
            pos[g as usize] = i as u32;
        }
        let base: Vec<u32> =
            (0..e.size()).map(|g| if g < l.size() { pos[g] } else { NONE }).collect();
        let ok = rigid_isomorphism(&e, &back.locality, &base);
        rep.check(ok.is_ok(), || {
            let ids: Vec<SubId> = lat.ids().filter(|&x| d[x]).collect();
            format!("Δ′ = {ids:?}: {}", ok.as_ref().err().map(|e| e.to_string()).unwrap_or_default())
        });
    }
    Ok(rep)
}

/// The unique isomorphism `Lplus → Ltilde` extending `base` (a partial map,
/// `NONE` where unset), built by closing under products.
pub fn rigid_isomorphism(lplus: &Locality, ltilde: &Locality, base: &[u32]) -> Result<Vec<u32>> {
    let n = lplus.size();
    if ltilde.size() != n || base.len() != n {
        return Err(Error::domain_with(
            "rigid isomorphism: carriers differ in size",
            format!("{} vs {}", n, ltilde.size()),
        ));
    }
    let mut beta = base.to_vec();
    beta[0] = match beta[0] {
        NONE | 0 => 0,
        _ => return Err(Error::domain("rigid isomorphism: identity not fixed")),
    };
    let fail = |what: &str, w: String| Err(Error::domain_with(format!("rigid isomorphism: {what}"), w));
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..n as u32 {
            if beta[a as usize] == NONE {
                continue;
            }
            let ai = lplus.inv(a);
            let img = ltilde.inv(beta[a as usize]);
            if beta[ai as usize] == NONE {
                beta[ai as usize] = img;
                changed = true;
            } else if beta[ai as usize] != img {
                return fail("inversion not preserved", format!("{a}"));
            }
            for b in 0..n as u32 {
                if beta[b as usize] == NONE {
                    continue;
                }
                let Some(c) = lplus.pair(a, b) else { continue };
                let Some(img) = ltilde.pair(beta[a as usize], beta[b as usize]) else {
                    return fail("a domain pair maps outside the target domain", format!("({a},{b})"));
                };
                if beta[c as usize] == NONE {
                    beta[c as usize] = img;
                    changed = true;
                } else if beta[c as usize] != img {
                    return fail("products not preserved", format!("({a},{b})"));
                }
            }
        }
    }
    if let Some(g) = beta.iter().position(|&x| x == NONE) {
        return fail("the base does not generate", format!("element {g} unreached"));
    }
    let mut seen = vec![false; n];
    for &x in &beta {
        if std::mem::replace(&mut seen[x as usize], true) {
            return fail("not injective", format!("{x} hit twice"));
        }
    }
    // the induced map on S and the objects
    let lat = lplus.lattice();
    let tlat = ltilde.lattice();
    let mut sigma = vec![NONE; lplus.s_order()];
    for x in 0..lplus.s_order() as u32 {
        match ltilde.l_to_s(beta[lplus.s_to_l(x) as usize]) {
            Some(y) => sigma[x as usize] = y,
            None => return fail("S is not sent into S̃", format!("{x}")),
        }
    }
    for g in 0..n as u32 {
        let mapped = tlat.image(lplus.s_dom(g), &sigma);
        if mapped != Some(ltilde.s_dom(beta[g as usize])) {
            return fail("S_g not carried to S_{gβ}", format!("{g}"));
        }
    }
    for p in lat.ids() {
        let q = tlat.image(p, &sigma);
        if q.map(|q| ltilde.in_delta(q)) != Some(lplus.in_delta(p)) {
            return fail("object sets do not correspond", format!("{:?}", lat.bits(p)));
        }
    }
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            let lhs = lplus.pair(a, b).map(|c| beta[c as usize]);
            let rhs = ltilde.pair(beta[a as usize], beta[b as usize]);
            if lhs != rhs {
                return fail("domains differ", format!("({a},{b})"));
            }
        }
    }
    Ok(beta)
}
