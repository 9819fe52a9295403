//! Localities (L, Δ, S): objective partial groups over a finite p-group S.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{p_part, Caps, FiniteGroup, Subgroup};
use crate::lattice::{SubId, SubLattice};
use crate::partial::PartialGroup;
use crate::NONE;

/// Where the elements of a locality live inside an ambient finite group.
#[derive(Debug, Clone)]
pub struct Origin {
    pub group: Arc<FiniteGroup>,
    /// S index to group index.
    pub s_in_g: Vec<u32>,
    /// Locality index to group index.
    pub elems: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct Locality {
    p: u32,
    inv: Vec<u32>,
    prod: Vec<u32>,
    lat: Arc<SubLattice>,
    s_to_l: Vec<u32>,
    l_to_s: Vec<u32>,
    s_dom: Vec<SubId>,
    conj: Vec<Vec<u32>>,
    delta: Vec<bool>,
    origin: Option<Origin>,
}

/// The raw tables of a locality, before certification.
#[derive(Debug, Clone)]
pub struct LocalityParts {
    pub p: u32,
    pub inv: Vec<u32>,
    /// Row-major n×n table, `NONE` where undefined.
    pub prod: Vec<u32>,
    pub lat: Arc<SubLattice>,
    pub s_to_l: Vec<u32>,
    pub s_dom: Vec<SubId>,
    pub conj: Vec<Vec<u32>>,
    pub delta: Vec<bool>,
    pub origin: Option<Origin>,
}

impl Locality {
    /// Assembles a locality from tables. Only shapes are checked here; use
    /// [`crate::verify::verify_locality_axioms`] to certify the result.
    pub fn from_parts(parts: LocalityParts) -> Result<Self> {
        let n = parts.inv.len();
        let ns = parts.lat.group().order();
        if n == 0 || parts.prod.len() != n * n || parts.s_dom.len() != n || parts.conj.len() != n {
            return Err(Error::domain("locality tables have inconsistent sizes"));
        }
        if parts.delta.len() != parts.lat.len() || parts.s_to_l.len() != ns {
            return Err(Error::domain("locality S data has inconsistent sizes"));
        }
        if parts.inv.iter().any(|&x| x as usize >= n)
            || parts.prod.iter().any(|&x| x != NONE && x as usize >= n)
            || parts.s_dom.iter().any(|&x| x >= parts.lat.len())
            || parts.conj.iter().any(|c| c.len() != ns || c.iter().any(|&y| y != NONE && y as usize >= ns))
        {
            return Err(Error::domain("locality table entry out of range"));
        }
        let mut l_to_s = vec![NONE; n];
        for (x, &g) in parts.s_to_l.iter().enumerate() {
            if g as usize >= n {
                return Err(Error::domain("S element outside the carrier"));
            }
            l_to_s[g as usize] = x as u32;
        }
        Ok(Locality {
            p: parts.p,
            inv: parts.inv,
            prod: parts.prod,
            lat: parts.lat,
            s_to_l: parts.s_to_l,
            l_to_s,
            s_dom: parts.s_dom,
            conj: parts.conj,
            delta: parts.delta,
            origin: parts.origin,
        })
    }

    pub fn into_parts(self) -> LocalityParts {
        LocalityParts {
            p: self.p,
            inv: self.inv,
            prod: self.prod,
            lat: self.lat,
            s_to_l: self.s_to_l,
            s_dom: self.s_dom,
            conj: self.conj,
            delta: self.delta,
            origin: self.origin,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn lattice(&self) -> &Arc<SubLattice> {
        &self.lat
    }
    pub fn s_group(&self) -> &FiniteGroup {
        self.lat.group()
    }
    pub fn s_order(&self) -> usize {
        self.lat.group().order()
    }
    pub fn origin(&self) -> Option<&Origin> {
        self.origin.as_ref()
    }
    pub fn s_to_l(&self, x: u32) -> u32 {
        self.s_to_l[x as usize]
    }
    pub fn s_elements(&self) -> &[u32] {
        &self.s_to_l
    }
    pub fn l_to_s(&self, g: u32) -> Option<u32> {
        Some(self.l_to_s[g as usize]).filter(|&x| x != NONE)
    }
    pub fn s_dom(&self, g: u32) -> SubId {
        self.s_dom[g as usize]
    }
    pub fn conj_map(&self, g: u32) -> &[u32] {
        &self.conj[g as usize]
    }
    pub fn delta(&self) -> &[bool] {
        &self.delta
    }
    pub fn in_delta(&self, id: SubId) -> bool {
        self.delta[id]
    }
    pub fn delta_ids(&self) -> Vec<SubId> {
        self.lat.ids().filter(|&i| self.delta[i]).collect()
    }
    pub fn raw_pair(&self, a: u32, b: u32) -> u32 {
        self.prod[a as usize * self.inv.len() + b as usize]
    }
    pub fn inverse_table(&self) -> &[u32] {
        &self.inv
    }

    /// Number of ordered pairs in the binary domain.
    pub fn pair_count(&self) -> usize {
        self.prod.iter().filter(|&&x| x != NONE).count()
    }

    /// Overwrites one product entry; the result is no longer certified.
    pub fn set_raw_pair(&mut self, a: u32, b: u32, value: Option<u32>) {
        let n = self.inv.len();
        self.prod[a as usize * n + b as usize] = value.unwrap_or(NONE);
    }

    /// Overwrites one Δ membership flag; the result is no longer certified.
    pub fn set_delta_flag(&mut self, id: SubId, member: bool) {
        self.delta[id] = member;
    }

    pub fn with_delta(&self, delta: Vec<bool>) -> Locality {
        let mut l = self.clone();
        l.delta = delta;
        l
    }

    /// Bits over S indices: `S_w`.
    pub fn s_w_bits(&self, w: &[u32]) -> Bits {
        let ns = self.s_order();
        let mut cur: Vec<u32> = (0..ns as u32).collect();
        for &g in w {
            let c = &self.conj[g as usize];
            for y in cur.iter_mut() {
                if *y != NONE {
                    *y = c[*y as usize];
                }
            }
        }
        Bits::from_indices(ns, cur.iter().enumerate().filter(|(_, &y)| y != NONE).map(|(x, _)| x))
    }

    /// `S_w` as a lattice id; `None` only happens for uncertified tables.
    pub fn s_w(&self, w: &[u32]) -> Option<SubId> {
        self.lat.lookup(&self.s_w_bits(w))
    }

    /// `{x ∈ S : x^w ∈ X}` restricted to words through S.
    pub fn preimage(&self, g: u32, x: SubId) -> Option<SubId> {
        let c = &self.conj[g as usize];
        let target = self.lat.bits(x);
        let b = Bits::from_indices(
            self.s_order(),
            (0..self.s_order()).filter(|&s| c[s] != NONE && target.contains(c[s] as usize)),
        );
        self.lat.lookup(&b)
    }

    /// Image of a subgroup of `S_g` under `c_g`.
    pub fn conj_sub(&self, x: SubId, g: u32) -> Option<SubId> {
        self.lat.image(x, &self.conj[g as usize])
    }

    /// `N_L(P) = {g : P ≤ S_g, P^g = P}`.
    pub fn normalizer_elements(&self, pid: SubId) -> Vec<u32> {
        (0..self.size() as u32)
            .filter(|&g| self.lat.le(pid, self.s_dom(g)) && self.conj_sub(pid, g) == Some(pid))
            .collect()
    }

    /// `C_L(P)`: elements with `P ≤ S_g` acting trivially on P.
    pub fn centralizer_elements(&self, pid: SubId) -> Vec<u32> {
        (0..self.size() as u32)
            .filter(|&g| {
                self.lat.le(pid, self.s_dom(g))
                    && self.lat.bits(pid).iter().all(|x| self.conj[g as usize][x] == x as u32)
            })
            .collect()
    }

    /// Elements of L as a group, when every pair among them is defined.
    pub fn subgroup_as_group(&self, elems: &[u32]) -> Result<FiniteGroup> {
        let n = elems.len();
        if elems.first() != Some(&0) {
            return Err(Error::domain("subgroup list must start with the identity"));
        }
        let pos: HashMap<u32, u32> = elems.iter().enumerate().map(|(i, &g)| (g, i as u32)).collect();
        let mut table = vec![0u32; n * n];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                let c = self.pair(a, b).ok_or_else(|| {
                    Error::domain_with("set is not a subgroup: product undefined", format!("({a},{b})"))
                })?;
                table[i * n + j] = *pos.get(&c).ok_or_else(|| {
                    Error::domain_with("set is not a subgroup: not closed", format!("({a},{b})"))
                })?;
            }
        }
        FiniteGroup::from_table(n, table)
    }

    /// `N_L(P)` as a finite group for `P ∈ Δ`.
    pub fn normalizer_group(&self, pid: SubId) -> Result<(FiniteGroup, Vec<u32>)> {
        let el = self.normalizer_elements(pid);
        Ok((self.subgroup_as_group(&el)?, el))
    }

    /// The F-orbit of a subgroup under the conjugation maps of L.
    pub fn subgroup_orbit(&self, x: SubId) -> Vec<SubId> {
        let mut seen = vec![false; self.lat.len()];
        seen[x] = true;
        let mut list = vec![x];
        let mut head = 0;
        while head < list.len() {
            let y = list[head];
            for g in 0..self.size() as u32 {
                if self.lat.le(y, self.s_dom(g)) {
                    if let Some(z) = self.conj_sub(y, g) {
                        if !std::mem::replace(&mut seen[z], true) {
                            list.push(z);
                        }
                    }
                }
            }
            head += 1;
        }
        list.sort();
        list
    }

    /// Distinct conjugation maps `c_g : S_g → S`.
    pub fn conjugation_generators(&self) -> Vec<(SubId, Vec<u32>)> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for g in 0..self.size() {
            let key = (self.s_dom[g], self.conj[g].clone());
            if seen.insert(key.clone()) {
                out.push(key);
            }
        }
        out
    }

    /// Is the whole carrier a group (every pair defined)?
    pub fn is_group(&self) -> bool {
        self.prod.iter().all(|&x| x != NONE)
    }

    /// Compares with another locality element-for-element and pair-for-pair.
    pub fn structural_diff(&self, other: &Locality) -> Option<String> {
        if self.p != other.p {
            return Some("primes differ".into());
        }
        if self.size() != other.size() {
            return Some(format!("sizes differ: {} vs {}", self.size(), other.size()));
        }
        if self.s_order() != other.s_order() || self.lat.len() != other.lat.len() {
            return Some("S differs".into());
        }
        if self.s_to_l != other.s_to_l {
            return Some("S embedding differs".into());
        }
        for id in self.lat.ids() {
            if self.lat.bits(id) != other.lat.bits(id) {
                return Some("subgroup lattices differ".into());
            }
        }
        if self.delta != other.delta {
            return Some("object sets differ".into());
        }
        if self.inv != other.inv {
            return Some("inversion differs".into());
        }
        if let Some(g) = (0..self.size()).find(|&g| self.s_dom[g] != other.s_dom[g] || self.conj[g] != other.conj[g]) {
            return Some(format!("conjugation data differs at element {g}"));
        }
        if let Some(i) = (0..self.prod.len()).find(|&i| self.prod[i] != other.prod[i]) {
            let n = self.size();
            return Some(format!("product differs at pair ({},{})", i / n, i % n));
        }
        None
    }
}

impl PartialGroup for Locality {
    fn size(&self) -> usize {
        self.inv.len()
    }
    fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }
    fn pair(&self, a: u32, b: u32) -> Option<u32> {
        Some(self.raw_pair(a, b)).filter(|&x| x != NONE)
    }
    fn in_domain(&self, w: &[u32]) -> bool {
        self.s_w(w).is_some_and(|id| self.delta[id])
    }
}

/// A finite group with a chosen Sylow p-subgroup S and the lattice of S.
#[derive(Debug, Clone)]
pub struct SylowContext {
    pub group: Arc<FiniteGroup>,
    pub p: u32,
    pub sylow: Subgroup,
    pub s_in_g: Vec<u32>,
    g_to_s: Vec<u32>,
    pub lat: Arc<SubLattice>,
}

impl SylowContext {
    pub fn new(group: Arc<FiniteGroup>, p: u32, caps: &Caps) -> Result<Self> {
        if !crate::group::is_prime(p) {
            return Err(Error::domain_with("p must be prime", p.to_string()));
        }
        let sylow = group.sylow(p);
        Self::with_sylow(group, p, sylow, caps)
    }

    pub fn with_sylow(group: Arc<FiniteGroup>, p: u32, sylow: Subgroup, caps: &Caps) -> Result<Self> {
        if sylow.order() != p_part(group.order(), p as usize) {
            return Err(Error::domain("S is not a Sylow subgroup"));
        }
        let (sg, s_in_g) = group.subgroup_as_group(&sylow)?;
        let mut g_to_s = vec![NONE; group.order()];
        for (i, &g) in s_in_g.iter().enumerate() {
            g_to_s[g as usize] = i as u32;
        }
        let lat = Arc::new(SubLattice::new(sg, caps)?);
        Ok(SylowContext { group, p, sylow, s_in_g, g_to_s, lat })
    }

    pub fn s_index(&self, g: u32) -> Option<u32> {
        Some(self.g_to_s[g as usize]).filter(|&x| x != NONE)
    }

    /// Subgroup of G contained in S, as a lattice id.
    pub fn sub_id(&self, h: &Subgroup) -> Option<SubId> {
        let mut b = Bits::new(self.s_in_g.len());
        for g in h.0.iter() {
            b.insert(self.s_index(g as u32)? as usize);
        }
        self.lat.lookup(&b)
    }

    pub fn to_g(&self, id: SubId) -> Subgroup {
        Subgroup(Bits::from_indices(
            self.group.order(),
            self.lat.bits(id).iter().map(|x| self.s_in_g[x] as usize),
        ))
    }

    /// `S_g` and `c_g` for an element of G.
    fn transporter_data(&self, g: u32) -> (Bits, Vec<u32>) {
        let ns = self.s_in_g.len();
        let mut map = vec![NONE; ns];
        let mut b = Bits::new(ns);
        for (x, &xg) in self.s_in_g.iter().enumerate() {
            if let Some(y) = self.s_index(self.group.conj(xg, g)) {
                map[x] = y;
                b.insert(x);
            }
        }
        (b, map)
    }

    /// Returns a witness when Δ is not closed under overgroups and G-conjugation into S.
    pub fn f_closed_violation(&self, delta: &[bool]) -> Option<String> {
        for p in self.lat.ids().filter(|&p| delta[p]) {
            if let Some(q) = self.lat.above(p).find(|&q| !delta[q]) {
                return Some(format!(
                    "overgroup {:?} of {:?} is missing",
                    self.to_g(q).members(),
                    self.to_g(p).members()
                ));
            }
        }
        for g in 0..self.group.order() as u32 {
            let (sg, map) = self.transporter_data(g);
            for p in self.lat.ids().filter(|&p| delta[p]) {
                if self.lat.bits(p).is_subset(&sg) {
                    let q = self.lat.image(p, &map).expect("conjugate of a subgroup");
                    if !delta[q] {
                        return Some(format!(
                            "F-conjugate {:?} of {:?} is missing",
                            self.to_g(q).members(),
                            self.to_g(p).members()
                        ));
                    }
                }
            }
        }
        None
    }

    /// The transporter locality `{g ∈ G : S_g ∈ Δ}`.
    pub fn transporter(&self, delta: &[bool]) -> Result<Locality> {
        if delta.len() != self.lat.len() || !delta.iter().any(|&d| d) {
            return Err(Error::domain("Δ must be a nonempty set of subgroups of S"));
        }
        if let Some(w) = self.f_closed_violation(delta) {
            return Err(Error::domain_with("Δ is not F-closed", w));
        }
        let mut elems = Vec::new();
        let mut s_dom = Vec::new();
        let mut conj = Vec::new();
        let mut pos = vec![NONE; self.group.order()];
        for g in 0..self.group.order() as u32 {
            let (b, map) = self.transporter_data(g);
            let id = self.lat.lookup(&b).ok_or_else(|| Error::internal("S_g is not a subgroup"))?;
            if delta[id] {
                pos[g as usize] = elems.len() as u32;
                elems.push(g);
                s_dom.push(id);
                conj.push(map);
            }
        }
        let n = elems.len();
        let ns = self.s_in_g.len();
        let mut prod = vec![NONE; n * n];
        for a in 0..n {
            for b in 0..n {
                let (ca, cb) = (&conj[a], &conj[b]);
                let set = Bits::from_indices(
                    ns,
                    (0..ns).filter(|&x| ca[x] != NONE && cb[ca[x] as usize] != NONE),
                );
                let id = self.lat.lookup(&set).ok_or_else(|| Error::internal("S_w is not a subgroup"))?;
                if delta[id] {
                    let c = pos[self.group.mul(elems[a], elems[b]) as usize];
                    if c == NONE {
                        return Err(Error::internal("transporter product left the carrier"));
                    }
                    prod[a * n + b] = c;
                }
            }
        }
        let inv = elems.iter().map(|&g| pos[self.group.inv(g) as usize]).collect();
        let s_to_l = self.s_in_g.iter().map(|&g| pos[g as usize]).collect();
        Locality::from_parts(LocalityParts {
            p: self.p,
            inv,
            prod,
            lat: self.lat.clone(),
            s_to_l,
            s_dom,
            conj,
            delta: delta.to_vec(),
            origin: Some(Origin { group: self.group.clone(), s_in_g: self.s_in_g.clone(), elems }),
        })
    }

    /// G itself as a locality (Δ = all subgroups of S).
    pub fn group_locality(&self) -> Result<Locality> {
        self.transporter(&vec![true; self.lat.len()])
    }

    /// Conjugation maps `c_g` for all g ∈ G, deduplicated: generators of F_S(G).
    pub fn group_fusion_generators(&self) -> Vec<(SubId, Vec<u32>)> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for g in 0..self.group.order() as u32 {
            let (b, map) = self.transporter_data(g);
            let key = (self.lat.lookup(&b).expect("S_g subgroup"), map);
            if seen.insert(key.clone()) {
                out.push(key);
            }
        }
        out
    }
}
