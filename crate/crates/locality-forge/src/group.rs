//! Finite groups as dense index tables, and subgroup primitives.
//!
//! Elements are indices `0..order` with the identity at 0. Permutations act on
//! the right: `i^(gh) = (i^g)^h`, and `x^g = g⁻¹xg`.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};

pub const DENSE_LIMIT: usize = 2000;
const EXHAUSTIVE_AXIOM_LIMIT: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub order: usize,
    pub subgroups: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { order: 5000, subgroups: 100_000 }
    }
}

impl Caps {
    /// Reads `LOCALITY_FORGE_CAPS="order=N,subgroups=M"` over the defaults.
    pub fn from_env() -> Result<Self> {
        match std::env::var("LOCALITY_FORGE_CAPS") {
            Ok(s) => Caps::parse(&s),
            Err(_) => Ok(Caps::default()),
        }
    }

    /// `base` with the entries of `LOCALITY_FORGE_CAPS` applied over it.
    pub fn with_env(base: Caps) -> Result<Self> {
        match std::env::var("LOCALITY_FORGE_CAPS") {
            Ok(s) => base.parse_over(&s),
            Err(_) => Ok(base),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Caps::default().parse_over(s)
    }

    /// Applies `key=value` entries on top of `self`.
    pub fn parse_over(self, s: &str) -> Result<Self> {
        let mut caps = self;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad cap entry `{part}`")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad cap value `{v}`")))?;
            match k.trim() {
                "order" => caps.order = v,
                "subgroups" => caps.subgroups = v,
                other => return Err(Error::Parse(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }
}

/// A subgroup as a bitset over the parent's element indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup(pub Bits);

impl Subgroup {
    pub fn order(&self) -> usize {
        self.0.count()
    }
    pub fn contains(&self, g: u32) -> bool {
        self.0.contains(g as usize)
    }
    pub fn bits(&self) -> &Bits {
        &self.0
    }
    pub fn members(&self) -> Vec<u32> {
        self.0.to_vec()
    }
    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.0.is_subset(&other.0)
    }
    pub fn meet(&self, other: &Subgroup) -> Subgroup {
        Subgroup(self.0.and(&other.0))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    inv: Vec<u32>,
    table: Option<Vec<u32>>,
    perms: Option<Vec<Vec<u32>>>,
    perm_index: HashMap<Vec<u32>, u32>,
    points: usize,
    gens: Vec<u32>,
}

pub fn p_part(n: usize, p: usize) -> usize {
    let mut n = n;
    let mut r = 1;
    while p > 1 && n % p == 0 {
        n /= p;
        r *= p;
    }
    r
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&i| b[i as usize]).collect()
}

impl FiniteGroup {
    /// Closes the given 0-based image arrays under composition.
    pub fn from_perms(points: usize, generators: &[Vec<u32>], caps: &Caps) -> Result<Self> {
        for g in generators {
            if g.len() != points {
                return Err(Error::domain(format!(
                    "generator has {} images, expected {points}",
                    g.len()
                )));
            }
            let mut seen = vec![false; points];
            for &i in g {
                if i as usize >= points || std::mem::replace(&mut seen[i as usize], true) {
                    return Err(Error::domain_with("generator is not a bijection", format!("{g:?}")));
                }
            }
        }
        let id: Vec<u32> = (0..points as u32).collect();
        let mut perms = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        let mut head = 0;
        while head < perms.len() {
            for g in generators {
                let q = compose(&perms[head], g);
                if !index.contains_key(&q) {
                    if perms.len() >= caps.order {
                        return Err(Error::Resource(format!(
                            "group closure exceeds order cap {}",
                            caps.order
                        )));
                    }
                    index.insert(q.clone(), perms.len() as u32);
                    perms.push(q);
                }
            }
            head += 1;
        }
        let order = perms.len();
        let mut inv = vec![0u32; order];
        for (i, p) in perms.iter().enumerate() {
            let mut q = vec![0u32; points];
            for (x, &y) in p.iter().enumerate() {
                q[y as usize] = x as u32;
            }
            inv[i] = index[&q];
        }
        let gens = generators.iter().map(|g| index[g]).filter(|&g| g != 0).collect();
        let mut grp = FiniteGroup {
            order,
            inv,
            table: None,
            perms: Some(perms),
            perm_index: index,
            points,
            gens,
        };
        if order <= DENSE_LIMIT {
            let mut t = vec![0u32; order * order];
            for a in 0..order {
                for b in 0..order {
                    t[a * order + b] = grp.mul_perm(a as u32, b as u32);
                }
            }
            grp.table = Some(t);
        }
        Ok(grp)
    }

    /// Builds an abstract group from a multiplication table with identity 0.
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(Error::domain("table has wrong shape"));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(Error::domain("table entry out of range"));
        }
        let m = |a: usize, b: usize| table[a * order + b] as usize;
        for a in 0..order {
            if m(0, a) != a || m(a, 0) != a {
                return Err(Error::domain_with("index 0 is not the identity", format!("{a}")));
            }
        }
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            if let Some(b) = (0..order).find(|&b| m(a, b) == 0) {
                if m(b, a) != 0 {
                    return Err(Error::domain_with("inverse is not two-sided", format!("{a}")));
                }
                inv[a] = b as u32;
            } else {
                return Err(Error::domain_with("element has no inverse", format!("{a}")));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| m(m(a, b), c) == m(a, m(b, c));
        if order <= EXHAUSTIVE_AXIOM_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if !assoc(a, b, c) {
                            return Err(Error::domain_with(
                                "table is not associative",
                                format!("({a},{b},{c})"),
                            ));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..200_000 {
                let (a, b, c) = (
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                );
                if !assoc(a, b, c) {
                    return Err(Error::domain_with(
                        "table is not associative",
                        format!("({a},{b},{c})"),
                    ));
                }
            }
        }
        let mut grp = FiniteGroup {
            order,
            inv,
            table: Some(table),
            perms: None,
            perm_index: HashMap::new(),
            points: 0,
            gens: Vec::new(),
        };
        grp.gens = grp.greedy_generators(&Bits::full(order));
        Ok(grp)
    }

    pub fn trivial_group() -> Self {
        FiniteGroup::from_table(1, vec![0]).expect("trivial table")
    }

    pub fn order(&self) -> usize {
        self.order
    }
    pub fn identity(&self) -> u32 {
        0
    }
    pub fn points(&self) -> usize {
        self.points
    }
    pub fn generators(&self) -> &[u32] {
        &self.gens
    }
    pub fn perm(&self, a: u32) -> Option<&[u32]> {
        self.perms.as_ref().map(|p| p[a as usize].as_slice())
    }
    pub fn index_of_perm(&self, p: &[u32]) -> Option<u32> {
        self.perm_index.get(p).copied()
    }

    fn mul_perm(&self, a: u32, b: u32) -> u32 {
        let perms = self.perms.as_ref().expect("perm group");
        self.perm_index[&compose(&perms[a as usize], &perms[b as usize])]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.order + b as usize],
            None => self.mul_perm(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `x^g = g⁻¹ x g`.
    #[inline]
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, a: u32, k: usize) -> u32 {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn elem_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn product(&self, w: &[u32]) -> u32 {
        w.iter().fold(0, |acc, &g| self.mul(acc, g))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup(Bits::full(self.order))
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup(Bits::from_indices(self.order, [0]))
    }

    /// Subgroup generated by a list of elements, by breadth-first closure.
    pub fn generate(&self, gens: &[u32]) -> Subgroup {
        let mut bits = Bits::new(self.order);
        bits.insert(0);
        let mut list = vec![0u32];
        let mut head = 0;
        while head < list.len() {
            let e = list[head];
            for &g in gens {
                let q = self.mul(e, g);
                if bits.insert(q as usize) {
                    list.push(q);
                }
            }
            head += 1;
        }
        Subgroup(bits)
    }

    /// A small generating set of the subgroup generated by `set`.
    pub fn greedy_generators(&self, set: &Bits) -> Vec<u32> {
        let mut cur = self.trivial();
        let mut gens = Vec::new();
        for x in set.iter() {
            if !cur.contains(x as u32) {
                gens.push(x as u32);
                cur = self.generate(&gens);
            }
        }
        gens
    }

    pub fn closure(&self, set: &Bits) -> Subgroup {
        let gens = self.greedy_generators(set);
        self.generate(&gens)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        if a.is_subgroup_of(b) {
            return b.clone();
        }
        if b.is_subgroup_of(a) {
            return a.clone();
        }
        self.closure(&a.0.or(&b.0))
    }

    pub fn is_subgroup_set(&self, set: &Bits) -> bool {
        if !set.contains(0) {
            return false;
        }
        let m = set.to_vec();
        m.iter().all(|&a| m.iter().all(|&b| set.contains(self.mul(a, b) as usize)))
    }

    pub fn subgroup_from(&self, members: &[u32]) -> Result<Subgroup> {
        let mut bits = Bits::new(self.order);
        for &m in members {
            if m as usize >= self.order {
                return Err(Error::domain_with("element index out of range", m.to_string()));
            }
            bits.insert(m as usize);
        }
        if !self.is_subgroup_set(&bits) {
            return Err(Error::domain_with("set is not a subgroup", format!("{members:?}")));
        }
        Ok(Subgroup(bits))
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: u32) -> Subgroup {
        Subgroup(Bits::from_indices(
            self.order,
            h.0.iter().map(|x| self.conj(x as u32, g) as usize),
        ))
    }

    /// `{g ∈ k : h^g = h}`.
    pub fn normalizer_in(&self, k: &Subgroup, h: &Subgroup) -> Subgroup {
        let gens = self.greedy_generators(&h.0);
        Subgroup(Bits::from_indices(
            self.order,
            k.0.iter()
                .filter(|&g| gens.iter().all(|&x| h.contains(self.conj(x, g as u32))))
                .collect::<Vec<_>>(),
        ))
    }

    /// `{g ∈ k : x^g = x for all x ∈ h}`.
    pub fn centralizer_in(&self, k: &Subgroup, h: &Subgroup) -> Subgroup {
        let gens = self.greedy_generators(&h.0);
        Subgroup(Bits::from_indices(
            self.order,
            k.0.iter()
                .filter(|&g| gens.iter().all(|&x| self.mul(x, g as u32) == self.mul(g as u32, x)))
                .collect::<Vec<_>>(),
        ))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Result<Subgroup> {
        self.check_subgroup(h)?;
        Ok(self.normalizer_in(&self.whole(), h))
    }

    pub fn centralizer(&self, h: &Subgroup) -> Result<Subgroup> {
        self.check_subgroup(h)?;
        Ok(self.centralizer_in(&self.whole(), h))
    }

    pub fn center(&self, k: &Subgroup) -> Subgroup {
        self.centralizer_in(k, k)
    }

    fn check_subgroup(&self, h: &Subgroup) -> Result<()> {
        if h.0.universe() != self.order || !self.is_subgroup_set(&h.0) {
            return Err(Error::domain_with("not a subgroup of this group", format!("{:?}", h.0)));
        }
        Ok(())
    }

    pub fn is_normal_in(&self, h: &Subgroup, k: &Subgroup) -> bool {
        h.is_subgroup_of(k) && self.normalizer_in(k, h) == *k
    }

    /// Normal closure of `set` in `k`.
    pub fn normal_closure_in(&self, k: &Subgroup, set: &Bits) -> Subgroup {
        let kgens = self.greedy_generators(&k.0);
        let mut n = self.closure(set);
        loop {
            let ngens = self.greedy_generators(&n.0);
            let fresh = kgens
                .iter()
                .flat_map(|&g| ngens.iter().map(move |&x| (x, g)))
                .map(|(x, g)| self.conj(x, g))
                .find(|&y| !n.contains(y));
            match fresh {
                Some(y) => {
                    let mut b = n.0.clone();
                    b.insert(y as usize);
                    n = self.closure(&b);
                }
                None => return n,
            }
        }
    }

    pub fn normal_closure(&self, set: &Bits) -> Subgroup {
        self.normal_closure_in(&self.whole(), set)
    }

    /// Every subgroup of `k`, sorted by (order, members).
    pub fn subgroups_within(&self, k: &Subgroup, caps: &Caps) -> Result<Vec<Subgroup>> {
        let mut cyclic: Vec<(u32, Subgroup)> = Vec::new();
        let mut seen_cyc = HashSet::new();
        for g in k.0.iter() {
            let c = self.generate(&[g as u32]);
            if seen_cyc.insert(c.clone()) {
                cyclic.push((g as u32, c));
            }
        }
        let triv = self.trivial();
        let mut gens_of: HashMap<Subgroup, Vec<u32>> = HashMap::new();
        gens_of.insert(triv.clone(), Vec::new());
        let mut queue = VecDeque::from([triv]);
        while let Some(h) = queue.pop_front() {
            let hg = gens_of[&h].clone();
            for (g, c) in &cyclic {
                if c.is_subgroup_of(&h) {
                    continue;
                }
                let mut ng = hg.clone();
                ng.push(*g);
                let j = self.generate(&ng);
                if !gens_of.contains_key(&j) {
                    if gens_of.len() >= caps.subgroups {
                        return Err(Error::Resource(format!(
                            "subgroup count exceeds cap {}",
                            caps.subgroups
                        )));
                    }
                    gens_of.insert(j.clone(), ng);
                    queue.push_back(j);
                }
            }
        }
        let mut all: Vec<Subgroup> = gens_of.into_keys().collect();
        all.sort();
        Ok(all)
    }

    pub fn all_subgroups(&self, caps: &Caps) -> Result<Vec<Subgroup>> {
        if self.order > caps.order {
            return Err(Error::Resource(format!("order {} exceeds cap {}", self.order, caps.order)));
        }
        self.subgroups_within(&self.whole(), caps)
    }

    pub fn is_p_element(&self, g: u32, p: usize) -> bool {
        let o = self.elem_order(g);
        p_part(o, p) == o
    }

    /// A Sylow p-subgroup, grown deterministically through normalizers.
    pub fn sylow(&self, p: u32) -> Subgroup {
        let p = p as usize;
        let target = p_part(self.order, p);
        let mut cur = self.trivial();
        while cur.order() < target {
            let n = self.normalizer_in(&self.whole(), &cur);
            let g = n
                .0
                .iter()
                .map(|g| g as u32)
                .find(|&g| !cur.contains(g) && cur.contains(self.pow(g, p)))
                .expect("N(P)/P has order divisible by p");
            let mut b = cur.0.clone();
            b.insert(g as usize);
            cur = self.closure(&b);
        }
        cur
    }

    /// Checks that `s` has full p-part and that every p-element conjugates into it.
    pub fn verify_sylow(&self, s: &Subgroup, p: u32) -> bool {
        let pp = p as usize;
        if s.order() != p_part(self.order, pp) {
            return false;
        }
        (0..self.order as u32)
            .filter(|&x| self.is_p_element(x, pp))
            .all(|x| (0..self.order as u32).any(|g| s.contains(self.conj(x, g))))
    }

    pub fn conjugates(&self, h: &Subgroup) -> Vec<Subgroup> {
        let mut out: Vec<Subgroup> = (0..self.order as u32)
            .map(|g| self.conjugate_subgroup(h, g))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        out.sort();
        out
    }

    /// Intersection of all Sylow p-subgroups.
    pub fn o_p(&self, p: u32) -> Subgroup {
        let s = self.sylow(p);
        self.conjugates(&s).iter().fold(s.clone(), |acc, c| acc.meet(c))
    }

    /// Largest normal subgroup of order prime to p.
    pub fn o_p_prime(&self, p: u32) -> Subgroup {
        let pp = p as usize;
        let mut n = self.trivial();
        for g in 0..self.order as u32 {
            if n.contains(g) || p_part(self.elem_order(g), pp) != 1 {
                continue;
            }
            let mut b = n.0.clone();
            b.insert(g as usize);
            let k = self.normal_closure(&b);
            if p_part(k.order(), pp) == 1 {
                n = k;
            }
        }
        n
    }

    pub fn is_characteristic_p(&self, p: u32) -> bool {
        let o = self.o_p(p);
        self.centralizer_in(&self.whole(), &o).is_subgroup_of(&o)
    }

    /// For every proper containment P < Q of subgroups, P < N_Q(P).
    pub fn has_normalizer_increasing_property(&self, caps: &Caps) -> Result<bool> {
        let subs = self.all_subgroups(caps)?;
        for p in &subs {
            for q in &subs {
                if p.order() < q.order()
                    && p.is_subgroup_of(q)
                    && self.normalizer_in(q, p) == *p
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The subgroup as a group in its own right; the map sends new indices to old.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<(FiniteGroup, Vec<u32>)> {
        let members = h.members();
        let mut pos = HashMap::new();
        for (i, &m) in members.iter().enumerate() {
            pos.insert(m, i as u32);
        }
        let n = members.len();
        let mut table = vec![0u32; n * n];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                table[i * n + j] = *pos
                    .get(&self.mul(a, b))
                    .ok_or_else(|| Error::domain("set is not closed under multiplication"))?;
            }
        }
        Ok((FiniteGroup::from_table(n, table)?, members))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gens;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.product(&[self.inv(a), self.inv(b), a, b])
    }

    /// `[A, B]` for subgroups A and B.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut set = Bits::new(self.order);
        for x in a.0.iter() {
            for y in b.0.iter() {
                set.insert(self.commutator(x as u32, y as u32) as usize);
            }
        }
        self.closure(&set)
    }
}

/// Parses 1-based one-line image arrays into 0-based ones.
pub fn perm_from_one_based(points: usize, images: &[u32]) -> Result<Vec<u32>> {
    if images.len() != points {
        return Err(Error::Parse(format!(
            "permutation has {} images, expected {points}",
            images.len()
        )));
    }
    images
        .iter()
        .map(|&i| {
            if i == 0 || i as usize > points {
                Err(Error::Parse(format!("image {i} outside 1..={points}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

/// Builds a permutation from 1-based cycles, e.g. `&[&[1, 2, 3, 4]]`.
pub fn perm_from_cycles(points: usize, cycles: &[&[u32]]) -> Vec<u32> {
    let mut img: Vec<u32> = (0..points as u32).collect();
    for c in cycles {
        for (k, &a) in c.iter().enumerate() {
            let b = c[(k + 1) % c.len()];
            img[(a - 1) as usize] = b - 1;
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn caps_parse_and_override() {
        let c = Caps::parse("order=50, subgroups=7").unwrap();
        assert_eq!((c.order, c.subgroups), (50, 7));
        let d = c.parse_over("order=9").unwrap();
        assert_eq!((d.order, d.subgroups), (9, 7));
        assert!(Caps::parse("order").is_err());
        assert!(Caps::parse("depth=3").is_err());
        assert!(Caps::parse("order=x").is_err());
    }

    #[test]
    fn sym4_basics() {
        let g = fixtures::sym4().unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.identity(), 0);
        assert!(!g.is_abelian());
        let s = g.sylow(2);
        assert_eq!(s.order(), 8);
        assert!(g.verify_sylow(&s, 2));
        assert_eq!(g.sylow(3).order(), 3);
        // O_2 is the normal four-group, O_2' is trivial
        assert_eq!(g.o_p(2).order(), 4);
        assert_eq!(g.o_p_prime(2).order(), 1);
        assert_eq!(g.commutator_subgroup(&g.whole(), &g.whole()).order(), 12);
        assert_eq!(g.all_subgroups(&Caps::default()).unwrap().len(), 30);
        let orders: Vec<usize> = (0..24).map(|a| g.elem_order(a)).collect();
        assert_eq!(orders.iter().filter(|&&k| k == 2).count(), 9);
    }

    #[test]
    fn right_action_conventions() {
        let g = fixtures::sym4().unwrap();
        for a in 0..24 {
            for b in 0..24 {
                assert_eq!(g.conj(a, b), g.product(&[g.inv(b), a, b]));
                // x ↦ x^g is a right action
                for c in [1, 5] {
                    assert_eq!(g.conj(g.conj(c, a), b), g.conj(c, g.mul(a, b)));
                }
            }
        }
    }

    #[test]
    fn perm_helpers() {
        assert_eq!(perm_from_one_based(3, &[2, 3, 1]).unwrap(), vec![1, 2, 0]);
        assert!(perm_from_one_based(3, &[1, 4, 2]).is_err());
        assert!(perm_from_one_based(3, &[1, 2]).is_err());
        assert_eq!(perm_from_cycles(4, &[&[1, 2], &[3, 4]]), vec![1, 0, 3, 2]);
        assert_eq!(p_part(48, 2), 16);
        assert_eq!(p_part(48, 3), 3);
        assert!(is_prime(7) && !is_prime(9) && !is_prime(1));
    }

    #[test]
    fn gl23_characteristic_p() {
        let g = fixtures::gl23().unwrap();
        assert_eq!(g.order(), 48);
        let s = g.sylow(3);
        let n = g.normalizer(&s).unwrap();
        let (ng, _) = g.subgroup_as_group(&n).unwrap();
        // the centre of GL(2,3) centralizes O_3
        assert!(!ng.is_characteristic_p(3));
        assert_eq!(ng.o_p_prime(3).order(), 2);
    }

    #[test]
    fn order_cap_is_enforced() {
        let caps = Caps { order: 10, ..Caps::default() };
        let gens = [perm_from_cycles(4, &[&[1, 2, 3, 4]]), perm_from_cycles(4, &[&[1, 2]])];
        assert!(matches!(FiniteGroup::from_perms(4, &gens, &caps), Err(Error::Resource(_))));
    }
}
