//! Brute-force classification oracle written directly on permutations, with
//! no use of the library's group or lattice code. The Sylow subgroup is taken
//! from the library so that subgroups can be compared one for one.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use locality_forge::classify::classify_subgroups;
use locality_forge::fusion::FusionSystem;
use locality_forge::group::{Caps, FiniteGroup};
use locality_forge::locality::SylowContext;
use locality_forge::strat::stratification;

pub type Perm = Vec<u8>;
pub type Set = BTreeSet<Perm>;

fn mul(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&i| b[i as usize]).collect()
}

fn inv(a: &Perm) -> Perm {
    let mut q = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        q[j as usize] = i as u8;
    }
    q
}

fn conj(x: &Perm, g: &Perm) -> Perm {
    mul(&mul(&inv(g), x), g)
}

pub fn closure(gens: &[Perm], n: usize) -> Vec<Perm> {
    let id: Perm = (0..n as u8).collect();
    let mut all = vec![id.clone()];
    let mut seen: HashSet<Perm> = HashSet::from([id]);
    let mut i = 0;
    while i < all.len() {
        for g in gens {
            let h = mul(&all[i], g);
            if seen.insert(h.clone()) {
                all.push(h);
            }
        }
        i += 1;
    }
    all
}

fn is_group(set: &Set) -> bool {
    set.iter().all(|a| set.iter().all(|b| set.contains(&mul(a, b))))
}

pub fn conj_set(p: &Set, g: &Perm) -> Set {
    p.iter().map(|x| conj(x, g)).collect()
}

fn centralizer(k: &[Perm], p: &Set) -> Vec<Perm> {
    k.iter().filter(|g| p.iter().all(|x| mul(x, g) == mul(g, x))).cloned().collect()
}

fn normalizer(k: &[Perm], p: &Set) -> Vec<Perm> {
    k.iter().filter(|g| conj_set(p, g) == *p).cloned().collect()
}

fn p_part(mut n: usize, p: usize) -> usize {
    let mut r = 1;
    while n % p == 0 {
        n /= p;
        r *= p;
    }
    r
}

pub struct Oracle {
    pub g: Vec<Perm>,
    pub s: Vec<Perm>,
    pub p: usize,
    pub subs: Vec<Set>,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub centric: bool,
    pub radical: bool,
    pub quasicentric: bool,
}

impl Oracle {
    pub fn new(g: Vec<Perm>, s: Vec<Perm>, p: usize) -> Self {
        assert!(s.len() <= 16, "subset enumeration needs a small S");
        let mut subs = Vec::new();
        for mask in 0u32..(1 << s.len()) {
            let set: Set = (0..s.len()).filter(|&i| mask >> i & 1 == 1).map(|i| s[i].clone()).collect();
            let id: Perm = (0..s[0].len() as u8).collect();
            if set.contains(&id) && is_group(&set) {
                subs.push(set);
            }
        }
        Oracle { g, s, p, subs }
    }

    pub fn conjugates_in_s(&self, p: &Set) -> Vec<Set> {
        let sset: Set = self.s.iter().cloned().collect();
        let mut out: Vec<Set> = Vec::new();
        for g in &self.g {
            let q = conj_set(p, g);
            if q.is_subset(&sset) && !out.contains(&q) {
                out.push(q);
            }
        }
        out
    }

    pub fn centric(&self, p: &Set) -> bool {
        self.conjugates_in_s(p).iter().all(|q| centralizer(&self.s, q).iter().all(|x| q.contains(x)))
    }

    /// O_p(Aut_G(P)/Inn(P)) = 1, testing every normal subgroup between Inn and Aut.
    pub fn radical(&self, p: &Set) -> bool {
        let elems: Vec<Perm> = p.iter().cloned().collect();
        let as_map = |g: &Perm| -> Vec<Perm> { elems.iter().map(|x| conj(x, g)).collect() };
        let aut: Vec<Vec<Perm>> = normalizer(&self.g, p)
            .iter()
            .map(as_map)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let inn: BTreeSet<Vec<Perm>> = elems.iter().map(as_map).collect();
        let compose = |a: &Vec<Perm>, b: &Vec<Perm>| -> Vec<Perm> {
            // (x a) b, maps stored as images of `elems`
            a.iter().map(|y| b[elems.iter().position(|x| x == y).unwrap()].clone()).collect()
        };
        let n = aut.len();
        assert!(n <= 24);
        for mask in 0u32..(1 << n) {
            let k: BTreeSet<Vec<Perm>> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| aut[i].clone()).collect();
            if k.len() <= inn.len() || !inn.is_subset(&k) || (k.len() / inn.len()) != p_part(k.len() / inn.len(), self.p) {
                continue;
            }
            if k.len() % inn.len() != 0 || !k.iter().all(|a| k.iter().all(|b| k.contains(&compose(a, b)))) {
                continue;
            }
            let normal = aut.iter().all(|g| {
                let gi = aut.iter().find(|h| compose(g, h) == elems).unwrap();
                k.iter().all(|x| k.contains(&compose(&compose(gi, x), g)))
            });
            if normal {
                return false;
            }
        }
        true
    }

    /// C_G(Q) is p-nilpotent for a fully centralized conjugate Q.
    pub fn quasicentric(&self, p: &Set) -> bool {
        let conjs = self.conjugates_in_s(p);
        let q = conjs.iter().max_by_key(|q| centralizer(&self.s, q).len()).unwrap();
        let c = centralizer(&self.g, q);
        let order = |x: &Perm| {
            let mut k = 1;
            let mut y = x.clone();
            let id: Perm = (0..x.len() as u8).collect();
            while y != id {
                y = mul(&y, x);
                k += 1;
            }
            k
        };
        let odd: Set = c.iter().filter(|x| order(x) % self.p != 0).cloned().collect();
        odd.len() == c.len() / p_part(c.len(), self.p) && is_group(&odd)
    }

    pub fn flags(&self, p: &Set) -> Flags {
        let centric = self.centric(p);
        Flags { centric, radical: centric && self.radical(p), quasicentric: self.quasicentric(p) }
    }
}

pub struct Fixture {
    pub oracle: Oracle,
    /// Library flags per oracle subgroup, with its F-class index.
    pub lib: Vec<(Flags, usize)>,
    pub class_count: usize,
}

pub fn fixture(g: FiniteGroup, p: u32) -> Fixture {
    let ctx = SylowContext::new(Arc::new(g), p, &Caps::default()).unwrap();
    let grp = &ctx.group;
    let to_perm = |x: u32| -> Perm { grp.perm(x).unwrap().iter().map(|&i| i as u8).collect() };
    let gens: Vec<Perm> = grp.generators().iter().map(|&x| to_perm(x)).collect();
    let all = closure(&gens, grp.points());
    assert_eq!(all.len(), grp.order());
    let s: Vec<Perm> = ctx.s_in_g.iter().map(|&x| to_perm(x)).collect();
    let oracle = Oracle::new(all, s, p as usize);
    let full = ctx.group_locality().unwrap();
    let f = FusionSystem::of_locality(&full).unwrap();
    let st = stratification(&full).unwrap();
    let cl = classify_subgroups(&f, &st, p).unwrap();
    assert_eq!(oracle.subs.len(), ctx.lat.len(), "subgroup count of S");
    let lib = oracle
        .subs
        .iter()
        .map(|set| {
            let id = ctx
                .lat
                .ids()
                .find(|&id| ctx.to_g(id).members().iter().map(|&x| to_perm(x)).collect::<Set>() == *set)
                .expect("oracle subgroup known to the library");
            let c = cl.class(id);
            (
                Flags { centric: c.flags.centric, radical: c.flags.centric && c.flags.radical, quasicentric: c.flags.quasicentric },
                cl.class_of[id],
            )
        })
        .collect();
    Fixture { oracle, lib, class_count: cl.classes.len() }
}

pub fn check_agreement(fx: &Fixture) {
    for (set, (flags, _)) in fx.oracle.subs.iter().zip(&fx.lib) {
        assert_eq!(fx.oracle.flags(set), *flags, "flags disagree on {set:?}");
    }
    // classes agree with G-conjugacy into S
    for (i, a) in fx.oracle.subs.iter().enumerate() {
        let conjs = fx.oracle.conjugates_in_s(a);
        for (j, b) in fx.oracle.subs.iter().enumerate() {
            assert_eq!(conjs.contains(b), fx.lib[i].1 == fx.lib[j].1);
        }
    }
}

/// Classes with a flag, described as sorted (order, is normal in S, is cyclic).
pub fn describe(fx: &Fixture, pick: impl Fn(&Flags) -> bool) -> Vec<(usize, bool, bool)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (set, (flags, class)) in fx.oracle.subs.iter().zip(&fx.lib) {
        if pick(flags) && seen.insert(*class) {
            let normal = fx.oracle.s.iter().all(|g| conj_set(set, g) == *set);
            let cyclic = set.iter().any(|x| closure(&[x.clone()], x.len()).len() == set.len());
            out.push((set.len(), normal, cyclic));
        }
    }
    out.sort();
    out
}

