//! Partial groups: a domain of words, a product on it, and an inversion.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::group::FiniteGroup;
use crate::report::Report;

pub trait PartialGroup {
    fn size(&self) -> usize;
    fn identity(&self) -> u32 {
        0
    }
    fn inv(&self, a: u32) -> u32;
    /// The binary product, `None` when `(a, b)` is outside the domain.
    fn pair(&self, a: u32, b: u32) -> Option<u32>;
    fn in_domain(&self, w: &[u32]) -> bool;

    /// Π(w) by left fold, `None` when `w` is outside the domain.
    fn product(&self, w: &[u32]) -> Option<u32> {
        if !self.in_domain(w) {
            return None;
        }
        self.fold(w)
    }

    /// Left fold of the binary product without the domain test.
    fn fold(&self, w: &[u32]) -> Option<u32> {
        let mut acc = self.identity();
        for &g in w {
            acc = self.pair(acc, g)?;
        }
        Some(acc)
    }

    /// `f^g = Π(g⁻¹, f, g)` when defined.
    fn conjugate(&self, f: u32, g: u32) -> Option<u32> {
        self.product(&[self.inv(g), f, g])
    }
}

impl PartialGroup for FiniteGroup {
    fn size(&self) -> usize {
        self.order()
    }
    fn inv(&self, a: u32) -> u32 {
        FiniteGroup::inv(self, a)
    }
    fn pair(&self, a: u32, b: u32) -> Option<u32> {
        Some(self.mul(a, b))
    }
    fn in_domain(&self, _w: &[u32]) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyBudget {
    /// Words enumerated exhaustively per length before switching to sampling.
    pub exhaustive_words: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget { exhaustive_words: 400_000, samples: 4_000, seed: 1 }
    }
}

fn word_str(w: &[u32]) -> String {
    format!("{w:?}")
}

/// Checks the partial group axioms on one word that lies in the domain.
fn check_word<P: PartialGroup + ?Sized>(pg: &P, w: &[u32], rep: &mut Report) {
    let n = w.len();
    for k in 0..n {
        rep.check(pg.in_domain(&w[..k]) && pg.in_domain(&w[k..]), || {
            format!("subword of domain word {} lies outside D", word_str(w))
        });
    }
    let Some(total) = pg.fold(w) else {
        rep.fail(format!("left fold undefined on domain word {}", word_str(w)));
        return;
    };
    for i in 0..n {
        for j in i + 1..=n {
            if j - i < 2 && !(i == 0 && j == n) {
                continue;
            }
            let Some(mid) = pg.product(&w[i..j]) else {
                rep.fail(format!("block {}..{} of {} lies outside D", i, j, word_str(w)));
                continue;
            };
            let mut v = w[..i].to_vec();
            v.push(mid);
            v.extend_from_slice(&w[j..]);
            let ok = pg.product(&v) == Some(total);
            rep.check(ok, || {
                format!("D-associativity fails on {} contracting {}..{}", word_str(w), i, j)
            });
        }
    }
    let mut winv: Vec<u32> = w.iter().rev().map(|&g| pg.inv(g)).collect();
    let inv_prod = pg.product(&winv);
    rep.check(inv_prod == Some(pg.inv(total)), || {
        format!("Π(w⁻¹) ≠ Π(w)⁻¹ at {}", word_str(w))
    });
    winv.extend_from_slice(w);
    rep.check(pg.product(&winv) == Some(pg.identity()), || {
        format!("inverse law fails at {}", word_str(w))
    });
}

/// Axioms (1)–(4): subword closure, unit, D-associativity, inverse law; plus cancellation.
pub fn verify_partial_group_axioms<P: PartialGroup + ?Sized>(pg: &P, budget: &VerifyBudget) -> Report {
    let mut rep = Report::new("partial-group axioms");
    let n = pg.size();
    rep.check(pg.in_domain(&[]), || "empty word outside D".into());
    rep.check(pg.inv(pg.identity()) == pg.identity(), || "1⁻¹ ≠ 1".into());
    for g in 0..n as u32 {
        rep.check(pg.in_domain(&[g]), || format!("word ({g}) outside D"));
        rep.check(pg.product(&[g]) == Some(g), || format!("Π(({g})) ≠ {g}"));
        rep.check(pg.inv(pg.inv(g)) == g, || format!("inversion not involutory at {g}"));
        rep.check(pg.pair(pg.identity(), g) == Some(g) && pg.pair(g, pg.identity()) == Some(g), || {
            format!("identity law fails at {g}")
        });
    }
    // cancellation: b ↦ Π(a, b) injective on its domain
    for a in 0..n as u32 {
        let mut seen: HashMap<u32, u32> = HashMap::new();
        for b in 0..n as u32 {
            if let Some(c) = pg.product(&[a, b]) {
                if let Some(&b0) = seen.get(&c) {
                    rep.fail(format!("cancellation fails: Π({a},{b0}) = Π({a},{b}) = {c}"));
                } else {
                    seen.insert(c, b);
                }
            }
        }
    }
    // exhaustive depth-first enumeration of domain words
    let mut max_len = 1usize;
    let mut total = n as u64;
    while max_len < 4 {
        let next = total.saturating_mul(n as u64);
        if next > budget.exhaustive_words {
            break;
        }
        total = next;
        max_len += 1;
    }
    let mut stack: Vec<Vec<u32>> = (0..n as u32).map(|g| vec![g]).collect();
    while let Some(w) = stack.pop() {
        check_word(pg, &w, &mut rep);
        if w.len() < max_len {
            for g in 0..n as u32 {
                let mut v = w.clone();
                v.push(g);
                if pg.in_domain(&v) {
                    stack.push(v);
                }
            }
        }
    }
    // seeded random domain words beyond the exhaustive range
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.samples {
        let len = rng.gen_range(max_len.max(2)..=6);
        let mut w = vec![rng.gen_range(0..n as u32)];
        'grow: while w.len() < len {
            for _ in 0..16 {
                let g = rng.gen_range(0..n as u32);
                w.push(g);
                if pg.in_domain(&w) {
                    continue 'grow;
                }
                w.pop();
            }
            break;
        }
        check_word(pg, &w, &mut rep);
    }
    rep
}

/// Closure of `x` under inversion and defined binary products.
pub fn generated_partial_subgroup<P: PartialGroup + ?Sized>(pg: &P, x: &Bits) -> Bits {
    close(pg, x, false)
}

/// The partial normal closure of `x`.
pub fn normal_closure<P: PartialGroup + ?Sized>(pg: &P, x: &Bits) -> Bits {
    close(pg, x, true)
}

fn close<P: PartialGroup + ?Sized>(pg: &P, x: &Bits, normal: bool) -> Bits {
    let n = pg.size();
    let mut set = Bits::new(n);
    let mut list: Vec<u32> = Vec::new();
    let mut queue: VecDeque<u32> = VecDeque::new();
    let push = |g: u32, set: &mut Bits, list: &mut Vec<u32>, queue: &mut VecDeque<u32>| {
        if set.insert(g as usize) {
            list.push(g);
            queue.push_back(g);
        }
    };
    push(pg.identity(), &mut set, &mut list, &mut queue);
    for g in x.iter() {
        push(g as u32, &mut set, &mut list, &mut queue);
    }
    while let Some(a) = queue.pop_front() {
        push(pg.inv(a), &mut set, &mut list, &mut queue);
        let snapshot = list.len();
        for i in 0..snapshot {
            let b = list[i];
            if let Some(c) = pg.pair(a, b).filter(|_| pg.in_domain(&[a, b])) {
                push(c, &mut set, &mut list, &mut queue);
            }
            if let Some(c) = pg.pair(b, a).filter(|_| pg.in_domain(&[b, a])) {
                push(c, &mut set, &mut list, &mut queue);
            }
        }
        if normal {
            for g in 0..n as u32 {
                if let Some(c) = pg.conjugate(a, g) {
                    push(c, &mut set, &mut list, &mut queue);
                }
            }
        }
    }
    set
}

/// Returns a witness when `set` is not a partial subgroup.
pub fn partial_subgroup_violation<P: PartialGroup + ?Sized>(pg: &P, set: &Bits) -> Option<String> {
    if !set.contains(pg.identity() as usize) {
        return Some("identity missing".into());
    }
    let m = set.to_vec();
    for &a in &m {
        if !set.contains(pg.inv(a) as usize) {
            return Some(format!("{a}⁻¹ missing"));
        }
        for &b in &m {
            if let Some(c) = pg.product(&[a, b]) {
                if !set.contains(c as usize) {
                    return Some(format!("Π({a},{b}) = {c} missing"));
                }
            }
        }
    }
    None
}

/// Returns a witness when `set` is not a partial normal subgroup.
pub fn partial_normal_violation<P: PartialGroup + ?Sized>(pg: &P, set: &Bits) -> Option<String> {
    if let Some(w) = partial_subgroup_violation(pg, set) {
        return Some(w);
    }
    for f in set.iter() {
        for g in 0..pg.size() as u32 {
            if let Some(c) = pg.conjugate(f as u32, g) {
                if !set.contains(c as usize) {
                    return Some(format!("{f}^{g} = {c} missing"));
                }
            }
        }
    }
    None
}

pub fn is_partial_normal<P: PartialGroup + ?Sized>(pg: &P, set: &Bits) -> bool {
    partial_normal_violation(pg, set).is_none()
}

/// All partial normal subgroups, sorted by (size, members).
pub fn enumerate_partial_normal_subgroups<P: PartialGroup + ?Sized>(
    pg: &P,
    cap: usize,
) -> crate::Result<Vec<Bits>> {
    let n = pg.size();
    let mut atoms: Vec<Bits> = Vec::new();
    let mut seen_atoms = HashSet::new();
    for g in 0..n {
        let a = normal_closure(pg, &Bits::from_indices(n, [g]));
        if seen_atoms.insert(a.clone()) {
            atoms.push(a);
        }
    }
    let trivial = Bits::from_indices(n, [pg.identity() as usize]);
    let mut found: HashSet<Bits> = HashSet::from([trivial.clone()]);
    let mut queue = VecDeque::from([trivial]);
    let mut memo: HashSet<(Bits, usize)> = HashSet::new();
    while let Some(cur) = queue.pop_front() {
        for (ai, a) in atoms.iter().enumerate() {
            if a.is_subset(&cur) || !memo.insert((cur.clone(), ai)) {
                continue;
            }
            let j = normal_closure(pg, &cur.or(a));
            if found.insert(j.clone()) {
                if found.len() > cap {
                    return Err(crate::Error::Resource(format!(
                        "partial normal subgroup count exceeds cap {cap}"
                    )));
                }
                queue.push_back(j);
            }
        }
    }
    let mut out: Vec<Bits> = found.into_iter().collect();
    out.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.iter().cmp(b.iter())));
    Ok(out)
}

/// Checks that `map` sends domain words to domain words compatibly with Π.
pub fn verify_homomorphism<P, Q>(src: &P, tgt: &Q, map: &[u32], budget: &VerifyBudget) -> Report
where
    P: PartialGroup + ?Sized,
    Q: PartialGroup + ?Sized,
{
    let mut rep = Report::new("homomorphism");
    let n = src.size();
    if map.len() != n {
        rep.fail(format!("map has length {} but source has {n} elements", map.len()));
        return rep;
    }
    if map.iter().any(|&x| x as usize >= tgt.size()) {
        rep.fail("map leaves the target carrier".to_string());
        return rep;
    }
    rep.check(map[src.identity() as usize] == tgt.identity(), || "1 not sent to 1".into());
    for g in 0..n {
        rep.check(map[src.inv(g as u32) as usize] == tgt.inv(map[g]), || {
            format!("inversion not preserved at {g}")
        });
    }
    let mut max_len = 1usize;
    let mut total = n as u64;
    while max_len < 4 {
        let next = total.saturating_mul(n as u64);
        if next > budget.exhaustive_words {
            break;
        }
        total = next;
        max_len += 1;
    }
    let mut stack: Vec<Vec<u32>> = (0..n as u32).map(|g| vec![g]).collect();
    let check = |w: &[u32], rep: &mut Report| {
        let img: Vec<u32> = w.iter().map(|&g| map[g as usize]).collect();
        let lhs = src.product(w).map(|x| map[x as usize]);
        let rhs = tgt.product(&img);
        rep.check(lhs.is_some() && lhs == rhs, || {
            format!("word {} maps to {:?}, product image {:?}", word_str(w), rhs, lhs)
        });
    };
    while let Some(w) = stack.pop() {
        check(&w, &mut rep);
        if w.len() < max_len {
            for g in 0..n as u32 {
                let mut v = w.clone();
                v.push(g);
                if src.in_domain(&v) {
                    stack.push(v);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.samples / 4 {
        let len = rng.gen_range(2..=6);
        let mut w = vec![rng.gen_range(0..n as u32)];
        'grow: while w.len() < len {
            for _ in 0..16 {
                w.push(rng.gen_range(0..n as u32));
                if src.in_domain(&w) {
                    continue 'grow;
                }
                w.pop();
            }
            break;
        }
        check(&w, &mut rep);
    }
    rep
}

/// Preimage of the identity.
pub fn kernel<Q: PartialGroup + ?Sized>(tgt: &Q, map: &[u32]) -> Bits {
    Bits::from_indices(
        map.len(),
        map.iter().enumerate().filter(|(_, &x)| x == tgt.identity()).map(|(i, _)| i),
    )
}
