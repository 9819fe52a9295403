//! Extending homomorphisms across an elementary expansion, and along an
//! arbitrary expansion of proper localities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fusion::FusionSystem;
use crate::lattice::SubId;
use crate::local::{fully_normalized_alternative, restrict};
use crate::locality::Locality;
use crate::partial::{generated_partial_subgroup, verify_homomorphism, PartialGroup, VerifyBudget};
use crate::strat::{stratification, Stratification};
use crate::NONE;

fn clause(name: &str, w: impl Into<String>) -> Error {
    Error::domain_with(format!("extension hypothesis {name} fails"), w)
}

/// Words over `alphabet` with `S_w ∈ Δ⁺` must map into the target domain:
/// exhaustive to length 3, then `budget.samples` seeded words up to length 6.
fn check_word_images(
    lplus: &Locality,
    alphabet: &[u32],
    beta: &[u32],
    target: &Locality,
    budget: &VerifyBudget,
) -> Result<()> {
    let check = |w: &[u32]| -> Result<()> {
        if lplus.in_domain(w) {
            let img: Vec<u32> = w.iter().map(|&g| beta[g as usize]).collect();
            if !target.in_domain(&img) {
                return Err(clause("on word images", format!("word {w:?} has image {img:?} outside D̃")));
            }
        }
        Ok(())
    };
    for &a in alphabet {
        for &b in alphabet {
            if !lplus.in_domain(&[a, b]) {
                continue;
            }
            check(&[a, b])?;
            for &c in alphabet {
                check(&[a, b, c])?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.samples {
        let len = rng.gen_range(4..=6);
        let mut w = vec![alphabet[rng.gen_range(0..alphabet.len())]];
        'grow: while w.len() < len {
            for _ in 0..16 {
                w.push(alphabet[rng.gen_range(0..alphabet.len())]);
                if lplus.in_domain(&w) {
                    continue 'grow;
                }
                w.pop();
            }
            break;
        }
        check(&w)?;
    }
    Ok(())
}

/// The unique γ: L⁺ → L̃ with γ|_L = α and γ|_M = γ_M, where L is the
/// restriction of `lplus` to `delta`, Δ⁺ = Δ ∪ R^F and M = N_{L⁺}(R).
///
/// `alpha` and `gamma_m` are indexed by L⁺ and hold `NONE` outside L and M.
pub fn extend_homomorphism(
    lplus: &Locality,
    delta: &[bool],
    r: SubId,
    alpha: &[u32],
    gamma_m: &[u32],
    target: &Locality,
    budget: &VerifyBudget,
) -> Result<Vec<u32>> {
    let lat = lplus.lattice();
    let n = lplus.size();
    let f = FusionSystem::of_locality(lplus)?;
    let st = stratification(lplus)?;
    if alpha.len() != n || gamma_m.len() != n || delta.len() != lat.len() {
        return Err(Error::domain("extension maps have the wrong length"));
    }
    // the object sets
    let class = f.conjugates(r);
    for p in lat.ids() {
        let want = delta[p] || class.contains(&p);
        if want != lplus.in_delta(p) {
            return Err(clause("on the object sets", format!("Δ⁺ ≠ Δ ∪ R^F at {:?}", lat.bits(p))));
        }
    }
    if let Some(v) = crate::local::f_closed_violation(lplus, delta) {
        return Err(clause("on the object sets", format!("Δ is not F-closed: {v}")));
    }
    if !st.contains(r) {
        return Err(clause("on the object sets", "R ∉ Ω"));
    }
    if let Some(alt) = fully_normalized_alternative(lplus, &st, r) {
        return Err(clause("on the object sets", format!("R is not fully normalized; {:?} is", lat.bits(alt))));
    }
    let in_l: Vec<bool> = (0..n as u32).map(|g| delta[lplus.s_dom(g)]).collect();
    let m: Vec<u32> = lplus.normalizer_elements(r);
    let mut in_m = vec![false; n];
    for &g in &m {
        in_m[g as usize] = true;
    }
    for g in 0..n {
        if (alpha[g] != NONE) != in_l[g] {
            return Err(Error::domain_with("α must be defined exactly on L", format!("element {g}")));
        }
        if (gamma_m[g] != NONE) != in_m[g] {
            return Err(Error::domain_with("γ_M must be defined exactly on M", format!("element {g}")));
        }
        // α and γ_M agree on L ∩ M
        if in_l[g] && in_m[g] && alpha[g] != gamma_m[g] {
            return Err(clause("α = γ_M on L ∩ M", format!("α and γ_M differ at {g}")));
        }
    }
    // α on L and γ_M on M must themselves be homomorphisms
    let lpart = restrict(lplus, delta)?;
    let a_small: Vec<u32> = lpart.map.iter().map(|&g| alpha[g as usize]).collect();
    let rep = verify_homomorphism(&lpart.locality, target, &a_small, budget);
    if let Some(w) = rep.first_witness() {
        return Err(Error::domain_with("α is not a homomorphism", w));
    }
    for &a in &m {
        for &b in &m {
            let c = lplus.pair(a, b).ok_or_else(|| Error::domain("M = N_{L⁺}(R) is not a group"))?;
            if target.pair(gamma_m[a as usize], gamma_m[b as usize]) != Some(gamma_m[c as usize]) {
                return Err(Error::domain_with("γ_M is not a homomorphism", format!("({a},{b})")));
            }
        }
    }
    // words of L⁺ map into the target domain
    let beta: Vec<u32> = (0..n).map(|g| if alpha[g] != NONE { alpha[g] } else { gamma_m[g] }).collect();
    let alphabet: Vec<u32> = (0..n as u32).filter(|&g| beta[g as usize] != NONE).collect();
    check_word_images(lplus, &alphabet, &beta, target, budget)?;
    // x_P for P ∈ R^F, taken in L, with x_R = 1
    let mut x_of = vec![NONE; lat.len()];
    for &p in &class {
        let x = if p == r {
            0
        } else {
            (0..n as u32)
                .find(|&x| {
                    in_l[x as usize]
                        && lat.le(lat.normalizer(p), lplus.s_dom(x))
                        && lplus.conj_sub(p, x) == Some(r)
                })
                .ok_or_else(|| Error::internal(format!("no x_P in L for P = {:?}", lat.bits(p))))?
        };
        x_of[p] = x;
    }
    let formula = |f: u32, p: SubId| -> Result<u32> {
        let q = lplus.conj_sub(p, f).unwrap();
        let (xp, xq) = (x_of[p], x_of[q]);
        let g = lplus
            .product(&[lplus.inv(xp), f, xq])
            .ok_or_else(|| Error::internal("(x_P⁻¹, f, x_Q) ∉ D⁺"))?;
        if !in_m[g as usize] {
            return Err(Error::internal("Π⁺(x_P⁻¹, f, x_Q) ∉ M"));
        }
        target
            .product(&[alpha[xp as usize], gamma_m[g as usize], alpha[lplus.inv(xq) as usize]])
            .ok_or_else(|| Error::internal(format!("image word for {f} not in D̃")))
    };
    let mut gamma = vec![NONE; n];
    for g in 0..n as u32 {
        let contained: Vec<SubId> = class.iter().copied().filter(|&p| lat.le(p, lplus.s_dom(g))).collect();
        if in_l[g as usize] {
            gamma[g as usize] = alpha[g as usize];
            // (4) agrees with α whenever S_f contains a conjugate of R
            for &p in &contained {
                if formula(g, p)? != alpha[g as usize] {
                    return Err(Error::internal(format!("formula (4) disagrees with α at {g}")));
                }
            }
        } else {
            let p = *contained.first().ok_or_else(|| Error::internal("element of L⁺∖L without a conjugate of R"))?;
            gamma[g as usize] = formula(g, p)?;
        }
    }
    let rep = verify_homomorphism(lplus, target, &gamma, budget);
    if let Some(w) = rep.first_witness() {
        return Err(Error::internal(format!("extension is not a homomorphism: {w}")));
    }
    if m.iter().any(|&g| gamma[g as usize] != gamma_m[g as usize]) {
        return Err(Error::internal("extension does not restrict to γ_M"));
    }
    // uniqueness: L ∪ M generates L⁺
    let gen = generated_partial_subgroup(lplus, &Bits::from_indices(n, alphabet.iter().map(|&g| g as usize)));
    if gen.count() != n {
        return Err(Error::internal("L ∪ M does not generate L⁺"));
    }
    Ok(gamma)
}

/// Ṽ ≤ S̃ as a set of target elements, invariant under Im(α).
fn check_invariance(alpha: &[u32], v: &Bits, target: &Locality) -> Result<()> {
    for &y in alpha.iter().filter(|&&y| y != NONE) {
        for x in v.iter() {
            let xl = target.s_to_l(x as u32);
            let c = target.conjugate(xl, y);
            match c.and_then(|c| target.l_to_s(c)) {
                Some(z) if v.contains(z as usize) => {}
                _ => {
                    return Err(Error::domain_with(
                        "Ṽ is not invariant under Im(α)",
                        format!("x = {x}, y = {y}"),
                    ))
                }
            }
        }
    }
    Ok(())
}

/// The unique extension of α: L → L̃ to an expansion L′ of L, where L and
/// L′ are proper and every (Pα)Ṽ with P ∈ Δ′ is an object of L̃.
///
/// `alpha` is indexed by L′ and holds `NONE` outside L; `v_tilde` is a set
/// of S̃ indices.
pub fn extend_along_expansion(
    lprime: &Locality,
    delta: &[bool],
    alpha: &[u32],
    target: &Locality,
    v_tilde: SubId,
    budget: &VerifyBudget,
) -> Result<Vec<u32>> {
    let lat = lprime.lattice();
    let tlat = target.lattice();
    let n = lprime.size();
    let vbits = tlat.bits(v_tilde).clone();
    check_invariance(alpha, &vbits, target)?;
    // (*)
    for p in lat.ids().filter(|&p| lprime.in_delta(p)) {
        let mut set = Bits::new(target.s_order());
        for x in lat.bits(p).iter() {
            let a = alpha[lprime.s_to_l(x as u32) as usize];
            let s = (a != NONE).then(|| target.l_to_s(a)).flatten().ok_or_else(|| {
                Error::domain_with("α does not send S into S̃", format!("{x}"))
            })?;
            for y in vbits.iter() {
                set.insert(target.s_group().mul(s, y as u32) as usize);
            }
        }
        let ok = tlat.lookup(&set).is_some_and(|q| target.in_delta(q));
        if !ok {
            return Err(Error::domain_with("(Pα)Ṽ is not an object of L̃", format!("P = {:?}", lat.bits(p))));
        }
    }
    let st: Stratification = stratification(lprime)?;
    let f = FusionSystem::of_locality(lprime)?;
    let mut cur_delta = delta.to_vec();
    let mut cur = alpha.to_vec();
    loop {
        // objects with P⋆ already present change nothing
        loop {
            let next: Vec<SubId> = lat
                .ids()
                .filter(|&p| lprime.in_delta(p) && !cur_delta[p] && cur_delta[st.star(p)])
                .collect();
            if next.is_empty() {
                break;
            }
            for p in next {
                cur_delta[p] = true;
            }
        }
        let missing: Vec<SubId> = lat.ids().filter(|&p| lprime.in_delta(p) && !cur_delta[p]).collect();
        if missing.is_empty() {
            break;
        }
        let best = missing.iter().map(|&p| st.dim(p)).max().unwrap();
        let pick = *missing.iter().find(|&&p| st.dim(p) == best).unwrap();
        let r = fully_normalized_alternative(lprime, &st, pick).unwrap_or(pick);
        let mut dplus = cur_delta.clone();
        for u in f.conjugates(r) {
            dplus[u] = true;
        }
        let lplus = restrict(lprime, &dplus)?;
        let lp = &lplus.locality;
        let a_small: Vec<u32> = lplus.map.iter().map(|&g| cur[g as usize]).collect();
        let m = lp.normalizer_elements(r);
        let mut gm = vec![NONE; lp.size()];
        for &g in &m {
            if a_small[g as usize] == NONE {
                return Err(Error::internal("N_{L⁺}(R) is not inside L"));
            }
            gm[g as usize] = a_small[g as usize];
        }
        let gamma = extend_homomorphism(lp, &cur_delta, r, &a_small, &gm, target, budget)?;
        for (i, &g) in lplus.map.iter().enumerate() {
            cur[g as usize] = gamma[i];
        }
        cur_delta = dplus;
    }
    if let Some(g) = cur.iter().position(|&x| x == NONE) {
        return Err(Error::internal(format!("extension left element {g} unmapped")));
    }
    let rep = verify_homomorphism(lprime, target, &cur, budget);
    if let Some(w) = rep.first_witness() {
        return Err(Error::internal(format!("extension along the expansion is not a homomorphism: {w}")));
    }
    debug_assert_eq!(cur.len(), n);
    Ok(cur)
}
