//! Certification of the locality axioms with concrete witnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::p_part;
use crate::locality::Locality;
use crate::partial::{verify_partial_group_axioms, PartialGroup, VerifyBudget};
use crate::report::Report;
use crate::NONE;

fn check_s_data(l: &Locality, rep: &mut Report) {
    let sg = l.s_group();
    let ns = l.s_order() as u32;
    let top = l.lattice().top();
    rep.check(l.s_to_l(0) == 0, || "identity of S is not the identity of L".into());
    let mut seen = std::collections::HashSet::new();
    for x in 0..ns {
        let g = l.s_to_l(x);
        rep.check(seen.insert(g), || format!("S element {x} shares carrier index {g}"));
        rep.check(l.s_dom(g) == top, || format!("S_s ≠ S for s = {g} ∈ S"));
        for y in 0..ns {
            let c = l.conj_map(g)[y as usize];
            rep.check(c == sg.conj(y, x), || format!("c_s disagrees with S at s={g}, x={y}"));
            let h = l.s_to_l(y);
            let ok = l.pair(g, h) == Some(l.s_to_l(sg.mul(x, y)));
            rep.check(ok, || format!("product of S elements ({g},{h}) disagrees with S"));
        }
    }
}

fn check_conjugation(l: &Locality, rep: &mut Report) {
    let lat = l.lattice();
    let sg = l.s_group();
    let ns = l.s_order();
    for g in 0..l.size() as u32 {
        let dom = l.s_dom(g);
        let c = l.conj_map(g);
        let gi = l.inv(g);
        rep.check(l.inv(gi) == g, || format!("inversion not involutory at {g}"));
        for x in 0..ns {
            let inside = lat.bits(dom).contains(x);
            rep.check(inside == (c[x] != NONE), || format!("c_{g} domain disagrees with S_{g} at {x}"));
            // table consistency: x^g = Π(g⁻¹, x, g) lands in S exactly on S_g
            let xl = l.s_to_l(x as u32);
            let via_table = l
                .pair(gi, xl)
                .and_then(|a| l.pair(a, g))
                .and_then(|b| l.l_to_s(b));
            if inside {
                rep.check(via_table == Some(c[x]), || {
                    format!("x^g by products disagrees with c_g at g={g}, x={x}")
                });
            } else {
                rep.check(via_table.is_none(), || {
                    format!("{x}^{g} lands in S although {x} ∉ S_{g}")
                });
            }
        }
        let members = lat.bits(dom).to_vec();
        let mut img = std::collections::HashSet::new();
        for &x in &members {
            rep.check(img.insert(c[x as usize]), || format!("c_{g} is not injective"));
            for &y in &members {
                let lhs = c[sg.mul(x, y) as usize];
                let rhs = sg.mul(c[x as usize], c[y as usize]);
                rep.check(lhs == rhs, || format!("c_{g} is not a homomorphism at ({x},{y})"));
            }
        }
        rep.check(l.in_delta(dom), || format!("S_{g} is not an object"));
    }
}

fn check_objectivity(l: &Locality, budget: &VerifyBudget, rep: &mut Report) {
    let n = l.size() as u32;
    for a in 0..n {
        for b in 0..n {
            let in_d = l.in_domain(&[a, b]);
            let table = l.pair(a, b).is_some();
            rep.check(in_d == table, || {
                let sw = l.s_w(&[a, b]).map(|id| l.lattice().bits(id).to_vec());
                format!(
                    "(O1) fails at ({a},{b}): S_w = {sw:?} {} Δ but pair is {}",
                    if in_d { "∈" } else { "∉" },
                    if table { "defined" } else { "undefined" }
                )
            });
        }
    }
    let triple = |w: [u32; 3], rep: &mut Report| {
        if l.in_domain(&w) {
            let left = l.pair(w[0], w[1]).and_then(|x| l.pair(x, w[2]));
            let right = l.pair(w[1], w[2]).and_then(|x| l.pair(w[0], x));
            rep.check(left.is_some() && left == right, || {
                format!("word {w:?} ∈ D evaluates inconsistently: {left:?} vs {right:?}")
            });
        }
    };
    let cube = (n as u64).pow(3);
    if cube <= budget.exhaustive_words {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    triple([a, b, c], rep);
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x0b1);
        for _ in 0..budget.exhaustive_words {
            triple([rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)], rep);
        }
    }
}

fn check_delta(l: &Locality, rep: &mut Report) {
    let lat = l.lattice();
    let delta = l.delta();
    for p in lat.ids().filter(|&p| delta[p]) {
        for q in lat.above(p) {
            rep.check(delta[q], || {
                format!("(O2) overgroup {:?} of object {:?} is not an object", lat.bits(q), lat.bits(p))
            });
        }
    }
    for g in 0..l.size() as u32 {
        for p in lat.below(l.s_dom(g)).filter(|&p| delta[p]) {
            let q = l.conj_sub(p, g);
            rep.check(q.is_some_and(|q| delta[q]), || {
                format!("(O2) {:?}^{g} is not an object", lat.bits(p))
            });
        }
    }
}

fn check_sylow(l: &Locality, rep: &mut Report) {
    let top = l.lattice().top();
    let n_s = l.normalizer_elements(top).len();
    let p = l.p() as usize;
    rep.check(p_part(n_s, p) == l.s_order(), || {
        format!("S is not maximal: |N_L(S)| = {n_s}, |S| = {}", l.s_order())
    });
}

/// Objectivity, F-closure of Δ, consistency of S data, maximality of S and the
/// partial group axioms.
pub fn verify_locality_axioms(l: &Locality, budget: &VerifyBudget) -> Report {
    let mut rep = Report::new("locality axioms");
    check_s_data(l, &mut rep);
    check_conjugation(l, &mut rep);
    check_objectivity(l, budget, &mut rep);
    check_delta(l, &mut rep);
    check_sylow(l, &mut rep);
    rep.absorb(verify_partial_group_axioms(l, budget));
    rep
}
