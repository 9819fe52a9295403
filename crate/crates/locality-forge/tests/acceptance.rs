//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use common::oracle::{check_agreement, describe, fixture};
use common::{embed, Setup};
use locality_forge::bits::Bits;
use locality_forge::classify::classify_subgroups;
use locality_forge::expansion::{check_expansion_hypothesis, expand, rigid_isomorphism, subcentric_closure, StepKind};
use locality_forge::extend::{extend_along_expansion, extend_homomorphism};
use locality_forge::fixtures;
use locality_forge::fusion::{fusion_preserving_violation, FusionSystem};
use locality_forge::local::restrict;
use locality_forge::locality::Locality;
use locality_forge::normal::{
    o_p_prime_residual, o_p_residual, quotient_expansion, residual_expansion_compatibility, verify_normal_correspondence,
    verify_quotient_fusion, NormalLattice, LATTICE_CAP,
};
use locality_forge::partial::{kernel, verify_homomorphism, PartialGroup, VerifyBudget};
use locality_forge::proper::check_proper;
use locality_forge::quotient::{quotient, theta_quotient};
use locality_forge::report::Report;
use locality_forge::saturation::{is_inductive, is_saturated};
use locality_forge::strat::stratification;
use locality_forge::verify::verify_locality_axioms;
use locality_forge::NONE;

const LIMIT_ROUND_TRIP: Duration = Duration::from_secs(10);
const LIMIT_UNIQUENESS: Duration = Duration::from_secs(30);
const LIMIT_CORRESPONDENCE: Duration = Duration::from_secs(60);
const LIMIT_STRESS: Duration = Duration::from_secs(600);
const FAULTS: u64 = 1000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(r: &Report) -> Result<(), String> {
    ensure(r.ok(), || format!("{}: {}", r.name, r.first_witness().unwrap_or("")))
}

fn within(t: Instant, limit: Duration) -> Result<String, String> {
    let el = t.elapsed();
    ensure(el < limit, || format!("took {el:.2?}, limit {limit:?}"))?;
    Ok(format!("{el:.2?}"))
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

/// Elements of `l` reached from `base` under inversion and defined products.
fn generated(l: &Locality, base: &[u32]) -> usize {
    let mut seen = vec![false; l.size()];
    let mut list: Vec<u32> = base.to_vec();
    for &g in base {
        seen[g as usize] = true;
    }
    let mut grew = true;
    while grew {
        grew = false;
        let cur = list.clone();
        for &a in &cur {
            let ai = l.inv(a);
            if !std::mem::replace(&mut seen[ai as usize], true) {
                list.push(ai);
                grew = true;
            }
            for &b in &cur {
                if let Some(c) = l.pair(a, b) {
                    if !std::mem::replace(&mut seen[c as usize], true) {
                        list.push(c);
                        grew = true;
                    }
                }
            }
        }
    }
    list.len()
}

fn c1_round_trip(s: &Setup) -> Outcome {
    let t = Instant::now();
    let objs: Vec<usize> = s.l0.delta_ids().iter().map(|&x| s.ctx.lat.order(x)).collect();
    ensure(objs == [4, 8], || format!("base object orders {objs:?}"))?;
    let ex = expand(&s.l0, &s.f, &s.st0, &s.cl0, &s.cl.centric()).map_err(e)?;
    let back = restrict(&ex.locality, s.l0.delta()).map_err(e)?;
    ensure(back.map.iter().enumerate().all(|(i, &g)| g == i as u32), || "restriction reorders the base".into())?;
    if let Some(d) = back.locality.structural_diff(&s.l0) {
        return Err(d);
    }
    Ok(format!("|L| = {}, |L⁺| = {}, {}", s.l0.size(), ex.locality.size(), within(t, LIMIT_ROUND_TRIP)?))
}

fn c2_uniqueness(s: &Setup) -> Outcome {
    let t = Instant::now();
    let tc = s.transporter(&s.cl.centric());
    let base = restrict(&tc, s.l0.delta()).map_err(e)?;
    let st = stratification(&base.locality).map_err(e)?;
    let cl = classify_subgroups(&s.f, &st, 2).map_err(e)?;
    let ex = expand(&base.locality, &s.f, &st, &cl, &s.cl.centric()).map_err(e)?;
    let n0 = base.locality.size();
    let alpha: Vec<u32> = (0..ex.locality.size()).map(|g| if g < n0 { base.map[g] } else { NONE }).collect();
    let beta = rigid_isomorphism(&ex.locality, &tc, &alpha).map_err(e)?;
    report(&verify_homomorphism(&ex.locality, &tc, &beta, &VerifyBudget::default()))?;
    // a homomorphism is fixed by its values on a generating set
    let reach = generated(&ex.locality, &(0..n0 as u32).collect::<Vec<_>>());
    ensure(reach == ex.locality.size(), || format!("base generates {reach} of {}", ex.locality.size()))?;
    Ok(format!("|L⁺| = {}, unique, {}", ex.locality.size(), within(t, LIMIT_UNIQUENESS)?))
}

fn c3_correspondence(s: &Setup) -> Outcome {
    let t = Instant::now();
    let ex = expand(&s.l0, &s.f, &s.st0, &s.cl0, &s.cl.centric()).map_err(e)?;
    let incl: Vec<u32> = (0..s.l0.size() as u32).collect();
    let corr = verify_normal_correspondence(&s.l0, &ex.locality, &incl, LATTICE_CAP).map_err(e)?;
    report(&corr.report)?;
    for (i, n) in corr.lower.members.iter().enumerate() {
        let a = NormalLattice::s_part(&s.l0, n);
        let b = NormalLattice::s_part(&ex.locality, &corr.upper.members[corr.lift[i]]);
        ensure(a == b, || format!("S ∩ N ≠ S ∩ N⁺ at member {i}"))?;
    }
    for (i, m) in corr.lower.members.iter().enumerate() {
        for (j, n) in corr.lower.members.iter().enumerate() {
            let up = corr.upper.members[corr.lift[i]].is_subset(&corr.upper.members[corr.lift[j]]);
            ensure(m.is_subset(n) == up, || format!("inclusion not preserved on ({i},{j})"))?;
        }
    }
    Ok(format!("|𝔑| = {}, {}", corr.lower.members.len(), within(t, LIMIT_CORRESPONDENCE)?))
}

fn c4_saturation(fix: &[(&str, &Setup)], d8: &Setup, gl23: &Setup) -> Outcome {
    let mut proper: Vec<(String, Locality, FusionSystem, u32)> = Vec::new();
    for (name, s) in fix {
        proper.push((name.to_string(), s.l0.clone(), s.f.clone(), s.ctx.p));
    }
    let all = vec![true; d8.ctx.lat.len()];
    let l2 = d8.transporter(&all);
    proper.push(("D8, all subgroups".into(), l2.clone(), FusionSystem::of_locality(&l2).map_err(e)?, 2));
    let tq = theta_quotient(&gl23.l0, &gl23.f, &gl23.cl0).map_err(e)?;
    let lb = tq.quotient.locality;
    proper.push(("GL(2,3)/Θ".into(), lb.clone(), FusionSystem::of_locality(&lb).map_err(e)?, 3));
    let mut classes = 0;
    for (name, l, f, p) in &proper {
        let st = stratification(l).map_err(e)?;
        let cl = classify_subgroups(f, &st, *p).map_err(e)?;
        report(&check_proper(l, &cl).map_err(e)?).map_err(|m| format!("{name}: {m}"))?;
        report(&is_saturated(f, *p).map_err(e)?).map_err(|m| format!("{name}: {m}"))?;
        ensure(is_inductive(f), || format!("{name}: not inductive"))?;
        classes += f.classes().len();
    }
    Ok(format!("{} localities, {classes} classes, 0 failures", proper.len()))
}

fn c5_chain(fix: &[(&str, &Setup)], d8: &Setup, gl23: &Setup) -> Outcome {
    let subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(&x, &y)| !x || y);
    for (name, s) in [fix[0], ("D8", d8), ("GL(2,3)", gl23)] {
        let (cr, c, q, sc) = (s.cl.centric_radical(), s.cl.centric(), s.cl.quasicentric(), s.cl.subcentric());
        ensure(subset(&cr, &c) && subset(&c, &q) && subset(&q, &sc), || format!("{name}: chain fails"))?;
        ensure(s.f.f_closed_violation(&sc).is_none(), || format!("{name}: F^s not F-closed"))?;
    }
    let fx = fixture(fixtures::sym4().map_err(e)?, 2);
    let run = std::panic::catch_unwind(|| check_agreement(&fx));
    ensure(run.is_ok(), || "library flags disagree with the oracle".into())?;
    let cr = describe(&fx, |f| f.radical);
    let c = describe(&fx, |f| f.centric);
    ensure(cr == [(4, true, false), (8, true, false)], || format!("F^cr classes {cr:?}"))?;
    // V4 and E are both normal four-groups; Z4 is cyclic
    ensure(c == [(4, true, false), (4, true, false), (4, true, true), (8, true, false)], || format!("F^c classes {c:?}"))?;
    Ok(format!("chains hold on 3 fixtures; oracle agrees on {} subgroups of S", fx.oracle.subs.len()))
}

fn c6_theta(gl23: &Setup) -> Outcome {
    let objs: Vec<usize> = gl23.l0.delta_ids().iter().map(|&x| gl23.ctx.lat.order(x)).collect();
    ensure(objs == [3], || format!("Δ object orders {objs:?}"))?;
    let tq = theta_quotient(&gl23.l0, &gl23.f, &gl23.cl0).map_err(e)?;
    let lb = &tq.quotient.locality;
    ensure(tq.theta.count() == 2, || format!("|Θ| = {}", tq.theta.count()))?;
    ensure(lb.size() == 6, || format!("|L̄| = {}", lb.size()))?;
    report(&check_proper(lb, &tq.classification).map_err(e)?)?;
    report(&verify_locality_axioms(lb, &VerifyBudget::default()))?;
    let fb = FusionSystem::of_locality(lb).map_err(e)?;
    let rho = &tq.quotient.s_rho;
    let mut back = vec![0u32; rho.len()];
    for (x, &y) in rho.iter().enumerate() {
        back[y as usize] = x as u32;
    }
    if let Some(w) = fusion_preserving_violation(rho, &gl23.f, &fb).or_else(|| fusion_preserving_violation(&back, &fb, &gl23.f)) {
        return Err(w);
    }
    let count = |f: &FusionSystem| f.all_homs().iter().map(Vec::len).sum::<usize>();
    ensure(count(&gl23.f) == count(&fb), || "hom counts differ".into())?;
    Ok(format!("|Θ| = 2, |L̄| = 6, {} morphisms agree", count(&fb)))
}

fn c7_residuals(s: &Setup) -> Outcome {
    let ex = expand(&s.l0, &s.f, &s.st0, &s.cl0, &s.cl.centric()).map_err(e)?;
    let incl: Vec<u32> = (0..s.l0.size() as u32).collect();
    let corr = verify_normal_correspondence(&s.l0, &ex.locality, &incl, LATTICE_CAP).map_err(e)?;
    let l = &s.l0;
    for (i, n) in corr.lower.members.iter().enumerate() {
        let t: Vec<u32> = NormalLattice::s_part(l, n).iter().map(|&x| l.s_to_l(x)).collect();
        let tb = Bits::from_indices(l.size(), t.iter().map(|&x| x as usize));
        let op = o_p_residual(l, &corr.lower, n).map_err(e)?;
        let kt = Bits::from_indices(l.size(), op.iter().flat_map(|k| t.iter().filter_map(move |&x| l.pair(k as u32, x))).map(|x| x as usize));
        ensure(kt == *n, || format!("O^p(N)·T ≠ N at member {i}"))?;
        let opp = o_p_prime_residual(l, &corr.lower, n).map_err(e)?;
        ensure(tb.is_subset(&opp) && opp.is_subset(n), || format!("T ≤ O^p'(N) ≤ N fails at member {i}"))?;
    }
    report(&residual_expansion_compatibility(l, &ex.locality, &incl, &corr).map_err(e)?)?;
    Ok(format!("{} members", corr.lower.members.len()))
}

fn c8_square(s: &Setup) -> Outcome {
    let lat = NormalLattice::of(&s.l0, LATTICE_CAP).map_err(e)?;
    let n = lat.members.iter().find(|m| m.count() == 4).ok_or("no normal member of size 4")?;
    let sq = quotient_expansion(&s.l0, &s.f, &s.st0, &s.cl0, n, &s.cl.subcentric(), LATTICE_CAP).map_err(e)?;
    report(&sq.report)?;
    ensure(kernel(&sq.upper.locality, &sq.upper.rho) == sq.n_plus, || "Ker ρ⁺ ≠ N⁺".into())?;
    report(&verify_homomorphism(&sq.lplus, &sq.upper.locality, &sq.upper.rho, &VerifyBudget::default()))?;
    report(&verify_quotient_fusion(&s.l0, &s.f, &s.cl0, n).map_err(e)?)?;
    Ok(format!("N = V4, |L/N| = {}, |L⁺/N⁺| = {}", sq.lower.locality.size(), sq.upper.locality.size()))
}

fn c9_extension(s: &Setup, a6: &Setup) -> Outcome {
    let budget = VerifyBudget::default();
    // Sym(4): L = T_{F^c} on {Z4, E, S} is the group S, L⁺ = T_{F^c}, R = V4
    let lplus = s.transporter(&s.cl.centric());
    let v4 = s.l0.delta_ids()[0];
    let lat = &s.ctx.lat;
    let delta: Vec<bool> = lat.ids().map(|x| s.cl.centric()[x] && x != v4).collect();
    let l = restrict(&lplus, &delta).map_err(e)?;
    let mut alpha = vec![NONE; lplus.size()];
    for &g in &l.map {
        alpha[g as usize] = g;
    }
    let id: Vec<u32> = (0..lplus.size() as u32).collect();
    let got = extend_homomorphism(&lplus, &delta, v4, &alpha, &id, &lplus, &budget).map_err(e)?;
    ensure(got == id, || "inclusion does not extend to the identity".into())?;
    let nv = Bits::from_indices(lplus.size(), lat.bits(v4).iter().map(|x| lplus.s_to_l(x as u32) as usize));
    let q = quotient(&lplus, &nv).map_err(e)?;
    let mut a = vec![NONE; lplus.size()];
    for &g in &l.map {
        a[g as usize] = q.rho[g as usize];
    }
    let got = extend_homomorphism(&lplus, &delta, v4, &a, &q.rho, &q.locality, &budget).map_err(e)?;
    ensure(got == q.rho, || "ρ does not extend to ρ⁺ on Sym(4)".into())?;
    // ρ across the expansion f_closure(F^cr) → F^c
    let nl = NormalLattice::of(&s.l0, LATTICE_CAP).map_err(e)?;
    let sq = quotient_expansion(&s.l0, &s.f, &s.st0, &s.cl0, &nl.members[1], &s.cl.centric(), LATTICE_CAP).map_err(e)?;
    let alpha: Vec<u32> = (0..sq.lplus.size())
        .map(|g| if g < s.l0.size() { sq.iota[sq.lower.rho[g] as usize] } else { NONE })
        .collect();
    let got = extend_along_expansion(&sq.lplus, s.l0.delta(), &alpha, &sq.upper.locality, 0, &budget).map_err(e)?;
    ensure(got == sq.upper.rho, || "ρ across the expansion ≠ ρ⁺".into())?;
    // A6: a substantive elementary step, inclusion into T_{F^s}
    let ex = subcentric_closure(&a6.l0, &a6.f, &a6.st0, &a6.cl0).map_err(e)?;
    let step = &ex.steps[0];
    let lp = &step.locality;
    let ts = a6.transporter(&a6.cl.subcentric());
    let alpha = embed(&a6.l0, lp.size(), &ts);
    let rig = rigid_isomorphism(lp, &ts, &alpha).map_err(e)?;
    let mut gm = vec![NONE; lp.size()];
    for g in lp.normalizer_elements(step.r) {
        gm[g as usize] = alpha[g as usize];
    }
    let got = extend_homomorphism(lp, step.base.delta(), step.r, &alpha, &gm, &ts, &budget).map_err(e)?;
    ensure(got == rig, || "A6: extension ≠ pushout inclusion".into())?;
    let alpha = embed(&a6.l0, ex.locality.size(), &ts);
    let got = extend_along_expansion(&ex.locality, a6.l0.delta(), &alpha, &ts, 0, &budget).map_err(e)?;
    ensure(got == rig, || "A6: extension along the expansion ≠ inclusion".into())?;
    Ok(format!("Sym(4) (R = V4) and A6 (|L⁺| = {})", lp.size()))
}

/// A seeded fault: a perturbed product entry or a Δ flag flip that breaks the data.
fn inject(s: &Setup, base: &Locality, seed: u64) -> (Locality, &'static str) {
    let mut rng = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    let mut next = |m: u32| {
        rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((rng >> 33) % m as u64) as u32
    };
    let n = base.size() as u32;
    loop {
        let mut l = base.clone();
        if seed % 2 == 0 {
            let (a, b) = (next(n), next(n));
            let new = match base.pair(a, b) {
                None => next(n),
                Some(old) => (old + 1 + next(n - 1)) % n,
            };
            l.set_raw_pair(a, b, Some(new));
            return (l, "product");
        }
        let x = next(base.lattice().len() as u32) as usize;
        let mut d = base.delta().to_vec();
        d[x] = !d[x];
        // flips leaving Δ F-closed without touching any S_g or S_w give a valid locality
        let touched = (0..n).any(|g| base.s_dom(g) == x)
            || (0..n).any(|a| (0..n).any(|b| base.s_w(&[a, b]) == Some(x)));
        if touched || s.f.f_closed_violation(&d).is_some() {
            l.set_delta_flag(x, d[x]);
            return (l, "delta");
        }
    }
}

fn c10_fuzz(s: &Setup) -> Outcome {
    let base = s.transporter(&s.cl.centric());
    let budget = VerifyBudget { exhaustive_words: 20_000, samples: 500, seed: 7 };
    report(&verify_locality_axioms(&base, &budget))?;
    let mut kinds = [0usize; 2];
    for seed in 0..FAULTS {
        let (l, kind) = inject(s, &base, seed);
        let rep = verify_locality_axioms(&l, &budget);
        ensure(!rep.ok() && rep.first_witness().is_some_and(|w| !w.is_empty()), || {
            format!("{kind} fault at seed {seed} not detected")
        })?;
        kinds[(kind == "delta") as usize] += 1;
    }
    Ok(format!("{FAULTS} detected ({} product, {} Δ)", kinds[0], kinds[1]))
}

fn c11_stress() -> Outcome {
    let t = Instant::now();
    let a6 = Setup::new(fixtures::alt6().map_err(e)?, 2);
    let ex = subcentric_closure(&a6.l0, &a6.f, &a6.st0, &a6.cl0).map_err(e)?;
    let kinds: Vec<StepKind> = ex.trace.iter().map(|x| x.kind).collect();
    ensure(kinds.contains(&StepKind::Elementary), || format!("trace {kinds:?}"))?;
    let step = &ex.steps[0];
    report(&check_expansion_hypothesis(&step.base, &a6.f, &a6.st0, step.r))?;
    let budget = VerifyBudget::default();
    report(&verify_locality_axioms(&ex.locality, &budget))?;
    let back = restrict(&ex.locality, a6.l0.delta()).map_err(e)?;
    ensure(back.locality.structural_diff(&a6.l0).is_none(), || "restriction is not the base".into())?;
    let ts = a6.transporter(&a6.cl.subcentric());
    rigid_isomorphism(&ex.locality, &ts, &embed(&a6.l0, ex.locality.size(), &ts)).map_err(e)?;
    let fp = FusionSystem::of_locality(&ex.locality).map_err(e)?;
    let id: Vec<u32> = (0..a6.ctx.lat.group().order() as u32).collect();
    ensure(fusion_preserving_violation(&id, &fp, &a6.f).is_none() && fusion_preserving_violation(&id, &a6.f, &fp).is_none(), || {
        "F_S(L⁺) ≠ F".into()
    })?;
    let st = stratification(&ex.locality).map_err(e)?;
    let cl = classify_subgroups(&fp, &st, 2).map_err(e)?;
    report(&check_proper(&ex.locality, &cl).map_err(e)?)?;
    report(&is_saturated(&a6.f, 2).map_err(e)?)?;
    Ok(format!("|L| = {} → |L^s| = {}, {}", a6.l0.size(), ex.locality.size(), within(t, LIMIT_STRESS)?))
}

fn main() {
    let sym4 = Setup::new(fixtures::sym4().unwrap(), 2);
    let d8 = Setup::new(fixtures::d8().unwrap(), 2);
    let gl23 = Setup::new(fixtures::gl23().unwrap(), 3);
    let alt6 = Setup::new(fixtures::alt6().unwrap(), 2);
    let proper = [("Sym(4)", &sym4), ("D8", &d8), ("Alt(6)", &alt6)];
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("expansion round trip", Box::new(|| c1_round_trip(&sym4))),
        ("uniqueness against T_{F^c}", Box::new(|| c2_uniqueness(&sym4))),
        ("normal subgroup correspondence", Box::new(|| c3_correspondence(&sym4))),
        ("saturation of proper fixtures", Box::new(|| c4_saturation(&proper, &d8, &gl23))),
        ("classification chain and oracle", Box::new(|| c5_chain(&proper, &d8, &gl23))),
        ("Θ-quotient of GL(2,3)", Box::new(|| c6_theta(&gl23))),
        ("residuals", Box::new(|| c7_residuals(&sym4))),
        ("quotient square", Box::new(|| c8_square(&sym4))),
        ("homomorphism extension", Box::new(|| c9_extension(&sym4, &alt6))),
        ("axiom fuzzing", Box::new(|| c10_fuzz(&sym4))),
        ("Alt(6) stress", Box::new(c11_stress)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match out {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{:.2?}]", i + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{:.2?}]", i + 1, t.elapsed());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
