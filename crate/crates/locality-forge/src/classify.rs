//! Classification of subgroups of S: centric, radical, quasicentric, subcentric
//! and the set P(F), with fully normalized and fully centralized flags.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::Result;
use crate::fusion::FusionSystem;
use crate::group::FiniteGroup;
use crate::lattice::{SubId, SubLattice};
use crate::report::Report;
use crate::strat::Stratification;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Flags {
    pub centric: bool,
    pub radical: bool,
    pub quasicentric: bool,
    pub subcentric: bool,
    pub in_p: bool,
}

#[derive(Debug, Clone)]
pub struct ClassInfo {
    pub members: Vec<SubId>,
    pub representative: SubId,
    /// The fully normalized conjugate used for the flags.
    pub witness: SubId,
    pub fully_normalized: Vec<SubId>,
    pub flags: Flags,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub classes: Vec<ClassInfo>,
    pub class_of: Vec<usize>,
    pub fully_normalized: Vec<bool>,
    pub fully_centralized: Vec<bool>,
}

fn set_of(perms: impl IntoIterator<Item = Vec<u32>>) -> HashSet<Vec<u32>> {
    perms.into_iter().collect()
}

/// Inn(Q), Aut_S(Q) and O_p(Aut_F(Q)) as permutation sets on the members of Q.
pub struct AutData {
    pub inn: HashSet<Vec<u32>>,
    pub aut_s: HashSet<Vec<u32>>,
    pub op_aut: HashSet<Vec<u32>>,
    pub aut_f: FiniteGroup,
    pub stored: usize,
}

pub fn aut_data(f: &FusionSystem, q: SubId, p: u32) -> Result<AutData> {
    let lat = f.lattice();
    let (aut_f, stored) = f.aut_group(q)?;
    let inn = set_of(lat.bits(q).iter().map(|s| f.perm_of(q, &f.conj_hom(q, s as u32))));
    let aut_s = set_of(
        lat.bits(lat.normalizer(q)).iter().map(|s| f.perm_of(q, &f.conj_hom(q, s as u32))),
    );
    let op = aut_f.o_p(p);
    let op_aut = set_of(op.0.iter().map(|i| aut_f.perm(i as u32).expect("perm group").to_vec()));
    Ok(AutData { inn, aut_s, op_aut, aut_f, stored })
}

fn dim_n(lat: &SubLattice, st: &Stratification, x: SubId) -> usize {
    st.dim(lat.normalizer(x))
}

fn dim_c(lat: &SubLattice, st: &Stratification, x: SubId) -> usize {
    st.dim(lat.join(lat.centralizer(x), x))
}

pub fn classify_subgroups(f: &FusionSystem, st: &Stratification, p: u32) -> Result<Classification> {
    let lat = f.lattice().clone();
    let classes = f.classes();
    let mut class_of = vec![usize::MAX; lat.len()];
    for (i, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = i;
        }
    }
    let mut fully_normalized = vec![false; lat.len()];
    let mut fully_centralized = vec![false; lat.len()];
    let centric: Vec<bool> = classes
        .iter()
        .map(|c| c.iter().all(|&x| lat.le(lat.centralizer(x), x)))
        .collect();
    let is_centric = |x: SubId| centric[class_of[x]];
    let mut out = Vec::new();
    for c in &classes {
        let bn = c.iter().map(|&x| dim_n(&lat, st, x)).max().unwrap_or(0);
        let bc = c.iter().map(|&x| dim_c(&lat, st, x)).max().unwrap_or(0);
        let fn_list: Vec<SubId> = c.iter().copied().filter(|&x| dim_n(&lat, st, x) == bn).collect();
        for &x in c {
            fully_normalized[x] = dim_n(&lat, st, x) == bn;
            fully_centralized[x] = dim_c(&lat, st, x) == bc;
        }
        let cen = is_centric(c[0]);
        let mut radical_w = None;
        let mut subcentric_w = None;
        let mut quasi_w = None;
        let mut p_w = None;
        for &q in &fn_list {
            let nq = f.normalizer_system(q);
            let op = nq.o_p();
            if op == q && radical_w.is_none() {
                radical_w = Some(q);
            }
            if is_centric(op) && subcentric_w.is_none() {
                subcentric_w = Some(q);
            }
            if quasi_w.is_none() {
                let cq = f.centralizer_system(q);
                let triv = FusionSystem::inner(lat.clone(), lat.centralizer(q))?;
                if cq == triv {
                    quasi_w = Some(q);
                }
            }
            if cen && p_w.is_none() {
                let a = aut_data(f, q, p)?;
                let meet: HashSet<Vec<u32>> = a.op_aut.intersection(&a.aut_s).cloned().collect();
                if meet == a.inn {
                    p_w = Some(q);
                }
            }
        }
        let witness = radical_w.or(subcentric_w).unwrap_or(fn_list[0]);
        out.push(ClassInfo {
            members: c.clone(),
            representative: c[0],
            witness,
            fully_normalized: fn_list,
            flags: Flags {
                centric: cen,
                radical: radical_w.is_some(),
                quasicentric: quasi_w.is_some(),
                subcentric: subcentric_w.is_some(),
                in_p: p_w.is_some(),
            },
        });
    }
    Ok(Classification { classes: out, class_of, fully_normalized, fully_centralized })
}

impl Classification {
    fn select(&self, pick: impl Fn(&Flags) -> bool) -> Vec<bool> {
        self.class_of.iter().map(|&c| c != usize::MAX && pick(&self.classes[c].flags)).collect()
    }
    pub fn centric(&self) -> Vec<bool> {
        self.select(|f| f.centric)
    }
    pub fn centric_radical(&self) -> Vec<bool> {
        self.select(|f| f.centric && f.radical)
    }
    pub fn quasicentric(&self) -> Vec<bool> {
        self.select(|f| f.quasicentric)
    }
    pub fn subcentric(&self) -> Vec<bool> {
        self.select(|f| f.subcentric)
    }
    pub fn p_set(&self) -> Vec<bool> {
        self.select(|f| f.in_p)
    }
    pub fn class(&self, x: SubId) -> &ClassInfo {
        &self.classes[self.class_of[x]]
    }
    /// Deterministic fully normalized representative of the class of x.
    pub fn witness(&self, x: SubId) -> SubId {
        self.class(x).fully_normalized[0]
    }
}

fn subset(a: &[bool], b: &[bool]) -> Option<usize> {
    (0..a.len()).find(|&i| a[i] && !b[i])
}

/// Relations that hold for proper localities: P(F) = F^cr, the 8.12 equivalence
/// on centric classes, and F^cr ⊆ F^c ⊆ F^q ⊆ F^s with F^s F-closed.
pub fn verify_proper_relations(f: &FusionSystem, st: &Stratification, cl: &Classification, p: u32) -> Result<Report> {
    let lat = f.lattice();
    let mut rep = Report::new("classification relations");
    let cr = cl.centric_radical();
    let c = cl.centric();
    let q = cl.quasicentric();
    let s = cl.subcentric();
    let pf = cl.p_set();
    rep.check(pf == cr, || format!("P(F) ≠ F^cr: P = {pf:?}, cr = {cr:?}"));
    for (name, a, b) in [("F^cr ⊆ F^c", &cr, &c), ("F^c ⊆ F^q", &c, &q), ("F^q ⊆ F^s", &q, &s)] {
        rep.check(subset(a, b).is_none(), || {
            format!("{name} fails at {:?}", subset(a, b).map(|i| lat.bits(i).to_vec()))
        });
    }
    rep.check(f.f_closed_violation(&s).is_none(), || "F^s is not F-closed".into());
    for x in lat.ids() {
        if s[st.star(x)] {
            rep.check(s[x], || format!("X⋆ ∈ F^s but X ∉ F^s for {:?}", lat.bits(x)));
        }
    }
    for info in &cl.classes {
        if info.flags.centric {
            let a = aut_data(f, info.representative, p)?;
            rep.check(info.flags.radical == (a.op_aut == a.inn), || {
                format!("radical test disagrees with Inn(P) = O_p(Aut_F(P)) at {:?}", lat.bits(info.representative))
            });
        }
    }
    Ok(rep)
}
