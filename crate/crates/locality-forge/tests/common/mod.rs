#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use locality_forge::classify::{classify_subgroups, Classification};
use locality_forge::fusion::FusionSystem;
use locality_forge::group::{Caps, FiniteGroup};
use locality_forge::lattice::SubId;
use locality_forge::locality::{Locality, SylowContext};
use locality_forge::strat::{stratification, Stratification};
use locality_forge::NONE;

/// A group, its fusion system and the transporter locality on f_closure(F^cr).
pub struct Setup {
    pub ctx: SylowContext,
    pub full: Locality,
    pub f: FusionSystem,
    pub st: Stratification,
    pub cl: Classification,
    pub l0: Locality,
    pub st0: Stratification,
    pub cl0: Classification,
}

impl Setup {
    pub fn new(g: FiniteGroup, p: u32) -> Self {
        let ctx = SylowContext::new(Arc::new(g), p, &Caps::default()).unwrap();
        let full = ctx.group_locality().unwrap();
        let f = FusionSystem::of_locality(&full).unwrap();
        let st = stratification(&full).unwrap();
        let cl = classify_subgroups(&f, &st, p).unwrap();
        let l0 = ctx.transporter(&f.f_closure(&cl.centric_radical())).unwrap();
        let st0 = stratification(&l0).unwrap();
        let cl0 = classify_subgroups(&f, &st0, p).unwrap();
        Setup { ctx, full, f, st, cl, l0, st0, cl0 }
    }

    pub fn transporter(&self, delta: &[bool]) -> Locality {
        self.ctx.transporter(delta).unwrap()
    }

    /// Lattice ids with the given order that are (not) normal in S.
    pub fn subgroups(&self, order: usize) -> Vec<SubId> {
        self.ctx.lat.ids().filter(|&x| self.ctx.lat.order(x) == order).collect()
    }

    pub fn set(&self, ids: &[SubId]) -> Vec<bool> {
        let mut d = vec![false; self.ctx.lat.len()];
        for &x in ids {
            d[x] = true;
        }
        d
    }

    pub fn is_cyclic(&self, x: SubId) -> bool {
        let lat = &self.ctx.lat;
        let sg = lat.group();
        lat.bits(x).iter().any(|g| sg.elem_order(g as u32) == lat.order(x))
    }
}

/// A map of length `len` sending the carrier of `src` into that of `tgt`
/// through group elements; entries past `src` are `NONE`.
pub fn embed(src: &Locality, len: usize, tgt: &Locality) -> Vec<u32> {
    let es = &src.origin().expect("origin").elems;
    let et = &tgt.origin().expect("origin").elems;
    let mut pos = std::collections::HashMap::new();
    for (i, &g) in et.iter().enumerate() {
        pos.insert(g, i as u32);
    }
    (0..len).map(|i| es.get(i).and_then(|g| pos.get(g).copied()).unwrap_or(NONE)).collect()
}
