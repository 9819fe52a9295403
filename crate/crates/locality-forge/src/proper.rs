//! Proper localities: F^cr ⊆ Δ, characteristic-p object normalizers, and the
//! normalizer-increasing property of S.

use crate::classify::Classification;
use crate::error::Result;
use crate::group::Caps;
use crate::locality::Locality;
use crate::report::Report;

pub fn check_proper(l: &Locality, cl: &Classification) -> Result<Report> {
    let lat = l.lattice();
    let mut rep = Report::new("proper locality");
    let cr = cl.centric_radical();
    for x in lat.ids().filter(|&x| cr[x]) {
        rep.check(l.in_delta(x), || format!("(PL1) F^cr member {:?} is not an object", lat.bits(x)));
    }
    for p in l.delta_ids() {
        let (grp, _) = l.normalizer_group(p)?;
        rep.check(grp.is_characteristic_p(l.p()), || {
            format!("(PL2) N_L(P) is not of characteristic p for P = {:?}", lat.bits(p))
        });
    }
    let ni = l.s_group().has_normalizer_increasing_property(&Caps { order: usize::MAX, subgroups: usize::MAX })?;
    rep.check(ni, || "(PL3) S is not normalizer-increasing".into());
    Ok(rep)
}
