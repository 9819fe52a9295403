//! Saturation: fully automized and receptive conjugates; inductivity.

use crate::bits::Bits;
use crate::classify::aut_data;
use crate::error::Result;
use crate::fusion::{FusionSystem, Hom};
use crate::group::p_part;
use crate::lattice::SubId;
use crate::report::Report;
use crate::NONE;

fn fully_automized(f: &FusionSystem, y: SubId, p: u32) -> Result<std::result::Result<(), String>> {
    let a = aut_data(f, y, p)?;
    if a.aut_f.order() != a.stored {
        return Ok(Err(format!(
            "Aut_F not closed: {} stored automorphisms generate {}",
            a.stored,
            a.aut_f.order()
        )));
    }
    let pp = p_part(a.aut_f.order(), p as usize);
    if a.aut_s.len() != pp {
        return Ok(Err(format!("|Aut_S| = {} but |Aut_F|_p = {pp}", a.aut_s.len())));
    }
    Ok(Ok(()))
}

fn receptive(f: &FusionSystem, y: SubId, p: u32) -> Result<std::result::Result<(), String>> {
    let lat = f.lattice();
    let g = lat.group();
    let a = aut_data(f, y, p)?;
    let ymem = lat.bits(y).to_vec();
    let ny = lat.normalizer(y);
    for &x in &f.conjugates(y) {
        let nx = lat.normalizer(x);
        for alpha in f.homs(x).iter().filter(|h| f.image(x, h) == y) {
            let mut ainv = vec![NONE; g.order()];
            for i in lat.bits(x).iter() {
                ainv[alpha[i] as usize] = i as u32;
            }
            let n_alpha = Bits::from_indices(
                g.order(),
                lat.bits(nx).iter().filter(|&s| {
                    let perm: Vec<u32> = ymem
                        .iter()
                        .map(|&t| {
                            let img = alpha[g.conj(ainv[t as usize], s as u32) as usize];
                            ymem.iter().position(|&m| m == img).expect("in Y") as u32
                        })
                        .collect();
                    a.aut_s.contains(&perm)
                }),
            );
            let Some(nid) = lat.lookup(&n_alpha) else {
                return Ok(Err("N_α is not a subgroup".into()));
            };
            let xb = lat.bits(x);
            let extends = f.homs(nid).iter().any(|e: &Hom| {
                xb.iter().all(|i| e[i] == alpha[i]) && lat.le(f.image(nid, e), ny)
            });
            if !extends {
                return Ok(Err(format!(
                    "α: {:?} → {:?} does not extend to N_α = {:?}",
                    xb,
                    lat.bits(y),
                    n_alpha
                )));
            }
        }
    }
    Ok(Ok(()))
}

/// Every F-class has a conjugate that is fully automized and receptive.
pub fn is_saturated(f: &FusionSystem, p: u32) -> Result<Report> {
    let lat = f.lattice().clone();
    let mut rep = Report::new("saturation");
    for class in f.classes() {
        let mut reasons = Vec::new();
        let mut found = false;
        for &y in &class {
            let fa = fully_automized(f, y, p)?;
            let ok = match fa {
                Ok(()) => match receptive(f, y, p)? {
                    Ok(()) => true,
                    Err(e) => {
                        reasons.push(e);
                        false
                    }
                },
                Err(e) => {
                    reasons.push(e);
                    false
                }
            };
            if ok {
                found = true;
                break;
            }
        }
        rep.check(found, || {
            format!(
                "class of {:?}: no fully automized receptive conjugate ({})",
                lat.bits(class[0]),
                reasons.first().cloned().unwrap_or_default()
            )
        });
    }
    Ok(rep)
}

/// For each X in the class of Y, some φ: N_S(X) → N_S(Y) with Xφ = Y.
pub fn is_normalizer_inductive(f: &FusionSystem, y: SubId) -> bool {
    let lat = f.lattice();
    f.conjugates(y).into_iter().all(|x| {
        let nx = lat.normalizer(x);
        f.homs(nx).iter().any(|h| lat.image(x, h) == Some(y))
    })
}

pub fn is_inductive(f: &FusionSystem) -> bool {
    f.classes().iter().all(|c| c.iter().any(|&y| is_normalizer_inductive(f, y)))
}
