//! The standard test groups.

use std::sync::Arc;

use crate::error::Result;
use crate::group::{perm_from_cycles, Caps, FiniteGroup};

/// Sym(4) on 4 points generated by (1 2 3 4) and (1 2).
pub fn sym4() -> Result<FiniteGroup> {
    FiniteGroup::from_perms(
        4,
        &[perm_from_cycles(4, &[&[1, 2, 3, 4]]), perm_from_cycles(4, &[&[1, 2]])],
        &Caps::default(),
    )
}

/// The dihedral group ⟨(1 2 3 4), (1 3)⟩ of order 8.
pub fn d8() -> Result<FiniteGroup> {
    FiniteGroup::from_perms(
        4,
        &[perm_from_cycles(4, &[&[1, 2, 3, 4]]), perm_from_cycles(4, &[&[1, 3]])],
        &Caps::default(),
    )
}

/// GL(2,3) acting on the 8 nonzero vectors of F_3², row vectors on the right.
pub fn gl23() -> Result<FiniteGroup> {
    let vecs: Vec<(u32, u32)> = (0..9).filter(|&i| i != 0).map(|i| (i / 3, i % 3)).collect();
    let idx = |a: u32, b: u32| (3 * a + b - 1) as u32;
    let mat = |m: [[u32; 2]; 2]| -> Vec<u32> {
        vecs.iter()
            .map(|&(a, b)| {
                let x = (a * m[0][0] + b * m[1][0]) % 3;
                let y = (a * m[0][1] + b * m[1][1]) % 3;
                idx(x, y)
            })
            .collect()
    };
    FiniteGroup::from_perms(
        8,
        &[mat([[1, 1], [0, 1]]), mat([[0, 1], [1, 0]]), mat([[2, 0], [0, 1]])],
        &Caps::default(),
    )
}

/// Alt(6) generated by (1 2 3) and (2 3 4 5 6).
pub fn alt6() -> Result<FiniteGroup> {
    FiniteGroup::from_perms(
        6,
        &[perm_from_cycles(6, &[&[1, 2, 3]]), perm_from_cycles(6, &[&[2, 3, 4, 5, 6]])],
        &Caps::default(),
    )
}

pub fn shared(g: FiniteGroup) -> Arc<FiniteGroup> {
    Arc::new(g)
}
