//! Text record formats: perm-group.v1, locality.v1 and the report envelopes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{perm_from_one_based, Caps, FiniteGroup};
use crate::lattice::SubLattice;
use crate::locality::{Locality, LocalityParts, Origin};
use crate::partial::PartialGroup;
use crate::NONE;

pub const PERM_GROUP_FORMAT: &str = "perm-group.v1";
pub const LOCALITY_FORMAT: &str = "locality.v1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermGroupRecord {
    pub format: String,
    pub points: usize,
    /// One-line image arrays, 1-based.
    pub generators: Vec<Vec<u32>>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
}

fn check_format(found: &str, want: &str) -> Result<()> {
    if found != want {
        return Err(Error::Parse(format!("expected format `{want}`, found `{found}`")));
    }
    Ok(())
}

impl PermGroupRecord {
    pub fn of_group(g: &FiniteGroup) -> Result<Self> {
        let mut generators = Vec::new();
        for &x in g.generators() {
            let p = g.perm(x).ok_or_else(|| Error::domain("group has no permutation representation"))?;
            generators.push(p.iter().map(|&i| i + 1).collect());
        }
        Ok(PermGroupRecord { format: PERM_GROUP_FORMAT.into(), points: g.points(), generators })
    }

    pub fn build(&self, caps: &Caps) -> Result<FiniteGroup> {
        check_format(&self.format, PERM_GROUP_FORMAT)?;
        if self.points == 0 {
            return Err(Error::Parse("a permutation group needs at least one point".into()));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| perm_from_one_based(self.points, g))
            .collect::<Result<Vec<_>>>()?;
        for g in &gens {
            let mut seen = vec![false; self.points];
            for &i in g {
                if std::mem::replace(&mut seen[i as usize], true) {
                    return Err(Error::Parse(format!("generator {g:?} repeats image {}", i + 1)));
                }
            }
        }
        FiniteGroup::from_perms(self.points, &gens, caps)
    }
}

pub fn parse_perm_group(text: &str, caps: &Caps) -> Result<FiniteGroup> {
    let rec: PermGroupRecord = serde_json::from_str(text).map_err(parse_err)?;
    rec.build(caps)
}

/// A locality as a self-contained record. Subgroups of S are member lists of
/// S indices; `group_ref` and the index lists into it are present when the
/// locality sits inside a permutation group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalityRecord {
    pub format: String,
    pub group_ref: Option<PermGroupRecord>,
    pub p: u32,
    /// Group index of each S element.
    pub s_members: Option<Vec<u32>>,
    pub s_table: Vec<Vec<u32>>,
    pub s_to_l: Vec<u32>,
    #[serde(rename = "Delta")]
    pub delta: Vec<Vec<u32>>,
    /// Group index of each carrier element.
    pub carrier: Option<Vec<u32>>,
    pub s_domain: Vec<Vec<u32>>,
    /// Images of the members of `s_domain` under conjugation.
    pub conj: Vec<Vec<u32>>,
    pub inverse: Vec<u32>,
    pub product: Vec<Vec<Option<u32>>>,
}

impl LocalityRecord {
    pub fn of_locality(l: &Locality) -> Result<Self> {
        let lat = l.lattice();
        let sg = l.s_group();
        let ns = l.s_order() as u32;
        let n = l.size() as u32;
        let s_table = (0..ns).map(|a| (0..ns).map(|b| sg.mul(a, b)).collect()).collect();
        let delta = l.delta_ids().into_iter().map(|d| lat.bits(d).to_vec()).collect();
        let s_domain: Vec<Vec<u32>> = (0..n).map(|g| lat.bits(l.s_dom(g)).to_vec()).collect();
        let conj = (0..n)
            .map(|g| s_domain[g as usize].iter().map(|&x| l.conj_map(g)[x as usize]).collect())
            .collect();
        let product = (0..n).map(|a| (0..n).map(|b| l.pair(a, b)).collect()).collect();
        let (group_ref, s_members, carrier) = match l.origin() {
            Some(o) => (
                Some(PermGroupRecord::of_group(&o.group)?),
                Some(o.s_in_g.clone()),
                Some(o.elems.clone()),
            ),
            None => (None, None, None),
        };
        Ok(LocalityRecord {
            format: LOCALITY_FORMAT.into(),
            group_ref,
            p: l.p(),
            s_members,
            s_table,
            s_to_l: (0..ns).map(|x| l.s_to_l(x)).collect(),
            delta,
            carrier,
            s_domain,
            conj,
            inverse: (0..n).map(|g| l.inv(g)).collect(),
            product,
        })
    }

    /// Rebuilds the tables. Only shapes are validated: a record with a broken
    /// product table parses, and the axiom checker reports the fault.
    pub fn build(&self, caps: &Caps) -> Result<Locality> {
        check_format(&self.format, LOCALITY_FORMAT)?;
        let ns = self.s_table.len();
        if ns == 0 || self.s_table.iter().any(|r| r.len() != ns) {
            return Err(Error::Parse("s_table must be a nonempty square table".into()));
        }
        let sg = FiniteGroup::from_table(ns, self.s_table.concat())
            .map_err(|e| Error::Parse(format!("s_table: {e}")))?;
        let lat = Arc::new(SubLattice::new(sg, caps)?);
        let member_id = |m: &[u32], what: &str| {
            if m.iter().any(|&x| x as usize >= ns) {
                return Err(Error::Parse(format!("{what}: S index out of range in {m:?}")));
            }
            let b = Bits::from_indices(ns, m.iter().map(|&x| x as usize));
            if b.count() != m.len() {
                return Err(Error::Parse(format!("{what}: repeated member in {m:?}")));
            }
            lat.lookup(&b).ok_or_else(|| Error::Parse(format!("{what}: {m:?} is not a subgroup of S")))
        };
        let mut delta = vec![false; lat.len()];
        for m in &self.delta {
            delta[member_id(m, "Delta")?] = true;
        }
        let n = self.inverse.len();
        if self.s_domain.len() != n || self.conj.len() != n || self.product.len() != n {
            return Err(Error::Parse("carrier tables have inconsistent lengths".into()));
        }
        let mut s_dom = Vec::with_capacity(n);
        let mut conj = Vec::with_capacity(n);
        for (g, (dom, img)) in self.s_domain.iter().zip(&self.conj).enumerate() {
            s_dom.push(member_id(dom, "s_domain")?);
            if img.len() != dom.len() {
                return Err(Error::Parse(format!("conj row {g} does not match s_domain")));
            }
            let mut map = vec![NONE; ns];
            for (&x, &y) in dom.iter().zip(img) {
                map[x as usize] = y;
            }
            conj.push(map);
        }
        let mut prod = Vec::with_capacity(n * n);
        for (a, row) in self.product.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!("product row {a} has {} entries, expected {n}", row.len())));
            }
            prod.extend(row.iter().map(|c| c.unwrap_or(NONE)));
        }
        let origin = match (&self.group_ref, &self.s_members, &self.carrier) {
            (None, None, None) => None,
            (Some(gr), Some(sm), Some(car)) => {
                let group = Arc::new(gr.build(caps)?);
                let ord = group.order() as u32;
                if sm.len() != ns || car.len() != n || sm.iter().chain(car).any(|&x| x >= ord) {
                    return Err(Error::Parse("group_ref indices do not fit the group".into()));
                }
                Some(Origin { group, s_in_g: sm.clone(), elems: car.clone() })
            }
            _ => return Err(Error::Parse("group_ref, s_members and carrier must appear together".into())),
        };
        Locality::from_parts(LocalityParts {
            p: self.p,
            inv: self.inverse.clone(),
            prod,
            lat,
            s_to_l: self.s_to_l.clone(),
            s_dom,
            conj,
            delta,
            origin,
        })
        .map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn locality_to_json(l: &Locality) -> Result<String> {
    let rec = LocalityRecord::of_locality(l)?;
    let mut s = serde_json::to_string(&rec).map_err(|e| Error::internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_locality(text: &str, caps: &Caps) -> Result<Locality> {
    let rec: LocalityRecord = serde_json::from_str(text).map_err(parse_err)?;
    rec.build(caps)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Envelope fields carried by every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Meta {
    pub format: String,
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
}

impl Meta {
    pub fn new(format: &str, config_hash: &str, seed: u64) -> Self {
        Meta {
            format: format.into(),
            tool_version: TOOL_VERSION.into(),
            config_hash: config_hash.into(),
            seed,
        }
    }
}

/// A report body with the envelope flattened in front.
#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    #[serde(flatten)]
    pub meta: Meta,
    #[serde(flatten)]
    pub body: T,
}

pub fn report_to_json<T: Serialize>(meta: Meta, body: T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope { meta, body }).map_err(|e| Error::internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::locality::SylowContext;

    #[test]
    fn perm_group_record_round_trip() {
        let g = fixtures::sym4().unwrap();
        let rec = PermGroupRecord::of_group(&g).unwrap();
        assert_eq!(rec.generators, vec![vec![2, 3, 4, 1], vec![2, 1, 3, 4]]);
        let h = rec.build(&Caps::default()).unwrap();
        assert_eq!(h.order(), 24);
        for a in 0..24 {
            assert_eq!(g.perm(a), h.perm(a));
        }
    }

    #[test]
    fn malformed_group_records() {
        let caps = Caps::default();
        for bad in [
            "{",
            r#"{"format":"perm-group.v2","points":2,"generators":[]}"#,
            r#"{"format":"perm-group.v1","points":3,"generators":[[1,2]]}"#,
            r#"{"format":"perm-group.v1","points":3,"generators":[[1,1,2]]}"#,
            r#"{"format":"perm-group.v1","points":3,"generators":[[0,1,2]]}"#,
            r#"{"format":"perm-group.v1","points":3,"generators":[],"extra":1}"#,
        ] {
            assert!(matches!(parse_perm_group(bad, &caps), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn locality_round_trip_is_bit_exact() {
        let ctx = SylowContext::new(Arc::new(fixtures::sym4().unwrap()), 2, &Caps::default()).unwrap();
        let mut delta = vec![false; ctx.lat.len()];
        for id in ctx.lat.ids().filter(|&x| ctx.lat.order(x) >= 4) {
            delta[id] = true;
        }
        let d = crate::fusion::FusionSystem::of_locality(&ctx.group_locality().unwrap())
            .unwrap()
            .f_closure(&delta);
        let l = ctx.transporter(&d).unwrap();
        let text = locality_to_json(&l).unwrap();
        let back = parse_locality(&text, &Caps::default()).unwrap();
        assert!(l.structural_diff(&back).is_none());
        assert_eq!(locality_to_json(&back).unwrap(), text);
    }
}
