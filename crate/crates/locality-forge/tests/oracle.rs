mod common;

use std::collections::HashSet;

use common::oracle::{check_agreement, describe, fixture};
use locality_forge::fixtures;

#[test]
fn sym4_classification_matches_oracle() {
    let fx = fixture(fixtures::sym4().unwrap(), 2);
    check_agreement(&fx);
    assert_eq!(fx.class_count, 7);
    // F^cr: the normal four-group and S
    assert_eq!(describe(&fx, |f| f.radical), vec![(4, true, false), (8, true, false)]);
    // F^c: V4, the other four-group E, Z4 and S
    assert_eq!(
        describe(&fx, |f| f.centric),
        vec![(4, true, false), (4, true, false), (4, true, true), (8, true, false)]
    );
    let centric_classes: HashSet<usize> = fx.lib.iter().filter(|(f, _)| f.centric).map(|(_, c)| *c).collect();
    assert_eq!(centric_classes.len(), 4);
    let quasi: HashSet<usize> = fx.lib.iter().filter(|(f, _)| f.quasicentric).map(|(_, c)| *c).collect();
    assert_eq!(quasi.len(), 6);
}

#[test]
fn d8_classification_matches_oracle() {
    let fx = fixture(fixtures::d8().unwrap(), 2);
    check_agreement(&fx);
    assert_eq!(fx.class_count, 8);
    assert_eq!(describe(&fx, |f| f.radical), vec![(8, true, false)]);
    let centric: HashSet<usize> = fx.lib.iter().filter(|(f, _)| f.centric).map(|(_, c)| *c).collect();
    assert_eq!(centric.len(), 4);
}

#[test]
fn gl23_classification_matches_oracle() {
    let fx = fixture(fixtures::gl23().unwrap(), 3);
    check_agreement(&fx);
    assert_eq!(fx.class_count, 2);
    assert_eq!(describe(&fx, |f| f.radical), vec![(3, true, true)]);
}

#[test]
fn alt6_classification_matches_oracle() {
    let fx = fixture(fixtures::alt6().unwrap(), 2);
    check_agreement(&fx);
    assert_eq!(fx.class_count, 6);
    let cr: HashSet<usize> = fx.lib.iter().filter(|(f, _)| f.radical).map(|(_, c)| *c).collect();
    let c: HashSet<usize> = fx.lib.iter().filter(|(f, _)| f.centric).map(|(_, c)| *c).collect();
    assert_eq!((cr.len(), c.len()), (3, 4));
}
