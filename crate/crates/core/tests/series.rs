mod common;

use num_bigint::BigInt;
use overasym_core::circle::{certify, default_precision, zuckerman_partial};
use overasym_core::Error;
use rayon::prelude::*;

use common::table;

#[test]
fn engel_bound_holds_on_a_sample() {
    let t = table();
    let bad: Vec<(u64, u64)> = (1..=400u64)
        .into_par_iter()
        .flat_map_iter(|n| [1u64, 3, 5].into_iter().map(move |order| (n, order)))
        .filter(|&(n, order)| {
            let s = zuckerman_partial(n, order, default_precision(n)).unwrap();
            let exact = overasym_core::BigFloat::from_biguint(&t.values()[n as usize], s.precision_bits + 64);
            (&exact - &s.value).abs() > s.engel_bound
        })
        .collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn certification_is_sound_where_it_succeeds() {
    let t = table();
    let results: Vec<(u64, Result<BigInt, String>)> = (2160..=2400u64)
        .into_par_iter()
        .map(|n| {
            let r = certify(n, default_precision(n))
                .map(|c| BigInt::from(c.value))
                .map_err(|e| e.to_string());
            (n, r)
        })
        .collect();
    for (n, r) in results {
        let got = r.unwrap_or_else(|e| panic!("n = {n}: {e}"));
        assert_eq!(got, BigInt::from(t.values()[n as usize].clone()), "n = {n}");
    }
}

#[test]
fn certification_refuses_small_n() {
    match certify(2000, default_precision(2000)) {
        Err(Error::CertificationFailed { best_bound, .. }) => assert!(best_bound >= 0.5),
        other => panic!("unexpected {other:?}"),
    }
}
