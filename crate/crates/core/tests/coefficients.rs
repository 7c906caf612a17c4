mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use overasym_core::asymptotic::{coeff_a, coeff_a_diff, stirling2, PiLaurent};

use common::{binomial, count_set_partitions, even_form, odd_form, stirling_table};

#[test]
fn even_and_odd_forms_agree() {
    for k in [1i64, -2, 3] {
        for t in 0..=6 {
            assert_eq!(coeff_a(k, 2 * t).unwrap(), even_form(k, t), "A_{k}({})", 2 * t);
            assert_eq!(coeff_a(k, 2 * t + 1).unwrap(), odd_form(k, t), "A_{k}({})", 2 * t + 1);
        }
    }
}

#[test]
fn exponents_follow_the_parity_of_t() {
    for k in [-4i64, 1, 5] {
        for t in 0..=9u32 {
            let a = coeff_a(k, t).unwrap();
            for (e, _) in a.terms() {
                assert_eq!((t as i32 - e).rem_euclid(2), 0);
                assert!(e <= t as i32 && e >= t as i32 - 2 * ((t as i32 + 1) / 2));
            }
        }
    }
}

#[test]
fn differences_vanish_below_r_and_lead_at_r() {
    for j in 1..=4u64 {
        for r in 1..=6u32 {
            for t in 0..r {
                assert!(coeff_a_diff(j, t, r).unwrap().is_zero(), "j={j} r={r} t={t}");
            }
            let lead = BigRational::new(BigInt::from(j).pow(r), BigInt::from(2).pow(r));
            assert_eq!(coeff_a_diff(j, r, r).unwrap(), PiLaurent::monomial(lead, r as i32));
        }
    }
}

#[test]
fn difference_is_alternating_sum_of_shifts() {
    for j in 1..=3u64 {
        for r in 0..=4u32 {
            for t in 0..=10u32 {
                let mut sum = PiLaurent::zero();
                for m in 0..=r as u64 {
                    let mut w = binomial(r as u64, m);
                    if m % 2 == 1 {
                        w = -w;
                    }
                    let a = coeff_a(-(((m + 1) * j) as i64), t).unwrap();
                    sum = &sum + &a.scale(&BigRational::from_integer(w));
                }
                assert_eq!(coeff_a_diff(j, t, r).unwrap(), sum, "j={j} r={r} t={t}");
            }
        }
    }
}

#[test]
fn stirling_matches_recurrence_and_enumeration() {
    let table = stirling_table(20);
    for n in 0..=20u32 {
        for m in 0..=20u32 {
            let s = BigInt::from(stirling2(n, m));
            assert_eq!(s, table[n as usize][m as usize], "{{{n} {m}}}");
            if m > n {
                assert_eq!(s, BigInt::from(0));
            }
        }
    }
    for n in 0..=7 {
        for m in 0..=7 {
            assert_eq!(
                BigInt::from(stirling2(n as u32, m as u32)),
                BigInt::from(count_set_partitions(n, m))
            );
        }
    }
    assert_eq!(count_set_partitions(3, 2), 3);
}
