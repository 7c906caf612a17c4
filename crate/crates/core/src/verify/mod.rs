//! Checks of each effective statement against exact values.
//!
//! Every record is evaluated at `p` and at `p + 32` bits. The difference
//! between the two runs, plus a few units in the last place, is added to
//! the side of the inequality that makes it harder to pass, so round-off
//! can never turn a failure into a pass.
//!
//! A violated bound is a finding: the record is marked failed and the
//! verdict is false. Only unmet hypotheses (thresholds, domains) are errors.

mod report;

pub use report::{read_csv_records, Record, Statement, VerificationReport, CSV_HEADER};

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::asymptotic::{
    coeff_a_diff, error_budget_diff, lemma_2_1_value, n_min_diff, threshold_n, threshold_n0,
    zeta_three_halves, DifferenceExpansion, ShiftExpansion,
};
use crate::bigfloat::{pi, BigFloat};
use crate::circle::{default_precision, PRECISION_FLOOR, SLACK_EXTRA_BITS};
use crate::error::{Error, Result};
use crate::exact::{shifted_difference, DifferenceSpec, OverpartitionTable};

/// Points dense from `from` for this many steps before the default
/// sampling turns geometric.
pub const DENSE_SPAN: u64 = 500;

/// Which `n` to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleRange {
    pub from: u64,
    pub to: u64,
    /// Fixed stride; `None` means every `n` up to `from + 500`, then a
    /// factor of 1.5 per step, always ending at `to`.
    pub stride: Option<u64>,
}

impl SampleRange {
    pub fn new(from: u64, to: u64, stride: Option<u64>) -> Result<Self> {
        if to < from {
            return Err(Error::Domain(format!("empty range {from}..={to}")));
        }
        if stride == Some(0) {
            return Err(Error::Domain("stride must be positive".into()));
        }
        Ok(SampleRange { from, to, stride })
    }

    /// `from..=from + span`, dense.
    pub fn span(from: u64, span: u64) -> Self {
        SampleRange {
            from,
            to: from + span,
            stride: Some(1),
        }
    }

    pub fn points(&self) -> Vec<u64> {
        if let Some(s) = self.stride {
            return (self.from..=self.to).step_by(s as usize).collect();
        }
        let dense_end = self.to.min(self.from.saturating_add(DENSE_SPAN));
        let mut out: Vec<u64> = (self.from..=dense_end).collect();
        let mut x = dense_end;
        while x < self.to {
            x = (x.saturating_mul(3).div_ceil(2)).min(self.to).max(x + 1);
            out.push(x);
        }
        out
    }
}

struct Check {
    approx: BigFloat,
    remainder: BigFloat,
    bound: BigFloat,
}

fn ulp(x: &BigFloat, prec: u32) -> BigFloat {
    if x.is_zero() {
        return BigFloat::zero(prec);
    }
    BigFloat::one(prec).ldexp(x.top_bit() - prec as i64 + 2)
}

/// Runs `eval` at `prec` and `prec + 32` and decides
/// `remainder + slack ≤ bound` (or `<` when `strict`).
fn dual_check(
    n: u64,
    exact: Option<BigInt>,
    prec: u32,
    strict: bool,
    eval: impl Fn(u32) -> Result<Check>,
) -> Result<Record> {
    let lo = eval(prec)?;
    let hi = eval(prec + SLACK_EXTRA_BITS)?;
    let slack = [
        (&lo.remainder - &hi.remainder).abs(),
        (&lo.bound - &hi.bound).abs(),
        ulp(&lo.remainder, prec),
        ulp(&lo.bound, prec),
    ]
    .iter()
    .fold(BigFloat::zero(prec), |acc, x| &acc + x);
    let lhs = &lo.remainder + &slack;
    let pass = if strict {
        lhs < lo.bound
    } else {
        lhs <= lo.bound
    };
    Ok(Record {
        n,
        exact,
        approx: lo.approx,
        remainder: lo.remainder,
        bound: lo.bound,
        pass,
    })
}

fn resolve_precision(prec: Option<u32>, n_max: u64) -> Result<u32> {
    match prec {
        Some(p) if p < PRECISION_FLOOR => Err(Error::Config(format!(
            "precision {p} is below the {PRECISION_FLOOR}-bit floor"
        ))),
        Some(p) => Ok(p),
        None => Ok(default_precision(n_max)),
    }
}

fn ensure_table(table: &OverpartitionTable, need: u64) -> Result<()> {
    if need > table.n_max() {
        return Err(Error::OutOfRange {
            index: need as i64,
            min: 0,
            max: table.n_max() as i64,
        });
    }
    Ok(())
}

fn params(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn exact_at(table: &OverpartitionTable, n: i64) -> Result<BigInt> {
    table.get(n).map(|v| BigInt::from(v.clone()))
}

fn collect(
    points: &[u64],
    f: impl Fn(u64) -> Result<Record> + Sync + Send,
) -> Result<Vec<Record>> {
    points.par_iter().map(|&n| f(n)).collect()
}

/// `|p̄(n + k) - main| ≤ bound` for the order-`N` expansion. Records hold
/// `exact = p̄(n + k)`, `approx = main`, `remainder = |exact - main|`.
pub fn verify_theorem_1_1(
    table: &OverpartitionTable,
    order: u32,
    k: i64,
    range: &SampleRange,
    prec: Option<u32>,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let prec = resolve_precision(prec, range.to)?;
    let lo = ShiftExpansion::new(k, order, prec)?;
    let hi = ShiftExpansion::new(k, order, prec + SLACK_EXTRA_BITS)?;
    if range.from < lo.n_min() {
        return Err(Error::BelowThreshold {
            statement: "thm_1_1",
            n: range.from,
            threshold: lo.n_min(),
        });
    }
    ensure_table(table, (range.to as i64 + k) as u64)?;
    let records = collect(&range.points(), |n| {
        let exact = exact_at(table, n as i64 + k)?;
        dual_check(n, Some(exact.clone()), prec, false, |p| {
            let e = if p == prec { lo.evaluate(n)? } else { hi.evaluate(n)? };
            let x = BigFloat::from_bigint(&exact, p);
            Ok(Check {
                remainder: (&x - &e.main).abs(),
                approx: e.main,
                bound: e.bound,
            })
        })
    })?;
    Ok(VerificationReport::new(
        Statement::Theorem11,
        params(&[("N", order as i64), ("k", k), ("bits", prec as i64)]),
        records,
        start.elapsed().as_millis() as u64,
    ))
}

/// `|Δ^r_j(p̄)(n - j) - main| ≤ bound`. Records as for
/// [`verify_theorem_1_1`] with `exact = Δ^r_j(p̄)(n - j)`.
pub fn verify_theorem_1_2(
    table: &OverpartitionTable,
    order: u32,
    r: u32,
    j: u64,
    range: &SampleRange,
    prec: Option<u32>,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let prec = resolve_precision(prec, range.to)?;
    let lo = DifferenceExpansion::new(j, r, order, prec)?;
    let hi = DifferenceExpansion::new(j, r, order, prec + SLACK_EXTRA_BITS)?;
    if range.from < lo.n_min() {
        return Err(Error::BelowThreshold {
            statement: "thm_1_2",
            n: range.from,
            threshold: lo.n_min(),
        });
    }
    ensure_table(table, range.to - j)?;
    let spec = DifferenceSpec::new(j, r)?;
    let records = collect(&range.points(), |n| {
        let exact = shifted_difference(table, spec, n - j)?;
        dual_check(n, Some(exact.clone()), prec, false, |p| {
            let e = if p == prec { lo.evaluate(n)? } else { hi.evaluate(n)? };
            let x = BigFloat::from_bigint(&exact, p);
            Ok(Check {
                remainder: (&x - &e.main).abs(),
                approx: e.main,
                bound: e.bound,
            })
        })
    })?;
    Ok(VerificationReport::new(
        Statement::Theorem12,
        params(&[
            ("N", order as i64),
            ("r", r as i64),
            ("j", j as i64),
            ("bits", prec as i64),
        ]),
        records,
        start.elapsed().as_millis() as u64,
    ))
}

/// Number of sample points beyond `x = N(m)` in [`verify_lemma_2_1`].
pub const LEMMA_2_1_SAMPLES: u64 = 50;

/// `10 x^m e^{-x/2} < 1` at `x_i = N(m)(1 + i/20)` for `i = 0..=50`.
/// Record `n` is the index `i`; `approx = x_i`, `remainder` is the value and
/// `bound` is 1.
pub fn verify_lemma_2_1(m: u32, prec: Option<u32>) -> Result<VerificationReport> {
    let start = Instant::now();
    let prec = resolve_precision(prec, 0)?;
    threshold_n(m, prec)?;
    let points: Vec<u64> = (0..=LEMMA_2_1_SAMPLES).collect();
    let records = collect(&points, |i| {
        dual_check(i, None, prec, true, |p| {
            let base = threshold_n(m, p)?;
            let x = &base * &BigFloat::from_u64(20 + i, p).div_i64(20);
            Ok(Check {
                remainder: lemma_2_1_value(m, &x),
                approx: x,
                bound: BigFloat::one(p),
            })
        })
    })?;
    Ok(VerificationReport::new(
        Statement::Lemma21,
        params(&[("m", m as i64), ("bits", prec as i64)]),
        records,
        start.elapsed().as_millis() as u64,
    ))
}

/// `|p̄(n+k) 8(n+k) e^{-μ} - 1 + 1/μ| ≤ μ^{-m}` with `μ = π√(n+k)`, for
/// `n ≥ N₀(m)`. Records hold `exact = p̄(n + k)`,
/// `approx = e^μ/(8(n+k)) (1 - 1/μ)`, the left side as `remainder` and
/// `μ^{-m}` as `bound`.
pub fn verify_lemma_2_2(
    table: &OverpartitionTable,
    m: u32,
    k: i64,
    range: &SampleRange,
    prec: Option<u32>,
) -> Result<VerificationReport> {
    let start = Instant::now();
    if m < 2 {
        return Err(Error::Domain("the lemma needs m ≥ 2".into()));
    }
    let prec = resolve_precision(prec, range.to)?;
    let n0 = threshold_n0(m)?;
    if range.from < n0 {
        return Err(Error::BelowThreshold {
            statement: "lemma_2_2",
            n: range.from,
            threshold: n0,
        });
    }
    if (range.from as i64) + k < 1 {
        return Err(Error::Domain(format!(
            "n + k must be at least 1, got {}",
            range.from as i64 + k
        )));
    }
    ensure_table(table, (range.to as i64 + k) as u64)?;
    let records = collect(&range.points(), |n| {
        let nk = n as i64 + k;
        let exact = exact_at(table, nk)?;
        dual_check(n, Some(exact.clone()), prec, false, |p| {
            let q = p + 32;
            let nkf = BigFloat::from_i64(nk, q);
            let mu = &pi(q) * &nkf.sqrt();
            let scale = &mu.exp() / &nkf.mul_i64(8);
            let inv_mu = mu.recip();
            let one = BigFloat::one(q);
            let x = &BigFloat::from_bigint(&exact, q) / &scale;
            let rem = (&(&x - &one) + &inv_mu).abs();
            Ok(Check {
                approx: (&scale * &(&one - &inv_mu)).with_precision(p),
                remainder: rem.with_precision(p),
                bound: inv_mu.powi(m as i64).with_precision(p),
            })
        })
    })?;
    Ok(VerificationReport::new(
        Statement::Lemma22,
        params(&[("m", m as i64), ("k", k), ("bits", prec as i64)]),
        records,
        start.elapsed().as_millis() as u64,
    ))
}

/// `0 < Δ^r(p̄)(n) < 2^{r-3}(1 - 2^{-3/2}) ζ(3/2) e^{π√(n+r)}/(n+r)`, with
/// the upper end of the `ζ(3/2)` enclosure. Records hold
/// `exact = Δ^r(p̄)(n)`, `approx` and `remainder` its value and `bound` the
/// right side. A record passes only if both inequalities hold.
pub fn verify_wxz(
    table: &OverpartitionTable,
    r: u32,
    range: &SampleRange,
    prec: Option<u32>,
) -> Result<VerificationReport> {
    let start = Instant::now();
    if r == 0 {
        return Err(Error::Domain("difference order r must be at least 1".into()));
    }
    if range.from < r as u64 {
        return Err(Error::Domain(format!(
            "n must be at least r = {r}, got {}",
            range.from
        )));
    }
    let prec = resolve_precision(prec, range.to)?;
    ensure_table(table, range.to)?;
    let zeta = [
        zeta_three_halves(prec).upper,
        zeta_three_halves(prec + SLACK_EXTRA_BITS).upper,
    ];
    let spec = DifferenceSpec::new(1, r)?;
    let records = collect(&range.points(), |n| {
        let exact = shifted_difference(table, spec, n)?;
        let positive = exact.is_positive();
        let mut rec = dual_check(n, Some(exact.clone()), prec, true, |p| {
            let z = if p == prec { &zeta[0] } else { &zeta[1] };
            let x = BigFloat::from_bigint(&exact, p);
            let nr = BigFloat::from_u64(n + r as u64, p);
            let c = &BigFloat::one(p) - &BigFloat::from_u64(2, p).sqrt().powi(-3);
            let rhs = &(&(&c * z).ldexp(r as i64 - 3) * &(&pi(p) * &nr.sqrt()).exp()) / &nr;
            Ok(Check {
                approx: x.clone(),
                remainder: x,
                bound: rhs,
            })
        })?;
        rec.pass &= positive;
        Ok(rec)
    })?;
    Ok(VerificationReport::new(
        Statement::WxzUpper,
        params(&[("r", r as i64), ("bits", prec as i64)]),
        records,
        start.elapsed().as_millis() as u64,
    ))
}

/// `Δ^r_j(p̄)(n) > 0`, exact. Records hold the value in `exact`, `approx`
/// and `remainder`, and `bound = 0`.
pub fn verify_wxz_positivity(
    table: &OverpartitionTable,
    r: u32,
    j: u64,
    range: &SampleRange,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let spec = DifferenceSpec::new(j, r)?;
    if range.from < spec.reach() {
        return Err(Error::Domain(format!(
            "n must be at least r·j = {}, got {}",
            spec.reach(),
            range.from
        )));
    }
    ensure_table(table, range.to)?;
    let prec = 64;
    let records = collect(&range.points(), |n| {
        let exact = shifted_difference(table, spec, n)?;
        let x = BigFloat::from_bigint(&exact, prec);
        Ok(Record {
            n,
            pass: exact.is_positive(),
            exact: Some(exact),
            approx: x.clone(),
            remainder: x,
            bound: BigFloat::zero(prec),
        })
    })?;
    Ok(VerificationReport::new(
        Statement::WxzPositivity,
        params(&[("r", r as i64), ("j", j as i64)]),
        records,
        start.elapsed().as_millis() as u64,
    ))
}

/// Smallest `n₀` with `Δ^r_j(p̄)(n) > 0` for every `n₀ ≤ n ≤ scan_max`, or
/// `None` if `Δ^r_j(p̄)(scan_max) ≤ 0`. Nothing is claimed beyond `scan_max`.
pub fn positivity_threshold(
    table: &OverpartitionTable,
    r: u32,
    j: u64,
    scan_max: u64,
) -> Result<Option<u64>> {
    let spec = DifferenceSpec::new(j, r)?;
    if scan_max < spec.reach() {
        return Err(Error::Domain(format!(
            "scan_max must be at least r·j = {}",
            spec.reach()
        )));
    }
    ensure_table(table, scan_max)?;
    let mut n0 = None;
    for n in (spec.reach()..=scan_max).rev() {
        if shifted_difference(table, spec, n)? > BigInt::zero() {
            n0 = Some(n);
        } else {
            break;
        }
    }
    Ok(n0)
}

/// Start of the longest all-pass suffix of the report, if any record at
/// the end passes.
pub fn passing_suffix_start(report: &VerificationReport) -> Option<u64> {
    let mut start = None;
    for rec in report.records.iter().rev() {
        if !rec.pass {
            break;
        }
        start = Some(rec.n);
    }
    start
}

/// `ρ(n) = Δ^r_j(p̄)(n) / ((πj/2)^r e^{π√n}/(8 n^{r/2+1}))`, passing when
/// `|ρ - 1|` is within
/// `(|A_j(r+1,r)| n^{-1/2} + |A_j(r+2,r)| n^{-1} + E(r+2,r,j) n^{-(r+3)/2}) / (πj/2)^r`.
/// Every `n` must be at least `n(r+2, r, j)`. Records hold the exact
/// difference, the leading term as `approx`, `|ρ - 1|` and the envelope.
pub fn corollary_ratio(
    table: &OverpartitionTable,
    r: u32,
    j: u64,
    n_list: &[u64],
    prec: Option<u32>,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let spec = DifferenceSpec::new(j, r)?;
    if r == 0 {
        return Err(Error::Domain("difference order r must be at least 1".into()));
    }
    let mut points = n_list.to_vec();
    points.sort_unstable();
    points.dedup();
    let (Some(&first), Some(&last)) = (points.first(), points.last()) else {
        return Err(Error::Domain("no sample points".into()));
    };
    let threshold = n_min_diff(r + 2, r, j)?;
    if first < threshold {
        return Err(Error::BelowThreshold {
            statement: "corollary_ratio",
            n: first,
            threshold,
        });
    }
    ensure_table(table, last)?;
    let prec = resolve_precision(prec, last)?;
    struct Consts {
        a1: BigFloat,
        a2: BigFloat,
        e: BigFloat,
        lead: BigFloat,
    }
    let consts = |p: u32| -> Result<Consts> {
        let lead = &(&pi(p) * &BigFloat::from_u64(j, p)).ldexp(-1);
        Ok(Consts {
            a1: coeff_a_diff(j, r + 1, r)?.evaluate(p).abs(),
            a2: coeff_a_diff(j, r + 2, r)?.evaluate(p).abs(),
            e: error_budget_diff(r + 2, r, j, p)?.e,
            lead: lead.powi(r as i64),
        })
    };
    let cs = [consts(prec)?, consts(prec + SLACK_EXTRA_BITS)?];
    let records = collect(&points, |n| {
        let exact = shifted_difference(table, spec, n)?;
        dual_check(n, Some(exact.clone()), prec, false, |p| {
            let c = if p == prec { &cs[0] } else { &cs[1] };
            let nf = BigFloat::from_u64(n, p);
            let sqrt_n = nf.sqrt();
            let inv = sqrt_n.recip();
            let leading = &(&c.lead * &(&pi(p) * &sqrt_n).exp())
                * &inv.powi(r as i64 + 2).ldexp(-3);
            let rho = &BigFloat::from_bigint(&exact, p) / &leading;
            let env = &(&(&c.a1 * &inv) + &(&c.a2 * &inv.powi(2)))
                + &(&c.e * &inv.powi(r as i64 + 3));
            Ok(Check {
                approx: leading,
                remainder: (&rho - &BigFloat::one(p)).abs(),
                bound: &env / &c.lead,
            })
        })
    })?;
    Ok(VerificationReport::new(
        Statement::CorollaryRatio,
        params(&[("r", r as i64), ("j", j as i64), ("bits", prec as i64)]),
        records,
        start.elapsed().as_millis() as u64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::table_theta;

    #[test]
    fn default_sampling() {
        let r = SampleRange::new(10, 2000, None).unwrap();
        let pts = r.points();
        assert_eq!(pts[..501], (10..=510).collect::<Vec<_>>()[..]);
        assert_eq!(pts[501], 765);
        assert_eq!(*pts.last().unwrap(), 2000);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(SampleRange::new(5, 9, Some(2)).unwrap().points(), vec![5, 7, 9]);
        assert!(SampleRange::new(9, 5, None).is_err());
    }

    #[test]
    fn below_threshold_is_rejected() {
        let t = table_theta(200);
        let n_min = crate::asymptotic::n_min(1, 1).unwrap();
        let r = SampleRange::span(n_min - 1, 10);
        assert!(matches!(
            verify_theorem_1_1(&t, 1, 1, &r, None),
            Err(Error::BelowThreshold { .. })
        ));
        let r = SampleRange::span(21, 10);
        assert!(matches!(
            verify_lemma_2_2(&t, 2, 1, &r, None),
            Err(Error::BelowThreshold { .. })
        ));
        assert!(matches!(
            verify_lemma_2_2(&t, 1, 1, &r, None),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            verify_theorem_1_2(&t, 1, 2, 1, &SampleRange::span(150, 5), None),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn small_theorem_run() {
        let t = table_theta(200);
        let n_min = crate::asymptotic::n_min(1, 1).unwrap();
        let rep = verify_theorem_1_1(&t, 1, 1, &SampleRange::span(n_min, 100), None).unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.records.len(), 101);
        assert_eq!(rep.records[0].n, n_min);
        assert_eq!(rep.records[0].exact, Some(BigInt::from(t.values()[n_min as usize + 1].clone())));
    }

    #[test]
    fn positivity_scan() {
        let t = table_theta(1000);
        assert_eq!(positivity_threshold(&t, 1, 1, 1000).unwrap(), Some(1));
        let rep = verify_wxz_positivity(&t, 1, 1, &SampleRange::new(1, 1000, Some(1)).unwrap()).unwrap();
        assert!(rep.verdict);
        assert_eq!(passing_suffix_start(&rep), Some(1));
    }

    #[test]
    fn report_roundtrips() {
        let t = table_theta(300);
        let rep = verify_lemma_2_2(&t, 2, -1, &SampleRange::span(22, 40), None).unwrap();
        let json = rep.to_json().unwrap();
        let back = VerificationReport::from_json(&json).unwrap();
        assert_eq!(back.records, rep.records);
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        assert_eq!(read_csv_records(buf.as_slice()).unwrap(), rep.records);
        assert_eq!("thm1.1".parse::<Statement>().unwrap(), Statement::Theorem11);
        for s in Statement::ALL {
            assert_eq!(s.id().parse::<Statement>().unwrap(), s);
        }
    }
}
