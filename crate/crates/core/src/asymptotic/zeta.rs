//! A certified enclosure of `ζ(3/2)`.

use serde::{Deserialize, Serialize};

use crate::bigfloat::BigFloat;

/// Terms summed directly before the integral tail bounds take over.
pub const ZETA_TERMS: u64 = 10_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZetaEnclosure {
    pub lower: BigFloat,
    pub upper: BigFloat,
}

/// `ζ(3/2) ∈ S_M + [2/√(M+1), 2/√M]` with `S_M = Σ_{n ≤ M} n^{-3/2}`,
/// widened on both sides by a bound on the round-off in `S_M`.
pub fn zeta_three_halves(prec: u32) -> ZetaEnclosure {
    let p = prec + 32;
    let m = ZETA_TERMS;
    let mut s = BigFloat::zero(p);
    for n in 1..=m {
        let nf = BigFloat::from_u64(n, p);
        s = &s + &(&nf * &nf.sqrt()).recip();
    }
    // each term and each addition is off by at most a few units in the last
    // place of a quantity below 3; the final rounding to `prec` bits adds
    // one more unit at that precision
    let roundoff = &BigFloat::from_u64(8 * m, p).ldexp(2 - p as i64)
        + &BigFloat::one(p).ldexp(2 - prec as i64);
    let two = BigFloat::from_u64(2, p);
    let tail_lo = &two / &BigFloat::from_u64(m + 1, p).sqrt();
    let tail_hi = &two / &BigFloat::from_u64(m, p).sqrt();
    let lower = &(&s + &tail_lo) - &roundoff;
    let upper = &(&s + &tail_hi) + &roundoff;
    ZetaEnclosure {
        lower: lower.with_precision(prec),
        upper: upper.with_precision(prec),
    }
}
