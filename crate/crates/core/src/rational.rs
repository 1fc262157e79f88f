//! Exact rational arithmetic helpers.
//!
//! Every density, ratio and threshold in the workspace is a [`Q`]. Floats are
//! produced only by [`to_f64`] for human-facing reports.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number used throughout the workspace.
pub type Q = Ratio<i128>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalError {
    #[error("cannot parse `{0}` as a rational (expected `p/q` or `p`)")]
    Parse(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// `n/d` in lowest terms. Panics on `d == 0`.
pub fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

/// Integer as a rational.
pub fn qi<T: Into<i128>>(n: T) -> Q {
    Ratio::from_integer(n.into())
}

/// `usize` as a rational.
pub fn qu(n: usize) -> Q {
    Ratio::from_integer(n as i128)
}

/// Parse `p/q`, `p` or `-p/q`.
pub fn parse_q(s: &str) -> Result<Q, RationalError> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: i128 = num.parse().map_err(|_| RationalError::Parse(s.to_string()))?;
    let d: i128 = den.parse().map_err(|_| RationalError::Parse(s.to_string()))?;
    if d == 0 {
        return Err(RationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Ratio::new(n, d))
}

/// Always renders as `p/q`, including integers (`340/1`).
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn ceil_q(x: &Q) -> i128 {
    x.ceil().to_integer()
}

pub fn floor_q(x: &Q) -> i128 {
    x.floor().to_integer()
}

/// Smallest integer `m >= 0` with `m >= x`, as usize (negative inputs give 0).
pub fn ceil_usize(x: &Q) -> usize {
    let c = ceil_q(x);
    if c <= 0 {
        0
    } else {
        c as usize
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Denominator of the grid used by [`sqrt_upper`].
pub const SQRT_GRID: i128 = 1 << 16;

/// Minimal `p / 2^16` whose square is at least `x` (for `x >= 0`).
///
/// Stands in for `sqrt(x)` wherever an exact upper bound is needed.
pub fn sqrt_upper(x: &Q) -> Q {
    assert!(!x.is_negative(), "sqrt_upper of a negative rational");
    if x.is_zero() {
        return Q::zero();
    }
    // p^2 * den >= num * 2^32, p minimal; binary search on p.
    let (num, den) = (*x.numer(), *x.denom());
    let target = |p: i128| p * p * den >= num * SQRT_GRID * SQRT_GRID;
    let mut lo: i128 = 0;
    let mut hi: i128 = SQRT_GRID;
    while !target(hi) {
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if target(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ratio::new(hi, SQRT_GRID)
}

/// Smallest `s/t` (minimal `t`, then minimal `s`) with `lo <= s/t <= hi`.
pub fn simplest_in(lo: &Q, hi: &Q) -> Option<Q> {
    if lo > hi {
        return None;
    }
    let mut t: i128 = 1;
    loop {
        let s = (lo * qi(t)).ceil().to_integer();
        let cand = Ratio::new(s, t);
        if &cand <= hi {
            return Some(cand);
        }
        t += 1;
        if t > 1_000_000 {
            return None;
        }
    }
}

/// Least common multiple of denominators, handy for exact bucketing.
pub fn lcm_den(xs: &[Q]) -> i128 {
    xs.iter().fold(1i128, |acc, x| acc.lcm(x.denom()))
}

/// Serde adapter rendering a [`Q`] as a `"p/q"` string.
pub mod serde_q {
    use super::{fmt_q, parse_q, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Q>` as a list of `"p/q"` strings.
pub mod serde_q_vec {
    use super::{fmt_q, parse_q, Q};
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&fmt_q(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_q(s).map_err(D::Error::custom)).collect()
    }
}

/// Serde adapter for square matrices of `Q`.
pub mod serde_q_mat {
    use super::{fmt_q, parse_q, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(|s| parse_q(s).map_err(D::Error::custom)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("7").unwrap(), qi(7));
        assert_eq!(parse_q(" -2/4 ").unwrap(), q(-1, 2));
        assert_eq!(fmt_q(&qi(340)), "340/1");
        assert_eq!(fmt_q(&q(345, 2)), "345/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("a/b").is_err());
    }

    #[test]
    fn sqrt_upper_is_minimal_on_grid() {
        for (n, d) in [(1, 4), (1, 25), (4, 100), (1, 3), (2, 1), (1, 1000)] {
            let x = q(n, d);
            let s = sqrt_upper(&x);
            assert!(s * s >= x);
            let below = s - q(1, SQRT_GRID);
            assert!(below * below < x);
        }
        assert_eq!(sqrt_upper(&q(1, 4)), q(1, 2));
        assert_eq!(sqrt_upper(&q(1, 25)), q(13108, SQRT_GRID));
    }

    #[test]
    fn simplest_fraction_prefers_small_denominator() {
        assert_eq!(simplest_in(&q(1, 3), &q(7, 20)), Some(q(1, 3)));
        assert_eq!(simplest_in(&q(31, 100), &q(8, 25)), Some(q(5, 16)));
        assert_eq!(simplest_in(&q(1, 2), &q(1, 3)), None);
    }

    #[test]
    fn ceil_helpers() {
        assert_eq!(ceil_usize(&q(5, 2)), 3);
        assert_eq!(ceil_usize(&q(-5, 2)), 0);
        assert_eq!(floor_q(&q(-5, 2)), -3);
    }
}
