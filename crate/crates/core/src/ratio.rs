//! Exact rationals for the statistics that get rendered into tables.
//!
//! Counts-based statistics (percentages, kappas, consistency rates) are
//! computed as integer fractions and only converted to `f64` or to a fixed
//! decimal string at the edge, so rounding is decided once.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A fraction `num / den` in lowest terms with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    num: i128,
    den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    /// Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Ratio {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Ratio {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn from_integer(n: i128) -> Ratio {
        Ratio { num: n, den: 1 }
    }

    pub fn zero() -> Ratio {
        Ratio::from_integer(0)
    }

    pub fn one() -> Ratio {
        Ratio::from_integer(1)
    }

    /// `100 * part / whole`, or `None` when `whole == 0`.
    pub fn percent(part: u64, whole: u64) -> Option<Ratio> {
        (whole != 0).then(|| Ratio::new(100 * part as i128, whole as i128))
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Decimal rendering with round-half-up (`floor(x * 10^d + 1/2)`).
    pub fn fixed(&self, decimals: u32) -> String {
        let scale = 10i128.pow(decimals);
        let q = (2 * self.num * scale + self.den).div_euclid(2 * self.den);
        let neg = q < 0;
        let q = q.abs();
        let int = q / scale;
        let frac = q % scale;
        let sign = if neg { "-" } else { "" };
        if decimals == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0width$}", width = decimals as usize)
        }
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Serializes a [`Ratio`] as its nearest `f64`, for structured reports.
pub fn serialize_f64<S: serde::Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(r.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        let r = Ratio::new(6, -8);
        assert_eq!((r.numer(), r.denom()), (-3, 4));
        assert_eq!(Ratio::new(0, 5), Ratio::zero());
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(Ratio::new(1, 8).fixed(2), "0.13");
        assert_eq!(Ratio::new(-1, 8).fixed(2), "-0.12");
        assert_eq!(Ratio::new(7, 9).fixed(2), "0.78");
        assert_eq!(Ratio::new(5, 9).fixed(2), "0.56");
        assert_eq!(Ratio::one().fixed(2), "1.00");
        assert_eq!(Ratio::new(-1, 1).fixed(2), "-1.00");
        assert_eq!(Ratio::new(1, 1000).fixed(2), "0.00");
        assert_eq!(Ratio::new(5, 1000).fixed(2), "0.01");
        assert_eq!(Ratio::new(2, 3).fixed(0), "1");
    }

    #[test]
    fn table_one_percentages() {
        let pct = |t| Ratio::percent(t, 2659).unwrap().fixed(2);
        assert_eq!(pct(520), "19.56");
        assert_eq!(pct(23), "0.86");
        assert_eq!(pct(820), "30.84");
        assert_eq!(pct(1839), "69.16");
        assert!(Ratio::percent(1, 0).is_none());
    }

    #[test]
    fn ordering() {
        assert!(Ratio::new(1, 3) < Ratio::new(1, 2));
        assert!(Ratio::new(-1, 2) < Ratio::zero());
    }
}
