use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::rational::{BigRational, Ratio};
use num::{Integer, ToPrimitive, Zero};

/// Exact fraction used for stored precision and recall.
pub type Fraction = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub value: Fraction,
    /// Nothing was found; the value is 0 by convention.
    pub empty_found: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recall {
    pub value: Fraction,
    /// Nothing is relevant; the value is 1 by convention.
    pub empty_relevant: bool,
}

fn hits<T: Ord>(found: &BTreeSet<T>, relevant: &BTreeSet<T>) -> u64 {
    found.intersection(relevant).count() as u64
}

/// |relevant ∩ found| / |found|.
pub fn precision<T: Ord>(found: &BTreeSet<T>, relevant: &BTreeSet<T>) -> Precision {
    if found.is_empty() {
        return Precision {
            value: Fraction::zero(),
            empty_found: true,
        };
    }
    Precision {
        value: Fraction::new(hits(found, relevant), found.len() as u64),
        empty_found: false,
    }
}

/// |relevant ∩ found| / |relevant|.
pub fn recall<T: Ord>(found: &BTreeSet<T>, relevant: &BTreeSet<T>) -> Recall {
    if relevant.is_empty() {
        return Recall {
            value: Fraction::new(1, 1),
            empty_relevant: true,
        };
    }
    Recall {
        value: Fraction::new(hits(found, relevant), relevant.len() as u64),
        empty_relevant: false,
    }
}

/// Exact arithmetic mean; zero for an empty input.
pub fn mean<'a, I: IntoIterator<Item = &'a Fraction>>(values: I) -> BigRational {
    let mut sum = BigRational::zero();
    let mut n = 0u64;
    for v in values {
        sum += BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()));
        n += 1;
    }
    if n == 0 {
        return sum;
    }
    sum / BigRational::from_integer(BigInt::from(n))
}

fn round_scaled(numer: &BigInt, denom: &BigInt, scale: u64) -> BigInt {
    // round half up on non-negative values
    let scaled: BigInt = numer * BigInt::from(scale) * 2 + denom;
    scaled.div_floor(&(denom * 2))
}

fn fixed(numer: &BigInt, denom: &BigInt, digits: u32) -> String {
    let scale = 10u64.pow(digits);
    let v = round_scaled(numer, denom, scale);
    let (int, frac) = v.div_rem(&BigInt::from(scale));
    format!("{int}.{:0width$}", frac.to_u64().unwrap_or(0), width = digits as usize)
}

/// Fixed-point rendering with four decimals, e.g. `1/100` → `0.0100`.
pub fn format4(value: &Fraction) -> String {
    fixed(&BigInt::from(*value.numer()), &BigInt::from(*value.denom()), 4)
}

pub fn format4_big(value: &BigRational) -> String {
    fixed(value.numer(), value.denom(), 4)
}

/// Percentage with two decimals, e.g. `1/100` → `1.00%`.
pub fn format_percent(value: &BigRational) -> String {
    let pct = value * BigRational::from_integer(BigInt::from(100));
    format!("{}%", fixed(pct.numer(), pct.denom(), 2))
}

/// Parses a four-decimal fixed-point value in `[0, 1]` into ten-thousandths.
pub fn parse4(text: &str) -> Option<u32> {
    let (int, frac) = text.split_once('.')?;
    if frac.len() != 4 || !frac.bytes().all(|b| b.is_ascii_digit()) || !matches!(int, "0" | "1") {
        return None;
    }
    let v = int.parse::<u32>().ok()? * 10_000 + frac.parse::<u32>().ok()?;
    (v <= 10_000).then_some(v)
}
