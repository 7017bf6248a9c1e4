//! Exact textual encoding of binary64 values (C99 `%a` style).
//!
//! Normal numbers are written `0x1.<frac>p<exp>`, subnormals
//! `0x0.<frac>p-1022`; trailing zero nibbles of the fraction are dropped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

const FRAC_BITS: u32 = 52;
const FRAC_MASK: u64 = (1 << FRAC_BITS) - 1;

/// Formats a finite or infinite float exactly.
pub fn to_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let biased = ((bits >> FRAC_BITS) & 0x7ff) as i32;
    let frac = bits & FRAC_MASK;
    let (lead, exp) = if biased == 0 {
        if frac == 0 {
            return format!("{sign}0x0p+0");
        }
        (0, -1022)
    } else {
        (1, biased - 1023)
    };
    let mut digits = format!("{frac:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let esign = if exp >= 0 { "+" } else { "-" };
    if digits.is_empty() {
        format!("{sign}0x{lead}p{esign}{}", exp.abs())
    } else {
        format!("{sign}0x{lead}.{digits}p{esign}{}", exp.abs())
    }
}

/// Parses the format produced by [`to_hex`].
pub fn from_hex(s: &str) -> Result<f64> {
    let bad = || Error::HexFloat(s.to_string());
    match s {
        "inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let body = body
        .strip_prefix("0x")
        .or_else(|| body.strip_prefix("0X"))
        .ok_or_else(bad)?;
    let (mantissa, exp) = body.split_once(['p', 'P']).ok_or_else(bad)?;
    let exp: i32 = exp.parse().map_err(|_| bad())?;
    let (lead, frac_digits) = match mantissa.split_once('.') {
        Some((l, f)) => (l, f),
        None => (mantissa, ""),
    };
    if frac_digits.len() > 13 || !frac_digits.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(bad());
    }
    let frac = if frac_digits.is_empty() {
        0
    } else {
        u64::from_str_radix(frac_digits, 16).map_err(|_| bad())? << (4 * (13 - frac_digits.len()))
    };
    let magnitude = match lead {
        "1" => {
            if !(-1022..=1023).contains(&exp) {
                return Err(bad());
            }
            (((exp + 1023) as u64) << FRAC_BITS) | frac
        }
        "0" if frac == 0 => 0,
        "0" if exp == -1022 => frac,
        _ => return Err(bad()),
    };
    let bits = magnitude | if negative { 1 << 63 } else { 0 };
    Ok(f64::from_bits(bits))
}

/// Wire form of an [`Interval`]: exact hex endpoints plus decimal approximations.
#[derive(Serialize, Deserialize)]
pub(crate) struct HexInterval {
    lo: String,
    hi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    approx: Option<[f64; 2]>,
}

impl From<Interval> for HexInterval {
    fn from(x: Interval) -> Self {
        let approx = (x.lo().is_finite() && x.hi().is_finite()).then_some([x.lo(), x.hi()]);
        HexInterval {
            lo: to_hex(x.lo()),
            hi: to_hex(x.hi()),
            approx,
        }
    }
}

impl TryFrom<HexInterval> for Interval {
    type Error = Error;

    fn try_from(h: HexInterval) -> Result<Interval> {
        let lo = from_hex(&h.lo)?;
        let hi = from_hex(&h.hi)?;
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval::from_bounds(lo, hi))
    }
}

/// Serde adapter for a plain `f64` stored as an exact hex string.
pub mod hex_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_hex(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        super::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of floats stored as exact hex strings.
pub mod hex_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
        x.iter()
            .map(|&v| super::to_hex(v))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| super::from_hex(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_encodings() {
        assert_eq!(to_hex(1.0), "0x1p+0");
        assert_eq!(to_hex(-2.5), "-0x1.4p+1");
        assert_eq!(to_hex(0.1), "0x1.999999999999ap-4");
        assert_eq!(to_hex(0.0), "0x0p+0");
        assert_eq!(to_hex(-0.0), "-0x0p+0");
        assert_eq!(to_hex(f64::MIN_POSITIVE / 4.0), "0x0.4p-1022");
        assert_eq!(to_hex(f64::MAX), "0x1.fffffffffffffp+1023");
    }

    #[test]
    fn rejects_garbage() {
        for s in [
            "",
            "1.0",
            "0x2p+0",
            "0x1.gp+0",
            "0x1p+5000",
            "0x0.1p+0",
            "0x1.00000000000000p+0",
        ] {
            assert!(from_hex(s).is_err(), "{s}");
        }
    }

    proptest! {
        #[test]
        fn round_trips_every_bit_pattern(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(!x.is_nan());
            let back = from_hex(&to_hex(x)).unwrap();
            prop_assert_eq!(back.to_bits(), bits);
        }
    }
}
