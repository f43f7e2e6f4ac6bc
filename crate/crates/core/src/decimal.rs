//! Serde adapters writing big integers as decimal strings.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{de::Error, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&value.to_str_radix(10))
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigInt, D::Error> {
    let s = String::deserialize(deserializer)?;
    parse(&s).map_err(D::Error::custom)
}

/// Strict decimal: optional leading `-`, then ASCII digits only.
pub fn parse(s: &str) -> Result<BigInt, String> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("invalid decimal integer {s:?}"));
    }
    BigInt::from_str(s).map_err(|e| format!("invalid decimal integer {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::parse;

    #[test]
    fn strict_parsing() {
        assert_eq!(parse("-120").unwrap(), (-120).into());
        for bad in ["", "-", "+5", "1e3", "abc", " 7", "0x10"] {
            assert!(parse(bad).is_err(), "{bad:?}");
        }
    }
}
