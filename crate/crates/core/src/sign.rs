use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A value in `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^exponent`.
    pub fn from_parity(exponent: u64) -> Sign {
        if exponent.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn from_i64(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn pow(self, exponent: u64) -> Sign {
        match self {
            Sign::Plus => Sign::Plus,
            Sign::Minus => Sign::from_parity(exponent),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.to_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Sign, D::Error> {
        let v = i64::deserialize(deserializer)?;
        Sign::from_i64(v).ok_or_else(|| serde::de::Error::custom(format!("{v} is not a sign")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_law() {
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(Sign::Minus.pow(3), Sign::Minus);
        assert_eq!(Sign::Minus.pow(0), Sign::Plus);
        assert_eq!(-Sign::Plus, Sign::Minus);
        let p: Sign = [Sign::Minus, Sign::Minus, Sign::Minus]
            .into_iter()
            .product();
        assert_eq!(p, Sign::Minus);
        assert_eq!(serde_json::to_string(&Sign::Minus).unwrap(), "-1");
        assert!(serde_json::from_str::<Sign>("2").is_err());
    }
}
