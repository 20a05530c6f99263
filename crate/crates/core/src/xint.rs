use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// An integer extended by `-inf` and `+inf`, totally ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum XInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl XInt {
    pub fn is_finite(&self) -> bool {
        matches!(self, XInt::Fin(_))
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            XInt::Fin(v) => Some(*v),
            _ => None,
        }
    }

    /// Adds a finite offset; infinities absorb it.
    pub fn offset(self, k: i64) -> XInt {
        match self {
            XInt::Fin(v) => XInt::Fin(v + k),
            o => o,
        }
    }
}

impl From<i64> for XInt {
    fn from(v: i64) -> Self {
        XInt::Fin(v)
    }
}

impl fmt::Display for XInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XInt::NegInf => f.write_str("-inf"),
            XInt::Fin(v) => write!(f, "{v}"),
            XInt::PosInf => f.write_str("inf"),
        }
    }
}

impl FromStr for XInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" => Ok(XInt::PosInf),
            "-inf" => Ok(XInt::NegInf),
            t => {
                t.parse::<i64>().map(XInt::Fin).map_err(|_| Error::Invalid(format!("`{t}` is not an integer or ±inf")))
            }
        }
    }
}
