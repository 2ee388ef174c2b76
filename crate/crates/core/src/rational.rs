//! Exact rational scalars, extended rationals and dense rational vectors.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type Vector = Vec<Rat>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Builds a vector from integer coordinates.
pub fn ivec(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn zeros(d: usize) -> Vector {
    vec![Rat::zero(); d]
}

pub fn unit(d: usize, i: usize) -> Vector {
    let mut v = zeros(d);
    v[i] = Rat::one();
    v
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scaled(a: &[Rat], s: &Rat) -> Vector {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Rat]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Rat]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into a rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Canonical string form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Scales `v` by a positive factor so that it becomes a primitive integer
/// vector (coprime entries). Zero vectors are returned unchanged.
pub fn primitive(v: &[Rat]) -> Vector {
    let ints = to_integer_row(v);
    ints.into_iter().map(Rat::from_integer).collect()
}

/// Positive rescaling of a rational row to coprime integers.
pub(crate) fn to_integer_row(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    reduce_gcd(&mut out);
    out
}

pub(crate) fn reduce_gcd(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Scales `v` by a positive factor so that its first nonzero entry has
/// absolute value one.
pub fn normalize_leading(v: &[Rat]) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let s = lead.abs().recip();
            scaled(v, &s)
        }
        None => v.to_vec(),
    }
}

/// Element of the two-point compactified rationals.
///
/// Variant order gives the total order `-inf < finite < +inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRat {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl ExtRat {
    pub fn finite(r: Rat) -> Self {
        ExtRat::Finite(r)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Extended addition; `+inf + -inf` is undefined.
    pub fn checked_add(&self, other: &ExtRat) -> Result<ExtRat> {
        use ExtRat::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::UndefinedExtendedSum),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
        }
    }

    /// Multiplication by a strictly positive rational weight.
    pub fn scale_positive(&self, w: &Rat) -> ExtRat {
        debug_assert!(w.is_positive());
        match self {
            ExtRat::Finite(a) => ExtRat::Finite(a * w),
            other => other.clone(),
        }
    }

    pub fn parse(s: &str) -> Result<ExtRat> {
        match s.trim() {
            "inf" | "+inf" => Ok(ExtRat::PosInf),
            "-inf" => Ok(ExtRat::NegInf),
            other => parse_rat(other).map(ExtRat::Finite),
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> Self {
        ExtRat::Finite(r)
    }
}

impl Neg for ExtRat {
    type Output = ExtRat;
    fn neg(self) -> ExtRat {
        match self {
            ExtRat::NegInf => ExtRat::PosInf,
            ExtRat::PosInf => ExtRat::NegInf,
            ExtRat::Finite(r) => ExtRat::Finite(-r),
        }
    }
}

impl PartialEq<Rat> for ExtRat {
    fn eq(&self, other: &Rat) -> bool {
        matches!(self, ExtRat::Finite(r) if r == other)
    }
}

impl PartialOrd<Rat> for ExtRat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(match self {
            ExtRat::NegInf => Ordering::Less,
            ExtRat::PosInf => Ordering::Greater,
            ExtRat::Finite(r) => r.cmp(other),
        })
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::NegInf => f.write_str("-inf"),
            ExtRat::PosInf => f.write_str("inf"),
            ExtRat::Finite(r) => f.write_str(&format_rat(r)),
        }
    }
}
