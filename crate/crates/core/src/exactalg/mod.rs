//! Exact arithmetic: arbitrary-precision rationals, the cyclotomic field
//! Q(xi_p) in the power basis, Galois automorphisms, and high-precision
//! complex embeddings.

mod complex;
mod cyclo;

pub use complex::{ComplexApprox, Ctx};
pub use cyclo::{CycloElem, GaloisMap};

use crate::error::{Error, Result};
use num_bigint::BigInt;

/// Exact rational number, always stored reduced with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat_i64(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Render a rational as the exact string `"num/den"`.
pub fn rat_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parse `"num/den"` (or a bare integer) back into a rational.
pub fn rat_from_string(s: &str) -> Result<Rational> {
    let parse_int = |t: &str| {
        t.parse::<BigInt>()
            .map_err(|_| Error::InvalidInput(format!("bad integer in rational: {t:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == BigInt::from(0) {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(parse_int(n)?, den))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_roundtrip() {
        let q = rat_i64(-34, 51); // reduces to -2/3
        assert_eq!(rat_to_string(&q), "-2/3");
        assert_eq!(rat_from_string("-2/3").unwrap(), q);
        assert_eq!(rat_from_string("7").unwrap(), rat_int(7));
        assert!(rat_from_string("1/0").is_err());
    }
}
