//! Exact rational values used for every combinatorial quantity.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number with 64-bit numerator and denominator.
pub type Rational = Ratio<i64>;

/// Wire form of a rational: `{"num": .., "den": ..}`, always reduced with a
/// positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: i64,
    pub den: i64,
}

impl From<Rational> for RationalRepr {
    fn from(r: Rational) -> Self {
        Self {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

/// Lossy conversion for reporting.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter: `#[serde(with = "crate::rational::serde_rational")]`.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr::from(*r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let repr = RationalRepr::deserialize(d)?;
        if repr.den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(repr.num, repr.den))
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_rational_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.map(RationalRepr::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        match Option::<RationalRepr>::deserialize(d)? {
            None => Ok(None),
            Some(repr) if repr.den == 0 => Err(serde::de::Error::custom("zero denominator")),
            Some(repr) => Ok(Some(Rational::new(repr.num, repr.den))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_form_is_reduced() {
        let r = Rational::new(8, 6);
        let json = serde_json::to_string(&RationalRepr::from(r)).unwrap();
        assert_eq!(json, r#"{"num":4,"den":3}"#);
    }

    #[test]
    fn negative_denominator_normalises() {
        let r = Rational::new(3, -6);
        assert_eq!(RationalRepr::from(r), RationalRepr { num: -1, den: 2 });
    }
}
