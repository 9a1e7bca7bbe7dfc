//! JSON encodings for complex scalars.
//!
//! Numbers are written as `{"mod_log": ln|z|, "arg": θ}` (zero as
//! `{"re": 0, "im": 0}`) and read from either that form or `{"re", "im"}`.
//! A bare JSON number is also read as a real scalar.

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::xcomplex::XComplex;

#[derive(Deserialize)]
#[serde(untagged)]
enum Wire {
    Real(f64),
    Cartesian {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Polar {
        mod_log: f64,
        #[serde(default)]
        arg: f64,
    },
}

impl Wire {
    fn into_x(self) -> XComplex {
        match self {
            Wire::Real(x) => XComplex::from_f64(x),
            Wire::Cartesian { re, im } => XComplex::new(re, im),
            Wire::Polar { mod_log, arg } => XComplex::from_polar_ln(mod_log, arg),
        }
    }
}

impl Serialize for XComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        if self.is_zero() {
            m.serialize_entry("re", &0.0)?;
            m.serialize_entry("im", &0.0)?;
        } else {
            m.serialize_entry("mod_log", &self.ln_abs())?;
            m.serialize_entry("arg", &self.arg())?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for XComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let x = Wire::deserialize(d)?.into_x();
        if !x.is_finite() {
            return Err(de::Error::custom("complex value is not finite"));
        }
        Ok(x)
    }
}

/// `#[serde(with = "crate::json::complex")]` for `Complex64` fields.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        XComplex::from_complex(*c).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let x = XComplex::deserialize(d)?;
        let c = x.to_complex();
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(de::Error::custom("scalar outside double range"));
        }
        Ok(c)
    }
}

/// Same as [`complex`] for `Vec<Complex64>`.
pub mod complex_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct C(#[serde(with = "super::complex")] Complex64);

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|c| C(*c)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<C>::deserialize(d)?.into_iter().map(|c| c.0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_both_forms() {
        let a: XComplex = serde_json::from_str(r#"{"re": 3, "im": -4}"#).unwrap();
        assert_eq!(a.to_complex(), Complex64::new(3.0, -4.0));
        let b: XComplex =
            serde_json::from_str(r#"{"mod_log": 0.6931471805599453, "arg": 0}"#).unwrap();
        assert!((b.to_complex() - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let c: XComplex = serde_json::from_str("2.5").unwrap();
        assert_eq!(c.to_complex(), Complex64::new(2.5, 0.0));
    }

    #[test]
    fn huge_values_round_trip_in_polar_form() {
        let tiny = crate::xcomplex::pow_polar_neg(Complex64::new(3.0, 1.0), 900);
        let s = serde_json::to_string(&tiny).unwrap();
        let back: XComplex = serde_json::from_str(&s).unwrap();
        assert!(((back - tiny) / tiny).abs() < 1e-12);
    }

    #[test]
    fn zero_is_cartesian() {
        assert_eq!(
            serde_json::to_string(&XComplex::ZERO).unwrap(),
            r#"{"re":0.0,"im":0.0}"#
        );
    }
}
