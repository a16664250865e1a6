use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, int, serde_rational::RationalText, to_f64, Rational};

/// A point or direction in `Q^n`.
///
/// Ordering is lexicographic over the coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        QVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = int(1);
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVector(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, k: &Rational) -> QVector {
        QVector(self.0.iter().map(|c| c * k).collect())
    }

    /// `(1 - alpha) * self + alpha * other`
    pub fn lerp(&self, other: &QVector, alpha: &Rational) -> QVector {
        let beta = int(1) - alpha;
        QVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a * &beta + b * alpha)
                .collect(),
        )
    }

    /// Appends one coordinate.
    pub fn extended(&self, last: Rational) -> QVector {
        let mut coords = self.0.clone();
        coords.push(last);
        QVector(coords)
    }

    /// Exact squared Euclidean norm.
    pub fn norm_squared(&self) -> Rational {
        self.dot(self)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    /// Uniform average of a nonempty set of points.
    pub fn mean<'a>(points: impl IntoIterator<Item = &'a QVector>) -> Option<QVector> {
        let mut iter = points.into_iter();
        let first = iter.next()?.clone();
        let mut count = 1i64;
        let sum = iter.fold(first, |acc, p| {
            count += 1;
            &acc + p
        });
        Some(sum.scale(&Rational::new(1.into(), count.into())))
    }

    pub fn max_abs(&self) -> Rational {
        self.0
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl From<Vec<Rational>> for QVector {
    fn from(v: Vec<Rational>) -> Self {
        QVector(v)
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl Index<usize> for QVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl<'a> IntoIterator for &'a QVector {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Add for &QVector {
    type Output = QVector;

    fn add(self, rhs: &QVector) -> QVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVector {
    type Output = QVector;

    fn sub(self, rhs: &QVector) -> QVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVector {
    type Output = QVector;

    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Rational> for &QVector {
    type Output = QVector;

    fn mul(self, k: &Rational) -> QVector {
        self.scale(k)
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(c))?;
        }
        f.write_str(")")
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<RationalText>::deserialize(d)?;
        raw.into_iter()
            .map(|t| t.into_rational().map_err(de::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(QVector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    #[test]
    fn arithmetic() {
        let a = QVector::from_ints(&[1, 2]);
        let b = QVector::from_ints(&[3, -1]);
        assert_eq!(&a + &b, QVector::from_ints(&[4, 1]));
        assert_eq!(&a - &b, QVector::from_ints(&[-2, 3]));
        assert_eq!(a.dot(&b), int(1));
        assert_eq!(
            a.lerp(&b, &rat(1, 2)),
            QVector::new(vec![int(2), rat(1, 2)])
        );
        assert_eq!(
            QVector::mean([&a, &b]).unwrap(),
            QVector::new(vec![int(2), rat(1, 2)])
        );
    }

    #[test]
    fn json_form() {
        let v = QVector::new(vec![rat(3, 1), rat(-1, 2)]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["3","-1/2"]"#);
        let back: QVector = serde_json::from_str(r#"["3", "-2/4"]"#).unwrap();
        assert_eq!(back, v);
        let ints: QVector = serde_json::from_str("[3, 0]").unwrap();
        assert_eq!(ints, QVector::from_ints(&[3, 0]));
        assert!(serde_json::from_str::<QVector>(r#"["1/0"]"#).is_err());
    }
}
