use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use super::vector::QVector;
use crate::error::{Error, Result};

/// The closed segment `[a, b] = conv{a, b}`; a singleton when `a == b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: QVector,
    pub b: QVector,
}

impl Segment {
    pub fn new(a: QVector, b: QVector) -> Self {
        Segment { a, b }
    }

    /// The unique `alpha` with `x = (1 - alpha) a + alpha b`, if `x` lies on
    /// the line through a non-degenerate segment.
    fn coefficient(&self, x: &QVector) -> Option<Rational> {
        let dir = &self.b - &self.a;
        let k = dir.iter().position(|c| !c.is_zero())?;
        let alpha = (&x[k] - &self.a[k]) / &dir[k];
        (self.a.lerp(&self.b, &alpha) == *x).then_some(alpha)
    }

    pub fn contains(&self, x: &QVector) -> bool {
        if self.a == self.b {
            return *x == self.a;
        }
        self.coefficient(x)
            .is_some_and(|alpha| alpha >= Rational::zero() && alpha <= Rational::one())
    }

    /// Membership in `ri [a, b]`: strictly between the endpoints, or the
    /// point itself for a singleton.
    pub fn relative_interior_contains(&self, x: &QVector) -> bool {
        in_relative_interior_of_segment(x, self)
    }
}

pub fn in_relative_interior_of_segment(x: &QVector, s: &Segment) -> bool {
    if s.a == s.b {
        return *x == s.a;
    }
    s.coefficient(x)
        .is_some_and(|alpha| alpha > Rational::zero() && alpha < Rational::one())
}

/// Given `x = (1 - alpha) u + alpha y` with `0 < alpha < 1`, returns
/// `v = (1 - alpha) u + alpha z`, which lies both in `ri [u, z]` and in
/// `ri [x, x + z - y]`.
pub fn xyzu_witness(
    y: &QVector,
    z: &QVector,
    u: &QVector,
    x: &QVector,
    alpha: &Rational,
) -> Result<QVector> {
    if *alpha <= Rational::zero() || *alpha >= Rational::one() {
        return Err(Error::InvalidWitness(format!(
            "alpha = {} is outside (0, 1)",
            format_rational(alpha)
        )));
    }
    let dims = [y.dim(), z.dim(), u.dim()];
    if let Some(&found) = dims.iter().find(|&&d| d != x.dim()) {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found,
        });
    }
    if u.lerp(y, alpha) != *x {
        return Err(Error::InvalidWitness(
            "x is not (1 - alpha) u + alpha y".into(),
        ));
    }
    Ok(u.lerp(z, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, rat};

    fn v(c: &[i64]) -> QVector {
        QVector::from_ints(c)
    }

    #[test]
    fn segment_relative_interior() {
        let s = Segment::new(v(&[0, 0]), v(&[2, 0]));
        assert!(in_relative_interior_of_segment(&v(&[1, 0]), &s));
        assert!(!in_relative_interior_of_segment(&v(&[0, 0]), &s));
        assert!(!in_relative_interior_of_segment(&v(&[2, 0]), &s));
        assert!(!in_relative_interior_of_segment(&v(&[3, 0]), &s));
        assert!(!in_relative_interior_of_segment(&v(&[1, 1]), &s));
        assert!(s.contains(&v(&[0, 0])));

        let point = Segment::new(v(&[1, 1]), v(&[1, 1]));
        assert!(in_relative_interior_of_segment(&v(&[1, 1]), &point));
        assert!(!in_relative_interior_of_segment(&v(&[1, 2]), &point));
    }

    #[test]
    fn witness_examples() {
        let x = v(&[4, -1]);
        assert_eq!(xyzu_witness(&x, &x, &x, &x, &rat(1, 2)).unwrap(), x);

        let (y, u, x, z) = (v(&[0, 0]), v(&[2, 0]), v(&[1, 0]), v(&[0, 2]));
        let w = xyzu_witness(&y, &z, &u, &x, &rat(1, 2)).unwrap();
        assert_eq!(w, v(&[1, 1]));
        assert!(in_relative_interior_of_segment(
            &w,
            &Segment::new(u.clone(), z.clone())
        ));
        let far = &(&x + &z) - &y;
        assert!(in_relative_interior_of_segment(
            &w,
            &Segment::new(x.clone(), far)
        ));
    }

    #[test]
    fn witness_rejects_bad_alpha() {
        let (y, u, x, z) = (v(&[0, 0]), v(&[2, 0]), v(&[1, 0]), v(&[0, 2]));
        assert!(xyzu_witness(&y, &z, &u, &x, &int(1)).is_err());
        assert!(xyzu_witness(&y, &z, &u, &x, &int(0)).is_err());
        assert!(xyzu_witness(&y, &z, &u, &x, &rat(1, 3)).is_err());
    }
}
