//! Vector algebra in Euclidean 4-space.
//!
//! The ternary product `a ∧ b ∧ c` is the cofactor expansion of the formal
//! determinant whose first row holds the basis vectors `e1..e4` and whose
//! remaining rows are `a`, `b`, `c`. It is alternating, trilinear and
//! orthogonal to each argument.

use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point or vector in E⁴.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec4 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl Vec4 {
    pub const ZERO: Vec4 = Vec4::new(0.0, 0.0, 0.0, 0.0);
    pub const E1: Vec4 = Vec4::new(1.0, 0.0, 0.0, 0.0);
    pub const E2: Vec4 = Vec4::new(0.0, 1.0, 0.0, 0.0);
    pub const E3: Vec4 = Vec4::new(0.0, 0.0, 1.0, 0.0);
    pub const E4: Vec4 = Vec4::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self { x1, x2, x3, x4 }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    /// Standard inner product.
    pub fn dot(self, other: Vec4) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3 + self.x4 * other.x4
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scale(self, k: f64) -> Vec4 {
        Vec4::new(k * self.x1, k * self.x2, k * self.x3, k * self.x4)
    }

    /// Unit vector in the direction of `self`, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec4> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }

    pub fn distance(self, other: Vec4) -> f64 {
        (self - other).norm()
    }

    /// Distance between the lines spanned by two vectors of equal norm:
    /// `min(‖a − b‖, ‖a + b‖)`, together with the sign that achieves it.
    pub fn distance_up_to_sign(self, other: Vec4) -> (f64, f64) {
        let plus = (self - other).norm();
        let minus = (self + other).norm();
        if plus <= minus {
            (plus, 1.0)
        } else {
            (minus, -1.0)
        }
    }

    /// Ternary vector product `a ∧ b ∧ c`.
    pub fn cross3(a: Vec4, b: Vec4, c: Vec4) -> Vec4 {
        Vec4::from_array(cofactor_cross(&a.to_array(), &b.to_array(), &c.to_array()))
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x1,
            1 => &self.x2,
            2 => &self.x3,
            3 => &self.x4,
            _ => panic!("Vec4 index {i} out of range"),
        }
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3, self.x4 + o.x4)
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3, self.x4 - o.x4)
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        self.scale(-1.0)
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        v.scale(self)
    }
}

pub fn dot(u: Vec4, v: Vec4) -> f64 {
    u.dot(v)
}

pub fn norm(u: Vec4) -> f64 {
    u.norm()
}

pub fn cross3(a: Vec4, b: Vec4, c: Vec4) -> Vec4 {
    Vec4::cross3(a, b, c)
}

/// Cofactor expansion of the formal determinant `|e; a; b; c|` along its
/// first row: 4 signed 3×3 minors of 6 triple products each.
///
/// Generic so the same expansion serves plain scalars and Taylor jets.
pub(crate) fn cofactor_cross<S>(a: &[S; 4], b: &[S; 4], c: &[S; 4]) -> [S; 4]
where
    S: Clone + Add<Output = S> + Sub<Output = S> + Neg<Output = S>,
    for<'x> &'x S: Mul<&'x S, Output = S>,
{
    // Rows of the 3x3 minor obtained by deleting column `skip`.
    let minor = |skip: usize| -> S {
        let cols: Vec<usize> = (0..4).filter(|&j| j != skip).collect();
        let (i, j, k) = (cols[0], cols[1], cols[2]);
        let m0 = (&b[j] * &c[k]) - (&b[k] * &c[j]);
        let m1 = (&b[i] * &c[k]) - (&b[k] * &c[i]);
        let m2 = (&b[i] * &c[j]) - (&b[j] * &c[i]);
        &a[i] * &m0 - &a[j] * &m1 + &a[k] * &m2
    };
    [minor(0), -minor(1), minor(2), -minor(3)]
}

/// Moving frame `{T, N, B, E}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame4 {
    pub t: Vec4,
    pub n: Vec4,
    pub b: Vec4,
    pub e: Vec4,
}

impl Frame4 {
    pub const IDENTITY: Frame4 = Frame4 {
        t: Vec4::E1,
        n: Vec4::E2,
        b: Vec4::E3,
        e: Vec4::E4,
    };

    pub fn new(t: Vec4, n: Vec4, b: Vec4, e: Vec4) -> Self {
        Self { t, n, b, e }
    }

    pub fn vectors(&self) -> [Vec4; 4] {
        [self.t, self.n, self.b, self.e]
    }

    /// Determinant of the matrix with rows `T, N, B, E`.
    pub fn det(&self) -> f64 {
        det4(self)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let v = self.vectors();
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in i..4 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v[i].dot(v[j]) - target).abs());
            }
        }
        worst
    }
}

/// Determinant of the 4×4 matrix with rows `T, N, B, E`, by Laplace
/// expansion along the first row.
pub fn det4(f: &Frame4) -> f64 {
    f.t.dot(Vec4::cross3(f.n, f.b, f.e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_examples() {
        assert_eq!(Vec4::E1.dot(Vec4::E1), 1.0);
        assert_eq!(Vec4::E1.dot(Vec4::E2), 0.0);
        assert_eq!(Vec4::new(1.0, 2.0, 3.0, 4.0).dot(Vec4::new(1.0, 1.0, 1.0, 1.0)), 10.0);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(Vec4::E3.norm(), 1.0);
        assert_eq!(Vec4::ZERO.norm(), 0.0);
        assert_eq!(Vec4::new(1.0, 1.0, 1.0, 1.0).norm(), 2.0);
    }

    #[test]
    fn basis_products_follow_the_determinant() {
        use Vec4 as V;
        assert_eq!(V::cross3(V::E2, V::E3, V::E4), V::E1);
        assert_eq!(V::cross3(V::E4, V::E1, V::E2), V::E3);
        // The remaining two cyclic triples pick up the sign of the cofactor.
        assert_eq!(V::cross3(V::E1, V::E2, V::E3), -V::E4);
        assert_eq!(V::cross3(V::E3, V::E4, V::E1), -V::E2);
    }

    #[test]
    fn repeated_argument_vanishes() {
        let a = Vec4::new(0.3, -1.2, 2.0, 0.7);
        let c = Vec4::new(1.0, 0.5, -0.25, 3.0);
        assert!(Vec4::cross3(a, a, c).max_abs() < 1e-14);
        assert!(Vec4::cross3(c, a, c).max_abs() < 1e-14);
    }

    #[test]
    fn det4_examples() {
        assert_eq!(det4(&Frame4::IDENTITY), 1.0);
        let swapped = Frame4::new(Vec4::E2, Vec4::E1, Vec4::E3, Vec4::E4);
        assert_eq!(det4(&swapped), -1.0);
        let repeated = Frame4::new(Vec4::E1, Vec4::E1, Vec4::E3, Vec4::E4);
        assert_eq!(det4(&repeated), 0.0);
    }

    #[test]
    fn up_to_sign_distance() {
        let (d, s) = Vec4::E1.distance_up_to_sign(-Vec4::E1);
        assert_eq!((d, s), (0.0, -1.0));
        let (d, s) = Vec4::E2.distance_up_to_sign(Vec4::E2);
        assert_eq!((d, s), (0.0, 1.0));
    }
}
