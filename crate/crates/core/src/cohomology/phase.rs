use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// An element of ℚ/ℤ, read as the unit complex number `exp(2πi·num/den)`.
///
/// Always stored reduced with `0 <= num < den`, so derived equality and
/// hashing are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };
    pub const HALF: Phase = Phase { num: 1, den: 2 };

    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den > 0, "phase denominator must be positive");
        Self::reduce(num as i128, den as i128)
    }

    fn reduce(num: i128, den: i128) -> Phase {
        let n = num.rem_euclid(den);
        let g = n.gcd(&den);
        let (n, d) = if n == 0 { (0, 1) } else { (n / g, den / g) };
        Phase {
            num: n as i64,
            den: d as i64,
        }
    }

    pub fn zero() -> Phase {
        Self::ZERO
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Integer multiple `k·self`.
    pub fn scale(self, k: i64) -> Phase {
        Self::reduce(self.num as i128 * k as i128, self.den as i128)
    }

    /// Some `x` with `k·x = self`; the one with the smallest representative.
    pub fn div_int(self, k: i64) -> Phase {
        assert!(k != 0, "division of a phase by zero");
        let (num, den) = if k < 0 { (-self.num, self.den) } else { (self.num, self.den) };
        Self::reduce(num as i128, den as i128 * k.unsigned_abs() as i128)
    }

    /// Value in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_complex(self) -> Complex64 {
        // exact values on the real and imaginary axes
        match (self.num, self.den) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            _ => Complex64::from_polar(1.0, std::f64::consts::TAU * self.to_f64()),
        }
    }

    /// Multiplicative order of `exp(2πi·self)`.
    pub fn order(self) -> i64 {
        self.den
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        let (a, b, c, d) = (self.num as i128, self.den as i128, o.num as i128, o.den as i128);
        let l = b.lcm(&d);
        Phase::reduce(a * (l / b) + c * (l / d), l)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, o: Phase) -> Phase {
        self + (-o)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::reduce(-(self.num as i128), self.den as i128)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, o: Phase) {
        *self = *self + o;
    }
}

impl SubAssign for Phase {
    fn sub_assign(&mut self, o: Phase) {
        *self = *self - o;
    }
}

impl Mul<Phase> for i64 {
    type Output = Phase;
    fn mul(self, p: Phase) -> Phase {
        p.scale(self)
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, |a, b| a + b)
    }
}

impl Ord for Phase {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.num as i128 * o.den as i128).cmp(&(o.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Phase {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduction() {
        assert_eq!(Phase::new(3, 6), Phase::HALF);
        assert_eq!(Phase::new(-1, 4), Phase::new(3, 4));
        assert_eq!(Phase::new(5, 5), Phase::ZERO);
        assert_eq!(Phase::new(0, 7).denominator(), 1);
    }

    #[test]
    fn n_times_one_over_n_vanishes() {
        for n in 1..40 {
            assert!(Phase::new(1, n).scale(n).is_zero());
        }
    }

    #[test]
    fn complex_values() {
        assert_eq!(Phase::HALF.to_complex(), Complex64::new(-1.0, 0.0));
        let z = Phase::new(1, 3).to_complex();
        assert!((z.norm() - 1.0).abs() < 1e-15);
        assert!((z.re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn division_inverts_scaling() {
        let p = Phase::new(3, 8);
        assert_eq!(p.div_int(3).scale(3), p);
        assert_eq!(p.div_int(-2).scale(-2), p);
    }

    fn phase() -> impl Strategy<Value = Phase> {
        (0i64..200, 1i64..60).prop_map(|(n, d)| Phase::new(n, d))
    }

    proptest! {
        #[test]
        fn addition_is_associative(a in phase(), b in phase(), c in phase()) {
            prop_assert_eq!((a + b) + c, a + (b + c));
        }

        #[test]
        fn negation_is_inverse(a in phase()) {
            prop_assert!((a + (-a)).is_zero());
            prop_assert_eq!(a - a, Phase::ZERO);
        }

        #[test]
        fn complex_is_multiplicative(a in phase(), b in phase()) {
            let lhs = (a + b).to_complex();
            let rhs = a.to_complex() * b.to_complex();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
