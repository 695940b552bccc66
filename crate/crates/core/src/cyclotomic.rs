//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! An element of order `N` is a rational combination of `1, ζ, …, ζ^{φ(N)-1}`
//! with `ζ = exp(2πi/N)`. Binary operations first lift both operands to the
//! field of the least common multiple of their orders.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cohomology::Phase;

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the cyclotomic polynomial Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    if let Some(p) = cache().lock().expect("poisoned cache").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            poly = divide_monic(&poly, &div);
        }
    }
    let poly = Arc::new(poly);
    cache().lock().expect("poisoned cache").insert(n, poly.clone());
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational64(q: Rational64) -> Self {
        Self::from_ratio(*q.numer(), *q.denom())
    }

    /// `exp(2πi·p)`
    pub fn root(p: Phase) -> Self {
        Self::from_phase_sum([(p, BigRational::one())])
    }

    /// `Σ c_k · exp(2πi·p_k)`
    pub fn from_phase_sum<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Phase, BigRational)>,
    {
        let terms: Vec<(Phase, BigRational)> = terms.into_iter().collect();
        let order = terms
            .iter()
            .fold(1u64, |acc, (p, _)| acc.lcm(&(p.denominator() as u64)));
        let mut poly = vec![BigRational::zero(); order as usize];
        for (p, c) in terms {
            let k = p.numerator() as u64 * (order / p.denominator() as u64);
            poly[k as usize] += c;
        }
        Self::reduce(order, poly)
    }

    /// Integer-weighted phase histogram, divided by `den`.
    pub fn from_phase_counts<I>(counts: I, den: i64) -> Self
    where
        I: IntoIterator<Item = (Phase, i64)>,
    {
        let d = BigInt::from(den);
        Self::from_phase_sum(
            counts
                .into_iter()
                .map(|(p, k)| (p, BigRational::new(k.into(), d.clone()))),
        )
    }

    fn reduce(order: u64, mut poly: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        for top in (deg..poly.len()).rev() {
            if poly[top].is_zero() {
                continue;
            }
            let c = poly[top].clone();
            for (i, &f) in phi.iter().enumerate() {
                if f != 0 {
                    poly[top - deg + i] -= &c * BigRational::from_integer(f.into());
                }
            }
        }
        poly.truncate(deg);
        if poly.is_empty() {
            poly.push(BigRational::zero());
        }
        Cyclotomic { order, coeffs: poly }
    }

    /// Re-expresses `self` in ℚ(ζ_m) for a multiple `m` of its order.
    fn lift(&self, m: u64) -> Self {
        if m == self.order {
            return self.clone();
        }
        debug_assert_eq!(m % self.order, 0);
        let step = (m / self.order) as usize;
        let mut poly = vec![BigRational::zero(); m as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Self::reduce(m, poly)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let z = Phase::new(k as i64, self.order as i64).to_complex();
                z * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn binary(&self, other: &Self) -> (Self, Self) {
        let m = self.order.lcm(&other.order);
        (self.lift(m), other.lift(m))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.coeffs.len();
        // column k of the multiplication matrix is self·ζ^k
        let columns: Vec<Vec<BigRational>> = (0..n)
            .map(|k| {
                let mut poly = vec![BigRational::zero(); self.order as usize + n];
                for (i, c) in self.coeffs.iter().enumerate() {
                    poly[i + k] = c.clone();
                }
                // fold ζ^{order} = 1 back before reducing
                let m = self.order as usize;
                for i in m..poly.len() {
                    let c = std::mem::take(&mut poly[i]);
                    poly[i - m] += c;
                }
                poly.truncate(m);
                Self::reduce(self.order, poly).coeffs
            })
            .collect();
        // solve M·y = e_0 by Gauss–Jordan elimination
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..n).map(|c| columns[c][r].clone()).collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, pivot);
            let p = aug[col][col].clone();
            for x in aug[col].iter_mut() {
                *x /= &p;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    let pivot_row = aug[col].clone();
                    for (x, y) in aug[r].iter_mut().zip(pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Some(Cyclotomic {
            order: self.order,
            coeffs: aug.into_iter().map(|mut row| row.pop().expect("augmented")).collect(),
        })
    }

    /// Largest absolute rational coefficient, for diagnostics.
    pub fn height(&self) -> BigRational {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.binary(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.binary(other);
        Cyclotomic {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, other: &Cyclotomic) -> Cyclotomic {
        self + &(-other)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = self.binary(other);
        let m = a.order as usize;
        let mut poly = vec![BigRational::zero(); m];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[(i + j) % m] += x * y;
                }
            }
        }
        Cyclotomic::reduce(a.order, poly)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, other: Cyclotomic) -> Cyclotomic {
                (&self).$f(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Cyclotomic {
        iter.fold(Cyclotomic::zero(), |a, b| &a + &b)
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c})·z{}^{k}", self.order)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for n in 2..13 {
            let s: Cyclotomic = (0..n).map(|k| Cyclotomic::root(Phase::new(k, n))).sum();
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn mixed_orders_compare_equal() {
        let minus_one = Cyclotomic::root(Phase::HALF);
        let i = Cyclotomic::root(Phase::new(1, 4));
        assert_eq!(&i * &i, minus_one);
        assert_eq!(minus_one, Cyclotomic::from_ratio(-1, 1));
        assert_eq!(minus_one.to_rational().unwrap(), BigRational::from_integer((-1).into()));
    }

    #[test]
    fn inverse_of_one_plus_zeta() {
        let x = &Cyclotomic::one() + &Cyclotomic::root(Phase::new(1, 5));
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, Cyclotomic::one());
        assert!(Cyclotomic::zero().inv().is_none());
    }

    fn element() -> impl Strategy<Value = Cyclotomic> {
        prop::collection::vec((0i64..24, prop::sample::select(vec![1i64, 2, 3, 4, 6, 8, 12]), -3i64..4), 1..5).prop_map(|terms| {
            Cyclotomic::from_phase_sum(
                terms
                    .into_iter()
                    .map(|(n, d, c)| (Phase::new(n, d), BigRational::from_integer(c.into()))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn complex_image_is_a_ring_map(a in element(), b in element()) {
            let s = (&a + &b).to_complex() - (a.to_complex() + b.to_complex());
            let p = (&a * &b).to_complex() - a.to_complex() * b.to_complex();
            prop_assert!(s.norm() < 1e-9);
            prop_assert!(p.norm() < 1e-9);
        }

        #[test]
        fn distributive(a in element(), b in element(), c in element()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn inverse_roundtrip(a in element()) {
            if let Some(b) = a.inv() {
                prop_assert_eq!(&a * &b, Cyclotomic::one());
            } else {
                prop_assert!(a.is_zero());
            }
        }
    }
}
