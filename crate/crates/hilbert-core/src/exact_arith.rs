//! Exact arithmetic substrate: binomials, rational polynomials in `k`,
//! truncated power series in `t` and rational generating functions
//! `Q(t)/(1-t)^d`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("polynomial part only; Hilbert polynomial is zero")]
    PolynomialPartOnly,
    #[error("numerator is not divisible by t")]
    NotDivisibleByT,
}

/// `C(a, b)` with the convention that it vanishes whenever `a < 0`, `b < 0`
/// or `b > a`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    falling_over_factorial(a, b.min(a - b))
}

/// Binomial with arbitrary integer upper index:
/// `a (a-1) ... (a-b+1) / b!` for `b >= 0`, zero for `b < 0`.
///
/// Agrees with [`binomial`] whenever `a >= 0`; differs for negative `a`,
/// e.g. `C(-1, b) = (-1)^b`.
pub fn binomial_ext(a: i64, b: i64) -> BigInt {
    if b < 0 {
        return BigInt::zero();
    }
    if a >= 0 {
        return binomial(a, b);
    }
    // C(a, b) = (-1)^b C(b - a - 1, b)
    let v = binomial(b - a - 1, b);
    if b % 2 == 0 {
        v
    } else {
        -v
    }
}

fn falling_over_factorial(a: i64, b: i64) -> BigInt {
    if b <= 0 {
        return BigInt::one();
    }
    // small arguments stay in u128 until they would overflow
    let mut acc: u128 = 1;
    let mut i: i64 = 0;
    while i < b {
        let num = (a - i) as u128;
        match acc.checked_mul(num) {
            Some(v) => acc = v / (i as u128 + 1),
            None => break,
        }
        i += 1;
    }
    if i == b {
        return BigInt::from(acc);
    }
    let mut big = BigInt::from(acc);
    while i < b {
        big = big * BigInt::from(a - i) / BigInt::from(i + 1);
        i += 1;
    }
    big
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Polynomial in one variable with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Rational>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `k`.
    pub fn var() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_integers(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, k: i64) -> Rational {
        self.eval(&Rational::from_integer(k.into()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        let cs = (0..len)
            .map(|i| {
                self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
            })
            .collect();
        Self::new(cs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut cs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                cs[i + j] += a * b;
            }
        }
        Self::new(cs)
    }

    /// `C(k + shift, d)` as a polynomial in `k`.
    pub fn binomial_in_k(shift: i64, d: u32) -> Self {
        let mut p = Self::constant(Rational::one());
        for i in 0..d as i64 {
            let lin = Self::new(vec![
                Rational::from_integer((shift - i).into()),
                Rational::one(),
            ]);
            p = p.mul(&lin);
        }
        p.scale(&Rational::new(BigInt::one(), factorial(d as u64)))
    }

    /// Newton interpolation through integer points with distinct abscissae.
    pub fn interpolate(points: &[(i64, BigInt)]) -> Self {
        let n = points.len();
        let xs: Vec<Rational> = points
            .iter()
            .map(|(x, _)| Rational::from_integer((*x).into()))
            .collect();
        let mut table: Vec<Rational> = points
            .iter()
            .map(|(_, y)| Rational::from_integer(y.clone()))
            .collect();
        for level in 1..n {
            for i in (level..n).rev() {
                table[i] = (&table[i] - &table[i - 1]) / (&xs[i] - &xs[i - level]);
            }
        }
        let mut result = Self::zero();
        let mut basis = Self::constant(Rational::one());
        for (i, c) in table.iter().enumerate() {
            result = result.add(&basis.scale(c));
            let lin = Self::new(vec![-xs[i].clone(), Rational::one()]);
            basis = basis.mul(&lin);
        }
        result
    }

    /// Coefficients as exact decimal strings (`p` or `p/q`).
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if mag.is_integer() {
                        if !unit {
                            write!(f, "{}", mag)?;
                        }
                    } else {
                        write!(f, "({})", mag)?;
                    }
                    if i == 1 {
                        write!(f, "k")?;
                    } else {
                        write!(f, "k^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for UnivariatePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// Power series in `t` known exactly through `t^T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Pads with zeros or truncates so that exactly `order + 1` terms are kept.
    pub fn new(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order + 1, BigInt::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl Fn(i64) -> BigInt) -> Self {
        TruncatedSeries {
            coeffs: (0..=order as i64).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![BigInt::one()], order)
    }

    /// Expansion of `1/(1-t)^d`.
    pub fn inverse_power_of_one_minus_t(d: u32, order: usize) -> Self {
        if d == 0 {
            return Self::one(order);
        }
        Self::from_fn(order, |j| binomial(j + d as i64 - 1, d as i64 - 1))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.order().min(other.order());
        Self::from_fn(t, |i| &self.coeffs[i as usize] + &other.coeffs[i as usize])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let t = self.order().min(other.order());
        Self::from_fn(t, |i| &self.coeffs[i as usize] - &other.coeffs[i as usize])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let t = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); t + 1];
        for (i, a) in self.coeffs.iter().take(t + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(t + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Drops the constant term and shifts down; fails unless it is zero.
    pub fn divide_by_t(&self) -> Result<Self, ArithError> {
        if !self.coeffs[0].is_zero() {
            return Err(ArithError::NotDivisibleByT);
        }
        let t = self.order().saturating_sub(1);
        Ok(Self::new(self.coeffs[1..].to_vec(), t))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

/// `a*d - b*c`, truncated at the smallest order among the four.
pub fn det2x2_series(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    c: &TruncatedSeries,
    d: &TruncatedSeries,
) -> TruncatedSeries {
    a.mul(d).sub(&b.mul(c))
}

/// `numerator(t) / (1 - t)^pole_order` with an integer polynomial numerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalGeneratingFunction {
    numerator: Vec<BigInt>,
    pole_order: u32,
}

impl RationalGeneratingFunction {
    pub fn new(mut numerator: Vec<BigInt>, pole_order: u32) -> Self {
        while numerator.last().is_some_and(|c| c.is_zero()) {
            numerator.pop();
        }
        RationalGeneratingFunction {
            numerator,
            pole_order,
        }
    }

    pub fn zero() -> Self {
        Self::new(Vec::new(), 0)
    }

    /// `1/(1-t)^d`.
    pub fn pure_pole(d: u32) -> Self {
        Self::new(vec![BigInt::one()], d)
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    pub fn numerator_degree(&self) -> Option<usize> {
        self.numerator.len().checked_sub(1)
    }

    pub fn value_at_one(&self) -> BigInt {
        self.numerator.iter().sum()
    }

    /// Cancels common factors of `(1 - t)`.
    pub fn canonicalize(&self) -> Self {
        let mut num = self.numerator.clone();
        let mut d = self.pole_order;
        while d > 0 && !num.is_empty() && num.iter().sum::<BigInt>().is_zero() {
            // Q(t) = (1 - t) R(t) with R given by prefix sums of Q
            let mut acc = BigInt::zero();
            let mut r = Vec::with_capacity(num.len() - 1);
            for q in &num[..num.len() - 1] {
                acc += q;
                r.push(acc.clone());
            }
            num = r;
            d -= 1;
        }
        Self::new(num, d)
    }

    pub fn is_canonical(&self) -> bool {
        self.pole_order == 0 || self.is_zero() || !self.value_at_one().is_zero()
    }

    /// Coefficient of `t^k` in the expansion.
    pub fn coefficient(&self, k: u64) -> BigInt {
        let d = self.pole_order as i64;
        let k = k as i64;
        let mut acc = BigInt::zero();
        for (j, q) in self.numerator.iter().enumerate() {
            let j = j as i64;
            if j > k {
                break;
            }
            if d == 0 {
                if j == k {
                    acc += q;
                }
            } else {
                acc += q * binomial(k - j + d - 1, d - 1);
            }
        }
        acc
    }

    pub fn expand(&self, order: usize) -> TruncatedSeries {
        let num = TruncatedSeries::new(self.numerator.clone(), order);
        num.mul(&TruncatedSeries::inverse_power_of_one_minus_t(
            self.pole_order,
            order,
        ))
    }

    /// The Hilbert polynomial `p(k) = sum_j q_j C(k - j + d - 1, d - 1)`;
    /// agrees with [`Self::coefficient`] for every `k >= deg Q`.
    pub fn to_polynomial(&self) -> Result<UnivariatePolynomial, ArithError> {
        let c = self.canonicalize();
        if c.pole_order == 0 {
            return Err(ArithError::PolynomialPartOnly);
        }
        let d = c.pole_order;
        let mut p = UnivariatePolynomial::zero();
        for (j, q) in c.numerator.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let term = UnivariatePolynomial::binomial_in_k(d as i64 - 1 - j as i64, d - 1);
            p = p.add(&term.scale(&Rational::from_integer(q.clone())));
        }
        Ok(p)
    }

    pub fn numerator_strings(&self) -> Vec<String> {
        self.numerator.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for RationalGeneratingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, q) in self.numerator.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => q.to_string(),
                1 => format!("{}t", q),
                _ => format!("{}t^{}", q, i),
            });
        }
        let num = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        };
        write!(f, "({})/(1-t)^{}", num, self.pole_order)
    }
}

impl Serialize for RationalGeneratingFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RationalGeneratingFunction", 2)?;
        st.serialize_field("numerator", &self.numerator_strings())?;
        st.serialize_field("pole_order", &self.pole_order)?;
        st.end()
    }
}

pub fn gf_coefficient(gf: &RationalGeneratingFunction, k: u64) -> BigInt {
    gf.coefficient(k)
}

pub fn gf_to_polynomial(
    gf: &RationalGeneratingFunction,
) -> Result<UnivariatePolynomial, ArithError> {
    gf.to_polynomial()
}

pub fn gf_value_at_one(gf: &RationalGeneratingFunction) -> BigInt {
    gf.canonicalize().value_at_one()
}

pub fn leading_coefficient(p: &UnivariatePolynomial) -> Rational {
    p.leading_coefficient()
}

pub fn constant_term(p: &UnivariatePolynomial) -> Rational {
    p.constant_term()
}

/// `r * d!` as an integer when that product is integral.
pub fn times_factorial(r: &Rational, d: u64) -> Option<BigInt> {
    let v = r * Rational::from_integer(factorial(d));
    v.is_integer().then(|| v.to_integer())
}

pub fn rational_from_i64(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), b(10));
        assert_eq!(binomial(3, -1), b(0));
        assert_eq!(binomial(-1, 0), b(0));
        assert_eq!(binomial(2, 3), b(0));
        assert_eq!(binomial(60, 30), "118264581564861424".parse::<BigInt>().unwrap());
        assert_eq!(
            binomial(200, 100).to_string(),
            "90548514656103281165404177077484163874504589675413336841320"
        );
    }

    #[test]
    fn extended_binomial() {
        assert_eq!(binomial_ext(-1, 0), b(1));
        assert_eq!(binomial_ext(-1, 3), b(-1));
        assert_eq!(binomial_ext(-2, 2), b(3));
        assert_eq!(binomial_ext(4, 2), b(6));
        assert_eq!(binomial_ext(4, -1), b(0));
    }

    #[test]
    fn coefficient_extraction() {
        assert_eq!(RationalGeneratingFunction::pure_pole(2).coefficient(3), b(4));
        let g = RationalGeneratingFunction::new(vec![b(1), b(-1)], 1);
        assert_eq!(g.coefficient(5), b(0));
        assert_eq!(g.coefficient(0), b(1));
    }

    #[test]
    fn polynomial_from_gf() {
        let p = RationalGeneratingFunction::pure_pole(3).to_polynomial().unwrap();
        let expect = UnivariatePolynomial::new(vec![
            Rational::one(),
            rational_from_i64(3, 2),
            rational_from_i64(1, 2),
        ]);
        assert_eq!(p, expect);

        let g = RationalGeneratingFunction::new(vec![b(1), b(1)], 1);
        let p = g.to_polynomial().unwrap();
        assert_eq!(p, UnivariatePolynomial::from_integers(&[2]));
        assert_eq!(g.coefficient(0), b(1));

        let flat = RationalGeneratingFunction::new(vec![b(1), b(-1)], 1);
        assert_eq!(flat.to_polynomial(), Err(ArithError::PolynomialPartOnly));
    }

    #[test]
    fn value_at_one_and_lc() {
        let g = RationalGeneratingFunction::new(vec![b(2), b(1)], 3);
        assert_eq!(gf_value_at_one(&g), b(3));
        let p = UnivariatePolynomial::new(vec![Rational::one(), Rational::zero(), rational_from_i64(1, 2)]);
        assert_eq!(leading_coefficient(&p), rational_from_i64(1, 2));
        assert_eq!(constant_term(&p), Rational::one());
    }

    #[test]
    fn canonical_form_strips_common_factor() {
        // (1 - t^2)/(1-t)^3 = (1 + t)/(1-t)^2
        let g = RationalGeneratingFunction::new(vec![b(1), b(0), b(-1)], 3).canonicalize();
        assert_eq!(g, RationalGeneratingFunction::new(vec![b(1), b(1)], 2));
        assert!(g.is_canonical());
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let f = |k: i64| b(k * k * k - 2 * k + 7);
        let pts: Vec<_> = (3..7).map(|k| (k, f(k))).collect();
        let p = UnivariatePolynomial::interpolate(&pts);
        assert_eq!(p, UnivariatePolynomial::from_integers(&[7, -2, 0, 1]));
        assert_eq!(p.to_string(), "k^3 - 2k + 7");
    }

    #[test]
    fn series_arith() {
        let a = TruncatedSeries::new(vec![b(1), b(1)], 4);
        let inv = TruncatedSeries::inverse_power_of_one_minus_t(1, 4);
        let prod = a.mul(&inv);
        assert_eq!(prod.coefficients(), &[b(1), b(2), b(2), b(2), b(2)]);
        let t = TruncatedSeries::new(vec![b(0), b(3)], 3);
        assert_eq!(t.divide_by_t().unwrap().coefficients(), &[b(3), b(0), b(0)]);
        assert!(a.divide_by_t().is_err());
    }

    proptest! {
        #[test]
        fn pascal_rule(a in 1i64..80, bb in 1i64..80) {
            prop_assume!(bb <= a);
            prop_assert_eq!(binomial(a, bb), binomial(a - 1, bb) + binomial(a - 1, bb - 1));
        }

        #[test]
        fn polynomial_matches_coefficients(
            num in proptest::collection::vec(-5i64..6, 1..5),
            d in 1u32..6,
            offset in 0u64..10,
        ) {
            let g = RationalGeneratingFunction::new(num.iter().map(|&x| BigInt::from(x)).collect(), d);
            prop_assume!(!g.is_zero());
            if let Ok(p) = g.to_polynomial() {
                let k = g.numerator_degree().unwrap() as u64 + offset;
                prop_assert_eq!(p.eval_int(k as i64), Rational::from_integer(g.coefficient(k)));
            }
        }

        #[test]
        fn series_mul_assoc_comm(
            a in proptest::collection::vec(-9i64..10, 1..6),
            bs in proptest::collection::vec(-9i64..10, 1..6),
            c in proptest::collection::vec(-9i64..10, 1..6),
            t in 0usize..8,
        ) {
            let mk = |v: &Vec<i64>| TruncatedSeries::new(v.iter().map(|&x| BigInt::from(x)).collect(), t);
            let (a, bs, c) = (mk(&a), mk(&bs), mk(&c));
            prop_assert_eq!(a.mul(&bs), bs.mul(&a));
            prop_assert_eq!(a.mul(&bs).mul(&c), a.mul(&bs.mul(&c)));
        }
    }
}
