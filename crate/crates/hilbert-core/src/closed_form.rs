//! Closed formulas, generating functions and recursions for the chain
//! counting families `h2`, `h3`, `P1` and `P2`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::{
    binomial, binomial_ext, det2x2_series, RationalGeneratingFunction, Rational, TruncatedSeries,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("determinant numerator is not divisible by t")]
    NotDivisibleByT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    H2,
    H3,
    P1,
    P2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ChainCountKey {
    pub family: Family,
    pub m: i64,
    pub n: i64,
    pub rho: Option<i64>,
    pub xi: Option<i64>,
}

impl ChainCountKey {
    pub fn validate(&self) -> Result<(), ClosedFormError> {
        if self.m < 1 || self.n < 1 {
            return Err(ClosedFormError::OutOfRange(format!(
                "m = {}, n = {} must be positive",
                self.m, self.n
            )));
        }
        match self.family {
            Family::H2 | Family::H3 => Ok(()),
            Family::P1 => check_xi(self.xi, self.n + 1),
            Family::P2 => {
                check_xi(self.xi, self.n)?;
                match self.rho {
                    Some(r) if (1..=self.m).contains(&r) => Ok(()),
                    other => Err(ClosedFormError::OutOfRange(format!(
                        "rho = {:?} must lie in [1, {}]",
                        other, self.m
                    ))),
                }
            }
        }
    }

    /// The generating function of this family, via the series closed forms.
    pub fn series(&self) -> Result<RationalGeneratingFunction, ClosedFormError> {
        self.validate()?;
        match self.family {
            Family::H2 => Ok(s2_series(self.m, self.n)),
            Family::H3 => s3_series(self.m, self.n),
            Family::P1 => p1_series(self.m, self.n, self.xi.unwrap_or(1)),
            Family::P2 => p2_series_closed(self.m, self.n, self.rho.unwrap_or(1), self.xi.unwrap_or(1)),
        }
    }

    pub fn deg_lc(&self) -> Result<DegLcReport, ClosedFormError> {
        self.validate()?;
        match self.family {
            Family::H2 => Ok(h2_deg_lc(self.m, self.n)),
            Family::H3 => p1_deg_lc(self.m, self.n, 1),
            Family::P1 => p1_deg_lc(self.m, self.n, self.xi.unwrap_or(1)),
            Family::P2 => p2_deg_lc(self.m, self.n, self.rho.unwrap_or(1), self.xi.unwrap_or(1)),
        }
    }
}

fn check_xi(xi: Option<i64>, hi: i64) -> Result<(), ClosedFormError> {
    match xi {
        Some(x) if (1..=hi).contains(&x) => Ok(()),
        other => Err(ClosedFormError::OutOfRange(format!(
            "xi = {:?} must lie in [1, {}]",
            other, hi
        ))),
    }
}

/// Degree in `r` and `lc * degree!` of a counting polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegLcReport {
    pub degree_in_r: u32,
    #[serde(serialize_with = "crate::closed_form::ser_big")]
    pub lc_times_factorial: BigInt,
}

pub(crate) fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn h2_closed(m: i64, n: i64, r: i64) -> BigInt {
    if m <= 0 || n <= 0 || r < 0 {
        return BigInt::zero();
    }
    binomial(m - 1 + r, m - 1) * binomial(n - 1 + r, n - 1)
}

/// `sum_r C(m-1,r) C(n-1,r) t^r / (1-t)^(m+n-1)`; zero when `m <= 0` or `n <= 0`.
pub fn s2_series(m: i64, n: i64) -> RationalGeneratingFunction {
    if m <= 0 || n <= 0 {
        return RationalGeneratingFunction::zero();
    }
    let num = (0..m.min(n))
        .map(|r| binomial(m - 1, r) * binomial(n - 1, r))
        .collect();
    RationalGeneratingFunction::new(num, (m + n - 1) as u32)
}

/// Series with coefficients `f(r)` for `r <= order`; `f` must vanish beyond
/// the polynomial degree for the result to be exact.
fn entry(order: usize, f: impl Fn(i64) -> BigInt) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, f)
}

fn trimmed(series: &TruncatedSeries) -> Vec<BigInt> {
    let mut v = series.coefficients().to_vec();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Generating function of `h3(m, n, r)`: a 2x2 determinant of series divided by `t`,
/// over `(1-t)^(2(m+n-2))`.
pub fn s3_series(m: i64, n: i64) -> Result<RationalGeneratingFunction, ClosedFormError> {
    if m <= 0 || n <= 0 {
        return Ok(RationalGeneratingFunction::zero());
    }
    if m == 1 || n == 1 {
        // one row or one column: every monomial avoids chains
        return Ok(RationalGeneratingFunction::pure_pole((m * n) as u32));
    }
    let order = 2 * (m + n) as usize + 4;
    let e = |i: i64, j: i64| entry(order, move |r| binomial_ext(m - i, r) * binomial_ext(n - j, r));
    let det = det2x2_series(&e(1, 1), &e(1, 2), &e(2, 1), &e(2, 2));
    let num = det.divide_by_t().map_err(|_| ClosedFormError::NotDivisibleByT)?;
    Ok(RationalGeneratingFunction::new(
        trimmed(&num),
        (2 * (m + n - 2)) as u32,
    ))
}

/// Generating function of `P2(m, n, rho, xi, r)` in `r`.
pub fn p2_series_closed(
    m: i64,
    n: i64,
    rho: i64,
    xi: i64,
) -> Result<RationalGeneratingFunction, ClosedFormError> {
    ChainCountKey {
        family: Family::P2,
        m,
        n,
        rho: Some(rho),
        xi: Some(xi),
    }
    .validate()?;
    let order = 2 * (m + n + rho) as usize + 6;
    let b = binomial_ext;
    let a = entry(order, |r| b(m - 2, r) * b(n - xi, r));
    let bb = entry(order, |r| b(m - 2, r - 1) * b(n - xi + 1, r));
    let c = entry(order, |r| b(rho - 1, r + 1) * b(n - 2, r));
    let d = entry(order, |r| b(rho - 1, r) * b(n - 1, r));
    let det = det2x2_series(&a, &bb, &c, &d);
    Ok(RationalGeneratingFunction::new(
        trimmed(&det),
        (m + 2 * n + rho - xi - 2) as u32,
    ))
}

/// Generating function of `P1(m, n, xi, r)`; `xi = n + 1` gives the 2-minor series.
pub fn p1_series(m: i64, n: i64, xi: i64) -> Result<RationalGeneratingFunction, ClosedFormError> {
    ChainCountKey {
        family: Family::P1,
        m,
        n,
        rho: None,
        xi: Some(xi),
    }
    .validate()?;
    if xi > n {
        Ok(s2_series(m, n))
    } else {
        p2_series_closed(m, n, m, xi)
    }
}

type SeriesKey = (u8, i64, i64, i64, i64);

thread_local! {
    static SERIES_CACHE: RefCell<HashMap<SeriesKey, Rc<RationalGeneratingFunction>>> =
        RefCell::new(HashMap::new());
    static P1_MEMO: RefCell<HashMap<(i64, i64, i64, i64), BigInt>> = RefCell::new(HashMap::new());
    static P2_MEMO: RefCell<HashMap<(i64, i64, i64, i64, i64), BigInt>> =
        RefCell::new(HashMap::new());
}

fn cached_series(
    key: SeriesKey,
    build: impl FnOnce() -> RationalGeneratingFunction,
) -> Rc<RationalGeneratingFunction> {
    if let Some(gf) = SERIES_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return gf;
    }
    let gf = Rc::new(build());
    SERIES_CACHE.with(|c| c.borrow_mut().insert(key, gf.clone()));
    gf
}

pub fn h3_closed(m: i64, n: i64, r: i64) -> BigInt {
    if m <= 0 || n <= 0 || r < 0 {
        return BigInt::zero();
    }
    cached_series((0, m, n, 0, 0), || {
        s3_series(m, n).expect("h3 determinant divisible by t")
    })
    .coefficient(r as u64)
}

/// `P1` through its generating function; zero outside `m, n >= 1`.
pub fn p1_value(m: i64, n: i64, xi: i64, r: i64) -> BigInt {
    if m <= 0 || n <= 0 || r < 0 {
        return BigInt::zero();
    }
    let xi = xi.clamp(1, n + 1);
    cached_series((1, m, n, xi, 0), || p1_series(m, n, xi).expect("valid P1 key"))
        .coefficient(r as u64)
}

/// `P2` through its generating function; zero outside `m, n >= 1`.
pub fn p2_value(m: i64, n: i64, rho: i64, xi: i64, r: i64) -> BigInt {
    if m <= 0 || n <= 0 || r < 0 {
        return BigInt::zero();
    }
    cached_series((2, m, n, rho, xi), || {
        p2_series_closed(m, n, rho, xi).expect("valid P2 key")
    })
    .coefficient(r as u64)
}

/// Evaluator for the two recursions, memoized or not.
struct Recursion {
    memoize: bool,
}

impl Recursion {
    fn p1(&self, m: i64, n: i64, xi: i64, r: i64) -> BigInt {
        if m <= 0 || n <= 0 {
            return BigInt::zero();
        }
        if r == 0 {
            return BigInt::one();
        }
        if xi <= 2 {
            return h3_closed(m, n, r);
        }
        if xi > n {
            return h2_closed(m, n, r);
        }
        if r == 1 {
            return BigInt::from(m * n);
        }
        let key = (m, n, xi, r);
        if self.memoize {
            if let Some(v) = P1_MEMO.with(|c| c.borrow().get(&key).cloned()) {
                return v;
            }
        }
        let mut s = BigInt::zero();
        for r1 in 1..=r {
            let w = binomial(xi - 2 + r1, r1);
            for xp in 1..=m {
                let c = binomial(m - xp - 1 + r1, r1 - 1);
                if c.is_zero() {
                    continue;
                }
                s += &w * c * self.p1(n - xi + 1, m, m - xp + 1, r - r1);
            }
        }
        s += h3_closed(m, n - xi + 1, r);
        if self.memoize {
            P1_MEMO.with(|c| c.borrow_mut().insert(key, s.clone()));
        }
        s
    }

    fn p2(&self, m: i64, n: i64, rho: i64, xi: i64, r: i64) -> BigInt {
        if m <= 0 || n <= 0 {
            return BigInt::zero();
        }
        if r == 0 {
            return BigInt::one();
        }
        if rho == m {
            return self.p1(m, n, xi, r);
        }
        if xi == 1 {
            return self.p1(n, m, m - rho + 1, r);
        }
        if r == 1 {
            return BigInt::from(rho * n + (m - rho) * (n - xi + 1));
        }
        let key = (m, n, rho, xi, r);
        if self.memoize {
            if let Some(v) = P2_MEMO.with(|c| c.borrow().get(&key).cloned()) {
                return v;
            }
        }
        let mut s = BigInt::zero();
        for rp in 1..=rho {
            for xp in xi..=n {
                for r1 in 1..=r {
                    let w1 = binomial(m - rho - 1 + r1, r1) * binomial(xp - xi - 1 + r1, r1 - 1);
                    if w1.is_zero() {
                        continue;
                    }
                    for r2 in 1..=(r - r1) {
                        let w2 = binomial(rho - rp - 1 + r2, r2 - 1) * binomial(xi - 2 + r2, r2);
                        if w2.is_zero() {
                            continue;
                        }
                        s += &w1 * w2 * self.p2(rho, n - xi + 1, rp, xp - xi + 1, r - r1 - r2);
                    }
                }
            }
        }
        s += self.p1(rho, n, xi, r) + self.p1(n - xi + 1, m, m - rho + 1, r)
            - h3_closed(rho, n - xi + 1, r);
        if self.memoize {
            P2_MEMO.with(|c| c.borrow_mut().insert(key, s.clone()));
        }
        s
    }
}

pub fn p1_recursive(m: i64, n: i64, xi: i64, r: i64) -> Result<BigInt, ClosedFormError> {
    check_p1(m, n, xi, r)?;
    Ok(Recursion { memoize: true }.p1(m, n, xi, r))
}

pub fn p2_recursive(m: i64, n: i64, rho: i64, xi: i64, r: i64) -> Result<BigInt, ClosedFormError> {
    check_p2(m, n, rho, xi, r)?;
    Ok(Recursion { memoize: true }.p2(m, n, rho, xi, r))
}

/// Same recursion with no memo table; exponential, for cross-checks only.
pub fn p1_recursive_unmemoized(m: i64, n: i64, xi: i64, r: i64) -> Result<BigInt, ClosedFormError> {
    check_p1(m, n, xi, r)?;
    Ok(Recursion { memoize: false }.p1(m, n, xi, r))
}

pub fn p2_recursive_unmemoized(
    m: i64,
    n: i64,
    rho: i64,
    xi: i64,
    r: i64,
) -> Result<BigInt, ClosedFormError> {
    check_p2(m, n, rho, xi, r)?;
    Ok(Recursion { memoize: false }.p2(m, n, rho, xi, r))
}

fn check_r(r: i64) -> Result<(), ClosedFormError> {
    if r < 0 {
        return Err(ClosedFormError::OutOfRange(format!("r = {} is negative", r)));
    }
    Ok(())
}

fn check_p1(m: i64, n: i64, xi: i64, r: i64) -> Result<(), ClosedFormError> {
    check_r(r)?;
    ChainCountKey {
        family: Family::P1,
        m,
        n,
        rho: None,
        xi: Some(xi),
    }
    .validate()
}

fn check_p2(m: i64, n: i64, rho: i64, xi: i64, r: i64) -> Result<(), ClosedFormError> {
    check_r(r)?;
    ChainCountKey {
        family: Family::P2,
        m,
        n,
        rho: Some(rho),
        xi: Some(xi),
    }
    .validate()
}

fn integral(v: Rational) -> BigInt {
    assert!(v.is_integer(), "lc * degree! is not an integer: {}", v);
    v.to_integer()
}

fn rat(a: BigInt) -> Rational {
    Rational::from_integer(a)
}

pub fn h2_deg_lc(m: i64, n: i64) -> DegLcReport {
    DegLcReport {
        degree_in_r: (m + n - 2) as u32,
        lc_times_factorial: binomial(m + n - 2, m - 1),
    }
}

pub fn p1_deg_lc(m: i64, n: i64, xi: i64) -> Result<DegLcReport, ClosedFormError> {
    check_p1(m, n, xi, 0)?;
    if m == 1 || n == 1 {
        return Ok(DegLcReport {
            degree_in_r: (m + n - 2) as u32,
            lc_times_factorial: BigInt::one(),
        });
    }
    if xi > n {
        return Ok(h2_deg_lc(m, n));
    }
    let degree = if xi == 1 {
        2 * m + 2 * n - 5
    } else {
        2 * m + 2 * n - xi - 3
    };
    let lcf = if n < 3 {
        BigInt::one()
    } else if xi == 1 {
        integral(
            rat(binomial(m + n - 4, m - 2) * binomial(m + n - 3, n - 2))
                / rat(BigInt::from(n - 1)),
        )
    } else {
        integral(
            rat(BigInt::from(xi - 1) * binomial(m + n - xi - 2, m - 2) * binomial(m + n - 3, n - 2))
                / rat(BigInt::from(n - 1)),
        )
    };
    Ok(DegLcReport {
        degree_in_r: degree as u32,
        lc_times_factorial: lcf,
    })
}

pub fn p2_deg_lc(m: i64, n: i64, rho: i64, xi: i64) -> Result<DegLcReport, ClosedFormError> {
    check_p2(m, n, rho, xi, 0)?;
    if m == 1 || n == 1 {
        return Ok(DegLcReport {
            degree_in_r: (m + n - 2) as u32,
            lc_times_factorial: BigInt::one(),
        });
    }
    if rho == m {
        return p1_deg_lc(m, n, xi);
    }
    if xi == 1 {
        return p1_deg_lc(n, m, m - rho + 1);
    }
    let num = (m - rho) * (n - 1) + (rho - 1) * (xi - 1);
    let den = (m - 1) * (n - 1);
    let lcf = integral(
        rat(BigInt::from(num) * binomial(m + n - xi - 2, m - 2) * binomial(rho + n - 3, n - 2))
            / rat(BigInt::from(den)),
    );
    Ok(DegLcReport {
        degree_in_r: (m + 2 * n + rho - xi - 3) as u32,
        lc_times_factorial: lcf,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("identity ({identity}) fails at p = {p}, q = {q}, n = {n}: {lhs} != {rhs}")]
pub struct IdentityFailure {
    pub identity: u8,
    pub p: i64,
    pub q: i64,
    pub n: i64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// The five binomial summation identities for all `p, q, n <= limit`.
pub fn lemma24_identities_check(limit: i64) -> Result<(), IdentityFailure> {
    let c = binomial;
    for p in 0..=limit {
        for q in 0..=limit {
            for n in 0..=limit {
                let sides: [(BigInt, BigInt); 5] = [
                    ((0..=n).map(|r| c(p, r) * c(q, n - r)).sum(), c(p + q, n)),
                    (
                        (0..=n).map(|r| c(r, p) * c(n - r, q)).sum(),
                        c(n + 1, p + q + 1),
                    ),
                    ((0..=p).map(|r| c(p, r + n) * c(q, r)).sum(), c(p + q, q + n)),
                    (
                        (0..=n).map(|r| c(p + r, p) * c(n - r, q)).sum(),
                        c(p + n + 1, p + q + 1),
                    ),
                    (
                        (0..=n).map(|r| c(p + r, p) * c(n - r + q, q)).sum(),
                        c(p + q + n + 1, p + q + 1),
                    ),
                ];
                for (i, (lhs, rhs)) in sides.into_iter().enumerate() {
                    if lhs != rhs {
                        return Err(IdentityFailure {
                            identity: i as u8 + 1,
                            p,
                            q,
                            n,
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}
