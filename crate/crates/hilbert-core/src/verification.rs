//! Sweeps that cross-check closed forms, recursions and series against the
//! brute-force counters and enumeration oracles.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::chain_enum::{BruteCounter, EnumError, LadderShape};
use crate::closed_form::{
    h2_closed, h3_closed, lemma24_identities_check, p1_deg_lc, p1_series, p2_deg_lc,
    p2_recursive, p2_series_closed, p1_recursive, s2_series,
};
use crate::exact_arith::{binomial, binomial_ext, factorial, Rational};
use crate::module_analyzer::{
    equal_nonpositive_value, equal_positive_value, generator_case, generator_polynomial,
    ladder_table, lc_ratio_theorem3, oracle_top_block_count, reflect_params, stable_interpolant,
    listed_equality_cases, top_block_value, validate_params, variety_degree, variety_degree_fractional_form,
    variety_polynomial, variety_report, AnalysisOptions, EqualOracle, GeneratorCase,
    GeneratorEvaluator, MixedOracle, ModuleError, ModuleParams, OmegaOracle, Verdict,
};

const MAX_FAILURES: usize = 20;

/// Outcome of one sweep: how many comparisons ran and the first failures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn new(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < MAX_FAILURES {
            self.failures.push(context());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn absorb(&mut self, other: CheckReport) {
        self.checks += other.checks;
        for f in other.failures {
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(format!("{}: {}", other.name, f));
            }
        }
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// Brute counts on the `[1, max]^2` sweep against closed forms, recursions
/// and series coefficients; the second report holds the boundary identities
/// evaluated on the brute counts alone.
pub fn chain_sweep(
    max: i64,
    rmax: i64,
    budget: u64,
) -> Result<(CheckReport, CheckReport), EnumError> {
    let brute = BruteCounter::new(budget);
    let mut conc = CheckReport::new("chain concordance");
    let mut bound = CheckReport::new("boundary identities");
    let mut h2 = HashMap::new();
    let mut h3 = HashMap::new();
    let mut p1 = HashMap::new();
    let mut p2 = HashMap::new();
    for m in 1..=max {
        for n in 1..=max {
            let s2 = s2_series(m, n);
            for r in 0..=rmax {
                let b = big(brute.h2(m, n, r as usize)?);
                conc.check(b == h2_closed(m, n, r) && b == s2.coefficient(r as u64), || {
                    format!("h2({},{},{}) brute {}", m, n, r, b)
                });
                h2.insert((m, n, r), b);
                let b = big(brute.h3(m, n, r as usize)?);
                conc.check(b == h3_closed(m, n, r), || {
                    format!("h3({},{},{}) brute {} closed {}", m, n, r, b, h3_closed(m, n, r))
                });
                h3.insert((m, n, r), b);
            }
            for xi in 1..=n + 1 {
                let series = p1_series(m, n, xi).expect("valid P1 key");
                for r in 0..=rmax {
                    let b = big(brute.p1(m, n, xi, r as usize)?);
                    let rv = p1_recursive(m, n, xi, r).expect("valid P1 key");
                    let sv = series.coefficient(r as u64);
                    conc.check(b == rv && b == sv, || {
                        format!("P1({},{},{},{}) brute {} recursion {} series {}", m, n, xi, r, b, rv, sv)
                    });
                    p1.insert((m, n, xi, r), b);
                }
            }
            for rho in 1..=m {
                for xi in 1..=n {
                    let series = p2_series_closed(m, n, rho, xi).expect("valid P2 key");
                    for r in 0..=rmax {
                        let b = big(brute.p2(m, n, rho, xi, r as usize)?);
                        let rv = p2_recursive(m, n, rho, xi, r).expect("valid P2 key");
                        let sv = series.coefficient(r as u64);
                        conc.check(b == rv && b == sv, || {
                            format!(
                                "P2({},{},{},{},{}) brute {} recursion {} series {}",
                                m, n, rho, xi, r, b, rv, sv
                            )
                        });
                        p2.insert((m, n, rho, xi, r), b);
                    }
                }
            }
        }
    }
    for m in 1..=max {
        for n in 1..=max {
            for r in 0..=rmax {
                for xi in 1..=n.min(2) {
                    bound.check(p1[&(m, n, xi, r)] == h3[&(m, n, r)], || {
                        format!("P1({},{},{},{}) != h3", m, n, xi, r)
                    });
                }
                bound.check(p1[&(m, n, n + 1, r)] == h2[&(m, n, r)], || {
                    format!("P1({},{},{},{}) != h2", m, n, n + 1, r)
                });
                for xi in 1..=n {
                    bound.check(p2[&(m, n, m, xi, r)] == p1[&(m, n, xi, r)], || {
                        format!("P2({},{},{},{},{}) != P1", m, n, m, xi, r)
                    });
                }
                for rho in 1..=m {
                    bound.check(p2[&(m, n, rho, 1, r)] == p1[&(n, m, m - rho + 1, r)], || {
                        format!("P2({},{},{},1,{}) != P1({},{},{})", m, n, rho, r, n, m, m - rho + 1)
                    });
                    for xi in 1..=n {
                        let other = p2[&(n, m, n - xi + 1, m - rho + 1, r)].clone();
                        bound.check(p2[&(m, n, rho, xi, r)] == other, || {
                            format!("P2({},{},{},{},{}) not symmetric", m, n, rho, xi, r)
                        });
                    }
                }
            }
        }
    }
    Ok((conc, bound))
}

/// Degrees and `lc * deg!` of polynomials interpolated from recursion values
/// against the closed degree/lc formulas, for `2 <= m, n <= max`.
pub fn degree_lc_sweep(max: i64) -> CheckReport {
    let mut rep = CheckReport::new("degree and leading coefficient");
    let mut compare = |label: String, want_deg: u32, want_lcf: BigInt, f: &dyn Fn(i64) -> BigInt| {
        let fit = stable_interpolant(2 * max + 2, want_deg as usize + 1, f);
        match fit {
            Ok(poly) => {
                let deg = poly.degree().unwrap_or(0) as u32;
                let lcf = poly.leading_coefficient() * Rational::from_integer(factorial(deg as u64));
                rep.check(deg == want_deg && lcf == Rational::from_integer(want_lcf.clone()), || {
                    format!("{}: fitted degree {} lc*deg! {}, expected {} and {}", label, deg, lcf, want_deg, want_lcf)
                });
            }
            Err(e) => rep.check(false, || format!("{}: {}", label, e)),
        }
    };
    for m in 2..=max {
        for n in 2..=max {
            for xi in 1..=n + 1 {
                let want = p1_deg_lc(m, n, xi).expect("valid P1 key");
                compare(
                    format!("P1({},{},{})", m, n, xi),
                    want.degree_in_r,
                    want.lc_times_factorial,
                    &|r| p1_recursive(m, n, xi, r).expect("valid P1 key"),
                );
            }
            for rho in 1..=m {
                for xi in 1..=n {
                    let want = p2_deg_lc(m, n, rho, xi).expect("valid P2 key");
                    compare(
                        format!("P2({},{},{},{})", m, n, rho, xi),
                        want.degree_in_r,
                        want.lc_times_factorial,
                        &|r| p2_recursive(m, n, rho, xi, r).expect("valid P2 key"),
                    );
                }
            }
        }
    }
    rep
}

pub fn binomial_identity_sweep(limit: i64) -> CheckReport {
    let mut rep = CheckReport::new("binomial identities");
    let res = lemma24_identities_check(limit);
    rep.checks = 5 * ((limit + 1) * (limit + 1) * (limit + 1)) as u64;
    if let Err(e) = res {
        rep.failures.push(e.to_string());
    }
    rep
}

/// Every parameter point with `2 <= n <= nmax`, `|l1|, |l2| <= lmax` that
/// passes validation, in lexicographic order.
pub fn accepted_points(nmax: i64, lmax: i64) -> Vec<ModuleParams> {
    let mut out = Vec::new();
    for n in 2..=nmax {
        for n1 in 1..=n {
            for n2 in n1..=n {
                for l1 in -lmax..=lmax {
                    for l2 in -lmax..=lmax {
                        let p = ModuleParams { n, n1, n2, l1, l2 };
                        if validate_params(&p).is_accepted() {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Series coefficients against `P2` recursion values or brute 2-chain-free
/// grid counts, genus, and the degree as `Q(1)`, `(d-1)! lc` and the table.
pub fn variety_sweep(nmax: i64, lmax: i64, kmax: i64, budget: u64) -> Result<CheckReport, ModuleError> {
    let brute = BruteCounter::new(budget);
    let mut rep = CheckReport::new("variety layer");
    let mut seen = BTreeSet::new();
    for p in accepted_points(nmax, lmax) {
        let shape = (p.n, p.n1, p.n2);
        let report = variety_report(&p)?;
        rep.check(report.genus.is_one(), || format!("{}: genus {}", p, report.genus));
        if !seen.insert(shape) {
            continue;
        }
        let ModuleParams { n, n1, n2, .. } = p;
        for k in 0..=kmax {
            let want = if n2 < n {
                p2_recursive(n2, n - n1, n1, n2 - n1 + 1, k)
                    .map_err(|e| ModuleError::Structure(e.to_string()))?
            } else {
                big(brute.h2(n - n1, n1, k as usize)?)
            };
            let got = report.series.coefficient(k as u64);
            rep.check(got == want, || format!("{}: coefficient {} is {}, expected {}", p, k, got, want));
        }
        let d = report.krull_dim;
        let q1 = report.series.value_at_one();
        let lc = report.polynomial.leading_coefficient();
        let lcf = lc * Rational::from_integer(factorial(d as u64 - 1));
        let table = variety_degree(&p)?;
        rep.check(
            report.series.pole_order() == d
                && Rational::from_integer(q1.clone()) == lcf
                && q1 == table,
            || format!("{}: Q(1) = {}, (d-1)! lc = {}, table {}, pole {}", p, q1, lcf, table, report.series.pole_order()),
        );
        if let Some(frac) = variety_degree_fractional_form(&p) {
            rep.check(frac == Rational::from_integer(table.clone()), || {
                format!("{}: fractional degree form {} vs {}", p, frac, table)
            });
        }
    }
    Ok(rep)
}

/// Generator closed forms against their oracles for `k <= kmax`.
pub fn generator_sweep(nmax: i64, lmax: i64, kmax: i64, budget: u64) -> Result<CheckReport, ModuleError> {
    let mut rep = CheckReport::new("generator layer");
    for p in accepted_points(nmax, lmax) {
        let case = generator_case(&p)?;
        let (formula, oracle): (Vec<BigInt>, Vec<BigInt>) = match case {
            GeneratorCase::TopBlock => (
                (0..=kmax).map(|k| top_block_value(&p, k)).collect(),
                (0..=kmax)
                    .map(|k| oracle_top_block_count(&p, k, budget))
                    .collect::<Result<_, _>>()?,
            ),
            GeneratorCase::EqualNonPositive => {
                let o = EqualOracle::new(&p, budget)?;
                (
                    (0..=kmax).map(|k| equal_nonpositive_value(&p, k)).collect(),
                    (0..=kmax).map(|k| o.count(k)).collect(),
                )
            }
            GeneratorCase::Mixed => {
                // No closed form away from l = 0; compare the oracle with its
                // own evaluation at the reflected point, and with P2 at l = 0.
                let o = MixedOracle::new(&p, budget)?;
                let r = MixedOracle::new(&reflect_params(&p), budget)?;
                let zero = ModuleParams { l1: 0, l2: 0, ..p };
                let z = MixedOracle::new(&zero, budget)?;
                for k in 0..=kmax {
                    let want = crate::closed_form::p2_value(p.n2, p.n - p.n1, p.n1, p.n2 - p.n1 + 1, k);
                    let got = z.count(k);
                    rep.check(got == want, || format!("{} at l = 0, k = {}: oracle {} vs P2 {}", p, k, got, want));
                }
                (
                    (0..=kmax).map(|k| o.count(k)).collect(),
                    (0..=kmax).map(|k| r.count(k)).collect(),
                )
            }
            GeneratorCase::EqualPositiveL2 | GeneratorCase::EqualPositiveL1 => {
                let e = GeneratorEvaluator::new(&p, budget)?;
                let q = if case == GeneratorCase::EqualPositiveL1 {
                    reflect_params(&p)
                } else {
                    p
                };
                let o = OmegaOracle::new(&q, budget)?;
                (
                    (0..=kmax).map(|k| e.value(k)).collect(),
                    (0..=kmax).map(|k| o.count(k)).collect(),
                )
            }
        };
        rep.check(formula == oracle, || {
            format!("{} case {}: formula {:?} oracle {:?}", p, case, strs(&formula), strs(&oracle))
        });
    }
    Ok(rep)
}

fn strs(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Which ladder reading reproduces the omega oracle at a point where the
/// candidate readings differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderArbitration {
    pub params: ModuleParams,
    pub k: i64,
    pub oracle: String,
    pub chain_free_reading: String,
    pub literal_reading: String,
}

pub fn ladder_arbitration(budget: u64) -> Result<LadderArbitration, ModuleError> {
    let p = ModuleParams { n: 5, n1: 4, n2: 4, l1: -3, l2: 3 };
    let k = 1;
    let oracle = OmegaOracle::new(&p, budget)?.count(k);
    let chain_free = ladder_table(p.n1, p.l2, budget)?;
    let mut literal = HashMap::new();
    for (&(s1, t1), _) in chain_free.iter() {
        let cells = LadderShape::new(s1, t1).map(|l| l.cells().len()).unwrap_or(0) as i64;
        literal.insert((s1, t1), binomial(cells + p.l2 - 2, p.l2 - 1));
    }
    let a = equal_positive_value(p.n, p.n1, p.l1, p.l2, k, &chain_free);
    let b = equal_positive_value(p.n, p.n1, p.l1, p.l2, k, &literal);
    Ok(LadderArbitration {
        params: p,
        k,
        oracle: oracle.to_string(),
        chain_free_reading: a.to_string(),
        literal_reading: b.to_string(),
    })
}

/// Results of comparing every accepted point's generator polynomial with
/// the variety polynomial.
#[derive(Debug, Clone)]
pub struct InequalitySweep {
    pub inequality: CheckReport,
    pub lc_ratio: CheckReport,
    pub equality_cases: BTreeSet<u8>,
    /// Points the lc-ratio table has no row for.
    pub uncovered: Vec<ModuleParams>,
}

pub fn inequality_sweep(nmax: i64, lmax: i64, budget: u64) -> Result<InequalitySweep, ModuleError> {
    let opts = AnalysisOptions {
        budget,
        stabilization: None,
    };
    let mut ineq = CheckReport::new("generator inequality");
    let mut ratio = CheckReport::new("lc ratio");
    let mut cases = BTreeSet::new();
    let mut uncovered = Vec::new();
    for p in accepted_points(nmax, lmax) {
        let g = generator_polynomial(&p, 0, &opts)?;
        ineq.check(g.window_dominated, || format!("{}: generator values fall below the variety polynomial", p));
        ineq.check(g.window_equal == g.equality.is_equality(), || {
            format!("{}: window equality {} but verdict {}", p, g.window_equal, g.equality)
        });
        ineq.check(!g.window_equal || !listed_equality_cases(&p).is_empty(), || {
            format!("{}: equality outside the listed cases", p)
        });
        if let (true, Verdict::Equality { cases: c }) = (g.window_equal, &g.equality) {
            cases.extend(c.iter().copied());
        }
        match lc_ratio_theorem3(&p) {
            Ok(want) => ratio.check(g.lc_ratio == want, || {
                format!("{}: lc ratio {} vs table {}", p, g.lc_ratio, want)
            }),
            Err(_) => uncovered.push(p),
        }
        let poly = variety_polynomial(&p)?;
        ratio.check(!poly.leading_coefficient().is_zero(), || format!("{}: zero variety polynomial", p));
    }
    Ok(InequalitySweep {
        inequality: ineq,
        lc_ratio: ratio,
        equality_cases: cases,
        uncovered,
    })
}

/// Ladder counts with one column, genus and the single degree value.
pub fn anchored_values(budget: u64) -> Result<CheckReport, ModuleError> {
    let brute = BruteCounter::new(budget);
    let mut rep = CheckReport::new("anchored values");
    for p in 1..=6 {
        for r in 0..=6 {
            let got = big(brute.p3(p, 1, r as usize)?);
            let want = binomial_ext(p + r - 2, r);
            rep.check(got == want, || format!("P3({},1,{}) = {}, expected {}", p, r, got, want));
        }
    }
    for p in accepted_points(6, 3) {
        let g = variety_report(&p)?.genus;
        rep.check(g.is_one(), || format!("{}: genus {}", p, g));
    }
    let p = ModuleParams { n: 5, n1: 2, n2: 3, l1: -1, l2: -1 };
    let d = variety_degree(&p)?;
    rep.check(d == BigInt::from(3), || format!("degree at {} is {}", p, d));
    Ok(rep)
}
