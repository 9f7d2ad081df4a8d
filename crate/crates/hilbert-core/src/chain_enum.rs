//! Grid monomials, chain patterns and brute-force counters.
//!
//! A monomial in the variables `z_{j,i}` is modelled as a multiset of
//! lattice cells. Every chain predicate here looks only at the support, so
//! a repeated cell never forms a chain with itself.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::binomial;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("enumeration budget exceeded: {needed} candidates requested, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cell {
    pub row: i64,
    pub col: i64,
}

impl Cell {
    pub const fn new(row: i64, col: i64) -> Self {
        Cell { row, col }
    }

    /// Strictly smaller in both coordinates.
    #[inline]
    pub fn precedes(&self, other: &Cell) -> bool {
        self.row < other.row && self.col < other.col
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GridMonomial {
    exponents: BTreeMap<Cell, u32>,
    degree: u32,
}

impl GridMonomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cells<I: IntoIterator<Item = Cell>>(cells: I) -> Self {
        let mut m = Self::new();
        for c in cells {
            m.push(c, 1);
        }
        m
    }

    pub fn push(&mut self, cell: Cell, mult: u32) {
        if mult == 0 {
            return;
        }
        *self.exponents.entry(cell).or_insert(0) += mult;
        self.degree += mult;
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn multiplicity(&self, cell: &Cell) -> u32 {
        self.exponents.get(cell).copied().unwrap_or(0)
    }

    /// Distinct cells in increasing order.
    pub fn support(&self) -> Vec<Cell> {
        self.exponents.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cell, &u32)> {
        self.exponents.iter()
    }
}

/// Length of the longest strict chain among distinct cells, capped at `cap`.
fn longest_chain(cells: &[Cell], cap: usize) -> usize {
    let mut sorted: Vec<Cell> = cells.to_vec();
    sorted.sort();
    let mut len = vec![1usize; sorted.len()];
    let mut best = usize::from(!sorted.is_empty());
    for i in 0..sorted.len() {
        for j in 0..i {
            if sorted[j].precedes(&sorted[i]) && len[j] + 1 > len[i] {
                len[i] = len[j] + 1;
            }
        }
        best = best.max(len[i]);
        if best >= cap {
            return best;
        }
    }
    best
}

pub fn support_has_3chain(support: &[Cell]) -> bool {
    support.len() >= 3 && longest_chain(support, 3) >= 3
}

pub fn support_has_2chain(support: &[Cell], region: impl Fn(&Cell) -> bool) -> bool {
    let inside: Vec<&Cell> = support.iter().filter(|c| region(c)).collect();
    inside
        .iter()
        .any(|a| inside.iter().any(|b| a.precedes(b)))
}

pub fn support_has_omega_2chain(support: &[Cell], n: i64) -> bool {
    support.iter().any(|a| {
        support
            .iter()
            .any(|b| a.col < b.col && a.row < b.row && b.row > n + 1)
    })
}

pub fn support_has_omega_3chain(support: &[Cell], n: i64, n1: i64) -> bool {
    for a in support {
        for b in support {
            if !(a.col < b.col && a.row < b.row && b.row <= n + 1) {
                continue;
            }
            if support
                .iter()
                .any(|c| c.col <= a.col && c.row > n + 1 && c.row < n + n1 + 2 - b.col)
            {
                return true;
            }
        }
    }
    false
}

pub fn has_3chain(m: &GridMonomial) -> bool {
    support_has_3chain(&m.support())
}

pub fn has_2chain(m: &GridMonomial, region: impl Fn(&Cell) -> bool) -> bool {
    support_has_2chain(&m.support(), region)
}

/// Two occurrences `(j1,i1), (j2,i2)` with `i1 < i2`, `j1 < j2` and `j2 > n+1`.
pub fn has_omega_2chain(m: &GridMonomial, n: i64) -> bool {
    support_has_omega_2chain(&m.support(), n)
}

/// Occurrences `k1, k2, k3` with `i3 <= i1 < i2` and
/// `j1 < j2 <= n+1 < j3 < n + n1 + 2 - i2`.
pub fn has_omega_3chain(m: &GridMonomial, n: i64, n1: i64) -> bool {
    support_has_omega_3chain(&m.support(), n, n1)
}

/// The staircase `O_{p,q} = {(s,t) : 1 <= t <= q, 1 <= s <= p - t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderShape {
    pub p: i64,
    pub q: i64,
}

impl LadderShape {
    pub fn new(p: i64, q: i64) -> Option<Self> {
        (p >= q && q >= 1).then_some(LadderShape { p, q })
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for t in 1..=self.q {
            for s in 1..=(self.p - t) {
                out.push(Cell::new(s, t));
            }
        }
        out
    }
}

/// Nondecreasing index vectors of length `r` over `0..n`, lexicographic.
#[derive(Debug, Clone)]
pub struct MultisetIndices {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl MultisetIndices {
    pub fn new(n: usize, r: usize) -> Self {
        MultisetIndices {
            n,
            idx: vec![0; r],
            done: n == 0 && r > 0,
        }
    }

    fn advance(&mut self) {
        let r = self.idx.len();
        let mut i = r;
        while i > 0 {
            i -= 1;
            if self.idx[i] + 1 < self.n {
                let v = self.idx[i] + 1;
                for slot in &mut self.idx[i..] {
                    *slot = v;
                }
                self.done = false;
                return;
            }
        }
    }

    fn step(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        self.done = true;
        self.advance();
        Some(out)
    }
}

impl Iterator for MultisetIndices {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        self.step()
    }
}

/// Every multiset of size `r` over `cells`, each exactly once, in
/// lexicographic order of cell positions.
pub fn enumerate_grid_monomials(cells: &[Cell], r: usize) -> impl Iterator<Item = GridMonomial> + '_ {
    MultisetIndices::new(cells.len(), r).map(move |ix| GridMonomial::from_cells(ix.iter().map(|&i| cells[i])))
}

pub fn multiset_count(cells: usize, r: usize) -> BigInt {
    if r == 0 {
        return BigInt::from(1);
    }
    binomial(cells as i64 + r as i64 - 1, r as i64)
}

pub fn grid(m: i64, n: i64) -> Vec<Cell> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in 1..=n {
            out.push(Cell::new(i, j));
        }
    }
    out
}

type Progress = Box<dyn Fn(u64, u64) + Send + Sync>;

/// Exhaustive multiset counter with an enumeration budget and an optional
/// progress hook receiving `(visited, total)`.
pub struct BruteCounter {
    budget: u64,
    progress: Option<Progress>,
}

impl Default for BruteCounter {
    fn default() -> Self {
        BruteCounter::new(DEFAULT_BUDGET)
    }
}

impl BruteCounter {
    pub fn new(budget: u64) -> Self {
        BruteCounter {
            budget,
            progress: None,
        }
    }

    pub fn with_progress(mut self, hook: impl Fn(u64, u64) + Send + Sync + 'static) -> Self {
        self.progress = Some(Box::new(hook));
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    fn check_budget(&self, cells: usize, r: usize) -> Result<u64, EnumError> {
        let total = multiset_count(cells, r);
        if total > BigInt::from(self.budget) {
            return Err(EnumError::BudgetExceeded {
                needed: total.to_string(),
                budget: self.budget,
            });
        }
        Ok(u64::try_from(total).unwrap_or(u64::MAX))
    }

    /// Counts size-`r` multisets over `cells` whose support passes `keep`.
    pub fn count_filtered(
        &self,
        cells: &[Cell],
        r: usize,
        keep: impl Fn(&[Cell]) -> bool,
    ) -> Result<u64, EnumError> {
        let total = self.check_budget(cells.len(), r)?;
        let mut count = 0u64;
        let mut visited = 0u64;
        let mut support: Vec<Cell> = Vec::with_capacity(r);
        for ix in MultisetIndices::new(cells.len(), r) {
            support.clear();
            let mut last = usize::MAX;
            for &i in &ix {
                if i != last {
                    support.push(cells[i]);
                    last = i;
                }
            }
            if keep(&support) {
                count += 1;
            }
            visited += 1;
            if let Some(p) = &self.progress {
                if visited % 65_536 == 0 || visited == total {
                    p(visited, total);
                }
            }
        }
        Ok(count)
    }

    pub fn h2(&self, m: i64, n: i64, r: usize) -> Result<u64, EnumError> {
        self.count_filtered(&grid(m, n), r, |s| !support_has_2chain(s, |_| true))
    }

    pub fn h3(&self, m: i64, n: i64, r: usize) -> Result<u64, EnumError> {
        self.count_filtered(&grid(m, n), r, |s| !support_has_3chain(s))
    }

    pub fn p1(&self, m: i64, n: i64, xi: i64, r: usize) -> Result<u64, EnumError> {
        self.count_filtered(&grid(m, n), r, |s| {
            !support_has_3chain(s) && !support_has_2chain(s, |c| c.col < xi)
        })
    }

    pub fn p2(&self, m: i64, n: i64, rho: i64, xi: i64, r: usize) -> Result<u64, EnumError> {
        let cells: Vec<Cell> = grid(m, n)
            .into_iter()
            .filter(|c| c.row <= rho || c.col >= xi)
            .collect();
        self.count_filtered(&cells, r, |s| {
            !support_has_3chain(s)
                && !support_has_2chain(s, |c| c.col < xi)
                && !support_has_2chain(s, |c| c.row > rho)
        })
    }

    /// Ladder cell `(s, t)` stands for the pair `(s + t, t)`; a monomial is
    /// counted when these pairs form a multichain in the componentwise order.
    pub fn p3(&self, p: i64, q: i64, r: usize) -> Result<u64, EnumError> {
        let cells = LadderShape { p, q }.cells();
        self.count_filtered(&cells, r, |s| {
            !s.iter().any(|a| {
                s.iter()
                    .any(|b| a.col < b.col && a.row + a.col > b.row + b.col)
            })
        })
    }
}

pub fn count_h2_brute(m: i64, n: i64, r: usize) -> Result<u64, EnumError> {
    BruteCounter::default().h2(m, n, r)
}

pub fn count_h3_brute(m: i64, n: i64, r: usize) -> Result<u64, EnumError> {
    BruteCounter::default().h3(m, n, r)
}

pub fn count_p1_brute(m: i64, n: i64, xi: i64, r: usize) -> Result<u64, EnumError> {
    BruteCounter::default().p1(m, n, xi, r)
}

pub fn count_p2_brute(m: i64, n: i64, rho: i64, xi: i64, r: usize) -> Result<u64, EnumError> {
    BruteCounter::default().p2(m, n, rho, xi, r)
}

pub fn count_p3_brute(p: i64, q: i64, r: usize) -> Result<u64, EnumError> {
    BruteCounter::default().p3(p, q, r)
}

/// Chain-free supports over a family of cell blocks, tallied by how many
/// cells each support takes from every block.
///
/// With the tally in hand, the number of multisets having `s_b` factors in
/// block `b` and an allowed support is
/// `sum over tallies c of N(c) * prod_b C(s_b - 1, c_b - 1)`, since a multiset
/// of size `s` with a fixed support of size `c` is a composition of `s`
/// into `c` positive parts. The forbidden predicate must be closed under
/// taking larger supports.
#[derive(Debug, Clone)]
pub struct SupportProfile {
    blocks: usize,
    tally: BTreeMap<Vec<u32>, u64>,
}

impl SupportProfile {
    pub fn build(
        blocks: &[Vec<Cell>],
        forbidden: impl Fn(&[Cell]) -> bool,
        budget: u64,
    ) -> Result<Self, EnumError> {
        let flat: Vec<(usize, Cell)> = blocks
            .iter()
            .enumerate()
            .flat_map(|(b, cs)| cs.iter().map(move |&c| (b, c)))
            .collect();
        let mut tally = BTreeMap::new();
        let mut current: Vec<Cell> = Vec::new();
        let mut sizes = vec![0u32; blocks.len()];
        let mut visited = 0u64;
        Self::dfs(
            &flat,
            0,
            &mut current,
            &mut sizes,
            &forbidden,
            &mut tally,
            &mut visited,
            budget,
        )?;
        Ok(SupportProfile {
            blocks: blocks.len(),
            tally,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        flat: &[(usize, Cell)],
        start: usize,
        current: &mut Vec<Cell>,
        sizes: &mut Vec<u32>,
        forbidden: &impl Fn(&[Cell]) -> bool,
        tally: &mut BTreeMap<Vec<u32>, u64>,
        visited: &mut u64,
        budget: u64,
    ) -> Result<(), EnumError> {
        *visited += 1;
        if *visited > budget {
            return Err(EnumError::BudgetExceeded {
                needed: format!(">{}", budget),
                budget,
            });
        }
        *tally.entry(sizes.clone()).or_insert(0) += 1;
        for i in start..flat.len() {
            let (b, c) = flat[i];
            current.push(c);
            if !forbidden(current) {
                sizes[b] += 1;
                Self::dfs(flat, i + 1, current, sizes, forbidden, tally, visited, budget)?;
                sizes[b] -= 1;
            }
            current.pop();
        }
        Ok(())
    }

    pub fn supports(&self) -> u64 {
        self.tally.values().sum()
    }

    /// Multisets with exactly `sizes[b]` factors drawn from block `b`.
    pub fn count(&self, sizes: &[u64]) -> BigInt {
        assert_eq!(sizes.len(), self.blocks);
        let mut total = BigInt::zero();
        'outer: for (c, &num) in &self.tally {
            let mut w = BigInt::from(num);
            for (b, &s) in sizes.iter().enumerate() {
                let cb = c[b] as i64;
                if s == 0 {
                    if cb != 0 {
                        continue 'outer;
                    }
                } else {
                    if cb == 0 || cb as u64 > s {
                        continue 'outer;
                    }
                    w *= binomial(s as i64 - 1, cb - 1);
                }
            }
            total += w;
        }
        total
    }
}
