//! Root data of type B_n in the orthonormal β-coordinates.
//!
//! Positive roots are indexed by the cells `(i, j)` of a triangular grid with
//! `1 ≤ i < j ≤ 2n+1−i`. Writing `j̄ = 2n+1−j`, cell `(i, j)` carries
//! `β_i − β_j` for `j ≤ n`, `β_i + β_j̄` for `n < j < ī`, and the short root
//! `β_i` on the rightmost column `j = ī`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{int, rat, Rational};

/// A vector in β-coordinates. Weights and roots share this type.
pub type Weight = Vec<Rational>;

/// Position `(i, j)` in the triangular grid.
///
/// The derived ordering is the total order `≪`: by `i + j`, then by `i`.
/// It does not depend on the rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
}

impl Cell {
    pub const fn new(i: usize, j: usize) -> Self {
        Cell { i, j }
    }

    pub fn is_valid(&self, n: usize) -> bool {
        self.i >= 1 && self.i < self.j && self.i + self.j <= 2 * n + 1
    }

    /// Rightmost-column cell, `i + j = 2n+1`.
    pub fn is_short(&self, n: usize) -> bool {
        self.i + self.j == 2 * n + 1
    }

    /// Top-row cell, `j = i + 1`.
    pub fn is_top(&self) -> bool {
        self.j == self.i + 1
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.is_valid(n) {
            Ok(())
        } else {
            Err(Error::InvalidCell {
                n,
                i: self.i,
                j: self.j,
            })
        }
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.i + self.j, self.i).cmp(&(other.i + other.j, other.i))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.i, self.j)
    }
}

/// `j̄ = 2n+1−j`.
pub fn bar(n: usize, j: usize) -> usize {
    2 * n + 1 - j
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroRank)
    } else {
        Ok(())
    }
}

/// All `n²` cells in `≪` order.
pub fn cells(n: usize) -> Result<Vec<Cell>> {
    check_rank(n)?;
    let mut out = Vec::with_capacity(n * n);
    for s in 3..=2 * n + 1 {
        for i in 1..=(s - 1) / 2 {
            out.push(Cell::new(i, s - i));
        }
    }
    Ok(out)
}

/// Position of a valid cell in `cells(n)`.
pub fn cell_index(n: usize, c: Cell) -> usize {
    debug_assert!(c.is_valid(n), "cell {c} invalid for rank {n}");
    let s = c.i + c.j;
    // cells with coordinate sum s' < s number Σ_{s'=3}^{s-1} ⌊(s'−1)/2⌋
    let before: usize = (3..s).map(|t| (t - 1) / 2).sum();
    before + c.i - 1
}

/// The cells carrying simple roots: `(k, k+1)` for `k = 1..=n`.
pub fn simple_cells(n: usize) -> Vec<Cell> {
    (1..=n).map(|k| Cell::new(k, k + 1)).collect()
}

/// A positive root in β-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Weight,
}

impl Root {
    fn from_pairs(n: usize, pairs: &[(usize, i64)]) -> Root {
        let mut coords = vec![Rational::zero(); n];
        for &(k, s) in pairs {
            coords[k - 1] += int(s);
        }
        Root { coords }
    }

    pub fn is_short(&self) -> bool {
        self.coords.iter().filter(|c| !c.is_zero()).count() == 1
    }
}

pub fn root_of_cell(n: usize, c: Cell) -> Result<Root> {
    check_rank(n)?;
    c.check(n)?;
    let Cell { i, j } = c;
    Ok(if c.is_short(n) {
        Root::from_pairs(n, &[(i, 1)])
    } else if j <= n {
        Root::from_pairs(n, &[(i, 1), (j, -1)])
    } else {
        Root::from_pairs(n, &[(i, 1), (bar(n, j), 1)])
    })
}

/// Inverse of [`root_of_cell`].
pub fn cell_of_root(n: usize, coords: &[Rational]) -> Option<Cell> {
    let cs = cells(n).ok()?;
    cs.into_iter().find(|c| {
        root_of_cell(n, *c)
            .map(|r| r.coords == coords)
            .unwrap_or(false)
    })
}

/// `ρ = (n−½, n−3/2, …, ½)`.
pub fn rho(n: usize) -> Weight {
    (1..=n).map(|i| rat(2 * (n - i) as i64 + 1, 2)).collect()
}

pub fn inner(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `⟨μ, α_k^∨⟩` for the simple root `α_k` (1-based).
pub fn coroot_pairing(mu: &[Rational], k: usize) -> Rational {
    let n = mu.len();
    if k < n {
        &mu[k - 1] - &mu[k]
    } else {
        &mu[n - 1] * int(2)
    }
}

/// Dominant integral weight, held in both coordinate systems.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DominantWeight {
    pub n: usize,
    /// Coordinates in the fundamental weights.
    pub a: Vec<u32>,
    /// Coordinates in the β-basis.
    pub lambda: Weight,
}

pub fn weight_from_fundamental(n: usize, a: &[i64]) -> Result<DominantWeight> {
    check_rank(n)?;
    if a.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: a.len(),
        });
    }
    if a.iter().any(|&x| x < 0) {
        return Err(Error::NegativeWeight(a.to_vec()));
    }
    let a: Vec<u32> = a
        .iter()
        .map(|&x| {
            u32::try_from(x).map_err(|_| Error::Precondition(format!("coordinate {x} too large")))
        })
        .collect::<Result<_>>()?;
    let lambda = (0..n)
        .map(|i| {
            let long: i64 = a[i..n - 1].iter().map(|&x| x as i64).sum();
            int(long) + rat(a[n - 1] as i64, 2)
        })
        .collect();
    Ok(DominantWeight { n, a, lambda })
}

impl DominantWeight {
    pub fn zero(n: usize) -> Result<Self> {
        weight_from_fundamental(n, &vec![0; n])
    }

    /// `ω_k`, 1-based.
    pub fn fundamental(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::Precondition(format!(
                "no fundamental weight ω_{k} in rank {n}"
            )));
        }
        let mut a = vec![0; n];
        a[k - 1] = 1;
        weight_from_fundamental(n, &a)
    }

    /// Recovers fundamental coordinates from β-coordinates:
    /// `a_i = λ_i − λ_{i+1}` for `i < n` and `a_n = 2λ_n`.
    pub fn from_lambda(lambda: &[Rational]) -> Result<Self> {
        let n = lambda.len();
        check_rank(n)?;
        let mut a = Vec::with_capacity(n);
        for i in 0..n {
            let ai = if i + 1 < n {
                &lambda[i] - &lambda[i + 1]
            } else {
                &lambda[i] * int(2)
            };
            if !ai.is_integer() {
                return Err(Error::Precondition("weight is not integral".into()));
            }
            let ai = i64::try_from(ai.to_integer())
                .map_err(|_| Error::Precondition("weight too large".into()))?;
            a.push(ai);
        }
        weight_from_fundamental(n, &a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    /// `2λ_i` as integers.
    pub fn lambda_doubled(&self) -> Vec<i64> {
        self.lambda
            .iter()
            .map(|l| {
                crate::kernel::doubled(l)
                    .expect("β-coordinates of a dominant weight are half-integers")
            })
            .collect()
    }

    pub fn checked_sub(&self, other: &DominantWeight) -> Option<DominantWeight> {
        if self.n != other.n {
            return None;
        }
        let a: Option<Vec<i64>> = self
            .a
            .iter()
            .zip(&other.a)
            .map(|(&x, &y)| (x >= y).then(|| (x - y) as i64))
            .collect();
        weight_from_fundamental(self.n, &a?).ok()
    }

    pub fn add(&self, other: &DominantWeight) -> Result<DominantWeight> {
        if self.n != other.n {
            return Err(Error::RankMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let a: Vec<i64> = self
            .a
            .iter()
            .zip(&other.a)
            .map(|(&x, &y)| (x + y) as i64)
            .collect();
        weight_from_fundamental(self.n, &a)
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(u32::to_string).collect();
        write!(f, "n={} a=({})", self.n, parts.join(","))
    }
}

pub fn positive_roots(n: usize) -> Result<Vec<Root>> {
    cells(n)?.into_iter().map(|c| root_of_cell(n, c)).collect()
}

/// `∏_{α>0} ⟨λ+ρ,α⟩ / ⟨ρ,α⟩`.
pub fn weyl_dim(w: &DominantWeight) -> BigUint {
    let n = w.n;
    let rho = rho(n);
    let shifted: Weight = w.lambda.iter().zip(&rho).map(|(l, r)| l + r).collect();
    let mut prod = Rational::one();
    for root in positive_roots(n).expect("rank is at least 1") {
        prod *= inner(&shifted, &root.coords) / inner(&rho, &root.coords);
    }
    assert!(
        prod.is_integer() && prod.is_positive(),
        "Weyl dimension must be a positive integer"
    );
    prod.to_integer().to_biguint().expect("positive")
}
