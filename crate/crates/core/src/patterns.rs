//! Number triangles, Dyck paths and the lattice polytope `Π_λ`.
//!
//! A triangle assigns a nonnegative integer to every cell. It lies in `Π_λ`
//! when for every Dyck path `d` the weighted sum `S(T,d)` (weight ½ on the
//! rightmost column) is at most `M(λ,d)`. Membership is decided by a dynamic
//! program over the grid rather than by listing paths, whose number grows
//! exponentially in `n`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernel::{format_rational, int, rat, Rational};
use crate::rootsys::{cell_index, cells, Cell, DominantWeight};

/// Nonnegative integers on the `n²` cells, stored in `≪` order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangle {
    pub n: usize,
    pub entries: Vec<u32>,
}

impl fmt::Debug for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = cells(self.n).unwrap_or_default();
        let nz: Vec<String> = cs
            .iter()
            .zip(&self.entries)
            .filter(|(_, &v)| v != 0)
            .map(|(c, v)| format!("t({},{})={v}", c.i, c.j))
            .collect();
        write!(f, "T[n={}; {}]", self.n, nz.join(", "))
    }
}

impl Triangle {
    pub fn new(n: usize, entries: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        if entries.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(Triangle { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        Triangle {
            n,
            entries: vec![0; n * n],
        }
    }

    /// Builds a triangle from `(cell, value)` pairs; unspecified cells are zero.
    pub fn from_cells(n: usize, values: &[((usize, usize), u32)]) -> Result<Self> {
        let mut t = Self::new(n, vec![0; n * n])?;
        for &((i, j), v) in values {
            let c = Cell::new(i, j);
            c.check(n)?;
            t.entries[cell_index(n, c)] = v;
        }
        Ok(t)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: Triangle = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Triangle::new(t.n, t.entries)
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "entries": self.entries })
    }

    pub fn get(&self, c: Cell) -> u32 {
        self.entries[cell_index(self.n, c)]
    }

    pub fn set(&mut self, c: Cell, v: u32) {
        let k = cell_index(self.n, c);
        self.entries[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// Total degree `Σ T_{i,j}`.
    pub fn degree(&self) -> u64 {
        self.entries.iter().map(|&v| v as u64).sum()
    }

    /// Cells with a positive entry, in `≪` order.
    pub fn support(&self) -> Vec<Cell> {
        cells(self.n)
            .expect("n >= 1")
            .into_iter()
            .zip(&self.entries)
            .filter(|(_, &v)| v > 0)
            .map(|(c, _)| c)
            .collect()
    }

    pub fn plus(&self, other: &Triangle) -> Triangle {
        assert_eq!(self.n, other.n);
        Triangle {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self − other` when every entry stays nonnegative.
    pub fn checked_sub(&self, other: &Triangle) -> Option<Triangle> {
        if self.n != other.n {
            return None;
        }
        let entries: Option<Vec<u32>> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_sub(*b))
            .collect();
        Some(Triangle {
            n: self.n,
            entries: entries?,
        })
    }

    /// Entrywise `self ≤ other`.
    pub fn le(&self, other: &Triangle) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }
}

fn check_steps(n: usize, steps: &[Cell]) -> Result<()> {
    let first = steps
        .first()
        .ok_or_else(|| Error::Precondition("empty path".into()))?;
    for c in steps {
        c.check(n)?;
    }
    if !first.is_top() {
        return Err(Error::Precondition(format!(
            "path must start in the top row, starts at ({first})"
        )));
    }
    for w in steps.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b != Cell::new(a.i + 1, a.j) && b != Cell::new(a.i, a.j + 1) {
            return Err(Error::Precondition(format!("({b}) does not follow ({a})")));
        }
    }
    Ok(())
}

/// Path from the top row moving to the upper-right or bottom-right neighbour,
/// with no condition on where it stops.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialDyckPath {
    steps: Vec<Cell>,
}

impl PartialDyckPath {
    pub fn new(n: usize, steps: Vec<Cell>) -> Result<Self> {
        check_steps(n, &steps)?;
        Ok(PartialDyckPath { steps })
    }

    pub fn steps(&self) -> &[Cell] {
        &self.steps
    }
}

/// Partial Dyck path that ends in the top row or in the rightmost column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyckPath {
    steps: Vec<Cell>,
}

impl DyckPath {
    pub fn new(n: usize, steps: Vec<Cell>) -> Result<Self> {
        check_steps(n, &steps)?;
        let last = steps[steps.len() - 1];
        if !(last.is_top() || last.is_short(n)) {
            return Err(Error::Precondition(format!(
                "path ends at ({last}), neither top row nor rightmost column"
            )));
        }
        Ok(DyckPath { steps })
    }

    pub fn steps(&self) -> &[Cell] {
        &self.steps
    }

    pub fn first(&self) -> Cell {
        self.steps[0]
    }

    pub fn last(&self) -> Cell {
        self.steps[self.steps.len() - 1]
    }
}

/// Cells that can follow `c` on a path.
pub fn successors(n: usize, c: Cell) -> impl Iterator<Item = Cell> {
    [Cell::new(c.i + 1, c.j), Cell::new(c.i, c.j + 1)]
        .into_iter()
        .filter(move |s| s.is_valid(n))
}

/// Every Dyck path for rank `n`, in depth-first order from `(1,2)`.
pub fn dyck_paths(n: usize) -> Result<Vec<DyckPath>> {
    fn walk(n: usize, path: &mut Vec<Cell>, out: &mut Vec<DyckPath>) {
        let last = path[path.len() - 1];
        if last.is_top() || last.is_short(n) {
            out.push(DyckPath {
                steps: path.clone(),
            });
        }
        for next in successors(n, last) {
            path.push(next);
            walk(n, path, out);
            path.pop();
        }
    }
    cells(n)?;
    let mut out = Vec::new();
    for i in 1..=n {
        let mut path = vec![Cell::new(i, i + 1)];
        walk(n, &mut path, &mut out);
    }
    Ok(out)
}

/// All partial Dyck paths ending at `target`.
pub fn partial_paths_to(n: usize, target: Cell) -> Result<Vec<PartialDyckPath>> {
    target.check(n)?;
    // walk backwards: predecessors of (i,j) are (i-1,j) and (i,j-1)
    fn back(n: usize, rev: &mut Vec<Cell>, out: &mut Vec<PartialDyckPath>) {
        let first = rev[rev.len() - 1];
        if first.is_top() {
            out.push(PartialDyckPath {
                steps: rev.iter().rev().copied().collect(),
            });
        }
        let preds = [
            (first.i > 1).then(|| Cell::new(first.i - 1, first.j)),
            Some(Cell::new(first.i, first.j - 1)),
        ];
        for p in preds
            .into_iter()
            .flatten()
            .filter(|p| p.is_valid(n) && !p.is_short(n))
        {
            rev.push(p);
            back(n, rev, out);
            rev.pop();
        }
    }
    let mut out = Vec::new();
    back(n, &mut vec![target], &mut out);
    Ok(out)
}

/// Weight of cell `c` in path sums and in the grading: 1, or ½ on the rightmost column.
pub fn cell_weight(n: usize, c: Cell) -> Rational {
    if c.is_short(n) {
        rat(1, 2)
    } else {
        int(1)
    }
}

/// `Σ c_k T_{i_k,j_k}` along a (partial) Dyck path.
pub fn s_sum(t: &Triangle, steps: &[Cell]) -> Result<Rational> {
    let n = t.n;
    let mut s = Rational::zero();
    for &c in steps {
        c.check(n)?;
        s += cell_weight(n, c) * int(t.get(c) as i64);
    }
    Ok(s)
}

/// `λ_{i₁} − λ_{j_N}` for paths ending in the top row, `λ_{i₁}` for paths
/// ending in the rightmost column.
pub fn m_bound(w: &DominantWeight, d: &DyckPath) -> Rational {
    let n = w.n;
    let (first, last) = (d.first(), d.last());
    if last.is_short(n) {
        w.lambda[first.i - 1].clone()
    } else {
        &w.lambda[first.i - 1] - &w.lambda[last.j - 1]
    }
}

/// Path-sum dynamic program in doubled units.
///
/// `best[k]` is the maximum over partial paths ending at the `k`-th cell
/// (never a rightmost-column cell) of `2·Σ T − 2λ_{i₁}`; the constraint of a
/// path ending there becomes a sign test.
struct PathDp<'a> {
    n: usize,
    cells: &'a [Cell],
    lambda2: &'a [i64],
}

impl PathDp<'_> {
    /// Largest violation `max_d (2S(T,d) − 2M(λ,d))`; `T ∈ Π_λ` iff this is ≤ 0.
    fn max_excess(&self, entries: &[u32]) -> i64 {
        let n = self.n;
        let mut best = vec![i64::MIN; self.cells.len()];
        let mut worst = i64::MIN;
        for (k, &c) in self.cells.iter().enumerate() {
            let mut pred = i64::MIN;
            if c.is_top() {
                pred = -self.lambda2[c.i - 1];
            }
            if c.j - 1 > c.i {
                pred = pred.max(best[cell_index(n, Cell::new(c.i, c.j - 1))]);
            }
            if c.i > 1 {
                pred = pred.max(best[cell_index(n, Cell::new(c.i - 1, c.j))]);
            }
            let t = entries[k] as i64;
            if c.is_short(n) {
                worst = worst.max(pred + t);
            } else {
                best[k] = pred + 2 * t;
                if c.is_top() {
                    worst = worst.max(best[k] + self.lambda2[c.j - 1]);
                }
            }
        }
        worst
    }
}

/// `T ∈ Π_λ`.
pub fn in_pi(t: &Triangle, w: &DominantWeight) -> bool {
    if t.n != w.n {
        return false;
    }
    let cs = cells(w.n).expect("n >= 1");
    let lambda2 = w.lambda_doubled();
    PathDp {
        n: w.n,
        cells: &cs,
        lambda2: &lambda2,
    }
    .max_excess(&t.entries)
        <= 0
}

/// Lists `Π_λ` lexicographically by entries in `≪` order.
///
/// Depth-first over cells with each candidate prefix checked by padding with
/// zeros: `Π_λ` is downward closed, so a failing value ends the scan of that
/// cell and every surviving prefix has at least one completion.
pub fn enumerate_pi(w: &DominantWeight) -> Vec<Triangle> {
    let n = w.n;
    let cs = cells(n).expect("n >= 1");
    let lambda2 = w.lambda_doubled();
    let dp = PathDp {
        n,
        cells: &cs,
        lambda2: &lambda2,
    };
    let mut out = Vec::new();
    let mut entries = vec![0u32; n * n];
    fn dfs(dp: &PathDp<'_>, k: usize, entries: &mut Vec<u32>, out: &mut Vec<Triangle>) {
        if k == entries.len() {
            out.push(Triangle {
                n: dp.n,
                entries: entries.clone(),
            });
            return;
        }
        let mut v = 0;
        loop {
            entries[k] = v;
            if dp.max_excess(entries) > 0 {
                break;
            }
            dfs(dp, k + 1, entries, out);
            v += 1;
        }
        entries[k] = 0;
    }
    if dp.max_excess(&entries) <= 0 {
        dfs(&dp, 0, &mut entries, &mut out);
    }
    out
}

/// `grad T = Σ c_{i,j} T_{i,j}` with `c = ½` on the rightmost column.
pub fn grad_of(t: &Triangle) -> Rational {
    rat(grad_doubled(t) as i64, 2)
}

/// `2·grad T`.
pub fn grad_doubled(t: &Triangle) -> u64 {
    let n = t.n;
    cells(n)
        .expect("n >= 1")
        .iter()
        .zip(&t.entries)
        .map(|(c, &v)| {
            if c.is_short(n) {
                v as u64
            } else {
                2 * v as u64
            }
        })
        .sum()
}

/// One row `Σ coeffs·x ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// Inequality description of the polytope whose lattice points form `Π_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub vars: Vec<Cell>,
    pub rows: Vec<Inequality>,
}

impl HRep {
    pub fn contains(&self, t: &Triangle) -> bool {
        self.rows.iter().all(|row| {
            let lhs: Rational = row
                .coeffs
                .iter()
                .zip(&t.entries)
                .map(|(c, &x)| c * int(x as i64))
                .sum();
            lhs <= row.rhs
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.vars.iter().map(|c| json!([c.i, c.j])).collect::<Vec<_>>(),
            "rows": self.rows.iter().map(|r| json!({
                "coeffs": r.coeffs.iter().map(format_rational).collect::<Vec<_>>(),
                "rhs": format_rational(&r.rhs),
            })).collect::<Vec<_>>(),
        })
    }
}

/// One row per Dyck path followed by the `n²` nonnegativity rows `−x ≤ 0`.
pub fn polytope_h_rep(w: &DominantWeight) -> HRep {
    let n = w.n;
    let vars = cells(n).expect("n >= 1");
    let mut rows = Vec::new();
    for d in dyck_paths(n).expect("n >= 1") {
        let mut coeffs = vec![Rational::zero(); vars.len()];
        for &c in d.steps() {
            coeffs[cell_index(n, c)] = cell_weight(n, c);
        }
        rows.push(Inequality {
            coeffs,
            rhs: m_bound(w, &d),
        });
    }
    for k in 0..vars.len() {
        let mut coeffs = vec![Rational::zero(); vars.len()];
        coeffs[k] = int(-1);
        rows.push(Inequality {
            coeffs,
            rhs: Rational::zero(),
        });
    }
    HRep { vars, rows }
}
