//! Gelfand–Tsetlin patterns of type B and their bijection with `Π_λ`.
//!
//! A pattern `R` has a half-integer entry on every cell plus the implicit top
//! row `R_{i,i} = λ_i`. Each entry lies between its upper-left neighbour
//! (above) and its upper-right neighbour (below), the latter only off the
//! rightmost column. Entries off the rightmost column share the class of the
//! `λ_i` modulo 1; rightmost-column entries are arbitrary half-integers.
//!
//! All arithmetic here runs on doubled integers and converts to
//! [`Rational`] only at the boundary.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernel::{doubled, format_rational, parse_rational, rat, Rational};
use crate::patterns::{in_pi, Triangle};
use crate::rootsys::{cell_index, cells, Cell, DominantWeight};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GTPattern {
    pub n: usize,
    /// Entries in `≪` cell order.
    pub entries: Vec<Rational>,
}

impl GTPattern {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        if entries.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(GTPattern { n, entries })
    }

    pub fn get(&self, c: Cell) -> &Rational {
        &self.entries[cell_index(self.n, c)]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "entries": self.entries.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Raw {
            n: usize,
            entries: Vec<String>,
        }
        let raw: Raw = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let entries = raw
            .entries
            .iter()
            .map(|e| parse_rational(e))
            .collect::<Result<Vec<_>>>()?;
        GTPattern::new(raw.n, entries)
    }

    fn from_doubled(n: usize, d: &[i64]) -> Self {
        GTPattern {
            n,
            entries: d.iter().map(|&x| rat(x, 2)).collect(),
        }
    }

    fn doubled(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(doubled).collect()
    }
}

/// Doubled pattern with access to the implicit top row.
struct Doubled<'a> {
    n: usize,
    lambda2: &'a [i64],
    r: &'a [i64],
}

impl Doubled<'_> {
    /// `R_{i,j}` with `R_{i,i} = λ_i`.
    fn at(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.lambda2[i - 1]
        } else {
            self.r[cell_index(self.n, Cell::new(i, j))]
        }
    }

    /// Upper bound from the upper-left neighbour.
    fn upper(&self, c: Cell) -> i64 {
        self.at(c.i, c.j - 1)
    }

    /// Lower bound from the upper-right neighbour, if the cell has one.
    fn lower(&self, c: Cell) -> Option<i64> {
        (!c.is_short(self.n)).then(|| self.at(c.i + 1, c.j))
    }
}

fn valid_doubled(n: usize, lambda2: &[i64], r: &[i64]) -> std::result::Result<(), String> {
    let parity = lambda2[0].rem_euclid(2);
    let view = Doubled { n, lambda2, r };
    for (k, c) in cells(n).expect("n >= 1").into_iter().enumerate() {
        let x = r[k];
        if x < 0 {
            return Err(format!("negative entry at ({c})"));
        }
        if !c.is_short(n) && x.rem_euclid(2) != parity {
            return Err(format!("entry at ({c}) not congruent to λ modulo 1"));
        }
        if x > view.upper(c) {
            return Err(format!("entry at ({c}) exceeds its upper-left neighbour"));
        }
        if let Some(lo) = view.lower(c) {
            if x < lo {
                return Err(format!("entry at ({c}) is below its upper-right neighbour"));
            }
        }
    }
    Ok(())
}

fn check_pattern(r: &GTPattern, w: &DominantWeight) -> Result<Vec<i64>> {
    if r.n != w.n {
        return Err(Error::RankMismatch {
            expected: w.n,
            got: r.n,
        });
    }
    let d = r
        .doubled()
        .ok_or_else(|| Error::InvalidPattern("entries must be half-integers".into()))?;
    valid_doubled(w.n, &w.lambda_doubled(), &d).map_err(Error::InvalidPattern)?;
    Ok(d)
}

/// `R ∈ Γ_λ`.
pub fn validate_gt(r: &GTPattern, w: &DominantWeight) -> bool {
    check_pattern(r, w).is_ok()
}

/// Lists `Γ_λ`, filling cells by increasing `j` and decreasing `i` so both
/// neighbour bounds are known when a cell is reached.
pub fn enumerate_gt(w: &DominantWeight) -> Vec<GTPattern> {
    let n = w.n;
    let lambda2 = w.lambda_doubled();
    let parity = lambda2[0].rem_euclid(2);
    let mut order = cells(n).expect("n >= 1");
    order.sort_by_key(|c| (c.j, std::cmp::Reverse(c.i)));
    let order: Vec<(Cell, usize)> = order.into_iter().map(|c| (c, cell_index(n, c))).collect();

    fn dfs(
        n: usize,
        lambda2: &[i64],
        parity: i64,
        order: &[(Cell, usize)],
        pos: usize,
        r: &mut Vec<i64>,
        out: &mut Vec<GTPattern>,
    ) {
        if pos == order.len() {
            out.push(GTPattern::from_doubled(n, r));
            return;
        }
        let (c, k) = order[pos];
        let (hi, lo, step) = {
            let view = Doubled { n, lambda2, r };
            let hi = view.upper(c);
            match view.lower(c) {
                Some(lo) => {
                    let lo = lo.max(0);
                    // first value of the right class
                    let lo = if lo.rem_euclid(2) == parity {
                        lo
                    } else {
                        lo + 1
                    };
                    (hi, lo, 2)
                }
                None => (hi, 0, 1),
            }
        };
        let mut x = lo;
        while x <= hi {
            r[k] = x;
            dfs(n, lambda2, parity, order, pos + 1, r, out);
            x += step;
        }
        r[k] = 0;
    }

    let mut out = Vec::new();
    let mut r = vec![0i64; n * n];
    dfs(n, &lambda2, parity, &order, 0, &mut r, &mut out);
    out.sort();
    out
}

/// `F: Γ_λ → Π_λ`: the gap to the smaller of the upper-left and bottom-left
/// neighbours, doubled on the rightmost column.
pub fn f_map(r: &GTPattern, w: &DominantWeight) -> Result<Triangle> {
    let d = check_pattern(r, w)?;
    let n = w.n;
    let lambda2 = w.lambda_doubled();
    let view = Doubled {
        n,
        lambda2: &lambda2,
        r: &d,
    };
    let mut t = Triangle::zero(n);
    for (k, c) in cells(n).expect("n >= 1").into_iter().enumerate() {
        let mut base = view.upper(c);
        if c.i > 1 {
            base = base.min(view.at(c.i - 1, c.j));
        }
        let gap2 = base - d[k];
        let v = if c.is_short(n) { gap2 } else { gap2 / 2 };
        t.entries[k] = u32::try_from(v)
            .map_err(|_| Error::InvalidPattern(format!("negative gap at ({c})")))?;
    }
    Ok(t)
}

/// `G: Π_λ → Γ_λ`: `G(T)_{i,j}` is the minimum of `λ_{i₁} − S(T,d)` over
/// partial Dyck paths `d` ending at `(i,j)`, computed cell by cell.
pub fn g_map(t: &Triangle, w: &DominantWeight) -> Result<GTPattern> {
    if t.n != w.n {
        return Err(Error::RankMismatch {
            expected: w.n,
            got: t.n,
        });
    }
    if !in_pi(t, w) {
        return Err(Error::NotInPolytope);
    }
    let n = w.n;
    let lambda2 = w.lambda_doubled();
    let mut g = vec![0i64; n * n];
    for (k, c) in cells(n).expect("n >= 1").into_iter().enumerate() {
        let mut m = i64::MAX;
        if c.is_top() {
            m = lambda2[c.i - 1];
        }
        if c.j - 1 > c.i {
            m = m.min(g[cell_index(n, Cell::new(c.i, c.j - 1))]);
        }
        if c.i > 1 {
            m = m.min(g[cell_index(n, Cell::new(c.i - 1, c.j))]);
        }
        let weight2 = if c.is_short(n) { 1 } else { 2 };
        g[k] = m - weight2 * t.entries[k] as i64;
    }
    Ok(GTPattern::from_doubled(n, &g))
}
