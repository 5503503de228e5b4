//! Exact scalars and sparse linear algebra over the rationals.
//!
//! Everything downstream (weights, gradings, module coefficients) is built on
//! [`Rational`], an arbitrary-precision fraction kept in lowest terms. Vectors
//! are sparse maps from an ordered label type to nonzero coefficients, and
//! [`SpanBasis`] maintains a reduced row-echelon basis that pivots on the
//! smallest label, so elimination output is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Builds `p/q` as a [`Rational`]. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a [`Rational`].
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Canonical string form: `"p/q"`, with `/q` omitted when `q == 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`. Non-canonical input such as `"2/4"` is accepted and reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// True iff `r` has denominator 1 or 2.
pub fn is_half_integer(r: &Rational) -> bool {
    let d = r.denom();
    d.is_one() || *d == BigInt::from(2)
}

/// `2r` as an `i64`, for half-integers that fit. Returns `None` otherwise.
pub fn doubled(r: &Rational) -> Option<i64> {
    let twice = r * int(2);
    if !twice.denom().is_one() {
        return None;
    }
    i64::try_from(twice.numer()).ok()
}

/// Finite linear combination of labels with nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec<L: Ord> {
    entries: BTreeMap<L, Rational>,
}

impl<L: Ord> Default for SparseVec<L> {
    fn default() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }
}

impl<L: Ord + fmt::Debug> fmt::Debug for SparseVec<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(l, c)| (l, format_rational(c))))
            .finish()
    }
}

impl<L: Ord + Clone> SparseVec<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(label: L) -> Self {
        let mut v = Self::zero();
        v.entries.insert(label, Rational::one());
        v
    }

    /// Sums repeated labels and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (L, Rational)>) -> Self {
        let mut v = Self::zero();
        for (l, c) in terms {
            v.add_term(l, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, label: &L) -> Option<&Rational> {
        self.entries.get(label)
    }

    /// Coefficient at `label`, zero when absent.
    pub fn coeff(&self, label: &L) -> Rational {
        self.entries
            .get(label)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &Rational)> {
        self.entries.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.entries.keys()
    }

    /// Smallest label with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&L, &Rational)> {
        self.entries.iter().next()
    }

    pub fn add_term(&mut self, label: L, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(label) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec<L>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (l, x) in &other.entries {
            self.add_term(l.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(l, x)| (l.clone(), x * c))
                .collect(),
        }
    }

    pub fn plus(&self, other: &SparseVec<L>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn minus(&self, other: &SparseVec<L>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn into_entries(self) -> BTreeMap<L, Rational> {
        self.entries
    }

    /// Relabels through `f`, merging labels that collide.
    pub fn map_labels<M: Ord + Clone>(&self, mut f: impl FnMut(&L) -> M) -> SparseVec<M> {
        SparseVec::from_terms(self.entries.iter().map(|(l, c)| (f(l), c.clone())))
    }
}

/// Linear map on `usize`-labelled vectors stored column by column:
/// `cols[j]` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    cols: Vec<SparseVec<usize>>,
}

impl SparseMatrix {
    pub fn zero(dim: usize) -> Self {
        SparseMatrix {
            cols: vec![SparseVec::zero(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        SparseMatrix {
            cols: (0..dim).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_columns(cols: Vec<SparseVec<usize>>) -> Self {
        SparseMatrix { cols }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec<usize> {
        &self.cols[j]
    }

    pub fn set_column(&mut self, j: usize, v: SparseVec<usize>) {
        self.cols[j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn apply(&self, v: &SparseVec<usize>) -> SparseVec<usize> {
        let mut out = SparseVec::zero();
        for (j, c) in v.iter() {
            out.add_scaled(&self.cols[*j], c);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix {
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &SparseMatrix, c: &Rational) {
        for (mine, theirs) in self.cols.iter_mut().zip(&other.cols) {
            mine.add_scaled(theirs, c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> SparseMatrix {
        SparseMatrix {
            cols: self.cols.iter().map(|v| v.scaled(c)).collect(),
        }
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = self.compose(other);
        out.add_scaled(&other.compose(self), &-Rational::one());
        out
    }

    /// Entries flattened to a vector labelled by `(row, col)`.
    pub fn flatten(&self) -> SparseVec<(usize, usize)> {
        SparseVec::from_terms(
            self.cols
                .iter()
                .enumerate()
                .flat_map(|(j, col)| col.iter().map(move |(i, c)| ((*i, j), c.clone()))),
        )
    }
}

#[derive(Clone, Debug)]
struct Row<L: Ord> {
    vec: SparseVec<L>,
    /// Expression of `vec` in terms of the vectors passed to `insert`, by call index.
    combo: SparseVec<usize>,
}

/// Outcome of [`SpanBasis::insert`].
#[derive(Clone, Debug)]
pub struct Insertion<L: Ord> {
    pub inserted: bool,
    /// The input reduced against the basis as it was before the call.
    pub residual: SparseVec<L>,
}

/// Reduced row-echelon basis of a subspace.
///
/// Each stored vector has coefficient 1 at its pivot label and 0 at every
/// other pivot. Pivots are the smallest label of the reduced input.
#[derive(Clone, Debug)]
pub struct SpanBasis<L: Ord> {
    rows: BTreeMap<L, Row<L>>,
    calls: usize,
}

impl<L: Ord + Clone> Default for SpanBasis<L> {
    fn default() -> Self {
        SpanBasis {
            rows: BTreeMap::new(),
            calls: 0,
        }
    }
}

impl<L: Ord + Clone> SpanBasis<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot labels with their reduced vectors, in pivot order.
    pub fn pivots(&self) -> impl Iterator<Item = (&L, &SparseVec<L>)> {
        self.rows.iter().map(|(p, r)| (p, &r.vec))
    }

    /// Number of vectors offered to `insert` so far.
    pub fn calls(&self) -> usize {
        self.calls
    }

    /// Returns the residual of `v` and the multipliers of the stored rows used to reach it.
    fn reduce(&self, v: &SparseVec<L>) -> (SparseVec<L>, Vec<(L, Rational)>) {
        let mut residual = v.clone();
        let mut used = Vec::new();
        for (p, row) in &self.rows {
            if let Some(c) = residual.get(p).cloned() {
                residual.add_scaled(&row.vec, &-c.clone());
                used.push((p.clone(), c));
            }
        }
        (residual, used)
    }

    pub fn contains(&self, v: &SparseVec<L>) -> bool {
        self.reduce(v).0.is_zero()
    }

    pub fn insert(&mut self, v: &SparseVec<L>) -> Insertion<L> {
        let idx = self.calls;
        self.calls += 1;
        let (residual, used) = self.reduce(v);
        let Some((pivot, lead)) = residual.leading().map(|(p, c)| (p.clone(), c.clone())) else {
            return Insertion {
                inserted: false,
                residual,
            };
        };
        let inv = lead.recip();
        let vec = residual.scaled(&inv);
        let mut combo = SparseVec::unit(idx);
        for (p, c) in &used {
            combo.add_scaled(&self.rows[p].combo, &-c.clone());
        }
        let combo = combo.scaled(&inv);
        for row in self.rows.values_mut() {
            if let Some(c) = row.vec.get(&pivot).cloned() {
                row.vec.add_scaled(&vec, &-c.clone());
                row.combo.add_scaled(&combo, &-c);
            }
        }
        self.rows.insert(pivot, Row { vec, combo });
        Insertion {
            inserted: true,
            residual,
        }
    }

    /// Coefficients `c` (indexed by insertion call) with `Σ c_k v_k = target`,
    /// or `None` when `target` lies outside the span.
    pub fn express(&self, target: &SparseVec<L>) -> Option<SparseVec<usize>> {
        let (residual, used) = self.reduce(target);
        if !residual.is_zero() {
            return None;
        }
        let mut out = SparseVec::zero();
        for (p, c) in &used {
            out.add_scaled(&self.rows[p].combo, c);
        }
        Some(out)
    }
}

/// Exact rank over the rationals.
pub fn rank<L: Ord + Clone>(vectors: &[SparseVec<L>]) -> usize {
    let mut basis = SpanBasis::new();
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}

/// Coefficients `c` with `Σ c_i vectors[i] = target`, or `None` if `target`
/// is not in their span. Dependent vectors receive coefficient zero.
pub fn solve_in_span<L: Ord + Clone>(
    vectors: &[SparseVec<L>],
    target: &SparseVec<L>,
) -> Option<Vec<Rational>> {
    let mut basis = SpanBasis::new();
    for v in vectors {
        basis.insert(v);
    }
    let combo = basis.express(target)?;
    Some((0..vectors.len()).map(|i| combo.coeff(&i)).collect())
}

/// `Σ c_i v_i`.
pub fn combine<L: Ord + Clone>(vectors: &[SparseVec<L>], coeffs: &[Rational]) -> SparseVec<L> {
    let mut out = SparseVec::zero();
    for (v, c) in vectors.iter().zip(coeffs) {
        out.add_scaled(v, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: u32) -> SparseVec<u32> {
        SparseVec::unit(i)
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(3, 2)), "3/2");
        assert_eq!(format_rational(&rat(-2, 2)), "-1");
        assert_eq!(format_rational(&int(0)), "0");
        assert_eq!(format_rational(&rat(2, -4)), "-1/2");
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn exact_reciprocal() {
        let a = rat(-17, 5);
        assert_eq!(&a * a.recip(), int(1));
    }

    #[test]
    fn insert_zero() {
        let mut b = SpanBasis::<u32>::new();
        let ins = b.insert(&SparseVec::zero());
        assert!(!ins.inserted);
        assert!(ins.residual.is_zero());
        assert_eq!(b.rank(), 0);
    }

    #[test]
    fn insert_duplicate() {
        let mut b = SpanBasis::new();
        assert!(b.insert(&e(1)).inserted);
        assert!(!b.insert(&e(1)).inserted);
    }

    #[test]
    fn insert_reduces_to_echelon() {
        let mut b = SpanBasis::new();
        b.insert(&e(1).plus(&e(2)));
        let ins = b.insert(&e(2));
        assert!(ins.inserted);
        assert_eq!(b.rank(), 2);
        // fully reduced: pivot 1 row has no entry at pivot 2
        let rows: Vec<_> = b.pivots().map(|(p, v)| (*p, v.clone())).collect();
        assert_eq!(rows, vec![(1, e(1)), (2, e(2))]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank::<u32>(&[]), 0);
        assert_eq!(rank(&[e(1), e(1).scaled(&int(2))]), 1);
        assert_eq!(rank(&[e(1).plus(&e(2)), e(2), e(1)]), 2);
    }

    #[test]
    fn solve_examples() {
        let vs = vec![e(1), e(2)];
        assert_eq!(
            solve_in_span(&vs, &SparseVec::zero()),
            Some(vec![int(0), int(0)])
        );
        assert_eq!(solve_in_span(&vs, &e(1)), Some(vec![int(1), int(0)]));
        assert_eq!(solve_in_span::<u32>(&[], &e(1)), None);
        assert_eq!(solve_in_span(&vs, &e(3)), None);
    }

    #[test]
    fn solve_with_dependent_inputs() {
        let vs = vec![
            e(1).plus(&e(2)),
            e(1).scaled(&int(2)).plus(&e(2).scaled(&int(2))),
            e(2),
        ];
        let target = e(1).scaled(&rat(1, 3));
        let c = solve_in_span(&vs, &target).unwrap();
        assert_eq!(combine(&vs, &c), target);
        assert_eq!(c[1], int(0));
    }

    #[test]
    fn matrix_commutator() {
        // e_12 and e_21 on a 2-dim space: [E12, E21] = diag(1, -1)
        let mut a = SparseMatrix::zero(2);
        a.set_column(1, SparseVec::unit(0));
        let mut b = SparseMatrix::zero(2);
        b.set_column(0, SparseVec::unit(1));
        let h = a.commutator(&b);
        assert_eq!(h.column(0), &SparseVec::unit(0));
        assert_eq!(h.column(1), &SparseVec::unit(1).scaled(&int(-1)));
    }
}
