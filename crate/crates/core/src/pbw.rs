//! Words in the root vectors `f_{i,j}`, ordered monomials, and rewriting of
//! words into the ordered PBW basis of `U(n⁻)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernel::{format_rational, solve_in_span, Rational, SparseVec};
use crate::patterns::{grad_doubled, grad_of, Triangle};
use crate::repbuild::vector_rep;
use crate::rootsys::{cell_index, cells, Cell};

/// Product `f_{c₁} f_{c₂} ⋯ f_{c_N}`; acting on a vector, `f_{c_N}` is applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub n: usize,
    pub factors: Vec<Cell>,
}

impl Word {
    pub fn new(n: usize, factors: Vec<Cell>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        for c in &factors {
            c.check(n)?;
        }
        Ok(Word { n, factors })
    }

    /// Parses space-separated `i,j` tokens, e.g. `"2,3 1,4 2,3"`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let factors = s
            .split_whitespace()
            .map(|tok| {
                let (i, j) = tok
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("bad factor {tok:?}")))?;
                let parse = |x: &str| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad factor {tok:?}")))
                };
                Ok(Cell::new(parse(i)?, parse(j)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(n, factors)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponent triangle: how often each cell occurs.
    pub fn log(&self) -> Triangle {
        let mut t = Triangle::zero(self.n);
        for &c in &self.factors {
            t.set(c, t.get(c) + 1);
        }
        t
    }

    pub fn grad(&self) -> Rational {
        grad_of(&self.log())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Word { n: self.n, factors }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// `exp T`: the product of `f_c^{T_c}` with factors sorted by `≪`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedMonomial {
    pub exponents: Triangle,
}

impl OrderedMonomial {
    pub fn new(exponents: Triangle) -> Self {
        OrderedMonomial { exponents }
    }

    /// The canonical word, non-decreasing in `≪` from left to right.
    pub fn word(&self) -> Word {
        let n = self.exponents.n;
        let cs = cells(n).expect("triangles have positive rank");
        let factors = cs
            .iter()
            .zip(&self.exponents.entries)
            .flat_map(|(&c, &k)| std::iter::repeat_n(c, k as usize))
            .collect();
        Word { n, factors }
    }

    pub fn grad(&self) -> Rational {
        grad_of(&self.exponents)
    }
}

/// Combination of ordered monomials, keyed by exponent triangle.
pub type LinComb = SparseVec<Triangle>;

pub fn lincomb_to_json(l: &LinComb) -> Value {
    json!({
        "terms": l.iter().map(|(t, c)| json!({
            "exponents": t.to_json(),
            "coeff": format_rational(c),
        })).collect::<Vec<_>>(),
    })
}

/// `c₁ ≪ c₂`.
pub fn ll_less(c1: Cell, c2: Cell) -> bool {
    c1 < c2
}

/// True iff the short-root factors `f_{i,ī}` occur with `i` non-decreasing from left to right.
pub fn is_arranged(w: &Word) -> bool {
    let shorts: Vec<usize> = w
        .factors
        .iter()
        .filter(|c| c.is_short(w.n))
        .map(|c| c.i)
        .collect();
    shorts.windows(2).all(|p| p[0] <= p[1])
}

pub fn ord_word(w: &Word) -> OrderedMonomial {
    OrderedMonomial::new(w.log())
}

/// The order `≺`: by grad, then the smaller exponent at the `≪`-first differing cell is smaller.
pub fn prec(m: &OrderedMonomial, k: &OrderedMonomial) -> Ordering {
    grad_doubled(&m.exponents)
        .cmp(&grad_doubled(&k.exponents))
        .then_with(|| m.exponents.entries.cmp(&k.exponents.entries))
}

/// Brackets `[f_c, f_d]` expressed in the `f` basis.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub n: usize,
    cells: Vec<Cell>,
    table: Vec<Vec<SparseVec<Cell>>>,
}

impl StructureConstants {
    pub fn bracket(&self, c: Cell, d: Cell) -> &SparseVec<Cell> {
        &self.table[cell_index(self.n, c)][cell_index(self.n, d)]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// `[f_c, x]` for `x` in the span of the `f`s.
    pub fn bracket_left(&self, c: Cell, x: &SparseVec<Cell>) -> SparseVec<Cell> {
        let mut out = SparseVec::zero();
        for (d, k) in x.iter() {
            out.add_scaled(self.bracket(c, *d), k);
        }
        out
    }

    /// `[x, y]` for `x`, `y` in the span of the `f`s.
    pub fn bracket_lin(&self, x: &SparseVec<Cell>, y: &SparseVec<Cell>) -> SparseVec<Cell> {
        let mut out = SparseVec::zero();
        for (c, k) in x.iter() {
            out.add_scaled(&self.bracket_left(*c, y), k);
        }
        out
    }
}

/// Structure constants of `n⁻` read off from matrix commutators in the vector module.
pub fn structure_constants(n: usize) -> Result<StructureConstants> {
    let v = vector_rep(n)?;
    let cs = cells(n)?;
    let flat: Vec<_> = cs.iter().map(|&c| v.lowering(c).flatten()).collect();
    let mut table = Vec::with_capacity(cs.len());
    for &a in &cs {
        let mut row = Vec::with_capacity(cs.len());
        for &b in &cs {
            let comm = v.lowering(a).commutator(v.lowering(b));
            if comm.is_zero() {
                row.push(SparseVec::zero());
                continue;
            }
            let coeffs = solve_in_span(&flat, &comm.flatten()).ok_or_else(|| {
                Error::Representation(format!("[f({a}), f({b})] leaves the span of the f's"))
            })?;
            row.push(SparseVec::from_terms(
                cs.iter().copied().zip(coeffs).filter(|(_, k)| !k.is_zero()),
            ));
        }
        table.push(row);
    }
    Ok(StructureConstants {
        n,
        cells: cs,
        table,
    })
}

/// Rewrites words into ordered monomials, caching results per word.
///
/// The leftmost adjacent pair out of `≪` order is swapped and its bracket
/// inserted; each step lowers either the length or the number of
/// inversions, so the recursion terminates.
#[derive(Debug)]
pub struct Normalizer {
    sc: StructureConstants,
    memo: Mutex<HashMap<Vec<Cell>, LinComb>>,
}

impl Normalizer {
    pub fn new(sc: StructureConstants) -> Self {
        Normalizer {
            sc,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn for_rank(n: usize) -> Result<Self> {
        Ok(Normalizer::new(structure_constants(n)?))
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn normalize(&self, w: &Word) -> Result<LinComb> {
        if w.n != self.sc.n {
            return Err(Error::RankMismatch {
                expected: self.sc.n,
                got: w.n,
            });
        }
        let mut memo = self.memo.lock().unwrap_or_else(|e| e.into_inner());
        Ok(self.rewrite(&w.factors, &mut memo))
    }

    fn rewrite(&self, factors: &[Cell], memo: &mut HashMap<Vec<Cell>, LinComb>) -> LinComb {
        let Some(k) = factors.windows(2).position(|p| p[0] > p[1]) else {
            let w = Word {
                n: self.sc.n,
                factors: factors.to_vec(),
            };
            return SparseVec::unit(w.log());
        };
        if let Some(hit) = memo.get(factors) {
            return hit.clone();
        }
        let mut swapped = factors.to_vec();
        swapped.swap(k, k + 1);
        let mut out = self.rewrite(&swapped, memo);
        for (e, coef) in self.sc.bracket(factors[k], factors[k + 1]).iter() {
            let mut shorter = Vec::with_capacity(factors.len() - 1);
            shorter.extend_from_slice(&factors[..k]);
            shorter.push(*e);
            shorter.extend_from_slice(&factors[k + 2..]);
            out.add_scaled(&self.rewrite(&shorter, memo), coef);
        }
        memo.insert(factors.to_vec(), out.clone());
        out
    }
}

/// One-shot rewriting of `w` without a shared cache.
pub fn pbw_normalize(sc: &StructureConstants, w: &Word) -> Result<LinComb> {
    Normalizer::new(sc.clone()).normalize(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::int;

    fn c(i: usize, j: usize) -> Cell {
        Cell::new(i, j)
    }

    fn tri(n: usize, vals: &[((usize, usize), u32)]) -> Triangle {
        Triangle::from_cells(n, vals).unwrap()
    }

    #[test]
    fn orders_and_predicates() {
        assert!(ll_less(c(1, 2), c(2, 3)));
        assert!(ll_less(c(1, 4), c(2, 3)));
        assert!(!ll_less(c(2, 3), c(2, 3)));
        assert!(!is_arranged(&Word::parse(2, "2,3 1,4 2,3").unwrap()));
        assert!(is_arranged(&Word::parse(2, "1,4 2,3 2,3").unwrap()));
        assert!(is_arranged(&Word::parse(2, "").unwrap()));
        assert_eq!(
            ord_word(&Word::parse(2, "2,3 1,2").unwrap())
                .word()
                .to_string(),
            "1,2 2,3"
        );
        let m = ord_word(&Word::parse(2, "2,3 1,4 2,3").unwrap());
        assert_eq!(m.exponents, tri(2, &[((1, 4), 1), ((2, 3), 2)]));
        assert_eq!(m.word().to_string(), "1,4 2,3 2,3");
        let single = |i, j| OrderedMonomial::new(tri(2, &[((i, j), 1)]));
        assert_eq!(prec(&single(2, 3), &single(1, 2)), Ordering::Less);
        assert_eq!(prec(&single(2, 3), &single(1, 4)), Ordering::Less);
        assert_eq!(prec(&single(2, 3), &single(2, 3)), Ordering::Equal);
    }

    #[test]
    fn word_parsing() {
        assert!(matches!(
            Word::parse(2, "1,5"),
            Err(Error::InvalidCell { .. })
        ));
        assert!(matches!(Word::parse(2, "1;4"), Err(Error::Parse(_))));
        assert!(matches!(Word::parse(2, "x,4"), Err(Error::Parse(_))));
        let w = Word::parse(2, " 2,3   1,4 ").unwrap();
        assert_eq!(w.factors, vec![c(2, 3), c(1, 4)]);
        assert_eq!(w.grad(), crate::kernel::int(1));
    }

    #[test]
    fn bracket_examples() {
        let sc = structure_constants(2).unwrap();
        assert_eq!(
            sc.bracket(c(1, 4), c(2, 3)),
            &SparseVec::from_terms([(c(1, 3), int(2))])
        );
        assert!(sc.bracket(c(1, 2), c(1, 3)).is_zero());
        assert_eq!(
            sc.bracket(c(1, 2), c(2, 3)),
            &SparseVec::from_terms([(c(1, 4), int(-1))])
        );
    }

    #[test]
    fn short_brackets_give_twice_the_long_vector() {
        for n in 2..5 {
            let sc = structure_constants(n).unwrap();
            for i in 1..=n {
                for j in i + 1..=n {
                    let expect = SparseVec::from_terms([(c(i, 2 * n + 1 - j), int(2))]);
                    assert_eq!(
                        sc.bracket(c(i, 2 * n + 1 - i), c(j, 2 * n + 1 - j)),
                        &expect
                    );
                }
            }
        }
    }

    #[test]
    fn antisymmetry_and_jacobi() {
        for n in 1..5 {
            let sc = structure_constants(n).unwrap();
            let cs = sc.cells().to_vec();
            for &x in &cs {
                for &y in &cs {
                    assert_eq!(sc.bracket(x, y), &sc.bracket(y, x).scaled(&int(-1)));
                    for &z in &cs {
                        let u = |a: Cell| SparseVec::unit(a);
                        let mut sum = sc.bracket_lin(&u(x), sc.bracket(y, z));
                        sum.add_scaled(&sc.bracket_lin(&u(y), sc.bracket(z, x)), &int(1));
                        sum.add_scaled(&sc.bracket_lin(&u(z), sc.bracket(x, y)), &int(1));
                        assert!(sum.is_zero(), "Jacobi fails at {x} {y} {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn normalization_examples() {
        let norm = Normalizer::for_rank(2).unwrap();
        let ordered = Word::parse(2, "1,4 2,3 2,3").unwrap();
        assert_eq!(
            norm.normalize(&ordered).unwrap(),
            SparseVec::unit(ordered.log())
        );
        let got = norm.normalize(&Word::parse(2, "2,3 1,4").unwrap()).unwrap();
        let expect = SparseVec::from_terms([
            (tri(2, &[((1, 4), 1), ((2, 3), 1)]), int(1)),
            (tri(2, &[((1, 3), 1)]), int(-2)),
        ]);
        assert_eq!(got, expect);
        let got = norm.normalize(&Word::parse(2, "1,3 1,2").unwrap()).unwrap();
        assert_eq!(got, SparseVec::unit(tri(2, &[((1, 2), 1), ((1, 3), 1)])));
        let j = lincomb_to_json(&expect);
        assert_eq!(j["terms"].as_array().unwrap().len(), 2);
        assert!(matches!(
            norm.normalize(&Word::parse(3, "1,2").unwrap()),
            Err(Error::RankMismatch { .. })
        ));
    }
}
