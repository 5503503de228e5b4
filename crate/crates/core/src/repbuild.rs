//! Explicit matrix models of so(2n+1)-modules.
//!
//! Every module carries a weight basis, a sparse matrix for each lowering
//! root vector `f_{i,j}`, and raising matrices for the simple roots. The
//! vector representation fixes the normalisation of all `f_{i,j}`; other
//! modules are obtained by exterior powers, tensor products and the spin
//! construction, and are checked against the structure constants before use.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernel::{format_rational, int, Rational, SpanBasis, SparseMatrix, SparseVec};
use crate::pbw::{structure_constants, StructureConstants, Word};
use crate::rootsys::{
    bar, cell_index, cells, coroot_pairing, inner, rho, root_of_cell, simple_cells, Cell,
    DominantWeight, Weight,
};

/// Vector in a module, over basis indices.
pub type ModVec = SparseVec<usize>;

/// Printable name of a basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// The single vector of the trivial module.
    Trivial,
    /// `e_k`, `−n ≤ k ≤ n`.
    Vector(i64),
    /// Wedge of vector-module labels in increasing order.
    Wedge(Vec<Label>),
    /// Spin vector `e_I`, `I ∈ {0,1}ⁿ`.
    Spin(Vec<u8>),
    Tensor(Vec<Label>),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Trivial => write!(f, "1"),
            Label::Vector(k) => write!(f, "e({k})"),
            Label::Wedge(parts) => {
                let s: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}", s.join("^"))
            }
            Label::Spin(bits) => {
                let s: Vec<String> = bits.iter().map(ToString::to_string).collect();
                write!(f, "I({})", s.join(","))
            }
            Label::Tensor(parts) => {
                let s: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}", s.join("⊗"))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RepModule {
    pub n: usize,
    labels: Vec<Label>,
    weights: Vec<Weight>,
    /// `f_c` for every cell, indexed by position in `≪` order.
    lowering: Vec<SparseMatrix>,
    /// `e_k` for simple roots `k = 1..=n`, at index `k − 1`.
    raising: Vec<SparseMatrix>,
}

impl RepModule {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn weight(&self, idx: usize) -> &Weight {
        &self.weights[idx]
    }

    pub fn lowering(&self, c: Cell) -> &SparseMatrix {
        &self.lowering[cell_index(self.n, c)]
    }

    /// Raising operator of simple root `k` (1-based).
    pub fn raising(&self, k: usize) -> &SparseMatrix {
        &self.raising[k - 1]
    }

    pub fn basis_vector(&self, idx: usize) -> ModVec {
        SparseVec::unit(idx)
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The basis vector whose weight maximises `⟨μ, ρ⟩`; for every module
    /// built here this is the highest weight vector.
    pub fn top_vector(&self) -> usize {
        let r = rho(self.n);
        (0..self.dim())
            .max_by(|&a, &b| {
                inner(&self.weights[a], &r)
                    .cmp(&inner(&self.weights[b], &r))
                    .then(b.cmp(&a))
            })
            .expect("modules are nonempty")
    }

    /// Weight of a vector all of whose terms share one weight.
    pub fn weight_of(&self, v: &ModVec) -> Option<Weight> {
        let mut ws = v.labels().map(|&i| &self.weights[i]);
        let first = ws.next()?.clone();
        ws.all(|w| *w == first).then_some(first)
    }

    pub fn vec_to_json(&self, v: &ModVec) -> Value {
        json!({
            "coords": v.iter().map(|(i, c)| json!({
                "label": self.labels[*i].to_string(),
                "coeff": format_rational(c),
            })).collect::<Vec<_>>(),
        })
    }

    /// Distinct weights of basis vectors.
    pub fn weight_set(&self) -> std::collections::HashSet<Weight> {
        self.weights.iter().cloned().collect()
    }
}

fn vector_index(n: usize, k: i64) -> usize {
    (k + n as i64) as usize
}

fn unit_weight(n: usize, k: i64) -> Weight {
    let mut w = vec![Rational::zero(); n];
    if k != 0 {
        w[k.unsigned_abs() as usize - 1] = int(k.signum());
    }
    w
}

/// Matrix from `(source, target, coefficient)` triples in vector-module labels.
fn vector_matrix(n: usize, maps: &[(i64, i64, i64)]) -> SparseMatrix {
    let mut m = SparseMatrix::zero(2 * n + 1);
    for &(from, to, c) in maps {
        m.set_column(
            vector_index(n, from),
            SparseVec::from_terms([(vector_index(n, to), int(c))]),
        );
    }
    m
}

/// The `(2n+1)`-dimensional module `L_{ω₁}` with basis `e_{−n}, …, e_n`.
///
/// For `i < j ≤ n`: `f_{i,j}` sends `e_i ↦ e_j`, `e_{−j} ↦ −e_{−i}`;
/// `f_{i,j̄}` sends `e_i ↦ e_{−j}`, `e_j ↦ −e_{−i}`; and the short
/// `f_{i,ī}` sends `e_i ↦ e_0`, `e_0 ↦ −2e_{−i}`.
pub fn vector_rep(n: usize) -> Result<RepModule> {
    let cs = cells(n)?;
    let labels = (-(n as i64)..=n as i64).map(Label::Vector).collect();
    let weights = (-(n as i64)..=n as i64)
        .map(|k| unit_weight(n, k))
        .collect();
    let lowering = cs
        .iter()
        .map(|c| {
            let i = c.i as i64;
            if c.is_short(n) {
                vector_matrix(n, &[(i, 0, 1), (0, -i, -2)])
            } else if c.j <= n {
                let j = c.j as i64;
                vector_matrix(n, &[(i, j, 1), (-j, -i, -1)])
            } else {
                let j = bar(n, c.j) as i64;
                vector_matrix(n, &[(i, -j, 1), (j, -i, -1)])
            }
        })
        .collect();
    let raising = (1..=n as i64)
        .map(|k| {
            if k < n as i64 {
                vector_matrix(n, &[(k + 1, k, 1), (-k, -(k + 1), -1)])
            } else {
                vector_matrix(n, &[(0, k, 2), (-k, 0, -1)])
            }
        })
        .collect();
    Ok(RepModule {
        n,
        labels,
        weights,
        lowering,
        raising,
    })
}

/// The one-dimensional module `L_0`.
pub fn trivial_rep(n: usize) -> Result<RepModule> {
    let cs = cells(n)?;
    Ok(RepModule {
        n,
        labels: vec![Label::Trivial],
        weights: vec![vec![Rational::zero(); n]],
        lowering: cs.iter().map(|_| SparseMatrix::zero(1)).collect(),
        raising: (0..n).map(|_| SparseMatrix::zero(1)).collect(),
    })
}

/// Sign of the permutation sorting `v`, or `None` if `v` has a repeat.
fn sort_sign(v: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            match v[a].cmp(&v[b]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    v.sort_unstable();
    Some(sign)
}

fn subsets(dim: usize, l: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, l: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for x in start..dim {
            cur.push(x);
            rec(x + 1, dim, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, l, &mut Vec::with_capacity(l), &mut out);
    out
}

/// `∧ˡ m` with basis the increasing `l`-subsets of `m`'s basis; operators act as derivations.
pub fn exterior_power(m: &RepModule, l: usize) -> Result<RepModule> {
    if l == 0 || l > m.dim() {
        return Err(Error::Precondition(format!(
            "exterior degree {l} outside 1..={}",
            m.dim()
        )));
    }
    let subs = subsets(m.dim(), l);
    let index: HashMap<&[usize], usize> = subs
        .iter()
        .enumerate()
        .map(|(k, s)| (s.as_slice(), k))
        .collect();
    let extend = |a: &SparseMatrix| {
        let cols = subs
            .iter()
            .map(|s| {
                let mut out = SparseVec::zero();
                for p in 0..l {
                    for (b, c) in a.column(s[p]).iter() {
                        let mut t = s.clone();
                        t[p] = *b;
                        if let Some(sign) = sort_sign(&mut t) {
                            out.add_term(index[t.as_slice()], c * int(sign));
                        }
                    }
                }
                out
            })
            .collect();
        SparseMatrix::from_columns(cols)
    };
    let labels = subs
        .iter()
        .map(|s| Label::Wedge(s.iter().map(|&x| m.labels[x].clone()).collect()))
        .collect();
    let weights = subs
        .iter()
        .map(|s| {
            let mut w = vec![Rational::zero(); m.n];
            for &x in s {
                for (acc, y) in w.iter_mut().zip(&m.weights[x]) {
                    *acc += y;
                }
            }
            w
        })
        .collect();
    Ok(RepModule {
        n: m.n,
        labels,
        weights,
        lowering: m.lowering.iter().map(extend).collect(),
        raising: m.raising.iter().map(extend).collect(),
    })
}

fn spin_bits(n: usize, idx: usize) -> Vec<u8> {
    (0..n).map(|k| ((idx >> (n - 1 - k)) & 1) as u8).collect()
}

fn spin_index(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// The `2ⁿ`-dimensional spin module `L_{ω_n}`.
///
/// Simple lowering operators flip bits: `f_{k,k+1}` takes `I_k = 0, I_{k+1} = 1`
/// to `I_k = 1, I_{k+1} = 0`, and `f_{n,n+1}` sets `I_n = 1` with sign
/// `∏_{m<n} (−1)^{I_m}`. Every other `f_{i,j}` is the bracket expression the
/// structure constants force, and the result is validated before returning.
pub fn spin_rep(n: usize) -> Result<RepModule> {
    let sc = structure_constants(n)?;
    spin_rep_with(&sc)
}

pub fn spin_rep_with(sc: &StructureConstants) -> Result<RepModule> {
    let n = sc.n;
    let cs = cells(n)?;
    let dim = 1usize << n;
    let labels = (0..dim).map(|x| Label::Spin(spin_bits(n, x))).collect();
    let weights = (0..dim)
        .map(|x| {
            spin_bits(n, x)
                .iter()
                .map(|&b| Rational::new((1 - 2 * b as i64).into(), 2.into()))
                .collect()
        })
        .collect();
    let parity_before = |bits: &[u8], k: usize| -> i64 {
        if bits[..k].iter().map(|&b| b as usize).sum::<usize>() % 2 == 0 {
            1
        } else {
            -1
        }
    };
    // k is 0-based here
    let flip = |k: usize, lowering: bool| -> SparseMatrix {
        let cols = (0..dim)
            .map(|x| {
                let mut bits = spin_bits(n, x);
                let (from, to) = if lowering { (0, 1) } else { (1, 0) };
                if k + 1 < n {
                    if bits[k] == from && bits[k + 1] == to {
                        bits[k] = to;
                        bits[k + 1] = from;
                        return SparseVec::unit(spin_index(&bits));
                    }
                } else if bits[k] == from {
                    let sign = parity_before(&bits, k);
                    bits[k] = to;
                    return SparseVec::from_terms([(spin_index(&bits), int(sign))]);
                }
                SparseVec::zero()
            })
            .collect();
        SparseMatrix::from_columns(cols)
    };

    let mut lowering: Vec<Option<SparseMatrix>> = vec![None; cs.len()];
    for k in 0..n {
        lowering[cell_index(n, Cell::new(k + 1, k + 2))] = Some(flip(k, true));
    }
    let heights: Vec<usize> = cs.iter().map(|&c| root_height(n, c)).collect();
    let mut order: Vec<usize> = (0..cs.len()).collect();
    order.sort_by_key(|&k| heights[k]);
    for &target in &order {
        if lowering[target].is_some() {
            continue;
        }
        let found = simple_cells(n).into_iter().find_map(|s| {
            cs.iter().enumerate().find_map(|(d, &dc)| {
                let built = lowering[d].as_ref()?;
                let k = sc.bracket(s, dc).coeff(&cs[target]);
                (!k.is_zero()).then(|| (s, built.clone(), k))
            })
        });
        let (s, fd, k) = found.ok_or_else(|| {
            Error::Representation(format!("no bracket word produces f at ({})", cs[target]))
        })?;
        let fs = lowering[cell_index(n, s)]
            .as_ref()
            .expect("simple operators are built first");
        lowering[target] = Some(fs.commutator(&fd).scaled(&k.recip()));
    }
    let module = RepModule {
        n,
        labels,
        weights,
        lowering: lowering
            .into_iter()
            .map(|m| m.expect("all cells built"))
            .collect(),
        raising: (0..n).map(|k| flip(k, false)).collect(),
    };
    check_module(&module, sc)?;
    Ok(module)
}

/// Height of the root on cell `c` in simple-root coordinates.
pub fn root_height(n: usize, c: Cell) -> usize {
    let r = root_of_cell(n, c).expect("valid cell");
    // in simple-root coordinates the k-th coefficient is Σ_{m≤k} r_m
    let mut acc = Rational::zero();
    let mut h = Rational::zero();
    for x in &r.coords {
        acc += x;
        h += &acc;
    }
    usize::try_from(h.to_integer()).expect("positive root")
}

/// `m₁ ⊗ … ⊗ m_k` with basis the tuples of basis indices in lexicographic order.
pub fn tensor(ms: &[RepModule]) -> Result<RepModule> {
    let Some(first) = ms.first() else {
        return Err(Error::Precondition("tensor product of no modules".into()));
    };
    let n = first.n;
    if let Some(bad) = ms.iter().find(|m| m.n != n) {
        return Err(Error::RankMismatch {
            expected: n,
            got: bad.n,
        });
    }
    if ms.len() == 1 {
        return Ok(first.clone());
    }
    let dims: Vec<usize> = ms.iter().map(RepModule::dim).collect();
    let total: usize = dims.iter().product();
    let split = |mut x: usize| -> Vec<usize> {
        let mut parts = vec![0; dims.len()];
        for p in (0..dims.len()).rev() {
            parts[p] = x % dims[p];
            x /= dims[p];
        }
        parts
    };
    let join = |parts: &[usize]| parts.iter().zip(&dims).fold(0, |acc, (&p, &d)| acc * d + p);
    let tuples: Vec<Vec<usize>> = (0..total).map(split).collect();
    let extend = |ops: Vec<&SparseMatrix>| {
        let cols = tuples
            .iter()
            .map(|t| {
                let mut out = SparseVec::zero();
                for (p, op) in ops.iter().enumerate() {
                    for (b, c) in op.column(t[p]).iter() {
                        let mut u = t.clone();
                        u[p] = *b;
                        out.add_term(join(&u), c.clone());
                    }
                }
                out
            })
            .collect();
        SparseMatrix::from_columns(cols)
    };
    let labels = tuples
        .iter()
        .map(|t| {
            Label::Tensor(
                t.iter()
                    .zip(ms)
                    .map(|(&x, m)| m.labels[x].clone())
                    .collect(),
            )
        })
        .collect();
    let weights = tuples
        .iter()
        .map(|t| {
            let mut w = vec![Rational::zero(); n];
            for (&x, m) in t.iter().zip(ms) {
                for (acc, y) in w.iter_mut().zip(&m.weights[x]) {
                    *acc += y;
                }
            }
            w
        })
        .collect();
    let ncells = first.lowering.len();
    Ok(RepModule {
        n,
        labels,
        weights,
        lowering: (0..ncells)
            .map(|c| extend(ms.iter().map(|m| &m.lowering[c]).collect()))
            .collect(),
        raising: (0..n)
            .map(|k| extend(ms.iter().map(|m| &m.raising[k]).collect()))
            .collect(),
    })
}

/// `f_{i₁} ⋯ f_{i_N} v`, rightmost factor acting first.
pub fn apply_word(m: &RepModule, w: &Word, v: &ModVec) -> Result<ModVec> {
    if w.n != m.n {
        return Err(Error::RankMismatch {
            expected: m.n,
            got: w.n,
        });
    }
    let mut out = v.clone();
    for &c in w.factors.iter().rev() {
        if out.is_zero() {
            break;
        }
        out = m.lowering(c).apply(&out);
    }
    Ok(out)
}

/// Checks weights, the Chevalley relations `[e_k, f_l] = δ_{kl} h_k` on
/// simple roots, and that all lowering commutators match `sc`.
pub fn check_module(m: &RepModule, sc: &StructureConstants) -> Result<()> {
    let n = m.n;
    let bad = |msg: String| Err(Error::Representation(msg));
    let cs = cells(n)?;
    for (k, &c) in cs.iter().enumerate() {
        let root = root_of_cell(n, c)?.coords;
        for j in 0..m.dim() {
            let expect: Weight = m.weights[j].iter().zip(&root).map(|(a, b)| a - b).collect();
            if m.lowering[k]
                .column(j)
                .labels()
                .any(|&i| m.weights[i] != expect)
            {
                return bad(format!(
                    "f at ({c}) does not lower weight of {} by its root",
                    m.labels[j]
                ));
            }
        }
    }
    for k in 1..=n {
        let alpha = root_of_cell(n, Cell::new(k, k + 1))?.coords;
        for j in 0..m.dim() {
            let expect: Weight = m.weights[j]
                .iter()
                .zip(&alpha)
                .map(|(a, b)| a + b)
                .collect();
            if m.raising[k - 1]
                .column(j)
                .labels()
                .any(|&i| m.weights[i] != expect)
            {
                return bad(format!(
                    "e_{k} does not raise weight of {} by α_{k}",
                    m.labels[j]
                ));
            }
        }
        for l in 1..=n {
            let br = m.raising[k - 1].commutator(m.lowering(Cell::new(l, l + 1)));
            let expect = if k == l {
                SparseMatrix::from_columns(
                    (0..m.dim())
                        .map(|j| SparseVec::from_terms([(j, coroot_pairing(&m.weights[j], k))]))
                        .collect(),
                )
            } else {
                SparseMatrix::zero(m.dim())
            };
            if br != expect {
                return bad(format!("[e_{k}, f_{l}] differs from δ·h_{k}"));
            }
        }
    }
    for (a, &ca) in cs.iter().enumerate() {
        for (b, &cb) in cs.iter().enumerate().skip(a + 1) {
            let lhs = m.lowering[a].commutator(&m.lowering[b]);
            let mut rhs = SparseMatrix::zero(m.dim());
            for (e, coef) in sc.bracket(ca, cb).iter() {
                rhs.add_scaled(m.lowering(*e), coef);
            }
            if lhs != rhs {
                return bad(format!(
                    "[f({ca}), f({cb})] does not match the structure constants"
                ));
            }
        }
    }
    Ok(())
}

/// `L_λ` realised as the cyclic submodule generated by the highest weight
/// vector of a tensor product of fundamental modules.
#[derive(Clone, Debug)]
pub struct Irreducible {
    pub weight: DominantWeight,
    pub ambient: RepModule,
    pub highest: ModVec,
    /// Weight vectors spanning the submodule, found by closing under the simple `f`s.
    pub basis: Vec<ModVec>,
}

impl Irreducible {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Weights of the submodule.
    pub fn weight_set(&self) -> std::collections::HashSet<Weight> {
        self.basis
            .iter()
            .filter_map(|v| self.ambient.weight_of(v))
            .collect()
    }

    pub fn apply(&self, w: &Word) -> Result<ModVec> {
        apply_word(&self.ambient, w, &self.highest)
    }
}

/// Fundamental module `L_{ω_k}`: `∧ᵏ L_{ω₁}` for `k < n`, spin for `k = n`.
pub fn fundamental_module(n: usize, k: usize, sc: &StructureConstants) -> Result<RepModule> {
    if k == n {
        spin_rep_with(sc)
    } else {
        let v = vector_rep(n)?;
        if k == 1 {
            Ok(v)
        } else {
            exterior_power(&v, k)
        }
    }
}

pub fn irreducible_module(w: &DominantWeight) -> Result<Irreducible> {
    let sc = structure_constants(w.n)?;
    irreducible_module_with(w, &sc)
}

pub fn irreducible_module_with(w: &DominantWeight, sc: &StructureConstants) -> Result<Irreducible> {
    let n = w.n;
    let mut factors = Vec::new();
    for k in 1..=n {
        if w.a[k - 1] > 0 {
            let f = fundamental_module(n, k, sc)?;
            for _ in 0..w.a[k - 1] {
                factors.push(f.clone());
            }
        }
    }
    let ambient = if factors.is_empty() {
        trivial_rep(n)?
    } else {
        tensor(&factors)?
    };
    let top = ambient.top_vector();
    if ambient.weights[top] != w.lambda {
        return Err(Error::Representation(format!(
            "top vector of the ambient module has the wrong weight for {w}"
        )));
    }
    let highest = ambient.basis_vector(top);
    for k in 1..=n {
        if !ambient.raising(k).apply(&highest).is_zero() {
            return Err(Error::Representation(format!(
                "e_{k} does not annihilate the highest vector"
            )));
        }
    }
    let simple: Vec<&SparseMatrix> = simple_cells(n)
        .into_iter()
        .map(|c| ambient.lowering(c))
        .collect();
    let mut span = SpanBasis::new();
    span.insert(&highest);
    let mut basis = vec![highest.clone()];
    let mut next = 0;
    while next < basis.len() {
        let v = basis[next].clone();
        next += 1;
        for f in &simple {
            let image = f.apply(&v);
            if span.insert(&image).inserted {
                basis.push(image);
            }
        }
    }
    let expected = crate::rootsys::weyl_dim(w);
    if BigUint::from(basis.len()) != expected {
        return Err(Error::Representation(format!(
            "cyclic submodule for {w} has dimension {}, expected {expected}",
            basis.len()
        )));
    }
    Ok(Irreducible {
        weight: w.clone(),
        ambient,
        highest,
        basis,
    })
}

/// `Σ c_K K v` for a combination of ordered monomials.
pub fn apply_lincomb(m: &RepModule, comb: &crate::pbw::LinComb, v: &ModVec) -> Result<ModVec> {
    let mut out = SparseVec::zero();
    for (t, c) in comb.iter() {
        let img = apply_word(m, &crate::pbw::OrderedMonomial::new(t.clone()).word(), v)?;
        out.add_scaled(&img, c);
    }
    Ok(out)
}

/// `mᵏ`.
pub fn power(m: &SparseMatrix, k: u32) -> SparseMatrix {
    let mut out = SparseMatrix::identity(m.dim());
    for _ in 0..k {
        out = m.compose(&out);
    }
    out
}
