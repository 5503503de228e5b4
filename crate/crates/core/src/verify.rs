//! Verification drivers producing JSON certificates: monomial bases of
//! `L_λ`, straightening of ordered monomials, Minkowski splitting of
//! lattice points, and dimensions of the graded degeneration.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernel::{doubled, format_rational, rat, Rational, SpanBasis, SparseVec};
use crate::patterns::{enumerate_pi, grad_doubled, in_pi, Triangle};
use crate::pbw::{is_arranged, prec, structure_constants, LinComb, OrderedMonomial, Word};
use crate::repbuild::{apply_word, irreducible_module_with, Irreducible, ModVec};
use crate::rootsys::{cells, root_of_cell, weyl_dim, Cell, DominantWeight, Weight};

/// How to pick one arranged word `M_T` for each `T ∈ Π_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisPolicy {
    /// The `≪`-sorted word of `T`.
    Ordered,
    /// A seeded random shuffle of the factors, with short-root factors then sorted by `i`.
    RandomArranged(u64),
    /// One word per triangle, supplied by the caller.
    Explicit(Vec<Word>),
}

impl BasisPolicy {
    pub fn to_json(&self) -> Value {
        match self {
            BasisPolicy::Ordered => json!("ordered"),
            BasisPolicy::RandomArranged(seed) => json!({ "random-arranged": seed }),
            BasisPolicy::Explicit(words) => {
                json!({ "explicit": words.iter().map(ToString::to_string).collect::<Vec<_>>() })
            }
        }
    }
}

/// Outcome of a verification with the data needed to reproduce it.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub claim: String,
    pub params: Value,
    pub passed: bool,
    pub witness: Value,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "claim": self.claim,
            "params": self.params,
            "verdict": if self.passed { "pass" } else { "fail" },
            "witness": self.witness,
        })
    }
}

fn weight_params(w: &DominantWeight) -> Value {
    json!({ "n": w.n, "weight": w.a })
}

fn grade_key(doubled_grad: u64) -> String {
    format_rational(&rat(doubled_grad as i64, 2))
}

/// Context shared by the drivers for one weight: the module and its polytope.
#[derive(Clone, Debug)]
pub struct Setting {
    pub module: Irreducible,
    pub pi: Vec<Triangle>,
}

impl Setting {
    pub fn new(w: &DominantWeight) -> Result<Self> {
        let sc = structure_constants(w.n)?;
        let module = irreducible_module_with(w, &sc)?;
        Ok(Setting {
            module,
            pi: enumerate_pi(w),
        })
    }

    pub fn weight(&self) -> &DominantWeight {
        &self.module.weight
    }

    pub fn apply(&self, word: &Word) -> Result<ModVec> {
        apply_word(&self.module.ambient, word, &self.module.highest)
    }
}

/// Random arranged word with the given exponents.
pub fn random_arranged_word(t: &Triangle, rng: &mut ChaCha8Rng) -> Word {
    let n = t.n;
    let mut factors = OrderedMonomial::new(t.clone()).word().factors;
    factors.shuffle(rng);
    let mut shorts: Vec<Cell> = factors.iter().copied().filter(|c| c.is_short(n)).collect();
    shorts.sort();
    let mut next = shorts.into_iter();
    for f in factors.iter_mut().filter(|c| c.is_short(n)) {
        *f = next.next().expect("same number of short factors");
    }
    Word { n, factors }
}

/// One word per `T ∈ Π_λ`, keyed by `T`.
pub fn monomials_for(w: &DominantWeight, p: &BasisPolicy) -> Result<BTreeMap<Triangle, Word>> {
    monomials_for_pi(w, &enumerate_pi(w), p)
}

fn monomials_for_pi(
    w: &DominantWeight,
    pi: &[Triangle],
    p: &BasisPolicy,
) -> Result<BTreeMap<Triangle, Word>> {
    match p {
        BasisPolicy::Ordered => Ok(pi
            .iter()
            .map(|t| (t.clone(), OrderedMonomial::new(t.clone()).word()))
            .collect()),
        BasisPolicy::RandomArranged(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok(pi
                .iter()
                .map(|t| (t.clone(), random_arranged_word(t, &mut rng)))
                .collect())
        }
        BasisPolicy::Explicit(words) => {
            let mut out = BTreeMap::new();
            for word in words {
                if word.n != w.n {
                    return Err(Error::RankMismatch {
                        expected: w.n,
                        got: word.n,
                    });
                }
                if !is_arranged(word) {
                    return Err(Error::Policy(format!("word {word} is not arranged")));
                }
                let t = word.log();
                if !in_pi(&t, w) {
                    return Err(Error::Policy(format!(
                        "exponents of {word} lie outside the polytope"
                    )));
                }
                if out.insert(t, word.clone()).is_some() {
                    return Err(Error::Policy(format!(
                        "two words share the exponents of {word}"
                    )));
                }
            }
            if out.len() != pi.len() {
                return Err(Error::Policy(format!(
                    "{} words given for {} lattice points",
                    out.len(),
                    pi.len()
                )));
            }
            Ok(out)
        }
    }
}

/// Checks that `{M_T v₀ : T ∈ Π_λ}` is a basis of `L_λ`.
pub fn verify_basis(w: &DominantWeight, p: &BasisPolicy) -> Result<Certificate> {
    verify_basis_in(&Setting::new(w)?, p)
}

pub fn verify_basis_in(s: &Setting, p: &BasisPolicy) -> Result<Certificate> {
    let w = s.weight();
    let words = monomials_for_pi(w, &s.pi, p)?;
    let mut span = SpanBasis::new();
    let mut order: Vec<&Triangle> = Vec::with_capacity(words.len());
    let mut dependent = Value::Null;
    for (t, word) in &words {
        let v = s.apply(word)?;
        let ins = span.insert(&v);
        order.push(t);
        if !ins.inserted && dependent.is_null() {
            let relation = span.express(&v).unwrap_or_default();
            dependent = json!({
                "triangle": t.to_json(),
                "word": word.to_string(),
                "in_span_of": relation.iter().map(|(k, c)| json!({
                    "triangle": order[*k].to_json(),
                    "coeff": format_rational(c),
                })).collect::<Vec<_>>(),
            });
        }
    }
    let wd = weyl_dim(w);
    let passed = dependent.is_null()
        && span.rank() == s.pi.len()
        && span.rank() == s.module.dim()
        && BigUint::from(span.rank()) == wd;
    Ok(Certificate {
        claim: "arranged monomials applied to the highest weight vector form a basis".into(),
        params: json!({ "n": w.n, "weight": w.a, "policy": p.to_json() }),
        passed,
        witness: json!({
            "rank": span.rank(),
            "lattice_points": s.pi.len(),
            "module_dim": s.module.dim(),
            "weyl_dim": wd.to_string(),
            "words": words.iter().map(|(t, wd)| json!({"triangle": t.to_json(), "word": wd.to_string()})).collect::<Vec<_>>(),
            "dependent": dependent,
        }),
    })
}

/// Triangles `T` whose weight `λ − Σ T_c·root(c)` is a weight of `L_λ`.
///
/// Any other ordered monomial annihilates `v₀`. Partial assignments are
/// pruned once no module weight lies below the partial weight in the root
/// order, which is monotone under adding further roots.
pub fn weight_filtered_triangles(w: &DominantWeight, weights: &HashSet<Weight>) -> Vec<Triangle> {
    let n = w.n;
    let cs = cells(n).expect("n >= 1");
    let to2 = |v: &[Rational]| -> Vec<i64> {
        v.iter()
            .map(|x| doubled(x).expect("half-integral"))
            .collect()
    };
    let roots: Vec<Vec<i64>> = cs
        .iter()
        .map(|&c| to2(&root_of_cell(n, c).expect("valid").coords))
        .collect();
    let targets: Vec<Vec<i64>> = weights.iter().map(|v| to2(v)).collect();
    let target_set: HashSet<Vec<i64>> = targets.iter().cloned().collect();
    let above_some = |mu: &[i64]| {
        targets.iter().any(|nu| {
            let mut acc = 0;
            mu.iter().zip(nu).all(|(a, b)| {
                acc += a - b;
                acc >= 0
            })
        })
    };
    let mut out = Vec::new();
    let mut entries = vec![0u32; cs.len()];
    let mut mu = w.lambda_doubled();
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        k: usize,
        entries: &mut Vec<u32>,
        mu: &mut Vec<i64>,
        roots: &[Vec<i64>],
        above: &dyn Fn(&[i64]) -> bool,
        target_set: &HashSet<Vec<i64>>,
        n: usize,
        out: &mut Vec<Triangle>,
    ) {
        if k == entries.len() {
            if target_set.contains(mu.as_slice()) {
                out.push(Triangle {
                    n,
                    entries: entries.clone(),
                });
            }
            return;
        }
        let saved = mu.clone();
        loop {
            dfs(k + 1, entries, mu, roots, above, target_set, n, out);
            for (m, r) in mu.iter_mut().zip(&roots[k]) {
                *m -= r;
            }
            entries[k] += 1;
            if !above(mu) {
                break;
            }
        }
        entries[k] = 0;
        *mu = saved;
    }
    dfs(
        0,
        &mut entries,
        &mut mu,
        &roots,
        &above_some,
        &target_set,
        n,
        &mut out,
    );
    out
}

/// Expansion of `M v₀` in the ordered basis `{exp(T) v₀ : T ∈ Π_λ}`.
#[derive(Clone, Debug)]
pub struct Straightener<'a> {
    setting: &'a Setting,
    span: SpanBasis<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Straightening {
    pub coefficients: LinComb,
    pub certificate: Certificate,
}

impl<'a> Straightener<'a> {
    pub fn new(setting: &'a Setting) -> Result<Self> {
        let mut span = SpanBasis::new();
        for t in &setting.pi {
            let v = setting.apply(&OrderedMonomial::new(t.clone()).word())?;
            if !span.insert(&v).inserted {
                return Err(Error::Verification(format!(
                    "ordered monomials are dependent at {t:?}"
                )));
            }
        }
        Ok(Straightener { setting, span })
    }

    pub fn straighten(&self, m: &OrderedMonomial) -> Result<Straightening> {
        let w = self.setting.weight();
        if m.exponents.n != w.n {
            return Err(Error::RankMismatch {
                expected: w.n,
                got: m.exponents.n,
            });
        }
        if in_pi(&m.exponents, w) {
            return Err(Error::Precondition(
                "exponents lie in the polytope; nothing to straighten".into(),
            ));
        }
        let target = self.setting.apply(&m.word())?;
        let combo = self.span.express(&target).ok_or_else(|| {
            Error::Verification("vector lies outside the span of the ordered basis".into())
        })?;
        let coefficients: LinComb = SparseVec::from_terms(
            combo
                .iter()
                .map(|(k, c)| (self.setting.pi[*k].clone(), c.clone())),
        );
        let offenders: Vec<&Triangle> = coefficients
            .labels()
            .filter(|t| prec(&OrderedMonomial::new((*t).clone()), m) != Ordering::Less)
            .collect();
        let mut rebuilt = SparseVec::zero();
        for (t, c) in coefficients.iter() {
            rebuilt.add_scaled(
                &self
                    .setting
                    .apply(&OrderedMonomial::new(t.clone()).word())?,
                c,
            );
        }
        let round_trip = rebuilt == target;
        let certificate = Certificate {
            claim: "an ordered monomial outside the polytope is a combination of smaller basis monomials".into(),
            params: json!({ "n": w.n, "weight": w.a, "monomial": m.exponents.to_json() }),
            passed: offenders.is_empty() && round_trip,
            witness: json!({
                "terms": crate::pbw::lincomb_to_json(&coefficients)["terms"],
                "not_smaller": offenders.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
                "round_trip": round_trip,
            }),
        };
        Ok(Straightening {
            coefficients,
            certificate,
        })
    }
}

pub fn straighten(w: &DominantWeight, m: &OrderedMonomial) -> Result<Straightening> {
    let s = Setting::new(w)?;
    Straightener::new(&s)?.straighten(m)
}

/// `T = T' + U` with `U ∈ Π_ε` and `T' ∈ Π_{λ−ε}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Minkowski {
    pub epsilon: DominantWeight,
    pub lambda_prime: DominantWeight,
    pub t_prime: Triangle,
    pub u: Triangle,
    pub used_fallback: bool,
    /// Why the indicator construction was rejected, when it was.
    pub construction_failure: Option<String>,
}

impl Minkowski {
    pub fn certificate(&self, w: &DominantWeight, t: &Triangle) -> Certificate {
        Certificate {
            claim: "lattice point splits as a sum of points of smaller polytopes".into(),
            params: json!({ "n": w.n, "weight": w.a, "triangle": t.to_json() }),
            passed: true,
            witness: json!({
                "epsilon": self.epsilon.a,
                "lambda_prime": self.lambda_prime.a,
                "u": self.u.to_json(),
                "t_prime": self.t_prime.to_json(),
                "used_fallback": self.used_fallback,
                "construction_failure": self.construction_failure,
            }),
        }
    }
}

/// `(i₁,j₁) ⋘ (i₂,j₂)`: distinct with `i₁ ≤ i₂` and `j₁ ≤ j₂`.
pub fn lll(a: Cell, b: Cell) -> bool {
    a != b && a.i <= b.i && a.j <= b.j
}

/// The splitting step `ε` for `λ`: `ω_l` for the least `l` with `a_l > 0`, or `2ω_n` if `l = n`.
pub fn minkowski_epsilon(w: &DominantWeight) -> Result<(usize, DominantWeight)> {
    let n = w.n;
    let l = w.a.iter().position(|&x| x > 0).map(|p| p + 1);
    let Some(l) = l else {
        return Err(Error::Precondition("weight is zero".into()));
    };
    let eps = if l < n {
        DominantWeight::fundamental(n, l)?
    } else {
        let mut a = vec![0; n];
        a[n - 1] = 2;
        crate::rootsys::weight_from_fundamental(n, &a)?
    };
    Ok((l, eps))
}

/// True for `λ` admitting a splitting: nonzero, not fundamental and not `2ω_n`.
pub fn minkowski_eligible(w: &DominantWeight) -> bool {
    let total: u32 = w.a.iter().sum();
    let two_omega_n = total == 2 && w.a[w.n - 1] == 2;
    total >= 2 && !two_omega_n
}

pub fn minkowski_decompose(w: &DominantWeight, t: &Triangle) -> Result<Minkowski> {
    if !minkowski_eligible(w) {
        return Err(Error::Precondition(format!(
            "{w} is zero, fundamental or 2ω_n"
        )));
    }
    if !in_pi(t, w) {
        return Err(Error::NotInPolytope);
    }
    let (l, epsilon) = minkowski_epsilon(w)?;
    let lambda_prime = w
        .checked_sub(&epsilon)
        .expect("ε is below λ by construction");
    let support = t.support();
    let mut u = Triangle::zero(w.n);
    for &c in &support {
        if c.i <= l && !support.iter().any(|&d| lll(d, c)) {
            u.set(c, 1);
        }
    }
    let valid = |u: &Triangle| {
        t.checked_sub(u)
            .filter(|rest| in_pi(u, &epsilon) && in_pi(rest, &lambda_prime))
    };
    if let Some(t_prime) = valid(&u) {
        return Ok(Minkowski {
            epsilon,
            lambda_prime,
            t_prime,
            u,
            used_fallback: false,
            construction_failure: None,
        });
    }
    let construction_failure = Some(format!(
        "indicator {u:?} of minimal support cells: {}",
        if !in_pi(&u, &epsilon) {
            "not in the ε polytope"
        } else {
            "remainder not in the λ−ε polytope"
        }
    ));
    for cand in enumerate_pi(&epsilon) {
        if let Some(t_prime) = valid(&cand) {
            return Ok(Minkowski {
                epsilon,
                lambda_prime,
                t_prime,
                u: cand,
                used_fallback: true,
                construction_failure,
            });
        }
    }
    Err(Error::Verification(format!(
        "no splitting of {t:?} for {w}"
    )))
}

/// Per-grade data of the PBW filtration on `L_λ`, grades stored doubled.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedDims {
    /// `#{T ∈ Π_λ : grad T = m}`.
    pub counts: BTreeMap<u64, usize>,
    /// `dim (L_λ)_m`, the span of `M v₀` over ordered `M` with `grad M ≤ m`.
    pub filtration: BTreeMap<u64, usize>,
    pub certificate: Certificate,
}

struct Layers {
    grades: Vec<u64>,
    counts: BTreeMap<u64, usize>,
    filtration: BTreeMap<u64, usize>,
    degeneration_failure: Option<Value>,
}

fn graded_layers(s: &Setting) -> Result<Layers> {
    let w = s.weight();
    let mut filtered = weight_filtered_triangles(w, &s.module.weight_set());
    filtered.sort_by_key(grad_doubled);
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for t in &s.pi {
        *counts.entry(grad_doubled(t)).or_default() += 1;
    }
    let mut grades: Vec<u64> = filtered
        .iter()
        .map(grad_doubled)
        .chain(counts.keys().copied())
        .collect();
    grades.sort_unstable();
    grades.dedup();
    let mut span = SpanBasis::new();
    let mut filtration = BTreeMap::new();
    let mut degeneration_failure = None;
    let mut next = 0;
    for &g in &grades {
        let mut lower = span.clone();
        let base_rank = lower.rank();
        for t in s.pi.iter().filter(|t| grad_doubled(t) == g) {
            let v = s.apply(&OrderedMonomial::new(t.clone()).word())?;
            if !lower.insert(&v).inserted && degeneration_failure.is_none() {
                degeneration_failure =
                    Some(json!({ "grade": grade_key(g), "triangle": t.to_json() }));
            }
        }
        while next < filtered.len() && grad_doubled(&filtered[next]) == g {
            span.insert(&s.apply(&OrderedMonomial::new(filtered[next].clone()).word())?);
            next += 1;
        }
        if lower.rank() != span.rank() && degeneration_failure.is_none() {
            degeneration_failure = Some(json!({
                "grade": grade_key(g),
                "reached": lower.rank() - base_rank,
                "needed": span.rank() - base_rank,
            }));
        }
        filtration.insert(g, span.rank());
    }
    Ok(Layers {
        grades,
        counts,
        filtration,
        degeneration_failure,
    })
}

pub fn graded_dims(w: &DominantWeight) -> Result<GradedDims> {
    graded_dims_in(&Setting::new(w)?)
}

pub fn graded_dims_in(s: &Setting) -> Result<GradedDims> {
    let w = s.weight();
    let layers = graded_layers(s)?;
    let mut mismatch = Value::Null;
    let mut prev = 0;
    // grades carrying neither a lattice point nor a filtration jump are left out of the report
    let mut counts = BTreeMap::new();
    let mut filtration = BTreeMap::new();
    for &g in &layers.grades {
        let rank = layers.filtration[&g];
        let count = layers.counts.get(&g).copied().unwrap_or(0);
        if rank - prev != count && mismatch.is_null() {
            mismatch = json!({ "grade": grade_key(g), "count": count, "increment": rank - prev });
        }
        if count > 0 || rank > prev {
            counts.insert(g, count);
            filtration.insert(g, rank);
        }
        prev = rank;
    }
    let passed = mismatch.is_null() && prev == s.module.dim() && prev == s.pi.len();
    let certificate = Certificate {
        claim: "graded lattice point counts match the PBW filtration".into(),
        params: weight_params(w),
        passed,
        witness: json!({
            "grades": counts.iter().map(|(&g, &count)| json!({
                "grade": grade_key(g),
                "count": count,
                "filtration_dim": filtration[&g],
            })).collect::<Vec<_>>(),
            "module_dim": s.module.dim(),
            "mismatch": mismatch,
        }),
    };
    Ok(GradedDims {
        counts,
        filtration,
        certificate,
    })
}

/// Checks that ordered monomials of `Π_λ` of each grade are independent
/// modulo the previous filtration layer and fill the current one.
pub fn degeneration_basis_check(w: &DominantWeight) -> Result<Certificate> {
    degeneration_basis_check_in(&Setting::new(w)?)
}

pub fn degeneration_basis_check_in(s: &Setting) -> Result<Certificate> {
    let w = s.weight();
    let layers = graded_layers(s)?;
    Ok(Certificate {
        claim: "ordered monomials of the polytope give a basis of the associated graded module"
            .into(),
        params: weight_params(w),
        passed: layers.degeneration_failure.is_none(),
        witness: json!({
            "grades": layers.grades.iter().map(|&g| grade_key(g)).collect::<Vec<_>>(),
            "failure": layers.degeneration_failure,
        }),
    })
}

/// True if `f_{i,ī} … f_{j,j̄} … f_{i,ī}` with `i ≠ j` occurs as a subsequence.
pub fn has_forbidden_pattern(w: &Word) -> bool {
    let shorts: Vec<usize> = w
        .factors
        .iter()
        .filter(|c| c.is_short(w.n))
        .map(|c| c.i)
        .collect();
    (0..shorts.len()).any(|p| {
        (p + 1..shorts.len())
            .any(|q| shorts[q] != shorts[p] && shorts[q + 1..].contains(&shorts[p]))
    })
}

/// Samples words that are not arranged but avoid the forbidden pattern,
/// and reports whether the resulting sets are bases.
///
/// For each of `samples` rounds, every `T ∈ Π_λ` of degree at most
/// `max_len` gets a random non-arranged pattern-avoiding word if one is
/// found within a bounded number of shuffles; other triangles keep their
/// ordered word. The report is informational.
pub fn conjecture_scan(
    w: &DominantWeight,
    max_len: usize,
    samples: usize,
    seed: u64,
) -> Result<Value> {
    const ATTEMPTS: usize = 64;
    let mut report = Vec::new();
    if max_len > 0 {
        let s = Setting::new(w)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for sample in 0..samples {
            let mut span = SpanBasis::new();
            let mut replaced = Vec::new();
            for t in &s.pi {
                let ordered = OrderedMonomial::new(t.clone()).word();
                let mut word = ordered.clone();
                if t.degree() as usize <= max_len {
                    for _ in 0..ATTEMPTS {
                        let mut f = ordered.factors.clone();
                        f.shuffle(&mut rng);
                        let cand = Word { n: w.n, factors: f };
                        if !is_arranged(&cand) && !has_forbidden_pattern(&cand) {
                            word = cand;
                            break;
                        }
                    }
                }
                if word != ordered {
                    replaced.push(word.to_string());
                }
                span.insert(&s.apply(&word)?);
            }
            report.push(json!({
                "sample": sample,
                "non_arranged_words": replaced,
                "rank": span.rank(),
                "dim": s.module.dim(),
                "is_basis": span.rank() == s.module.dim(),
            }));
        }
    }
    Ok(json!({
        "claim": "pattern-avoiding non-arranged words (exploratory)",
        "params": { "n": w.n, "weight": w.a, "max_len": max_len, "samples": samples, "seed": seed },
        "samples": report,
    }))
}
