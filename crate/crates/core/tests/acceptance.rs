//! Acceptance suite: runs every criterion and prints one PASS/FAIL line each.
//! Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use bfflv::gtbij::{enumerate_gt, f_map, g_map};
use bfflv::kernel::{int, rat, SparseMatrix, SparseVec};
use bfflv::patterns::{enumerate_pi, grad_doubled, in_pi, Triangle};
use bfflv::pbw::{is_arranged, prec, structure_constants, Normalizer, OrderedMonomial, Word};
use bfflv::repbuild::{
    apply_word, check_module, exterior_power, irreducible_module, power, spin_rep_with, vector_rep,
    Label, RepModule,
};
use bfflv::rootsys::{bar, cells, weight_from_fundamental, weyl_dim, Cell, DominantWeight};
use bfflv::verify::{
    degeneration_basis_check_in, graded_dims_in, minkowski_decompose, minkowski_eligible,
    minkowski_epsilon, random_arranged_word, verify_basis_in, weight_filtered_triangles,
    BasisPolicy, Setting, Straightener,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn wt(n: usize, a: &[i64]) -> DominantWeight {
    weight_from_fundamental(n, a).expect("valid weight")
}

fn c(i: usize, j: usize) -> Cell {
    Cell::new(i, j)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Fundamental coordinates with entries summing to at most 2, plus `(2,2)` for rank 2.
fn counting_weights() -> Vec<DominantWeight> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let mut stack = vec![vec![]];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n {
                out.push(wt(n, &prefix));
                continue;
            }
            let used: i64 = prefix.iter().sum();
            for v in 0..=(2 - used) {
                let mut p = prefix.clone();
                p.push(v);
                stack.push(p);
            }
        }
    }
    out.push(wt(2, &[2, 2]));
    out.sort_by(|a, b| (a.n, &a.a).cmp(&(b.n, &b.a)));
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let ws = counting_weights();
    for w in &ws {
        let pi = enumerate_pi(w).len();
        let gt = enumerate_gt(w).len();
        let d = weyl_dim(w);
        ensure(BigUint::from(pi) == d && BigUint::from(gt) == d, || {
            format!("{w}: |Π|={pi} |Γ|={gt} weyl_dim={d}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("{} weights, {:.2?}", ws.len(), elapsed))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for w in counting_weights() {
        for t in enumerate_pi(&w) {
            let back =
                f_map(&g_map(&t, &w).map_err(|e| e.to_string())?, &w).map_err(|e| e.to_string())?;
            ensure(back == t, || format!("{w}: f(g(T)) != T for {t:?}"))?;
            checked += 1;
        }
        for r in enumerate_gt(&w) {
            let back =
                g_map(&f_map(&r, &w).map_err(|e| e.to_string())?, &w).map_err(|e| e.to_string())?;
            ensure(back == r, || format!("{w}: g(f(R)) != R for {r:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} round trips"))
}

fn wedge(m: &RepModule, ks: &[i64]) -> SparseVec<usize> {
    let label = Label::Wedge(ks.iter().map(|&k| Label::Vector(k)).collect());
    SparseVec::unit(m.index_of(&label).expect("sorted wedge label"))
}

/// Checks the three-term identity for every admissible parameter tuple
/// whose cells are all valid, returning the number of tuples checked.
fn case_three(n: usize) -> Result<usize, String> {
    let v = vector_rep(n).map_err(|e| e.to_string())?;
    let mut count = 0;
    for l in 2..=n {
        let m = exterior_power(&v, l).map_err(|e| e.to_string())?;
        let v0 = wedge(&m, &(1..=l as i64).collect::<Vec<_>>());
        for i1 in 1..=l {
            for i2 in i1 + 1..=l {
                for j1 in 1..=n {
                    for j2 in 2 * n + 1 - l..=2 * n {
                        if i2 + j2 > 2 * n {
                            continue;
                        }
                        let lhs_word = [c(i1, j1), c(i2, j2)];
                        let t1 = [c(i1, bar(n, i2)), c(bar(n, j2), j1)];
                        let t2 = [c(i1, j2), c(i2, j1)];
                        let t3 = [c(bar(n, j2), j1), c(i1, bar(n, i1)), c(i2, bar(n, i2))];
                        let all = lhs_word.iter().chain(&t1).chain(&t2).chain(&t3);
                        if !all.clone().all(|x| x.is_valid(n)) {
                            continue;
                        }
                        let ap = |f: &[Cell]| {
                            apply_word(&m, &Word::new(n, f.to_vec()).unwrap(), &v0).unwrap()
                        };
                        let rhs = ap(&t1).minus(&ap(&t2)).minus(&ap(&t3));
                        ensure(ap(&lhs_word) == rhs, || {
                            format!("n={n} l={l} (i1,j1)=({i1},{j1}) (i2,j2)=({i2},{j2})")
                        })?;
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

fn criterion_3() -> Outcome {
    let mut modules_checked = 0;
    let mut cube_checks = 0;
    for n in [2usize, 3] {
        let sc = structure_constants(n).map_err(|e| e.to_string())?;
        for i in 1..=n {
            for j in i + 1..=n {
                let expect = SparseVec::from_terms([(c(i, bar(n, j)), int(2))]);
                ensure(
                    sc.bracket(c(i, bar(n, i)), c(j, bar(n, j))) == &expect,
                    || format!("n={n}: short bracket ({i},{j}) in the table"),
                )?;
            }
        }
        let v = vector_rep(n).map_err(|e| e.to_string())?;
        let mut modules = vec![v.clone()];
        for l in 2..=n {
            modules.push(exterior_power(&v, l).map_err(|e| e.to_string())?);
        }
        modules.push(spin_rep_with(&sc).map_err(|e| e.to_string())?);
        let two_omega_n = irreducible_module(&{
            let mut a = vec![0; n];
            a[n - 1] = 2;
            wt(n, &a)
        })
        .map_err(|e| e.to_string())?;
        for m in &modules {
            check_module(m, &sc).map_err(|e| e.to_string())?;
            for i in 1..=n {
                for j in i + 1..=n {
                    let lhs = m
                        .lowering(c(i, bar(n, i)))
                        .commutator(m.lowering(c(j, bar(n, j))));
                    ensure(lhs == m.lowering(c(i, bar(n, j))).scaled(&int(2)), || {
                        format!("n={n}: [f_(i,ī), f_(j,j̄)] != 2 f_(i,j̄) for i={i} j={j} in a dim-{} module", m.dim())
                    })?;
                }
            }
            modules_checked += 1;
        }
        let mut cube_targets: Vec<&RepModule> = (1..=n)
            .map(|k| {
                if k == n {
                    modules.last().unwrap()
                } else {
                    &modules[k - 1]
                }
            })
            .collect();
        cube_targets.push(&modules[n - 1]);
        cube_targets.push(&two_omega_n.ambient);
        for m in cube_targets {
            for i in 1..=n {
                let cube = power(m.lowering(c(i, bar(n, i))), 3);
                ensure(cube.is_zero(), || {
                    format!("n={n}: f_(i,ī)^3 != 0 for i={i} in dim {}", m.dim())
                })?;
                cube_checks += 1;
            }
        }
        for v in &two_omega_n.basis {
            for i in 1..=n {
                let img = apply_word(
                    &two_omega_n.ambient,
                    &Word::new(n, vec![c(i, bar(n, i)); 3]).unwrap(),
                    v,
                )
                .map_err(|e| e.to_string())?;
                ensure(img.is_zero(), || format!("n={n}: cube nonzero on L(2ω_n)"))?;
            }
        }
    }
    // the admissible set is empty for n ≤ 3, so larger ranks are included
    let mut case_counts = Vec::new();
    let mut total = 0;
    for n in 2..=5 {
        let k = case_three(n)?;
        total += k;
        case_counts.push(format!("n={n}:{k}"));
    }
    ensure(total > 0, || {
        "no admissible parameters for the three-term identity".into()
    })?;
    Ok(format!(
        "{modules_checked} modules validated, {cube_checks} cube checks, three-term identity tuples {}",
        case_counts.join(" ")
    ))
}

fn criterion_4() -> Outcome {
    let v = vector_rep(2).map_err(|e| e.to_string())?;
    let m = exterior_power(&v, 2).map_err(|e| e.to_string())?;
    let v0 = wedge(&m, &[1, 2]);
    let bad = Word::parse(2, "2,3 1,4 2,3").unwrap();
    let good = Word::parse(2, "1,4 2,3 2,3").unwrap();
    ensure(apply_word(&m, &bad, &v0).unwrap().is_zero(), || {
        "non-arranged word does not vanish".into()
    })?;
    let img = apply_word(&m, &good, &v0).unwrap();
    ensure(!img.is_zero(), || "ordered word vanishes".into())?;
    let irr = irreducible_module(&wt(2, &[0, 2])).map_err(|e| e.to_string())?;
    ensure(
        irr.apply(&bad).unwrap().is_zero() && !irr.apply(&good).unwrap().is_zero(),
        || "irreducible realisation disagrees".into(),
    )?;
    Ok(format!("ordered word gives {} term(s)", img.len()))
}

fn criterion_5() -> Outcome {
    let cases: [(usize, &[i64], u64); 10] = [
        (2, &[1, 0], 5),
        (2, &[0, 1], 4),
        (2, &[0, 2], 10),
        (2, &[2, 0], 14),
        (2, &[1, 1], 16),
        (2, &[2, 2], 81),
        (3, &[1, 0, 0], 7),
        (3, &[0, 1, 0], 21),
        (3, &[0, 0, 1], 8),
        (3, &[0, 0, 2], 35),
    ];
    for (n, a, dim) in cases {
        let w = wt(n, a);
        ensure(weyl_dim(&w) == BigUint::from(dim), || {
            format!("{w}: weyl_dim {} != {dim}", weyl_dim(&w))
        })?;
        let s = Setting::new(&w).map_err(|e| e.to_string())?;
        let cert = verify_basis_in(&s, &BasisPolicy::Ordered).map_err(|e| e.to_string())?;
        ensure(cert.passed && cert.witness["rank"] == dim, || {
            format!("{w}: {}", cert.witness["dependent"])
        })?;
    }
    let mut random = 0;
    for a in [[0, 2], [1, 1]] {
        let s = Setting::new(&wt(2, &a)).map_err(|e| e.to_string())?;
        for seed in 0..20 {
            let cert = verify_basis_in(&s, &BasisPolicy::RandomArranged(seed))
                .map_err(|e| e.to_string())?;
            ensure(cert.passed, || {
                format!("a={a:?} seed {seed}: {}", cert.witness["dependent"])
            })?;
            random += 1;
        }
    }
    Ok(format!("{} ordered, {random} random-arranged", cases.len()))
}

fn criterion_6() -> Outcome {
    let w = wt(2, &[0, 2]);
    let s = Setting::new(&w).map_err(|e| e.to_string())?;
    let st = Straightener::new(&s).map_err(|e| e.to_string())?;
    let mut swept = 0;
    for t in weight_filtered_triangles(&w, &s.module.weight_set()) {
        if in_pi(&t, &w) {
            continue;
        }
        let m = OrderedMonomial::new(t.clone());
        let r = st.straighten(&m).map_err(|e| e.to_string())?;
        let strictly_smaller = r
            .coefficients
            .labels()
            .all(|k| prec(&OrderedMonomial::new(k.clone()), &m).is_lt());
        ensure(r.certificate.passed && strictly_smaller, || {
            format!("{t:?} straightens to non-smaller terms")
        })?;
        swept += 1;
    }
    let m = OrderedMonomial::new(Triangle::from_cells(2, &[((1, 3), 1), ((1, 4), 1)]).unwrap());
    let r = st.straighten(&m).map_err(|e| e.to_string())?;
    let expect = SparseVec::from_terms([(
        Triangle::from_cells(2, &[((1, 4), 2), ((2, 3), 1)]).unwrap(),
        rat(1, 2),
    )]);
    ensure(r.coefficients == expect, || {
        format!("f13 f14 straightens to {:?}", r.coefficients)
    })?;
    ensure(swept > 0, || "sweep was empty".into())?;
    Ok(format!(
        "{swept} monomials straightened; f13 f14 = 1/2 exp(t14=2,t23=1)"
    ))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    let mut fallbacks = 0;
    for w in counting_weights().into_iter().filter(minkowski_eligible) {
        let (_, eps) = minkowski_epsilon(&w).map_err(|e| e.to_string())?;
        let lp = w.checked_sub(&eps).ok_or("ε not below λ")?;
        for t in enumerate_pi(&w) {
            let r = minkowski_decompose(&w, &t).map_err(|e| format!("{w} {t:?}: {e}"))?;
            ensure(
                r.u.plus(&r.t_prime) == t && in_pi(&r.u, &eps) && in_pi(&r.t_prime, &lp),
                || format!("{w} {t:?}: invalid split"),
            )?;
            checked += 1;
            fallbacks += r.used_fallback as usize;
        }
    }
    let w = wt(2, &[1, 1]);
    let t = Triangle::from_cells(2, &[((1, 4), 3)]).unwrap();
    let r = minkowski_decompose(&w, &t).map_err(|e| e.to_string())?;
    ensure(r.used_fallback && r.construction_failure.is_some(), || {
        "indicator construction unexpectedly accepted".into()
    })?;
    ensure(
        r.u == Triangle::from_cells(2, &[((1, 4), 2)]).unwrap(),
        || format!("fallback chose {:?}", r.u),
    )?;
    Ok(format!(
        "{checked} lattice points split, {fallbacks} via fallback; logged: {}",
        r.construction_failure.unwrap()
    ))
}

fn criterion_8() -> Outcome {
    let mut out = Vec::new();
    for a in [[1, 0], [0, 1], [0, 2], [1, 1]] {
        let w = wt(2, &a);
        let s = Setting::new(&w).map_err(|e| e.to_string())?;
        let g = graded_dims_in(&s).map_err(|e| e.to_string())?;
        ensure(g.certificate.passed, || {
            format!("{w}: {}", g.certificate.witness["mismatch"])
        })?;
        let total: usize = g.counts.values().sum();
        ensure(total == s.pi.len(), || {
            format!("{w}: graded counts sum to {total}")
        })?;
        let d = degeneration_basis_check_in(&s).map_err(|e| e.to_string())?;
        ensure(d.passed, || format!("{w}: {}", d.witness["failure"]))?;
        out.push(format!("{a:?}:{} grades", g.counts.len()));
    }
    Ok(out.join(" "))
}

fn word_matrix(m: &RepModule, w: &Word) -> SparseMatrix {
    let mut acc = SparseMatrix::identity(m.dim());
    for &c in &w.factors {
        acc = acc.compose(m.lowering(c));
    }
    acc
}

fn random_word(n: usize, max_len: usize, rng: &mut ChaCha8Rng) -> Word {
    let cs = cells(n).unwrap();
    let len = rng.gen_range(0..=max_len);
    Word::new(
        n,
        (0..len).map(|_| cs[rng.gen_range(0..cs.len())]).collect(),
    )
    .unwrap()
}

fn criterion_9() -> Outcome {
    let n = 3;
    let sc = structure_constants(n).map_err(|e| e.to_string())?;
    let norm = Normalizer::new(sc.clone());
    let v = vector_rep(n).map_err(|e| e.to_string())?;
    let modules = [
        v.clone(),
        exterior_power(&v, 2).map_err(|e| e.to_string())?,
        spin_rep_with(&sc).map_err(|e| e.to_string())?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 0..50 {
        let w = random_word(n, 5, &mut rng);
        let lin = norm.normalize(&w).map_err(|e| e.to_string())?;
        for m in &modules {
            let mut rebuilt = SparseMatrix::zero(m.dim());
            for (t, coef) in lin.iter() {
                rebuilt.add_scaled(
                    &word_matrix(m, &OrderedMonomial::new(t.clone()).word()),
                    coef,
                );
            }
            ensure(rebuilt == word_matrix(m, &w), || {
                format!("word #{k} {w} in dim {}", m.dim())
            })?;
        }
        ensure(
            lin.labels()
                .all(|t| grad_doubled(t) <= grad_doubled(&w.log())),
            || format!("{w} raised grad"),
        )?;
    }
    let mut nontrivial = 0;
    for k in 0..50 {
        let t = random_word(n, 5, &mut rng).log();
        let a = random_arranged_word(&t, &mut rng);
        let b = random_arranged_word(&t, &mut rng);
        ensure(is_arranged(&a) && is_arranged(&b), || {
            "generator produced a non-arranged word".into()
        })?;
        let diff = norm
            .normalize(&a)
            .unwrap()
            .minus(&norm.normalize(&b).unwrap());
        let top = grad_doubled(&t);
        ensure(diff.labels().all(|k| grad_doubled(k) < top), || {
            format!("pair #{k}: {a} vs {b}")
        })?;
        nontrivial += (!diff.is_zero()) as usize;
    }
    Ok(format!(
        "50 words × 3 modules; 50 arranged pairs ({nontrivial} with nonzero difference)"
    ))
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_bfflv");
    let invocations: &[&[&str]] = &[
        &["dim", "--n", "2", "--weight", "0,2"],
        &[
            "enumerate",
            "pi",
            "--n",
            "2",
            "--weight",
            "1,1",
            "--format",
            "jsonl",
        ],
        &["enumerate", "gt", "--n", "3", "--weight", "0,1,0"],
        &["normalize", "--n", "2", "--word", "2,3 1,4 1,2"],
        &[
            "apply",
            "--n",
            "2",
            "--weight",
            "0,2",
            "--word",
            "1,4 2,3 2,3",
        ],
        &[
            "verify-basis",
            "--n",
            "2",
            "--weight",
            "1,1",
            "--policy",
            "random-arranged",
            "--seed",
            "5",
        ],
        &["graded-dims", "--n", "2", "--weight", "0,1"],
        &[
            "conjecture-scan",
            "--n",
            "2",
            "--weight",
            "0,2",
            "--seed",
            "3",
            "--samples",
            "2",
        ],
    ];
    for args in invocations {
        let run = || Command::new(bin).args(*args).output().expect("binary runs");
        let (a, b) = (run(), run());
        ensure(a.status.success(), || {
            format!("{args:?} exited with {:?}", a.status.code())
        })?;
        ensure(
            a.stdout == b.stdout && a.status.code() == b.status.code(),
            || format!("{args:?} differs between runs"),
        )?;
    }
    Ok(format!("{} invocations repeated", invocations.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 counting |Π| = |Γ| = dim", criterion_1),
        ("2 bijection round trips", criterion_2),
        ("3 representation soundness", criterion_3),
        ("4 non-arranged word vanishes", criterion_4),
        ("5 arranged monomial bases", criterion_5),
        ("6 straightening", criterion_6),
        ("7 Minkowski decomposition", criterion_7),
        ("8 graded dimensions", criterion_8),
        ("9 rewriting soundness", criterion_9),
        ("10 deterministic CLI output", criterion_10),
    ];
    let mut failed = BTreeSet::new();
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({detail}) [{:.2?}]", start.elapsed()),
            Err(why) => {
                println!("FAIL criterion {name}: {why} [{:.2?}]", start.elapsed());
                failed.insert(name);
            }
        }
    }
    if !failed.is_empty() {
        println!("{} criteria failed", failed.len());
        std::process::exit(1);
    }
    println!("all criteria passed");
}
