//! Command-line front end. Results go to standard output as JSON,
//! diagnostics to standard error.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on invalid input.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::gtbij::{enumerate_gt, f_map, g_map, GTPattern};
use crate::patterns::{enumerate_pi, in_pi, polytope_h_rep, Triangle};
use crate::pbw::{lincomb_to_json, Normalizer, OrderedMonomial, Word};
use crate::repbuild::{apply_word, irreducible_module};
use crate::rootsys::{cells, root_of_cell, weight_from_fundamental, weyl_dim, DominantWeight};
use crate::verify::{
    conjecture_scan, degeneration_basis_check, graded_dims, minkowski_decompose, verify_basis,
    BasisPolicy, Setting, Straightener,
};

#[derive(Debug, Parser)]
#[command(
    name = "bfflv",
    about = "Monomial bases and lattice polytopes for so(2n+1) modules"
)]
struct Cli {
    /// Rank of so(2n+1).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Highest weight in fundamental coordinates, e.g. `0,2`.
    #[arg(long, global = true)]
    weight: Option<String>,
    /// Word in root vectors, e.g. `"2,3 1,4 2,3"`; the rightmost factor acts first.
    #[arg(long, global = true, allow_hyphen_values = true)]
    word: Option<String>,
    /// Triangle as inline JSON or `@file.json`.
    #[arg(long, global = true)]
    triangle: Option<String>,
    /// Gelfand-Tsetlin pattern as inline JSON or `@file.json`.
    #[arg(long, global = true)]
    pattern: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = PolicyArg::Ordered)]
    policy: PolicyArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Ordered,
    RandomArranged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Jsonl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EnumKind {
    Pi,
    Gt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MapKind {
    F,
    G,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the cells `(i,j)` with their roots.
    Cells,
    /// Dimension of the irreducible module.
    Dim,
    /// List the lattice points of the polytope or the Gelfand-Tsetlin patterns.
    Enumerate { kind: EnumKind },
    /// Map a pattern to a triangle (`f`) or a triangle to a pattern (`g`).
    Map { kind: MapKind },
    /// Test whether a triangle lies in the polytope.
    Membership,
    /// Inequality description of the polytope.
    Polytope,
    /// Rewrite a word as a combination of ordered monomials.
    Normalize,
    /// Apply a word to the highest weight vector.
    Apply,
    /// Check that the chosen monomials give a basis.
    VerifyBasis,
    /// Expand an ordered monomial (given by its exponent triangle) in the ordered basis.
    Straighten,
    /// Split a lattice point into points of smaller polytopes.
    Minkowski,
    /// Compare graded lattice point counts with the PBW filtration.
    GradedDims,
    /// Check the basis of the associated graded module grade by grade.
    DegenCheck,
    /// Exploratory scan of non-arranged pattern-avoiding words.
    ConjectureScan {
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

/// Outcome of a subcommand before it is written out.
enum Output {
    Single(Value),
    Text(String),
    Lines(Vec<Value>),
    /// A certificate; a failing verdict sets exit status 1.
    Verdict(Value, bool),
}

fn input_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl Cli {
    fn rank(&self) -> Result<usize, Error> {
        match self.n {
            Some(0) => Err(Error::ZeroRank),
            Some(n) => Ok(n),
            None => Err(input_error("--n is required")),
        }
    }

    fn dominant(&self) -> Result<DominantWeight, Error> {
        let n = self.rank()?;
        let raw = self
            .weight
            .as_deref()
            .ok_or_else(|| input_error("--weight is required"))?;
        let a = raw
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| input_error(format!("bad weight {raw:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if a.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: a.len(),
            });
        }
        weight_from_fundamental(n, &a)
    }

    fn word(&self) -> Result<Word, Error> {
        let raw = self
            .word
            .as_deref()
            .ok_or_else(|| input_error("--word is required"))?;
        Word::parse(self.rank()?, raw)
    }

    fn payload(raw: Option<&str>, flag: &str) -> Result<String, Error> {
        let raw = raw.ok_or_else(|| input_error(format!("--{flag} is required")))?;
        match raw.strip_prefix('@') {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| input_error(format!("cannot read {path}: {e}"))),
            None => Ok(raw.to_string()),
        }
    }

    fn triangle(&self) -> Result<Triangle, Error> {
        let t = Triangle::from_json(&Self::payload(self.triangle.as_deref(), "triangle")?)?;
        if t.n != self.rank()? {
            return Err(Error::RankMismatch {
                expected: self.rank()?,
                got: t.n,
            });
        }
        Ok(t)
    }

    fn pattern(&self) -> Result<GTPattern, Error> {
        let p = GTPattern::from_json(&Self::payload(self.pattern.as_deref(), "pattern")?)?;
        if p.n != self.rank()? {
            return Err(Error::RankMismatch {
                expected: self.rank()?,
                got: p.n,
            });
        }
        Ok(p)
    }

    fn policy(&self) -> BasisPolicy {
        match self.policy {
            PolicyArg::Ordered => BasisPolicy::Ordered,
            PolicyArg::RandomArranged => BasisPolicy::RandomArranged(self.seed),
        }
    }

    fn list(&self, items: Vec<Value>) -> Output {
        match self.format {
            Format::Json => Output::Single(Value::Array(items)),
            Format::Jsonl => Output::Lines(items),
        }
    }

    fn execute(&self, err: &mut dyn Write) -> Result<Output, Error> {
        Ok(match &self.command {
            Command::Cells => {
                let n = self.rank()?;
                let items = cells(n)?
                    .into_iter()
                    .map(|c| {
                        let root = root_of_cell(n, c).expect("enumerated cells are valid");
                        json!({
                            "i": c.i,
                            "j": c.j,
                            "short": c.is_short(n),
                            "root": root.coords.iter().map(crate::kernel::format_rational).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                self.list(items)
            }
            // printed as a bare JSON integer of arbitrary size
            Command::Dim => Output::Text(format!("{}\n", weyl_dim(&self.dominant()?))),
            Command::Enumerate { kind } => {
                let w = self.dominant()?;
                let items = match kind {
                    EnumKind::Pi => enumerate_pi(&w).iter().map(Triangle::to_json).collect(),
                    EnumKind::Gt => enumerate_gt(&w).iter().map(GTPattern::to_json).collect(),
                };
                self.list(items)
            }
            Command::Map { kind } => {
                let w = self.dominant()?;
                match kind {
                    MapKind::F => Output::Single(f_map(&self.pattern()?, &w)?.to_json()),
                    MapKind::G => Output::Single(g_map(&self.triangle()?, &w)?.to_json()),
                }
            }
            Command::Membership => {
                let w = self.dominant()?;
                Output::Single(json!({ "member": in_pi(&self.triangle()?, &w) }))
            }
            Command::Polytope => Output::Single(polytope_h_rep(&self.dominant()?).to_json()),
            Command::Normalize => {
                let word = self.word()?;
                Output::Single(lincomb_to_json(
                    &Normalizer::for_rank(word.n)?.normalize(&word)?,
                ))
            }
            Command::Apply => {
                let w = self.dominant()?;
                let word = self.word()?;
                let m = irreducible_module(&w)?;
                Output::Single(
                    m.ambient
                        .vec_to_json(&apply_word(&m.ambient, &word, &m.highest)?),
                )
            }
            Command::VerifyBasis => {
                let c = verify_basis(&self.dominant()?, &self.policy())?;
                Output::Verdict(c.to_json(), c.passed)
            }
            Command::Straighten => {
                let w = self.dominant()?;
                let m = OrderedMonomial::new(self.triangle()?);
                let s = Setting::new(&w)?;
                let r = Straightener::new(&s)?.straighten(&m)?;
                Output::Verdict(r.certificate.to_json(), r.certificate.passed)
            }
            Command::Minkowski => {
                let w = self.dominant()?;
                let t = self.triangle()?;
                let r = minkowski_decompose(&w, &t)?;
                if let Some(why) = &r.construction_failure {
                    writeln!(
                        err,
                        "indicator construction rejected, used exhaustive search: {why}"
                    )
                    .ok();
                }
                let c = r.certificate(&w, &t);
                Output::Verdict(c.to_json(), c.passed)
            }
            Command::GradedDims => {
                let c = graded_dims(&self.dominant()?)?.certificate;
                Output::Verdict(c.to_json(), c.passed)
            }
            Command::DegenCheck => {
                let c = degeneration_basis_check(&self.dominant()?)?;
                Output::Verdict(c.to_json(), c.passed)
            }
            Command::ConjectureScan { max_len, samples } => Output::Single(conjecture_scan(
                &self.dominant()?,
                *max_len,
                *samples,
                self.seed,
            )?),
        })
    }
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                write!(err, "{}", e.render()).ok();
                2
            } else {
                write!(out, "{}", e.render()).ok();
                0
            };
            return code;
        }
    };
    match cli.execute(err) {
        Ok(output) => {
            let (text, code) = match output {
                Output::Single(v) => (pretty(&v), 0),
                Output::Text(t) => (t, 0),
                Output::Lines(vs) => (vs.iter().map(|v| v.to_string() + "\n").collect(), 0),
                Output::Verdict(v, passed) => (pretty(&v), if passed { 0 } else { 1 }),
            };
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            code
        }
        Err(Error::Verification(msg)) => {
            writeln!(err, "verification failed: {msg}").ok();
            writeln!(
                out,
                "{}",
                json!({ "verdict": "fail", "witness": { "error": msg } })
            )
            .ok();
            1
        }
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            2
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}
