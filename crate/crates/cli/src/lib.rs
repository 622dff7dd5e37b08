//! The `jacobian` command line: every verb reads JSON, writes exactly one JSON
//! document to stdout and reports through its exit status.
//!
//! Exit statuses: 0 success or property true, 1 property false, 2 input
//! error, 3 resource limit.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jacobian_core::generators::{random_system, random_tame};
use jacobian_core::inversion::{
    degree_bound, formal_inverse_with, is_j_param_with, polynomial_inverse_with, Control, InverseKind, InverseReport,
    PartialSplit, RestrictedOutcome,
};
use jacobian_core::json::{
    is_record, parse_value, poly_to_json, polys_to_json, random_entry, record_from_json, record_to_json,
    system_from_json, system_to_json, tame_entry, to_canonical_string,
};
use jacobian_core::reduction::{
    eliminate_sigma, eliminate_sigma_from, phi, phi_preimage, reduce_to_quadratic_with, verify_theorem_with, Mismatch,
    ReductionRecord,
};
use jacobian_core::ring::format_rational;
use jacobian_core::wick::{
    odd_double_factorial, one_point_identity, one_point_series_with, phi6_identity, real_gaussian_moment,
    z_det_identity, z_series_with,
};
use jacobian_core::{Error, Limits, PolySystem, Rational};

pub mod suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "jacobian",
    version,
    about = "Exact workbench for polynomial systems with identity linear part"
)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Io {
    /// A file path, `-` for stdin, or inline JSON. Defaults to stdin.
    pub input: Option<String>,
    /// Refuse reductions whose dimension exceeds this many variables.
    #[arg(long)]
    pub limit_vars: Option<usize>,
    /// Refuse Wick expansions needing more Gaussian moments than this.
    #[arg(long)]
    pub limit_moments: Option<u64>,
}

impl Io {
    fn limits(&self) -> Limits {
        let mut limits = Limits::default();
        if let Some(v) = self.limit_vars {
            limits.max_vars = v;
        }
        if let Some(m) = self.limit_moments {
            limits.max_moments = m;
        }
        limits
    }
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Polynomial inverse, formal inverse (`--order`) or restricted inverse
    /// (`--split`, or a reduction record as input).
    Invert {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        cutoff: Option<u32>,
        #[arg(long)]
        split: Option<usize>,
    },
    /// Jacobian matrix, entry `[i][j] = dF_j/dz_i`.
    Jacobian {
        #[command(flatten)]
        io: Io,
    },
    /// Jacobian determinant; exit 1 when it is not constant.
    Det {
        #[command(flatten)]
        io: Io,
    },
    /// One intermediate-field reduction, or the full chain with `--quadratic`.
    Reduce {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        quadratic: bool,
    },
    /// Recovers the original system from a record (or a reduced system with `--split n`).
    Eliminate {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        split: Option<usize>,
    },
    /// Reconstructs the preimage of a reduced system; exit 1 if there is none.
    Preimage {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        split: Option<usize>,
    },
    /// Compares a system with its reduction; exit 1 on any disagreement.
    Verify {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 10)]
        cutoff: u32,
    },
    /// Partition function `Z(0, u)` by Wick contraction.
    WickZ {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
    /// One-point function of a field component by Wick contraction.
    WickG {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
    /// Checks one of the finite-order identities; exit 1 on mismatch.
    IdentityCheck {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum)]
        identity: IdentityName,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Writes a seeded corpus manifest.
    Gen {
        #[arg(long, value_enum, default_value_t = GenKind::Tame)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        #[arg(long, default_value_t = 4)]
        maxdeg: u32,
        #[arg(long, default_value_t = 3)]
        d: u32,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
    },
    /// Runs the acceptance battery and reports pass or fail per criterion.
    RunSuite {
        /// Restrict to these criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityName {
    Phi6,
    GaussianMoments,
    ZDet,
    OnePoint,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Tame,
    Random,
}

/// A failed command: message plus exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_resource_limit() { EXIT_LIMIT } else { EXIT_INPUT };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type Outcome = std::result::Result<(Value, i32), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.verb, stdin, stderr) {
        Ok((report, code)) => {
            if let Err(e) = stdout.write_all(to_canonical_string(&report).as_bytes()) {
                let _ = writeln!(stderr, "error: writing output: {e}");
                return EXIT_INPUT;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read_input(io: &Io, stdin: &mut dyn Read) -> std::result::Result<Value, Failure> {
    let text = match io.input.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            stdin
                .read_to_string(&mut buf)
                .map_err(|e| input_error(format!("reading stdin: {e}")))?;
            buf
        }
        Some(s) if s.trim_start().starts_with(['{', '[']) => s.to_string(),
        Some(path) => std::fs::read_to_string(path).map_err(|e| input_error(format!("reading {path}: {e}")))?,
    };
    Ok(parse_value(&text)?)
}

enum Subject {
    System(PolySystem),
    Record(ReductionRecord),
}

impl Subject {
    /// The system a verb operates on: a record stands for its reduced system.
    fn system(&self) -> &PolySystem {
        match self {
            Subject::System(f) => f,
            Subject::Record(r) => r.reduced(),
        }
    }
}

fn read_subject(io: &Io, stdin: &mut dyn Read) -> std::result::Result<Subject, Failure> {
    let v = read_input(io, stdin)?;
    if is_record(&v) {
        Ok(Subject::Record(record_from_json(&v)?))
    } else {
        Ok(Subject::System(system_from_json(&v)?))
    }
}

fn read_system(io: &Io, stdin: &mut dyn Read) -> std::result::Result<PolySystem, Failure> {
    Ok(read_subject(io, stdin)?.system().clone())
}

fn status(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn execute(verb: Verb, stdin: &mut dyn Read, stderr: &mut dyn Write) -> Outcome {
    match verb {
        Verb::Invert {
            io,
            order,
            cutoff,
            split,
        } => invert(&io, order, cutoff, split, stdin),
        Verb::Jacobian { io } => {
            let f = read_system(&io, stdin)?;
            let m = f.jacobian_matrix();
            let rows: Vec<Value> = m.rows().iter().map(|r| polys_to_json(r)).collect();
            Ok((json!({"format": 1, "n": f.n(), "matrix": rows}), EXIT_OK))
        }
        Verb::Det { io } => {
            let f = read_system(&io, stdin)?;
            let det = f.jacobian_det();
            let constant = f.is_jlin();
            let report = json!({
                "format": 1,
                "det": det.display_with("z"),
                "constant": constant,
                "terms": poly_to_json(&det),
            });
            Ok((report, status(constant)))
        }
        Verb::Reduce { io, quadratic } => {
            let limits = io.limits();
            let f = read_system(&io, stdin)?;
            if quadratic {
                let chain = reduce_to_quadratic_with(&f, &limits)?;
                let dims: Vec<usize> = chain.iter().map(|r| r.reduced().n()).collect();
                let records: Vec<Value> = chain.iter().map(record_to_json).collect();
                Ok((json!({"format": 1, "dims": dims, "chain": records}), EXIT_OK))
            } else {
                let next = f.n() * (f.n() + 1);
                if next > limits.max_vars {
                    return Err(Error::ResourceLimit {
                        what: "reduced dimension",
                        found: next as u128,
                        limit: limits.max_vars as u128,
                    }
                    .into());
                }
                Ok((record_to_json(&phi(&f)?), EXIT_OK))
            }
        }
        Verb::Eliminate { io, split } => {
            let f = match (read_subject(&io, stdin)?, split) {
                (Subject::Record(rec), _) => eliminate_sigma(&rec)?,
                (Subject::System(reduced), Some(n)) => eliminate_sigma_from(&reduced, n, reduced.d() + 1)?,
                (Subject::System(_), None) => {
                    return Err(input_error("eliminate needs a reduction record or --split n"));
                }
            };
            Ok((system_to_json(&f), EXIT_OK))
        }
        Verb::Preimage { io, split } => {
            let (reduced, n) = match (read_subject(&io, stdin)?, split) {
                (Subject::Record(rec), _) => (rec.reduced().clone(), rec.n()),
                (Subject::System(reduced), Some(n)) => (reduced, n),
                (Subject::System(_), None) => {
                    return Err(input_error("preimage needs a reduction record or --split n"));
                }
            };
            match phi_preimage(&reduced, n) {
                Some(f) => Ok((json!({"format": 1, "preimage": system_to_json(&f)}), EXIT_OK)),
                None => Ok((json!({"format": 1, "preimage": Value::Null}), EXIT_FALSE)),
            }
        }
        Verb::Verify { io, cutoff } => {
            let limits = io.limits();
            let f = match read_subject(&io, stdin)? {
                Subject::System(f) => f,
                Subject::Record(rec) => rec.original().clone(),
            };
            let report = verify_theorem_with(&f, cutoff, Control::new(&limits))?;
            let mismatch = |m: &Option<Mismatch>| match m {
                None => Value::Null,
                Some(m) => json!({
                    "component": m.component,
                    "expected": poly_to_json(&m.expected),
                    "found": poly_to_json(&m.found),
                }),
            };
            let out = json!({
                "format": 1,
                "n": report.n,
                "d": report.d,
                "cutoff": report.cutoff,
                "all_agree": report.all_agree(),
                "checks": {
                    "determinant": {
                        "agree": report.jlin_agrees(),
                        "is_jlin": report.jlin,
                        "is_jlin_param": report.jlin_param,
                        "det": report.det.display_with("z"),
                        "restricted_det": report.restricted_det.as_ref().map(|p| p.display_with("z")),
                    },
                    "inverse": {
                        "agree": report.inverse_agrees(),
                        "kind": kind_label(report.inverse_kind),
                        "restricted": report.restricted_outcome.label(),
                        "restricted_cutoff": report.restricted_cutoff,
                    },
                    "transport": {
                        "agree": report.transport_agrees(),
                        "mismatch": mismatch(&report.transport_mismatch),
                    },
                    "sigma": {
                        "agree": report.sigma_agrees(),
                        "mismatch": mismatch(&report.sigma_mismatch),
                    },
                },
            });
            Ok((out, status(report.all_agree())))
        }
        Verb::WickZ { io, order } => {
            let limits = io.limits();
            let f = read_system(&io, stdin)?;
            let z = z_series_with(&f, f.n(), order, &limits)?;
            Ok((
                json!({"format": 1, "order": order, "series": poly_to_json(&z.series)}),
                EXIT_OK,
            ))
        }
        Verb::WickG { io, index, order } => {
            let limits = io.limits();
            let f = read_system(&io, stdin)?;
            if index == 0 || index > f.n() {
                return Err(Error::IndexOutOfRange { index, nvars: f.n() }.into());
            }
            let g = one_point_series_with(&f, index, f.n(), order, &limits)?;
            let out = json!({"format": 1, "index": index, "order": order, "series": poly_to_json(&g.series)});
            Ok((out, EXIT_OK))
        }
        Verb::IdentityCheck { io, identity, order } => identity_check(&io, identity, order, stdin),
        Verb::Gen {
            kind,
            seed,
            count,
            n,
            steps,
            maxdeg,
            d,
            density,
        } => {
            let mut entries = Vec::with_capacity(count as usize);
            for k in 0..count {
                let entry_seed = seed.wrapping_add(k);
                match kind {
                    GenKind::Tame => {
                        let tame = random_tame(n, steps, maxdeg, entry_seed)?;
                        entries.push(tame_entry(entry_seed, n, steps, maxdeg, &tame));
                    }
                    GenKind::Random => {
                        let f = random_system(n, d, density, entry_seed)?;
                        entries.push(random_entry(entry_seed, n, d, density, &f));
                    }
                }
            }
            Ok((Value::Array(entries), EXIT_OK))
        }
        Verb::RunSuite { only, seed } => {
            if let Some(bad) = only.iter().find(|id| !suite::ALL.contains(id)) {
                return Err(input_error(format!("no criterion {bad}; expected 1 to 8")));
            }
            let results = suite::run_selected(&only, seed);
            for r in &results {
                let _ = writeln!(stderr, "{}", r.line());
            }
            let pass = results.iter().all(|r| r.pass);
            let criteria: Vec<Value> = results.iter().map(suite::CriterionResult::to_json).collect();
            Ok((json!({"format": 1, "pass": pass, "criteria": criteria}), status(pass)))
        }
    }
}

fn kind_label(k: InverseKind) -> &'static str {
    match k {
        InverseKind::Polynomial => "polynomial",
        InverseKind::FormalOnly => "formal-only",
    }
}

fn invert(io: &Io, order: Option<u32>, cutoff: Option<u32>, split: Option<usize>, stdin: &mut dyn Read) -> Outcome {
    let limits = io.limits();
    let ctl = Control::new(&limits);
    let subject = read_subject(io, stdin)?;
    let restricted = match (&subject, split) {
        (_, Some(nprime)) => Some((subject.system(), nprime, None)),
        (Subject::Record(rec), None) => Some((rec.reduced(), rec.n(), Some(rec.original()))),
        (Subject::System(_), None) => None,
    };
    if let Some((f, nprime, original)) = restricted {
        let cutoff = match (cutoff, original) {
            (Some(c), _) => c,
            (None, Some(orig)) => (orig.d() - 1).saturating_mul(degree_bound(orig, &limits)?),
            (None, None) => degree_bound(f, &limits)?,
        };
        let outcome = is_j_param_with(f, PartialSplit::new(nprime), cutoff, ctl)?;
        let inverse = match &outcome {
            RestrictedOutcome::True(p) => polys_to_json(p),
            _ => Value::Null,
        };
        let out = json!({
            "format": 1,
            "kind": "restricted",
            "split": nprime,
            "cutoff": cutoff,
            "outcome": outcome.label(),
            "inverse": inverse,
        });
        return Ok((out, status(outcome.is_true())));
    }
    let f = subject.system();
    if let Some(order) = order {
        let g = formal_inverse_with(f, order, ctl)?;
        let out = json!({"format": 1, "kind": "formal", "order": order, "series": polys_to_json(g.components())});
        return Ok((out, EXIT_OK));
    }
    match polynomial_inverse_with(f, cutoff, ctl)? {
        InverseReport::Polynomial(g) => {
            let out = json!({
                "format": 1,
                "kind": "polynomial",
                "verified": true,
                "inverse": polys_to_json(&g),
                "system": system_to_json(&PolySystem::from_polys(&g)?),
            });
            Ok((out, EXIT_OK))
        }
        InverseReport::FormalOnly { series, cutoff } => {
            let out = json!({
                "format": 1,
                "kind": "formal-only",
                "verified": false,
                "cutoff": cutoff,
                "series": polys_to_json(series.components()),
            });
            Ok((out, EXIT_FALSE))
        }
    }
}

fn rationals_to_json(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(|r| Value::String(format_rational(r))).collect())
}

fn identity_check(io: &Io, identity: IdentityName, order: Option<u32>, stdin: &mut dyn Read) -> Outcome {
    let limits = io.limits();
    let (name, order, matched, lhs, rhs) = match identity {
        IdentityName::Phi6 => {
            let order = order.unwrap_or(3);
            let id = phi6_identity(order);
            (
                "phi6",
                order,
                id.matched(),
                rationals_to_json(&id.lhs),
                rationals_to_json(&id.rhs),
            )
        }
        IdentityName::GaussianMoments => {
            let order = order.unwrap_or(8);
            let lhs: Vec<Rational> = (0..=order).map(real_gaussian_moment).collect();
            let rhs: Vec<Rational> = (0..=order)
                .map(|k| Rational::from_integer(odd_double_factorial(k)))
                .collect();
            let matched = lhs == rhs;
            (
                "gaussian-moments",
                order,
                matched,
                rationals_to_json(&lhs),
                rationals_to_json(&rhs),
            )
        }
        IdentityName::ZDet | IdentityName::OnePoint => {
            let order = order.unwrap_or(4);
            let f = read_system(io, stdin)?;
            let (name, id) = if identity == IdentityName::ZDet {
                ("z-det", z_det_identity(&f, order, &limits)?)
            } else {
                ("one-point", one_point_identity(&f, order, &limits)?)
            };
            (
                name,
                order,
                id.matched(),
                polys_to_json(&id.lhs),
                polys_to_json(&id.rhs),
            )
        }
    };
    let out = json!({"format": 1, "identity": name, "order": order, "match": matched, "lhs": lhs, "rhs": rhs});
    Ok((out, status(matched)))
}
