//! The acceptance battery behind `run-suite`. Each criterion checks its
//! computation against an independent oracle and against a wall-clock budget.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Value};

use jacobian_core::generators::{random_system_from, random_tame_from, rng_for};
use jacobian_core::inversion::{
    composes_to_identity, formal_inverse, is_jlin_param, polynomial_inverse, restricted_inverse, InverseKind,
    InverseReport, PartialSplit,
};
use jacobian_core::json::{parse_value, poly_from_json};
use jacobian_core::reduction::{eliminate_sigma, phi, phi_preimage, reduce_to_quadratic, verify_theorem};
use jacobian_core::ring::int;
use jacobian_core::system::compose_systems;
use jacobian_core::wick::{one_point_identity, phi6_intermediate_identity, real_gaussian_moment, z_det_identity};
use jacobian_core::{Limits, Poly, PolySystem};

/// `(z1 + z2^3, z2)` in the interchange format.
pub const WORKED_EXAMPLE: &str = r#"{"n":2,"d":3,"terms":[{"k":3,"i":1,"js":[2,2,2],"c":"-1"}]}"#;

/// `(z1 - z2^2, z2 - z1^2)`, whose Jacobian determinant is `1 - 4 z1 z2`.
pub const NEGATIVE_EXAMPLE: &str =
    r#"{"n":2,"d":2,"terms":[{"k":2,"i":1,"js":[2,2],"c":"1"},{"k":2,"i":2,"js":[1,1],"c":"1"}]}"#;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    /// All checks passed and the budget was met.
    pub pass: bool,
    pub checks_passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let budget = match self.budget {
            Some(b) => format!(" (budget {}s)", b.as_secs()),
            None => String::new(),
        };
        format!(
            "criterion {} {}: {}: {} in {:.2}s{}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            budget
        )
    }

    /// Timing-free summary so reports stay byte-reproducible.
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "pass": self.pass,
            "detail": self.detail,
            "within_budget": self.within_budget(),
        })
    }

    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.elapsed <= b)
    }
}

fn timed(
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    body: impl FnOnce() -> std::result::Result<String, String>,
) -> CriterionResult {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let (checks_passed, detail) = match outcome {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(_) => (false, "panicked".to_string()),
    };
    let mut r = CriterionResult {
        id,
        name,
        pass: false,
        checks_passed,
        detail,
        elapsed,
        budget,
    };
    r.pass = r.checks_passed && r.within_budget();
    r
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn worked_example() -> PolySystem {
    PolySystem::from_couplings(2, 3, [(1, vec![2, 2, 2], int(-1))]).expect("valid")
}

fn negative_example() -> PolySystem {
    PolySystem::from_couplings(2, 2, [(1, vec![2, 2], int(1)), (2, vec![1, 1], int(1))]).expect("valid")
}

/// `(u1 - u2^3, u2)`.
fn worked_inverse() -> Vec<Poly> {
    let u1 = Poly::var(2, 1);
    let u2 = Poly::var(2, 2);
    vec![&u1 - &u2.pow(3), u2]
}

/// Runs the CLI in-process: `(exit status, stdout, stderr)`.
pub fn run_cli(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("jacobian").chain(args.iter().copied());
    let code = crate::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf-8 output"),
        String::from_utf8(err).expect("utf-8 diagnostics"),
    )
}

fn parse_polys(v: &Value, nvars: usize) -> std::result::Result<Vec<Poly>, String> {
    v.as_array()
        .ok_or("expected a list of polynomials")?
        .iter()
        .map(|p| poly_from_json(p, nvars).map_err(|e| e.to_string()))
        .collect()
}

pub fn criterion_1() -> CriterionResult {
    timed(1, "worked example invert and det", Some(Duration::from_secs(1)), || {
        let (code, out, err) = run_cli(&["invert", WORKED_EXAMPLE], "");
        ensure(code == 0, || format!("invert exited {code}: {err}"))?;
        let v = parse_value(&out).map_err(|e| e.to_string())?;
        ensure(v["kind"] == "polynomial", || format!("invert kind {}", v["kind"]))?;
        let g = parse_polys(&v["inverse"], 2)?;
        ensure(g == worked_inverse(), || format!("inverse {g:?}"))?;

        let (code, out, err) = run_cli(&["det", WORKED_EXAMPLE], "");
        ensure(code == 0, || format!("det exited {code}: {err}"))?;
        let v = parse_value(&out).map_err(|e| e.to_string())?;
        ensure(v["det"] == "1" && v["constant"] == true, || format!("det report {v}"))?;
        Ok("inverse (u1 - u2^3, u2), det 1".into())
    })
}

/// Tame corpus entry `idx`: `n` in 2..=4, composite degree at most 6.
pub fn tame_case(seed: u64, idx: u64) -> jacobian_core::generators::TameSystem {
    let mut rng = rng_for(seed, idx);
    let n = 2 + (idx % 3) as usize;
    let maxdeg = 2 + ((idx / 3) % 5) as u32;
    let steps = 1 + ((idx / 15) % 4) as usize;
    random_tame_from(&mut rng, n, steps, maxdeg).expect("valid parameters")
}

pub const TAME_CORPUS: u64 = 240;

pub fn criterion_2(seed: u64) -> CriterionResult {
    timed(
        2,
        "inversion soundness on tame corpus",
        Some(Duration::from_secs(120)),
        || {
            let corpus: Vec<_> = (0..TAME_CORPUS)
                .into_par_iter()
                .map(|idx| tame_case(seed, idx))
                .collect();
            let max_n = corpus.iter().map(|t| t.system.n()).max().unwrap_or(0);
            let max_deg = corpus.iter().map(|t| t.system.effective_degree()).max().unwrap_or(0);
            let max_inv = corpus
                .iter()
                .map(|t| t.known_inverse.effective_degree())
                .max()
                .unwrap_or(0);
            ensure(max_n <= 4 && max_deg <= 6, || {
                format!("corpus outside n <= 4, degree <= 6: {max_n}, {max_deg}")
            })?;
            let failures: Vec<String> = corpus
                .par_iter()
                .enumerate()
                .filter_map(|(idx, tame)| {
                    let check = || -> std::result::Result<(), String> {
                        let report = polynomial_inverse(&tame.system).map_err(|e| e.to_string())?;
                        let InverseReport::Polynomial(g) = report else {
                            return Err("not found polynomial".into());
                        };
                        ensure(composes_to_identity(&tame.system, &g) == Ok(true), || {
                            "composition".into()
                        })?;
                        let g_sys = PolySystem::from_polys(&g).map_err(|e| e.to_string())?;
                        let both = compose_systems(&tame.system, &g_sys)
                            .map_err(|e| e.to_string())?
                            .is_identity()
                            && compose_systems(&g_sys, &tame.system)
                                .map_err(|e| e.to_string())?
                                .is_identity();
                        ensure(both, || "F(G) or G(F) is not the identity".into())?;
                        ensure(g == tame.known_inverse.to_polys(), || {
                            "differs from known inverse".into()
                        })
                    };
                    check().err().map(|e| format!("entry {idx}: {e}"))
                })
                .collect();
            ensure(failures.is_empty(), || failures.join("; "))?;
            Ok(format!(
            "{TAME_CORPUS} tame systems inverted exactly (n <= {max_n}, degree <= {max_deg}, inverse degree <= {max_inv})"
        ))
        },
    )
}

pub const ROUND_TRIP_CORPUS: u64 = 120;

pub fn criterion_3(seed: u64) -> CriterionResult {
    timed(3, "reduction round trip", Some(Duration::from_secs(60)), || {
        let failures: Vec<String> = (0..ROUND_TRIP_CORPUS)
            .into_par_iter()
            .filter_map(|idx| {
                let mut rng = rng_for(seed ^ 0x5eed_0003, idx);
                let n = 1 + (idx % 3) as usize;
                let d = 3 + ((idx / 3) % 3) as u32;
                let density = if idx % 2 == 0 { 0.3 } else { 0.7 };
                let f = random_system_from(&mut rng, n, d, density).expect("valid parameters");
                let check = || -> std::result::Result<(), String> {
                    let rec = phi(&f).map_err(|e| e.to_string())?;
                    let back = eliminate_sigma(&rec).map_err(|e| e.to_string())?;
                    ensure(back == f, || "eliminate_sigma(phi(F)) != F".into())?;
                    let pre = phi_preimage(rec.reduced(), n).ok_or("no preimage")?;
                    ensure(pre == f, || "phi_preimage(phi(F)) != F".into())
                };
                check().err().map(|e| format!("entry {idx} (n={n}, d={d}): {e}"))
            })
            .collect();
        ensure(failures.is_empty(), || failures.join("; "))?;
        Ok(format!("{ROUND_TRIP_CORPUS} random systems round-tripped"))
    })
}

/// Positive and negative cases for the instance verification, `n = 2`.
pub fn theorem_cases(seed: u64, per_degree: usize) -> (Vec<PolySystem>, Vec<PolySystem>) {
    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    for d in [3u32, 4] {
        let mut stream = u64::from(d) << 32;
        let mut found = 0;
        while found < per_degree {
            let mut rng = rng_for(seed ^ 0x5eed_0004, stream);
            stream += 1;
            let steps = 1 + (stream % 3) as usize;
            let tame = random_tame_from(&mut rng, 2, steps, d).expect("valid parameters");
            if tame.system.effective_degree() == d {
                positives.push(tame.system.with_degree(d).expect("degree matches"));
                found += 1;
            }
        }
        let mut found = 0;
        while found < per_degree {
            let mut rng = rng_for(seed ^ 0x5eed_1004, stream);
            stream += 1;
            let f = random_system_from(&mut rng, 2, d, 0.5).expect("valid parameters");
            if f.effective_degree() == d && !f.is_jlin() {
                negatives.push(f);
                found += 1;
            }
        }
    }
    (positives, negatives)
}

pub fn criterion_4(seed: u64) -> CriterionResult {
    timed(
        4,
        "instance verification of the reduction theorem",
        Some(Duration::from_secs(300)),
        || {
            let (positives, negatives) = theorem_cases(seed, 25);
            let cases: Vec<(bool, PolySystem)> = positives
                .into_iter()
                .map(|f| (true, f))
                .chain(negatives.into_iter().map(|f| (false, f)))
                .collect();
            let failures: Vec<String> = cases
                .par_iter()
                .enumerate()
                .filter_map(|(idx, (positive, f))| {
                    let check = || -> std::result::Result<(), String> {
                        let report = verify_theorem(f, 10).map_err(|e| e.to_string())?;
                        let jlin = f.is_jlin();
                        ensure(jlin == *positive, || format!("is_jlin = {jlin} for a {positive} case"))?;
                        let reduced = phi(f).map_err(|e| e.to_string())?;
                        let jlin_param =
                            is_jlin_param(reduced.reduced(), PartialSplit::new(2)).map_err(|e| e.to_string())?;
                        ensure(jlin == jlin_param, || "is_jlin disagrees with is_jlin_param".into())?;
                        ensure(report.jlin == jlin && report.jlin_param == jlin_param, || {
                            "report predicates".into()
                        })?;
                        let kind = polynomial_inverse(f).map_err(|e| e.to_string())?.kind();
                        ensure(kind == report.inverse_kind, || "report inverse kind".into())?;
                        ensure((kind == InverseKind::Polynomial) == *positive, || "inverse kind".into())?;
                        ensure(report.inverse_agrees(), || {
                            format!("restricted inverse {} vs {kind:?}", report.restricted_outcome.label())
                        })?;
                        let direct = formal_inverse(f, 10);
                        let transported = restricted_inverse(reduced.reduced(), 2, 10).map_err(|e| e.to_string())?;
                        ensure(direct.components() == &transported.components()[..2], || {
                            "order-10 transport".into()
                        })?;
                        ensure(report.transport_agrees() && report.sigma_agrees(), || {
                            "report series checks".into()
                        })?;
                        ensure(report.all_agree(), || "report disagreement".into())
                    };
                    check().err().map(|e| format!("case {idx}: {e}"))
                })
                .collect();
            ensure(failures.is_empty(), || failures.join("; "))?;
            Ok(format!(
                "{} cases (50 tame, 50 negatives), zero disagreements",
                cases.len()
            ))
        },
    )
}

pub fn criterion_5(seed: u64) -> CriterionResult {
    timed(
        5,
        "iterated reduction to quadratic",
        Some(Duration::from_secs(300)),
        || {
            let mut stream = 0;
            let tame = loop {
                let mut rng = rng_for(seed ^ 0x5eed_0005, stream);
                stream += 1;
                let t = random_tame_from(&mut rng, 2, 3, 4).expect("valid parameters");
                if t.system.effective_degree() == 4 {
                    break t.system;
                }
            };
            let negative = loop {
                let mut rng = rng_for(seed ^ 0x5eed_1005, stream);
                stream += 1;
                let f = random_system_from(&mut rng, 2, 4, 0.4).expect("valid parameters");
                if f.effective_degree() == 4 && !f.is_jlin() {
                    break f;
                }
            };
            for (label, f) in [("tame", &tame), ("negative", &negative)] {
                let chain = reduce_to_quadratic(f).map_err(|e| e.to_string())?;
                let dims: Vec<usize> = chain.iter().map(|r| r.reduced().n()).collect();
                ensure(dims == [6, 42], || format!("{label}: dims {dims:?}"))?;
                let last = chain.last().expect("non-empty");
                ensure(last.reduced().d() == 2, || {
                    format!("{label}: final degree {}", last.reduced().d())
                })?;
                let once = eliminate_sigma(last).map_err(|e| e.to_string())?;
                ensure(&once == chain[0].reduced(), || format!("{label}: first elimination"))?;
                let rec = phi_preimage(&once, 2)
                    .and_then(|orig| phi(&orig).ok())
                    .ok_or_else(|| format!("{label}: intermediate is not a reduction"))?;
                let twice = eliminate_sigma(&rec).map_err(|e| e.to_string())?;
                ensure(&twice == f, || format!("{label}: second elimination"))?;
                let direct = formal_inverse(f, 6);
                let restricted = restricted_inverse(last.reduced(), 2, 6).map_err(|e| e.to_string())?;
                ensure(direct.components() == &restricted.components()[..2], || {
                    format!("{label}: order-6 restricted inverse")
                })?;
            }
            Ok("dims [6, 42], double elimination exact, order-6 inverse matches".into())
        },
    )
}

pub fn qft_cases(seed: u64) -> Vec<PolySystem> {
    let mut cases = vec![worked_example(), negative_example()];
    for idx in 0..4 {
        let mut rng = rng_for(seed ^ 0x5eed_0006, idx);
        cases.push(random_tame_from(&mut rng, 2, 2, 3).expect("valid parameters").system);
    }
    for idx in 0..4 {
        let mut rng = rng_for(seed ^ 0x5eed_1006, idx);
        cases.push(random_system_from(&mut rng, 2, 3, 0.4).expect("valid parameters"));
    }
    cases
}

pub fn criterion_6(seed: u64) -> CriterionResult {
    timed(
        6,
        "Wick expansion against inversion",
        Some(Duration::from_secs(300)),
        || {
            let cases = qft_cases(seed);
            let limits = Limits::default();
            let failures: Vec<String> = cases
                .par_iter()
                .enumerate()
                .filter_map(|(idx, f)| {
                    let check = || -> std::result::Result<(), String> {
                        let z = z_det_identity(f, 4, &limits).map_err(|e| e.to_string())?;
                        ensure(z.matched(), || "Z(0,u) vs 1/det J(G(u))".into())?;
                        if f.is_jlin() {
                            ensure(z.lhs[0] == Poly::one(2), || "Z(0,u) != 1 for constant det".into())?;
                        }
                        let g = one_point_identity(f, 4, &limits).map_err(|e| e.to_string())?;
                        ensure(g.matched(), || "one-point function vs formal inverse".into())
                    };
                    check().err().map(|e| format!("system {idx}: {e}"))
                })
                .collect();
            ensure(failures.is_empty(), || failures.join("; "))?;
            Ok(format!("{} systems matched to order 4", cases.len()))
        },
    )
}

pub const GAUSSIAN_MOMENTS: [i64; 9] = [1, 1, 3, 15, 105, 945, 10395, 135135, 2027025];

pub fn criterion_7() -> CriterionResult {
    timed(
        7,
        "Gaussian moments and sextic identity",
        Some(Duration::from_secs(30)),
        || {
            for (k, &expected) in GAUSSIAN_MOMENTS.iter().enumerate() {
                let got = real_gaussian_moment(k as u32);
                ensure(got == int(expected), || format!("moment {k}: {got}"))?;
            }
            ensure(phi6_intermediate_identity(3), || {
                "sextic identity fails through order 3".into()
            })?;
            Ok("moments k <= 8 exact, sextic identity through lambda^3".into())
        },
    )
}

/// Every verb with a representative input, as `(args, stdin)`.
pub fn determinism_commands() -> Vec<(Vec<String>, String)> {
    let record = {
        let (_, out, _) = run_cli(&["reduce", WORKED_EXAMPLE], "");
        out
    };
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        (s(&["invert", WORKED_EXAMPLE]), String::new()),
        (s(&["invert", "--order", "5", NEGATIVE_EXAMPLE]), String::new()),
        (s(&["invert", NEGATIVE_EXAMPLE]), String::new()),
        (s(&["invert", "-"]), record.clone()),
        (s(&["jacobian", NEGATIVE_EXAMPLE]), String::new()),
        (s(&["det", WORKED_EXAMPLE]), String::new()),
        (s(&["det", NEGATIVE_EXAMPLE]), String::new()),
        (s(&["reduce", WORKED_EXAMPLE]), String::new()),
        (s(&["reduce", "--quadratic", WORKED_EXAMPLE]), String::new()),
        (s(&["eliminate", "-"]), record.clone()),
        (s(&["preimage", "-"]), record),
        (s(&["verify", "--cutoff", "10", WORKED_EXAMPLE]), String::new()),
        (s(&["wick-z", "--order", "3", NEGATIVE_EXAMPLE]), String::new()),
        (
            s(&["wick-g", "--index", "1", "--order", "3", WORKED_EXAMPLE]),
            String::new(),
        ),
        (s(&["identity-check", "--identity", "phi6"]), String::new()),
        (s(&["identity-check", "--identity", "gaussian-moments"]), String::new()),
        (
            s(&["identity-check", "--identity", "z-det", NEGATIVE_EXAMPLE]),
            String::new(),
        ),
        (
            s(&["identity-check", "--identity", "one-point", WORKED_EXAMPLE]),
            String::new(),
        ),
        (s(&["gen", "--seed", "7", "--count", "3", "--n", "3"]), String::new()),
        (
            s(&["gen", "--kind", "random", "--seed", "7", "--count", "3", "--d", "4"]),
            String::new(),
        ),
        (s(&["run-suite", "--only", "7"]), String::new()),
    ]
}

pub fn criterion_8() -> CriterionResult {
    timed(8, "determinism and reduce | invert pipeline", None, || {
        let commands = determinism_commands();
        for (args, stdin) in &commands {
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let (c1, o1, _) = run_cli(&argv, stdin);
            let (c2, o2, _) = run_cli(&argv, stdin);
            ensure(c1 == c2 && o1 == o2, || {
                format!("`{}` is not reproducible", args.join(" "))
            })?;
            ensure(c1 <= 1 && !o1.is_empty(), || {
                format!("`{}` failed with {c1}", args.join(" "))
            })?;
            parse_value(&o1).map_err(|e| format!("`{}`: {e}", args.join(" ")))?;
        }
        let (code, record, err) = run_cli(&["reduce", WORKED_EXAMPLE], "");
        ensure(code == 0, || format!("reduce exited {code}: {err}"))?;
        let (code, out, err) = run_cli(&["invert", "-"], &record);
        ensure(code == 0, || format!("invert on the record exited {code}: {err}"))?;
        let v = parse_value(&out).map_err(|e| e.to_string())?;
        let p = parse_polys(&v["inverse"], 2)?;
        ensure(p.len() == 6 && p[..2] == worked_inverse()[..], || {
            format!("pipeline inverse {p:?}")
        })?;
        Ok(format!(
            "{} commands byte-identical across runs, pipeline ok",
            commands.len()
        ))
    })
}

pub const ALL: [u32; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// Runs the requested criteria in order (all when `only` is empty).
pub fn run_selected(only: &[u32], seed: u64) -> Vec<CriterionResult> {
    let ids: Vec<u32> = if only.is_empty() { ALL.to_vec() } else { only.to_vec() };
    ids.into_iter()
        .filter_map(|id| match id {
            1 => Some(criterion_1()),
            2 => Some(criterion_2(seed)),
            3 => Some(criterion_3(seed)),
            4 => Some(criterion_4(seed)),
            5 => Some(criterion_5(seed)),
            6 => Some(criterion_6(seed)),
            7 => Some(criterion_7()),
            8 => Some(criterion_8()),
            _ => None,
        })
        .collect()
}
