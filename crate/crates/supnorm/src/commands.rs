//! Subcommand implementations. Each returns an `Outcome` or a classified error.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use supnorm_core::amplifier::{amplifier_coefficients, verify_amplifier_identity};
use supnorm_core::coset::{coset_decomposition, determinantal_divisors, hecke_degree, oracle_multiply, IntMatrix};
use supnorm_core::diophantine::{
    enumerate_s_delta, lembp_count, matrix_deviation, revalidate_witness, scaling_experiment, BinaryQuadratic,
    QuadraticForm, MARGIN,
};
use supnorm_core::hecke::{lem2_spread, verify_lem2};
use supnorm_core::satake::{trivial_eigenvalue, verify_basic};
use supnorm_core::{Error, HeckeAlgebra, Partition};

use crate::cli::{Cli, Command, CountArgs, CountMode, Format, GeneratorArgs, Lem2Args, MultiplyArgs, RankPrime, VerifyArgs};
use crate::criteria::{self, Scale};
use crate::experiments::{corollary_ladder, random_spd};
use crate::report::{partition_str, rat_str, sympoly_json, Outcome, Table, Verdict};

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent arguments.
    Usage(String),
    /// A budget ran out before any result could be produced.
    Budget(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
            CliError::Failure(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::RankMismatch { .. } | Error::WeightMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

type CmdResult = Result<Outcome, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn run(cli: &Cli) -> CmdResult {
    let outcome = match &cli.command {
        Command::Satake(args) => satake(args)?,
        Command::Multiply(args) => multiply(args, cli.budget)?,
        Command::Cosets(args) => cosets(&args.generator, args.no_reps, cli.budget)?,
        Command::Amplifier(args) => amplifier(args)?,
        Command::Lem2(args) => lem2(args)?,
        Command::Count(args) => count(args, cli.node_budget)?,
        Command::Verify(args) => verify(args)?,
    };
    if cli.format == Format::Csv && outcome.table.is_none() {
        return Err(usage(format!("--format csv is not available for `{}`", cli.command.name())));
    }
    Ok(outcome)
}

fn partition(n: usize, parts: &[u32]) -> Result<Partition, CliError> {
    if parts.len() != n {
        return Err(usage(format!("expected {n} exponents, got {}", parts.len())));
    }
    Ok(Partition::from_canonical(parts.to_vec())?)
}

fn algebra(rp: &RankPrime) -> Result<HeckeAlgebra, CliError> {
    if rp.n == 0 {
        return Err(usage("n must be positive"));
    }
    Ok(HeckeAlgebra::new(rp.n, rp.p)?)
}

fn satake(args: &GeneratorArgs) -> CmdResult {
    let alg = algebra(&args.rp)?;
    let a = partition(args.rp.n, &args.a)?;
    let image = alg.cache().get(&a, args.rp.p)?;
    let basic = verify_basic(&image);
    let result = json!({
        "a": partition_str(&a),
        "v": a.v(),
        "omega": sympoly_json(&image.poly),
        "scaled": sympoly_json(&image.scaled),
        "trivial_eigenvalue": rat_str(&trivial_eigenvalue(&image)),
        "checks": {
            "support_dominance": basic.support_dominance,
            "support_lex_sorted": basic.support_lex_sorted,
            "leading_coefficient_one": basic.leading_coefficient_one,
            "symmetric": basic.symmetric,
            "denominators_p_powers": basic.denominators_p_powers,
            "homogeneous": basic.homogeneous,
        },
    });
    Ok(Outcome { verdict: Verdict::from_bool(basic.passes()), result, table: None })
}

fn expression(constants: &std::collections::BTreeMap<Partition, u64>) -> String {
    let terms: Vec<String> = constants
        .iter()
        .rev()
        .map(|(c, &k)| if k == 1 { format!("T{c}") } else { format!("{k}·T{c}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn multiply(args: &MultiplyArgs, budget: u64) -> CmdResult {
    let alg = algebra(&args.rp)?;
    let a = partition(args.rp.n, &args.a)?;
    let b = partition(args.rp.n, &args.b)?;
    let satake = alg.multiply_generators(&a, &b)?;
    let oracle = match oracle_multiply(&a, &b, args.rp.p, u128::from(budget)) {
        Ok(o) => Some(o),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut result = json!({
        "a": partition_str(&a),
        "b": partition_str(&b),
        "satake": { "expression": expression(&satake), "constants": constants_json(&satake) },
    });
    let verdict = match &oracle {
        Some(o) => {
            let keys: BTreeSet<&Partition> = satake.keys().chain(o.constants.keys()).collect();
            let diff: Vec<Value> = keys
                .into_iter()
                .filter_map(|c| {
                    let s = satake.get(c).copied().unwrap_or(0) as i128;
                    let t = o.constants.get(c).copied().unwrap_or(0) as i128;
                    (s != t).then(|| json!({ "c": partition_str(c), "satake_minus_oracle": s - t }))
                })
                .collect();
            let ok = diff.is_empty();
            result["oracle"] = json!({
                "expression": expression(&o.constants),
                "constants": constants_json(&o.constants),
                "degree_a": o.degree_a,
                "degree_b": o.degree_b,
            });
            result["diff"] = Value::Array(diff);
            Verdict::from_bool(ok)
        }
        None => {
            result["oracle"] = Value::Null;
            result["partial"] = json!(format!("coset oracle skipped: more than {budget} cosets"));
            Verdict::Partial
        }
    };
    Ok(Outcome { verdict, result, table: None })
}

fn constants_json(constants: &std::collections::BTreeMap<Partition, u64>) -> Value {
    Value::Array(
        constants
            .iter()
            .rev()
            .map(|(c, k)| json!({ "c": partition_str(c), "constant": k }))
            .collect(),
    )
}

fn matrix_json(g: &IntMatrix) -> Value {
    let divisors: Vec<String> = determinantal_divisors(g).map(|d| d.iter().map(|x| x.to_string()).collect()).unwrap_or_default();
    json!({ "rows": g.rows(), "det": g.det().to_string(), "determinantal_divisors": divisors })
}

fn cosets(args: &GeneratorArgs, no_reps: bool, budget: u64) -> CmdResult {
    algebra(&args.rp)?;
    let a = partition(args.rp.n, &args.a)?;
    let p = args.rp.p;
    let formula = hecke_degree(&a, p)?;
    let mut result = json!({ "a": partition_str(&a), "degree_formula": formula.to_string() });
    match coset_decomposition(&a, p, u128::from(budget)) {
        Ok(list) => {
            result["degree"] = json!(list.degree());
            if !no_reps {
                result["representatives"] = Value::Array(list.reps.iter().map(matrix_json).collect());
            }
            let ok = formula.to_string() == list.degree().to_string();
            Ok(Outcome { verdict: Verdict::from_bool(ok), result, table: None })
        }
        Err(Error::BudgetExceeded { .. }) => {
            result["degree"] = Value::Null;
            result["partial"] = json!(format!("enumeration skipped: more than {budget} cosets"));
            Ok(Outcome { verdict: Verdict::Partial, result, table: None })
        }
        Err(e) => Err(e.into()),
    }
}

fn amplifier(args: &RankPrime) -> CmdResult {
    let alg = algebra(args)?;
    let sol = amplifier_coefficients(&alg)?;
    let ok = verify_amplifier_identity(&alg, &sol)?;
    let y: Vec<Value> = sol
        .partitions
        .iter()
        .map(|a| json!({ "a": partition_str(a), "y": rat_str(&sol.y[a]) }))
        .collect();
    let matrix: Vec<Vec<String>> = sol.matrix.iter().map(|row| row.iter().map(rat_str).collect()).collect();
    let result = json!({
        "y": y,
        "matrix": matrix,
        "max_abs_y": rat_str(&sol.max_abs_y()),
        "corollary_bound": sol.corollary_bound(),
        "identity_holds": ok,
    });
    Ok(Outcome { verdict: Verdict::from_bool(ok), result, table: None })
}

fn lem2(args: &Lem2Args) -> CmdResult {
    if args.primes.is_empty() {
        return Err(usage("--primes is empty"));
    }
    let mut reports = Vec::new();
    for &p in &args.primes {
        reports.push(verify_lem2(&algebra(&RankPrime { n: args.n, p })?, args.j)?);
    }
    let spread = lem2_spread(&reports);
    let ok = reports.iter().all(|r| r.passes()) && spread.is_some_and(|s| s <= 2.0);
    let mut table = Table {
        header: ["p", "i", "cell", "c_i"].map(String::from).to_vec(),
        rows: Vec::new(),
    };
    let mut ladder = Vec::new();
    for r in &reports {
        for (i, c) in r.coefficients.iter().enumerate() {
            let mut cell = vec![args.j; args.n];
            cell[0] = 2 * args.j - i as u32;
            cell[args.n - 1] = i as u32;
            table.rows.push(vec![r.p.to_string(), i.to_string(), partition_str(&Partition::new(cell)), rat_str(c)]);
        }
        let product: Vec<Value> = r
            .product
            .iter()
            .rev()
            .map(|(c, x)| json!({ "c": partition_str(c), "coeff": rat_str(x) }))
            .collect();
        ladder.push(json!({
            "p": r.p,
            "coefficients": r.coefficients.iter().map(rat_str).collect::<Vec<_>>(),
            "product": product,
            "support_ok": r.support_ok,
            "duality_ok": r.duality_ok,
            "leading_one": r.leading_one,
        }));
    }
    let result = json!({ "n": args.n, "j": args.j, "ladder": ladder, "spread": spread });
    Ok(Outcome { verdict: Verdict::from_bool(ok), result, table: Some(table) })
}

#[derive(Deserialize)]
struct FormFile {
    num: Vec<Vec<i64>>,
    den: i64,
}

fn load_form(source: &str, n: Option<usize>) -> Result<QuadraticForm, CliError> {
    let need_n = || n.ok_or_else(|| usage(format!("--q {source} needs --n")));
    let form = if source == "identity" {
        QuadraticForm::identity(need_n()?)
    } else if let Some(seed) = source.strip_prefix("seed:") {
        let seed = seed.parse().map_err(|_| usage(format!("bad seed in --q {source}")))?;
        random_spd(need_n()?, seed)
    } else if let Some(path) = source.strip_prefix("file:") {
        let text = std::fs::read_to_string(Path::new(path)).map_err(|e| usage(format!("{path}: {e}")))?;
        let file: FormFile = serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?;
        let num = file.num.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        QuadraticForm::new(num, i128::from(file.den))?
    } else {
        return Err(usage(format!("--q must be identity, file:PATH or seed:N, got {source}")));
    };
    if let Some(n) = n {
        if form.dim() != n {
            return Err(usage(format!("Q has dimension {} but --n is {n}", form.dim())));
        }
    }
    Ok(form)
}

fn precision() -> Value {
    json!({ "arithmetic": "f64 with exact integer revalidation", "decision_margin": MARGIN })
}

fn count(args: &CountArgs, node_budget: u64) -> CmdResult {
    match args.mode {
        CountMode::Lembp => {
            let c = args.poly.as_deref().ok_or_else(|| usage("lembp needs --poly a,b,c,d,e,f"))?;
            let &[a, b, cc, d, e, f] = c else {
                return Err(usage(format!("--poly needs 6 coefficients, got {}", c.len())));
            };
            let poly = BinaryQuadratic { a, b, c: cc, d, e, f };
            let delta = args.delta.unwrap_or(0.5);
            let r = lembp_count(&poly, delta, args.min_disc, None)?;
            let mut result = json!({
                "count": r.count,
                "radius": r.radius,
                "box_bound": r.box_bound,
                "complete": r.complete,
                "precision": precision(),
            });
            if !args.no_witnesses {
                result["points"] = json!(r.points);
            }
            let verdict = if r.complete { Verdict::Pass } else { Verdict::Partial };
            Ok(Outcome { verdict, result, table: None })
        }
        CountMode::Corollary => {
            let n = args.n.ok_or_else(|| usage("corollary needs --n"))?;
            if args.x.len() < 2 || args.trials == 0 {
                return Err(usage("corollary needs at least two --x values and one trial"));
            }
            if args.q != "identity" {
                return Err(usage("corollary draws a random Q per trial from --seed; omit --q"));
            }
            let ladder = corollary_ladder(n, args.k, &args.x, args.trials, args.seed, node_budget)?;
            let ok = ladder.slope.is_some_and(|s| s <= ladder.benchmark + 0.3);
            let table = Table {
                header: ["x", "mean_count", "counts"].map(String::from).to_vec(),
                rows: ladder
                    .rows
                    .iter()
                    .map(|r| {
                        let counts: Vec<String> = r.counts.iter().map(u64::to_string).collect();
                        vec![r.x.to_string(), r.mean_count.to_string(), counts.join(";")]
                    })
                    .collect(),
            };
            let mut result = serde_json::to_value(&ladder).map_err(|e| CliError::Failure(e.to_string()))?;
            result["tolerance"] = json!(0.3);
            Ok(Outcome { verdict: Verdict::from_bool(ok), result, table: Some(table) })
        }
        CountMode::Sdelta => {
            let form = load_form(&args.q, args.n)?;
            let (Some(m), Some(l)) = (args.m, args.l) else {
                return Err(usage("sdelta needs --m and --l"));
            };
            let delta = args.delta.unwrap_or(1e-6);
            let r = enumerate_s_delta(&form, m, l, delta, node_budget)?;
            let mut valid = true;
            let mut witnesses = Vec::new();
            for w in &r.witnesses {
                valid &= revalidate_witness(w, &form, m, l, delta)?.passes();
                if !args.no_witnesses {
                    let mut entry = matrix_json(w);
                    entry["deviation"] = json!(matrix_deviation(w, &form)?);
                    witnesses.push(entry);
                }
            }
            let mut result = json!({
                "m": m,
                "l": l,
                "delta": delta,
                "q_digest": r.q_digest,
                "box_bound": r.box_bound,
                "count": r.count,
                "complete": r.complete,
                "nodes": r.nodes,
                "revalidated": valid,
                "precision": precision(),
            });
            if !args.no_witnesses {
                result["witnesses"] = Value::Array(witnesses);
            }
            let verdict = if !valid {
                Verdict::Fail
            } else if r.complete {
                Verdict::Pass
            } else {
                Verdict::Partial
            };
            Ok(Outcome { verdict, result, table: None })
        }
        CountMode::Scaling => {
            let form = load_form(&args.q, Some(args.n.unwrap_or(4)))?;
            let delta = args.delta.unwrap_or(1e-6);
            let r = scaling_experiment(&form, args.nu, &args.primes, delta, node_budget)?;
            let complete = r.rows.iter().all(|row| row.complete);
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| json!({ "p": row.p, "m": row.m, "l": row.l, "count": row.count, "complete": row.complete }))
                .collect();
            let table = Table {
                header: ["p", "m", "l", "count", "complete"].map(String::from).to_vec(),
                rows: r
                    .rows
                    .iter()
                    .map(|row| {
                        vec![row.p.to_string(), row.m.to_string(), row.l.to_string(), row.count.to_string(), row.complete.to_string()]
                    })
                    .collect(),
            };
            let result = json!({
                "nu": r.nu,
                "delta": delta,
                "q_digest": form.digest(),
                "rows": rows,
                "slope": r.slope,
                "benchmark": r.benchmark,
                "bound_exponent": r.bound_exponent,
                "precision": precision(),
            });
            let verdict = if !complete {
                Verdict::Partial
            } else {
                Verdict::from_bool(r.slope.is_some_and(|s| s < r.benchmark))
            };
            Ok(Outcome { verdict, result, table: Some(table) })
        }
    }
}

fn verify(args: &VerifyArgs) -> CmdResult {
    let scale = if args.full { Scale::Full } else { Scale::Quick };
    let ids: Vec<u8> = args.only.clone().unwrap_or_else(|| (1..=10).collect());
    if let Some(bad) = ids.iter().find(|&&id| !(1..=10).contains(&id)) {
        return Err(usage(format!("criterion {bad} does not exist")));
    }
    let results: Vec<_> = ids.iter().map(|&id| criteria::run(id, scale)).collect();
    let ok = results.iter().all(|r| r.passed);
    let passed = results.iter().filter(|r| r.passed).count();
    let result = json!({
        "scale": if args.full { "full" } else { "quick" },
        "passed": passed,
        "total": results.len(),
        "criteria": results,
    });
    Ok(Outcome { verdict: Verdict::from_bool(ok), result, table: None })
}

