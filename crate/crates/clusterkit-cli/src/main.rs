//! Batch command-line surface over the clusterkit library. All commands
//! are deterministic: identical inputs (including `--rng-seed`) produce
//! byte-identical output. Machine output is versioned JSON selected with
//! `--json`; the human rendering is derived from the same data.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use clusterkit::io::{self, SeedFile};
use clusterkit::laurent::LaurentPolynomial;
use clusterkit::poisson::{
    bivector_rank_at, boundary_nondegeneracy, bracket, descent_certificate, extract_monomial,
    genericity_check, verify_descent, verify_extraction, CompatiblePair, PoissonMatrix,
};
use clusterkit::quantum::{
    parse_torus_element, quantum_descent_certificate, quantum_extract_monomial,
    quasi_commutation_matrix, verify_quantum_extraction, QuantumSeed,
};
use clusterkit::sample;
use clusterkit::seed::{enumerate_mutation_class, Acyclicity, Seed, DEFAULT_MAX_SEEDS};

#[derive(Parser)]
#[command(name = "clusterkit", version, about = "Exact cluster-algebra computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a mutation sequence to a seed and print the result.
    Mutate(MutateArgs),
    /// Run all applicable structural checks and emit a report.
    Verify(VerifyArgs),
    /// Enumerate the mutation class and export the exchange graph.
    Enumerate(EnumerateArgs),
    /// Evaluate the log-canonical Poisson bracket of two polynomials.
    Bracket(BracketArgs),
    /// Reduce a polynomial to an ideal monomial and record the trace.
    ExtractMonomial(ExtractArgs),
    /// Generate or re-check a classical descent certificate.
    Certificate(CertificateArgs),
    /// Apply a quantum mutation sequence and print the frame variables.
    QuantumMutate(MutateArgs),
    /// Generate or re-check a quantum descent certificate.
    QuantumCertificate(CertificateArgs),
}

#[derive(Args)]
struct MutateArgs {
    /// Seed file (JSON with m, n, B, optional names/Lambda/d).
    #[arg(long)]
    seed_file: String,
    /// Comma-separated 1-based mutation indices, e.g. `1,2,1`.
    #[arg(long, default_value = "")]
    seq: String,
    /// Inline Lambda matrix overriding the seed file.
    #[arg(long)]
    lambda: Option<String>,
    /// Mutation sign for the compatible-pair transform (+1 or -1).
    #[arg(long, default_value_t = 1)]
    epsilon: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    seed_file: String,
    #[arg(long)]
    lambda: Option<String>,
    /// Seed for the randomized bivector sweep.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Optional boundary check: 1-based exchange index.
    #[arg(long)]
    index: Option<usize>,
    /// Optional boundary check: comma-separated rational point.
    #[arg(long)]
    point: Option<String>,
    #[arg(long, default_value_t = 1)]
    epsilon: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    seed_file: String,
    #[arg(long, default_value_t = DEFAULT_MAX_SEEDS)]
    max_seeds: usize,
    /// Write the exchange graph in DOT form to this path.
    #[arg(long)]
    dot: Option<String>,
    /// Write the exchange graph in JSON adjacency form to this path.
    #[arg(long)]
    graph_json: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BracketArgs {
    /// First polynomial in the text grammar.
    #[arg(long)]
    f: String,
    /// Second polynomial in the text grammar.
    #[arg(long)]
    g: String,
    /// Inline Lambda matrix, e.g. `[[0,-1],[1,0]]`.
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExtractArgs {
    /// Input polynomial (classical grammar, or quantum with `--quantum`).
    #[arg(long)]
    f: String,
    #[arg(long)]
    lambda: String,
    /// Treat the input as a quantum torus element.
    #[arg(long)]
    quantum: bool,
    /// Write the verified trace to this path.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CertificateArgs {
    /// Seed file to generate a certificate for.
    #[arg(long, conflicts_with = "check")]
    seed_file: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    /// Write the certificate to this path.
    #[arg(long)]
    out: Option<String>,
    /// Re-verify a serialized certificate independently.
    #[arg(long)]
    check: Option<String>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Mutate(args) => cmd_mutate(args, false),
        Command::QuantumMutate(args) => cmd_mutate(args, true),
        Command::Verify(args) => cmd_verify(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Bracket(args) => cmd_bracket(args),
        Command::ExtractMonomial(args) => cmd_extract(args),
        Command::Certificate(args) => cmd_certificate(args, false),
        Command::QuantumCertificate(args) => cmd_certificate(args, true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn load_seed_file(path: &str) -> Result<SeedFile, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    SeedFile::parse(&text).map_err(|e| e.to_string())
}

fn load_lambda(
    file: &SeedFile,
    flag: &Option<String>,
) -> Result<Option<PoissonMatrix>, String> {
    match flag {
        Some(text) => {
            let entries = io::parse_int_matrix(text).map_err(|e| e.to_string())?;
            PoissonMatrix::new(entries).map(Some).map_err(|e| e.to_string())
        }
        None => file.poisson_matrix().map_err(|e| e.to_string()),
    }
}

fn parse_sequence(seq: &str, m: usize) -> Result<Vec<usize>, String> {
    if seq.trim().is_empty() {
        return Ok(Vec::new());
    }
    seq.split(',')
        .enumerate()
        .map(|(step, part)| {
            let k: usize = part
                .trim()
                .parse()
                .map_err(|_| format!("bad index {:?} at step {}", part.trim(), step + 1))?;
            if k == 0 || k > m {
                return Err(format!(
                    "index error at step {}: {} is outside 1..={}",
                    step + 1,
                    k,
                    m
                ));
            }
            Ok(k - 1)
        })
        .collect()
}

fn emit(json_mode: bool, report: &Value, human: &[String]) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
    } else {
        for line in human {
            println!("{line}");
        }
    }
}

fn cmd_mutate(args: MutateArgs, quantum: bool) -> Result<bool, String> {
    let file = load_seed_file(&args.seed_file)?;
    let matrix = file.exchange_matrix().map_err(|e| e.to_string())?;
    let lambda = load_lambda(&file, &args.lambda)?;
    let sequence = parse_sequence(&args.seq, matrix.m())?;
    let names = file.variable_names();
    if args.epsilon != 1 && args.epsilon != -1 {
        return Err("epsilon must be +1 or -1".into());
    }

    let mut human = Vec::new();
    let report;
    if quantum {
        let lambda = lambda.ok_or("quantum mutation needs Lambda in the seed file or --lambda")?;
        let mut seed = QuantumSeed::initial(matrix, lambda).map_err(|e| e.to_string())?;
        if let Some(d) = &file.d {
            if d != seed.d() {
                return Err(format!(
                    "seed file declares d = {:?} but B*Lambda gives {:?}",
                    d,
                    seed.d()
                ));
            }
        }
        for (step, &k) in sequence.iter().enumerate() {
            seed = seed
                .mutate(k)
                .map_err(|e| format!("mutation failed at step {}: {e}", step + 1))?;
        }
        let variables: Vec<String> = seed.variables().iter().map(|v| v.render()).collect();
        human.push(format!("sequence: {}", render_sequence(&sequence)));
        for (i, v) in variables.iter().enumerate() {
            human.push(format!("{} = {}", names[i], v));
        }
        human.push(format!("B = {:?}", seed.matrix().entries()));
        human.push(format!("Lambda = {:?}", seed.frame_lambda().entries()));
        report = json!({
            "schema": io::SCHEMA,
            "command": "quantum-mutate",
            "sequence": sequence.iter().map(|k| k + 1).collect::<Vec<_>>(),
            "variables": variables,
            "B": seed.matrix().entries(),
            "Lambda": seed.frame_lambda().entries(),
            "d": seed.d(),
        });
    } else {
        let mut seed = Seed::initial(matrix.clone());
        let mut pair = match &lambda {
            Some(l) => Some(
                CompatiblePair::check(matrix, l.clone()).map_err(|e| e.to_string())?,
            ),
            None => None,
        };
        for (step, &k) in sequence.iter().enumerate() {
            seed = seed
                .mutate(k)
                .map_err(|e| format!("mutation failed at step {}: {e}", step + 1))?;
            pair = pair.map(|p| p.mutate(k, args.epsilon));
        }
        let variables: Vec<String> = seed.variables().iter().map(|v| v.render()).collect();
        human.push(format!("sequence: {}", render_sequence(&sequence)));
        for (i, v) in variables.iter().enumerate() {
            human.push(format!("{} = {}", names[i], v));
        }
        human.push(format!("B = {:?}", seed.matrix().entries()));
        let lambda_entries = pair.as_ref().map(|p| p.lambda().entries().to_vec());
        if let Some(l) = &lambda_entries {
            human.push(format!("Lambda = {l:?}"));
        }
        report = json!({
            "schema": io::SCHEMA,
            "command": "mutate",
            "sequence": sequence.iter().map(|k| k + 1).collect::<Vec<_>>(),
            "variables": variables,
            "B": seed.matrix().entries(),
            "Lambda": lambda_entries,
        });
    }
    emit(args.json, &report, &human);
    Ok(true)
}

fn render_sequence(seq: &[usize]) -> String {
    if seq.is_empty() {
        "(empty)".to_string()
    } else {
        seq.iter()
            .map(|k| (k + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

struct CheckLog {
    human: Vec<String>,
    checks: Vec<Value>,
    all_passed: bool,
}

impl CheckLog {
    fn new() -> Self {
        CheckLog { human: Vec::new(), checks: Vec::new(), all_passed: true }
    }

    fn record(&mut self, name: &str, passed: bool, detail: String, payload: Value) {
        let verdict = if passed { "pass" } else { "FAIL" };
        self.human.push(format!("[{verdict}] {name}: {detail}"));
        self.checks.push(json!({
            "name": name,
            "passed": passed,
            "detail": detail,
            "data": payload,
        }));
        self.all_passed &= passed;
    }

    fn note(&mut self, name: &str, detail: String, payload: Value) {
        self.human.push(format!("[info] {name}: {detail}"));
        self.checks.push(json!({
            "name": name,
            "passed": Value::Null,
            "detail": detail,
            "data": payload,
        }));
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<bool, String> {
    let file = load_seed_file(&args.seed_file)?;
    let matrix = file.exchange_matrix().map_err(|e| e.to_string())?;
    let lambda = load_lambda(&file, &args.lambda)?;
    if args.epsilon != 1 && args.epsilon != -1 {
        return Err("epsilon must be +1 or -1".into());
    }
    let mut log = CheckLog::new();

    log.note(
        "symmetrizer",
        format!("d = {:?}", matrix.symmetrizer()),
        json!(matrix.symmetrizer()),
    );

    match matrix.acyclicity() {
        Acyclicity::Acyclic { order } => {
            let shown: Vec<usize> = order.iter().map(|i| i + 1).collect();
            log.record("acyclicity", true, format!("ordering {shown:?}"), json!(shown));
        }
        Acyclicity::Cyclic { cycle } => {
            let shown: Vec<usize> = cycle.iter().map(|i| i + 1).collect();
            log.record("acyclicity", false, format!("directed cycle {shown:?}"), json!(shown));
        }
    }

    let Some(lambda) = lambda else {
        log.note("poisson", "no Lambda supplied; Poisson checks skipped".to_string(), Value::Null);
        emit(args.json, &verify_report(&log), &log.human);
        return Ok(log.all_passed);
    };

    let pair = match CompatiblePair::check(matrix.clone(), lambda.clone()) {
        Ok(pair) => {
            log.record(
                "compatibility",
                true,
                format!("B*Lambda diagonal, d = {:?}", pair.d()),
                json!(pair.d()),
            );
            Some(pair)
        }
        Err(refusal) => {
            log.record("compatibility", false, refusal.to_string(), Value::Null);
            None
        }
    };

    let report = genericity_check(&matrix, &lambda);
    let literal = report.literal.as_ref().map(|rows| {
        rows.iter()
            .map(|r| format!("row {}: {}", r.index + 1, r.value))
            .collect::<Vec<_>>()
    });
    let semantic_pass = report.semantic_passes();
    log.record(
        "genericity-semantic",
        semantic_pass,
        report
            .semantic
            .iter()
            .map(|w| format!("row {}: mu=({},{})", w.index + 1, w.mu_plus, w.mu_minus))
            .collect::<Vec<_>>()
            .join("; "),
        json!(report
            .semantic
            .iter()
            .map(|w| json!({"index": w.index + 1, "mu_plus": w.mu_plus, "mu_minus": w.mu_minus}))
            .collect::<Vec<_>>()),
    );
    match literal {
        Some(rows) => log.note(
            "genericity-literal",
            format!(
                "{}; disagreements with semantic check: {:?}",
                rows.join("; "),
                report.disagreements.iter().map(|i| i + 1).collect::<Vec<_>>()
            ),
            json!(rows),
        ),
        None => log.note(
            "genericity-literal",
            "B is singular or not square; literal sum unavailable".to_string(),
            Value::Null,
        ),
    }

    let seed = Seed::initial(matrix.clone());
    let mut certificate_json = Value::Null;
    match descent_certificate(&seed, &lambda) {
        Ok(cert) => match verify_descent(&cert) {
            Ok(()) => {
                let chains = io::render_descent_chains(&cert);
                certificate_json =
                    serde_json::from_str(&io::certificate_to_json(&cert, "classical"))
                        .expect("certificate JSON parses");
                log.record("descent-classical", true, chains.join(" | "), json!(chains));
            }
            Err(e) => log.record("descent-classical", false, e, Value::Null),
        },
        Err(e) => log.record("descent-classical", false, e.to_string(), Value::Null),
    }

    let mut quantum_certificate_json = Value::Null;
    match QuantumSeed::initial(matrix.clone(), lambda.clone()) {
        Ok(qseed) => {
            match quantum_descent_certificate(&qseed) {
                Ok(cert) => match verify_descent(&cert) {
                    Ok(()) => {
                        let chains = io::render_descent_chains(&cert);
                        quantum_certificate_json =
                            serde_json::from_str(&io::certificate_to_json(&cert, "quantum"))
                                .expect("certificate JSON parses");
                        log.record("descent-quantum", true, chains.join(" | "), json!(chains));
                    }
                    Err(e) => log.record("descent-quantum", false, e, Value::Null),
                },
                Err(e) => log.record("descent-quantum", false, e.to_string(), Value::Null),
            }

            // Quasi-commutation must track pair mutation along a short walk.
            if let Some(pair0) = &pair {
                let mut q = qseed;
                let mut p = pair0.clone();
                let mut ok = true;
                let mut walked = Vec::new();
                for k in (0..matrix.m()).chain(0..matrix.m().min(2)) {
                    q = match q.mutate(k) {
                        Ok(next) => next,
                        Err(e) => {
                            log.record(
                                "quasi-commutation",
                                false,
                                format!("quantum mutation at {} failed: {e}", k + 1),
                                Value::Null,
                            );
                            ok = false;
                            break;
                        }
                    };
                    p = p.mutate(k, args.epsilon);
                    walked.push(k + 1);
                    match quasi_commutation_matrix(q.variables()) {
                        Ok(qc) => {
                            if &qc != p.lambda() {
                                log.record(
                                    "quasi-commutation",
                                    false,
                                    format!("mismatch after walk {walked:?}"),
                                    Value::Null,
                                );
                                ok = false;
                                break;
                            }
                        }
                        Err(e) => {
                            log.record("quasi-commutation", false, e.to_string(), Value::Null);
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    log.record(
                        "quasi-commutation",
                        true,
                        format!("matches pair mutation along walk {walked:?}"),
                        json!(walked),
                    );
                }
            }
        }
        Err(e) => log.note(
            "quantum",
            format!("quantum seed unavailable: {e}"),
            Value::Null,
        ),
    }

    // Bivector rank sampling.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.rng_seed);
    use rand::SeedableRng;
    let full = lambda.rank() == lambda.n();
    let samples = 25;
    let mut min_rank = usize::MAX;
    for _ in 0..samples {
        let p = sample::random_generic_point(&mut rng, lambda.n());
        min_rank = min_rank.min(bivector_rank_at(&lambda, &p));
    }
    if full {
        log.record(
            "bivector-rank",
            min_rank == lambda.n(),
            format!("rank {} at {} generic points (n = {})", min_rank, samples, lambda.n()),
            json!({"min_rank": min_rank, "samples": samples}),
        );
    } else {
        log.note(
            "bivector-rank",
            format!("Lambda has rank {} < {}; sampled min rank {}", lambda.rank(), lambda.n(), min_rank),
            json!({"min_rank": min_rank, "samples": samples}),
        );
    }

    match (&args.index, &args.point) {
        (Some(index), Some(point_text)) => {
            let point = io::parse_point(point_text).map_err(|e| e.to_string())?;
            if *index == 0 || *index > matrix.m() {
                return Err(format!("index {} outside 1..={}", index, matrix.m()));
            }
            match boundary_nondegeneracy(&seed, &lambda, index - 1, &point) {
                Ok(verdict) => log.record(
                    "boundary-nondegeneracy",
                    verdict.nonzero,
                    format!("{{x_{index}, y_{index}}}(p) = {}", verdict.value),
                    json!({"value": verdict.value.to_string(), "nonzero": verdict.nonzero}),
                ),
                Err(e) => log.record("boundary-nondegeneracy", false, e.to_string(), Value::Null),
            }
        }
        (None, None) => {}
        _ => return Err("--index and --point must be given together".into()),
    }

    let mut report = verify_report(&log);
    report["certificates"] = json!({
        "classical": certificate_json,
        "quantum": quantum_certificate_json,
    });
    emit(args.json, &report, &log.human);
    Ok(log.all_passed)
}

fn verify_report(log: &CheckLog) -> Value {
    json!({
        "schema": io::SCHEMA,
        "command": "verify",
        "all_passed": log.all_passed,
        "checks": log.checks,
    })
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<bool, String> {
    let file = load_seed_file(&args.seed_file)?;
    let matrix = file.exchange_matrix().map_err(|e| e.to_string())?;
    let class = enumerate_mutation_class(&Seed::initial(matrix), args.max_seeds);
    if let Some(path) = &args.dot {
        fs::write(path, io::graph_to_dot(&class)).map_err(|e| format!("cannot write {path}: {e}"))?;
    }
    if let Some(path) = &args.graph_json {
        fs::write(path, io::graph_to_json(&class))
            .map_err(|e| format!("cannot write {path}: {e}"))?;
    }
    let mut human = vec![format!(
        "{} seeds, {} cluster variables{}",
        class.seeds.len(),
        class.cluster_variables.len(),
        if class.truncated { " (truncated)" } else { "" }
    )];
    if class.is_cycle() {
        human.push(format!("exchange graph is the cycle C{}", class.seeds.len()));
    }
    let graph: Value = serde_json::from_str(&io::graph_to_json(&class)).expect("graph JSON parses");
    let report = json!({
        "schema": io::SCHEMA,
        "command": "enumerate",
        "graph": graph,
    });
    emit(args.json, &report, &human);
    Ok(true)
}

fn cmd_bracket(args: BracketArgs) -> Result<bool, String> {
    let entries = io::parse_int_matrix(&args.lambda).map_err(|e| e.to_string())?;
    let lambda = PoissonMatrix::new(entries).map_err(|e| e.to_string())?;
    let n = lambda.n();
    let f = LaurentPolynomial::parse(&args.f, n).map_err(|e| e.to_string())?;
    let g = LaurentPolynomial::parse(&args.g, n).map_err(|e| e.to_string())?;
    let result = bracket(&f, &g, &lambda).map_err(|e| e.to_string())?;
    let human = vec![format!("{{f, g}} = {}", result.render())];
    let report = json!({
        "schema": io::SCHEMA,
        "command": "bracket",
        "result": result.render(),
    });
    emit(args.json, &report, &human);
    Ok(true)
}

fn cmd_extract(args: ExtractArgs) -> Result<bool, String> {
    let entries = io::parse_int_matrix(&args.lambda).map_err(|e| e.to_string())?;
    let lambda = PoissonMatrix::new(entries).map_err(|e| e.to_string())?;
    let n = lambda.n();
    let (trace_json, result, steps): (String, String, usize) = if args.quantum {
        let f = parse_torus_element(&args.f, &lambda)?;
        let trace = quantum_extract_monomial(&f).map_err(|e| e.to_string())?;
        verify_quantum_extraction(&trace)?;
        let monomial =
            LaurentPolynomial::monomial(n, trace.result.clone(), num_rational::BigRational::from_integer(1.into()));
        (
            clusterkit::io::quantum_extraction_to_json(&trace),
            monomial.render(),
            trace.steps.len(),
        )
    } else {
        let f = LaurentPolynomial::parse(&args.f, n).map_err(|e| e.to_string())?;
        let trace = extract_monomial(&f, &lambda).map_err(|e| e.to_string())?;
        verify_extraction(&trace, &lambda)?;
        let monomial =
            LaurentPolynomial::monomial(n, trace.result.clone(), num_rational::BigRational::from_integer(1.into()));
        (
            clusterkit::io::extraction_to_json(&trace, &lambda),
            monomial.render(),
            trace.steps.len(),
        )
    };
    if let Some(path) = &args.out {
        fs::write(path, &trace_json).map_err(|e| format!("cannot write {path}: {e}"))?;
    }
    let human = vec![format!("monomial: {result} ({steps} steps, checker passed)")];
    let report = json!({
        "schema": io::SCHEMA,
        "command": "extract-monomial",
        "monomial": result,
        "steps": steps,
        "trace": serde_json::from_str::<Value>(&trace_json).expect("trace JSON parses"),
    });
    emit(args.json, &report, &human);
    Ok(true)
}

fn cmd_certificate(args: CertificateArgs, quantum: bool) -> Result<bool, String> {
    let flavor = if quantum { "quantum" } else { "classical" };
    if let Some(path) = &args.check {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        let (cert, file_flavor) = io::certificate_from_json(&text).map_err(|e| e.to_string())?;
        if file_flavor != flavor {
            return Err(format!("certificate is {file_flavor}, expected {flavor}"));
        }
        return match verify_descent(&cert) {
            Ok(()) => {
                let human = vec![format!("certificate OK: {} chains verified", cert.steps.len())];
                let report = json!({
                    "schema": io::SCHEMA,
                    "command": format!("{flavor}-certificate-check"),
                    "verified": true,
                    "chains": io::render_descent_chains(&cert),
                });
                emit(args.json, &report, &human);
                Ok(true)
            }
            Err(e) => {
                let human = vec![format!("certificate INVALID: {e}")];
                let report = json!({
                    "schema": io::SCHEMA,
                    "command": format!("{flavor}-certificate-check"),
                    "verified": false,
                    "reason": e,
                });
                emit(args.json, &report, &human);
                Ok(false)
            }
        };
    }

    let path = args
        .seed_file
        .as_ref()
        .ok_or("either --seed-file or --check is required")?;
    let file = load_seed_file(path)?;
    let matrix = file.exchange_matrix().map_err(|e| e.to_string())?;
    let lambda = load_lambda(&file, &args.lambda)?
        .ok_or("certificate generation needs Lambda in the seed file or --lambda")?;
    let cert = if quantum {
        let qseed = QuantumSeed::initial(matrix, lambda).map_err(|e| e.to_string())?;
        quantum_descent_certificate(&qseed).map_err(|e| e.to_string())?
    } else {
        descent_certificate(&Seed::initial(matrix), &lambda).map_err(|e| e.to_string())?
    };
    verify_descent(&cert)?;
    let json_text = io::certificate_to_json(&cert, flavor);
    if let Some(out) = &args.out {
        fs::write(out, &json_text).map_err(|e| format!("cannot write {out}: {e}"))?;
    }
    let chains = io::render_descent_chains(&cert);
    let mut human = vec![format!("{flavor} descent certificate: {} chains", chains.len())];
    human.extend(chains.iter().cloned());
    let report = json!({
        "schema": io::SCHEMA,
        "command": format!("{flavor}-certificate"),
        "certificate": serde_json::from_str::<Value>(&json_text).expect("certificate JSON parses"),
        "chains": chains,
    });
    emit(args.json, &report, &human);
    Ok(true)
}
