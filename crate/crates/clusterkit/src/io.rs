//! File formats: seed files, descent certificates, extraction traces, and
//! exchange-graph artifacts. Everything is versioned JSON with a schema
//! tag; polynomials are rendered in the text grammar, and every writer is
//! deterministic so identical inputs produce byte-identical output.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::exponent::Exponent;
use crate::laurent::LaurentPolynomial;
use crate::poisson::{
    DescentCertificate, DescentStep, ExchangeWeights, ExtractionStep, ExtractionTrace,
    PoissonMatrix,
};
use crate::quantum::{
    parse_torus_element, QuantumExtractionStep, QuantumExtractionTrace, TorusElement,
};
use crate::seed::{ExchangeMatrix, MutationClass, Seed};

pub const SCHEMA: &str = "clusterkit/1";

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for FormatError {}

fn err<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

/// On-disk seed description. `Lambda` and `d` extend the classical format
/// to quantum seeds; `names` are display labels only.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SeedFile {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub names: Option<Vec<String>>,
    #[serde(rename = "Lambda", skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<Vec<i64>>,
}

impl SeedFile {
    pub fn parse(text: &str) -> Result<SeedFile, FormatError> {
        let file: SeedFile =
            serde_json::from_str(text).map_err(|e| FormatError(format!("bad seed file: {e}")))?;
        if file.b.len() != file.m || file.b.iter().any(|r| r.len() != file.n) {
            return err(format!("B must be {} x {}", file.m, file.n));
        }
        if let Some(names) = &file.names {
            if names.len() != file.n {
                return err(format!("expected {} names", file.n));
            }
        }
        Ok(file)
    }

    pub fn from_matrix(matrix: &ExchangeMatrix) -> SeedFile {
        SeedFile {
            m: matrix.m(),
            n: matrix.n(),
            b: matrix.entries().to_vec(),
            names: None,
            lambda: None,
            d: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("seed files serialize")
    }

    pub fn exchange_matrix(&self) -> Result<ExchangeMatrix, FormatError> {
        ExchangeMatrix::new(self.b.clone()).map_err(|e| FormatError(e.to_string()))
    }

    pub fn poisson_matrix(&self) -> Result<Option<PoissonMatrix>, FormatError> {
        match &self.lambda {
            None => Ok(None),
            Some(entries) => {
                let lambda =
                    PoissonMatrix::new(entries.clone()).map_err(|e| FormatError(e.to_string()))?;
                if lambda.n() != self.n {
                    return err(format!("Lambda must be {0} x {0}", self.n));
                }
                Ok(Some(lambda))
            }
        }
    }

    /// Display names, defaulting to `x1..xn`.
    pub fn variable_names(&self) -> Vec<String> {
        match &self.names {
            Some(names) => names.clone(),
            None => (1..=self.n).map(|i| format!("x{i}")).collect(),
        }
    }
}

/// Parse an inline integer matrix argument like `[[0,1],[-1,0]]`.
pub fn parse_int_matrix(text: &str) -> Result<Vec<Vec<i64>>, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError(format!("bad matrix: {e}")))
}

/// Parse a comma-separated rational point like `0,-1,3/2`.
pub fn parse_point(text: &str) -> Result<Vec<BigRational>, FormatError> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            let (numer, denom) = match part.split_once('/') {
                Some((a, b)) => (a, b),
                None => (part, "1"),
            };
            let n: num_bigint::BigInt = numer
                .parse()
                .map_err(|_| FormatError(format!("bad coordinate {part:?}")))?;
            let d: num_bigint::BigInt = denom
                .parse()
                .map_err(|_| FormatError(format!("bad coordinate {part:?}")))?;
            if d == num_bigint::BigInt::from(0) {
                return err(format!("zero denominator in {part:?}"));
            }
            Ok(BigRational::new(n, d))
        })
        .collect()
}

pub fn render_point(point: &[BigRational]) -> String {
    point
        .iter()
        .map(|c| {
            if c.denom().is_one() {
                c.numer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn render_monomial(n: usize, e: &Exponent) -> String {
    LaurentPolynomial::monomial(n, e.clone(), BigRational::one()).render()
}

// ---------------------------------------------------------------------
// Descent certificates
// ---------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: String,
    pub kind: String,
    /// `"classical"` or `"quantum"`.
    pub flavor: String,
    /// 1-based permutation to the acyclic ordered form.
    pub permutation: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(rename = "Lambda")]
    pub lambda: Vec<Vec<i64>>,
    pub steps: Vec<CertificateStepFile>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertificateStepFile {
    /// 1-based index in the ordered form.
    pub index: usize,
    pub mu_plus: i64,
    pub mu_minus: i64,
    /// `m_i^-` rendered in the text grammar.
    pub minus_monomial: String,
    /// 1-based support indices, strictly below `index`.
    pub support: Vec<usize>,
}

pub fn certificate_to_file(cert: &DescentCertificate, flavor: &str) -> CertificateFile {
    let n = cert.matrix.n();
    CertificateFile {
        schema: SCHEMA.to_string(),
        kind: "descent-certificate".to_string(),
        flavor: flavor.to_string(),
        permutation: cert.permutation.iter().map(|i| i + 1).collect(),
        b: cert.matrix.entries().to_vec(),
        lambda: cert.lambda.entries().to_vec(),
        steps: cert
            .steps
            .iter()
            .map(|s| CertificateStepFile {
                index: s.index + 1,
                mu_plus: s.weights.mu_plus,
                mu_minus: s.weights.mu_minus,
                minus_monomial: render_monomial(n, &s.minus_exponent),
                support: s.support.iter().map(|h| h + 1).collect(),
            })
            .collect(),
    }
}

pub fn certificate_to_json(cert: &DescentCertificate, flavor: &str) -> String {
    serde_json::to_string_pretty(&certificate_to_file(cert, flavor)).expect("certificates serialize")
}

pub fn certificate_from_json(text: &str) -> Result<(DescentCertificate, String), FormatError> {
    let file: CertificateFile = serde_json::from_str(text)
        .map_err(|e| FormatError(format!("bad certificate file: {e}")))?;
    if file.schema != SCHEMA {
        return err(format!("unknown schema {:?}", file.schema));
    }
    if file.kind != "descent-certificate" {
        return err(format!("expected a descent certificate, got {:?}", file.kind));
    }
    let matrix = ExchangeMatrix::new(file.b.clone()).map_err(|e| FormatError(e.to_string()))?;
    let lambda = PoissonMatrix::new(file.lambda.clone()).map_err(|e| FormatError(e.to_string()))?;
    let n = matrix.n();
    let mut steps = Vec::with_capacity(file.steps.len());
    for step in &file.steps {
        if step.index == 0 || step.index > n {
            return err(format!("step index {} out of range", step.index));
        }
        let poly = LaurentPolynomial::parse(&step.minus_monomial, n)
            .map_err(|e| FormatError(format!("bad minus monomial: {e}")))?;
        if poly.num_terms() != 1 || !poly.leading().unwrap().1.is_one() {
            return err(format!("minus monomial {:?} is not a unit monomial", step.minus_monomial));
        }
        let exponent = poly.leading().unwrap().0.clone();
        if step.support.iter().any(|&h| h == 0 || h > n) {
            return err("support index out of range".to_string());
        }
        steps.push(DescentStep {
            index: step.index - 1,
            weights: ExchangeWeights {
                index: step.index - 1,
                mu_plus: step.mu_plus,
                mu_minus: step.mu_minus,
            },
            minus_exponent: exponent,
            support: step.support.iter().map(|&h| h - 1).collect(),
        });
    }
    let permutation: Vec<usize> = file.permutation.iter().map(|&i| i - 1).collect();
    Ok((
        DescentCertificate { permutation, matrix, lambda, steps },
        file.flavor,
    ))
}

/// Human-readable chains: each start index descends through the support
/// of its `m^-` to the base case `1 in I`.
pub fn render_descent_chains(cert: &DescentCertificate) -> Vec<String> {
    let n = cert.matrix.n();
    cert.steps
        .iter()
        .map(|step| {
            let mut line = format!("x{} in I", step.index + 1);
            let mut current = step;
            loop {
                let monomial = render_monomial(n, &current.minus_exponent);
                if current.support.is_empty() {
                    line.push_str(" => m^- = 1 => 1 in I");
                    break;
                }
                let h = *current.support.last().expect("nonempty support");
                line.push_str(&format!(" => m^- = {monomial} in I => x{} in I", h + 1));
                current = &cert.steps[h];
            }
            line
        })
        .collect()
}

// ---------------------------------------------------------------------
// Extraction traces
// ---------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceFile {
    pub schema: String,
    pub kind: String,
    pub flavor: String,
    #[serde(rename = "Lambda")]
    pub lambda: Vec<Vec<i64>>,
    pub original: String,
    pub shift: Vec<i64>,
    pub steps: Vec<TraceStepFile>,
    pub result: Vec<i64>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceStepFile {
    /// 1-based generator index.
    pub index: usize,
    /// Classical scalar `c` (rational) or quantum `t`-exponent, as text.
    pub scalar: String,
    pub input: String,
    pub output: String,
}

pub fn extraction_to_json(trace: &ExtractionTrace, lambda: &PoissonMatrix) -> String {
    let file = TraceFile {
        schema: SCHEMA.to_string(),
        kind: "extraction-trace".to_string(),
        flavor: "classical".to_string(),
        lambda: lambda.entries().to_vec(),
        original: trace.original.render(),
        shift: trace.shift.entries().to_vec(),
        steps: trace
            .steps
            .iter()
            .map(|s| TraceStepFile {
                index: s.index + 1,
                scalar: rational_to_string(&s.scalar),
                input: s.input.render(),
                output: s.output.render(),
            })
            .collect(),
        result: trace.result.entries().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("traces serialize")
}

pub fn extraction_from_json(
    text: &str,
) -> Result<(ExtractionTrace, PoissonMatrix), FormatError> {
    let file: TraceFile =
        serde_json::from_str(text).map_err(|e| FormatError(format!("bad trace file: {e}")))?;
    if file.schema != SCHEMA || file.kind != "extraction-trace" {
        return err("not a clusterkit extraction trace");
    }
    if file.flavor != "classical" {
        return err("expected a classical trace");
    }
    let lambda = PoissonMatrix::new(file.lambda.clone()).map_err(|e| FormatError(e.to_string()))?;
    let n = lambda.n();
    let parse = |s: &str| {
        LaurentPolynomial::parse(s, n).map_err(|e| FormatError(format!("bad polynomial: {e}")))
    };
    let steps = file
        .steps
        .iter()
        .map(|s| {
            Ok(ExtractionStep {
                index: s.index.checked_sub(1).ok_or(FormatError("index 0".into()))?,
                scalar: parse_rational(&s.scalar)?,
                input: parse(&s.input)?,
                output: parse(&s.output)?,
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok((
        ExtractionTrace {
            original: parse(&file.original)?,
            shift: Exponent::new(file.shift.clone()),
            steps,
            result: Exponent::new(file.result.clone()),
        },
        lambda,
    ))
}

pub fn quantum_extraction_to_json(trace: &QuantumExtractionTrace) -> String {
    let lambda = trace.original.lambda();
    let file = TraceFile {
        schema: SCHEMA.to_string(),
        kind: "extraction-trace".to_string(),
        flavor: "quantum".to_string(),
        lambda: lambda.entries().to_vec(),
        original: trace.original.render(),
        shift: trace.shift.entries().to_vec(),
        steps: trace
            .steps
            .iter()
            .map(|s| TraceStepFile {
                index: s.index + 1,
                scalar: s.t_exponent.to_string(),
                input: s.input.render(),
                output: s.output.render(),
            })
            .collect(),
        result: trace.result.entries().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("traces serialize")
}

pub fn quantum_extraction_from_json(
    text: &str,
) -> Result<QuantumExtractionTrace, FormatError> {
    let file: TraceFile =
        serde_json::from_str(text).map_err(|e| FormatError(format!("bad trace file: {e}")))?;
    if file.schema != SCHEMA || file.kind != "extraction-trace" {
        return err("not a clusterkit extraction trace");
    }
    if file.flavor != "quantum" {
        return err("expected a quantum trace");
    }
    let lambda = PoissonMatrix::new(file.lambda.clone()).map_err(|e| FormatError(e.to_string()))?;
    let parse = |s: &str| -> Result<TorusElement, FormatError> {
        parse_torus_element(s, &lambda).map_err(FormatError)
    };
    let steps = file
        .steps
        .iter()
        .map(|s| {
            Ok(QuantumExtractionStep {
                index: s.index.checked_sub(1).ok_or(FormatError("index 0".into()))?,
                t_exponent: s
                    .scalar
                    .parse()
                    .map_err(|_| FormatError(format!("bad t-exponent {:?}", s.scalar)))?,
                input: parse(&s.input)?,
                output: parse(&s.output)?,
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(QuantumExtractionTrace {
        original: parse(&file.original)?,
        shift: Exponent::new(file.shift.clone()),
        steps,
        result: Exponent::new(file.result.clone()),
    })
}

fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, FormatError> {
    let (numer, denom) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt =
        numer.parse().map_err(|_| FormatError(format!("bad rational {s:?}")))?;
    let d: num_bigint::BigInt =
        denom.parse().map_err(|_| FormatError(format!("bad rational {s:?}")))?;
    Ok(BigRational::new(n, d))
}

// ---------------------------------------------------------------------
// Exchange graphs
// ---------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub schema: String,
    pub kind: String,
    pub seed_count: usize,
    pub variable_count: usize,
    pub truncated: bool,
    pub seeds: Vec<GraphSeedFile>,
    /// Undirected adjacency, 0-based node ids.
    pub edges: Vec<(usize, usize)>,
    /// `(from, to, direction)` with 1-based mutation direction; the same
    /// undirected edge can carry several labels, one per endpoint ordering.
    pub mutations: Vec<(usize, usize, usize)>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GraphSeedFile {
    pub variables: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
}

pub fn graph_to_file(class: &MutationClass) -> GraphFile {
    GraphFile {
        schema: SCHEMA.to_string(),
        kind: "exchange-graph".to_string(),
        seed_count: class.seeds.len(),
        variable_count: class.cluster_variables.len(),
        truncated: class.truncated,
        seeds: class
            .seeds
            .iter()
            .map(|s| GraphSeedFile {
                variables: s.variables().iter().map(LaurentPolynomial::render).collect(),
                b: s.matrix().entries().to_vec(),
            })
            .collect(),
        edges: class.plain_edges().into_iter().collect(),
        mutations: class.edges.iter().map(|&(a, b, k)| (a, b, k + 1)).collect(),
    }
}

pub fn graph_to_json(class: &MutationClass) -> String {
    serde_json::to_string_pretty(&graph_to_file(class)).expect("graphs serialize")
}

pub fn graph_to_dot(class: &MutationClass) -> String {
    let mut out = String::from("graph exchange {\n");
    for (id, seed) in class.seeds.iter().enumerate() {
        let label = seed.variables()[..seed.m()]
            .iter()
            .map(LaurentPolynomial::render)
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("  n{id} [label=\"{{{label}}}\"];\n"));
    }
    for (a, b) in class.plain_edges() {
        out.push_str(&format!("  n{a} -- n{b};\n"));
    }
    out.push_str("}\n");
    out
}

/// Render a seed for reports: one `name = polynomial` line per variable.
pub fn render_seed_variables(seed: &Seed, names: &[String]) -> Vec<String> {
    seed.variables()
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{} = {}", names[i], v.render()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::{descent_certificate, verify_descent, extract_monomial, verify_extraction};
    use crate::quantum::{quantum_extract_monomial, verify_quantum_extraction, QuantumSeed};

    fn a2_file() -> SeedFile {
        SeedFile::parse(
            r#"{"m":2,"n":2,"B":[[0,1],[-1,0]],"names":["x1","x2"],"Lambda":[[0,-1],[1,0]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn seed_file_roundtrip() {
        let file = a2_file();
        let again = SeedFile::parse(&file.to_json()).unwrap();
        assert_eq!(file, again);
        assert_eq!(file.exchange_matrix().unwrap().m(), 2);
        assert!(file.poisson_matrix().unwrap().is_some());
    }

    #[test]
    fn seed_file_rejects_shape_mismatch() {
        assert!(SeedFile::parse(r#"{"m":2,"n":2,"B":[[0,1]]}"#).is_err());
    }

    #[test]
    fn certificate_roundtrip_and_check() {
        let file = a2_file();
        let seed = Seed::initial(file.exchange_matrix().unwrap());
        let lambda = file.poisson_matrix().unwrap().unwrap();
        let cert = descent_certificate(&seed, &lambda).unwrap();
        let json = certificate_to_json(&cert, "classical");
        let (parsed, flavor) = certificate_from_json(&json).unwrap();
        assert_eq!(flavor, "classical");
        assert_eq!(parsed, cert);
        verify_descent(&parsed).unwrap();
        let chains = render_descent_chains(&cert);
        assert_eq!(chains.len(), 2);
        assert!(chains[1].contains("x1 in I"));
    }

    #[test]
    fn extraction_trace_roundtrip() {
        let file = a2_file();
        let lambda = file.poisson_matrix().unwrap().unwrap();
        let f = LaurentPolynomial::parse("x1^-1 + x2 - 2*x1*x2", 2).unwrap();
        let trace = extract_monomial(&f, &lambda).unwrap();
        let json = extraction_to_json(&trace, &lambda);
        let (parsed, parsed_lambda) = extraction_from_json(&json).unwrap();
        assert_eq!(parsed, trace);
        verify_extraction(&parsed, &parsed_lambda).unwrap();
    }

    #[test]
    fn quantum_trace_roundtrip() {
        let file = a2_file();
        let seed = QuantumSeed::initial(
            file.exchange_matrix().unwrap(),
            file.poisson_matrix().unwrap().unwrap(),
        )
        .unwrap();
        let f = seed.variable(0).mul(seed.variable(1)).add(seed.variable(1));
        let trace = quantum_extract_monomial(&f).unwrap();
        let json = quantum_extraction_to_json(&trace);
        let parsed = quantum_extraction_from_json(&json).unwrap();
        assert_eq!(parsed, trace);
        verify_quantum_extraction(&parsed).unwrap();
    }

    #[test]
    fn graph_artifacts() {
        let file = a2_file();
        let class = crate::seed::enumerate_mutation_class(
            &Seed::initial(file.exchange_matrix().unwrap()),
            100,
        );
        let json = graph_to_json(&class);
        let parsed: GraphFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.seed_count, 5);
        assert_eq!(parsed.edges.len(), 5);
        let dot = graph_to_dot(&class);
        assert!(dot.starts_with("graph exchange {"));
        assert_eq!(dot.matches(" -- ").count(), 5);
    }

    #[test]
    fn point_parsing() {
        let p = parse_point("0,-1,3/2").unwrap();
        assert_eq!(render_point(&p), "0,-1,3/2");
        assert!(parse_point("1/0").is_err());
    }
}
