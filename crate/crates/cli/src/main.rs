use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use euclid_core::certify::{
    certify_biquadratic, certify_multi, field_from_json, search_biquadratic, Certificate,
    CertifyConfig, MultiInput, Verdict,
};
use euclid_core::charfield::{build_basis, multiquadratic_field, AbelianFieldSpec, FieldSpecJson};
use euclid_core::kuroda::class_number_biquadratic;
use euclid_core::ntheory::{lcm, SieveConfig, DEFAULT_SEGMENT_SIZE};
use euclid_core::quadfield::{fundamental_unit, QuadFieldData};
use euclid_core::residues::{
    admissible_residues_multi, admissible_residues_single, AdmissibleResidue,
};
use euclid_core::sieve::{count_j_grid, parse_ratio, write_csv, CountOptions, SieveWindow};
use euclid_core::{Error, Result};

const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_ERROR: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Euclidean ideal class certificates for abelian number fields.
///
/// Every command prints JSON to stdout (or to --out). Exit codes: 0 success
/// or CERTIFIED, 2 HYPOTHESIS_FAILED, 3 errors and OUT_OF_RANGE, 64 usage.
#[derive(Debug, Parser)]
#[command(name = "euclid", version)]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads [default: EUCLID_THREADS, else all cores].
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Sieve segment length in odd candidates.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_SEGMENT_SIZE)]
    segment_size: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a certificate.
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Certify every biquadratic triple up to a bound and summarize.
    Search {
        /// Largest prime considered (at least 5).
        #[arg(long)]
        bound: u64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// List admissible residues for fields described in a JSON file.
    Residues {
        /// JSON file: {"f": optional modulus, "fields": [{"k": FIELD, "h": FIELD}, ...]}
        /// where FIELD is {"radicands": [...]} or {"modulus": m, "characters": [[...], ...]}.
        #[arg(long, value_name = "PATH")]
        field: PathBuf,
    },
    /// Count primes p = a (mod f) with (p-1)/2 prime or a windowed semiprime.
    Sieve {
        /// Residue class of the primes counted.
        #[arg(long)]
        a: u64,
        /// Modulus of the residue class.
        #[arg(long)]
        f: u64,
        /// Largest X counted.
        #[arg(long)]
        xmax: u64,
        /// Extra X values below xmax, comma separated.
        #[arg(long, value_delimiter = ',', value_name = "X,...")]
        grid: Vec<u64>,
        #[command(flatten)]
        window: WindowArgs,
        /// Include every accepted prime with its factorization.
        #[arg(long)]
        keep_samples: bool,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Class numbers and fundamental unit of Q(sqrt d).
    Classnumber {
        /// Squarefree radicand d > 1.
        #[arg(long)]
        d: u64,
    },
    /// Fundamental unit of Q(sqrt d).
    Unit {
        /// Squarefree radicand d > 1.
        #[arg(long)]
        d: u64,
    },
    /// Class number of Q(sqrt q, sqrt rs) from its quadratic subfields.
    Kuroda {
        /// Prime q (the field is Q(sqrt q, sqrt rs)).
        #[arg(long)]
        q: u64,
        /// Prime r.
        #[arg(long)]
        r: u64,
        /// Prime s.
        #[arg(long)]
        s: u64,
    },
}

#[derive(Debug, Subcommand)]
enum CertifyCommand {
    /// Q(sqrt q, sqrt rs) for distinct odd primes q, r, s.
    Biquadratic {
        /// Prime q (the field is Q(sqrt q, sqrt rs)).
        #[arg(long)]
        q: u64,
        /// Prime r.
        #[arg(long)]
        r: u64,
        /// Prime s.
        #[arg(long)]
        s: u64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Several fields of which at least one is claimed Euclidean.
    Multi {
        /// Which family the input file describes.
        #[arg(long, value_enum)]
        kind: MultiKind,
        /// JSON file: {"radicands": [d1, d2, d3]} for three-quadratic, or
        /// {"fields": [CUBIC, CUBIC]} for two-cubic.
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MultiKind {
    ThreeQuadratic,
    TwoCubic,
}

#[derive(Debug, Args)]
struct WindowArgs {
    /// Lower window exponent.
    #[arg(long, default_value = "7/25")]
    b: String,
    /// Upper window exponent.
    #[arg(long, default_value = "9/20")]
    c: String,
    /// Primes are counted in (X^(1-epsilon), X].
    #[arg(long, default_value = "1")]
    epsilon: String,
}

impl WindowArgs {
    fn window(&self) -> Result<SieveWindow> {
        SieveWindow::new(
            parse_ratio(&self.b)?,
            parse_ratio(&self.c)?,
            parse_ratio(&self.epsilon)?,
        )
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// X grid for the sieve and growth tables.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "100000,1000000",
        value_name = "X,..."
    )]
    xs: Vec<u64>,
    /// Also evaluate X = 10^7.
    #[arg(long)]
    large: bool,
    /// Skip the unit growth statistics.
    #[arg(long)]
    no_growth: bool,
    /// Number of accepted primes kept for audits.
    #[arg(long, default_value_t = 256)]
    sample_cap: usize,
    #[command(flatten)]
    window: WindowArgs,
}

impl RunArgs {
    fn config(&self, sieve: SieveConfig) -> Result<CertifyConfig> {
        let mut xs = self.xs.clone();
        if self.large {
            xs.push(10_000_000);
        }
        if xs.iter().any(|&x| x < 2) {
            return Err(Error::Argument("X values must be at least 2".into()));
        }
        xs.sort_unstable();
        xs.dedup();
        Ok(CertifyConfig {
            window: self.window.window()?,
            xs,
            sieve,
            growth: !self.no_growth,
            sample_cap: self.sample_cap,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FieldRef {
    Radicands { radicands: Vec<i64> },
    Characters(FieldSpecJson),
}

impl FieldRef {
    fn conductor_bound(&self) -> Result<u64> {
        match self {
            FieldRef::Radicands { radicands } => {
                let f = radicands
                    .iter()
                    .map(|&d| euclid_core::quadfield::conductor_quadratic(d))
                    .collect::<Result<Vec<_>>>()?;
                Ok(f.into_iter().fold(1, lcm))
            }
            FieldRef::Characters(json) => Ok(json.modulus.max(1)),
        }
    }

    fn resolve(&self, f: u64) -> Result<AbelianFieldSpec> {
        let basis = build_basis(f)?;
        match self {
            FieldRef::Radicands { radicands } => multiquadratic_field(radicands, &basis),
            FieldRef::Characters(json) => field_from_json(json, &basis),
        }
    }
}

#[derive(Debug, Deserialize)]
struct FieldPair {
    k: FieldRef,
    h: FieldRef,
}

#[derive(Debug, Deserialize)]
struct ResidueInput {
    #[serde(default)]
    f: Option<u64>,
    fields: Vec<FieldPair>,
}

#[derive(Debug, Serialize)]
struct ResidueOutput {
    f: u64,
    mode: &'static str,
    count: usize,
    smallest: Option<u64>,
    residues: Vec<AdmissibleResidue>,
}

#[derive(Debug, Serialize)]
struct ErrorOutput<'a> {
    kind: &'a str,
    message: String,
}

enum Output {
    Json(String),
    Text(String),
}

struct Outcome {
    output: Output,
    code: u8,
}

impl Outcome {
    fn json<T: Serialize>(value: &T) -> Result<Self> {
        Ok(Outcome {
            output: Output::Json(to_json(value)?),
            code: 0,
        })
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Error::Resource(format!("serialization failed: {e}")))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Resource(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Argument(format!("{} is not valid JSON: {e}", path.display())))
}

fn from_value<T: for<'de> Deserialize<'de>>(value: Value, what: &str) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Argument(format!("malformed {what}: {e}")))
}

fn verdict_code(verdict: &Verdict) -> u8 {
    match verdict {
        Verdict::Certified => 0,
        Verdict::HypothesisFailed { .. } => EXIT_HYPOTHESIS,
        Verdict::OutOfRange { .. } => EXIT_ERROR,
    }
}

fn certificate(cert: Certificate) -> Outcome {
    Outcome {
        code: verdict_code(&cert.verdict),
        output: Output::Json(cert.to_json()),
    }
}

fn multi_input(kind: MultiKind, path: &Path) -> Result<MultiInput> {
    let mut value = read_json(path)?;
    let tag = match kind {
        MultiKind::ThreeQuadratic => "three_quadratic",
        MultiKind::TwoCubic => "two_cubic",
    };
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Argument(format!("{} must hold a JSON object", path.display())))?;
    match obj.get("kind") {
        None => {
            obj.insert("kind".into(), Value::String(tag.into()));
        }
        Some(Value::String(k)) if k == tag => {}
        Some(other) => {
            return Err(Error::Argument(format!(
                "input kind {other} does not match --kind {tag}"
            )))
        }
    }
    from_value(value, "multi-field input")
}

fn residues(path: &Path) -> Result<Outcome> {
    let input: ResidueInput = from_value(read_json(path)?, "residue input")?;
    if input.fields.is_empty() {
        return Err(Error::Argument("no fields given".into()));
    }
    let f = match input.f {
        Some(f) => f,
        None => {
            let mut f = 16;
            for pair in &input.fields {
                f = lcm(f, pair.k.conductor_bound()?);
                f = lcm(f, pair.h.conductor_bound()?);
            }
            f
        }
    };
    let pairs = input
        .fields
        .iter()
        .map(|p| Ok((p.k.resolve(f)?, p.h.resolve(f)?)))
        .collect::<Result<Vec<_>>>()?;
    let (mode, residues) = if pairs.len() == 1 {
        (
            "single",
            admissible_residues_single(&pairs[0].0, &pairs[0].1, f)?,
        )
    } else {
        ("multi", admissible_residues_multi(&pairs, f)?)
    };
    Outcome::json(&ResidueOutput {
        f,
        mode,
        count: residues.len(),
        smallest: residues.first().map(|r| r.a),
        residues,
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    if cli.segment_size == 0 {
        return Err(Error::Argument("segment size must be positive".into()));
    }
    let sieve = SieveConfig {
        segment_size: cli.segment_size,
    };
    match &cli.command {
        Command::Certify(CertifyCommand::Biquadratic { q, r, s, run }) => {
            let config = run.config(sieve)?;
            Ok(certificate(certify_biquadratic(*q, *r, *s, &config)?))
        }
        Command::Certify(CertifyCommand::Multi { kind, input, run }) => {
            let config = run.config(sieve)?;
            let input = multi_input(*kind, input)?;
            Ok(certificate(certify_multi(&input, &config)?))
        }
        Command::Search { bound, run } => {
            let config = run.config(sieve)?;
            Outcome::json(&search_biquadratic(*bound, &config)?)
        }
        Command::Residues { field } => residues(field),
        Command::Sieve {
            a,
            f,
            xmax,
            grid,
            window,
            keep_samples,
            csv,
        } => {
            if let Some(x) = grid.iter().find(|&&x| x > *xmax) {
                return Err(Error::Argument(format!(
                    "grid point {x} exceeds xmax {xmax}"
                )));
            }
            let mut xs = grid.clone();
            xs.push(*xmax);
            let options = CountOptions {
                keep_samples: *keep_samples,
                sieve,
            };
            let rows = count_j_grid(*a, *f, &xs, &window.window()?, options)?;
            if *csv {
                let mut buf = Vec::new();
                write_csv(&rows, &mut buf)?;
                Ok(Outcome {
                    output: Output::Text(String::from_utf8(buf).expect("csv is utf-8")),
                    code: 0,
                })
            } else {
                Outcome::json(&rows)
            }
        }
        Command::Classnumber { d } => Outcome::json(&QuadFieldData::new(*d)?),
        Command::Unit { d } => Outcome::json(&fundamental_unit(*d)?),
        Command::Kuroda { q, r, s } => Outcome::json(&class_number_biquadratic(*q, *r, *s)?),
    }
}

fn threads(cli: &Cli) -> Result<Option<usize>> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    match std::env::var("EUCLID_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Argument(format!("EUCLID_THREADS={v} is not a thread count"))),
        _ => Ok(None),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Resource(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Resource(format!("cannot write stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = threads(&cli).and_then(|n| {
        if let Some(n) = n {
            if n == 0 {
                return Err(Error::Argument("thread count must be positive".into()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
        }
        run(&cli)
    });
    let (text, code) = match result {
        Ok(Outcome {
            output: Output::Json(s),
            code,
        }) => (s + "\n", code),
        Ok(Outcome {
            output: Output::Text(s),
            code,
        }) => (s, code),
        Err(e) => {
            let body = ErrorOutput {
                kind: e.kind(),
                message: e.to_string(),
            };
            eprintln!("error: {e}");
            (
                serde_json::to_string_pretty(&body).expect("error serializes") + "\n",
                EXIT_ERROR,
            )
        }
    };
    if let Err(e) = emit(cli.out.as_deref(), &text) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_ERROR);
    }
    ExitCode::from(code)
}
