//! `maxab`: enumerate, classify and verify closed abelian subgroups from the command line.
//!
//! Every stdout line is one JSON value; diagnostics go to stderr. Exit codes: 0 on
//! success, 2 on invalid input, 3 when a computational bound is hit.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use maxab::abelian::default_cap;
use maxab::f2msms::ClassCount;
use maxab::star::fixed_dim;
use maxab::{
    canonical_rep, classify, enumerate_classes, enumerate_invariants, lift_twisted, verify_star, weyl_description,
    AbelianPresentation, ClassInvariant, Error, Family, FixedAlgebraReport, Method, MonomialElement, MsmsJson,
};
use serde::Serialize;
use serde_json::{json, Value};

mod schema;

#[derive(Parser, Debug)]
#[command(name = "maxab", version, about = "Closed abelian subgroups of the classical projective groups")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Print the JSON schemas of every output record and exit.
    #[arg(long, global = true)]
    schema: bool,

    /// Ambient family.
    #[arg(long, global = true, value_enum)]
    family: Option<FamilyArg>,

    /// Ambient degree.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Input JSON file: a presentation, a class invariant, or an array of generators.
    #[arg(long = "in", global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Write the JSON lines here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Half the rank of the symplectic part (msms).
    #[arg(long, global = true)]
    k: Option<usize>,

    /// Number of refinements (msms).
    #[arg(long, global = true)]
    s: Option<usize>,

    /// Closure element cap; defaults to $MAXAB_CAP or 1000000.
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Use the floating-point fixed-algebra solver instead of the exact one.
    #[arg(long, global = true)]
    float: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One class invariant per line for the given family and degree.
    Enumerate,
    /// Classify a presentation; prints the invariant, then the fixed-algebra report.
    Classify,
    /// Weyl group description of an invariant, or of every invariant of a family and degree.
    Weyl,
    /// Multi-symplectic metric spaces.
    Msms {
        #[command(subcommand)]
        action: MsmsCommand,
    },
    /// Check dim g0^F = dim F for a presentation, an invariant, or every invariant.
    VerifyStar,
    /// Lift a twisted presentation to U(n)/<-I> x| <tau>.
    Lift,
}

#[derive(Subcommand, Debug)]
enum MsmsCommand {
    /// Count isomorphism classes of s-tuples of positive refinements on F2^(2k).
    Count,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Pu,
    Po,
    Psp,
    Twisted,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Pu => Family::Pu,
            FamilyArg::Po => Family::Po,
            FamilyArg::Psp => Family::Psp,
            FamilyArg::Twisted => Family::Twisted,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_bound() => 3,
            Failure::Io(_) => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

/// Input file contents, told apart by shape.
enum Input {
    Presentation(AbelianPresentation),
    Invariant(ClassInvariant),
}

struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    fn open(path: Option<&Path>) -> Outcome<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                fs::File::create(p).map_err(|e| Failure::Io(format!("cannot create {}: {e}", p.display())))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Sink { out })
    }

    fn emit<T: Serialize>(&mut self, value: &T) -> Outcome<()> {
        let line = serde_json::to_string(value).map_err(|e| Failure::Io(e.to_string()))?;
        writeln!(self.out, "{line}").map_err(|e| Failure::Io(e.to_string()))
    }

    fn finish(mut self) -> Outcome<()> {
        self.out.flush().map_err(|e| Failure::Io(e.to_string()))
    }
}

impl Cli {
    fn cap(&self) -> usize {
        self.cap.unwrap_or_else(default_cap)
    }

    fn family(&self) -> Outcome<Family> {
        self.family.map(Family::from).ok_or_else(|| Failure::Usage("--family is required".into()))
    }

    fn degree(&self) -> Outcome<usize> {
        match self.n {
            Some(0) => Err(Failure::Usage("--n must be positive".into())),
            Some(n) => Ok(n),
            None => Err(Failure::Usage("--n is required".into())),
        }
    }

    fn method(&self) -> Method {
        if self.float {
            Method::Floating
        } else {
            Method::Exact
        }
    }

    fn read_input(&self) -> Outcome<Option<Input>> {
        let Some(path) = &self.input else { return Ok(None) };
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Lib(Error::Parse(e.to_string())))?;
        let parse = |e: serde_json::Error| Failure::Lib(Error::Parse(e.to_string()));
        let is_presentation =
            value.as_object().is_some_and(|m| m.contains_key("generators") || m.contains_key("torus"));
        let input = match value {
            Value::Array(_) => {
                let gens: Vec<MonomialElement> = serde_json::from_value(value).map_err(parse)?;
                let dim = gens.first().map(MonomialElement::dim);
                let family = self.family()?;
                let n = match (self.n, dim) {
                    (Some(n), _) => n,
                    (None, Some(d)) if family == Family::Psp => d / 2,
                    (None, Some(d)) => d,
                    (None, None) => return Err(Failure::Usage("an empty generator list needs --n".into())),
                };
                Input::Presentation(AbelianPresentation::new(family, n, gens, vec![])?)
            }
            _ if is_presentation => Input::Presentation(serde_json::from_value(value).map_err(parse)?),
            _ => {
                let inv: ClassInvariant = serde_json::from_value(value).map_err(parse)?;
                inv.validate()?;
                Input::Invariant(inv)
            }
        };
        if let (Some(f), Some(given)) = (self.family.map(Family::from), input_family(&input)) {
            if f != given {
                return Err(Failure::Usage(format!("--family {f} does not match the input family {given}")));
            }
        }
        Ok(Some(input))
    }

    /// The invariants named by `--in`, or all invariants of `--family`/`--n`.
    fn invariants(&self) -> Outcome<Vec<ClassInvariant>> {
        match self.read_input()? {
            Some(Input::Invariant(inv)) => Ok(vec![inv]),
            Some(Input::Presentation(p)) => Ok(vec![classify(&p, self.cap())?]),
            None => Ok(enumerate_invariants(self.family()?, self.degree()?)?),
        }
    }
}

fn input_family(input: &Input) -> Option<Family> {
    match input {
        Input::Presentation(p) => Some(p.family()),
        Input::Invariant(i) => Some(i.family()),
    }
}

fn star_report(p: &AbelianPresentation, method: Method) -> Outcome<FixedAlgebraReport> {
    Ok(fixed_dim(p, method)?)
}

fn run(cli: &Cli) -> Outcome<()> {
    if cli.schema {
        let mut sink = Sink::open(cli.out.as_deref())?;
        for s in schema::all() {
            sink.emit(&s)?;
        }
        return sink.finish();
    }
    let Some(command) = &cli.command else {
        return Err(Failure::Usage("a subcommand is required; see --help".into()));
    };
    check_flags(cli, command)?;
    // compute first so that a failure leaves --out untouched
    let mut lines: Vec<Value> = Vec::new();
    let mut push = |v: Value| lines.push(v);
    match command {
        Command::Enumerate => {
            for inv in enumerate_invariants(cli.family()?, cli.degree()?)? {
                push(to_value(&inv)?);
            }
        }
        Command::Classify => {
            let p = match cli.read_input()? {
                Some(Input::Presentation(p)) => p,
                Some(Input::Invariant(_)) => return Err(Failure::Usage("classify expects a presentation".into())),
                None => return Err(Failure::Usage("classify needs --in".into())),
            };
            push(to_value(&classify(&p, cli.cap())?)?);
            push(to_value(&star_report(&p, cli.method())?)?);
        }
        Command::Weyl => {
            let from_file = cli.input.is_some();
            for inv in cli.invariants()? {
                let w = weyl_description(&inv)?;
                if from_file {
                    push(to_value(&w)?);
                } else {
                    push(to_value(&json!({ "invariant": inv, "weyl": w }))?);
                }
            }
        }
        Command::Msms { action: MsmsCommand::Count } => {
            let k = cli.k.ok_or_else(|| Failure::Usage("--k is required".into()))?;
            let s = cli.s.ok_or_else(|| Failure::Usage("--s is required".into()))?;
            let classes = enumerate_classes(k, s)?;
            push(to_value(&classes.len())?);
            for c in &classes {
                push(to_value(&class_record(c))?);
            }
        }
        Command::VerifyStar => match cli.read_input()? {
            Some(Input::Presentation(p)) => push(to_value(&star_report(&p, cli.method())?)?),
            Some(Input::Invariant(inv)) => push(to_value(&star_for(&inv, cli.method())?)?),
            None => {
                for inv in enumerate_invariants(cli.family()?, cli.degree()?)? {
                    let report = star_for(&inv, cli.method())?;
                    push(to_value(&json!({ "invariant": inv, "report": report }))?);
                }
            }
        },
        Command::Lift => {
            let p = match cli.read_input()? {
                Some(Input::Presentation(p)) => p,
                Some(Input::Invariant(inv)) => canonical_rep(&inv)?,
                None => return Err(Failure::Usage("lift needs --in".into())),
            };
            let lifted = lift_twisted(&p, cli.cap())?;
            let mut v = to_value(&lifted)?;
            v["note"] = json!(
                "whether F contains an outer involution is not decided from the refinements; check the antiunitary generators directly"
            );
            push(to_value(&v)?);
        }
    }
    let mut sink = Sink::open(cli.out.as_deref())?;
    for line in &lines {
        sink.emit(line)?;
    }
    sink.finish()
}

fn to_value<T: Serialize>(v: &T) -> Outcome<Value> {
    serde_json::to_value(v).map_err(|e| Failure::Io(e.to_string()))
}

fn star_for(inv: &ClassInvariant, method: Method) -> Outcome<FixedAlgebraReport> {
    match method {
        Method::Exact => Ok(verify_star(inv)?),
        Method::Floating => star_report(&canonical_rep(inv)?, method),
    }
}

fn class_record(c: &ClassCount) -> Value {
    json!({
        "representative": MsmsJson::from(&c.representative),
        "tuples": c.tuples.to_string(),
        "aut_order": c.aut_order.to_string(),
    })
}

/// Reject flags that the subcommand would silently ignore.
fn check_flags(cli: &Cli, command: &Command) -> Outcome<()> {
    let given = [
        ("--family", cli.family.is_some()),
        ("--n", cli.n.is_some()),
        ("--in", cli.input.is_some()),
        ("--k", cli.k.is_some()),
        ("--s", cli.s.is_some()),
        ("--float", cli.float),
    ];
    let allowed: &[&str] = match command {
        Command::Enumerate => &["--family", "--n"],
        Command::Classify => &["--family", "--n", "--in", "--float"],
        Command::Weyl => &["--family", "--n", "--in"],
        Command::Msms { .. } => &["--k", "--s"],
        Command::VerifyStar => &["--family", "--n", "--in", "--float"],
        Command::Lift => &["--family", "--n", "--in"],
    };
    for (flag, present) in given {
        if present && !allowed.contains(&flag) {
            return Err(Failure::Usage(format!("{flag} is not accepted by this subcommand")));
        }
    }
    if matches!(command, Command::Lift) && cli.family.is_some_and(|f| !matches!(f, FamilyArg::Twisted)) {
        return Err(Failure::Usage("lift applies to --family twisted".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("maxab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
