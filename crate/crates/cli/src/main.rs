mod render;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use osp_core::character::{kostka_table, osp_character, schur_expand};
use osp_core::crystal::{build_graph, check_connected, highest_element, Convention};
use osp_core::fock::{
    check_algebra_relations, check_tensor_split, check_uq_relations, highest_weight_vector_b, FockKind, FockModel,
};
use osp_core::kn::{to_kn_column, to_kn_tableau, verify_kn_correspondence};
use osp_core::osp::{enumerate, GKind, PShape, Piece};
use osp_core::{Alphabet, AlphabetKind, Column, Error};
use serde_json::json;

use crate::render::{emit, Format, Rendered};

#[derive(Parser)]
#[command(name = "osp", version, about = "Orthosymplectic super tableaux: enumeration, crystals, characters and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the parallel checks; overrides `OSP_WORKERS`.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// List the tableaux of a shape.
    Enumerate(ShapeArgs),
    /// Weight generating function of the tableaux of a shape.
    Character(ShapeArgs),
    /// Sizes of the Kostka-type recording sets for each Schur shape.
    Kostka(ShapeArgs),
    /// Compare the character with its Schur expansion.
    SchurExpand(ShapeArgs),
    /// Crystal graph generated from the highest element.
    Graph(GraphArgs),
    /// Convert to Kashiwara-Nakashima tableaux (n = 0).
    Kn(KnArgs),
    /// Run a named verification profile.
    Verify(VerifyArgs),
    /// Operator checks on the q-deformed Fock spaces.
    FockCheck(FockArgs),
}

#[derive(Args, Clone)]
struct ShapeArgs {
    /// Type: b, bb or c.
    #[arg(long)]
    g: GKind,
    /// Partition, comma separated (empty for the zero partition).
    #[arg(long, default_value = "")]
    lambda: String,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 0)]
    n: u32,
    /// Letters after the barred ones: half-integers (super) or integers (plus).
    #[arg(long, value_enum, default_value_t = Kind::Super)]
    alphabet: Kind,
    /// Maximum number of cells; required when n > 0.
    #[arg(long)]
    degree: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Super,
    Plus,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Stop after this many nodes.
    #[arg(long, default_value_t = 200_000)]
    max_nodes: usize,
}

#[derive(Args)]
struct KnArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Convert a single column pair instead, e.g. `b5,b3,b2`.
    #[arg(long, requires = "right")]
    left: Option<String>,
    #[arg(long, requires = "left")]
    right: Option<String>,
    /// Parameter `a` of the column pair.
    #[arg(long, default_value_t = 0)]
    a: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = verify::Profile::PaperExamples)]
    profile: verify::Profile,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Suite {
    Algebra,
    Relations,
    Split,
    CrystalBase,
    Highest,
}

#[derive(Args)]
struct FockArgs {
    /// Type: b, bb, c or d.
    #[arg(long)]
    g: FockKind,
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 3)]
    degree: u32,
    #[arg(long, value_enum, default_value_t = Suite::Relations)]
    suite: Suite,
    /// Include the Serre-type relations.
    #[arg(long)]
    serre: bool,
    /// `a` for the highest weight vector suite.
    #[arg(long, default_value_t = 0)]
    a: usize,
}

/// Outcome of a subcommand before printing.
enum Failure {
    Spec(String),
    Check(Rendered),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Verification(msg) => Failure::Check(Rendered::message(msg)),
            other => Failure::Spec(other.to_string()),
        }
    }
}

type Outcome = Result<Rendered, Failure>;

fn parse_partition(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|_| Failure::Spec(format!("bad part {p:?} in --lambda"))))
        .collect()
}

impl ShapeArgs {
    fn shape(&self) -> Result<PShape, Failure> {
        Ok(PShape::new(self.g, parse_partition(&self.lambda)?, self.ell)?)
    }

    fn alphabet(&self) -> Result<Alphabet, Failure> {
        let kind = match self.alphabet {
            Kind::Super => AlphabetKind::Super,
            Kind::Plus => AlphabetKind::Plus,
        };
        Ok(Alphabet::standard(kind, self.m, self.n)?)
    }

    fn degree(&self) -> Result<usize, Failure> {
        match (self.degree, self.n) {
            (Some(d), _) => Ok(d),
            (None, 0) => Ok(usize::MAX),
            (None, _) => Err(Failure::Spec("--degree is required when n > 0".into())),
        }
    }

    fn resolve(&self) -> Result<(PShape, Alphabet, usize), Failure> {
        let shape = self.shape()?;
        let alphabet = self.alphabet()?;
        shape.check_fits(&alphabet)?;
        Ok((shape, alphabet, self.degree()?))
    }
}

fn run_enumerate(args: &ShapeArgs) -> Outcome {
    let (shape, alphabet, degree) = args.resolve()?;
    Ok(render::tableaux(&enumerate(&shape, &alphabet, degree), &alphabet))
}

fn run_character(args: &ShapeArgs) -> Outcome {
    let (shape, alphabet, degree) = args.resolve()?;
    Ok(render::character(&osp_character(&shape, &alphabet, degree), &alphabet))
}

fn run_kostka(args: &ShapeArgs) -> Outcome {
    let shape = args.shape()?;
    let degree = args.degree.ok_or_else(|| Failure::Spec("kostka needs --degree".into()))?;
    Ok(render::kostka(&kostka_table(&shape, degree)))
}

fn run_schur(args: &ShapeArgs) -> Outcome {
    let (shape, alphabet, degree) = args.resolve()?;
    if degree == usize::MAX {
        return Err(Failure::Spec("schur-expand needs --degree".into()));
    }
    let report = schur_expand(&shape, &alphabet, degree);
    let out = render::expansion(&report);
    if report.ok() {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn run_graph(args: &GraphArgs) -> Outcome {
    let (shape, alphabet, degree) = args.shape.resolve()?;
    let conv = Convention::for_alphabet(&alphabet);
    let seed = highest_element(&shape, &alphabet, conv)?;
    let graph = build_graph(&seed, &alphabet, conv, degree, args.max_nodes);
    let conn = check_connected(&graph);
    Ok(render::graph(&graph, &conn))
}

fn split_letters(s: &str) -> Result<Column, Failure> {
    let letters = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|e: Error| Failure::Spec(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Column::new(letters))
}

fn run_kn(args: &KnArgs) -> Outcome {
    let s = &args.shape;
    if s.n != 0 {
        return Err(Failure::Spec("KN conversion needs n = 0".into()));
    }
    if let (Some(l), Some(r)) = (&args.left, &args.right) {
        let piece = Piece::new(split_letters(l)?, split_letters(r)?);
        let col = to_kn_column(&piece, args.a, s.g, s.m)?;
        return Ok(Rendered::new(json!({ "piece": piece.to_string(), "kn": col }), format!("{col}\n")));
    }
    let shape = s.shape()?;
    let report = verify_kn_correspondence(&shape, s.m)?;
    let alphabet = Alphabet::plus(s.m, 0);
    let pairs = enumerate(&shape, &alphabet, usize::MAX)
        .iter()
        .map(|t| to_kn_tableau(t, s.m).map(|kn| (t.clone(), kn)))
        .collect::<Result<Vec<_>, _>>()?;
    let out = render::kn(&pairs, &report);
    if report.ok() {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn run_fock(args: &FockArgs) -> Outcome {
    let (m, n, d) = (args.m, args.n, args.degree);
    let report = match args.suite {
        Suite::Algebra => {
            let model = FockModel::new(args.g, m, n)?;
            check_algebra_relations(model.space(), m, n, d)
        }
        Suite::Relations => check_uq_relations(&FockModel::new(args.g, m, n)?, d, args.serre),
        Suite::Split => check_tensor_split(m, n, d)?,
        Suite::CrystalBase => FockModel::new(args.g, m, n)?.crystal_base_check(d)?,
        Suite::Highest => {
            let g = match args.g {
                FockKind::B => GKind::B,
                FockKind::BBullet => GKind::BBullet,
                _ => return Err(Failure::Spec("the highest weight suite covers b and bb".into())),
            };
            let v = highest_weight_vector_b(args.a, m, n, g)?;
            let text = format!("v_{} has {} terms over {} matrices\n", v.a, v.vector.len(), v.matrices);
            return Ok(Rendered::new(serde_json::to_value(&v).expect("serializable"), text));
        }
    };
    let out = render::report(&report);
    if report.ok() {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        // read by the worker pool in the core crate; set before any threads start
        std::env::set_var("OSP_WORKERS", w.max(1).to_string());
    }
    let result = match &cli.command {
        Command::Enumerate(a) => run_enumerate(a),
        Command::Character(a) => run_character(a),
        Command::Kostka(a) => run_kostka(a),
        Command::SchurExpand(a) => run_schur(a),
        Command::Graph(a) => run_graph(a),
        Command::Kn(a) => run_kn(a),
        Command::Verify(a) => verify::run(a.profile, a.seed).map_err(Failure::Check),
        Command::FockCheck(a) => run_fock(a),
    };
    match result {
        Ok(out) => match emit(&out, cli.format) {
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Check(out)) => {
            let _ = emit(&out, cli.format);
            ExitCode::from(1)
        }
        Err(Failure::Spec(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
