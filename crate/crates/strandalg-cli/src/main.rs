//! Command-line front end for strand algebra computations.
//!
//! Subcommands validate circle files, list and combine matched generators,
//! grade elements, evaluate expected-dimension counts, drive the
//! verification suites, and draw SVG pictures. Inputs and outputs are flat
//! JSON on stdin and stdout unless paths are given. Exit codes: 0 success,
//! 1 input or validation error, 2 a verification suite found a violation.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use strandalg::algebra::{enumerate_generators, ChordSet, MatchedGenerator};
use strandalg::diagrams::{BorderedDiagramData, BorderedDomain, Generator};
use strandalg::grading::grade_generator;
use strandalg::pontryagin::ChordArcDiagram;
use strandalg::strands::AlgebraElement;
use strandalg::verify::{run_verify, Level, VerificationReport};
use strandalg::PointedMatchedCircle;

mod render;

#[derive(Parser)]
#[command(name = "strandalg", version, about = "Strand algebras of pointed matched circles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Circle files: parse, validate, canonicalize.
    Pmc {
        #[command(subcommand)]
        command: PmcCommand,
    },
    /// Matched generators: list, multiply, differentiate.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Grade the generator read from stdin.
    Grade(CircleIo),
    /// Expected dimension of the domain read from stdin.
    Index(OutArg),
    /// Run the verification suites against a circle.
    Verify(VerifyArgs),
    /// Draw the element read from stdin as SVG.
    Render(RenderArgs),
}

#[derive(Subcommand)]
enum PmcCommand {
    /// Exit 0 with the canonical form, or 1 with the defect.
    Validate(PmcIo),
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// List every nonzero generator of the circle.
    Gens(CircleIo),
    /// Multiply {"left": .., "right": ..} read from stdin.
    Mul(CircleIo),
    /// Differentiate the generator read from stdin.
    Diff(CircleIo),
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct PmcIo {
    /// Circle file; stdin when omitted.
    #[arg(long)]
    pmc: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CircleIo {
    /// Circle file.
    #[arg(long)]
    pmc: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OutArg {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Circle file.
    #[arg(long)]
    pmc: PathBuf,
    /// "exhaustive" or "sample:<count>".
    #[arg(long, default_value = "exhaustive", value_parser = parse_level)]
    level: Level,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Circle file; required for generator input.
    #[arg(long)]
    pmc: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Pmc { command: PmcCommand::Validate(io) } => pmc_validate(io),
        Command::Algebra { command } => match command {
            AlgebraCommand::Gens(io) => algebra_gens(io),
            AlgebraCommand::Mul(io) => algebra_mul(io),
            AlgebraCommand::Diff(io) => algebra_diff(io),
        },
        Command::Grade(io) => grade(io),
        Command::Index(out) => index(out),
        Command::Verify(args) => verify(args),
        Command::Render(args) => render_cmd(args),
    }
}

fn read_circle(path: &Path) -> Result<PointedMatchedCircle> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing circle file {}", path.display()))
}

fn parse_stdin<T: serde::de::DeserializeOwned>(what: &str) -> Result<T> {
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .context("reading stdin")?;
    serde_json::from_str(&text).with_context(|| format!("parsing {what} from stdin"))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn element_json(element: &AlgebraElement) -> serde_json::Value {
    json!({
        "ambient": element.ambient(),
        "terms": element.terms().collect::<Vec<_>>(),
    })
}

fn pmc_validate(io: PmcIo) -> Result<u8> {
    let pmc: PointedMatchedCircle = match &io.pmc {
        Some(path) => read_circle(path)?,
        None => parse_stdin("circle")?,
    };
    let content = match io.format {
        Format::Json => format!("{}\n", serde_json::to_string(&pmc)?),
        Format::Text => format!(
            "valid circle: genus {}, {} points, {} handles\n",
            pmc.genus(),
            pmc.num_points(),
            pmc.num_handles()
        ),
    };
    emit(&io.out, &content)?;
    Ok(0)
}

fn algebra_gens(io: CircleIo) -> Result<u8> {
    let pmc = read_circle(&io.pmc)?;
    let gens = enumerate_generators(&pmc);
    let content = match io.format {
        Format::Json => format!("{}\n", serde_json::to_string(&gens)?),
        Format::Text => {
            let mut lines: Vec<String> = gens.iter().map(|g| format!("{g:?}")).collect();
            lines.push(format!("{} generators", gens.len()));
            lines.join("\n") + "\n"
        }
    };
    emit(&io.out, &content)?;
    Ok(0)
}

#[derive(Deserialize)]
struct MulInput {
    left: MatchedGenerator,
    right: MatchedGenerator,
}

fn algebra_mul(io: CircleIo) -> Result<u8> {
    let pmc = read_circle(&io.pmc)?;
    let input: MulInput = parse_stdin("generator pair")?;
    input.left.validate(&pmc).context("left generator")?;
    input.right.validate(&pmc).context("right generator")?;
    let product = input.left.multiply(&input.right, &pmc);
    let joined = input.left.multiply_as_generator(&input.right, &pmc);
    let mut value = element_json(&product);
    value["joined"] = serde_json::to_value(&joined)?;
    emit(&io.out, &format!("{value}\n"))?;
    Ok(0)
}

fn algebra_diff(io: CircleIo) -> Result<u8> {
    let pmc = read_circle(&io.pmc)?;
    let generator: MatchedGenerator = parse_stdin("generator")?;
    generator.validate(&pmc)?;
    let value = element_json(&generator.differential(&pmc));
    emit(&io.out, &format!("{value}\n"))?;
    Ok(0)
}

fn grade(io: CircleIo) -> Result<u8> {
    let pmc = read_circle(&io.pmc)?;
    let generator: MatchedGenerator = parse_stdin("generator")?;
    generator.validate(&pmc)?;
    let grading = grade_generator(&generator, &pmc)
        .with_context(|| format!("grading {generator:?}"))?;
    let content = match io.format {
        Format::Json => format!("{}\n", serde_json::to_string(&grading)?),
        Format::Text => format!(
            "maslov {}, class {:?}\n",
            grading.maslov(),
            grading.homology()
        ),
    };
    emit(&io.out, &content)?;
    Ok(0)
}

#[derive(Deserialize)]
struct IndexInput {
    diagram: BorderedDiagramData,
    domain: BorderedDomain,
    x: Generator,
    y: Generator,
    #[serde(default)]
    sequence: Option<Vec<ChordSet>>,
}

fn index(out: OutArg) -> Result<u8> {
    let input: IndexInput = parse_stdin("index problem")?;
    let IndexInput { diagram, domain, x, y, sequence } = input;
    diagram.validate_generator(&x).context("generator x")?;
    diagram.validate_generator(&y).context("generator y")?;
    diagram
        .validate_domain(&domain, &x, &y)
        .context("domain corners")?;
    let value = match &sequence {
        Some(sets) => diagram.index(&domain, &x, &y, sets)?,
        None => diagram.closed_index(&domain, &x, &y)?,
    };
    emit(&out.out, &format!("{}\n", json!({ "index": value })))?;
    Ok(0)
}

/// Exit code contract for verification runs: clean is 0, any failure is 2.
fn verification_exit_code(reports: &[VerificationReport]) -> u8 {
    if reports.iter().all(VerificationReport::passed) {
        0
    } else {
        2
    }
}

fn verify(args: VerifyArgs) -> Result<u8> {
    let pmc = read_circle(&args.pmc)?;
    let reports = run_verify(&pmc, args.level, args.seed);
    let content = match args.format {
        Format::Json => format!("{}\n", serde_json::to_string(&reports)?),
        Format::Text => {
            let mut lines: Vec<String> = reports
                .iter()
                .map(|r| {
                    format!(
                        "{:<28} cases {:>8}  failures {:>4}  {:>6} ms  {}",
                        r.suite,
                        r.cases,
                        r.failures.len(),
                        r.wall_ms,
                        if r.passed() { "PASS" } else { "FAIL" }
                    )
                })
                .collect();
            lines.push(format!(
                "overall: {}",
                if verification_exit_code(&reports) == 0 { "PASS" } else { "FAIL" }
            ));
            lines.join("\n") + "\n"
        }
    };
    emit(&args.out, &content)?;
    Ok(verification_exit_code(&reports))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RenderInput {
    Layers(ChordArcDiagram),
    Generator(MatchedGenerator),
}

fn render_cmd(args: RenderArgs) -> Result<u8> {
    let input: RenderInput = parse_stdin("element")?;
    let svg = match input {
        RenderInput::Generator(generator) => {
            let Some(path) = &args.pmc else {
                bail!("rendering a generator needs --pmc for the matching");
            };
            let pmc = read_circle(path)?;
            generator.validate(&pmc)?;
            render::render_generator(&pmc, &generator)
        }
        RenderInput::Layers(diagram) => {
            let num_points = match &args.pmc {
                Some(path) => read_circle(path)?.num_points(),
                None => diagram
                    .layers
                    .iter()
                    .map(ChordSet::max_point)
                    .max()
                    .unwrap_or(0),
            };
            render::render_layers(num_points, &diagram.layers)
        }
    };
    emit(&args.out, &svg)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_force_exit_code_two() {
        let clean = VerificationReport {
            suite: "multiplicativity".into(),
            cases: 10,
            failures: vec![],
            wall_ms: 1,
        };
        let dirty = VerificationReport {
            suite: "differential-drop".into(),
            cases: 10,
            failures: vec![json!({"generator": "I{1}·a{[1,2]}", "got": "0", "want": "-1"})],
            wall_ms: 1,
        };
        assert_eq!(verification_exit_code(std::slice::from_ref(&clean)), 0);
        assert_eq!(verification_exit_code(&[clean, dirty]), 2);
        assert_eq!(verification_exit_code(&[]), 0);
    }

    #[test]
    fn level_argument_parses() {
        assert_eq!(parse_level("exhaustive"), Ok(Level::Exhaustive));
        assert_eq!(parse_level("sample:12"), Ok(Level::Sample(12)));
        assert!(parse_level("everything").is_err());
    }
}
