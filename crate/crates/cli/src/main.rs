use clap::{Args, Parser, Subcommand};
use contour_jets_cli::runner::{run_input, Options, Run};
use contour_jets_cli::scenario::{Input, Kind};
use contour_jets_cli::{format, CliError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Curvature jets of projected curves and apparent contours, and reconstruction from them.
#[derive(Parser)]
#[command(name = "contour-jets", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// SVG plot path (plot-contour, ambiguity).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// CSV samples path with columns s,x,y,kappa (plot-contour, ambiguity).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Jet order (forward-curve, oracle-check) or target order n (recon-curve).
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Seed for randomized suites; overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for batch files and randomized suites.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Read and write angles in degrees.
    #[arg(long, global = true)]
    degrees: bool,
    /// Residual threshold for warnings and oracle pass/fail.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct FileArg {
    /// Scenario or batch file (`-` for standard input).
    file: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario or batch file of any kind.
    Run(FileArg),
    #[command(name = "forward-curve")]
    ForwardCurve(FileArg),
    #[command(name = "recon-curve")]
    ReconCurve(FileArg),
    #[command(name = "recon-curve-tangential")]
    ReconCurveTangential(FileArg),
    #[command(name = "forward-surface")]
    ForwardSurface(FileArg),
    #[command(name = "recon-surface-2")]
    ReconSurface2(FileArg),
    #[command(name = "recon-surface-3")]
    ReconSurface3(FileArg),
    #[command(name = "conjugate")]
    Conjugate(FileArg),
    #[command(name = "ambiguity")]
    Ambiguity(FileArg),
    #[command(name = "normal-recon")]
    NormalRecon(FileArg),
    #[command(name = "oracle-check")]
    OracleCheck(FileArg),
    #[command(name = "plot-contour")]
    PlotContour(FileArg),
}

impl Command {
    fn split(self) -> (Option<Kind>, PathBuf) {
        match self {
            Command::Run(f) => (None, f.file),
            Command::ForwardCurve(f) => (Some(Kind::ForwardCurve), f.file),
            Command::ReconCurve(f) => (Some(Kind::ReconCurve), f.file),
            Command::ReconCurveTangential(f) => (Some(Kind::ReconCurveTangential), f.file),
            Command::ForwardSurface(f) => (Some(Kind::ForwardSurface), f.file),
            Command::ReconSurface2(f) => (Some(Kind::ReconSurface2), f.file),
            Command::ReconSurface3(f) => (Some(Kind::ReconSurface3), f.file),
            Command::Conjugate(f) => (Some(Kind::Conjugate), f.file),
            Command::Ambiguity(f) => (Some(Kind::Ambiguity), f.file),
            Command::NormalRecon(f) => (Some(Kind::NormalRecon), f.file),
            Command::OracleCheck(f) => (Some(Kind::OracleCheck), f.file),
            Command::PlotContour(f) => (Some(Kind::PlotContour), f.file),
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io(format!("standard input: {e}")))
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (kind, file) = cli.command.split();
    let f = cli.flags;
    let opts = Options {
        order: f.order,
        seed: f.seed,
        jobs: f.jobs,
        degrees: f.degrees,
        tolerance: f.tolerance,
        svg: f.svg,
        csv: f.csv,
    };
    let input = Input::parse(&read_input(&file)?)?;
    let Run { output, files } = run_input(&input, kind, &opts)?;
    let text = format::to_string(&output);
    for pending in &files {
        write_file(&pending.path, &pending.contents)?;
    }
    match &f.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprint!("{}", format::to_string(&e.record()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
