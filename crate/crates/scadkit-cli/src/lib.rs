//! Command-line front end for scadkit.
//!
//! Every subcommand reads a design file, never modifies it, and writes any
//! output to `-o` (or standard output when `-o` is absent). Diagnostics go
//! to standard error, one `path: message` line per finding.
//!
//! Exit codes: 0 success, 1 invalid or unencodable design, 2 usage error,
//! 3 I/O or file-format error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use scadkit::export::IdtOptions;
use scadkit::svg::{RenderOptions, View};
use scadkit::{cadnano, codec, export, sequence, svg, Design};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable naming a file whose contents replace the built-in
/// scaffold sequence used by `assign-seq --m13`.
pub const M13_PATH_ENV: &str = "SCADKIT_M13_PATH";

#[derive(Parser)]
#[command(
    name = "scadkit",
    version,
    about = "Inspect, edit, convert, and export DNA designs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a design file and report every violated rule.
    Validate {
        /// Design file (.sc JSON).
        input: PathBuf,
        /// Also fail (exit 1) when the design has warnings.
        #[arg(long)]
        strict: bool,
    },
    /// Convert between the native format and cadnano v2.
    Convert {
        /// Target format.
        #[arg(long, value_enum)]
        to: ConvertTarget,
        /// Input file: .sc for --to cadnano, cadnano .json for --to scadnano.
        input: PathBuf,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Export strand sequences for synthesis or scripting.
    ExportSeqs {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: SeqFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// IDT synthesis scale.
        #[arg(long, default_value = "25nm")]
        scale: String,
        /// IDT purification code.
        #[arg(long, default_value = "STD")]
        purification: String,
    },
    /// Draw the design as an SVG figure.
    Render {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "main")]
        view: ViewArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Pixels per base (and per nanometer).
        #[arg(long, default_value_t = 10.0)]
        base_width: f64,
        /// Draw base letters along each domain.
        #[arg(long)]
        show_sequences: bool,
    },
    /// Assign a DNA sequence to a strand (complements propagate).
    AssignSeq(AssignSeqArgs),
    /// Print summary counts for a design.
    Stats { input: PathBuf },
}

#[derive(Args)]
struct AssignSeqArgs {
    input: PathBuf,
    /// Strand index to assign --seq to.
    #[arg(long, requires = "seq", conflicts_with = "m13")]
    strand: Option<usize>,
    /// Explicit sequence (A, C, G, T, ?).
    #[arg(long, requires = "strand")]
    seq: Option<String>,
    /// Assign the default scaffold sequence to the single scaffold strand.
    #[arg(long)]
    m13: bool,
    /// Rotation into the circular scaffold sequence.
    #[arg(long, requires = "m13")]
    rotation: Option<i64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTarget {
    Cadnano,
    Scadnano,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqFormat {
    Csv,
    IdtBulk,
    IdtPlate,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViewArg {
    Main,
    Side,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

/// Runs the CLI against `args` (including argv[0]), writing to the given
/// streams, and returns the process exit code.
pub fn run_with<O: Write, E: Write>(
    args: impl IntoIterator<Item = String>,
    out: &mut O,
    err: &mut E,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let message = failure.message.trim_end();
            if !message.is_empty() {
                let _ = writeln!(err, "{message}");
            }
            failure.code
        }
    }
}

fn dispatch<O: Write>(cli: Cli, out: &mut O) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { input, strict } => cmd_validate(&input, strict),
        Command::Convert { to, input, output } => cmd_convert(to, &input, output.as_deref(), out),
        Command::ExportSeqs {
            input,
            format,
            output,
            scale,
            purification,
        } => cmd_export_seqs(&input, format, output.as_deref(), scale, purification, out),
        Command::Render {
            input,
            view,
            output,
            base_width,
            show_sequences,
        } => cmd_render(
            &input,
            view,
            output.as_deref(),
            base_width,
            show_sequences,
            out,
        ),
        Command::AssignSeq(args) => cmd_assign_seq(args, out),
        Command::Stats { input } => cmd_stats(&input, out),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write_output<O: Write>(text: &str, output: Option<&Path>, out: &mut O) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(EXIT_IO, e.to_string())),
    }
}

fn parse_failure(error: codec::CodecError) -> Failure {
    Failure::new(EXIT_IO, error.to_string())
}

/// Reads and parses a design, then checks it; findings become an exit-1
/// failure with one `path: message` line each.
fn load_valid_design(path: &Path) -> Result<Design, Failure> {
    let design = codec::parse_design(&read_text(path)?).map_err(parse_failure)?;
    let report = design.validate();
    if !report.is_valid() {
        let lines: Vec<String> = report.errors.iter().map(|f| f.to_string()).collect();
        return Err(Failure::new(EXIT_INVALID, lines.join("\n")));
    }
    Ok(design)
}

fn cmd_validate(input: &Path, strict: bool) -> Result<(), Failure> {
    let design = codec::parse_design(&read_text(input)?).map_err(parse_failure)?;
    let report = design.validate();
    let mut lines: Vec<String> = report.errors.iter().map(|f| f.to_string()).collect();
    if strict {
        lines.extend(
            report
                .warnings
                .iter()
                .map(|f| format!("{}: warning: {}", f.path, f.message)),
        );
    }
    if lines.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_INVALID, lines.join("\n")))
    }
}

fn cmd_convert<O: Write>(
    to: ConvertTarget,
    input: &Path,
    output: Option<&Path>,
    out: &mut O,
) -> Result<(), Failure> {
    match to {
        ConvertTarget::Cadnano => {
            let design = load_valid_design(input)?;
            let name = output
                .and_then(|p| p.file_stem())
                .and_then(|s| s.to_str())
                .unwrap_or("exported-design")
                .to_string();
            let text = cadnano::export_cadnano_v2_named(&design, &name).map_err(|e| match e {
                cadnano::CadnanoError::Json { .. } | cadnano::CadnanoError::Format { .. } => {
                    Failure::new(EXIT_IO, e.to_string())
                }
                other => Failure::new(EXIT_INVALID, other.to_string()),
            })?;
            write_output(&text, output, out)
        }
        ConvertTarget::Scadnano => {
            let design = cadnano::import_cadnano_v2(&read_text(input)?)
                .map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
            let text = codec::serialize_design(&design)
                .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
            write_output(&text, output, out)
        }
    }
}

fn cmd_export_seqs<O: Write>(
    input: &Path,
    format: SeqFormat,
    output: Option<&Path>,
    scale: String,
    purification: String,
    out: &mut O,
) -> Result<(), Failure> {
    let design = load_valid_design(input)?;
    let options = IdtOptions {
        scale,
        purification,
    };
    let text = match format {
        SeqFormat::Csv => export::export_sequences_csv(&design),
        SeqFormat::IdtBulk => export::export_idt_bulk(&design, &options)
            .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?,
        SeqFormat::IdtPlate => export::export_idt_plate(&design, &options)
            .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?,
    };
    write_output(&text, output, out)
}

fn cmd_render<O: Write>(
    input: &Path,
    view: ViewArg,
    output: Option<&Path>,
    base_width: f64,
    show_sequences: bool,
    out: &mut O,
) -> Result<(), Failure> {
    if !base_width.is_finite() || base_width <= 0.0 {
        return Err(Failure::new(EXIT_USAGE, "--base-width must be positive"));
    }
    let design = load_valid_design(input)?;
    let options = RenderOptions {
        view: match view {
            ViewArg::Main => View::Main,
            ViewArg::Side => View::Side,
        },
        base_width_px: base_width,
        show_sequences,
    };
    write_output(&svg::render_svg(&design, &options), output, out)
}

fn cmd_assign_seq<O: Write>(args: AssignSeqArgs, out: &mut O) -> Result<(), Failure> {
    let design = load_valid_design(&args.input)?;
    let result = if args.m13 {
        let rotation = args.rotation.unwrap_or(0);
        match std::env::var_os(M13_PATH_ENV) {
            Some(path) => {
                let path = PathBuf::from(path);
                let source = read_text(&path)?;
                sequence::assign_scaffold_sequence(&design, source.trim(), rotation)
            }
            None => sequence::assign_m13(&design, rotation),
        }
    } else {
        match (args.strand, args.seq) {
            (Some(strand), Some(seq)) => sequence::assign_dna(&design, strand, &seq),
            _ => {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "assign-seq needs either --m13 or both --strand and --seq",
                ))
            }
        }
    }
    .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    let text =
        codec::serialize_design(&result).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    write_output(&text, args.output.as_deref(), out)
}

fn cmd_stats<O: Write>(input: &Path, out: &mut O) -> Result<(), Failure> {
    let design = load_valid_design(input)?;
    let scaffold_length: usize = design
        .strands
        .iter()
        .filter(|s| s.is_scaffold)
        .map(|s| s.dna_length())
        .sum();
    let staples = design.strands.iter().filter(|s| !s.is_scaffold).count();
    let total_bases: usize = design.strands.iter().map(|s| s.dna_length()).sum();
    let text = format!(
        "helices: {}\nstrands: {}\nscaffold length: {}\nstaples: {}\ntotal bases: {}\n",
        design.helices.len(),
        design.strands.len(),
        scaffold_length,
        staples,
        total_bases,
    );
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::new(EXIT_IO, e.to_string()))
}
