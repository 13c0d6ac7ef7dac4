use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use convpolar::circuit::optimal_width;
use convpolar::harness::{
    complexity_table, correction_sweep_with, design_code, detection_sweep, parse_kernel,
    write_complexity_csv, write_correction_csv, write_detection_csv, CodeFile, CodeParams,
    Execution, Rate, SweepSpec,
};
use convpolar::selection::pu_profile;
use convpolar::{ChannelModel, Code, Error, Result};

#[derive(Parser)]
#[command(
    name = "convpolar",
    version,
    about = "Polar and convolutional polar code toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select a frozen set and write the code file.
    Build {
        #[command(flatten)]
        code: SingleCode,
        #[arg(long, default_value = "1/3")]
        rate: String,
        #[arg(long, default_value = "bsc:0.05")]
        channel: String,
        /// Also write the gate list, one `step layer first_wire` line per gate.
        #[arg(long)]
        dump_gates: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-position undetected error profile as CSV.
    Profile {
        #[command(flatten)]
        code: SingleCode,
        #[arg(long, default_value = "bsc:0.25")]
        channel: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Undetected error probability for a family of codes.
    Detect {
        #[command(flatten)]
        codes: CodeSet,
        #[arg(long, default_value = "1/3")]
        rate: String,
        #[arg(long, default_value = "bsc:0.25")]
        channel: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo bit and frame error rates for a family of codes.
    Simulate {
        #[command(flatten)]
        codes: CodeSet,
        #[arg(long, default_value = "1/3")]
        rate: String,
        #[arg(long, default_value = "bsc:0.05")]
        channel: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Decoding width; defaults to the optimal width of each code.
        #[arg(long)]
        width: Option<usize>,
        /// Run trials on a single thread.
        #[arg(long)]
        serial: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal width, cone gate counts and decoding cost for a family of codes.
    Complexity {
        #[command(flatten)]
        codes: CodeSet,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a single received word.
    Decode {
        /// Code file written by `build`.
        #[arg(long, conflicts_with_all = ["kernel", "depth", "steps"])]
        code: Option<PathBuf>,
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value = "1/3")]
        rate: String,
        /// Channel; defaults to the one stored in the code file.
        #[arg(long)]
        channel: Option<String>,
        #[arg(long)]
        width: Option<usize>,
        /// Received word as a string of 0s and 1s.
        #[arg(long)]
        received: String,
    },
}

#[derive(Args)]
struct SingleCode {
    /// cnot, g3, g4 or file:<path>
    #[arg(long, default_value = "cnot")]
    kernel: String,
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[arg(long)]
    steps: usize,
}

impl SingleCode {
    fn params(&self) -> Result<CodeParams> {
        Ok(CodeParams::new(
            parse_kernel(&self.kernel)?,
            self.depth,
            self.steps,
        ))
    }
}

#[derive(Args)]
struct CodeSet {
    /// Kernels, comma separated; combined with every depth and step count.
    #[arg(long, value_delimiter = ',', default_value = "cnot")]
    kernel: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    depth: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    steps: Vec<usize>,
    /// Explicit `kernel:depth:steps` triples, used instead of the product.
    #[arg(long = "code", value_delimiter = ',')]
    triples: Vec<String>,
}

impl CodeSet {
    fn params(&self) -> Result<Vec<CodeParams>> {
        if !self.triples.is_empty() {
            return self.triples.iter().map(|t| parse_triple(t)).collect();
        }
        if self.steps.is_empty() {
            return Err(Error::InvalidParameter("give --steps or --code".into()));
        }
        let mut out = Vec::new();
        for name in &self.kernel {
            let kernel = parse_kernel(name)?;
            for &d in &self.depth {
                for &l in &self.steps {
                    out.push(CodeParams::new(kernel.clone(), d, l));
                }
            }
        }
        Ok(out)
    }
}

fn parse_triple(text: &str) -> Result<CodeParams> {
    let bad = || {
        Error::Format(format!(
            "cannot parse code `{text}`, expected kernel:depth:steps"
        ))
    };
    let (rest, steps) = text.rsplit_once(':').ok_or_else(bad)?;
    let (kernel, depth) = rest.rsplit_once(':').ok_or_else(bad)?;
    Ok(CodeParams::new(
        parse_kernel(kernel)?,
        depth.parse().map_err(|_| bad())?,
        steps.parse().map_err(|_| bad())?,
    ))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn parse_word(text: &str) -> Result<Vec<u8>> {
    text.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Format(format!(
                "received word must be 0/1, got `{c}`"
            ))),
        })
        .collect()
}

fn bits(word: &[u8]) -> String {
    word.iter().map(|b| char::from(b'0' + b)).collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build {
            code,
            rate,
            channel,
            dump_gates,
            out,
        } => {
            let ch = ChannelModel::parse(&channel)?;
            let (code, _) =
                design_code(&code.params()?, ch.flip_probability(), Rate::parse(&rate)?)?;
            if let Some(path) = dump_gates {
                std::fs::write(path, code.circuit().gate_dump())?;
            }
            let text = CodeFile::from_code(&code, ch.flip_probability()).to_toml()?;
            output(out.as_deref())?.write_all(text.as_bytes())?;
        }
        Command::Profile { code, channel, out } => {
            let ch = ChannelModel::parse(&channel)?;
            let profile = pu_profile(&code.params()?.circuit()?, ch.flip_probability())?;
            profile.write_csv(output(out.as_deref())?)?;
        }
        Command::Detect {
            codes,
            rate,
            channel,
            out,
        } => {
            let spec = SweepSpec {
                codes: codes.params()?,
                flip_probability: ChannelModel::parse(&channel)?.flip_probability(),
                rate: Rate::parse(&rate)?,
                trials: 0,
                seed: 0,
                width: None,
            };
            write_detection_csv(output(out.as_deref())?, &detection_sweep(&spec)?)?;
        }
        Command::Simulate {
            codes,
            rate,
            channel,
            trials,
            seed,
            width,
            serial,
            out,
        } => {
            let spec = SweepSpec {
                codes: codes.params()?,
                flip_probability: ChannelModel::parse(&channel)?.flip_probability(),
                rate: Rate::parse(&rate)?,
                trials,
                seed,
                width,
            };
            let execution = if serial {
                Execution::Serial
            } else {
                Execution::Parallel
            };
            write_correction_csv(
                output(out.as_deref())?,
                &correction_sweep_with(&spec, execution)?,
            )?;
        }
        Command::Complexity { codes, out } => {
            let triples: Vec<_> = codes
                .params()?
                .iter()
                .map(|c| (c.kernel.breadth(), c.depth, c.steps))
                .collect();
            write_complexity_csv(output(out.as_deref())?, &complexity_table(&triples)?)?;
        }
        Command::Decode {
            code,
            kernel,
            depth,
            steps,
            rate,
            channel,
            width,
            received,
        } => {
            let (code, ch): (Code, ChannelModel) = match code {
                Some(path) => {
                    let file = CodeFile::load(&path)?;
                    let ch = match channel {
                        Some(c) => ChannelModel::parse(&c)?,
                        None => ChannelModel::bsc(file.flip_probability)?,
                    };
                    (file.to_code()?, ch)
                }
                None => {
                    let params = CodeParams::new(
                        parse_kernel(kernel.as_deref().unwrap_or("cnot"))?,
                        depth.unwrap_or(1),
                        steps.ok_or_else(|| {
                            Error::InvalidParameter("give --code or --steps".into())
                        })?,
                    );
                    let ch = ChannelModel::parse(channel.as_deref().unwrap_or("bsc:0.05"))?;
                    (
                        design_code(&params, ch.flip_probability(), Rate::parse(&rate)?)?.0,
                        ch,
                    )
                }
            };
            let y = parse_word(&received)?;
            let c = code.circuit();
            let width = width.unwrap_or_else(|| optimal_width(c.breadth(), c.depth()));
            let result = convpolar::decoder::sc_decode(&code, &ch, &y, width)?;
            let message: Vec<u8> = code
                .info_indices()
                .iter()
                .map(|&i| result.u_hat[i])
                .collect();
            let mut out = io::stdout().lock();
            writeln!(out, "input    {}", bits(&result.u_hat))?;
            writeln!(out, "message  {}", bits(&message))?;
            writeln!(out, "codeword {}", bits(&c.encode(&result.u_hat)?))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
