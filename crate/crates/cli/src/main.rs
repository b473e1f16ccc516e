use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use beclab::channel::ReceivedWord;
use beclab::codes::spec_file::{CodeSpecFile, Family};
use beclab::codes::{alist, catalog, Code};
use beclab::decoders::{Decoder, Status};
use beclab::packet::{
    inject_loss, read_packets, write_packets, LossConfig, PacketError, PacketMatrix,
};
use beclab::sim::{
    fer_csv_string, parse_grid, run_fer_sweep, run_shortfall_census, SimTarget, SweepConfig,
};

/// Erasure-channel decoding lab.
#[derive(Parser)]
#[command(name = "beclab", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the parameters of a code.
    CodeInfo {
        #[command(flatten)]
        code: CodeArgs,
        /// Also write the parity-check matrix in alist format.
        #[arg(long)]
        write_alist: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Frame error rate over an erasure-probability grid.
    SimFer {
        #[command(flatten)]
        code: CodeArgs,
        /// recovery, guess, multiguess, inplace or lt.
        #[arg(long, default_value = "inplace")]
        decoder: String,
        #[arg(long, default_value_t = 2)]
        gs: usize,
        /// Grid as start:stop:step, or a single value.
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Stop a grid point after this many frame errors.
        #[arg(long)]
        stop_after: Option<u64>,
        #[arg(long)]
        random_codewords: bool,
        /// LT source bits (decoder lt).
        #[arg(long)]
        lt_k: Option<usize>,
        /// LT output symbols sent (decoder lt).
        #[arg(long)]
        lt_symbols: Option<usize>,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distribution of how many of n-k erasures the optimal decoder corrects.
    SimShortfall {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode one word written over 0, 1 and ? (erasure).
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value = "inplace")]
        decoder: String,
        #[arg(long, default_value_t = 2)]
        gs: usize,
        #[arg(long)]
        word: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Encode a file into packets.
    EncodePackets {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 100)]
        packet_bits: usize,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0)]
        stream_id: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rebuild a file from received packets.
    DecodePackets {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 100)]
        packet_bits: usize,
        #[arg(long, default_value = "inplace")]
        decoder: String,
        #[arg(long, default_value_t = 2)]
        gs: usize,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Drop packets from a packet file.
    InjectLoss {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        drop_prob: f64,
        /// Comma-separated row indices dropped from every matrix.
        #[arg(long, value_delimiter = ',')]
        drop_rows: Vec<u16>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct CodeArgs {
    /// Catalog name or n,k, e.g. ldpc255 or (255,175).
    #[arg(long, conflicts_with_all = ["spec", "alist", "family"])]
    code: Option<String>,
    /// Code definition file (key = value lines).
    #[arg(long, conflicts_with_all = ["alist", "family"])]
    spec: Option<PathBuf>,
    #[arg(long, conflicts_with = "family")]
    alist: Option<PathBuf>,
    /// cyclic or generator, with --n and --poly.
    #[arg(long, requires_all = ["n", "poly"])]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    /// File listing the polynomial's exponents.
    #[arg(long)]
    poly: Option<PathBuf>,
}

impl CodeArgs {
    fn load(&self) -> Result<Code> {
        if let Some(name) = &self.code {
            return Ok(catalog::by_name(name)?);
        }
        if let Some(path) = &self.spec {
            return Ok(CodeSpecFile::read(path)?.build()?);
        }
        if let Some(path) = &self.alist {
            return Ok(alist::read_alist(path)?);
        }
        if let (Some(family), Some(n), Some(poly)) = (&self.family, self.n, &self.poly) {
            let mut spec = CodeSpecFile::new(family.clone(), n);
            spec.support = read_support(poly)?;
            return Ok(spec.build()?);
        }
        bail!("no code given; use --code, --spec, --alist or --family with --n and --poly")
    }

    fn given(&self) -> bool {
        self.code.is_some() || self.spec.is_some() || self.alist.is_some() || self.family.is_some()
    }
}

fn read_support(path: &Path) -> Result<Vec<usize>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .flat_map(|l| l.split('#').next().unwrap_or("").split([',', ' ', '\t']))
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .with_context(|| format!("{}: bad exponent {t:?}", path.display()))
        })
        .collect()
}

fn decoder(kind: &str, gs: usize) -> Result<Decoder> {
    Ok(Decoder::from_kind(kind, gs)?)
}

fn seed_note(seed: Option<u64>) -> String {
    seed.map_or_else(|| "seed=none".into(), |s| format!("seed={s}"))
}

fn write_out(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn read_in(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

/// Exit status 1 means the data could not be decoded.
struct DecodeFailed;

fn run(cli: Cli) -> Result<Option<DecodeFailed>> {
    match cli.command {
        Command::CodeInfo {
            code,
            write_alist,
            seed,
        } => {
            let code = code.load()?;
            let weights = code.row_weights();
            let (wmin, wmax) = (weights.iter().min().copied(), weights.iter().max().copied());
            println!("name: {}", code.name());
            println!("n: {}", code.n());
            println!("k: {}", code.k());
            println!("rank: {}", code.redundancy());
            println!("rows: {}", code.h().rows());
            match (wmin, wmax) {
                (Some(a), Some(b)) if a == b => println!("row weight: {a}"),
                (Some(a), Some(b)) => println!("row weight: {a}..{b}"),
                _ => println!("row weight: 0"),
            }
            match code.dmin_claimed() {
                Some(d) => println!("claimed dmin: {d}"),
                None => println!("claimed dmin: unknown"),
            }
            println!("{}", seed_note(seed));
            if let Some(path) = write_alist {
                alist::write_alist(&code, &path)?;
            }
        }
        Command::SimFer {
            code,
            decoder: kind,
            gs,
            eps,
            trials,
            seed,
            stop_after,
            random_codewords,
            lt_k,
            lt_symbols,
            out,
        } => {
            let target = if kind == "lt" {
                let (Some(k), Some(s)) = (lt_k, lt_symbols) else {
                    bail!("decoder lt needs --lt-k and --lt-symbols");
                };
                if code.given() {
                    bail!("decoder lt takes no code");
                }
                SimTarget::lt(k, s)?
            } else {
                SimTarget::Block {
                    code: code.load()?,
                    decoder: decoder(&kind, gs)?,
                }
            };
            let label = target.label();
            let mut cfg = SweepConfig::new(target, parse_grid(&eps)?, trials, seed);
            cfg.stop_after_errors = stop_after;
            cfg.random_codewords = random_codewords;
            let table = run_fer_sweep(&cfg)?;
            let csv = fer_csv_string(&table)?;
            let mut summary = format!("{label} trials={trials} seed={seed}\n");
            for p in &table {
                summary += &format!(
                    "eps={} fer={} [{}, {}] errors={}/{}\n",
                    p.epsilon, p.fer, p.ci_low, p.ci_high, p.frame_errors, p.trials
                );
            }
            match out {
                Some(path) => {
                    write_out(&path, csv.as_bytes())?;
                    print!("{summary}");
                }
                None => {
                    print!("{csv}");
                    eprint!("{summary}");
                }
            }
        }
        Command::SimShortfall {
            code,
            trials,
            seed,
            out,
        } => {
            let code = code.load()?;
            let stats = run_shortfall_census(&code, trials, seed)?;
            let summary = format!(
                "{} trials={trials} seed={seed}\nmax correctable: {}\nmean corrected: {}\nmean shortfall: {}\n",
                code.name(),
                stats.max_correctable,
                stats.mean_corrected(),
                stats.mean_shortfall()
            );
            match out {
                Some(path) => {
                    write_out(&path, stats.csv_string().as_bytes())?;
                    print!("{summary}");
                }
                None => {
                    print!("{}", stats.csv_string());
                    eprint!("{summary}");
                }
            }
        }
        Command::Decode {
            code,
            decoder: kind,
            gs,
            word,
            seed,
        } => {
            let code = code.load()?;
            let rw: ReceivedWord = word.trim().parse()?;
            let out = decoder(&kind, gs)?.decode(&code, &rw)?;
            let status = match out.status {
                Status::Recovered => "recovered",
                Status::Ambiguous => "ambiguous",
                Status::Failure => "failure",
            };
            match &out.word {
                Some(w) => println!(
                    "{}",
                    ReceivedWord::new(w, beclab::gf2::BitVec::zeros(w.len()))
                ),
                None => println!("{rw}"),
            }
            println!(
                "status={status} guesses={} erasures={} {}",
                out.guesses_used,
                rw.erasure_count(),
                seed_note(seed)
            );
            if !out.is_recovered() {
                return Ok(Some(DecodeFailed));
            }
        }
        Command::EncodePackets {
            code,
            packet_bits,
            input,
            output,
            stream_id,
            seed,
        } => {
            let pm = PacketMatrix::new(&code.load()?, packet_bits)?;
            let data = read_in(&input)?;
            let packets = pm.encode(&data, stream_id);
            write_out(&output, &write_packets(&packets))?;
            println!(
                "{} bytes -> {} matrices, {} packets of {} bits, {}",
                data.len(),
                pm.matrices_for(data.len()),
                packets.len(),
                packet_bits,
                seed_note(seed)
            );
        }
        Command::DecodePackets {
            code,
            packet_bits,
            decoder: kind,
            gs,
            input,
            output,
            seed,
        } => {
            let pm = PacketMatrix::new(&code.load()?, packet_bits)?;
            let (packets, dropped) = read_packets(&read_in(&input)?);
            match pm.decode(&packets, decoder(&kind, gs)?) {
                Ok(decoded) => {
                    write_out(&output, &decoded.data)?;
                    let s = decoded.stats;
                    println!(
                        "{} bytes from {} packets ({} corrupt, {} duplicate, {} ignored) in {} matrices, {}",
                        decoded.data.len(),
                        s.received,
                        dropped,
                        s.duplicates,
                        s.ignored,
                        s.matrices,
                        seed_note(seed)
                    );
                }
                Err(PacketError::Undecodable { total, failures }) => {
                    println!(
                        "{} of {total} matrices undecodable, {}",
                        failures.len(),
                        seed_note(seed)
                    );
                    for f in failures {
                        println!(
                            "matrix {}: {} received, {} erased, rank deficit {}",
                            f.matrix, f.received, f.erased, f.rank_deficit
                        );
                    }
                    return Ok(Some(DecodeFailed));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::InjectLoss {
            input,
            output,
            drop_prob,
            drop_rows,
            seed,
        } => {
            if !(0.0..=1.0).contains(&drop_prob) {
                bail!("--drop-prob must lie in [0, 1]");
            }
            let (packets, dropped) = read_packets(&read_in(&input)?);
            let cfg = LossConfig {
                drop_prob,
                drop_rows,
                seed,
            };
            let kept = inject_loss(&packets, &cfg);
            write_out(&output, &write_packets(&kept))?;
            println!(
                "kept {} of {} packets ({dropped} unreadable), seed={seed}",
                kept.len(),
                packets.len()
            );
        }
    }
    Ok(None)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(DecodeFailed)) => ExitCode::from(1),
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e:#}");
            ExitCode::from(2)
        }
    }
}
