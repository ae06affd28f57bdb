use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};

use omegalab::ait::{self, MonteCarloEstimate};
use omegalab::beaver::{self, db};
use omegalab::bits::BitString;
use omegalab::chaitin;
use omegalab::explorations as ex;
use omegalab::mdl;
use omegalab::prefix;
use omegalab::profiler::{self, Field, InputFamily};
use omegalab::tm::{self, Machine, RunLimits, DEFAULT_HISTORY_CAP};
use omegalab::universal::{self, MachineCode};

#[derive(Debug, Parser)]
#[command(name = "omegalab", version, about = "Computability and algorithmic-information workbench")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Encoding {
    Unary,
    Log,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Approximator {
    /// k(n) = isqrt(2n²), brackets √2
    Sqrt2,
    /// k(n) = round(n/2), brackets 1/2
    Half,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FitField {
    T,
    S,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a machine (.mdl) on an input tape
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, default_value_t = DEFAULT_HISTORY_CAP)]
        history_cap: usize,
    },
    /// Run a machine code through the universal interpreter
    Utm {
        /// File holding the code as 0/1 text or in packed form
        #[arg(long, conflicts_with = "bits")]
        code: Option<PathBuf>,
        #[arg(long)]
        bits: Option<String>,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
    },
    /// Encode a machine (.mdl) as a self-delimiting code
    Encode {
        #[arg(long)]
        machine: PathBuf,
        /// Also write the packed binary form here
        #[arg(long)]
        packed: Option<PathBuf>,
    },
    /// Decode a machine code back to .mdl text
    Decode {
        #[arg(long, conflicts_with = "bits")]
        code: Option<PathBuf>,
        #[arg(long)]
        bits: Option<String>,
    },
    /// Check a comma-separated set for prefix-freeness and its Kraft sum
    Prefix {
        #[arg(long)]
        set: String,
        /// Self-delimit every member first
        #[arg(long, value_enum)]
        encode: Option<Encoding>,
    },
    /// Run a Chaitin machine (.cm) on a program, or list its halting set
    CmRun {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, required_unless_present = "halting_set")]
        program: Option<String>,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Enumerate halting programs up to this length instead
        #[arg(long)]
        halting_set: Option<usize>,
    },
    /// Upper bound on H(x) with a randomness-deficiency verdict
    HUpper {
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 24)]
        max_len: usize,
        #[arg(long, default_value_t = 200)]
        budget: u64,
        /// Check this program instead of searching
        #[arg(long)]
        witness: Option<String>,
        #[arg(long, default_value_t = DEFAULT_HISTORY_CAP)]
        history_cap: usize,
    },
    /// Exact lower bound on the universal probability P_U(x)
    Pu {
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 24)]
        max_len: usize,
        #[arg(long, default_value_t = 200)]
        budget: u64,
    },
    /// Exact lower bound Ω_N over programs shorter than max-len bits
    Omega {
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 500)]
        budget: u64,
        /// Also list the halting programs
        #[arg(long)]
        list: bool,
    },
    /// Monte Carlo estimate of the halting probability
    OmegaMc {
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 500)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        length_cap: usize,
    },
    /// Classify an n-state class: Σ(n) and S(n)
    Beaver {
        #[arg(long)]
        states: usize,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Stream records to this .bbdb file (resumable)
        #[arg(long)]
        db: Option<PathBuf>,
        #[arg(long, default_value_t = db::DEFAULT_CHUNK)]
        chunk: u64,
    },
    /// Largest integer named by a program of at most max-len bits
    SigmaN {
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 500)]
        budget: u64,
    },
    /// Negated diagonal of a bit table
    Diagonal {
        /// Comma-separated rows
        #[arg(long, conflicts_with = "table")]
        rows: Option<String>,
        /// File with one row per line
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Collatz trajectory of one start value
    Collatz {
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Verify every start value in [lo, hi] reaches 1
    CollatzRange {
        #[arg(long)]
        lo: String,
        #[arg(long)]
        hi: String,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Thue-Morse word t_k
    ThueMorse {
        #[arg(long)]
        k: u32,
    },
    /// Check a word for cubes ppp
    CubeFree {
        #[arg(long)]
        word: String,
    },
    /// Rational brackets (k-1)/n < x < (k+1)/n
    RealBounds {
        #[arg(long, value_enum)]
        real: Approximator,
        #[arg(long)]
        n: String,
    },
    /// N_max from N_max^k · ell^alpha = c
    Scaling {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        ell: f64,
    },
    /// Measure t(N), s(N) over an input family and fit a power law
    Profile {
        #[arg(long)]
        machine: PathBuf,
        /// unary or binary-counter
        #[arg(long, default_value = "unary")]
        family: String,
        /// Comma-separated, strictly increasing sizes
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, value_enum)]
        fit: Option<FitField>,
        /// Write the CSV here instead of standard output
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn parse_bits(what: &str, s: &str) -> Result<BitString> {
    s.trim().parse().with_context(|| format!("{what} must be a 0/1 string"))
}

fn parse_big(what: &str, s: &str) -> Result<BigUint> {
    s.trim().parse().with_context(|| format!("{what} must be a non-negative integer"))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_machine(path: &Path) -> Result<Machine> {
    let text = read_text(path)?;
    mdl::parse_machine(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_code(code: Option<&Path>, bits: Option<&str>) -> Result<BitString> {
    match (code, bits) {
        (Some(path), _) => {
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(MachineCode::parse_serialized(&bytes)?)
        }
        (None, Some(b)) => parse_bits("--bits", b),
        (None, None) => bail!("one of --code or --bits is required"),
    }
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).collect()
}

fn list(xs: &[BitString]) -> String {
    xs.iter().map(BitString::to_string).collect::<Vec<_>>().join(",")
}

pub fn execute(cli: Cli) -> Result<String> {
    let mut out = String::new();
    match cli.command {
        Command::Run {
            machine,
            input,
            budget,
            history_cap,
        } => {
            let m = load_machine(&machine)?;
            let input = parse_bits("--input", &input)?;
            let outcome = tm::run_with_limits(&m, &input, RunLimits { budget, history_cap })?;
            writeln!(out, "{outcome}")?;
        }
        Command::Utm {
            code,
            bits,
            input,
            budget,
        } => {
            let code = load_code(code.as_deref(), bits.as_deref())?;
            let input = parse_bits("--input", &input)?;
            writeln!(out, "{}", universal::utm_run(&code, &input, budget)?)?;
        }
        Command::Encode { machine, packed } => {
            let code = universal::encode_machine(&load_machine(&machine)?);
            writeln!(out, "code = {code}")?;
            writeln!(out, "length = {}", code.len())?;
            if let Some(path) = packed {
                fs::write(&path, code.to_packed()).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Decode { code, bits } => {
            let code = load_code(code.as_deref(), bits.as_deref())?;
            out.push_str(&mdl::render_machine(&universal::decode_machine(&code)?));
        }
        Command::Prefix { set, encode } => {
            let mut members = split_list(&set)
                .into_iter()
                .map(|m| parse_bits("--set member", m))
                .collect::<Result<Vec<_>>>()?;
            if let Some(enc) = encode {
                let f = match enc {
                    Encoding::Unary => prefix::self_delimit_unary,
                    Encoding::Log => prefix::self_delimit_log,
                };
                members = members.iter().map(f).collect();
            }
            writeln!(out, "members = {}", list(&members))?;
            match prefix::is_prefix_free(&members) {
                Ok(()) => {
                    writeln!(out, "prefix_free = true")?;
                    let k = prefix::kraft_sum(&members)?;
                    writeln!(out, "kraft_sum = {k} (≈ {})", k.to_decimal(12))?;
                }
                Err(w) => {
                    writeln!(out, "prefix_free = false")?;
                    writeln!(out, "witness = {} {}", w.prefix, w.extension)?;
                }
            }
        }
        Command::CmRun {
            machine,
            program,
            input,
            budget,
            halting_set,
        } => {
            let text = read_text(&machine)?;
            let cm = mdl::parse_chaitin(&text).with_context(|| format!("parsing {}", machine.display()))?;
            if let Some(max_len) = halting_set {
                let set = chaitin::halting_set(&cm, max_len, budget)?;
                writeln!(out, "halting = {}", list(set.members()))?;
                writeln!(out, "count = {}", set.len())?;
                let k = set.kraft_sum();
                writeln!(out, "kraft_sum = {k} (≈ {})", k.to_decimal(12))?;
            } else {
                let p = parse_bits("--program", program.as_deref().unwrap_or_default())?;
                let q = parse_bits("--input", &input)?;
                writeln!(out, "{}", chaitin::run_cm(&cm, &p, &q, budget)?)?;
            }
        }
        Command::HUpper {
            target,
            max_len,
            budget,
            witness,
            history_cap,
        } => {
            let x = parse_bits("--target", &target)?;
            let bound = match witness {
                Some(w) => ait::verify_witness(&x, &parse_bits("--witness", &w)?, RunLimits { budget, history_cap })?,
                None => ait::h_upper(&x, max_len, budget)?,
            };
            writeln!(out, "{}", ait::deficiency_of(bound))?;
        }
        Command::Pu {
            target,
            max_len,
            budget,
        } => {
            let x = parse_bits("--target", &target)?;
            let p = ait::p_u_lower(&x, max_len, budget)?;
            writeln!(out, "target = {x}")?;
            writeln!(out, "p_u_lower = {p} (≈ {})", p.to_decimal(12))?;
            writeln!(out, "max_len = {max_len}")?;
            writeln!(out, "budget = {budget}")?;
        }
        Command::Omega { max_len, budget, list: show } => {
            let est = ait::omega_lower(max_len, budget)?;
            writeln!(out, "{est}")?;
            if show {
                for p in est.halted_programs.members() {
                    writeln!(out, "program = {p}")?;
                }
            }
        }
        Command::OmegaMc {
            samples,
            budget,
            seed,
            length_cap,
        } => {
            let est: MonteCarloEstimate = ait::omega_montecarlo(samples, budget, seed, length_cap)?;
            writeln!(out, "{est}")?;
            writeln!(out, "seed = {seed}")?;
        }
        Command::Beaver {
            states,
            budget,
            db: path,
            chunk,
        } => {
            let report = match path {
                Some(p) => db::classify_to_db(&p, states, budget, chunk)?,
                None => beaver::sigma(states, budget)?,
            };
            writeln!(out, "{report}")?;
        }
        Command::SigmaN { max_len, budget } => {
            match beaver::sigma_program(max_len, budget)? {
                Some(s) => {
                    writeln!(out, "sigma = {}", s.value)?;
                    writeln!(out, "witness = {}", s.witness)?;
                }
                None => writeln!(out, "sigma = none")?,
            }
            writeln!(out, "max_len = {max_len}")?;
            writeln!(out, "budget = {budget}")?;
        }
        Command::Diagonal { rows, table } => {
            let text = match (rows, table) {
                (Some(r), _) => r.replace(',', "\n"),
                (None, Some(path)) => read_text(&path)?,
                (None, None) => bail!("one of --rows or --table is required"),
            };
            let rows = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(|l| parse_bits("table row", l))
                .collect::<Result<Vec<_>>>()?;
            let table = ex::BitTable::new(rows)?;
            writeln!(out, "diagonal = {}", ex::diagonal(&table))?;
        }
        Command::Collatz { n, budget } => {
            let n = parse_big("--n", &n)?;
            match ex::collatz_steps(&n, budget)? {
                ex::CollatzOutcome::Reached { steps, peak } => {
                    writeln!(out, "n = {n}")?;
                    writeln!(out, "steps = {steps}")?;
                    writeln!(out, "peak = {peak}")?;
                }
                ex::CollatzOutcome::BudgetExceeded { steps } => {
                    writeln!(out, "n = {n}")?;
                    writeln!(out, "budget-exceeded steps = {steps}")?;
                }
            }
        }
        Command::CollatzRange { lo, hi, budget } => {
            let report = ex::collatz_verify_range(&parse_big("--lo", &lo)?, &parse_big("--hi", &hi)?, budget)?;
            writeln!(out, "{report}")?;
        }
        Command::ThueMorse { k } => {
            writeln!(out, "{}", ex::thue_morse(k)?)?;
        }
        Command::CubeFree { word } => {
            let x = parse_bits("--word", &word)?;
            match ex::is_cube_free(&x) {
                Ok(()) => writeln!(out, "cube_free = true")?,
                Err(c) => {
                    writeln!(out, "cube_free = false")?;
                    writeln!(out, "position = {}", c.position)?;
                    writeln!(out, "period = {}", c.period)?;
                    writeln!(out, "factor = {}", c.factor)?;
                }
            }
        }
        Command::RealBounds { real, n } => {
            let n = parse_big("--n", &n)?;
            let (lo, hi) = match real {
                Approximator::Sqrt2 => ex::computable_real_bounds(ex::sqrt2_approximator, &n)?,
                Approximator::Half => ex::computable_real_bounds(|n| BigInt::from((n + 1u8) / 2u8), &n)?,
            };
            writeln!(out, "lo = {lo}")?;
            writeln!(out, "hi = {hi}")?;
        }
        Command::Scaling { k, alpha, c, ell } => {
            let law = ex::ScalingLaw::new(k, alpha, c)?;
            writeln!(out, "n_max = {:.12}", ex::scaling_nmax(&law, ell)?)?;
        }
        Command::Profile {
            machine,
            family,
            sizes,
            budget,
            fit,
            csv,
        } => {
            let m = load_machine(&machine)?;
            let family = InputFamily::by_name(&family)?;
            let sizes = split_list(&sizes)
                .into_iter()
                .map(|s| s.parse::<u64>().with_context(|| format!("bad size {s:?}")))
                .collect::<Result<Vec<_>>>()?;
            let profile = profiler::measure_scaling(&m, &family, &sizes, budget)?;
            match csv {
                Some(path) => fs::write(&path, profile.to_csv()).with_context(|| format!("writing {}", path.display()))?,
                None => out.push_str(&profile.to_csv()),
            }
            let gaps = profile.gaps.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            writeln!(out, "# gaps = {}", if gaps.is_empty() { "-" } else { &gaps })?;
            if let Some(f) = fit {
                let field = match f {
                    FitField::T => Field::Time,
                    FitField::S => Field::Space,
                };
                let fit = profiler::fit_power_law(&profile.samples, field)?;
                for line in fit.to_string().lines() {
                    writeln!(out, "# {line}")?;
                }
            }
        }
    }
    Ok(out)
}
