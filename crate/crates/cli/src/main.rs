use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use btu_core::format::{parse_auto, to_alist, to_dot, SearchReport};
use btu_core::{
    cayley_stats, enumerate_candidates, enumerate_z, factorize, max_girth, optimal_partitions,
    search, verify_search, Btu, Matrix, Permutation, RotationPolicy, SearchConfig, SearchMode,
};
use clap::{Parser, Subcommand, ValueEnum};

/// Search and inspect girth-maximum (m, r) balanced Tanner units.
#[derive(Debug, Parser)]
#[command(name = "btu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factor m = b·k^(r-1) and print the optimal adjacent partitions.
    Params {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        r: usize,
    },
    /// Run the staged search.
    Search {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        r: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Best)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = PolicyArg::Relaxed)]
        policy: PolicyArg,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        workers: u64,
        /// Cap on q words and enumerated last slots tried per stage.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cap: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutFormat::Matrix)]
        format: OutFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Leave elapsed_ms out of JSON output.
        #[arg(long)]
        no_timing: bool,
    },
    /// Exhaustive maximum girth over all labeled BTUs (small sizes only).
    Oracle {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        r: usize,
        /// Pin slot 1 to the identity.
        #[arg(long)]
        fix_first: bool,
    },
    /// Compare the search against the oracle.
    Verify {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        r: usize,
    },
    /// Girth of a matrix or alist file.
    Girth {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        witness: bool,
    },
    /// List single-cycle candidates against a base permutation.
    Candidates {
        #[arg(short)]
        n: usize,
        /// Base permutation, 1-based, e.g. "2 3 1" (identity by default).
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Block-diagonal k-fold scaling of a permutation.
    Scale {
        #[arg(short)]
        p: String,
        #[arg(short)]
        k: usize,
    },
    /// Enumerate the scaled-structure family for (m, r).
    EnumZ {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        r: usize,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Search-space statistics at a stage.
    Cayley {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        r: usize,
        #[arg(short = 'i')]
        stage: usize,
    },
    /// Convert a matrix or alist file.
    Export {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Best,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Strict,
    Relaxed,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Alist,
    Dot,
    Matrix,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExportFormat {
    Alist,
    Dot,
    Matrix,
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_auto(&text).with_context(|| format!("parsing {}", path.display()))
}

fn json(value: &impl serde::Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Params { m, r } => {
            let f = factorize(m, r)?;
            println!("{f}");
            if let Some(w) = f.density_warning() {
                eprintln!("warning: {w}");
            }
            let set = optimal_partitions(&f)?;
            println!("betas: {set}");
        }
        Command::Search {
            m,
            r,
            mode,
            policy,
            workers,
            cap,
            format,
            output,
            no_timing,
        } => {
            let config = SearchConfig {
                mode: match mode {
                    ModeArg::Best => SearchMode::Best,
                    ModeArg::Exhaustive => SearchMode::Exhaustive,
                },
                rotation_policy: match policy {
                    PolicyArg::Strict => RotationPolicy::Strict,
                    PolicyArg::Relaxed => RotationPolicy::Relaxed,
                    PolicyArg::Full => RotationPolicy::Full,
                },
                worker_count: usize::try_from(workers)?,
                candidate_cap: cap.map(u128::from),
            };
            let start = Instant::now();
            let res = search(m, r, &config)?;
            let elapsed = u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX);
            eprintln!("{}: girth {}", res.factorization, res.girth);
            let mat = res.btu.to_biadjacency();
            let text = match format {
                OutFormat::Alist => to_alist(&mat),
                OutFormat::Dot => to_dot(&mat),
                OutFormat::Matrix => mat.to_string(),
                OutFormat::Json => json(&SearchReport::from_result(
                    &res,
                    (!no_timing).then_some(elapsed),
                ))?,
            };
            emit(output.as_deref(), &text)?;
        }
        Command::Oracle { m, r, fix_first } => {
            let report = max_girth(m, r, fix_first)?;
            emit(None, &json(&report)?)?;
        }
        Command::Verify { m, r } => {
            let report = verify_search(m, r)?;
            if !report.equal {
                eprintln!("note: engine and oracle disagree at ({m},{r})");
            }
            emit(None, &json(&report)?)?;
        }
        Command::Girth { input, witness } => {
            let btu = read_matrix(&input)?.decompose()?;
            let report = if witness {
                btu.girth_with_witness()
            } else {
                btu.girth()
            };
            match report.girth {
                Some(g) => println!("girth {g}"),
                None => println!("girth inf"),
            }
            if let Some(cycle) = report.witness_cycle {
                let names: Vec<String> = cycle.iter().map(ToString::to_string).collect();
                println!("witness {}", names.join(" "));
            }
        }
        Command::Candidates { n, base, limit } => {
            let base = match base {
                Some(text) => text.parse::<Permutation>()?,
                None => Permutation::identity(n)?,
            };
            if base.degree() != n {
                bail!("base has degree {}, expected {n}", base.degree());
            }
            let mut out = String::new();
            for (w, q) in enumerate_candidates(&base, limit.map(u128::from))? {
                out.push_str(&format!("{}\t{}\t{}\n", w.lex_index(), w.word, q));
            }
            emit(None, &out)?;
        }
        Command::Scale { p, k } => {
            let p: Permutation = p.parse()?;
            println!("{}", p.scale(k)?);
        }
        Command::EnumZ { m, r, cap } => {
            let mut out = io::stdout().lock();
            let mut count = 0u64;
            for btu in enumerate_z(m, r, cap)? {
                let g = btu
                    .girth()
                    .girth
                    .map_or("inf".to_string(), |g| g.to_string());
                writeln!(out, "{btu}\tgirth={g}")?;
                count += 1;
            }
            out.flush()?;
            eprintln!("{count} BTUs");
        }
        Command::Cayley { m, r, stage } => {
            let f = factorize(m, r)?;
            let s = cayley_stats(&f, stage)?;
            println!(
                "S_{}: order={} node_degree={} transition_bound={}",
                s.degree_sym, s.order, s.node_degree, s.transition_bound
            );
        }
        Command::Export {
            input,
            format,
            output,
        } => {
            let mat = read_matrix(&input)?;
            // reject irregular input early
            let _: Btu = mat.decompose()?;
            let text = match format {
                ExportFormat::Alist => to_alist(&mat),
                ExportFormat::Dot => to_dot(&mat),
                ExportFormat::Matrix => mat.to_string(),
            };
            emit(output.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(u8::try_from(code).unwrap_or(2));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
