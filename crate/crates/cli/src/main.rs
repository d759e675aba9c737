use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use plemu::harness::{generate, run_case, suite, verify_emulator, BenchRow, Family, GeneratorSpec, Placement, WeightDist};
use plemu::pipeline::{build_oracle, emulate, Mode};
use plemu::Instance;

#[derive(Parser)]
#[command(name = "plemu", version, about = "Distance emulators for planar graphs with terminals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "unit")]
        weights: WeightDist,
        #[arg(long, default_value = "boundary", value_parser = parse_placement)]
        placement: Placement,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Separation weight for spread-stress.
        #[arg(long)]
        gap: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build an emulator.
    Emulate {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value = "general")]
        mode: Mode,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Answer `t1 t2` queries from stdin, one distance per line.
    Oracle {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
    },
    /// Check an emulator against the original exactly. Exits 1 on violation.
    Verify {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        emulator: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a benchmark suite and print CSV.
    Bench {
        #[arg(long, default_value = "default")]
        suite: String,
    },
}

fn parse_placement(s: &str) -> Result<Placement, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("unknown placement {s}"))
}

fn read_instance(p: &Path) -> Result<Instance> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    Instance::from_json_str(&text).with_context(|| format!("parsing {}", p.display()))
}

fn write_out(p: Option<&Path>, text: &str) -> Result<()> {
    match p {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen { family, size, k, weights, placement, seed, gap, output } => {
            let mut spec = GeneratorSpec::new(family, size, k).weights(weights).placement(placement).seed(seed);
            if let Some(g) = gap {
                spec = spec.gap(g);
            }
            let inst = generate(&spec)?;
            write_out(output.as_deref(), &inst.to_json_string())?;
        }
        Cmd::Emulate { input, eps, mode, output, report } => {
            let inst = read_instance(&input)?;
            let (emu, rep) = emulate(&inst, eps, mode)?;
            write_out(output.as_deref(), &emu.to_json_string())?;
            if let Some(r) = report {
                fs::write(&r, rep.to_json_string()).with_context(|| format!("writing {}", r.display()))?;
            }
            eprintln!("{} -> {} vertices, max distortion {:.6}", rep.input_vertices, rep.output_vertices, rep.max_distortion);
        }
        Cmd::Oracle { input, eps } => {
            let inst = read_instance(&input)?;
            let oracle = build_oracle(&inst, eps)?;
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for line in io::stdin().lock().lines() {
                let line = line?;
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let ids: Vec<&str> = line.split_whitespace().collect();
                if ids.len() != 2 {
                    bail!("expected two terminal ids, got {line:?}");
                }
                let a = ids[0].parse().with_context(|| format!("bad id {}", ids[0]))?;
                let b = ids[1].parse().with_context(|| format!("bad id {}", ids[1]))?;
                writeln!(out, "{}", oracle.query(a, b)?)?;
            }
        }
        Cmd::Verify { original, emulator, eps, report } => {
            let orig = read_instance(&original)?;
            let emu = read_instance(&emulator)?;
            let rep = verify_emulator(&orig, &emu, eps)?;
            let text = serde_json::to_string_pretty(&rep)?;
            match report {
                Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => println!("{text}"),
            }
            eprintln!("{}: max distortion {:.6} over {} pairs", if rep.pass { "PASS" } else { "FAIL" }, rep.max_distortion, rep.pairs);
            if !rep.pass {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Bench { suite: name } => {
            let cases = suite(&name)?;
            println!("{}", BenchRow::CSV_HEADER);
            for c in &cases {
                println!("{}", run_case(c)?.csv());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
