use clap::{Args, Parser, Subcommand};
use smoothpl::io::{run, write_json, Command, JobSpec};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "smoothpl", version, about = "Certified smoothing of PL maps")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Report destination (stdout when absent).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Sample count for grid certificates.
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for random samples; a lattice is used when absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sub {
    /// k-th barycentric subdivision with mesh certificate.
    Subdivide {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Simplicial approximation followed by smoothing.
    Approximate {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long)]
        ratio: Option<String>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cover_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Smooth a PL or polynomial-piece map into L.
    Smooth {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cover_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Smooth self-map iota_n of |K|.
    Iota {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cover_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Weak retraction onto a coordinate crossings divisor.
    Retraction {
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check a serialized cover.
    Verify {
        #[arg(long)]
        cover: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn job(sub: Sub) -> (JobSpec, Option<PathBuf>) {
    let mut j = JobSpec::default();
    let common = match sub {
        Sub::Subdivide { complex, k, out, common } => {
            j.command = Some(Command::Subdivide);
            (j.complex, j.k, j.out) = (Some(complex), Some(k), out);
            common
        }
        Sub::Approximate { complex, target, map, eps, nu, ratio, cap, out, cover_out, common } => {
            j.command = Some(Command::Approximate);
            (j.complex, j.target, j.map, j.eps, j.nu) = (Some(complex), Some(target), Some(map), Some(eps), nu);
            (j.ratio, j.cap, j.out, j.cover_out) = (ratio, cap, out, cover_out);
            common
        }
        Sub::Smooth { complex, target, map, eta, nu, out, cover_out, common } => {
            j.command = Some(Command::Smooth);
            (j.complex, j.target, j.map, j.eta, j.nu) = (Some(complex), Some(target), Some(map), Some(eta), nu);
            (j.out, j.cover_out) = (out, cover_out);
            common
        }
        Sub::Iota { complex, n, nu, out, cover_out, common } => {
            j.command = Some(Command::Iota);
            (j.complex, j.n, j.nu, j.out, j.cover_out) = (Some(complex), Some(n), nu, out, cover_out);
            common
        }
        Sub::Retraction { divisor, out, common } => {
            j.command = Some(Command::Retraction);
            (j.divisor, j.out) = (Some(divisor), out);
            common
        }
        Sub::Verify { cover, common } => {
            j.command = Some(Command::Verify);
            j.cover = Some(cover);
            common
        }
    };
    (j.samples, j.seed, j.csv) = (common.samples, common.seed, common.csv);
    (j, common.report)
}

fn main() -> ExitCode {
    let (spec, report_path) = job(Cli::parse().command);
    let start = Instant::now();
    let result = run(&spec);
    eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Ok(report) => {
            let code = report.exit_code() as u8;
            match &report_path {
                Some(path) => {
                    if let Err(e) = write_json(path, &report) {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
            }
            ExitCode::from(code)
        }
    }
}
