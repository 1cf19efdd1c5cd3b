use clap::{Parser, ValueEnum};
use manifold_cert::io::{run_pipeline, Mode, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Float,
    Interval,
}

/// Compute certified Taylor parametrisations of the local stable and
/// unstable manifolds of an analytic saddle.
#[derive(Parser, Debug)]
#[command(name = "manifold-cert", version, about)]
struct Args {
    /// System definition file.
    #[arg(long)]
    input: PathBuf,

    /// Truncation order n1 of the parametrisations.
    #[arg(long = "order", default_value_t = 81)]
    order: u32,

    /// Arithmetic mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Float)]
    mode: ModeArg,

    /// Tail cut-off order for the quadratic bound (defaults to the degree of
    /// the nonlinearity).
    #[arg(long)]
    rho: Option<u32>,

    /// Also compute the normal-form tail up to this order.
    #[arg(long = "with-G", value_name = "N")]
    with_g: Option<u32>,

    /// Enclosure samples per manifold side.
    #[arg(long, default_value_t = 100)]
    samples: usize,

    /// Output directory for all artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = RunConfig {
        input: args.input,
        order: args.order,
        mode: match args.mode {
            ModeArg::Float => Mode::Float,
            ModeArg::Interval => Mode::Interval,
        },
        rho: args.rho,
        tail_order: args.with_g,
        samples: args.samples,
        out_dir: args.out,
    };
    match run_pipeline(&cfg) {
        Ok(artifacts) => {
            println!(
                "certified: r_theta = {:.6}, C = {:.4}, M = {:.4} ({} shrinks)",
                artifacts.r_theta, artifacts.c_fit, artifacts.m_fit, artifacts.shrink_iterations
            );
            println!("certificate: {}", artifacts.certificate_path.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
