use std::path::PathBuf;
use std::process::ExitCode;

use backbone::family::{
    certify_with, construct_pair_ssf, construct_selector_with, construct_ssf_with, CertifyConfig,
    ConstructionConfig,
};
use backbone::pipeline::{self, GeneratorSpec, InstanceSource, Mode, RunConfig, SweepGrid};
use backbone::sinr::{range, SinrParams};
use backbone::verifier::VerifierConfig;
use backbone::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "backbone",
    version,
    about = "Deterministic backbone construction in the SINR model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a connected random instance and write it as JSON.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        phys: PhysArgs,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the full protocol on one instance and verify the result.
    Run(RunArgs),
    /// Run a grid of generated instances and write a CSV table.
    Sweep {
        /// Grid description (JSON with n, n_labels, density, seeds).
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Construct and certify a single selection family.
    Family(FamilyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 40)]
    n: usize,
    /// Label space size N.
    #[arg(long, default_value_t = 64)]
    labels: u32,
    /// Arena side; overrides --mean-degree.
    #[arg(long)]
    arena: Option<f64>,
    #[arg(long, default_value_t = 8.0)]
    mean_degree: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PhysArgs {
    #[arg(long, default_value_t = 4.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Overrides the unit-range noise.
    #[arg(long)]
    noise: Option<f64>,
    /// Overrides the unit-range power.
    #[arg(long)]
    power: Option<f64>,
}

impl PhysArgs {
    fn params(&self) -> Result<SinrParams> {
        let mut p = SinrParams::unit_range(self.alpha, self.beta, self.epsilon);
        if let Some(n) = self.noise {
            p.noise = n;
        }
        if let Some(w) = self.power {
            p.power = w;
        }
        p.validate()?;
        Ok(p)
    }
}

impl GenArgs {
    fn spec(&self, params: &SinrParams) -> Result<GeneratorSpec> {
        let arena = match self.arena {
            Some(a) => a,
            None => GeneratorSpec::arena_for_degree(self.n, self.mean_degree, range(params)?),
        };
        Ok(GeneratorSpec::new(self.n, arena, self.labels, self.seed))
    }
}

#[derive(Args)]
struct RunArgs {
    /// Instance file; without it an instance is generated.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[command(flatten)]
    gen: GenArgs,
    #[command(flatten)]
    phys: PhysArgs,
    #[arg(long, default_value_t = 0)]
    family_seed: u64,
    /// Use a small synthetic ssf strength; the run is not certified.
    #[arg(long)]
    demo: bool,
    /// ssf strength in demo mode.
    #[arg(long, default_value_t = 4)]
    demo_c: u64,
    #[arg(long, default_value_t = 64)]
    c_msg: u64,
    /// Certify every family exhaustively.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    degree_bound: Option<usize>,
    #[arg(long, default_value_t = 3.0)]
    diameter_factor: f64,
    #[arg(long, default_value_t = 4)]
    diameter_slack: usize,
    #[arg(long, default_value_t = 6.0)]
    size_factor: f64,
    /// Fail instead of falling back to a greedy CDS above 14 nodes.
    #[arg(long)]
    force_exact: bool,
    /// Directory for instance.json, trace.jsonl, backbone.json, report.json.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Ssf,
    PairSsf,
    Selector,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Label space size N.
    #[arg(long)]
    labels: u64,
    #[arg(long, default_value_t = 2)]
    c: u64,
    #[arg(long, default_value_t = 2)]
    k: u64,
    #[arg(long, default_value_t = 1)]
    m: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    exhaustive: bool,
    /// Accept families that only pass a spot check.
    #[arg(long)]
    allow_spot_check: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn generate(gen: &GenArgs, phys: &PhysArgs, out: &PathBuf) -> Result<i32> {
    let params = phys.params()?;
    let inst = pipeline::generate(&gen.spec(&params)?, &params)?;
    inst.save(out)?;
    println!("wrote {} stations to {}", inst.n(), out.display());
    Ok(0)
}

fn run(a: &RunArgs) -> Result<i32> {
    let params = a.phys.params()?;
    let source = match &a.instance {
        Some(p) => InstanceSource::File(p.clone()),
        None => InstanceSource::Generate(a.gen.spec(&params)?),
    };
    let cfg = RunConfig {
        source,
        params,
        family_seed: a.family_seed,
        mode: if a.demo {
            Mode::Demo { c: a.demo_c }
        } else {
            Mode::Certified
        },
        verifier: VerifierConfig {
            degree_bound: a.degree_bound,
            diameter_factor: a.diameter_factor,
            diameter_slack: a.diameter_slack,
            size_factor: a.size_factor,
            force_exact: a.force_exact,
        },
        c_msg: a.c_msg,
        exhaustive: a.exhaustive,
        out_dir: a.out.clone(),
    };
    let rep = pipeline::run(&cfg)?.report;
    if a.json {
        println!("{}", rep.to_json());
    } else {
        println!(
            "n={} N={} delta={} c={} rounds={} leaders={} helpers={} certified={}",
            rep.instance.n,
            rep.instance.n_labels,
            rep.instance.max_degree,
            rep.c,
            rep.rounds_used,
            rep.backbone.leaders.len(),
            rep.backbone.helpers.len(),
            rep.certified
        );
        for v in &rep.verdicts {
            println!("{} {}", if v.pass { "PASS" } else { "FAIL" }, v.check);
        }
    }
    Ok(rep.exit_status())
}

fn sweep(grid: &PathBuf, out: Option<&PathBuf>) -> Result<i32> {
    let grid = SweepGrid::from_json(&std::fs::read_to_string(grid)?)?;
    let rows = pipeline::sweep(&grid)?;
    let csv = pipeline::to_csv(&rows)?;
    match out {
        Some(p) => std::fs::write(p, &csv)?,
        None => print!("{csv}"),
    }
    if let Some((lo, med, hi)) = pipeline::c_r_spread(&rows) {
        eprintln!(
            "cells={} C_r min={lo:.2} median={med:.2} max={hi:.2}",
            rows.len()
        );
    }
    Ok(i32::from(!rows.iter().all(|r| r.all_pass)))
}

fn family(a: &FamilyArgs) -> Result<i32> {
    let cfg = ConstructionConfig {
        certify: CertifyConfig {
            force_exhaustive: a.exhaustive,
            ..Default::default()
        },
        require_exact: !a.allow_spot_check,
        ..Default::default()
    };
    let f = match a.kind {
        KindArg::Ssf => construct_ssf_with(a.labels, a.c, a.seed, &cfg)?,
        KindArg::PairSsf => construct_pair_ssf(a.labels, a.c, a.seed, &cfg)?,
        KindArg::Selector => construct_selector_with(a.k, a.m, a.labels, a.seed, &cfg)?,
    };
    let cert = certify_with(&f, &cfg.certify);
    println!(
        "{} label_space={} size={} singleton={} certification={}",
        f.kind().describe(),
        f.label_space(),
        f.len(),
        f.is_singleton_family(),
        serde_json::to_string(&cert).map_err(Error::from)?
    );
    if let Some(p) = &a.out {
        f.save(p)?;
    }
    Ok(i32::from(!cert.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Generate { gen, phys, out } => generate(gen, phys, out),
        Command::Run(a) => run(a),
        Command::Sweep { grid, out } => sweep(grid, out.as_ref()),
        Command::Family(a) => family(a),
    };
    match res {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_status() as u8)
        }
    }
}
