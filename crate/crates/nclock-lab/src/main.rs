use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nclock::constructions::{
    recovery_flat, recovery_with_vortices, split_degree, FlatRecoveryOptions, VortexRecoveryOptions, C0_FLAT,
};
use nclock::energy::{bv_lower_bound, geodesic_bond_sum, vortex_cost, xy_energy};
use nclock::limits::{anisotropic_dirichlet, cantor_part, QuadratureSpec};
use nclock::maps::{ProductMap, RotatedMap, VortexMap};
use nclock::vorticity::{flat_distance, vorticity_measure};
use nclock::{build_domain, DiscreteCircle, PcField, Point, Shape, SpinField, VorticityMeasure};
use nclock_lab::{load_field, run_sweep, save_field, Overrides, Scenario, SweepConfig, Timing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const OUT_DIR_VAR: &str = "NCLOCK_OUT_DIR";

#[derive(Parser)]
#[command(name = "nclock", version, about = "N-clock lattice spin field experiments")]
struct Cli {
    /// Seed for randomized field generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file. Defaults to a per-command name inside $NCLOCK_OUT_DIR
    /// when set, otherwise stdout (or ./field.nclk for field outputs).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a field file for a scenario.
    Gen(GenArgs),
    /// Energy report of a field file.
    Energy {
        field: PathBuf,
        /// Vortex count for the excess energy.
        #[arg(long, default_value_t = 0)]
        vortices: u32,
    },
    /// Vorticity atoms of a field file.
    Vorticity { field: PathBuf },
    /// Flat distance between the vorticity of two fields (or to zero).
    Flatnorm { field: PathBuf, other: Option<PathBuf> },
    /// Recovery field of a product of unit vortices times a constant phase.
    Recover(RecoverArgs),
    /// Run a sweep described by a JSON config and write CSV.
    Sweep {
        config: PathBuf,
        /// Fill the seconds column with wall-clock times.
        #[arg(long)]
        timings: bool,
    },
    /// Anisotropic Dirichlet integral of a continuum map.
    Limits(LimitsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Vortex,
    Interface,
    Combined,
    Random,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    scenario: GenKind,
    #[arg(long)]
    epsilon: f64,
    /// Target angle step; N = round(2 pi / theta).
    #[arg(long)]
    theta: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
    signs: Vec<i32>,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    jump: f64,
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    c0: Option<f64>,
}

#[derive(Args)]
struct RecoverArgs {
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    theta: f64,
    #[arg(long)]
    lambda: f64,
    /// Half-side of the centered square domain.
    #[arg(long, default_value_t = 0.5)]
    half: f64,
    /// Unit vortex `x,y,sign`; repeatable. Without vortices the flat
    /// recovery of the constant phase is built.
    #[arg(long = "vortex", value_parser = parse_vortex, allow_hyphen_values = true)]
    vortices: Vec<(Point, i32)>,
    #[arg(long, default_value_t = 0.0)]
    angle: f64,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, default_value_t = C0_FLAT)]
    c0: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitMap {
    /// `x/|x|`
    Vortex,
    /// `(x/|x|)^2`
    Square,
    /// `(x/|x|)^2` split into two unit singularities at `0` and `tau e1`.
    Split,
}

#[derive(Args)]
struct LimitsArgs {
    #[arg(long, value_enum, default_value = "vortex")]
    map: LimitMap,
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
    #[arg(long, default_value_t = 1.0 / 16.0)]
    delta: f64,
    #[arg(long, default_value_t = 1024)]
    refinement: usize,
    #[arg(long, default_value_t = 1e-3)]
    tau: f64,
}

fn parse_vortex(s: &str) -> Result<(Point, i32), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,sign, got '{s}'"));
    }
    let x = parts[0].parse::<f64>().map_err(|e| e.to_string())?;
    let y = parts[1].parse::<f64>().map_err(|e| e.to_string())?;
    let sign = parts[2].parse::<i32>().map_err(|e| e.to_string())?;
    Ok((Point::new(x, y), sign))
}

/// Exit status 1: bad arguments, configuration or I/O. Exit status 2: a
/// sweep finished with failed rows.
enum Failure {
    Config(String),
    Rows(usize),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

fn out_path(explicit: &Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
    explicit
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_VAR).map(|d| PathBuf::from(d).join(default_name)))
}

fn emit(out: &Option<PathBuf>, default_name: &str, value: serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(&value)?;
    match out_path(out, default_name) {
        Some(p) => std::fs::write(&p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn write_field(field: &SpinField, out: &Option<PathBuf>) -> Result<(), Failure> {
    let path = out_path(out, "field.nclk").unwrap_or_else(|| PathBuf::from("field.nclk"));
    save_field(field, &path)?;
    eprintln!("wrote {} ({} sites, N = {})", path.display(), field.domain().len(), field.circle().n_states());
    Ok(())
}

fn gen(a: &GenArgs, seed: u64, out: &Option<PathBuf>) -> Result<(), Failure> {
    let circle = DiscreteCircle::from_theta(a.theta)?;
    let field = match a.scenario {
        GenKind::Random => {
            let domain = Arc::new(build_domain(Shape::square(Point::ORIGIN, 1.0), a.epsilon)?);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let states = (0..domain.len()).map(|_| rng.gen_range(0..circle.n_states())).collect();
            SpinField::new(domain, circle, states)?
        }
        kind => {
            let scenario = match kind {
                GenKind::Vortex => Scenario::Vortex { signs: a.signs.clone() },
                GenKind::Interface => Scenario::Interface {
                    jump: a.jump,
                    length: a.length,
                },
                _ => Scenario::Combined,
            };
            let o = Overrides {
                lambda: a.lambda,
                eta: a.eta,
                c0: a.c0,
            };
            scenario.realize(a.epsilon, circle, &o)?.field
        }
    };
    write_field(&field, out)
}

fn recover(a: &RecoverArgs, out: &Option<PathBuf>) -> Result<(), Failure> {
    let circle = DiscreteCircle::from_theta(a.theta)?;
    let shape = Shape::centered_square(Point::ORIGIN, a.half);
    let domain = Arc::new(build_domain(shape, a.epsilon)?);
    let map = RotatedMap {
        inner: ProductMap::vortices(&a.vortices),
        angle: a.angle,
    };
    let field = if a.vortices.is_empty() {
        let pc = PcField::sample_midpoints(&map, a.lambda, &shape)?;
        let opts = FlatRecoveryOptions {
            c0: a.c0,
            continuity_tolerance: None,
        };
        recovery_flat(&pc, domain, circle, opts)?
    } else {
        let mu = VorticityMeasure::new(
            a.vortices.iter().map(|&(position, charge)| nclock::Atom { position, charge }),
            shape,
        );
        let eta = a.eta.unwrap_or(12.0 * a.lambda);
        let opts = VortexRecoveryOptions {
            c0: a.c0,
            ..Default::default()
        };
        recovery_with_vortices(&map, &mu, a.lambda, eta, domain, circle, opts)?
    };
    write_field(&field, out)
}

fn limits(a: &LimitsArgs, out: &Option<PathBuf>) -> Result<(), Failure> {
    let region = Shape::ball(Point::ORIGIN, a.radius);
    let v = VortexMap::new(Point::ORIGIN, 1);
    let square = || ProductMap::new().with(v).with(v);
    let (value, singular) = match a.map {
        LimitMap::Vortex => {
            let q = QuadratureSpec::new(a.refinement, a.delta, vec![Point::ORIGIN]);
            (anisotropic_dirichlet(&v, &region, &q)?, 1)
        }
        LimitMap::Square => {
            let q = QuadratureSpec::new(a.refinement, a.delta, vec![Point::ORIGIN]);
            (anisotropic_dirichlet(&square(), &region, &q)?, 1)
        }
        LimitMap::Split => {
            let split = split_degree(square(), Point::ORIGIN, a.tau)?;
            let q = QuadratureSpec::new(a.refinement, a.delta, vec![Point::ORIGIN, Point::new(a.tau, 0.0)]);
            (anisotropic_dirichlet(&split, &region, &q)?, 2)
        }
    };
    emit(
        out,
        "limits.json",
        json!({
            "anisotropic_dirichlet": value,
            "cantor_part": cantor_part(),
            "exclusion_disks": singular,
            "radius": a.radius,
            "delta": a.delta,
            "refinement": a.refinement,
        }),
    )
}

fn measure_of(path: &Path) -> Result<(SpinField, VorticityMeasure), Failure> {
    let f = load_field(path)?;
    let mu = vorticity_measure(&f);
    Ok((f, mu))
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let out = &cli.out;
    match &cli.command {
        Command::Gen(a) => gen(a, cli.seed, out),
        Command::Energy { field, vortices } => {
            let f = load_field(field)?;
            let theta = f.circle().theta();
            let e = xy_energy(&f, None);
            let rescaled = e.xy_total / (f.epsilon() * theta);
            emit(
                out,
                "energy.json",
                json!({
                    "epsilon": f.epsilon(),
                    "theta": theta,
                    "n_states": f.circle().n_states(),
                    "sites": f.domain().len(),
                    "bonds": e.bond_count,
                    "xy_energy": e.xy_total,
                    "per_bond_max": e.per_bond_max,
                    "rescaled_energy": rescaled,
                    "excess_energy": rescaled - vortex_cost(f.epsilon(), theta, *vortices),
                    "geodesic_bond_sum": geodesic_bond_sum(&f, None),
                    "bv_lower_bound": bv_lower_bound(&f, None),
                }),
            )
        }
        Command::Vorticity { field } => {
            let (_, mu) = measure_of(field)?;
            let atoms: Vec<_> = mu
                .atoms()
                .iter()
                .map(|a| json!({"x": a.position.x, "y": a.position.y, "charge": a.charge}))
                .collect();
            emit(
                out,
                "vorticity.json",
                json!({
                    "total_charge": mu.total_charge(),
                    "total_variation": mu.total_variation(),
                    "atoms": atoms,
                }),
            )
        }
        Command::Flatnorm { field, other } => {
            let (f, mu) = measure_of(field)?;
            let shape = *f.domain().shape();
            let nu = match other {
                Some(p) => measure_of(p)?.1,
                None => VorticityMeasure::empty(shape),
            };
            emit(out, "flatnorm.json", json!({ "flat_distance": flat_distance(&mu, &nu, &shape) }))
        }
        Command::Recover(a) => recover(a, out),
        Command::Sweep { config, timings } => {
            let text = std::fs::read_to_string(config)?;
            let cfg: SweepConfig = serde_json::from_str(&text)?;
            let records = run_sweep(&cfg)?;
            let timing = if *timings { Timing::Record } else { Timing::Omit };
            match out.clone().or(cfg.output.clone()).or_else(|| out_path(&None, "sweep.csv")) {
                Some(p) => nclock_lab::sweep::write_csv_file(&records, timing, &p)?,
                None => nclock_lab::write_csv(&records, timing, std::io::stdout().lock())?,
            }
            let failed: Vec<_> = records.iter().filter(|r| r.failed()).collect();
            for r in &failed {
                if let Err(msg) = &r.outcome {
                    eprintln!("epsilon {}: {msg}", r.epsilon);
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Rows(failed.len()))
            }
        }
        Command::Limits(a) => limits(a, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Rows(n)) => {
            eprintln!("{n} sweep row(s) failed");
            ExitCode::from(2)
        }
    }
}
