use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinvdw::baseline::{
    hamaker_constant, matsubara_static_energy, naive_fdt_energy_rr, static_energy_estimate,
    static_force_estimate, MatsubaraSpec,
};
use spinvdw::cli::check::run_checks;
use spinvdw::cli::config::{parse_config, preset, OutputFormat, SweepSpec};
use spinvdw::cli::output::emit;
use spinvdw::cli::sweep::{run_sweep, run_sweep_with_threads};
use spinvdw::configurations::{force_from_energy, InteractionModel};
use spinvdw::oracle::{ratio_aux, ratio_rr, ratio_ur, ratio_uo, ratio_uu, LorentzPair};
use spinvdw::units::FEMTONEWTON;
use spinvdw::{ArrangementKind, Error};

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

/// Van der Waals energies and forces between spinning nanospheres.
#[derive(Parser)]
#[command(name = "spinvdw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interaction energy at one (Ω_A, Ω_B) point.
    Energy(PointArgs),
    /// Radial force at one (Ω_A, Ω_B) point.
    Force(PointArgs),
    /// Evaluate a grid of rotation rates and write CSV or JSON.
    Sweep(Common),
    /// Dissipationless closed-form ratios E/E⁽⁰⁾.
    Oracle(PointArgs),
    /// Static Matsubara/Hamaker references and the naive-FDT energy.
    Baseline(BaselineArgs),
    /// Run the invariant suite.
    Check(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset: fig1_300K, fig1_1500K, fig2a, fig2b, fig2c, baseline_static.
    #[arg(long)]
    preset: Option<String>,
    /// Output file (default: the config's output.path, else stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Worker threads for sweeps.
    #[arg(long)]
    threads: Option<usize>,
    /// Exit with status 3 if any point fails to converge.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    common: Common,
    /// Ω_A in rad/s.
    #[arg(long, conflicts_with = "omega_a_over_omega0")]
    omega_a: Option<f64>,
    /// Ω_B in rad/s.
    #[arg(long, conflicts_with = "omega_b_over_omega0")]
    omega_b: Option<f64>,
    /// Ω_A in units of ω₀(A).
    #[arg(long)]
    omega_a_over_omega0: Option<f64>,
    /// Ω_B in units of ω₀(A).
    #[arg(long)]
    omega_b_over_omega0: Option<f64>,
    /// Override the configured arrangement (rr, uu, ur, uo).
    #[arg(long)]
    arrangement: Option<String>,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    common: Common,
    /// Hamaker constant (J) for the static force estimate.
    #[arg(long, default_value_t = 5e-20)]
    hamaker: f64,
}

fn load(common: &Common) -> Result<SweepSpec, Error> {
    let mut spec = match (&common.config, &common.preset) {
        (Some(path), _) => parse_config(path).map_err(|e| match e {
            Error::Io { path, source } => Error::Config {
                key: "--config".into(),
                message: format!("{}: {source}", path.display()),
            },
            other => other,
        })?,
        (None, Some(name)) => preset(name)?,
        (None, None) => spinvdw::cli::parse_config_str("")?,
    };
    if let Some(t) = common.rel_tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Config {
                key: "--rel-tol".into(),
                message: format!("must be > 0, got {t}"),
            });
        }
        spec.tolerances.rel_tol = t;
    }
    if let Some(f) = &common.format {
        spec.format = f.parse::<OutputFormat>()?;
    }
    if let Some(p) = &common.out {
        spec.output_path = Some(p.clone());
    }
    Ok(spec)
}

fn point(args: &PointArgs, spec: &SweepSpec) -> (f64, f64) {
    let w0 = spec.omega0();
    let a = args.omega_a.or(args.omega_a_over_omega0.map(|x| x * w0)).unwrap_or(0.0);
    let b = args.omega_b.or(args.omega_b_over_omega0.map(|x| x * w0)).unwrap_or(0.0);
    (a, b)
}

fn with_arrangement(args: &PointArgs, mut spec: SweepSpec) -> Result<SweepSpec, Error> {
    if let Some(name) = &args.arrangement {
        let kind: ArrangementKind = name.parse()?;
        spec.arrangement = spinvdw::Arrangement::canonical(kind)?;
    }
    Ok(spec)
}

fn energy_or_force(args: &PointArgs, force: bool) -> Result<(), Error> {
    let spec = with_arrangement(args, load(&args.common)?)?;
    let (wa, wb) = point(args, &spec);
    let model = InteractionModel::new(spec.context()?, spec.tolerances)?;
    let e = model.energy(&spec.arrangement, wa, wb)?;
    let e0 = model.energy(&spec.arrangement, 0.0, 0.0)?;
    println!("arrangement = {}", spec.arrangement.kind);
    println!("omega_A_rad_s = {wa:.16e}");
    println!("omega_B_rad_s = {wb:.16e}");
    if force {
        let f = force_from_energy(e, spec.separation);
        let f0 = force_from_energy(e0, spec.separation);
        println!("F_N = {f:.16e}");
        println!("F0_N = {f0:.16e}");
        println!("deltaF_fN = {:.16e}", (f - f0) / FEMTONEWTON);
    } else {
        println!("E_J = {e:.16e}");
        println!("E0_J = {e0:.16e}");
        println!("deltaE_J = {:.16e}", e - e0);
    }
    Ok(())
}

fn sweep(common: &Common) -> Result<ExitCode, Error> {
    let spec = load(common)?;
    let result = match common.threads {
        Some(n) => run_sweep_with_threads(&spec, n)?,
        None => run_sweep(&spec)?,
    };
    emit(&result, spec.format, spec.output_path.as_deref())?;
    let failures = result.failures();
    if failures > 0 {
        eprintln!("warning: {failures} of {} points failed", result.rows.len());
        if common.strict {
            return Ok(ExitCode::from(EXIT_NONCONVERGENCE));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle(args: &PointArgs) -> Result<(), Error> {
    let spec = load(&args.common)?;
    let (wa, wb) = point(args, &spec);
    let ctx = spec.context()?;
    let lorentz = LorentzPair::from_context(&ctx);
    let w0 = spec.omega0();
    let show = |name: &str, v: Result<f64, Error>| match v {
        Ok(x) => println!("{name} = {x:.16e}"),
        Err(e) => println!("{name} = undefined ({e})"),
    };
    println!("omega0_rad_s = {w0:.16e}");
    show("aux(Omega_A)/aux(0)", ratio_aux(&lorentz, wa));
    show("E_rr/E0", ratio_rr(w0, wa - wb));
    show("E_uu/E0", ratio_uu(w0, wa, wb));
    show("E_ur/E0", ratio_ur(w0, wa, wb));
    show("E_uo/E0", ratio_uo(w0, wa, wb));
    Ok(())
}

fn baseline(args: &BaselineArgs) -> Result<(), Error> {
    let spec = load(&args.common)?;
    let ctx = spec.context()?;
    let r = spec.separation;
    if spec.temperature > 0.0 {
        let m = MatsubaraSpec::new(spec.temperature);
        let e = matsubara_static_energy(&ctx, &m)?;
        println!("matsubara_energy_J = {e:.16e}");
        println!("matsubara_force_N = {:.16e}", force_from_energy(e, r));
        let h = hamaker_constant(&spec.material_a, &m)?;
        println!("hamaker_single_resonance_J = {h:.16e}");
    } else {
        println!("matsubara_energy_J = undefined (needs T > 0)");
    }
    println!("hamaker_input_J = {:.16e}", args.hamaker);
    println!(
        "static_energy_estimate_J = {:.16e}",
        static_energy_estimate(args.hamaker, spec.radius_a, r)?
    );
    let f = static_force_estimate(args.hamaker, spec.radius_a, r)?;
    println!("static_force_estimate_N = {f:.16e}");
    println!("static_force_estimate_fN = {:.16e}", f / FEMTONEWTON);
    let w0 = spec.omega0();
    let (a, b) = (1.5 * w0, 0.0);
    let naive = naive_fdt_energy_rr(&ctx, a, b)?;
    let shifted = naive_fdt_energy_rr(&ctx, a + 0.5 * w0, b + 0.5 * w0)?;
    println!("naive_fdt_E_rr_J(1.5w0, 0) = {naive:.16e}");
    println!("naive_fdt_E_rr_J(2.0w0, 0.5w0) = {shifted:.16e}");
    Ok(())
}

fn check(common: &Common) -> Result<ExitCode, Error> {
    let spec = load(common)?;
    let outcomes = run_checks(&spec)?;
    let mut ok = true;
    for o in &outcomes {
        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
        ok &= o.passed;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILURE) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Energy(a) => energy_or_force(a, false).map(|_| ExitCode::SUCCESS),
        Command::Force(a) => energy_or_force(a, true).map(|_| ExitCode::SUCCESS),
        Command::Sweep(c) => sweep(c),
        Command::Oracle(a) => oracle(a).map(|_| ExitCode::SUCCESS),
        Command::Baseline(a) => baseline(a).map(|_| ExitCode::SUCCESS),
        Command::Check(c) => check(c),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config { .. } | Error::InvalidParameter { .. } => EXIT_CONFIG,
                e if e.is_convergence_failure() => EXIT_NONCONVERGENCE,
                _ => EXIT_FAILURE,
            })
        }
    }
}
