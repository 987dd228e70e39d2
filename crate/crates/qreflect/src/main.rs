//! Command-line front-end: potential tables, single reflection solves,
//! velocity/temperature sweeps, and asymptote fits, all emitted as CSV.

use clap::{Args, Parser, Subcommand};
use qreflect::asymptotics::{
    barrier_scales, default_fit_window, fit_asymptote, gamma_analytic,
};
use qreflect::config::Config;
use qreflect::error::Error;
use qreflect::scattering::{reflection_coefficient, reflection_curve, tabulated_for};
use qreflect::units::incidence_from_velocity;
use qreflect::{Catalog, Constants, Model, Problem, Settings};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qreflect", version, about = "Thermal non-equilibrium atom-surface potentials and quantum reflection")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate the interaction potential as CSV
    Potential(PotentialArgs),
    /// Reflection coefficient at a single velocity
    Reflect(ReflectArgs),
    /// Reflection curves over velocity or temperature
    Sweep(SweepArgs),
    /// Fit the low-velocity asymptote exponent and scale
    Fit(FitArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// flat key = value configuration file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// extra catalog file merged over the built-in entries
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long)]
    species: Option<String>,
    #[arg(long)]
    surface: Option<String>,
    /// surface temperature, K
    #[arg(long)]
    ts: Option<f64>,
    /// environment temperature, K
    #[arg(long)]
    te: Option<f64>,
    /// output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// relative quadrature tolerance
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct PotentialArgs {
    #[command(flatten)]
    common: Common,
    /// smallest radius, m
    #[arg(long)]
    rmin: Option<f64>,
    /// largest radius, m
    #[arg(long)]
    rmax: Option<f64>,
    /// grid density
    #[arg(long)]
    ppd: Option<usize>,
    /// preset 1: the four stacked potential curves
    #[arg(long)]
    figure: Option<u8>,
}

#[derive(Args)]
struct ReflectArgs {
    #[command(flatten)]
    common: Common,
    /// incident velocity, m/s
    #[arg(long)]
    velocity: Option<f64>,
    /// incident velocity via k_i·β₄ instead
    #[arg(long)]
    kb4: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// sweep variable: velocity | te | ts
    #[arg(long, default_value = "velocity")]
    mode: String,
    /// lower k_i·β₄ bound (velocity mode)
    #[arg(long)]
    kb4_min: Option<f64>,
    /// upper k_i·β₄ bound (velocity mode)
    #[arg(long)]
    kb4_max: Option<f64>,
    /// lower velocity bound, m/s (velocity mode)
    #[arg(long)]
    vmin: Option<f64>,
    /// upper velocity bound, m/s (velocity mode)
    #[arg(long)]
    vmax: Option<f64>,
    /// temperature range, K (temperature modes)
    #[arg(long)]
    tmin: Option<f64>,
    /// temperature range, K (temperature modes)
    #[arg(long)]
    tmax: Option<f64>,
    /// fixed k_i·β₄ (temperature modes)
    #[arg(long)]
    kb4: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// presets 2, 3 (velocity S-curves) or 4 (temperature sweeps)
    #[arg(long)]
    figure: Option<u8>,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    common: Common,
    /// override the automatic fit window, in k_i·β₄
    #[arg(long)]
    kb4_min: Option<f64>,
    #[arg(long)]
    kb4_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Catalog(_) | Error::Config(_) | Error::Domain(_) | Error::Io(_) => {
            ExitCode::from(2)
        }
        Error::Matching(_) | Error::Integrator(_) | Error::Quadrature { .. } => ExitCode::from(3),
        Error::Fit(_) => ExitCode::from(4),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Potential(args) => cmd_potential(args),
        Cmd::Reflect(args) => cmd_reflect(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Fit(args) => cmd_fit(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

/// Everything shared by the subcommands once config file, catalog and flag
/// overrides are resolved.
struct Setup {
    constants: Constants,
    catalog: Catalog,
    species: String,
    surface: String,
    t_s: f64,
    t_e: f64,
    tol: f64,
    out: Option<PathBuf>,
    config: Config,
}

impl Setup {
    fn resolve(common: &Common) -> Result<Self, Error> {
        let config = match &common.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        let constants = Constants::new();
        let mut catalog = Catalog::builtin(&constants);
        let catalog_path = common
            .catalog
            .clone()
            .or_else(|| config.get("catalog").map(PathBuf::from));
        if let Some(path) = catalog_path {
            catalog.merge_from_file(&path)?;
        }
        let species = common
            .species
            .clone()
            .or_else(|| config.get("species").map(str::to_string))
            .unwrap_or_else(|| "Rb87".to_string());
        let surface = common
            .surface
            .clone()
            .or_else(|| config.get("surface").map(str::to_string))
            .unwrap_or_else(|| "Si".to_string());
        let t_s = common.ts.or(config.get_f64("ts")?).unwrap_or(300.0);
        let t_e = common.te.or(config.get_f64("te")?).unwrap_or(1200.0);
        let tol = common.tol.or(config.get_f64("tol")?).unwrap_or(1e-8);
        let out = common
            .out
            .clone()
            .or_else(|| config.get("out").map(PathBuf::from));
        Ok(Setup {
            constants,
            catalog,
            species,
            surface,
            t_s,
            t_e,
            tol,
            out,
            config,
        })
    }

    fn model(&self, t_s: f64, t_e: f64) -> Result<Model, Error> {
        let pair = self.catalog.pair(&self.constants, &self.species, &self.surface)?;
        Model::new(self.constants, pair, t_s, t_e)?.with_quad_rel_tol(self.tol)
    }

    fn settings(&self) -> Settings {
        Settings::default()
    }
}

fn sci(x: f64) -> String {
    format!("{:.8e}", x)
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

/// sibling path `stem_suffix.csv` for multi-file figure presets
fn suffixed(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let mut p = base.to_path_buf();
    p.set_file_name(format!("{stem}_{suffix}.csv"));
    p
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

fn cmd_potential(args: PotentialArgs) -> Result<ExitCode, Error> {
    let setup = Setup::resolve(&args.common)?;
    let figure = args.figure.or(setup
        .config
        .get_usize("figure")?
        .map(|f| f as u8));
    let r_min = args.rmin.or(setup.config.get_f64("rmin")?).unwrap_or(0.05e-6);
    let r_max = args.rmax.or(setup.config.get_f64("rmax")?).unwrap_or(30e-6);
    let ppd = args.ppd.or(setup.config.get_usize("ppd")?).unwrap_or(64);
    if !(r_min > 0.0 && r_max > r_min) {
        return Err(Error::domain("potential export requires 0 < rmin < rmax"));
    }
    let radii = logspace(r_min, r_max, ((r_max / r_min).log10() * ppd as f64).ceil() as usize + 1);
    let k_b = setup.constants.k_b;
    match figure {
        Some(1) => {
            // the four stacked curves plus the C2/r² asymptote of the first
            let cases = [(300.0, 1200.0), (0.0, 0.0), (300.0, 300.0), (1200.0, 300.0)];
            let models: Vec<Model> = cases
                .iter()
                .map(|&(ts, te)| setup.model(ts, te))
                .collect::<Result<_, _>>()?;
            let mut csv = String::from(
                "r_m,u_nK_ts300_te1200,u_nK_ts0_te0,u_nK_ts300_te300,u_nK_ts1200_te300,u_c2_nK_ts300_te1200\n",
            );
            for &r in &radii {
                csv.push_str(&sci(r));
                for m in &models {
                    let u = m.u_full_direct(r)?;
                    csv.push(',');
                    csv.push_str(&sci(u / k_b * 1e9));
                }
                csv.push(',');
                csv.push_str(&sci(models[0].c2_asymptote(r)? / k_b * 1e9));
                csv.push('\n');
            }
            write_output(&setup.out, &csv)?;
        }
        Some(n) => {
            return Err(Error::domain(format!(
                "potential supports only --figure 1, got {n}"
            )))
        }
        None => {
            let model = setup.model(setup.t_s, setup.t_e)?;
            let mut csv = String::from("r_m,u_J,u_nK\n");
            for &r in &radii {
                let u = model.u_full_direct(r)?;
                csv.push_str(&format!("{},{},{}\n", sci(r), sci(u), sci(u / k_b * 1e9)));
            }
            write_output(&setup.out, &csv)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn velocity_for_kb4(model: &Model, kb4: f64) -> f64 {
    let beta4 = model.pair.beta4(&model.constants);
    kb4 / beta4 * model.constants.hbar / model.pair.species.mass
}

fn cmd_reflect(args: ReflectArgs) -> Result<ExitCode, Error> {
    let setup = Setup::resolve(&args.common)?;
    let settings = setup.settings();
    let model = setup.model(setup.t_s, setup.t_e)?;
    let v = match (args.velocity, args.kb4) {
        (Some(v), None) => v,
        (None, Some(kb4)) => velocity_for_kb4(&model, kb4),
        (None, None) => match setup.config.get_f64("velocity")? {
            Some(v) => v,
            None => return Err(Error::Config("give --velocity or --kb4".into())),
        },
        (Some(_), Some(_)) => {
            return Err(Error::Config("--velocity and --kb4 are mutually exclusive".into()))
        }
    };
    let model = tabulated_for(model, v, &settings, 48)?;
    let incidence = incidence_from_velocity(&setup.constants, v, model.pair.species.mass)?;
    let problem = Problem::new(model, incidence)?;
    let res = reflection_coefficient(&problem, &settings)?;
    let e_nk = incidence.energy / setup.constants.k_b * 1e9;
    let kb4 = incidence.wavenumber * problem.model.pair.beta4(&setup.constants);
    println!("species   : {}", setup.species);
    println!("surface   : {}", setup.surface);
    println!("T_S, T_E  : {} K, {} K", setup.t_s, setup.t_e);
    println!("v_i       : {} m/s (E_i = {} nK, k_i*beta4 = {})", sci(v), sci(e_nk), sci(kb4));
    println!("|R|^2     : {}", sci(res.probability));
    println!("matching  : r_in = {} m, r_out = {} m", sci(res.r_inner), sci(res.r_outer));
    println!(
        "badlands  : {} / {}",
        sci(res.badlands_at_matches.0),
        sci(res.badlands_at_matches.1)
    );
    println!("converged : {} (estimate {})", res.converged, sci(res.convergence_estimate));
    if let Some(out) = &setup.out {
        let csv = format!(
            "v_m_per_s,E_nK,k_beta4,R2,converged\n{},{},{},{},{}\n",
            sci(v),
            sci(e_nk),
            sci(kb4),
            sci(res.probability),
            res.converged as u8
        );
        write_output(&Some(out.clone()), &csv)?;
    }
    if res.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "error: solve did not converge (estimate {})",
            sci(res.convergence_estimate)
        );
        Ok(ExitCode::from(3))
    }
}

fn velocity_curve_csv(
    setup: &Setup,
    model: Model,
    velocities: &[f64],
    settings: &Settings,
) -> Result<String, Error> {
    let model = tabulated_for(model, velocities[0], settings, 48)?;
    let beta4 = model.pair.beta4(&setup.constants);
    let k_b = setup.constants.k_b;
    let curve = reflection_curve(&model, velocities, settings)?;
    let mut csv = String::from("v_m_per_s,E_nK,k_beta4,R2,converged\n");
    for (v, res) in curve {
        let inc = incidence_from_velocity(&setup.constants, v, model.pair.species.mass)?;
        let e_nk = inc.energy / k_b * 1e9;
        let kb4 = inc.wavenumber * beta4;
        match res {
            Ok(r) => csv.push_str(&format!(
                "{},{},{},{},{}\n",
                sci(v),
                sci(e_nk),
                sci(kb4),
                sci(r.probability),
                r.converged as u8
            )),
            Err(_) => csv.push_str(&format!(
                "{},{},{},nan,0\n",
                sci(v),
                sci(e_nk),
                sci(kb4)
            )),
        }
    }
    Ok(csv)
}

fn temperature_sweep_csv(
    setup: &Setup,
    mode: &str,
    temperatures: &[f64],
    kb4: f64,
    settings: &Settings,
) -> Result<String, Error> {
    let mut csv = String::from("T_K,v_m_per_s,E_nK,k_beta4,R2,converged\n");
    for &t in temperatures {
        let (t_s, t_e) = match mode {
            "te" => (setup.t_s, t),
            "ts" => (t, setup.t_e),
            _ => return Err(Error::Config(format!("unknown sweep mode '{mode}'"))),
        };
        let model = setup.model(t_s, t_e)?;
        let v = velocity_for_kb4(&model, kb4);
        let model = tabulated_for(model, v, settings, 48)?;
        let inc = incidence_from_velocity(&setup.constants, v, model.pair.species.mass)?;
        let e_nk = inc.energy / setup.constants.k_b * 1e9;
        let problem = Problem::new(model, inc)?;
        match reflection_coefficient(&problem, settings) {
            Ok(r) => csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                sci(t),
                sci(v),
                sci(e_nk),
                sci(kb4),
                sci(r.probability),
                r.converged as u8
            )),
            Err(_) => csv.push_str(&format!(
                "{},{},{},{},nan,0\n",
                sci(t),
                sci(v),
                sci(e_nk),
                sci(kb4)
            )),
        }
    }
    Ok(csv)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let setup = Setup::resolve(&args.common)?;
    let settings = setup.settings();
    let points = args.points.or(setup.config.get_usize("points")?).unwrap_or(25);
    if points < 2 {
        return Err(Error::Config("sweep needs at least 2 points".into()));
    }
    let figure = args.figure.or(setup.config.get_usize("figure")?.map(|f| f as u8));
    match figure {
        Some(f @ (2 | 3)) => {
            // S-curves over velocity; figure 2 varies temperatures at fixed
            // species, figure 3 varies species at fixed temperatures
            let out = setup
                .out
                .clone()
                .ok_or_else(|| Error::Config("--out required for figure presets".into()))?;
            let cases: Vec<(String, f64, f64)> = if f == 2 {
                vec![
                    (setup.species.clone(), 300.0, 1200.0),
                    (setup.species.clone(), 0.0, 0.0),
                    (setup.species.clone(), 300.0, 300.0),
                ]
            } else {
                vec![
                    ("Rb87".to_string(), 300.0, 1200.0),
                    ("He*".to_string(), 300.0, 1200.0),
                    ("He".to_string(), 300.0, 1200.0),
                ]
            };
            for (species, t_s, t_e) in cases {
                let mut sub = setup.clone_with_species(&species);
                sub.t_s = t_s;
                sub.t_e = t_e;
                let model = sub.model(t_s, t_e)?;
                let (lo, hi) = (
                    args.kb4_min.unwrap_or(0.02),
                    args.kb4_max.unwrap_or(3.0),
                );
                let velocities: Vec<f64> = logspace(
                    velocity_for_kb4(&model, lo),
                    velocity_for_kb4(&model, hi),
                    points,
                );
                let csv = velocity_curve_csv(&sub, model, &velocities, &settings)?;
                let label = format!(
                    "{}_ts{}_te{}",
                    species.replace('*', "star"),
                    t_s as i64,
                    t_e as i64
                );
                write_output(&Some(suffixed(&out, &label)), &csv)?;
            }
        }
        Some(4) => {
            let out = setup
                .out
                .clone()
                .ok_or_else(|| Error::Config("--out required for figure presets".into()))?;
            let kb4 = args.kb4.unwrap_or(0.68);
            let te_grid: Vec<f64> = (0..10).map(|i| 300.0 + 100.0 * i as f64).collect();
            let mut sub = setup.clone_with_species(&setup.species);
            sub.t_s = 300.0;
            let csv = temperature_sweep_csv(&sub, "te", &te_grid, kb4, &settings)?;
            write_output(&Some(suffixed(&out, "te_sweep_ts300")), &csv)?;
            let ts_grid: Vec<f64> = (0..7).map(|i| 50.0 * i as f64).collect();
            let mut sub = setup.clone_with_species(&setup.species);
            sub.t_e = 300.0;
            let csv = temperature_sweep_csv(&sub, "ts", &ts_grid, kb4, &settings)?;
            write_output(&Some(suffixed(&out, "ts_sweep_te300")), &csv)?;
        }
        Some(n) => {
            return Err(Error::Config(format!(
                "sweep supports --figure 2, 3 or 4, got {n}"
            )))
        }
        None => match args.mode.as_str() {
            "velocity" => {
                let model = setup.model(setup.t_s, setup.t_e)?;
                let velocities: Vec<f64> = match (args.vmin, args.vmax) {
                    (Some(a), Some(b)) => logspace(a, b, points),
                    (None, None) => {
                        let lo = args.kb4_min.or(setup.config.get_f64("kb4_min")?).unwrap_or(0.02);
                        let hi = args.kb4_max.or(setup.config.get_f64("kb4_max")?).unwrap_or(3.0);
                        logspace(
                            velocity_for_kb4(&model, lo),
                            velocity_for_kb4(&model, hi),
                            points,
                        )
                    }
                    _ => {
                        return Err(Error::Config(
                            "give both --vmin and --vmax, or neither".into(),
                        ))
                    }
                };
                let csv = velocity_curve_csv(&setup, model, &velocities, &settings)?;
                write_output(&setup.out, &csv)?;
            }
            mode @ ("te" | "ts") => {
                let kb4 = args
                    .kb4
                    .or(setup.config.get_f64("kb4")?)
                    .ok_or_else(|| Error::Config("temperature sweeps need --kb4".into()))?;
                let tmin = args
                    .tmin
                    .or(setup.config.get_f64("tmin")?)
                    .ok_or_else(|| Error::Config("temperature sweeps need --tmin".into()))?;
                let tmax = args
                    .tmax
                    .or(setup.config.get_f64("tmax")?)
                    .ok_or_else(|| Error::Config("temperature sweeps need --tmax".into()))?;
                let grid: Vec<f64> = (0..points)
                    .map(|i| tmin + (tmax - tmin) * i as f64 / (points - 1) as f64)
                    .collect();
                let csv = temperature_sweep_csv(&setup, mode, &grid, kb4, &settings)?;
                write_output(&setup.out, &csv)?;
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown sweep mode '{other}' (velocity | te | ts)"
                )))
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

impl Setup {
    fn clone_with_species(&self, species: &str) -> Setup {
        Setup {
            constants: self.constants,
            catalog: self.catalog.clone(),
            species: species.to_string(),
            surface: self.surface.clone(),
            t_s: self.t_s,
            t_e: self.t_e,
            tol: self.tol,
            out: self.out.clone(),
            config: self.config.clone(),
        }
    }
}

fn cmd_fit(args: FitArgs) -> Result<ExitCode, Error> {
    let setup = Setup::resolve(&args.common)?;
    let settings = setup.settings();
    let model = setup.model(setup.t_s, setup.t_e)?;
    let pair = model.pair.clone();
    // barrier-scaled default window
    let (lo_default, hi_default) = match model.find_barrier() {
        Ok(bar) if bar.exists => {
            let scales = barrier_scales(&pair, &setup.constants, &bar)?;
            default_fit_window(scales.k_beta4_bar)
        }
        _ => (0.02, 0.3),
    };
    let lo = args.kb4_min.or(setup.config.get_f64("kb4_min")?).unwrap_or(lo_default);
    let hi = args.kb4_max.or(setup.config.get_f64("kb4_max")?).unwrap_or(hi_default);
    let points = args.points.or(setup.config.get_usize("points")?).unwrap_or(10);
    let velocities = logspace(
        velocity_for_kb4(&model, lo),
        velocity_for_kb4(&model, hi),
        points,
    );
    let model = tabulated_for(model, velocities[0], &settings, 48)?;
    let curve = reflection_curve(&model, &velocities, &settings)?;
    let pts: Vec<(f64, f64)> = curve
        .into_iter()
        .filter_map(|(v, r)| r.ok().map(|r| (v, r.probability_raw)))
        .collect();
    let fit = fit_asymptote(&pts)?;
    let g_ana = gamma_analytic(&pair, &setup.constants, setup.t_s, setup.t_e)?;
    let csv = format!(
        "species,surface,T_S,T_E,gamma_fit,b_fit_s_per_m,gamma_analytic,residual\n{},{},{},{},{},{},{},{}\n",
        setup.species,
        setup.surface,
        setup.t_s,
        setup.t_e,
        sci(fit.gamma_fit),
        sci(fit.b_fit),
        sci(g_ana),
        sci(fit.residual)
    );
    write_output(&setup.out, &csv)?;
    Ok(ExitCode::SUCCESS)
}
