mod config;
mod output;

use std::process::ExitCode;

use btz_otto::cycle::{run_cycle, CycleConfig, CycleResult};
use btz_otto::optimize::{
    optimize_engine, optimize_fridge, EngineObjective, FridgeObjective, OptimumReport, SearchOptions,
};
use btz_otto::response::{image_sum, rate_data, BathSpec, Boundary};
use btz_otto::sweep::{figure_spec, format_sig, run_sweep, CycleParam, Dataset, Figure, SweepKind, SweepSpec, Template};
use clap::{Parser, Subcommand, ValueEnum};

use config::{ConfigError, GridArg, Settings};

#[derive(Parser)]
#[command(name = "btz-otto", version, about = "Quantum Otto cycles driven by a detector in a BTZ black hole background")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transition rates and relaxation data of a single bath
    Rate(Settings),
    /// Run one cycle and print its energy bookkeeping
    Cycle(Settings),
    /// Sweep one parameter and write a dataset
    Sweep {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Cycle parameter varied by `custom_grid`
        #[arg(long)]
        param: Option<String>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Maximize an engine objective over the hot gap
    OptimizeEngine {
        #[arg(long, value_enum, default_value = "power")]
        objective: EngineObjectiveArg,
        #[command(flatten)]
        settings: Settings,
    },
    /// Maximize a refrigerator objective over the cold gap
    OptimizeFridge {
        #[arg(long, value_enum, default_value = "chi")]
        objective: FridgeObjectiveArg,
        #[command(flatten)]
        settings: Settings,
    },
    /// Regenerate a figure dataset with its published parameters as defaults
    Fig {
        #[arg(value_parser = ["1", "2", "3", "4a", "4b", "5"])]
        id: String,
        #[command(flatten)]
        settings: Settings,
    },
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum KindArg {
    #[value(name = "rate_vs_T")]
    RateVsT,
    WorkVsTauH,
    CoolpowerVsTauC,
    EmpVsRatio,
    CopVsRatio,
    CustomGrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineObjectiveArg {
    Power,
    Ecological,
}

#[derive(Clone, Copy, ValueEnum)]
enum FridgeObjectiveArg {
    Chi,
    Ecological,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<btz_otto::Error> for Failure {
    fn from(e: btz_otto::Error) -> Self {
        match e {
            btz_otto::Error::Invalid { .. } | btz_otto::Error::Domain { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numerical(format!("writing output: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("btz-otto: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("btz-otto: error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Rate(flags) => rate(flags),
        Command::Cycle(flags) => cycle(flags),
        Command::Sweep { kind, param, settings } => sweep(kind, param.as_deref(), settings),
        Command::OptimizeEngine { objective, settings } => optimize_engine_cmd(objective, settings),
        Command::OptimizeFridge { objective, settings } => optimize_fridge_cmd(objective, settings),
        Command::Fig { id, settings } => fig(&id, settings),
    }
}

/// Defaults shared by the cycle-level commands: the long-stroke engine
/// parameters of the work figure.
fn cycle_defaults() -> Settings {
    Settings {
        mass: Some(0.01),
        zeta: Some(vec![-1, 0, 1]),
        omega_c: Some(0.1),
        omega_h: Some(1.0),
        t_h: Some(2.0),
        t_c: Some(0.1),
        tau_h: Some(1.0),
        tau_c: Some(1.0),
        entropy_convention: Some(config::Convention::Standard),
        ..Settings::default()
    }
}

fn resolve(flags: &Settings, defaults: Settings) -> Result<Settings, Failure> {
    let mut s = defaults;
    s.overlay(&Settings::resolve(flags)?);
    s.nmax.get_or_insert(s.n_max());
    s.term_tol.get_or_insert(s.term_tol());
    Ok(s)
}

fn bath(s: &Settings, temperature: f64, boundary: Boundary) -> Result<BathSpec, Failure> {
    let mass = s.mass.expect("defaulted");
    Ok(BathSpec::new(temperature, mass, boundary)?.with_truncation(s.n_max(), s.term_tol())?)
}

fn cycle_config(s: &Settings, boundary: Boundary) -> Result<CycleConfig, Failure> {
    Ok(CycleConfig {
        omega_c: s.omega_c.expect("defaulted"),
        omega_h: s.omega_h.expect("defaulted"),
        hot: bath(s, s.t_h.expect("defaulted"), boundary)?,
        cold: bath(s, s.t_c.expect("defaulted"), boundary)?,
        tau_h: s.tau_h.expect("defaulted"),
        tau_c: s.tau_c.expect("defaulted"),
        entropy: s.entropy_convention.expect("defaulted").into(),
    })
}

fn boundaries(s: &Settings) -> Vec<Boundary> {
    s.boundaries().expect("defaulted")
}

/// Print `name = value` lines, or write them as a one-row-per-boundary
/// dataset when `--out` is given.
fn report(command: &str, s: &Settings, columns: &[&str], rows: Vec<(Boundary, Vec<Option<f64>>)>) -> Outcome {
    if let Some(out) = &s.out {
        let mut cols = vec!["zeta".to_string()];
        cols.extend(columns.iter().map(|c| c.to_string()));
        let ds = Dataset {
            columns: cols,
            rows: rows
                .into_iter()
                .map(|(b, mut v)| {
                    v.insert(0, Some(b.zeta() as f64));
                    v
                })
                .collect(),
        };
        output::emit(command, s, out, &ds.to_csv())?;
        eprintln!("wrote {}", out.display());
        return Ok(());
    }
    for (b, values) in rows {
        println!("zeta = {}", b.zeta());
        for (name, v) in columns.iter().zip(values) {
            let text = v.map_or_else(|| "-".to_string(), |v| format_sig(v, 12));
            println!("  {name} = {text}");
        }
    }
    Ok(())
}

fn rate(flags: Settings) -> Outcome {
    let defaults = Settings {
        mass: Some(0.01),
        zeta: Some(vec![-1, 0, 1]),
        omega: Some(0.1),
        t_h: Some(0.1),
        ..Settings::default()
    };
    let s = resolve(&flags, defaults)?;
    let omega = s.omega.expect("defaulted");
    if omega < 0.0 {
        return Err(Failure::Usage("invalid `omega`: give the gap as a positive number".into()));
    }
    let mut rows = vec![];
    for b in boundaries(&s) {
        let bath = bath(&s, s.t_h.expect("defaulted"), b)?;
        let r = rate_data(omega, &bath)?;
        let sum = image_sum(omega, &bath)?;
        rows.push((
            b,
            vec![
                Some(r.gamma_plus),
                Some(r.gamma_minus),
                Some(r.gamma),
                Some(r.kappa),
                Some(sum.terms as f64),
                Some(f64::from(u8::from(r.truncated))),
            ],
        ));
    }
    let columns = ["gamma_plus", "gamma_minus", "gamma", "kappa", "terms", "truncated"];
    report("rate", &s, &columns, rows)
}

fn cycle_row(res: &CycleResult) -> Vec<Option<f64>> {
    let e = res.engine;
    let f = res.fridge;
    vec![
        Some(res.r3_in),
        Some(res.r3_h),
        Some(res.r3_c),
        Some(res.w1),
        Some(res.qh),
        Some(res.w3),
        Some(res.qc),
        Some(res.w_tot),
        Some(res.closure_defect),
        e.map(|m| m.efficiency),
        e.map(|m| m.power),
        e.map(|m| m.entropy_rate),
        e.map(|m| m.ecological),
        f.map(|m| m.cop),
        f.map(|m| m.cooling_power),
        f.map(|m| m.chi),
        f.map(|m| m.ecological),
    ]
}

const CYCLE_COLUMNS: [&str; 17] = [
    "r3_in",
    "r3_h",
    "r3_c",
    "w1",
    "qh",
    "w3",
    "qc",
    "w_tot",
    "closure_defect",
    "efficiency",
    "power",
    "entropy_rate",
    "ecological",
    "cop",
    "cooling_power",
    "chi",
    "ecological_fridge",
];

fn cycle(flags: Settings) -> Outcome {
    let s = resolve(&flags, cycle_defaults())?;
    let mut rows = vec![];
    for b in boundaries(&s) {
        let res = run_cycle(&cycle_config(&s, b)?)?;
        if res.truncated() {
            eprintln!("btz-otto: warning: image sum truncated at nmax for zeta = {}", b.zeta());
        }
        rows.push((b, cycle_row(&res)));
    }
    report("cycle", &s, &CYCLE_COLUMNS, rows)
}

fn optimum_row(r: &OptimumReport) -> Vec<Option<f64>> {
    vec![
        Some(r.argmax),
        Some(r.objective_value),
        r.efficiency_or_cop_at_opt,
        Some(r.bracket.0),
        Some(r.bracket.1),
        Some(r.iterations as f64),
        Some(f64::from(u8::from(r.at_edge))),
    ]
}

fn optimize_engine_cmd(objective: EngineObjectiveArg, flags: Settings) -> Outcome {
    let s = resolve(&flags, cycle_defaults())?;
    let objective = match objective {
        EngineObjectiveArg::Power => EngineObjective::Power,
        EngineObjectiveArg::Ecological => EngineObjective::Ecological,
    };
    let mut rows = vec![];
    for b in boundaries(&s) {
        let mut cfg = cycle_config(&s, b)?;
        // the hot gap is the search variable
        cfg.omega_h = f64::NAN;
        rows.push((b, optimum_row(&optimize_engine(&cfg, objective, &SearchOptions::default())?)));
    }
    let columns = ["omega_h", "objective", "efficiency", "lo", "hi", "iterations", "at_edge"];
    report("optimize-engine", &s, &columns, rows)
}

fn optimize_fridge_cmd(objective: FridgeObjectiveArg, flags: Settings) -> Outcome {
    let defaults = Settings {
        omega_h: Some(0.5),
        t_h: Some(2.0),
        t_c: Some(1.0),
        tau_h: Some(0.2),
        tau_c: Some(0.2),
        ..cycle_defaults()
    };
    let s = resolve(&flags, defaults)?;
    let objective = match objective {
        FridgeObjectiveArg::Chi => FridgeObjective::Chi,
        FridgeObjectiveArg::Ecological => FridgeObjective::Ecological,
    };
    let mut rows = vec![];
    for b in boundaries(&s) {
        let mut cfg = cycle_config(&s, b)?;
        // the cold gap is the search variable
        cfg.omega_c = f64::NAN;
        rows.push((b, optimum_row(&optimize_fridge(&cfg, objective, &SearchOptions::default())?)));
    }
    let columns = ["omega_c", "objective", "cop", "lo", "hi", "iterations", "at_edge"];
    report("optimize-fridge", &s, &columns, rows)
}

/// Settings equivalent to a sweep specification, used as defaults.
fn settings_of(spec: &SweepSpec) -> Settings {
    let mut s = Settings {
        zeta: Some(spec.boundaries.iter().map(|b| i64::from(b.zeta())).collect()),
        grid: Some(GridArg(spec.grid)),
        ..Settings::default()
    };
    match spec.template {
        Template::Bath { bath, omega } => {
            s.mass = Some(bath.mass);
            s.omega = Some(omega);
            s.nmax = Some(bath.n_max);
            s.term_tol = Some(bath.term_tol);
        }
        Template::Cycle(c) => {
            s.mass = Some(c.hot.mass);
            s.omega_c = Some(c.omega_c);
            s.omega_h = Some(c.omega_h);
            s.t_h = Some(c.hot.temperature);
            s.t_c = Some(c.cold.temperature);
            s.tau_h = Some(c.tau_h);
            s.tau_c = Some(c.tau_c);
            s.nmax = Some(c.hot.n_max);
            s.term_tol = Some(c.hot.term_tol);
            s.entropy_convention = Some(match c.entropy {
                btz_otto::cycle::EntropyConvention::Standard => config::Convention::Standard,
                btz_otto::cycle::EntropyConvention::Paper => config::Convention::Paper,
            });
        }
    }
    s
}

fn build_spec(kind: SweepKind, s: &Settings) -> Result<SweepSpec, Failure> {
    let grid = s
        .grid
        .ok_or_else(|| Failure::Usage("invalid `grid`: a sweep needs --grid start:stop:count".into()))?
        .0;
    let template = match kind {
        SweepKind::RateVsT => Template::Bath {
            // the temperature is the grid variable
            bath: bath(s, 1.0, Boundary::Neumann)?,
            omega: s.omega.expect("defaulted"),
        },
        _ => Template::Cycle(cycle_config(s, Boundary::Neumann)?),
    };
    Ok(SweepSpec {
        kind,
        template,
        grid,
        boundaries: boundaries(s),
        search: SearchOptions::default(),
    })
}

fn write_dataset(command: &str, s: &Settings, ds: &Dataset) -> Outcome {
    let csv = ds.to_csv();
    match &s.out {
        Some(out) => {
            output::emit(command, s, out, &csv)?;
            eprintln!("wrote {} ({} rows)", out.display(), ds.rows.len());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn sweep(kind: KindArg, param: Option<&str>, flags: Settings) -> Outcome {
    let kind = match kind {
        KindArg::RateVsT => SweepKind::RateVsT,
        KindArg::WorkVsTauH => SweepKind::WorkVsTauH,
        KindArg::CoolpowerVsTauC => SweepKind::CoolpowerVsTauC,
        KindArg::EmpVsRatio => SweepKind::EmpVsRatio,
        KindArg::CopVsRatio => SweepKind::CopVsRatio,
        KindArg::CustomGrid => {
            let name = param.ok_or_else(|| Failure::Usage("invalid `param`: custom_grid needs --param".into()))?;
            SweepKind::CustomGrid(CycleParam::parse(name)?)
        }
    };
    let mut defaults = cycle_defaults();
    defaults.omega = Some(0.1);
    let s = resolve(&flags, defaults)?;
    let spec = build_spec(kind, &s)?;
    let ds = run_sweep(&spec)?;
    let name = match kind {
        SweepKind::RateVsT => "sweep rate_vs_T".to_string(),
        SweepKind::WorkVsTauH => "sweep work_vs_tau_h".to_string(),
        SweepKind::CoolpowerVsTauC => "sweep coolpower_vs_tau_c".to_string(),
        SweepKind::EmpVsRatio => "sweep emp_vs_ratio".to_string(),
        SweepKind::CopVsRatio => "sweep cop_vs_ratio".to_string(),
        SweepKind::CustomGrid(p) => format!("sweep custom_grid {}", p.name()),
    };
    write_dataset(&name, &s, &ds)
}

fn fig(id: &str, flags: Settings) -> Outcome {
    let figure = Figure::parse(id)?;
    let base = figure_spec(figure)?;
    let s = resolve(&flags, settings_of(&base))?;
    let spec = build_spec(base.kind, &s)?;
    let ds = run_sweep(&spec)?;
    write_dataset(&format!("fig {id}"), &s, &ds)
}
