//! Parameter sweeps producing the tabular datasets behind the figures.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::{run_cycle, CycleConfig, EntropyConvention};
use crate::error::{Error, Result};
use crate::optimize::{cop_curve, emp_curve, SearchOptions};
use crate::response::{transition_rate, BathSpec, Boundary};

/// Linear grid of `count` points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        let g = Grid { start, stop, count };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::invalid("grid", format!("count {} must be at least 2", self.count)));
        }
        if !(self.start < self.stop && self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::invalid(
                "grid",
                format!("start {} must be below stop {}", self.start, self.stop),
            ));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i == self.count - 1 { self.stop } else { self.start + i as f64 * step })
            .collect()
    }
}

/// Cycle parameter varied by a custom sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleParam {
    OmegaC,
    OmegaH,
    Th,
    Tc,
    TauH,
    TauC,
}

impl CycleParam {
    pub fn name(self) -> &'static str {
        match self {
            CycleParam::OmegaC => "omega_c",
            CycleParam::OmegaH => "omega_h",
            CycleParam::Th => "Th",
            CycleParam::Tc => "Tc",
            CycleParam::TauH => "tau_h",
            CycleParam::TauC => "tau_c",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "omega_c" => CycleParam::OmegaC,
            "omega_h" => CycleParam::OmegaH,
            "Th" => CycleParam::Th,
            "Tc" => CycleParam::Tc,
            "tau_h" => CycleParam::TauH,
            "tau_c" => CycleParam::TauC,
            other => return Err(Error::invalid("param", format!("unknown cycle parameter `{other}`"))),
        })
    }

    fn set(self, cfg: &mut CycleConfig, value: f64) {
        match self {
            CycleParam::OmegaC => cfg.omega_c = value,
            CycleParam::OmegaH => cfg.omega_h = value,
            CycleParam::Th => cfg.hot.temperature = value,
            CycleParam::Tc => cfg.cold.temperature = value,
            CycleParam::TauH => cfg.tau_h = value,
            CycleParam::TauC => cfg.tau_c = value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    RateVsT,
    WorkVsTauH,
    CoolpowerVsTauC,
    EmpVsRatio,
    CopVsRatio,
    /// Extracted work and both heats against any single cycle parameter.
    CustomGrid(CycleParam),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Template {
    /// A bath probed at gap `omega`; its temperature is the grid variable.
    Bath { bath: BathSpec, omega: f64 },
    Cycle(CycleConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub template: Template,
    pub grid: Grid,
    pub boundaries: Vec<Boundary>,
    pub search: SearchOptions,
}

/// Ordered rows of optional reals under named columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Dataset {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// CSV text with a header row; absent values are empty fields.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if let Some(v) = v {
                    out.push_str(&format_sig(*v, 12));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Shortest decimal rendering of `x` rounded to `digits` significant digits,
/// in positional notation for moderate exponents and scientific otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.boundaries.is_empty() {
            return Err(Error::invalid("zeta", "at least one boundary condition is required"));
        }
        match (self.kind, &self.template) {
            (SweepKind::RateVsT, Template::Bath { bath, omega }) => {
                bath.validate()?;
                if !(omega.is_finite() && *omega != 0.0) {
                    return Err(Error::invalid("omega", format!("{omega} must be finite and nonzero")));
                }
                Ok(())
            }
            (SweepKind::RateVsT, Template::Cycle(_)) => {
                Err(Error::invalid("kind", "rate_vs_T needs a bath template"))
            }
            (_, Template::Bath { .. }) => Err(Error::invalid("kind", "cycle sweeps need a cycle template")),
            (_, Template::Cycle(_)) => Ok(()),
        }
    }

    fn grid_label(&self) -> &'static str {
        match self.kind {
            SweepKind::RateVsT => "T",
            SweepKind::WorkVsTauH => "tau_h",
            SweepKind::CoolpowerVsTauC => "tau_c",
            SweepKind::EmpVsRatio | SweepKind::CopVsRatio => "ratio",
            SweepKind::CustomGrid(p) => p.name(),
        }
    }
}

fn zeta_column(metric: &str, b: Boundary) -> String {
    format!("{metric}_zeta{}", b.zeta())
}

fn with_boundary(cfg: &CycleConfig, b: Boundary) -> CycleConfig {
    let mut c = *cfg;
    c.hot = c.hot.with_boundary(b);
    c.cold = c.cold.with_boundary(b);
    c
}

/// Evaluate a sweep. Rows follow the grid order; each boundary condition in
/// `spec.boundaries` contributes its own group of columns.
pub fn run_sweep(spec: &SweepSpec) -> Result<Dataset> {
    spec.validate()?;
    let xs = spec.grid.points();
    let mut columns = vec![spec.grid_label().to_string()];
    let mut rows: Vec<Vec<Option<f64>>> = xs.iter().map(|&x| vec![Some(x)]).collect();

    let mut push = |name: String, values: Vec<Option<f64>>| {
        columns.push(name);
        for (row, v) in rows.iter_mut().zip(values) {
            row.push(v);
        }
    };

    match (spec.kind, spec.template) {
        (SweepKind::RateVsT, Template::Bath { bath, omega }) => {
            for &b in &spec.boundaries {
                let values = xs
                    .par_iter()
                    .map(|&t| {
                        let bath = bath.with_temperature(t)?.with_boundary(b);
                        transition_rate(omega, &bath).map(Some)
                    })
                    .collect::<Result<Vec<_>>>()?;
                push(zeta_column("rate", b), values);
            }
        }
        (SweepKind::EmpVsRatio, Template::Cycle(cfg)) => {
            let mut bounds = None;
            for &b in &spec.boundaries {
                let table = emp_curve(&with_boundary(&cfg, b), &xs, &spec.search)?;
                push(zeta_column("eta_star", b), table.iter().map(|r| r.eta_star).collect());
                push(zeta_column("eta_eco", b), table.iter().map(|r| r.eta_eco).collect());
                bounds.get_or_insert(table);
            }
            let table = bounds.expect("at least one boundary");
            push("eta_carnot".into(), table.iter().map(|r| r.eta_carnot).collect());
            push("eta_ca".into(), table.iter().map(|r| r.eta_ca).collect());
        }
        (SweepKind::CopVsRatio, Template::Cycle(cfg)) => {
            let mut bounds = None;
            for &b in &spec.boundaries {
                let table = cop_curve(&with_boundary(&cfg, b), &xs, &spec.search)?;
                push(zeta_column("cop_star", b), table.iter().map(|r| r.cop_star).collect());
                push(zeta_column("cop_eco", b), table.iter().map(|r| r.cop_eco).collect());
                bounds.get_or_insert(table);
            }
            let table = bounds.expect("at least one boundary");
            push("cop_carnot".into(), table.iter().map(|r| r.cop_carnot).collect());
            push("cop_yan".into(), table.iter().map(|r| r.cop_yan).collect());
        }
        (kind, Template::Cycle(cfg)) => {
            let (param, metrics): (CycleParam, &[&str]) = match kind {
                SweepKind::WorkVsTauH => (CycleParam::TauH, &["w_tot"]),
                SweepKind::CoolpowerVsTauC => (CycleParam::TauC, &["qc"]),
                SweepKind::CustomGrid(p) => (p, &["w_tot", "qh", "qc"]),
                _ => unreachable!("validated above"),
            };
            for &b in &spec.boundaries {
                let base = with_boundary(&cfg, b);
                let results = xs
                    .par_iter()
                    .map(|&x| {
                        let mut c = base;
                        param.set(&mut c, x);
                        run_cycle(&c)
                    })
                    .collect::<Result<Vec<_>>>()?;
                for &m in metrics {
                    let values = results
                        .iter()
                        .map(|r| {
                            Some(match m {
                                "w_tot" => r.w_tot,
                                "qh" => r.qh,
                                _ => r.qc,
                            })
                        })
                        .collect();
                    push(zeta_column(m, b), values);
                }
            }
        }
        (_, Template::Bath { .. }) => unreachable!("validated above"),
    }

    Ok(Dataset { columns, rows })
}

/// Figures with pinned default parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Figure {
    /// Transition rate against temperature.
    F1,
    /// Extracted work against hot-stroke duration.
    F2,
    /// Efficiency at maximum power and at maximum ecological function.
    F3,
    /// Cooling heat against cold-stroke duration, short hot stroke.
    F4a,
    /// Cooling heat against cold-stroke duration, long hot stroke.
    F4b,
    /// COP at maximum figure of merit and at maximum ecological function.
    F5,
}

impl Figure {
    pub const ALL: [Figure; 6] = [Figure::F1, Figure::F2, Figure::F3, Figure::F4a, Figure::F4b, Figure::F5];

    pub fn parse(id: &str) -> Result<Self> {
        Ok(match id {
            "1" => Figure::F1,
            "2" => Figure::F2,
            "3" => Figure::F3,
            "4a" => Figure::F4a,
            "4b" => Figure::F4b,
            "5" => Figure::F5,
            other => return Err(Error::invalid("figure", format!("unknown figure `{other}`"))),
        })
    }

    pub fn id(self) -> &'static str {
        match self {
            Figure::F1 => "1",
            Figure::F2 => "2",
            Figure::F3 => "3",
            Figure::F4a => "4a",
            Figure::F4b => "4b",
            Figure::F5 => "5",
        }
    }
}

/// Mass used by every figure.
pub const FIGURE_MASS: f64 = 0.01;
/// Hot-bath temperature for the optimization figures.
pub const FIGURE_HOT_TEMPERATURE: f64 = 2.0;

fn cycle_template(omega_c: f64, omega_h: f64, t_h: f64, t_c: f64, tau_h: f64, tau_c: f64) -> Result<CycleConfig> {
    Ok(CycleConfig {
        omega_c,
        omega_h,
        hot: BathSpec::new(t_h, FIGURE_MASS, Boundary::Neumann)?,
        cold: BathSpec::new(t_c, FIGURE_MASS, Boundary::Neumann)?,
        tau_h,
        tau_c,
        entropy: EntropyConvention::Standard,
    })
}

/// Default sweep for a figure.
pub fn figure_spec(fig: Figure) -> Result<SweepSpec> {
    let all = Boundary::ALL.to_vec();
    let ratios = Grid::new(0.02, 0.98, 96)?;
    let search = SearchOptions::default();
    let spec = match fig {
        Figure::F1 => SweepSpec {
            kind: SweepKind::RateVsT,
            template: Template::Bath {
                bath: BathSpec::new(1.0, FIGURE_MASS, Boundary::Transparent)?,
                omega: 0.1,
            },
            grid: Grid::new(0.01, 2.0, 200)?,
            boundaries: all,
            search,
        },
        Figure::F2 => SweepSpec {
            kind: SweepKind::WorkVsTauH,
            template: Template::Cycle(cycle_template(0.1, 1.0, 2.0, 0.1, 0.0, 1.0)?),
            grid: Grid::new(0.0, 30.0, 301)?,
            boundaries: all,
            search,
        },
        Figure::F3 => SweepSpec {
            kind: SweepKind::EmpVsRatio,
            // omega_h is the search variable; the value here is a placeholder.
            template: Template::Cycle(cycle_template(0.1, 0.2, FIGURE_HOT_TEMPERATURE, 1.0, 0.2, 0.5)?),
            grid: ratios,
            boundaries: vec![Boundary::Neumann],
            search,
        },
        Figure::F4a | Figure::F4b => SweepSpec {
            kind: SweepKind::CoolpowerVsTauC,
            template: Template::Cycle(cycle_template(
                0.1,
                0.5,
                0.2,
                0.1,
                if fig == Figure::F4a { 0.3 } else { 10.0 },
                0.0,
            )?),
            grid: Grid::new(0.0, 60.0, 301)?,
            boundaries: all,
            search,
        },
        Figure::F5 => SweepSpec {
            kind: SweepKind::CopVsRatio,
            // omega_c is the search variable; the value here is a placeholder.
            template: Template::Cycle(cycle_template(0.1, 0.5, FIGURE_HOT_TEMPERATURE, 1.0, 0.2, 0.2)?),
            grid: ratios,
            boundaries: vec![Boundary::Neumann],
            search,
        },
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_hit_both_ends() {
        let g = Grid::new(0.02, 0.98, 96).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 96);
        assert_eq!(p[0], 0.02);
        assert_eq!(p[95], 0.98);
        assert!(Grid::new(1.0, 1.0, 5).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(0.0977390123456789, 12), "0.0977390123457");
        assert_eq!(format_sig(2.0, 12), "2");
        assert_eq!(format_sig(-1.5e-7, 12), "-1.5e-7");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e14");
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
    }

    #[test]
    fn csv_layout() {
        let ds = Dataset {
            columns: vec!["T".into(), "rate_zeta-1".into()],
            rows: vec![vec![Some(0.5), None], vec![Some(1.0), Some(0.25)]],
        };
        assert_eq!(ds.to_csv(), "T,rate_zeta-1\n0.5,\n1,0.25\n");
    }

    #[test]
    fn column_names_carry_zeta() {
        let spec = SweepSpec {
            kind: SweepKind::RateVsT,
            template: Template::Bath {
                bath: BathSpec::new(1.0, 0.01, Boundary::Transparent).unwrap(),
                omega: 0.1,
            },
            grid: Grid::new(0.1, 0.2, 3).unwrap(),
            boundaries: Boundary::ALL.to_vec(),
            search: SearchOptions::default(),
        };
        let ds = run_sweep(&spec).unwrap();
        assert_eq!(ds.columns, ["T", "rate_zeta-1", "rate_zeta0", "rate_zeta1"]);
        assert_eq!(ds.rows.len(), 3);
    }

    #[test]
    fn mismatched_template_is_rejected() {
        let mut spec = figure_spec(Figure::F1).unwrap();
        spec.kind = SweepKind::WorkVsTauH;
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn figure_ids_round_trip() {
        for f in Figure::ALL {
            assert_eq!(Figure::parse(f.id()).unwrap(), f);
        }
        assert!(Figure::parse("9").is_err());
    }
}
