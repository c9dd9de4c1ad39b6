//! One function per subcommand. Each returns its table plus the checks whose
//! failure should turn the exit code to 1.

use lienard_core::classical::{analytic_state, integrate_lienard};
use lienard_core::grid::MomentumGrid;
use lienard_core::susy::spectrum_of;
use lienard_core::wavefn::{gram_defect, limit_deviation, overlap_matrix, sample_psi};
use lienard_core::{AmbiguityParams, Model, PhysicalParams};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::suite::{limit_table, records_table, run_suite, ReportRecord};

pub struct Outcome {
    pub table: Table,
    pub records: Vec<ReportRecord>,
}

impl Outcome {
    fn plain(table: Table) -> Self {
        Self { table, records: Vec::new() }
    }
}

pub fn classical(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let phys = cfg.physical()?;
    let start = analytic_state(&phys, cfg.amplitude, cfg.phase, 0.0)?;
    let traj = integrate_lienard(&phys, start, cfg.t_end(), cfg.step)?;
    let mut table = Table::new(&["t", "x_numeric", "x_analytic", "abs_err"]);
    for (&t, &x) in traj.times.iter().zip(&traj.positions) {
        let exact = analytic_state(&phys, cfg.amplitude, cfg.phase, t)?.x;
        table.push(vec![t.into(), x.into(), exact.into(), (x - exact).abs().into()]);
    }
    Ok(Outcome::plain(table))
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let hw = model.hbar_omega();
    let mut table = Table::new(&["n", "energy", "hbar_omega_units"]);
    for level in spectrum_of(&model, cfg.n_max).levels {
        table.push(vec![level.n.into(), level.energy.into(), (level.energy / hw).into()]);
    }
    Ok(Outcome::plain(table))
}

pub fn wavefn(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let grid = MomentumGrid::for_states(&model, cfg.level, cfg.h_p)?;
    let samples = sample_psi(&model, cfg.level, &grid)?;
    let mut table = Table::new(&["p", "y", "psi"]);
    for (p, &v) in grid.points().zip(&samples.values) {
        table.push(vec![p.into(), model.y_of_p(p).into(), v.into()]);
    }
    Ok(Outcome::plain(table))
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let records = run_suite(cfg)?;
    Ok(Outcome { table: records_table(&records), records })
}

pub fn limit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (table, records) = limit_table(cfg)?;
    Ok(Outcome { table, records })
}

struct SweepRow {
    omega: f64,
    k: f64,
    alpha_gamma: f64,
    a_script: Option<f64>,
    lambda: Option<f64>,
    ground_energy: f64,
    gram_defect: f64,
    harmonic_deviation: Option<f64>,
}

fn sweep_point(cfg: &RunConfig, omega: f64, k: f64, alpha_gamma: f64) -> Result<SweepRow, CliError> {
    let phys = PhysicalParams::new(k, omega, cfg.hbar)?;
    let amb = AmbiguityParams::new(alpha_gamma, 1.0)?;
    let model = Model::new(phys, amb)?;
    // only defined while the momentum bound lies outside the comparison window
    let window = 4.0 * phys.hbar_omega().sqrt();
    let harmonic_deviation = match model.derived() {
        None => Some(0.0),
        Some(d) if d.p_max > window => {
            let base = PhysicalParams::new(0.0, omega, cfg.hbar)?;
            Some(limit_deviation(0, &[k], &base, &amb)?[0].deviation)
        }
        Some(_) => None,
    };
    Ok(SweepRow {
        omega,
        k,
        alpha_gamma,
        a_script: model.derived().map(|d| d.a_script),
        lambda: model.derived().map(|d| d.lambda),
        ground_energy: spectrum_of(&model, 0).levels[0].energy,
        gram_defect: gram_defect(&overlap_matrix(&model, cfg.n_max.min(6))?),
        harmonic_deviation,
    })
}

/// Independent points in parallel; rows sorted by `(omega, k, alpha_gamma)`.
pub fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let tuples: Vec<(f64, f64, f64)> = cfg
        .omega_values
        .iter()
        .flat_map(|&w| cfg.k_values.iter().flat_map(move |&k| cfg.alpha_gamma_values.iter().map(move |&ag| (w, k, ag))))
        .collect();
    let mut rows = tuples
        .par_iter()
        .map(|&(w, k, ag)| sweep_point(cfg, w, k, ag))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| {
        a.omega.total_cmp(&b.omega).then(a.k.total_cmp(&b.k)).then(a.alpha_gamma.total_cmp(&b.alpha_gamma))
    });
    let mut table = Table::new(&[
        "omega",
        "k",
        "alpha_gamma",
        "a_script",
        "lambda",
        "ground_energy",
        "gram_defect",
        "harmonic_deviation",
    ]);
    for r in rows {
        table.push(vec![
            r.omega.into(),
            r.k.into(),
            r.alpha_gamma.into(),
            Cell::from(r.a_script),
            Cell::from(r.lambda),
            r.ground_energy.into(),
            r.gram_defect.into(),
            Cell::from(r.harmonic_deviation),
        ]);
    }
    Ok(Outcome::plain(table))
}
