//! Checks behind `verify`, and the measurements they are built from.

use lienard_core::classical::{
    analytic_state, conjugate_momentum, hamiltonian_classical, integrate_lienard, lagrangian, OscillatorState,
};
use lienard_core::eigensolver::{verify_spectrum, YGrid};
use lienard_core::grid::{cosine_similarity, MomentumGrid};
use lienard_core::quantize::{apply_hamiltonian_fd, effective_potential, mass, potential_u, von_roos_potential};
use lienard_core::susy::{
    apply_lowering, apply_raising, partner_potentials, riccati_residual, shape_invariance_remainder, Superpotential,
};
use lienard_core::wavefn::{
    gamma_asymptotic_check, gram_defect, laguerre_hermite_limit, lho_psi, limit_deviation, overlap_matrix, psi,
    sample_psi, Eigenstate,
};
use lienard_core::{AmbiguityParams, Error, Model, PhysicalParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};

/// Seed for the pseudo-random parameter sets and sample points.
pub const SEED: u64 = 20_240_917;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check: String,
    pub params: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ReportRecord {
    /// Passes when `|measured - expected| <= tolerance`.
    pub fn new(check: impl Into<String>, params: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        let passed = (measured - expected).abs() <= tolerance;
        Self { check: check.into(), params: params.into(), measured, expected, tolerance, passed }
    }

    /// One-sided bound `measured < limit`.
    pub fn below(check: impl Into<String>, params: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self { check: check.into(), params: params.into(), measured, expected: 0.0, tolerance: limit, passed: measured.abs() < limit }
    }

    /// A count of violated orderings, which must be zero.
    pub fn violations(check: impl Into<String>, params: impl Into<String>, count: usize) -> Self {
        Self::new(check, params, count as f64, 0.0, 0.0)
    }
}

pub fn records_table(records: &[ReportRecord]) -> Table {
    let mut t = Table::new(&["check", "params", "measured", "expected", "tolerance", "passed"]);
    for r in records {
        t.push(vec![
            r.check.as_str().into(),
            r.params.as_str().into(),
            r.measured.into(),
            r.expected.into(),
            r.tolerance.into(),
            Cell::Bool(r.passed),
        ]);
    }
    t
}

pub fn describe(model: &Model) -> String {
    let p = &model.phys;
    format!("omega={} k={} hbar={} ag={}", p.omega, p.k, p.hbar, model.amb.product())
}

/// Number of adjacent pairs where the sequence fails to decrease strictly.
pub fn increases(values: &[f64]) -> usize {
    values.windows(2).filter(|w| !(w[1] < w[0])).count()
}

/// `max |H psi_n - e_n psi_n| / max |psi_n|` with the momentum-space operator at spacing `h`.
pub fn eigenrelation_residual(model: &Model, n: usize, h: f64) -> Result<f64, Error> {
    let grid = MomentumGrid::for_states(model, n, h)?;
    let s = sample_psi(model, n, &grid)?;
    let hs = apply_hamiltonian_fd(model, &grid, &s)?;
    let e = Eigenstate::new(model, n).energy();
    let inner = s.interior();
    let residual = hs.values.iter().zip(&inner.values).map(|(a, b)| (a - e * b).abs()).fold(0.0, f64::max);
    Ok(residual / s.sup_norm())
}

/// `max |A psi_0|` for the normalised closed-form ground state.
pub fn annihilation_norm(model: &Model, h: f64) -> Result<f64, Error> {
    let grid = MomentumGrid::for_states(model, 1, h)?;
    let s = sample_psi(model, 0, &grid)?;
    Ok(apply_lowering(&Superpotential::fitted(model), &grid, &s)?.sup_norm())
}

/// Cosine similarity of `A+(b) psi_0(b + step)` with the closed-form `psi_1`.
pub fn recurrence_similarity(model: &Model, h: f64) -> Result<f64, Error> {
    let grid = MomentumGrid::for_states(model, 1, h)?;
    let sp = Superpotential::fitted(model);
    let partner = sp.shifted();
    let ground = grid.sample(|p| Ok(partner.ground_state_log(p)?.exp()))?;
    let built = apply_raising(&sp, &grid, &ground)?;
    let exact = sample_psi(model, 1, &grid)?.interior();
    Ok(cosine_similarity(&built.values, &exact.values))
}

/// Largest relative gap between the closed-form and the generic potential at `count` points.
pub fn potential_form_defect(model: &Model, amb: &AmbiguityParams, count: usize, rng: &mut ChaCha8Rng) -> Result<f64, Error> {
    let phys = &model.phys;
    let (lo, hi) = match model.derived() {
        Some(d) => (-2.0 * d.p_max, d.p_max * (1.0 - 1e-3)),
        None => (-10.0, 10.0),
    };
    let mut worst = 0.0f64;
    for _ in 0..count {
        let p = rng.random_range(lo..hi);
        let profile = mass(phys, p)?;
        let u = potential_u(phys, p)?;
        let generic = von_roos_potential(&profile, u, amb, phys.hbar);
        let closed = effective_potential(model, p)?;
        // measured against the largest term that enters the sum
        let slope = profile.dm * profile.dm / profile.m.powi(3);
        let terms = 0.5 * phys.hbar * phys.hbar * (amb.product().abs() + (amb.alpha + amb.gamma).abs()) * slope;
        let scale = closed.abs().max(u.abs()).max(terms).max(f64::MIN_POSITIVE);
        worst = worst.max((generic - closed).abs() / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalSummary {
    pub max_error: f64,
    /// Largest relative change of the Hamiltonian along the trajectory.
    pub energy_drift: f64,
    /// Largest `|H - (p v - L)|` along the trajectory.
    pub legendre_defect: f64,
}

/// RK4 from the closed-form initial state, compared with the closed form.
pub fn classical_summary(phys: &PhysicalParams, amplitude: f64, phase: f64, t_end: f64, step: f64) -> Result<ClassicalSummary, Error> {
    let start = analytic_state(phys, amplitude, phase, 0.0)?;
    let traj = integrate_lienard(phys, start, t_end, step)?;
    let mut max_error = 0.0f64;
    for (t, x) in traj.times.iter().zip(&traj.positions) {
        max_error = max_error.max((x - analytic_state(phys, amplitude, phase, *t)?.x).abs());
    }
    let energies = traj.energies(phys)?;
    let e0 = energies[0];
    let energy_drift = energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max) / e0.abs();
    let mut legendre_defect = 0.0f64;
    for i in 0..traj.len() {
        let s: OscillatorState = traj.state(i);
        let p = conjugate_momentum(phys, &s)?;
        let h = hamiltonian_classical(phys, s.x, p)?;
        legendre_defect = legendre_defect.max((h - (p * s.v - lagrangian(phys, &s)?)).abs());
    }
    Ok(ClassicalSummary { max_error, energy_drift, legendre_defect })
}

/// Pseudo-random admissible parameter sets.
pub fn random_models(count: usize, rng: &mut ChaCha8Rng) -> Vec<Model> {
    (0..count)
        .map(|_| {
            let phys = PhysicalParams::new(rng.random_range(0.5..2.0), rng.random_range(0.5..1.5), rng.random_range(0.5..1.5))
                .expect("valid range");
            let a = 9.0 * phys.omega.powi(3) / (phys.hbar * phys.k * phys.k);
            let product = a * a * rng.random_range(-0.5..2.0);
            let gamma: f64 = rng.random_range(0.5..2.0);
            Model::new(phys, AmbiguityParams::new(product / gamma, gamma).expect("finite")).expect("admissible")
        })
        .collect()
}

/// Every evaluator rejects `p = p_max` (and beyond); returns how many accepted it.
pub fn domain_leaks(model: &Model) -> usize {
    let Some(d) = model.derived() else { return 0 };
    let phys = &model.phys;
    let mut leaks = 0;
    for p in [d.p_max, d.p_max * (1.0 + 1e-12), 2.0 * d.p_max] {
        let results = [
            mass(phys, p).map(drop),
            potential_u(phys, p).map(drop),
            effective_potential(model, p).map(drop),
            partner_potentials(model, p).map(drop),
            Superpotential::fitted(model).eval(p).map(drop),
            psi(model, 0, p).map(drop),
            hamiltonian_classical(phys, 0.0, p).map(drop),
            phys.check_momentum(p),
        ];
        leaks += results.iter().filter(|r| !matches!(r, Err(Error::MomentumDomain { .. }))).count();
    }
    leaks
}

/// Run every module's checks for the configured model.
pub fn run_suite(cfg: &RunConfig) -> Result<Vec<ReportRecord>, CliError> {
    let model = cfg.model()?;
    let tag = describe(&model);
    let hw = model.hbar_omega();
    let mut out = Vec::new();

    // spectrum against the independent solver
    let n_max = cfg.n_max.min(5);
    let grid = YGrid::new(cfg.y_max, cfg.points)?;
    let check = verify_spectrum(&model, n_max, &grid)?;
    for level in &check.levels {
        out.push(ReportRecord::new(format!("spectrum_level_{}", level.n), &tag, level.numeric, level.analytic, 1e-5));
    }
    out.push(ReportRecord::new("spectrum_convergence_order", &tag, check.convergence_ratio.log2(), 2.0, 0.5));
    out.push(ReportRecord::below("level_spacing", &tag, check.max_spacing_deviation(hw), 1e-5));

    // supersymmetric structure
    let p_grid = MomentumGrid::for_states_with_intervals(&model, 0, 999)?;
    out.push(ReportRecord::below("riccati_residual", &tag, riccati_residual(&model, &p_grid)?, 1e-10));
    let (mean, std) = shape_invariance_remainder(&model, &p_grid)?;
    out.push(ReportRecord::new("shape_invariance_mean", &tag, mean, hw, 1e-12 * hw.max(1.0)));
    out.push(ReportRecord::below("shape_invariance_std", &tag, std, 1e-12));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (i, m) in random_models(5, &mut rng).iter().enumerate() {
        let g = MomentumGrid::for_states_with_intervals(m, 0, 999)?;
        let tag_i = describe(m);
        out.push(ReportRecord::below(format!("riccati_residual_random_{i}"), &tag_i, riccati_residual(m, &g)?, 1e-10));
        let (mean, std) = shape_invariance_remainder(m, &g)?;
        out.push(ReportRecord::new(format!("shape_invariance_mean_random_{i}"), &tag_i, mean, m.hbar_omega(), 1e-12 * m.hbar_omega().max(1.0)));
        out.push(ReportRecord::below(format!("shape_invariance_std_random_{i}"), &tag_i, std, 1e-12));
    }

    // quantization
    let defect = potential_form_defect(&model, &cfg.ambiguity()?, 1000, &mut rng)?;
    out.push(ReportRecord::below("closed_form_potential", &tag, defect, 1e-12));
    for n in 0..=4 {
        let coarse = eigenrelation_residual(&model, n, cfg.h_p)?;
        let fine = eigenrelation_residual(&model, n, 0.5 * cfg.h_p)?;
        out.push(ReportRecord::below(format!("eigenrelation_{n}"), &tag, coarse, 1e-5));
        out.push(ReportRecord::new(format!("eigenrelation_order_{n}"), &tag, (coarse / fine).log2(), 2.0, 0.5));
    }
    out.push(ReportRecord::below("ground_annihilation", &tag, annihilation_norm(&model, cfg.h_p)?, 1e-5));
    out.push(ReportRecord::below("raising_recurrence", &tag, 1.0 - recurrence_similarity(&model, cfg.h_p)?, 1e-6));
    out.push(ReportRecord::violations("momentum_domain_leaks", &tag, domain_leaks(&model)));

    // eigenfunctions
    out.push(ReportRecord::below("gram_defect", &tag, gram_defect(&overlap_matrix(&model, 4)?), 1e-8));

    // classical dynamics
    let phys = model.phys;
    let t_end = cfg.t_end();
    let run = classical_summary(&phys, cfg.amplitude, cfg.phase, t_end, cfg.step)?;
    out.push(ReportRecord::below("rk4_vs_closed_form", &tag, run.max_error, 1e-6));
    out.push(ReportRecord::below("energy_conservation", &tag, run.energy_drift, 1e-8));
    out.push(ReportRecord::below("legendre_identity", &tag, run.legendre_defect, 1e-12));
    let errs = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| classical_summary(&phys, cfg.amplitude, cfg.phase, t_end, h).map(|s| s.max_error))
        .collect::<Result<Vec<_>, _>>()?;
    out.push(ReportRecord::new("rk4_order", &tag, (errs[1] / errs[2]).log2(), 4.0, 0.5));

    // harmonic limit studies
    let base = PhysicalParams::new(0.0, phys.omega, phys.hbar)?;
    for n in 0..=1 {
        let rows = limit_deviation(n, &cfg.k_values, &base, &AmbiguityParams::default())?;
        let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
        out.push(ReportRecord::violations(format!("harmonic_limit_monotone_{n}"), format!("k={:?}", cfg.k_values), increases(&devs)));
    }
    let harmonic = Model::new(base, model.amb)?;
    let mismatches = (0..=3)
        .flat_map(|n| (-40..=40).map(move |i| (n, 0.1 * i as f64)))
        .filter(|&(n, p)| psi(&harmonic, n, p).ok() != Some(lho_psi(&base, n, p)))
        .count();
    out.push(ReportRecord::violations("harmonic_branch_exact", &tag, mismatches));
    let gamma = gamma_asymptotic_check(&[10.0, 100.0, 1000.0])?;
    let ground: Vec<f64> = gamma.iter().filter(|r| r.n == 0).map(|r| r.rel_error).collect();
    out.push(ReportRecord::below("gamma_asymptotic_a10", "n=0 a=10", ground[0], 1e-2));
    out.push(ReportRecord::below("gamma_asymptotic_a1000", "n=0 a=1000", ground[2], 1e-4));
    let unordered: usize = (0..=3)
        .map(|n| increases(&gamma.iter().filter(|r| r.n == n).map(|r| r.rel_error).collect::<Vec<_>>()))
        .sum();
    out.push(ReportRecord::violations("gamma_asymptotic_monotone", "n=0..3 a=10,100,1000", unordered));
    let mut unordered = 0;
    for n in 1..=2 {
        let rows = laguerre_hermite_limit(n, 1.0, &[1e2, 1e4, 1e6])?;
        unordered += increases(&rows.iter().map(|r| r.deviation).collect::<Vec<_>>());
    }
    out.push(ReportRecord::violations("laguerre_hermite_monotone", "n=1,2 x=1 a=1e2,1e4,1e6", unordered));
    Ok(out)
}

/// Rows for the `limit` command: all three limit studies in one table.
pub fn limit_table(cfg: &RunConfig) -> Result<(Table, Vec<ReportRecord>), CliError> {
    let base = PhysicalParams::new(0.0, cfg.omega, cfg.hbar)?;
    let mut table = Table::new(&["study", "n", "x", "a_script", "k", "value", "reference", "deviation"]);
    let mut records = Vec::new();
    let a_values = [10.0, 100.0, 1000.0, 10000.0];
    for row in gamma_asymptotic_check(&a_values)? {
        table.push(vec![
            "gamma".into(),
            row.n.into(),
            Cell::Empty,
            row.a_script.into(),
            Cell::Empty,
            row.asymptotic_log.into(),
            row.exact_log.into(),
            row.rel_error.into(),
        ]);
    }
    for n in 0..=3 {
        let rows = laguerre_hermite_limit(n, 1.0, &[1e2, 1e4, 1e6])?;
        for r in &rows {
            table.push(vec![
                "laguerre_hermite".into(),
                n.into(),
                1.0.into(),
                r.a_script.into(),
                Cell::Empty,
                r.scaled_laguerre.into(),
                r.hermite_target.into(),
                r.deviation.into(),
            ]);
        }
        if n > 0 {
            let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
            records.push(ReportRecord::violations(format!("laguerre_hermite_monotone_{n}"), "x=1", increases(&devs)));
        }
    }
    for n in 0..=1 {
        let rows = limit_deviation(n, &cfg.k_values, &base, &AmbiguityParams::default())?;
        for r in &rows {
            table.push(vec![
                "harmonic_limit".into(),
                n.into(),
                Cell::Empty,
                r.a_script.into(),
                r.k.into(),
                Cell::Empty,
                Cell::Empty,
                r.deviation.into(),
            ]);
        }
        let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
        records.push(ReportRecord::violations(format!("harmonic_limit_monotone_{n}"), format!("k={:?}", cfg.k_values), increases(&devs)));
    }
    Ok((table, records))
}
