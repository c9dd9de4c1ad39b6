use lienard_core::classical::{conjugate_momentum, hamiltonian_classical, lagrangian, phase_constraint, OscillatorState};
use lienard_core::eigensolver::{sturm_count, TridiagonalOperator};
use lienard_core::quantize::{effective_potential, mass, potential_u, von_roos_potential};
use lienard_core::susy::{partner_potentials, partner_potentials_from_definition, spectrum_of, Superpotential};
use lienard_core::wavefn::psi;
use lienard_core::{derive_params, AmbiguityParams, Error, Model, PhysicalParams};
use proptest::prelude::*;

fn physical() -> impl Strategy<Value = PhysicalParams> {
    (0.2f64..3.0, 0.5f64..2.5, 0.3f64..2.0).prop_map(|(k, w, h)| PhysicalParams::new(k, w, h).unwrap())
}

/// Physical parameters plus an admissible `alpha gamma`.
fn admissible() -> impl Strategy<Value = (PhysicalParams, f64)> {
    (physical(), 0.0f64..0.999).prop_map(|(phys, frac)| {
        let d = derive_params(&phys, &AmbiguityParams::default()).unwrap();
        let a2 = d.a_script * d.a_script;
        // spread the product over (-a^2, a^2)
        (phys, a2 * (2.0 * frac - 1.0))
    })
}

fn model_for(phys: PhysicalParams, product: f64) -> Model {
    Model::new(phys, AmbiguityParams::new(product, 1.0).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn offset_keeps_superpotential_bounded((phys, product) in admissible()) {
        let d = derive_params(&phys, &AmbiguityParams::new(product, 1.0).unwrap()).unwrap();
        prop_assert!(d.lambda > 0.0);
        prop_assert!(d.shift > -d.a_script);
        prop_assert!(d.b_coef > -d.p_max * d.a_coef);
    }

    #[test]
    fn depends_on_product_only((phys, product) in admissible(), e in -3i32..3) {
        let scale = 2f64.powi(e);
        let one = AmbiguityParams::new(product, 1.0).unwrap();
        let other = AmbiguityParams::new(product * scale, 1.0 / scale).unwrap();
        prop_assert_eq!(derive_params(&phys, &one).unwrap(), {
            let mut d = derive_params(&phys, &other).unwrap();
            d.alpha_gamma = one.product();
            d
        });
        let (m1, m2) = (Model::new(phys, one).unwrap(), Model::new(phys, other).unwrap());
        let p = 0.3 * m1.derived().unwrap().p_max;
        prop_assert_eq!(effective_potential(&m1, p).unwrap(), effective_potential(&m2, p).unwrap());
    }

    #[test]
    fn closed_form_potential_matches_generic(
        phys in physical(),
        alpha in -2.0f64..2.0,
        gamma in -2.0f64..2.0,
        frac in -5.0f64..0.99,
    ) {
        let amb = AmbiguityParams::new(alpha, gamma).unwrap();
        let Ok(model) = Model::new(phys, amb) else { return Ok(()) };
        let p = frac * model.derived().unwrap().p_max;
        let generic = von_roos_potential(&mass(&phys, p).unwrap(), potential_u(&phys, p).unwrap(), &amb, phys.hbar);
        let closed = effective_potential(&model, p).unwrap();
        prop_assert!((generic - closed).abs() <= 1e-12 * closed.abs().max(1e-300) + 1e-14, "{generic} vs {closed}");
    }

    #[test]
    fn legendre_identity(phys in physical(), x in -1.0f64..1.0, v in -1.0f64..1.0) {
        let s = OscillatorState::new(x, v);
        prop_assume!(phase_constraint(&phys, &s) > 0.05);
        let p = conjugate_momentum(&phys, &s).unwrap();
        let h = hamiltonian_classical(&phys, x, p).unwrap();
        let l = lagrangian(&phys, &s).unwrap();
        let scale = h.abs().max((p * v).abs()).max(l.abs()).max(1e-3);
        prop_assert!((h - (p * v - l)).abs() < 1e-12 * scale.max(1.0), "{h} vs {}", p * v - l);
    }

    #[test]
    fn momentum_bound_is_enforced((phys, product) in admissible(), excess in 0.0f64..10.0) {
        let model = model_for(phys, product);
        let p = model.derived().unwrap().p_max + excess;
        let rejected = |r: Result<(), Error>| matches!(r, Err(Error::MomentumDomain { .. }));
        prop_assert!(rejected(mass(&phys, p).map(drop)));
        prop_assert!(rejected(effective_potential(&model, p).map(drop)));
        prop_assert!(rejected(partner_potentials(&model, p).map(drop)));
        prop_assert!(rejected(psi(&model, 0, p).map(drop)));
        prop_assert!(rejected(hamiltonian_classical(&phys, 0.1, p).map(drop)));
    }

    #[test]
    fn spectrum_is_equidistant((phys, product) in admissible(), n_max in 1usize..20) {
        let table = spectrum_of(&model_for(phys, product), n_max);
        let hw = phys.hbar_omega();
        for w in table.levels.windows(2) {
            prop_assert!((w[1].energy - w[0].energy - hw).abs() < 1e-12 * w[1].energy.abs().max(hw));
        }
    }

    #[test]
    fn partner_forms_agree((phys, product) in admissible(), frac in -2.0f64..0.9) {
        let model = model_for(phys, product);
        let p = frac * model.derived().unwrap().p_max;
        let sp = Superpotential::fitted(&model);
        let (lo, hi) = partner_potentials(&model, p).unwrap();
        let (lo2, hi2) = partner_potentials_from_definition(&sp, p).unwrap();
        let scale = lo.abs().max(hi.abs()).max(phys.hbar_omega());
        prop_assert!((lo - lo2).abs() < 1e-10 * scale);
        prop_assert!((hi - hi2).abs() < 1e-10 * scale);
    }

    #[test]
    fn sturm_count_is_monotone(diag in prop::collection::vec(-5.0f64..5.0, 2..40), x in -12.0f64..12.0, dx in 0.0f64..5.0) {
        let off = vec![-1.0; diag.len() - 1];
        let op = TridiagonalOperator::new(diag, off, 1.0).unwrap();
        prop_assert!(sturm_count(&op, x) <= sturm_count(&op, x + dx));
        prop_assert_eq!(sturm_count(&op, -1e3), 0);
        prop_assert_eq!(sturm_count(&op, 1e3), op.dim());
    }
}

#[test]
fn constraint_boundary_is_excluded() {
    let phys = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
    assert!(matches!(Model::new(phys, AmbiguityParams::new(-9.0, 9.0).unwrap()), Err(Error::AmbiguityConstraint { .. })));
    assert!(matches!(Model::new(phys, AmbiguityParams::new(-10.0, 9.0).unwrap()), Err(Error::AmbiguityConstraint { .. })));
    assert!(Model::new(phys, AmbiguityParams::new(-8.9, 9.0).unwrap()).is_ok());
}
