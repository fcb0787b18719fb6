//! Cross-validate the integrator against an independent propagator.
//!
//! The crate ships two routes to the same physics: a fixed-step RK4
//! integrator for the master equation, and a 9x9 superoperator whose matrix
//! exponential propagates the vectorized density matrix exactly for constant
//! drives. This example pits them against each other twice — on pure free
//! decay, where a closed form is also available, and on a ramped charging
//! protocol approximated by a staircase of constant segments.

use qutrit_battery::discharge::populations_closed_form;
use qutrit_battery::linalg::DensityMatrix;
use qutrit_battery::lindblad::{
    evolve, propagate_piecewise_constant, DriveSegment, EvolveOptions, NoiseRates,
};
use qutrit_battery::model::{Direction, Protocol, Ramp, Spectrum};
use qutrit_battery::observables::ergotropy;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spectrum = Spectrum::transmon();

    // Free decay: one exponential-map segment vs the two-exponential closed
    // form vs the RK4 integrator.
    let rates = NoiseRates::new(1.0, 2.0, 0.0, 0.0, 0.0)?;
    let start = DensityMatrix::pure(3)?;
    let t = 1.0;

    let via_expm = propagate_piecewise_constant(
        &start,
        &[DriveSegment {
            omega12: 0.0,
            omega23: 0.0,
            dt: t,
        }],
        &rates,
    )?;
    let via_rk4 = evolve(
        &start,
        None,
        &rates,
        &spectrum,
        &EvolveOptions::new(t, 20_000, 20_000),
    )?;
    let (p2, p3) = populations_closed_form(&rates, t, (0.0, 1.0))?;

    println!("free decay from the top level after t = {t}:");
    println!("  closed form:          P2 = {p2:.12}, P3 = {p3:.12}");
    println!(
        "  matrix exponential:   P2 = {:.12}, P3 = {:.12}",
        via_expm.population(2)?,
        via_expm.population(3)?
    );
    let last = via_rk4.last();
    println!(
        "  RK4 integrator:       P2 = {:.12}, P3 = {:.12}",
        last.populations[1], last.populations[2]
    );

    // Ramped charging: RK4 on the exact time-dependent drives vs a 400-step
    // midpoint staircase pushed through the matrix exponential.
    let tau = 20.0;
    let protocol = Protocol::new(1.0, tau, Ramp::Smoothstep, Direction::Stable, 0.0)?;
    let segments: Vec<DriveSegment> = (0..400)
        .map(|i| {
            let dt = tau / 400.0;
            let midpoint = (i as f64 + 0.5) * dt;
            let (omega12, omega23) = protocol.drives(midpoint)?;
            Ok(DriveSegment {
                omega12,
                omega23,
                dt,
            })
        })
        .collect::<Result<_, qutrit_battery::model::ModelError>>()?;

    let ground = DensityMatrix::pure(1)?;
    let noisy = NoiseRates::transmon(1e-2)?;
    println!("\nsmoothstep charge over tau = {tau}, stored work at the end:");
    for (label, rates) in [("noiseless", NoiseRates::none()), ("noisy", noisy)] {
        let stair = propagate_piecewise_constant(&ground, &segments, &rates)?;
        let trace = evolve(
            &ground,
            Some(&protocol),
            &rates,
            &spectrum,
            &EvolveOptions::new(tau, 40_000, 40_000),
        )?;
        let rk4_work = trace.last().ergotropy;
        let stair_work = ergotropy(&stair, &spectrum);
        println!(
            "  {label:>9}: RK4 = {rk4_work:.9}, staircase = {stair_work:.9}, gap = {:.2e}",
            (rk4_work - stair_work).abs()
        );
    }
    Ok(())
}
