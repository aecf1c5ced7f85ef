// A measured-style spectrum given as samples: a super-Ohmic peak with a hard
// edge. The rate goes negative, so coherence flows back.
use dephase::*;

fn main() -> Result<()> {
    let samples: Vec<(f64, f64)> = (1..=400)
        .map(|k| {
            let w = k as f64 * 0.02;
            (w, w.powi(3) * (-w * w / 2.0).exp())
        })
        .collect();
    let spectrum = TabulatedSpectrum::new(&samples)?;
    println!("low-frequency exponent {:.3}", spectrum.low_frequency_exponent());
    let env = Environment::new(spectrum, 0.1)?;
    for t in [0.5, 1.0, 2.0, 4.0, 8.0] {
        println!("t = {t:<4} γ = {:>12.5e}  Λ = {:.5}", dephasing_rate(&env, t)?, dephasing_factor(&env, t)?);
    }
    let report = negative_rate_report(&env, 40.0, 800)?;
    println!("negative-rate intervals: {}", report.intervals.len());
    println!("backflow: {:.5e}", report.backflow_measure);
    Ok(())
}
