// Convexity of the thermal weight g(ω, T) and the Ohmicity where it is lost.
use dephase::spectral::DEFAULT_CONVEXITY_RANGE;
use dephase::*;

fn main() -> Result<()> {
    for s in [1.5, 2.0, 2.5] {
        let report = is_convex(&Environment::ohmic(s, 0.0)?, DEFAULT_CONVEXITY_RANGE, 2000)?;
        match report.first_nonconvex {
            None => println!("s = {s}: g convex on the whole range"),
            Some(w) => println!("s = {s}: g'' < 0 first at ω = {w:.4}"),
        }
    }
    for t in [0.0, 0.25, 1.0, 10.0] {
        println!("T = {t:<5} convexity lost above s = {:.4}", convexity_threshold_s(t, DEFAULT_CONVEXITY_RANGE)?);
    }
    Ok(())
}
