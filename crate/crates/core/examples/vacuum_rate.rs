// Zero-temperature dephasing rate for a few Ohmicities: closed form next to
// the quadrature, and where the rate turns negative.
use dephase::dephasing::negative_intervals;
use dephase::*;

fn main() -> Result<()> {
    println!("{:>5} {:>6} {:>16} {:>16}", "s", "t", "closed form", "quadrature");
    for s in [0.5, 1.0, 2.0, 3.0] {
        let env = Environment::ohmic(s, 0.0)?;
        for t in [0.5, 2.0, 10.0] {
            let exact = dephasing_rate_zero_t(s, t)?;
            let numeric = dephasing_rate_numeric(&env, t)?;
            println!("{s:>5} {t:>6} {exact:>16.10e} {numeric:>16.10e}");
        }
    }

    for s in [2.0, 2.5, 3.0] {
        let intervals = negative_intervals(&Environment::ohmic(s, 0.0)?, 100.0, 2000)?;
        println!("s = {s}: negative rate on {intervals:.4?}");
    }
    Ok(())
}
