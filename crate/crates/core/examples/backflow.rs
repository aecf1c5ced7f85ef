// Information backflow versus Ohmicity and temperature.
use dephase::dephasing::negativity_horizon;
use dephase::*;

fn main() -> Result<()> {
    println!("{:>5} {:>6} {:>10} {:>12}", "s", "T", "intervals", "backflow");
    for s in [2.0, 2.5, 3.0, 3.5] {
        for t in [0.0, 0.1, 1.0] {
            let report = negative_rate_report(&Environment::ohmic(s, t)?, negativity_horizon(s), 400)?;
            println!("{s:>5} {t:>6} {:>10} {:>12.4e}", report.intervals.len(), report.backflow_measure);
        }
    }
    Ok(())
}
