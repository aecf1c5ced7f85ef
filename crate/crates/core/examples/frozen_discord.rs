// Two qubits in the c = 0.1 Bell-diagonal state: an Ohmic bath ends the
// frozen-discord phase at t = 3, a super-Ohmic bath at s = 2.5 never does.
use dephase::*;

fn main() -> Result<()> {
    let p = BellDiagonalParams::new(0.1)?;
    let times: Vec<f64> = (0..=12).map(|k| k as f64 * 0.5).collect();
    for s in [1.0, 2.5] {
        let env = Environment::ohmic(s, 0.0)?;
        let tr = correlation_trajectories(&env, p, &times)?;
        println!("s = {s}, transition: {:?}", tr.transition_time);
        println!("{:>5} {:>9} {:>9} {:>9} {:>9}", "t", "Lambda", "I", "C", "Q");
        for i in 0..times.len() {
            println!(
                "{:>5} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
                times[i], tr.factor[i], tr.mutual_information[i], tr.classical[i], tr.discord[i]
            );
        }
        println!();
    }
    Ok(())
}
