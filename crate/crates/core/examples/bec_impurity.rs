// Impurity qubits in a Bose-Einstein condensate: with a supremum of the
// dephasing factor of 0.058, which initial states keep their discord frozen?
use dephase::*;

fn main() -> Result<()> {
    let sup: f64 = 0.058;
    println!("frozen for |c| < {:.5}", (-sup).exp());
    for c in [0.5, 0.9, 0.94, 0.95, 0.99] {
        let frozen = is_time_invariant_discord_given_sup(sup, BellDiagonalParams::new(c)?)?;
        println!("c = {c:<5} frozen forever: {frozen}");
    }
    Ok(())
}
