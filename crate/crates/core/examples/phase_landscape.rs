// Map of which correlations decay on an (s, t) grid at T = 0 for c = 0.1:
// `.` classical correlations decay, `#` discord decays.
use dephase::numerics::{linspace, logspace};
use dephase::*;

fn main() -> Result<()> {
    let s_grid = linspace(0.5, 4.0, 15);
    let t_grid = logspace(0.01, 100.0, 60);
    let land = transition_landscape(0.0, 0.1, &s_grid, &t_grid)?;
    for (i, s) in s_grid.iter().enumerate().rev() {
        let row: String = land.phase[i]
            .iter()
            .map(|p| match p {
                Phase::ClassicalDecoherence => '.',
                _ => '#',
            })
            .collect();
        println!("s = {s:4.2} |{row}|");
    }
    println!("           t from 0.01 to 100, log scale");
    Ok(())
}
