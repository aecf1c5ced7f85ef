// Boundary c*(s) of the region where discord stays frozen forever at T = 0.
use dephase::numerics::linspace;
use dephase::*;

fn main() -> Result<()> {
    let s_grid = linspace(0.5, 4.0, 15);
    let region = frozen_region(0.0, &s_grid)?;
    for (i, s) in s_grid.iter().enumerate() {
        let c = region.boundary_c[i];
        let bar = "*".repeat((c * 200.0).round() as usize);
        let sup = match region.sup_factor[i] {
            SupFactor::Finite { value, at: Some(t) } => format!("sup Λ = {value:.4} at t = {t:.3}"),
            SupFactor::Finite { value, at: None } => format!("sup Λ = {value:.4} as t → ∞"),
            SupFactor::Diverges => "Λ unbounded".to_string(),
        };
        println!("s = {s:4.2}  c* = {c:.5}  {bar:<32} {sup}");
    }
    Ok(())
}
