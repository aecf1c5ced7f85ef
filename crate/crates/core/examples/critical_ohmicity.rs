// Critical Ohmicity s_crit(T): the smallest s whose rate goes negative.
//
//     cargo run --release --example critical_ohmicity -- 0 0.25 1
use dephase::*;

fn main() -> Result<()> {
    let temps: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("temperatures are numbers"))
        .collect();
    let temps = if temps.is_empty() { vec![0.0, 0.25, 1.0] } else { temps };
    for t in temps {
        let start = std::time::Instant::now();
        let s = find_s_crit(t)?;
        println!("T = {t:<6} s_crit = {s:.4}  ({:.1?})", start.elapsed());
    }
    Ok(())
}
