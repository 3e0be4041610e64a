//! Print sigma_g, its Hankel leading term and the leading scalar for small genera.

use std::time::Instant;

use hyperarakelov::symfunc::{binomial_wronskian_det, hankel, sigma_g, sigma_leading_scalar};

fn main() -> hyperarakelov::Result<()> {
    let gmax: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    for g in 1..=gmax {
        let t = Instant::now();
        let s = sigma_g(g)?;
        println!("g={g}: sigma = {s}");
        println!("      hankel = {}", hankel(g));
        println!("      leading scalar = {}", sigma_leading_scalar(g)?);
        if g >= 2 {
            println!("      binomial wronskian det = {}", binomial_wronskian_det(g)?);
        }
        println!("      ({} terms, {:.3}s)", s.len(), t.elapsed().as_secs_f64());
    }
    Ok(())
}
