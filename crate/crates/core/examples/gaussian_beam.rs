//! Spot size, wavefront curvature and collected power of the transmitted
//! beam over a range of link lengths.

use fso_keyrate::beam::{BeamParams, Curvature};

fn main() -> fso_keyrate::Result<()> {
    let beam = BeamParams::normalized(1550e-9, 0.1)?;
    println!("Rayleigh length {:.2} km", beam.rayleigh_length() / 1e3);
    println!("{:>8} {:>10} {:>12} {:>12}", "L (km)", "W (m)", "R (km)", "P(r<0.1 m)");
    for km in [1.0, 5.0, 20.0, 60.0, 120.0] {
        let l = km * 1e3;
        let plane = beam.plane_params(l)?;
        let radius = match plane.curvature {
            Curvature::Flat => f64::INFINITY,
            Curvature::Radius(r) => r / 1e3,
        };
        println!(
            "{km:>8} {:>10.4} {radius:>12.2} {:>12.5}",
            plane.spot_size,
            beam.encircled_power(l, 0.1)?
        );
    }
    Ok(())
}
