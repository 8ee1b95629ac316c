//! Transmissivities seen by Bob and Eve for both placements of Eve.

use fso_keyrate::beam::BeamParams;
use fso_keyrate::channel::{channel_params, optical_frequency, thermal_occupation, Geometry};

fn main() -> fso_keyrate::Result<()> {
    let beam = BeamParams::normalized(1550e-9, 0.1)?;
    let noise = thermal_occupation(optical_frequency(beam.wavelength), 3.0)?;
    println!("background photons per mode at 3 K: {noise:.3e}");

    let l_ab = 40e3;
    println!("\nEve behind Bob, L_AB = 40 km");
    for km in [1.0, 10.0, 40.0, 100.0] {
        let g = Geometry::behind_bob(l_ab, km * 1e3, 0.1, 0.1, 0.1)?;
        let c = channel_params(&g, &beam, noise)?;
        println!("  L_BE {km:>5} km: eta {:.4}  kappa {:.4}  P_Eve {:.3e}", c.eta, c.kappa, c.p_eve);
    }

    println!("\nEve in front of Bob, L_AB = 40 km");
    for km in [10.0, 20.0, 30.0, 39.0] {
        let g = Geometry::before_bob(l_ab, km * 1e3, 0.1, 0.1, 0.1)?;
        let c = channel_params(&g, &beam, noise)?;
        println!("  L_AE {km:>5} km: eta {:.4}  kappa {:.4}  P_Bob {:.3e}", c.eta, c.kappa, c.p_bob);
    }
    Ok(())
}
