//! The field diffracted around Bob's aperture: how the on-axis intensity
//! behind him recovers and focuses (the Arago spot), checked against a
//! direct evaluation of the diffraction integral.

use fso_keyrate::beam::BeamParams;
use fso_keyrate::diffraction::{
    arago_relative_amplitude, fresnel_field_bessel, rs_field_direct, DiskSpec, FieldProfile, GridPolicy, SourceAnnulus,
};

fn main() -> fso_keyrate::Result<()> {
    let beam = BeamParams::normalized(1550e-9, 0.1)?;
    let (l_ab, r_b) = (60e3, 0.1);
    let source = SourceAnnulus::cropped(beam, l_ab, r_b)?;
    println!("power passing Bob: {:.4}", source.power());

    // the point-source estimate: the unobstructed beam times the Arago factor
    println!("{:>9} {:>12} {:>12} {:>12}", "L_BE (km)", "|U(0)|^2", "Arago est.", "P(r<0.1 m)");
    for km in [1.0, 5.0, 20.0, 60.0, 120.0] {
        let l_be = km * 1e3;
        let profile = FieldProfile::compute(&source, l_be, 0.2, GridPolicy::default())?;
        let arago = arago_relative_amplitude(r_b, l_be, 0.0, beam.wavelength)?;
        let free = beam.field_amplitude(0.0, l_ab + l_be)?.norm_sqr();
        println!(
            "{km:>9} {:>12.4} {:>12.4} {:>12.4e}",
            profile.intensity_at(0.0),
            free * arago * arago,
            profile.disk_power(&DiskSpec::on_axis(0.1)?)?
        );
    }

    let (l_be, rho) = (5e3, 0.05);
    let fast = fresnel_field_bessel(&source, l_be, rho)?;
    let direct = rs_field_direct(&source, l_be, rho, 0.0)?;
    println!("\nat {rho} m off axis, {l_be} m behind Bob:");
    println!("  Fresnel-Bessel {fast:.6e}\n  direct         {direct:.6e}");
    println!("  relative difference {:.2e}", (fast - direct).norm() / direct.norm());
    Ok(())
}
