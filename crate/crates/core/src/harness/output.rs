//! File writers: sweep tables, search summaries and wavefront rasters.
//! Every file is written to a temporary sibling and renamed into place.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::diffraction::FieldProfile;
use crate::error::{Error, Result};
use crate::rates::Mu;
use crate::sweep::{MuChoice, SweepRow};

/// Column names of every sweep table, in order.
pub const SWEEP_COLUMNS: [&str; 14] = [
    "parameter",
    "eta",
    "kappa",
    "P_Bob",
    "P_Eve",
    "lb_direct",
    "lb_reverse",
    "lb",
    "ub",
    "skr_cv",
    "skr_bb84",
    "optimal_mu",
    "D_opt",
    "error",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub parameter: f64,
    pub eta: Option<f64>,
    pub kappa: Option<f64>,
    #[serde(rename = "P_Bob")]
    pub p_bob: Option<f64>,
    #[serde(rename = "P_Eve")]
    pub p_eve: Option<f64>,
    pub lb_direct: Option<f64>,
    pub lb_reverse: Option<f64>,
    pub lb: Option<f64>,
    pub ub: Option<f64>,
    pub skr_cv: Option<f64>,
    pub skr_bb84: Option<f64>,
    /// Photon number behind `lb`: the optimum when optimized, else the fixed
    /// value.
    pub optimal_mu: Option<String>,
    #[serde(rename = "D_opt")]
    pub d_opt: Option<f64>,
    pub error: Option<String>,
}

fn mu_text(mu: Mu) -> String {
    match mu {
        Mu::Finite(m) => m.to_string(),
        Mu::Infinite => "inf".into(),
    }
}

impl CsvRow {
    pub fn from_sweep(row: &SweepRow, mu: MuChoice) -> Self {
        let c = row.channel.as_ref();
        let r = row.report.as_ref();
        let optimal_mu = r.map(|r| match (r.optimal_mu, mu) {
            (Some(o), _) => mu_text(o.lb),
            (None, MuChoice::Fixed(m)) => mu_text(m),
            (None, MuChoice::Optimized) => String::new(),
        });
        Self {
            parameter: row.parameter,
            eta: c.map(|c| c.eta),
            kappa: c.map(|c| c.kappa),
            p_bob: c.map(|c| c.p_bob),
            p_eve: c.map(|c| c.p_eve),
            lb_direct: r.map(|r| r.lb_direct),
            lb_reverse: r.map(|r| r.lb_reverse),
            lb: r.map(|r| r.lb),
            ub: r.map(|r| r.ub),
            skr_cv: r.map(|r| r.skr_cv),
            skr_bb84: r.map(|r| r.skr_bb84),
            optimal_mu,
            d_opt: row.offset,
            error: row.error.clone(),
        }
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

/// Serializes records with a header row.
pub fn csv_bytes<T: Serialize>(records: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

pub fn sweep_csv(rows: &[CsvRow]) -> Result<Vec<u8>> {
    if rows.is_empty() {
        // the header still has to be there
        let mut out = SWEEP_COLUMNS.join(",");
        out.push('\n');
        return Ok(out.into_bytes());
    }
    csv_bytes(rows)
}

/// `|U|` on a square grid centered on the axis, rebuilt from a radial profile.
pub struct Raster {
    pub pixels: usize,
    pub half_width: f64,
    pub magnitude: Vec<f64>,
}

impl Raster {
    pub fn from_profile(profile: &FieldProfile, pixels: usize, half_width: f64) -> Self {
        let step = 2.0 * half_width / pixels as f64;
        let coord = |i: usize| -half_width + (i as f64 + 0.5) * step;
        let mut magnitude = Vec::with_capacity(pixels * pixels);
        for row in 0..pixels {
            // first row is the top of the image
            let y = -coord(row);
            for col in 0..pixels {
                magnitude.push(profile.field_at(coord(col).hypot(y)).norm());
            }
        }
        Self {
            pixels,
            half_width,
            magnitude,
        }
    }

    pub fn peak(&self) -> f64 {
        self.magnitude.iter().copied().fold(0.0, f64::max)
    }

    /// Binary 16-bit grayscale PGM, scaled so the peak is white.
    pub fn to_pgm(&self) -> Vec<u8> {
        let peak = self.peak();
        let mut out = format!("P5\n{} {}\n65535\n", self.pixels, self.pixels).into_bytes();
        for &m in &self.magnitude {
            let level = if peak > 0.0 { (m / peak * 65535.0).round() as u16 } else { 0 };
            out.extend_from_slice(&level.to_be_bytes());
        }
        out
    }

    /// Physical scale of the raster as `key = value` lines.
    pub fn scale_text(&self, l_ab: f64, l_be: f64, wavelength: f64) -> String {
        format!(
            "pixels = {}\nhalf_width_m = {}\npixel_size_m = {}\npeak_abs_field = {}\nl_ab_m = {l_ab}\nl_be_m = {l_be}\nwavelength_m = {wavelength}\n",
            self.pixels,
            self.half_width,
            2.0 * self.half_width / self.pixels as f64,
            self.peak(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialSample {
    pub rho: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

pub fn radial_samples(profile: &FieldProfile, max_rho: f64, count: usize) -> Vec<RadialSample> {
    crate::optimize::linspace(0.0, max_rho, count)
        .into_iter()
        .map(|rho| {
            let u = profile.field_at(rho);
            RadialSample {
                rho,
                re: u.re,
                im: u.im,
                abs: u.norm(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Geometry;

    #[test]
    fn header_is_stable() {
        let row = SweepRow {
            parameter: 1.0,
            geometry: Geometry::behind_bob(1e3, 1e3, 0.1, 0.1, 0.1).unwrap(),
            channel: None,
            report: None,
            offset: None,
            error: Some("boom".into()),
        };
        let bytes = sweep_csv(&[CsvRow::from_sweep(&row, MuChoice::Optimized)]).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), SWEEP_COLUMNS.join(","));
        assert_eq!(lines.next().unwrap(), "1.0,,,,,,,,,,,,,boom");
        assert_eq!(
            String::from_utf8(sweep_csv(&[]).unwrap()).unwrap().trim_end(),
            SWEEP_COLUMNS.join(",")
        );
    }

    #[test]
    fn pgm_header_and_size() {
        let r = Raster {
            pixels: 2,
            half_width: 1.0,
            magnitude: vec![0.0, 0.5, 1.0, 0.25],
        };
        let pgm = r.to_pgm();
        let header = b"P5\n2 2\n65535\n";
        assert_eq!(&pgm[..header.len()], header);
        assert_eq!(pgm.len(), header.len() + 8);
        assert_eq!(&pgm[header.len() + 4..header.len() + 6], &[0xff, 0xff]);
    }
}
