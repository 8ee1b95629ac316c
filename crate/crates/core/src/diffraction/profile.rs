//! Radially sampled diffracted field and collected power over disks.
//!
//! # Binary record
//!
//! Little-endian throughout:
//!
//! | field | type |
//! |---|---|
//! | format version | u32 |
//! | wavelength, waist radius, field peak | 3 × f64 |
//! | source plane distance, inner radius, outer radius (may be +inf) | 3 × f64 |
//! | propagation distance | f64 |
//! | grid policy: truncation, nodes per cycle, policy version | f64, f64, f64 |
//! | truncation radius, max absolute field error | 2 × f64 |
//! | node count | u64 |
//! | per node: radius, re, im | 3 × f64 each |

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::fresnel::FresnelKernel;
use super::{DiskSpec, SourceAnnulus, DEFAULT_TRUNCATION};
use crate::beam::BeamParams;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{fixed_rule, gauss4, gauss8};

pub const PROFILE_FORMAT_VERSION: u32 = 1;

const MAX_NODES: usize = 400_000;

/// Node placement and truncation policy. `version` is part of cache keys.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPolicy {
    /// Source truncation in spot sizes at the source plane.
    pub truncation: f64,
    /// Nodes per cycle of the highest spatial frequency present in the field.
    pub nodes_per_cycle: f64,
    pub version: u32,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            truncation: DEFAULT_TRUNCATION,
            nodes_per_cycle: 8.0,
            version: 1,
        }
    }
}

impl GridPolicy {
    pub fn refined(self, factor: f64) -> Self {
        Self {
            nodes_per_cycle: self.nodes_per_cycle * factor,
            ..self
        }
    }
}

/// Complex field sampled on `[0, truncation_radius]` at a plane `distance`
/// past the source, interpolated by clamped cubic splines on the real and
/// imaginary parts.
#[derive(Debug, Clone)]
pub struct FieldProfile {
    source: SourceAnnulus,
    distance: f64,
    policy: GridPolicy,
    nodes: Vec<f64>,
    amplitudes: Vec<Complex64>,
    truncation_radius: f64,
    max_abs_error: f64,
    curvature: Vec<Complex64>,
}

impl PartialEq for FieldProfile {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.distance == other.distance
            && self.policy == other.policy
            && self.nodes == other.nodes
            && self.amplitudes == other.amplitudes
            && self.truncation_radius == other.truncation_radius
            && self.max_abs_error.to_bits() == other.max_abs_error.to_bits()
    }
}

fn node_radii(source: &SourceAnnulus, distance: f64, coverage: f64, policy: &GridPolicy) -> Result<Vec<f64>> {
    let r_max = source.working_outer(policy.truncation);
    let f_max = (r_max + coverage) / (source.beam.wavelength * distance);
    let h = 1.0 / (f_max * policy.nodes_per_cycle);
    let estimated = (coverage / h) as usize + 2;
    if estimated > MAX_NODES {
        return Err(invalid(
            "distance",
            format!("propagation distance {distance} m needs {estimated} radial nodes (limit {MAX_NODES})"),
        ));
    }
    let band = (8.0 * h).max(0.02 * coverage);
    let edge = source.inner_radius;
    let mut nodes = vec![0.0];
    let mut x = 0.0;
    while x < coverage {
        let dense = x < band || (x - edge).abs() < band;
        let step = if dense { 0.5 * h } else { h };
        x = if x + 1.05 * step >= coverage { coverage } else { x + step };
        nodes.push(x);
    }
    if nodes.len() < 4 {
        // at least three intervals for the spline
        nodes = (0..4).map(|i| coverage * i as f64 / 3.0).collect();
    }
    Ok(nodes)
}

/// Second derivatives for a cubic spline with zero slope at the first node
/// and a natural end.
fn spline_curvature(x: &[f64], y: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut m = vec![zero; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on rows 0..n-1 with M[n-1] = 0.
    let mut diag = vec![0.0; n - 1];
    let mut upper = vec![0.0; n - 1];
    let mut rhs = vec![zero; n - 1];
    let h0 = x[1] - x[0];
    diag[0] = 2.0 * h0;
    upper[0] = h0;
    rhs[0] = (y[1] - y[0]) / h0 * 6.0;
    for i in 1..n - 1 {
        let hl = x[i] - x[i - 1];
        let hr = x[i + 1] - x[i];
        let lower = hl;
        diag[i] = 2.0 * (hl + hr);
        upper[i] = hr;
        rhs[i] = ((y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl) * 6.0;
        let w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        let prev = rhs[i - 1];
        rhs[i] -= prev * w;
    }
    // last unknown row n-2 has upper coupling to M[n-1] = 0
    m[n - 2] = rhs[n - 2] / diag[n - 2];
    for i in (0..n - 2).rev() {
        m[i] = (rhs[i] - m[i + 1] * upper[i]) / diag[i];
    }
    m
}

/// Samples the field past `source` at `distance`, covering at least the disk.
pub fn propagate_profile(source: &SourceAnnulus, distance: f64, disk_hint: &DiskSpec) -> Result<FieldProfile> {
    FieldProfile::compute(source, distance, disk_hint.reach(), GridPolicy::default())
}

impl FieldProfile {
    pub fn compute(source: &SourceAnnulus, distance: f64, coverage: f64, policy: GridPolicy) -> Result<Self> {
        if !(coverage > 0.0) || !coverage.is_finite() {
            return Err(invalid("coverage", format!("must be > 0, got {coverage}")));
        }
        let nodes = node_radii(source, distance, coverage, &policy)?;
        let truncation_radius = *nodes.last().expect("nonempty");
        let kernel = FresnelKernel::new(source, distance, truncation_radius, policy.truncation)?;
        let samples: Vec<_> = nodes.par_iter().map(|&l| kernel.field(l)).collect::<Result<_>>()?;
        let amplitudes: Vec<Complex64> = samples.iter().map(|s| s.amplitude).collect();
        let max_abs_error = samples.iter().map(|s| s.abs_error).fold(0.0, f64::max);
        Self::from_parts(*source, distance, policy, nodes, amplitudes, max_abs_error)
    }

    fn from_parts(
        source: SourceAnnulus,
        distance: f64,
        policy: GridPolicy,
        nodes: Vec<f64>,
        amplitudes: Vec<Complex64>,
        max_abs_error: f64,
    ) -> Result<Self> {
        if nodes.len() != amplitudes.len() || nodes.len() < 2 {
            return Err(Error::Format("node and amplitude counts differ or are too small".into()));
        }
        if nodes[0] != 0.0 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Format("radial nodes must start at 0 and increase strictly".into()));
        }
        let curvature = spline_curvature(&nodes, &amplitudes);
        Ok(Self {
            source,
            distance,
            policy,
            truncation_radius: *nodes.last().expect("nonempty"),
            nodes,
            amplitudes,
            max_abs_error,
            curvature,
        })
    }

    pub fn source(&self) -> &SourceAnnulus {
        &self.source
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn policy(&self) -> GridPolicy {
        self.policy
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn truncation_radius(&self) -> f64 {
        self.truncation_radius
    }

    pub fn max_abs_error(&self) -> f64 {
        self.max_abs_error
    }

    /// Interpolated field at radius `rho` (clamped to the covered range).
    pub fn field_at(&self, rho: f64) -> Complex64 {
        let x = &self.nodes;
        let rho = rho.clamp(0.0, self.truncation_radius);
        let i = match x.binary_search_by(|v| v.total_cmp(&rho)) {
            Ok(i) => return self.amplitudes[i],
            Err(i) => i.clamp(1, x.len() - 1) - 1,
        };
        let h = x[i + 1] - x[i];
        let a = (x[i + 1] - rho) / h;
        let b = 1.0 - a;
        let y = &self.amplitudes;
        let m = &self.curvature;
        y[i] * a + y[i + 1] * b + (m[i] * (a * a * a - a) + m[i + 1] * (b * b * b - b)) * (h * h / 6.0)
    }

    pub fn intensity_at(&self, rho: f64) -> f64 {
        self.field_at(rho).norm_sqr()
    }

    /// Power over the whole covered disk.
    pub fn total_power(&self) -> f64 {
        self.centered_power(self.truncation_radius)
    }

    fn centered_power(&self, radius: f64) -> f64 {
        if radius <= 0.0 {
            return 0.0;
        }
        let mut edges: Vec<f64> = self.nodes.iter().copied().take_while(|&x| x < radius).collect();
        edges.push(radius);
        let f = |rho: f64| self.intensity_at(rho) * rho;
        2.0 * PI * fixed_rule(&f, &edges, gauss4())
    }

    fn spacing_near(&self, rho: f64) -> f64 {
        let i = match self.nodes.binary_search_by(|v| v.total_cmp(&rho)) {
            Ok(i) | Err(i) => i.clamp(1, self.nodes.len() - 1),
        };
        self.nodes[i] - self.nodes[i - 1]
    }

    /// Power through `disk`. The field is cylindrically symmetric, so the
    /// disk's share of each ring of radius ρ is its angular width `2α(ρ)`.
    pub fn disk_power(&self, disk: &DiskSpec) -> Result<f64> {
        let reach = disk.reach();
        if reach > self.truncation_radius * (1.0 + 1e-12) {
            return Err(Error::Coverage {
                offset: disk.offset,
                radius: disk.radius,
                coverage: self.truncation_radius,
            });
        }
        let (r, d) = (disk.radius, disk.offset);
        // rings fully inside the disk
        let full = self.centered_power((r - d).max(0.0));
        if d == 0.0 {
            return Ok(full);
        }
        // rings cut by the disk edge: ρ = c - s cos t removes the square-root
        // behavior of α at both ends
        let lo = (d - r).abs();
        let hi = (d + r).min(self.truncation_radius);
        let c = 0.5 * (lo + hi);
        let s = 0.5 * (hi - lo);
        let h_min = self.spacing_near(lo).min(self.spacing_near(hi)).min(self.spacing_near(c));
        let panels = ((PI * s / h_min).ceil() as usize).max(16);
        let edges: Vec<f64> = (0..=panels).map(|i| PI * i as f64 / panels as f64).collect();
        let f = |t: f64| {
            let rho = c - s * t.cos();
            if rho <= 0.0 {
                return 0.0;
            }
            let cos_alpha = ((rho * rho + d * d - r * r) / (2.0 * rho * d)).clamp(-1.0, 1.0);
            self.intensity_at(rho) * 2.0 * cos_alpha.acos() * rho * s * t.sin()
        };
        Ok(full + fixed_rule(&f, &edges, gauss8()))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 8 * 15 + 24 * self.nodes.len());
        out.extend_from_slice(&PROFILE_FORMAT_VERSION.to_le_bytes());
        let b = &self.source.beam;
        for v in [
            b.wavelength,
            b.waist_radius,
            b.field_peak,
            self.source.plane_distance,
            self.source.inner_radius,
            self.source.outer_radius,
            self.distance,
            self.policy.truncation,
            self.policy.nodes_per_cycle,
            self.policy.version as f64,
            self.truncation_radius,
            self.max_abs_error,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&(self.nodes.len() as u64).to_le_bytes());
        for (x, u) in self.nodes.iter().zip(&self.amplitudes) {
            out.extend_from_slice(&x.to_le_bytes());
            out.extend_from_slice(&u.re.to_le_bytes());
            out.extend_from_slice(&u.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cur = Reader { bytes, pos: 0 };
        let version = u32::from_le_bytes(cur.take::<4>()?);
        if version != PROFILE_FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let mut h = [0.0; 12];
        for v in h.iter_mut() {
            *v = f64::from_le_bytes(cur.take::<8>()?);
        }
        let count = u64::from_le_bytes(cur.take::<8>()?) as usize;
        if bytes.len() != cur.pos + count.saturating_mul(24) {
            return Err(Error::Format(format!(
                "record length {} does not match {count} nodes",
                bytes.len()
            )));
        }
        let mut nodes = Vec::with_capacity(count);
        let mut amplitudes = Vec::with_capacity(count);
        for _ in 0..count {
            nodes.push(f64::from_le_bytes(cur.take::<8>()?));
            let re = f64::from_le_bytes(cur.take::<8>()?);
            let im = f64::from_le_bytes(cur.take::<8>()?);
            amplitudes.push(Complex64::new(re, im));
        }
        let beam = BeamParams::new(h[0], h[1], h[2]).map_err(|e| Error::Format(e.to_string()))?;
        let source = SourceAnnulus::new(beam, h[3], h[4], h[5]).map_err(|e| Error::Format(e.to_string()))?;
        let policy = GridPolicy {
            truncation: h[7],
            nodes_per_cycle: h[8],
            version: h[9] as u32,
        };
        let profile = Self::from_parts(source, h[6], policy, nodes, amplitudes, h[11])?;
        if profile.truncation_radius != h[10] {
            return Err(Error::Format("truncation radius does not match last node".into()));
        }
        Ok(profile)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Format("truncated record".into()))?;
        self.pos = end;
        Ok(slice.try_into().expect("length checked"))
    }
}

/// Power collected by `disk` from a profile.
pub fn disk_power(profile: &FieldProfile, disk: &DiskSpec) -> Result<f64> {
    profile.disk_power(disk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn profile() -> FieldProfile {
        let beam = BeamParams::normalized(1550e-9, 0.1).unwrap();
        let src = SourceAnnulus::cropped(beam, 20e3, 0.1).unwrap();
        propagate_profile(&src, 10e3, &DiskSpec::new(0.1, 0.15).unwrap()).unwrap()
    }

    #[test]
    fn nodes_cover_disk() {
        let p = profile();
        assert_eq!(p.nodes()[0], 0.0);
        assert!(p.truncation_radius() >= 0.25);
        assert!(p.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn spline_reproduces_nodes() {
        let p = profile();
        for (x, u) in p.nodes().iter().zip(p.amplitudes()).step_by(7) {
            assert_eq!(p.field_at(*x), *u);
        }
    }

    #[test]
    fn vanishing_disk_collects_nothing() {
        let p = profile();
        let tiny = p.disk_power(&DiskSpec::new(1e-9, 0.05).unwrap()).unwrap();
        assert!(tiny < 1e-12);
        assert!(p.disk_power(&DiskSpec::new(1e-150, 0.0).unwrap()).unwrap() < 1e-200);
    }

    #[test]
    fn full_coverage_equals_total_power() {
        let p = profile();
        let full = p.disk_power(&DiskSpec::on_axis(p.truncation_radius()).unwrap()).unwrap();
        assert_eq!(full, p.total_power());
    }

    #[test]
    fn disk_beyond_coverage_rejected() {
        let p = profile();
        let err = p.disk_power(&DiskSpec::new(0.1, 0.2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Coverage { .. }));
    }

    #[test]
    fn off_axis_power_is_bounded_and_continuous_in_offset() {
        let p = profile();
        let at0 = p.disk_power(&DiskSpec::new(0.1, 0.0).unwrap()).unwrap();
        let near0 = p.disk_power(&DiskSpec::new(0.1, 1e-7).unwrap()).unwrap();
        assert_relative_eq!(at0, near0, max_relative = 1e-5);
        for i in 0..=15 {
            let d = 0.01 * i as f64;
            let pw = p.disk_power(&DiskSpec::new(0.1, d).unwrap()).unwrap();
            assert!(pw >= 0.0 && pw <= p.total_power());
        }
    }

    #[test]
    fn binary_record_round_trip_is_bit_exact() {
        let p = profile();
        let bytes = p.to_bytes();
        let q = FieldProfile::from_bytes(&bytes).unwrap();
        assert_eq!(p, q);
        assert_eq!(q.to_bytes(), bytes);
        assert!(FieldProfile::from_bytes(&bytes[..bytes.len() - 5]).is_err());
        let mut bad = bytes.clone();
        bad[0] = 9;
        assert!(FieldProfile::from_bytes(&bad).is_err());
    }
}
