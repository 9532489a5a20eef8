//! Geometric realization of tangential disk triples and SVG rendering.
//!
//! The curvature calculus never needs coordinates; this module supplies them
//! for drawing and for independent geometric validation of the algebra.
//! Centers come from the curvature-weighted center relation for mutually
//! tangent circles, and every construction is checked against tangency
//! residuals relative to the configuration scale.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureVector;
use crate::error::{Error, Result};
use crate::word::Letter;

/// Relative tolerance for geometric residuals.
pub const GEOM_TOL: f64 = 1e-9;

/// An open disk or an open half-plane.
///
/// A half-plane is stored as its boundary line (unit normal plus offset)
/// with the region on the side opposite the normal:
/// `{ p : <p, normal> < offset }`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Disk {
    Round { center: [f64; 2], radius: f64 },
    HalfPlane { normal: [f64; 2], offset: f64 },
}

impl Disk {
    pub fn round(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::DegenerateGeometry(format!(
                "disk radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Disk::Round {
            center: [center.re, center.im],
            radius,
        })
    }

    pub fn half_plane(normal: Complex64, offset: f64) -> Result<Self> {
        if (normal.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::DegenerateGeometry(format!(
                "half-plane normal must be unit length, |n| = {}",
                normal.norm()
            )));
        }
        Ok(Disk::HalfPlane {
            normal: [normal.re, normal.im],
            offset,
        })
    }

    pub fn curvature(&self) -> f64 {
        match self {
            Disk::Round { radius, .. } => 1.0 / radius,
            Disk::HalfPlane { .. } => 0.0,
        }
    }

    pub fn is_half_plane(&self) -> bool {
        matches!(self, Disk::HalfPlane { .. })
    }

    /// Center as a complex number; `None` for a half-plane.
    pub fn center_c(&self) -> Option<Complex64> {
        match self {
            Disk::Round { center, .. } => Some(Complex64::new(center[0], center[1])),
            Disk::HalfPlane { .. } => None,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match self {
            Disk::Round { radius, .. } => Some(*radius),
            Disk::HalfPlane { .. } => None,
        }
    }

    /// The curvature-center product; for a half-plane, the unit normal
    /// pointing into the region (the limit of `curv * center` as tangent
    /// circles flatten out).
    fn descartes_vector(&self) -> Complex64 {
        match self {
            Disk::Round { center, radius } => {
                Complex64::new(center[0], center[1]) / radius
            }
            Disk::HalfPlane { normal, .. } => -Complex64::new(normal[0], normal[1]),
        }
    }

    /// Signed external-tangency residual: zero when the two boundaries touch
    /// at exactly one point with disjoint interiors.
    pub fn tangency_residual(&self, other: &Disk) -> Result<f64> {
        match (self, other) {
            (
                Disk::Round { center: c1, radius: r1 },
                Disk::Round { center: c2, radius: r2 },
            ) => {
                let d = ((c1[0] - c2[0]).powi(2) + (c1[1] - c2[1]).powi(2)).sqrt();
                Ok(d - (r1 + r2))
            }
            (Disk::Round { center, radius }, Disk::HalfPlane { normal, offset })
            | (Disk::HalfPlane { normal, offset }, Disk::Round { center, radius }) => {
                let h = center[0] * normal[0] + center[1] * normal[1] - offset;
                Ok(h - radius)
            }
            _ => Err(Error::DegenerateGeometry(
                "two half-planes cannot be externally tangent members".into(),
            )),
        }
    }

    /// The single common boundary point of two tangent members.
    pub fn tangency_point(&self, other: &Disk) -> Result<Complex64> {
        match (self, other) {
            (
                Disk::Round { center: c1, radius: r1 },
                Disk::Round { center: c2, .. },
            ) => {
                let z1 = Complex64::new(c1[0], c1[1]);
                let z2 = Complex64::new(c2[0], c2[1]);
                let u = (z2 - z1) / (z2 - z1).norm();
                Ok(z1 + u * *r1)
            }
            (Disk::Round { center, radius }, Disk::HalfPlane { normal, .. })
            | (Disk::HalfPlane { normal, .. }, Disk::Round { center, radius }) => {
                let z = Complex64::new(center[0], center[1]);
                let n = Complex64::new(normal[0], normal[1]);
                Ok(z - n * *radius)
            }
            _ => Err(Error::DegenerateGeometry(
                "two half-planes have no single tangency point".into(),
            )),
        }
    }
}

/// Three pairwise externally tangent members, positively oriented.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskTriple {
    disks: [Disk; 3],
    /// max finite seed radius; residual tolerances are relative to it
    scale: f64,
}

impl DiskTriple {
    pub fn new(disks: [Disk; 3]) -> Result<Self> {
        let half_planes = disks.iter().filter(|d| d.is_half_plane()).count();
        if half_planes > 1 {
            return Err(Error::DegenerateGeometry(
                "at most one member may be a half-plane".into(),
            ));
        }
        let scale = disks
            .iter()
            .filter_map(Disk::radius)
            .fold(0.0f64, f64::max);
        for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let residual = disks[a].tangency_residual(&disks[b])?;
            let pair_scale = match (disks[a].radius(), disks[b].radius()) {
                (Some(ra), Some(rb)) => ra + rb,
                (Some(r), None) | (None, Some(r)) => r,
                (None, None) => unreachable!("at most one half-plane"),
            };
            let tolerance = GEOM_TOL * pair_scale;
            if residual.abs() > tolerance {
                return Err(Error::NotTangent {
                    first: a + 1,
                    second: b + 1,
                    residual,
                    tolerance,
                });
            }
        }
        let t = Self { disks, scale };
        if t.signed_area_of_tangency_triangle()? <= 0.0 {
            return Err(Error::DegenerateGeometry(
                "triple is negatively oriented (ideal triangle must lie left of its boundary)"
                    .into(),
            ));
        }
        Ok(t)
    }

    /// Canonical placement for a curvature triple: the first disk member is
    /// centered on the y-axis (at the origin when all members are disks,
    /// which puts the second disk on the positive x-axis), a half-plane
    /// member has boundary y = 0 with its region below, and the layout is
    /// mirrored if needed so the orientation is positive.
    pub fn from_curvatures(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let v = CurvatureVector::new(alpha, beta, gamma)?;
        let curv = [v.alpha(), v.beta(), v.gamma()];
        let zeros: Vec<usize> = (0..3).filter(|&i| curv[i] == 0.0).collect();
        let disks = match zeros.as_slice() {
            [] => {
                let r: Vec<f64> = curv.iter().map(|k| 1.0 / k).collect();
                let c1 = Complex64::new(0.0, 0.0);
                let c2 = Complex64::new(r[0] + r[1], 0.0);
                let d = r[0] + r[1];
                let x = (d * d + (r[0] + r[2]).powi(2) - (r[1] + r[2]).powi(2)) / (2.0 * d);
                let y2 = (r[0] + r[2]).powi(2) - x * x;
                if y2 <= 0.0 {
                    return Err(Error::DegenerateGeometry(
                        "seed circles admit no tangent third circle".into(),
                    ));
                }
                let c3 = Complex64::new(x, y2.sqrt());
                [
                    Disk::round(c1, r[0])?,
                    Disk::round(c2, r[1])?,
                    Disk::round(c3, r[2])?,
                ]
            }
            [h] => {
                let h = *h;
                let (i, j) = match h {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let (ri, rj) = (1.0 / curv[i], 1.0 / curv[j]);
                let zi = Complex64::new(0.0, ri);
                let zj = Complex64::new(2.0 * (ri * rj).sqrt(), rj);
                let mut disks = [Disk::HalfPlane {
                    normal: [0.0, 1.0],
                    offset: 0.0,
                }; 3];
                disks[i] = Disk::round(zi, ri)?;
                disks[j] = Disk::round(zj, rj)?;
                disks
            }
            _ => {
                return Err(Error::NotInGamma {
                    alpha,
                    beta,
                    gamma,
                    reason: "two half-planes cannot form a triple",
                })
            }
        };
        match Self::new(disks) {
            Ok(t) => Ok(t),
            Err(Error::DegenerateGeometry(_)) => {
                // mirror across the y-axis to fix the orientation
                let mirrored = disks.map(|d| match d {
                    Disk::Round { center, radius } => Disk::Round {
                        center: [-center[0], center[1]],
                        radius,
                    },
                    Disk::HalfPlane { normal, offset } => Disk::HalfPlane {
                        normal: [-normal[0], normal[1]],
                        offset,
                    },
                });
                Self::new(mirrored)
            }
            Err(e) => Err(e),
        }
    }

    pub fn disks(&self) -> &[Disk; 3] {
        &self.disks
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The curvature quadruple of the triple.
    pub fn quadruple(&self) -> Result<CurvatureVector> {
        CurvatureVector::new(
            self.disks[0].curvature(),
            self.disks[1].curvature(),
            self.disks[2].curvature(),
        )
    }

    /// `q_j` is the common boundary point of the two members other than `j`.
    pub fn tangency_points(&self) -> Result<[Complex64; 3]> {
        Ok([
            self.disks[1].tangency_point(&self.disks[2])?,
            self.disks[2].tangency_point(&self.disks[0])?,
            self.disks[0].tangency_point(&self.disks[1])?,
        ])
    }

    fn signed_area_of_tangency_triangle(&self) -> Result<f64> {
        let [q1, q2, q3] = self.tangency_points()?;
        Ok((q2 - q1).re * (q3 - q1).im - (q2 - q1).im * (q3 - q1).re)
    }

    /// The disk inside the ideal triangle tangent to all three members.
    pub fn inscribed_disk(&self) -> Result<Disk> {
        let v = self.quadruple()?;
        let k4 = v.inscribed_curvature();
        let b: Vec<Complex64> = self.disks.iter().map(Disk::descartes_vector).collect();
        let cross = (b[0] * b[1] + b[1] * b[2] + b[2] * b[0]).sqrt();
        let base = b[0] + b[1] + b[2];
        let mut best: Option<(f64, Disk)> = None;
        for sign in [1.0, -1.0] {
            let center = (base + cross * 2.0 * sign) / k4;
            let candidate = Disk::round(center, 1.0 / k4)?;
            let worst = self
                .disks
                .iter()
                .map(|d| candidate.tangency_residual(d).map(f64::abs))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0f64, f64::max);
            if best.as_ref().map_or(true, |(w, _)| worst < *w) {
                best = Some((worst, candidate));
            }
        }
        let (worst, disk) = best.expect("two candidates evaluated");
        if worst > GEOM_TOL * self.scale {
            return Err(Error::DegenerateGeometry(format!(
                "inscribed disk residual {worst:e} exceeds tolerance"
            )));
        }
        Ok(disk)
    }

    /// The disk through the three tangency points, orthogonal to every
    /// member; its curvature is the kappa of the quadruple.
    pub fn circumscribed_disk(&self) -> Result<Disk> {
        let [q1, q2, q3] = self.tangency_points()?;
        let d = 2.0
            * (q1.re * (q2.im - q3.im) + q2.re * (q3.im - q1.im) + q3.re * (q1.im - q2.im));
        if d.abs() < 1e-14 * self.scale * self.scale {
            return Err(Error::DegenerateGeometry(
                "tangency points are collinear; no circumscribed disk".into(),
            ));
        }
        let sq = |z: Complex64| z.norm_sqr();
        let ux = (sq(q1) * (q2.im - q3.im) + sq(q2) * (q3.im - q1.im) + sq(q3) * (q1.im - q2.im)) / d;
        let uy = (sq(q1) * (q3.re - q2.re) + sq(q2) * (q1.re - q3.re) + sq(q3) * (q2.re - q1.re)) / d;
        let center = Complex64::new(ux, uy);
        let radius = (center - q1).norm();
        let kappa = self.quadruple()?.circumscribed_curvature();
        let rel = (1.0 / radius - kappa).abs() / kappa;
        if rel > GEOM_TOL {
            return Err(Error::DegenerateGeometry(format!(
                "circumscribed curvature {} deviates from kappa {kappa} (rel {rel:e})",
                1.0 / radius
            )));
        }
        Disk::round(center, radius)
    }

    /// Replaces member `j` with the inscribed disk.
    pub fn child_triple(&self, j: Letter) -> Result<DiskTriple> {
        let inscribed = self.inscribed_disk()?;
        let mut disks = self.disks;
        disks[j.index()] = inscribed;
        DiskTriple::new(disks)
    }
}

/// Styling and cutoff for SVG output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RenderSpec {
    /// Disks with inscribed curvature above this are not drawn.
    pub cutoff: f64,
    pub stroke: String,
    /// Stroke width as a fraction of the circumscribed radius.
    pub stroke_width_frac: f64,
    pub fill: String,
    /// Padding around the circumscribed disk, as a fraction of its radius.
    pub pad_frac: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            cutoff: 1000.0,
            stroke: "#1a1a1a".into(),
            stroke_width_frac: 0.003,
            fill: "none".into(),
            pad_frac: 0.05,
        }
    }
}

fn fmt_len(x: f64) -> String {
    // fixed precision keeps the output byte-deterministic
    format!("{x:.9}")
}

/// Collects the inscribed disks of every word with curvature at most
/// `cutoff`, in depth-first word order.
pub fn enumerate_inscribed(t: &DiskTriple, cutoff: f64) -> Result<Vec<Disk>> {
    fn recurse(t: &DiskTriple, cutoff: f64, out: &mut Vec<Disk>) -> Result<()> {
        let value = t.quadruple()?.inscribed_curvature();
        if value > cutoff {
            return Ok(());
        }
        out.push(t.inscribed_disk()?);
        for j in Letter::ALL {
            recurse(&t.child_triple(j)?, cutoff, out)?;
        }
        Ok(())
    }
    let mut out = Vec::new();
    recurse(t, cutoff, &mut out)?;
    Ok(out)
}

/// Renders the triple and its gasket disks as an SVG 1.1 document.
///
/// Output is deterministic byte-for-byte for a fixed triple and spec.
pub fn render_svg(t: &DiskTriple, spec: &RenderSpec) -> Result<String> {
    let max_seed = t
        .disks()
        .iter()
        .map(Disk::curvature)
        .fold(0.0f64, f64::max);
    if spec.cutoff <= max_seed {
        return Err(Error::InvalidArgument(format!(
            "render cutoff {} must exceed the largest seed curvature {max_seed}",
            spec.cutoff
        )));
    }
    let cir = t.circumscribed_disk()?;
    let (cc, cr) = match cir {
        Disk::Round { center, radius } => (Complex64::new(center[0], center[1]), radius),
        Disk::HalfPlane { .. } => unreachable!("circumscribed member is always a disk"),
    };
    let pad = cr * spec.pad_frac;
    let (x0, y0) = (cc.re - cr - pad, cc.im - cr - pad);
    let side = 2.0 * (cr + pad);
    let stroke_width = cr * spec.stroke_width_frac;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">\n",
        fmt_len(x0),
        fmt_len(y0),
        fmt_len(side),
        fmt_len(side)
    ));
    out.push_str(&format!(
        "<g fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\">\n",
        spec.fill,
        spec.stroke,
        fmt_len(stroke_width)
    ));
    for d in t.disks() {
        match d {
            Disk::Round { center, radius } => out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n",
                fmt_len(center[0]),
                fmt_len(center[1]),
                fmt_len(*radius)
            )),
            Disk::HalfPlane { normal, offset } => {
                // boundary line clipped to the (padded) viewBox diagonal
                let n = Complex64::new(normal[0], normal[1]);
                let tangent = Complex64::new(-n.im, n.re);
                let mid = n * *offset;
                let reach = 2.0 * (cr + pad) + (mid - cc).norm();
                let a = mid - tangent * reach;
                let b = mid + tangent * reach;
                out.push_str(&format!(
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                    fmt_len(a.re),
                    fmt_len(a.im),
                    fmt_len(b.re),
                    fmt_len(b.im)
                ));
            }
        }
    }
    for d in enumerate_inscribed(t, spec.cutoff)? {
        if let Disk::Round { center, radius } = d {
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n",
                fmt_len(center[0]),
                fmt_len(center[1]),
                fmt_len(radius)
            ));
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
