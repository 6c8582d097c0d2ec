//! Joint and limb Gaussian heatmap volumes.
//!
//! Confidence-weighted unnormalized Gaussians rendered at map resolution:
//! joint channels measure distance to the keypoint, limb channels distance
//! to the limb segment. Multi-person frames merge per-person renders by
//! elementwise max.

use crate::error::{Error, Result};
use crate::types::{Grid, Keypoint, LimbGraph, MapVariant, Resolution, SkeletonFrame};

/// Real-valued J-channel volume with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatVolume {
    channels: Vec<Grid<f32>>,
    variant: MapVariant,
}

impl HeatVolume {
    pub fn new(channels: Vec<Grid<f32>>, variant: MapVariant) -> Self {
        HeatVolume { channels, variant }
    }

    pub fn variant(&self) -> MapVariant {
        self.variant
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn channel(&self, k: usize) -> &Grid<f32> {
        &self.channels[k]
    }

    pub fn channels(&self) -> &[Grid<f32>] {
        &self.channels
    }
}

/// Gaussians are rendered inside a window of this many sigmas around the
/// keypoint (or segment); everything outside is left at zero.
const TRUNCATION_SIGMAS: f64 = 3.0;

#[inline]
fn gaussian(dist_sq: f64, sigma: f64) -> f64 {
    (-dist_sq / (2.0 * sigma * sigma)).exp()
}

/// Clip an inclusive real interval to valid integer pixel indices.
fn window(lo: f64, hi: f64, len: usize) -> Option<(usize, usize)> {
    let lo = lo.ceil().max(0.0) as i64;
    let hi = hi.floor().min((len - 1) as f64) as i64;
    if lo > hi {
        None
    } else {
        Some((lo as usize, hi as usize))
    }
}

fn render_joint(map: &mut Grid<f32>, kp: &Keypoint, sigma: f64, res: &Resolution) {
    if kp.c <= 0.0 {
        return;
    }
    let (x, y) = res.downsample(kp.x, kp.y);
    let r = TRUNCATION_SIGMAS * sigma;
    let Some((r0, r1)) = window(y - r, y + r, map.h()) else {
        return;
    };
    let Some((c0, c1)) = window(x - r, x + r, map.w()) else {
        return;
    };
    for row in r0..=r1 {
        let dy = row as f64 - y;
        for col in c0..=c1 {
            let dx = col as f64 - x;
            let v = (kp.c * gaussian(dx * dx + dy * dy, sigma)) as f32;
            if v > map.get(row, col) {
                map.set(row, col, v);
            }
        }
    }
}

/// Squared distance from point `p` to segment `a`-`b`. Zero-length segments
/// fall back to point distance.
fn dist_sq_to_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (px, py) = p;
    let (ax, ay) = a;
    let (bx, by) = b;
    let dx = bx - ax;
    let dy = by - ay;
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (((px - ax) * dx + (py - ay) * dy) / len_sq).clamp(0.0, 1.0)
    };
    let qx = ax + t * dx;
    let qy = ay + t * dy;
    (px - qx) * (px - qx) + (py - qy) * (py - qy)
}

fn render_limb(map: &mut Grid<f32>, a: &Keypoint, b: &Keypoint, sigma: f64, res: &Resolution) {
    let conf = a.c.min(b.c);
    if conf <= 0.0 {
        return;
    }
    let pa = res.downsample(a.x, a.y);
    let pb = res.downsample(b.x, b.y);
    let r = TRUNCATION_SIGMAS * sigma;
    let Some((r0, r1)) = window(pa.1.min(pb.1) - r, pa.1.max(pb.1) + r, map.h()) else {
        return;
    };
    let Some((c0, c1)) = window(pa.0.min(pb.0) - r, pa.0.max(pb.0) + r, map.w()) else {
        return;
    };
    for row in r0..=r1 {
        for col in c0..=c1 {
            let d2 = dist_sq_to_segment((col as f64, row as f64), pa, pb);
            let v = (conf * gaussian(d2, sigma)) as f32;
            if v > map.get(row, col) {
                map.set(row, col, v);
            }
        }
    }
}

/// Joint heatmap volume: channel `k` is the confidence-weighted Gaussian
/// around joint `k`, maxed over persons.
pub fn joint_heatmap(frame: &SkeletonFrame, sigma: f64, res: &Resolution) -> Result<HeatVolume> {
    if frame.num_persons() == 0 {
        return Err(Error::EmptyFrame);
    }
    let j = frame.person(0).len();
    let mut channels = vec![Grid::new_fill(res.h, res.w, 0.0f32); j];
    for person in frame.persons() {
        for (k, kp) in person.iter().enumerate() {
            render_joint(&mut channels[k], kp, sigma, res);
        }
    }
    Ok(HeatVolume::new(channels, MapVariant::Joint))
}

/// Limb heatmap volume: channel `i` is the Gaussian of distance to limb
/// segment `i`, weighted by the smaller endpoint confidence, maxed over
/// persons.
pub fn limb_heatmap(
    frame: &SkeletonFrame,
    graph: &LimbGraph,
    sigma: f64,
    res: &Resolution,
) -> Result<HeatVolume> {
    if frame.num_persons() == 0 {
        return Err(Error::EmptyFrame);
    }
    let mut channels = vec![Grid::new_fill(res.h, res.w, 0.0f32); graph.limbs().len()];
    for person in frame.persons() {
        for (i, &(a, b)) in graph.limbs().iter().enumerate() {
            render_limb(&mut channels[i], &person[a], &person[b], sigma, res);
        }
    }
    Ok(HeatVolume::new(channels, MapVariant::Limb))
}
