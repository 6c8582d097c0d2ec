//! Domain types shared by every stage of the pipeline: resolutions, grids,
//! limb graphs, skeleton frames, and flow fields.
//!
//! All types are immutable values after construction and safe to share
//! across workers.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Source and map resolutions. Maps live at a 4x downsampled grid, so the
/// source frame must be divisible by 4 on both axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    /// Source frame height in pixels.
    pub h0: usize,
    /// Source frame width in pixels.
    pub w0: usize,
    /// Map height, `h0 / 4`.
    pub h: usize,
    /// Map width, `w0 / 4`.
    pub w: usize,
}

impl Resolution {
    pub fn new(h0: usize, w0: usize) -> Result<Self> {
        if h0 == 0 || w0 == 0 || h0 % 4 != 0 || w0 % 4 != 0 {
            return Err(Error::ResolutionNotDivisible { h0, w0 });
        }
        Ok(Resolution {
            h0,
            w0,
            h: h0 / 4,
            w: w0 / 4,
        })
    }

    /// Source-pixel coordinate mapped onto the downsampled grid
    /// (real-valued, no rounding).
    pub fn downsample(&self, x: f64, y: f64) -> (f64, f64) {
        (x / 4.0, y / 4.0)
    }
}

/// Dense row-major 2D grid. The workhorse storage for every map type.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    h: usize,
    w: usize,
    data: Vec<T>,
}

impl<T: Copy> Grid<T> {
    pub fn new_fill(h: usize, w: usize, value: T) -> Self {
        Grid {
            h,
            w,
            data: vec![value; h * w],
        }
    }

    pub fn from_vec(h: usize, w: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), h * w, "grid data length mismatch");
        Grid { h, w, data }
    }

    #[inline]
    pub fn h(&self) -> usize {
        self.h
    }

    #[inline]
    pub fn w(&self) -> usize {
        self.w
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        debug_assert!(row < self.h && col < self.w);
        self.data[row * self.w + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        debug_assert!(row < self.h && col < self.w);
        self.data[row * self.w + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.w..(row + 1) * self.w]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn same_shape<U>(&self, other: &Grid<U>) -> bool {
        self.h == other.h && self.w == other.w
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Grid<U> {
        Grid {
            h: self.h,
            w: self.w,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// Skeleton topology: `joints` vertex count and an ordered list of
/// `(a, b)` joint-index pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimbGraph {
    joints: usize,
    limbs: Vec<(usize, usize)>,
}

impl LimbGraph {
    pub fn new(joints: usize, limbs: Vec<(usize, usize)>) -> Result<Self> {
        if joints == 0 {
            return Err(Error::InvalidLimbGraph("zero joints".into()));
        }
        for &(a, b) in &limbs {
            if a >= joints || b >= joints {
                return Err(Error::InvalidLimbGraph(format!(
                    "limb ({a}, {b}) references joint outside [0, {joints})"
                )));
            }
            if a == b {
                return Err(Error::InvalidLimbGraph(format!("self-loop at joint {a}")));
            }
        }
        Ok(LimbGraph { joints, limbs })
    }

    /// COCO 17-keypoint layout with exactly 17 limbs, so joint and limb
    /// scale volumes share the same channel count.
    pub fn coco17() -> Self {
        let limbs = vec![
            (0, 1),
            (0, 2),
            (1, 3),
            (2, 4),
            (3, 5),
            (4, 6),
            (5, 7),
            (7, 9),
            (6, 8),
            (8, 10),
            (5, 11),
            (6, 12),
            (11, 12),
            (11, 13),
            (13, 15),
            (12, 14),
            (14, 16),
        ];
        LimbGraph::new(17, limbs).expect("coco17 layout is valid")
    }

    /// Cycle over `joints` vertices: exactly `joints` limbs. Used for
    /// synthetic scenes where channel parity with the joint volume matters.
    pub fn cycle(joints: usize) -> Result<Self> {
        if joints < 3 {
            return Err(Error::InvalidLimbGraph(
                "cycle graph needs at least 3 joints".into(),
            ));
        }
        let limbs = (0..joints).map(|i| (i, (i + 1) % joints)).collect();
        LimbGraph::new(joints, limbs)
    }

    /// Look up a layout by the name used in keypoint files.
    pub fn from_layout(name: &str) -> Result<Self> {
        match name {
            "coco17" => Ok(Self::coco17()),
            _ => Err(Error::UnknownLayout(name.to_string())),
        }
    }

    pub fn joints(&self) -> usize {
        self.joints
    }

    pub fn limbs(&self) -> &[(usize, usize)] {
        &self.limbs
    }
}

/// Joint or limb flavor of a J-channel volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapVariant {
    Joint,
    Limb,
}

impl MapVariant {
    pub fn name(self) -> &'static str {
        match self {
            MapVariant::Joint => "joint",
            MapVariant::Limb => "limb",
        }
    }
}

/// One keypoint: subpixel source coordinates plus detector confidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Keypoint {
    /// Subpixel column in `[0, w0)`.
    pub x: f64,
    /// Subpixel row in `[0, h0)`.
    pub y: f64,
    /// Confidence in `[0, 1]`.
    pub c: f64,
}

/// Per-person joint coordinates for one frame. Every person carries exactly
/// `J` keypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonFrame {
    persons: Vec<Vec<Keypoint>>,
}

impl SkeletonFrame {
    pub fn new(persons: Vec<Vec<Keypoint>>) -> Self {
        SkeletonFrame { persons }
    }

    pub fn persons(&self) -> &[Vec<Keypoint>] {
        &self.persons
    }

    pub fn person(&self, index: usize) -> &[Keypoint] {
        &self.persons[index]
    }

    pub fn num_persons(&self) -> usize {
        self.persons.len()
    }
}

/// Validate a skeleton frame against a limb graph and resolution.
///
/// Out-of-frame keypoints are clamped to the boundary (pose extractors
/// commonly emit slightly out-of-range points); non-finite coordinates and
/// joint-count mismatches are rejected. Confidences are clamped to `[0, 1]`.
pub fn validate_skeleton(
    frame: &SkeletonFrame,
    graph: &LimbGraph,
    res: &Resolution,
) -> Result<SkeletonFrame> {
    if frame.persons.is_empty() {
        return Err(Error::EmptyFrame);
    }
    let j = graph.joints();
    let mut persons = Vec::with_capacity(frame.persons.len());
    for (p, kps) in frame.persons.iter().enumerate() {
        if kps.len() != j {
            return Err(Error::JointCountMismatch {
                person: p,
                got: kps.len(),
                expected: j,
            });
        }
        let mut clamped = Vec::with_capacity(j);
        for (k, kp) in kps.iter().enumerate() {
            if !kp.x.is_finite() || !kp.y.is_finite() || !kp.c.is_finite() {
                return Err(Error::NonFiniteCoordinate { person: p, joint: k });
            }
            clamped.push(Keypoint {
                x: kp.x.clamp(0.0, (res.w0 - 1) as f64),
                y: kp.y.clamp(0.0, (res.h0 - 1) as f64),
                c: kp.c.clamp(0.0, 1.0),
            });
        }
        persons.push(clamped);
    }
    Ok(SkeletonFrame { persons })
}

/// Dense optical-flow field at map resolution: one `(u, v)` displacement
/// vector per pixel, in pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    u: Grid<f64>,
    v: Grid<f64>,
}

impl FlowField {
    pub fn new(u: Grid<f64>, v: Grid<f64>) -> Result<Self> {
        if !u.same_shape(&v) {
            return Err(Error::ShapeMismatch {
                context: "flow u/v components",
                left_h: u.h(),
                left_w: u.w(),
                right_h: v.h(),
                right_w: v.w(),
            });
        }
        for &x in u.data().iter().chain(v.data().iter()) {
            if !x.is_finite() {
                return Err(Error::SchemaError("non-finite flow component".into()));
            }
        }
        Ok(FlowField { u, v })
    }

    pub fn constant(h: usize, w: usize, u: f64, v: f64) -> Self {
        FlowField {
            u: Grid::new_fill(h, w, u),
            v: Grid::new_fill(h, w, v),
        }
    }

    #[inline]
    pub fn h(&self) -> usize {
        self.u.h()
    }

    #[inline]
    pub fn w(&self) -> usize {
        self.u.w()
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> (f64, f64) {
        (self.u.get(row, col), self.v.get(row, col))
    }

    pub fn u(&self) -> &Grid<f64> {
        &self.u
    }

    pub fn v(&self) -> &Grid<f64> {
        &self.v
    }

    /// Mean flow vector, the background estimate.
    pub fn mean(&self) -> (f64, f64) {
        let n = (self.h() * self.w()) as f64;
        let su: f64 = self.u.data().iter().sum();
        let sv: f64 = self.v.data().iter().sum();
        (su / n, sv / n)
    }

    /// Elementwise `s * flow + c`, used by the invariance tests.
    pub fn affine(&self, s: f64, c: (f64, f64)) -> FlowField {
        FlowField {
            u: self.u.map(|x| s * x + c.0),
            v: self.v.map(|x| s * x + c.1),
        }
    }
}

/// Round half away from zero; the single rounding rule applied to subpixel
/// joint coordinates everywhere in the pipeline.
#[inline]
pub fn round_coord(x: f64) -> i64 {
    x.round() as i64
}

/// Deterministic per-(frame, person) seed derivation, so parallel annotation
/// generation stays reproducible. SplitMix64-style mixing.
pub fn derive_seed(base: u64, frame: u64, person: u64) -> u64 {
    let mut z = base
        .wrapping_add(frame.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(person.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_divisibility() {
        let r = Resolution::new(256, 128).unwrap();
        assert_eq!((r.h, r.w), (64, 32));
        assert!(Resolution::new(255, 128).is_err());
        assert!(Resolution::new(256, 130).is_err());
        assert!(Resolution::new(0, 0).is_err());
    }

    #[test]
    fn coco17_has_17_limbs() {
        let g = LimbGraph::coco17();
        assert_eq!(g.joints(), 17);
        assert_eq!(g.limbs().len(), 17);
    }

    #[test]
    fn limb_graph_rejects_bad_edges() {
        assert!(LimbGraph::new(3, vec![(0, 3)]).is_err());
        assert!(LimbGraph::new(3, vec![(1, 1)]).is_err());
        assert!(LimbGraph::new(0, vec![]).is_err());
    }

    fn person_at(x: f64, y: f64, j: usize) -> Vec<Keypoint> {
        vec![Keypoint { x, y, c: 1.0 }; j]
    }

    #[test]
    fn skeleton_validation_accepts_in_bounds() {
        let res = Resolution::new(64, 64).unwrap();
        let graph = LimbGraph::cycle(17).unwrap();
        let frame = SkeletonFrame::new(vec![person_at(10.0, 12.0, 17)]);
        let out = validate_skeleton(&frame, &graph, &res).unwrap();
        assert_eq!(out.num_persons(), 1);
    }

    #[test]
    fn skeleton_validation_rejects_joint_count() {
        let res = Resolution::new(64, 64).unwrap();
        let graph = LimbGraph::cycle(17).unwrap();
        let frame = SkeletonFrame::new(vec![person_at(1.0, 1.0, 16)]);
        match validate_skeleton(&frame, &graph, &res) {
            Err(Error::JointCountMismatch { got: 16, expected: 17, .. }) => {}
            other => panic!("expected JointCountMismatch, got {other:?}"),
        }
    }

    #[test]
    fn skeleton_validation_rejects_nan() {
        let res = Resolution::new(64, 64).unwrap();
        let graph = LimbGraph::cycle(3).unwrap();
        let mut kps = person_at(1.0, 1.0, 3);
        kps[1].x = f64::NAN;
        let frame = SkeletonFrame::new(vec![kps]);
        match validate_skeleton(&frame, &graph, &res) {
            Err(Error::NonFiniteCoordinate { person: 0, joint: 1 }) => {}
            other => panic!("expected NonFiniteCoordinate, got {other:?}"),
        }
    }

    #[test]
    fn skeleton_validation_rejects_empty() {
        let res = Resolution::new(64, 64).unwrap();
        let graph = LimbGraph::cycle(3).unwrap();
        let frame = SkeletonFrame::new(vec![]);
        assert!(matches!(
            validate_skeleton(&frame, &graph, &res),
            Err(Error::EmptyFrame)
        ));
    }

    #[test]
    fn skeleton_validation_clamps_out_of_frame() {
        let res = Resolution::new(64, 64).unwrap();
        let graph = LimbGraph::cycle(3).unwrap();
        let mut kps = person_at(1.0, 1.0, 3);
        kps[0].x = -5.0;
        kps[2].y = 1000.0;
        let frame = SkeletonFrame::new(vec![kps]);
        let out = validate_skeleton(&frame, &graph, &res).unwrap();
        assert_eq!(out.person(0)[0].x, 0.0);
        assert_eq!(out.person(0)[2].y, 63.0);
    }

    #[test]
    fn flow_mean_and_affine() {
        let mut u = Grid::new_fill(2, 2, 0.0);
        u.set(0, 0, 4.0);
        let v = Grid::new_fill(2, 2, 1.0);
        let f = FlowField::new(u, v).unwrap();
        assert_eq!(f.mean(), (1.0, 1.0));
        let g = f.affine(2.0, (3.0, -1.0));
        assert_eq!(g.at(0, 0), (11.0, 1.0));
        assert_eq!(g.at(1, 1), (3.0, 1.0));
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round_coord(5.4), 5);
        assert_eq!(round_coord(7.8), 8);
        assert_eq!(round_coord(2.5), 3);
        assert_eq!(round_coord(-2.5), -3);
    }

    #[test]
    fn derived_seeds_differ_per_index() {
        let s = derive_seed(42, 0, 0);
        assert_ne!(s, derive_seed(42, 1, 0));
        assert_ne!(s, derive_seed(42, 0, 1));
        assert_eq!(s, derive_seed(42, 0, 0));
    }
}
