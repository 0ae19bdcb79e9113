//! Benchmark obstacles, boundary node sets and interior source points.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::Rng;

use crate::error::{MrcError, Result};
use crate::point::{fibonacci_directions, Dimension, Point};

/// Relative margin separating "strictly inside" from "on the boundary".
const BOUNDARY_TOL: f64 = 1e-10;

/// Rejection budget for one interior sample.
pub const MAX_REJECTIONS: u64 = 1_000_000;

/// Vertices of the benchmark triangle.
pub const TRIANGLE_VERTICES: [[f64; 2]; 3] = [[-1.0, 0.0], [1.0, 1.0], [1.0, -1.0]];

/// A soft obstacle `D` together with its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Obstacle {
    /// `(a cos t, b sin t)`.
    Ellipse { a: f64, b: f64 },
    /// `(-0.65 + cos t + 0.65 cos 2t, 1.5 sin t)`.
    Kite,
    Triangle { vertices: [[f64; 2]; 3] },
    Disk { radius: f64 },
    Sphere { radius: f64 },
    /// The cube `[-half, half]^3`.
    Cube { half: f64 },
    /// `x²/a² + y²/b² + z²/c² = 1`.
    Ellipsoid { a: f64, b: f64, c: f64 },
}

impl Obstacle {
    pub fn triangle() -> Self {
        Obstacle::Triangle {
            vertices: TRIANGLE_VERTICES,
        }
    }

    pub fn dimension(&self) -> Dimension {
        match self {
            Obstacle::Ellipse { .. } | Obstacle::Kite | Obstacle::Triangle { .. } | Obstacle::Disk { .. } => {
                Dimension::Two
            }
            _ => Dimension::Three,
        }
    }

    /// Short tag used in configs and output files.
    pub fn tag(&self) -> &'static str {
        match self {
            Obstacle::Ellipse { .. } => "ellipse2d",
            Obstacle::Kite => "kite2d",
            Obstacle::Triangle { .. } => "triangle2d",
            Obstacle::Disk { .. } => "disk2d",
            Obstacle::Sphere { .. } => "sphere3d",
            Obstacle::Cube { .. } => "cube3d",
            Obstacle::Ellipsoid { .. } => "ellipsoid3d",
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        let ok = match *self {
            Obstacle::Ellipse { a, b } => positive(a) && positive(b),
            Obstacle::Kite => true,
            Obstacle::Triangle { vertices } => {
                vertices.iter().flatten().all(|c| c.is_finite()) && libm::fabs(triangle_area2(&vertices)) > 0.0
            }
            Obstacle::Disk { radius } | Obstacle::Sphere { radius } => positive(radius),
            Obstacle::Cube { half } => positive(half),
            Obstacle::Ellipsoid { a, b, c } => positive(a) && positive(b) && positive(c),
        };
        if ok {
            Ok(())
        } else {
            Err(MrcError::invalid(format!("invalid shape parameters for {self:?}")))
        }
    }

    /// A point inside `D` toward which the boundary can be shrunk.
    pub fn anchor(&self) -> Point {
        match self {
            Obstacle::Triangle { vertices } => {
                let cx = (vertices[0][0] + vertices[1][0] + vertices[2][0]) / 3.0;
                let cy = (vertices[0][1] + vertices[1][1] + vertices[2][1]) / 3.0;
                Point::xy(cx, cy)
            }
            _ => Point::ORIGIN,
        }
    }

    /// Boundary parametrization `r(t)`, `t ∈ [0, 2π)`, for planar kinds.
    /// The triangle uses the polar form: `r(t)` is where the ray from the
    /// origin at angle `t` leaves the triangle, so it is `None` when the
    /// origin is not inside.
    pub fn boundary_point(&self, t: f64) -> Option<Point> {
        let (s, c) = libm::sincos(t);
        match *self {
            Obstacle::Ellipse { a, b } => Some(Point::xy(a * c, b * s)),
            Obstacle::Disk { radius } => Some(Point::xy(radius * c, radius * s)),
            Obstacle::Kite => Some(kite_point(t)),
            Obstacle::Triangle { vertices } => triangle_ray(&vertices, c, s),
            _ => None,
        }
    }

    /// True iff `p` lies strictly inside `D`. Planar kinds ignore `p.z()`.
    pub fn contains(&self, p: &Point) -> bool {
        let inner = 1.0 - BOUNDARY_TOL;
        match *self {
            Obstacle::Ellipse { a, b } => sq(p.x() / a) + sq(p.y() / b) < inner,
            Obstacle::Disk { radius } => sq(p.x() / radius) + sq(p.y() / radius) < inner,
            Obstacle::Kite => kite_contains(p.x(), p.y()),
            Obstacle::Triangle { vertices } => triangle_contains(&vertices, p.x(), p.y()),
            Obstacle::Sphere { radius } => p.dot(p) < sq(radius) * inner,
            Obstacle::Cube { half } => p.0.iter().all(|c| libm::fabs(*c) < half * inner),
            Obstacle::Ellipsoid { a, b, c } => sq(p.x() / a) + sq(p.y() / b) + sq(p.z() / c) < inner,
        }
    }

    /// Axis-aligned box enclosing `D`.
    pub fn bounding_box(&self) -> BoundingBox {
        match *self {
            Obstacle::Ellipse { a, b } => BoundingBox::planar(-a, a, -b, b),
            Obstacle::Disk { radius } => BoundingBox::planar(-radius, radius, -radius, radius),
            Obstacle::Kite => {
                let mut bb = BoundingBox::planar(f64::MAX, f64::MIN, f64::MAX, f64::MIN);
                for i in 0..4096 {
                    bb.include(&kite_point(TAU * i as f64 / 4096.0));
                }
                bb.pad(1e-3)
            }
            Obstacle::Triangle { vertices } => {
                let mut bb = BoundingBox::planar(f64::MAX, f64::MIN, f64::MAX, f64::MIN);
                for v in &vertices {
                    bb.include(&Point::xy(v[0], v[1]));
                }
                bb
            }
            Obstacle::Sphere { radius } => BoundingBox::cube(radius),
            Obstacle::Cube { half } => BoundingBox::cube(half),
            Obstacle::Ellipsoid { a, b, c } => BoundingBox {
                lo: Point::xyz(-a, -b, -c),
                hi: Point::xyz(a, b, c),
            },
        }
    }
}

fn sq(v: f64) -> f64 {
    v * v
}

fn kite_point(t: f64) -> Point {
    let (s, c) = libm::sincos(t);
    Point::xy(-0.65 + c + 0.65 * libm::cos(2.0 * t), 1.5 * s)
}

/// `y = 1.5 sin t` fixes `t` up to `t ↔ π - t`, so each horizontal line
/// meets the kite curve exactly twice, at
/// `x = -0.65 + 0.65 (1 - 2s²) ± √(1 - s²)` with `s = y / 1.5`.
fn kite_contains(x: f64, y: f64) -> bool {
    let s = y / 1.5;
    if libm::fabs(s) >= 1.0 - BOUNDARY_TOL {
        return false;
    }
    let mid = -0.65 + 0.65 * (1.0 - 2.0 * s * s);
    let half = libm::sqrt(1.0 - s * s);
    let margin = BOUNDARY_TOL * 2.0;
    x > mid - half + margin && x < mid + half - margin
}

fn edge_lengths(v: &[[f64; 2]; 3]) -> [f64; 3] {
    let len = |a: [f64; 2], b: [f64; 2]| libm::hypot(b[0] - a[0], b[1] - a[1]);
    [len(v[0], v[1]), len(v[1], v[2]), len(v[2], v[0])]
}

fn triangle_ray(v: &[[f64; 2]; 3], c: f64, s: f64) -> Option<Point> {
    if !triangle_contains(v, 0.0, 0.0) {
        return None;
    }
    let mut best = f64::INFINITY;
    for e in 0..3 {
        let (a, b) = (v[e], v[(e + 1) % 3]);
        // a + f (b - a) = r (c, s)
        let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
        let det = ex * s - ey * c;
        if det == 0.0 {
            continue;
        }
        let r = (ex * a[1] - ey * a[0]) / det;
        let f = (c * a[1] - s * a[0]) / det;
        if r > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&f) {
            best = best.min(r);
        }
    }
    best.is_finite().then(|| Point::xy(best * c, best * s))
}

fn triangle_area2(v: &[[f64; 2]; 3]) -> f64 {
    (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1])
}

fn triangle_contains(v: &[[f64; 2]; 3], x: f64, y: f64) -> bool {
    let orient = triangle_area2(v).signum();
    let lens = edge_lengths(v);
    (0..3).all(|e| {
        let a = v[e];
        let b = v[(e + 1) % 3];
        let cross = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
        // signed distance to the edge line, positive on the inner side
        orient * cross / lens[e] > BOUNDARY_TOL
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub lo: Point,
    pub hi: Point,
}

impl BoundingBox {
    fn planar(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        BoundingBox {
            lo: Point::xy(x0, y0),
            hi: Point::xy(x1, y1),
        }
    }

    fn cube(h: f64) -> Self {
        BoundingBox {
            lo: Point::xyz(-h, -h, -h),
            hi: Point::xyz(h, h, h),
        }
    }

    fn include(&mut self, p: &Point) {
        for i in 0..3 {
            self.lo.0[i] = self.lo.0[i].min(p.0[i]);
            self.hi.0[i] = self.hi.0[i].max(p.0[i]);
        }
    }

    fn pad(mut self, d: f64) -> Self {
        for i in 0..2 {
            self.lo.0[i] -= d;
            self.hi.0[i] += d;
        }
        self
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..3).all(|i| p.0[i] >= self.lo.0[i] && p.0[i] <= self.hi.0[i])
    }
}

/// Discretized boundary `S` of an obstacle: `M` collocation nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    obstacle: Obstacle,
    nodes: Vec<Point>,
    bbox: BoundingBox,
}

impl Surface {
    /// Place `m` nodes on the boundary of `obstacle`.
    ///
    /// Planar curves are sampled uniformly in their parameter; the triangle
    /// gets per-edge counts proportional to edge length. The sphere uses a
    /// spherical Fibonacci set, the ellipsoid the same set scaled along the
    /// axes, and the cube cell-centered `s × s` grids on each face
    /// (`m = 6 s²`).
    pub fn new(obstacle: Obstacle, m: usize) -> Result<Self> {
        obstacle.validate()?;
        let min_nodes = match obstacle.dimension() {
            Dimension::Two => 3,
            Dimension::Three => 6,
        };
        if m < min_nodes {
            return Err(MrcError::invalid(format!(
                "{} needs at least {min_nodes} nodes, got {m}",
                obstacle.tag()
            )));
        }
        let nodes = match obstacle {
            Obstacle::Ellipse { .. } | Obstacle::Kite | Obstacle::Disk { .. } => (0..m)
                .map(|i| obstacle.boundary_point(TAU * i as f64 / m as f64).expect("planar kind"))
                .collect(),
            Obstacle::Triangle { vertices } => triangle_nodes(&vertices, m),
            Obstacle::Sphere { radius } => fibonacci_directions(m).into_iter().map(|d| d.scale(radius)).collect(),
            Obstacle::Ellipsoid { a, b, c } => fibonacci_directions(m)
                .into_iter()
                .map(|d| Point::xyz(a * d.x(), b * d.y(), c * d.z()))
                .collect(),
            Obstacle::Cube { half } => cube_nodes(half, m)?,
        };
        Ok(Surface {
            obstacle,
            nodes,
            bbox: obstacle.bounding_box(),
        })
    }

    /// Distance from `p` to the nearest boundary node.
    pub fn node_distance(&self, p: &Point) -> f64 {
        self.nodes.iter().map(|n| n.distance(p)).fold(f64::INFINITY, f64::min)
    }

    pub fn obstacle(&self) -> &Obstacle {
        &self.obstacle
    }

    pub fn dimension(&self) -> Dimension {
        self.obstacle.dimension()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.obstacle.contains(p)
    }
}

/// Equivalent to [`Surface::new`].
pub fn make_obstacle(obstacle: Obstacle, m: usize) -> Result<Surface> {
    Surface::new(obstacle, m)
}

/// Split `m` nodes over the edges by length (largest remainder rounding),
/// uniform within each edge and starting at its first vertex.
fn triangle_nodes(v: &[[f64; 2]; 3], m: usize) -> Vec<Point> {
    let lens = edge_lengths(v);
    let perimeter: f64 = lens.iter().sum();
    let exact: Vec<f64> = lens.iter().map(|l| m as f64 * l / perimeter).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| libm::floor(*e) as usize).collect();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| {
        let ri = exact[i] - counts[i] as f64;
        let rj = exact[j] - counts[j] as f64;
        rj.partial_cmp(&ri).unwrap_or(core::cmp::Ordering::Equal).then(i.cmp(&j))
    });
    let mut left = m - counts.iter().sum::<usize>();
    for &e in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[e] += 1;
        left -= 1;
    }
    let mut nodes = Vec::with_capacity(m);
    for e in 0..3 {
        let a = v[e];
        let b = v[(e + 1) % 3];
        for i in 0..counts[e] {
            let f = i as f64 / counts[e] as f64;
            nodes.push(Point::xy(a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])));
        }
    }
    nodes
}

fn cube_nodes(half: f64, m: usize) -> Result<Vec<Point>> {
    let side = libm::round(libm::sqrt(m as f64 / 6.0)) as usize;
    if side == 0 || 6 * side * side != m {
        return Err(MrcError::invalid(format!(
            "cube node count must be 6·s², got {m}"
        )));
    }
    let coord = |i: usize| half * (-1.0 + (2 * i + 1) as f64 / side as f64);
    let mut nodes = Vec::with_capacity(m);
    for axis in 0..3 {
        for sign in [-1.0, 1.0] {
            for i in 0..side {
                for j in 0..side {
                    let mut p = [0.0; 3];
                    p[axis] = sign * half;
                    p[(axis + 1) % 3] = coord(i);
                    p[(axis + 2) % 3] = coord(j);
                    nodes.push(Point(p));
                }
            }
        }
    }
    Ok(nodes)
}

/// One batch of interior source points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointBatch {
    pub points: Vec<Point>,
    /// Iteration that produced the batch, starting at 1.
    pub batch_index: usize,
}

/// Draw `count` points uniformly from `D` by rejection from the bounding box.
pub fn sample_interior<R: Rng + ?Sized>(surface: &Surface, count: usize, rng: &mut R) -> Result<PointBatch> {
    if count == 0 {
        return Err(MrcError::invalid("batch size must be positive"));
    }
    let bb = surface.bbox();
    let dims = surface.dimension().count();
    let mut points = Vec::with_capacity(count);
    let mut rejections = 0u64;
    while points.len() < count {
        let mut p = Point::ORIGIN;
        for i in 0..dims {
            let u: f64 = rng.gen();
            p.0[i] = bb.lo.0[i] + u * (bb.hi.0[i] - bb.lo.0[i]);
        }
        if surface.contains(&p) {
            points.push(p);
        } else {
            rejections += 1;
            if rejections > MAX_REJECTIONS {
                return Err(MrcError::SamplingFailure { rejections });
            }
        }
    }
    Ok(PointBatch {
        points,
        batch_index: 1,
    })
}

/// How interior sources are distributed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    /// Uniform on `D` (rejection from the bounding box).
    #[default]
    Uniform,
    /// Uniform in the polar coordinates of a star-shaped obstacle about the
    /// origin: `x = ρ · b(ω)` with `ρ ~ U[0, 1)` and `b(ω)` the boundary point
    /// in direction `ω`, where `ω` is uniform in the boundary parameter
    /// (planar) or in the spherical angles `(θ, φ)` (spatial). Sources
    /// concentrate near the origin.
    Polar,
}

/// Draw `count` interior points with the given distribution.
pub fn sample_sources<R: Rng + ?Sized>(
    surface: &Surface,
    count: usize,
    sampling: Sampling,
    rng: &mut R,
) -> Result<PointBatch> {
    match sampling {
        Sampling::Uniform => sample_interior(surface, count, rng),
        Sampling::Polar => sample_polar(surface, count, rng),
    }
}

/// Like [`sample_sources`], but redraws points closer than `clearance` to
/// every boundary node. A zero clearance draws exactly as
/// [`sample_sources`].
pub fn sample_sources_clear<R: Rng + ?Sized>(
    surface: &Surface,
    count: usize,
    sampling: Sampling,
    clearance: f64,
    rng: &mut R,
) -> Result<PointBatch> {
    if clearance <= 0.0 {
        return sample_sources(surface, count, sampling, rng);
    }
    let mut points = Vec::with_capacity(count);
    let mut rejections = 0u64;
    while points.len() < count {
        let p = sample_sources(surface, 1, sampling, rng)?.points[0];
        if surface.node_distance(&p) >= clearance {
            points.push(p);
        } else {
            rejections += 1;
            if rejections > MAX_REJECTIONS {
                return Err(MrcError::SamplingFailure { rejections });
            }
        }
    }
    Ok(PointBatch {
        points,
        batch_index: 1,
    })
}

/// Boundary point of a spatial obstacle along the unit direction `d`.
fn radial_boundary(obstacle: &Obstacle, d: &Point) -> Option<Point> {
    let reach = match *obstacle {
        Obstacle::Sphere { radius } => radius,
        Obstacle::Cube { half } => half / d.0.iter().fold(0.0f64, |m, c| m.max(libm::fabs(*c))),
        Obstacle::Ellipsoid { a, b, c } => 1.0 / libm::sqrt(sq(d.x() / a) + sq(d.y() / b) + sq(d.z() / c)),
        _ => return None,
    };
    Some(d.scale(reach))
}

fn sample_polar<R: Rng + ?Sized>(surface: &Surface, count: usize, rng: &mut R) -> Result<PointBatch> {
    if count == 0 {
        return Err(MrcError::invalid("batch size must be positive"));
    }
    let obstacle = surface.obstacle();
    let mut points = Vec::with_capacity(count);
    let mut rejections = 0u64;
    while points.len() < count {
        let rho: f64 = rng.gen();
        let edge = match obstacle.dimension() {
            Dimension::Two => obstacle.boundary_point(TAU * rng.gen::<f64>()),
            Dimension::Three => {
                let theta = TAU * rng.gen::<f64>();
                let phi = core::f64::consts::PI * rng.gen::<f64>();
                radial_boundary(obstacle, &crate::point::direction_from_angles(theta, phi))
            }
        }
        .ok_or_else(|| MrcError::invalid("polar sampling needs the origin inside the obstacle"))?;
        let p = edge.scale(rho);
        if obstacle.contains(&p) {
            points.push(p);
        } else {
            rejections += 1;
            if rejections > MAX_REJECTIONS {
                return Err(MrcError::SamplingFailure { rejections });
            }
        }
    }
    Ok(PointBatch {
        points,
        batch_index: 1,
    })
}

/// Sources `x_j = scale · r(2π (j-1) / count)`, `j = 1..=count`, on a
/// shrunken copy of a planar boundary.
pub fn deterministic_sources(surface: &Surface, scale: f64, count: usize) -> Result<PointBatch> {
    if surface.dimension() != Dimension::Two {
        return Err(MrcError::invalid("deterministic sources are defined for planar obstacles only"));
    }
    if !(scale > 0.0 && scale < 1.0) {
        return Err(MrcError::invalid(format!("scale must lie in (0, 1), got {scale}")));
    }
    if count == 0 {
        return Err(MrcError::invalid("batch size must be positive"));
    }
    let obstacle = surface.obstacle();
    let mut points = Vec::with_capacity(count);
    for j in 0..count {
        let t = TAU * j as f64 / count as f64;
        let p = obstacle
            .boundary_point(t)
            .ok_or_else(|| MrcError::invalid("deterministic sources need the origin inside the obstacle"))?
            .scale(scale);
        if !obstacle.contains(&p) {
            return Err(MrcError::invalid(format!(
                "scaled boundary point {:?} at t = {t} lies outside the obstacle",
                p.0
            )));
        }
        points.push(p);
    }
    Ok(PointBatch {
        points,
        batch_index: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ellipse_four_nodes() {
        let s = Surface::new(Obstacle::Ellipse { a: 2.0, b: 1.0 }, 4).unwrap();
        let want = [(2.0, 0.0), (0.0, 1.0), (-2.0, 0.0), (0.0, -1.0)];
        for (p, w) in s.nodes().iter().zip(want) {
            assert!(libm::fabs(p.x() - w.0) < 1e-15 && libm::fabs(p.y() - w.1) < 1e-15);
        }
    }

    #[test]
    fn cube_faces() {
        let s = Surface::new(Obstacle::Cube { half: 1.0 }, 1350).unwrap();
        assert_eq!(s.len(), 1350);
        for face in s.nodes().chunks(225) {
            let axis = (0..3).find(|&a| libm::fabs(libm::fabs(face[0].0[a]) - 1.0) < 1e-15).unwrap();
            assert!(face.iter().all(|p| p.0[axis] == face[0].0[axis]));
        }
        assert!(matches!(
            Surface::new(Obstacle::Cube { half: 1.0 }, 1000),
            Err(MrcError::InvalidArgument(_))
        ));
    }

    #[test]
    fn triangle_edge_counts() {
        let s = Surface::new(Obstacle::triangle(), 720).unwrap();
        // edges start at their first vertex, so vertex positions delimit the counts
        let at = |v: [f64; 2]| {
            s.nodes()
                .iter()
                .position(|p| p.x() == v[0] && p.y() == v[1])
                .unwrap()
        };
        let (i1, i2) = (at(TRIANGLE_VERTICES[1]), at(TRIANGLE_VERTICES[2]));
        assert_eq!(at(TRIANGLE_VERTICES[0]), 0);
        let counts = [i1, i2 - i1, 720 - i2];
        let per = 2.0 + 2.0 * libm::sqrt(5.0);
        let expect = [720.0 * libm::sqrt(5.0) / per, 720.0 * 2.0 / per, 720.0 * libm::sqrt(5.0) / per];
        for i in 0..3 {
            assert!(libm::fabs(counts[i] as f64 - expect[i]) <= 1.0, "{counts:?}");
        }
    }

    #[test]
    fn simple_membership() {
        let sphere = Obstacle::Sphere { radius: 1.0 };
        assert!(sphere.contains(&Point::ORIGIN));
        let cube = Obstacle::Cube { half: 1.0 };
        assert!(!cube.contains(&Point::xyz(1.0001, 0.0, 0.0)));
        assert!(Obstacle::Kite.contains(&Point::xy(-0.6, 0.0)));
        assert!(!Obstacle::Kite.contains(&Point::xy(0.0, 1.6)));
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = Surface::new(Obstacle::Disk { radius: 1.0 }, 64).unwrap();
        let a = sample_interior(&s, 100, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = sample_interior(&s, 100, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let c = sample_interior(&s, 100, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.points.iter().all(|p| p.x() * p.x() + p.y() * p.y() < 1.0));
    }

    #[test]
    fn deterministic_sources_ellipse() {
        let s = Surface::new(Obstacle::Ellipse { a: 2.0, b: 1.0 }, 720).unwrap();
        let b = deterministic_sources(&s, 0.7, 4).unwrap();
        let want = [(1.4, 0.0), (0.0, 0.7), (-1.4, 0.0), (0.0, -0.7)];
        for (p, w) in b.points.iter().zip(want) {
            assert!(libm::fabs(p.x() - w.0) < 1e-15 && libm::fabs(p.y() - w.1) < 1e-15);
        }
        let sphere = Surface::new(Obstacle::Sphere { radius: 1.0 }, 450).unwrap();
        assert!(deterministic_sources(&sphere, 0.5, 4).is_err());
    }
}
