//! Points and directions in the plane or in space.
//!
//! Planar points are stored with a zero third coordinate so that both
//! dimensions share one representation; every consumer that cares about the
//! dimension carries a [`Dimension`] alongside.

use core::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn count(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point(pub [f64; 3]);

impl Point {
    pub const ORIGIN: Point = Point([0.0; 3]);

    pub const fn xy(x: f64, y: f64) -> Self {
        Point([x, y, 0.0])
    }

    pub const fn xyz(x: f64, y: f64, z: f64) -> Self {
        Point([x, y, z])
    }

    /// Build a point from a slice of 2 or 3 coordinates.
    pub fn from_slice(c: &[f64]) -> Option<Self> {
        match *c {
            [x, y] => Some(Point::xy(x, y)),
            [x, y, z] => Some(Point::xyz(x, y, z)),
            _ => None,
        }
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (*self - *other).norm()
    }

    pub fn scale(&self, s: f64) -> Point {
        Point([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// The coordinates that are meaningful in `dim`.
    pub fn coords(&self, dim: Dimension) -> &[f64] {
        &self.0[..dim.count()]
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        libm::fabs(self.norm() - 1.0) <= tol
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        p.scale(self)
    }
}

/// Unit vector from azimuth `theta` and polar angle `phi`:
/// `(cos θ sin φ, sin θ sin φ, cos φ)`.
pub fn direction_from_angles(theta: f64, phi: f64) -> Point {
    let (st, ct) = libm::sincos(theta);
    let (sp, cp) = libm::sincos(phi);
    Point::xyz(ct * sp, st * sp, cp)
}

/// Near-uniform unit directions on the sphere (spherical Fibonacci lattice).
pub fn fibonacci_directions(n: usize) -> alloc::vec::Vec<Point> {
    let golden = core::f64::consts::PI * (3.0 - libm::sqrt(5.0));
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = libm::sqrt((1.0 - z * z).max(0.0));
            let (s, c) = libm::sincos(golden * i as f64);
            Point::xyz(r * c, r * s, z)
        })
        .collect()
}
