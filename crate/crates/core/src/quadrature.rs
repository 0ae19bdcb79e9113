//! Product quadrature on the unit sphere.
//!
//! Gauss–Legendre nodes in `cos φ` times equally spaced azimuths. With
//! `p` polar and `q` azimuthal nodes the rule integrates every spherical
//! polynomial of degree `min(2p - 1, q - 1)` exactly.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{MrcError, Result};
use crate::point::Point;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes ascending.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(MrcError::invalid("Gauss-Legendre rule needs at least one node"));
    }
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if libm::fabs(dx) < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for l in 2..=n {
        let p2 = ((2 * l - 1) as f64 * x * p1 - (l - 1) as f64 * p0) / l as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Direction set with weights summing to `4π`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature {
    pub directions: Vec<Point>,
    pub weights: Vec<f64>,
    /// Highest spherical-polynomial degree integrated exactly.
    pub degree: usize,
}

impl SphereQuadrature {
    /// `polar × azimuth` product rule, directions ordered polar-major.
    pub fn product(polar: usize, azimuth: usize) -> Result<Self> {
        if azimuth == 0 {
            return Err(MrcError::invalid("azimuthal node count must be positive"));
        }
        let (z, wz) = gauss_legendre(polar)?;
        let dphi = TAU / azimuth as f64;
        let mut directions = Vec::with_capacity(polar * azimuth);
        let mut weights = Vec::with_capacity(polar * azimuth);
        for (zi, wi) in z.iter().zip(&wz) {
            let s = libm::sqrt((1.0 - zi * zi).max(0.0));
            for j in 0..azimuth {
                let (sa, ca) = libm::sincos(j as f64 * dphi);
                directions.push(Point::xyz(s * ca, s * sa, *zi));
                weights.push(wi * dphi);
            }
        }
        Ok(SphereQuadrature {
            directions,
            weights,
            degree: (2 * polar - 1).min(azimuth - 1),
        })
    }

    /// Smallest product rule exact to degree `degree`.
    pub fn exact_to(degree: usize) -> Self {
        SphereQuadrature::product(degree / 2 + 1, degree + 1).expect("positive node counts")
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}
