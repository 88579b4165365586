//! Coordinate systems on the unit sphere and spherical windows.
//!
//! Three point representations are supported: spherical `(theta, phi)` with
//! colatitude `theta` in `[0, pi]` and azimuth `phi` in `[0, 2*pi)`;
//! geographic `(lon, lat)` with longitude in `(-pi, pi]` and latitude in
//! `[-pi/2, pi/2]`; and Cartesian unit vectors. Windows are convex geodesic
//! polygons or discs; membership is boundary-inclusive.

use crate::healpix::{PixelId, Resolution, Scheme};
use crate::{Error, Result};
use std::f64::consts::{PI, TAU};

/// Tolerance used for boundary-inclusive window membership and for the
/// degeneracy checks at window construction.
const PLANE_EPS: f64 = 1e-12;

/// Maximum number of polygon vertices accepted at construction.
pub const MAX_POLYGON_VERTICES: usize = 64;

/// A point in spherical coordinates: colatitude `theta` in `[0, pi]`,
/// azimuth `phi` normalized to `[0, 2*pi)`. Poles store `phi = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphCoord {
    theta: f64,
    phi: f64,
}

impl SphCoord {
    /// Validates `theta` and normalizes `phi` by mod `2*pi`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidCoord(format!("theta {theta} not in [0, pi]")));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidCoord(format!("phi {phi} not finite")));
        }
        let phi = if theta == 0.0 || theta == PI {
            0.0
        } else {
            normalize_two_pi(phi)
        };
        Ok(SphCoord { theta, phi })
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn phi(self) -> f64 {
        self.phi
    }
}

/// A point in geographic coordinates: longitude in `(-pi, pi]`, latitude in
/// `[-pi/2, pi/2]`, both radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoCoord {
    lon: f64,
    lat: f64,
}

impl GeoCoord {
    /// Validates `lat`; `lon` may be any finite value and is normalized by
    /// mod `2*pi` into `(-pi, pi]`.
    pub fn new(lon: f64, lat: f64) -> Result<Self> {
        if !lat.is_finite() || lat.abs() > PI / 2.0 {
            return Err(Error::InvalidCoord(format!(
                "lat {lat} not in [-pi/2, pi/2]"
            )));
        }
        if !lon.is_finite() {
            return Err(Error::InvalidCoord(format!("lon {lon} not finite")));
        }
        let mut lon = normalize_two_pi(lon);
        if lon > PI {
            lon -= TAU;
        }
        Ok(GeoCoord { lon, lat })
    }

    pub fn lon(self) -> f64 {
        self.lon
    }

    pub fn lat(self) -> f64 {
        self.lat
    }
}

/// A Cartesian vector; unit length wherever it stands for a sphere point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartCoord {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CartCoord {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        CartCoord { x, y, z }
    }

    pub fn dot(self, o: CartCoord) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: CartCoord) -> CartCoord {
        CartCoord {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Result<CartCoord> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(CartCoord {
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        })
    }
}

fn normalize_two_pi(v: f64) -> f64 {
    let r = v.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `x = sin(theta) cos(phi), y = sin(theta) sin(phi), z = cos(theta)`.
pub fn sph2car(a: SphCoord) -> CartCoord {
    let st = a.theta.sin();
    CartCoord {
        x: st * a.phi.cos(),
        y: st * a.phi.sin(),
        z: a.theta.cos(),
    }
}

/// Inverse of [`sph2car`] up to normalization; errors on the zero vector.
pub fn car2sph(c: CartCoord) -> Result<SphCoord> {
    let u = c.normalized()?;
    let theta = u.z.clamp(-1.0, 1.0).acos();
    let phi = u.y.atan2(u.x);
    SphCoord::new(theta, phi)
}

/// Geographic to spherical: `theta = pi/2 - lat`, `phi = lon mod 2*pi`.
pub fn geo2sph(g: GeoCoord) -> SphCoord {
    let theta = (PI / 2.0 - g.lat).clamp(0.0, PI);
    SphCoord::new(theta, g.lon).expect("valid by construction")
}

/// Spherical to geographic: `lat = pi/2 - theta`; `phi` in `(pi, 2*pi)`
/// folds to the negative longitudes.
pub fn sph2geo(a: SphCoord) -> GeoCoord {
    let lat = (PI / 2.0 - a.theta).clamp(-PI / 2.0, PI / 2.0);
    let lon = if a.phi > PI { a.phi - TAU } else { a.phi };
    GeoCoord { lon, lat }
}

/// Angular (great-circle) distance between two points, in `[0, pi]`.
pub fn geodesic(a: SphCoord, b: SphCoord) -> f64 {
    sph2car(a).dot(sph2car(b)).clamp(-1.0, 1.0).acos()
}

/// A region of the sphere: a convex geodesic polygon or a disc.
///
/// Polygon vertices are stored counter-clockwise as seen from outside the
/// sphere; construction normalizes the orientation and validates convexity.
/// Membership is boundary-inclusive with a `1e-12` plane tolerance.
#[derive(Debug, Clone)]
pub enum SphericalWindow {
    Polygon {
        vertices: Vec<SphCoord>,
        /// Unit inward normal of each edge's great-circle plane.
        normals: Vec<CartCoord>,
    },
    Disc {
        center: SphCoord,
        radius: f64,
    },
}

impl SphericalWindow {
    /// Builds a convex polygon window from at least 3 (at most 64) vertices.
    pub fn polygon(vertices: Vec<SphCoord>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidWindow(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.len() > MAX_POLYGON_VERTICES {
            return Err(Error::InvalidWindow(format!(
                "polygon supports at most {MAX_POLYGON_VERTICES} vertices, got {}",
                vertices.len()
            )));
        }
        let v: Vec<CartCoord> = vertices.iter().map(|&a| sph2car(a)).collect();
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                let d = v[i].dot(v[j]);
                if d > 1.0 - PLANE_EPS {
                    return Err(Error::InvalidWindow(format!(
                        "vertices {i} and {j} coincide"
                    )));
                }
                if d < -1.0 + PLANE_EPS {
                    return Err(Error::InvalidWindow(format!(
                        "vertices {i} and {j} are antipodal"
                    )));
                }
            }
        }
        // Orientation from the sign of the first corner's triple product;
        // normalize to counter-clockwise seen from outside.
        let det = v[0].dot(v[1].cross(v[2]));
        if det.abs() < PLANE_EPS {
            return Err(Error::InvalidWindow(
                "first three vertices lie on one great circle".into(),
            ));
        }
        let (vertices, v): (Vec<SphCoord>, Vec<CartCoord>) = if det < 0.0 {
            (
                vertices.into_iter().rev().collect(),
                v.into_iter().rev().collect(),
            )
        } else {
            (vertices, v)
        };
        let n = v.len();
        let mut normals = Vec::with_capacity(n);
        for i in 0..n {
            let normal = v[i]
                .cross(v[(i + 1) % n])
                .normalized()
                .map_err(|_| Error::InvalidWindow(format!("edge {i} is degenerate")))?;
            normals.push(normal);
        }
        // Convexity: every vertex lies in the closed half-space of every edge.
        for (e, normal) in normals.iter().enumerate() {
            for (k, vert) in v.iter().enumerate() {
                if normal.dot(*vert) < -PLANE_EPS {
                    return Err(Error::InvalidWindow(format!(
                        "not convex: vertex {k} is outside edge {e}"
                    )));
                }
            }
        }
        Ok(SphericalWindow::Polygon { vertices, normals })
    }

    /// Builds a disc window with angular radius in `(0, pi)`.
    pub fn disc(center: SphCoord, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 || radius >= PI {
            return Err(Error::InvalidWindow(format!(
                "disc radius {radius} not in (0, pi)"
            )));
        }
        Ok(SphericalWindow::Disc { center, radius })
    }

    /// Boundary-inclusive membership test.
    pub fn contains(&self, a: SphCoord) -> bool {
        match self {
            SphericalWindow::Polygon { normals, .. } => {
                let x = sph2car(a);
                normals.iter().all(|n| n.dot(x) >= -PLANE_EPS)
            }
            SphericalWindow::Disc { center, radius } => geodesic(*center, a) <= *radius,
        }
    }
}

/// All pixels whose centers lie inside the window, ascending in the
/// requested scheme. Scans every pixel; meant for moderate resolutions.
pub fn window_pixels(w: &SphericalWindow, res: Resolution, scheme: Scheme) -> Vec<PixelId> {
    (0..res.npix())
        .map(|i| PixelId { scheme, index: i })
        .filter(|&p| w.contains(res.pix2ang(p).expect("index in range")))
        .collect()
}

/// Direction of the vector sum of the inputs; errors when the resultant is
/// (numerically) zero.
pub fn sample_mean_direction(points: &[CartCoord]) -> Result<CartCoord> {
    if points.is_empty() {
        return Err(Error::EmptyInput(
            "sample_mean_direction needs points".into(),
        ));
    }
    let mut sum = CartCoord::new(0.0, 0.0, 0.0);
    for p in points {
        sum.x += p.x;
        sum.y += p.y;
        sum.z += p.z;
    }
    if sum.norm() <= PLANE_EPS {
        return Err(Error::ZeroResultant);
    }
    sum.normalized().map_err(|_| Error::ZeroResultant)
}
