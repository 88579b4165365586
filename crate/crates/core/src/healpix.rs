//! HEALPix pixelation: index arithmetic, ring geometry, ordering-scheme
//! conversion, hierarchy and neighbor queries, and angle/pixel transforms.
//!
//! The sphere is divided into 12 base pixels (4 north polar, 4 equatorial,
//! 4 south polar); at level `j` each base pixel is subdivided into
//! `nside^2 = 4^j` children, for `npix = 12 * nside^2` pixels in total whose
//! centers sit on `4 * nside - 1` iso-latitude rings.
//!
//! Two orderings index the same geometric pixels:
//!
//! - **ring**: indices increase along rings of constant latitude (in the
//!   direction of increasing azimuth) and then from north to south;
//! - **nested**: the four children of every pixel occupy consecutive
//!   indices, so each base pixel owns a contiguous block of `nside^2`
//!   indices and bit de-interleaving recovers intra-face coordinates.
//!
//! All indices are 0-based. The base faces are numbered 0-3 (north), 4-7
//! (equatorial), 8-11 (south); face `f` of the north row is centered on
//! azimuth `(2f + 1) * pi / 4`, equatorial face `4 + c` on `c * pi / 2`.

use crate::geom::SphCoord;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Highest supported resolution level (nside `2^29`); keeps `npix` and all
/// intermediate index arithmetic comfortably inside 64 bits.
pub const MAX_LEVEL: u8 = 29;

/// Pixel ordering scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Ring,
    Nested,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Ring => "ring",
            Scheme::Nested => "nested",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ring" => Ok(Scheme::Ring),
            "nested" => Ok(Scheme::Nested),
            other => Err(Error::MalformedFile(format!(
                "unknown ordering {other:?} (expected \"ring\" or \"nested\")"
            ))),
        }
    }
}

/// A pixel index tagged with the ordering scheme it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PixelId {
    pub scheme: Scheme,
    pub index: u64,
}

impl PixelId {
    pub fn ring(index: u64) -> Self {
        PixelId {
            scheme: Scheme::Ring,
            index,
        }
    }

    pub fn nested(index: u64) -> Self {
        PixelId {
            scheme: Scheme::Nested,
            index,
        }
    }
}

/// Geometry of one iso-latitude ring.
///
/// Rings are numbered 1 (closest to the north pole) through `4 * nside - 1`.
/// The north polar cap holds rings `1..nside` with `4 * ring` pixels each;
/// the equatorial belt holds rings `nside..=3 * nside` with `4 * nside`
/// pixels each; the south cap mirrors the north.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingInfo {
    /// 1-based ring number counted from the north pole.
    pub ring: u64,
    /// Number of pixels on the ring.
    pub count: u64,
    /// Cosine of the ring's colatitude.
    pub z: f64,
    /// Ring-scheme index of the ring's first pixel.
    pub first_index: u64,
    /// Whether pixel centers are offset by half a slot in azimuth.
    pub phase_shift: bool,
}

/// A HEALPix resolution: level `j` with `nside = 2^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Resolution {
    level: u8,
}

/// Result of [`auto_resolution`]: the chosen resolution plus whether it
/// actually separates every input point into its own pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutoResolution {
    pub res: Resolution,
    pub separated: bool,
}

// Ring (in units of nside) and azimuth (in units of pi/4) of each base
// face center; faces 0-3 north, 4-7 equatorial, 8-11 south.
const FACE_RING: [i64; 12] = [2, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4];
const FACE_PHI: [i64; 12] = [1, 3, 5, 7, 0, 2, 4, 6, 1, 3, 5, 7];

impl Resolution {
    /// Builds the resolution for a given level `j` (`nside = 2^j`).
    pub fn from_level(level: u8) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::LevelOutOfRange(level));
        }
        Ok(Resolution { level })
    }

    /// Builds the resolution for a given `nside`, which must be a power of
    /// two in `[1, 2^29]`.
    pub fn from_nside(nside: u64) -> Result<Self> {
        if nside == 0 || !nside.is_power_of_two() || nside > (1 << MAX_LEVEL) {
            return Err(Error::InvalidNside(nside));
        }
        Ok(Resolution {
            level: nside.trailing_zeros() as u8,
        })
    }

    pub fn level(self) -> u8 {
        self.level
    }

    pub fn nside(self) -> u64 {
        1u64 << self.level
    }

    /// Total pixel count `12 * nside^2`.
    pub fn npix(self) -> u64 {
        12 * self.nside() * self.nside()
    }

    /// Number of iso-latitude rings `4 * nside - 1`.
    pub fn nrings(self) -> u64 {
        4 * self.nside() - 1
    }

    /// Solid angle of one pixel in steradians, `4 * pi / npix`; identical
    /// for every pixel.
    pub fn pixel_area(self) -> f64 {
        4.0 * PI / self.npix() as f64
    }

    /// Pixels in one polar cap (rings `1..nside`), `2 * nside * (nside - 1)`.
    fn ncap(self) -> u64 {
        2 * self.nside() * (self.nside() - 1)
    }

    fn check_pix(self, p: PixelId, expected: Scheme) -> Result<u64> {
        if p.scheme != expected {
            return Err(Error::WrongScheme {
                expected,
                got: p.scheme,
            });
        }
        if p.index >= self.npix() {
            return Err(Error::PixelOutOfRange {
                index: p.index,
                npix: self.npix(),
            });
        }
        Ok(p.index)
    }

    /// Cosine of the colatitude of ring `i` (1-based). Shared by
    /// [`Resolution::ring_info`] and the transforms so every pixel on a ring
    /// reports a bitwise-identical `z`.
    fn ring_z(self, ring: u64) -> f64 {
        let ns = self.nside();
        if ring < ns {
            // north polar cap
            1.0 - (ring * ring) as f64 / (3 * ns * ns) as f64
        } else if ring <= 3 * ns {
            // equatorial belt; exact 0 on the equator ring
            (2 * ns) as f64 * (1.0 - ring as f64 / (2 * ns) as f64) * (2.0 / (3.0 * ns as f64))
        } else {
            // south polar cap, mirror of the north
            let rs = 4 * ns - ring;
            -(1.0 - (rs * rs) as f64 / (3 * ns * ns) as f64)
        }
    }

    /// Ring geometry for `ring` in `1..=nrings`.
    pub fn ring_info(self, ring: u64) -> Result<RingInfo> {
        let ns = self.nside();
        if ring == 0 || ring > self.nrings() {
            return Err(Error::RingOutOfRange {
                ring,
                nrings: self.nrings(),
            });
        }
        let (count, first_index, phase_shift) = if ring < ns {
            (4 * ring, 2 * ring * (ring - 1), true)
        } else if ring <= 3 * ns {
            // Belt rings alternate phase; the two boundary rings (ring == nside
            // and ring == 3 * nside) line up with the cap pattern.
            (
                4 * ns,
                self.ncap() + (ring - ns) * 4 * ns,
                (ring + ns).is_multiple_of(2),
            )
        } else {
            let rs = 4 * ns - ring;
            (4 * rs, self.npix() - 2 * rs * (rs + 1), true)
        };
        Ok(RingInfo {
            ring,
            count,
            z: self.ring_z(ring),
            first_index,
            phase_shift,
        })
    }

    /// Splits a ring-scheme index into (ring number, slot on the ring).
    fn ring_decompose(self, p: u64) -> (u64, u64) {
        let ns = self.nside();
        let ncap = self.ncap();
        if p < ncap {
            let i = (1 + isqrt(1 + 2 * p)) >> 1;
            (i, p - 2 * i * (i - 1))
        } else if p < self.npix() - ncap {
            let ip = p - ncap;
            (ns + ip / (4 * ns), ip % (4 * ns))
        } else {
            // Mirror the north-cap arithmetic through the last pixel.
            let q = self.npix() - 1 - p;
            let i = (1 + isqrt(1 + 2 * q)) >> 1;
            let slot_q = q - 2 * i * (i - 1);
            (4 * ns - i, 4 * i - 1 - slot_q)
        }
    }

    /// Colatitude/azimuth of the center of ring-scheme pixel `p`.
    pub fn pix2ang_ring(self, p: PixelId) -> Result<SphCoord> {
        let idx = self.check_pix(p, Scheme::Ring)?;
        let (ring, slot) = self.ring_decompose(idx);
        let info = self.ring_info(ring)?;
        let theta = info.z.acos();
        let half = if info.phase_shift { 0.5 } else { 0.0 };
        let phi = (slot as f64 + half) * (2.0 * PI / info.count as f64);
        Ok(SphCoord::new(theta, phi).expect("pixel center is a valid coordinate"))
    }

    /// Ring-scheme pixel whose region contains the point `a`.
    ///
    /// Points exactly on a pixel border are assigned deterministically by the
    /// floor-based zone classification below, so results are reproducible
    /// across runs and platforms.
    pub fn ang2pix_ring(self, a: SphCoord) -> PixelId {
        let ns = self.nside() as i64;
        let z = a.theta().cos();
        let za = z.abs();
        // Azimuth in quadrant units, in [0, 4).
        let tt = a.phi() / (PI / 2.0);
        let index = if za <= 2.0 / 3.0 {
            // Equatorial belt: locate the ascending/descending edge lines.
            let temp1 = ns as f64 * (0.5 + tt);
            let temp2 = ns as f64 * z * 0.75;
            let jp = (temp1 - temp2).floor() as i64;
            let jm = (temp1 + temp2).floor() as i64;
            // Ring counted from z = 2/3, in 1..=2*nside+1.
            let ir = ns + 1 + jp - jm;
            let kshift = 1 - (ir & 1);
            let ip = ((jp + jm - ns + kshift + 1) / 2).rem_euclid(4 * ns);
            self.ncap() as i64 + (ir - 1) * 4 * ns + ip
        } else {
            // Polar caps.
            let tp = tt.fract();
            let tmp = ns as f64 * (3.0 * (1.0 - za)).sqrt();
            let jp = (tp * tmp) as i64;
            let jm = ((1.0 - tp) * tmp) as i64;
            // Ring counted from the nearest pole.
            let ir = jp + jm + 1;
            let ip = ((tt * ir as f64) as i64).rem_euclid(4 * ir);
            if z > 0.0 {
                2 * ir * (ir - 1) + ip
            } else {
                self.npix() as i64 - 2 * ir * (ir + 1) + ip
            }
        };
        PixelId::ring(index as u64)
    }

    /// Center of a pixel in either scheme.
    pub fn pix2ang(self, p: PixelId) -> Result<SphCoord> {
        match p.scheme {
            Scheme::Ring => self.pix2ang_ring(p),
            Scheme::Nested => self.pix2ang_ring(self.nest2ring(p)?),
        }
    }

    /// Pixel containing `a`, in the requested scheme.
    pub fn ang2pix(self, a: SphCoord, scheme: Scheme) -> PixelId {
        let ring = self.ang2pix_ring(a);
        match scheme {
            Scheme::Ring => ring,
            Scheme::Nested => self.ring2nest(ring).expect("ring index in range"),
        }
    }

    /// Converts a nested-scheme index to the ring-scheme index of the same
    /// geometric pixel.
    pub fn nest2ring(self, p: PixelId) -> Result<PixelId> {
        let idx = self.check_pix(p, Scheme::Nested)?;
        let (face, x, y) = self.nest2fxy(idx);
        Ok(PixelId::ring(self.fxy2ring(face, x, y)))
    }

    /// Converts a ring-scheme index to the nested-scheme index of the same
    /// geometric pixel.
    pub fn ring2nest(self, p: PixelId) -> Result<PixelId> {
        let idx = self.check_pix(p, Scheme::Ring)?;
        let (face, x, y) = self.ring2fxy(idx);
        Ok(PixelId::nested(self.fxy2nest(face, x, y)))
    }

    /// The four children of nested pixel `p` at level `j + 1`: `{4p .. 4p+3}`.
    pub fn children(self, p: PixelId) -> Result<[PixelId; 4]> {
        let idx = self.check_pix(p, Scheme::Nested)?;
        if self.level >= MAX_LEVEL {
            return Err(Error::LevelOutOfRange(self.level + 1));
        }
        Ok([
            PixelId::nested(4 * idx),
            PixelId::nested(4 * idx + 1),
            PixelId::nested(4 * idx + 2),
            PixelId::nested(4 * idx + 3),
        ])
    }

    /// The parent of nested pixel `p` at level `j - 1`.
    pub fn parent(self, p: PixelId) -> Result<PixelId> {
        let idx = self.check_pix(p, Scheme::Nested)?;
        if self.level == 0 {
            return Err(Error::NoParent);
        }
        Ok(PixelId::nested(idx / 4))
    }

    /// Pixels sharing an edge or a corner with nested pixel `p`, sorted by
    /// index. Interior pixels have 8 neighbors; pixels cornering one of the
    /// eight vertices where only three base faces meet have 7 (and base
    /// pixels at nside 1 have 6).
    pub fn neighbors(self, p: PixelId) -> Result<Vec<PixelId>> {
        let idx = self.check_pix(p, Scheme::Nested)?;
        let ns = self.nside() as i64;
        let (face, x, y) = self.nest2fxy(idx);
        let (x, y) = (x as i64, y as i64);
        let mut out = Vec::with_capacity(8);
        for (dx, dy) in [
            (-1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
            (1, 0),
            (1, -1),
            (0, -1),
            (-1, -1),
        ] {
            let nx = x + dx;
            let ny = y + dy;
            if nx >= 0 && nx < ns && ny >= 0 && ny < ns {
                out.push(PixelId::nested(self.fxy2nest(face, nx as u64, ny as u64)));
            } else if let Some((f, wx, wy)) = cross_face(face, nx, ny, ns) {
                out.push(PixelId::nested(self.fxy2nest(f, wx as u64, wy as u64)));
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn nest2fxy(self, p: u64) -> (u8, u64, u64) {
        let shift = 2 * self.level as u32;
        let face = (p >> shift) as u8;
        let sub = p & ((1u64 << shift) - 1);
        (face, compact_bits(sub), compact_bits(sub >> 1))
    }

    fn fxy2nest(self, face: u8, x: u64, y: u64) -> u64 {
        ((face as u64) << (2 * self.level as u32)) | spread_bits(x) | (spread_bits(y) << 1)
    }

    fn fxy2ring(self, face: u8, x: u64, y: u64) -> u64 {
        let ns = self.nside() as i64;
        let (x, y) = (x as i64, y as i64);
        // Absolute ring of the pixel: faces are anchored by their center ring.
        let jr = FACE_RING[face as usize] * ns - x - y - 1;
        let (nr, first, kshift) = if jr < ns {
            (jr, 2 * jr * (jr - 1), 0)
        } else if jr > 3 * ns {
            let nr = 4 * ns - jr;
            (nr, self.npix() as i64 - 2 * nr * (nr + 1), 0)
        } else {
            (ns, self.ncap() as i64 + (jr - ns) * 4 * ns, (jr - ns) & 1)
        };
        // 1-based slot; the division is exact (kshift fixes the parity).
        let mut jp = (FACE_PHI[face as usize] * nr + x - y + 1 + kshift) / 2;
        if jp > 4 * nr {
            jp -= 4 * nr;
        } else if jp < 1 {
            jp += 4 * nr;
        }
        (first + jp - 1) as u64
    }

    fn ring2fxy(self, p: u64) -> (u8, u64, u64) {
        let ns = self.nside() as i64;
        let ncap = self.ncap() as i64;
        let npix = self.npix() as i64;
        let p = p as i64;
        let (ring, iphi, kshift, nr, face): (i64, i64, i64, i64, i64);
        if p < ncap {
            // north polar cap: 4 * ring pixels split over faces 0..=3
            ring = (1 + isqrt(1 + 2 * p as u64) as i64) >> 1;
            iphi = p + 1 - 2 * ring * (ring - 1);
            kshift = 0;
            nr = ring;
            face = (iphi - 1) / nr;
        } else if p < npix - ncap {
            let ip = p - ncap;
            ring = ip / (4 * ns) + ns;
            iphi = ip % (4 * ns) + 1;
            kshift = (ring - ns) & 1;
            nr = ns;
            // Faces are diamonds: which of the three face rows the pixel is in
            // depends on the slot relative to the ascending/descending edges.
            let ire = ring - ns + 1;
            let irm = 2 * ns + 2 - ire;
            let ifm = (iphi - ire / 2 + ns - 1) / ns;
            let ifp = (iphi - irm / 2 + ns - 1) / ns;
            face = if ifp == ifm {
                (ifp & 3) + 4
            } else if ifp < ifm {
                ifp
            } else {
                ifm + 8
            };
        } else {
            let ip = npix - p;
            let rs = (1 + isqrt((2 * ip - 1) as u64) as i64) >> 1;
            iphi = 4 * rs + 1 - (ip - 2 * rs * (rs - 1));
            kshift = 0;
            nr = rs;
            face = 8 + (iphi - 1) / nr;
            ring = 4 * ns - rs;
        }
        let irt = ring - FACE_RING[face as usize] * ns + 1;
        let mut ipt = 2 * iphi - FACE_PHI[face as usize] * nr - kshift - 1;
        if ipt >= 2 * ns {
            ipt -= 8 * ns;
        }
        let x = (ipt - irt) / 2;
        let y = -(ipt + irt) / 2;
        (face as u8, x as u64, y as u64)
    }
}

/// Smallest resolution (up to `j_max`) at which every point maps to its own
/// pixel. If none separates the points, returns `j_max` with
/// `separated = false`.
pub fn auto_resolution(points: &[SphCoord], j_max: u8) -> Result<AutoResolution> {
    if points.is_empty() {
        return Err(Error::EmptyInput(
            "auto_resolution needs at least one point".into(),
        ));
    }
    let j_max = j_max.min(MAX_LEVEL);
    for level in 0..=j_max {
        let res = Resolution::from_level(level)?;
        let mut pix: Vec<u64> = points.iter().map(|&a| res.ang2pix_ring(a).index).collect();
        pix.sort_unstable();
        if pix.windows(2).all(|w| w[0] != w[1]) {
            return Ok(AutoResolution {
                res,
                separated: true,
            });
        }
    }
    Ok(AutoResolution {
        res: Resolution::from_level(j_max)?,
        separated: false,
    })
}

/// Integer square root, exact for the index ranges used here.
fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Spreads the low 32 bits of `v` onto the even bit positions.
fn spread_bits(mut v: u64) -> u64 {
    v &= 0x0000_0000_ffff_ffff;
    v = (v | (v << 16)) & 0x0000_ffff_0000_ffff;
    v = (v | (v << 8)) & 0x00ff_00ff_00ff_00ff;
    v = (v | (v << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    v = (v | (v << 2)) & 0x3333_3333_3333_3333;
    v = (v | (v << 1)) & 0x5555_5555_5555_5555;
    v
}

/// Inverse of [`spread_bits`]: gathers the even bit positions.
fn compact_bits(mut v: u64) -> u64 {
    v &= 0x5555_5555_5555_5555;
    v = (v | (v >> 1)) & 0x3333_3333_3333_3333;
    v = (v | (v >> 2)) & 0x0f0f_0f0f_0f0f_0f0f;
    v = (v | (v >> 4)) & 0x00ff_00ff_00ff_00ff;
    v = (v | (v >> 8)) & 0x0000_ffff_0000_ffff;
    v = (v | (v >> 16)) & 0x0000_0000_ffff_ffff;
    v
}

/// Maps an out-of-face step to the adjacent face and local coordinates.
///
/// `(nx, ny)` is the tentative position after stepping from a cell of `face`,
/// with one or both coordinates outside `[0, ns)`. Returns `None` for the
/// diagonal steps across the eight vertices where only three faces meet.
fn cross_face(face: u8, nx: i64, ny: i64, ns: i64) -> Option<(u8, i64, i64)> {
    let over_x = nx >= ns;
    let under_x = nx < 0;
    let over_y = ny >= ns;
    let under_y = ny < 0;
    let c = (face & 3) as i64;
    let north = |k: i64| ((c + k).rem_euclid(4)) as u8;
    let eq = |k: i64| (4 + (c + k).rem_euclid(4)) as u8;
    let south = |k: i64| (8 + (c + k).rem_euclid(4)) as u8;
    match face >> 2 {
        // north faces
        0 => match (under_x, over_x, under_y, over_y) {
            (false, true, false, false) => Some((north(1), ny, 2 * ns - 1 - nx)),
            (false, false, false, true) => Some((north(3), 2 * ns - 1 - ny, nx)),
            (true, false, false, false) => Some((eq(0), nx + ns, ny)),
            (false, false, true, false) => Some((eq(1), nx, ny + ns)),
            (false, true, false, true) => Some((north(2), 2 * ns - 1 - nx, 2 * ns - 1 - ny)),
            (true, false, true, false) => Some((south(0), nx + ns, ny + ns)),
            _ => None,
        },
        // equatorial faces
        1 => match (under_x, over_x, under_y, over_y) {
            (false, true, false, false) => Some((north(0), nx - ns, ny)),
            (false, false, false, true) => Some((north(3), nx, ny - ns)),
            (true, false, false, false) => Some((south(3), nx + ns, ny)),
            (false, false, true, false) => Some((south(0), nx, ny + ns)),
            (false, true, true, false) => Some((eq(1), nx - ns, ny + ns)),
            (true, false, false, true) => Some((eq(3), nx + ns, ny - ns)),
            _ => None,
        },
        // south faces
        _ => match (under_x, over_x, under_y, over_y) {
            (false, true, false, false) => Some((eq(1), nx - ns, ny)),
            (false, false, false, true) => Some((eq(0), nx, ny - ns)),
            (true, false, false, false) => Some((south(3), ny, -(nx + 1))),
            (false, false, true, false) => Some((south(1), -(ny + 1), nx)),
            (true, false, true, false) => Some((south(2), -(nx + 1), -(ny + 1))),
            (false, true, false, true) => Some((north(0), nx - ns, ny - ns)),
            _ => None,
        },
    }
}
