//! HEALPix-indexed spherical data engine.
//!
//! The sphere is tessellated into `12 * nside^2` equal-area pixels whose
//! centers lie on `4 * nside - 1` rings of constant latitude (the HEALPix
//! scheme). On top of the pixelation this crate provides:
//!
//! - [`healpix`]: index arithmetic for the ring and nested ordering schemes,
//!   angle/pixel transforms, hierarchy and neighbor queries;
//! - [`geom`]: spherical/geographic/Cartesian coordinate conversions,
//!   geodesic distance, and convex spherical windows (polygons and discs);
//! - [`dataset`]: sparse pixel-indexed data tables, CSV ingestion for
//!   geo-referenced and Cartesian point data, window subsetting, and a
//!   line-oriented text persistence format (`sphds v1`);
//! - [`stats`]: means, exceedance probabilities, extrema, histogram entropy,
//!   excursion-set areas, minimum pairwise geodesic distance, angular
//!   marginal histograms and directional asymmetry ratios;
//! - [`render`]: equirectangular raster export to binary PPM.
//!
//! The `sphds` binary exposes the batch pipeline (`convert`, `info`, `stats`,
//! `extrema`, `hist`, `render`) on top of these modules.

pub mod dataset;
pub mod fmt;
pub mod geom;
pub mod healpix;
pub mod render;
pub mod stats;

pub use dataset::{DedupPolicy, PointTable, SphericalDataset};
pub use geom::{CartCoord, GeoCoord, SphCoord, SphericalWindow};
pub use healpix::{PixelId, Resolution, Scheme};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid nside {0}: must be a power of two in [1, 2^29]")]
    InvalidNside(u64),
    #[error("resolution level {0} out of range (max {max})", max = healpix::MAX_LEVEL)]
    LevelOutOfRange(u8),
    #[error("ring {ring} out of range 1..={nrings}")]
    RingOutOfRange { ring: u64, nrings: u64 },
    #[error("pixel index {index} out of range (npix = {npix})")]
    PixelOutOfRange { index: u64, npix: u64 },
    #[error("expected {expected} ordering, got {got}")]
    WrongScheme { expected: Scheme, got: Scheme },
    #[error("base pixel has no parent")]
    NoParent,
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("empty selection: {0}")]
    EmptySelection(String),
    #[error("not enough rows: needed {needed}, have {available}")]
    InsufficientRows { needed: usize, available: usize },
    #[error("duplicate pixel {pix}")]
    DuplicatePixel { pix: u64 },
    #[error("invalid coordinate: {0}")]
    InvalidCoord(String),
    #[error("zero-length vector cannot be normalized")]
    ZeroVector,
    #[error("zero resultant: mean direction undefined")]
    ZeroResultant,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("malformed dataset file: {0}")]
    MalformedFile(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
