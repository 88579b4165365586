//! Sparse pixel-indexed data tables and their ingestion pipelines.
//!
//! A [`PointTable`] is the pre-pixelation form: rows of spherical
//! coordinates with one or more named value columns. [`from_points`] maps
//! it onto a [`SphericalDataset`] at a fixed resolution, resolving pixel
//! collisions per the [`DedupPolicy`]. Datasets are immutable after
//! construction, sorted by pixel index, and persist to a line-oriented
//! text format:
//!
//! ```text
//! sphds v1 nside=<int> ordering=<ring|nested> columns=<name,name,...>
//! <pix> <v1> <v2> ...
//! ```
//!
//! with pixel indices ascending and values in shortest round-trip decimal.

use crate::geom::{car2sph, geo2sph, CartCoord, GeoCoord, SphCoord, SphericalWindow};
use crate::healpix::{auto_resolution, AutoResolution, PixelId, Resolution, Scheme};
use crate::{Error, Result};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// Sentinel numeric value treated as missing during CSV ingestion.
pub const MISSING_SENTINEL: f64 = -9999.0;

/// What to do when two input rows land in the same pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DedupPolicy {
    /// Keep the first occurrence in input order, drop the rest.
    KeepFirst,
    /// Raise an error naming the colliding pixel.
    Fail,
}

/// Rows of (spherical coordinate, values) awaiting pixelation.
#[derive(Debug, Clone)]
pub struct PointTable {
    columns: Vec<String>,
    coords: Vec<SphCoord>,
    /// Column-major values; `values[c][r]` is row `r` of column `c`.
    values: Vec<Vec<f64>>,
    /// Free-form note about where the rows came from.
    pub provenance: String,
}

impl PointTable {
    pub fn new(columns: Vec<String>) -> Result<Self> {
        for name in &columns {
            validate_column_name(name)?;
        }
        let values = vec![Vec::new(); columns.len()];
        Ok(PointTable {
            columns,
            coords: Vec::new(),
            values,
            provenance: String::new(),
        })
    }

    pub fn push(&mut self, coord: SphCoord, row: &[f64]) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::MalformedFile(format!(
                "row arity {} does not match {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.coords.push(coord);
        for (col, &v) in self.values.iter_mut().zip(row) {
            col.push(v);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[SphCoord] {
        &self.coords
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
}

fn validate_column_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',') {
        return Err(Error::MalformedFile(format!(
            "column name {name:?} must be non-empty without spaces or commas"
        )));
    }
    Ok(())
}

/// A pixel-indexed table at a fixed resolution and ordering.
///
/// Pixel indices are strictly increasing (one row per pixel) and every
/// column has one entry per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalDataset {
    res: Resolution,
    scheme: Scheme,
    columns: Vec<String>,
    pix: Vec<u64>,
    values: Vec<Vec<f64>>,
}

impl SphericalDataset {
    /// Validating constructor used by `load` and by tests; `pix` must be
    /// strictly increasing and in range.
    pub fn new(
        res: Resolution,
        scheme: Scheme,
        columns: Vec<String>,
        pix: Vec<u64>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self> {
        for name in &columns {
            validate_column_name(name)?;
        }
        if values.len() != columns.len() {
            return Err(Error::MalformedFile(format!(
                "{} value columns for {} names",
                values.len(),
                columns.len()
            )));
        }
        for col in &values {
            if col.len() != pix.len() {
                return Err(Error::MalformedFile("ragged value columns".into()));
            }
        }
        if let Some(&last) = pix.last() {
            if last >= res.npix() {
                return Err(Error::PixelOutOfRange {
                    index: last,
                    npix: res.npix(),
                });
            }
        }
        if !pix.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::MalformedFile(
                "pixel indices must be strictly increasing".into(),
            ));
        }
        Ok(SphericalDataset {
            res,
            scheme,
            columns,
            pix,
            values,
        })
    }

    pub fn res(&self) -> Resolution {
        self.res
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.pix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pix.is_empty()
    }

    pub fn pix(&self) -> &[u64] {
        &self.pix
    }

    pub fn pixel_id(&self, row: usize) -> PixelId {
        PixelId {
            scheme: self.scheme,
            index: self.pix[row],
        }
    }

    pub fn column_names(&self) -> &[String] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|i| self.values[i].as_slice())
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Center coordinate of the pixel backing `row`.
    pub fn center(&self, row: usize) -> SphCoord {
        self.res
            .pix2ang(self.pixel_id(row))
            .expect("stored index is valid")
    }

    /// Rows whose pixel centers lie inside the window; resolution, ordering
    /// and columns are preserved. The result may be empty.
    pub fn subset(&self, w: &SphericalWindow) -> SphericalDataset {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&r| w.contains(self.center(r)))
            .collect();
        let pix = keep.iter().map(|&r| self.pix[r]).collect();
        let values = self
            .values
            .iter()
            .map(|col| keep.iter().map(|&r| col[r]).collect())
            .collect();
        SphericalDataset {
            res: self.res,
            scheme: self.scheme,
            columns: self.columns.clone(),
            pix,
            values,
        }
    }

    /// Writes the `sphds v1` text format; `load` restores it bit-exactly
    /// for finite values.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut out = BufWriter::new(file);
        writeln!(
            out,
            "sphds v1 nside={} ordering={} columns={}",
            self.res.nside(),
            self.scheme,
            self.columns.join(",")
        )?;
        for row in 0..self.len() {
            write!(out, "{}", self.pix[row])?;
            for col in &self.values {
                write!(out, " {}", col[row])?;
            }
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedFile("empty file".into()))??;
        let (res, scheme, columns) = parse_header(&header)?;
        let mut pix = Vec::new();
        let mut values: Vec<Vec<f64>> = vec![Vec::new(); columns.len()];
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_ascii_whitespace();
            let p: u64 = fields
                .next()
                .unwrap()
                .parse()
                .map_err(|_| Error::MalformedFile(format!("line {}: bad pixel", lineno + 2)))?;
            pix.push(p);
            for col in values.iter_mut() {
                let field = fields.next().ok_or_else(|| {
                    Error::MalformedFile(format!("line {}: missing value", lineno + 2))
                })?;
                let v: f64 = field.parse().map_err(|_| {
                    Error::MalformedFile(format!("line {}: bad value {field:?}", lineno + 2))
                })?;
                col.push(v);
            }
            if fields.next().is_some() {
                return Err(Error::MalformedFile(format!(
                    "line {}: extra fields",
                    lineno + 2
                )));
            }
        }
        SphericalDataset::new(res, scheme, columns, pix, values)
    }
}

fn parse_header(header: &str) -> Result<(Resolution, Scheme, Vec<String>)> {
    let mut parts = header.split_ascii_whitespace();
    if parts.next() != Some("sphds") || parts.next() != Some("v1") {
        return Err(Error::MalformedFile(
            "header must start with \"sphds v1\"".into(),
        ));
    }
    let (mut nside, mut ordering, mut columns) = (None, None, None);
    for part in parts {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::MalformedFile(format!("bad header field {part:?}")))?;
        match key {
            "nside" => {
                let n: u64 = value
                    .parse()
                    .map_err(|_| Error::MalformedFile(format!("bad nside {value:?}")))?;
                nside = Some(Resolution::from_nside(n).map_err(|_| {
                    Error::MalformedFile(format!("nside {n} is not a valid power of two"))
                })?);
            }
            "ordering" => ordering = Some(value.parse::<Scheme>()?),
            "columns" => {
                let names: Vec<String> = value.split(',').map(str::to_string).collect();
                for name in &names {
                    validate_column_name(name)?;
                }
                columns = Some(names);
            }
            other => {
                return Err(Error::MalformedFile(format!(
                    "unknown header key {other:?}"
                )));
            }
        }
    }
    match (nside, ordering, columns) {
        (Some(r), Some(s), Some(c)) => Ok((r, s, c)),
        _ => Err(Error::MalformedFile(
            "header needs nside, ordering and columns".into(),
        )),
    }
}

/// Pixelates a point table at a fixed resolution.
///
/// Each point maps through `ang2pix`; with [`DedupPolicy::KeepFirst`] later
/// rows whose pixel is already occupied are dropped (first occurrence in
/// input order wins) and with [`DedupPolicy::Fail`] a collision is an
/// error. Rows come out sorted by pixel index.
pub fn from_points(
    table: &PointTable,
    res: Resolution,
    scheme: Scheme,
    dedup: DedupPolicy,
) -> Result<SphericalDataset> {
    if table.is_empty() {
        return Err(Error::EmptyInput("no points to pixelate".into()));
    }
    let mut keyed: Vec<(u64, usize)> = table
        .coords
        .iter()
        .enumerate()
        .map(|(row, &a)| (res.ang2pix(a, scheme).index, row))
        .collect();
    // Stable sort keeps input order within a pixel, so the first element of
    // every run is the earliest occurrence.
    keyed.sort_by_key(|&(pix, _)| pix);
    let mut pix = Vec::with_capacity(keyed.len());
    let mut rows = Vec::with_capacity(keyed.len());
    for &(p, row) in &keyed {
        if pix.last() == Some(&p) {
            match dedup {
                DedupPolicy::KeepFirst => continue,
                DedupPolicy::Fail => return Err(Error::DuplicatePixel { pix: p }),
            }
        }
        pix.push(p);
        rows.push(row);
    }
    let values = table
        .values
        .iter()
        .map(|col| rows.iter().map(|&r| col[r]).collect())
        .collect();
    SphericalDataset::new(res, scheme, table.columns.clone(), pix, values)
}

/// Pixelates at the smallest resolution (up to `j_max`) separating all
/// points; also reports whether separation succeeded.
pub fn from_points_auto(
    table: &PointTable,
    j_max: u8,
    scheme: Scheme,
    dedup: DedupPolicy,
) -> Result<(SphericalDataset, AutoResolution)> {
    let auto = auto_resolution(&table.coords, j_max)?;
    let ds = from_points(table, auto.res, scheme, dedup)?;
    Ok((ds, auto))
}

/// Angle unit of CSV coordinate columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleUnit {
    Degrees,
    Radians,
}

impl AngleUnit {
    fn to_radians(self, v: f64) -> f64 {
        match self {
            AngleUnit::Degrees => v.to_radians(),
            AngleUnit::Radians => v,
        }
    }
}

/// Where to put the center when ingesting Cartesian surface points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CenterSpec {
    /// Subtract the per-column mean of the surviving rows.
    Centroid,
    Explicit(CartCoord),
}

/// Outcome of a CSV ingestion: the table plus how many raw rows were
/// dropped (missing fields, sentinels, unparseable or out-of-range values).
#[derive(Debug)]
pub struct Ingest {
    pub table: PointTable,
    pub dropped: usize,
}

struct CsvMatrix {
    by_column: Vec<Vec<Option<f64>>>,
    rows: usize,
}

/// Reads the named columns of an RFC-4180 style CSV with a header line.
/// Empty, unparseable, non-finite and sentinel fields come back as `None`.
fn read_csv_columns(path: &Path, names: &[&str]) -> Result<CsvMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let mut idx = Vec::with_capacity(names.len());
    for name in names {
        let pos = headers
            .iter()
            .position(|h| h == *name)
            .ok_or_else(|| Error::UnknownColumn((*name).to_string()))?;
        idx.push(pos);
    }
    let mut by_column: Vec<Vec<Option<f64>>> = vec![Vec::new(); names.len()];
    let mut rows = 0usize;
    for record in reader.records() {
        let record = record?;
        rows += 1;
        for (slot, &pos) in idx.iter().enumerate() {
            let parsed = record
                .get(pos)
                .filter(|f| !f.is_empty())
                .and_then(|f| f.parse::<f64>().ok())
                .filter(|v| v.is_finite() && *v != MISSING_SENTINEL);
            by_column[slot].push(parsed);
        }
    }
    Ok(CsvMatrix { by_column, rows })
}

/// Ingests geo-referenced CSV rows (longitude, latitude, value columns).
///
/// Rows with missing, unparseable, non-finite or sentinel (`-9999`) fields
/// are dropped, as are rows whose latitude falls outside `[-90, 90]`
/// degrees. `lon_offset` (radians) is added to the longitude before
/// normalization; the spherical coordinate comes from `geo2sph`.
pub fn ingest_geo_csv(
    path: impl AsRef<Path>,
    lon_col: &str,
    lat_col: &str,
    value_cols: &[&str],
    unit: AngleUnit,
    lon_offset: f64,
) -> Result<Ingest> {
    let path = path.as_ref();
    let mut names = vec![lon_col, lat_col];
    names.extend_from_slice(value_cols);
    let matrix = read_csv_columns(path, &names)?;
    let mut table = PointTable::new(value_cols.iter().map(|s| s.to_string()).collect())?;
    table.provenance = path.display().to_string();
    let mut dropped = 0usize;
    let mut row_values = vec![0.0; value_cols.len()];
    'rows: for r in 0..matrix.rows {
        for (slot, col) in matrix.by_column.iter().enumerate() {
            match col[r] {
                Some(v) if slot >= 2 => row_values[slot - 2] = v,
                Some(_) => {}
                None => {
                    dropped += 1;
                    continue 'rows;
                }
            }
        }
        let lon = unit.to_radians(matrix.by_column[0][r].unwrap()) + lon_offset;
        let lat = unit.to_radians(matrix.by_column[1][r].unwrap());
        let Ok(geo) = GeoCoord::new(lon, lat) else {
            dropped += 1;
            continue;
        };
        table.push(geo2sph(geo), &row_values)?;
    }
    if table.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no usable rows in {}",
            path.display()
        )));
    }
    Ok(Ingest { table, dropped })
}

/// Ingests spherical CSV rows (colatitude, azimuth, value columns).
pub fn ingest_sph_csv(
    path: impl AsRef<Path>,
    theta_col: &str,
    phi_col: &str,
    value_cols: &[&str],
    unit: AngleUnit,
) -> Result<Ingest> {
    let path = path.as_ref();
    let mut names = vec![theta_col, phi_col];
    names.extend_from_slice(value_cols);
    let matrix = read_csv_columns(path, &names)?;
    let mut table = PointTable::new(value_cols.iter().map(|s| s.to_string()).collect())?;
    table.provenance = path.display().to_string();
    let mut dropped = 0usize;
    let mut row_values = vec![0.0; value_cols.len()];
    'rows: for r in 0..matrix.rows {
        for (slot, col) in matrix.by_column.iter().enumerate() {
            match col[r] {
                Some(v) if slot >= 2 => row_values[slot - 2] = v,
                Some(_) => {}
                None => {
                    dropped += 1;
                    continue 'rows;
                }
            }
        }
        let theta = unit.to_radians(matrix.by_column[0][r].unwrap());
        let phi = unit.to_radians(matrix.by_column[1][r].unwrap());
        let Ok(coord) = SphCoord::new(theta, phi) else {
            dropped += 1;
            continue;
        };
        table.push(coord, &row_values)?;
    }
    if table.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no usable rows in {}",
            path.display()
        )));
    }
    Ok(Ingest { table, dropped })
}

/// Ingests Cartesian surface points, centering them and recording the
/// radial distance of every centered point as column `I`.
///
/// With [`CenterSpec::Centroid`] the per-column mean of the surviving rows
/// is subtracted; a centered point of zero norm is an error since its
/// direction is undefined.
pub fn ingest_cart_csv(
    path: impl AsRef<Path>,
    x_col: &str,
    y_col: &str,
    z_col: &str,
    center: CenterSpec,
) -> Result<Ingest> {
    let path = path.as_ref();
    let matrix = read_csv_columns(path, &[x_col, y_col, z_col])?;
    let mut pts: Vec<CartCoord> = Vec::new();
    let mut dropped = 0usize;
    for r in 0..matrix.rows {
        match (
            matrix.by_column[0][r],
            matrix.by_column[1][r],
            matrix.by_column[2][r],
        ) {
            (Some(x), Some(y), Some(z)) => pts.push(CartCoord::new(x, y, z)),
            _ => dropped += 1,
        }
    }
    if pts.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no usable rows in {}",
            path.display()
        )));
    }
    let c = match center {
        CenterSpec::Explicit(c) => c,
        CenterSpec::Centroid => {
            let n = pts.len() as f64;
            CartCoord::new(
                pts.iter().map(|p| p.x).sum::<f64>() / n,
                pts.iter().map(|p| p.y).sum::<f64>() / n,
                pts.iter().map(|p| p.z).sum::<f64>() / n,
            )
        }
    };
    let mut table = PointTable::new(vec!["I".to_string()])?;
    table.provenance = path.display().to_string();
    for p in &pts {
        let d = CartCoord::new(p.x - c.x, p.y - c.y, p.z - c.z);
        let radius = d.norm();
        if radius == 0.0 {
            return Err(Error::ZeroVector);
        }
        table.push(car2sph(d)?, &[radius])?;
    }
    Ok(Ingest { table, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sph(theta: f64, phi: f64) -> SphCoord {
        SphCoord::new(theta, phi).unwrap()
    }

    fn res(nside: u64) -> Resolution {
        Resolution::from_nside(nside).unwrap()
    }

    fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    fn base_pixel_table() -> PointTable {
        // three points in distinct base pixels at nside 1
        let mut t = PointTable::new(vec!["I".into()]).unwrap();
        t.push(sph(0.3, 0.8), &[1.0]).unwrap();
        t.push(sph(PI / 2.0, 0.0), &[2.0]).unwrap();
        t.push(sph(PI - 0.3, 4.0), &[3.0]).unwrap();
        t
    }

    #[test]
    fn from_points_distinct() {
        let ds = from_points(
            &base_pixel_table(),
            res(1),
            Scheme::Ring,
            DedupPolicy::KeepFirst,
        )
        .unwrap();
        assert_eq!(ds.len(), 3);
        assert!(ds.pix().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn from_points_dedup_keeps_first() {
        let mut t = PointTable::new(vec!["I".into()]).unwrap();
        t.push(sph(1.0, 1.0), &[10.0]).unwrap();
        t.push(sph(1.0, 1.0), &[20.0]).unwrap();
        let ds = from_points(&t, res(1), Scheme::Ring, DedupPolicy::KeepFirst).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.column("I").unwrap(), &[10.0]);
        assert!(matches!(
            from_points(&t, res(1), Scheme::Ring, DedupPolicy::Fail),
            Err(Error::DuplicatePixel { .. })
        ));
    }

    #[test]
    fn from_points_permutation_invariant() {
        let mut a = PointTable::new(vec!["I".into()]).unwrap();
        let mut b = PointTable::new(vec!["I".into()]).unwrap();
        let pts = [
            (0.3, 0.8, 1.0),
            (PI / 2.0, 0.0, 2.0),
            (PI - 0.3, 4.0, 3.0),
            (2.0, 2.0, 4.0),
        ];
        for &(th, ph, v) in &pts {
            a.push(sph(th, ph), &[v]).unwrap();
        }
        for &(th, ph, v) in pts.iter().rev() {
            b.push(sph(th, ph), &[v]).unwrap();
        }
        let da = from_points(&a, res(4), Scheme::Ring, DedupPolicy::KeepFirst).unwrap();
        let db = from_points(&b, res(4), Scheme::Ring, DedupPolicy::KeepFirst).unwrap();
        assert_eq!(da, db);
    }

    #[test]
    fn from_points_idempotent_on_centers() {
        let ds = from_points(
            &base_pixel_table(),
            res(2),
            Scheme::Nested,
            DedupPolicy::KeepFirst,
        )
        .unwrap();
        let mut again = PointTable::new(vec!["I".into()]).unwrap();
        for row in 0..ds.len() {
            again
                .push(ds.center(row), &[ds.column("I").unwrap()[row]])
                .unwrap();
        }
        let ds2 = from_points(&again, res(2), Scheme::Nested, DedupPolicy::KeepFirst).unwrap();
        assert_eq!(ds, ds2);
    }

    #[test]
    fn auto_separation() {
        let (ds, auto) = from_points_auto(
            &base_pixel_table(),
            13,
            Scheme::Ring,
            DedupPolicy::KeepFirst,
        )
        .unwrap();
        assert!(auto.separated);
        assert_eq!(auto.res.nside(), 1);
        assert_eq!(ds.len(), 3);
    }

    #[test]
    fn ingest_geo_basic() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            &dir,
            "pts.csv",
            "lon,lat,ozone\n0,0,300\n10,,200\n20,5,-9999\n",
        );
        let out = ingest_geo_csv(&path, "lon", "lat", &["ozone"], AngleUnit::Degrees, 0.0).unwrap();
        assert_eq!(out.table.len(), 1);
        assert_eq!(out.dropped, 2);
        let a = out.table.coords()[0];
        assert!((a.theta() - PI / 2.0).abs() < 1e-15);
        assert_eq!(a.phi(), 0.0);
        assert_eq!(out.table.values()[0][0], 300.0);
    }

    #[test]
    fn ingest_geo_lon_offset_and_bad_lat() {
        let dir = tempfile::tempdir().unwrap();
        // second row has an out-of-range latitude sentinel
        let path = write_file(
            &dir,
            "st.csv",
            "V1,V2,V3,V4\na,10,-30,100\nb,-98.8888,5,7\n",
        );
        let out = ingest_geo_csv(&path, "V3", "V2", &["V4"], AngleUnit::Degrees, PI).unwrap();
        assert_eq!(out.table.len(), 1);
        assert_eq!(out.dropped, 1);
        // lon -30 deg plus 180 deg offset = 150 deg
        let a = out.table.coords()[0];
        assert!((a.phi() - 150f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn ingest_missing_column_or_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "x.csv", "lon,lat\n0,0\n");
        assert!(matches!(
            ingest_geo_csv(&path, "lon", "lat", &["ozone"], AngleUnit::Degrees, 0.0),
            Err(Error::UnknownColumn(_))
        ));
        assert!(ingest_geo_csv(
            dir.path().join("nope.csv"),
            "a",
            "b",
            &[],
            AngleUnit::Degrees,
            0.0
        )
        .is_err());
    }

    #[test]
    fn ingest_drop_count_matches_scan() {
        let dir = tempfile::tempdir().unwrap();
        let body = "lon,lat,v\n1,2,3\n,2,3\n4,,3\n5,6,\n7,8,-9999\n9,10,11\nx,1,2\n";
        let path = write_file(&dir, "scan.csv", body);
        let out = ingest_geo_csv(&path, "lon", "lat", &["v"], AngleUnit::Degrees, 0.0).unwrap();
        // direct scan: rows with all three fields parseable, finite, non-sentinel
        let surviving = body
            .lines()
            .skip(1)
            .filter(|l| {
                let f: Vec<&str> = l.split(',').collect();
                f.len() == 3
                    && f.iter().all(|s| {
                        !s.is_empty() && s.parse::<f64>().map(|v| v != -9999.0).unwrap_or(false)
                    })
            })
            .count();
        assert_eq!(out.table.len(), surviving);
        assert_eq!(out.table.len() + out.dropped, 7);
    }

    #[test]
    fn ingest_sph_radians() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "s.csv", "theta,phi,I\n1.0,2.0,3.5\n9.9,0,1\n");
        let out = ingest_sph_csv(&path, "theta", "phi", &["I"], AngleUnit::Radians).unwrap();
        assert_eq!(out.table.len(), 1);
        assert_eq!(out.dropped, 1); // theta out of range
    }

    #[test]
    fn ingest_cart_explicit_and_centroid() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "c.csv", "x,y,z\n1,0,0\n");
        let out = ingest_cart_csv(
            &path,
            "x",
            "y",
            "z",
            CenterSpec::Explicit(CartCoord::new(0.0, 0.0, 0.0)),
        )
        .unwrap();
        assert_eq!(out.table.len(), 1);
        let a = out.table.coords()[0];
        assert!((a.theta() - PI / 2.0).abs() < 1e-15 && a.phi() == 0.0);
        assert_eq!(out.table.values()[0][0], 1.0);

        let path = write_file(&dir, "c2.csv", "x,y,z\n2,0,0\n0,0,0\n");
        let out = ingest_cart_csv(&path, "x", "y", "z", CenterSpec::Centroid).unwrap();
        assert_eq!(out.table.values()[0], vec![1.0, 1.0]);
        let phis: Vec<f64> = out.table.coords().iter().map(|c| c.phi()).collect();
        assert_eq!(phis, vec![0.0, PI]);

        // centered zero-norm point is an error
        let path = write_file(&dir, "c3.csv", "x,y,z\n0,0,0\n");
        assert!(matches!(
            ingest_cart_csv(
                &path,
                "x",
                "y",
                "z",
                CenterSpec::Explicit(CartCoord::new(0.0, 0.0, 0.0))
            ),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn save_load_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let ds = from_points(
            &base_pixel_table(),
            res(1),
            Scheme::Ring,
            DedupPolicy::KeepFirst,
        )
        .unwrap();
        let path = dir.path().join("t.sphds");
        ds.save(&path).unwrap();
        let back = SphericalDataset::load(&path).unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn save_load_bit_exact_awkward_values() {
        let dir = tempfile::tempdir().unwrap();
        let values = vec![
            0.1,
            1.0 / 3.0,
            f64::MIN_POSITIVE,
            1.7976931348623157e308,
            -0.0,
            298.4333,
        ];
        let ds = SphericalDataset::new(
            res(4),
            Scheme::Nested,
            vec!["I".into()],
            (0..values.len() as u64).collect(),
            vec![values.clone()],
        )
        .unwrap();
        let path = dir.path().join("bits.sphds");
        ds.save(&path).unwrap();
        let back = SphericalDataset::load(&path).unwrap();
        for (a, b) in values.iter().zip(back.column("I").unwrap()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn load_rejects_bad_files() {
        let dir = tempfile::tempdir().unwrap();
        let bad = [
            ("h1", "sphds v2 nside=1 ordering=ring columns=I\n"),
            ("h2", "sphds v1 nside=3 ordering=ring columns=I\n"),
            ("h3", "sphds v1 nside=1 ordering=diag columns=I\n"),
            ("h4", "sphds v1 nside=1 columns=I\n"),
            ("range", "sphds v1 nside=1 ordering=ring columns=I\n12 1\n"),
            (
                "order",
                "sphds v1 nside=1 ordering=ring columns=I\n3 1\n2 1\n",
            ),
            (
                "dup",
                "sphds v1 nside=1 ordering=ring columns=I\n3 1\n3 1\n",
            ),
            ("arity", "sphds v1 nside=1 ordering=ring columns=I\n3 1 2\n"),
            ("value", "sphds v1 nside=1 ordering=ring columns=I\n3 abc\n"),
        ];
        for (name, body) in bad {
            let path = write_file(&dir, name, body);
            assert!(SphericalDataset::load(&path).is_err(), "{name} should fail");
        }
        // empty dataset with a valid header is fine
        let path = write_file(
            &dir,
            "empty",
            "sphds v1 nside=2048 ordering=ring columns=I\n",
        );
        let ds = SphericalDataset::load(&path).unwrap();
        assert_eq!(ds.len(), 0);
        assert_eq!(ds.res().nside(), 2048);
    }

    #[test]
    fn subset_matches_exhaustive_scan() {
        // dataset covering every pixel at nside 8
        let r = res(8);
        let pix: Vec<u64> = (0..r.npix()).collect();
        let vals: Vec<f64> = (0..r.npix()).map(|i| i as f64).collect();
        let ds = SphericalDataset::new(r, Scheme::Ring, vec!["I".into()], pix, vec![vals]).unwrap();
        let w = SphericalWindow::polygon(vec![
            sph(0.0, 0.0),
            sph(PI / 2.0, 0.0),
            sph(PI / 2.0, PI / 2.0),
        ])
        .unwrap();
        let sub = ds.subset(&w);
        let expect: Vec<u64> = (0..r.npix())
            .filter(|&i| w.contains(r.pix2ang(PixelId::ring(i)).unwrap()))
            .collect();
        assert_eq!(sub.pix(), expect.as_slice());
        let frac = sub.len() as f64 / ds.len() as f64;
        assert!((frac - 0.125).abs() < 0.02, "octant fraction {frac}");

        // full-sphere window keeps everything; a far-away disc empties it
        let all = SphericalWindow::disc(sph(0.9, 0.9), PI - 1e-9).unwrap();
        assert_eq!(ds.subset(&all), ds);
        let near = SphericalWindow::disc(sph(0.2, 0.0), 0.05).unwrap();
        let far = SphericalWindow::disc(sph(PI - 0.2, 3.0), 0.05).unwrap();
        assert_eq!(ds.subset(&near).subset(&far).len(), 0);
    }
}
