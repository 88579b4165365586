//! End-to-end tests of the `sphds` binary: exit codes, pipeline output and
//! byte-stable rendering.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sphds")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn sphds")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn convert_fixture(dir: &Path, nside: &str) -> PathBuf {
    let ds = dir.join("fix.sphds");
    let out = run(&[
        "convert",
        "--in",
        fixture("points_geo.csv").to_str().unwrap(),
        "--kind",
        "geo",
        "--value-cols",
        "v",
        "--nside",
        nside,
        "--out",
        ds.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    ds
}

#[test]
fn convert_reports_counts_and_info_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let ds = convert_fixture(dir.path(), "64");
    let out = run(&[
        "convert",
        "--in",
        fixture("points_geo.csv").to_str().unwrap(),
        "--kind",
        "geo",
        "--value-cols",
        "v",
        "--nside",
        "64",
        "--out",
        ds.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    // 83 CSV rows: one missing field, one sentinel, one duplicated point
    assert_eq!(stdout.trim(), "n=80 nside=64 dropped=3");

    let info = run(&["info", "--ds", ds.to_str().unwrap()]);
    assert_eq!(
        String::from_utf8(info.stdout).unwrap().trim(),
        "nside=64 ordering=ring n=80 columns=v"
    );
}

#[test]
fn single_row_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("one.csv");
    std::fs::write(&csv, "lon,lat,I\n12.5,48.1,7.25\n").unwrap();
    let ds = dir.path().join("one.sphds");
    let out = run(&[
        "convert",
        "--in",
        csv.to_str().unwrap(),
        "--kind",
        "geo",
        "--nside",
        "2048",
        "--out",
        ds.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let info = run(&["info", "--ds", ds.to_str().unwrap()]);
    assert!(String::from_utf8(info.stdout).unwrap().contains("n=1"));
}

/// `convert` then `stats --stat mean` equals an independent one-pass scan
/// of the surviving CSV rows with first-wins dedup.
#[test]
fn mean_matches_independent_scan() {
    let dir = tempfile::tempdir().unwrap();
    let ds = convert_fixture(dir.path(), "16");
    let out = run(&[
        "stats",
        "--ds",
        ds.to_str().unwrap(),
        "--col",
        "v",
        "--stat",
        "mean",
    ]);
    let printed = String::from_utf8(out.stdout).unwrap();

    let res = sphds::Resolution::from_nside(16).unwrap();
    let body = std::fs::read_to_string(fixture("points_geo.csv")).unwrap();
    let mut seen = std::collections::HashSet::new();
    let mut sum = 0.0;
    let mut kept = Vec::new();
    for line in body.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let parsed: Option<(f64, f64, f64)> = match (
            f.first().and_then(|s| s.parse().ok()),
            f.get(1).and_then(|s| s.parse().ok()),
            f.get(2).and_then(|s| s.parse().ok()),
        ) {
            (Some(lon), Some(lat), Some(v)) => Some((lon, lat, v)),
            _ => None,
        };
        let Some((lon, lat, v)) = parsed else {
            continue;
        };
        if lon == -9999.0 || lat == -9999.0 || v == -9999.0 {
            continue;
        }
        let geo = sphds::GeoCoord::new(lon.to_radians(), lat.to_radians()).unwrap();
        let pix = res
            .ang2pix(sphds::geom::geo2sph(geo), sphds::Scheme::Ring)
            .index;
        if seen.insert(pix) {
            kept.push(v);
        }
    }
    for &v in &kept {
        sum += v;
    }
    // the CLI prints 7 significant digits of the same quantity; the scan
    // accumulates in input order while the dataset sums in pixel order, so
    // compare at print precision
    let mean = sum / kept.len() as f64;
    let expect = format!("stat=mean value={}", sphds::fmt::sig(mean, 7));
    assert_eq!(printed.trim(), expect);
}

#[test]
fn extrema_csv_and_negation_mirror() {
    let dir = tempfile::tempdir().unwrap();
    let ds = convert_fixture(dir.path(), "64");
    let smallest = run(&[
        "extrema",
        "--ds",
        ds.to_str().unwrap(),
        "--col",
        "v",
        "--n",
        "4",
        "--side",
        "smallest",
    ]);
    let text = String::from_utf8(smallest.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "pix,theta,phi,value");
    assert_eq!(lines.len(), 5);
    let vals: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(
        vals.windows(2).all(|w| w[0] <= w[1]),
        "ascending for smallest"
    );

    // negate the dataset by rewriting the file; largest must mirror
    let loaded = sphds::SphericalDataset::load(&ds).unwrap();
    let negated = sphds::SphericalDataset::new(
        loaded.res(),
        loaded.scheme(),
        loaded.column_names().to_vec(),
        loaded.pix().to_vec(),
        vec![loaded.column("v").unwrap().iter().map(|v| -v).collect()],
    )
    .unwrap();
    let neg_path = dir.path().join("neg.sphds");
    negated.save(&neg_path).unwrap();
    let largest = run(&[
        "extrema",
        "--ds",
        neg_path.to_str().unwrap(),
        "--col",
        "v",
        "--n",
        "4",
        "--side",
        "largest",
    ]);
    let neg_text = String::from_utf8(largest.stdout).unwrap();
    for (a, b) in text.lines().skip(1).zip(neg_text.lines().skip(1)) {
        let pa = a.split(',').next().unwrap();
        let pb = b.split(',').next().unwrap();
        assert_eq!(pa, pb, "same pixels in the same order");
    }

    // n = 0 gives just the header
    let none = run(&[
        "extrema",
        "--ds",
        ds.to_str().unwrap(),
        "--col",
        "v",
        "--n",
        "0",
    ]);
    assert_eq!(
        String::from_utf8(none.stdout).unwrap().trim(),
        "pix,theta,phi,value"
    );
}

#[test]
fn hist_has_two_axes() {
    let dir = tempfile::tempdir().unwrap();
    let ds = convert_fixture(dir.path(), "64");
    let out_csv = dir.path().join("h.csv");
    let out = run(&[
        "hist",
        "--ds",
        ds.to_str().unwrap(),
        "--col",
        "v",
        "--bins",
        "20",
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let body = std::fs::read_to_string(&out_csv).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "axis,bin_lo,bin_hi,count,mean");
    assert_eq!(lines.len(), 41);
    assert_eq!(lines.iter().filter(|l| l.starts_with("theta,")).count(), 20);
    assert_eq!(lines.iter().filter(|l| l.starts_with("phi,")).count(), 20);
    let total: u64 = lines[1..=20]
        .iter()
        .map(|l| l.split(',').nth(3).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 80);
}

#[test]
fn render_matches_frozen_golden() {
    let dir = tempfile::tempdir().unwrap();
    let ds = convert_fixture(dir.path(), "64");
    let ppm = dir.path().join("out.ppm");
    let out = run(&[
        "render",
        "--ds",
        ds.to_str().unwrap(),
        "--col",
        "v",
        "--width",
        "64",
        "--height",
        "32",
        "--ramp",
        "gray",
        "--out",
        ppm.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let got = std::fs::read(&ppm).unwrap();
    let golden = std::fs::read(fixture("render_golden.ppm")).unwrap();
    assert_eq!(got, golden, "rendered bytes must match the frozen golden");
}

#[test]
fn exit_codes_follow_contract() {
    let dir = tempfile::tempdir().unwrap();
    let ds = convert_fixture(dir.path(), "16");
    let ds = ds.to_str().unwrap();

    // 2: usage errors
    let bad_nside = run(&[
        "convert",
        "--in",
        fixture("points_geo.csv").to_str().unwrap(),
        "--kind",
        "geo",
        "--value-cols",
        "v",
        "--nside",
        "3",
        "--out",
        "/dev/null",
    ]);
    assert_eq!(code(&bad_nside), 2);
    assert!(String::from_utf8_lossy(&bad_nside.stderr).contains("power of two"));
    let two_vertices = run(&[
        "stats",
        "--ds",
        ds,
        "--col",
        "v",
        "--stat",
        "exprob",
        "--alpha",
        "0",
        "--win-polygon",
        "0,0;1,0",
    ]);
    assert_eq!(code(&two_vertices), 2);
    let bad_window = run(&[
        "stats",
        "--ds",
        ds,
        "--col",
        "v",
        "--stat",
        "exprob",
        "--alpha",
        "0",
        "--win-polygon",
        "a,b;c,d;e,f",
    ]);
    assert_eq!(code(&bad_window), 2);
    let unknown_flag = run(&["stats", "--ds", ds, "--no-such-flag"]);
    assert_eq!(code(&unknown_flag), 2);
    let zero_bins = run(&[
        "hist",
        "--ds",
        ds,
        "--col",
        "v",
        "--bins",
        "0",
        "--out",
        "/dev/null",
    ]);
    assert_eq!(code(&zero_bins), 2);

    // 3: empty or insufficient data
    let empty_window = run(&[
        "stats",
        "--ds",
        ds,
        "--col",
        "v",
        "--stat",
        "exprob",
        "--alpha",
        "0",
        "--win-disc",
        "0.001,0,0.0001",
    ]);
    assert_eq!(code(&empty_window), 3);
    let too_many = run(&["extrema", "--ds", ds, "--col", "v", "--n", "100000"]);
    assert_eq!(code(&too_many), 3);
    let missing_col = run(&["stats", "--ds", ds, "--col", "nope", "--stat", "mean"]);
    assert_eq!(code(&missing_col), 3);

    // 4: separation failure under --nside auto
    let dup_csv = dir.path().join("dup.csv");
    std::fs::write(&dup_csv, "lon,lat,I\n10,10,1\n10,10,2\n").unwrap();
    let unseparable = run(&[
        "convert",
        "--in",
        dup_csv.to_str().unwrap(),
        "--kind",
        "geo",
        "--nside",
        "auto",
        "--out",
        dir.path().join("d.sphds").to_str().unwrap(),
    ]);
    assert_eq!(code(&unseparable), 4);

    // 5: I/O failures
    let missing_file = run(&[
        "stats",
        "--ds",
        "/no/such/file.sphds",
        "--col",
        "v",
        "--stat",
        "mean",
    ]);
    assert_eq!(code(&missing_file), 5);
    let missing_csv = run(&[
        "convert",
        "--in",
        "/no/such.csv",
        "--kind",
        "geo",
        "--nside",
        "16",
        "--out",
        dir.path().join("x.sphds").to_str().unwrap(),
    ]);
    assert_eq!(code(&missing_csv), 5);
}

#[test]
fn auto_resolution_convert() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("three.csv");
    std::fs::write(&csv, "lon,lat,I\n0,10,1\n120,-20,2\n-100,45,3\n").unwrap();
    let ds = dir.path().join("auto.sphds");
    let out = run(&[
        "convert",
        "--in",
        csv.to_str().unwrap(),
        "--kind",
        "geo",
        "--nside",
        "auto",
        "--out",
        ds.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.trim(), "n=3 nside=1 dropped=0");
}

#[test]
fn cart_convert_with_window_stat() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("surf.csv");
    // a lumpy star-shaped cloud around the origin
    let mut body = String::from("x,y,z\n");
    for i in 0..200 {
        let t = i as f64 * 0.7;
        let r = 2.0 + 0.5 * (3.0 * t).sin();
        let z = (i as f64 / 199.0) * 1.8 - 0.9;
        let s = (1.0f64 - z * z).sqrt();
        body.push_str(&format!(
            "{},{},{}\n",
            r * s * t.cos(),
            r * s * t.sin(),
            r * z
        ));
    }
    std::fs::write(&csv, body).unwrap();
    let ds = dir.path().join("surf.sphds");
    let out = run(&[
        "convert",
        "--in",
        csv.to_str().unwrap(),
        "--kind",
        "cart",
        "--nside",
        "auto",
        "--out",
        ds.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    // asymmetry over the full sphere (a huge disc) is 1
    let asym = run(&[
        "stats",
        "--ds",
        ds.to_str().unwrap(),
        "--col",
        "I",
        "--stat",
        "asym-mean",
        "--win-disc",
        "1.0,1.0,3.14159",
    ]);
    assert_eq!(code(&asym), 0);
    assert_eq!(
        String::from_utf8(asym.stdout).unwrap().trim(),
        "stat=asym-mean value=1"
    );
}
