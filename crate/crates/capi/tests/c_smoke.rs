//! Compiles and runs a small C program against the generated header and
//! the static library, proving the ABI end to end.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include "sphds.h"
#include <assert.h>
#include <math.h>
#include <stdio.h>

int main(void) {
    uint64_t npix = 0;
    assert(sphds_npix(2, &npix) == SphdsStatus_Ok);
    assert(npix == 48);
    assert(sphds_npix(3, &npix) == SphdsStatus_InvalidResolution);

    uint64_t nested = 0;
    assert(sphds_ring2nest(2, 0, &nested) == SphdsStatus_Ok);
    assert(nested == 3);

    double thetas[3] = {0.3, 1.5707963267948966, 2.8};
    double phis[3] = {0.8, 0.0, 4.0};
    double values[3] = {1.0, 2.0, 3.0};
    SphdsDataset *ds = NULL;
    assert(sphds_dataset_from_points(thetas, phis, values, 3, 16,
                                     SphdsOrdering_Ring, true, "I", &ds) ==
           SphdsStatus_Ok);
    double mean = 0.0;
    assert(sphds_mean(ds, "I", &mean) == SphdsStatus_Ok);
    assert(fabs(mean - 2.0) < 1e-15);

    SphdsWindow *w = NULL;
    assert(sphds_window_disc(1.0, 1.0, 3.14159, &w) == SphdsStatus_Ok);
    double asym = 0.0;
    assert(sphds_asymmetry_mean(ds, w, "I", &asym) == SphdsStatus_Ok);
    assert(fabs(asym - 1.0) < 1e-12);

    assert(sphds_mean(ds, "missing", &mean) == SphdsStatus_ParseError);
    printf("last error: %s\n", sphds_last_error_message());

    sphds_window_free(w);
    sphds_dataset_free(ds);
    printf("c smoke ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let lib_dir = manifest.join("../../target/debug");
    let staticlib = lib_dir.join("libsphds_capi.a");
    assert!(
        include.join("sphds.h").exists(),
        "header must be generated by the build script"
    );
    if !staticlib.exists() {
        // cargo built only rlib/test artifacts in this invocation
        eprintln!("skipping: {} not built", staticlib.display());
        return;
    }
    let cc = which_cc();
    let Some(cc) = cc else {
        eprintln!("skipping: no C compiler found");
        return;
    };

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let exe = dir.path().join("smoke");
    let compile = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("run cc");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = Command::new(&exe).output().expect("run smoke");
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("c smoke ok"), "{stdout}");
}

fn which_cc() -> Option<String> {
    for cand in ["cc", "gcc", "clang"] {
        if Command::new(cand)
            .arg("--version")
            .output()
            .map(|o| o.status.success())
            .unwrap_or(false)
        {
            return Some(cand.to_string());
        }
    }
    None
}
