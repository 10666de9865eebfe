//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "ifsp.h"

int main(void) {
    IfspDistribution *d = NULL;
    IfspSystem *s = NULL;
    double states[11];
    double ks = 1.0;
    if (ifsp_distribution_from_spec("exp:1", &d) != IFSP_STATUS_OK) return 10;
    if (ifsp_system_theorem(d, 2, &s) != IFSP_STATUS_OK) return 11;
    if (ifsp_simulate_forward(s, 0.0, 10, 1, 0, states, NULL) != IFSP_STATUS_OK) return 12;
    if (ifsp_ks_distance(states, 11, d, &ks) != IFSP_STATUS_OK) return 13;
    if (ifsp_system_theorem(d, 0, &s) != IFSP_STATUS_CONSTRUCTION) return 14;
    printf("%s\n", ifsp_last_error_message());
    ifsp_system_free(s);
    ifsp_distribution_free(d);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // tests live in target/<profile>/deps; the library one level up
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libifsp_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .status()
        .expect("C compiler runs");
    assert!(status.success());

    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("construction"));
}
