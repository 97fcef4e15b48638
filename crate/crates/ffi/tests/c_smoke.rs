//! Compiles a C program against the generated header and the static
//! library and runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "flowtd.h"

int main(void) {
    FtdGraph *g = NULL;
    if (ftd_graph_parse_gr("p tw 4 4\n1 2\n2 3\n3 4\n4 1\n", &g) != FTD_STATUS_OK) return 1;
    FtdOptions o = ftd_options_default();
    o.method = FTD_METHOD_MIN_DEGREE;
    FtdDecomposition *td = NULL;
    if (ftd_decompose(g, &o, &td) != FTD_STATUS_OK) return 2;
    size_t w = 0;
    if (ftd_decomposition_width(td, &w) != FTD_STATUS_OK || w != 2) return 3;
    if (ftd_decomposition_validate(g, td) != FTD_STATUS_OK) return 4;
    char *s = NULL;
    if (ftd_decomposition_write_td(td, 4, &s) != FTD_STATUS_OK) return 5;
    printf("%s", s);
    ftd_string_free(s);
    if (ftd_graph_parse_gr("p tw 1 1\n1 2\n", &g) != FTD_STATUS_PARSE_ERROR) return 6;
    if (ftd_last_error() == NULL || strlen(ftd_last_error()) == 0) return 7;
    ftd_decomposition_free(td);
    ftd_graph_free(g);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn c_program_links_and_runs() {
    if !have_cc() {
        eprintln!("no C compiler on PATH, skipping");
        return;
    }
    let lib = target_dir().join("libflowtd_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let work = std::env::temp_dir().join(format!("flowtd-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("smoke.c");
    let bin = work.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "cc failed:\n{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "smoke program exited with {:?}", run.status);
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.starts_with("s td "), "{stdout}");
    std::fs::remove_dir_all(&work).ok();
}
