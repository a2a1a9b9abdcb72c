use std::path::PathBuf;
use std::process::Command;

fn header_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("hardwindow.h")
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(header_path()).expect("header generated by build.rs");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .filter_map(|rest| rest.split('(').next())
        .collect();
    assert!(exports.len() >= 10);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    for ty in [
        "HwStatus",
        "HwMode",
        "HwFilter",
        "HwSurvey",
        "HwExceptionalSet",
    ] {
        assert!(
            header.contains(&format!("typedef struct {ty}"))
                || header.contains(&format!("typedef enum {ty}"))
        );
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let main = dir.path().join("main.c");
    std::fs::write(
        &main,
        r#"#include "hardwindow.h"
int main(void) {
    HwWitness w;
    HwStatus st = hw_find_witness(5, 6, 23, HW_MODE_TWO_PQ, &w);
    HwSurvey *s = NULL;
    (void)hw_survey_new(5, 30, HW_FILTER_PRIMES, 0, 1, false, &s);
    hw_survey_free(s);
    return st == HW_STATUS_OK ? 0 : 1;
}
"#,
    )
    .unwrap();
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header_path().parent().unwrap())
        .arg(&main)
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    // Integration test binaries live in target/<profile>/deps.
    let exe = std::env::current_exe().unwrap();
    let archive = exe
        .parent()
        .and_then(|d| d.parent())
        .unwrap()
        .join("libhardwindow_ffi.a");
    if !archive.exists() {
        eprintln!("{} not built; skipping", archive.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let main = dir.path().join("main.c");
    std::fs::write(
        &main,
        r#"#include <stdio.h>
#include <string.h>
#include "hardwindow.h"
int main(void) {
    int64_t c = 0;
    if (hw_ramanujan(4, 2, &c) != HW_STATUS_OK || c != -2) return 1;
    HwWitness w;
    if (hw_find_witness(5, 6, 23, HW_MODE_TWO_PQ, &w) != HW_STATUS_OK) return 2;
    if (!w.ruled_out || w.witness != 5 || w.s_count != 3) return 3;
    if (hw_find_witness(1, 2, 4, HW_MODE_TWO_PQ, &w) != HW_STATUS_NOT_OBTUSE) return 4;
    char *msg = hw_last_error();
    if (msg == NULL || strstr(msg, "is not obtuse") == NULL) return 5;
    hw_string_free(msg);
    HwSurvey *s = NULL;
    if (hw_survey_new(5, 30, HW_FILTER_PRIMES, 0, 1, false, &s) != HW_STATUS_OK) return 6;
    if (hw_survey_len(s) != 8) return 7;
    char *csv = hw_survey_csv(s);
    fputs(csv, stdout);
    hw_string_free(csv);
    hw_survey_free(s);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new(cc)
        .args(["-std=c99", "-I"])
        .arg(header_path().parent().unwrap())
        .arg(&main)
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "link failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "smoke exited with {:?}",
        out.status.code()
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.starts_with("n,p_plus,"));
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc);
        }
    }
    Err(())
}
