//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "coflow.h"

int main(void) {
    CoflowInstance *inst = NULL;
    if (coflow_instance_parse("2 2\n1 1 1 4\n1 2 2 4\n2 1 2 6\n", &inst) != COFLOW_STATUS_OK) return 1;
    CoflowSchedule *s = NULL;
    if (coflow_schedule_run(inst, COFLOW_SCHEDULER_FLPT, &s) != COFLOW_STATUS_OK) return 2;
    CoflowRational span;
    coflow_schedule_makespan(s, &span);
    CoflowBounds lb;
    coflow_lower_bounds(inst, &lb);
    printf("%lld/%lld %lld/%lld\n", (long long)span.num, (long long)span.den,
           (long long)lb.combined.num, (long long)lb.combined.den);
    if (coflow_instance_parse("x", &inst) != COFLOW_STATUS_PARSE) return 3;
    printf("%s\n", coflow_last_error());
    coflow_schedule_free(s);
    coflow_instance_free(inst);
    return 0;
}
"#;

fn header_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header_dir().join("coflow.h")).unwrap();
    for name in [
        "coflow_last_error",
        "coflow_instance_parse",
        "coflow_instance_load",
        "coflow_instance_generate",
        "coflow_instance_free",
        "coflow_instance_flow_count",
        "coflow_lower_bounds",
        "coflow_schedule_run",
        "coflow_schedule_makespan",
        "coflow_schedule_core_of",
        "coflow_schedule_core_span",
        "coflow_schedule_dump",
        "coflow_schedule_free",
        "coflow_oracle",
        "typedef struct CoflowInstance CoflowInstance;",
        "COFLOW_SCHEDULER_CLS_H = 4",
        "COFLOW_STATUS_OVER_LIMIT = 6",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = lib_dir.join("libcoflow_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = Command::new("cc")
        .arg("-I")
        .arg(header_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(cc.status.success(), "{}", String::from_utf8_lossy(&cc.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status);
    let out = String::from_utf8(run.stdout).unwrap();
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("6/1 6/1"));
    assert!(lines.next().unwrap().contains("<text>"));
}
