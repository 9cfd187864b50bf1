use std::path::Path;
use std::process::Command;

const PROGRAM: &str = r#"
#include "rmtlab.h"
#include <stdio.h>

int main(void) {
    RmtlabTable *t = NULL;
    double f = 0.0;
    size_t len = 0;
    if (rmtlab_tw_table_new(2, -8.0, 6.0, 0.01, &t) != RMTLAB_STATUS_OK) {
        char msg[256];
        rmtlab_last_error(msg, sizeof msg);
        fprintf(stderr, "%s\n", msg);
        return 1;
    }
    rmtlab_table_eval(t, 0.0, &f);
    rmtlab_table_len(t, &len);
    printf("%s %zu %.6f\n", rmtlab_version(), len, f);
    rmtlab_table_free(t);
    return 0;
}
"#;

#[test]
fn header_compiles_as_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("warning: no C compiler found, header check skipped");
        return;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let tmp = std::env::temp_dir().join(format!("rmtlab_ffi_{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let src = tmp.join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let out = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-c", "-o"])
        .arg(tmp.join("smoke.o"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
