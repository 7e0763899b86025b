use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/surfconv.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).expect("header is generated by the build script");
    for name in [
        "typedef struct SurfconvMatrix SurfconvMatrix;",
        "typedef struct SurfconvTypeSet SurfconvTypeSet;",
        "SURFCONV_STATUS_OK = 0",
        "SURFCONV_STATUS_SINGULAR_SUBMATRIX",
        "surfconv_matrix_new(",
        "surfconv_check_star(",
        "surfconv_constant_m(",
        "surfconv_phi(",
        "surfconv_adjoint(",
        "surfconv_typeset_vertex(",
        "surfconv_last_error_message(void)",
    ] {
        assert!(text.contains(name), "missing `{name}`");
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let Ok(cc) = which("cc") else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"surfconv.h\"\nint use(void) {\n  SurfconvMatrix *m = 0;\n  SurfconvStarReport r;\n  (void)r;\n  return (int)surfconv_check_star(m, &r, 0) + (int)SURFCONV_STATUS_NULL_POINTER;\n}\n",
    )
    .unwrap();
    let inc = header().parent().unwrap().to_path_buf();
    for lang in ["c", "c++"] {
        let out = Command::new(&cc)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(&inc)
            .arg(&src)
            .output()
            .unwrap();
        assert!(out.status.success(), "{lang}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

fn which(name: &str) -> Result<PathBuf, ()> {
    let path = std::env::var_os("PATH").ok_or(())?;
    std::env::split_paths(&path).map(|d| d.join(name)).find(|p| p.is_file()).ok_or(())
}
