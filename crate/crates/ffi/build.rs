use std::env;
use std::fs;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let generated_path = PathBuf::from(env::var("OUT_DIR").unwrap()).join("pseudoae.h");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml")).expect("cbindgen.toml should parse");
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("header generation should succeed")
        .write_to_file(&generated_path);

    // Refresh the committed copy when the source tree is writable; the
    // header_matches_the_committed_copy test catches any drift otherwise.
    let committed_path = crate_dir.join("include").join("pseudoae.h");
    let generated = fs::read(&generated_path).unwrap();
    if fs::read(&committed_path).ok().as_deref() != Some(generated.as_slice()) {
        let _ = fs::create_dir_all(committed_path.parent().unwrap());
        let _ = fs::write(&committed_path, &generated);
    }
}
