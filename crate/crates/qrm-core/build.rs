fn main() {
    // ndarray-linalg is used without a bundled backend; LAPACK/BLAS symbols
    // are resolved against the system OpenBLAS.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
