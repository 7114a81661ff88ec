fn main() -> std::io::Result<()> {
    let schema = "../core/proto/jelly.proto";
    println!("cargo:rerun-if-changed={schema}");
    prost_build::compile_protos(&[schema], &["../core/proto"])
}
