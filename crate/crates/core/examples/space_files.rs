//! Loading `.sl` space files and rendering reports.
//!
//! cargo run --example space_files

use stratlab::cli::gallery::{run_gallery, CORPUS};
use stratlab::cli::{Format, Report, SpaceFile};
use stratlab::qpoint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = r#"
[space]
name = "cusp"
dim = 2
vars = ["x", "y"]
equations = ["y^2 - x^3"]
"#;
    let f = SpaceFile::parse(text)?;
    let t = f.space.zariski_tangent(&qpoint(&[0, 0]))?;
    let mut report = Report::new("space_files example");
    report.set("dim_at_origin", t.dim());
    report.check("cusp is singular at the origin", t.dim() == 2);
    print!("{}", report.render(Format::Text));
    print!("{}", report.render(Format::Json));

    println!("canonical form:\n{}", f.to_canonical());

    match SpaceFile::parse("[space]\ndim = 2\nvars = [\"x\", \"y\"]\nequations = [\"x + w\"]\n") {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("error: {e}"),
    }

    println!("{} bundled files", CORPUS.len());
    for e in run_gallery() {
        println!("{} {:<32} {}", if e.passed { "ok  " } else { "FAIL" }, e.name, e.detail);
    }
    Ok(())
}
