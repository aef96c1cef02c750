//! Regenerate the fixture files under `fixtures/` at the repository root.
//!
//! Usage: `cargo run -p specseq-cli --example gen_fixtures [DIR]`

use specseq::ahss::CWComplex;
use specseq::{fixtures, FilteredComplex, Ring};
use specseq_cli::io;

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    std::fs::create_dir_all(&dir)?;
    let write = |name: &str, content: String| -> std::io::Result<()> {
        let path = format!("{dir}/{name}");
        std::fs::write(&path, content)?;
        println!("wrote {path}");
        Ok(())
    };

    write("toy-d2.fc.json", io::filtered_to_json(&fixtures::toy_d2(), None))?;
    write("padic-3.fc.json", io::filtered_to_json(&fixtures::truncated_padic(3, 3), None))?;
    let koszul = fixtures::koszul_dga(3);
    write("koszul.fc.json", io::filtered_to_json(&koszul.base, Some(&koszul)))?;
    write(
        "rp2-stupid.fc.json",
        io::filtered_to_json(&FilteredComplex::stupid(fixtures::rp2_cellular(Ring::Integers)), None),
    )?;
    write("coeff-z.fc.json", {
        let c = fixtures::point_complex(Ring::Integers);
        io::filtered_to_json(&FilteredComplex::constant(c), None)
    })?;
    write("coeff-two-stage.fc.json", {
        let c = fixtures::two_stage_coefficients(Ring::Integers);
        io::filtered_to_json(&FilteredComplex::constant(c), None)
    })?;

    write("point.cw.json", io::cw_to_json(&CWComplex::point()))?;
    write("s2.cw.json", io::cw_to_json(&CWComplex::sphere2()))?;
    write("rp2.cw.json", io::cw_to_json(&CWComplex::rp2()))?;
    write("t2.cw.json", io::cw_to_json(&CWComplex::torus2()))?;
    write("cp2.cw.json", io::cw_to_json(&CWComplex::cp2()))?;

    // A deliberately broken file: d∘d ≠ 0.
    write(
        "broken-dd.fc.json",
        serde_json::to_string_pretty(&serde_json::json!({
            "format_version": 1,
            "ring": {"kind": "integers"},
            "degree_range": [0, 2],
            "ranks": [1, 1, 1],
            "differentials": [
                {"rows": 1, "cols": 1, "entries": ["1"]},
                {"rows": 1, "cols": 1, "entries": ["1"]}
            ]
        }))
        .unwrap(),
    )?;
    Ok(())
}
