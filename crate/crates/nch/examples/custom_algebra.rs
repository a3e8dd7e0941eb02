//! Defining an algebra from JSON structure constants, validating it, and
//! running homology on it.  The same format (plus an "ideal" field)
//! drives extension inputs from files.
//!
//! Run with: cargo run --release --example custom_algebra

use nch::algebra::{parse_algebra_json, validate};
use nch::homology::{cyclic_homology, CyclicModel};

fn main() -> Result<(), nch::error::NchError> {
    // the 3-dimensional algebra C[t]/t^3
    let text = r#"{
        "name": "C[t]/t^3",
        "dim": 3,
        "unital": true,
        "basis": ["1", "t", "t^2"],
        "structure": [
            [0,0,0,"1"], [0,1,1,"1"], [0,2,2,"1"],
            [1,0,1,"1"], [1,1,2,"1"],
            [2,0,2,"1"]
        ],
        "ideal": [1, 2]
    }"#;
    let loaded = parse_algebra_json(text)?;
    let a = &loaded.algebra;
    let report = validate(a);
    println!("loaded {} (dim {}), valid: {}", a.name, a.dim, report.is_valid());

    let hc = cyclic_homology(a, 4, 6, CyclicModel::Connes)?;
    let dims: Vec<usize> = hc.iter().map(|r| r.dim).collect();
    println!("HC_n dims for n <= 4: {dims:?}");

    // the ideal block from the file builds an extension
    let ideal = loaded.ideal.expect("file carries an ideal");
    let ext = nch::algebra::Extension::new(a, &ideal)?;
    println!(
        "extension: dim R = {}, dim I = {}, dim A = {}",
        ext.r.dim,
        ext.ideal_dim,
        ext.quotient.dim
    );
    assert_eq!(ext.r.dim, ext.ideal_dim + ext.quotient.dim);

    let rep = nch::excision::excision_check(&ext, 2, 5)?;
    println!("excision predicates on the (t)-adic extension: {:?}", rep.nodes);
    Ok(())
}
