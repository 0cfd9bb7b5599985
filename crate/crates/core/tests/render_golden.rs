//! Byte-for-byte comparison of rendered figures. Set `ALCOVE_BLESS=1` to rewrite them.

use std::path::PathBuf;

use alcove_core::render::{render_svg, weight_scene};
use alcove_core::root_datum::{Coweight, RootDatum};

fn check(name: &str, datum: &str, mu: &[i64], lambdas: &[&[i64]]) {
    let r = RootDatum::from_preset(datum).unwrap();
    let lambdas: Vec<Coweight> = lambdas.iter().map(|l| Coweight(l.to_vec())).collect();
    let scene = weight_scene(&r, &Coweight(mu.to_vec()), &lambdas).unwrap();
    let svg = render_svg(&r, &scene).unwrap();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("ALCOVE_BLESS").is_some() {
        std::fs::write(&path, &svg).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        svg == want,
        "{name} differs from {}; rerun with ALCOVE_BLESS=1 if intended",
        path.display()
    );
}

#[test]
fn gl3_weights_of_mu_310() {
    check(
        "gl3_mu310.svg",
        "GL3",
        &[3, 1, 0],
        &[&[1, 1, 2], &[2, 1, 1], &[1, 2, 1]],
    );
}

#[test]
fn b2sc_zero_weight_of_quasi_minuscule() {
    check("b2sc_mu11_zero.svg", "B2sc", &[1, 1], &[&[0, 0]]);
}
