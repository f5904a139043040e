//! Regenerate the cached modular-polynomial goldens.
//!
//! Interpolates Φ_N for N = 2..=5 from q-expansions at two different
//! working precisions, verifies the recognized integer coefficients agree
//! exactly between the runs, and rewrites `src/oracle/goldens/phi_N.txt`.
//!
//! Run from the crate root: `cargo run --example regen_goldens`

use std::fs;
use std::path::PathBuf;

use jdiff_core::oracle::{
    golden_text, interpolate_modular_polynomial, parse_golden, PrecisionCtx,
};

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("src")
        .join("oracle")
        .join("goldens");
    fs::create_dir_all(&dir).expect("create goldens directory");

    // (level, base precision, cross-check precision)
    let plan: [(u32, usize, usize); 4] =
        [(2, 512, 1024), (3, 512, 1024), (4, 768, 1024), (5, 768, 1024)];

    for (level, base_bits, check_bits) in plan {
        eprintln!("Φ_{level}: interpolating at {base_bits} bits…");
        let base_ctx = PrecisionCtx::new(base_bits).expect("precision ctx");
        let terms = interpolate_modular_polynomial(level, &base_ctx)
            .expect("interpolation at base precision");

        eprintln!("Φ_{level}: cross-checking at {check_bits} bits…");
        let check_ctx = PrecisionCtx::new(check_bits).expect("precision ctx");
        let check = interpolate_modular_polynomial(level, &check_ctx)
            .expect("interpolation at cross-check precision");
        assert_eq!(
            terms, check,
            "Φ_{level} differs between {base_bits} and {check_bits} bits"
        );

        let text = golden_text(level, &terms);
        let (back_level, back_terms) =
            parse_golden(&text).expect("golden text parses");
        assert_eq!(back_level, level);
        assert_eq!(back_terms, terms, "golden round-trip mismatch");

        let path = dir.join(format!("phi_{level}.txt"));
        fs::write(&path, &text).expect("write golden file");
        eprintln!(
            "Φ_{level}: {} terms → {}",
            terms.len(),
            path.display()
        );
    }
}
