//! Scratch performance probe (not part of the library).

use jdiff_core::modular::{modular_polynomial, prolong, GeoMatrix, ProlongCtx};
use jdiff_core::poly::{groebner_basis, Budget, MonOrder};
use std::time::Instant;

fn main() {
    let g = GeoMatrix::from_integers(2, 0, 0, 1).unwrap();
    let ctx =
        ProlongCtx::with_names(&["y1", "y2"], &[GeoMatrix::identity(), g])
            .unwrap();
    let phi = modular_polynomial(2).unwrap();
    let p = phi.poly_in(ctx.vars(), "y1", "y2").unwrap();
    let e1 = prolong(&p, &ctx).unwrap();
    let e2 = prolong(&e1, &ctx).unwrap();
    let gens = vec![p.clone(), e1.clone(), e2.clone()];

    // Shape of the saturation system's reduced GB mod p.
    use jdiff_core::poly::{debug_modp_shape, Poly, VarSet};
    let vnames: Vec<String> = std::iter::once("t".to_string())
        .chain(ctx.vars().names().map(|s| s.to_string()))
        .collect();
    let refs: Vec<&str> = vnames.iter().map(|s| s.as_str()).collect();
    let ext = VarSet::new(&refs).unwrap();
    let mut sys: Vec<Poly> = gens.iter().map(|g| g.embed(&ext).unwrap()).collect();
    let satp = Poly::parse("1 - t*y1_1*y2_1", &ext).unwrap();
    sys.push(satp);
    // Reorder so the elimination block [t, z] is in front: ext is already
    // (t, z, jets...) since ctx.vars() starts with z.
    let budget = Budget { max_basis: 3000, max_degree: 100, max_pairs: 500_000 };
    let t0 = Instant::now();
    match debug_modp_shape(&sys, MonOrder::Block { front: 2 }, &budget) {
        Some(shape) => {
            eprintln!("mod-p reduced GB in {:?}: {} elements", t0.elapsed(), shape.len());
            let mut eliminated = 0;
            for (lm, deg, terms) in &shape {
                let in_back = lm[0] == 0 && lm[1] == 0;
                if in_back { eliminated += 1; }
                eprintln!("  lm {:?} deg {:2} terms {:5} {}", lm, deg, terms,
                          if in_back { "ELIM" } else { "" });
            }
            eprintln!("eliminated-part elements: {eliminated}");
        }
        None => eprintln!("mod-p shape failed after {:?}", t0.elapsed()),
    }
}
