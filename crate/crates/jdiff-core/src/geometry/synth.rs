//! D-special synthesis: prolong the modular edge equations along the
//! block's geodesic links, saturate away the cleared denominators, and
//! eliminate the uniformizer.
//!
//! Each block works in its own jet ambient with one base variable `z` at
//! the spanning-tree root; the final variety lives in the global ambient
//! `y1..yn, dy1..dyn, ddy1..ddyn` (no prime characters).

use super::spec::{
    j_block_decomposition, root_path_matrices, GeodesicSpec, JBlock,
    JBlockDecomp, JSpecialSpec,
};
use crate::error::{Error, Result};
use crate::modular::{modular_polynomial, prolong, GeoMatrix, ProlongCtx};
use crate::poly::{Budget, Ideal, Poly, VarSet};

/// The three jet names of coordinate `i` under the document convention.
pub fn jet_names(i: usize) -> [String; 3] {
    [format!("y{i}"), format!("dy{i}"), format!("ddy{i}")]
}

/// Global jet ambient `y1..yn, dy1..dyn, ddy1..ddyn` (3n variables,
/// grouped by derivative order).
pub fn jet_ambient(n: usize) -> Result<VarSet> {
    let mut names = Vec::with_capacity(3 * n);
    for stem in ["y", "dy", "ddy"] {
        for i in 1..=n {
            names.push(format!("{stem}{i}"));
        }
    }
    VarSet::new(&names)
}

/// Extended ambient `x1..xn, y1..yn, dy1..dyn, ddy1..ddyn` (4n variables).
pub fn full_ambient(n: usize) -> Result<VarSet> {
    let mut names = Vec::with_capacity(4 * n);
    for stem in ["x", "y", "dy", "ddy"] {
        for i in 1..=n {
            names.push(format!("{stem}{i}"));
        }
    }
    VarSet::new(&names)
}

/// Recognize an ambient as `jet_ambient(n)` or `full_ambient(n)`,
/// returning `(n, has_x_group)`.
pub fn recognize_ambient(vars: &VarSet) -> Result<(usize, bool)> {
    for has_x in [false, true] {
        let groups = if has_x { 4 } else { 3 };
        if vars.len() % groups != 0 || vars.is_empty() {
            continue;
        }
        let n = vars.len() / groups;
        let expect = if has_x { full_ambient(n)? } else { jet_ambient(n)? };
        if *vars == expect {
            return Ok((n, has_x));
        }
    }
    Err(Error::InvalidArgument(format!(
        "ambient ({}) is not of the form y/dy/ddy (3n) or x/y/dy/ddy (4n)",
        vars.names().collect::<Vec<_>>().join(", ")
    )))
}

/// Rebuild `p` with every ambient variable renamed through `f`
/// (exponents untouched).
fn rename_vars(p: &Poly, f: impl Fn(&str) -> String) -> Result<Poly> {
    let names: Vec<String> = p.vars().names().map(|s| f(s)).collect();
    let vs = VarSet::new(&names)?;
    Ok(Poly::from_terms(
        &vs,
        p.terms().map(|(e, c)| (e.clone(), c.clone())),
    ))
}

/// Projection of `I` onto the jet groups of the coordinates `keep`
/// (and their `x` group when the ambient has one): eliminates every
/// other coordinate's variables.
pub fn project_onto(ideal: &Ideal, keep: &[usize]) -> Result<Ideal> {
    let (n, has_x) = recognize_ambient(ideal.vars())?;
    let mut drop: Vec<String> = Vec::new();
    for i in 1..=n {
        if !keep.contains(&i) {
            if has_x {
                drop.push(format!("x{i}"));
            }
            let [y, dy, ddy] = jet_names(i);
            drop.extend([y, dy, ddy]);
        }
    }
    let drop_refs: Vec<&str> = drop.iter().map(|s| s.as_str()).collect();
    ideal.eliminate(&drop_refs)
}

/// One synthesized j-block.
#[derive(Clone, Debug)]
pub struct BlockData {
    indices: Vec<usize>,
    matrices: Vec<GeoMatrix>,
    upper_triangular: bool,
    dimension: i64,
    ideal: Ideal,
}

impl BlockData {
    /// Member coordinates, ascending (root first).
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Root-path matrices `ĝ_i` (aligned with [`Self::indices`];
    /// identity at the root): `x_i = ĝ_i z`.
    pub fn matrices(&self) -> &[GeoMatrix] {
        &self.matrices
    }

    pub fn matrix_of(&self, i: usize) -> Option<&GeoMatrix> {
        let pos = self.indices.iter().position(|&x| x == i)?;
        Some(&self.matrices[pos])
    }

    pub fn upper_triangular(&self) -> bool {
        self.upper_triangular
    }

    pub fn dimension(&self) -> i64 {
        self.dimension
    }

    /// Block ideal in the block's own jet ambient
    /// (`y_i…, dy_i…, ddy_i…` over the member coordinates).
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn is_trivial(&self) -> bool {
        self.indices.len() == 1
    }
}

/// A synthesized D-special variety: the conjunction of its block ideals
/// in the 3n jet ambient, with per-block classification data.
#[derive(Clone, Debug)]
pub struct DSpecialVariety {
    n: usize,
    blocks: Vec<BlockData>,
    decomp: JBlockDecomp,
    ideal: Ideal,
}

impl DSpecialVariety {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[BlockData] {
        &self.blocks
    }

    pub fn decomposition(&self) -> &JBlockDecomp {
        &self.decomp
    }

    /// Defining ideal in `jet_ambient(n)`.
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// Total dimension: the sum of block dimensions.
    pub fn dimension(&self) -> i64 {
        self.blocks.iter().map(|b| b.dimension()).sum()
    }

    /// Upper triangular iff every block is.
    pub fn upper_triangular(&self) -> bool {
        self.blocks.iter().all(|b| b.upper_triangular)
    }

    pub fn block_containing(&self, i: usize) -> Option<&BlockData> {
        self.blocks.iter().find(|b| b.indices.contains(&i))
    }
}

/// Synthesize one block: modular edge equations, their first and second
/// prolongations, saturation by all `dy` and all cocycle denominators,
/// elimination of `z`, then classification.
fn synth_block(
    block: &JBlock,
    jspec: &JSpecialSpec,
    geo: &GeodesicSpec,
    budget: &Budget,
) -> Result<BlockData> {
    let indices = block.indices().to_vec();
    if block.is_trivial() {
        let amb = block_ambient(&indices)?;
        return Ok(BlockData {
            indices,
            matrices: vec![GeoMatrix::identity()],
            upper_triangular: true,
            dimension: 3,
            ideal: Ideal::zero(&amb),
        });
    }
    let path = root_path_matrices(block, geo)?;
    let matrices: Vec<GeoMatrix> =
        indices.iter().map(|i| path[i].clone()).collect();
    let stems: Vec<String> = indices.iter().map(|i| format!("y{i}")).collect();
    let stem_refs: Vec<&str> = stems.iter().map(|s| s.as_str()).collect();
    let ctx = ProlongCtx::with_names(&stem_refs, &matrices)?;

    let mut gens = Vec::new();
    for &(i, k, level) in jspec.edges() {
        if !indices.contains(&i) || !indices.contains(&k) {
            continue;
        }
        let phi = modular_polynomial(level)?;
        let p = phi.poly_in(ctx.vars(), &format!("y{i}"), &format!("y{k}"))?;
        let e1 = prolong(&p, &ctx)?;
        let e2 = prolong(&e1, &ctx)?;
        gens.extend([p, e1, e2]);
    }

    // Saturate by ∏ dy_i · ∏ (c_i z + d_i): the denominators cleared by
    // the prolongation, plus the jet coordinates the derivation divides
    // by on the geodesic (E-points have nonzero first jets).
    let mut sat = ctx.cocycle_product()?;
    for i in &indices {
        sat = sat.mul(&Poly::var(ctx.vars(), &format!("y{i}_1"))?);
    }
    let raw = Ideal::new(ctx.vars(), &gens)?.with_budget(budget.clone());
    let eliminated = raw.saturate_eliminate(&sat, &["z"])?;

    // Rename the prolongation jets (y<i>_1, y<i>_2) into the document
    // convention (dy<i>, ddy<i>).
    let renamed: Vec<Poly> = eliminated
        .gens()
        .iter()
        .map(|g| {
            rename_vars(g, |name| {
                if let Some(stem) = name.strip_suffix("_1") {
                    format!("d{stem}")
                } else if let Some(stem) = name.strip_suffix("_2") {
                    format!("dd{stem}")
                } else {
                    name.to_string()
                }
            })
        })
        .collect::<Result<_>>()?;
    let amb = block_ambient(&indices)?;
    let ideal = Ideal::new(&amb, &renamed)?.with_budget(budget.clone());

    let upper_triangular = matrices.iter().all(|g| g.is_upper_triangular());
    let dimension = ideal.dimension()?;
    let expected = if upper_triangular { 3 } else { 4 };
    if dimension != expected {
        return Err(Error::ComputationAborted(format!(
            "synthesized block {:?} has dimension {dimension}, but its \
             matrices are {}upper triangular (expected {expected})",
            indices,
            if upper_triangular { "" } else { "not " },
        )));
    }
    Ok(BlockData { indices, matrices, upper_triangular, dimension, ideal })
}

/// Jet ambient of one block: `y_i…, dy_i…, ddy_i…` over its members.
fn block_ambient(indices: &[usize]) -> Result<VarSet> {
    let mut names = Vec::with_capacity(3 * indices.len());
    for stem in ["y", "dy", "ddy"] {
        for i in indices {
            names.push(format!("{stem}{i}"));
        }
    }
    VarSet::new(&names)
}

/// Synthesize the D-special variety associated with a j-special spec and
/// a matching geodesic spec: per-block prolongation + saturation +
/// elimination, conjoined over all blocks, with computed classification
/// verified against the matrix criterion.
pub fn synthesize_dspecial(
    jspec: &JSpecialSpec,
    geo: &GeodesicSpec,
) -> Result<DSpecialVariety> {
    synthesize_dspecial_with_budget(jspec, geo, &Budget::default())
}

/// [`synthesize_dspecial`] with an explicit Gröbner budget.
pub fn synthesize_dspecial_with_budget(
    jspec: &JSpecialSpec,
    geo: &GeodesicSpec,
    budget: &Budget,
) -> Result<DSpecialVariety> {
    if !geo.matches(jspec) {
        return Err(Error::InvalidGeodesic(
            "geodesic spec does not mirror the j-special edge pattern".into(),
        ));
    }
    let decomp = j_block_decomposition(jspec);
    let n = jspec.n();
    let blocks: Vec<BlockData> = decomp
        .blocks()
        .iter()
        .map(|b| synth_block(b, jspec, geo, budget))
        .collect::<Result<_>>()?;
    let amb = jet_ambient(n)?;
    let mut gens: Vec<Poly> = Vec::new();
    for b in &blocks {
        for g in b.ideal.gens() {
            gens.push(g.embed(&amb)?);
        }
    }
    let ideal = Ideal::new(&amb, &gens)?.with_budget(budget.clone());
    Ok(DSpecialVariety { n, blocks, decomp, ideal })
}

/// Assemble a [`DSpecialVariety`] from already-synthesized blocks
/// (used by the closure operation).
pub(super) fn assemble_variety(
    n: usize,
    decomp: JBlockDecomp,
    blocks: Vec<BlockData>,
    budget: &Budget,
) -> Result<DSpecialVariety> {
    let amb = jet_ambient(n)?;
    let mut gens: Vec<Poly> = Vec::new();
    for b in &blocks {
        for g in b.ideal.gens() {
            gens.push(g.embed(&amb)?);
        }
    }
    let ideal = Ideal::new(&amb, &gens)?.with_budget(budget.clone());
    Ok(DSpecialVariety { n, blocks, decomp, ideal })
}

/// Synthesize a single candidate block in isolation (used by closure
/// matching): `indices` carry global coordinate labels.
pub(super) fn synth_block_only(
    block: &JBlock,
    jspec: &JSpecialSpec,
    geo: &GeodesicSpec,
    budget: &Budget,
) -> Result<BlockData> {
    synth_block(block, jspec, geo, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::GeoMatrix;
    use crate::oracle::{eval_j_jet, eval_poly_bigc, BigC, PrecisionCtx};
    use crate::poly::same_radical;

    fn m(a: i64, b: i64, c: i64, d: i64) -> GeoMatrix {
        GeoMatrix::from_integers(a, b, c, d).unwrap()
    }

    fn pair_spec(level: u32, g: GeoMatrix) -> (JSpecialSpec, GeodesicSpec) {
        (
            JSpecialSpec::new(2, &[(1, 2, level)]).unwrap(),
            GeodesicSpec::new(2, &[(1, 2, g)]).unwrap(),
        )
    }

    #[test]
    fn identity_block_is_the_diagonal() {
        let (j, g) = pair_spec(1, GeoMatrix::identity());
        let s = synthesize_dspecial(&j, &g).unwrap();
        assert_eq!(s.dimension(), 3);
        assert!(s.upper_triangular());
        let amb = jet_ambient(2).unwrap();
        let expect = Ideal::new(
            &amb,
            &[
                Poly::parse("y1 - y2", &amb).unwrap(),
                Poly::parse("dy1 - dy2", &amb).unwrap(),
                Poly::parse("ddy1 - ddy2", &amb).unwrap(),
            ],
        )
        .unwrap();
        assert!(same_radical(s.ideal(), &expect).unwrap());
    }

    #[test]
    fn hecke_block_has_dimension_three() {
        // x1 = g x2 with g = [[1,0],[0,2]] places x2 = 2z at the root 1.
        let (j, g) = pair_spec(2, m(1, 0, 0, 2));
        let s = synthesize_dspecial(&j, &g).unwrap();
        assert_eq!(s.dimension(), 3);
        assert!(s.upper_triangular());
        assert_eq!(s.blocks().len(), 1);
        // The Φ-edge survives in the radical.
        let phi2 = modular_polynomial(2).unwrap();
        let p = phi2.poly_in(s.ideal().vars(), "y1", "y2").unwrap();
        assert!(s.ideal().radical_membership(&p).unwrap());
    }

    #[test]
    fn twisted_hecke_block_has_dimension_four() {
        let twist = m(0, -1, 1, 0).compose(&m(2, 0, 0, 1));
        let (j, g) = pair_spec(2, twist);
        let s = synthesize_dspecial(&j, &g).unwrap();
        assert_eq!(s.dimension(), 4);
        assert!(!s.upper_triangular());
        let phi2 = modular_polynomial(2).unwrap();
        let p = phi2.poly_in(s.ideal().vars(), "y1", "y2").unwrap();
        assert!(s.ideal().radical_membership(&p).unwrap());
    }

    #[test]
    fn mixed_blocks_sum_dimensions_and_triangularity_criterion() {
        let j =
            JSpecialSpec::new(3, &[(1, 2, 2)]).unwrap();
        let g =
            GeodesicSpec::new(3, &[(1, 2, m(1, 0, 0, 2))]).unwrap();
        let s = synthesize_dspecial(&j, &g).unwrap();
        assert_eq!(s.blocks().len(), 2);
        assert_eq!(s.dimension(), 3 + 3);
        // dim T = number of blocks; upper triangular ⟺ dim S = 3 dim T.
        assert_eq!(j.dimension(), 2);
        assert!(s.upper_triangular());
        assert_eq!(s.dimension(), 3 * j.dimension() as i64);
    }

    #[test]
    fn chain_of_identities_collapses_to_one_diagonal_block() {
        let j = JSpecialSpec::new(3, &[(1, 2, 1), (2, 3, 1)]).unwrap();
        let g = GeodesicSpec::new(
            3,
            &[
                (1, 2, GeoMatrix::identity()),
                (2, 3, GeoMatrix::identity()),
            ],
        )
        .unwrap();
        let s = synthesize_dspecial(&j, &g).unwrap();
        assert_eq!(s.blocks().len(), 1);
        assert_eq!(s.dimension(), 3);
        let amb = jet_ambient(3).unwrap();
        for src in ["y1 - y3", "dy2 - dy3", "ddy1 - ddy2"] {
            let p = Poly::parse(src, &amb).unwrap();
            assert!(s.ideal().radical_membership(&p).unwrap(), "{src}");
        }
    }

    #[test]
    fn principal_dim4_ideal_matches_the_resultant_route() {
        // Φ₁ edge with a non-upper-triangular matrix: the eliminated
        // ideal is principal and agrees with Res_z of the two derived
        // equations.
        use crate::modular::geodesic_derived_equation;
        use crate::poly::resultant;
        let s_mat = m(0, -1, 1, 0);
        let (j, g) = pair_spec(1, s_mat.clone());
        let s = synthesize_dspecial(&j, &g).unwrap();
        assert_eq!(s.dimension(), 4);

        // Independent route: derived equations for x2 = ĝ2 z with
        // ĝ2 = inverse of the edge matrix, then Res_z.
        let phi1 = modular_polynomial(1).unwrap();
        let (e1, e2) =
            geodesic_derived_equation(&phi1, &s_mat.inverse().unwrap())
                .unwrap();
        let res = resultant(&e1, &e2, "z").unwrap();
        let renamed = super::rename_vars(&res, |name| {
            if let Some(stem) = name.strip_suffix("_1") {
                format!("d{stem}")
            } else if let Some(stem) = name.strip_suffix("_2") {
                format!("dd{stem}")
            } else {
                name.to_string()
            }
        })
        .unwrap();
        let amb = jet_ambient(2).unwrap();
        assert!(s
            .ideal()
            .radical_membership(&renamed.embed(&amb).unwrap())
            .unwrap());
        // And conversely every generator of the synthesis vanishes on the
        // resultant hypersurface saturated by dy1·dy2.
        let res_ideal = Ideal::new(&amb, &[renamed.embed(&amb).unwrap()])
            .unwrap()
            .saturate(
                &Poly::parse("dy1*dy2", &amb).unwrap(),
            )
            .unwrap();
        for gen in s.ideal().gens() {
            assert!(res_ideal.radical_membership(gen).unwrap());
        }
    }

    #[test]
    fn oracle_jets_lie_on_synthesized_blocks() {
        // Upper-triangular Hecke block: x2 = 2z.
        let ctx = PrecisionCtx::new(192).unwrap();
        let (j, g) = pair_spec(2, m(1, 0, 0, 2));
        let s = synthesize_dspecial(&j, &g).unwrap();
        let mut checked = 0usize;
        for t in 0..12 {
            let tau =
                BigC::from_f64s(0.031 + 0.017 * t as f64, 0.97, &ctx);
            let two_tau = tau.add(&tau, &ctx);
            let j1 = eval_j_jet(&tau, &ctx).unwrap();
            let j2 = eval_j_jet(&two_tau, &ctx).unwrap();
            // Ambient order: y1, y2, dy1, dy2, ddy1, ddy2.
            let point = vec![
                j1.j.clone(),
                j2.j.clone(),
                j1.j1.clone(),
                j2.j1.clone(),
                j1.j2.clone(),
                j2.j2.clone(),
            ];
            for gen in s.ideal().gens() {
                let v = eval_poly_bigc(gen, &point, &ctx).unwrap();
                assert!(
                    v.abs_f64(&ctx) < 1e-10,
                    "generator residual {:.3e}",
                    v.abs_f64(&ctx)
                );
            }
            checked += 1;
        }
        assert!(checked >= 10);
    }

    #[test]
    fn oracle_jets_lie_on_a_twisted_block() {
        // x2 = ĝ2 z with ĝ2 = (S·[[1,0],[0,2]])^{-1}: pick the edge
        // matrix so that ĝ2 = [[0,-2],[1,0]], z ↦ -2/z, which keeps both
        // members inside the oracle domain for suitable τ.
        let ctx = PrecisionCtx::new(192).unwrap();
        let target = m(0, -2, 1, 0);
        let edge = target.inverse().unwrap();
        let (j, g) = pair_spec(2, edge);
        let s = synthesize_dspecial(&j, &g).unwrap();
        assert_eq!(s.dimension(), 4);
        assert_eq!(
            s.blocks()[0].matrix_of(2).unwrap(),
            &target
        );
        let mut checked = 0usize;
        for t in 0..12 {
            let tau =
                BigC::from_f64s(0.013 * t as f64 - 0.07, 1.31, &ctx);
            let gt = crate::oracle::moebius(
                &target.to_rats(),
                &tau,
                &ctx,
            )
            .unwrap();
            let j1 = eval_j_jet(&tau, &ctx).unwrap();
            let j2 = eval_j_jet(&gt, &ctx).unwrap();
            let point = vec![
                j1.j.clone(),
                j2.j.clone(),
                j1.j1.clone(),
                j2.j1.clone(),
                j1.j2.clone(),
                j2.j2.clone(),
            ];
            for gen in s.ideal().gens() {
                let v = eval_poly_bigc(gen, &point, &ctx).unwrap();
                assert!(
                    v.abs_f64(&ctx) < 1e-10,
                    "generator residual {:.3e}",
                    v.abs_f64(&ctx)
                );
            }
            checked += 1;
        }
        assert!(checked >= 10);
    }

    #[test]
    fn tiny_budget_aborts_the_elimination() {
        let (j, g) = pair_spec(2, m(1, 0, 0, 2));
        let budget = Budget { max_basis: 2, max_degree: 2, max_pairs: 2 };
        assert!(matches!(
            synthesize_dspecial_with_budget(&j, &g, &budget),
            Err(Error::ComputationAborted(_))
        ));
    }

    #[test]
    fn ambient_recognition_and_projection() {
        let amb = jet_ambient(2).unwrap();
        assert_eq!(recognize_ambient(&amb).unwrap(), (2, false));
        let full = full_ambient(3).unwrap();
        assert_eq!(recognize_ambient(&full).unwrap(), (3, true));
        assert!(recognize_ambient(&VarSet::new(&["a", "b"]).unwrap()).is_err());

        let i = Ideal::new(
            &amb,
            &[
                Poly::parse("y1 - y2", &amb).unwrap(),
                Poly::parse("dy1 - 7", &amb).unwrap(),
            ],
        )
        .unwrap();
        let p = project_onto(&i, &[1]).unwrap();
        assert_eq!(p.vars().len(), 3);
        assert_eq!(p.dimension().unwrap(), 2); // dy1 pinned, y1/ddy1 free
    }
}
