//! Homotopical constructions: splitting an acyclic fibration off its kernel,
//! sections, pullbacks of strict fibrations with the conjugated structure on
//! the carrier, path objects, and the factorization of an arbitrary morphism
//! as a weak equivalence followed by a fibration.

use crate::ainfty::{
    coderivation_words, eval_wordsum, for_each_word, morphism_words, product, tensor_dga_map,
    tensor_with_dga, AInfty, Morphism, ProductAlgebra, Table, TensorDga, WordSum,
};
use crate::cochains::{simplex_cochains, vertex_evaluation};
use crate::error::{Error, Result};
use crate::linalg::{
    contract_acyclic_fibration, filtered_section, is_fibration, is_weak_equivalence,
    kernel_subspace, BasisEntry, Combo, LinMap, Space, Subspace,
};
use crate::scalar::Scalar;
use std::sync::Arc;

/// An acyclic fibration split off its kernel: the target times the abelian
/// kernel complex, with an explicit isomorphism whose inverse has linear part
/// tau + embedding.
pub struct Decomposition {
    /// The kernel of the linear part, as an abelian algebra carrying only the
    /// restricted differential.
    pub kernel: Arc<AInfty>,
    pub kernel_embed: LinMap,
    /// The projection onto the kernel factor; its higher components are
    /// driven by the contraction homotopy through psi1 h Q1_n.
    pub psi: Morphism,
    pub product: ProductAlgebra,
    pub iso: Morphism,
    pub iso_inv: Morphism,
}

pub fn decompose_acyclic_fibration(phi: &Morphism) -> Result<Decomposition> {
    let a = &phi.source;
    let field = a.space.field;
    let f = phi.linear_part();
    let src = a.tangent()?;
    let tgt = phi.target.tangent()?;
    let (tau, h) = contract_acyclic_fibration(&src, &tgt, &f)?;

    let kernel = kernel_subspace(&f)?;
    let d_k = kernel.corestrict_map(&src.d.compose(&kernel.embed))?;
    let mut t1 = Table::new();
    for i in 0..kernel.space.dim() {
        let v = d_k.col(i).clone();
        if !v.is_zero() {
            t1.insert(vec![i], v);
        }
    }
    let k_alg = AInfty::new(kernel.space.clone(), vec![t1])?;

    // psi1 = id - tau Phi1_1 lands in the kernel because tau is a section.
    let cols = (0..a.space.dim())
        .map(|i| Combo::single(i, field.one()).sub(&tau.apply(f.col(i))))
        .collect();
    let p = LinMap::new(a.space.clone(), a.space.clone(), 0, cols)?;
    let psi1 = kernel.corestrict_map(&p)?;

    let max_n = a.max_arity();
    let mut tables: Vec<Table> = Vec::with_capacity(max_n);
    let mut t = Table::new();
    for i in 0..a.space.dim() {
        let v = psi1.col(i);
        if !v.is_zero() {
            t.insert(vec![i], v.clone());
        }
    }
    tables.push(t);
    for n in 2..=max_n {
        let mut t = Table::new();
        if let Some(qn) = a.tables().get(n - 1) {
            for (w, v) in qn {
                let out = psi1.apply(&h.apply(v));
                if !out.is_zero() {
                    t.insert(w.clone(), out);
                }
            }
        }
        tables.push(t);
    }
    let psi = Morphism::new(a.clone(), k_alg.clone(), tables)?;

    let pr = product(&phi.target, &k_alg)?;
    let iso = pr.pair(phi, &psi)?;
    let iso_inv = iso.inverse()?;

    // The inverse linear part must be theta(x', z) = tau(x') + z.
    let mut theta_cols = Vec::with_capacity(pr.algebra.space.dim());
    for j in 0..phi.target.space.dim() {
        theta_cols.push(tau.col(j).clone());
    }
    for m in 0..kernel.space.dim() {
        theta_cols.push(kernel.embed.col(m).clone());
    }
    let theta = LinMap::new(pr.algebra.space.clone(), a.space.clone(), 0, theta_cols)?;
    if iso_inv.linear_part() != theta {
        return Err(Error::Structure(
            "inverse linear part is not tau plus the kernel embedding".into(),
        ));
    }
    if !pr.pr_left().compose(&iso).equals(phi) {
        return Err(Error::Structure(
            "projecting the splitting does not recover the fibration".into(),
        ));
    }
    Ok(Decomposition {
        kernel: k_alg,
        kernel_embed: kernel.embed,
        psi,
        product: pr,
        iso,
        iso_inv,
    })
}

/// A section of an acyclic fibration: invert the splitting and include the
/// target. The section is itself a weak equivalence.
pub fn right_inverse_acyclic_fibration(phi: &Morphism) -> Result<Morphism> {
    let dec = decompose_acyclic_fibration(phi)?;
    let target = &phi.target;
    let field = target.space.field;
    let cols = (0..target.space.dim())
        .map(|i| Combo::single(i, field.one()))
        .collect();
    let incl = LinMap::new(
        target.space.clone(),
        dec.product.algebra.space.clone(),
        0,
        cols,
    )?;
    let incl = Morphism::strict(target.clone(), dec.product.algebra.clone(), &incl)?;
    let chi = dec.iso_inv.compose(&incl);
    if !phi.compose(&chi).is_identity() {
        return Err(Error::Structure("constructed section fails to split".into()));
    }
    if !is_weak_equivalence(&target.tangent()?, &phi.source.tangent()?, &chi.linear_part()) {
        return Err(Error::Structure(
            "constructed section is not a weak equivalence".into(),
        ));
    }
    Ok(chi)
}

/// Pullback of a strict fibration along an arbitrary morphism. The carrier is
/// the base times the kernel of the fibration's linear part, sitting inside
/// the ambient product, with structure maps conjugated through the table
/// families h and j.
pub struct Pullback {
    pub algebra: Arc<AInfty>,
    /// Leg to the source of the morphism that was pulled back along; strict,
    /// a fibration, acyclic whenever the input fibration is.
    pub proj: Morphism,
    /// Leg to the total space of the fibration.
    pub cover: Morphism,
    /// Conjugating table families on the ambient product, mutually inverse.
    pub h: Morphism,
    pub j: Morphism,
    pub ambient: ProductAlgebra,
    carrier: Subspace,
    phi: Morphism,
    theta: Morphism,
}

pub fn pullback_strict_fibration(phi: &Morphism, theta: &Morphism) -> Result<Pullback> {
    let sigma = filtered_section(&phi.linear_part())?;
    pullback_with_section(phi, theta, &sigma)
}

/// Same construction with an explicit filtered section of the fibration's
/// linear part. Different sections give different tables on the same carrier;
/// the result is isomorphic either way, which the tests pin down.
pub fn pullback_with_section(phi: &Morphism, theta: &Morphism, sigma: &LinMap) -> Result<Pullback> {
    if !phi.is_strict() {
        return Err(Error::NotStrict("only strict fibrations pull back".into()));
    }
    let f = phi.linear_part();
    if !is_fibration(&f) {
        return Err(Error::NotFibration("pullback needs a fibration".into()));
    }
    if theta.target.space != phi.target.space {
        return Err(Error::Invalid("pullback legs must share their target".into()));
    }
    if sigma.source != phi.target.space || sigma.target != phi.source.space || sigma.degree != 0 {
        return Err(Error::Invalid("section type mismatch".into()));
    }
    if f.compose(sigma) != LinMap::identity(phi.target.space.clone()) {
        return Err(Error::Invalid("sigma is not a section of the fibration".into()));
    }

    let ambient = product(&theta.source, &phi.source)?;
    let field = ambient.algebra.space.field;
    let nl = ambient.dim_left();
    let sp = ambient.algebra.space.clone();
    let max_n = ambient.algebra.max_arity();

    // h shears by sigma Theta, j shears back.
    let shear = |minus: bool| -> Result<Morphism> {
        let mut tables: Vec<Table> = Vec::with_capacity(max_n);
        let mut t1 = Table::new();
        for i in 0..sp.dim() {
            let mut v = Combo::single(i, field.one());
            if i < nl {
                let corr = sigma.apply(&theta.op_word(&[i])).map_indices(|t| t + nl);
                v = if minus { v.sub(&corr) } else { v.add(&corr) };
            }
            t1.insert(vec![i], v);
        }
        tables.push(t1);
        for n in 2..=max_n {
            let mut t = Table::new();
            if let Some(tt) = theta.tables().get(n - 1) {
                for (w, v) in tt {
                    let out = sigma.apply(v).map_indices(|i| i + nl);
                    if !out.is_zero() {
                        t.insert(w.clone(), if minus { out.neg() } else { out });
                    }
                }
            }
            tables.push(t);
        }
        Morphism::new(ambient.algebra.clone(), ambient.algebra.clone(), tables)
    };
    let h = shear(false)?;
    let j = shear(true)?;
    if !h.compose(&j).is_identity() || !j.compose(&h).is_identity() {
        return Err(Error::Structure("shear families are not mutually inverse".into()));
    }

    // Carrier: the base on the left, the kernel of the fibration on the right.
    let ker = kernel_subspace(&f)?;
    let mut entries = Vec::with_capacity(nl + ker.space.dim());
    for e in theta.source.space.entries() {
        entries.push(BasisEntry {
            name: format!("l.{}", e.name),
            degree: e.degree,
            weight: e.weight,
        });
    }
    for e in ker.space.entries() {
        entries.push(BasisEntry {
            name: format!("r.{}", e.name),
            degree: e.degree,
            weight: e.weight,
        });
    }
    let carrier_space = Space::new(field, sp.nilpotency, entries)?;
    let mut embed_cols = Vec::with_capacity(carrier_space.dim());
    for i in 0..nl {
        embed_cols.push(Combo::single(i, field.one()));
    }
    for m in 0..ker.space.dim() {
        embed_cols.push(ker.embed.col(m).map_indices(|i| i + nl));
    }
    let embed = LinMap::new(carrier_space.clone(), sp.clone(), 0, embed_cols)?;
    let carrier = Subspace { space: carrier_space.clone(), embed };

    // Structure maps by conjugation, arity by arity; each total lands back in
    // the carrier even though individual terms do not.
    let budget = carrier_space.nilpotency - 1;
    let mut q_tables: Vec<Table> = Vec::with_capacity(max_n);
    let mut failure: Option<Error> = None;
    for n in 1..=max_n {
        let mut t = Table::new();
        for_each_word(&carrier_space, n, budget, &mut |word| {
            if failure.is_some() {
                return;
            }
            let letters: Vec<&Combo> = word.iter().map(|&i| carrier.embed.col(i)).collect();
            let mut total = Combo::zero();
            expand_letters(&letters, field.one(), &mut Vec::with_capacity(n), &mut |w, c| {
                total = total.add(&conjugated_op(&ambient.algebra, &h, &j, w).scale(c));
            });
            if total.is_zero() {
                return;
            }
            match carrier.corestrict(&total) {
                Ok(v) => {
                    t.insert(word.to_vec(), v);
                }
                Err(_) => {
                    failure = Some(Error::Structure(
                        "conjugated operation leaves the pullback carrier".into(),
                    ));
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        q_tables.push(t);
    }
    let algebra = AInfty::new(carrier_space.clone(), q_tables)?;
    algebra.check_stasheff()?;

    // Legs: strict projection to the base of Theta, and the shear-corrected
    // map to the total space of Phi.
    let mut proj_cols = Vec::with_capacity(carrier_space.dim());
    for i in 0..nl {
        proj_cols.push(Combo::single(i, field.one()));
    }
    for _ in 0..ker.space.dim() {
        proj_cols.push(Combo::zero());
    }
    let proj_map = LinMap::new(carrier_space.clone(), theta.source.space.clone(), 0, proj_cols)?;
    let proj = Morphism::strict(algebra.clone(), theta.source.clone(), &proj_map)?;

    let mut cover_tables: Vec<Table> = Vec::with_capacity(max_n);
    let mut t1 = Table::new();
    for i in 0..nl {
        let v = sigma.apply(&theta.op_word(&[i]));
        if !v.is_zero() {
            t1.insert(vec![i], v);
        }
    }
    for m in 0..ker.space.dim() {
        t1.insert(vec![nl + m], ker.embed.col(m).clone());
    }
    cover_tables.push(t1);
    for n in 2..=max_n {
        let mut t = Table::new();
        if let Some(tt) = theta.tables().get(n - 1) {
            for (w, v) in tt {
                let out = sigma.apply(v);
                if !out.is_zero() {
                    t.insert(w.clone(), out);
                }
            }
        }
        cover_tables.push(t);
    }
    let cover = Morphism::new(algebra.clone(), phi.source.clone(), cover_tables)?;

    if !phi.compose(&cover).equals(&theta.compose(&proj)) {
        return Err(Error::Structure("pullback square does not commute".into()));
    }
    if !is_fibration(&proj.linear_part()) {
        return Err(Error::Structure("pullback leg is not a fibration".into()));
    }
    if is_weak_equivalence(&phi.source.tangent()?, &phi.target.tangent()?, &f)
        && !is_weak_equivalence(&algebra.tangent()?, &theta.source.tangent()?, &proj.linear_part())
    {
        return Err(Error::Structure(
            "pulling back an acyclic fibration lost acyclicity".into(),
        ));
    }

    Ok(Pullback { algebra, proj, cover, h, j, ambient, carrier, phi: phi.clone(), theta: theta.clone() })
}

impl Pullback {
    /// The mediating morphism of a cone (f into the base, g into the total
    /// space agreeing over the shared target): shear the pairing back and
    /// read it off in carrier coordinates. Any morphism with these legs
    /// shears to the same pairing, so this is the unique one.
    pub fn mediating(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        if f.source.space != g.source.space {
            return Err(Error::Invalid("cone legs have different sources".into()));
        }
        if f.target.space != self.theta.source.space || g.target.space != self.phi.source.space {
            return Err(Error::Invalid("cone legs do not match the pullback".into()));
        }
        if !self.phi.compose(g).equals(&self.theta.compose(f)) {
            return Err(Error::Invalid("the cone does not commute over the base".into()));
        }
        let pair = self.ambient.pair(f, g)?;
        let down = self.j.compose(&pair);
        let mut tables: Vec<Table> = Vec::with_capacity(down.tables().len());
        for t in down.tables() {
            let mut nt = Table::new();
            for (w, v) in t {
                let c = self.carrier.corestrict(v).map_err(|_| {
                    Error::Structure("mediating morphism leaves the pullback carrier".into())
                })?;
                if !c.is_zero() {
                    nt.insert(w.clone(), c);
                }
            }
            tables.push(nt);
        }
        let mu = Morphism::new(f.source.clone(), self.algebra.clone(), tables)?;
        if !self.proj.compose(&mu).equals(f) || !self.cover.compose(&mu).equals(g) {
            return Err(Error::Structure("mediating morphism fails a leg".into()));
        }
        Ok(mu)
    }

    /// The inclusion of the carrier into the ambient product, as raw tables.
    pub fn embed_morphism(&self) -> Morphism {
        Morphism::strict(
            self.algebra.clone(),
            self.ambient.algebra.clone(),
            &self.carrier.embed,
        )
        .expect("carrier embedding is filtered")
    }
}

/// Multilinear expansion of a word of combos into basis words.
fn expand_letters(
    letters: &[&Combo],
    coeff: Scalar,
    acc: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize], &Scalar),
) {
    if coeff.is_zero() {
        return;
    }
    match letters.split_first() {
        None => f(acc, &coeff),
        Some((head, rest)) => {
            for (i, c) in head.terms() {
                acc.push(*i);
                expand_letters(rest, coeff.mul(c), acc, f);
                acc.pop();
            }
        }
    }
}

/// One entry of the conjugated structure: sum over intermediate arities of
/// j1_b (Q_x)^b_c h^c_n on a basis word of the ambient product.
fn conjugated_op(ambient: &Arc<AInfty>, h: &Morphism, j: &Morphism, word: &[usize]) -> Combo {
    let field = ambient.space.field;
    let n = word.len();
    let mut acc = Combo::zero();
    for c in 1..=n {
        let hc = morphism_words(field, h.tables(), c, word);
        if hc.is_zero() {
            continue;
        }
        for b in 1..=c {
            let mut mid = WordSum::new();
            for (cw, co) in hc.iter() {
                let qcw = coderivation_words(&ambient.space, ambient.tables(), b, cw);
                for (bw, c2) in qcw.iter() {
                    mid.add_term(bw.clone(), c2.mul(co));
                }
            }
            acc = acc.add(&eval_wordsum(j.tables(), b, &mid));
        }
    }
    acc
}

/// A path object: the tensor with the cochains of the interval, factoring the
/// diagonal as a weak equivalence (constant paths) followed by a fibration
/// (evaluation at both endpoints).
pub struct PathObject {
    pub tensor: TensorDga,
    pub algebra: Arc<AInfty>,
    /// a maps to a tensor the unit cochain: a on both vertices, nothing on
    /// the edge.
    pub constant: Morphism,
    pub ev0: Morphism,
    pub ev1: Morphism,
    /// (ev0, ev1) into the product.
    pub legs: Morphism,
    pub target: ProductAlgebra,
}

pub fn path_object(a: &Arc<AInfty>) -> Result<PathObject> {
    let field = a.space.field;
    let cochains = simplex_cochains(field, 1)?;
    let tensor = tensor_with_dga(a, &cochains.dga)?;
    let algebra = tensor.algebra.clone();
    let s0 = cochains.index_of(&[0]).unwrap();
    let s1 = cochains.index_of(&[1]).unwrap();

    let cols = (0..a.space.dim())
        .map(|i| {
            let e = Combo::single(i, field.one());
            tensor.insert_left(&e, s0).add(&tensor.insert_left(&e, s1))
        })
        .collect();
    let constant_map = LinMap::new(a.space.clone(), algebra.space.clone(), 0, cols)?;
    let constant = Morphism::strict(a.clone(), algebra.clone(), &constant_map)?;

    let ev = |i: usize| -> Result<Morphism> {
        let to_point = tensor_dga_map(a, &vertex_evaluation(field, 1, i)?)?;
        let point = to_point.target.clone();
        let collapse_cols = (0..point.space.dim())
            .map(|k| Combo::single(k, field.one()))
            .collect();
        let collapse = LinMap::new(point.space.clone(), a.space.clone(), 0, collapse_cols)?;
        Ok(Morphism::strict(point, a.clone(), &collapse)?.compose(&to_point))
    };
    let ev0 = ev(0)?;
    let ev1 = ev(1)?;

    let target = product(a, a)?;
    let legs = target.pair(&ev0, &ev1)?;
    let diagonal = target.pair(&Morphism::identity(a), &Morphism::identity(a))?;
    if !legs.compose(&constant).equals(&diagonal) {
        return Err(Error::Structure("path object does not factor the diagonal".into()));
    }
    if !ev0.compose(&constant).is_identity() || !ev1.compose(&constant).is_identity() {
        return Err(Error::Structure("endpoint evaluation does not retract".into()));
    }
    if !is_weak_equivalence(&a.tangent()?, &algebra.tangent()?, &constant.linear_part()) {
        return Err(Error::Structure("constant paths are not a weak equivalence".into()));
    }
    if !is_fibration(&legs.linear_part()) {
        return Err(Error::Structure("endpoint evaluation is not a fibration".into()));
    }
    Ok(PathObject { tensor, algebra, constant, ev0, ev1, legs, target })
}

/// A factorization of theta as a weak equivalence into the pullback of the
/// path object of its target, followed by evaluation at the far endpoint.
pub struct Factorization {
    pub equivalence: Morphism,
    pub fibration: Morphism,
    pub pullback: Pullback,
    pub path: PathObject,
}

pub fn factorize(theta: &Morphism) -> Result<Factorization> {
    let path = path_object(&theta.target)?;
    let pullback = pullback_strict_fibration(&path.ev0, theta)?;
    let equivalence = pullback.mediating(
        &Morphism::identity(&theta.source),
        &path.constant.compose(theta),
    )?;
    let fibration = path.ev1.compose(&pullback.cover);
    if !fibration.compose(&equivalence).equals(theta) {
        return Err(Error::Structure("factorization does not compose to the input".into()));
    }
    if !pullback.proj.compose(&equivalence).is_identity() {
        return Err(Error::Structure(
            "factorization section fails against the acyclic leg".into(),
        ));
    }
    if !is_fibration(&fibration.linear_part()) {
        return Err(Error::Structure("factorization fibration leg is not a fibration".into()));
    }
    Ok(Factorization { equivalence, fibration, pullback, path })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{from_dga, twist_algebra};
    use crate::dga::FilteredDga;
    use crate::linalg::cohomology_basis;
    use crate::mc::{enumerate_mc_with_cap, DEFAULT_LEAF_CAP};
    use crate::scalar::Field;
    use std::collections::BTreeSet;

    const CAP: usize = DEFAULT_LEAF_CAP;

    fn fp(p: u32) -> Field {
        Field::Prime(p)
    }

    fn entry(name: &str, degree: i32, weight: u32) -> BasisEntry {
        BasisEntry { name: name.into(), degree, weight }
    }

    fn lift(c: &FilteredDga) -> Arc<AInfty> {
        from_dga(c).unwrap()
    }

    /// d(a) = y, d(u) = x, with a*a = u and y*a = x: acyclic at every level,
    /// with products feeding the contractible directions.
    fn acyclic_dga(p: u32) -> FilteredDga {
        let one = || fp(p).one();
        let s = Space::new(
            fp(p),
            3,
            vec![
                entry("a", 0, 1),
                entry("y", 1, 1),
                entry("u", 0, 2),
                entry("x", 1, 2),
            ],
        )
        .unwrap();
        let mut cols = vec![Combo::zero(); 4];
        cols[0] = Combo::single(1, one());
        cols[2] = Combo::single(3, one());
        let d = LinMap::new(s.clone(), s.clone(), 1, cols).unwrap();
        let mut prod = vec![Combo::zero(); 16];
        prod[0 * 4 + 0] = Combo::single(2, one());
        prod[1 * 4 + 0] = Combo::single(3, one());
        FilteredDga::new(s, d, prod).unwrap()
    }

    /// t F_p[t]/(t^3), nilpotency 3.
    fn truncated_line(p: u32) -> FilteredDga {
        let s = Space::new(fp(p), 3, vec![entry("t", 0, 1), entry("t2", 0, 2)]).unwrap();
        let d = LinMap::zero(s.clone(), s.clone(), 1);
        let mut prod = vec![Combo::zero(); 4];
        prod[0] = Combo::single(1, fp(p).one());
        FilteredDga::new(s, d, prod).unwrap()
    }

    /// One degree-0 generator, nilpotency 3, zero structure.
    fn circle3(p: u32) -> FilteredDga {
        let s = Space::new(fp(p), 3, vec![entry("v", 0, 1)]).unwrap();
        let d = LinMap::zero(s.clone(), s.clone(), 1);
        FilteredDga::new(s, d, vec![Combo::zero()]).unwrap()
    }

    fn left_inclusion(pr: &ProductAlgebra) -> Morphism {
        let cols = (0..pr.left.space.dim())
            .map(|i| pr.embed_left(&Combo::single(i, pr.left.space.field.one())))
            .collect();
        let f = LinMap::new(pr.left.space.clone(), pr.algebra.space.clone(), 0, cols).unwrap();
        Morphism::strict(pr.left.clone(), pr.algebra.clone(), &f).unwrap()
    }

    #[test]
    fn identity_decomposes_trivially() {
        let a = lift(&truncated_line(3));
        let dec = decompose_acyclic_fibration(&Morphism::identity(&a)).unwrap();
        assert_eq!(dec.kernel.space.dim(), 0);
        assert!(dec.psi.tables().iter().all(|t| t.is_empty()));
        assert!(dec.iso.compose(&dec.iso_inv).is_identity());
    }

    #[test]
    fn projection_off_an_acyclic_factor_decomposes() {
        let base = lift(&truncated_line(2));
        let fiber = lift(&acyclic_dga(2));
        let pr = product(&base, &fiber).unwrap();
        let phi = pr.pr_left();
        let dec = decompose_acyclic_fibration(&phi).unwrap();
        // the kernel is the acyclic factor
        assert_eq!(dec.kernel.space.dim(), fiber.space.dim());
        // the splitting reshuffles the higher structure into psi: the product
        // y * a lands in the contractible direction, so psi is not strict
        assert!(!dec.psi.tables()[1].is_empty());
        // its inverse really is an inverse on points
        for alpha in enumerate_mc_with_cap(&pr.algebra, CAP).unwrap() {
            let over = dec.iso.pushforward(&alpha);
            assert_eq!(dec.iso_inv.pushforward(&over), alpha);
        }
    }

    #[test]
    fn sections_of_acyclic_fibrations_split() {
        let base = lift(&truncated_line(2));
        let fiber = lift(&acyclic_dga(2));
        let pr = product(&fiber, &base).unwrap();
        let chi = right_inverse_acyclic_fibration(&pr.pr_right()).unwrap();
        assert!(pr.pr_right().compose(&chi).is_identity());
        // a non-fibration is refused
        let zero_in = Morphism::new(base.clone(), fiber.clone(), vec![]).unwrap();
        assert!(matches!(
            right_inverse_acyclic_fibration(&zero_in),
            Err(Error::NotFibration(_))
        ));
    }

    #[test]
    fn pulling_back_along_the_identity_changes_nothing() {
        let a = lift(&truncated_line(3));
        let id = Morphism::identity(&a);
        let pb = pullback_strict_fibration(&id, &id).unwrap();
        // kernel of the identity is zero, so the carrier is A itself and the
        // conjugated tables coincide with the original ones
        assert_eq!(pb.algebra.space.dim(), a.space.dim());
        assert_eq!(pb.algebra.tables(), a.tables());
        let p1 = pb.proj.linear_part();
        for i in 0..a.space.dim() {
            assert_eq!(p1.col(i), &Combo::single(i, fp(3).one()));
        }
    }

    #[test]
    fn strict_pullbacks_match_the_componentwise_formula() {
        let p = 3;
        let base = lift(&truncated_line(p));
        let fiber = lift(&acyclic_dga(p));
        let pr = product(&base, &fiber).unwrap();
        let phi = pr.pr_left();
        // theta: t -> t^2 is multiplicative because t^2 * t^2 vanishes
        let th_cols = vec![Combo::single(1, fp(p).one()), Combo::zero()];
        let th_map = LinMap::new(base.space.clone(), base.space.clone(), 0, th_cols).unwrap();
        let theta = Morphism::strict(base.clone(), base.clone(), &th_map).unwrap();

        let pb = pullback_strict_fibration(&phi, &theta).unwrap();
        let embed = pb.embed_morphism().linear_part();
        let sigma = filtered_section(&phi.linear_part()).unwrap();
        let th1 = theta.linear_part();

        // For strict theta the conjugation collapses: on the nose,
        //   Q~(w) = (Q_base(lefts), Q_total(sigma th lefts + rights) - sigma th Q_base(lefts))
        // where lefts live in the base and rights in the total space of phi.
        let budget = pb.algebra.space.nilpotency - 1;
        for n in 1..=pb.algebra.max_arity() {
            for_each_word(&pb.algebra.space, n, budget, &mut |word| {
                let lefts: Vec<Combo> = word
                    .iter()
                    .map(|&i| pb.ambient.project_left(&embed.col(i)))
                    .collect();
                let totals: Vec<Combo> = word
                    .iter()
                    .zip(&lefts)
                    .map(|(&i, l)| {
                        sigma
                            .apply(&th1.apply(l))
                            .add(&pb.ambient.project_right(&embed.col(i)))
                    })
                    .collect();
                let left_val = base.eval(&lefts.iter().collect::<Vec<_>>());
                let right_val = pr
                    .algebra
                    .eval(&totals.iter().collect::<Vec<_>>())
                    .sub(&sigma.apply(&th1.apply(&left_val)));
                let expected = pb
                    .ambient
                    .embed_left(&left_val)
                    .add(&pb.ambient.embed_right(&right_val));
                let got = embed.apply(&pb.algebra.op_word(word));
                assert_eq!(got, expected, "arity {} word {:?}", n, word);
            });
        }
    }

    #[test]
    fn pullback_points_are_fiber_products() {
        let p = 2;
        let base = lift(&truncated_line(p));
        let fiber = lift(&circle3(p));
        let pr = product(&base, &fiber).unwrap();
        let phi = pr.pr_left();
        let th_cols = vec![Combo::single(1, fp(p).one()), Combo::zero()];
        let th_map = LinMap::new(base.space.clone(), base.space.clone(), 0, th_cols).unwrap();
        let theta = Morphism::strict(base.clone(), base.clone(), &th_map).unwrap();
        let pb = pullback_strict_fibration(&phi, &theta).unwrap();

        let pairs: BTreeSet<(Combo, Combo)> = enumerate_mc_with_cap(&pb.algebra, CAP)
            .unwrap()
            .into_iter()
            .map(|m| (pb.proj.pushforward(&m), pb.cover.pushforward(&m)))
            .collect();
        let mut expected = BTreeSet::new();
        for x in enumerate_mc_with_cap(&base, CAP).unwrap() {
            for y in enumerate_mc_with_cap(&pr.algebra, CAP).unwrap() {
                if theta.pushforward(&x) == phi.pushforward(&y) {
                    expected.insert((x.clone(), y));
                }
            }
        }
        assert_eq!(pairs, expected);
        assert_eq!(
            pairs.len(),
            enumerate_mc_with_cap(&pb.algebra, CAP).unwrap().len(),
            "legs are injective on points"
        );
    }

    #[test]
    fn pullbacks_along_nonstrict_morphisms_work() {
        let p = 2;
        let base = lift(&truncated_line(p));
        let fiber = lift(&acyclic_dga(p));
        let pr = product(&fiber, &base).unwrap();
        // a genuinely nonstrict morphism: the inverse of the splitting iso
        let dec = decompose_acyclic_fibration(&pr.pr_right()).unwrap();
        let theta = dec.iso_inv.clone();
        assert!(!theta.is_strict());

        let below = lift(&circle3(p));
        let big = product(&pr.algebra, &below).unwrap();
        let phi = big.pr_left();
        let pb = pullback_with_section(
            &phi,
            &theta,
            &filtered_section(&phi.linear_part()).unwrap(),
        )
        .unwrap();
        // tautological cone: the mediating morphism of the pullback's own
        // legs is the identity
        let mu = pb.mediating(&pb.proj, &pb.cover).unwrap();
        assert!(mu.is_identity());
        // mediating a nontrivial cone, with the shear identity pinning it
        let f = Morphism::identity(&theta.source);
        let g = left_inclusion(&big).compose(&theta);
        let mu = pb.mediating(&f, &g).unwrap();
        let sheared = pb.h.compose(&pb.embed_morphism()).compose(&mu);
        assert!(sheared.equals(&pb.ambient.pair(&f, &g).unwrap()));
        // incompatible cones are rejected
        let bad = pb.mediating(&f, &left_inclusion(&big).compose(&theta).compose(
            &Morphism::new(theta.source.clone(), theta.source.clone(), vec![]).unwrap(),
        ));
        assert!(matches!(bad, Err(Error::Invalid(_))));
    }

    #[test]
    fn the_section_does_not_matter_up_to_equivalence() {
        let p = 3;
        let base = lift(&truncated_line(p));
        let fiber = lift(&acyclic_dga(p));
        let pr = product(&base, &fiber).unwrap();
        let phi = pr.pr_left();
        let th_cols = vec![Combo::single(1, fp(p).one()), Combo::zero()];
        let th_map = LinMap::new(base.space.clone(), base.space.clone(), 0, th_cols).unwrap();
        let theta = Morphism::strict(base.clone(), base.clone(), &th_map).unwrap();

        let sigma = filtered_section(&phi.linear_part()).unwrap();
        // a second section, shifted into the kernel where theta can see it:
        // theta hits t2, so send t2 to t2 + u
        let mut cols2: Vec<Combo> = (0..base.space.dim()).map(|j| sigma.col(j).clone()).collect();
        cols2[1] = cols2[1].add(&pr.embed_right(&Combo::single(2, fp(p).one())));
        let sigma2 = LinMap::new(base.space.clone(), pr.algebra.space.clone(), 0, cols2).unwrap();

        let pb1 = pullback_with_section(&phi, &theta, &sigma).unwrap();
        let pb2 = pullback_with_section(&phi, &theta, &sigma2).unwrap();
        // same carrier, different tables
        assert_eq!(pb1.algebra.space.dim(), pb2.algebra.space.dim());
        assert_ne!(pb1.algebra.tables(), pb2.algebra.tables());
        // tangent cohomology cannot see the choice
        let t1 = pb1.algebra.tangent().unwrap();
        let t2 = pb2.algebra.tangent().unwrap();
        let sp = &pb1.algebra.space;
        if let Some((lo, hi)) = sp.degree_span() {
            for level in 1..sp.nilpotency {
                for d in lo..=hi {
                    assert_eq!(
                        cohomology_basis(&t1, d, level).dim,
                        cohomology_basis(&t2, d, level).dim,
                        "degree {} level {}",
                        d,
                        level
                    );
                }
            }
        }
        // and the points biject onto the same fiber product either way
        let pairs = |pb: &Pullback| -> BTreeSet<(Combo, Combo)> {
            enumerate_mc_with_cap(&pb.algebra, CAP)
                .unwrap()
                .into_iter()
                .map(|m| (pb.proj.pushforward(&m), pb.cover.pushforward(&m)))
                .collect()
        };
        assert_eq!(pairs(&pb1), pairs(&pb2));
    }

    #[test]
    fn path_objects_factor_the_diagonal() {
        let a = lift(&acyclic_dga(2));
        let path = path_object(&a).unwrap();
        assert!(path.ev0.is_strict() && path.ev1.is_strict());
        // constant paths sit over both endpoints
        for alpha in enumerate_mc_with_cap(&a, CAP).unwrap() {
            let c = path.constant.pushforward(&alpha);
            assert_eq!(path.ev0.pushforward(&c), alpha);
            assert_eq!(path.ev1.pushforward(&c), alpha);
        }
        // twisting carries path objects to path objects of the twist
        let alpha = enumerate_mc_with_cap(&a, CAP)
            .unwrap()
            .into_iter()
            .find(|m| !m.is_zero());
        if let Some(alpha) = alpha {
            let tw = twist_algebra(&a, &alpha).unwrap();
            path_object(&tw).unwrap();
        }
    }

    #[test]
    fn factorization_splits_every_morphism() {
        let p = 2;
        let base = lift(&truncated_line(p));
        // theta = identity
        let fac = factorize(&Morphism::identity(&base)).unwrap();
        assert!(fac.fibration.compose(&fac.equivalence).is_identity());
        // theta = zero
        let fiber = lift(&circle3(p));
        let zero = Morphism::new(fiber.clone(), base.clone(), vec![]).unwrap();
        let fac = factorize(&zero).unwrap();
        assert!(fac.fibration.compose(&fac.equivalence).equals(&zero));
        // the zero morphism between these two is not a weak equivalence, and
        // neither is its fibration factor
        assert!(!is_weak_equivalence(
            &fac.pullback.algebra.tangent().unwrap(),
            &base.tangent().unwrap(),
            &fac.fibration.linear_part()
        ));
    }

    #[test]
    fn factoring_a_weak_equivalence_gives_an_acyclic_fibration() {
        let p = 2;
        let base = lift(&truncated_line(p));
        let fiber = lift(&acyclic_dga(p));
        let pr = product(&fiber, &base).unwrap();
        // a nonstrict weak equivalence: the section of the projection
        let chi = right_inverse_acyclic_fibration(&pr.pr_right()).unwrap();
        let fac = factorize(&chi).unwrap();
        assert!(fac.fibration.compose(&fac.equivalence).equals(&chi));
        assert!(is_weak_equivalence(
            &fac.pullback.algebra.tangent().unwrap(),
            &pr.algebra.tangent().unwrap(),
            &fac.fibration.linear_part()
        ));
        // and the strict projection factors with an acyclic fibration leg too
        let fac = factorize(&pr.pr_right()).unwrap();
        assert!(is_fibration(&fac.fibration.linear_part()));
    }
}
