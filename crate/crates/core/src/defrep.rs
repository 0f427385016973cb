//! Deformations of finite group representations. The Hochschild cochains of
//! the group ring with coefficients in End(V) form a unital dga; tensoring
//! with the maximal ideal of a truncated polynomial ring gives a complete
//! filtered dga whose Maurer-Cartan elements are the deformations of the
//! representation. The classification runs three independent ways: gauge
//! orbits, components of the nerve, and components of the nerve of the
//! homotopy-transferred structure on cohomology.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ainfty::{for_each_word, from_dga, AInfty, Morphism, Table, Word};
use crate::dga::{DgAlgebra, FilteredDga};
use crate::error::{Error, Result};
use crate::linalg::{
    is_weak_equivalence, BasisEntry, Combo, LinMap, Mat, SliceIdx, Space,
};
use crate::mc::{gauge_orbits, leaf_cap};
use crate::nerve::{check_gm, pi0};
use crate::scalar::{Field, Scalar};

/// Finite group presented by its full multiplication table. All axioms are
/// checked exhaustively at construction, so downstream code can index freely.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    mul: Vec<usize>,
    pub identity: usize,
    order: usize,
}

impl FiniteGroup {
    pub fn new(order: usize, mul: Vec<usize>) -> Result<FiniteGroup> {
        if order == 0 || mul.len() != order * order {
            return Err(Error::Invalid("multiplication table size mismatch".into()));
        }
        if mul.iter().any(|&g| g >= order) {
            return Err(Error::Structure("product escapes the element list".into()));
        }
        let at = |g: usize, h: usize| mul[g * order + h];
        let mut identity = None;
        for e in 0..order {
            if (0..order).all(|g| at(e, g) == g && at(g, e) == g) {
                identity = Some(e);
                break;
            }
        }
        let identity =
            identity.ok_or_else(|| Error::Structure("no two-sided identity".into()))?;
        for g in 0..order {
            for h in 0..order {
                for k in 0..order {
                    if at(at(g, h), k) != at(g, at(h, k)) {
                        return Err(Error::Structure(format!(
                            "associativity fails on ({}, {}, {})",
                            g, h, k
                        )));
                    }
                }
            }
        }
        for g in 0..order {
            if !(0..order).any(|h| at(g, h) == identity && at(h, g) == identity) {
                return Err(Error::Structure(format!("element {} has no inverse", g)));
            }
        }
        Ok(FiniteGroup { mul, identity, order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.order + h]
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup { mul: vec![0], identity: 0, order: 1 }
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let mut mul = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                mul.push((g + h) % n);
            }
        }
        FiniteGroup::new(n, mul).expect("cyclic tables satisfy the axioms")
    }
}

fn mat_identity(field: Field, d: usize) -> Vec<Scalar> {
    let mut m = vec![field.zero(); d * d];
    for k in 0..d {
        m[k * d + k] = field.one();
    }
    m
}

fn mat_mul(field: Field, d: usize, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); d * d];
    for i in 0..d {
        for k in 0..d {
            if a[i * d + k].is_zero() {
                continue;
            }
            for j in 0..d {
                out[i * d + j] = out[i * d + j].add(&a[i * d + k].mul(&b[k * d + j]));
            }
        }
    }
    out
}

/// Representation of a finite group: one d x d matrix per element, row-major.
/// rho(e) = id and rho(g)rho(h) = rho(gh) are checked on every pair.
#[derive(Clone, Debug)]
pub struct Representation {
    pub group: FiniteGroup,
    pub field: Field,
    pub dim: usize,
    mats: Vec<Vec<Scalar>>,
}

impl Representation {
    pub fn new(
        group: FiniteGroup,
        field: Field,
        dim: usize,
        mats: Vec<Vec<Scalar>>,
    ) -> Result<Representation> {
        if dim == 0 || mats.len() != group.order() || mats.iter().any(|m| m.len() != dim * dim)
        {
            return Err(Error::Invalid("matrix table size mismatch".into()));
        }
        if mats[group.identity] != mat_identity(field, dim) {
            return Err(Error::Structure("the identity must act as the identity".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                if mat_mul(field, dim, &mats[g], &mats[h]) != mats[gh] {
                    return Err(Error::Structure(format!(
                        "rho({}) rho({}) != rho({})",
                        g, h, gh
                    )));
                }
            }
        }
        Ok(Representation { group, field, dim, mats })
    }

    pub fn trivial(group: FiniteGroup, field: Field) -> Representation {
        let mats = vec![vec![field.one()]; group.order()];
        Representation { group, field, dim: 1, mats }
    }

    pub fn mat(&self, g: usize) -> &[Scalar] {
        &self.mats[g]
    }
}

/// The coefficient ring F[t]/(t^order): only its maximal ideal matters here,
/// with basis t, t^2, ..., t^{order-1} and weight(t^j) = j.
#[derive(Clone, Copy, Debug)]
pub struct ArtinLocalRing {
    pub field: Field,
    pub order: u32,
}

impl ArtinLocalRing {
    pub fn new(field: Field, order: u32) -> Result<ArtinLocalRing> {
        if order < 2 {
            return Err(Error::Invalid("the ideal of F[t]/(t^N) needs N >= 2".into()));
        }
        Ok(ArtinLocalRing { field, order })
    }

    pub fn ideal_dim(&self) -> usize {
        self.order as usize - 1
    }
}

/// Hochschild cochains of the group ring with coefficients in End(V), as a
/// unital dga truncated above `top_degree`. Degree n has one basis cochain
/// per (n-tuple of group elements, matrix entry): the map sending that tuple
/// to E_kl and every other tuple to zero. The brutal truncation keeps every
/// axiom exact because both sides of each identity vanish past the boundary.
pub struct HochschildComplex {
    pub dga: Arc<DgAlgebra>,
    pub top_degree: usize,
    order: usize,
    vdim: usize,
    offsets: Vec<usize>,
}

impl HochschildComplex {
    /// Basis index of the cochain supported on `tuple` with value E_kl.
    pub fn index(&self, tuple: &[usize], k: usize, l: usize) -> Option<usize> {
        if tuple.len() > self.top_degree || k >= self.vdim || l >= self.vdim {
            return None;
        }
        if tuple.iter().any(|&g| g >= self.order) {
            return None;
        }
        let mut t = 0;
        for &g in tuple {
            t = t * self.order + g;
        }
        Some(self.offsets[tuple.len()] + t * self.vdim * self.vdim + k * self.vdim + l)
    }

    pub fn degree_dim(&self, n: usize) -> usize {
        if n > self.top_degree {
            0
        } else {
            self.order.pow(n as u32) * self.vdim * self.vdim
        }
    }
}

fn tuple_of(order: usize, n: usize, mut code: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for slot in (0..n).rev() {
        t[slot] = code % order;
        code /= order;
    }
    t
}

/// The standard Hochschild differential: the group acts through rho on the
/// outside and the tuple contracts on the inside with alternating signs.
pub fn hochschild_complex(rho: &Representation, top_degree: usize) -> Result<HochschildComplex> {
    let order = rho.group.order();
    let d = rho.dim;
    let field = rho.field;
    let mut offsets = vec![0usize];
    for n in 0..=top_degree {
        offsets.push(offsets[n] + order.pow(n as u32) * d * d);
    }
    let total = offsets[top_degree + 1];
    if total > leaf_cap() {
        return Err(Error::CapExceeded(format!(
            "Hochschild complex needs {} basis cochains, cap is {}",
            total,
            leaf_cap()
        )));
    }

    let mut names = Vec::with_capacity(total);
    for n in 0..=top_degree {
        for code in 0..order.pow(n as u32) {
            let tuple = tuple_of(order, n, code);
            let spelled: Vec<String> = tuple.iter().map(|g| g.to_string()).collect();
            for k in 0..d {
                for l in 0..d {
                    names.push((
                        format!("c{}[{}|{},{}]", n, spelled.join(","), k, l),
                        n as i32,
                    ));
                }
            }
        }
    }
    let space = Space::unfiltered(field, names)?;

    let index = |tuple: &[usize], k: usize, l: usize| -> usize {
        let mut t = 0;
        for &g in tuple {
            t = t * order + g;
        }
        offsets[tuple.len()] + t * d * d + k * d + l
    };

    // Differential, assembled by evaluating d(phi) on every output tuple.
    // The value matrix is accumulated as a combo over entry indices a*d + b.
    let mut d_cols = vec![Combo::zero(); total];
    for n in 0..top_degree {
        for code in 0..order.pow(n as u32) {
            let tuple = tuple_of(order, n, code);
            for k in 0..d {
                for l in 0..d {
                    let src = index(&tuple, k, l);
                    let mut col = Combo::zero();
                    for out_code in 0..order.pow(n as u32 + 1) {
                        let g = tuple_of(order, n + 1, out_code);
                        let mut value = Combo::zero();
                        if g[1..] == tuple[..] {
                            // rho(g0) E_kl: column k of rho lands in column l.
                            for a in 0..d {
                                let c = rho.mat(g[0])[a * d + k].clone();
                                if !c.is_zero() {
                                    value = value.add(&Combo::single(a * d + l, c));
                                }
                            }
                        }
                        for i in 1..=n {
                            let mut contracted = Vec::with_capacity(n);
                            contracted.extend_from_slice(&g[..i - 1]);
                            contracted.push(rho.group.mul(g[i - 1], g[i]));
                            contracted.extend_from_slice(&g[i + 1..]);
                            if contracted == tuple {
                                let c = field.one().negate_if(i % 2 == 1);
                                value = value.add(&Combo::single(k * d + l, c));
                            }
                        }
                        if g[..n] == tuple[..] {
                            // E_kl rho(g_n): row l of rho lands in row k.
                            let sign = (n + 1) % 2 == 1;
                            for b in 0..d {
                                let c = rho.mat(g[n])[l * d + b].clone().negate_if(sign);
                                if !c.is_zero() {
                                    value = value.add(&Combo::single(k * d + b, c));
                                }
                            }
                        }
                        for (entry, c) in value.terms() {
                            let a = entry / d;
                            let b = entry % d;
                            let dst = index(&g, a, b);
                            col = col.add(&Combo::single(dst, c.clone()));
                        }
                    }
                    d_cols[src] = col;
                }
            }
        }
    }
    let diff = LinMap::new(space.clone(), space.clone(), 1, d_cols)?;

    // Cup product: concatenate the tuples, compose the values. E_kl E_pq is
    // E_kq when l = p and zero otherwise.
    let mut prod = vec![Combo::zero(); total * total];
    for m in 0..=top_degree {
        for n in 0..=top_degree - m {
            for code_s in 0..order.pow(m as u32) {
                let s = tuple_of(order, m, code_s);
                for code_t in 0..order.pow(n as u32) {
                    let t = tuple_of(order, n, code_t);
                    let mut joined = s.clone();
                    joined.extend_from_slice(&t);
                    for k in 0..d {
                        for l in 0..d {
                            let i = index(&s, k, l);
                            for q in 0..d {
                                let j = index(&t, l, q);
                                let dst = index(&joined, k, q);
                                prod[i * total + j] = Combo::single(dst, field.one());
                            }
                        }
                    }
                }
            }
        }
    }

    let mut unit = Combo::zero();
    for k in 0..d {
        unit = unit.add(&Combo::single(
            index(&[], k, k),
            field.one(),
        ));
    }

    let dga = DgAlgebra::new(space, diff, prod, unit)?;
    dga.check_associativity()?;
    Ok(HochschildComplex { dga, top_degree, order, vdim: d, offsets })
}

/// The deformation complex C tensor m for m = (t)/(t^N): basis phi.t^j of
/// weight j, differential extended t-linearly, products shifted up in t and
/// cut off at the truncation.
pub struct DeformComplex {
    pub dga: FilteredDga,
    pub algebra: Arc<AInfty>,
    powers: usize,
}

impl DeformComplex {
    /// Index of phi_i tensor t^j (1 <= j < N).
    pub fn index(&self, cochain: usize, power: u32) -> usize {
        cochain * self.powers + power as usize - 1
    }
}

pub fn deform_complex(c: &Arc<DgAlgebra>, r: &ArtinLocalRing) -> Result<DeformComplex> {
    if c.space.field != r.field {
        return Err(Error::FieldMismatch(
            "cochains and coefficients live over different fields".into(),
        ));
    }
    let dim = c.space.dim();
    let powers = r.ideal_dim();
    let entries: Vec<BasisEntry> = (0..dim)
        .flat_map(|i| {
            (1..=powers).map(move |j| (i, j as u32))
        })
        .map(|(i, j)| BasisEntry {
            name: format!("{}.t{}", c.space.name(i), j),
            degree: c.space.degree(i),
            weight: j,
        })
        .collect();
    let space = Space::new(r.field, r.order, entries)?;
    let idx = |i: usize, j: u32| i * powers + j as usize - 1;

    let mut d_cols = Vec::with_capacity(space.dim());
    for i in 0..dim {
        for j in 1..=powers as u32 {
            d_cols.push(c.d.col(i).map_indices(|k| idx(k, j)));
        }
    }
    let d = LinMap::new(space.clone(), space.clone(), 1, d_cols)?;

    let sdim = space.dim();
    let mut prod = vec![Combo::zero(); sdim * sdim];
    for i in 0..dim {
        for j in 1..=powers as u32 {
            for p in 0..dim {
                for q in 1..=powers as u32 {
                    if j + q > powers as u32 {
                        continue;
                    }
                    prod[idx(i, j) * sdim + idx(p, q)] =
                        c.basis_product(i, p).map_indices(|k| idx(k, j + q));
                }
            }
        }
    }
    let dga = FilteredDga::new(space, d, prod)?;
    let algebra = from_dga(&dga)?;
    Ok(DeformComplex { dga, algebra, powers })
}

/// Homotopy transfer onto the tangent cohomology.
pub struct Transfer {
    pub algebra: Arc<AInfty>,
    pub phi: Morphism,
    pub project: LinMap,
    pub homotopy: LinMap,
}

/// Transfers the structure to the cohomology of the tangent complex and
/// produces the quasi-isomorphism back into the source, inclusion-first.
///
/// The differential must preserve weights exactly so the contraction can be
/// chosen one (degree, weight) slice at a time. Within each slice the basis
/// splits as boundaries + representatives + a complement mapping isomorphically
/// onto the next slice's boundaries; this yields iota pi = id + dh + hd with
/// h iota = 0, pi h = 0, h h = 0. Under those side conditions the shifted
/// conventions make the tree recursion below sign-free: every intermediate
/// map has degree 0, so no Koszul factors appear when tensoring. The
/// structure identities, the morphism identities, and the equivalence are
/// still asserted at the end; a failure is a bug, never a soft error.
pub fn transfer(a: &Arc<AInfty>) -> Result<Transfer> {
    let space = &a.space;
    let field = space.field;
    let q1 = a.q1();
    for i in 0..space.dim() {
        if q1
            .col(i)
            .terms()
            .iter()
            .any(|(j, _)| space.weight(*j) != space.weight(i))
        {
            return Err(Error::Unsupported(
                "transfer needs a weight-preserving differential".into(),
            ));
        }
    }

    let exact_slice = |degree: i32, weight: u32| -> Vec<usize> {
        (0..space.dim())
            .filter(|&i| space.degree(i) == degree && space.weight(i) == weight)
            .collect()
    };
    let span = space.degree_span();
    let mut h_entries: Vec<BasisEntry> = Vec::new();
    let mut iota_cols: Vec<Combo> = Vec::new();
    let mut pi_cols = vec![Combo::zero(); space.dim()];
    let mut h_cols = vec![Combo::zero(); space.dim()];

    if let Some((lo, hi)) = span {
        for weight in 1..space.nilpotency {
            // Pivot columns of each outgoing slice map: their sources form
            // the complement of the cocycles, their images a boundary basis.
            let mut pivots: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
            for degree in lo..=hi {
                let here = SliceIdx::new(exact_slice(degree, weight));
                let above = SliceIdx::new(exact_slice(degree + 1, weight));
                if here.is_empty() {
                    continue;
                }
                let out = q1.matrix_on(&here, &above);
                let piv = out.clone().rref();
                pivots.insert(degree, piv.iter().map(|&j| here.idx[j]).collect());
            }
            for degree in lo..=hi {
                let here = SliceIdx::new(exact_slice(degree, weight));
                if here.is_empty() {
                    continue;
                }
                let above = SliceIdx::new(exact_slice(degree + 1, weight));
                let out = q1.matrix_on(&here, &above);

                let preimages: Vec<usize> =
                    pivots.get(&(degree - 1)).cloned().unwrap_or_default();
                let b_cols: Vec<Vec<Scalar>> = preimages
                    .iter()
                    .map(|&src| here.dense(q1.col(src), &field).expect("weight preserved"))
                    .collect();
                let z_basis = out.kernel_basis();

                let mut stacked = b_cols.clone();
                stacked.extend(z_basis.iter().cloned());
                let rep_pivots = Mat::from_cols(field, here.len(), &stacked).rref();
                let rep_cols: Vec<Vec<Scalar>> = rep_pivots
                    .iter()
                    .filter(|&&p| p >= b_cols.len())
                    .map(|&p| z_basis[p - b_cols.len()].clone())
                    .collect();

                let c_prime: Vec<usize> = pivots.get(&degree).cloned().unwrap_or_default();
                let mut decomp_cols = b_cols.clone();
                decomp_cols.extend(rep_cols.iter().cloned());
                for &src in &c_prime {
                    let mut unit = vec![field.zero(); here.len()];
                    unit[here.pos[&src]] = field.one();
                    decomp_cols.push(unit);
                }
                let decomp = Mat::from_cols(field, here.len(), &decomp_cols);

                let h_offset = h_entries.len();
                for (k, rep) in rep_cols.iter().enumerate() {
                    h_entries.push(BasisEntry {
                        name: format!("h{}", h_offset + k),
                        degree,
                        weight,
                    });
                    iota_cols.push(here.combo(rep));
                }

                for &i in &here.idx {
                    let mut unit = vec![field.zero(); here.len()];
                    unit[here.pos[&i]] = field.one();
                    let coords = decomp
                        .solve(&unit)
                        .ok_or_else(|| Error::Structure("slice decomposition failed".into()))?;
                    let mut pi_col = Combo::zero();
                    for k in 0..rep_cols.len() {
                        let c = &coords[b_cols.len() + k];
                        if !c.is_zero() {
                            pi_col = pi_col.add(&Combo::single(h_offset + k, c.clone()));
                        }
                    }
                    pi_cols[i] = pi_col;
                    let mut h_col = Combo::zero();
                    for (k, &src) in preimages.iter().enumerate() {
                        if !coords[k].is_zero() {
                            h_col = h_col.add(&Combo::single(src, coords[k].neg()));
                        }
                    }
                    h_cols[i] = h_col;
                }
            }
        }
    }

    let h_space = Space::new(field, space.nilpotency, h_entries)?;
    let iota = LinMap::new(h_space.clone(), space.clone(), 0, iota_cols)?;
    let project = LinMap::new(space.clone(), h_space.clone(), 0, pi_cols)?;
    let homotopy = LinMap::new(space.clone(), space.clone(), -1, h_cols)?;

    // lambda_1 = iota; lambda_n = sum over k >= 2 and compositions
    // n_1 + ... + n_k = n of Q1_k applied to the blocks, where a block of
    // size 1 contributes iota and a larger block contributes h(lambda).
    let max_arity = a.max_arity();
    let budget = h_space.nilpotency - 1;
    let mut lam: Vec<BTreeMap<Word, Combo>> = vec![BTreeMap::new(); max_arity + 1];
    let mut tran_tables: Vec<Table> = vec![Table::new(); max_arity];
    let mut phi_tables: Vec<Table> = vec![Table::new(); max_arity];
    for i in 0..h_space.dim() {
        phi_tables[0].insert(vec![i], iota.col(i).clone());
    }
    for n in 2..=max_arity {
        let mut entries: Vec<(Word, Combo)> = Vec::new();
        for_each_word(&h_space, n, budget, &mut |word| {
            let mut acc = Combo::zero();
            for k in 2..=n {
                compositions(n, k, &mut |parts| {
                    let mut args: Vec<Combo> = Vec::with_capacity(k);
                    let mut pos = 0;
                    for &p in parts {
                        let block = &word[pos..pos + p];
                        pos += p;
                        args.push(if p == 1 {
                            iota.col(block[0]).clone()
                        } else {
                            match lam[p].get(block) {
                                Some(v) => homotopy.apply(v),
                                None => Combo::zero(),
                            }
                        });
                    }
                    if args.iter().any(|v| v.is_zero()) {
                        return;
                    }
                    let refs: Vec<&Combo> = args.iter().collect();
                    acc = acc.add(&a.eval(&refs));
                });
            }
            if !acc.is_zero() {
                entries.push((word.to_vec(), acc));
            }
        });
        for (word, value) in entries {
            let t = project.apply(&value);
            if !t.is_zero() {
                tran_tables[n - 1].insert(word.clone(), t);
            }
            let f = homotopy.apply(&value);
            if !f.is_zero() {
                phi_tables[n - 1].insert(word.clone(), f);
            }
            lam[n].insert(word, value);
        }
    }

    let transferred = AInfty::new(h_space, tran_tables)?;
    transferred.check_stasheff()?;
    let phi = Morphism::new(transferred.clone(), a.clone(), phi_tables)?;
    phi.check()?;
    if !is_weak_equivalence(&transferred.tangent()?, &a.tangent()?, &phi.linear_part()) {
        return Err(Error::Structure(
            "transfer produced a non-equivalence".into(),
        ));
    }
    Ok(Transfer { algebra: transferred, phi, project, homotopy })
}

fn compositions(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(rem: usize, parts_left: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if parts_left == 1 {
            acc.push(rem);
            f(acc);
            acc.pop();
            return;
        }
        for first in 1..=rem - (parts_left - 1) {
            acc.push(first);
            rec(rem - first, parts_left - 1, acc, f);
            acc.pop();
        }
    }
    if k >= 1 && n >= k {
        rec(n, k, &mut Vec::new(), f);
    }
}

/// One deformation problem classified three independent ways, with the
/// matchings between the routes asserted, not assumed.
pub struct Classification {
    pub hochschild: HochschildComplex,
    pub deformed: DeformComplex,
    pub transfer: Transfer,
    pub points: Vec<Combo>,
    pub gauge_classes: Vec<Vec<usize>>,
    pub nerve_classes: Vec<Vec<usize>>,
    pub transferred_classes: usize,
}

impl Classification {
    pub fn class_count(&self) -> usize {
        self.gauge_classes.len()
    }
}

fn normalize_partition(classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    out.sort();
    out
}

/// Runs the full pipeline: Hochschild cochains, deformation complex, gauge
/// orbits, nerve components, and nerve components of the transferred
/// structure. The gauge/nerve partitions must agree element by element, and
/// the transfer morphism must pass the full equivalence-of-classifications
/// check before the counts are returned.
pub fn classify_deformations(
    rho: &Representation,
    r: &ArtinLocalRing,
    top_degree: usize,
    cap: usize,
) -> Result<Classification> {
    let hochschild = hochschild_complex(rho, top_degree)?;
    let deformed = deform_complex(&hochschild.dga, r)?;

    let components = pi0(&deformed.algebra, cap)?;
    let orbits = gauge_orbits(&deformed.dga, &components.points, cap)?;
    if normalize_partition(&orbits) != normalize_partition(&components.classes) {
        return Err(Error::Structure(
            "gauge orbits disagree with nerve components".into(),
        ));
    }

    let tr = transfer(&deformed.algebra)?;
    let transferred = pi0(&tr.algebra, cap)?;
    if transferred.classes.len() != components.classes.len() {
        return Err(Error::Structure(
            "transferred nerve has a different component count".into(),
        ));
    }
    check_gm(&tr.phi, cap)?;

    Ok(Classification {
        hochschild,
        deformed,
        transfer: tr,
        points: components.points,
        gauge_classes: orbits,
        nerve_classes: components.classes,
        transferred_classes: transferred.classes.len(),
    })
}
