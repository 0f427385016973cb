//! Symmetrized structures. Averaging the associative operations over
//! permutations with Koszul signs yields a shifted L-infinity algebra on the
//! same carrier; its curvature, with exact 1/m! coefficients, cuts out the
//! same Maurer-Cartan locus. Everything here insists on characteristic zero
//! because of the factorials.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::ainfty::{
    eval_multilinear, for_each_word, normalize_tables, AInfty, Morphism, Table,
};
use crate::error::{Error, Result};
use crate::linalg::{Combo, Space};
use crate::mc::enumerate_mc_with_cap;
use crate::scalar::odd;

/// Shifted L-infinity algebra: one graded-symmetric operation of degree +1
/// per arity on a complete filtered carrier. Tables store the value on every
/// ordered word; symmetry ties the orderings together and is enforced at
/// construction.
#[derive(Debug)]
pub struct ShiftedLInfty {
    pub space: Arc<Space>,
    tables: Vec<Table>,
}

impl ShiftedLInfty {
    pub fn new(space: Arc<Space>, tables: Vec<Table>) -> Result<Arc<ShiftedLInfty>> {
        let tables = normalize_tables(&space, 1, &space, tables)?;
        let l = ShiftedLInfty { space, tables };
        l.check_symmetry()?;
        Ok(Arc::new(l))
    }

    pub fn max_arity(&self) -> usize {
        self.space.nilpotency as usize - 1
    }

    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    /// l1_n on a basis word.
    pub fn op_word(&self, word: &[usize]) -> Combo {
        self.tables
            .get(word.len() - 1)
            .and_then(|t| t.get(word))
            .cloned()
            .unwrap_or_else(Combo::zero)
    }

    /// Multilinear evaluation of l1_n on combos.
    pub fn eval(&self, args: &[&Combo]) -> Combo {
        eval_multilinear(self.space.field, &self.tables, args)
    }

    /// Swapping adjacent letters x, y must cost exactly (-1)^{|x||y|}.
    fn check_symmetry(&self) -> Result<()> {
        for (idx, table) in self.tables.iter().enumerate() {
            let arity = idx + 1;
            for (word, value) in table {
                for i in 0..arity - 1 {
                    let mut swapped = word.clone();
                    swapped.swap(i, i + 1);
                    let flip = odd(self.space.degree(word[i]))
                        && odd(self.space.degree(word[i + 1]));
                    let expect = if flip { value.neg() } else { value.clone() };
                    if self.op_word(&swapped) != expect {
                        return Err(Error::Structure(format!(
                            "operation is not graded-symmetric at arity {} on ({})",
                            arity,
                            word.iter()
                                .map(|&j| self.space.name(j))
                                .collect::<Vec<_>>()
                                .join(", ")
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Generalized Jacobi on every weight-feasible word: the unshuffle sum
    ///   sum over nonempty subsets S of positions of
    ///     eps(S) l(l(w_S), w_rest)
    /// vanishes, eps(S) the Koszul sign of pulling the S letters to the
    /// front with relative orders kept.
    pub fn check_jacobi(&self) -> Result<()> {
        let budget = self.space.nilpotency - 1;
        for n in 1..=self.max_arity() {
            let mut bad: Option<String> = None;
            for_each_word(&self.space, n, budget, &mut |word| {
                if bad.is_some() {
                    return;
                }
                if !self.jacobi_defect(word).is_zero() {
                    bad = Some(format!(
                        "the arity-{} identity fails on ({})",
                        n,
                        word.iter()
                            .map(|&j| self.space.name(j))
                            .collect::<Vec<_>>()
                            .join(", ")
                    ));
                }
            });
            if let Some(msg) = bad {
                return Err(Error::Structure(msg));
            }
        }
        Ok(())
    }

    fn jacobi_defect(&self, word: &[usize]) -> Combo {
        let n = word.len();
        let mut acc = Combo::zero();
        for mask in 1u32..(1 << n) {
            let mut inner_word = Vec::new();
            let mut rest = Vec::new();
            // Each S letter walks left past the non-S letters before it;
            // only odd-odd crossings flip the sign.
            let mut parity = false;
            let mut odd_rest_seen = 0u32;
            for (pos, &letter) in word.iter().enumerate() {
                let is_odd = odd(self.space.degree(letter));
                if mask >> pos & 1 == 1 {
                    if is_odd && odd_rest_seen % 2 == 1 {
                        parity = !parity;
                    }
                    inner_word.push(letter);
                } else {
                    if is_odd {
                        odd_rest_seen += 1;
                    }
                    rest.push(letter);
                }
            }
            let inner = self.op_word(&inner_word);
            if inner.is_zero() {
                continue;
            }
            let mut term = Combo::zero();
            for (i, c) in inner.terms() {
                let mut outer = Vec::with_capacity(1 + rest.len());
                outer.push(*i);
                outer.extend_from_slice(&rest);
                term = term.add(&self.op_word(&outer).scale(c));
            }
            if parity {
                term = term.neg();
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Associative-shaped repackaging for the layered Maurer-Cartan solver:
    /// the arity-m table scaled by 1/m!, so the proxy's curvature is exactly
    /// `curvature_lie`. The proxy need not satisfy any identity of its own.
    pub fn mc_proxy(&self) -> Result<Arc<AInfty>> {
        let mut tables = Vec::with_capacity(self.tables.len());
        for (idx, table) in self.tables.iter().enumerate() {
            let inv = self.space.field.inv_factorial(idx as u64 + 1)?;
            let mut scaled = Table::new();
            for (word, value) in table {
                scaled.insert(word.clone(), value.scale(&inv));
            }
            tables.push(scaled);
        }
        AInfty::new(self.space.clone(), tables)
    }
}

fn for_each_permutation(n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(perm: &mut Vec<usize>, used: &mut [bool], f: &mut impl FnMut(&[usize])) {
        if perm.len() == used.len() {
            f(perm);
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                perm.push(i);
                rec(perm, used, f);
                perm.pop();
                used[i] = false;
            }
        }
    }
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], f);
}

/// Koszul sign of rearranging a word into word[perm[0]], word[perm[1]], ...:
/// one flip per inverted pair of odd letters.
fn koszul_parity(space: &Space, word: &[usize], perm: &[usize]) -> bool {
    let mut parity = false;
    for k in 0..perm.len() {
        for l in k + 1..perm.len() {
            if perm[k] > perm[l]
                && odd(space.degree(word[perm[k]]))
                && odd(space.degree(word[perm[l]]))
            {
                parity = !parity;
            }
        }
    }
    parity
}

/// Symmetrizes the associative operations:
///   l1_n(x_1, ..., x_n) = sum over permutations of eps(sigma) Q1_n(x_sigma).
/// Positive characteristic is rejected because comparing curvatures divides
/// by factorials.
pub fn commutator(a: &Arc<AInfty>) -> Result<Arc<ShiftedLInfty>> {
    if a.space.field.characteristic() != 0 {
        return Err(Error::CharZeroRequired(
            "symmetrized structures need exact division by factorials".into(),
        ));
    }
    let budget = a.space.nilpotency - 1;
    let mut tables = Vec::with_capacity(a.max_arity());
    for n in 1..=a.max_arity() {
        let mut table = Table::new();
        for_each_word(&a.space, n, budget, &mut |word| {
            let mut acc = Combo::zero();
            for_each_permutation(n, &mut |perm| {
                let rearranged: Vec<usize> = perm.iter().map(|&k| word[k]).collect();
                let value = a.op_word(&rearranged);
                if value.is_zero() {
                    return;
                }
                if koszul_parity(&a.space, word, perm) {
                    acc = acc.sub(&value);
                } else {
                    acc = acc.add(&value);
                }
            });
            if !acc.is_zero() {
                table.insert(word.to_vec(), acc);
            }
        });
        tables.push(table);
    }
    ShiftedLInfty::new(a.space.clone(), tables)
}

/// Curvature of a degree-0 element on the symmetrized side:
///   l1_1(x) + sum_{m >= 2} 1/m! l1_m(x, ..., x),
/// with exact rational coefficients.
pub fn curvature_lie(l: &ShiftedLInfty, x: &Combo) -> Result<Combo> {
    match x.degree_in(&l.space)? {
        Some(d) if d != 0 => {
            return Err(Error::Degree(format!(
                "curvature input has degree {}, expected 0",
                d
            )))
        }
        _ => {}
    }
    let mut acc = Combo::zero();
    for m in 1..=l.max_arity() {
        let inv = l.space.field.inv_factorial(m as u64)?;
        let args: Vec<&Combo> = std::iter::repeat(x).take(m).collect();
        acc = acc.add(&l.eval(&args).scale(&inv));
    }
    Ok(acc)
}

pub fn is_mc_lie(l: &ShiftedLInfty, x: &Combo) -> Result<bool> {
    Ok(curvature_lie(l, x)?.is_zero())
}

/// The two curvatures agree as polynomial maps, coefficient by coefficient:
/// for each arity m and each monomial in the coordinates of a degree-0
/// element, the associative side sums Q over the distinct arrangements of
/// the monomial's letters and the symmetrized side sums l over the same
/// arrangements scaled by 1/m!. Afterwards the layered Maurer-Cartan sets
/// are compared extensionally through the solver, so the instance must have
/// finitely solvable layers.
pub fn mc_equality_check(a: &Arc<AInfty>, cap: usize) -> Result<()> {
    let l = commutator(a)?;
    let space = &a.space;
    let budget = space.nilpotency - 1;
    for m in 1..=a.max_arity() {
        let inv = space.field.inv_factorial(m as u64)?;
        let mut assoc: BTreeMap<Vec<usize>, Combo> = BTreeMap::new();
        let mut symm: BTreeMap<Vec<usize>, Combo> = BTreeMap::new();
        for_each_word(space, m, budget, &mut |word| {
            if word.iter().any(|&i| space.degree(i) != 0) {
                return;
            }
            let mut key = word.to_vec();
            key.sort_unstable();
            let q = a.op_word(word);
            if !q.is_zero() {
                let e = assoc.entry(key.clone()).or_default();
                *e = e.add(&q);
            }
            let v = l.op_word(word);
            if !v.is_zero() {
                let e = symm.entry(key).or_default();
                *e = e.add(&v);
            }
        });
        let keys: BTreeSet<&Vec<usize>> = assoc.keys().chain(symm.keys()).collect();
        for key in keys {
            let lhs = assoc.get(key).cloned().unwrap_or_default();
            let rhs = symm.get(key).cloned().unwrap_or_default().scale(&inv);
            if lhs != rhs {
                return Err(Error::Structure(format!(
                    "curvature coefficients disagree at arity {} on {}",
                    m,
                    key.iter()
                        .map(|&i| space.name(i))
                        .collect::<Vec<_>>()
                        .join(" ")
                )));
            }
        }
    }
    let points: BTreeSet<Combo> = enumerate_mc_with_cap(a, cap)?.into_iter().collect();
    let proxy = l.mc_proxy()?;
    let lie_points: BTreeSet<Combo> = enumerate_mc_with_cap(&proxy, cap)?.into_iter().collect();
    if points != lie_points {
        return Err(Error::Structure(
            "layered Maurer-Cartan sets differ between the two presentations".into(),
        ));
    }
    for x in &points {
        if !is_mc_lie(&l, x)? {
            return Err(Error::Structure(
                "a Maurer-Cartan element fails the symmetrized equation".into(),
            ));
        }
    }
    Ok(())
}

/// Symmetrization is natural for strict maps: the linear part intertwines
/// the symmetrized operations of source and target on every feasible word.
/// Higher components would contribute their own symmetrizations, so anything
/// non-strict is rejected.
pub fn check_commutator_naturality(theta: &Morphism) -> Result<()> {
    if !theta.is_strict() {
        return Err(Error::NotStrict(
            "symmetrization is only natural for strict morphisms".into(),
        ));
    }
    let la = commutator(&theta.source)?;
    let lb = commutator(&theta.target)?;
    let f = theta.linear_part();
    let budget = theta.source.space.nilpotency - 1;
    for n in 1..=la.max_arity() {
        let mut bad = false;
        for_each_word(&theta.source.space, n, budget, &mut |word| {
            if bad {
                return;
            }
            let pushed = f.apply(&la.op_word(word));
            let images: Vec<&Combo> = word.iter().map(|&i| f.col(i)).collect();
            if pushed != lb.eval(&images) {
                bad = true;
            }
        });
        if bad {
            return Err(Error::Structure(format!(
                "the map fails to intertwine the arity-{} operations",
                n
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{curvature, from_dga, is_mc, twist_algebra};
    use crate::dga::FilteredDga;
    use crate::linalg::{BasisEntry, LinMap};
    use crate::mc::DEFAULT_LEAF_CAP;
    use crate::scalar::Field;

    const CAP: usize = DEFAULT_LEAF_CAP;

    fn q() -> Field {
        Field::Rational
    }

    fn entry(name: &str, degree: i32, weight: u32) -> BasisEntry {
        BasisEntry { name: name.into(), degree, weight }
    }

    /// d(a) = b, no products.
    fn abelian(f: Field) -> Arc<AInfty> {
        let s = Space::new(f, 3, vec![entry("a", 1, 1), entry("b", 2, 1)]).unwrap();
        let mut cols = vec![Combo::zero(); 2];
        cols[0] = Combo::single(1, f.one());
        let d = LinMap::new(s.clone(), s.clone(), 1, cols).unwrap();
        from_dga(&FilteredDga::new(s, d, vec![Combo::zero(); 4]).unwrap()).unwrap()
    }

    /// d(a) = y, d(u) = x, a*a = u, y*a = x. The only odd-odd pair with a
    /// nonzero product is (a, a), so Koszul signs do real work here.
    fn acyclic(f: Field) -> Arc<AInfty> {
        let one = || f.one();
        let s = Space::new(
            f,
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
        prod[0] = Combo::single(2, one());
        prod[4] = Combo::single(3, one());
        from_dga(&FilteredDga::new(s, d, prod).unwrap()).unwrap()
    }

    /// d(s) = y1, d(t) = y2, s*t = z and t*s = 0. The differential is
    /// injective on the lowest slice, so the only Maurer-Cartan element is 0
    /// and the layered solver stays finite over the rationals.
    fn rigid_quadratic() -> Arc<AInfty> {
        let one = || q().one();
        let s = Space::new(
            q(),
            3,
            vec![
                entry("s", 1, 1),
                entry("t", 1, 1),
                entry("y1", 2, 1),
                entry("y2", 2, 1),
                entry("z", 2, 2),
            ],
        )
        .unwrap();
        let mut cols = vec![Combo::zero(); 5];
        cols[0] = Combo::single(2, one());
        cols[1] = Combo::single(3, one());
        let d = LinMap::new(s.clone(), s.clone(), 1, cols).unwrap();
        let mut prod = vec![Combo::zero(); 25];
        prod[1] = Combo::single(4, one());
        from_dga(&FilteredDga::new(s, d, prod).unwrap()).unwrap()
    }

    /// z*z = w with z of even shifted degree, so Q1_2 is already symmetric
    /// on (z, z).
    fn square(f: Field) -> Arc<AInfty> {
        let s = Space::new(f, 3, vec![entry("z", -1, 1), entry("w", -2, 2)]).unwrap();
        let d = LinMap::zero(s.clone(), s.clone(), 1);
        let mut prod = vec![Combo::zero(); 4];
        prod[0] = Combo::single(1, f.one());
        from_dga(&FilteredDga::new(s, d, prod).unwrap()).unwrap()
    }

    /// A bare ternary operation (a, b, c) -> e. With no differential and no
    /// binary part every associativity constraint is vacuous.
    fn cubic() -> Arc<AInfty> {
        let s = Space::new(
            q(),
            4,
            vec![
                entry("a", 0, 1),
                entry("b", 0, 1),
                entry("c", 0, 1),
                entry("e", 1, 3),
            ],
        )
        .unwrap();
        let mut t3 = Table::new();
        t3.insert(vec![0, 1, 2], Combo::single(3, q().one()));
        AInfty::new(s, vec![Table::new(), Table::new(), t3]).unwrap()
    }

    /// u*v = w, nothing else.
    fn heis(f: Field) -> Arc<AInfty> {
        let s = Space::new(
            f,
            3,
            vec![entry("u", 1, 1), entry("v", 1, 1), entry("w", 2, 2)],
        )
        .unwrap();
        let d = LinMap::zero(s.clone(), s.clone(), 1);
        let mut prod = vec![Combo::zero(); 9];
        prod[1] = Combo::single(2, f.one());
        from_dga(&FilteredDga::new(s, d, prod).unwrap()).unwrap()
    }

    /// Two generators, no differential, no products.
    fn plane(f: Field) -> Arc<AInfty> {
        let s = Space::new(f, 3, vec![entry("u", 1, 1), entry("v", 1, 1)]).unwrap();
        let d = LinMap::zero(s.clone(), s.clone(), 1);
        from_dga(&FilteredDga::new(s, d, vec![Combo::zero(); 4]).unwrap()).unwrap()
    }

    #[test]
    fn symmetrization_requires_characteristic_zero() {
        let a = acyclic(Field::prime(5).unwrap());
        assert!(matches!(commutator(&a), Err(Error::CharZeroRequired(_))));
    }

    #[test]
    fn abelian_structures_symmetrize_to_the_differential() {
        let a = abelian(q());
        let l = commutator(&a).unwrap();
        assert_eq!(l.tables().len(), 1);
        assert_eq!(l.op_word(&[0]), Combo::single(1, q().one()));
        l.check_jacobi().unwrap();
    }

    #[test]
    fn brackets_sum_the_two_orders_with_koszul_signs() {
        let a = acyclic(q());
        let l = commutator(&a).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut expect = a.op_word(&[i, j]);
                let flipped = a.op_word(&[j, i]);
                if odd(a.space.degree(i)) && odd(a.space.degree(j)) {
                    expect = expect.sub(&flipped);
                } else {
                    expect = expect.add(&flipped);
                }
                assert_eq!(l.op_word(&[i, j]), expect, "at ({}, {})", i, j);
            }
        }
        // a is odd, so its square bracket cancels; the mixed bracket does not.
        assert!(l.op_word(&[0, 0]).is_zero());
        assert_eq!(l.op_word(&[1, 0]), Combo::single(3, q().one()));
        assert_eq!(l.op_word(&[0, 1]), Combo::single(3, q().one()));
    }

    #[test]
    fn already_symmetric_products_double() {
        let a = square(q());
        let l = commutator(&a).unwrap();
        let two = q().from_i64(2);
        assert_eq!(l.op_word(&[0, 0]), a.op_word(&[0, 0]).scale(&two));
        assert!(!l.op_word(&[0, 0]).is_zero());
    }

    #[test]
    fn symmetrized_structures_satisfy_jacobi() {
        for a in [acyclic(q()), rigid_quadratic(), square(q()), heis(q())] {
            a.check_stasheff().unwrap();
            commutator(&a).unwrap().check_jacobi().unwrap();
        }
        let c = cubic();
        c.check_stasheff().unwrap();
        commutator(&c).unwrap().check_jacobi().unwrap();
        // Twisting shuffles lower operations into higher ones; the
        // symmetrization must survive that too.
        let a = acyclic(q());
        let alpha = Combo::single(1, q().one());
        assert!(is_mc(&a, &alpha).unwrap());
        let twisted = twist_algebra(&a, &alpha).unwrap();
        commutator(&twisted).unwrap().check_jacobi().unwrap();
    }

    #[test]
    fn lopsided_tables_are_rejected() {
        let a = rigid_quadratic();
        let mut t2 = Table::new();
        t2.insert(vec![0, 1], Combo::single(4, q().one()));
        let r = ShiftedLInfty::new(a.space.clone(), vec![Table::new(), t2]);
        assert!(matches!(r, Err(Error::Structure(_))));
    }

    #[test]
    fn higher_brackets_appear_in_all_orders() {
        let c = cubic();
        let l = commutator(&c).unwrap();
        let e = Combo::single(3, q().one());
        for word in [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ] {
            assert_eq!(l.op_word(&word), e);
        }
        assert!(l.op_word(&[0, 0, 1]).is_zero());
    }

    #[test]
    fn curvatures_agree_as_exact_polynomials() {
        mc_equality_check(&rigid_quadratic(), CAP).unwrap();

        // Spot checks with fractional coordinates, including an instance
        // whose Maurer-Cartan locus is infinite and therefore outside the
        // extensional comparison.
        let half = q().parse("1/2").unwrap();
        let third = q().parse("-2/3").unwrap();
        let a = acyclic(q());
        let l = commutator(&a).unwrap();
        let proxy = l.mc_proxy().unwrap();
        let x = Combo::from_terms(vec![(1, half.clone()), (3, third.clone())]);
        let c1 = curvature(&a, &x).unwrap();
        assert_eq!(c1, curvature_lie(&l, &x).unwrap());
        assert_eq!(c1, curvature(&proxy, &x).unwrap());

        let c = cubic();
        let lc = commutator(&c).unwrap();
        let y = Combo::from_terms(vec![(0, half), (1, third), (2, q().from_i64(3))]);
        let c2 = curvature(&c, &y).unwrap();
        assert_eq!(c2, curvature_lie(&lc, &y).unwrap());
        assert!(!c2.is_zero());
    }

    #[test]
    fn proxy_tables_halve_the_symmetric_part() {
        let a = rigid_quadratic();
        let l = commutator(&a).unwrap();
        let proxy = l.mc_proxy().unwrap();
        let half = q().parse("1/2").unwrap();
        // s*t = z and t*s = 0 symmetrize to z on both orders; the proxy
        // halves them back so the curvatures match.
        let z = Combo::single(4, q().one());
        assert_eq!(l.op_word(&[0, 1]), z);
        assert_eq!(l.op_word(&[1, 0]), z);
        assert_eq!(proxy.op_word(&[0, 1]), z.scale(&half));
        assert_eq!(proxy.op_word(&[1, 0]), z.scale(&half));
        let points = enumerate_mc_with_cap(&proxy, CAP).unwrap();
        assert_eq!(points, vec![Combo::zero()]);
    }

    #[test]
    fn naturality_holds_for_strict_quotients_only() {
        let a = heis(q());
        let b = plane(q());
        let mut cols = vec![Combo::zero(); 3];
        cols[0] = Combo::single(0, q().one());
        cols[1] = Combo::single(1, q().one());
        let f = LinMap::new(a.space.clone(), b.space.clone(), 0, cols).unwrap();
        let theta = Morphism::strict(a.clone(), b.clone(), &f).unwrap();
        theta.check().unwrap();
        check_commutator_naturality(&theta).unwrap();

        // The quotient kills the bracket of the two generators.
        let la = commutator(&a).unwrap();
        assert!(!la.op_word(&[0, 1]).is_zero());
        let lb = commutator(&b).unwrap();
        assert!(lb.op_word(&[0, 1]).is_zero());

        // Strict pushforward is the linear part, and it lands in the
        // symmetrized Maurer-Cartan locus.
        let x = Combo::single(0, q().parse("2/3").unwrap());
        assert!(is_mc(&a, &x).unwrap());
        assert_eq!(theta.pushforward(&x), f.apply(&x));
        assert!(is_mc_lie(&lb, &theta.pushforward(&x)).unwrap());

        // A morphism with a higher component is rejected outright.
        let ac = acyclic(q());
        let mut t2 = Table::new();
        t2.insert(vec![1, 0], Combo::single(2, q().one()));
        let mut tables = vec![Table::new(), t2];
        tables[0] = (0..4)
            .map(|i| (vec![i], Combo::single(i, q().one())))
            .collect();
        let eta = Morphism::new(ac.clone(), ac.clone(), tables).unwrap();
        assert!(matches!(
            check_commutator_naturality(&eta),
            Err(Error::NotStrict(_))
        ));
    }
}
