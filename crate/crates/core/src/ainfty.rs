//! Shifted A-infinity algebras on complete filtered spaces.
//!
//! A structure is a family of degree +1 operations Q1_n : A^(x n) -> A that
//! raise filtration weight additively and satisfy the Stasheff identities
//! sum_k Q1_k Q^k_n = 0, where Q^k_n is the coderivation extension. Since
//! every basis vector has weight >= 1 and F_N = 0, all operations of arity
//! >= N vanish and every fixed-point computation below is a finite sum.
//!
//! Degrees here are the shifted ones: a dg algebra C enters through
//! `from_dga`, which places C^k in degree k-1 and sets
//! Q1_2(x, y) = (-1)^|x| xy with |x| the shifted degree. Morphism components
//! Phi1_n all have degree 0, so their extensions carry no Koszul signs.

use crate::dga::{DgAlgebra, DgAlgebraMap, FilteredDga};
use crate::error::{Error, Result};
use crate::linalg::{filtered_inverse, Combo, Complex, LinMap, Space};
use crate::scalar::{odd, Field, Scalar};
use std::collections::BTreeMap;
use std::sync::Arc;

pub type Word = Vec<usize>;
pub type Table = BTreeMap<Word, Combo>;

pub fn word_degree(space: &Space, word: &[usize]) -> i32 {
    word.iter().map(|&i| space.degree(i)).sum()
}

pub fn word_weight(space: &Space, word: &[usize]) -> u32 {
    word.iter().map(|&i| space.weight(i)).sum()
}

/// Calls f on every word of the given arity whose total weight is at most
/// `budget`, in lexicographic order.
pub fn for_each_word(space: &Space, arity: usize, budget: u32, f: &mut impl FnMut(&[usize])) {
    fn rec(
        space: &Space,
        arity: usize,
        budget: u32,
        buf: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if buf.len() == arity {
            f(buf);
            return;
        }
        let remaining = (arity - buf.len() - 1) as u32;
        for i in 0..space.dim() {
            let w = space.weight(i);
            // every later slot needs weight >= 1
            if w + remaining <= budget {
                buf.push(i);
                rec(space, arity, budget - w, buf, f);
                buf.pop();
            }
        }
    }
    if (arity as u32) > budget {
        return;
    }
    let mut buf = Vec::with_capacity(arity);
    rec(space, arity, budget, &mut buf, f);
}

/// Formal linear combination of basis words of a fixed arity.
#[derive(Clone, Debug, Default)]
pub struct WordSum {
    terms: BTreeMap<Word, Scalar>,
}

impl WordSum {
    pub fn new() -> WordSum {
        WordSum { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, word: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

pub(crate) fn table_op<'t>(tables: &'t [Table], arity: usize, word: &[usize]) -> Option<&'t Combo> {
    tables.get(arity - 1).and_then(|t| t.get(word))
}

/// The left-hand side of the structure identity on one basis word: the sum
/// over all ways to apply an inner operation and feed the result to an outer
/// one. Zero on every word exactly when the identities hold.
pub(crate) fn stasheff_defect(space: &Space, tables: &[Table], word: &[usize]) -> Combo {
    let mut acc = Combo::zero();
    for k in 1..=word.len() {
        let ws = coderivation_words(space, tables, k, word);
        acc = acc.add(&eval_wordsum(tables, k, &ws));
    }
    acc
}

pub(crate) fn eval_wordsum(tables: &[Table], arity: usize, ws: &WordSum) -> Combo {
    let mut acc = Combo::zero();
    for (word, c) in ws.iter() {
        if let Some(v) = table_op(tables, arity, word) {
            acc = acc.add(&v.scale(c));
        }
    }
    acc
}

/// Coderivation extension Q^k_n applied to a basis word of arity n: the sum
/// over positions of prefix (x) Q1_{n-k+1}(block) (x) suffix, with the Koszul
/// sign of moving the degree +1 operator past the prefix.
pub(crate) fn coderivation_words(space: &Space, tables: &[Table], k: usize, word: &[usize]) -> WordSum {
    let n = word.len();
    let mut out = WordSum::new();
    if k > n || k < 1 {
        return out;
    }
    let m = n - k + 1;
    let mut prefix_degree = 0i32;
    for pos in 0..k {
        if pos > 0 {
            prefix_degree += space.degree(word[pos - 1]);
        }
        if let Some(inner) = table_op(tables, m, &word[pos..pos + m]) {
            let sign = space.field.one().negate_if(odd(prefix_degree));
            for (t, c) in inner.terms() {
                let mut w = Vec::with_capacity(k);
                w.extend_from_slice(&word[..pos]);
                w.push(*t);
                w.extend_from_slice(&word[pos + m..]);
                out.add_term(w, c.mul(&sign));
            }
        }
    }
    out
}

/// Morphism extension Phi^k_n applied to a basis word of arity n: the sum over
/// ordered compositions n_1 + ... + n_k = n of Phi1_{n_1} (x) ... (x)
/// Phi1_{n_k}. No signs, since all components have degree 0.
pub(crate) fn morphism_words(field: Field, tables: &[Table], k: usize, word: &[usize]) -> WordSum {
    fn rec(
        tables: &[Table],
        word: &[usize],
        blocks_left: usize,
        acc_word: &mut Word,
        acc_coeff: Scalar,
        out: &mut WordSum,
    ) {
        if blocks_left == 0 {
            if word.is_empty() {
                out.add_term(acc_word.clone(), acc_coeff);
            }
            return;
        }
        // the current block takes sizes 1..=n-(blocks_left-1)
        let max = word.len().saturating_sub(blocks_left - 1);
        for size in 1..=max {
            if let Some(v) = table_op(tables, size, &word[..size]) {
                for (t, c) in v.terms() {
                    acc_word.push(*t);
                    rec(
                        tables,
                        &word[size..],
                        blocks_left - 1,
                        acc_word,
                        acc_coeff.mul(c),
                        out,
                    );
                    acc_word.pop();
                }
            }
        }
    }
    let mut out = WordSum::new();
    if k < 1 || k > word.len() {
        return out;
    }
    rec(tables, word, k, &mut Vec::with_capacity(k), field.one(), &mut out);
    out
}

/// Validates and normalizes structure tables against a space: entries must be
/// degree-homogeneous of the given operator degree, raise weights additively,
/// and index words of the right arity. Zero and weight-infeasible entries are
/// dropped so equal families compare equal.
pub(crate) fn normalize_tables(
    space: &Space,
    op_degree: i32,
    target: &Space,
    tables: Vec<Table>,
) -> Result<Vec<Table>> {
    let budget = space.nilpotency - 1;
    let mut out = Vec::with_capacity(tables.len());
    for (idx, table) in tables.into_iter().enumerate() {
        let arity = idx + 1;
        let mut norm = Table::new();
        for (word, combo) in table {
            if word.len() != arity {
                return Err(Error::Invalid(format!(
                    "arity-{} table keyed by a word of length {}",
                    arity,
                    word.len()
                )));
            }
            if word.iter().any(|&i| i >= space.dim()) {
                return Err(Error::Invalid("table word indexes out of range".into()));
            }
            if combo.is_zero() {
                continue;
            }
            let w = word_weight(space, &word);
            if w > budget {
                return Err(Error::Weight(format!(
                    "nonzero operation on a word of weight {} exceeds the filtration length",
                    w
                )));
            }
            let expect = word_degree(space, &word) + op_degree;
            match combo.degree_in(target)? {
                Some(d) if d != expect => {
                    return Err(Error::Degree(format!(
                        "operation value has degree {}, expected {}",
                        d, expect
                    )))
                }
                _ => {}
            }
            if combo.min_weight_in(target) < w {
                return Err(Error::Weight(
                    "operation value drops below the additive weight bound".into(),
                ));
            }
            norm.insert(word, combo);
        }
        out.push(norm);
    }
    while out.last().is_some_and(|t| t.is_empty()) {
        out.pop();
    }
    Ok(out)
}

/// Shifted A-infinity algebra.
#[derive(Debug)]
pub struct AInfty {
    pub space: Arc<Space>,
    tables: Vec<Table>,
}

impl AInfty {
    pub fn new(space: Arc<Space>, tables: Vec<Table>) -> Result<Arc<AInfty>> {
        let tables = normalize_tables(&space, 1, &space, tables)?;
        Ok(Arc::new(AInfty { space, tables }))
    }

    pub fn max_arity(&self) -> usize {
        self.space.nilpotency as usize - 1
    }

    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    /// Q1_n on a basis word.
    pub fn op_word(&self, word: &[usize]) -> Combo {
        table_op(&self.tables, word.len(), word)
            .cloned()
            .unwrap_or_else(Combo::zero)
    }

    /// Multilinear evaluation of Q1_n on combos. Scalars carry no degree, so
    /// the expansion introduces no signs.
    pub fn eval(&self, args: &[&Combo]) -> Combo {
        eval_multilinear(self.space.field, &self.tables, args)
    }

    /// The differential Q1_1 as a linear map.
    pub fn q1(&self) -> LinMap {
        let cols = (0..self.space.dim())
            .map(|i| self.op_word(&[i]))
            .collect();
        LinMap::new(self.space.clone(), self.space.clone(), 1, cols)
            .expect("validated at construction")
    }

    pub fn tangent(&self) -> Result<Complex> {
        Complex::new(self.space.clone(), self.q1())
    }

    /// Verifies every Stasheff identity on every weight-feasible basis word.
    pub fn check_stasheff(&self) -> Result<()> {
        let budget = self.space.nilpotency - 1;
        for n in 1..=self.max_arity() {
            let mut bad: Option<String> = None;
            for_each_word(&self.space, n, budget, &mut |word| {
                if bad.is_some() {
                    return;
                }
                let acc = stasheff_defect(&self.space, &self.tables, word);
                if !acc.is_zero() {
                    bad = Some(format!(
                        "identity fails at arity {} on ({}): {}",
                        n,
                        word
                            .iter()
                            .map(|&i| self.space.name(i))
                            .collect::<Vec<_>>()
                            .join(", "),
                        acc.describe(&self.space)
                    ));
                }
            });
            if let Some(msg) = bad {
                return Err(Error::Structure(msg));
            }
        }
        Ok(())
    }
}

pub(crate) fn eval_multilinear(field: Field, tables: &[Table], args: &[&Combo]) -> Combo {
    fn rec(
        tables: &[Table],
        args: &[&Combo],
        word: &mut Word,
        coeff: Scalar,
        acc: &mut Combo,
    ) {
        if word.len() == args.len() {
            if let Some(v) = table_op(tables, word.len(), word) {
                *acc = acc.add(&v.scale(&coeff));
            }
            return;
        }
        let next = args[word.len()];
        for (i, c) in next.terms() {
            word.push(*i);
            rec(tables, args, word, coeff.mul(c), acc);
            word.pop();
        }
    }
    let mut acc = Combo::zero();
    if args.is_empty() {
        return acc;
    }
    rec(
        tables,
        args,
        &mut Vec::with_capacity(args.len()),
        field.one(),
        &mut acc,
    );
    acc
}

/// The shifted space of a filtered dga: same basis, degrees lowered by one.
pub fn shifted_space(space: &Space) -> Result<Arc<Space>> {
    Space::new(
        space.field,
        space.nilpotency,
        space
            .entries()
            .iter()
            .map(|e| crate::linalg::BasisEntry {
                name: e.name.clone(),
                degree: e.degree - 1,
                weight: e.weight,
            })
            .collect(),
    )
}

/// A filtered dga C yields the shifted structure on C[1]:
/// Q1_1 = d and Q1_2(x, y) = (-1)^|x| xy in shifted degrees.
pub fn from_dga(c: &FilteredDga) -> Result<Arc<AInfty>> {
    let space = shifted_space(&c.space)?;
    let mut t1 = Table::new();
    for i in 0..space.dim() {
        let v = c.d.col(i).clone();
        if !v.is_zero() {
            t1.insert(vec![i], v);
        }
    }
    let mut t2 = Table::new();
    let budget = space.nilpotency - 1;
    for i in 0..space.dim() {
        for j in 0..space.dim() {
            if space.weight(i) + space.weight(j) > budget {
                continue;
            }
            let v = c
                .basis_product(i, j)
                .scale(&space.field.one().negate_if(odd(space.degree(i))));
            if !v.is_zero() {
                t2.insert(vec![i, j], v);
            }
        }
    }
    let mut tables = vec![t1, t2];
    tables.truncate(space.nilpotency as usize - 1);
    AInfty::new(space, tables)
}

/// Filtered infinity-morphism between shifted A-infinity algebras.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: Arc<AInfty>,
    pub target: Arc<AInfty>,
    tables: Vec<Table>,
}

impl Morphism {
    pub fn new(source: Arc<AInfty>, target: Arc<AInfty>, tables: Vec<Table>) -> Result<Morphism> {
        if source.space.field != target.space.field {
            return Err(Error::FieldMismatch("morphism between different fields".into()));
        }
        let tables = normalize_tables(&source.space, 0, &target.space, tables)?;
        Ok(Morphism { source, target, tables })
    }

    pub fn strict(source: Arc<AInfty>, target: Arc<AInfty>, f: &LinMap) -> Result<Morphism> {
        if f.source != source.space || f.target != target.space || f.degree != 0 {
            return Err(Error::Invalid("strict morphism map type mismatch".into()));
        }
        let mut t1 = Table::new();
        for i in 0..source.space.dim() {
            let v = f.col(i).clone();
            if !v.is_zero() {
                t1.insert(vec![i], v);
            }
        }
        Morphism::new(source, target, vec![t1])
    }

    pub fn identity(a: &Arc<AInfty>) -> Morphism {
        let id = LinMap::identity(a.space.clone());
        Morphism::strict(a.clone(), a.clone(), &id).expect("identity is strict")
    }

    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    pub fn op_word(&self, word: &[usize]) -> Combo {
        table_op(&self.tables, word.len(), word)
            .cloned()
            .unwrap_or_else(Combo::zero)
    }

    pub fn eval(&self, args: &[&Combo]) -> Combo {
        eval_multilinear(self.source.space.field, &self.tables, args)
    }

    pub fn linear_part(&self) -> LinMap {
        let cols = (0..self.source.space.dim())
            .map(|i| self.op_word(&[i]))
            .collect();
        LinMap::new(self.source.space.clone(), self.target.space.clone(), 0, cols)
            .expect("validated at construction")
    }

    pub fn is_strict(&self) -> bool {
        self.tables.iter().skip(1).all(|t| t.is_empty())
    }

    /// Verifies the infinity-morphism identities
    /// sum_k Phi1_k Q^k_n = sum_k Q'1_k Phi^k_n on all feasible basis words.
    pub fn check(&self) -> Result<()> {
        let space = &self.source.space;
        let budget = space.nilpotency - 1;
        let max_n = space.nilpotency as usize - 1;
        for n in 1..=max_n {
            let mut bad: Option<String> = None;
            for_each_word(space, n, budget, &mut |word| {
                if bad.is_some() {
                    return;
                }
                let mut lhs = Combo::zero();
                let mut rhs = Combo::zero();
                for k in 1..=n {
                    let cw = coderivation_words(space, self.source.tables(), k, word);
                    lhs = lhs.add(&eval_wordsum(&self.tables, k, &cw));
                    let mw = morphism_words(space.field, &self.tables, k, word);
                    rhs = rhs.add(&eval_wordsum(self.target.tables(), k, &mw));
                }
                if lhs != rhs {
                    bad = Some(format!(
                        "morphism identity fails at arity {} on ({})",
                        n,
                        word
                            .iter()
                            .map(|&i| space.name(i))
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

    /// Composition (self after inner): (Psi Phi)1_n = sum_k Psi1_k Phi^k_n.
    pub fn compose(&self, inner: &Morphism) -> Morphism {
        assert!(
            inner.target.space == self.source.space,
            "composition type mismatch"
        );
        if self.is_strict() && inner.is_strict() {
            let f = self.linear_part().compose(&inner.linear_part());
            return Morphism::strict(inner.source.clone(), self.target.clone(), &f)
                .expect("composite of strict morphisms");
        }
        let space = &inner.source.space;
        let budget = space.nilpotency - 1;
        let max_n = space.nilpotency as usize - 1;
        let mut tables = Vec::with_capacity(max_n);
        for n in 1..=max_n {
            let mut t = Table::new();
            for_each_word(space, n, budget, &mut |word| {
                let mut acc = Combo::zero();
                for k in 1..=n {
                    let mw = morphism_words(space.field, &inner.tables, k, word);
                    acc = acc.add(&eval_wordsum(&self.tables, k, &mw));
                }
                if !acc.is_zero() {
                    t.insert(word.to_vec(), acc);
                }
            });
            tables.push(t);
        }
        Morphism::new(inner.source.clone(), self.target.clone(), tables)
            .expect("composite tables are filtered")
    }

    pub fn equals(&self, other: &Morphism) -> bool {
        self.source.space == other.source.space
            && self.target.space == other.target.space
            && self.tables == other.tables
    }

    pub fn is_identity(&self) -> bool {
        self.source.space == self.target.space
            && self.equals(&Morphism::identity(&self.source))
    }

    /// Inverse of an infinity-isomorphism (linear part a filtered iso):
    /// built by arity recursion, then verified on both sides.
    pub fn inverse(&self) -> Result<Morphism> {
        let g1 = filtered_inverse(&self.linear_part())?;
        let src = self.target.clone();
        let tgt = self.source.clone();
        let space = &src.space;
        let budget = space.nilpotency - 1;
        let max_n = space.nilpotency as usize - 1;
        let mut tables: Vec<Table> = Vec::with_capacity(max_n);
        let mut t1 = Table::new();
        for i in 0..space.dim() {
            let v = g1.col(i).clone();
            if !v.is_zero() {
                t1.insert(vec![i], v);
            }
        }
        tables.push(t1);
        for n in 2..=max_n {
            let mut t = Table::new();
            for_each_word(space, n, budget, &mut |word| {
                // sum over k >= 2 of Gamma1_k (Gamma^-1)^k_n, using the
                // already-built lower arities
                let mut acc = Combo::zero();
                for k in 2..=n {
                    let mw = morphism_words(space.field, &tables, k, word);
                    acc = acc.add(&eval_wordsum(&self.tables, k, &mw));
                }
                let v = g1.apply(&acc).neg();
                if !v.is_zero() {
                    t.insert(word.to_vec(), v);
                }
            });
            tables.push(t);
        }
        let inv = Morphism::new(src, tgt, tables)?;
        if !self.compose(&inv).is_identity() || !inv.compose(self).is_identity() {
            return Err(Error::Structure(
                "inverse construction failed to produce a two-sided inverse".into(),
            ));
        }
        Ok(inv)
    }

    /// Pushforward of a degree-0 element along the morphism:
    /// sum_k Phi1_k(alpha, ..., alpha). Sends Maurer-Cartan elements to
    /// Maurer-Cartan elements.
    pub fn pushforward(&self, alpha: &Combo) -> Combo {
        let mut acc = Combo::zero();
        for k in 1..=self.source.max_arity() {
            let args: Vec<&Combo> = std::iter::repeat(alpha).take(k).collect();
            acc = acc.add(&self.eval(&args));
        }
        acc
    }
}

/// Curvature of a degree-0 element: sum_n Q1_n(alpha, ..., alpha).
pub fn curvature(a: &AInfty, alpha: &Combo) -> Result<Combo> {
    match alpha.degree_in(&a.space)? {
        Some(d) if d != 0 => {
            return Err(Error::Degree(format!(
                "curvature input has degree {}, expected 0",
                d
            )))
        }
        _ => {}
    }
    let mut acc = Combo::zero();
    for n in 1..=a.max_arity() {
        let args: Vec<&Combo> = std::iter::repeat(alpha).take(n).collect();
        acc = acc.add(&a.eval(&args));
    }
    Ok(acc)
}

pub fn is_mc(a: &AInfty, alpha: &Combo) -> Result<bool> {
    Ok(curvature(a, alpha)?.is_zero())
}

/// Twist of a structure-map family by a degree-0 element: the new arity-n
/// component sums T1_{n+k} over all interleavings of k copies of alpha.
/// Since alpha has degree 0 there are no signs, and since it has weight >= 1
/// the sum is finite.
fn twist_tables(space: &Space, tables: &[Table], alpha: &Combo) -> Vec<Table> {
    let budget = space.nilpotency - 1;
    let max_n = space.nilpotency as usize - 1;
    let mut out = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let mut t = Table::new();
        for_each_word(space, n, budget, &mut |word| {
            let slack = (budget - word_weight(space, word)) as usize;
            let mut acc = table_op(tables, n, word).cloned().unwrap_or_else(Combo::zero);
            for k in 1..=slack {
                if n + k > tables.len() {
                    break;
                }
                // interleave k alphas into the n+1 gaps around the word
                let mut interleaved = WordSum::new();
                distribute_alpha(space, alpha, word, k, &mut interleaved);
                acc = acc.add(&eval_wordsum(tables, n + k, &interleaved));
            }
            if !acc.is_zero() {
                t.insert(word.to_vec(), acc);
            }
        });
        out.push(t);
    }
    out
}

/// Expands sum over (k_0, ..., k_n) with sum k of
/// alpha^(x k_0) (x) x_1 (x) alpha^(x k_1) (x) ... (x) x_n (x) alpha^(x k_n)
/// into basis words.
fn distribute_alpha(space: &Space, alpha: &Combo, word: &[usize], k: usize, out: &mut WordSum) {
    fn rec(
        space: &Space,
        alpha: &Combo,
        word: &[usize],
        gaps_left: usize,
        k_left: usize,
        buf: &mut Word,
        coeff: Scalar,
        out: &mut WordSum,
    ) {
        if gaps_left == 0 {
            if k_left == 0 {
                out.add_term(buf.clone(), coeff);
            }
            return;
        }
        // choose how many alphas in this gap: 0..=k_left
        fn alphas(
            space: &Space,
            alpha: &Combo,
            word: &[usize],
            gaps_left: usize,
            k_left: usize,
            count: usize,
            buf: &mut Word,
            coeff: Scalar,
            out: &mut WordSum,
        ) {
            if count == 0 {
                // then one word letter (unless this is the final gap)
                if gaps_left == 1 {
                    rec(space, alpha, word, 0, k_left, buf, coeff, out);
                } else {
                    let letter = word[word.len() - (gaps_left - 1)];
                    buf.push(letter);
                    rec(space, alpha, word, gaps_left - 1, k_left, buf, coeff, out);
                    buf.pop();
                }
                return;
            }
            for (i, c) in alpha.terms() {
                buf.push(*i);
                alphas(
                    space,
                    alpha,
                    word,
                    gaps_left,
                    k_left - 1,
                    count - 1,
                    buf,
                    coeff.mul(c),
                    out,
                );
                buf.pop();
            }
        }
        for count in 0..=k_left {
            alphas(
                space, alpha, word, gaps_left, k_left, count, buf, coeff.clone(), out,
            );
        }
    }
    // gaps: before x_1, ..., before x_n, after x_n -> n+1 gaps; we walk them
    // left to right, emitting the word letter after each of the first n gaps.
    rec(
        space,
        alpha,
        word,
        word.len() + 1,
        k,
        &mut Vec::with_capacity(word.len() + k),
        space.field.one(),
        out,
    );
}

/// Twisted algebra Q^alpha; requires alpha Maurer-Cartan so that the result
/// satisfies the Stasheff identities.
pub fn twist_algebra(a: &Arc<AInfty>, alpha: &Combo) -> Result<Arc<AInfty>> {
    if !is_mc(a, alpha)? {
        return Err(Error::NotMaurerCartan(
            "twisting requires a Maurer-Cartan element".into(),
        ));
    }
    AInfty::new(a.space.clone(), twist_tables(&a.space, a.tables(), alpha))
}

/// Twisted morphism Phi^alpha : (A, Q^alpha) -> (A', Q'^{Phi_* alpha}).
pub fn twist_morphism(phi: &Morphism, alpha: &Combo) -> Result<Morphism> {
    let src = twist_algebra(&phi.source, alpha)?;
    let beta = phi.pushforward(alpha);
    let tgt = twist_algebra(&phi.target, &beta)?;
    Morphism::new(
        src,
        tgt,
        twist_tables(&phi.source.space, phi.tables(), alpha),
    )
}

/// Tensor of a shifted structure with an unfiltered unital dga. The basis is
/// pairs a (x) b with weight taken from a; operations are
/// (Q_B)1_1 = Q1_1 (x) id + id (x) delta and for k >= 2
/// (Q_B)1_k(a_1 (x) b_1, ...) = (-1)^eps Q1_k(a_1..a_k) (x) b_1 ... b_k.
pub struct TensorDga {
    pub algebra: Arc<AInfty>,
    pub left: Arc<Space>,
    pub right: Arc<DgAlgebra>,
}

impl TensorDga {
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.right.space.dim() + j
    }

    pub fn split(&self, k: usize) -> (usize, usize) {
        (k / self.right.space.dim(), k % self.right.space.dim())
    }

    /// x (x) e_j for x a combo over the left factor.
    pub fn insert_left(&self, x: &Combo, j: usize) -> Combo {
        x.map_indices(|i| self.idx(i, j))
    }

    /// Collects the left-factor coefficient of e_j in a combo.
    pub fn left_component(&self, v: &Combo, j: usize) -> Combo {
        Combo::from_terms(
            v.terms()
                .iter()
                .filter(|(k, _)| self.split(*k).1 == j)
                .map(|(k, c)| (self.split(*k).0, c.clone()))
                .collect(),
        )
    }
}

pub fn tensor_space(a_space: &Space, b: &DgAlgebra) -> Result<Arc<Space>> {
    if a_space.field != b.space.field {
        return Err(Error::FieldMismatch("tensor factors over different fields".into()));
    }
    let mut entries = Vec::with_capacity(a_space.dim() * b.space.dim());
    for i in 0..a_space.dim() {
        for j in 0..b.space.dim() {
            entries.push(crate::linalg::BasisEntry {
                name: format!("{}|{}", a_space.name(i), b.space.name(j)),
                degree: a_space.degree(i) + b.space.degree(j),
                weight: a_space.weight(i),
            });
        }
    }
    Space::new(a_space.field, a_space.nilpotency, entries)
}

fn koszul_eps(a_space: &Space, b_space: &Space, word: &[(usize, usize)]) -> bool {
    // eps = sum_{i < j} |b_i| |a_j|
    let mut eps = 0i64;
    for i in 0..word.len() {
        for j in (i + 1)..word.len() {
            eps += (b_space.degree(word[i].1) as i64) * (a_space.degree(word[j].0) as i64);
        }
    }
    eps % 2 != 0
}

pub fn tensor_with_dga(a: &Arc<AInfty>, b: &Arc<DgAlgebra>) -> Result<TensorDga> {
    let space = tensor_space(&a.space, b)?;
    let dim_b = b.space.dim();
    let field = space.field;
    let budget = space.nilpotency - 1;
    let max_n = space.nilpotency as usize - 1;

    let mut tables: Vec<Table> = vec![Table::new(); max_n];

    // arity 1: Q1_1 (x) id + Koszul id (x) delta
    for i in 0..a.space.dim() {
        for j in 0..dim_b {
            let mut v = a.op_word(&[i]).map_indices(|t| t * dim_b + j);
            let db = b.d.col(j);
            if !db.is_zero() {
                let sign = field.one().negate_if(odd(a.space.degree(i)));
                v = v.add(
                    &db.map_indices(|t| i * dim_b + t).scale(&sign),
                );
            }
            if !v.is_zero() {
                tables[0].insert(vec![i * dim_b + j], v);
            }
        }
    }

    // arity >= 2: driven by the entries of the left factor's tables
    for n in 2..=max_n {
        let a_table = match a.tables().get(n - 1) {
            Some(t) => t,
            None => continue,
        };
        for (a_word, q_val) in a_table {
            if word_weight(&a.space, a_word) > budget {
                continue;
            }
            // all b-words of length n
            let mut b_word = vec![0usize; n];
            loop {
                // product b_1 ... b_n
                let mut prod = Combo::single(b_word[0], field.one());
                for &bj in &b_word[1..] {
                    if prod.is_zero() {
                        break;
                    }
                    prod = b.mul(&prod, &Combo::single(bj, field.one()));
                }
                if !prod.is_zero() {
                    let pairs: Vec<(usize, usize)> = a_word
                        .iter()
                        .copied()
                        .zip(b_word.iter().copied())
                        .collect();
                    let sign = field.one().negate_if(koszul_eps(&a.space, &b.space, &pairs));
                    let mut value = Combo::zero();
                    for (t, qc) in q_val.terms() {
                        for (u, pc) in prod.terms() {
                            value = value.add(&Combo::single(
                                t * dim_b + u,
                                qc.mul(pc).mul(&sign),
                            ));
                        }
                    }
                    if !value.is_zero() {
                        let word: Word = pairs.iter().map(|&(i, j)| i * dim_b + j).collect();
                        let entry = tables[n - 1].entry(word).or_insert_with(Combo::zero);
                        *entry = entry.add(&value);
                    }
                }
                // next b-word
                let mut pos = n;
                while pos > 0 {
                    pos -= 1;
                    b_word[pos] += 1;
                    if b_word[pos] < dim_b {
                        break;
                    }
                    b_word[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX {
                    break;
                }
            }
        }
        tables[n - 1].retain(|_, v| !v.is_zero());
    }

    let algebra = AInfty::new(space, tables)?;
    Ok(TensorDga { algebra, left: a.space.clone(), right: b.clone() })
}

/// Phi (x) id_B as a morphism between tensor algebras.
pub fn tensor_morphism(phi: &Morphism, b: &Arc<DgAlgebra>) -> Result<Morphism> {
    let src = tensor_with_dga(&phi.source, b)?;
    let tgt = tensor_with_dga(&phi.target, b)?;
    let dim_b = b.space.dim();
    let field = src.algebra.space.field;
    let budget = src.algebra.space.nilpotency - 1;
    let max_n = src.algebra.max_arity();
    let mut tables: Vec<Table> = vec![Table::new(); max_n];
    for n in 1..=max_n {
        let p_table = match phi.tables().get(n - 1) {
            Some(t) => t,
            None => continue,
        };
        for (a_word, p_val) in p_table {
            if word_weight(&phi.source.space, a_word) > budget {
                continue;
            }
            let mut b_word = vec![0usize; n];
            loop {
                let mut prod = Combo::single(b_word[0], field.one());
                for &bj in &b_word[1..] {
                    if prod.is_zero() {
                        break;
                    }
                    prod = b.mul(&prod, &Combo::single(bj, field.one()));
                }
                if !prod.is_zero() {
                    let pairs: Vec<(usize, usize)> = a_word
                        .iter()
                        .copied()
                        .zip(b_word.iter().copied())
                        .collect();
                    let sign = field
                        .one()
                        .negate_if(koszul_eps(&phi.source.space, &b.space, &pairs));
                    let mut value = Combo::zero();
                    for (t, qc) in p_val.terms() {
                        for (u, pc) in prod.terms() {
                            value = value.add(&Combo::single(
                                t * dim_b + u,
                                qc.mul(pc).mul(&sign),
                            ));
                        }
                    }
                    if !value.is_zero() {
                        let word: Word = pairs.iter().map(|&(i, j)| i * dim_b + j).collect();
                        let entry = tables[n - 1].entry(word).or_insert_with(Combo::zero);
                        *entry = entry.add(&value);
                    }
                }
                let mut pos = n;
                while pos > 0 {
                    pos -= 1;
                    b_word[pos] += 1;
                    if b_word[pos] < dim_b {
                        break;
                    }
                    b_word[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX {
                    break;
                }
            }
        }
        tables[n - 1].retain(|_, v| !v.is_zero());
    }
    Morphism::new(src.algebra, tgt.algebra, tables)
}

/// id_A (x) f for a map of coefficient dgas, as a strict morphism.
pub fn tensor_dga_map(a: &Arc<AInfty>, f: &DgAlgebraMap) -> Result<Morphism> {
    let src = tensor_with_dga(a, &f.source)?;
    let tgt = tensor_with_dga(a, &f.target)?;
    let dim_src = f.source.space.dim();
    let dim_tgt = f.target.space.dim();
    let mut cols = Vec::with_capacity(a.space.dim() * dim_src);
    for i in 0..a.space.dim() {
        for j in 0..dim_src {
            cols.push(f.map.col(j).map_indices(|t| i * dim_tgt + t));
        }
    }
    let lin = LinMap::new(
        src.algebra.space.clone(),
        tgt.algebra.space.clone(),
        0,
        cols,
    )?;
    Morphism::strict(src.algebra, tgt.algebra, &lin)
}

/// Direct product of shifted structures: operations vanish on mixed words.
pub struct ProductAlgebra {
    pub algebra: Arc<AInfty>,
    pub left: Arc<AInfty>,
    pub right: Arc<AInfty>,
}

impl ProductAlgebra {
    pub fn dim_left(&self) -> usize {
        self.left.space.dim()
    }

    pub fn embed_left(&self, v: &Combo) -> Combo {
        v.clone()
    }

    pub fn embed_right(&self, v: &Combo) -> Combo {
        v.map_indices(|i| i + self.dim_left())
    }

    pub fn project_left(&self, v: &Combo) -> Combo {
        let nl = self.dim_left();
        Combo::from_terms(
            v.terms()
                .iter()
                .filter(|(i, _)| *i < nl)
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        )
    }

    pub fn project_right(&self, v: &Combo) -> Combo {
        let nl = self.dim_left();
        Combo::from_terms(
            v.terms()
                .iter()
                .filter(|(i, _)| *i >= nl)
                .map(|(i, c)| (*i - nl, c.clone()))
                .collect(),
        )
    }

    pub fn pr_left(&self) -> Morphism {
        let cols = (0..self.algebra.space.dim())
            .map(|k| {
                if k < self.dim_left() {
                    Combo::single(k, self.algebra.space.field.one())
                } else {
                    Combo::zero()
                }
            })
            .collect();
        let f = LinMap::new(
            self.algebra.space.clone(),
            self.left.space.clone(),
            0,
            cols,
        )
        .expect("projection is filtered");
        Morphism::strict(self.algebra.clone(), self.left.clone(), &f).expect("strict projection")
    }

    pub fn pr_right(&self) -> Morphism {
        let nl = self.dim_left();
        let cols = (0..self.algebra.space.dim())
            .map(|k| {
                if k >= nl {
                    Combo::single(k - nl, self.algebra.space.field.one())
                } else {
                    Combo::zero()
                }
            })
            .collect();
        let f = LinMap::new(
            self.algebra.space.clone(),
            self.right.space.clone(),
            0,
            cols,
        )
        .expect("projection is filtered");
        Morphism::strict(self.algebra.clone(), self.right.clone(), &f).expect("strict projection")
    }

    /// Mediating morphism <Phi, Psi> : X -> A x B; mixed blocks die against
    /// the product structure, so the components are simply embedded sums.
    pub fn pair(&self, phi: &Morphism, psi: &Morphism) -> Result<Morphism> {
        if phi.source.space != psi.source.space {
            return Err(Error::Invalid("pairing of morphisms with different sources".into()));
        }
        if phi.target.space != self.left.space || psi.target.space != self.right.space {
            return Err(Error::Invalid("pairing targets do not match the product".into()));
        }
        let max_n = phi.source.max_arity();
        let nl = self.dim_left();
        let mut tables: Vec<Table> = vec![Table::new(); max_n];
        for n in 1..=max_n {
            let mut words: std::collections::BTreeSet<Word> = Default::default();
            if let Some(t) = phi.tables().get(n - 1) {
                words.extend(t.keys().cloned());
            }
            if let Some(t) = psi.tables().get(n - 1) {
                words.extend(t.keys().cloned());
            }
            for w in words {
                let v = phi
                    .op_word(&w)
                    .add(&psi.op_word(&w).map_indices(|i| i + nl));
                if !v.is_zero() {
                    tables[n - 1].insert(w, v);
                }
            }
        }
        Morphism::new(phi.source.clone(), self.algebra.clone(), tables)
    }
}

pub fn product(a: &Arc<AInfty>, b: &Arc<AInfty>) -> Result<ProductAlgebra> {
    if a.space.field != b.space.field {
        return Err(Error::FieldMismatch("product over different fields".into()));
    }
    if a.space.nilpotency != b.space.nilpotency {
        return Err(Error::Invalid(
            "product factors must share the filtration length".into(),
        ));
    }
    let nl = a.space.dim();
    let mut entries = Vec::with_capacity(nl + b.space.dim());
    for e in a.space.entries() {
        entries.push(crate::linalg::BasisEntry {
            name: format!("l.{}", e.name),
            degree: e.degree,
            weight: e.weight,
        });
    }
    for e in b.space.entries() {
        entries.push(crate::linalg::BasisEntry {
            name: format!("r.{}", e.name),
            degree: e.degree,
            weight: e.weight,
        });
    }
    let space = Space::new(a.space.field, a.space.nilpotency, entries)?;
    let max_n = space.nilpotency as usize - 1;
    let mut tables: Vec<Table> = vec![Table::new(); max_n];
    for (n_idx, t) in a.tables().iter().enumerate() {
        for (w, v) in t {
            tables[n_idx].insert(w.clone(), v.clone());
        }
    }
    for (n_idx, t) in b.tables().iter().enumerate() {
        for (w, v) in t {
            tables[n_idx].insert(
                w.iter().map(|&i| i + nl).collect(),
                v.map_indices(|i| i + nl),
            );
        }
    }
    let algebra = AInfty::new(space, tables)?;
    Ok(ProductAlgebra { algebra, left: a.clone(), right: b.clone() })
}
