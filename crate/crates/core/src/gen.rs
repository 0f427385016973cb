//! Seeded random instances. Valid structures are a thin slice of the table
//! space, so nothing here samples blindly: differentials send a set of
//! source elements into disjoint targets (squaring to zero by construction),
//! products are sparse and rejection-checked, and cubic operations are drawn
//! from the exact solution space of the linear part of the structure
//! identity before the full identity prunes the rest. Everything is
//! deterministic in the seed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainfty::{from_dga, stasheff_defect, AInfty, Table, for_each_word, word_degree, word_weight};
use crate::dga::FilteredDga;
use crate::linalg::{BasisEntry, Combo, LinMap, Mat, Space};
use crate::scalar::{Field, Scalar};

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A distinct stream for instance `i` of a suite seeded by `seed`.
    pub fn instance(seed: u64, i: u64) -> Gen {
        Gen::new(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i))
    }

    fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn nonzero_scalar(&mut self, field: Field) -> Scalar {
        match field.characteristic() {
            0 => {
                let small = [1i64, -1, 2, -2, 3];
                field.from_i64(small[self.below(small.len())])
            }
            p => field.from_i64(1 + self.below(p as usize - 1) as i64),
        }
    }

    fn space(&mut self, field: Field, max_dim: usize, max_nilp: u32) -> Arc<Space> {
        let dim = 2 + self.below(max_dim.saturating_sub(1).max(1));
        // Bias toward deep filtrations and light generators: products need
        // weight room, and degree 0 is where multiplication concentrates.
        let nilpotency = if max_nilp > 2 && !self.chance(0.25) {
            max_nilp
        } else {
            2 + self.below(max_nilp.saturating_sub(1).max(1) as usize) as u32
        };
        let degrees = [-2, -1, 0, 0, 0, 1];
        let entries = (0..dim)
            .map(|i| BasisEntry {
                name: format!("x{}", i),
                degree: degrees[self.below(degrees.len())],
                weight: if self.chance(0.6) {
                    1
                } else {
                    1 + self.below(nilpotency as usize - 1) as u32
                },
            })
            .collect();
        Space::new(field, nilpotency, entries).expect("generated entries are well formed")
    }

    /// A random nilpotent filtered dg algebra. The differential maps a set
    /// of sources into disjoint targets so it squares to zero on the nose;
    /// Leibniz and associativity are enforced by rejection on the structure
    /// identity of the derived shifted algebra.
    pub fn dga(&mut self, field: Field, max_dim: usize, max_nilp: u32) -> FilteredDga {
        for _ in 0..400 {
            let space = self.space(field, max_dim, max_nilp);
            let dim = space.dim();
            let sources: Vec<bool> = (0..dim).map(|_| self.chance(0.4)).collect();
            let mut d_cols = vec![Combo::zero(); dim];
            for i in 0..dim {
                if !sources[i] {
                    continue;
                }
                let legal: Vec<usize> = (0..dim)
                    .filter(|&j| {
                        !sources[j]
                            && space.degree(j) == space.degree(i) + 1
                            && space.weight(j) >= space.weight(i)
                    })
                    .collect();
                if legal.is_empty() {
                    continue;
                }
                let j = legal[self.below(legal.len())];
                d_cols[i] = Combo::single(j, self.nonzero_scalar(field));
            }
            let mut prod = vec![Combo::zero(); dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    if !self.chance(0.4) {
                        continue;
                    }
                    let w = space.weight(i) + space.weight(j);
                    if w >= space.nilpotency {
                        continue;
                    }
                    let legal: Vec<usize> = (0..dim)
                        .filter(|&k| {
                            space.degree(k) == space.degree(i) + space.degree(j)
                                && space.weight(k) >= w
                        })
                        .collect();
                    if legal.is_empty() {
                        continue;
                    }
                    let k = legal[self.below(legal.len())];
                    prod[i * dim + j] = Combo::single(k, self.nonzero_scalar(field));
                }
            }
            let d = LinMap::new(space.clone(), space.clone(), 1, d_cols)
                .expect("targets chosen degree- and weight-legal");
            let candidate = match FilteredDga::new(space, d, prod) {
                Ok(c) => c,
                Err(_) => continue,
            };
            match from_dga(&candidate) {
                Ok(a) if a.check_stasheff().is_ok() => return candidate,
                _ => continue,
            }
        }
        // Sparse sampling failed an unlucky stretch; an abelian instance is
        // always valid and keeps the stream deterministic.
        let space = self.space(field, max_dim, max_nilp);
        let dim = space.dim();
        let d = LinMap::zero(space.clone(), space.clone(), 1);
        FilteredDga::new(space, d, vec![Combo::zero(); dim * dim]).expect("abelian is valid")
    }

    /// An acyclic dg algebra: matched pairs d(s) = y with zero products.
    pub fn acyclic(&mut self, field: Field, pairs: usize, nilpotency: u32) -> FilteredDga {
        let mut entries = Vec::with_capacity(2 * pairs);
        let mut d_cols = Vec::with_capacity(2 * pairs);
        for k in 0..pairs {
            let degree = self.below(3) as i32 - 2;
            let weight = 1 + self.below(nilpotency as usize - 1) as u32;
            entries.push(BasisEntry { name: format!("s{}", k), degree, weight });
            entries.push(BasisEntry { name: format!("y{}", k), degree: degree + 1, weight });
            d_cols.push(Combo::single(2 * k + 1, field.one()));
            d_cols.push(Combo::zero());
        }
        let space = Space::new(field, nilpotency, entries).expect("paired entries are well formed");
        let d = LinMap::new(space.clone(), space.clone(), 1, d_cols).expect("pairing is legal");
        let dim = space.dim();
        FilteredDga::new(space, d, vec![Combo::zero(); dim * dim]).expect("no products to check")
    }

    /// A valid shifted algebra, optionally extended by a nonzero cubic
    /// operation drawn from the solution space of the linear constraint.
    pub fn ainfty(&mut self, field: Field, max_dim: usize, max_nilp: u32) -> Arc<AInfty> {
        from_dga(&self.dga(field, max_dim, max_nilp)).expect("generated dga converts")
    }

    /// Extends an algebra by a random nonzero cubic table. At cubic arity
    /// the structure identity is affine in the new table, so candidates come
    /// from a particular solution plus the kernel; the quartic and quintic
    /// identities are nonlinear in it and handled by rejection. None when
    /// the solution space admits no nonzero choice that survives.
    pub fn with_cubic(&mut self, a: &Arc<AInfty>) -> Option<Arc<AInfty>> {
        let space = &a.space;
        let field = space.field;
        let budget = space.nilpotency - 1;
        let mut vars: Vec<(Vec<usize>, usize)> = Vec::new();
        for_each_word(space, 3, budget, &mut |word| {
            let degree = word_degree(space, word) + 1;
            let weight = word_weight(space, word);
            for t in 0..space.dim() {
                if space.degree(t) == degree && space.weight(t) >= weight {
                    vars.push((word.to_vec(), t));
                }
            }
        });
        if vars.is_empty() {
            return None;
        }

        let mut words: Vec<Vec<usize>> = Vec::new();
        for_each_word(space, 3, budget, &mut |w| words.push(w.to_vec()));
        let dim = space.dim();
        let rows = words.len() * dim;
        let mut base = a.tables().to_vec();
        while base.len() < 3 {
            base.push(Table::new());
        }
        let flat = |tables: &[Table]| -> Vec<Scalar> {
            let mut v = vec![field.zero(); rows];
            for (wi, w) in words.iter().enumerate() {
                for (t, c) in stasheff_defect(space, tables, w).terms() {
                    v[wi * dim + t] = c.clone();
                }
            }
            v
        };
        let rhs0 = flat(&base);
        let cols: Vec<Vec<Scalar>> = vars
            .iter()
            .map(|(word, t)| {
                let mut tables = base.clone();
                tables[2].insert(word.clone(), Combo::single(*t, field.one()));
                let mut col = flat(&tables);
                for (c, b) in col.iter_mut().zip(&rhs0) {
                    *c = c.sub(b);
                }
                col
            })
            .collect();
        let m = Mat::from_cols(field, rows, &cols);
        let rhs: Vec<Scalar> = rhs0.iter().map(|c| c.neg()).collect();
        let particular = m.solve(&rhs)?;
        let kernel = m.kernel_basis();

        for _ in 0..40 {
            let mut coeffs = particular.clone();
            for k in &kernel {
                if !self.chance(0.4) {
                    continue;
                }
                let c = self.nonzero_scalar(field);
                for (acc, v) in coeffs.iter_mut().zip(k) {
                    *acc = acc.add(&v.mul(&c));
                }
            }
            if coeffs.iter().all(|c| c.is_zero()) {
                continue;
            }
            let mut cubic = Table::new();
            for ((word, t), c) in vars.iter().zip(&coeffs) {
                if !c.is_zero() {
                    let entry = cubic
                        .entry(word.clone())
                        .or_insert_with(Combo::zero);
                    *entry = entry.add(&Combo::single(*t, c.clone()));
                }
            }
            cubic.retain(|_, v| !v.is_zero());
            if cubic.is_empty() {
                continue;
            }
            let mut tables = base.clone();
            tables[2] = cubic;
            if let Ok(ext) = AInfty::new(space.clone(), tables) {
                if ext.check_stasheff().is_ok() {
                    return Some(ext);
                }
            }
        }
        None
    }
}
