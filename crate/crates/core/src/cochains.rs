//! Normalized cochain algebras of standard simplices, with the simplicial
//! structure maps used to assemble nerves.
//!
//! The basis of the degree-k part is one generator phi_sigma per strictly
//! increasing (k+1)-tuple sigma of vertices of the n-simplex. The product is
//! the front/back cup product: phi_sigma * phi_rho = phi_{sigma . rho[1..]}
//! when sigma ends where rho starts, zero otherwise. The differential of
//! phi_sigma is the signed sum of the phi_tau over one-vertex enlargements
//! tau = sigma + {j}, with sign (-1)^(position of j in tau); this is the
//! convention under which the cup product satisfies the graded Leibniz rule.
//! The unit is the sum of all vertex generators and evaluation at a vertex
//! is an algebra map.

use crate::dga::{DgAlgebra, DgAlgebraMap};
use crate::error::{Error, Result};
use crate::linalg::{Combo, LinMap, Space};
use crate::scalar::Field;
use std::collections::HashMap;
use std::sync::Arc;

/// Cap keeps generator names unambiguous (single-digit vertices) and the
/// 2^(n+1)-sized bases affordable.
const MAX_SIMPLEX_DIM: usize = 9;

fn subsets_by_degree(n: usize) -> Vec<Vec<usize>> {
    let mut subs: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..(1u32 << (n + 1)) {
        let verts: Vec<usize> = (0..=n).filter(|&v| mask & (1 << v) != 0).collect();
        subs.push(verts);
    }
    subs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subs
}

fn gen_name(sigma: &[usize]) -> String {
    let digits: String = sigma.iter().map(|v| v.to_string()).collect();
    format!("phi_{}", digits)
}

pub struct SimplexCochains {
    pub n: usize,
    pub dga: Arc<DgAlgebra>,
    sigmas: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl SimplexCochains {
    pub fn index_of(&self, sigma: &[usize]) -> Option<usize> {
        self.lookup.get(sigma).copied()
    }

    pub fn sigma(&self, i: usize) -> &[usize] {
        &self.sigmas[i]
    }
}

pub fn simplex_cochains(field: Field, n: usize) -> Result<SimplexCochains> {
    if n > MAX_SIMPLEX_DIM {
        return Err(Error::Unsupported(format!(
            "simplex dimension {} exceeds the supported maximum {}",
            n, MAX_SIMPLEX_DIM
        )));
    }
    let sigmas = subsets_by_degree(n);
    let lookup: HashMap<Vec<usize>, usize> = sigmas
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let space = Space::unfiltered(
        field,
        sigmas
            .iter()
            .map(|s| (gen_name(s), s.len() as i32 - 1))
            .collect(),
    )?;

    let dim = sigmas.len();
    let mut d_cols = Vec::with_capacity(dim);
    for sigma in &sigmas {
        let mut terms = Vec::new();
        for j in 0..=n {
            if sigma.contains(&j) {
                continue;
            }
            let mut tau = sigma.clone();
            let pos = tau.iter().position(|&v| v > j).unwrap_or(tau.len());
            tau.insert(pos, j);
            let sign = field.one().negate_if(pos % 2 == 1);
            terms.push((lookup[&tau], sign));
        }
        d_cols.push(Combo::from_terms(terms));
    }
    let d = LinMap::new(space.clone(), space.clone(), 1, d_cols)?;

    let mut prod = vec![Combo::zero(); dim * dim];
    for (i, sigma) in sigmas.iter().enumerate() {
        for (j, rho) in sigmas.iter().enumerate() {
            if sigma.last() == rho.first() {
                let mut joined = sigma.clone();
                joined.extend_from_slice(&rho[1..]);
                prod[i * dim + j] = Combo::single(lookup[&joined], field.one());
            }
        }
    }

    let unit = Combo::from_terms(
        (0..=n)
            .map(|v| (lookup[&vec![v]], field.one()))
            .collect(),
    );

    let dga = DgAlgebra::new(space, d, prod, unit)?;
    if n <= 4 {
        dga.check_associativity()?;
    }
    Ok(SimplexCochains { n, dga, sigmas, lookup })
}

fn structure_map(
    source: &SimplexCochains,
    target: &SimplexCochains,
    image: impl Fn(&[usize]) -> Vec<Vec<usize>>,
) -> Result<DgAlgebraMap> {
    let field = source.dga.space.field;
    let cols = source
        .sigmas
        .iter()
        .map(|sigma| {
            Combo::from_terms(
                image(sigma)
                    .into_iter()
                    .map(|tau| (target.lookup[&tau], field.one()))
                    .collect(),
            )
        })
        .collect();
    let map = LinMap::new(source.dga.space.clone(), target.dga.space.clone(), 0, cols)?;
    DgAlgebraMap::new(source.dga.clone(), target.dga.clone(), map)
}

/// Restriction along the coface skipping vertex j: the structure map
/// inducing the j-th face of the nerve. Kills generators containing j and
/// relabels the rest downward.
pub fn face_map(field: Field, n: usize, j: usize) -> Result<DgAlgebraMap> {
    if n == 0 || j > n {
        return Err(Error::Invalid(format!("face ({}, {}) out of range", n, j)));
    }
    let source = simplex_cochains(field, n)?;
    let target = simplex_cochains(field, n - 1)?;
    structure_map(&source, &target, |sigma| {
        if sigma.contains(&j) {
            return Vec::new();
        }
        vec![sigma
            .iter()
            .map(|&v| if v > j { v - 1 } else { v })
            .collect()]
    })
}

/// Restriction along the codegeneracy collapsing j, j+1 to j: induces the
/// j-th degeneracy of the nerve. A generator containing j has two preimage
/// tuples (lifting j to j or to j+1); all other vertices shift past j.
pub fn degeneracy_map(field: Field, n: usize, j: usize) -> Result<DgAlgebraMap> {
    if j > n {
        return Err(Error::Invalid(format!(
            "degeneracy ({}, {}) out of range",
            n, j
        )));
    }
    let source = simplex_cochains(field, n)?;
    let target = simplex_cochains(field, n + 1)?;
    structure_map(&source, &target, |sigma| {
        let lift = |choice: usize| -> Vec<usize> {
            sigma
                .iter()
                .map(|&v| {
                    if v > j {
                        v + 1
                    } else if v == j {
                        choice
                    } else {
                        v
                    }
                })
                .collect()
        };
        if sigma.contains(&j) {
            vec![lift(j), lift(j + 1)]
        } else {
            vec![lift(0)]
        }
    })
}

/// Evaluation at vertex i, an algebra map onto the cochains of the point.
pub fn vertex_evaluation(field: Field, n: usize, i: usize) -> Result<DgAlgebraMap> {
    if i > n {
        return Err(Error::Invalid(format!(
            "vertex ({}, {}) out of range",
            n, i
        )));
    }
    let source = simplex_cochains(field, n)?;
    let target = simplex_cochains(field, 0)?;
    structure_map(&source, &target, |sigma| {
        if sigma == [i] {
            vec![vec![0]]
        } else {
            Vec::new()
        }
    })
}
