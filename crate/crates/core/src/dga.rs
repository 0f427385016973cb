//! Differential graded algebras in two flavours.
//!
//! `DgAlgebra` is a plain unital dga on an unfiltered space; the simplicial
//! cochain algebras and group-cohomology complexes live here. `FilteredDga`
//! is a non-unital dga on a filtered space whose product raises weights
//! (weight of xy >= weight x + weight y), the shape a complete nilpotent
//! coefficient algebra takes after tensoring with a maximal ideal.

use crate::error::{Error, Result};
use crate::linalg::{Combo, Complex, LinMap, Space};
use crate::scalar::odd;
use std::sync::Arc;

/// Product table, flattened: entry i*dim + j is e_i * e_j.
fn table_mul(space: &Space, prod: &[Combo], x: &Combo, y: &Combo) -> Combo {
    let dim = space.dim();
    let mut acc = Combo::zero();
    for (i, a) in x.terms() {
        for (j, b) in y.terms() {
            acc = acc.add(&prod[i * dim + j].scale(&a.mul(b)));
        }
    }
    acc
}

fn check_degree_additive(space: &Space, prod: &[Combo]) -> Result<()> {
    let dim = space.dim();
    for i in 0..dim {
        for j in 0..dim {
            for (k, _) in prod[i * dim + j].terms() {
                if space.degree(*k) != space.degree(i) + space.degree(j) {
                    return Err(Error::Degree(format!(
                        "{} * {} hits {} of degree {}, expected {}",
                        space.name(i),
                        space.name(j),
                        space.name(*k),
                        space.degree(*k),
                        space.degree(i) + space.degree(j)
                    )));
                }
            }
        }
    }
    Ok(())
}

fn check_leibniz(space: &Space, d: &LinMap, prod: &[Combo]) -> Result<()> {
    let dim = space.dim();
    for i in 0..dim {
        for j in 0..dim {
            let lhs = d.apply(&prod[i * dim + j]);
            let left = table_mul(space, prod, &d.col(i).clone(), &Combo::single(j, space.field.one()));
            let right = table_mul(space, prod, &Combo::single(i, space.field.one()), d.col(j))
                .scale(&space.field.one().negate_if(odd(space.degree(i))));
            if lhs != left.add(&right) {
                return Err(Error::Structure(format!(
                    "Leibniz fails on {} * {}",
                    space.name(i),
                    space.name(j)
                )));
            }
        }
    }
    Ok(())
}

fn check_associative(space: &Space, prod: &[Combo]) -> Result<()> {
    let dim = space.dim();
    for i in 0..dim {
        for j in 0..dim {
            let ij = prod[i * dim + j].clone();
            for k in 0..dim {
                let jk = &prod[j * dim + k];
                let lhs = table_mul(space, prod, &ij, &Combo::single(k, space.field.one()));
                let rhs = table_mul(space, prod, &Combo::single(i, space.field.one()), jk);
                if lhs != rhs {
                    return Err(Error::Structure(format!(
                        "associativity fails on ({} {} {})",
                        space.name(i),
                        space.name(j),
                        space.name(k)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Plain unital dga on an unfiltered space.
#[derive(Clone, Debug)]
pub struct DgAlgebra {
    pub space: Arc<Space>,
    pub d: LinMap,
    prod: Vec<Combo>,
    pub unit: Combo,
}

impl DgAlgebra {
    /// Validates degrees, d^2 = 0, Leibniz and the unit laws. Associativity
    /// is cubic in the dimension, so it stays a separate call.
    pub fn new(space: Arc<Space>, d: LinMap, prod: Vec<Combo>, unit: Combo) -> Result<Arc<DgAlgebra>> {
        let dim = space.dim();
        if prod.len() != dim * dim {
            return Err(Error::Invalid("product table size mismatch".into()));
        }
        Complex::new(space.clone(), d.clone())?;
        check_degree_additive(&space, &prod)?;
        check_leibniz(&space, &d, &prod)?;
        if unit.degree_in(&space)?.unwrap_or(0) != 0 {
            return Err(Error::Degree("unit must sit in degree 0".into()));
        }
        if !d.apply(&unit).is_zero() {
            return Err(Error::Structure("unit must be a cocycle".into()));
        }
        for i in 0..dim {
            let e = Combo::single(i, space.field.one());
            if table_mul(&space, &prod, &unit, &e) != e || table_mul(&space, &prod, &e, &unit) != e
            {
                return Err(Error::Structure(format!(
                    "unit law fails on {}",
                    space.name(i)
                )));
            }
        }
        Ok(Arc::new(DgAlgebra { space, d, prod, unit }))
    }

    pub fn mul(&self, x: &Combo, y: &Combo) -> Combo {
        table_mul(&self.space, &self.prod, x, y)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Combo {
        &self.prod[i * self.space.dim() + j]
    }

    pub fn check_associativity(&self) -> Result<()> {
        check_associative(&self.space, &self.prod)
    }

    pub fn complex(&self) -> Complex {
        Complex { space: self.space.clone(), d: self.d.clone() }
    }
}

/// Unital dga map: chain map, multiplicative, sends unit to unit.
#[derive(Clone, Debug)]
pub struct DgAlgebraMap {
    pub source: Arc<DgAlgebra>,
    pub target: Arc<DgAlgebra>,
    pub map: LinMap,
}

impl DgAlgebraMap {
    pub fn new(source: Arc<DgAlgebra>, target: Arc<DgAlgebra>, map: LinMap) -> Result<DgAlgebraMap> {
        if map.source != source.space || map.target != target.space || map.degree != 0 {
            return Err(Error::Invalid("dga map type mismatch".into()));
        }
        if !target.d.compose(&map).sub(&map.compose(&source.d)).is_zero() {
            return Err(Error::NotChainMap("dga map does not commute with d".into()));
        }
        if map.apply(&source.unit) != target.unit {
            return Err(Error::Structure("dga map does not preserve the unit".into()));
        }
        let dim = source.space.dim();
        for i in 0..dim {
            for j in 0..dim {
                let lhs = map.apply(source.basis_product(i, j));
                let rhs = target.mul(map.col(i), map.col(j));
                if lhs != rhs {
                    return Err(Error::Structure(format!(
                        "dga map not multiplicative on {} * {}",
                        source.space.name(i),
                        source.space.name(j)
                    )));
                }
            }
        }
        Ok(DgAlgebraMap { source, target, map })
    }

    pub fn compose(&self, inner: &DgAlgebraMap) -> DgAlgebraMap {
        assert!(Arc::ptr_eq(&inner.target, &self.source) || inner.target.space == self.source.space);
        DgAlgebraMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&inner.map),
        }
    }
}

/// Non-unital dga on a filtered space; the product adds weights, so the
/// algebra is nilpotent of class < N.
#[derive(Clone, Debug)]
pub struct FilteredDga {
    pub space: Arc<Space>,
    pub d: LinMap,
    prod: Vec<Combo>,
}

impl FilteredDga {
    pub fn new(space: Arc<Space>, d: LinMap, prod: Vec<Combo>) -> Result<FilteredDga> {
        let dim = space.dim();
        if prod.len() != dim * dim {
            return Err(Error::Invalid("product table size mismatch".into()));
        }
        Complex::new(space.clone(), d.clone())?;
        check_degree_additive(&space, &prod)?;
        for i in 0..dim {
            for j in 0..dim {
                let need = space.weight(i) + space.weight(j);
                let p = &prod[i * dim + j];
                if !p.is_zero() && p.min_weight_in(&space) < need {
                    return Err(Error::Weight(format!(
                        "product {} * {} fails to reach weight {}",
                        space.name(i),
                        space.name(j),
                        need
                    )));
                }
            }
        }
        check_leibniz(&space, &d, &prod)?;
        check_associative(&space, &prod)?;
        Ok(FilteredDga { space, d, prod })
    }

    pub fn mul(&self, x: &Combo, y: &Combo) -> Combo {
        table_mul(&self.space, &self.prod, x, y)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Combo {
        &self.prod[i * self.space.dim() + j]
    }

    pub fn complex(&self) -> Complex {
        Complex { space: self.space.clone(), d: self.d.clone() }
    }
}
