//! Maurer-Cartan elements: layered enumeration, the filtered quasi-group,
//! and the gauge action on degree-1 elements of a filtered dga.
//!
//! The solver walks the weight layers. Writing alpha = sum of components
//! supported in exact weight w, the weight-w part of the curvature is
//! [Q1_1(alpha_w)]_w plus terms depending only on lower layers, so each layer
//! contributes one affine-linear system. Branches multiply over a finite
//! field; over the rationals a positive-dimensional layer kernel means the
//! set cannot be finitely enumerated along this layering.

use crate::ainfty::{curvature, AInfty};
use crate::dga::FilteredDga;
use crate::error::{Error, Result};
use crate::linalg::{Combo, LinMap, Mat, Space};
use crate::scalar::{Field, Scalar};

pub const DEFAULT_LEAF_CAP: usize = 1 << 24;

pub fn leaf_cap() -> usize {
    std::env::var("MCNERVE_LEAF_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_LEAF_CAP)
}

/// Indices of the given degree in exact weight w, in index order.
fn exact_slice(space: &Space, degree: i32, weight: u32) -> Vec<usize> {
    let mut idxs: Vec<usize> = space
        .slice(degree, weight)
        .into_iter()
        .filter(|&i| space.weight(i) == weight)
        .collect();
    idxs.sort_unstable();
    idxs
}

/// Affine side condition L(alpha) = value on the Maurer-Cartan unknowns;
/// L must be a degree-0 filtered map out of the algebra's space.
#[derive(Clone, Debug)]
pub struct LinearConstraint {
    pub map: LinMap,
    pub value: Combo,
}

struct LayerSystem {
    weight: u32,
    unknowns: Vec<usize>,
    /// curvature rows, then one block of rows per constraint
    matrix: Mat,
    kernel: Vec<Vec<Scalar>>,
    curv_rows: Vec<usize>,
    constraint_rows: Vec<Vec<usize>>,
}

fn layer_systems(a: &AInfty, constraints: &[LinearConstraint]) -> Result<Vec<LayerSystem>> {
    let space = &a.space;
    let field = space.field;
    for c in constraints {
        if c.map.source != *space || c.map.degree != 0 {
            return Err(Error::Invalid(
                "constraint map must be a degree-0 map out of the algebra".into(),
            ));
        }
    }
    let mut out = Vec::new();
    for w in 1..space.nilpotency {
        let unknowns = exact_slice(space, 0, w);
        let curv_rows = exact_slice(space, 1, w);
        let constraint_rows: Vec<Vec<usize>> = constraints
            .iter()
            .map(|c| exact_slice(&c.map.target, 0, w))
            .collect();
        let total_rows = curv_rows.len() + constraint_rows.iter().map(Vec::len).sum::<usize>();
        let cols: Vec<Vec<Scalar>> = unknowns
            .iter()
            .map(|&j| {
                let mut col = Vec::with_capacity(total_rows);
                let img = a.op_word(&[j]);
                for &t in &curv_rows {
                    col.push(img.coeff(t).cloned().unwrap_or_else(|| field.zero()));
                }
                for (c, rows) in constraints.iter().zip(&constraint_rows) {
                    let img = c.map.col(j);
                    for &t in rows {
                        col.push(img.coeff(t).cloned().unwrap_or_else(|| field.zero()));
                    }
                }
                col
            })
            .collect();
        let matrix = Mat::from_cols(field, total_rows, &cols);
        let kernel = matrix.kernel_basis();
        out.push(LayerSystem { weight: w, unknowns, matrix, kernel, curv_rows, constraint_rows });
    }
    Ok(out)
}

fn layer_rhs(
    a: &AInfty,
    constraints: &[LinearConstraint],
    sys: &LayerSystem,
    prev: &Combo,
) -> Result<Vec<Scalar>> {
    let field = a.space.field;
    let curv = curvature(a, prev)?;
    let mut rhs = Vec::with_capacity(sys.matrix.rows);
    for &t in &sys.curv_rows {
        rhs.push(curv.coeff(t).map(|c| c.neg()).unwrap_or_else(|| field.zero()));
    }
    for (c, rows) in constraints.iter().zip(&sys.constraint_rows) {
        let residual = c.value.sub(&c.map.apply(prev));
        for &t in rows {
            rhs.push(residual.coeff(t).cloned().unwrap_or_else(|| field.zero()));
        }
    }
    Ok(rhs)
}

fn layer_solution(sys: &LayerSystem, coords: &[Scalar]) -> Combo {
    Combo::from_terms(
        sys.unknowns
            .iter()
            .zip(coords)
            .map(|(&j, c)| (j, c.clone()))
            .collect(),
    )
}

/// All degree-0 solutions of curvature = 0 together with the given affine
/// constraints, found layer by layer. Deterministic order.
pub fn solve_constrained_mc(
    a: &AInfty,
    constraints: &[LinearConstraint],
    cap: usize,
) -> Result<Vec<Combo>> {
    let field = a.space.field;
    let systems = layer_systems(a, constraints)?;
    for sys in &systems {
        if !sys.kernel.is_empty() && field == Field::Rational {
            return Err(Error::Infinite(format!(
                "weight-{} layer has a {}-dimensional solution space over the rationals",
                sys.weight,
                sys.kernel.len()
            )));
        }
    }
    let elems = field.elements().unwrap_or_default();
    let mut leaves = vec![Combo::zero()];
    for sys in &systems {
        let mut next: Vec<Combo> = Vec::new();
        for prev in &leaves {
            let rhs = layer_rhs(a, constraints, sys, prev)?;
            let Some(x0) = sys.matrix.solve(&rhs) else {
                continue; // this branch admits no extension
            };
            let mut assignment = vec![0usize; sys.kernel.len()];
            loop {
                let mut coords = x0.clone();
                for (k, &e) in assignment.iter().enumerate() {
                    for (c, kc) in coords.iter_mut().zip(&sys.kernel[k]) {
                        *c = c.add(&elems[e].mul(kc));
                    }
                }
                next.push(prev.add(&layer_solution(sys, &coords)));
                if next.len() > cap {
                    return Err(Error::CapExceeded(format!(
                        "more than {} Maurer-Cartan branches at weight {}",
                        cap, sys.weight
                    )));
                }
                // advance the mixed-radix assignment
                let mut pos = 0;
                loop {
                    if pos == assignment.len() {
                        break;
                    }
                    assignment[pos] += 1;
                    if assignment[pos] < elems.len() {
                        break;
                    }
                    assignment[pos] = 0;
                    pos += 1;
                }
                if pos == assignment.len() {
                    break;
                }
            }
        }
        leaves = next;
    }
    for leaf in &leaves {
        debug_assert!(curvature(a, leaf)?.is_zero(), "solver leaf is not flat");
    }
    leaves.sort();
    Ok(leaves)
}

/// First solution in the same order `solve_constrained_mc` would produce, by
/// depth-first search. Over the rationals only the canonical representative of
/// each layer (free variables zero) is explored, so `None` means no solution
/// on the explored branches.
pub fn first_constrained_mc(
    a: &AInfty,
    constraints: &[LinearConstraint],
    cap: usize,
) -> Result<Option<Combo>> {
    let field = a.space.field;
    let systems = layer_systems(a, constraints)?;
    let elems = field.elements().unwrap_or_default();
    let mut visited = 0usize;
    fn dfs(
        a: &AInfty,
        constraints: &[LinearConstraint],
        systems: &[LayerSystem],
        elems: &[Scalar],
        depth: usize,
        prev: &Combo,
        visited: &mut usize,
        cap: usize,
    ) -> Result<Option<Combo>> {
        let Some(sys) = systems.get(depth) else {
            return Ok(Some(prev.clone()));
        };
        *visited += 1;
        if *visited > cap {
            return Err(Error::CapExceeded(format!(
                "horn search visited more than {} branches",
                cap
            )));
        }
        let rhs = layer_rhs(a, constraints, sys, prev)?;
        let Some(x0) = sys.matrix.solve(&rhs) else {
            return Ok(None);
        };
        if sys.kernel.is_empty() || elems.is_empty() {
            let cand = prev.add(&layer_solution(sys, &x0));
            return dfs(a, constraints, systems, elems, depth + 1, &cand, visited, cap);
        }
        let mut assignment = vec![0usize; sys.kernel.len()];
        loop {
            let mut coords = x0.clone();
            for (k, &e) in assignment.iter().enumerate() {
                for (c, kc) in coords.iter_mut().zip(&sys.kernel[k]) {
                    *c = c.add(&elems[e].mul(kc));
                }
            }
            let cand = prev.add(&layer_solution(sys, &coords));
            if let Some(found) =
                dfs(a, constraints, systems, elems, depth + 1, &cand, visited, cap)?
            {
                return Ok(Some(found));
            }
            let mut pos = 0;
            loop {
                if pos == assignment.len() {
                    return Ok(None);
                }
                assignment[pos] += 1;
                if assignment[pos] < elems.len() {
                    break;
                }
                assignment[pos] = 0;
                pos += 1;
            }
        }
    }
    dfs(a, constraints, &systems, &elems, 0, &Combo::zero(), &mut visited, cap)
}

pub fn enumerate_mc(a: &AInfty) -> Result<Vec<Combo>> {
    enumerate_mc_with_cap(a, leaf_cap())
}

pub fn enumerate_mc_with_cap(a: &AInfty, cap: usize) -> Result<Vec<Combo>> {
    solve_constrained_mc(a, &[], cap)
}

/// g * h = g + h + gh on degree-0 elements of positive weight; the group of
/// the filtration, isomorphic to 1 + g under multiplication.
pub fn quasi_multiply(c: &FilteredDga, g: &Combo, h: &Combo) -> Combo {
    g.add(h).add(&c.mul(g, h))
}

/// The *-inverse: sum_{k>=1} (-1)^k g^k, the unique solution of
/// g * inv = inv * g = 0.
pub fn quasi_inverse(c: &FilteredDga, g: &Combo) -> Combo {
    let mut pow = g.clone();
    let mut acc = g.neg();
    let mut negative = true;
    for _ in 2..c.space.nilpotency {
        pow = c.mul(&pow, g);
        if pow.is_zero() {
            break;
        }
        negative = !negative;
        acc = if negative { acc.sub(&pow) } else { acc.add(&pow) };
    }
    acc
}

/// d^x(g) = d(g) + xg - gx, the differential twisted by a degree-1 element.
pub fn twisted_differential(c: &FilteredDga, x: &Combo, g: &Combo) -> Combo {
    c.d.apply(g).add(&c.mul(x, g)).sub(&c.mul(g, x))
}

/// Gauge action of the degree-0 quasi-group on degree-1 elements:
/// g . x = x - d^x(g) - d^x(g) * inv(g), conjugation by 1 + g after clearing
/// denominators. Sends Maurer-Cartan elements to Maurer-Cartan elements and
/// satisfies (g * h) . x = g . (h . x).
pub fn gauge_action(c: &FilteredDga, x: &Combo, g: &Combo) -> Combo {
    let dxg = twisted_differential(c, x, g);
    x.sub(&dxg).sub(&c.mul(&dxg, &quasi_inverse(c, g)))
}

/// All vectors of the given degree over a finite field, zero first.
pub fn enumerate_degree_vectors(space: &Space, degree: i32, cap: usize) -> Result<Vec<Combo>> {
    let idxs: Vec<usize> = {
        let mut v = space.slice(degree, 1);
        v.sort_unstable();
        v
    };
    if idxs.is_empty() {
        return Ok(vec![Combo::zero()]);
    }
    let Some(elems) = space.field.elements() else {
        return Err(Error::Infinite(
            "cannot enumerate a positive-dimensional space over the rationals".into(),
        ));
    };
    let mut out = Vec::new();
    let mut assignment = vec![0usize; idxs.len()];
    loop {
        out.push(Combo::from_terms(
            idxs.iter()
                .zip(&assignment)
                .map(|(&i, &e)| (i, elems[e].clone()))
                .collect(),
        ));
        if out.len() > cap {
            return Err(Error::CapExceeded(format!(
                "degree-{} vector enumeration exceeds {}",
                degree, cap
            )));
        }
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                return Ok(out);
            }
            assignment[pos] += 1;
            if assignment[pos] < elems.len() {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Partition of a Maurer-Cartan set into gauge orbits, each orbit the sorted
/// list of indices into `mcs`. The action must stay inside the given set.
pub fn gauge_orbits(c: &FilteredDga, mcs: &[Combo], cap: usize) -> Result<Vec<Vec<usize>>> {
    let lookup: std::collections::BTreeMap<&Combo, usize> =
        mcs.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let group = enumerate_degree_vectors(&c.space, 0, cap)?;
    let mut parent: Vec<usize> = (0..mcs.len()).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, x) in mcs.iter().enumerate() {
        for g in &group {
            let y = gauge_action(c, x, g);
            let &j = lookup.get(&y).ok_or_else(|| {
                Error::Structure(format!(
                    "gauge action leaves the given Maurer-Cartan set: {}",
                    y.describe(&c.space)
                ))
            })?;
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
                parent[hi] = lo;
            }
        }
    }
    let mut orbits: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..mcs.len() {
        let r = find(&mut parent, i);
        orbits.entry(r).or_default().push(i);
    }
    Ok(orbits.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{from_dga, is_mc};
    use crate::linalg::{BasisEntry, LinMap};

    fn fp(p: u32) -> Field {
        Field::Prime(p)
    }

    /// x (deg 1, w 1) with x^2 = y (deg 2, w 2): flatness forces the
    /// x-coefficient to vanish.
    fn square_obstruction(field: Field) -> FilteredDga {
        let s = crate::linalg::Space::new(
            field,
            3,
            vec![
                BasisEntry { name: "x".into(), degree: 1, weight: 1 },
                BasisEntry { name: "y".into(), degree: 2, weight: 2 },
            ],
        )
        .unwrap();
        let d = LinMap::zero(s.clone(), s.clone(), 1);
        let mut prod = vec![Combo::zero(); 4];
        prod[0] = Combo::single(1, field.one());
        FilteredDga::new(s, d, prod).unwrap()
    }

    /// x (deg 1, w 1) with all products zero: every multiple is flat.
    fn free_line(field: Field) -> FilteredDga {
        let s = crate::linalg::Space::new(
            field,
            2,
            vec![BasisEntry { name: "x".into(), degree: 1, weight: 1 }],
        )
        .unwrap();
        let d = LinMap::zero(s.clone(), s.clone(), 1);
        FilteredDga::new(s, d, vec![Combo::zero()]).unwrap()
    }

    /// u (deg 0) with d(u) = x (deg 1), products zero: one contractible line.
    fn contractible_line(field: Field) -> FilteredDga {
        let s = crate::linalg::Space::new(
            field,
            2,
            vec![
                BasisEntry { name: "u".into(), degree: 0, weight: 1 },
                BasisEntry { name: "x".into(), degree: 1, weight: 1 },
            ],
        )
        .unwrap();
        let cols = vec![Combo::single(1, field.one()), Combo::zero()];
        let d = LinMap::new(s.clone(), s.clone(), 1, cols).unwrap();
        FilteredDga::new(s, d, vec![Combo::zero(); 4]).unwrap()
    }

    #[test]
    fn obstruction_prunes_branches() {
        let a = from_dga(&square_obstruction(fp(2))).unwrap();
        let mcs = enumerate_mc_with_cap(&a, 100).unwrap();
        assert_eq!(mcs, vec![Combo::zero()]);
        // over F_3 the equation c^2 = 0 still only has c = 0
        let a3 = from_dga(&square_obstruction(fp(3))).unwrap();
        assert_eq!(enumerate_mc_with_cap(&a3, 100).unwrap().len(), 1);
    }

    #[test]
    fn unconstrained_layer_enumerates_the_field() {
        let a = from_dga(&free_line(fp(3))).unwrap();
        let mcs = enumerate_mc_with_cap(&a, 100).unwrap();
        assert_eq!(mcs.len(), 3);
        for m in &mcs {
            assert!(is_mc(&a, m).unwrap());
        }
        assert!(matches!(
            enumerate_mc_with_cap(&a, 2),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn rational_free_direction_reports_infinite() {
        let a = from_dga(&free_line(Field::Rational)).unwrap();
        assert!(matches!(
            enumerate_mc_with_cap(&a, 100),
            Err(Error::Infinite(_))
        ));
    }

    #[test]
    fn quasi_group_axioms() {
        let c = {
            // t F_5[t]/t^4, all in degree 0
            let s = crate::linalg::Space::new(
                fp(5),
                4,
                vec![
                    BasisEntry { name: "t".into(), degree: 0, weight: 1 },
                    BasisEntry { name: "t2".into(), degree: 0, weight: 2 },
                    BasisEntry { name: "t3".into(), degree: 0, weight: 3 },
                ],
            )
            .unwrap();
            let d = LinMap::zero(s.clone(), s.clone(), 1);
            let e = |i: usize| Combo::single(i, fp(5).one());
            let mut prod = vec![Combo::zero(); 9];
            prod[0] = e(1);
            prod[1] = e(2);
            prod[3] = e(2);
            FilteredDga::new(s, d, prod).unwrap()
        };
        let group = enumerate_degree_vectors(&c.space, 0, 200).unwrap();
        assert_eq!(group.len(), 125);
        let zero = Combo::zero();
        for g in group.iter().step_by(7) {
            let inv = quasi_inverse(&c, g);
            assert_eq!(quasi_multiply(&c, g, &inv), zero);
            assert_eq!(quasi_multiply(&c, &inv, g), zero);
            for h in group.iter().step_by(11) {
                for k in group.iter().step_by(13) {
                    let lhs = quasi_multiply(&c, &quasi_multiply(&c, g, h), k);
                    let rhs = quasi_multiply(&c, g, &quasi_multiply(&c, h, k));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn gauge_action_is_an_action_and_preserves_flatness() {
        let c = contractible_line(fp(3));
        let a = from_dga(&c).unwrap();
        let mcs = enumerate_mc_with_cap(&a, 100).unwrap();
        assert_eq!(mcs.len(), 3);
        let group = enumerate_degree_vectors(&c.space, 0, 100).unwrap();
        for x in &mcs {
            for g in &group {
                let y = gauge_action(&c, x, g);
                assert!(is_mc(&a, &y).unwrap());
                for h in &group {
                    let one_step = gauge_action(&c, x, &quasi_multiply(&c, g, h));
                    let two_step = gauge_action(&c, &gauge_action(&c, x, h), g);
                    assert_eq!(one_step, two_step);
                }
            }
        }
        // d(u) = x makes the whole line one orbit
        let orbits = gauge_orbits(&c, &mcs, 100).unwrap();
        assert_eq!(orbits, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn rigid_line_has_singleton_orbits() {
        let c = free_line(fp(3));
        let a = from_dga(&c).unwrap();
        let mcs = enumerate_mc_with_cap(&a, 100).unwrap();
        let orbits = gauge_orbits(&c, &mcs, 100).unwrap();
        assert_eq!(orbits.len(), 3);
        for o in orbits {
            assert_eq!(o.len(), 1);
        }
    }
}
