//! Flat-file JSON documents for algebras, groups, representations and
//! morphisms. Scalars travel as exact literal strings ("7", "-2/3"), never
//! as floating point; structural integers (degrees, weights, arities) are
//! plain JSON integers. Serialization is deterministic, so any document this
//! module writes survives serialize -> parse -> serialize byte for byte.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ainfty::{AInfty, Morphism, Table};
use crate::dga::FilteredDga;
use crate::defrep::{ArtinLocalRing, FiniteGroup, Representation};
use crate::error::{Error, Result};
use crate::linalg::{BasisEntry, Combo, LinMap, Space};
use crate::scalar::Field;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldDoc {
    Rational,
    Prime { p: u32 },
}

pub fn field_doc(f: Field) -> FieldDoc {
    match f.characteristic() {
        0 => FieldDoc::Rational,
        p => FieldDoc::Prime { p },
    }
}

pub fn field_of(doc: FieldDoc) -> Result<Field> {
    match doc {
        FieldDoc::Rational => Ok(Field::Rational),
        FieldDoc::Prime { p } => Field::prime(p),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct BasisDoc {
    pub name: String,
    pub degree: i32,
    pub weight: u32,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TermDoc {
    pub coeff: String,
    pub basis: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct EntryDoc {
    pub input: Vec<String>,
    pub output: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct OpDoc {
    pub arity: usize,
    pub entries: Vec<EntryDoc>,
}

/// One document shape covers algebras, filtered dg algebras, groups,
/// representations and coefficient rings; `kind` says which reader applies.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct AlgebraDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub field: FieldDoc,
    pub nilpotency: u32,
    pub basis: Vec<BasisDoc>,
    pub ops: Vec<OpDoc>,
}

/// A morphism with its endpoints embedded, so the file stands alone.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct MorphismDocument {
    pub source: AlgebraDocument,
    pub target: AlgebraDocument,
    pub tables: Vec<OpDoc>,
}

pub fn to_json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("document types serialize");
    s.push('\n');
    s
}

/// Reads and deserializes a JSON file; parse failures carry the path and the
/// line/column position from the JSON parser.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))
}

fn name_index(doc: &AlgebraDocument) -> Result<BTreeMap<&str, usize>> {
    let mut m = BTreeMap::new();
    for (i, b) in doc.basis.iter().enumerate() {
        if m.insert(b.name.as_str(), i).is_some() {
            return Err(Error::Invalid(format!("duplicate basis name {:?}", b.name)));
        }
    }
    Ok(m)
}

fn combo_of(
    field: Field,
    names: &BTreeMap<&str, usize>,
    terms: &[TermDoc],
) -> Result<Combo> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let i = *names
            .get(t.basis.as_str())
            .ok_or_else(|| Error::Invalid(format!("unknown basis name {:?}", t.basis)))?;
        out.push((i, field.parse(&t.coeff)?));
    }
    Ok(Combo::from_terms(out))
}

fn word_of(names: &BTreeMap<&str, usize>, input: &[String]) -> Result<Vec<usize>> {
    input
        .iter()
        .map(|n| {
            names
                .get(n.as_str())
                .copied()
                .ok_or_else(|| Error::Invalid(format!("unknown basis name {:?}", n)))
        })
        .collect()
}

fn space_of(doc: &AlgebraDocument) -> Result<Arc<Space>> {
    let field = field_of(doc.field)?;
    let entries = doc
        .basis
        .iter()
        .map(|b| BasisEntry {
            name: b.name.clone(),
            degree: b.degree,
            weight: b.weight,
        })
        .collect();
    Space::new(field, doc.nilpotency, entries)
}

fn tables_of(doc: &AlgebraDocument) -> Result<Vec<Table>> {
    let field = field_of(doc.field)?;
    let names = name_index(doc)?;
    let max_arity = doc.ops.iter().map(|o| o.arity).max().unwrap_or(0);
    let mut tables = vec![Table::new(); max_arity];
    for op in &doc.ops {
        if op.arity == 0 {
            return Err(Error::Invalid("operations need arity at least 1".into()));
        }
        let table = &mut tables[op.arity - 1];
        for e in &op.entries {
            if e.input.len() != op.arity {
                return Err(Error::Invalid(format!(
                    "entry input ({}) does not match arity {}",
                    e.input.join(", "),
                    op.arity
                )));
            }
            let word = word_of(&names, &e.input)?;
            let value = combo_of(field, &names, &e.output)?;
            if table.insert(word, value).is_some() {
                return Err(Error::Invalid(format!(
                    "duplicate entry for ({})",
                    e.input.join(", ")
                )));
            }
        }
    }
    Ok(tables)
}

fn ops_doc(space: &Space, tables: &[Table]) -> Vec<OpDoc> {
    tables
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_empty())
        .map(|(k, t)| OpDoc {
            arity: k + 1,
            entries: t
                .iter()
                .map(|(word, value)| EntryDoc {
                    input: word.iter().map(|&i| space.name(i).to_string()).collect(),
                    output: value
                        .terms()
                        .iter()
                        .map(|(i, c)| TermDoc {
                            coeff: c.literal(),
                            basis: space.name(*i).to_string(),
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect()
}

fn basis_doc(space: &Space) -> Vec<BasisDoc> {
    (0..space.dim())
        .map(|i| BasisDoc {
            name: space.name(i).to_string(),
            degree: space.degree(i),
            weight: space.weight(i),
        })
        .collect()
}

pub fn algebra_to_document(a: &AInfty) -> AlgebraDocument {
    AlgebraDocument {
        kind: Some("ainfty".into()),
        field: field_doc(a.space.field),
        nilpotency: a.space.nilpotency,
        basis: basis_doc(&a.space),
        ops: ops_doc(&a.space, a.tables()),
    }
}

pub fn parse_algebra(doc: &AlgebraDocument) -> Result<Arc<AInfty>> {
    if let Some(k) = &doc.kind {
        if k != "ainfty" {
            return Err(Error::Invalid(format!(
                "expected an ainfty document, found kind {:?}",
                k
            )));
        }
    }
    AInfty::new(space_of(doc)?, tables_of(doc)?)
}

/// A dg algebra document is the same shape with kind "dga": the arity-1
/// table is the differential, the arity-2 table the product, and an entry
/// missing from the product table means the product is zero there.
pub fn dga_to_document(c: &FilteredDga) -> AlgebraDocument {
    let space = &c.space;
    let dim = space.dim();
    let mut d_table = Table::new();
    for i in 0..dim {
        let col = c.d.col(i);
        if !col.is_zero() {
            d_table.insert(vec![i], col.clone());
        }
    }
    let mut prod_table = Table::new();
    for i in 0..dim {
        for j in 0..dim {
            let p = c.basis_product(i, j);
            if !p.is_zero() {
                prod_table.insert(vec![i, j], p.clone());
            }
        }
    }
    AlgebraDocument {
        kind: Some("dga".into()),
        field: field_doc(space.field),
        nilpotency: space.nilpotency,
        basis: basis_doc(space),
        ops: ops_doc(space, &[d_table, prod_table]),
    }
}

pub fn parse_dga(doc: &AlgebraDocument) -> Result<FilteredDga> {
    if doc.kind.as_deref() != Some("dga") {
        return Err(Error::Invalid("expected a dga document".into()));
    }
    let space = space_of(doc)?;
    let tables = tables_of(doc)?;
    if tables.len() > 2 {
        return Err(Error::Invalid(
            "a dga document carries only a differential and a product".into(),
        ));
    }
    let dim = space.dim();
    let mut d_cols = vec![Combo::zero(); dim];
    if let Some(t) = tables.first() {
        for (word, value) in t {
            d_cols[word[0]] = value.clone();
        }
    }
    let d = LinMap::new(space.clone(), space.clone(), 1, d_cols)?;
    let mut prod = vec![Combo::zero(); dim * dim];
    if let Some(t) = tables.get(1) {
        for (word, value) in t {
            prod[word[0] * dim + word[1]] = value.clone();
        }
    }
    FilteredDga::new(space, d, prod)
}

/// Groups serialize with one basis entry per element and the full
/// multiplication table as an arity-2 operation with unit coefficients.
pub fn group_to_document(g: &FiniteGroup, names: &[String]) -> AlgebraDocument {
    let n = g.order();
    assert_eq!(names.len(), n, "one name per element");
    let entries = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| EntryDoc {
            input: vec![names[a].clone(), names[b].clone()],
            output: vec![TermDoc { coeff: "1".into(), basis: names[g.mul(a, b)].clone() }],
        })
        .collect();
    AlgebraDocument {
        kind: Some("group".into()),
        field: FieldDoc::Rational,
        nilpotency: 2,
        basis: names
            .iter()
            .map(|n| BasisDoc { name: n.clone(), degree: 0, weight: 1 })
            .collect(),
        ops: vec![OpDoc { arity: 2, entries }],
    }
}

pub fn parse_group(doc: &AlgebraDocument) -> Result<FiniteGroup> {
    if doc.kind.as_deref() != Some("group") {
        return Err(Error::Invalid("expected a group document".into()));
    }
    let names = name_index(doc)?;
    let n = doc.basis.len();
    let mut mul = vec![usize::MAX; n * n];
    for op in &doc.ops {
        if op.arity != 2 {
            return Err(Error::Invalid("a group document has one arity-2 table".into()));
        }
        for e in &op.entries {
            let word = word_of(&names, &e.input)?;
            if e.output.len() != 1 || e.output[0].coeff != "1" {
                return Err(Error::Invalid(
                    "group products must be single elements with coefficient 1".into(),
                ));
            }
            let out = *names.get(e.output[0].basis.as_str()).ok_or_else(|| {
                Error::Invalid(format!("unknown element {:?}", e.output[0].basis))
            })?;
            mul[word[0] * n + word[1]] = out;
        }
    }
    if mul.iter().any(|&v| v == usize::MAX) {
        return Err(Error::Invalid("incomplete multiplication table".into()));
    }
    FiniteGroup::new(n, mul)
}

/// Representations serialize over the module basis, with the group action
/// as an arity-2 operation whose entries read (element, basis vector).
pub fn representation_to_document(
    rho: &Representation,
    element_names: &[String],
) -> AlgebraDocument {
    let d = rho.dim;
    let field = rho.field;
    let basis: Vec<String> = (0..d).map(|k| format!("e{}", k)).collect();
    let mut entries = Vec::new();
    for (g, gname) in element_names.iter().enumerate() {
        let mat = rho.mat(g);
        for l in 0..d {
            let output: Vec<TermDoc> = (0..d)
                .filter(|&k| !mat[k * d + l].is_zero())
                .map(|k| TermDoc { coeff: mat[k * d + l].literal(), basis: basis[k].clone() })
                .collect();
            if !output.is_empty() {
                entries.push(EntryDoc {
                    input: vec![gname.clone(), basis[l].clone()],
                    output,
                });
            }
        }
    }
    AlgebraDocument {
        kind: Some("representation".into()),
        field: field_doc(field),
        nilpotency: 2,
        basis: basis
            .iter()
            .map(|n| BasisDoc { name: n.clone(), degree: 0, weight: 1 })
            .collect(),
        ops: vec![OpDoc { arity: 2, entries }],
    }
}

pub fn parse_representation(
    doc: &AlgebraDocument,
    gdoc: &AlgebraDocument,
) -> Result<Representation> {
    if doc.kind.as_deref() != Some("representation") {
        return Err(Error::Invalid("expected a representation document".into()));
    }
    let group = parse_group(gdoc)?;
    let element_names = name_index(gdoc)?;
    let field = field_of(doc.field)?;
    let names = name_index(doc)?;
    let d = doc.basis.len();
    let mut mats = vec![vec![field.zero(); d * d]; group.order()];
    for op in &doc.ops {
        if op.arity != 2 {
            return Err(Error::Invalid(
                "a representation document has one arity-2 action table".into(),
            ));
        }
        for e in &op.entries {
            if e.input.len() != 2 {
                return Err(Error::Invalid("action entries read (element, vector)".into()));
            }
            let g = *element_names.get(e.input[0].as_str()).ok_or_else(|| {
                Error::Invalid(format!("unknown element {:?}", e.input[0]))
            })?;
            let l = *names.get(e.input[1].as_str()).ok_or_else(|| {
                Error::Invalid(format!("unknown basis vector {:?}", e.input[1]))
            })?;
            for t in &e.output {
                let k = *names.get(t.basis.as_str()).ok_or_else(|| {
                    Error::Invalid(format!("unknown basis vector {:?}", t.basis))
                })?;
                mats[g][k * d + l] = field.parse(&t.coeff)?;
            }
        }
    }
    Representation::new(group, field, d, mats)
}

/// Coefficient rings only need the field and the truncation order, carried
/// in the nilpotency slot.
pub fn parse_ring(doc: &AlgebraDocument) -> Result<ArtinLocalRing> {
    if doc.kind.as_deref() != Some("ring") {
        return Err(Error::Invalid("expected a ring document".into()));
    }
    ArtinLocalRing::new(field_of(doc.field)?, doc.nilpotency)
}

pub fn morphism_to_document(phi: &Morphism) -> MorphismDocument {
    MorphismDocument {
        source: algebra_to_document(&phi.source),
        target: algebra_to_document(&phi.target),
        tables: morphism_ops_doc(phi),
    }
}

fn morphism_ops_doc(phi: &Morphism) -> Vec<OpDoc> {
    phi.tables()
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_empty())
        .map(|(k, t)| OpDoc {
            arity: k + 1,
            entries: t
                .iter()
                .map(|(word, value)| EntryDoc {
                    input: word
                        .iter()
                        .map(|&i| phi.source.space.name(i).to_string())
                        .collect(),
                    output: value
                        .terms()
                        .iter()
                        .map(|(i, c)| TermDoc {
                            coeff: c.literal(),
                            basis: phi.target.space.name(*i).to_string(),
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect()
}

pub fn parse_morphism(doc: &MorphismDocument) -> Result<Morphism> {
    let source = parse_algebra(&doc.source)?;
    let target = parse_algebra(&doc.target)?;
    let src_names = name_index(&doc.source)?;
    let tgt_names = name_index(&doc.target)?;
    let field = source.space.field;
    let max_arity = doc.tables.iter().map(|o| o.arity).max().unwrap_or(0);
    let mut tables = vec![Table::new(); max_arity.max(1)];
    for op in &doc.tables {
        if op.arity == 0 {
            return Err(Error::Invalid("morphism components need arity at least 1".into()));
        }
        for e in &op.entries {
            let word = word_of(&src_names, &e.input)?;
            let value = combo_of(field, &tgt_names, &e.output)?;
            tables[op.arity - 1].insert(word, value);
        }
    }
    Morphism::new(source, target, tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::from_dga;
    use crate::defrep::hochschild_complex;
    use crate::mc::enumerate_mc_with_cap;

    fn fixture(name: &str) -> std::path::PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
    }

    #[test]
    fn empty_document_is_the_zero_algebra() {
        let doc: AlgebraDocument = read_json(&fixture("empty.json")).unwrap();
        let a = parse_algebra(&doc).unwrap();
        assert_eq!(a.space.dim(), 0);
        a.check_stasheff().unwrap();
        let mcs = enumerate_mc_with_cap(&a, 16).unwrap();
        assert_eq!(mcs.len(), 1);
        assert!(mcs[0].is_zero());
    }

    #[test]
    fn truncated_polynomial_fixture_loads() {
        let doc: AlgebraDocument = read_json(&fixture("t_f2_t3.json")).unwrap();
        assert_eq!(doc.basis.len(), 2);
        let binary: usize = doc
            .ops
            .iter()
            .filter(|o| o.arity == 2)
            .map(|o| o.entries.len())
            .sum();
        assert_eq!(binary, 1);
        let a = parse_algebra(&doc).unwrap();
        a.check_stasheff().unwrap();
        assert_eq!(a.space.nilpotency, 3);
    }

    #[test]
    fn weight_violations_are_named_at_load() {
        let doc: AlgebraDocument = read_json(&fixture("weight_violation.json")).unwrap();
        match parse_algebra(&doc) {
            Err(Error::Weight(_)) => {}
            other => panic!("expected a filtration violation, got {:?}", other.err()),
        }
    }

    #[test]
    fn malformed_json_reports_the_position() {
        let dir = std::env::temp_dir().join("mcnerve-doc-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("broken.json");
        std::fs::write(&path, "{\"field\": {\"kind\": \"rational\"},\n  \"nilpotency\": oops\n}").unwrap();
        match read_json::<AlgebraDocument>(&path) {
            Err(Error::Parse(msg)) => {
                assert!(msg.contains("line 2"), "missing position in {:?}", msg);
                assert!(msg.contains("broken.json"));
            }
            other => panic!("expected a parse error, got {:?}", other.err()),
        }
    }

    #[test]
    fn algebra_documents_round_trip_byte_identically() {
        let doc: AlgebraDocument = read_json(&fixture("t_f2_t3.json")).unwrap();
        let a = parse_algebra(&doc).unwrap();
        let once = to_json_string(&algebra_to_document(&a));
        let again = to_json_string(&algebra_to_document(
            &parse_algebra(&serde_json::from_str(&once).unwrap()).unwrap(),
        ));
        assert_eq!(once, again);
    }

    #[test]
    fn dga_documents_round_trip_through_the_filtered_reader() {
        let rho = Representation::trivial(FiniteGroup::cyclic(2), Field::prime(2).unwrap());
        let hc = hochschild_complex(&rho, 2).unwrap();
        let r = ArtinLocalRing::new(Field::prime(2).unwrap(), 2).unwrap();
        let def = crate::defrep::deform_complex(&hc.dga, &r).unwrap();
        let doc = dga_to_document(&def.dga);
        let back = parse_dga(&doc).unwrap();
        let a = from_dga(&back).unwrap();
        let b = from_dga(&def.dga).unwrap();
        assert_eq!(a.tables(), b.tables());
        let once = to_json_string(&doc);
        let again = to_json_string(&dga_to_document(&back));
        assert_eq!(once, again);
    }

    #[test]
    fn group_and_representation_documents_reconstruct() {
        let g = FiniteGroup::cyclic(3);
        let names: Vec<String> = (0..3).map(|i| format!("g{}", i)).collect();
        let gdoc = group_to_document(&g, &names);
        let back = parse_group(&gdoc).unwrap();
        assert_eq!(back.order(), 3);
        assert_eq!(back.mul(1, 2), 0);

        let f = Field::Rational;
        let omega = Representation::new(
            FiniteGroup::cyclic(2),
            f,
            1,
            vec![vec![f.one()], vec![f.from_i64(-1)]],
        )
        .unwrap();
        let names2: Vec<String> = vec!["e".into(), "s".into()];
        let gdoc2 = group_to_document(&FiniteGroup::cyclic(2), &names2);
        let rdoc = representation_to_document(&omega, &names2);
        let rho = parse_representation(&rdoc, &gdoc2).unwrap();
        assert_eq!(rho.mat(1)[0], f.from_i64(-1));
        assert_eq!(
            to_json_string(&rdoc),
            to_json_string(&representation_to_document(&rho, &names2))
        );
    }

    #[test]
    fn morphism_documents_round_trip() {
        let doc: AlgebraDocument = read_json(&fixture("t_f2_t3.json")).unwrap();
        let a = parse_algebra(&doc).unwrap();
        let phi = Morphism::identity(&a);
        let mdoc = morphism_to_document(&phi);
        let back = parse_morphism(&mdoc).unwrap();
        assert!(back.is_identity());
        assert_eq!(to_json_string(&mdoc), to_json_string(&morphism_to_document(&back)));
    }
}
