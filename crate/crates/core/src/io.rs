//! JSON documents: categories, functors, diagrams, groups and G-diagrams.
//!
//! The schema is described in `docs/SCHEMA.md`. Loading checks referential
//! integrity only; the axioms are checked by [`validate_document`].

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::equivariant::{validate_g_action, validate_g_diagram, validate_group, CategoryGAction, FinGroup, GDiagram};
use crate::error::{Error, Result};
use crate::fincat::{
    ordinal, poset_category, subset_poset, validate_category, Diagram, FinCategory, Functor, MorId, MorphismRecord,
    ObjId,
};
use crate::validation::ValidationReport;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// Explicit tables. Composites with an identity may be left out.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TablesDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identity: BTreeMap<String, String>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub order: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetsDoc {
    pub letters: Vec<String>,
    #[serde(default)]
    pub empty: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum CategoryDoc {
    Tables(TablesDoc),
    Poset { poset: PosetDoc },
    Subsets { subsets: SubsetsDoc },
    Ordinal { ordinal: usize },
    Discrete { discrete: Vec<String> },
    /// A key of the enclosing document's `categories`.
    Named(String),
}

/// Object and morphism assignments by id. Identities and morphisms into a
/// thin hom-set may be omitted.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

/// A diagram: either `vertex` per object or one `constant` category.
/// Missing transitions default to the identity when both endpoints are the
/// same category.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    #[serde(default)]
    pub categories: BTreeMap<String, CategoryDoc>,
    pub base: CategoryDoc,
    #[serde(default)]
    pub vertex: BTreeMap<String, CategoryDoc>,
    #[serde(default)]
    pub constant: Option<CategoryDoc>,
    #[serde(default)]
    pub transition: BTreeMap<String, FunctorDoc>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum EntryDoc {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum GroupDoc {
    Table { elements: Vec<String>, mul: Vec<Vec<EntryDoc>> },
    Cyclic { cyclic: usize },
    Symmetric { symmetric: usize },
}

/// A G-diagram. `action` lists one base automorphism per element; the
/// identity may be omitted. Without `structure` all structure maps are
/// identities.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GDiagramDoc {
    pub diagram: DiagramDoc,
    pub group: GroupDoc,
    #[serde(default)]
    pub action: BTreeMap<String, FunctorDoc>,
    #[serde(default)]
    pub structure: Option<BTreeMap<String, BTreeMap<String, FunctorDoc>>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Document {
    GDiagram(Box<GDiagramDoc>),
    Diagram(Box<DiagramDoc>),
    Group(GroupDoc),
    Category(CategoryDoc),
}

/// Parses JSON text, reporting failures with a byte offset.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let offset = byte_offset(text, e.line(), e.column());
        Error::Parse {
            offset,
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    })
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (start + column.saturating_sub(1)).min(text.len())
}

pub fn read_document(path: &std::path::Path) -> Result<Document> {
    parse(&std::fs::read_to_string(path)?)
}

fn unknown_object(c: &FinCategory, id: &str) -> Result<ObjId> {
    c.object_index(id).ok_or_else(|| Error::UnknownObject(id.to_string()))
}

fn unknown_morphism(c: &FinCategory, id: &str) -> Result<MorId> {
    c.morphism_index(id).ok_or_else(|| Error::UnknownMorphism(id.to_string()))
}

fn tables(doc: &TablesDoc) -> Result<FinCategory> {
    let objects = doc.objects.clone();
    let index: HashMap<&str, ObjId> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
    let obj = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownObject(s.to_string()));
    let morphisms: Vec<MorphismRecord> = doc
        .morphisms
        .iter()
        .map(|m| {
            Ok(MorphismRecord {
                id: m.id.clone(),
                src: obj(&m.src)?,
                tgt: obj(&m.tgt)?,
            })
        })
        .collect::<Result<_>>()?;
    let mindex: HashMap<&str, MorId> = morphisms.iter().enumerate().map(|(i, m)| (m.id.as_str(), i)).collect();
    let mor = |s: &str| mindex.get(s).copied().ok_or_else(|| Error::UnknownMorphism(s.to_string()));
    for key in doc.identity.keys() {
        obj(key)?;
    }
    let identity: Vec<MorId> = objects
        .iter()
        .map(|o| {
            let m = doc
                .identity
                .get(o)
                .ok_or_else(|| Error::Malformed(format!("no identity for `{o}`")))?;
            mor(m)
        })
        .collect::<Result<_>>()?;
    let mut compose = HashMap::new();
    for [g, f, h] in &doc.compose {
        if compose.insert((mor(g)?, mor(f)?), mor(h)?).is_some() {
            return Err(Error::Malformed(format!("composite of `{g}` and `{f}` listed twice")));
        }
    }
    for (m, rec) in morphisms.iter().enumerate() {
        if rec.src < identity.len() && rec.tgt < identity.len() {
            compose.entry((identity[rec.tgt], m)).or_insert(m);
            compose.entry((m, identity[rec.src])).or_insert(m);
        }
    }
    FinCategory::from_parts(objects, morphisms, identity, compose)
}

/// Resolves category documents, sharing one `Arc` per named category.
pub struct Resolver {
    named: BTreeMap<String, Arc<FinCategory>>,
}

impl Resolver {
    pub fn new(categories: &BTreeMap<String, CategoryDoc>) -> Result<Self> {
        let mut r = Resolver { named: BTreeMap::new() };
        for (name, doc) in categories {
            if matches!(doc, CategoryDoc::Named(_)) {
                return Err(Error::Malformed(format!("category `{name}` refers to another name")));
            }
            let c = r.category(doc)?;
            r.named.insert(name.clone(), c);
        }
        Ok(r)
    }

    pub fn category(&self, doc: &CategoryDoc) -> Result<Arc<FinCategory>> {
        Ok(match doc {
            CategoryDoc::Tables(t) => Arc::new(tables(t)?),
            CategoryDoc::Poset { poset } => {
                let pairs: Vec<(&str, &str)> = poset.order.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
                let elems: Vec<&str> = poset.elements.iter().map(String::as_str).collect();
                Arc::new(poset_category(&elems, &pairs)?)
            }
            CategoryDoc::Subsets { subsets } => Arc::new(subset_poset(&subsets.letters, subsets.empty)),
            CategoryDoc::Ordinal { ordinal: n } => Arc::new(ordinal(*n)),
            CategoryDoc::Discrete { discrete } => Arc::new(FinCategory::discrete(discrete)),
            CategoryDoc::Named(name) => self
                .named
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Malformed(format!("unknown category name `{name}`")))?,
        })
    }
}

pub fn category_from_doc(doc: &CategoryDoc) -> Result<Arc<FinCategory>> {
    Resolver::new(&BTreeMap::new())?.category(doc)
}

pub fn functor_from_doc(doc: &FunctorDoc, source: &Arc<FinCategory>, target: &Arc<FinCategory>) -> Result<Functor> {
    for key in doc.objects.keys() {
        unknown_object(source, key)?;
    }
    for key in doc.morphisms.keys() {
        unknown_morphism(source, key)?;
    }
    let objects: Vec<ObjId> = source
        .objects()
        .map(|o| {
            let id = source.object_id(o);
            let t = doc
                .objects
                .get(id)
                .ok_or_else(|| Error::Malformed(format!("functor does not map object `{id}`")))?;
            unknown_object(target, t)
        })
        .collect::<Result<_>>()?;
    let morphisms: Vec<MorId> = source
        .morphisms()
        .map(|m| {
            let id = source.morphism_id(m);
            if let Some(t) = doc.morphisms.get(id) {
                return unknown_morphism(target, t);
            }
            let (s, t) = (objects[source.src(m)], objects[source.tgt(m)]);
            if source.is_identity(m) {
                return Ok(target.identity(s));
            }
            match target.hom(s, t) {
                [only] => Ok(*only),
                _ => Err(Error::Malformed(format!("functor does not map morphism `{id}`"))),
            }
        })
        .collect::<Result<_>>()?;
    Functor::new(source.clone(), target.clone(), objects, morphisms)
}

pub fn diagram_from_doc(doc: &DiagramDoc) -> Result<Diagram> {
    let r = Resolver::new(&doc.categories)?;
    let base = r.category(&doc.base)?;
    let vertices: Vec<Arc<FinCategory>> = match (&doc.constant, doc.vertex.is_empty()) {
        (Some(c), true) => {
            let c = r.category(c)?;
            vec![c; base.num_objects()]
        }
        (None, _) => {
            for key in doc.vertex.keys() {
                unknown_object(&base, key)?;
            }
            base.objects()
                .map(|o| {
                    let id = base.object_id(o);
                    let v = doc
                        .vertex
                        .get(id)
                        .ok_or_else(|| Error::Malformed(format!("no vertex for `{id}`")))?;
                    r.category(v)
                })
                .collect::<Result<_>>()?
        }
        (Some(_), false) => return Err(Error::Malformed("give either `vertex` or `constant`, not both".into())),
    };
    for key in doc.transition.keys() {
        unknown_morphism(&base, key)?;
    }
    let transitions: Vec<Functor> = base
        .morphisms()
        .map(|m| {
            let id = base.morphism_id(m);
            let (s, t) = (&vertices[base.src(m)], &vertices[base.tgt(m)]);
            match doc.transition.get(id) {
                Some(f) => functor_from_doc(f, s, t),
                None if **s == **t => Ok(Functor::identity(s.clone())),
                None => Err(Error::Malformed(format!("no transition for `{id}`"))),
            }
        })
        .collect::<Result<_>>()?;
    Diagram::new(base, vertices, transitions)
}

/// Raw tables of a group document, before the axioms are checked.
pub fn group_tables(doc: &GroupDoc) -> Result<(Vec<String>, Vec<Vec<usize>>)> {
    match doc {
        GroupDoc::Table { elements, mul } => {
            let pos = |e: &EntryDoc| match e {
                EntryDoc::Index(i) if *i < elements.len() => Ok(*i),
                EntryDoc::Index(i) => Err(Error::UnknownElement(format!("#{i}"))),
                EntryDoc::Name(n) => elements
                    .iter()
                    .position(|x| x == n)
                    .ok_or_else(|| Error::UnknownElement(n.clone())),
            };
            let mul = mul
                .iter()
                .map(|row| row.iter().map(pos).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            Ok((elements.clone(), mul))
        }
        GroupDoc::Cyclic { cyclic } => {
            let g = FinGroup::cyclic(*cyclic);
            Ok((g.elements, g.mul))
        }
        GroupDoc::Symmetric { symmetric } => {
            let g = FinGroup::symmetric(*symmetric);
            Ok((g.elements, g.mul))
        }
    }
}

pub fn group_from_doc(doc: &GroupDoc) -> Result<FinGroup> {
    let (elements, mul) = group_tables(doc)?;
    FinGroup::new(elements, mul)
}

fn per_element<'a, T>(group: &FinGroup, map: &'a BTreeMap<String, T>, what: &str) -> Result<Vec<Option<&'a T>>> {
    for key in map.keys() {
        group.element(key)?;
    }
    group
        .elements()
        .map(|g| {
            let v = map.get(group.name(g));
            if v.is_none() && g != group.identity() {
                return Err(Error::Malformed(format!("no {what} for element `{}`", group.name(g))));
            }
            Ok(v)
        })
        .collect()
}

pub fn g_diagram_from_doc(doc: &GDiagramDoc) -> Result<GDiagram> {
    let diagram = diagram_from_doc(&doc.diagram)?;
    let group = group_from_doc(&doc.group)?;
    let base = diagram.base().clone();
    let action = per_element(&group, &doc.action, "action")?
        .into_iter()
        .map(|f| match f {
            Some(f) => functor_from_doc(f, &base, &base),
            None => Ok(Functor::identity(base.clone())),
        })
        .collect::<Result<Vec<_>>>()?;
    let action = CategoryGAction::new(group.clone(), base.clone(), action)?;
    let Some(structure) = &doc.structure else {
        return GDiagram::with_identity_structure(action, diagram);
    };
    let rows = per_element(&group, structure, "structure")?
        .into_iter()
        .enumerate()
        .map(|(g, row)| {
            base.objects()
                .map(|i| {
                    let (s, t) = (diagram.vertex(i), diagram.vertex(action.action[g].obj(i)));
                    match row.and_then(|r| r.get(base.object_id(i))) {
                        Some(f) => functor_from_doc(f, s, t),
                        None if row.is_none() && **s == **t => Ok(Functor::identity(s.clone())),
                        None => Err(Error::Malformed(format!(
                            "no structure map for `{}` at `{}`",
                            group.name(g),
                            base.object_id(i)
                        ))),
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GDiagram::new(action, diagram, rows)
}

/// Every structural validator that applies to a document.
pub fn validate_document(doc: &Document) -> Result<Vec<ValidationReport>> {
    let mut out = Vec::new();
    match doc {
        Document::Category(c) => {
            let mut r = validate_category(&*category_from_doc(c)?);
            r.subject = "category".into();
            out.push(r);
        }
        Document::Group(g) => {
            let (elements, mul) = group_tables(g)?;
            out.push(validate_group(&elements, &mul));
        }
        Document::Diagram(d) => out.extend(validate_diagram(&diagram_from_doc(d)?)),
        Document::GDiagram(d) => {
            let (elements, mul) = group_tables(&d.group)?;
            let gr = validate_group(&elements, &mul);
            let clean = gr.is_clean();
            out.push(gr);
            let diagram = diagram_from_doc(&d.diagram)?;
            out.extend(validate_diagram(&diagram));
            if clean {
                let x = g_diagram_from_doc(d)?;
                out.push(validate_g_action(&x.action));
                out.push(validate_g_diagram(&x));
            }
        }
    }
    Ok(out)
}

fn validate_diagram(x: &Diagram) -> Vec<ValidationReport> {
    let base = x.base();
    let mut out = Vec::new();
    let mut r = validate_category(base);
    r.subject = "base".into();
    out.push(r);
    for i in base.objects() {
        let mut r = validate_category(x.vertex(i));
        r.subject = format!("vertex {}", base.object_id(i));
        out.push(r);
    }
    out.push(x.check());
    out
}

/// Loads a diagram from a diagram or G-diagram document.
pub fn diagram_of(doc: &Document) -> Result<Diagram> {
    match doc {
        Document::Diagram(d) => diagram_from_doc(d),
        Document::GDiagram(d) => diagram_from_doc(&d.diagram),
        _ => Err(Error::precondition("input is not a diagram")),
    }
}

pub fn g_diagram_of(doc: &Document) -> Result<GDiagram> {
    match doc {
        Document::GDiagram(d) => g_diagram_from_doc(d),
        Document::Diagram(d) => {
            let x = diagram_from_doc(d)?;
            let a = CategoryGAction::trivial(FinGroup::trivial(), x.base().clone());
            GDiagram::with_identity_structure(a, x)
        }
        _ => Err(Error::precondition("input is not a diagram")),
    }
}

/// Tables form of a category, composites with identities left out.
pub fn category_to_doc(c: &FinCategory) -> TablesDoc {
    let mut compose = Vec::new();
    for f in c.morphisms() {
        if c.is_identity(f) {
            continue;
        }
        for &g in c.out_of(c.tgt(f)) {
            if c.is_identity(g) {
                continue;
            }
            if let Some(h) = c.try_compose(g, f) {
                compose.push([c.morphism_id(g).to_string(), c.morphism_id(f).to_string(), c.morphism_id(h).to_string()]);
            }
        }
    }
    TablesDoc {
        objects: c.object_ids().to_vec(),
        morphisms: c
            .morphism_records()
            .iter()
            .map(|m| MorphismDoc {
                id: m.id.clone(),
                src: c.object_id(m.src).to_string(),
                tgt: c.object_id(m.tgt).to_string(),
            })
            .collect(),
        identity: c
            .objects()
            .map(|o| (c.object_id(o).to_string(), c.morphism_id(c.identity(o)).to_string()))
            .collect(),
        compose,
    }
}

pub fn functor_to_doc(f: &Functor) -> FunctorDoc {
    let (s, t) = (f.source(), f.target());
    FunctorDoc {
        objects: s
            .objects()
            .map(|o| (s.object_id(o).to_string(), t.object_id(f.obj(o)).to_string()))
            .collect(),
        morphisms: s
            .morphisms()
            .map(|m| (s.morphism_id(m).to_string(), t.morphism_id(f.mor(m)).to_string()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = r#"{
        "base": {"subsets": {"letters": ["1", "2"]}},
        "constant": {"ordinal": 1}
    }"#;

    #[test]
    fn constant_square_loads() {
        let doc: Document = parse(SQUARE).unwrap();
        let x = diagram_of(&doc).unwrap();
        assert_eq!(x.base().num_objects(), 3);
        assert!(validate_document(&doc).unwrap().iter().all(|r| r.is_clean()));
    }

    #[test]
    fn tables_round_trip() {
        let c = subset_poset(&["1", "2"], true);
        let doc = category_to_doc(&c);
        let text = serde_json::to_string(&doc).unwrap();
        let back = category_from_doc(&parse::<CategoryDoc>(&text).unwrap()).unwrap();
        assert_eq!(*back, c);
    }

    #[test]
    fn broken_composition_is_reported() {
        let text = r#"{
            "objects": ["a", "b", "c"],
            "morphisms": [
                {"id": "1a", "src": "a", "tgt": "a"}, {"id": "1b", "src": "b", "tgt": "b"},
                {"id": "1c", "src": "c", "tgt": "c"}, {"id": "f", "src": "a", "tgt": "b"},
                {"id": "g", "src": "b", "tgt": "c"}
            ],
            "identity": {"a": "1a", "b": "1b", "c": "1c"}
        }"#;
        let doc: Document = parse(text).unwrap();
        let reports = validate_document(&doc).unwrap();
        assert!(!reports[0].is_clean());
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let text = "{\n  \"base\": [1,\n}";
        match parse::<Document>(text) {
            Err(Error::Parse { offset, line, .. }) => {
                assert_eq!(line, 3);
                assert!(offset >= 14 && offset <= text.len());
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn swap_g_diagram_loads() {
        let text = r#"{
            "diagram": {"base": {"subsets": {"letters": ["1", "2"]}}, "constant": {"ordinal": 1}},
            "group": {"cyclic": 2},
            "action": {"1": {"objects": {"{1}": "{2}", "{2}": "{1}", "{1,2}": "{1,2}"}}}
        }"#;
        let doc: Document = parse(text).unwrap();
        let x = g_diagram_of(&doc).unwrap();
        assert_eq!(x.action.group.order(), 2);
        assert!(validate_document(&doc).unwrap().iter().all(|r| r.is_clean()));
    }

    #[test]
    fn group_by_names() {
        let text = r#"{"elements": ["e", "s"], "mul": [["e", "s"], ["s", "e"]]}"#;
        let doc: Document = parse(text).unwrap();
        assert!(matches!(doc, Document::Group(_)));
        let r = validate_document(&doc).unwrap();
        assert!(r[0].is_clean());
    }
}
