//! Finite categories stored as explicit object, morphism and composition tables.
//!
//! Objects and morphisms are addressed by dense indices; every object and
//! morphism also carries an opaque string id. Constructions derive their ids
//! deterministically from the ids of their constituents, so two runs of the
//! same construction produce identical tables.

mod construct;
mod diagram;
mod functor;
mod iso;

pub use construct::*;
pub use diagram::Diagram;
pub use functor::{Functor, NatTrans};
pub(crate) use functor::same_category;
pub use iso::{find_isomorphism, is_initial, is_terminal};

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::validation::{ValidationReport, Violation};

/// Index of an object inside a [`FinCategory`].
pub type ObjId = usize;
/// Index of a morphism inside a [`FinCategory`].
pub type MorId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphismRecord {
    pub id: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// A finite category with a total composition table.
///
/// The tables are not required to satisfy the category axioms; use
/// [`validate_category`] to check them. Every construction in this crate
/// produces lawful tables.
#[derive(Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismRecord>,
    identity: Vec<MorId>,
    compose: HashMap<(MorId, MorId), MorId>,
    object_index: HashMap<String, ObjId>,
    morphism_index: HashMap<String, MorId>,
    out_of: Vec<Vec<MorId>>,
    into: Vec<Vec<MorId>>,
    hom: HashMap<(ObjId, ObjId), Vec<MorId>>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.objects == other.objects
                && self.morphisms == other.morphisms
                && self.identity == other.identity
                && self.compose == other.compose)
    }
}

impl Eq for FinCategory {}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects.len())
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

impl FinCategory {
    /// Assembles a category from raw tables.
    ///
    /// Only referential integrity is checked here (unique ids, indices in
    /// range, identities are endomorphisms). Composition entries are taken as
    /// given.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<MorphismRecord>,
        identity: Vec<MorId>,
        compose: HashMap<(MorId, MorId), MorId>,
    ) -> Result<Self> {
        let mut object_index = HashMap::with_capacity(objects.len());
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate object id `{o}`")));
            }
        }
        let mut morphism_index = HashMap::with_capacity(morphisms.len());
        let mut out_of = vec![Vec::new(); objects.len()];
        let mut into = vec![Vec::new(); objects.len()];
        let mut hom: HashMap<(ObjId, ObjId), Vec<MorId>> = HashMap::new();
        for (m, rec) in morphisms.iter().enumerate() {
            if morphism_index.insert(rec.id.clone(), m).is_some() {
                return Err(Error::Malformed(format!("duplicate morphism id `{}`", rec.id)));
            }
            if rec.src >= objects.len() || rec.tgt >= objects.len() {
                return Err(Error::Malformed(format!(
                    "morphism `{}` has an endpoint out of range",
                    rec.id
                )));
            }
            out_of[rec.src].push(m);
            into[rec.tgt].push(m);
            hom.entry((rec.src, rec.tgt)).or_default().push(m);
        }
        if identity.len() != objects.len() {
            return Err(Error::Malformed("identity table must list every object".into()));
        }
        for (o, &m) in identity.iter().enumerate() {
            if m >= morphisms.len() {
                return Err(Error::Malformed(format!(
                    "identity of `{}` is out of range",
                    objects[o]
                )));
            }
        }
        for (&(g, f), &h) in &compose {
            if g >= morphisms.len() || f >= morphisms.len() || h >= morphisms.len() {
                return Err(Error::Malformed("composition entry out of range".into()));
            }
        }
        Ok(FinCategory {
            objects,
            morphisms,
            identity,
            compose,
            object_index,
            morphism_index,
            out_of,
            into,
            hom,
        })
    }

    /// Builds a category whose composition is computed by `compose` on every
    /// composable pair `(g, f)`. Used by constructions whose tables are lawful
    /// by construction.
    pub(crate) fn generate(
        objects: Vec<String>,
        morphisms: Vec<MorphismRecord>,
        identity: Vec<MorId>,
        compose: impl Fn(MorId, MorId) -> MorId,
    ) -> Self {
        let mut table = HashMap::new();
        let mut by_source: Vec<Vec<MorId>> = vec![Vec::new(); objects.len()];
        for (m, rec) in morphisms.iter().enumerate() {
            by_source[rec.src].push(m);
        }
        for (f, rec) in morphisms.iter().enumerate() {
            for &g in &by_source[rec.tgt] {
                table.insert((g, f), compose(g, f));
            }
        }
        FinCategory::from_parts(objects, morphisms, identity, table)
            .expect("generated category tables are consistent")
    }

    pub fn terminal() -> Self {
        FinCategory::generate(
            vec!["*".into()],
            vec![MorphismRecord {
                id: "id_*".into(),
                src: 0,
                tgt: 0,
            }],
            vec![0],
            |_, _| 0,
        )
    }

    pub fn empty() -> Self {
        FinCategory::generate(Vec::new(), Vec::new(), Vec::new(), |_, _| unreachable!())
    }

    /// Discrete category on the given object ids.
    pub fn discrete<S: AsRef<str>>(names: &[S]) -> Self {
        let objects: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, o)| MorphismRecord {
                id: format!("id_{o}"),
                src: i,
                tgt: i,
            })
            .collect();
        let identity = (0..objects.len()).collect();
        FinCategory::generate(objects, morphisms, identity, |g, _| g)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.objects.len()
    }

    pub fn morphisms(&self) -> std::ops::Range<MorId> {
        0..self.morphisms.len()
    }

    pub fn object_id(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn morphism_id(&self, m: MorId) -> &str {
        &self.morphisms[m].id
    }

    pub fn object_ids(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_records(&self) -> &[MorphismRecord] {
        &self.morphisms
    }

    pub fn object_index(&self, id: &str) -> Option<ObjId> {
        self.object_index.get(id).copied()
    }

    pub fn morphism_index(&self, id: &str) -> Option<MorId> {
        self.morphism_index.get(id).copied()
    }

    pub fn object_by_id(&self, id: &str) -> Result<ObjId> {
        self.object_index(id)
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    pub fn morphism_by_id(&self, id: &str) -> Result<MorId> {
        self.morphism_index(id)
            .ok_or_else(|| Error::UnknownMorphism(id.to_string()))
    }

    pub fn src(&self, m: MorId) -> ObjId {
        self.morphisms[m].src
    }

    pub fn tgt(&self, m: MorId) -> ObjId {
        self.morphisms[m].tgt
    }

    pub fn identity(&self, o: ObjId) -> MorId {
        self.identity[o]
    }

    pub fn identity_table(&self) -> &[MorId] {
        &self.identity
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        let rec = &self.morphisms[m];
        rec.src == rec.tgt && self.identity[rec.src] == m
    }

    pub fn composition_table(&self) -> &HashMap<(MorId, MorId), MorId> {
        &self.compose
    }

    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.morphisms[f].tgt != self.morphisms[g].src {
            return None;
        }
        self.compose.get(&(g, f)).copied()
    }

    /// `g ∘ f`. Panics if the pair is not composable or missing from the
    /// table; only call on validated categories.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "no composite for `{}` after `{}`",
                self.morphisms[g].id, self.morphisms[f].id
            )
        })
    }

    /// Composes a path given in diagrammatic order (first morphism first).
    pub fn compose_path(&self, path: &[MorId]) -> Option<MorId> {
        let (&first, rest) = path.split_first()?;
        Some(rest.iter().fold(first, |acc, &m| self.compose(m, acc)))
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        self.hom.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn out_of(&self, a: ObjId) -> &[MorId] {
        &self.out_of[a]
    }

    pub fn into(&self, a: ObjId) -> &[MorId] {
        &self.into[a]
    }

    /// Non-identity morphisms out of `a`.
    pub fn proper_out_of(&self, a: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.out_of[a].iter().copied().filter(|&m| !self.is_identity(m))
    }

    /// Finds an object on a cycle of non-identity morphisms, if any.
    ///
    /// A non-identity endomorphism counts as a cycle of length one.
    pub fn find_nonidentity_cycle(&self) -> Option<ObjId> {
        // iterative three-colour DFS over the non-identity morphism graph
        let n = self.objects.len();
        let mut colour = vec![0u8; n];
        for start in 0..n {
            if colour[start] != 0 {
                continue;
            }
            let mut stack: Vec<(ObjId, usize)> = vec![(start, 0)];
            colour[start] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let outs = &self.out_of[v];
                if *next < outs.len() {
                    let m = outs[*next];
                    *next += 1;
                    if self.is_identity(m) {
                        continue;
                    }
                    let w = self.morphisms[m].tgt;
                    match colour[w] {
                        0 => {
                            colour[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => return Some(w),
                        _ => {}
                    }
                } else {
                    colour[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Errors with [`Error::LoopyCategory`] if the nerve would be infinite.
    pub fn ensure_loop_free(&self) -> Result<()> {
        match self.find_nonidentity_cycle() {
            Some(o) => Err(Error::LoopyCategory(self.objects[o].clone())),
            None => Ok(()),
        }
    }
}

/// Checks the category axioms exhaustively.
///
/// Each composable pair contributes at most one violation: typing is checked
/// first, then the unit laws. Associativity is only checked on triples whose
/// intermediate composites exist and are well typed.
pub fn validate_category(c: &FinCategory) -> ValidationReport {
    let mut report = ValidationReport::new("category");
    let id = |m: MorId| c.morphism_id(m).to_string();

    for o in c.objects() {
        let m = c.identity[o];
        if c.src(m) != o || c.tgt(m) != o {
            report.push(Violation::IdentityNotEndomorphism {
                object: c.object_id(o).to_string(),
                morphism: id(m),
            });
        }
    }

    let mut keys: Vec<_> = c.compose.keys().copied().collect();
    keys.sort_unstable();
    for (g, f) in keys {
        if c.tgt(f) != c.src(g) {
            report.push(Violation::ComposeNotComposable { g: id(g), f: id(f) });
        }
    }

    let typed = |g: MorId, f: MorId| -> Option<MorId> {
        let h = c.try_compose(g, f)?;
        (c.src(h) == c.src(f) && c.tgt(h) == c.tgt(g)).then_some(h)
    };

    for f in c.morphisms() {
        for &g in c.out_of(c.tgt(f)) {
            let Some(h) = c.try_compose(g, f) else {
                report.push(Violation::MissingComposite { g: id(g), f: id(f) });
                continue;
            };
            if c.src(h) != c.src(f) || c.tgt(h) != c.tgt(g) {
                report.push(Violation::Typing {
                    g: id(g),
                    f: id(f),
                    composite: id(h),
                });
                continue;
            }
            if g == c.identity[c.tgt(f)] && h != f {
                report.push(Violation::LeftUnit { f: id(f) });
            } else if f == c.identity[c.src(g)] && h != g {
                report.push(Violation::RightUnit { f: id(g) });
            }
        }
    }

    for f in c.morphisms() {
        for &g in c.out_of(c.tgt(f)) {
            let Some(gf) = typed(g, f) else { continue };
            for &h in c.out_of(c.tgt(g)) {
                let Some(hg) = typed(h, g) else { continue };
                let (Some(left), Some(right)) = (typed(h, gf), typed(hg, f)) else {
                    continue;
                };
                if left != right {
                    report.push(Violation::Associativity {
                        h: id(h),
                        g: id(g),
                        f: id(f),
                    });
                }
            }
        }
    }
    report
}

pub(crate) fn tuple_id<S: AsRef<str>>(parts: &[S]) -> String {
    let mut s = String::from("(");
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(p.as_ref());
    }
    s.push(')');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> FinCategory {
        poset_category(&["0", "1"], &[("0", "0"), ("1", "1"), ("0", "1")]).unwrap()
    }

    #[test]
    fn arrow_is_a_category() {
        let c = arrow();
        assert_eq!(c.num_objects(), 2);
        assert_eq!(c.num_morphisms(), 3);
        assert!(validate_category(&c).is_clean());
    }

    #[test]
    fn retargeted_composite_is_one_typing_violation() {
        let c = arrow();
        let a = c.hom(0, 1)[0];
        let id0 = c.identity(0);
        let mut table = c.composition_table().clone();
        table.insert((a, id0), id0);
        let broken = FinCategory::from_parts(
            c.object_ids().to_vec(),
            c.morphism_records().to_vec(),
            c.identity_table().to_vec(),
            table,
        )
        .unwrap();
        let report = validate_category(&broken);
        assert_eq!(report.len(), 1, "{report:?}");
        assert!(matches!(report.violations[0], Violation::Typing { .. }));
    }

    #[test]
    fn missing_composite_is_reported() {
        let c = arrow();
        let a = c.hom(0, 1)[0];
        let mut table = c.composition_table().clone();
        table.remove(&(c.identity(1), a));
        let broken = FinCategory::from_parts(
            c.object_ids().to_vec(),
            c.morphism_records().to_vec(),
            c.identity_table().to_vec(),
            table,
        )
        .unwrap();
        let report = validate_category(&broken);
        assert_eq!(
            report.violations,
            vec![Violation::MissingComposite {
                g: "1<=1".into(),
                f: "0<=1".into()
            }]
        );
    }

    #[test]
    fn non_associative_table_is_caught() {
        // one object, morphisms e, a, b with a non-associative product
        let objects = vec!["x".to_string()];
        let morphisms: Vec<_> = ["e", "a", "b"]
            .iter()
            .map(|id| MorphismRecord {
                id: id.to_string(),
                src: 0,
                tgt: 0,
            })
            .collect();
        let mut table = HashMap::new();
        for m in 0..3 {
            table.insert((0, m), m);
            table.insert((m, 0), m);
        }
        table.insert((1, 1), 2);
        table.insert((1, 2), 1);
        table.insert((2, 1), 2);
        table.insert((2, 2), 1);
        let c = FinCategory::from_parts(objects, morphisms, vec![0], table).unwrap();
        let report = validate_category(&c);
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v, Violation::Associativity { .. })));
        assert!(!report.is_clean());
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let err = FinCategory::from_parts(
            vec!["a".into(), "a".into()],
            vec![],
            vec![],
            HashMap::new(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn cycle_detection() {
        assert!(arrow().find_nonidentity_cycle().is_none());
        let c = FinCategory::from_parts(
            vec!["x".into()],
            vec![
                MorphismRecord { id: "e".into(), src: 0, tgt: 0 },
                MorphismRecord { id: "t".into(), src: 0, tgt: 0 },
            ],
            vec![0],
            HashMap::from([((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 0)]),
        )
        .unwrap();
        assert!(validate_category(&c).is_clean());
        assert_eq!(c.find_nonidentity_cycle(), Some(0));
        assert!(matches!(c.ensure_loop_free(), Err(Error::LoopyCategory(_))));
    }
}
