use std::sync::Arc;

use super::{FinCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::validation::{ValidationReport, Violation};

/// A functor between finite categories, stored as object and morphism maps.
#[derive(Clone, Debug)]
pub struct Functor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    objects: Vec<ObjId>,
    morphisms: Vec<MorId>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && same_category(&self.source, &other.source)
            && same_category(&self.target, &other.target)
    }
}

impl Eq for Functor {}

pub(crate) fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Functor {
    /// Builds a functor from raw maps. Only lengths and ranges are checked;
    /// use [`Functor::check`] for the functor laws.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Result<Self> {
        if objects.len() != source.num_objects() || morphisms.len() != source.num_morphisms() {
            return Err(Error::Malformed(
                "functor maps must cover every object and morphism of the source".into(),
            ));
        }
        if objects.iter().any(|&o| o >= target.num_objects())
            || morphisms.iter().any(|&m| m >= target.num_morphisms())
        {
            return Err(Error::Malformed("functor map points outside its target".into()));
        }
        Ok(Functor {
            source,
            target,
            objects,
            morphisms,
        })
    }

    pub(crate) fn from_maps(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Self {
        debug_assert_eq!(objects.len(), source.num_objects());
        debug_assert_eq!(morphisms.len(), source.num_morphisms());
        Functor {
            source,
            target,
            objects,
            morphisms,
        }
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let objects = c.objects().collect();
        let morphisms = c.morphisms().collect();
        Functor {
            source: c.clone(),
            target: c,
            objects,
            morphisms,
        }
    }

    /// The functor sending everything to `x` and its identity.
    pub fn constant(source: Arc<FinCategory>, target: Arc<FinCategory>, x: ObjId) -> Self {
        let id = target.identity(x);
        Functor {
            objects: vec![x; source.num_objects()],
            morphisms: vec![id; source.num_morphisms()],
            source,
            target,
        }
    }

    /// The unique functor into the terminal category.
    pub fn to_terminal(source: Arc<FinCategory>, terminal: Arc<FinCategory>) -> Self {
        Functor::constant(source, terminal, 0)
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn obj(&self, o: ObjId) -> ObjId {
        self.objects[o]
    }

    pub fn mor(&self, m: MorId) -> MorId {
        self.morphisms[m]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn morphism_map(&self) -> &[MorId] {
        &self.morphisms
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Result<Functor> {
        if !same_category(&first.target, &self.source) {
            return Err(Error::precondition("functors are not composable"));
        }
        Ok(Functor {
            source: first.source.clone(),
            target: self.target.clone(),
            objects: first.objects.iter().map(|&o| self.objects[o]).collect(),
            morphisms: first.morphisms.iter().map(|&m| self.morphisms[m]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        same_category(&self.source, &self.target)
            && self.objects.iter().enumerate().all(|(i, &o)| i == o)
            && self.morphisms.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// Bijective on objects and morphisms (and a functor).
    pub fn is_isomorphism(&self) -> bool {
        fn bijective(map: &[usize], n: usize) -> bool {
            if map.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
        }
        bijective(&self.objects, self.target.num_objects())
            && bijective(&self.morphisms, self.target.num_morphisms())
            && self.check().is_clean()
    }

    /// Inverse of a bijective functor.
    pub fn inverse(&self) -> Option<Functor> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut objects = vec![0; self.objects.len()];
        for (i, &o) in self.objects.iter().enumerate() {
            objects[o] = i;
        }
        let mut morphisms = vec![0; self.morphisms.len()];
        for (i, &m) in self.morphisms.iter().enumerate() {
            morphisms[m] = i;
        }
        Some(Functor {
            source: self.target.clone(),
            target: self.source.clone(),
            objects,
            morphisms,
        })
    }

    /// Checks typing, identities and composites.
    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::new("functor");
        let (s, t) = (&*self.source, &*self.target);
        for m in s.morphisms() {
            let fm = self.morphisms[m];
            if t.src(fm) != self.objects[s.src(m)] || t.tgt(fm) != self.objects[s.tgt(m)] {
                report.push(Violation::FunctorTyping {
                    morphism: s.morphism_id(m).to_string(),
                });
            }
        }
        for o in s.objects() {
            if self.morphisms[s.identity(o)] != t.identity(self.objects[o]) {
                report.push(Violation::FunctorIdentity {
                    object: s.object_id(o).to_string(),
                });
            }
        }
        for f in s.morphisms() {
            for &g in s.out_of(s.tgt(f)) {
                let Some(gf) = s.try_compose(g, f) else { continue };
                let lhs = self.morphisms[gf];
                let rhs = t.try_compose(self.morphisms[g], self.morphisms[f]);
                if rhs != Some(lhs) {
                    report.push(Violation::FunctorComposition {
                        g: s.morphism_id(g).to_string(),
                        f: s.morphism_id(f).to_string(),
                    });
                }
            }
        }
        report
    }
}

/// A natural transformation `source ⇒ target` between parallel functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    source: Functor,
    target: Functor,
    components: Vec<MorId>,
}

impl NatTrans {
    pub fn new(source: Functor, target: Functor, components: Vec<MorId>) -> Result<Self> {
        if !same_category(source.source(), target.source())
            || !same_category(source.target(), target.target())
        {
            return Err(Error::precondition(
                "natural transformation between non-parallel functors",
            ));
        }
        if components.len() != source.source().num_objects()
            || components.iter().any(|&m| m >= source.target().num_morphisms())
        {
            return Err(Error::Malformed("component table has the wrong shape".into()));
        }
        Ok(NatTrans {
            source,
            target,
            components,
        })
    }

    pub fn identity(f: Functor) -> Self {
        let components = f
            .source()
            .objects()
            .map(|o| f.target().identity(f.obj(o)))
            .collect();
        NatTrans {
            source: f.clone(),
            target: f,
            components,
        }
    }

    pub fn source(&self) -> &Functor {
        &self.source
    }

    pub fn target(&self) -> &Functor {
        &self.target
    }

    pub fn component(&self, o: ObjId) -> MorId {
        self.components[o]
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    /// Reports mistyped components and every non-commuting naturality square.
    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::new("natural transformation");
        let c = &**self.source.source();
        let d = &**self.source.target();
        let mut typed = vec![true; c.num_objects()];
        for o in c.objects() {
            let m = self.components[o];
            if d.src(m) != self.source.obj(o) || d.tgt(m) != self.target.obj(o) {
                typed[o] = false;
                report.push(Violation::ComponentTyping {
                    object: c.object_id(o).to_string(),
                });
            }
        }
        for f in c.morphisms() {
            let (a, b) = (c.src(f), c.tgt(f));
            if !typed[a] || !typed[b] {
                continue;
            }
            let lhs = d.try_compose(self.target.mor(f), self.components[a]);
            let rhs = d.try_compose(self.components[b], self.source.mor(f));
            if lhs.is_none() || lhs != rhs {
                report.push(Violation::Naturality {
                    morphism: c.morphism_id(f).to_string(),
                });
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{poset_category, MorphismRecord};
    use std::collections::HashMap;

    fn arrow() -> Arc<FinCategory> {
        Arc::new(poset_category(&["0", "1"], &[("0", "1")]).unwrap())
    }

    /// `0 ⇉ 1` with two parallel arrows `a` and `b`.
    fn parallel_pair() -> Arc<FinCategory> {
        let objects = vec!["0".to_string(), "1".to_string()];
        let morphisms = vec![
            MorphismRecord { id: "id0".into(), src: 0, tgt: 0 },
            MorphismRecord { id: "id1".into(), src: 1, tgt: 1 },
            MorphismRecord { id: "a".into(), src: 0, tgt: 1 },
            MorphismRecord { id: "b".into(), src: 0, tgt: 1 },
        ];
        let mut table = HashMap::new();
        for m in 0..4usize {
            let (s, t) = (morphisms[m].src, morphisms[m].tgt);
            table.insert((t, m), m);
            table.insert((m, s), m);
        }
        Arc::new(FinCategory::from_parts(objects, morphisms, vec![0, 1], table).unwrap())
    }

    #[test]
    fn identity_functor_is_clean() {
        let c = arrow();
        assert!(Functor::identity(c.clone()).check().is_clean());
        assert!(Functor::identity(c).is_isomorphism());
    }

    #[test]
    fn constant_functor_composites_are_clean() {
        let c = arrow();
        let k = Functor::constant(c.clone(), c.clone(), 1);
        assert!(k.check().is_clean());
        let g = Functor::identity(c.clone());
        assert!(k.after(&g).unwrap().check().is_clean());
        assert!(g.after(&k).unwrap().check().is_clean());
    }

    #[test]
    fn broken_functor_reports_identity() {
        let c = arrow();
        let a = c.hom(0, 1)[0];
        let f = Functor::new(c.clone(), c.clone(), vec![0, 1], vec![a, c.identity(1), a]).unwrap();
        let report = f.check();
        assert!(report
            .violations
            .contains(&Violation::FunctorIdentity { object: "0".into() }));
    }

    #[test]
    fn one_naturality_square_fails() {
        let c = arrow();
        let d = parallel_pair();
        let f0 = c.hom(0, 1)[0];
        // c's morphisms in order: 0<=0, 0<=1, 1<=1
        let fa = Functor::new(c.clone(), d.clone(), vec![0, 1], vec![0, 2, 1]).unwrap();
        let fb = Functor::new(c.clone(), d.clone(), vec![0, 1], vec![0, 3, 1]).unwrap();
        assert!(fa.check().is_clean() && fb.check().is_clean());
        let eta = NatTrans::new(fa.clone(), fb, vec![0, 1]).unwrap();
        let report = eta.check();
        assert_eq!(
            report.violations,
            vec![Violation::Naturality {
                morphism: c.morphism_id(f0).to_string()
            }]
        );
        assert!(NatTrans::identity(fa).check().is_clean());
    }
}
