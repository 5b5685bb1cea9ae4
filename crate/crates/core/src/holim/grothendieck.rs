use std::collections::HashMap;
use std::sync::Arc;

use super::csp::Budget;
use super::hom::{hom_category, overcat_diagram, DiagramHom};
use crate::error::{Error, Result};
use crate::fincat::{
    comma_over, comma_over_induced, tuple_id, Comma, Diagram, FinCategory, Functor, MorId, MorphismRecord, ObjId,
    Product,
};

/// `K∫F` with its projection to `K`.
#[derive(Clone, Debug)]
pub struct Grothendieck {
    pub category: Arc<FinCategory>,
    pub projection: Functor,
    /// `(k, x)` per object.
    pub objects: Vec<(ObjId, ObjId)>,
    /// `(α, δ)` per morphism, with `δ : F(α)(x) → y`.
    pub morphisms: Vec<(MorId, MorId)>,
    object_index: HashMap<(ObjId, ObjId), ObjId>,
    morphism_index: HashMap<(ObjId, MorId, MorId), MorId>,
}

impl Grothendieck {
    pub fn object(&self, k: ObjId, x: ObjId) -> Option<ObjId> {
        self.object_index.get(&(k, x)).copied()
    }

    /// The morphism `(α, δ)` out of `source`.
    pub fn morphism(&self, source: ObjId, alpha: MorId, delta: MorId) -> Option<MorId> {
        self.morphism_index.get(&(source, alpha, delta)).copied()
    }
}

pub fn grothendieck(f: &Diagram) -> Grothendieck {
    let k = f.base();
    let objects: Vec<(ObjId, ObjId)> = k
        .objects()
        .flat_map(|a| f.vertex(a).objects().map(move |x| (a, x)))
        .collect();
    let object_index: HashMap<(ObjId, ObjId), ObjId> = objects.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let names: Vec<String> = objects
        .iter()
        .map(|&(a, x)| tuple_id(&[k.object_id(a), f.vertex(a).object_id(x)]))
        .collect();
    let mut morphisms = Vec::new();
    let mut records = Vec::new();
    let mut morphism_index = HashMap::new();
    for (s, &(a, x)) in objects.iter().enumerate() {
        for &alpha in k.out_of(a) {
            let l = k.tgt(alpha);
            let fl = f.vertex(l);
            let pushed = f.transition(alpha).obj(x);
            for &delta in fl.out_of(pushed) {
                let t = object_index[&(l, fl.tgt(delta))];
                morphism_index.insert((s, alpha, delta), records.len());
                records.push(MorphismRecord {
                    id: format!("{}:{}", tuple_id(&[k.morphism_id(alpha), fl.morphism_id(delta)]), names[s]),
                    src: s,
                    tgt: t,
                });
                morphisms.push((alpha, delta));
            }
        }
    }
    let identity: Vec<MorId> = objects
        .iter()
        .enumerate()
        .map(|(s, &(a, x))| morphism_index[&(s, k.identity(a), f.vertex(a).identity(x))])
        .collect();
    let srcs: Vec<ObjId> = records.iter().map(|r| r.src).collect();
    let category = FinCategory::generate(names, records, identity, |g, h| {
        let ((beta, eps), (alpha, delta)) = (morphisms[g], morphisms[h]);
        let m = f.vertex(k.tgt(beta)).compose(eps, f.transition(beta).mor(delta));
        morphism_index[&(srcs[h], k.compose(beta, alpha), m)]
    });
    let category = Arc::new(category);
    let projection = Functor::from_maps(
        category.clone(),
        k.clone(),
        objects.iter().map(|&(a, _)| a).collect(),
        morphisms.iter().map(|&(a, _)| a).collect(),
    );
    Grothendieck {
        category,
        projection,
        objects,
        morphisms,
        object_index,
        morphism_index,
    }
}

/// `f↓g`: objects `(c, e, φ : f c → d, ψ : g e → d)`, morphisms `(u, v, w)`
/// making both squares commute.
#[derive(Clone, Debug)]
pub struct BarwickKan {
    pub category: Arc<FinCategory>,
    pub objects: Vec<(ObjId, ObjId, MorId, MorId)>,
    /// `(u, v, w)` per morphism.
    pub morphisms: Vec<(MorId, MorId, MorId)>,
    object_index: HashMap<(ObjId, ObjId, MorId, MorId), ObjId>,
    morphism_index: HashMap<(ObjId, MorId, MorId, MorId), MorId>,
}

impl BarwickKan {
    pub fn object(&self, c: ObjId, e: ObjId, phi: MorId, psi: MorId) -> Option<ObjId> {
        self.object_index.get(&(c, e, phi, psi)).copied()
    }

    pub fn morphism(&self, source: ObjId, u: MorId, v: MorId, w: MorId) -> Option<MorId> {
        self.morphism_index.get(&(source, u, v, w)).copied()
    }
}

pub fn barwick_kan(f: &Functor, g: &Functor) -> Result<BarwickKan> {
    if !crate::fincat::same_category(f.target(), g.target()) {
        return Err(Error::precondition("f and g need a common target"));
    }
    let (c, e, d) = (f.source(), g.source(), f.target());
    let mut objects = Vec::new();
    for x in c.objects() {
        for z in e.objects() {
            for dd in d.objects() {
                for &phi in d.hom(f.obj(x), dd) {
                    for &psi in d.hom(g.obj(z), dd) {
                        objects.push((x, z, phi, psi));
                    }
                }
            }
        }
    }
    let object_index: HashMap<_, _> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let names: Vec<String> = objects
        .iter()
        .map(|&(x, z, phi, psi)| tuple_id(&[c.object_id(x), e.object_id(z), d.morphism_id(phi), d.morphism_id(psi)]))
        .collect();
    let mut morphisms = Vec::new();
    let mut records = Vec::new();
    let mut morphism_index = HashMap::new();
    for (s, &(x, z, phi, psi)) in objects.iter().enumerate() {
        for (t, &(x2, z2, phi2, psi2)) in objects.iter().enumerate() {
            for &u in c.hom(x, x2) {
                for &v in e.hom(z, z2) {
                    for &w in d.hom(d.tgt(phi), d.tgt(phi2)) {
                        if d.compose(phi2, f.mor(u)) == d.compose(w, phi) && d.compose(psi2, g.mor(v)) == d.compose(w, psi) {
                            morphism_index.insert((s, u, v, w), records.len());
                            records.push(MorphismRecord {
                                id: format!(
                                    "{}:{}",
                                    tuple_id(&[c.morphism_id(u), e.morphism_id(v), d.morphism_id(w)]),
                                    names[s]
                                ),
                                src: s,
                                tgt: t,
                            });
                            morphisms.push((u, v, w));
                        }
                    }
                }
            }
        }
    }
    let identity: Vec<MorId> = objects
        .iter()
        .enumerate()
        .map(|(s, &(x, z, phi, _))| morphism_index[&(s, c.identity(x), e.identity(z), d.identity(d.tgt(phi)))])
        .collect();
    let srcs: Vec<ObjId> = records.iter().map(|r| r.src).collect();
    let category = FinCategory::generate(names, records, identity, |a, b| {
        let ((u1, v1, w1), (u0, v0, w0)) = (morphisms[a], morphisms[b]);
        morphism_index[&(srcs[b], c.compose(u1, u0), e.compose(v1, v0), d.compose(w1, w0))]
    });
    Ok(BarwickKan {
        category: Arc::new(category),
        objects,
        morphisms,
        object_index,
        morphism_index,
    })
}

/// `f/(−) × g/(−) : D → Cat` with the slices it is built from.
pub struct SliceProductDiagram {
    pub diagram: Diagram,
    pub left: Vec<Comma>,
    pub right: Vec<Comma>,
    pub products: Vec<Product>,
}

pub fn slice_product_diagram(f: &Functor, g: &Functor) -> Result<SliceProductDiagram> {
    let d = f.target();
    let left: Vec<Comma> = d.objects().map(|x| comma_over(f, x)).collect::<Result<_>>()?;
    let right: Vec<Comma> = d.objects().map(|x| comma_over(g, x)).collect::<Result<_>>()?;
    let products: Vec<Product> = d
        .objects()
        .map(|x| Product::new(vec![left[x].category.clone(), right[x].category.clone()]))
        .collect();
    let transitions = d
        .morphisms()
        .map(|w| {
            let (s, t) = (d.src(w), d.tgt(w));
            let lf = comma_over_induced(f, &left[s], &left[t], w);
            let rf = comma_over_induced(g, &right[s], &right[t], w);
            products[s].product_functor(&products[t], &[lf, rf])
        })
        .collect();
    let vertices = products.iter().map(|p| p.category.clone()).collect();
    Ok(SliceProductDiagram {
        diagram: Diagram::new(d.clone(), vertices, transitions)?,
        left,
        right,
        products,
    })
}

/// The explicit isomorphism `f↓g → D∫(f/(−) × g/(−))`.
pub fn barwick_kan_to_grothendieck(bk: &BarwickKan, spd: &SliceProductDiagram, gr: &Grothendieck, d: &FinCategory) -> Result<Functor> {
    let missing = || Error::precondition("f↓g and the Grothendieck construction disagree");
    let objects: Vec<ObjId> = bk
        .objects
        .iter()
        .map(|&(x, z, phi, psi)| {
            let dd = d.tgt(phi);
            let l = spd.left[dd].object(x, phi).ok_or_else(missing)?;
            let r = spd.right[dd].object(z, psi).ok_or_else(missing)?;
            gr.object(dd, spd.products[dd].object(&[l, r])).ok_or_else(missing)
        })
        .collect::<Result<_>>()?;
    let cat = &bk.category;
    let morphisms: Vec<MorId> = cat
        .morphisms()
        .map(|m| {
            let (u, v, w) = bk.morphisms[m];
            let (s, t) = (cat.src(m), cat.tgt(m));
            let (x, z, phi, psi) = bk.objects[s];
            let (_, _, phi2, _) = bk.objects[t];
            let d2 = d.tgt(phi2);
            let target_tuple = spd.products[d2].object_tuple(gr.objects[objects[t]].1);
            let ls = spd.left[d2].object(x, d.compose(w, phi)).ok_or_else(missing)?;
            let rs = spd.right[d2].object(z, d.compose(w, psi)).ok_or_else(missing)?;
            let lu = spd.left[d2].morphism(u, ls, target_tuple[0]).ok_or_else(missing)?;
            let rv = spd.right[d2].morphism(v, rs, target_tuple[1]).ok_or_else(missing)?;
            let delta = spd.products[d2].morphism(&[lu, rv]);
            gr.morphism(objects[s], w, delta).ok_or_else(missing)
        })
        .collect::<Result<_>>()?;
    Ok(Functor::from_maps(cat.clone(), gr.category.clone(), objects, morphisms))
}

/// A cospan `a → d ← b` recognised inside a base category.
#[derive(Clone, Copy, Debug)]
pub struct Cospan {
    pub left: ObjId,
    pub right: ObjId,
    pub apex: ObjId,
    pub left_map: MorId,
    pub right_map: MorId,
}

/// Finds the shape `• → • ← •`: three objects and exactly two non-identity
/// morphisms with a common target. The left leg is the one with the smaller
/// source index.
pub fn cospan_shape(base: &FinCategory) -> Result<Cospan> {
    let proper: Vec<MorId> = base.morphisms().filter(|&m| !base.is_identity(m)).collect();
    let bad = || Error::precondition("base is not of the shape • → • ← •");
    if base.num_objects() != 3 || proper.len() != 2 {
        return Err(bad());
    }
    let (mut p, mut q) = (proper[0], proper[1]);
    if base.tgt(p) != base.tgt(q) || base.src(p) == base.src(q) {
        return Err(bad());
    }
    if base.src(p) > base.src(q) {
        std::mem::swap(&mut p, &mut q);
    }
    Ok(Cospan {
        left: base.src(p),
        right: base.src(q),
        apex: base.tgt(p),
        left_map: p,
        right_map: q,
    })
}

/// The isomorphism `Hom((•→•←•)/(−), X) → f↓g` read off from the components.
pub fn hom_to_barwick_kan(hom: &DiagramHom, shape: &Cospan, bk: &BarwickKan) -> Result<Functor> {
    let od = overcat_diagram(hom.source().base());
    let slice = &od.slices[shape.apex];
    let base = hom.source().base();
    let apex_id = slice.object(shape.apex, base.identity(shape.apex)).ok_or_else(|| Error::precondition("apex missing"))?;
    let left_obj = slice.object(shape.left, shape.left_map).ok_or_else(|| Error::precondition("leg missing"))?;
    let right_obj = slice.object(shape.right, shape.right_map).ok_or_else(|| Error::precondition("leg missing"))?;
    let sc = &slice.category;
    let leg = |o: ObjId| sc.hom(o, apex_id)[0];
    let (lm, rm) = (leg(left_obj), leg(right_obj));
    let missing = || Error::precondition("hom-category and f↓g disagree");
    let objects: Vec<ObjId> = (0..hom.category.num_objects())
        .map(|o| {
            let fam = hom.family(o);
            let (x, z) = (fam[shape.left].objects[0], fam[shape.right].objects[0]);
            let (phi, psi) = (fam[shape.apex].morphisms[lm], fam[shape.apex].morphisms[rm]);
            bk.object(x, z, phi, psi).ok_or_else(missing)
        })
        .collect::<Result<_>>()?;
    let morphisms: Vec<MorId> = hom
        .category
        .morphisms()
        .map(|m| {
            let md = hom.modification(m);
            let (u, v, w) = (md.components[shape.left][0], md.components[shape.right][0], md.components[shape.apex][apex_id]);
            bk.morphism(objects[md.source], u, v, w).ok_or_else(missing)
        })
        .collect::<Result<_>>()?;
    Ok(Functor::from_maps(hom.category.clone(), bk.category.clone(), objects, morphisms))
}

/// The three models of the homotopy pullback of a cospan diagram and the
/// explicit comparisons between them.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CospanComparison {
    pub objects: usize,
    pub morphisms: usize,
    pub hom_to_barwick_kan_iso: bool,
    pub barwick_kan_to_grothendieck_iso: bool,
}

pub fn compare_cospan_models(x: &Diagram, budget: &Budget) -> Result<(CospanComparison, BarwickKan)> {
    let shape = cospan_shape(x.base())?;
    let (f, g) = (x.transition(shape.left_map), x.transition(shape.right_map));
    let bk = barwick_kan(f, g)?;
    let hom = hom_category(&overcat_diagram(x.base()).diagram, x, budget)?;
    let h2b = hom_to_barwick_kan(&hom, &shape, &bk)?;
    let spd = slice_product_diagram(f, g)?;
    let gr = grothendieck(&spd.diagram);
    let b2g = barwick_kan_to_grothendieck(&bk, &spd, &gr, f.target())?;
    let cmp = CospanComparison {
        objects: bk.category.num_objects(),
        morphisms: bk.category.num_morphisms(),
        hom_to_barwick_kan_iso: h2b.check().is_clean() && h2b.is_isomorphism(),
        barwick_kan_to_grothendieck_iso: b2g.check().is_clean() && b2g.is_isomorphism(),
    };
    Ok((cmp, bk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{find_isomorphism, ordinal, poset_category, product_category, validate_category};
    use crate::simpl::{homology, nerve};

    fn select(target: &Arc<FinCategory>, o: ObjId) -> Functor {
        let pt = Arc::new(FinCategory::terminal());
        Functor::new(pt, target.clone(), vec![o], vec![target.identity(o)]).unwrap()
    }

    fn cospan(f: &Functor, g: &Functor) -> Diagram {
        let base = Arc::new(poset_category(&["a", "b", "d"], &[("a", "d"), ("b", "d")]).unwrap());
        let trans = base
            .morphisms()
            .map(|m| match base.morphism_id(m) {
                "a<=a" => Functor::identity(f.source().clone()),
                "b<=b" => Functor::identity(g.source().clone()),
                "d<=d" => Functor::identity(f.target().clone()),
                "a<=d" => f.clone(),
                _ => g.clone(),
            })
            .collect();
        Diagram::new(base, vec![f.source().clone(), g.source().clone(), f.target().clone()], trans).unwrap()
    }

    #[test]
    fn constant_grothendieck_is_a_product() {
        let k = Arc::new(ordinal(1));
        let c = Arc::new(poset_category(&["x", "y", "z"], &[("x", "y")]).unwrap());
        let gr = grothendieck(&Diagram::constant(k.clone(), c.clone()));
        let p = product_category(k, c);
        assert!(validate_category(&gr.category).is_clean());
        assert!(find_isomorphism(&gr.category, &p.category, 1_000_000).unwrap().is_some());
    }

    #[test]
    fn grothendieck_counts() {
        let k = Arc::new(ordinal(1));
        let i1 = Arc::new(ordinal(1));
        let gr = grothendieck(&Diagram::constant(k.clone(), i1.clone()));
        // pairs (α, δ : α_* x → y) enumerated directly; transitions are identities
        let count: usize = k
            .morphisms()
            .map(|_| i1.objects().map(|x| i1.out_of(x).len()).sum::<usize>())
            .sum();
        assert_eq!(gr.category.num_objects(), 4);
        assert_eq!(gr.category.num_morphisms(), count);
        assert_eq!(count, 9);

        let empty = Arc::new(FinCategory::empty());
        let pt = Arc::new(FinCategory::terminal());
        let to_pt = Functor::new(empty.clone(), pt.clone(), vec![], vec![]).unwrap();
        let trans = k
            .morphisms()
            .map(|a| match k.morphism_id(a) {
                "0<=0" => Functor::identity(empty.clone()),
                "1<=1" => Functor::identity(pt.clone()),
                _ => to_pt.clone(),
            })
            .collect();
        let d = Diagram::new(k.clone(), vec![empty, pt], trans).unwrap();
        let gr = grothendieck(&d);
        assert_eq!((gr.category.num_objects(), gr.category.num_morphisms()), (1, 1));
    }

    #[test]
    fn endpoint_cospan_gives_a_point() {
        let d = Arc::new(ordinal(1));
        let (f, g) = (select(&d, 0), select(&d, 1));
        let bk = barwick_kan(&f, &g).unwrap();
        // zig-zags 0 → d ← 1 in [1]: only d = 1
        let zigzags = d.objects().filter(|&dd| !d.hom(0, dd).is_empty() && !d.hom(1, dd).is_empty()).count();
        assert_eq!(bk.category.num_objects(), zigzags);
        assert_eq!(bk.category.num_morphisms(), 1);
        assert!(homology(&nerve(&bk.category).unwrap().set).is_point());
        let (cmp, _) = compare_cospan_models(&cospan(&f, &g), &Budget::new(1_000_000)).unwrap();
        assert!(cmp.hom_to_barwick_kan_iso && cmp.barwick_kan_to_grothendieck_iso);
    }

    #[test]
    fn identity_cospans_agree() {
        let pt = Arc::new(FinCategory::terminal());
        let id = Functor::identity(pt.clone());
        let bk = barwick_kan(&id, &id).unwrap();
        assert_eq!((bk.category.num_objects(), bk.category.num_morphisms()), (1, 1));

        let i1 = Arc::new(ordinal(1));
        let id1 = Functor::identity(i1.clone());
        let (cmp, bk) = compare_cospan_models(&cospan(&id1, &id1), &Budget::new(1_000_000)).unwrap();
        assert!(cmp.hom_to_barwick_kan_iso && cmp.barwick_kan_to_grothendieck_iso);
        assert!(validate_category(&bk.category).is_clean());
    }
}
