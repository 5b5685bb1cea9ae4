//! Canonical constructions: posets, products, subcategories, slices, commas,
//! unions of under categories, and the degree filtration.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use super::{tuple_id, FinCategory, Functor, MorId, MorphismRecord, ObjId};
use crate::error::{Error, Result};

/// The poset category on `elements`; one morphism `x<=y` per related pair.
///
/// Reflexive pairs are implied. The relation must already be transitive and
/// antisymmetric; no closure is taken.
pub fn poset_category<S: AsRef<str>>(elements: &[S], order_pairs: &[(S, S)]) -> Result<FinCategory> {
    let n = elements.len();
    let mut index = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.as_ref(), i).is_some() {
            return Err(Error::Malformed(format!("duplicate element `{}`", e.as_ref())));
        }
    }
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in order_pairs {
        let ia = *index
            .get(a.as_ref())
            .ok_or_else(|| Error::UnknownObject(a.as_ref().to_string()))?;
        let ib = *index
            .get(b.as_ref())
            .ok_or_else(|| Error::UnknownObject(b.as_ref().to_string()))?;
        le[ia][ib] = true;
    }
    let name = |i: usize| elements[i].as_ref().to_string();
    for a in 0..n {
        for b in 0..n {
            if a != b && le[a][b] && le[b][a] {
                return Err(Error::NotAntisymmetric(name(a), name(b)));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !le[a][b] {
                continue;
            }
            for c in 0..n {
                if le[b][c] && !le[a][c] {
                    return Err(Error::NotTransitive(name(a), name(b), name(c)));
                }
            }
        }
    }
    Ok(poset_from_relation(
        elements.iter().map(|e| e.as_ref().to_string()).collect(),
        |a, b| le[a][b],
    ))
}

/// Builds a poset category from a relation already known to be a partial order.
pub(crate) fn poset_from_relation(names: Vec<String>, le: impl Fn(usize, usize) -> bool) -> FinCategory {
    let n = names.len();
    let mut morphisms = Vec::new();
    let mut index = HashMap::new();
    let mut identity = vec![0; n];
    for a in 0..n {
        for b in 0..n {
            if le(a, b) {
                if a == b {
                    identity[a] = morphisms.len();
                }
                index.insert((a, b), morphisms.len());
                morphisms.push(MorphismRecord {
                    id: format!("{}<={}", names[a], names[b]),
                    src: a,
                    tgt: b,
                });
            }
        }
    }
    let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.src, m.tgt)).collect();
    FinCategory::generate(names, morphisms, identity, |g, f| index[&(ends[f].0, ends[g].1)])
}

/// The ordinal `[n] = {0 < 1 < … < n}`.
pub fn ordinal(n: usize) -> FinCategory {
    poset_from_relation((0..=n).map(|i| i.to_string()).collect(), |a, b| a <= b)
}

/// Renders a subset (given as a bitmask over `elements`) as `{a,b}`.
pub fn subset_id<S: AsRef<str>>(elements: &[S], mask: u64) -> String {
    let mut s = String::from("{");
    let mut first = true;
    for (i, e) in elements.iter().enumerate() {
        if mask >> i & 1 == 1 {
            if !first {
                s.push(',');
            }
            s.push_str(e.as_ref());
            first = false;
        }
    }
    s.push('}');
    s
}

/// Poset of subsets of `elements` under inclusion, objects in increasing
/// bitmask order. With `include_empty = false` this is the punctured cube.
pub fn subset_poset<S: AsRef<str>>(elements: &[S], include_empty: bool) -> FinCategory {
    let masks: Vec<u64> = (0..1u64 << elements.len())
        .filter(|&m| include_empty || m != 0)
        .collect();
    let names = masks.iter().map(|&m| subset_id(elements, m)).collect();
    poset_from_relation(names, |a, b| masks[a] & !masks[b] == 0)
}

/// An n-fold product with lexicographically ordered objects and morphisms.
#[derive(Clone, Debug)]
pub struct Product {
    pub category: Arc<FinCategory>,
    pub factors: Vec<Arc<FinCategory>>,
}

fn mixed_radix(sizes: &[usize], tuple: &[usize]) -> usize {
    tuple.iter().zip(sizes).fold(0, |acc, (&t, &s)| acc * s + t)
}

fn unmixed_radix(sizes: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        out[k] = index % sizes[k];
        index /= sizes[k];
    }
    out
}

impl Product {
    pub fn new(factors: Vec<Arc<FinCategory>>) -> Product {
        let osizes: Vec<usize> = factors.iter().map(|c| c.num_objects()).collect();
        let msizes: Vec<usize> = factors.iter().map(|c| c.num_morphisms()).collect();
        let nobj: usize = osizes.iter().product();
        let nmor: usize = msizes.iter().product();
        let objects: Vec<String> = (0..nobj)
            .map(|o| {
                let t = unmixed_radix(&osizes, o);
                let parts: Vec<&str> = t.iter().zip(&factors).map(|(&x, c)| c.object_id(x)).collect();
                tuple_id(&parts)
            })
            .collect();
        let tuples: Vec<Vec<usize>> = (0..nmor).map(|m| unmixed_radix(&msizes, m)).collect();
        let morphisms: Vec<MorphismRecord> = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().zip(&factors).map(|(&x, c)| c.morphism_id(x)).collect();
                let src: Vec<usize> = t.iter().zip(&factors).map(|(&x, c)| c.src(x)).collect();
                let tgt: Vec<usize> = t.iter().zip(&factors).map(|(&x, c)| c.tgt(x)).collect();
                MorphismRecord {
                    id: tuple_id(&parts),
                    src: mixed_radix(&osizes, &src),
                    tgt: mixed_radix(&osizes, &tgt),
                }
            })
            .collect();
        let identity: Vec<usize> = (0..nobj)
            .map(|o| {
                let t = unmixed_radix(&osizes, o);
                let ids: Vec<usize> = t.iter().zip(&factors).map(|(&x, c)| c.identity(x)).collect();
                mixed_radix(&msizes, &ids)
            })
            .collect();
        let category = FinCategory::generate(objects, morphisms, identity, |g, f| {
            let comp: Vec<usize> = tuples[g]
                .iter()
                .zip(&tuples[f])
                .zip(&factors)
                .map(|((&a, &b), c)| c.compose(a, b))
                .collect();
            mixed_radix(&msizes, &comp)
        });
        Product {
            category: Arc::new(category),
            factors,
        }
    }

    fn object_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|c| c.num_objects()).collect()
    }

    fn morphism_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|c| c.num_morphisms()).collect()
    }

    pub fn object(&self, tuple: &[ObjId]) -> ObjId {
        mixed_radix(&self.object_sizes(), tuple)
    }

    pub fn object_tuple(&self, o: ObjId) -> Vec<ObjId> {
        unmixed_radix(&self.object_sizes(), o)
    }

    pub fn morphism(&self, tuple: &[MorId]) -> MorId {
        mixed_radix(&self.morphism_sizes(), tuple)
    }

    pub fn morphism_tuple(&self, m: MorId) -> Vec<MorId> {
        unmixed_radix(&self.morphism_sizes(), m)
    }

    pub fn projection(&self, k: usize) -> Functor {
        let c = &self.category;
        Functor::from_maps(
            c.clone(),
            self.factors[k].clone(),
            c.objects().map(|o| self.object_tuple(o)[k]).collect(),
            c.morphisms().map(|m| self.morphism_tuple(m)[k]).collect(),
        )
    }

    /// The product functor `∏ F_k : self → target`.
    pub fn product_functor(&self, target: &Product, functors: &[Functor]) -> Functor {
        let c = &self.category;
        Functor::from_maps(
            c.clone(),
            target.category.clone(),
            c.objects()
                .map(|o| {
                    let t: Vec<usize> = self
                        .object_tuple(o)
                        .iter()
                        .zip(functors)
                        .map(|(&x, f)| f.obj(x))
                        .collect();
                    target.object(&t)
                })
                .collect(),
            c.morphisms()
                .map(|m| {
                    let t: Vec<usize> = self
                        .morphism_tuple(m)
                        .iter()
                        .zip(functors)
                        .map(|(&x, f)| f.mor(x))
                        .collect();
                    target.morphism(&t)
                })
                .collect(),
        )
    }
}

/// `C × D`.
pub fn product_category(c: Arc<FinCategory>, d: Arc<FinCategory>) -> Product {
    Product::new(vec![c, d])
}

/// Full subcategory on `objects` (kept in the given order) with its inclusion.
/// Object and morphism ids are preserved.
pub fn full_subcategory(c: &Arc<FinCategory>, objects: &[ObjId]) -> (Arc<FinCategory>, Functor) {
    let mut keep = vec![false; c.num_objects()];
    for &o in objects {
        keep[o] = true;
    }
    let morphisms: Vec<MorId> = objects
        .iter()
        .flat_map(|&a| c.out_of(a).iter().copied().filter(|&m| keep[c.tgt(m)]))
        .collect();
    subcategory(c, objects, &morphisms)
}

/// Subcategory with the given objects and morphisms, which must contain the
/// identities of `objects` and be closed under composition.
pub fn subcategory(c: &Arc<FinCategory>, objects: &[ObjId], morphisms: &[MorId]) -> (Arc<FinCategory>, Functor) {
    let mut obj_new = vec![usize::MAX; c.num_objects()];
    for (i, &o) in objects.iter().enumerate() {
        obj_new[o] = i;
    }
    let mut mor_new = vec![usize::MAX; c.num_morphisms()];
    for (i, &m) in morphisms.iter().enumerate() {
        mor_new[m] = i;
    }
    let records = morphisms
        .iter()
        .map(|&m| MorphismRecord {
            id: c.morphism_id(m).to_string(),
            src: obj_new[c.src(m)],
            tgt: obj_new[c.tgt(m)],
        })
        .collect();
    let identity = objects.iter().map(|&o| mor_new[c.identity(o)]).collect();
    let sub = FinCategory::generate(
        objects.iter().map(|&o| c.object_id(o).to_string()).collect(),
        records,
        identity,
        |g, f| {
            let h = mor_new[c.compose(morphisms[g], morphisms[f])];
            debug_assert!(h != usize::MAX, "subcategory not closed under composition");
            h
        },
    );
    let sub = Arc::new(sub);
    let inclusion = Functor::from_maps(sub.clone(), c.clone(), objects.to_vec(), morphisms.to_vec());
    (sub, inclusion)
}

/// A comma category `F/b` (or `b/F`) with its projection to the source of `F`.
#[derive(Clone, Debug)]
pub struct Comma {
    pub category: Arc<FinCategory>,
    pub projection: Functor,
    /// `(a, φ)` per object, with `φ : F(a) → b` (or `b → F(a)` for under commas).
    pub objects: Vec<(ObjId, MorId)>,
    object_index: HashMap<(ObjId, MorId), ObjId>,
}

impl Comma {
    pub fn object(&self, a: ObjId, phi: MorId) -> Option<ObjId> {
        self.object_index.get(&(a, phi)).copied()
    }

    /// The morphism `s → t` lying over `u`.
    pub fn morphism(&self, u: MorId, s: ObjId, t: ObjId) -> Option<MorId> {
        self.category
            .hom(s, t)
            .iter()
            .copied()
            .find(|&m| self.projection.mor(m) == u)
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
}

fn build_comma(f: &Functor, objects: Vec<(ObjId, MorId)>, over: bool) -> Comma {
    let src = f.source();
    let tgt = f.target();
    let object_index: HashMap<_, _> = objects.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let names: Vec<String> = objects
        .iter()
        .map(|&(a, phi)| tuple_id(&[src.object_id(a), tgt.morphism_id(phi)]))
        .collect();
    let mut records = Vec::new();
    let mut lies_over = Vec::new();
    let mut index = HashMap::new();
    for (s, &(a, phi)) in objects.iter().enumerate() {
        for &u in src.out_of(a) {
            let a2 = src.tgt(u);
            let fu = f.mor(u);
            for (t, &(b2, phi2)) in objects.iter().enumerate() {
                if b2 != a2 {
                    continue;
                }
                let ok = if over {
                    tgt.compose(phi2, fu) == phi
                } else {
                    tgt.compose(fu, phi) == phi2
                };
                if ok {
                    index.insert((u, s, t), records.len());
                    records.push(MorphismRecord {
                        id: format!("{}:{}->{}", src.morphism_id(u), names[s], names[t]),
                        src: s,
                        tgt: t,
                    });
                    lies_over.push(u);
                }
            }
        }
    }
    let identity: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(s, &(a, _))| index[&(src.identity(a), s, s)])
        .collect();
    let ends: Vec<(usize, usize)> = records.iter().map(|r| (r.src, r.tgt)).collect();
    let category = FinCategory::generate(names, records, identity, |g, h| {
        index[&(src.compose(lies_over[g], lies_over[h]), ends[h].0, ends[g].1)]
    });
    let category = Arc::new(category);
    let projection = Functor::from_maps(
        category.clone(),
        src.clone(),
        objects.iter().map(|&(a, _)| a).collect(),
        lies_over,
    );
    Comma {
        category,
        projection,
        objects,
        object_index,
    }
}

/// `F/b`: pairs `(a, φ : F(a) → b)`; morphisms `u : a → a'` with `φ'∘F(u) = φ`.
pub fn comma_over(f: &Functor, b: ObjId) -> Result<Comma> {
    if b >= f.target().num_objects() {
        return Err(Error::UnknownObject(format!("#{b}")));
    }
    let objects = f
        .source()
        .objects()
        .flat_map(|a| f.target().hom(f.obj(a), b).iter().map(move |&phi| (a, phi)))
        .collect();
    Ok(build_comma(f, objects, true))
}

/// `b/F`: pairs `(a, φ : b → F(a))`; morphisms `u : a → a'` with `F(u)∘φ = φ'`.
pub fn comma_under(f: &Functor, b: ObjId) -> Result<Comma> {
    if b >= f.target().num_objects() {
        return Err(Error::UnknownObject(format!("#{b}")));
    }
    let objects = f
        .source()
        .objects()
        .flat_map(|a| f.target().hom(b, f.obj(a)).iter().map(move |&phi| (a, phi)))
        .collect();
    Ok(build_comma(f, objects, false))
}

/// The functor `F/b → F/b'` induced by `ψ : b → b'`.
pub fn comma_over_induced(f: &Functor, from: &Comma, to: &Comma, psi: MorId) -> Functor {
    let t = f.target();
    let objects: Vec<ObjId> = from
        .objects
        .iter()
        .map(|&(a, phi)| {
            to.object(a, t.compose(psi, phi))
                .expect("postcomposition lands in the target comma")
        })
        .collect();
    let morphisms = from
        .category
        .morphisms()
        .map(|m| {
            let (s, g) = (from.category.src(m), from.category.tgt(m));
            to.morphism(from.projection.mor(m), objects[s], objects[g])
                .expect("postcomposition preserves comma morphisms")
        })
        .collect();
    Functor::from_maps(from.category.clone(), to.category.clone(), objects, morphisms)
}

/// Over category `C/i` with its projection to `C`.
pub fn over_category(c: &Arc<FinCategory>, i: ObjId) -> Result<Comma> {
    comma_over(&Functor::identity(c.clone()), i)
}

/// Union of under categories `U ≤ C` together with its subcategory `U < C`
/// of non-identity maps.
#[derive(Clone, Debug)]
pub struct UnionUnder {
    pub base: Arc<FinCategory>,
    pub members: Vec<ObjId>,
    pub leq: Arc<FinCategory>,
    pub lt: Arc<FinCategory>,
    /// `(u, α : u → i)` per object of `U ≤ C`.
    pub leq_objects: Vec<(ObjId, MorId)>,
    /// `(u, α)` per object of `U < C`; `α` is never an identity.
    pub lt_objects: Vec<(ObjId, MorId)>,
    /// Projections onto the target of `α`.
    pub leq_projection: Functor,
    pub lt_projection: Functor,
    pub inclusion: Functor,
    /// Object ranges of `U < C` belonging to each member.
    pub lt_blocks: Vec<Range<ObjId>>,
    pub leq_blocks: Vec<Range<ObjId>>,
    leq_index: HashMap<(ObjId, MorId), ObjId>,
    lt_index: HashMap<(ObjId, MorId), ObjId>,
    /// The C-morphism `κ` underlying each morphism of `U ≤ C`.
    pub leq_kappa: Vec<MorId>,
}

impl UnionUnder {
    pub fn leq_object(&self, u: ObjId, alpha: MorId) -> Option<ObjId> {
        self.leq_index.get(&(u, alpha)).copied()
    }

    pub fn lt_object(&self, u: ObjId, alpha: MorId) -> Option<ObjId> {
        self.lt_index.get(&(u, alpha)).copied()
    }

    /// The object `(u, id_u)` of `U ≤ C`.
    pub fn root(&self, block: usize) -> ObjId {
        let u = self.members[block];
        self.leq_index[&(u, self.base.identity(u))]
    }
}

pub(crate) fn build_union_under(c: &Arc<FinCategory>, members: &[ObjId]) -> UnionUnder {
    let mut leq_objects = Vec::new();
    let mut leq_blocks = Vec::new();
    for &u in members {
        let start = leq_objects.len();
        for &alpha in c.out_of(u) {
            leq_objects.push((u, alpha));
        }
        leq_blocks.push(start..leq_objects.len());
    }
    let leq_index: HashMap<_, _> = leq_objects.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let names: Vec<String> = leq_objects
        .iter()
        .map(|&(u, a)| tuple_id(&[c.object_id(u), c.morphism_id(a)]))
        .collect();
    let mut records = Vec::new();
    let mut kappa = Vec::new();
    let mut index = HashMap::new();
    for (s, &(u, alpha)) in leq_objects.iter().enumerate() {
        for &k in c.out_of(c.tgt(alpha)) {
            let t = leq_index[&(u, c.compose(k, alpha))];
            index.insert((k, s), records.len());
            records.push(MorphismRecord {
                id: format!("{}:{}", c.morphism_id(k), names[s]),
                src: s,
                tgt: t,
            });
            kappa.push(k);
        }
    }
    let identity: Vec<usize> = leq_objects
        .iter()
        .enumerate()
        .map(|(s, &(_, a))| index[&(c.identity(c.tgt(a)), s)])
        .collect();
    let srcs: Vec<usize> = records.iter().map(|r| r.src).collect();
    let leq = Arc::new(FinCategory::generate(names, records, identity, |g, f| {
        index[&(c.compose(kappa[g], kappa[f]), srcs[f])]
    }));
    let leq_projection = Functor::from_maps(
        leq.clone(),
        c.clone(),
        leq_objects.iter().map(|&(_, a)| c.tgt(a)).collect(),
        kappa.clone(),
    );

    let mut keep = Vec::new();
    let mut lt_blocks = Vec::new();
    for range in &leq_blocks {
        let start = keep.len();
        keep.extend(range.clone().filter(|&o| !c.is_identity(leq_objects[o].1)));
        lt_blocks.push(start..keep.len());
    }
    let (lt, inclusion) = full_subcategory(&leq, &keep);
    let lt_objects: Vec<(ObjId, MorId)> = keep.iter().map(|&o| leq_objects[o]).collect();
    let lt_index = lt_objects.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let lt_projection = leq_projection.after(&inclusion).expect("inclusion composes");
    UnionUnder {
        base: c.clone(),
        members: members.to_vec(),
        leq,
        lt,
        leq_objects,
        lt_objects,
        leq_projection,
        lt_projection,
        inclusion,
        lt_blocks,
        leq_blocks,
        leq_index,
        lt_index,
        leq_kappa: kappa,
    }
}

/// `U ≤ C` and `U < C` for a set `U` of objects of one common degree.
pub fn union_under(c: &Arc<FinCategory>, members: &[ObjId]) -> Result<UnionUnder> {
    let deg = degree_function(c)?;
    if let Some(&first) = members.first() {
        for &u in members {
            if deg[u] != deg[first] {
                return Err(Error::MixedDegrees(
                    c.object_id(first).to_string(),
                    deg[first],
                    c.object_id(u).to_string(),
                    deg[u],
                ));
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    if !members.iter().all(|u| seen.insert(*u)) {
        return Err(Error::precondition("U lists an object twice"));
    }
    Ok(build_union_under(c, members))
}

/// Under category `i/C` with its projection to `C`.
pub fn under_category(c: &Arc<FinCategory>, i: ObjId) -> Result<(Arc<FinCategory>, Functor)> {
    if i >= c.num_objects() {
        return Err(Error::UnknownObject(format!("#{i}")));
    }
    let u = build_union_under(c, &[i]);
    Ok((u.leq, u.leq_projection))
}

/// `i < C`: the under category without the object `id_i`.
pub fn strict_under(c: &Arc<FinCategory>, i: ObjId) -> Result<(Arc<FinCategory>, Functor)> {
    if i >= c.num_objects() {
        return Err(Error::UnknownObject(format!("#{i}")));
    }
    let u = build_union_under(c, &[i]);
    Ok((u.lt, u.lt_projection))
}

/// Length of the longest chain of non-identity morphisms starting at each object.
pub fn degree_function(c: &FinCategory) -> Result<Vec<usize>> {
    if let Some(o) = c.find_nonidentity_cycle() {
        return Err(Error::NotLeftFinite(c.object_id(o).to_string()));
    }
    let n = c.num_objects();
    let mut deg: Vec<Option<usize>> = vec![None; n];
    fn visit(c: &FinCategory, o: ObjId, deg: &mut Vec<Option<usize>>) -> usize {
        if let Some(d) = deg[o] {
            return d;
        }
        let targets: Vec<ObjId> = c.proper_out_of(o).map(|m| c.tgt(m)).collect();
        let d = targets
            .into_iter()
            .map(|t| 1 + visit(c, t, deg))
            .max()
            .unwrap_or(0);
        deg[o] = Some(d);
        d
    }
    for o in 0..n {
        visit(c, o, &mut deg);
    }
    Ok(deg.into_iter().map(|d| d.unwrap_or(0)).collect())
}

/// `C_{≤n}`: the full subcategory of objects of degree at most `n`.
pub fn filtration(c: &Arc<FinCategory>, n: usize) -> Result<(Arc<FinCategory>, Functor)> {
    let deg = degree_function(c)?;
    let objs: Vec<ObjId> = c.objects().filter(|&o| deg[o] <= n).collect();
    Ok(full_subcategory(c, &objs))
}

/// The degree-`n` layer `C_n` as a list of objects.
pub fn degree_layer(c: &FinCategory, n: usize) -> Result<Vec<ObjId>> {
    let deg = degree_function(c)?;
    Ok(c.objects().filter(|&o| deg[o] == n).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{find_isomorphism, is_initial, is_terminal, validate_category};

    fn punctured(n: usize) -> Arc<FinCategory> {
        let elems: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        Arc::new(subset_poset(&elems, false))
    }

    #[test]
    fn poset_examples() {
        let c = poset_category(&["0", "1"], &[("0", "0"), ("1", "1"), ("0", "1")]).unwrap();
        assert_eq!(c.num_morphisms(), 3);
        let sq = poset_category(
            &["{1}", "{2}", "{1,2}"],
            &[("{1}", "{1,2}"), ("{2}", "{1,2}")],
        )
        .unwrap();
        assert_eq!((sq.num_objects(), sq.num_morphisms()), (3, 5));
        let err = poset_category(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert!(matches!(err, Err(Error::NotTransitive(..))));
        let err = poset_category(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert!(matches!(err, Err(Error::NotAntisymmetric(..))));
    }

    #[test]
    fn punctured_cube_counts() {
        // subset pairs S ⊆ T among nonempty subsets of a 3-set, by enumeration
        let mut pairs = 0;
        for s in 1u32..8 {
            for t in 1u32..8 {
                if s & !t == 0 {
                    pairs += 1;
                }
            }
        }
        let c = punctured(3);
        assert_eq!(c.num_objects(), 7);
        assert_eq!(c.num_morphisms(), pairs);
        assert_eq!(pairs, 19);
        assert!(validate_category(&c).is_clean());
    }

    #[test]
    fn products() {
        let one = Arc::new(ordinal(1));
        let sq = product_category(one.clone(), one.clone());
        assert_eq!((sq.category.num_objects(), sq.category.num_morphisms()), (4, 9));
        assert!(validate_category(&sq.category).is_clean());
        let unit = product_category(one.clone(), Arc::new(FinCategory::terminal()));
        assert!(find_isomorphism(&unit.category, &one, 10_000).unwrap().is_some());
        let a = Arc::new(subset_poset(&["1", "+"], false));
        let b = Arc::new(subset_poset(&["2", "+"], false));
        let p = product_category(a, b);
        assert_eq!(p.category.num_objects(), 9);
        for m in p.category.morphisms() {
            assert_eq!(p.morphism(&p.morphism_tuple(m)), m);
        }
        assert!(p.projection(0).check().is_clean());
    }

    #[test]
    fn over_and_under() {
        let one = Arc::new(ordinal(1));
        let over = over_category(&one, 1).unwrap();
        assert_eq!(over.category.num_objects(), 2);
        let top = over.object(1, one.identity(1)).unwrap();
        assert!(is_terminal(&over.category, top));

        let sq = punctured(2);
        let i = sq.object_by_id("{1}").unwrap();
        let (lt, _) = strict_under(&sq, i).unwrap();
        assert_eq!((lt.num_objects(), lt.num_morphisms()), (1, 1));

        let (under, proj) = under_category(&sq, i).unwrap();
        assert!(is_initial(&under, 0));
        assert!(proj.check().is_clean());
        let via_comma = comma_under(&Functor::identity(sq.clone()), i).unwrap();
        assert!(find_isomorphism(&under, &via_comma.category, 10_000).unwrap().is_some());
    }

    #[test]
    fn union_under_layer_one() {
        let c = punctured(3);
        let deg = degree_function(&c).unwrap();
        let layer: Vec<ObjId> = c.objects().filter(|&o| deg[o] == 2).collect();
        assert_eq!(layer.len(), 3);
        let u = union_under(&c, &layer).unwrap();
        // maps out of each singleton: identity, two 2-sets, the 3-set
        let oracle: usize = layer
            .iter()
            .map(|&s| c.objects().filter(|&t| !c.hom(s, t).is_empty()).count())
            .sum();
        assert_eq!(u.leq.num_objects(), oracle);
        assert_eq!(u.leq.num_objects(), 12);
        assert_eq!(u.lt.num_objects(), 9);
        assert!(validate_category(&u.leq).is_clean());

        let top_layer = degree_layer(&c, 1).unwrap();
        let u1 = union_under(&c, &top_layer).unwrap();
        assert_eq!((u1.leq.num_objects(), u1.lt.num_objects()), (6, 3));

        let mixed = [c.object_by_id("{1}").unwrap(), c.object_by_id("{1,2}").unwrap()];
        assert!(matches!(union_under(&c, &mixed), Err(Error::MixedDegrees(..))));
    }

    #[test]
    fn degrees_and_filtration() {
        let sq = punctured(2);
        let deg = degree_function(&sq).unwrap();
        let d = |id: &str| deg[sq.object_by_id(id).unwrap()];
        assert_eq!((d("{1}"), d("{2}"), d("{1,2}")), (1, 1, 0));
        let (f0, _) = filtration(&sq, 0).unwrap();
        assert_eq!(f0.object_ids(), &["{1,2}".to_string()]);
        assert_eq!(f0.num_morphisms(), 1);
        let (f1, incl) = filtration(&sq, 1).unwrap();
        assert_eq!(*f1, *sq);
        assert!(incl.check().is_clean());

        let cube = punctured(3);
        let layer = degree_layer(&cube, 1).unwrap();
        let ids: Vec<&str> = layer.iter().map(|&o| cube.object_id(o)).collect();
        assert_eq!(ids, ["{1,2}", "{1,3}", "{2,3}"]);
    }

    #[test]
    fn comma_examples() {
        let one = Arc::new(ordinal(1));
        let id = Functor::identity(one.clone());
        let c = comma_over(&id, 1).unwrap();
        let o = over_category(&one, 1).unwrap();
        assert_eq!(*c.category, *o.category);

        let pt = Arc::new(FinCategory::terminal());
        let sel0 = Functor::new(pt.clone(), one.clone(), vec![0], vec![one.identity(0)]).unwrap();
        let k = comma_over(&sel0, 1).unwrap();
        assert_eq!((k.category.num_objects(), k.category.num_morphisms()), (1, 1));
        let sel1 = Functor::new(pt, one.clone(), vec![1], vec![one.identity(1)]).unwrap();
        let e = comma_over(&sel1, 0).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.category.num_morphisms(), 0);
    }
}
