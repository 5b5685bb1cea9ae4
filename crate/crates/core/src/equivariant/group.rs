use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::validation::{ValidationReport, Violation};

#[derive(Deserialize)]
struct RawGroup {
    elements: Vec<String>,
    mul: Vec<Vec<usize>>,
}

impl TryFrom<RawGroup> for FinGroup {
    type Error = Error;

    fn try_from(raw: RawGroup) -> Result<Self> {
        FinGroup::new(raw.elements, raw.mul)
    }
}

/// A finite group by its multiplication table; `mul[a][b] = ab`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct FinGroup {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    #[serde(skip_serializing)]
    identity: usize,
    #[serde(skip_serializing)]
    inverses: Vec<usize>,
}

pub type Element = usize;

pub fn validate_group(elements: &[String], mul: &[Vec<usize>]) -> ValidationReport {
    let mut r = ValidationReport::new("group");
    let n = elements.len();
    if mul.len() != n || mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
        r.push(Violation::GroupUnit {
            element: "table is not square over the elements".into(),
        });
        return r;
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                    r.push(Violation::GroupAssociativity {
                        a: elements[a].clone(),
                        b: elements[b].clone(),
                        c: elements[c].clone(),
                    });
                }
            }
        }
    }
    let unit = (0..n).find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a));
    match unit {
        None => r.push(Violation::GroupUnit {
            element: elements.first().cloned().unwrap_or_default(),
        }),
        Some(e) => {
            for a in 0..n {
                if !(0..n).any(|b| mul[a][b] == e && mul[b][a] == e) {
                    r.push(Violation::GroupInverse {
                        element: elements[a].clone(),
                    });
                }
            }
        }
    }
    r
}

impl FinGroup {
    pub fn new(elements: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let report = validate_group(&elements, &mul);
        if !report.is_clean() || elements.is_empty() {
            return Err(Error::Malformed(format!("not a group: {:?}", report.violations)));
        }
        let n = elements.len();
        let identity = (0..n).find(|&e| (0..n).all(|a| mul[e][a] == a)).expect("validated");
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| mul[a][b] == identity).expect("validated"))
            .collect();
        Ok(FinGroup {
            elements,
            mul,
            identity,
            inverses,
        })
    }

    pub fn trivial() -> Self {
        FinGroup::new(vec!["e".into()], vec![vec![0]]).expect("trivial group")
    }

    /// `ℤ/n` with elements `0, …, n−1`.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|k| k.to_string()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FinGroup::new(elements, mul).expect("cyclic group")
    }

    /// Permutations of `0..n` in lexicographic order, composed as functions:
    /// `(στ)(k) = σ(τ(k))`.
    pub fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..n {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    let free: Vec<usize> = (0..n).filter(|k| !p.contains(k)).collect();
                    free.into_iter().map(move |k| {
                        let mut q = p.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("permutation");
        let mul = perms
            .iter()
            .map(|s| perms.iter().map(|t| index(&t.iter().map(|&k| s[k]).collect::<Vec<_>>())).collect())
            .collect();
        let elements = perms
            .iter()
            .map(|p| p.iter().map(|k| (k + 1).to_string()).collect::<String>())
            .collect();
        FinGroup::new(elements, mul).expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: Element) -> Element {
        self.inverses[a]
    }

    pub fn name(&self, a: Element) -> &str {
        &self.elements[a]
    }

    pub fn element(&self, name: &str) -> Result<Element> {
        self.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order()
    }

    /// The subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Element]) -> Subgroup {
        let mut set: BTreeSet<Element> = BTreeSet::from([self.identity]);
        let mut frontier: Vec<Element> = vec![self.identity];
        while let Some(a) = frontier.pop() {
            for &g in gens {
                let b = self.mul(a, g);
                if set.insert(b) {
                    frontier.push(b);
                }
            }
        }
        Subgroup {
            members: set.into_iter().collect(),
        }
    }

    pub fn check_subgroup(&self, members: &[Element]) -> Result<Subgroup> {
        let set: BTreeSet<Element> = members.iter().copied().collect();
        if set.iter().any(|&a| a >= self.order()) {
            return Err(Error::NotSubgroup("element out of range".into()));
        }
        let closed = set.contains(&self.identity)
            && set.iter().all(|&a| set.contains(&self.inverse(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))));
        if !closed {
            let names: Vec<&str> = set.iter().map(|&a| self.name(a)).collect();
            return Err(Error::NotSubgroup(format!("{{{}}}", names.join(","))));
        }
        Ok(Subgroup {
            members: set.into_iter().collect(),
        })
    }

    /// The group structure of `h` itself, with the parent's element names.
    pub fn subgroup_group(&self, h: &Subgroup) -> FinGroup {
        let pos = |a: Element| h.members.binary_search(&a).expect("closed");
        let mul = h
            .members
            .iter()
            .map(|&a| h.members.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect();
        FinGroup::new(h.members.iter().map(|&a| self.elements[a].clone()).collect(), mul).expect("subgroup")
    }
}

/// A subgroup as a sorted list of elements of the parent group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Subgroup {
    pub members: Vec<Element>,
}

impl Subgroup {
    pub fn contains(&self, a: Element) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn names(&self, g: &FinGroup) -> Vec<String> {
        self.members.iter().map(|&a| g.name(a).to_string()).collect()
    }
}

/// All subgroups, by closure under adjoining one element at a time; ordered
/// by size and then by member list.
pub fn subgroups(g: &FinGroup) -> Vec<Subgroup> {
    let mut found: BTreeSet<Subgroup> = BTreeSet::from([g.closure(&[])]);
    let mut frontier: Vec<Subgroup> = found.iter().cloned().collect();
    while let Some(h) = frontier.pop() {
        for a in g.elements() {
            if h.contains(a) {
                continue;
            }
            let mut gens = h.members.clone();
            gens.push(a);
            let k = g.closure(&gens);
            if found.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().collect();
    out.sort_by(|a, b| a.members.len().cmp(&b.members.len()).then_with(|| a.members.cmp(&b.members)));
    out
}
