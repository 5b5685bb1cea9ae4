use std::sync::Arc;

use super::{Simplex, SimplicialSet};
use crate::error::{Error, Result};
use crate::validation::{ValidationReport, Violation};

/// A map of simplicial sets, given by the image of each nondegenerate simplex.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    images: Vec<Vec<Simplex>>,
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
            && (Arc::ptr_eq(&self.source, &other.source) || self.source == other.source)
            && (Arc::ptr_eq(&self.target, &other.target) || self.target == other.target)
    }
}

impl Eq for SimplicialMap {}

impl SimplicialMap {
    /// Checks that images have the right dimensions; face compatibility is
    /// checked by [`SimplicialMap::check`].
    pub fn new(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, images: Vec<Vec<Simplex>>) -> Result<Self> {
        let top = source.dim().map_or(0, |d| d + 1);
        if images.len() < top {
            return Err(Error::Malformed("simplicial map misses a dimension".into()));
        }
        for (n, imgs) in images.iter().enumerate() {
            if imgs.len() != source.count(n) {
                return Err(Error::Malformed(format!("simplicial map has wrong image count in dimension {n}")));
            }
            for s in imgs {
                if s.dim() != n || s.index >= target.count(s.base_dim) {
                    return Err(Error::Malformed(format!("bad image in dimension {n}")));
                }
            }
        }
        Ok(SimplicialMap { source, target, images })
    }

    pub(crate) fn from_images(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, images: Vec<Vec<Simplex>>) -> Self {
        SimplicialMap { source, target, images }
    }

    pub fn identity(k: Arc<SimplicialSet>) -> Self {
        let images = (0..k.dim().map_or(0, |d| d + 1))
            .map(|n| (0..k.count(n)).map(|i| Simplex::nondegenerate(n, i)).collect())
            .collect();
        SimplicialMap {
            source: k.clone(),
            target: k,
            images,
        }
    }

    /// The unique map to the point.
    pub fn to_point(k: Arc<SimplicialSet>, point: Arc<SimplicialSet>) -> Self {
        let images = (0..k.dim().map_or(0, |d| d + 1))
            .map(|n| {
                (0..k.count(n))
                    .map(|_| Simplex {
                        base_dim: 0,
                        index: 0,
                        degeneracy: vec![0; n + 1],
                    })
                    .collect()
            })
            .collect();
        SimplicialMap {
            source: k,
            target: point,
            images,
        }
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn images(&self) -> &[Vec<Simplex>] {
        &self.images
    }

    pub fn image(&self, n: usize, k: usize) -> &Simplex {
        &self.images[n][k]
    }

    /// Image of an arbitrary simplex: `f(x ∘ σ) = f(x) ∘ σ`.
    pub fn apply(&self, s: &Simplex) -> Simplex {
        self.target.act(&self.images[s.base_dim][s.index], &s.degeneracy)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SimplicialMap) -> SimplicialMap {
        let images = first
            .images
            .iter()
            .map(|imgs| imgs.iter().map(|s| self.apply(s)).collect())
            .collect();
        SimplicialMap {
            source: first.source.clone(),
            target: self.target.clone(),
            images,
        }
    }

    /// Commutation with every face operator.
    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::new("simplicial map");
        for n in 1..self.images.len() {
            for k in 0..self.source.count(n) {
                let x = Simplex::nondegenerate(n, k);
                let fx = &self.images[n][k];
                for i in 0..=n {
                    let lhs = self.apply(&self.source.face(&x, i));
                    if lhs != self.target.face(fx, i) {
                        report.push(Violation::MapFace {
                            simplex: self.source.label(n, k).to_string(),
                            face: i,
                        });
                    }
                }
            }
        }
        report
    }

    /// Bijective on nondegenerate simplices in every dimension, and simplicial.
    pub fn is_isomorphism(&self) -> bool {
        let top = self.source.dim().map_or(0, |d| d + 1).max(self.target.dim().map_or(0, |d| d + 1));
        for n in 0..top {
            if self.source.count(n) != self.target.count(n) {
                return false;
            }
            let mut seen = vec![false; self.target.count(n)];
            for s in self.images.get(n).map_or(&[][..], Vec::as_slice) {
                if !s.is_nondegenerate() || std::mem::replace(&mut seen[s.index], true) {
                    return false;
                }
            }
        }
        self.check().is_clean()
    }

    pub fn inverse(&self) -> Option<SimplicialMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut images: Vec<Vec<Simplex>> = (0..self.images.len())
            .map(|n| vec![Simplex::nondegenerate(n, 0); self.target.count(n)])
            .collect();
        for (n, imgs) in self.images.iter().enumerate() {
            for (k, s) in imgs.iter().enumerate() {
                images[n][s.index] = Simplex::nondegenerate(n, k);
            }
        }
        Some(SimplicialMap {
            source: self.target.clone(),
            target: self.source.clone(),
            images,
        })
    }
}
