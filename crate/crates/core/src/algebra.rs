//! Finite-dimensional associative algebras given by structure constants.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::linalg::{DependencyFinder, SparseMatrix};
use crate::tensor::{Accum, AlgElem, Tensor};

/// Algebra with a fixed basis `b_0..b_{d-1}` and products `b_i b_j = Σ_k c_ij^k b_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct BasedAlgebra {
    labels: Vec<String>,
    table: Vec<Vec<Vec<(usize, CycNum)>>>,
    unit: AlgElem,
}

impl std::fmt::Debug for BasedAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BasedAlgebra(dim={}, basis={:?})", self.dim(), self.labels)
    }
}

/// Coordinates relating two bases of the same algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange {
    /// Image of each new basis element in old coordinates.
    pub to_old: Vec<AlgElem>,
    /// Image of each old basis element in new coordinates.
    pub to_new: Vec<AlgElem>,
}

impl BasisChange {
    pub fn old_to_new<const N: usize>(&self, t: &Tensor<N>) -> Tensor<N> {
        convert(t, &self.to_new)
    }

    pub fn new_to_old<const N: usize>(&self, t: &Tensor<N>) -> Tensor<N> {
        convert(t, &self.to_old)
    }
}

fn convert<const N: usize>(t: &Tensor<N>, images: &[AlgElem]) -> Tensor<N> {
    let mut out = t.clone();
    for leg in 0..N {
        out = out.apply_leg(leg, images);
    }
    out
}

impl BasedAlgebra {
    /// Builds an algebra and checks associativity and the unit.
    pub fn new(labels: Vec<String>, products: Vec<Vec<AlgElem>>, unit: AlgElem) -> Result<Self> {
        let alg = Self::new_unchecked(labels, products, unit)?;
        let bad = alg.associativity_failures(1);
        if let Some((i, j, k)) = bad.first() {
            return Err(Error::NotAssociative(format!(
                "({} {}) {} != {} ({} {})",
                alg.labels[*i], alg.labels[*j], alg.labels[*k], alg.labels[*i], alg.labels[*j], alg.labels[*k]
            )));
        }
        for i in 0..alg.dim() {
            let b = AlgElem::basis([i]);
            if alg.mul(&alg.unit, &b) != b || alg.mul(&b, &alg.unit) != b {
                return Err(Error::NotAssociative(format!("unit fails on {}", alg.labels[i])));
            }
        }
        Ok(alg)
    }

    /// Builds an algebra without checking the axioms; only shapes are validated.
    pub fn new_unchecked(labels: Vec<String>, products: Vec<Vec<AlgElem>>, unit: AlgElem) -> Result<Self> {
        let d = labels.len();
        if products.len() != d || products.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch(format!("structure table must be {d}x{d}")));
        }
        let in_range = |e: &AlgElem| e.max_index().is_none_or(|m| m < d);
        if !products.iter().flatten().all(in_range) || !in_range(&unit) {
            return Err(Error::DimensionMismatch("structure constant index out of range".into()));
        }
        let table = products
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| e.terms().iter().map(|([k], c)| (*k, c.clone())).collect())
                    .collect()
            })
            .collect();
        Ok(BasedAlgebra { labels, table, unit })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &AlgElem {
        &self.unit
    }

    /// Product of two basis elements.
    pub fn basis_product(&self, i: usize, j: usize) -> AlgElem {
        Tensor::from_terms(self.table[i][j].iter().map(|(k, c)| ([*k], c.clone())))
    }

    pub fn basis_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mul(&self, x: &AlgElem, y: &AlgElem) -> AlgElem {
        self.mul_tensor(x, y)
    }

    /// Product with index validation.
    pub fn try_mul(&self, x: &AlgElem, y: &AlgElem) -> Result<AlgElem> {
        self.check_indices(x)?;
        self.check_indices(y)?;
        Ok(self.mul(x, y))
    }

    pub fn check_indices<const N: usize>(&self, t: &Tensor<N>) -> Result<()> {
        match t.max_index() {
            Some(m) if m >= self.dim() => Err(Error::DimensionMismatch(format!(
                "basis index {m} out of range for dimension {}",
                self.dim()
            ))),
            _ => Ok(()),
        }
    }

    /// Leg-wise product in the N-fold tensor power.
    pub fn mul_tensor<const N: usize>(&self, a: &Tensor<N>, b: &Tensor<N>) -> Tensor<N> {
        let mut acc = Accum::default();
        let mut key = [0usize; N];
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                if (0..N).any(|l| self.table[ka[l]][kb[l]].is_empty()) {
                    continue;
                }
                let c = ca * cb;
                self.expand(ka, kb, 0, &mut key, &c, &mut acc);
            }
        }
        acc.finish()
    }

    fn expand<const N: usize>(
        &self,
        ka: &[usize; N],
        kb: &[usize; N],
        leg: usize,
        key: &mut [usize; N],
        coef: &CycNum,
        acc: &mut Accum<N>,
    ) {
        if leg == N {
            acc.add(*key, coef.clone());
            return;
        }
        for (k, x) in &self.table[ka[leg]][kb[leg]] {
            key[leg] = *k;
            if x.is_one() {
                self.expand(ka, kb, leg + 1, key, coef, acc);
            } else {
                self.expand(ka, kb, leg + 1, key, &(coef * x), acc);
            }
        }
    }

    /// Product of several factors, left to right.
    pub fn product<const N: usize>(&self, factors: &[&Tensor<N>]) -> Tensor<N> {
        let mut it = factors.iter();
        let mut acc = match it.next() {
            Some(f) => (*f).clone(),
            None => return self.unit_tensor(),
        };
        for f in it {
            acc = self.mul_tensor(&acc, f);
        }
        acc
    }

    /// `1 ⊗ ... ⊗ 1`.
    pub fn unit_tensor<const N: usize>(&self) -> Tensor<N> {
        let mut terms: Vec<([usize; N], CycNum)> = vec![([0; N], CycNum::one())];
        for leg in 0..N {
            let mut next = Vec::new();
            for (k, c) in &terms {
                for ([u], x) in self.unit.terms() {
                    let mut key = *k;
                    key[leg] = *u;
                    next.push((key, c * x));
                }
            }
            terms = next;
        }
        Tensor::from_terms(terms)
    }

    /// Two-sided inverse in the N-fold tensor power.
    ///
    /// The powers `1, t, t^2, ...` are fed to an exact elimination until the
    /// first linear relation appears; that relation is the minimal polynomial
    /// of `t`, and `t` is invertible exactly when its constant term is nonzero.
    pub fn inverse<const N: usize>(&self, t: &Tensor<N>) -> Result<Tensor<N>> {
        self.check_indices(t)?;
        let d = self.dim();
        let flat = |k: &[usize; N]| k.iter().fold(0usize, |acc, &i| acc * d + i);
        let mut finder = DependencyFinder::new();
        let mut powers: Vec<Tensor<N>> = Vec::new();
        let mut p = self.unit_tensor::<N>();
        let limit = d.pow(N as u32) + 1;
        for _ in 0..=limit {
            let v: Vec<(usize, CycNum)> = p.terms().iter().map(|(k, c)| (flat(k), c.clone())).collect();
            powers.push(p.clone());
            if let Some(rel) = finder.push(&v) {
                if rel[0].is_zero() {
                    return Err(Error::NotInvertible("minimal polynomial has zero constant term".into()));
                }
                let scale = -rel[0].inv()?;
                let mut inv = Tensor::zero();
                for (j, a) in rel.iter().enumerate().skip(1) {
                    if !a.is_zero() {
                        inv = &inv + &powers[j - 1].scale(&(a * &scale));
                    }
                }
                debug_assert_eq!(self.mul_tensor(t, &inv), self.unit_tensor());
                return Ok(inv);
            }
            p = self.mul_tensor(&p, t);
        }
        Err(Error::NotInvertible("no polynomial relation found".into()))
    }

    /// Triples `(i, j, k)` with `(b_i b_j) b_k != b_i (b_j b_k)`, up to `limit`.
    pub fn associativity_failures(&self, limit: usize) -> Vec<(usize, usize, usize)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j);
                for k in 0..d {
                    let bk = AlgElem::basis([k]);
                    let left = self.mul(&ij, &bk);
                    let right = self.mul(&AlgElem::basis([i]), &self.basis_product(j, k));
                    if left != right {
                        out.push((i, j, k));
                        if out.len() >= limit {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }

    /// Re-expresses the algebra in a new basis given in old coordinates.
    pub fn change_basis(&self, new_basis: Vec<AlgElem>, labels: Vec<String>) -> Result<(BasedAlgebra, BasisChange)> {
        let d = self.dim();
        if new_basis.len() != d || labels.len() != d {
            return Err(Error::DimensionMismatch(format!("new basis must have {d} elements")));
        }
        let p = SparseMatrix {
            rows: d,
            columns: new_basis
                .iter()
                .map(|e| e.terms().iter().map(|([k], c)| (*k, c.clone())).collect())
                .collect(),
        };
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::NotInvertible("new basis is linearly dependent".into()))?;
        let to_elem = |col: &[(usize, CycNum)]| Tensor::from_terms(col.iter().map(|(k, c)| ([*k], c.clone())));
        let to_new: Vec<AlgElem> = pinv.columns.iter().map(|c| to_elem(c)).collect();
        let change = BasisChange { to_old: new_basis.clone(), to_new };
        let products = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| change.old_to_new(&self.mul(&new_basis[i], &new_basis[j])))
                    .collect()
            })
            .collect();
        let unit = change.old_to_new(&self.unit);
        let alg = BasedAlgebra::new_unchecked(labels, products, unit)?;
        Ok((alg, change))
    }

    pub fn to_json(&self) -> AlgebraJson {
        let mut structure_constants = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !self.table[i][j].is_empty() {
                    let m: BTreeMap<String, CycNum> =
                        self.table[i][j].iter().map(|(k, c)| (k.to_string(), c.clone())).collect();
                    structure_constants.push((i, j, m));
                }
            }
        }
        AlgebraJson {
            dim: self.dim(),
            basis_labels: self.labels.clone(),
            structure_constants,
            unit: self.unit.terms().iter().map(|([k], c)| (k.to_string(), c.clone())).collect(),
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        if j.basis_labels.len() != j.dim {
            return Err(Error::DimensionMismatch("basis_labels length differs from dim".into()));
        }
        let parse_idx = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse(format!("bad basis index '{s}'")))
        };
        let mut products = vec![vec![AlgElem::zero(); j.dim]; j.dim];
        for (a, b, m) in &j.structure_constants {
            if *a >= j.dim || *b >= j.dim {
                return Err(Error::DimensionMismatch("structure constant index out of range".into()));
            }
            let terms: Result<Vec<_>> = m.iter().map(|(k, c)| Ok(([parse_idx(k)?], c.clone()))).collect();
            products[*a][*b] = Tensor::from_terms(terms?);
        }
        let unit: Result<Vec<_>> = j.unit.iter().map(|(k, c)| Ok(([parse_idx(k)?], c.clone()))).collect();
        BasedAlgebra::new(j.basis_labels.clone(), products, Tensor::from_terms(unit?))
    }
}

/// Wire format of an algebra.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraJson {
    pub dim: usize,
    pub basis_labels: Vec<String>,
    pub structure_constants: Vec<(usize, usize, BTreeMap<String, CycNum>)>,
    pub unit: BTreeMap<String, CycNum>,
}

/// Shared handle used by every structure built on an algebra.
pub type AlgebraRef = Arc<BasedAlgebra>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Tensor2;

    /// Group algebra of Z/2 in the basis {1, g}.
    fn z2() -> BasedAlgebra {
        let e = |k: usize| AlgElem::basis([k]);
        BasedAlgebra::new(
            vec!["1".into(), "g".into()],
            vec![vec![e(0), e(1)], vec![e(1), e(0)]],
            e(0),
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_associative_table() {
        let e = |k: usize| AlgElem::basis([k]);
        let bad = BasedAlgebra::new(
            vec!["1".into(), "x".into()],
            vec![vec![e(0), e(1)], vec![e(1), e(1).scale(&CycNum::from_int(2))]],
            e(0),
        );
        assert!(bad.is_ok(), "x^2 = 2x is associative");
        let bad = BasedAlgebra::new(
            vec!["a".into(), "b".into()],
            vec![vec![e(1), e(0)], vec![e(0), e(0)]],
            e(0),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn tensor_inverse_matches_group_inverse() {
        let a = z2();
        // (1 + g/2)^{-1} = (4 - 2g)/3 in C[Z/2]; in the tensor square take x ⊗ x
        let x = AlgElem::from_terms([([0], CycNum::one()), ([1], CycNum::frac(1, 2).unwrap())]);
        let xx: Tensor2 = x.outer(&x);
        let inv = a.inverse(&xx).unwrap();
        let expected = AlgElem::from_terms([
            ([0], CycNum::frac(4, 3).unwrap()),
            ([1], CycNum::frac(-2, 3).unwrap()),
        ]);
        assert_eq!(inv, expected.outer::<1, 2>(&expected));
        let zero_div = AlgElem::from_terms([([0], CycNum::one()), ([1], CycNum::one())]);
        assert!(matches!(a.inverse(&zero_div), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = z2();
        assert!(matches!(a.try_mul(&AlgElem::basis([5]), &AlgElem::basis([0])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn json_roundtrip_and_basis_change() {
        let a = z2();
        let j = serde_json::to_string(&a.to_json()).unwrap();
        let back = BasedAlgebra::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, a);
        // idempotent basis (1 ± g)/2
        let h = CycNum::frac(1, 2).unwrap();
        let p = AlgElem::from_terms([([0], h.clone()), ([1], h.clone())]);
        let m = AlgElem::from_terms([([0], h.clone()), ([1], -&h)]);
        let (b, change) = a.change_basis(vec![p, m], vec!["p".into(), "m".into()]).unwrap();
        assert_eq!(b.basis_product(0, 0), AlgElem::basis([0]));
        assert!(b.basis_product(0, 1).is_zero());
        assert_eq!(change.new_to_old(&change.old_to_new(&AlgElem::basis([1]))), AlgElem::basis([1]));
    }
}
