//! Sparse elements of N-fold tensor powers of a based vector space.
//!
//! A `Tensor<N>` is a finite linear combination of basis words
//! `b_{k0} ⊗ ... ⊗ b_{k(N-1)}`. The same type is used for algebra elements
//! (`N = 1`), for elements of `A⊗A`, `A⊗A⊗A`, and for vectors in tensor powers
//! of a module.

use std::ops::{Add, Neg, Sub};

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::cyclo::CycNum;

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Tensor<const N: usize> {
    #[serde(serialize_with = "serialize_terms")]
    terms: Vec<([usize; N], CycNum)>,
}

fn serialize_terms<S: serde::Serializer, const N: usize>(
    terms: &[([usize; N], CycNum)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(terms.len()))?;
    for (k, c) in terms {
        seq.serialize_element(&(k.to_vec(), c))?;
    }
    seq.end()
}

pub type AlgElem = Tensor<1>;
pub type Tensor2 = Tensor<2>;
pub type Tensor3 = Tensor<3>;
pub type Tensor4 = Tensor<4>;

/// Hash accumulator used by every product and leg map.
pub struct Accum<const N: usize> {
    map: FxHashMap<[usize; N], CycNum>,
}

impl<const N: usize> Default for Accum<N> {
    fn default() -> Self {
        Accum { map: FxHashMap::default() }
    }
}

impl<const N: usize> Accum<N> {
    pub fn add(&mut self, key: [usize; N], c: CycNum) {
        if c.is_zero() {
            return;
        }
        match self.map.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn finish(self) -> Tensor<N> {
        let mut terms: Vec<_> = self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|a| a.0);
        Tensor { terms }
    }
}

impl<const N: usize> Tensor<N> {
    pub fn zero() -> Self {
        Tensor { terms: Vec::new() }
    }

    pub fn basis(key: [usize; N]) -> Self {
        Tensor { terms: vec![(key, CycNum::one())] }
    }

    pub fn monomial(key: [usize; N], c: CycNum) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Tensor { terms: vec![(key, c)] }
        }
    }

    pub fn from_terms<I: IntoIterator<Item = ([usize; N], CycNum)>>(it: I) -> Self {
        let mut acc = Accum::default();
        for (k, c) in it {
            acc.add(k, c);
        }
        acc.finish()
    }

    pub fn terms(&self) -> &[([usize; N], CycNum)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[usize; N]) -> CycNum {
        match self.terms.binary_search_by(|t| t.0.cmp(key)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => CycNum::zero(),
        }
    }

    /// Largest basis index used in any leg.
    pub fn max_index(&self) -> Option<usize> {
        self.terms.iter().flat_map(|(k, _)| k.iter().copied()).max()
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Tensor { terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect() }
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Tensor { terms: out }
    }

    /// Generic leg transformation: each basis word is replaced by a linear
    /// combination of words in the M-fold power.
    pub fn map_words<const M: usize>(
        &self,
        mut f: impl FnMut(&[usize; N], &mut dyn FnMut([usize; M], CycNum)),
    ) -> Tensor<M> {
        let mut acc = Accum::default();
        for (k, c) in &self.terms {
            f(k, &mut |key, x| acc.add(key, c * &x));
        }
        acc.finish()
    }

    /// Reorders legs: leg `i` of the result is leg `src[i]` of `self`.
    pub fn permute(&self, src: [usize; N]) -> Self {
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .map(|(k, c)| (std::array::from_fn(|i| k[src[i]]), c.clone()))
            .collect();
        terms.sort_unstable_by_key(|a| a.0);
        Tensor { terms }
    }

    /// Replaces leg `pos` by its image under a linear map given on basis elements.
    pub fn apply_leg(&self, pos: usize, images: &[AlgElem]) -> Self {
        self.map_words(|k, emit| {
            for ([j], c) in &images[k[pos]].terms {
                let mut key = *k;
                key[pos] = *j;
                emit(key, c.clone());
            }
        })
    }

    /// Applies a coproduct-like map `b -> Σ x ⊗ y` on leg `pos`; `M` must be `N + 1`.
    pub fn expand_leg<const M: usize>(&self, pos: usize, images: &[Tensor2]) -> Tensor<M> {
        assert_eq!(M, N + 1, "expand_leg changes the rank by one");
        self.map_words(|k, emit| {
            for ([x, y], c) in &images[k[pos]].terms {
                let key: [usize; M] = std::array::from_fn(|i| match i.cmp(&pos) {
                    std::cmp::Ordering::Less => k[i],
                    std::cmp::Ordering::Equal => *x,
                    std::cmp::Ordering::Greater if i == pos + 1 => *y,
                    std::cmp::Ordering::Greater => k[i - 1],
                });
                emit(key, c.clone());
            }
        })
    }

    /// Applies a functional on leg `pos`; `M` must be `N - 1`.
    pub fn contract_leg<const M: usize>(&self, pos: usize, values: &[CycNum]) -> Tensor<M> {
        assert_eq!(M + 1, N, "contract_leg lowers the rank by one");
        self.map_words(|k, emit| {
            let v = &values[k[pos]];
            if !v.is_zero() {
                let key: [usize; M] = std::array::from_fn(|i| if i < pos { k[i] } else { k[i + 1] });
                emit(key, v.clone());
            }
        })
    }

    /// Inserts the element `e` as a new leg at position `pos`; `M` must be `N + 1`.
    pub fn insert_leg<const M: usize>(&self, pos: usize, e: &AlgElem) -> Tensor<M> {
        assert_eq!(M, N + 1, "insert_leg raises the rank by one");
        self.map_words(|k, emit| {
            for ([x], c) in &e.terms {
                let key: [usize; M] = std::array::from_fn(|i| match i.cmp(&pos) {
                    std::cmp::Ordering::Less => k[i],
                    std::cmp::Ordering::Equal => *x,
                    std::cmp::Ordering::Greater => k[i - 1],
                });
                emit(key, c.clone());
            }
        })
    }

    /// Tensor product `self ⊗ other`; `K` must be `N + M`.
    pub fn outer<const M: usize, const K: usize>(&self, other: &Tensor<M>) -> Tensor<K> {
        assert_eq!(K, N + M, "outer product rank");
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let key: [usize; K] = std::array::from_fn(|i| if i < N { a[i] } else { b[i - N] });
                terms.push((key, x * y));
            }
        }
        terms.sort_unstable_by_key(|a| a.0);
        Tensor { terms }
    }

    /// Human-readable form using per-leg basis labels.
    pub fn format_with(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(k, c)| format!("({c}) {}", word_label(k, labels)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Label of a basis word such as `E⊗F⊗1`.
pub fn word_label(key: &[usize], labels: &[String]) -> String {
    key.iter()
        .map(|&i| labels.get(i).cloned().unwrap_or_else(|| format!("#{i}")))
        .collect::<Vec<_>>()
        .join("⊗")
}

impl Tensor<2> {
    /// Leg swap `x ⊗ y -> y ⊗ x`.
    pub fn flip(&self) -> Self {
        self.permute([1, 0])
    }
}

impl<const N: usize> Add for &Tensor<N> {
    type Output = Tensor<N>;
    fn add(self, rhs: &Tensor<N>) -> Tensor<N> {
        self.merge(rhs, false)
    }
}

impl<const N: usize> Sub for &Tensor<N> {
    type Output = Tensor<N>;
    fn sub(self, rhs: &Tensor<N>) -> Tensor<N> {
        self.merge(rhs, true)
    }
}

impl<const N: usize> Add for Tensor<N> {
    type Output = Tensor<N>;
    fn add(self, rhs: Tensor<N>) -> Tensor<N> {
        self.merge(&rhs, false)
    }
}

impl<const N: usize> Sub for Tensor<N> {
    type Output = Tensor<N>;
    fn sub(self, rhs: Tensor<N>) -> Tensor<N> {
        self.merge(&rhs, true)
    }
}

impl<const N: usize> Neg for &Tensor<N> {
    type Output = Tensor<N>;
    fn neg(self) -> Tensor<N> {
        Tensor { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl<const N: usize> std::fmt::Debug for Tensor<N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("({c}){k:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}
