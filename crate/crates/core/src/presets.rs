//! The restricted quantum group u_i(sl2) and its Cartan part C = C[Z/4].
//!
//! `U` is generated by E, F, K with KE = -EK, KF = -FK, E^2 = F^2 = 0,
//! K^4 = 1 and [E, F] = (K - K^{-1})/2. It is built in the PBW basis
//! E^a F^b K^c (index 8a + 4b + c) and re-expressed in the weight basis
//! E^a F^b e_k (same index layout), where e_k = 1/4 Σ_c i^{-kc} K^c are the
//! idempotents of the Cartan part. Structures on U are stored in the weight
//! basis, where products of Cartan elements are diagonal.

use std::sync::{Arc, OnceLock};

use crate::algebra::{AlgebraRef, BasedAlgebra, BasisChange};
use crate::cyclo::{BetaChoice, CycNum};
use crate::error::Result;
use crate::quasi::QuasiBialgebra;
use crate::tensor::{AlgElem, Tensor, Tensor2, Tensor3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    E,
    F,
    K,
    KInv,
}

/// Index of E^a F^b K^c (PBW basis) or E^a F^b e_c (weight basis).
pub const fn idx(a: usize, b: usize, c: usize) -> usize {
    8 * a + 4 * b + (c % 4)
}

/// Inverse of [`idx`].
pub const fn decode(i: usize) -> (usize, usize, usize) {
    (i / 8, (i / 4) % 2, i % 4)
}

fn half() -> CycNum {
    CycNum::frac(1, 2).expect("nonzero")
}

/// Right multiplication of a PBW-basis expression by one generator.
fn mul_generator(x: &AlgElem, g: Generator) -> AlgElem {
    let mut out = Vec::new();
    for ([i], coef) in x.terms() {
        let (a, b, c) = decode(*i);
        let sign = if c % 2 == 0 { coef.clone() } else { -coef };
        match g {
            Generator::K => out.push(([idx(a, b, c + 1)], coef.clone())),
            Generator::KInv => out.push(([idx(a, b, c + 3)], coef.clone())),
            // E^a F^b K^c F = (-1)^c E^a F^b F K^c
            Generator::F => {
                if b == 0 {
                    out.push(([idx(a, 1, c)], sign));
                }
            }
            // E^a F^b K^c E = (-1)^c E^a F^b E K^c, then FE = EF - K/2 + K^3/2
            Generator::E => match (a, b) {
                (0, 0) => out.push(([idx(1, 0, c)], sign)),
                (1, 0) => {}
                (0, 1) => {
                    out.push(([idx(1, 1, c)], sign.clone()));
                    out.push(([idx(0, 0, c + 1)], -(&sign * &half())));
                    out.push(([idx(0, 0, c + 3)], &sign * &half()));
                }
                _ => {
                    out.push(([idx(1, 0, c + 1)], -(&sign * &half())));
                    out.push(([idx(1, 0, c + 3)], &sign * &half()));
                }
            },
        }
    }
    Tensor::from_terms(out)
}

/// Normal form of a word in E, F, K, K^{-1}, in the PBW basis.
pub fn pbw_normal_form(word: &[Generator]) -> AlgElem {
    word.iter()
        .fold(AlgElem::basis([0]), |acc, g| mul_generator(&acc, *g))
}

/// Parses a word such as `"FEK^-1K"` into generators.
pub fn parse_word(s: &str) -> Result<Vec<Generator>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    while i < chars.len() {
        let g = match chars[i] {
            'E' => Generator::E,
            'F' => Generator::F,
            'K' => Generator::K,
            '1' => {
                i += 1;
                continue;
            }
            c => return Err(crate::Error::Parse(format!("unknown generator '{c}'"))),
        };
        i += 1;
        let mut power: i64 = 1;
        if chars.get(i) == Some(&'^') {
            let start = i + 1;
            let mut end = start;
            if chars.get(end) == Some(&'-') {
                end += 1;
            }
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            let text: String = chars[start..end].iter().collect();
            power = text
                .parse()
                .map_err(|_| crate::Error::Parse(format!("bad exponent in '{s}'")))?;
            i = end;
        }
        let (gen, n) = match (g, power < 0) {
            (Generator::K, true) => (Generator::KInv, -power),
            (_, true) => return Err(crate::Error::Parse("only K may have a negative power".into())),
            _ => (g, power),
        };
        out.extend(std::iter::repeat_n(gen, n as usize));
    }
    Ok(out)
}

fn pbw_label(i: usize) -> String {
    let (a, b, c) = decode(i);
    let mut s = String::new();
    if a == 1 {
        s.push('E');
    }
    if b == 1 {
        s.push('F');
    }
    match c {
        0 => {}
        1 => s.push('K'),
        _ => s.push_str(&format!("K^{c}")),
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

fn weight_label(i: usize) -> String {
    let (a, b, k) = decode(i);
    format!("{}{}e{k}", if a == 1 { "E" } else { "" }, if b == 1 { "F" } else { "" })
}

/// Builds U in the PBW basis from the defining relations.
pub fn build_u_pbw() -> BasedAlgebra {
    let word = |i: usize| {
        let (a, b, c) = decode(i);
        let mut w = vec![Generator::E; a];
        w.extend(std::iter::repeat_n(Generator::F, b));
        w.extend(std::iter::repeat_n(Generator::K, c));
        w
    };
    let products = (0..16)
        .map(|i| {
            (0..16)
                .map(|j| {
                    let mut w = word(i);
                    w.extend(word(j));
                    pbw_normal_form(&w)
                })
                .collect()
        })
        .collect();
    BasedAlgebra::new((0..16).map(pbw_label).collect(), products, AlgElem::basis([0]))
        .expect("defining relations give an associative algebra")
}

/// U in both bases.
#[derive(Debug, Clone)]
pub struct UqPreset {
    pub pbw: AlgebraRef,
    pub weight: AlgebraRef,
    /// Old basis = PBW, new basis = weight basis.
    pub change: BasisChange,
}

pub fn build_u() -> UqPreset {
    let pbw = build_u_pbw();
    let quarter = CycNum::frac(1, 4).expect("nonzero");
    let new_basis: Vec<AlgElem> = (0..16)
        .map(|i| {
            let (a, b, k) = decode(i);
            Tensor::from_terms(
                (0..4).map(|c| ([idx(a, b, c)], &quarter * &CycNum::i_pow(-((k * c) as i64)))),
            )
        })
        .collect();
    let (weight, change) = pbw
        .change_basis(new_basis, (0..16).map(weight_label).collect())
        .expect("idempotent basis is a basis");
    UqPreset { pbw: Arc::new(pbw), weight: Arc::new(weight), change }
}

impl UqPreset {
    /// Process-wide instance.
    pub fn shared() -> &'static UqPreset {
        static U: OnceLock<UqPreset> = OnceLock::new();
        U.get_or_init(build_u)
    }

    /// E in the weight basis.
    pub fn e() -> AlgElem {
        Tensor::from_terms((0..4).map(|k| ([idx(1, 0, k)], CycNum::one())))
    }

    /// F in the weight basis.
    pub fn f() -> AlgElem {
        Tensor::from_terms((0..4).map(|k| ([idx(0, 1, k)], CycNum::one())))
    }

    /// K in the weight basis.
    pub fn k() -> AlgElem {
        Tensor::from_terms((0..4).map(|k| ([idx(0, 0, k)], CycNum::i_pow(k as i64))))
    }

    /// Idempotent e_k in the weight basis.
    pub fn idempotent(k: usize) -> AlgElem {
        AlgElem::basis([idx(0, 0, k)])
    }

    /// Weight-basis element Σ_k x_k e_k.
    pub fn cartan_elem(x: &[CycNum; 4]) -> AlgElem {
        Tensor::from_terms((0..4).map(|k| ([idx(0, 0, k)], x[k].clone())))
    }

    pub fn generator(g: Generator) -> AlgElem {
        match g {
            Generator::E => Self::e(),
            Generator::F => Self::f(),
            Generator::K => Self::k(),
            Generator::KInv => Tensor::from_terms((0..4).map(|k| ([idx(0, 0, k)], CycNum::i_pow(-(k as i64))))),
        }
    }
}

/// [E, F] e_k = c_k e_k with c_k = (i^k - i^{-k})/2, i.e. c = (0, i, 0, -i).
pub fn commutator_scalar(k: usize) -> CycNum {
    (CycNum::i_pow(k as i64) - CycNum::i_pow(-(k as i64))) * half()
}

// ---------------------------------------------------------------------------
// Cartan part
// ---------------------------------------------------------------------------

/// Associator coefficient: 1 unless a and b are odd; `inverse` gives the
/// coefficient of the inverse associator.
pub fn phi_coeff(a: usize, b: usize, c: usize, beta: &CycNum, inverse: bool) -> CycNum {
    if a.is_multiple_of(2) || b.is_multiple_of(2) {
        return CycNum::one();
    }
    let b2 = beta * beta;
    let v = match c % 4 {
        0 => CycNum::one(),
        1 => -b2,
        2 => CycNum::from_int(-1),
        _ => b2,
    };
    if inverse && c % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Braiding coefficient R^{a,b} on e_a ⊗ e_b.
pub fn r_coeff(a: usize, b: usize, beta: &CycNum) -> CycNum {
    let one = CycNum::one;
    let m = || CycNum::from_int(-1);
    match (a % 4, b % 4) {
        (0, _) => one(),
        (1, 0) | (1, 2) => one(),
        (1, _) => beta.clone(),
        (2, 0) | (2, 3) => one(),
        (2, _) => m(),
        (3, 0) => one(),
        (3, 1) => -beta,
        (3, 2) => m(),
        _ => beta.clone(),
    }
}

/// Twist element Q(k) = beta^{k^2} of the ribbon-like structure.
pub fn quadratic_form(k: usize, beta: &CycNum) -> CycNum {
    beta.pow(((k % 4) * (k % 4)) as i64).expect("beta is nonzero")
}

/// The Cartan part C = C[Z/4] with its quasi-triangular data.
#[derive(Debug, Clone)]
pub struct CartanPreset {
    pub beta: BetaChoice,
    pub algebra: AlgebraRef,
    pub coproduct: Vec<Tensor2>,
    pub counit: Vec<CycNum>,
    pub antipode: Vec<AlgElem>,
    pub phi: Tensor3,
    pub phi_inv: Tensor3,
    pub r: Tensor2,
}

/// C in the idempotent basis e_0..e_3.
pub fn cartan_algebra() -> BasedAlgebra {
    let products = (0..4)
        .map(|i| (0..4).map(|j| if i == j { AlgElem::basis([i]) } else { AlgElem::zero() }).collect())
        .collect();
    let unit = Tensor::from_terms((0..4).map(|k| ([k], CycNum::one())));
    BasedAlgebra::new((0..4).map(|k| format!("e{k}")).collect(), products, unit)
        .expect("orthogonal idempotents form an algebra")
}

/// Δ(e_k) = Σ_{a+b=k} e_a ⊗ e_b, with indices placed by `at`.
pub fn group_coproduct(k: usize, at: impl Fn(usize) -> usize) -> Tensor2 {
    Tensor::from_terms((0..4).map(|a| ([at(a), at((k + 4 - a) % 4)], CycNum::one())))
}

/// Φ_C (or its inverse) with idempotent e_k placed at index `at(k)`.
pub fn cartan_phi(beta: &CycNum, inverse: bool, at: impl Fn(usize) -> usize) -> Tensor3 {
    let mut terms = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                terms.push(([at(a), at(b), at(c)], phi_coeff(a, b, c, beta, inverse)));
            }
        }
    }
    Tensor::from_terms(terms)
}

/// R_C with idempotent e_k placed at index `at(k)`.
pub fn cartan_r(beta: &CycNum, at: impl Fn(usize) -> usize) -> Tensor2 {
    Tensor::from_terms(
        (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| ([at(a), at(b)], r_coeff(a, b, beta))),
    )
}

pub fn build_cartan(beta: BetaChoice) -> CartanPreset {
    let b = beta.beta();
    let id = |k: usize| k;
    CartanPreset {
        beta,
        algebra: Arc::new(cartan_algebra()),
        coproduct: (0..4).map(|k| group_coproduct(k, id)).collect(),
        counit: (0..4).map(|k| if k == 0 { CycNum::one() } else { CycNum::zero() }).collect(),
        antipode: (0..4).map(|k| AlgElem::basis([(4 - k) % 4])).collect(),
        phi: cartan_phi(&b, false, id),
        phi_inv: cartan_phi(&b, true, id),
        r: cartan_r(&b, id),
    }
}

impl CartanPreset {
    pub fn quasi_bialgebra(&self) -> QuasiBialgebra {
        QuasiBialgebra::from_parts(
            format!("cartan(beta=zeta^{})", self.beta.exponent()),
            self.algebra.clone(),
            self.coproduct.clone(),
            self.counit.clone(),
            self.phi.clone(),
            self.phi_inv.clone(),
            Some(self.r.clone()),
        )
    }

    /// Images of e_0..e_3 in the weight basis of U.
    pub fn embedding_into_u() -> Vec<AlgElem> {
        (0..4).map(UqPreset::idempotent).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    fn pbw(a: usize, b: usize, c: usize) -> AlgElem {
        AlgElem::basis([idx(a, b, c)])
    }

    #[test]
    fn k_anticommutes_with_e_and_f() {
        assert_eq!(pbw_normal_form(&[K, E]), pbw(1, 0, 1).scale(&CycNum::from_int(-1)));
        assert_eq!(pbw_normal_form(&[K, F]), pbw(0, 1, 1).scale(&CycNum::from_int(-1)));
    }

    #[test]
    fn fe_reorders_with_three_terms() {
        let h = half();
        let expected = Tensor::from_terms([([idx(1, 1, 0)], CycNum::one()), ([idx(0, 0, 1)], -&h), ([idx(0, 0, 3)], h)]);
        let fe = pbw_normal_form(&[F, E]);
        assert_eq!(fe, expected);
        assert_eq!(fe.len(), 3);
    }

    #[test]
    fn nilpotency_and_order_of_k() {
        assert!(pbw_normal_form(&[E, E]).is_zero());
        assert!(pbw_normal_form(&[F, F]).is_zero());
        assert_eq!(pbw_normal_form(&[K, K, K, K]), pbw(0, 0, 0));
        assert_eq!(pbw_normal_form(&[K, KInv]), pbw(0, 0, 0));
        assert_eq!(pbw_normal_form(&parse_word("K^-1").unwrap()), pbw(0, 0, 3));
    }

    #[test]
    fn u_is_sixteen_dimensional_and_associative() {
        let u = build_u_pbw();
        assert_eq!(u.dim(), 16);
        assert!(u.associativity_failures(1).is_empty());
    }

    #[test]
    fn weight_basis_products() {
        let u = UqPreset::shared();
        let w = &u.weight;
        // K E = -E K
        let ke = w.mul(&UqPreset::k(), &UqPreset::e());
        let ek = w.mul(&UqPreset::e(), &UqPreset::k());
        assert_eq!(ke, ek.scale(&CycNum::from_int(-1)));
        // [E, F] e_k = c_k e_k
        for k in 0..4 {
            let ek = UqPreset::idempotent(k);
            let ef = w.product(&[&UqPreset::e(), &UqPreset::f(), &ek]);
            let fe = w.product(&[&UqPreset::f(), &UqPreset::e(), &ek]);
            assert_eq!(&ef - &fe, ek.scale(&commutator_scalar(k)));
        }
        assert_eq!(commutator_scalar(1), CycNum::i());
        // e_k E = E e_{k-2}
        let lhs = w.mul(&UqPreset::idempotent(3), &UqPreset::e());
        assert_eq!(lhs, AlgElem::basis([idx(1, 0, 1)]));
        // K = Σ i^k e_k agrees with the PBW generator
        assert_eq!(u.change.old_to_new(&pbw(0, 0, 1)), UqPreset::k());
    }

    #[test]
    fn cartan_tables() {
        let b = BetaChoice::default().beta();
        let b2 = &b * &b;
        assert_eq!(phi_coeff(1, 3, 1, &b, false), -&b2);
        assert_eq!(phi_coeff(1, 3, 1, &b, true), b2.clone());
        assert_eq!(phi_coeff(3, 3, 2, &b, false), CycNum::from_int(-1));
        assert_eq!(phi_coeff(2, 3, 1, &b, false), CycNum::one());
        // R^{ab} R^{ba} on (1,1) is beta^2
        assert_eq!(r_coeff(1, 1, &b) * r_coeff(1, 1, &b), b2);
        let q: Vec<CycNum> = (0..4).map(|k| quadratic_form(k, &b)).collect();
        assert_eq!(q, vec![CycNum::one(), b.clone(), CycNum::from_int(-1), b.clone()]);
    }
}
