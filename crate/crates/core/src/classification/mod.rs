//! Parameter families of coproducts on U and their normal forms.
//!
//! The lower (F) and upper (E) sides are each described by four nonzero
//! numbers `c = (1, c1, c2, c3)` and a fourth root of unity `ε`, giving
//!
//! ```text
//! c_L^{ab} = c_{a+b} / c_a
//! c_R^{ab} = ε^a (c_{a+b} / c_b) (-1)^{a(a-1)/2}
//! Δ(F) = Σ_{a,b} (c_L^{ab} F⊗1 + c_R^{ab} 1⊗F)(e_a⊗e_b)
//! ```
//!
//! and the same for E with the barred parameters.

pub mod coalgebra_family;
pub mod coproduct;
pub mod rmatrix;

use serde::Serialize;

use crate::cyclo::{BetaChoice, CycNum};
use crate::error::{Condition, Error, Result};
use crate::linalg::SparseMatrix;
use crate::presets::{cartan_phi, commutator_scalar, group_coproduct, idx, UqPreset};
use crate::quasi::{QuasiBialgebra, ReportBuilder};
use crate::tensor::{AlgElem, Tensor, Tensor2};
use crate::AxiomReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Generated by F acting on top vectors.
    Lower,
    /// Generated by E.
    Upper,
}

/// `(-1)^{a(a-1)/2}` for `a` taken mod 4.
pub fn quarter_sign(a: usize) -> CycNum {
    match a % 4 {
        0 | 1 => CycNum::one(),
        _ => CycNum::from_int(-1),
    }
}

/// Parameters of one side of the coproduct.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoalgebraParams {
    pub c: [CycNum; 4],
    pub eps: CycNum,
}

impl CoalgebraParams {
    pub fn new(c: [CycNum; 4], eps: CycNum) -> Result<Self> {
        if !c[0].is_one() {
            return Err(Error::ConditionViolated {
                condition: Condition::Counit,
                detail: format!("c_0 must be 1, got {}", c[0]),
            });
        }
        for (a, x) in c.iter().enumerate() {
            if x.is_zero() {
                return Err(Error::ZeroParameter(format!("c_{a}")));
            }
        }
        if !eps.pow(4)?.is_one() {
            return Err(Error::ConditionViolated {
                condition: Condition::Coassociativity,
                detail: format!("eps^4 must be 1, got eps = {eps}"),
            });
        }
        Ok(CoalgebraParams { c, eps })
    }

    /// Parses `"1,c1,c2,c3"` and an expression for ε.
    pub fn parse(c: &str, eps: &str) -> Result<Self> {
        let parts: Vec<CycNum> = c.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?;
        let c: [CycNum; 4] = parts
            .try_into()
            .map_err(|v: Vec<CycNum>| Error::Parse(format!("expected 4 values for c, got {}", v.len())))?;
        CoalgebraParams::new(c, eps.parse()?)
    }

    pub fn trivial(eps: CycNum) -> Self {
        CoalgebraParams::new([CycNum::one(), CycNum::one(), CycNum::one(), CycNum::one()], eps)
            .expect("valid")
    }

    pub fn c_left(&self, a: usize, b: usize) -> CycNum {
        &self.c[(a + b) % 4] / &self.c[a % 4]
    }

    pub fn c_right(&self, a: usize, b: usize) -> CycNum {
        let e = self.eps.pow((a % 4) as i64).expect("eps nonzero");
        e * (&self.c[(a + b) % 4] / &self.c[b % 4]) * quarter_sign(a)
    }
}

/// Both sides of a coproduct ansatz on U.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoproductParams {
    pub lower: CoalgebraParams,
    pub upper: CoalgebraParams,
}

impl CoproductParams {
    /// Checks the constraints coming from `Δ(E)^2 = Δ(F)^2 = 0` and from the
    /// commutator relation `[Δ(E), Δ(F)] = Δ([E, F])`.
    pub fn validate(&self) -> Result<()> {
        let (lo, up) = (&self.lower, &self.upper);
        for (name, p) in [("eps", lo), ("eps_bar", up)] {
            if !(&p.eps * &p.eps).is_one() {
                return Err(Error::ConditionViolated {
                    condition: Condition::Nilpotency,
                    detail: format!("{name}^2 must be 1, got {name} = {}", p.eps),
                });
            }
        }
        if !(&lo.eps * &up.eps + CycNum::one()).is_zero() {
            return Err(Error::ConditionViolated {
                condition: Condition::Commutator,
                detail: format!("eps * eps_bar must be -1, got {}", &lo.eps * &up.eps),
            });
        }
        for t in 0..4 {
            let l = &lo.c[(t + 2) % 4] / &lo.c[t];
            let r = -(&up.c[(t + 2) % 4] / &up.c[t]);
            if l != r {
                return Err(Error::ConditionViolated {
                    condition: Condition::Commutator,
                    detail: format!("c_{{t+2}}/c_t = -cbar_{{t+2}}/cbar_t fails at t = {t}: {l} vs {r}"),
                });
            }
        }
        Ok(())
    }

    /// The upper side forced by the lower one and a free `cbar_1`.
    pub fn completing(lower: CoalgebraParams, cbar1: CycNum) -> Result<Self> {
        let c = &lower.c;
        let cbar = [
            CycNum::one(),
            cbar1.clone(),
            -&c[2],
            -(&cbar1 * &c[3] / &c[1]),
        ];
        let upper = CoalgebraParams::new(cbar, -&lower.eps)?;
        let p = CoproductParams { lower, upper };
        p.validate()?;
        Ok(p)
    }

    /// The invariant `d = cbar_1 c_3` of the standard form.
    pub fn d(&self) -> CycNum {
        &self.upper.c[1] * &self.lower.c[3]
    }
}

/// `Σ_{ab} (c_L^{ab} X e_a ⊗ e_b + c_R^{ab} e_a ⊗ X e_b)` in the weight basis.
pub fn side_coproduct(p: &CoalgebraParams, side: Side) -> Tensor2 {
    let x = |k: usize| match side {
        Side::Lower => idx(0, 1, k),
        Side::Upper => idx(1, 0, k),
    };
    let mut terms = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            terms.push(([x(a), idx(0, 0, b)], p.c_left(a, b)));
            terms.push(([idx(0, 0, a), x(b)], p.c_right(a, b)));
        }
    }
    Tensor::from_terms(terms)
}

/// Extends `Δ(E)`, `Δ(F)` multiplicatively to the weight basis of U.
pub fn coproduct_from_generators(delta_e: &Tensor2, delta_f: &Tensor2) -> Vec<Tensor2> {
    let u = &UqPreset::shared().weight;
    (0..16)
        .map(|i| {
            let (a, b, k) = crate::presets::decode(i);
            let mut t = group_coproduct(k, |j| idx(0, 0, j));
            if b == 1 {
                t = u.mul_tensor(delta_f, &t);
            }
            if a == 1 {
                t = u.mul_tensor(delta_e, &t);
            }
            t
        })
        .collect()
}

/// Quasi-bialgebra from a parameter tuple, without checking the parameters.
pub fn build_coproduct_unchecked(p: &CoproductParams, beta: BetaChoice) -> QuasiBialgebra {
    let u = &UqPreset::shared().weight;
    let delta_f = side_coproduct(&p.lower, Side::Lower);
    let delta_e = side_coproduct(&p.upper, Side::Upper);
    let coproduct = coproduct_from_generators(&delta_e, &delta_f);
    let counit = (0..16).map(|i| if i == idx(0, 0, 0) { CycNum::one() } else { CycNum::zero() }).collect();
    let b = beta.beta();
    let at = |k: usize| idx(0, 0, k);
    QuasiBialgebra::from_parts(
        "u_i(sl2)",
        u.clone(),
        coproduct,
        counit,
        cartan_phi(&b, false, at),
        cartan_phi(&b, true, at),
        None,
    )
}

pub fn build_coproduct(p: &CoproductParams, beta: BetaChoice) -> Result<QuasiBialgebra> {
    p.validate()?;
    Ok(build_coproduct_unchecked(p, beta))
}

/// Residuals of `Δ(E)^2`, `Δ(F)^2` and `[Δ(E), Δ(F)] - Δ(K(e_1 + e_3))`.
pub fn relation_residuals(q: &QuasiBialgebra) -> [AxiomReport; 2] {
    let labels = q.labels();
    let e = UqPreset::e();
    let f = UqPreset::f();
    let de = q.delta(&e);
    let df = q.delta(&f);
    let mut nil = ReportBuilder::new("nilpotency", labels);
    nil.residual("Δ(E)^2", &q.mul(&[&de, &de]));
    nil.residual("Δ(F)^2", &q.mul(&[&df, &df]));
    let mut comm = ReportBuilder::new("commutator", labels);
    let h = UqPreset::cartan_elem(&std::array::from_fn(commutator_scalar));
    let lhs = &q.mul(&[&de, &df]) - &q.mul(&[&df, &de]);
    comm.residual("[Δ(E),Δ(F)]", &(&lhs - &q.delta(&h)));
    [nil.finish(), comm.finish()]
}

/// `ω_ε = Σ_a (-ε)^a (-1)^{a(a-1)/2} e_a`.
pub fn omega(eps: &CycNum) -> AlgElem {
    let m = -eps;
    UqPreset::cartan_elem(&std::array::from_fn(|a| {
        m.pow(a as i64).expect("nonzero") * quarter_sign(a)
    }))
}

// ---------------------------------------------------------------------------
// Automorphisms E -> E x̄, F -> F x, K -> K
// ---------------------------------------------------------------------------

/// An algebra automorphism of U fixing the Cartan part.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    pub x: [CycNum; 4],
    pub xbar: [CycNum; 4],
    forward: Vec<AlgElem>,
    backward: Vec<AlgElem>,
}

impl Automorphism {
    /// Uses `x̄ = (1, x_3^{-1}, x_2, x_1^{-1})`.
    pub fn new(x: [CycNum; 4]) -> Result<Self> {
        for (a, v) in x.iter().enumerate() {
            if v.is_zero() {
                return Err(Error::NotAutomorphism(format!("x_{a} = 0")));
            }
        }
        let xbar = [CycNum::one(), x[3].inv()?, x[2].clone(), x[1].inv()?];
        Self::with_xbar(x, xbar)
    }

    /// Checks multiplicativity and bijectivity on the whole basis.
    pub fn with_xbar(x: [CycNum; 4], xbar: [CycNum; 4]) -> Result<Self> {
        let u = &UqPreset::shared().weight;
        let e = u.mul(&UqPreset::e(), &UqPreset::cartan_elem(&xbar));
        let f = u.mul(&UqPreset::f(), &UqPreset::cartan_elem(&x));
        let forward: Vec<AlgElem> = (0..16)
            .map(|i| {
                let (a, b, k) = crate::presets::decode(i);
                let mut t = UqPreset::idempotent(k);
                if b == 1 {
                    t = u.mul(&f, &t);
                }
                if a == 1 {
                    t = u.mul(&e, &t);
                }
                t
            })
            .collect();
        for i in 0..16 {
            for j in 0..16 {
                let lhs = apply_map(&forward, &u.basis_product(i, j));
                let rhs = u.mul(&forward[i], &forward[j]);
                if lhs != rhs {
                    return Err(Error::NotAutomorphism(format!(
                        "φ({}·{}) != φ({})φ({})",
                        u.labels()[i],
                        u.labels()[j],
                        u.labels()[i],
                        u.labels()[j]
                    )));
                }
            }
        }
        let m = SparseMatrix {
            rows: 16,
            columns: forward.iter().map(|t| t.terms().iter().map(|([k], c)| (*k, c.clone())).collect()).collect(),
        };
        let inv = m.inverse().ok_or_else(|| Error::NotAutomorphism("map is not bijective".into()))?;
        let backward = inv
            .columns
            .iter()
            .map(|col| Tensor::from_terms(col.iter().map(|(k, c)| ([*k], c.clone()))))
            .collect();
        Ok(Automorphism { x, xbar, forward, backward })
    }

    pub fn apply(&self, t: &AlgElem) -> AlgElem {
        apply_map(&self.forward, t)
    }

    pub fn apply_inverse<const N: usize>(&self, t: &Tensor<N>) -> Tensor<N> {
        let mut out = t.clone();
        for leg in 0..N {
            out = out.apply_leg(leg, &self.backward);
        }
        out
    }
}

fn apply_map(images: &[AlgElem], t: &AlgElem) -> AlgElem {
    t.apply_leg(0, images)
}

/// Transports a quasi-bialgebra along φ: `Δ' = (φ^{-1}⊗φ^{-1}) Δ φ`,
/// `Φ' = φ^{-1}⊗3(Φ)`, `R' = φ^{-1}⊗2(R)`.
pub fn apply_automorphism(q: &QuasiBialgebra, phi: &Automorphism) -> QuasiBialgebra {
    let coproduct = (0..16)
        .map(|i| phi.apply_inverse(&q.delta(&phi.apply(&AlgElem::basis([i])))))
        .collect();
    QuasiBialgebra::from_parts(
        q.name.clone(),
        q.algebra().clone(),
        coproduct,
        q.counit().to_vec(),
        phi.apply_inverse(q.phi()),
        phi.apply_inverse(q.phi_inv()),
        q.r().map(|r| phi.apply_inverse(r)),
    )
}

/// Invariants of the normal form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StandardFormParams {
    pub d: CycNum,
    pub eps: CycNum,
}

/// Outcome of normalizing a parameter tuple.
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub params: StandardFormParams,
    pub quasi: QuasiBialgebra,
    /// Parameters `x` of the automorphism used (`x = c^{-1}`).
    pub x: [CycNum; 4],
    pub note: String,
}

/// Parameters of the normal form with invariants `d` and `ε`.
pub fn standard_params(d: &CycNum, eps: &CycNum) -> Result<CoproductParams> {
    if d.is_zero() {
        return Err(Error::ZeroParameter("d".into()));
    }
    let lower = CoalgebraParams::trivial(eps.clone());
    let upper = CoalgebraParams::new([CycNum::one(), d.clone(), CycNum::from_int(-1), -d], -eps)?;
    let p = CoproductParams { lower, upper };
    p.validate()?;
    Ok(p)
}

pub fn standard_coproduct(d: &CycNum, eps: &CycNum, beta: BetaChoice) -> Result<QuasiBialgebra> {
    Ok(build_coproduct_unchecked(&standard_params(d, eps)?, beta))
}

/// Moves a valid tuple to the normal form `c' = (1, 1, 1, 1)` by the
/// automorphism with `x = c^{-1}`, and checks the resulting shape.
pub fn standard_form(p: &CoproductParams, beta: BetaChoice) -> Result<StandardForm> {
    let q = build_coproduct(p, beta)?;
    let x: [CycNum; 4] = std::array::from_fn(|a| p.lower.c[a].inv().expect("nonzero"));
    let phi = Automorphism::new(x.clone())?;
    let moved = apply_automorphism(&q, &phi);
    let params = StandardFormParams { d: p.d(), eps: p.lower.eps.clone() };
    let expected = standard_coproduct(&params.d, &params.eps, beta)?;
    if moved.coproduct() != expected.coproduct() {
        return Err(Error::ConditionViolated {
            condition: Condition::Coassociativity,
            detail: "transported coproduct differs from the normal form".into(),
        });
    }
    Ok(StandardForm {
        params,
        quasi: moved,
        x,
        note: "normalizing automorphism uses x_a = c_a^{-1}; with x_a = c_a the lower parameters become c_a^2".into(),
    })
}

/// The displayed R-matrix of the normal form with `ε = 1`:
/// `R = Σ (R^{ab} + R_{F,E}^{ab} F⊗E)(e_a⊗e_b)` with `Y = d i`.
pub fn braiding_ansatz(d: &CycNum, beta: BetaChoice) -> Tensor2 {
    let b = beta.beta();
    let i = CycNum::i();
    let two = CycNum::from_int(2);
    let y = d * &i;
    let ib = &i * &b;
    let rfe = [
        [y.clone(), -&i, y.clone(), -&i],
        [y.clone(), -&ib, y.clone(), -&ib],
        [y.clone(), i.clone(), -&y, -&i],
        [y.clone(), ib.clone(), -&y, -&ib],
    ];
    let mut terms = Vec::new();
    for a in 0..4 {
        for bb in 0..4 {
            terms.push(([idx(0, 0, a), idx(0, 0, bb)], crate::presets::r_coeff(a, bb, &b)));
            terms.push(([idx(0, 1, a), idx(1, 0, bb)], &two * &rfe[a][bb]));
        }
    }
    Tensor::from_terms(terms)
}

/// The quasi-triangular quasi-bialgebra of the normal form (d, ε = 1) with
/// the displayed R-matrix attached.
pub fn braided_standard(d: &CycNum, eps: &CycNum, beta: BetaChoice) -> Result<QuasiBialgebra> {
    let q = standard_coproduct(d, eps, beta)?;
    Ok(q.with_r(Some(braiding_ansatz(d, beta)))
        .with_name(format!("standard(d={d}, eps={eps}, beta=zeta^{})", beta.exponent())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasi::verify_all;

    fn c(s: &str) -> CycNum {
        s.parse().unwrap()
    }

    #[test]
    fn braided_standard_satisfies_every_axiom() {
        let q = braided_standard(&c("i"), &c("1"), BetaChoice::default()).unwrap();
        for rep in verify_all(&q) {
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn braided_standard_coproduct_of_e() {
        let q = standard_coproduct(&c("i"), &c("1"), BetaChoice::default()).unwrap();
        let u = &UqPreset::shared().weight;
        let k = UqPreset::k();
        let e = UqPreset::e();
        let ek: Tensor2 = e.outer(&k);
        let wk = u.mul(&omega(&c("1")), &k);
        let expected = &ek + &wk.outer::<1, 2>(&e);
        assert_eq!(q.delta(&e), expected);
        let f = UqPreset::f();
        let one = u.unit().clone();
        let expected_f = &f.outer::<1, 2>(&one) + &omega(&c("-1")).outer::<1, 2>(&f);
        assert_eq!(q.delta(&f), expected_f);
    }

    #[test]
    fn omega_matches_closed_form() {
        // ω_ε = ((e0 + e2) + iε(e1 + e3)) K
        let u = &UqPreset::shared().weight;
        for eps in [c("1"), c("-1")] {
            let ie = &CycNum::i() * &eps;
            let s = UqPreset::cartan_elem(&[CycNum::one(), ie.clone(), CycNum::one(), ie]);
            assert_eq!(omega(&eps), u.mul(&s, &UqPreset::k()));
        }
    }

    #[test]
    fn eps_i_violates_nilpotency() {
        let lower = CoalgebraParams::trivial(c("i"));
        let upper = CoalgebraParams::trivial(c("i"));
        let err = CoproductParams { lower, upper }.validate().unwrap_err();
        assert!(matches!(err, Error::ConditionViolated { condition: Condition::Nilpotency, .. }));
    }
}
