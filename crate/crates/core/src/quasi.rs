//! Quasi-bialgebras, their axioms, and gauge transformations.
//!
//! Conventions. The associator `Φ` enters the axioms through its inverse on
//! the left of the coassociativity constraint:
//!
//! ```text
//! (id⊗Δ)Δ(x) = Φ^{-1} (Δ⊗id)Δ(x) Φ
//! (Φ⊗1)(id⊗Δ⊗id)(Φ)(1⊗Φ) = (Δ⊗id⊗id)(Φ)(id⊗id⊗Δ)(Φ)
//! (Δ⊗id)(R)  = Φ_{231}^{-1} R_13 Φ_{132} R_23 Φ^{-1}
//! (id⊗Δ)(R)  = Φ_{312} R_13 Φ_{213}^{-1} R_12 Φ
//! ```
//!
//! where `Φ_{231} = X2⊗X3⊗X1` for `Φ = Σ X1⊗X2⊗X3`. A twist `J` acts by
//! `Δ^J = J Δ J^{-1}`, `Φ^J = (J⊗1)(Δ⊗id)(J) Φ (id⊗Δ)(J^{-1})(1⊗J^{-1})` and
//! `R^J = J_21 R J^{-1}`; every axiom above is invariant under it.

use serde::Serialize;

use crate::algebra::AlgebraRef;
use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::tensor::{word_label, AlgElem, Tensor, Tensor2, Tensor3, Tensor4};

/// Maximum number of witnesses kept in a report.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Debug)]
pub struct QuasiBialgebra {
    pub name: String,
    algebra: AlgebraRef,
    coproduct: Vec<Tensor2>,
    counit: Vec<CycNum>,
    phi: Tensor3,
    phi_inv: Tensor3,
    r: Option<Tensor2>,
}

impl QuasiBialgebra {
    /// Validated constructor: shapes, multiplicativity of Δ and ε, and
    /// invertibility of Φ (whose inverse is computed here).
    pub fn new(
        name: impl Into<String>,
        algebra: AlgebraRef,
        coproduct: Vec<Tensor2>,
        counit: Vec<CycNum>,
        phi: Tensor3,
        r: Option<Tensor2>,
    ) -> Result<Self> {
        let d = algebra.dim();
        if coproduct.len() != d || counit.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "coproduct/counit must have {d} entries"
            )));
        }
        for t in &coproduct {
            algebra.check_indices(t)?;
        }
        algebra.check_indices(&phi)?;
        if let Some(r) = &r {
            algebra.check_indices(r)?;
        }
        let phi_inv = algebra.inverse(&phi)?;
        let q = QuasiBialgebra { name: name.into(), algebra, coproduct, counit, phi, phi_inv, r };
        let rep = check_algebra_relations(&q);
        if !rep.passed() {
            return Err(Error::NotHomomorphism(format!(
                "{} residual components, first {:?}",
                rep.residual_count,
                rep.witnesses.first()
            )));
        }
        Ok(q)
    }

    /// Assembles the data without any checks; used for deliberately broken
    /// inputs and when Φ^{-1} is already known.
    pub fn from_parts(
        name: impl Into<String>,
        algebra: AlgebraRef,
        coproduct: Vec<Tensor2>,
        counit: Vec<CycNum>,
        phi: Tensor3,
        phi_inv: Tensor3,
        r: Option<Tensor2>,
    ) -> Self {
        QuasiBialgebra { name: name.into(), algebra, coproduct, counit, phi, phi_inv, r }
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn coproduct(&self) -> &[Tensor2] {
        &self.coproduct
    }

    pub fn counit(&self) -> &[CycNum] {
        &self.counit
    }

    pub fn phi(&self) -> &Tensor3 {
        &self.phi
    }

    pub fn phi_inv(&self) -> &Tensor3 {
        &self.phi_inv
    }

    pub fn r(&self) -> Option<&Tensor2> {
        self.r.as_ref()
    }

    pub fn with_r(mut self, r: Option<Tensor2>) -> Self {
        self.r = r;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces Φ (and Φ^{-1}) without validation.
    pub fn with_phi(mut self, phi: Tensor3, phi_inv: Tensor3) -> Self {
        self.phi = phi;
        self.phi_inv = phi_inv;
        self
    }

    pub fn delta(&self, x: &AlgElem) -> Tensor2 {
        x.expand_leg(0, &self.coproduct)
    }

    pub fn delta_op(&self, x: &AlgElem) -> Tensor2 {
        self.delta(x).flip()
    }

    pub fn eps(&self, x: &AlgElem) -> CycNum {
        x.terms().iter().map(|([i], c)| c * &self.counit[*i]).sum()
    }

    /// Applies Δ on leg `pos`; `M` must be `N + 1`.
    pub fn delta_leg<const N: usize, const M: usize>(&self, t: &Tensor<N>, pos: usize) -> Tensor<M> {
        t.expand_leg(pos, &self.coproduct)
    }

    /// Applies ε on leg `pos`; `M` must be `N - 1`.
    pub fn eps_leg<const N: usize, const M: usize>(&self, t: &Tensor<N>, pos: usize) -> Tensor<M> {
        t.contract_leg(pos, &self.counit)
    }

    pub fn mul<const N: usize>(&self, factors: &[&Tensor<N>]) -> Tensor<N> {
        self.algebra.product(factors)
    }

    pub fn unit<const N: usize>(&self) -> Tensor<N> {
        self.algebra.unit_tensor()
    }

    /// Legs of the associator rearranged: leg `i` of the result is leg `src[i]`.
    fn phi_perm(&self, src: [usize; 3], inverse: bool) -> Tensor3 {
        if inverse {
            self.phi_inv.permute(src)
        } else {
            self.phi.permute(src)
        }
    }

    /// `R_{ij}` inside the triple tensor power.
    fn r_legs(&self, r: &Tensor2, missing: usize) -> Tensor3 {
        r.insert_leg(missing, self.algebra.unit())
    }

    pub fn labels(&self) -> &[String] {
        self.algebra.labels()
    }

    /// Labelled dump of all structure data.
    pub fn to_json(&self) -> QuasiJson {
        let labels = self.labels();
        QuasiJson {
            name: self.name.clone(),
            algebra: self.algebra.to_json(),
            coproduct: (0..labels.len()).map(|i| (labels[i].clone(), labelled(labels, &self.coproduct[i]))).collect(),
            counit: (0..labels.len())
                .filter(|i| !self.counit[*i].is_zero())
                .map(|i| (labels[i].clone(), self.counit[i].clone()))
                .collect(),
            phi: labelled(labels, &self.phi),
            r: self.r.as_ref().map(|r| labelled(labels, r)),
        }
    }
}

fn labelled<const N: usize>(labels: &[String], t: &Tensor<N>) -> Vec<(String, CycNum)> {
    t.terms()
        .iter()
        .map(|(k, c)| (k.iter().map(|i| labels[*i].as_str()).collect::<Vec<_>>().join(" ⊗ "), c.clone()))
        .collect()
}

/// Wire format of a quasi-bialgebra; tensor components are keyed by basis labels.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiJson {
    pub name: String,
    pub algebra: crate::algebra::AlgebraJson,
    pub coproduct: Vec<(String, Vec<(String, CycNum)>)>,
    pub counit: Vec<(String, CycNum)>,
    pub phi: Vec<(String, CycNum)>,
    pub r: Option<Vec<(String, CycNum)>>,
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One offending component: the input that was tested, the tensor component
/// that fails, and the residual coefficient there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub input: String,
    pub component: String,
    pub value: CycNum,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub status: Status,
    pub residual_count: usize,
    pub witnesses: Vec<Witness>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl std::fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} (residual components: {})", self.axiom, self.residual_count)?;
        for w in &self.witnesses {
            write!(f, "\n    {} @ {} = {}", w.input, w.component, w.value)?;
        }
        Ok(())
    }
}

/// Accumulates residuals of one axiom.
pub struct ReportBuilder<'a> {
    axiom: String,
    labels: &'a [String],
    count: usize,
    witnesses: Vec<Witness>,
}

impl<'a> ReportBuilder<'a> {
    pub fn new(axiom: impl Into<String>, labels: &'a [String]) -> Self {
        ReportBuilder { axiom: axiom.into(), labels, count: 0, witnesses: Vec::new() }
    }

    /// Records every nonzero component of `residual`.
    pub fn residual<const N: usize>(&mut self, input: &str, residual: &Tensor<N>) {
        for (k, c) in residual.terms() {
            self.count += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(Witness {
                    input: input.to_string(),
                    component: word_label(k, self.labels),
                    value: c.clone(),
                });
            }
        }
    }

    /// Records a scalar residual.
    pub fn scalar(&mut self, input: &str, component: &str, residual: &CycNum) {
        if residual.is_zero() {
            return;
        }
        self.count += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness {
                input: input.to_string(),
                component: component.to_string(),
                value: residual.clone(),
            });
        }
    }

    pub fn finish(self) -> AxiomReport {
        AxiomReport {
            axiom: self.axiom,
            status: if self.count == 0 { Status::Pass } else { Status::Fail },
            residual_count: self.count,
            witnesses: self.witnesses,
        }
    }
}

// ---------------------------------------------------------------------------
// Axiom checks
// ---------------------------------------------------------------------------

/// Δ and ε are unital algebra maps.
pub fn check_algebra_relations(q: &QuasiBialgebra) -> AxiomReport {
    let alg = &q.algebra;
    let labels = alg.labels();
    let mut rep = ReportBuilder::new("algebra_relations", labels);
    let d = alg.dim();
    for i in 0..d {
        for j in 0..d {
            let prod = alg.basis_product(i, j);
            let lhs = q.delta(&prod);
            let rhs = alg.mul_tensor(&q.coproduct[i], &q.coproduct[j]);
            let input = format!("Δ({}·{})", labels[i], labels[j]);
            rep.residual(&input, &(&lhs - &rhs));
            let e = q.eps(&prod) - &q.counit[i] * &q.counit[j];
            rep.scalar(&format!("ε({}·{})", labels[i], labels[j]), "1", &e);
        }
    }
    let one = alg.unit();
    rep.residual("Δ(1)", &(&q.delta(one) - &alg.unit_tensor()));
    rep.scalar("ε(1)", "1", &(q.eps(one) - CycNum::one()));
    rep.finish()
}

/// `(id⊗Δ)Δ(x) = Φ^{-1} (Δ⊗id)Δ(x) Φ` on every basis element.
pub fn check_quasi_coassociativity(q: &QuasiBialgebra) -> AxiomReport {
    let labels = q.labels();
    let mut rep = ReportBuilder::new("quasi_coassociativity", labels);
    for (i, dx) in q.coproduct.iter().enumerate() {
        let left: Tensor3 = q.delta_leg(dx, 1);
        let inner: Tensor3 = q.delta_leg(dx, 0);
        let right = q.mul(&[&q.phi_inv, &inner, &q.phi]);
        rep.residual(&labels[i], &(&left - &right));
    }
    rep.finish()
}

/// `(ε⊗id)Δ = (id⊗ε)Δ = id` and `(id⊗ε⊗id)Φ = 1⊗1`.
pub fn check_counit(q: &QuasiBialgebra) -> AxiomReport {
    let labels = q.labels();
    let mut rep = ReportBuilder::new("counit", labels);
    for (i, dx) in q.coproduct.iter().enumerate() {
        let x = AlgElem::basis([i]);
        let l: AlgElem = q.eps_leg(dx, 0);
        let r: AlgElem = q.eps_leg(dx, 1);
        rep.residual(&format!("(ε⊗id)Δ({})", labels[i]), &(&l - &x));
        rep.residual(&format!("(id⊗ε)Δ({})", labels[i]), &(&r - &x));
    }
    let mid: Tensor2 = q.eps_leg(&q.phi, 1);
    rep.residual("(id⊗ε⊗id)Φ", &(&mid - &q.unit()));
    rep.finish()
}

/// `(Φ⊗1)(id⊗Δ⊗id)(Φ)(1⊗Φ) = (Δ⊗id⊗id)(Φ)(id⊗id⊗Δ)(Φ)`.
pub fn check_pentagon(q: &QuasiBialgebra) -> AxiomReport {
    let unit = q.algebra.unit();
    let phi_1: Tensor4 = q.phi.insert_leg(3, unit);
    let one_phi: Tensor4 = q.phi.insert_leg(0, unit);
    let mid: Tensor4 = q.delta_leg(&q.phi, 1);
    let first: Tensor4 = q.delta_leg(&q.phi, 0);
    let last: Tensor4 = q.delta_leg(&q.phi, 2);
    let lhs = q.mul(&[&phi_1, &mid, &one_phi]);
    let rhs = q.mul(&[&first, &last]);
    let mut rep = ReportBuilder::new("pentagon", q.labels());
    rep.residual("Φ", &(&lhs - &rhs));
    rep.finish()
}

/// `R Δ(x) = Δ^op(x) R` on every basis element, and R invertible.
pub fn check_r_intertwiner(q: &QuasiBialgebra) -> Result<AxiomReport> {
    let r = q.r.as_ref().ok_or(Error::MissingR)?;
    let labels = q.labels();
    let mut rep = ReportBuilder::new("r_intertwiner", labels);
    for (i, dx) in q.coproduct.iter().enumerate() {
        let lhs = q.mul(&[r, dx]);
        let rhs = q.mul(&[&dx.flip(), r]);
        rep.residual(&labels[i], &(&lhs - &rhs));
    }
    if q.algebra.inverse(r).is_err() {
        rep.scalar("R", "invertibility", &CycNum::one());
    }
    Ok(rep.finish())
}

/// The two hexagon identities.
pub fn check_hexagons(q: &QuasiBialgebra) -> Result<[AxiomReport; 2]> {
    let r = q.r.as_ref().ok_or(Error::MissingR)?;
    let labels = q.labels();
    let r12 = q.r_legs(r, 2);
    let r13 = q.r_legs(r, 1);
    let r23 = q.r_legs(r, 0);

    let lhs1: Tensor3 = q.delta_leg(r, 0);
    let rhs1 = q.mul(&[
        &q.phi_perm([1, 2, 0], true),
        &r13,
        &q.phi_perm([0, 2, 1], false),
        &r23,
        &q.phi_inv,
    ]);
    let mut h1 = ReportBuilder::new("hexagon_1", labels);
    h1.residual("(Δ⊗id)(R)", &(&lhs1 - &rhs1));

    let lhs2: Tensor3 = q.delta_leg(r, 1);
    let rhs2 = q.mul(&[
        &q.phi_perm([2, 0, 1], false),
        &r13,
        &q.phi_perm([1, 0, 2], true),
        &r12,
        &q.phi,
    ]);
    let mut h2 = ReportBuilder::new("hexagon_2", labels);
    h2.residual("(id⊗Δ)(R)", &(&lhs2 - &rhs2));
    Ok([h1.finish(), h2.finish()])
}

/// Every axiom that applies: R-related checks only when R is present.
pub fn verify_all(q: &QuasiBialgebra) -> Vec<AxiomReport> {
    let mut out = vec![
        check_algebra_relations(q),
        check_quasi_coassociativity(q),
        check_counit(q),
        check_pentagon(q),
    ];
    if q.r.is_some() {
        out.push(check_r_intertwiner(q).expect("R present"));
        out.extend(check_hexagons(q).expect("R present"));
    }
    out
}

// ---------------------------------------------------------------------------
// Gauge transformations
// ---------------------------------------------------------------------------

/// Counit-normalized invertible `J ∈ H⊗H`, stored with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTwist {
    j: Tensor2,
    j_inv: Tensor2,
}

impl GaugeTwist {
    pub fn new(q: &QuasiBialgebra, j: Tensor2) -> Result<Self> {
        q.algebra.check_indices(&j)?;
        let one: AlgElem = q.unit();
        let l: AlgElem = q.eps_leg(&j, 0);
        let r: AlgElem = q.eps_leg(&j, 1);
        if l != one || r != one {
            return Err(Error::NotNormalized("(ε⊗id)(J) and (id⊗ε)(J) must equal 1".into()));
        }
        let j_inv = q.algebra.inverse(&j)?;
        Ok(GaugeTwist { j, j_inv })
    }

    /// Builds from a known pair without checks.
    pub fn from_pair(j: Tensor2, j_inv: Tensor2) -> Self {
        GaugeTwist { j, j_inv }
    }

    pub fn j(&self) -> &Tensor2 {
        &self.j
    }

    pub fn j_inv(&self) -> &Tensor2 {
        &self.j_inv
    }

    pub fn inverse(&self) -> GaugeTwist {
        GaugeTwist { j: self.j_inv.clone(), j_inv: self.j.clone() }
    }

    /// Identity twist 1⊗1.
    pub fn identity(q: &QuasiBialgebra) -> Self {
        let u: Tensor2 = q.unit();
        GaugeTwist { j: u.clone(), j_inv: u }
    }
}

/// The twisted quasi-bialgebra `Q^J`.
pub fn gauge_twist(q: &QuasiBialgebra, t: &GaugeTwist) -> QuasiBialgebra {
    let alg = &q.algebra;
    let unit = alg.unit();
    let (j, ji) = (&t.j, &t.j_inv);
    let coproduct = q.coproduct.iter().map(|dx| alg.product(&[j, dx, ji])).collect();

    let j_1: Tensor3 = j.insert_leg(2, unit);
    let one_j: Tensor3 = j.insert_leg(0, unit);
    let ji_1: Tensor3 = ji.insert_leg(2, unit);
    let one_ji: Tensor3 = ji.insert_leg(0, unit);
    let dj_left: Tensor3 = q.delta_leg(j, 0);
    let dj_right: Tensor3 = q.delta_leg(j, 1);
    let dji_left: Tensor3 = q.delta_leg(ji, 0);
    let dji_right: Tensor3 = q.delta_leg(ji, 1);
    let phi = alg.product(&[&j_1, &dj_left, &q.phi, &dji_right, &one_ji]);
    let phi_inv = alg.product(&[&one_j, &dj_right, &q.phi_inv, &dji_left, &ji_1]);
    let r = q.r.as_ref().map(|r| alg.product(&[&j.flip(), r, ji]));
    QuasiBialgebra {
        name: format!("{}^J", q.name),
        algebra: q.algebra.clone(),
        coproduct,
        counit: q.counit.clone(),
        phi,
        phi_inv,
        r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::BetaChoice;
    use crate::presets::build_cartan;

    #[test]
    fn cartan_preset_satisfies_every_axiom() {
        for beta in BetaChoice::ALL {
            let q = build_cartan(beta).quasi_bialgebra();
            for rep in verify_all(&q) {
                assert!(rep.passed(), "beta exponent {}: {rep}", beta.exponent());
            }
        }
    }

    #[test]
    fn corrupted_associator_fails_pentagon() {
        let cartan = build_cartan(BetaChoice::default());
        let mut phi = cartan.phi.clone();
        let key = [1, 1, 1];
        let c = phi.coeff(&key);
        phi = &phi - &Tensor::monomial(key, &c * &CycNum::from_int(2));
        let q = cartan.quasi_bialgebra();
        let phi_inv = q.algebra().inverse(&phi).unwrap();
        let q = q.with_phi(phi, phi_inv);
        let rep = check_pentagon(&q);
        assert!(!rep.passed());
        assert!(!rep.witnesses.is_empty());
    }

    #[test]
    fn missing_r_is_an_error() {
        let q = build_cartan(BetaChoice::default()).quasi_bialgebra().with_r(None);
        assert_eq!(check_hexagons(&q).unwrap_err(), Error::MissingR);
        assert_eq!(check_r_intertwiner(&q).unwrap_err(), Error::MissingR);
    }

    #[test]
    fn twist_must_be_normalized() {
        let q = build_cartan(BetaChoice::default()).quasi_bialgebra();
        let j: Tensor2 = q.unit::<2>().scale(&CycNum::from_int(2));
        assert!(matches!(GaugeTwist::new(&q, j), Err(Error::NotNormalized(_))));
    }
}
