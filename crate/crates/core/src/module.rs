//! Finite-dimensional modules over based algebras, the induced modules of U,
//! and module coalgebras.
//!
//! Module vectors and their tensor powers reuse [`Tensor`], with keys indexing
//! the module basis. Coassociativity of a module coalgebra follows the
//! convention of [`crate::quasi`]:
//!
//! ```text
//! (id⊗δ)δ(c) = Φ_H^{-1} · (δ⊗id)δ(c) · Φ_G
//! ```
//!
//! with the right factor present only for bimodule coalgebras.

use serde::Serialize;

use crate::algebra::AlgebraRef;
use crate::classification::Side;
use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::presets::{build_cartan, commutator_scalar, idx, UqPreset};
use crate::quasi::{AxiomReport, GaugeTwist, QuasiBialgebra, ReportBuilder};
use crate::tensor::{AlgElem, Tensor, Tensor2};
use crate::BetaChoice;

/// A left module, optionally with a commuting right action.
#[derive(Clone, Debug)]
pub struct ModuleRep {
    pub name: String,
    algebra: AlgebraRef,
    labels: Vec<String>,
    action: Vec<SparseMatrix>,
    right: Option<(AlgebraRef, Vec<SparseMatrix>)>,
    /// Algebra elements `s(v)` with `s(v) · generator = v`, when the module is cyclic.
    section: Option<(Vec<AlgElem>, Tensor<1>)>,
}

fn apply_words<const N: usize>(mats: &[&[SparseMatrix]; N], t: &Tensor<N>, x: &Tensor<N>) -> Tensor<N> {
    let mut acc = crate::tensor::Accum::default();
    let mut cur: Vec<([usize; N], CycNum)> = Vec::new();
    let mut next = Vec::new();
    for (ka, ca) in t.terms() {
        for (kx, cx) in x.terms() {
            cur.clear();
            cur.push((*kx, ca * cx));
            for leg in 0..N {
                next.clear();
                for (key, c) in &cur {
                    for (r, m) in &mats[leg][ka[leg]].columns[key[leg]] {
                        let mut k = *key;
                        k[leg] = *r;
                        next.push((k, c * m));
                    }
                }
                std::mem::swap(&mut cur, &mut next);
            }
            for (k, c) in cur.drain(..) {
                acc.add(k, c);
            }
        }
    }
    acc.finish()
}

fn combine(mats: &[SparseMatrix], x: &AlgElem, dim: usize) -> SparseMatrix {
    let mut out = SparseMatrix::zeros(dim, dim);
    for ([i], c) in x.terms() {
        out = out.add(&mats[*i].scale(c));
    }
    out
}

impl ModuleRep {
    /// Checks that `action` is a unital algebra map.
    pub fn new(name: impl Into<String>, algebra: AlgebraRef, labels: Vec<String>, action: Vec<SparseMatrix>) -> Result<Self> {
        let name = name.into();
        let dim = labels.len();
        if action.len() != algebra.dim() || action.iter().any(|m| m.rows != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("{name}: action matrices")));
        }
        let m = ModuleRep { name, algebra, labels, action, right: None, section: None };
        if combine(&m.action, m.algebra.unit(), dim) != SparseMatrix::identity(dim) {
            return Err(Error::NotAModule(format!("{}: unit does not act as identity", m.name)));
        }
        for i in 0..m.algebra.dim() {
            for j in 0..m.algebra.dim() {
                let lhs = m.action[i].mul(&m.action[j]);
                let rhs = combine(&m.action, &m.algebra.basis_product(i, j), dim);
                if lhs != rhs {
                    let l = m.algebra.labels();
                    return Err(Error::NotAModule(format!("{}: action of {}·{}", m.name, l[i], l[j])));
                }
            }
        }
        Ok(m)
    }

    /// Adds a right action, checking that it is an antihomomorphism commuting with the left action.
    pub fn with_right(mut self, algebra: AlgebraRef, action: Vec<SparseMatrix>) -> Result<Self> {
        let dim = self.dim();
        if action.len() != algebra.dim() || action.iter().any(|m| m.rows != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("{}: right action matrices", self.name)));
        }
        if combine(&action, algebra.unit(), dim) != SparseMatrix::identity(dim) {
            return Err(Error::NotAModule(format!("{}: unit does not act as identity on the right", self.name)));
        }
        for i in 0..algebra.dim() {
            for j in 0..algebra.dim() {
                // v·(b_i b_j) = (v·b_i)·b_j
                if action[j].mul(&action[i]) != combine(&action, &algebra.basis_product(i, j), dim) {
                    return Err(Error::NotAModule(format!("{}: right action of a product", self.name)));
                }
            }
        }
        for l in &self.action {
            for r in &action {
                if l.mul(r) != r.mul(l) {
                    return Err(Error::NotAModule(format!("{}: left and right actions do not commute", self.name)));
                }
            }
        }
        self.right = Some((algebra, action));
        Ok(self)
    }

    /// Records a cyclic generator and a section of `h ↦ h·generator`.
    pub fn with_section(mut self, section: Vec<AlgElem>, generator: Tensor<1>) -> Result<Self> {
        if section.len() != self.dim() {
            return Err(Error::DimensionMismatch("section length".into()));
        }
        for (v, s) in section.iter().enumerate() {
            if self.act(s, &generator) != Tensor::basis([v]) {
                return Err(Error::NotAModule(format!("{}: section fails at {}", self.name, self.labels[v])));
            }
        }
        self.section = Some((section, generator));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn action(&self, i: usize) -> &SparseMatrix {
        &self.action[i]
    }

    pub fn right_algebra(&self) -> Option<&AlgebraRef> {
        self.right.as_ref().map(|r| &r.0)
    }

    pub fn right_action(&self, i: usize) -> Option<&SparseMatrix> {
        self.right.as_ref().map(|r| &r.1[i])
    }

    pub fn generator(&self) -> Option<&Tensor<1>> {
        self.section.as_ref().map(|s| &s.1)
    }

    pub fn section(&self) -> Option<&[AlgElem]> {
        self.section.as_ref().map(|s| s.0.as_slice())
    }

    /// Matrix of an arbitrary algebra element.
    pub fn matrix(&self, x: &AlgElem) -> SparseMatrix {
        combine(&self.action, x, self.dim())
    }

    pub fn act(&self, h: &AlgElem, v: &Tensor<1>) -> Tensor<1> {
        apply_words(&[&self.action], h, v)
    }

    /// Leg-wise left action of `t ∈ A^{⊗N}` on `x ∈ M^{⊗N}`.
    pub fn act_tensor<const N: usize>(&self, t: &Tensor<N>, x: &Tensor<N>) -> Tensor<N> {
        let legs = [self.action.as_slice(); N];
        apply_words(&legs, t, x)
    }

    /// Leg-wise right action of `t ∈ G^{⊗N}` on `x ∈ M^{⊗N}`.
    pub fn right_act_tensor<const N: usize>(&self, x: &Tensor<N>, t: &Tensor<N>) -> Result<Tensor<N>> {
        let (_, r) = self.right.as_ref().ok_or_else(|| Error::NotAModule(format!("{}: no right action", self.name)))?;
        let legs = [r.as_slice(); N];
        Ok(apply_words(&legs, t, x))
    }

    /// Pulls the left action back along an algebra map given on basis elements.
    pub fn restrict(&self, name: impl Into<String>, algebra: AlgebraRef, images: &[AlgElem]) -> Result<ModuleRep> {
        if images.len() != algebra.dim() {
            return Err(Error::DimensionMismatch("restriction images".into()));
        }
        let action = images.iter().map(|x| self.matrix(x)).collect();
        let mut m = ModuleRep::new(name, algebra, self.labels.clone(), action)?;
        m.right = self.right.clone();
        Ok(m)
    }

    /// Module over U from the matrices of E and F and the K-weight of each basis vector.
    pub fn from_generators(
        name: impl Into<String>,
        labels: Vec<String>,
        e: &SparseMatrix,
        f: &SparseMatrix,
        weights: &[usize],
    ) -> Result<ModuleRep> {
        let dim = labels.len();
        let projector = |k: usize| {
            SparseMatrix::from_entries(
                dim,
                dim,
                weights.iter().enumerate().filter(|(_, w)| **w % 4 == k).map(|(v, _)| (v, v, CycNum::one())),
            )
        };
        let action = (0..16)
            .map(|i| {
                let (a, b, k) = crate::presets::decode(i);
                let mut m = projector(k);
                if b == 1 {
                    m = f.mul(&m);
                }
                if a == 1 {
                    m = e.mul(&m);
                }
                m
            })
            .collect();
        ModuleRep::new(name, UqPreset::shared().weight.clone(), labels, action)
    }
}

/// Verma module `M_k = span{v, Fv}` with `E v = 0`, `K v = i^k v` and `EF v = c_k v`.
pub fn verma(k: usize) -> ModuleRep {
    let k = k % 4;
    let e = SparseMatrix::from_entries(2, 2, [(0, 1, commutator_scalar(k))]);
    let f = SparseMatrix::from_entries(2, 2, [(1, 0, CycNum::one())]);
    ModuleRep::from_generators(format!("M_{k}"), vec![format!("e{k}"), format!("Fe{k}")], &e, &f, &[k, k + 2])
        .expect("Verma action is a representation")
}

/// Opposite Verma module `span{v, Ev}` with `F v = 0` and `FE v = -c_k v`.
pub fn opposite_verma(k: usize) -> ModuleRep {
    let k = k % 4;
    let e = SparseMatrix::from_entries(2, 2, [(1, 0, CycNum::one())]);
    let f = SparseMatrix::from_entries(2, 2, [(0, 1, -commutator_scalar(k))]);
    ModuleRep::from_generators(format!("Mbar_{k}"), vec![format!("e{k}"), format!("Ee{k}")], &e, &f, &[k, k + 2])
        .expect("opposite Verma action is a representation")
}

/// Index of `e_k` (level 0) or `F e_k` / `E e_k` (level 1) in the induced regular module.
pub const fn induced_index(k: usize, level: usize) -> usize {
    2 * (k % 4) + level
}

/// The induced regular bimodule `⊕_k M_k` (lower) or `⊕_k M̄_k` (upper) with
/// the right C-action projecting onto summands.
pub fn induce_regular(side: Side) -> ModuleRep {
    let x = match side {
        Side::Lower => "F",
        Side::Upper => "E",
    };
    let labels = (0..8)
        .map(|v| if v % 2 == 0 { format!("e{}", v / 2) } else { format!("{x}e{}", v / 2) })
        .collect();
    let raise = |k: usize| (induced_index(k, 1), induced_index(k, 0));
    let (e, f) = match side {
        Side::Lower => (
            SparseMatrix::from_entries(8, 8, (0..4).map(|k| (raise(k).1, raise(k).0, commutator_scalar(k)))),
            SparseMatrix::from_entries(8, 8, (0..4).map(|k| (raise(k).0, raise(k).1, CycNum::one()))),
        ),
        Side::Upper => (
            SparseMatrix::from_entries(8, 8, (0..4).map(|k| (raise(k).0, raise(k).1, CycNum::one()))),
            SparseMatrix::from_entries(8, 8, (0..4).map(|k| (raise(k).1, raise(k).0, -commutator_scalar(k)))),
        ),
    };
    let weights: Vec<usize> = (0..8).map(|v| v / 2 + 2 * (v % 2)).collect();
    let name = match side {
        Side::Lower => "V(C_reg)",
        Side::Upper => "Vbar(C_reg)",
    };
    let m = ModuleRep::from_generators(name, labels, &e, &f, &weights).expect("induced module is a representation");
    let cartan = build_cartan(BetaChoice::default()).algebra;
    let right = (0..4)
        .map(|j| SparseMatrix::from_entries(8, 8, (0..2).map(|l| (induced_index(j, l), induced_index(j, l), CycNum::one()))))
        .collect();
    let level_one: fn(usize) -> usize = match side {
        Side::Lower => |k| idx(0, 1, k),
        Side::Upper => |k| idx(1, 0, k),
    };
    let section = (0..8).map(|v| AlgElem::basis([if v % 2 == 0 { idx(0, 0, v / 2) } else { level_one(v / 2) }])).collect();
    let generator = Tensor::from_terms((0..4).map(|k| ([induced_index(k, 0)], CycNum::one())));
    m.with_right(cartan, right)
        .and_then(|m| m.with_section(section, generator))
        .expect("right C-action commutes")
}

/// C as a bimodule over itself.
pub fn cartan_regular_bimodule(beta: BetaChoice) -> ModuleRep {
    let alg = build_cartan(beta).algebra;
    let mult = |k: usize| SparseMatrix::from_entries(4, 4, [(k, k, CycNum::one())]);
    let action: Vec<SparseMatrix> = (0..4).map(mult).collect();
    let labels = alg.labels().to_vec();
    ModuleRep::new("C_reg", alg.clone(), labels, action.clone())
        .and_then(|m| m.with_right(alg, action))
        .and_then(|m| {
            let section = (0..4).map(|k| AlgElem::basis([k])).collect();
            m.with_section(section, Tensor::from_terms((0..4).map(|k| ([k], CycNum::one()))))
        })
        .expect("regular bimodule")
}

/// A module together with `δ: M → M⊗M` and `ε: M → k`.
#[derive(Clone, Debug)]
pub struct ModuleCoalgebra {
    pub base: ModuleRep,
    pub delta: Vec<Tensor2>,
    pub counit: Vec<CycNum>,
}

impl ModuleCoalgebra {
    pub fn new(base: ModuleRep, delta: Vec<Tensor2>, counit: Vec<CycNum>) -> Result<Self> {
        let n = base.dim();
        if delta.len() != n || counit.len() != n || delta.iter().any(|d| d.max_index().is_some_and(|m| m >= n)) {
            return Err(Error::DimensionMismatch(format!("{}: δ/ε shapes", base.name)));
        }
        Ok(ModuleCoalgebra { base, delta, counit })
    }

    /// `δ` extended linearly.
    pub fn delta_of(&self, v: &Tensor<1>) -> Tensor2 {
        v.expand_leg(0, &self.delta)
    }

    fn eps_of(&self, v: &Tensor<1>) -> CycNum {
        v.terms().iter().map(|([i], c)| c * &self.counit[*i]).sum()
    }
}

/// Counit, linearity and quasi-coassociativity of a module (or bimodule) coalgebra.
pub fn check_module_coalgebra(mc: &ModuleCoalgebra, ambient: &QuasiBialgebra, right: Option<&QuasiBialgebra>) -> Result<Vec<AxiomReport>> {
    let m = &mc.base;
    if ambient.algebra().dim() != m.algebra().dim() {
        return Err(Error::DimensionMismatch(format!("{} is not a module over {}", m.name, ambient.name)));
    }
    if let Some(g) = right {
        if m.right_algebra().map(|a| a.dim()) != Some(g.algebra().dim()) {
            return Err(Error::DimensionMismatch(format!("{}: right action does not match {}", m.name, g.name)));
        }
    }
    let labels = m.labels();
    let n = m.dim();

    let mut cou = ReportBuilder::new("counit", labels);
    for v in 0..n {
        let d = &mc.delta[v];
        let l: Tensor<1> = d.contract_leg(0, &mc.counit);
        let r: Tensor<1> = d.contract_leg(1, &mc.counit);
        let b = Tensor::basis([v]);
        cou.residual(&format!("(ε⊗id)δ({})", labels[v]), &(&l - &b));
        cou.residual(&format!("(id⊗ε)δ({})", labels[v]), &(&r - &b));
    }

    let alabels = ambient.labels();
    let mut lin = ReportBuilder::new("left_linearity", labels);
    for h in 0..ambient.algebra().dim() {
        let dh = &ambient.coproduct()[h];
        for v in 0..n {
            let hv = m.act(&AlgElem::basis([h]), &Tensor::basis([v]));
            let input = format!("{}·{}", alabels[h], labels[v]);
            lin.residual(&format!("δ({input})"), &(&mc.delta_of(&hv) - &m.act_tensor(dh, &mc.delta[v])));
            let e = mc.eps_of(&hv) - &ambient.counit()[h] * &mc.counit[v];
            lin.scalar(&format!("ε({input})"), "", &e);
        }
    }
    let mut out = vec![cou.finish(), lin.finish()];

    if let Some(g) = right {
        let glabels = g.labels();
        let mut rl = ReportBuilder::new("right_linearity", labels);
        for x in 0..g.algebra().dim() {
            for v in 0..n {
                let vx = m.right_act_tensor(&Tensor::basis([v]), &AlgElem::basis([x]))?;
                let input = format!("{}·{}", labels[v], glabels[x]);
                let rhs = m.right_act_tensor(&mc.delta[v], &g.coproduct()[x])?;
                rl.residual(&format!("δ({input})"), &(&mc.delta_of(&vx) - &rhs));
                let e = mc.eps_of(&vx) - &mc.counit[v] * &g.counit()[x];
                rl.scalar(&format!("ε({input})"), "", &e);
            }
        }
        out.push(rl.finish());
    }

    let mut co = ReportBuilder::new("coassociativity", labels);
    for v in 0..n {
        let d = &mc.delta[v];
        let left: crate::tensor::Tensor3 = d.expand_leg(0, &mc.delta);
        let rhs: crate::tensor::Tensor3 = d.expand_leg(1, &mc.delta);
        let mut lhs = m.act_tensor(ambient.phi_inv(), &left);
        if let Some(g) = right {
            lhs = m.right_act_tensor(&lhs, g.phi())?;
        }
        co.residual(&format!("δ({})", labels[v]), &(&lhs - &rhs));
    }
    out.push(co.finish());
    Ok(out)
}

/// `δ_J = J·δ`, a module coalgebra over the twisted ambient.
pub fn twist_coalgebra(mc: &ModuleCoalgebra, t: &GaugeTwist) -> ModuleCoalgebra {
    let delta = mc.delta.iter().map(|d| mc.base.act_tensor(t.j(), d)).collect();
    ModuleCoalgebra { base: mc.base.clone(), delta, counit: mc.counit.clone() }
}

/// Lift of `δ(generator)` to `A⊗A` through the section.
pub fn lift_delta_of_generator(mc: &ModuleCoalgebra) -> Result<Tensor2> {
    let m = &mc.base;
    let (Some(section), Some(g)) = (m.section(), m.generator()) else {
        return Err(Error::NotAModule(format!("{}: no cyclic generator recorded", m.name)));
    };
    let dg = mc.delta_of(g);
    let mut acc = crate::tensor::Accum::default();
    for ([a, b], c) in dg.terms() {
        for ([x], cx) in section[*a].terms() {
            for ([y], cy) in section[*b].terms() {
                acc.add([*x, *y], c * &(cx * cy));
            }
        }
    }
    Ok(acc.finish())
}

/// Twist `J = X^{-1}` where `X` lifts `δ(1)`, and the normalized coalgebra with `δ(1) = 1⊗1`.
pub fn normalize_delta(mc: &ModuleCoalgebra, ambient: &QuasiBialgebra) -> Result<(GaugeTwist, ModuleCoalgebra)> {
    let x = lift_delta_of_generator(mc)?;
    let t = GaugeTwist::new(ambient, x)?.inverse();
    Ok((t.clone(), twist_coalgebra(mc, &t)))
}

/// Serializable summary of a module-coalgebra check.
#[derive(Clone, Debug, Serialize)]
pub struct CoalgebraCheck {
    pub module: String,
    pub ambient: String,
    pub reports: Vec<AxiomReport>,
}

impl CoalgebraCheck {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::build_cartan;

    fn vec(v: usize) -> Tensor<1> {
        Tensor::basis([v])
    }

    #[test]
    fn verma_weights_and_ef() {
        for k in 0..4 {
            let m = verma(k);
            let kk = m.matrix(&UqPreset::k());
            assert_eq!(kk.get(0, 0), CycNum::i_pow(k as i64));
            assert_eq!(kk.get(1, 1), -CycNum::i_pow(k as i64));
            let ef = m.matrix(&UqPreset::shared().weight.mul(&UqPreset::e(), &UqPreset::f()));
            assert_eq!(m.act(&UqPreset::e(), &vec(0)), Tensor::zero());
            assert_eq!(ef.get(0, 0), commutator_scalar(k));
        }
        assert!(commutator_scalar(0).is_zero());
        assert_eq!(commutator_scalar(1), -commutator_scalar(3));
    }

    #[test]
    fn opposite_verma_fe() {
        let u = &UqPreset::shared().weight;
        for k in 0..4 {
            let m = opposite_verma(k);
            let fe = m.matrix(&u.mul(&UqPreset::f(), &UqPreset::e()));
            assert_eq!(fe.get(0, 0), -commutator_scalar(k));
            assert_eq!(m.act(&UqPreset::f(), &vec(0)), Tensor::zero());
        }
    }

    #[test]
    fn induced_regular_structure() {
        let m = induce_regular(Side::Lower);
        let kk = m.matrix(&UqPreset::k());
        for k in 0..4 {
            assert_eq!(kk.get(induced_index(k, 0), induced_index(k, 0)), CycNum::i_pow(k as i64));
            assert_eq!(m.act(&UqPreset::f(), &vec(induced_index(k, 0))), vec(induced_index(k, 1)));
            assert_eq!(m.act(&UqPreset::f(), &vec(induced_index(k, 1))), Tensor::zero());
            let proj = m.right_action(k).unwrap();
            assert_eq!(proj.apply(&[(induced_index(k, 1), CycNum::one())]), vec![(induced_index(k, 1), CycNum::one())]);
            assert!(proj.apply(&[(induced_index(k + 1, 0), CycNum::one())]).is_empty());
        }
        assert_eq!(induce_regular(Side::Upper).dim(), 8);
    }

    #[test]
    fn wrong_action_is_rejected() {
        let e = SparseMatrix::from_entries(2, 2, [(0, 1, CycNum::from_int(5))]);
        let f = SparseMatrix::from_entries(2, 2, [(1, 0, CycNum::one())]);
        let r = ModuleRep::from_generators("bad", vec!["v".into(), "Fv".into()], &e, &f, &[1, 3]);
        assert!(matches!(r, Err(Error::NotAModule(_))));
    }

    #[test]
    fn cartan_regular_bimodule_coalgebra() {
        for beta in BetaChoice::ALL {
            let c = build_cartan(beta).quasi_bialgebra();
            let m = cartan_regular_bimodule(beta);
            let delta = c.coproduct().to_vec();
            let mc = ModuleCoalgebra::new(m, delta, c.counit().to_vec()).unwrap();
            let reports = check_module_coalgebra(&mc, &c, Some(&c)).unwrap();
            assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
        }
    }

    #[test]
    fn cartan_regular_is_not_a_left_module_coalgebra() {
        let c = build_cartan(BetaChoice::default()).quasi_bialgebra();
        let mc = ModuleCoalgebra::new(cartan_regular_bimodule(BetaChoice::default()), c.coproduct().to_vec(), c.counit().to_vec()).unwrap();
        let reports = check_module_coalgebra(&mc, &c, None).unwrap();
        assert!(!reports.last().unwrap().passed());
    }
}
