//! Coalgebra structures on the induced regular bimodule.
//!
//! `δ(X e_k) = Σ_{a+b=k} c_L^{ab} X e_a ⊗ e_b + c_R^{ab} e_a ⊗ X e_b` with
//! `δ(e_k) = Σ_{a+b=k} e_a ⊗ e_b`. The sufficiency direction builds the
//! family from `(c, ε)` and runs the module-coalgebra checker. The necessity
//! direction treats the 32 coefficients as unknowns, derives the counit and
//! coassociativity constraints symbolically from the same bimodule data, and
//! then enumerates solutions on a finite grid.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cyclo::{BetaChoice, CycNum};
use crate::error::Result;
use crate::linalg::{rank, AddOutcome, EchelonSystem, Equation};
use crate::module::{check_module_coalgebra, induce_regular, induced_index, ModuleCoalgebra, ModuleRep};
use crate::presets::{build_cartan, CartanPreset};
use crate::quasi::AxiomReport;
use crate::tensor::{Tensor, Tensor2, Tensor3};

use super::{quarter_sign, CoalgebraParams, Side};

/// Number of unknowns `c_L^{ab}` (index `4a+b`) and `c_R^{ab}` (index `16+4a+b`).
pub const NUNKNOWNS: usize = 32;

pub fn var_left(a: usize, b: usize) -> usize {
    4 * (a % 4) + b % 4
}

pub fn var_right(a: usize, b: usize) -> usize {
    16 + 4 * (a % 4) + b % 4
}

pub fn var_name(v: usize) -> String {
    let side = if v < 16 { "cL" } else { "cR" };
    format!("{side}[{},{}]", (v % 16) / 4, v % 4)
}

/// `δ` on the 8-dimensional induced bimodule from explicit coefficient tables.
pub fn delta_from_tables(left: &[[CycNum; 4]; 4], right: &[[CycNum; 4]; 4]) -> Vec<Tensor2> {
    (0..8)
        .map(|v| {
            let k = v / 2;
            let mut terms = Vec::new();
            for a in 0..4 {
                let b = (k + 4 - a) % 4;
                if v % 2 == 0 {
                    terms.push(([induced_index(a, 0), induced_index(b, 0)], CycNum::one()));
                } else {
                    terms.push(([induced_index(a, 1), induced_index(b, 0)], left[a][b].clone()));
                    terms.push(([induced_index(a, 0), induced_index(b, 1)], right[a][b].clone()));
                }
            }
            Tensor::from_terms(terms)
        })
        .collect()
}

fn counit_vector() -> Vec<CycNum> {
    (0..8).map(|v| if v == induced_index(0, 0) { CycNum::one() } else { CycNum::zero() }).collect()
}

/// The module coalgebra with `c_L^{ab} = c_{a+b}/c_a` and `c_R^{ab} = ε^a (c_{a+b}/c_b)(-1)^{a(a-1)/2}`.
pub fn build_delta_family(p: &CoalgebraParams, side: Side) -> Result<ModuleCoalgebra> {
    let left = std::array::from_fn(|a| std::array::from_fn(|b| p.c_left(a, b)));
    let right = std::array::from_fn(|a| std::array::from_fn(|b| p.c_right(a, b)));
    ModuleCoalgebra::new(induce_regular(side), delta_from_tables(&left, &right), counit_vector())
}

/// The induced bimodule viewed as a C-C-bimodule through `C ⊂ U`.
pub fn restrict_to_cartan(m: &ModuleRep, cartan: &CartanPreset) -> Result<ModuleRep> {
    m.restrict(format!("{}|C", m.name), cartan.algebra.clone(), &CartanPreset::embedding_into_u())
}

/// Runs the bimodule-coalgebra checker over `C` on both sides.
pub fn check_delta_family(p: &CoalgebraParams, side: Side, beta: BetaChoice) -> Result<Vec<AxiomReport>> {
    let cartan = build_cartan(beta);
    let mc = build_delta_family(p, side)?;
    let base = restrict_to_cartan(&mc.base, &cartan)?;
    let mc = ModuleCoalgebra::new(base, mc.delta, mc.counit)?;
    let q = cartan.quasi_bialgebra();
    check_module_coalgebra(&mc, &q, Some(&q))
}

// ---------------------------------------------------------------------------
// Polynomials in the 32 unknowns
// ---------------------------------------------------------------------------

/// Sparse polynomial with monomials as sorted variable lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Vec<usize>, CycNum>,
}

impl Poly {
    pub fn constant(c: CycNum) -> Self {
        let mut p = Poly::default();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: usize) -> Self {
        let mut p = Poly::default();
        p.add_term(vec![v], CycNum::one());
        p
    }

    fn add_term(&mut self, mut mono: Vec<usize>, c: CycNum) {
        if c.is_zero() {
            return;
        }
        mono.sort_unstable();
        let e = self.terms.entry(mono).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &CycNum)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&CycNum::from_int(-1)))
    }

    pub fn scale(&self, c: &CycNum) -> Poly {
        let mut out = Poly::default();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m, x) in &self.terms {
            for (n, y) in &other.terms {
                let mut mono = m.clone();
                mono.extend_from_slice(n);
                out.add_term(mono, x * y);
            }
        }
        out
    }

    pub fn eval(&self, point: &[CycNum]) -> CycNum {
        self.terms
            .iter()
            .map(|(m, c)| m.iter().fold(c.clone(), |acc, v| acc * &point[*v]))
            .sum()
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let k = m.iter().filter(|x| **x == v).count();
            if k > 0 {
                let mut mono = m.clone();
                let pos = mono.iter().position(|x| *x == v).expect("present");
                mono.remove(pos);
                out.add_term(mono, c * &CycNum::from_int(k as i64));
            }
        }
        out
    }

    /// Substitutes values for some variables.
    pub fn substitute(&self, values: &BTreeMap<usize, CycNum>) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for v in m {
                match values.get(v) {
                    Some(x) => coeff *= x,
                    None => rest.push(*v),
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        self.terms.keys().flatten().copied().collect()
    }

    /// Scaled so that the leading coefficient is 1.
    pub fn normalized(&self) -> Poly {
        match self.terms.iter().next_back() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero coefficient")),
            None => Poly::default(),
        }
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m.iter().map(|v| var_name(*v)).collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Symbolic `δ`: per basis vector, a list of (key, coefficient polynomial).
type SymDelta = Vec<Vec<([usize; 2], Poly)>>;

fn symbolic_delta() -> SymDelta {
    (0..8)
        .map(|v| {
            let k = v / 2;
            (0..4)
                .flat_map(|a| {
                    let b = (k + 4 - a) % 4;
                    if v % 2 == 0 {
                        vec![([induced_index(a, 0), induced_index(b, 0)], Poly::constant(CycNum::one()))]
                    } else {
                        vec![
                            ([induced_index(a, 1), induced_index(b, 0)], Poly::var(var_left(a, b))),
                            ([induced_index(a, 0), induced_index(b, 1)], Poly::var(var_right(a, b))),
                        ]
                    }
                })
                .collect()
        })
        .collect()
}

/// A named polynomial constraint.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub origin: String,
    pub poly: Poly,
}

/// Counit and coassociativity constraints of the induced bimodule over `C`, derived symbolically.
pub fn derive_constraints(beta: BetaChoice) -> Result<(Vec<Constraint>, Vec<Constraint>)> {
    let cartan = build_cartan(beta);
    let m = restrict_to_cartan(&induce_regular(Side::Lower), &cartan)?;
    let labels = m.labels().to_vec();
    let delta = symbolic_delta();
    let eps = counit_vector();

    let mut counit = Vec::new();
    for v in 0..8 {
        for leg in 0..2 {
            let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
            for (k, p) in &delta[v] {
                let e = &eps[k[leg]];
                if !e.is_zero() {
                    let other = k[1 - leg];
                    let entry = acc.entry(other).or_default();
                    *entry = entry.add(&p.scale(e));
                }
            }
            let mut target = acc;
            let entry = target.entry(v).or_default();
            *entry = entry.sub(&Poly::constant(CycNum::one()));
            for (w, p) in target {
                if !p.is_zero() {
                    counit.push(Constraint { origin: format!("counit leg {leg}: δ({}) at {}", labels[v], labels[w]), poly: p });
                }
            }
        }
    }

    let mut coassoc = Vec::new();
    for v in 0..8 {
        let mut lhs: BTreeMap<[usize; 3], Poly> = BTreeMap::new();
        let mut rhs: BTreeMap<[usize; 3], Poly> = BTreeMap::new();
        for ([a, b], p) in &delta[v] {
            for ([x, y], q) in &delta[*a] {
                let e = lhs.entry([*x, *y, *b]).or_default();
                *e = e.add(&p.mul(q));
            }
            for ([x, y], q) in &delta[*b] {
                let e = rhs.entry([*a, *x, *y]).or_default();
                *e = e.add(&p.mul(q));
            }
        }
        // apply Φ^{-1} on the left and Φ on the right, key by key
        let mut conj: BTreeMap<[usize; 3], Poly> = BTreeMap::new();
        for (k, p) in lhs {
            let t = m.act_tensor(&cartan.phi_inv, &Tensor3::basis(k));
            let t = m.right_act_tensor(&t, &cartan.phi)?;
            for (key, c) in t.terms() {
                let e = conj.entry(*key).or_default();
                *e = e.add(&p.scale(c));
            }
        }
        for (k, p) in rhs {
            let e = conj.entry(k).or_default();
            *e = e.sub(&p);
        }
        for (k, p) in conj {
            if !p.is_zero() {
                coassoc.push(Constraint { origin: format!("coassociativity: δ({}) at {}", labels[v], crate::tensor::word_label(&k, &labels)), poly: p });
            }
        }
    }
    Ok((counit, coassoc))
}

fn left(a: usize, b: usize) -> Poly {
    Poly::var(var_left(a, b))
}

fn right(a: usize, b: usize) -> Poly {
    Poly::var(var_right(a, b))
}

/// The three displayed constraint families, indexed by `(a, b, c)`.
pub fn displayed_families() -> Vec<(String, Poly)> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let sign = CycNum::from_int(if a * b % 2 == 1 { -1 } else { 1 });
                out.push((format!("left({a},{b},{c})"), left(a, b).mul(&left(a + b, c)).sub(&left(a, b + c))));
                out.push((
                    format!("mixed({a},{b},{c})"),
                    right(a, b).mul(&left(a + b, c)).sub(&left(b, c).mul(&right(a, b + c))),
                ));
                out.push((
                    format!("right({a},{b},{c})"),
                    right(a + b, c).scale(&sign).sub(&right(b, c).mul(&right(a, b + c))),
                ));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct NecessityReport {
    /// The counit constraints solve to `c_L^{a,0} = c_R^{0,b} = 1` and nothing else.
    pub counit_rows_match: bool,
    /// Every derived coassociativity constraint is a multiple of a displayed one and vice versa.
    pub families_match: bool,
    pub derived_constraints: usize,
    pub displayed_constraints: usize,
    pub grid_points: usize,
    pub grid_solutions: usize,
    /// Seed points where the forward solve hit a vanishing coefficient (must be zero).
    pub undetermined_points: usize,
    /// Grid solutions outside the parametrization (must be empty).
    pub outside_family: Vec<Vec<String>>,
    /// Jacobian rank of counit and coassociativity at the checked family points.
    pub jacobian_ranks: Vec<usize>,
}

impl NecessityReport {
    pub fn passed(&self) -> bool {
        self.counit_rows_match
            && self.families_match
            && self.grid_solutions > 0
            && self.undetermined_points == 0
            && self.outside_family.is_empty()
            && self.jacobian_ranks.iter().all(|r| *r == NUNKNOWNS - 3)
    }
}

fn counit_rows_match(counit: &[Constraint]) -> bool {
    let mut sys = EchelonSystem::new();
    for c in counit {
        let mut coeffs = Vec::new();
        let mut rhs = CycNum::zero();
        for (m, x) in c.poly.terms() {
            match m.as_slice() {
                [] => rhs = -x,
                [v] => coeffs.push((*v, x.clone())),
                _ => return false,
            }
        }
        if let AddOutcome::Inconsistent(_) = sys.add(Equation::new(coeffs, rhs)) {
            return false;
        }
    }
    let fam = sys.solution(NUNKNOWNS);
    let expected: BTreeSet<usize> = (0..4).map(|a| var_left(a, 0)).chain((0..4).map(|b| var_right(0, b))).collect();
    let pinned: BTreeSet<usize> = (0..NUNKNOWNS).filter(|v| !fam.free_vars.contains(v)).collect();
    pinned == expected && expected.iter().all(|v| fam.particular[*v].is_one())
}

/// Solves the seeds `c_a = c_L^{0,a}`, `d_a = c_R^{a,0}` forward through
/// constraints that are linear in a single unknown, recording which constraint
/// fixes which unknown.
fn propagation_order(constraints: &[Poly], seeds: &BTreeSet<usize>) -> Option<Vec<(usize, usize)>> {
    let mut known = seeds.clone();
    let mut order = Vec::new();
    loop {
        if known.len() == NUNKNOWNS {
            return Some(order);
        }
        let mut progressed = false;
        for (i, p) in constraints.iter().enumerate() {
            let unknown: Vec<usize> = p.variables().difference(&known).copied().collect();
            if let [v] = unknown.as_slice() {
                // linear in v with a coefficient made only of known unknowns
                if p.terms().all(|(m, _)| m.iter().filter(|x| *x == v).count() <= 1) && !p.derivative(*v).is_zero() {
                    order.push((i, *v));
                    known.insert(*v);
                    progressed = true;
                }
            }
        }
        if !progressed {
            return None;
        }
    }
}

fn solve_linear_in(p: &Poly, v: usize, point: &[CycNum]) -> Option<CycNum> {
    // p = A v + B with A, B free of v
    let a = p.derivative(v).eval(point);
    let mut pt = point.to_vec();
    pt[v] = CycNum::zero();
    let b = p.eval(&pt);
    (!a.is_zero()).then(|| -b / a)
}

/// Point of the family `(c, ε)` as a vector of the 32 unknowns.
pub fn family_point(p: &CoalgebraParams) -> Vec<CycNum> {
    let mut x = vec![CycNum::zero(); NUNKNOWNS];
    for a in 0..4 {
        for b in 0..4 {
            x[var_left(a, b)] = p.c_left(a, b);
            x[var_right(a, b)] = p.c_right(a, b);
        }
    }
    x
}

/// Whether a point equals `family_point(c, ε)` for some ε with ε⁴ = 1.
pub fn in_family(point: &[CycNum]) -> bool {
    let c = [CycNum::one(), point[var_left(0, 1)].clone(), point[var_left(0, 2)].clone(), point[var_left(0, 3)].clone()];
    (0..4).any(|k| {
        CoalgebraParams::new(c.clone(), CycNum::i_pow(k)).is_ok_and(|p| family_point(&p) == point)
    })
}

/// Full necessity analysis: symbolic constraints, comparison with the displayed
/// families, grid enumeration over `grid³ × grid³` seeds, and Jacobian ranks at
/// the given family points.
pub fn necessity_analysis(beta: BetaChoice, grid: &[CycNum], rank_points: &[CoalgebraParams]) -> Result<NecessityReport> {
    let (counit, coassoc) = derive_constraints(beta)?;
    let counit_ok = counit_rows_match(&counit);

    let derived: std::collections::HashSet<Vec<(Vec<usize>, CycNum)>> = coassoc
        .iter()
        .map(|c| c.poly.normalized().terms().map(|(m, x)| (m.clone(), x.clone())).collect())
        .collect();
    let displayed: std::collections::HashSet<Vec<(Vec<usize>, CycNum)>> = displayed_families()
        .iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(_, p)| p.normalized().terms().map(|(m, x)| (m.clone(), x.clone())).collect())
        .collect();
    let families_match = derived == displayed;

    // seeds: c_L^{0,a}, c_R^{a,0} for a = 1..3; counit fixes the a = 0 entries
    let mut all: Vec<Poly> = counit.iter().map(|c| c.poly.clone()).collect();
    all.extend(coassoc.iter().map(|c| c.poly.clone()));
    let fixed: Vec<usize> = (0..4).map(|a| var_left(a, 0)).chain((0..4).map(|b| var_right(0, b))).collect();
    let seeds_l: Vec<usize> = (1..4).map(|a| var_left(0, a)).collect();
    let seeds_r: Vec<usize> = (1..4).map(|a| var_right(a, 0)).collect();
    let mut seeds: BTreeSet<usize> = fixed.iter().copied().collect();
    seeds.extend(&seeds_l);
    seeds.extend(&seeds_r);
    let fixed_values: BTreeMap<usize, CycNum> = fixed.iter().map(|v| (*v, CycNum::one())).collect();
    let reduced: Vec<Poly> = coassoc.iter().map(|c| c.poly.substitute(&fixed_values)).collect();
    let order = propagation_order(&reduced, &seeds)
        .ok_or_else(|| crate::Error::NotAssociative("coassociativity does not determine the coefficients from the seeds".into()))?;

    let mut grid_points = 0;
    let mut solutions = 0;
    let mut undetermined = 0;
    let mut outside = Vec::new();
    let n = grid.len();
    let total = n.pow(6);
    let mut point = vec![CycNum::zero(); NUNKNOWNS];
    for v in &fixed {
        point[*v] = CycNum::one();
    }
    'outer: for code in 0..total {
        grid_points += 1;
        let mut rest = code;
        for v in seeds_l.iter().chain(&seeds_r) {
            point[*v] = grid[rest % n].clone();
            rest /= n;
        }
        for (i, v) in &order {
            match solve_linear_in(&reduced[*i], *v, &point) {
                Some(x) => point[*v] = x,
                None => {
                    undetermined += 1;
                    continue 'outer;
                }
            }
        }
        if point.iter().any(CycNum::is_zero) || all.iter().any(|p| !p.eval(&point).is_zero()) {
            continue;
        }
        solutions += 1;
        if !in_family(&point) {
            outside.push(point.iter().map(|x| x.to_string()).collect());
        }
    }

    let jacobian_ranks = rank_points
        .iter()
        .map(|p| {
            let x = family_point(p);
            let rows: Vec<Vec<(usize, CycNum)>> = all
                .iter()
                .map(|poly| {
                    (0..NUNKNOWNS)
                        .map(|v| (v, poly.derivative(v).eval(&x)))
                        .filter(|(_, c)| !c.is_zero())
                        .collect()
                })
                .collect();
            rank(&rows)
        })
        .collect();

    Ok(NecessityReport {
        counit_rows_match: counit_ok,
        families_match,
        derived_constraints: derived.len(),
        displayed_constraints: displayed.len(),
        grid_points,
        grid_solutions: solutions,
        undetermined_points: undetermined,
        outside_family: outside,
        jacobian_ranks,
    })
}

/// `c_R^{ab}` with the quarter sign dropped; used to show the sign is needed.
pub fn delta_without_quarter_sign(p: &CoalgebraParams, side: Side) -> Result<ModuleCoalgebra> {
    let left = std::array::from_fn(|a| std::array::from_fn(|b| p.c_left(a, b)));
    let right = std::array::from_fn(|a| std::array::from_fn(|b| p.c_right(a, b) * quarter_sign(a)));
    ModuleCoalgebra::new(induce_regular(side), delta_from_tables(&left, &right), counit_vector())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::{build_coproduct, CoproductParams};
    use crate::module::normalize_delta;
    use crate::quasi::{gauge_twist, GaugeTwist};

    fn c(s: &str) -> CycNum {
        s.parse().unwrap()
    }

    fn params(cs: [&str; 3], eps: &str) -> CoalgebraParams {
        CoalgebraParams::new([CycNum::one(), c(cs[0]), c(cs[1]), c(cs[2])], c(eps)).unwrap()
    }

    #[test]
    fn family_passes_over_cartan_for_all_fourth_roots() {
        for eps in ["1", "-1", "i", "-i"] {
            for side in [Side::Lower, Side::Upper] {
                let p = params(["2", "zeta", "-1/2"], eps);
                let reports = check_delta_family(&p, side, BetaChoice::default()).unwrap();
                assert!(reports.iter().all(|r| r.passed()), "{eps} {side:?}: {reports:?}");
            }
        }
    }

    #[test]
    fn trivial_parameters_give_unit_left_coefficients() {
        let p = CoalgebraParams::trivial(CycNum::one());
        for a in 0..4 {
            for b in 0..4 {
                assert!(p.c_left(a, b).is_one());
            }
        }
        let q = params(["2", "3", "i"], "i");
        for b in 0..4 {
            assert_eq!(q.c_right(2, b), -(q.eps.pow(2).unwrap()) * &q.c[(2 + b) % 4] / &q.c[b]);
            assert!(q.c_left(b, 0).is_one());
            assert!(q.c_right(0, b).is_one());
        }
    }

    #[test]
    fn dropping_the_quarter_sign_breaks_coassociativity() {
        let p = params(["1", "1", "1"], "1");
        let cartan = build_cartan(BetaChoice::default());
        let mc = delta_without_quarter_sign(&p, Side::Lower).unwrap();
        let base = restrict_to_cartan(&mc.base, &cartan).unwrap();
        let mc = ModuleCoalgebra::new(base, mc.delta, mc.counit).unwrap();
        let q = cartan.quasi_bialgebra();
        let reports = check_module_coalgebra(&mc, &q, Some(&q)).unwrap();
        let co = reports.iter().find(|r| r.axiom == "coassociativity").unwrap();
        assert!(!co.passed());
    }

    #[test]
    fn family_is_a_u_module_coalgebra_when_eps_squared_is_one() {
        for eps in ["1", "-1"] {
            let lower = params(["2", "zeta", "-1/2"], eps);
            let cp = CoproductParams::completing(lower.clone(), c("3")).unwrap();
            let q = build_coproduct(&cp, BetaChoice::default()).unwrap();
            let mc = build_delta_family(&lower, Side::Lower).unwrap();
            let reports = check_module_coalgebra(&mc, &q, Some(&build_cartan(BetaChoice::default()).quasi_bialgebra())).unwrap();
            assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
            let upper = build_delta_family(&cp.upper, Side::Upper).unwrap();
            let reports = check_module_coalgebra(&upper, &q, Some(&build_cartan(BetaChoice::default()).quasi_bialgebra())).unwrap();
            assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
        }
    }

    #[test]
    fn normalization_recovers_unit_coproduct_of_generator() {
        let lower = params(["2", "zeta", "-1/2"], "1");
        let cp = CoproductParams::completing(lower.clone(), c("3")).unwrap();
        let q = build_coproduct(&cp, BetaChoice::default()).unwrap();
        let cartan = build_cartan(BetaChoice::default()).quasi_bialgebra();
        let mc = build_delta_family(&lower, Side::Lower).unwrap();

        // already normalized: J = 1⊗1
        let (t, same) = normalize_delta(&mc, &q).unwrap();
        assert_eq!(t.j(), &q.unit::<2>());
        assert_eq!(same.delta, mc.delta);

        // scale by an invertible Cartan element J0 and recover
        let u = crate::presets::idx;
        let j0 = Tensor::from_terms((0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| {
            let x = if a == 0 || b == 0 { CycNum::one() } else { CycNum::from_int((a * b + 1) as i64) };
            ([u(0, 0, a), u(0, 0, b)], x)
        }));
        let t0 = GaugeTwist::new(&q, j0).unwrap();
        let q0 = gauge_twist(&q, &t0);
        let mc0 = crate::module::twist_coalgebra(&mc, &t0);
        assert!(check_module_coalgebra(&mc0, &q0, Some(&cartan)).unwrap().iter().all(|r| r.passed()));
        let (t, back) = normalize_delta(&mc0, &q0).unwrap();
        assert_eq!(back.delta, mc.delta);
        let q1 = gauge_twist(&q0, &t);
        assert!(check_module_coalgebra(&back, &q1, Some(&cartan)).unwrap().iter().all(|r| r.passed()));
        // Φ of the normalized ambient acts on the bimodule like Φ_C
        let g = back.base.generator().unwrap().clone();
        let ggg: Tensor3 = g.outer::<1, 2>(&g).outer(&g);
        let lhs = back.base.act_tensor(q1.phi(), &ggg);
        let rhs = back.base.right_act_tensor(&ggg, cartan.phi()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derived_constraints_match_displayed_families() {
        let grid = [c("1"), c("-1"), c("i")];
        let rank_points = [params(["2", "zeta", "-1/2"], "1"), params(["1", "1", "1"], "i")];
        let rep = necessity_analysis(BetaChoice::default(), &grid, &rank_points).unwrap();
        assert!(rep.counit_rows_match);
        assert!(rep.families_match, "{} vs {}", rep.derived_constraints, rep.displayed_constraints);
        assert!(rep.grid_solutions > 0);
        assert_eq!(rep.undetermined_points, 0);
        assert!(rep.passed());
        assert!(rep.outside_family.is_empty());
        assert_eq!(rep.jacobian_ranks, vec![29, 29]);
    }
}
