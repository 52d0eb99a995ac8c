//! Exact search for R-matrices on a quasi-bialgebra structure of U.
//!
//! The unknown `R = Σ r_{ij} b_i⊗b_j` runs over all 256 weight-basis
//! coefficients. Linear constraints are imposed stage by stage:
//!
//! 1. `k_intertwiner`: `R Δ(K) = Δ^op(K) R`
//! 2. `counit`: `(ε⊗id)R = (id⊗ε)R = 1`
//! 3. `cartan_braiding`: the `e_a⊗e_b` block equals the braiding of C
//! 4. `f_intertwiner`, `e_intertwiner`
//!
//! The hexagons are quadratic in R. On the affine solution family
//! `R(t) = R_0 + Σ t_f N_f` every hexagon component is a quadratic polynomial
//! in `t`; components whose quadratic part vanishes are linear equations and
//! are fed back into the elimination. This repeats until the system is
//! inconsistent (no R exists; the offending component is the certificate) or
//! the solution is unique.

use serde::Serialize;

use crate::cyclo::{BetaChoice, CycNum};
use crate::error::Result;
use crate::linalg::{AddOutcome, AffineFamily, EchelonSystem, Equation};
use crate::presets::{cartan_r, idx};
use crate::quasi::{check_hexagons, check_r_intertwiner, AxiomReport, QuasiBialgebra};
use crate::tensor::{word_label, Accum, Tensor, Tensor2, Tensor3};

use super::standard_coproduct;

/// Summary of one elimination stage.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageLog {
    pub stage: String,
    pub equations: usize,
    pub new_pivots: usize,
    pub free_parameters: usize,
}

/// Why no R-matrix exists: the first equation that reduced to `0 = residual`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub constraint_id: String,
    /// Tensor component whose equation is inconsistent, and the unknowns it involved.
    pub witness_indices: Vec<String>,
    pub residual_sample: CycNum,
}

#[derive(Clone, Debug, Serialize)]
pub struct RSolution {
    pub exists: bool,
    #[serde(skip)]
    pub r: Option<Tensor2>,
    pub certificate: Option<Certificate>,
    pub stages: Vec<StageLog>,
    /// Intertwiner and hexagon reports of the returned R.
    pub verification: Vec<AxiomReport>,
    /// Dimension of the remaining solution family when elimination stalls.
    pub undetermined_parameters: usize,
}

const DIM: usize = 16;
const NVARS: usize = DIM * DIM;

fn var(i: usize, j: usize) -> usize {
    i * DIM + j
}

fn unvar(v: usize) -> [usize; 2] {
    [v / DIM, v % DIM]
}

fn to_tensor(v: &[CycNum]) -> Tensor2 {
    Tensor::from_terms(v.iter().enumerate().map(|(k, c)| (unvar(k), c.clone())))
}

fn sparse_to_tensor(v: &[(usize, CycNum)]) -> Tensor2 {
    Tensor::from_terms(v.iter().map(|(k, c)| (unvar(*k), c.clone())))
}

struct Solver<'a> {
    q: &'a QuasiBialgebra,
    sys: EchelonSystem,
    stages: Vec<StageLog>,
}

enum Step {
    Continue(usize),
    Failed(Certificate),
}

impl<'a> Solver<'a> {
    fn labels(&self) -> &[String] {
        self.q.labels()
    }

    /// Feeds equations `(component label, involved unknowns, equation)`.
    fn feed(&mut self, stage: &str, eqs: Vec<(String, Equation)>) -> Step {
        let count = eqs.len();
        let mut pivots = 0;
        for (label, eq) in eqs {
            let involved: Vec<String> = eq
                .coeffs
                .iter()
                .map(|(v, _)| format!("r[{}]", word_label(&unvar(*v), self.labels())))
                .collect();
            match self.sys.add(eq) {
                AddOutcome::Pivot(_) => pivots += 1,
                AddOutcome::Redundant => {}
                AddOutcome::Inconsistent(res) => {
                    self.log(stage, count, pivots);
                    let mut witness_indices = vec![label];
                    witness_indices.extend(involved);
                    return Step::Failed(Certificate {
                        constraint_id: stage.to_string(),
                        witness_indices,
                        residual_sample: res,
                    });
                }
            }
        }
        self.log(stage, count, pivots);
        Step::Continue(pivots)
    }

    fn log(&mut self, stage: &str, equations: usize, new_pivots: usize) {
        let free_parameters = NVARS - self.sys.rank();
        self.stages.push(StageLog { stage: stage.into(), equations, new_pivots, free_parameters });
    }

    /// Equations `L(R) = target` for a linear map given on basis tensors.
    fn linear_map_equations<const N: usize>(
        &self,
        image: impl Fn(&Tensor2) -> Tensor<N>,
        target: &Tensor<N>,
    ) -> Vec<(String, Equation)> {
        let mut rows: std::collections::BTreeMap<[usize; N], Vec<(usize, CycNum)>> = Default::default();
        for v in 0..NVARS {
            for (k, c) in image(&Tensor::basis(unvar(v))).terms() {
                rows.entry(*k).or_default().push((v, c.clone()));
            }
        }
        for (k, _) in target.terms() {
            rows.entry(*k).or_default();
        }
        rows.into_iter()
            .map(|(k, coeffs)| (word_label(&k, self.labels()), Equation::new(coeffs, target.coeff(&k))))
            .collect()
    }

    fn intertwiner(&self, x: &Tensor<1>) -> Vec<(String, Equation)> {
        let dx = self.q.delta(x);
        let dop = dx.flip();
        self.linear_map_equations(|r| &self.q.mul(&[r, &dx]) - &self.q.mul(&[&dop, r]), &Tensor::zero())
    }

    fn family(&self) -> AffineFamily {
        self.sys.solution(NVARS)
    }

    /// Linear equations extracted from one hexagon on the current family.
    fn hexagon_equations(&self, which: usize) -> Vec<(String, Equation)> {
        let q = self.q;
        let fam = self.family();
        let base = to_tensor(&fam.particular);
        let dirs: Vec<Tensor2> = fam.directions.iter().map(|d| sparse_to_tensor(d)).collect();
        let unit = q.algebra().unit();
        let r13 = |r: &Tensor2| -> Tensor3 { r.insert_leg(1, unit) };
        // hexagon = lhs(R) - A X(R) B Y(R) C
        let (lhs_pos, a, b, c, y_missing) = if which == 1 {
            (0, q.phi_inv().permute([1, 2, 0]), q.phi().permute([0, 2, 1]), q.phi_inv().clone(), 0)
        } else {
            (1, q.phi().permute([2, 0, 1]), q.phi_inv().permute([1, 0, 2]), q.phi().clone(), 2)
        };
        let ylegs = |r: &Tensor2| -> Tensor3 { r.insert_leg(y_missing, unit) };
        let lhs = |r: &Tensor2| -> Tensor3 { q.delta_leg(r, lhs_pos) };

        let ax = |r: &Tensor2| q.mul(&[&a, &r13(r), &b]);
        let yc = |r: &Tensor2| q.mul(&[&ylegs(r), &c]);
        let ax0 = ax(&base);
        let yc0 = yc(&base);
        let constant = &lhs(&base) - &q.mul(&[&ax0, &yc0]);
        let axs: Vec<Tensor3> = dirs.iter().map(&ax).collect();
        let ycs: Vec<Tensor3> = dirs.iter().map(&yc).collect();
        let linear: Vec<Tensor3> = dirs
            .iter()
            .enumerate()
            .map(|(f, n)| &(&lhs(n) - &q.mul(&[&axs[f], &yc0])) - &q.mul(&[&ax0, &ycs[f]]))
            .collect();
        // symmetric quadratic coefficients per component
        let m = dirs.len();
        let mut quad: Accum<3> = Accum::default();
        let mut quad_parts: Vec<Tensor3> = Vec::new();
        for f in 0..m {
            for g in f..m {
                let mut t = q.mul(&[&axs[f], &ycs[g]]);
                if g != f {
                    t = &t + &q.mul(&[&axs[g], &ycs[f]]);
                }
                quad_parts.push(t);
            }
        }
        // a component has vanishing quadratic part iff every symmetric coefficient vanishes
        let mut has_quad: std::collections::HashSet<[usize; 3]> = Default::default();
        for t in &quad_parts {
            for (k, c) in t.terms() {
                quad.add(*k, c.clone());
                has_quad.insert(*k);
            }
        }
        let mut keys: std::collections::BTreeSet<[usize; 3]> = constant.terms().iter().map(|(k, _)| *k).collect();
        for l in &linear {
            keys.extend(l.terms().iter().map(|(k, _)| *k));
        }
        let name = if which == 1 { "hexagon_1" } else { "hexagon_2" };
        keys.into_iter()
            .filter(|k| !has_quad.contains(k))
            .map(|k| {
                let coeffs = fam.free_vars.iter().zip(&linear).map(|(v, l)| (*v, l.coeff(&k)));
                (
                    format!("{name}: {}", word_label(&k, self.labels())),
                    Equation::new(coeffs, -constant.coeff(&k)),
                )
            })
            .collect()
    }
}

/// Runs the staged elimination on `q` with the Cartan block pinned to `cartan_block`.
pub fn solve_braiding(q: &QuasiBialgebra, cartan_block: &Tensor2) -> RSolution {
    let mut s = Solver { q, sys: EchelonSystem::new(), stages: Vec::new() };
    let fail = |s: Solver, cert: Certificate| RSolution {
        exists: false,
        r: None,
        certificate: Some(cert),
        stages: s.stages,
        verification: Vec::new(),
        undetermined_parameters: 0,
    };

    let k = crate::presets::UqPreset::k();
    let eqs = s.intertwiner(&k);
    if let Step::Failed(c) = s.feed("k_intertwiner", eqs) {
        return fail(s, c);
    }

    let one = q.unit::<1>();
    let mut eqs = s.linear_map_equations(|r| q.eps_leg::<2, 1>(r, 0), &one);
    eqs.extend(s.linear_map_equations(|r| q.eps_leg::<2, 1>(r, 1), &one));
    if let Step::Failed(c) = s.feed("counit", eqs) {
        return fail(s, c);
    }

    let cartan: Vec<(String, Equation)> = (0..4)
        .flat_map(|a| (0..4).map(move |b| (a, b)))
        .map(|(a, b)| {
            let key = [idx(0, 0, a), idx(0, 0, b)];
            (
                word_label(&key, q.labels()),
                Equation::new([(var(key[0], key[1]), CycNum::one())], cartan_block.coeff(&key)),
            )
        })
        .collect();
    if let Step::Failed(c) = s.feed("cartan_braiding", cartan) {
        return fail(s, c);
    }

    for (stage, x) in [("f_intertwiner", crate::presets::UqPreset::f()), ("e_intertwiner", crate::presets::UqPreset::e())] {
        let eqs = s.intertwiner(&x);
        if let Step::Failed(c) = s.feed(stage, eqs) {
            return fail(s, c);
        }
    }

    loop {
        let mut progress = 0;
        for which in [1, 2] {
            if s.sys.rank() == NVARS {
                break;
            }
            let eqs = s.hexagon_equations(which);
            let name = if which == 1 { "hexagon_1" } else { "hexagon_2" };
            match s.feed(name, eqs) {
                Step::Failed(c) => return fail(s, c),
                Step::Continue(p) => progress += p,
            }
        }
        if progress == 0 || s.sys.rank() == NVARS {
            break;
        }
    }

    let fam = s.family();
    let r = to_tensor(&fam.particular);
    let candidate = q.clone().with_r(Some(r.clone()));
    let mut verification = vec![check_r_intertwiner(&candidate).expect("R present")];
    verification.extend(check_hexagons(&candidate).expect("R present"));
    let undetermined = fam.dimension();
    if undetermined == 0 {
        if let Some(bad) = verification.iter().find(|r| !r.passed()) {
            // unique candidate that still violates a quadratic constraint
            let w = bad.witnesses.first().cloned();
            let cert = Certificate {
                constraint_id: bad.axiom.clone(),
                witness_indices: w.iter().map(|w| w.component.clone()).collect(),
                residual_sample: w.map(|w| w.value).unwrap_or_default(),
            };
            return fail(s, cert);
        }
    }
    let exists = undetermined == 0;
    RSolution {
        exists,
        r: exists.then_some(r),
        certificate: None,
        stages: s.stages,
        verification,
        undetermined_parameters: undetermined,
    }
}

/// R-matrix search on the normal form with invariant `d` and `ε = 1`.
pub fn solve_rmatrix(d: &CycNum, beta: BetaChoice) -> Result<RSolution> {
    solve_rmatrix_eps(d, &CycNum::one(), beta)
}

pub fn solve_rmatrix_eps(d: &CycNum, eps: &CycNum, beta: BetaChoice) -> Result<RSolution> {
    let q = standard_coproduct(d, eps, beta)?;
    let block = cartan_r(&beta.beta(), |k| idx(0, 0, k));
    Ok(solve_braiding(&q, &block))
}

/// The `F e_a ⊗ E e_b` coefficients of R.
pub fn r_fe_block(r: &Tensor2) -> [[CycNum; 4]; 4] {
    std::array::from_fn(|a| std::array::from_fn(|b| r.coeff(&[idx(0, 1, a), idx(1, 0, b)])))
}

/// The `E e_a ⊗ F e_b` coefficients of R.
pub fn r_ef_block(r: &Tensor2) -> [[CycNum; 4]; 4] {
    std::array::from_fn(|a| std::array::from_fn(|b| r.coeff(&[idx(1, 0, a), idx(0, 1, b)])))
}

/// The `F e_a ⊗ E e_b` block as printed for `d = sign·i`: `∓1` in column 0 and
/// at (1,2), `±1` at (2,2) and (3,2).
pub fn printed_fe_block(sign: i64, beta: BetaChoice) -> [[CycNum; 4]; 4] {
    let s = CycNum::from_int(sign);
    let i = CycNum::i();
    let b = beta.beta();
    let two = CycNum::from_int(2);
    let m = [
        [-&s, -&i, -&s, -&i],
        [-&s, -(&i * &b), -&s, -(&i * &b)],
        [-&s, i.clone(), s.clone(), -&i],
        [-&s, &i * &b, s.clone(), -(&i * &b)],
    ];
    m.map(|row| row.map(|x| &x * &two))
}

/// Entries where two blocks differ, as `(a, b, left, right)`.
pub fn block_mismatches(x: &[[CycNum; 4]; 4], y: &[[CycNum; 4]; 4]) -> Vec<(usize, usize, CycNum, CycNum)> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            if x[a][b] != y[a][b] {
                out.push((a, b, x[a][b].clone(), y[a][b].clone()));
            }
        }
    }
    out
}

/// Both sides of the second hexagon restricted to `F e_a ⊗ E e_b ⊗ e_c`, indexed `[a][b]`.
pub fn hexagon2_fe_slice(q: &QuasiBialgebra, r: &Tensor2, c: usize) -> ([[CycNum; 4]; 4], [[CycNum; 4]; 4]) {
    let unit = q.algebra().unit();
    let lhs: Tensor3 = q.delta_leg(r, 1);
    let r13: Tensor3 = r.insert_leg(1, unit);
    let r12: Tensor3 = r.insert_leg(2, unit);
    let rhs = q.mul(&[&q.phi().permute([2, 0, 1]), &r13, &q.phi_inv().permute([1, 0, 2]), &r12, q.phi()]);
    let at = |t: &Tensor3, a: usize, b: usize| t.coeff(&[idx(0, 1, a), idx(1, 0, b), idx(0, 0, c)]);
    (
        std::array::from_fn(|a| std::array::from_fn(|b| at(&lhs, a, b))),
        std::array::from_fn(|a| std::array::from_fn(|b| at(&rhs, a, b))),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct GridEntry {
    pub d: CycNum,
    pub eps: CycNum,
    pub solution: RSolution,
    /// Entries where the solved `F⊗E` block differs from the `Y = d·i` form.
    pub ansatz_mismatches: Vec<(usize, usize, CycNum, CycNum)>,
}

/// The d-grid `±1, ±i, ±ζ, ±ζ³, 2, 1/2`.
pub fn default_d_grid() -> Vec<CycNum> {
    let z = CycNum::zeta();
    let z3 = CycNum::zeta_pow(3);
    vec![
        CycNum::one(),
        CycNum::from_int(-1),
        CycNum::i(),
        -CycNum::i(),
        z.clone(),
        -z,
        z3.clone(),
        -z3,
        CycNum::from_int(2),
        CycNum::frac(1, 2).expect("nonzero"),
    ]
}

pub fn classify_grid(ds: &[CycNum], eps: &CycNum, beta: BetaChoice) -> Result<Vec<GridEntry>> {
    ds.iter()
        .map(|d| {
            let solution = solve_rmatrix_eps(d, eps, beta)?;
            let ansatz_mismatches = match (&solution.r, eps.is_one()) {
                (Some(r), true) => block_mismatches(&r_fe_block(r), &r_fe_block(&super::braiding_ansatz(d, beta))),
                _ => Vec::new(),
            };
            Ok(GridEntry { d: d.clone(), eps: eps.clone(), solution, ansatz_mismatches })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::braiding_ansatz;

    #[test]
    fn d_equal_i_gives_displayed_braiding() {
        let d = CycNum::i();
        let sol = solve_rmatrix(&d, BetaChoice::default()).unwrap();
        assert!(sol.exists, "{:?}", sol.certificate);
        let r = sol.r.unwrap();
        assert_eq!(r, braiding_ansatz(&d, BetaChoice::default()));
        assert_eq!(r_fe_block(&r)[0][1], CycNum::from_int(-2) * CycNum::i());
    }

    #[test]
    fn printed_block_agrees_with_y_equal_di() {
        for (sign, d) in [(1, CycNum::i()), (-1, -CycNum::i())] {
            let beta = BetaChoice::default();
            let r = braiding_ansatz(&d, beta);
            assert!(block_mismatches(&r_fe_block(&r), &printed_fe_block(sign, beta)).is_empty());
        }
    }

    #[test]
    fn every_grid_value_admits_the_y_equal_di_braiding() {
        for d in default_d_grid() {
            let sol = solve_rmatrix(&d, BetaChoice::default()).unwrap();
            assert!(sol.exists, "d = {d}: {:?}", sol.certificate);
            assert!(sol.verification.iter().all(|r| r.passed()));
            let r = sol.r.unwrap();
            assert_eq!(r, braiding_ansatz(&d, BetaChoice::default()), "d = {d}");
            assert!(r_ef_block(&r).iter().flatten().all(CycNum::is_zero));
        }
    }

    #[test]
    fn negative_eps_braiding_lives_in_e_tensor_f() {
        let sol = solve_rmatrix_eps(&CycNum::one(), &CycNum::from_int(-1), BetaChoice::default()).unwrap();
        assert!(sol.exists);
        let r = sol.r.unwrap();
        assert!(r_fe_block(&r).iter().flatten().all(CycNum::is_zero));
        assert!(!r_ef_block(&r).iter().flatten().all(CycNum::is_zero));
    }

    #[test]
    fn fe_slice_of_second_hexagon_at_d_one() {
        let d = CycNum::one();
        let beta = BetaChoice::default();
        let q = standard_coproduct(&d, &CycNum::one(), beta).unwrap();
        let r = braiding_ansatz(&d, beta);
        let fe = r_fe_block(&r);
        let cbar = super::super::standard_params(&d, &CycNum::one()).unwrap().upper;
        let (lhs, rhs) = hexagon2_fe_slice(&q, &r, 1);
        assert_eq!(lhs, rhs);
        for a in 0..4 {
            for b in 0..4 {
                // the structure constant of Δ(E) multiplies along the middle index
                assert_eq!(lhs[a][b], cbar.c_left(b, 1) * &fe[a][(b + 1) % 4]);
                // indexing that factor by the first leg instead breaks exactly the odd a+b entries
                let row_indexed = cbar.c_left(a, 1) * &fe[a][(b + 1) % 4];
                assert_eq!(row_indexed == rhs[a][b], (a + b) % 2 == 0, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn wrong_cartan_block_yields_certificate() {
        let q = standard_coproduct(&CycNum::i(), &CycNum::one(), BetaChoice::default()).unwrap();
        let block = cartan_r(&CycNum::zeta_pow(3), |k| idx(0, 0, k));
        let sol = solve_braiding(&q, &block);
        assert!(!sol.exists);
        let cert = sol.certificate.unwrap();
        assert!(!cert.residual_sample.is_zero());
        assert!(!cert.witness_indices.is_empty());
    }
}
