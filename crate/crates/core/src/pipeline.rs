//! End-to-end reproduction run: certification of the standard quasi-triangular
//! structure, the coproduct and coalgebra classifications, normal forms,
//! R-matrix existence over a d-grid, and the fusion checks.
//!
//! Every check carries an expected outcome. A check is `ok` when the observed
//! outcome matches; the report is certified when every check is ok.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classification::coalgebra_family::{check_delta_family, necessity_analysis};
use crate::classification::coproduct::{classify_coproduct, coproduct_grid};
use crate::classification::rmatrix::{block_mismatches, classify_grid, default_d_grid, printed_fe_block, r_fe_block};
use crate::classification::{apply_automorphism, braided_standard, omega, standard_form, Automorphism, Side};
use crate::cyclo::{BetaChoice, CycNum};
use crate::error::{Condition, Error, Result};
use crate::fusion::{self, FusionExpr, SingletLabel, TripletKind, TripletLabel};
use crate::presets::UqPreset;
use crate::quasi::{gauge_twist, verify_all, AxiomReport, QuasiBialgebra};
use crate::sampling;
use crate::tensor::{Tensor, Tensor2, Tensor3};

/// Seed for the fixed parameter samples on certification paths.
const CERTIFICATION_SEED: u64 = 0x5eed_0001;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Odd exponent selecting `β = ζ^k`.
    pub beta_exponent: u8,
    /// Values of d for the R-matrix sweep, as exact strings.
    pub d_grid: Vec<String>,
    /// Seed values for the coalgebra necessity enumeration.
    pub necessity_grid: Vec<String>,
    pub family_samples: usize,
    pub normalization_samples: usize,
    pub fusion_p: Vec<u32>,
    pub fusion_r_window: i64,
    /// Random twists in the auxiliary invariance check.
    pub twist_samples: usize,
    /// Only affects the auxiliary twist sample.
    pub seed: u64,
    pub fault: Option<Fault>,
}

/// Adds `value` to one component of Φ before certification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fault {
    pub phi_component: [usize; 3],
    pub value: String,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            beta_exponent: 1,
            d_grid: default_d_grid().iter().map(|d| d.to_string()).collect(),
            necessity_grid: vec!["1".into(), "-1".into(), "i".into()],
            family_samples: 50,
            normalization_samples: 20,
            fusion_p: vec![2, 3],
            fusion_r_window: 4,
            twist_samples: 5,
            seed: 0,
            fault: None,
        }
    }
}

impl PipelineConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn beta(&self) -> Result<BetaChoice> {
        BetaChoice::new(self.beta_exponent).map_err(|e| Error::Config(e.to_string()))
    }

    fn parse_list(xs: &[String], what: &str) -> Result<Vec<CycNum>> {
        xs.iter()
            .map(|s| s.parse().map_err(|e| Error::Config(format!("{what} entry {s:?}: {e}"))))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn of(b: bool) -> Self {
        if b {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub expected: Outcome,
    pub observed: Outcome,
    pub residual_count: usize,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn ok(&self) -> bool {
        self.expected == self.observed
    }

    fn new(name: impl Into<String>, expected: Outcome, failures: Vec<String>) -> Self {
        CheckResult {
            name: name.into(),
            expected,
            observed: Outcome::of(failures.is_empty()),
            residual_count: failures.len(),
            witnesses: failures.into_iter().take(5).collect(),
            note: None,
        }
    }

    fn from_axiom(prefix: &str, r: &AxiomReport) -> Self {
        CheckResult {
            name: format!("{prefix}{}", r.axiom),
            expected: Outcome::Pass,
            observed: Outcome::of(r.passed()),
            residual_count: r.residual_count,
            witnesses: r.witnesses.iter().take(5).map(|w| format!("{} @ {} = {}", w.input, w.component, w.value)).collect(),
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub checks: Vec<CheckResult>,
}

impl Section {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(CheckResult::ok)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub preset: String,
    pub beta_exponent: u8,
    pub parameters: BTreeMap<String, String>,
    pub sections: Vec<Section>,
    pub certified: bool,
    /// Excluded from comparisons; see [`VerificationReport::without_timing`].
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn without_timing(&self) -> Self {
        VerificationReport { wall_time_ms: 0, ..self.clone() }
    }

    pub fn failing_checks(&self) -> Vec<(&str, &CheckResult)> {
        self.sections
            .iter()
            .flat_map(|s| s.checks.iter().filter(|c| !c.ok()).map(move |c| (s.name.as_str(), c)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Applies the configured fault to Φ (Φ⁻¹ is left unchanged).
pub fn inject_fault(q: QuasiBialgebra, fault: &Fault) -> Result<QuasiBialgebra> {
    let value: CycNum = fault.value.parse()?;
    let n = q.counit().len();
    if fault.phi_component.iter().any(|i| *i >= n) {
        return Err(Error::Config(format!("phi component {:?} outside basis of size {n}", fault.phi_component)));
    }
    let bump: Tensor3 = Tensor::from_terms([(fault.phi_component, value)]);
    let phi = q.phi() + &bump;
    let phi_inv = q.phi_inv().clone();
    Ok(q.with_phi(phi, phi_inv))
}

fn certification(beta: BetaChoice, fault: Option<&Fault>) -> Result<Section> {
    let mut q = braided_standard(&CycNum::i(), &CycNum::one(), beta)?;
    if let Some(f) = fault {
        q = inject_fault(q, f)?;
    }
    let checks = verify_all(&q).iter().map(|r| CheckResult::from_axiom("", r)).collect();
    Ok(Section { name: "certification".into(), checks })
}

fn coproducts(beta: BetaChoice) -> Section {
    let verdicts: Vec<_> = coproduct_grid().iter().map(|p| classify_coproduct(p, beta)).collect();
    let describe = |v: &crate::classification::coproduct::CoproductVerdict| {
        format!(
            "c={:?} eps={} cbar={:?} eps_bar={} -> {:?}",
            v.params.lower.c, v.params.lower.eps, v.params.upper.c, v.params.upper.eps, v.certificate
        )
    };
    let sq_not_one = |e: &CycNum| !(e * e).is_one();
    let nil: Vec<String> = verdicts
        .iter()
        .filter(|v| sq_not_one(&v.params.lower.eps) || sq_not_one(&v.params.upper.eps))
        .filter(|v| v.certificate != Some(Condition::Nilpotency))
        .map(describe)
        .collect();
    let comm: Vec<String> = verdicts
        .iter()
        .filter(|v| !sq_not_one(&v.params.lower.eps) && !sq_not_one(&v.params.upper.eps))
        .filter(|v| (&v.params.lower.eps * &v.params.upper.eps).is_one())
        .filter(|v| v.certificate != Some(Condition::Commutator))
        .map(describe)
        .collect();
    let accepted: Vec<_> = verdicts.iter().filter(|v| v.accepted).collect();
    let valid: Vec<String> = accepted
        .iter()
        .filter(|v| !v.reports.iter().all(AxiomReport::passed))
        .map(|v| describe(v))
        .collect();
    let agree: Vec<String> = verdicts.iter().filter(|v| !v.conditions_agree).map(describe).collect();
    let mut checks = vec![
        CheckResult::new("eps^2 != 1 rejected by nilpotency", Outcome::Pass, nil),
        CheckResult::new("eps*eps_bar = 1 rejected by commutator", Outcome::Pass, comm),
        CheckResult::new("accepted tuples are quasi-bialgebras", Outcome::Pass, valid)
            .with_note(format!("{} of {} tuples accepted", accepted.len(), verdicts.len())),
        CheckResult::new("verdicts match parameter conditions", Outcome::Pass, agree),
    ];
    if accepted.is_empty() {
        checks.push(CheckResult::new("grid contains valid tuples", Outcome::Pass, vec!["none accepted".into()]));
    }
    Section { name: "coproduct_classification".into(), checks }
}

fn normalization(beta: BetaChoice, samples: usize) -> Result<Section> {
    let mut rng = ChaCha8Rng::seed_from_u64(CERTIFICATION_SEED);
    let u = &UqPreset::shared().weight;
    let f = UqPreset::f();
    let mut shape = Vec::new();
    let mut upper = Vec::new();
    let mut round_trip = Vec::new();
    for _ in 0..samples {
        let p = sampling::sample_coproduct_params(&mut rng);
        let tag = format!("c={:?} cbar1={} eps={}", p.lower.c, p.upper.c[1], p.lower.eps);
        let sf = match standard_form(&p, beta) {
            Ok(sf) => sf,
            Err(e) => {
                shape.push(format!("{tag}: {e}"));
                continue;
            }
        };
        let one = u.unit();
        let want: Tensor2 = &f.outer::<1, 2>(one) + &omega(&-&p.lower.eps).outer::<1, 2>(&f);
        if sf.quasi.delta(&f) != want {
            shape.push(tag.clone());
        }
        let d = &p.upper.c[1] * &p.lower.c[3];
        let cbar = [CycNum::one(), d.clone(), CycNum::from_int(-1), -&d];
        let expected = crate::classification::standard_params(&d, &p.lower.eps)?;
        if expected.upper.c != cbar || sf.params.d != d {
            upper.push(tag.clone());
        }
        let back = apply_automorphism(&sf.quasi, &Automorphism::new(p.lower.c.clone())?);
        let orig = crate::classification::build_coproduct(&p, beta)?;
        if back.coproduct() != orig.coproduct() {
            round_trip.push(tag);
        }
    }
    Ok(Section {
        name: "normalization".into(),
        checks: vec![
            CheckResult::new("Delta(F) = F(x)1 + omega_{-eps}(x)F", Outcome::Pass, shape),
            CheckResult::new("upper parameters (1, d, -1, -d) with d = cbar1 c3", Outcome::Pass, upper),
            CheckResult::new("automorphism round trip", Outcome::Pass, round_trip),
        ],
    })
}

fn coalgebra_family(beta: BetaChoice, samples: usize, grid: &[CycNum]) -> Result<Section> {
    let mut rng = ChaCha8Rng::seed_from_u64(CERTIFICATION_SEED);
    let roots = sampling::fourth_roots();
    let mut failures = Vec::new();
    let mut rank_points = Vec::new();
    for n in 0..samples {
        let p = sampling::sample_coalgebra_params(&mut rng, &roots);
        for side in [Side::Lower, Side::Upper] {
            let reps = check_delta_family(&p, side, beta)?;
            if let Some(r) = reps.iter().find(|r| !r.passed()) {
                failures.push(format!("c={:?} eps={} {side:?}: {}", p.c, p.eps, r.axiom));
            }
        }
        if n < 2 {
            rank_points.push(p);
        }
    }
    let nec = necessity_analysis(beta, grid, &rank_points)?;
    let mut nec_fail = Vec::new();
    if !nec.counit_rows_match {
        nec_fail.push("counit constraints do not pin c_L^{a,0} = c_R^{0,b} = 1".into());
    }
    if !nec.families_match {
        nec_fail.push(format!("{} derived vs {} displayed constraints", nec.derived_constraints, nec.displayed_constraints));
    }
    if nec.grid_solutions == 0 || nec.undetermined_points > 0 {
        nec_fail.push(format!("{} solutions, {} undetermined seeds", nec.grid_solutions, nec.undetermined_points));
    }
    nec_fail.extend(nec.outside_family.iter().map(|p| format!("outside family: {}", p.join(", "))));
    if nec.jacobian_ranks.iter().any(|r| *r != 29) {
        nec_fail.push(format!("jacobian ranks {:?}", nec.jacobian_ranks));
    }
    Ok(Section {
        name: "coalgebra_family".into(),
        checks: vec![
            CheckResult::new("sampled families are bimodule coalgebras", Outcome::Pass, failures)
                .with_note(format!("{samples} tuples, both sides")),
            CheckResult::new("constraints force the family", Outcome::Pass, nec_fail).with_note(format!(
                "{} seed points, {} solutions",
                nec.grid_points, nec.grid_solutions
            )),
        ],
    })
}

fn braiding(beta: BetaChoice, grid: &[CycNum]) -> Result<Section> {
    let entries = classify_grid(grid, &CycNum::one(), beta)?;
    let mut checks = Vec::new();
    let mut exists_off_circle = Vec::new();
    for e in &entries {
        let mut failures: Vec<String> = Vec::new();
        if !e.solution.exists {
            failures.push(format!("no R: {:?}", e.solution.certificate));
        }
        failures.extend(e.solution.verification.iter().filter(|r| !r.passed()).map(|r| r.axiom.clone()));
        failures.extend(e.ansatz_mismatches.iter().map(|(a, b, x, y)| format!("F(x)E[{a}][{b}]: {x} vs {y}")));
        if e.solution.exists && !(&e.d * &e.d + CycNum::one()).is_zero() {
            exists_off_circle.push(e.d.to_string());
        }
        checks.push(CheckResult::new(format!("d = {}: R exists, Y = d i form, all axioms", e.d), Outcome::Pass, failures));
    }
    for (sign, d) in [(1i64, CycNum::i()), (-1, -CycNum::i())] {
        if let Some(e) = entries.iter().find(|e| e.d == d) {
            let got = e.solution.r.as_ref().map(r_fe_block);
            let failures = match got {
                Some(b) => block_mismatches(&b, &printed_fe_block(sign, beta))
                    .iter()
                    .map(|(a, b, x, y)| format!("[{a}][{b}]: {x} vs {y}"))
                    .collect(),
                None => vec!["no R".into()],
            };
            checks.push(CheckResult::new(format!("d = {d}: F(x)E block matches the printed sign pattern"), Outcome::Pass, failures));
        }
    }
    checks.push(
        CheckResult::new("R exists only when d^2 = -1", Outcome::Fail, exists_off_circle.clone())
            .with_note("the second hexagon does not restrict d; see the F(x)E(x)1 slice analysis"),
    );
    Ok(Section { name: "braiding".into(), checks })
}

fn fusion_section(ps: &[u32], window: i64) -> Result<Section> {
    let mut checks = Vec::new();
    for &p in ps {
        let rs: Vec<i64> = (-window..=window).collect();
        let mut f1_fails = Vec::new();
        let mut m12_fails = Vec::new();
        let mut f2_fails = Vec::new();
        let mut doubled_fails = Vec::new();
        let m12 = FusionExpr::single(SingletLabel::m(1, 2, p)?);
        for &r1 in &rs {
            for &r in &rs {
                let fb = SingletLabel::fbar(r1, 1, p)?;
                let got = fusion::singlet_fuse(&fb, &SingletLabel::f(r, 1, p)?, p)?;
                if got != fusion::fbar1_times_f1(r1, r, p)? {
                    f1_fails.push(format!("r'={r1} r={r}: {got}"));
                }
                let via_m12 = fusion::fuse_exprs(&got, &m12, p)?;
                let display = fusion::fbar1_times_f1_m12(r1, r, p)?;
                if via_m12 != display {
                    m12_fails.push(format!("r'={r1} r={r}: {via_m12}"));
                }
                let direct = fusion::singlet_fuse(&fb, &SingletLabel::f(r, 2, p)?, p)?;
                if direct != fusion::fbar1_times_f2(r1, r, p)? {
                    f2_fails.push(format!("r'={r1} r={r}: {direct}"));
                }
                if direct != display {
                    doubled_fails.push(format!("r'={r1} r={r}: {direct} vs {display}"));
                }
            }
        }
        checks.push(CheckResult::new(format!("p={p}: Fbar[r',1] x F[r,1] = sum of P[r+r'-1, odd l]"), Outcome::Pass, f1_fails));
        checks.push(CheckResult::new(
            format!("p={p}: (Fbar[r',1] x F[r,1]) x M[1,2] = P[r+r',p] + P[r+r'-2,p] + 2 P[r+r'-1, even l]"),
            Outcome::Pass,
            m12_fails,
        ));
        checks.push(CheckResult::new(
            format!("p={p}: Fbar[r',1] x F[r,2] = P[r+r'-2,p] + P[r+r'-1, even l]"),
            Outcome::Pass,
            f2_fails,
        ));
        checks.push(
            CheckResult::new(format!("p={p}: Fbar[r',1] x F[r,2] equals the doubled sum"), Outcome::Fail, doubled_fails)
                .with_note("M[1,2] x F[r,1] = F[r,2] + P[r+1,p], so the doubled sum includes Fbar[r',1] x M[r+1,p]"),
        );

        let k = fusion::k_homomorphism_check(p, window);
        checks.push(
            CheckResult::new(format!("p={p}: class map is a ring homomorphism"), Outcome::Pass, k.failures.clone())
                .with_note(format!("{} pairs, {} unsupported", k.pairs_checked, k.unsupported)),
        );

        let mut v11 = Vec::new();
        let mut v12 = Vec::new();
        let mut v12_claim = Vec::new();
        for r in [1u8, 2] {
            let vbar = TripletLabel::new(TripletKind::Vbar, r, 1, p)?;
            let got = fusion::triplet_fuse(&vbar, &TripletLabel::new(TripletKind::V, 1, 1, p)?, p)?;
            if got != fusion::vbar1_times_v11(r, p)? {
                v11.push(format!("r={r}: {got}"));
            }
            let got = fusion::triplet_fuse(&vbar, &TripletLabel::new(TripletKind::V, 1, 2, p)?, p)?;
            if got != fusion::vbar1_times_v12(r, p)? {
                v12.push(format!("r={r}: {got}"));
            }
            if got != fusion::vbar1_times_v11_w12(r, p)? {
                v12_claim.push(format!("r={r}: {got}"));
            }
        }
        checks.push(CheckResult::new(format!("p={p}: Vbar[r,1] x V[1,1] = sum of R[r, odd l]"), Outcome::Pass, v11));
        checks.push(CheckResult::new(format!("p={p}: Vbar[r,1] x V[1,2] = R[r+1,p] + R[r, even l]"), Outcome::Pass, v12));
        checks.push(
            CheckResult::new(format!("p={p}: Vbar[r,1] x V[1,2] equals the doubled sum"), Outcome::Fail, v12_claim)
                .with_note("the doubled sum is Vbar[r,1] x (V[1,1] x W[1,2])"),
        );

        let mut proj = Vec::new();
        for (r1, r2) in [(1u8, 1u8), (1, 2), (2, 1), (2, 2)] {
            for s1 in 1..=p {
                for s2 in 1..=p {
                    let a = TripletLabel::new(TripletKind::V, r1, s1, p)?;
                    let b = TripletLabel::new(TripletKind::Vbar, r2, s2, p)?;
                    let e = fusion::triplet_fuse(&a, &b, p)?;
                    if !e.iter().all(|(l, _)| l.is_projective(p)) {
                        proj.push(format!("{a} x {b} = {e}"));
                    }
                }
            }
        }
        checks.push(CheckResult::new(format!("p={p}: V x Vbar is projective"), Outcome::Pass, proj));
    }
    Ok(Section { name: "fusion".into(), checks })
}

fn twist_invariance(beta: BetaChoice, samples: usize, seed: u64) -> Result<Section> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cartan = crate::presets::build_cartan(beta).quasi_bialgebra();
    let braided = braided_standard(&CycNum::i(), &CycNum::one(), beta)?;
    let mut checks = Vec::new();
    for (name, q) in [("cartan", &cartan), ("standard", &braided)] {
        let base: Vec<bool> = verify_all(q).iter().map(AxiomReport::passed).collect();
        let mut failures = Vec::new();
        for n in 0..samples {
            let t = sampling::random_twist(&mut rng, q, 3);
            let got: Vec<bool> = verify_all(&gauge_twist(q, &t)).iter().map(AxiomReport::passed).collect();
            if got != base {
                failures.push(format!("twist {n}: {got:?} vs {base:?}"));
            }
        }
        checks.push(CheckResult::new(format!("{name}: axiom outcomes invariant under random twists"), Outcome::Pass, failures));
    }
    Ok(Section { name: "twist_invariance".into(), checks })
}

/// Runs every stage in order and assembles the report.
pub fn run_pipeline(config: &PipelineConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let beta = config.beta()?;
    let d_grid = PipelineConfig::parse_list(&config.d_grid, "d_grid")?;
    let nec_grid = PipelineConfig::parse_list(&config.necessity_grid, "necessity_grid")?;
    if let Some(p) = config.fusion_p.iter().find(|p| **p < 2) {
        return Err(Error::Config(format!("fusion p = {p} must be at least 2")));
    }
    let sections = vec![
        certification(beta, config.fault.as_ref())?,
        coalgebra_family(beta, config.family_samples, &nec_grid)?,
        coproducts(beta),
        normalization(beta, config.normalization_samples)?,
        braiding(beta, &d_grid)?,
        fusion_section(&config.fusion_p, config.fusion_r_window)?,
        twist_invariance(beta, config.twist_samples, config.seed)?,
    ];
    let certified = sections.iter().all(Section::ok);
    let mut parameters = BTreeMap::new();
    parameters.insert("d".into(), "i".into());
    parameters.insert("eps".into(), "1".into());
    parameters.insert("d_grid".into(), config.d_grid.join(", "));
    parameters.insert("fusion_p".into(), format!("{:?}", config.fusion_p));
    if let Some(f) = &config.fault {
        parameters.insert("fault".into(), format!("phi{:?} += {}", f.phi_component, f.value));
    }
    Ok(VerificationReport {
        preset: "u_i(sl2) standard".into(),
        beta_exponent: beta.exponent(),
        parameters,
        sections,
        certified,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> PipelineConfig {
        PipelineConfig { family_samples: 4, normalization_samples: 3, twist_samples: 1, ..Default::default() }
    }

    #[test]
    fn default_run_is_certified_and_deterministic() {
        let rep = run_pipeline(&small()).unwrap();
        assert!(rep.certified, "{:#?}", rep.failing_checks());
        let again = run_pipeline(&small()).unwrap();
        assert_eq!(rep.without_timing(), again.without_timing());
        let back = VerificationReport::from_json(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn other_beta_gives_the_same_verdicts() {
        let cfg = PipelineConfig { beta_exponent: 3, ..small() };
        let rep = run_pipeline(&cfg).unwrap();
        assert!(rep.certified, "{:#?}", rep.failing_checks());
        assert_eq!(rep.beta_exponent, 3);
    }

    #[test]
    fn corrupted_associator_fails_the_pentagon() {
        let cfg = PipelineConfig {
            fault: Some(Fault { phi_component: [0, 0, 0], value: "1".into() }),
            ..small()
        };
        let rep = run_pipeline(&cfg).unwrap();
        assert!(!rep.certified);
        let failing = rep.failing_checks();
        let pent = failing.iter().find(|(_, c)| c.name == "pentagon").expect("pentagon fails");
        assert!(!pent.1.witnesses.is_empty());
    }

    #[test]
    fn config_errors() {
        assert!(matches!(PipelineConfig::from_json("{\"bogus\": 1}"), Err(Error::Config(_))));
        let cfg = PipelineConfig::from_json("{\"beta_exponent\": 2}").unwrap();
        assert!(matches!(run_pipeline(&cfg), Err(Error::Config(_))));
        let cfg = PipelineConfig { d_grid: vec!["zz".into()], ..small() };
        assert!(matches!(run_pipeline(&cfg), Err(Error::Config(_))));
    }
}
