//! Acceptance or rejection of coproduct ansätze on U.
//!
//! A tuple is rejected by evaluating the relations on the built coproduct, not
//! by the closed-form parameter conditions; the two are compared afterwards.

use serde::Serialize;

use crate::cyclo::{BetaChoice, CycNum};
use crate::error::Condition;
use crate::quasi::{check_counit, check_pentagon, check_quasi_coassociativity, AxiomReport};

use super::{build_coproduct_unchecked, relation_residuals, CoalgebraParams, CoproductParams};

#[derive(Clone, Debug, Serialize)]
pub struct CoproductVerdict {
    pub params: CoproductParams,
    pub accepted: bool,
    /// First relation that fails on the built coproduct.
    pub certificate: Option<Condition>,
    /// Whether the closed-form parameter conditions give the same answer.
    pub conditions_agree: bool,
    pub reports: Vec<AxiomReport>,
}

pub fn classify_coproduct(p: &CoproductParams, beta: BetaChoice) -> CoproductVerdict {
    let q = build_coproduct_unchecked(p, beta);
    let [nil, comm] = relation_residuals(&q);
    let mut reports = vec![nil, comm];
    let mut certificate = if !reports[0].passed() {
        Some(Condition::Nilpotency)
    } else if !reports[1].passed() {
        Some(Condition::Commutator)
    } else {
        None
    };
    if certificate.is_none() {
        let coass = check_quasi_coassociativity(&q);
        let counit = check_counit(&q);
        let pentagon = check_pentagon(&q);
        if !coass.passed() || !pentagon.passed() {
            certificate = Some(Condition::Coassociativity);
        } else if !counit.passed() {
            certificate = Some(Condition::Counit);
        }
        reports.extend([coass, counit, pentagon]);
    }
    let accepted = certificate.is_none();
    CoproductVerdict {
        params: p.clone(),
        accepted,
        certificate,
        conditions_agree: p.validate().is_ok() == accepted,
        reports,
    }
}

/// Lower parameter tuples used by the grid sweep.
pub fn lower_grid() -> Vec<[CycNum; 4]> {
    let c = |s: &str| s.parse::<CycNum>().expect("literal");
    vec![
        [c("1"), c("1"), c("1"), c("1")],
        [c("1"), c("i"), c("-1"), c("2")],
        [c("1"), c("zeta"), c("2"), c("1/2")],
    ]
}

/// Every combination of lower tuple, `ε, ε̄ ∈ {±1, ±i}` and upper side: three
/// completions forced by the commutator (`c̄_1 ∈ {1, i, 2}`) and one unrelated
/// upper tuple.
pub fn coproduct_grid() -> Vec<CoproductParams> {
    let roots: Vec<CycNum> = (0..4).map(CycNum::i_pow).collect();
    let cbar1s = [CycNum::one(), CycNum::i(), CycNum::from_int(2)];
    let mut out = Vec::new();
    for c in lower_grid() {
        for eps in &roots {
            for eps_bar in &roots {
                let lower = CoalgebraParams::new(c.clone(), eps.clone()).expect("valid lower");
                for cbar1 in &cbar1s {
                    let cbar = [
                        CycNum::one(),
                        cbar1.clone(),
                        -&c[2],
                        -(cbar1 * &c[3] / &c[1]),
                    ];
                    let upper = CoalgebraParams::new(cbar, eps_bar.clone()).expect("valid upper");
                    out.push(CoproductParams { lower: lower.clone(), upper });
                }
                let upper = CoalgebraParams::trivial(eps_bar.clone());
                out.push(CoproductParams { lower: lower.clone(), upper });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CycNum {
        s.parse().unwrap()
    }

    #[test]
    fn eps_i_is_rejected_by_nilpotency() {
        let p = CoproductParams { lower: CoalgebraParams::trivial(c("i")), upper: CoalgebraParams::trivial(c("i")) };
        let v = classify_coproduct(&p, BetaChoice::default());
        assert_eq!(v.certificate, Some(Condition::Nilpotency));
        assert!(v.conditions_agree);
    }

    #[test]
    fn eps_product_plus_one_is_rejected_by_commutator() {
        let p = CoproductParams { lower: CoalgebraParams::trivial(c("1")), upper: CoalgebraParams::trivial(c("1")) };
        let v = classify_coproduct(&p, BetaChoice::default());
        assert_eq!(v.certificate, Some(Condition::Commutator));
    }

    #[test]
    fn standard_tuple_is_accepted() {
        let p = super::super::standard_params(&c("i"), &c("1")).unwrap();
        let v = classify_coproduct(&p, BetaChoice::default());
        assert!(v.accepted, "{:?}", v.reports);
    }

    #[test]
    fn grid_verdicts_match_parameter_conditions() {
        let grid = coproduct_grid();
        assert_eq!(grid.len(), 192);
        let verdicts: Vec<_> = grid.iter().map(|p| classify_coproduct(p, BetaChoice::default())).collect();
        assert!(verdicts.iter().all(|v| v.conditions_agree));
        // ε = ±1, ε̄ = -ε with a forced upper side
        assert_eq!(verdicts.iter().filter(|v| v.accepted).count(), 3 * 2 * 3);
        for v in verdicts.iter().filter(|v| (&v.params.lower.eps * &v.params.lower.eps) != CycNum::one()) {
            assert_eq!(v.certificate, Some(Condition::Nilpotency));
        }
        for v in verdicts.iter().filter(|v| (&v.params.lower.eps * &v.params.upper.eps).is_one()) {
            assert!(matches!(v.certificate, Some(Condition::Commutator) | Some(Condition::Nilpotency)));
        }
    }
}
