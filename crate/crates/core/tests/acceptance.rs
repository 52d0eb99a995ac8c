//! Acceptance suite: one PASS/FAIL line per criterion, all checks exact.
//!
//! Criteria 2 and 6 print FAIL. The stated claims do not hold, so for those
//! two the suite asserts what is actually true instead. The process exits
//! non-zero if any other criterion fails or if an asserted fact breaks.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quasihopf::classification::coalgebra_family::{check_delta_family, necessity_analysis};
use quasihopf::classification::coproduct::{classify_coproduct, coproduct_grid};
use quasihopf::classification::rmatrix::{block_mismatches, classify_grid, default_d_grid, printed_fe_block, r_fe_block};
use quasihopf::classification::{
    apply_automorphism, build_coproduct, braided_standard, omega, standard_form, Automorphism, CoalgebraParams, CoproductParams,
    Side,
};
use quasihopf::fusion::{self, FusionExpr, SingletLabel, TripletKind, TripletLabel};
use quasihopf::presets::{build_cartan, idx, UqPreset};
use quasihopf::quasi::{gauge_twist, verify_all};
use quasihopf::sampling::{fourth_roots, random_twist, sample_coalgebra_params, sample_coproduct_params};
use quasihopf::{AxiomReport, BetaChoice, Condition, CycNum, Tensor2};

type Outcome = Result<(bool, String), String>;

fn c(s: &str) -> CycNum {
    s.parse().expect("literal")
}

fn all_pass(r: &[AxiomReport]) -> bool {
    r.iter().all(|x| x.passed() && x.residual_count == 0)
}

fn beta() -> BetaChoice {
    BetaChoice::new(1).expect("odd exponent")
}

fn certification() -> Outcome {
    let q = braided_standard(&c("i"), &c("1"), beta()).map_err(|e| e.to_string())?;
    let reports = verify_all(&q);
    let names: Vec<&str> = reports.iter().map(|r| r.axiom.as_str()).collect();
    let ok = reports.len() == 7 && all_pass(&reports);
    Ok((ok, format!("{} checks with zero residual: {}", reports.len(), names.join(", "))))
}

fn rmatrix() -> Outcome {
    let grid = default_d_grid();
    let entries = classify_grid(&grid, &c("1"), beta()).map_err(|e| e.to_string())?;
    let on_circle = |d: &CycNum| (d * d + CycNum::one()).is_zero();
    let exists_exactly_on_circle = entries.iter().all(|e| e.solution.exists == on_circle(&e.d));
    let certificates_cite_hexagon = entries
        .iter()
        .filter(|e| !e.solution.exists)
        .all(|e| e.solution.certificate.as_ref().is_some_and(|c| c.constraint_id.contains("hexagon")));

    let mut block_ok = true;
    for (sign, d) in [(1, c("i")), (-1, c("-i"))] {
        let e = entries.iter().find(|e| e.d == d).ok_or("grid lacks ±i")?;
        let r = e.solution.r.as_ref().ok_or("no R at d = ±i")?;
        let block = r_fe_block(r);
        block_ok &= block_mismatches(&block, &printed_fe_block(sign, beta())).is_empty();
        block_ok &= block[0][1] == CycNum::from_int(-2) * CycNum::i();
    }

    // What holds instead: a verified R for every d, all of the Y = d i form.
    let every_d_braided = entries.iter().all(|e| e.solution.exists && all_pass(&e.solution.verification));
    let every_d_ansatz = entries.iter().all(|e| e.ansatz_mismatches.is_empty());
    if !(every_d_braided && every_d_ansatz && block_ok) {
        return Err("solver result changed: expected a verified Y = d i braiding for every d".into());
    }
    let ok = exists_exactly_on_circle && certificates_cite_hexagon && block_ok;
    let detail = format!(
        "R exists and passes every axiom for all {} grid values (claim: only d = ±i); d = ±i blocks match entry-for-entry, R_FE[0][1] = -2i",
        grid.len()
    );
    Ok((ok, detail))
}

fn coalgebra_family() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let roots = fourth_roots();
    let mut failures = 0;
    let mut seeds = Vec::new();
    for n in 0..50 {
        let p = sample_coalgebra_params(&mut rng, &roots);
        for side in [Side::Lower, Side::Upper] {
            let reps = check_delta_family(&p, side, beta()).map_err(|e| e.to_string())?;
            failures += usize::from(!all_pass(&reps));
        }
        if n < 2 {
            seeds.push(p);
        }
    }
    let nec = necessity_analysis(beta(), &[c("1"), c("-1"), c("i")], &seeds).map_err(|e| e.to_string())?;
    let ok = failures == 0 && nec.passed();
    Ok((
        ok,
        format!(
            "50 tuples x 2 sides, {failures} failing; necessity: {} derived vs {} displayed constraints, {}/{} seeds solved, {} outside family",
            nec.derived_constraints,
            nec.displayed_constraints,
            nec.grid_solutions,
            nec.grid_points,
            nec.outside_family.len()
        ),
    ))
}

fn coproduct_conditions() -> Outcome {
    let b = beta();
    let nil = classify_coproduct(
        &CoproductParams { lower: CoalgebraParams::trivial(c("i")), upper: CoalgebraParams::trivial(c("-i")) },
        b,
    );
    let comm = classify_coproduct(
        &CoproductParams { lower: CoalgebraParams::trivial(c("1")), upper: CoalgebraParams::trivial(c("1")) },
        b,
    );
    let verdicts: Vec<_> = coproduct_grid().iter().map(|p| classify_coproduct(p, b)).collect();
    let valid: Vec<_> = verdicts.iter().filter(|v| v.params.validate().is_ok()).collect();
    let built = valid.iter().all(|v| v.accepted && all_pass(&v.reports));
    let ok = nil.certificate == Some(Condition::Nilpotency)
        && comm.certificate == Some(Condition::Commutator)
        && !valid.is_empty()
        && built
        && verdicts.iter().all(|v| v.conditions_agree);
    Ok((
        ok,
        format!(
            "eps = i -> {:?}, eps*eps_bar = 1 -> {:?}; {} of {} grid tuples satisfy the conditions and all build",
            nil.certificate,
            comm.certificate,
            valid.len(),
            verdicts.len()
        ),
    ))
}

fn displayed_upper(d: &CycNum) -> [[CycNum; 4]; 4] {
    let di = d.inv().expect("d nonzero");
    let even = [CycNum::one(), d.clone(), c("-1"), -d];
    let odd = [CycNum::one(), -&di, c("-1"), di];
    [even.clone(), odd.clone(), even, odd]
}

fn normalization() -> Outcome {
    let b = beta();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let f = UqPreset::f();
    let e = UqPreset::e();
    let unit = UqPreset::shared().weight.unit();
    let (mut shape, mut matrix, mut round) = (0, 0, 0);
    for _ in 0..20 {
        let p = sample_coproduct_params(&mut rng);
        let sf = standard_form(&p, b).map_err(|e| e.to_string())?;
        let want: Tensor2 = &f.outer::<1, 2>(unit) + &omega(&-&p.lower.eps).outer::<1, 2>(&f);
        shape += usize::from(sf.quasi.delta(&f) != want);

        let d = &p.upper.c[1] * &p.lower.c[3];
        let de = sf.quasi.delta(&e);
        let m = displayed_upper(&d);
        let mismatch = (0..4).any(|a| (0..4).any(|bb| de.coeff(&[idx(1, 0, a), idx(0, 0, bb)]) != m[a][bb]));
        matrix += usize::from(mismatch || sf.params.d != d);

        let back = apply_automorphism(&sf.quasi, &Automorphism::new(p.lower.c.clone()).map_err(|e| e.to_string())?);
        let orig = build_coproduct(&p, b).map_err(|e| e.to_string())?;
        round += usize::from(back.coproduct() != orig.coproduct() || back.phi() != orig.phi());
    }
    let ok = shape + matrix + round == 0;
    Ok((ok, format!("20 tuples; Delta(F) shape {shape}, upper matrix {matrix}, round trip {round} failing")))
}

fn fusion_rules() -> Outcome {
    let err = |e: quasihopf::Error| e.to_string();
    let mut f1_fails = 0;
    let mut doubled_diff = 0;
    let mut f2_truth = true;
    let mut v11 = 0;
    let mut v12 = 0;
    let mut v12_truth = true;
    let mut k_fail = 0;
    let mut proj = 0;
    for p in [2u32, 3] {
        let m12 = FusionExpr::single(SingletLabel::m(1, 2, p).map_err(err)?);
        for r1 in -4..=4 {
            for r in -4..=4 {
                let fb = SingletLabel::fbar(r1, 1, p).map_err(err)?;
                let f1 = fusion::singlet_fuse(&fb, &SingletLabel::f(r, 1, p).map_err(err)?, p).map_err(err)?;
                f1_fails += usize::from(f1 != fusion::fbar1_times_f1(r1, r, p).map_err(err)?);
                let f2 = fusion::singlet_fuse(&fb, &SingletLabel::f(r, 2, p).map_err(err)?, p).map_err(err)?;
                let doubled = fusion::fbar1_times_f1_m12(r1, r, p).map_err(err)?;
                doubled_diff += usize::from(f2 != doubled);
                f2_truth &= f2 == fusion::fbar1_times_f2(r1, r, p).map_err(err)?
                    && fusion::fuse_exprs(&f1, &m12, p).map_err(err)? == doubled;
            }
        }
        k_fail += fusion::k_homomorphism_check(p, 4).failures.len();
        for r in [1u8, 2] {
            let vbar = TripletLabel::new(TripletKind::Vbar, r, 1, p).map_err(err)?;
            let a = fusion::triplet_fuse(&vbar, &TripletLabel::new(TripletKind::V, 1, 1, p).map_err(err)?, p).map_err(err)?;
            v11 += usize::from(a != fusion::vbar1_times_v11(r, p).map_err(err)?);
            let b = fusion::triplet_fuse(&vbar, &TripletLabel::new(TripletKind::V, 1, 2, p).map_err(err)?, p).map_err(err)?;
            v12 += usize::from(b != fusion::vbar1_times_v11_w12(r, p).map_err(err)?);
            v12_truth &= b == fusion::vbar1_times_v12(r, p).map_err(err)?;
        }
        for r1 in [1u8, 2] {
            for r2 in [1u8, 2] {
                for s1 in 1..=p {
                    for s2 in 1..=p {
                        let a = TripletLabel::new(TripletKind::V, r1, s1, p).map_err(err)?;
                        let b = TripletLabel::new(TripletKind::Vbar, r2, s2, p).map_err(err)?;
                        let e = fusion::triplet_fuse(&a, &b, p).map_err(err)?;
                        proj += usize::from(!e.iter().all(|(l, _)| l.is_projective(p)));
                    }
                }
            }
        }
    }
    if !(f2_truth && v12_truth && f1_fails == 0 && v11 == 0 && k_fail == 0 && proj == 0) {
        return Err("fusion result changed: expected the undoubled products and passing sub-checks".into());
    }
    let ok = doubled_diff == 0 && v12 == 0;
    Ok((
        ok,
        format!(
            "Fbar[r',1]xF[r,1] ok, V̄⊠V11 ok, K-homomorphism ok, V⊠V̄ projective ok; Fbar[r',1]xF[r,2] differs from the doubled sum in {doubled_diff} pairs and Vbar[r,1]xV[1,2] in {v12} cases (both equal the undoubled sum)"
        ),
    ))
}

fn twist_invariance() -> Outcome {
    let b = beta();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let cartan = build_cartan(b).quasi_bialgebra();
    let standard = braided_standard(&c("i"), &c("1"), b).map_err(|e| e.to_string())?;
    let mut changed = 0;
    for q in [&cartan, &standard] {
        let base: Vec<bool> = verify_all(q).iter().map(AxiomReport::passed).collect();
        for _ in 0..100 {
            let t = random_twist(&mut rng, q, 3);
            let got: Vec<bool> = verify_all(&gauge_twist(q, &t)).iter().map(AxiomReport::passed).collect();
            changed += usize::from(got != base);
        }
    }
    Ok((changed == 0, format!("100 twists on each preset, {changed} changed an outcome")))
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
    /// The stated claim is known not to hold; FAIL is the expected line.
    expected_red: bool,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "certification", limit: Duration::from_secs(5), run: certification, expected_red: false },
        Criterion { name: "rmatrix classification", limit: Duration::from_secs(30), run: rmatrix, expected_red: true },
        Criterion { name: "coalgebra family", limit: Duration::from_secs(60), run: coalgebra_family, expected_red: false },
        Criterion { name: "coproduct conditions", limit: Duration::from_secs(30), run: coproduct_conditions, expected_red: false },
        Criterion { name: "normalization", limit: Duration::from_secs(10), run: normalization, expected_red: false },
        Criterion { name: "fusion", limit: Duration::from_secs(60), run: fusion_rules, expected_red: true },
        Criterion { name: "twist invariance", limit: Duration::from_secs(60), run: twist_invariance, expected_red: false },
    ];
    let mut broken = Vec::new();
    for (n, cr) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (cr.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok((ok, detail)) => (ok && elapsed <= cr.limit, detail),
            Err(e) => {
                broken.push(format!("{}: {e}", cr.name));
                (false, format!("error: {e}"))
            }
        };
        println!(
            "{} {} {} [{:.2}s / {}s] {}",
            if pass { "PASS" } else { "FAIL" },
            n + 1,
            cr.name,
            elapsed.as_secs_f64(),
            cr.limit.as_secs(),
            detail
        );
        if pass == cr.expected_red {
            broken.push(format!("{}: expected {}", cr.name, if cr.expected_red { "FAIL" } else { "PASS" }));
        }
    }
    if broken.is_empty() {
        ExitCode::SUCCESS
    } else {
        for b in &broken {
            eprintln!("unexpected: {b}");
        }
        ExitCode::FAILURE
    }
}
