//! Seeded random parameters and gauge twists for sweeps and property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::classification::{CoalgebraParams, CoproductParams};
use crate::cyclo::CycNum;
use crate::quasi::{GaugeTwist, QuasiBialgebra};
use crate::tensor::Tensor;

/// `{±1, ±i, ±ζ, 2, 3, 1/2}`.
pub fn value_pool() -> Vec<CycNum> {
    let z = CycNum::zeta();
    vec![
        CycNum::one(),
        CycNum::from_int(-1),
        CycNum::i(),
        -CycNum::i(),
        z.clone(),
        -z,
        CycNum::from_int(2),
        CycNum::from_int(3),
        CycNum::frac(1, 2).expect("nonzero"),
    ]
}

pub fn fourth_roots() -> Vec<CycNum> {
    (0..4).map(CycNum::i_pow).collect()
}

fn pick<R: Rng>(rng: &mut R, pool: &[CycNum]) -> CycNum {
    pool.choose(rng).expect("nonempty pool").clone()
}

/// `c_1, c_2, c_3` from the pool and `ε` from `eps_pool`.
pub fn sample_coalgebra_params<R: Rng>(rng: &mut R, eps_pool: &[CycNum]) -> CoalgebraParams {
    let pool = value_pool();
    let c = [CycNum::one(), pick(rng, &pool), pick(rng, &pool), pick(rng, &pool)];
    CoalgebraParams::new(c, pick(rng, eps_pool)).expect("pool values are nonzero")
}

/// A tuple satisfying the nilpotency and commutator conditions.
pub fn sample_coproduct_params<R: Rng>(rng: &mut R) -> CoproductParams {
    let eps = [CycNum::one(), CycNum::from_int(-1)];
    let lower = sample_coalgebra_params(rng, &eps);
    CoproductParams::completing(lower, pick(rng, &value_pool())).expect("completion is valid")
}

/// `J = 1⊗1 + Σ c x⊗y` with `ε(x) = ε(y) = 0`, retried until invertible.
pub fn random_twist<R: Rng>(rng: &mut R, q: &QuasiBialgebra, max_terms: usize) -> GaugeTwist {
    let pool = value_pool();
    let kernel: Vec<usize> = (0..q.counit().len()).filter(|i| q.counit()[*i].is_zero()).collect();
    loop {
        let n = rng.gen_range(1..=max_terms.max(1));
        let mut terms: Vec<([usize; 2], CycNum)> = Vec::new();
        for _ in 0..n {
            let x = *kernel.choose(rng).expect("nonempty kernel");
            let y = *kernel.choose(rng).expect("nonempty kernel");
            terms.push(([x, y], pick(rng, &pool)));
        }
        let one: crate::Tensor2 = q.unit();
        let j = &one + &Tensor::from_terms(terms);
        if let Ok(t) = GaugeTwist::new(q, j) {
            return t;
        }
    }
}
