//! Shared fixtures: the planar reference system and a seeded corpus of
//! random non-resonant polynomial saddles.

use manifold_cert::{verify_spectrum, MultiIndex, PolySeries, Scalar, VectorField};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_cafe;

/// Raw data of one random saddle, mode-independent.
#[derive(Debug, Clone)]
pub struct RandomSaddle {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub monomials: Vec<(usize, Vec<u32>, f64)>,
}

impl RandomSaddle {
    pub fn build<S: Scalar>(&self) -> VectorField<S> {
        let spectrum = verify_spectrum::<S>(&self.lambda, &self.mu).expect("non-resonant");
        let d = self.lambda.len() + self.mu.len();
        let deg = self
            .monomials
            .iter()
            .map(|(_, e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(2);
        let mut f = vec![PolySeries::zero(d, deg); d];
        for (component, exps, coeff) in &self.monomials {
            f[*component].add_term(MultiIndex::new(exps.clone()), S::from_f64(*coeff));
        }
        VectorField::new(spectrum, f, None)
    }
}

/// Ten reproducible saddles with d <= 3 and deg F <= 4, non-resonant by
/// construction (rejection sampling on the verified spectrum with a floor on
/// the divisor bound to keep coefficient growth sane).
pub fn random_corpus() -> Vec<RandomSaddle> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let shapes = [(1usize, 1usize), (2, 1), (1, 2)];
    let mut out = Vec::with_capacity(10);
    while out.len() < 10 {
        let (d_s, d_u) = shapes[out.len() % shapes.len()];
        let d = d_s + d_u;

        let mut lambda: Vec<f64> = (0..d_s).map(|_| -rng.gen_range(0.4..3.0)).collect();
        let mut mu: Vec<f64> = (0..d_u).map(|_| rng.gen_range(0.4..3.0)).collect();
        lambda.sort_by(|a, b| a.partial_cmp(b).unwrap());
        mu.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let spectrum = match verify_spectrum::<f64>(&lambda, &mu) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if spectrum.omega() < 0.03 {
            continue; // too close to a resonance line
        }

        let mut monomials = Vec::new();
        for component in 0..d {
            for _ in 0..rng.gen_range(2..=4) {
                let order = rng.gen_range(2..=4u32);
                let mut exps = vec![0u32; d];
                for _ in 0..order {
                    exps[rng.gen_range(0..d)] += 1;
                }
                let coeff = rng.gen_range(-2.0..2.0);
                monomials.push((component, exps, coeff));
            }
        }
        out.push(RandomSaddle {
            lambda,
            mu,
            monomials,
        });
    }
    out
}
