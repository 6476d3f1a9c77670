//! Seeded random test families.
//!
//! Both generators draw from ChaCha8 seeded with `seed`; step functions use
//! stream 0 and tail profiles stream 1, so adding members to one family never
//! perturbs the other.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::profile::RearrangementProfile;
use crate::stepfn::StepFunction;

/// Version tag of the generators below; bump when the sampling changes.
pub const FAMILY_VERSION: u32 = 1;

pub const STEP_COUNT: usize = 500;
pub const TAIL_COUNT: usize = 100;
pub const MAX_ATOMS: usize = 20;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// One step function with `1..=max_atoms` atoms, magnitudes log-uniform in
/// `[1e-3, 1e3]`, random signs, lengths log-uniform in `[1e-2, 1e1]` and
/// gaps in `[0, 1)` (a zero gap makes neighbours touch).
pub fn random_step<R: Rng>(rng: &mut R, max_atoms: usize) -> StepFunction {
    let n = rng.gen_range(1..=max_atoms);
    let mut x = rng.gen_range(-5.0..5.0);
    let mut triples = Vec::with_capacity(n);
    for _ in 0..n {
        if rng.gen_bool(0.7) {
            x += rng.gen_range(0.0..1.0);
        }
        let len = log_uniform(rng, 1e-2, 1e1);
        let mag = log_uniform(rng, 1e-3, 1e3);
        let v = if rng.gen_bool(0.5) { mag } else { -mag };
        triples.push((x, x + len, v));
        x += len;
    }
    StepFunction::from_triples(&triples).expect("atoms are disjoint by construction")
}

/// Piece-plus-tail profile with `γ = 1/p + e`, `e ∈ (0, 3]`, so `γp > 1`.
pub fn random_tail_profile<R: Rng>(rng: &mut R, p: f64) -> RearrangementProfile {
    let n = rng.gen_range(0..=5);
    let mut t = 0.0;
    let mut v = log_uniform(rng, 1e-2, 1e3);
    let mut triples = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        let len = log_uniform(rng, 1e-2, 1e1);
        triples.push((t, t + len, v));
        t += len;
        v *= rng.gen_range(0.05..1.0);
    }
    let last = triples.last().expect("at least one piece").2;
    let gamma = 1.0 / p + (3.0 - rng.gen_range(0.0..3.0));
    // head value c·T^{-γ} at most the last piece value
    let coeff = last * t.powf(gamma) * rng.gen_range(0.1..=1.0);
    RearrangementProfile::from_triples(&triples, Some((t, coeff, gamma)))
        .expect("monotone by construction")
}

pub fn step_family(seed: u64) -> Vec<StepFunction> {
    let mut rng = rng(seed, 0);
    (0..STEP_COUNT)
        .map(|_| random_step(&mut rng, MAX_ATOMS))
        .collect()
}

/// Tail profiles depend on `p` through `γ`; each `p` gets its own draw.
pub fn tail_family(seed: u64, p: f64) -> Vec<RearrangementProfile> {
    let mut rng = rng(seed, 1 + p.to_bits());
    (0..TAIL_COUNT)
        .map(|_| random_tail_profile(&mut rng, p))
        .collect()
}

/// Pairs of step functions for the quasi-triangle check.
pub fn step_pairs(seed: u64, count: usize) -> Vec<(StepFunction, StepFunction)> {
    let mut rng = rng(seed, 2);
    (0..count)
        .map(|_| {
            (
                random_step(&mut rng, MAX_ATOMS),
                random_step(&mut rng, MAX_ATOMS),
            )
        })
        .collect()
}

/// The step family (rearranged) followed by the tail family for `p`.
pub fn profile_family(seed: u64, p: f64) -> Vec<RearrangementProfile> {
    step_family(seed)
        .iter()
        .map(StepFunction::rearrange)
        .chain(tail_family(seed, p))
        .collect()
}
