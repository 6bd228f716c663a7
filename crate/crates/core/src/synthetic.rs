//! Seeded synthetic diagrams inside the normalized triangle.
//!
//! Signal points have persistence at least [`SIGNAL_MIN_PERSISTENCE`]; noise
//! points sit near the diagonal with persistence at most
//! [`NOISE_MAX_PERSISTENCE`].

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagram::{Cornerpoint, PersistenceDiagram};
use crate::error::{Error, Result};

pub const SIGNAL_MIN_PERSISTENCE: f64 = 0.2;
pub const NOISE_MAX_PERSISTENCE: f64 = 0.05;

/// Draws one diagram with the given numbers of signal and noise points.
pub fn synthetic_diagram<R: Rng + ?Sized>(rng: &mut R, signal: usize, noise: usize) -> PersistenceDiagram {
    let mut points = Vec::with_capacity(signal + noise);
    for _ in 0..signal {
        let birth = rng.gen_range(0.0..1.0 - SIGNAL_MIN_PERSISTENCE);
        let death = rng.gen_range(birth + SIGNAL_MIN_PERSISTENCE..=1.0);
        points.push((birth, death));
    }
    for _ in 0..noise {
        let birth = rng.gen_range(0.0..1.0 - NOISE_MAX_PERSISTENCE);
        // (0, max], never on the diagonal
        let persistence = NOISE_MAX_PERSISTENCE * (1.0 - rng.gen::<f64>());
        points.push((birth, birth + persistence));
    }
    PersistenceDiagram::new(points.into_iter().filter_map(|(b, d)| Cornerpoint::new(b, d, 1).ok()))
}

/// Splits a point budget into `(signal, noise)` counts.
pub fn split_points(points: usize, noise_fraction: f64) -> Result<(usize, usize)> {
    if !(0.0..=1.0).contains(&noise_fraction) {
        return Err(Error::InvalidArgument(format!(
            "noise fraction {noise_fraction} must lie in [0, 1]"
        )));
    }
    let noise = (points as f64 * noise_fraction).round() as usize;
    Ok((points - noise.min(points), noise.min(points)))
}

/// `count` diagrams of `points` cornerpoints each, reproducible from `seed`.
pub fn synthetic_database(
    count: usize,
    points: usize,
    noise_fraction: f64,
    seed: u64,
) -> Result<Vec<PersistenceDiagram>> {
    if count == 0 || points == 0 {
        return Err(Error::InvalidArgument("count and points must be at least 1".into()));
    }
    let (signal, noise) = split_points(points, noise_fraction)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| synthetic_diagram(&mut rng, signal, noise)).collect())
}
