//! A sphere objective over the continuous genes, for checking that the
//! engines' step-size adaptation actually converges.

use rand::Rng;

use crate::fitness::{GeneKind, Genome, CONTINUOUS_GENES};
use crate::geometry::circular_distance;

use super::Objective;

/// Negated squared distance of the continuous genes to a fixed target.
/// Cut bits are ignored; azimuth distance is circular.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereStub {
    pub target: [f64; CONTINUOUS_GENES],
}

impl SphereStub {
    /// A target drawn uniformly from the central 80% of every gene range.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut target = [0.0; CONTINUOUS_GENES];
        for (i, t) in target.iter_mut().enumerate() {
            let kind = GeneKind::of(i);
            let (lo, _) = kind.range();
            *t = lo + kind.span() * rng.random_range(0.1..0.9);
        }
        SphereStub { target }
    }

    fn offsets<'a>(&'a self, genome: &'a Genome) -> impl Iterator<Item = f64> + 'a {
        self.target.iter().enumerate().map(move |(i, &t)| {
            let x = genome.continuous(i);
            match GeneKind::of(i) {
                GeneKind::Azimuth => circular_distance(x, t),
                _ => x - t,
            }
        })
    }

    /// Euclidean distance to the target over the length of the search
    /// box diagonal.
    pub fn error_fraction(&self, genome: &Genome) -> f64 {
        let dist = self.offsets(genome).map(|d| d * d).sum::<f64>().sqrt();
        let diagonal = (0..CONTINUOUS_GENES)
            .map(|i| GeneKind::of(i).span().powi(2))
            .sum::<f64>()
            .sqrt();
        dist / diagonal
    }
}

impl Objective for SphereStub {
    fn fitness(&self, genome: &Genome) -> f64 {
        -self.offsets(genome).map(|d| d * d).sum::<f64>()
    }
}
