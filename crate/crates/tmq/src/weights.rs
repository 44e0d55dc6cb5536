use tmq_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tmq_core::arith::isqrt;
use tmq_core::tmcore::Weights;

use crate::args::WeightKind;

fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// A weight sequence `w(1), w(2), ...` of one of the built-in kinds.
pub enum WeightSeq {
    Unit,
    Zero,
    Squares,
    FlipSquares,
    Table { values: Vec<Complex64>, flip_squares: bool },
}

impl WeightSeq {
    /// `len` bounds the indices that will be queried for the random kinds.
    pub fn new(kind: WeightKind, seed: u64, len: u64) -> Self {
        let table = |flip_squares| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values = (0..len)
                .map(|_| {
                    let r: f64 = rng.gen::<f64>().sqrt();
                    Complex64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
                })
                .collect();
            WeightSeq::Table { values, flip_squares }
        };
        match kind {
            WeightKind::Unit => WeightSeq::Unit,
            WeightKind::Zero => WeightSeq::Zero,
            WeightKind::Squares => WeightSeq::Squares,
            WeightKind::FlipSquares => WeightSeq::FlipSquares,
            WeightKind::Random => table(false),
            WeightKind::RandomFlipSquares => table(true),
        }
    }
}

impl Weights for WeightSeq {
    fn weight(&self, n: u64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            WeightSeq::Unit => one,
            WeightSeq::Zero => Complex64::new(0.0, 0.0),
            WeightSeq::Squares => {
                if is_square(n) {
                    one
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            WeightSeq::FlipSquares => {
                if is_square(n) {
                    -one
                } else {
                    one
                }
            }
            WeightSeq::Table { values, flip_squares } => {
                let w = values[(n - 1) as usize];
                if *flip_squares && is_square(n) {
                    -w
                } else {
                    w
                }
            }
        }
    }
}
