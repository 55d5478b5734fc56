use rand::Rng;

use crate::error::{CoreError, Result};

/// Segment activations of a seven-segment display, ordered x1..x7.
///
/// The ordering follows the standard display convention: x1..x7 map to
/// segments a..g, where a is the top bar, b/c the right column (top/bottom),
/// d the bottom bar, e/f the left column (bottom/top), and g the central bar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SegmentVector {
    bits: [u8; 7],
}

/// Canonical encodings for digits 0..9 under the a..g convention.
const DIGIT_SEGMENTS: [[u8; 7]; 10] = [
    [1, 1, 1, 1, 1, 1, 0], // 0: everything except the central bar
    [0, 1, 1, 0, 0, 0, 0], // 1: right column only
    [1, 1, 0, 1, 1, 0, 1], // 2
    [1, 1, 1, 1, 0, 0, 1], // 3
    [0, 1, 1, 0, 0, 1, 1], // 4
    [1, 0, 1, 1, 0, 1, 1], // 5
    [1, 0, 1, 1, 1, 1, 1], // 6
    [1, 1, 1, 0, 0, 0, 0], // 7
    [1, 1, 1, 1, 1, 1, 1], // 8: all seven on
    [1, 1, 1, 1, 0, 1, 1], // 9
];

impl SegmentVector {
    pub fn bits(&self) -> [u8; 7] {
        self.bits
    }

    /// Segment activations as a real-valued feature vector (0.0 / 1.0).
    pub fn to_features(self) -> Vec<f64> {
        self.bits.iter().map(|&b| f64::from(b)).collect()
    }
}

/// Canonical seven-segment encoding of a decimal digit.
pub fn digit_segments(digit: u8) -> Result<SegmentVector> {
    if digit > 9 {
        return Err(CoreError::InvalidArgument(format!(
            "digit must be in 0..=9, got {digit}"
        )));
    }
    Ok(SegmentVector {
        bits: DIGIT_SEGMENTS[digit as usize],
    })
}

/// Draw a noisy observation of `digit`: each segment bit is independently
/// flipped with probability `noise_p`, then emitted as 0.0/1.0 reals.
pub fn sample_example<R: Rng>(digit: u8, noise_p: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(0.0..0.5).contains(&noise_p) {
        return Err(CoreError::InvalidArgument(format!(
            "noise_p must be in [0, 0.5), got {noise_p}"
        )));
    }
    let mut bits = digit_segments(digit)?.bits;
    for b in &mut bits {
        if noise_p > 0.0 && rng.random_bool(noise_p) {
            *b = 1 - *b;
        }
    }
    Ok(bits.iter().map(|&b| f64::from(b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits_str(v: &SegmentVector) -> String {
        v.bits().iter().map(|b| b.to_string()).collect()
    }

    #[test]
    fn eight_turns_on_all_seven() {
        assert_eq!(bits_str(&digit_segments(8).unwrap()), "1111111");
    }

    #[test]
    fn one_activates_only_two_segments() {
        assert_eq!(bits_str(&digit_segments(1).unwrap()), "0110000");
    }

    #[test]
    fn zero_activates_all_but_central() {
        assert_eq!(bits_str(&digit_segments(0).unwrap()), "1111110");
    }

    #[test]
    fn encodings_are_pairwise_distinct() {
        for a in 0..10u8 {
            for b in (a + 1)..10u8 {
                assert_ne!(
                    digit_segments(a).unwrap(),
                    digit_segments(b).unwrap(),
                    "digits {a} and {b} share an encoding"
                );
            }
        }
    }

    #[test]
    fn out_of_range_digit_is_rejected() {
        assert!(matches!(
            digit_segments(10),
            Err(CoreError::InvalidArgument(_))
        ));
    }

    #[test]
    fn zero_noise_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let eight = sample_example(8, 0.0, &mut rng).unwrap();
        assert_eq!(eight, vec![1.0; 7]);
        let one = sample_example(1, 0.0, &mut rng).unwrap();
        assert_eq!(one, vec![0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn flip_rate_matches_noise_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let canonical = digit_segments(8).unwrap().to_features();
        let draws = 100_000usize;
        let mut flips = 0usize;
        for _ in 0..draws {
            let x = sample_example(8, 0.05, &mut rng).unwrap();
            flips += x
                .iter()
                .zip(&canonical)
                .filter(|(a, b)| (*a - *b).abs() > 0.5)
                .count();
        }
        let rate = flips as f64 / (draws * 7) as f64;
        assert!(
            (rate - 0.05).abs() < 0.005,
            "per-bit flip rate {rate} not within 0.05 +- 0.005"
        );
    }

    #[test]
    fn invalid_noise_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_example(3, 0.5, &mut rng).is_err());
        assert!(sample_example(3, -0.01, &mut rng).is_err());
    }
}
