use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::rect::ball_lifts;
use crate::error::{Error, Result};
use crate::lfcore::nontrivial_words;
use crate::mgraph::{EdgeLift, MarkedGraph};
use crate::scalar::Scalar;
use crate::words::Word;

/// Outcome of the bounded emptiness scan of `⟨a⟩∩⟨b̄⟩` and `⟨ā⟩∩⟨b⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwiceLight {
    /// A word in one of the two intersections, with its corner
    /// `(forward in A, forward in B)`.
    NotTwiceLight { witness: Word, corner: (bool, bool) },
    /// Both intersections are empty among words up to `max_word_len`.
    Unknown { max_word_len: usize },
}

pub fn twice_light_scan<S: Scalar>(
    ta: &MarkedGraph<S>,
    a: &EdgeLift,
    tb: &MarkedGraph<S>,
    b: &EdgeLift,
    max_word_len: usize,
) -> Result<TwiceLight> {
    let (ar, br) = (a.reversed(), b.reversed());
    for w in nontrivial_words(ta.alphabet().rank(), max_word_len) {
        if ta.horizon_member(a, &w)? && tb.horizon_member(&br, &w)? {
            return Ok(TwiceLight::NotTwiceLight {
                witness: w,
                corner: (true, false),
            });
        }
        if ta.horizon_member(&ar, &w)? && tb.horizon_member(b, &w)? {
            return Ok(TwiceLight::NotTwiceLight {
                witness: w,
                corner: (false, true),
            });
        }
    }
    Ok(TwiceLight::Unknown { max_word_len })
}

/// Compares the whole-edge horizon test against the test through random
/// interior points of random edges. Returns the number of agreeing samples;
/// any disagreement is an error.
pub fn subarc_spot_check<S: Scalar>(
    t: &MarkedGraph<S>,
    max_anchor: usize,
    max_word_len: usize,
    samples: usize,
    seed: u64,
) -> Result<usize> {
    let lifts = ball_lifts(t, max_anchor);
    let words = nontrivial_words(t.alphabet().rank(), max_word_len);
    if lifts.is_empty() || words.is_empty() {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let e = &lifts[rng.gen_range(0..lifts.len())];
        let w = &words[rng.gen_range(0..words.len())];
        let len = t.graph().length(e.edge).clone();
        let k = rng.gen_range(1..16u64);
        let offset = len * S::from_u64(k).expect("small") / S::from_u64(16).expect("small");
        let axis = t.axis(w)?;
        let whole = t.horizon_member_axis(e, &axis);
        let inner = t.forward_end_beyond_point(e, &offset, &axis)?;
        if whole != inner {
            return Err(Error::Domain(format!(
                "subarc horizon test disagrees for {} at {}:{:?}",
                t.alphabet().format(w),
                t.graph().format_path(&e.anchor),
                e.edge
            )));
        }
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mgraph::presets::{barbell, rose};
    use crate::words::Alphabet;
    use crate::Rational;

    #[test]
    fn petal_is_not_twice_light() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = rose::<Rational>(&al);
        let a = r.edge_lift(&[], r.graph().parse_path("a").unwrap()[0]).unwrap();
        let b = r.edge_lift(&[], r.graph().parse_path("b").unwrap()[0]).unwrap();
        assert!(matches!(
            twice_light_scan(&r, &a, &r, &b, 3).unwrap(),
            TwiceLight::NotTwiceLight { .. }
        ));
        // Same edge in both coordinates: opposite horizons never meet.
        assert_eq!(
            twice_light_scan(&r, &a, &r, &a, 4).unwrap(),
            TwiceLight::Unknown { max_word_len: 4 }
        );
    }

    #[test]
    fn interior_points_agree() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(subarc_spot_check(&rose::<Rational>(&al), 2, 4, 200, 7).unwrap(), 200);
        assert_eq!(subarc_spot_check(&barbell::<Rational>(), 2, 4, 200, 11).unwrap(), 200);
    }
}
