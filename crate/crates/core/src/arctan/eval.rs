use num_bigint::BigInt;
use num_traits::One;

use super::dyadic::{ceil_shr, floor_shr, Dyadic, DyadicInterval};
use super::key::{terms_enclosure, ArcTanTerm};

/// Certified enclosure of `sum c_i arctan(r_i)` at `precision_bits`.
///
/// A tight enclosure (width at most `g = 2^-(p+1)`) is rounded outward to the
/// grid `g` and widened by `2g` on each side. The padding makes results
/// nested across precisions: for `p' > p` the tight enclosure at `p'` plus its
/// own padding stays inside the padding at `p`. Width is at most `7g`, below
/// `2^(2-p)` per term. The empty sum is exactly `[0, 0]`.
pub fn eval_interval(terms: &[ArcTanTerm], precision_bits: u32) -> DyadicInterval {
    let p = precision_bits.max(8);
    if terms.is_empty() {
        return DyadicInterval::zero(p);
    }
    let grid = p + 1;
    let weight: u64 = terms.iter().map(|t| t.coefficient.unsigned_abs()).sum();
    let mut guard = 16 + 64 - weight.max(1).leading_zeros() + (32 - p.leading_zeros());
    loop {
        let w = grid + guard;
        let (lo, hi) = terms_enclosure(terms, w);
        if &hi - &lo <= BigInt::one() << guard as usize {
            let drop = guard as u64;
            let two = BigInt::from(2);
            let l = floor_shr(&lo, drop) - &two;
            let h = ceil_shr(&hi, drop) + &two;
            return DyadicInterval::new(Dyadic::from_fixed(l, grid), Dyadic::from_fixed(h, grid), p)
                .expect("ordered");
        }
        guard *= 2;
    }
}
