//! The Cantor function ("devil's staircase") and its generalized inverse.
//!
//! Both directions work on an exact fixed-point image of the `f64` input,
//! so the digit scan is monotone in `x` and free of the error growth that a
//! repeated `3.0 * x` loop suffers after ~30 digits.

/// Number of ternary digits scanned. `3^-64 < 2^-101`, well below `f64`
/// resolution on `[0, 1]`.
pub const TERNARY_DIGITS: u32 = 64;

const FRAC_BITS: u32 = 125;
const FRAC_MASK: u128 = (1u128 << FRAC_BITS) - 1;

/// `floor(x * 2^bits)` for `x` in `[0, 1)`, computed exactly from the bit
/// pattern of `x`.
fn fixed_point(x: f64, bits: u32) -> u128 {
    debug_assert!((0.0..1.0).contains(&x));
    let raw = x.to_bits();
    let biased = ((raw >> 52) & 0x7ff) as i32;
    let frac = raw & ((1u64 << 52) - 1);
    let (mantissa, exp) = if biased == 0 {
        (frac as u128, -1074)
    } else {
        ((frac | (1u64 << 52)) as u128, biased - 1075)
    };
    let shift = exp + bits as i32;
    if shift >= 0 {
        mantissa << shift
    } else if -shift >= 128 {
        0
    } else {
        mantissa >> (-shift)
    }
}

/// Cantor function of `x`.
///
/// Scans the ternary digits of `x`: digits 0 and 2 become binary digits
/// 0 and 1, and the first digit equal to 1 emits a final binary 1 and stops.
/// Values below 0 clamp to 0 and values above 1 clamp to 1.
pub fn cantor_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let mut rem = fixed_point(x, FRAC_BITS);
    // bit k of the binary result (weight 2^-k) lives at position 64 - k
    let mut acc: u128 = 0;
    for k in 1..=TERNARY_DIGITS {
        rem *= 3;
        let digit = rem >> FRAC_BITS;
        rem &= FRAC_MASK;
        match digit {
            0 => {}
            1 => {
                acc |= 1u128 << (TERNARY_DIGITS - k);
                break;
            }
            _ => acc |= 1u128 << (TERNARY_DIGITS - k),
        }
    }
    acc as f64 / 2f64.powi(TERNARY_DIGITS as i32)
}

/// Generalized inverse of [`cantor_cdf`]: the smallest `f64` `x` in `[0, 1]`
/// with `cantor_cdf(x) >= u`.
///
/// A first guess maps the binary digits `b_k` of `u` to ternary digits
/// `2 b_k`, using the expansion that ends in repeating ones so the guess
/// sits at the left end of the flat piece. The guess is then corrected by a
/// search over adjacent floats, which makes the Galois equivalence
/// `cantor_quantile(u) <= x  <=>  u <= cantor_cdf(x)` exact in floating
/// point.
pub fn cantor_quantile(u: f64) -> f64 {
    if u.is_nan() {
        return f64::NAN;
    }
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let guess = ternary_guess(u);
    smallest_float_reaching(guess, u)
}

fn ternary_guess(u: f64) -> f64 {
    let scaled = fixed_point(u, TERNARY_DIGITS);
    // a terminating expansion is rewritten to end in ...0111..., whose
    // ternary image is the left end of the plateau at height u
    let digits = scaled.saturating_sub(1);
    let mut x = 0.0;
    for k in (1..=TERNARY_DIGITS).rev() {
        let bit = (digits >> (TERNARY_DIGITS - k)) & 1;
        x = (x + 2.0 * bit as f64) / 3.0;
    }
    x
}

/// Exponential search then bisection over the ordered bit patterns of
/// non-negative floats.
fn smallest_float_reaching(guess: f64, u: f64) -> f64 {
    let reaches = |bits: u64| cantor_cdf(f64::from_bits(bits)) >= u;
    let top = 1f64.to_bits();
    let start = guess.clamp(0.0, 1.0).to_bits();

    // invariant after bracketing: !reaches(lo) && reaches(hi)
    let (mut lo, mut hi);
    if reaches(start) {
        hi = start;
        let mut step = 1u64;
        loop {
            let cand = hi.saturating_sub(step);
            if !reaches(cand) {
                lo = cand;
                break;
            }
            hi = cand;
            step = step.saturating_mul(2);
        }
    } else {
        lo = start;
        let mut step = 1u64;
        loop {
            let cand = lo.saturating_add(step).min(top);
            if reaches(cand) {
                hi = cand;
                break;
            }
            lo = cand;
            step = step.saturating_mul(2);
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    f64::from_bits(hi)
}
