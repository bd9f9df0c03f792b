use crate::{Error, Result};

pub(crate) fn log2_len(len: usize) -> Result<u32> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::BadLength(len));
    }
    Ok(len.trailing_zeros())
}

/// Reverse the low `bits` bits of `i`.
pub(crate) fn bit_reverse(i: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - bits)
    }
}

/// Apply the bit-reversal permutation in place.
pub(crate) fn bit_reverse_permute<T>(v: &mut [T]) {
    let bits = v.len().trailing_zeros();
    for i in 0..v.len() {
        let j = bit_reverse(i, bits);
        if i < j {
            v.swap(i, j);
        }
    }
}

/// `x <- x F^{(x)n}` over GF(2), in place.
pub(crate) fn butterfly(x: &mut [u8]) {
    let n = x.len();
    let mut half = n / 2;
    while half >= 1 {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= b;
            }
        }
        half /= 2;
    }
}

/// Polar transform `x = u B_N F^{(x)n}` in `O(N log N)`.
///
/// `B_N` commutes with `F^{(x)n}`, so the bit-reversal is applied to `u`
/// before the butterfly. The transform is its own inverse.
pub fn polar_transform(u: &[u8]) -> Result<Vec<u8>> {
    log2_len(u.len())?;
    let mut x = u.to_vec();
    polar_transform_in_place(&mut x)?;
    Ok(x)
}

pub fn polar_transform_in_place(x: &mut [u8]) -> Result<()> {
    log2_len(x.len())?;
    bit_reverse_permute(x);
    butterfly(x);
    Ok(())
}
