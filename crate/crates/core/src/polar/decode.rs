use super::transform::{bit_reverse_permute, log2_len};
use crate::{Error, Result};

/// Channel LLRs are clipped to this magnitude before decoding.
pub const LLR_CLIP: f64 = 40.0;

/// `ln P(y | bit 0) / P(y | bit 1)` for `y = gain * s + n`, `n ~ N(0, sigma_sq)`,
/// with bit 0 sent as `s = +sqrt_pu` and bit 1 as `s = -sqrt_pu`.
pub fn channel_llr(y: f64, effective_gain: f64, sqrt_pu: f64, sigma_sq: f64) -> f64 {
    2.0 * y * effective_gain * sqrt_pu / sigma_sq
}

/// Check-node combination `2 atanh(tanh(a/2) tanh(b/2))`, written in the
/// equivalent form `sign(a) sign(b) min(|a|,|b|) + ln(1+e^-|a+b|) - ln(1+e^-|a-b|)`
/// which stays finite for any finite inputs.
#[inline]
pub(crate) fn check_node(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

#[inline]
pub(crate) fn variable_node(a: f64, b: f64, partial: u8) -> f64 {
    if partial == 0 {
        b + a
    } else {
        b - a
    }
}

/// Successive-cancellation decoder with reusable buffers for one block length.
///
/// Indices are decoded in natural order `0..N`. The decoder undoes the
/// bit-reversal of [`super::polar_transform`] on the channel LLRs and then
/// runs the usual recursive `f`/`g` schedule on `u F^{(x)n}`.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    len: usize,
    llr: Vec<f64>,
    scratch: Vec<f64>,
    partial: Vec<u8>,
}

impl ScDecoder {
    pub fn new(len: usize) -> Result<Self> {
        log2_len(len)?;
        Ok(Self {
            len,
            llr: vec![0.0; len],
            scratch: vec![0.0; len.max(2)],
            partial: vec![0; len],
        })
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Run SC, asking `decide(index, llr)` for each bit in order. The returned
    /// bit is fed back into the partial sums, so a genie can return the true
    /// bit while recording statistics.
    pub fn decode_with<F>(&mut self, channel_llrs: &[f64], mut decide: F) -> Result<()>
    where
        F: FnMut(usize, f64) -> u8,
    {
        if channel_llrs.len() != self.len {
            return Err(Error::LengthMismatch {
                what: "channel LLRs",
                expected: self.len,
                actual: channel_llrs.len(),
            });
        }
        for (dst, &src) in self.llr.iter_mut().zip(channel_llrs) {
            *dst = if src.is_nan() { 0.0 } else { src.clamp(-LLR_CLIP, LLR_CLIP) };
        }
        bit_reverse_permute(&mut self.llr);
        recurse(&self.llr, &mut self.scratch, &mut self.partial, 0, &mut decide);
        Ok(())
    }

    /// Decode into `out`. `frozen[i]` is `Some(value)` for frozen index `i`
    /// and `None` for an information index; ties decide 0.
    pub fn decode_into(&mut self, channel_llrs: &[f64], frozen: &[Option<u8>], out: &mut [u8]) -> Result<()> {
        if frozen.len() != self.len || out.len() != self.len {
            return Err(Error::LengthMismatch {
                what: "frozen pattern / output",
                expected: self.len,
                actual: frozen.len().min(out.len()),
            });
        }
        self.decode_with(channel_llrs, |i, l| {
            let bit = match frozen[i] {
                Some(v) => v,
                None => u8::from(l < 0.0),
            };
            out[i] = bit;
            bit
        })
    }
}

fn recurse<F: FnMut(usize, f64) -> u8>(llr: &[f64], scratch: &mut [f64], x: &mut [u8], offset: usize, decide: &mut F) {
    let m = llr.len();
    if m == 1 {
        x[0] = decide(offset, llr[0]);
        return;
    }
    let h = m / 2;
    let (child, rest) = scratch.split_at_mut(h);
    let (top, bottom) = llr.split_at(h);
    for ((c, &a), &b) in child.iter_mut().zip(top).zip(bottom) {
        *c = check_node(a, b);
    }
    let (x_top, x_bottom) = x.split_at_mut(h);
    recurse(child, rest, x_top, offset, decide);
    for (((c, &a), &b), &p) in child.iter_mut().zip(top).zip(bottom).zip(x_top.iter()) {
        *c = variable_node(a, b, p);
    }
    recurse(child, rest, x_bottom, offset + h, decide);
    for (a, &b) in x_top.iter_mut().zip(x_bottom.iter()) {
        *a ^= b;
    }
}

/// One-shot SC decode. `frozen_values[j]` is the value of `frozen_set[j]`.
pub fn sc_decode(llrs: &[f64], frozen_set: &[usize], frozen_values: &[u8]) -> Result<Vec<u8>> {
    let len = llrs.len();
    log2_len(len)?;
    let mut pattern = vec![None; len];
    for (j, &idx) in frozen_set.iter().enumerate() {
        if idx >= len {
            return Err(Error::invalid("frozen_set", format!("index {idx} out of range for N = {len}")));
        }
        let v = *frozen_values.get(j).ok_or(Error::MissingFrozenValue(idx))?;
        if v > 1 {
            return Err(Error::invalid("frozen_values", format!("{v} is not a bit")));
        }
        pattern[idx] = Some(v);
    }
    let mut out = vec![0u8; len];
    ScDecoder::new(len)?.decode_into(llrs, &pattern, &mut out)?;
    Ok(out)
}
