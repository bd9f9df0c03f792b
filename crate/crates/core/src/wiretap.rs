//! Secret/random/frozen partition of a polar code for the wiretap channel.
//!
//! Secret bits go where Bob is reliable and Eve is not (`G`), uniformly
//! random bits fill the positions both can read (`M`), and everything Bob
//! cannot read is frozen to zero (`B`).

use crate::polar::{polar_transform_in_place, ConstructionRecord, PolarConstruction, ScDecoder};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiretapPartition {
    n: u32,
    g_set: Vec<usize>,
    m_set: Vec<usize>,
    b_set: Vec<usize>,
    /// Per index: frozen value for `B`, `None` for `G` and `M`.
    pattern: Vec<Option<u8>>,
}

impl WiretapPartition {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn block_length(&self) -> usize {
        1 << self.n
    }

    pub fn g_set(&self) -> &[usize] {
        &self.g_set
    }

    pub fn m_set(&self) -> &[usize] {
        &self.m_set
    }

    pub fn b_set(&self) -> &[usize] {
        &self.b_set
    }

    pub fn secret_len(&self) -> usize {
        self.g_set.len()
    }

    pub fn random_len(&self) -> usize {
        self.m_set.len()
    }

    /// `|G| / N`
    pub fn secrecy_rate(&self) -> f64 {
        self.g_set.len() as f64 / self.block_length() as f64
    }

    pub(crate) fn frozen_pattern(&self) -> &[Option<u8>] {
        &self.pattern
    }
}

/// Split Bob's top-`k_bob` information set into secret and random parts.
///
/// The random set is the `k_eve` indices of Bob's information set that rank
/// best for Eve. When both rankings are exact and Eve's channel is degraded
/// this equals `A ∩ E`; with estimated rankings it keeps `M ⊆ A` and
/// `|G| = k_bob - k_eve` regardless.
pub fn build_partition(
    bob: &PolarConstruction,
    eve: &PolarConstruction,
    k_bob: usize,
    k_eve: usize,
) -> Result<WiretapPartition> {
    if bob.n() != eve.n() {
        return Err(Error::invalid(
            "eve",
            format!("block length 2^{} differs from Bob's 2^{}", eve.n(), bob.n()),
        ));
    }
    if k_eve > k_bob {
        return Err(Error::RateInversion { k_bob, k_eve });
    }
    let len = bob.block_length();
    if k_bob > len {
        return Err(Error::invalid("k_bob", format!("{k_bob} exceeds block length {len}")));
    }

    let mut a_set: Vec<usize> = bob.ranking().into_iter().take(k_bob).collect();
    a_set.sort_by(|&x, &y| eve.compare(x, y));
    let mut m_set = a_set[..k_eve].to_vec();
    let mut g_set = a_set[k_eve..].to_vec();
    m_set.sort_unstable();
    g_set.sort_unstable();

    let mut pattern = vec![Some(0u8); len];
    for &i in g_set.iter().chain(&m_set) {
        pattern[i] = None;
    }
    let b_set = (0..len).filter(|&i| pattern[i].is_some()).collect();

    Ok(WiretapPartition {
        n: bob.n(),
        g_set,
        m_set,
        b_set,
        pattern,
    })
}

/// Place `secret` on `G`, `random` on `M`, zeros on `B` and transform.
pub fn secure_encode(secret: &[u8], random: &[u8], partition: &WiretapPartition) -> Result<Vec<u8>> {
    let mut x = vec![0u8; partition.block_length()];
    secure_encode_into(secret, random, partition, &mut x)?;
    Ok(x)
}

pub fn secure_encode_into(secret: &[u8], random: &[u8], partition: &WiretapPartition, x: &mut [u8]) -> Result<()> {
    check_len("secret bits", partition.secret_len(), secret.len())?;
    check_len("random bits", partition.random_len(), random.len())?;
    check_len("codeword buffer", partition.block_length(), x.len())?;
    x.fill(0);
    for (&i, &b) in partition.g_set.iter().zip(secret) {
        x[i] = b & 1;
    }
    for (&i, &b) in partition.m_set.iter().zip(random) {
        x[i] = b & 1;
    }
    polar_transform_in_place(x)
}

fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { what, expected, actual });
    }
    Ok(())
}

/// Decoded secret and random bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecureDecoded {
    pub secret: Vec<u8>,
    pub random: Vec<u8>,
}

/// SC decoding of `G ∪ M` with `B` frozen to zero, then extraction of both
/// parts. Used unchanged for Bob and for the eavesdropper model.
pub fn secure_decode(llrs: &[f64], partition: &WiretapPartition) -> Result<SecureDecoded> {
    let mut decoder = ScDecoder::new(partition.block_length())?;
    let mut u = vec![0u8; partition.block_length()];
    secure_decode_with(&mut decoder, llrs, partition, &mut u)
}

/// [`secure_decode`] with caller-owned buffers.
pub fn secure_decode_with(
    decoder: &mut ScDecoder,
    llrs: &[f64],
    partition: &WiretapPartition,
    u: &mut [u8],
) -> Result<SecureDecoded> {
    if decoder.len() != partition.block_length() {
        return Err(Error::LengthMismatch {
            what: "decoder",
            expected: partition.block_length(),
            actual: decoder.len(),
        });
    }
    decoder.decode_into(llrs, partition.frozen_pattern(), u)?;
    Ok(SecureDecoded {
        secret: partition.g_set.iter().map(|&i| u[i]).collect(),
        random: partition.m_set.iter().map(|&i| u[i]).collect(),
    })
}

/// Exported description of a partition, stored next to the construction
/// cache files it was derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionRecord {
    pub n: u32,
    pub k_bob: usize,
    pub k_eve: usize,
    pub g_set: Vec<usize>,
    pub m_set: Vec<usize>,
    pub bob_construction: String,
    pub eve_construction: String,
}

impl PartitionRecord {
    pub fn new(partition: &WiretapPartition, bob: &PolarConstruction, eve: &PolarConstruction) -> Self {
        Self {
            n: partition.n,
            k_bob: partition.g_set.len() + partition.m_set.len(),
            k_eve: partition.m_set.len(),
            g_set: partition.g_set.clone(),
            m_set: partition.m_set.clone(),
            bob_construction: ConstructionRecord::from(bob).fingerprint(),
            eve_construction: ConstructionRecord::from(eve).fingerprint(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::{construct_ga, polar_transform};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn partition(n: u32, snr_bob: f64, snr_eve: f64, k_bob: usize, k_eve: usize) -> WiretapPartition {
        let bob = construct_ga(snr_bob, n).unwrap();
        let eve = construct_ga(snr_eve, n).unwrap();
        build_partition(&bob, &eve, k_bob, k_eve).unwrap()
    }

    fn assert_well_formed(p: &WiretapPartition) {
        let mut all: Vec<usize> = p.g_set().iter().chain(p.m_set()).chain(p.b_set()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..p.block_length()).collect::<Vec<_>>());
    }

    #[test]
    fn no_eavesdropper_rate() {
        let p = partition(5, 4.0, 0.1, 20, 0);
        assert!(p.m_set().is_empty());
        assert_eq!(p.secret_len(), 20);
        assert_well_formed(&p);
    }

    #[test]
    fn equal_rates_give_no_secrecy() {
        let p = partition(5, 4.0, 0.1, 12, 12);
        assert!(p.g_set().is_empty());
        assert_eq!(p.secrecy_rate(), 0.0);
        assert_well_formed(&p);
    }

    #[test]
    fn rate_inversion_rejected() {
        let bob = construct_ga(1.0, 4).unwrap();
        assert!(matches!(
            build_partition(&bob, &bob, 3, 4),
            Err(Error::RateInversion { k_bob: 3, k_eve: 4 })
        ));
    }

    #[test]
    fn length_eight_example() {
        // beta_bob = 2, beta_eve = 0.5
        let bob = construct_ga(4.0, 3).unwrap();
        let eve = construct_ga(0.25, 3).unwrap();
        let p = build_partition(&bob, &eve, 5, 2).unwrap();

        let mut by_bob: Vec<usize> = (0..8).collect();
        by_bob.sort_by(|&a, &b| bob.reliability()[a].total_cmp(&bob.reliability()[b]).then(a.cmp(&b)));
        let a_set: Vec<usize> = by_bob[..5].to_vec();
        let mut by_eve = a_set.clone();
        by_eve.sort_by(|&a, &b| eve.reliability()[a].total_cmp(&eve.reliability()[b]).then(a.cmp(&b)));
        let mut want_m = by_eve[..2].to_vec();
        want_m.sort_unstable();

        assert_eq!(p.m_set(), want_m.as_slice());
        assert_eq!(p.secret_len(), 3);
        assert!(p.m_set().iter().all(|i| a_set.contains(i)));
        assert_well_formed(&p);
    }

    #[test]
    fn nesting_repair_keeps_m_inside_a() {
        // Eve "better" than Bob: raw top sets are not nested.
        let p = partition(6, 0.5, 3.0, 30, 10);
        let bob = construct_ga(0.5, 6).unwrap().select_info_set(30).unwrap();
        assert!(p.m_set().iter().all(|i| bob.info_set().contains(i)));
        assert_eq!(p.secret_len(), 20);
        assert_well_formed(&p);
    }

    #[test]
    fn deterministic() {
        assert_eq!(partition(7, 2.0, 0.4, 70, 20), partition(7, 2.0, 0.4, 70, 20));
    }

    #[test]
    fn zero_message_encodes_to_zero() {
        let p = partition(6, 2.0, 0.5, 40, 15);
        let x = secure_encode(&[0; 25], &[0; 15], &p).unwrap();
        assert!(x.iter().all(|&b| b == 0));
    }

    #[test]
    fn length_four_matrix_oracle() {
        // G = {3}, M = {2}, B = {0, 1} (0-based)
        let p = WiretapPartition {
            n: 2,
            g_set: vec![3],
            m_set: vec![2],
            b_set: vec![0, 1],
            pattern: vec![Some(0), Some(0), None, None],
        };
        let x = secure_encode(&[1], &[0], &p).unwrap();
        // Last row of B_4 F^{(x)2} is all ones.
        assert_eq!(x, vec![1, 1, 1, 1]);
        assert_eq!(x, polar_transform(&[0, 0, 0, 1]).unwrap());
    }

    #[test]
    fn encode_is_linear() {
        let p = partition(7, 3.0, 0.5, 80, 30);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut bits = |k| (0..k).map(|_| rng.gen_range(0..2u8)).collect::<Vec<_>>();
        let (s1, r1, s2, r2) = (bits(50), bits(30), bits(50), bits(30));
        let xor = |a: &[u8], b: &[u8]| a.iter().zip(b).map(|(x, y)| x ^ y).collect::<Vec<u8>>();
        let lhs = secure_encode(&xor(&s1, &s2), &xor(&r1, &r2), &p).unwrap();
        let rhs = xor(&secure_encode(&s1, &r1, &p).unwrap(), &secure_encode(&s2, &r2, &p).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn length_mismatch() {
        let p = partition(4, 2.0, 0.5, 10, 3);
        assert!(matches!(secure_encode(&[0; 6], &[0; 3], &p), Err(Error::LengthMismatch { .. })));
    }

    fn noiseless(x: &[u8]) -> Vec<f64> {
        x.iter().map(|&b| if b == 0 { 1e6 } else { -1e6 }).collect()
    }

    #[test]
    fn round_trip_exhaustive_length_eight() {
        let p = partition(3, 4.0, 0.25, 5, 2);
        for s in 0..8u8 {
            for r in 0..4u8 {
                let sb: Vec<u8> = (0..3).map(|i| s >> i & 1).collect();
                let rb: Vec<u8> = (0..2).map(|i| r >> i & 1).collect();
                let x = secure_encode(&sb, &rb, &p).unwrap();
                let d = secure_decode(&noiseless(&x), &p).unwrap();
                assert_eq!(d.secret, sb);
                assert_eq!(d.random, rb);
            }
        }
    }

    #[test]
    fn round_trip_random_long() {
        let p = partition(10, 3.0, 0.6, 700, 300);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut decoder = ScDecoder::new(1024).unwrap();
        let mut u = vec![0u8; 1024];
        for _ in 0..1000 {
            let s: Vec<u8> = (0..400).map(|_| rng.gen_range(0..2)).collect();
            let r: Vec<u8> = (0..300).map(|_| rng.gen_range(0..2)).collect();
            let x = secure_encode(&s, &r, &p).unwrap();
            let d = secure_decode_with(&mut decoder, &noiseless(&x), &p, &mut u).unwrap();
            assert_eq!(d.secret, s);
        }
    }

    #[test]
    fn flipped_llrs_stay_well_formed() {
        // Negating every LLR of a noiseless observation is the observation of
        // x ^ 1...1 = x ^ G[N-1], so SC returns u with only the last index
        // flipped.
        let p = partition(8, 3.0, 0.6, 150, 50);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s: Vec<u8> = (0..100).map(|_| rng.gen_range(0..2)).collect();
        let r: Vec<u8> = (0..50).map(|_| rng.gen_range(0..2)).collect();
        let x = secure_encode(&s, &r, &p).unwrap();
        let llrs: Vec<f64> = noiseless(&x).iter().map(|l| -l).collect();
        let d = secure_decode(&llrs, &p).unwrap();
        let (mut want_s, mut want_r) = (s.clone(), r.clone());
        if let Some(j) = p.g_set().iter().position(|&i| i == 255) {
            want_s[j] ^= 1;
        } else {
            let j = p.m_set().iter().position(|&i| i == 255).unwrap();
            want_r[j] ^= 1;
        }
        assert_eq!(d.secret, want_s);
        assert_eq!(d.random, want_r);
    }

    #[test]
    fn garbage_llrs_give_coin_flips() {
        let p = partition(8, 3.0, 0.6, 150, 50);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (mut errors, mut total) = (0usize, 0usize);
        for _ in 0..200 {
            let s: Vec<u8> = (0..100).map(|_| rng.gen_range(0..2)).collect();
            let llrs: Vec<f64> = (0..256).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let d = secure_decode(&llrs, &p).unwrap();
            assert_eq!(d.secret.len(), 100);
            errors += d.secret.iter().zip(&s).filter(|(a, b)| a != b).count();
            total += 100;
        }
        let ber = errors as f64 / total as f64;
        assert!((0.45..0.55).contains(&ber), "ber {ber}");
    }

    #[test]
    fn zero_llrs_are_deterministic() {
        let p = partition(6, 2.0, 0.5, 40, 10);
        let d = secure_decode(&[0.0; 64], &p).unwrap();
        assert!(d.secret.iter().chain(&d.random).all(|&b| b == 0));
    }

    #[test]
    fn partition_record_round_trip() {
        let bob = construct_ga(2.0, 6).unwrap();
        let eve = construct_ga(0.3, 6).unwrap();
        let p = build_partition(&bob, &eve, 40, 12).unwrap();
        let rec = PartitionRecord::new(&p, &bob, &eve);
        assert_eq!((rec.k_bob, rec.k_eve), (40, 12));
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(serde_json::from_str::<PartitionRecord>(&json).unwrap(), rec);
    }
}
