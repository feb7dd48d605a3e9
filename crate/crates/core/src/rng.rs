//! Seeding discipline: one 64-bit seed, one ChaCha stream per consumer.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream identifiers so that modules never share random words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Bits = 1,
    Shift = 2,
    Casino = 3,
    CasinoBaseline = 4,
    Quantum = 5,
    Matrices = 6,
    Strategies = 7,
    Coding = 8,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Independent sub-stream `index` of a stream, for parallel draws.
pub fn substream_rng(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((index + 1) << 8) | stream as u64);
    rng
}

/// Uniform on `(0, 1]`.
pub fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Standard normal deviate by the ratio-of-uniforms method.
pub fn gaussian<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    // v-range bound sqrt(2/e)
    const B: f64 = 0.857_763_884_960_706_8;
    loop {
        let u = open_unit(rng);
        let v = (2.0 * rng.random::<f64>() - 1.0) * B;
        let x = v / u;
        if x * x <= -4.0 * u.ln() {
            return x;
        }
    }
}

/// Random bit string of the given length.
pub fn random_bits<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> Vec<u8> {
    (0..n).map(|_| (rng.next_u32() & 1) as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_differ_and_replay() {
        let a: Vec<u64> = (0..4).map({
            let mut r = stream_rng(7, Stream::Bits);
            move |_| r.next_u64()
        }).collect();
        let b: Vec<u64> = (0..4).map({
            let mut r = stream_rng(7, Stream::Bits);
            move |_| r.next_u64()
        }).collect();
        let c: Vec<u64> = (0..4).map({
            let mut r = stream_rng(7, Stream::Casino);
            move |_| r.next_u64()
        }).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn gaussian_moments() {
        let mut r = stream_rng(1, Stream::Matrices);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| gaussian(&mut r)).collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n as f64;
        let k = xs.iter().map(|x| x.powi(4)).sum::<f64>() / n as f64;
        assert!(m.abs() < 0.01);
        assert!((v - 1.0).abs() < 0.01);
        assert!((k - 3.0).abs() < 0.06);
    }
}
