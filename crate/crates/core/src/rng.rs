//! Counter-based random streams.
//!
//! A stream is identified by `(seed, window_index, epoch)` and a draw counter.
//! Draw `n` is a pure function of those four numbers, so any window can be
//! processed on any thread, in any order, and still see the same values.
//!
//! The mixer is frozen. Changing anything below changes every augmentation
//! output, so treat it as part of the file format.
//!
//! ```text
//! mix(z):   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!           z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!           z =  z ^ (z >> 31)
//!
//! key_a  = mix(mix(mix(seed + GOLDEN) ^ window_index * W) ^ epoch * E)
//! key_b  = mix(key_a ^ KEY_B_SALT)
//! draw_n = mix(mix(key_a + (n + 1) * GOLDEN) ^ key_b)
//! ```
//!
//! Uniforms take the top 53 bits: `(draw >> 11) * 2^-53`, in `[0, 1)`.
//! Standard normals use the Box-Muller cosine branch on two fresh uniforms
//! (one normal per two draws, no caching, so the counter stays the only state).

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const WINDOW_MUL: u64 = 0xD6E8_FEB8_6659_FD93;
const EPOCH_MUL: u64 = 0xA076_1D64_78BD_642F;
const KEY_B_SALT: u64 = 0xE703_7ED1_A0B4_28DB;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A reproducible random stream owned by one task.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    window_index: u64,
    epoch: u64,
    counter: u64,
    key_a: u64,
    key_b: u64,
}

/// Derives the stream for one window at one epoch.
pub fn derive_stream(seed: u64, window_index: u64, epoch: u64) -> RngStream {
    let k = mix64(seed.wrapping_add(GOLDEN));
    let k = mix64(k ^ window_index.wrapping_mul(WINDOW_MUL));
    let key_a = mix64(k ^ epoch.wrapping_mul(EPOCH_MUL));
    let key_b = mix64(key_a ^ KEY_B_SALT);
    RngStream {
        seed,
        window_index,
        epoch,
        counter: 0,
        key_a,
        key_b,
    }
}

impl RngStream {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn window_index(&self) -> u64 {
        self.window_index
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    /// Number of 64-bit draws consumed so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        let z = mix64(self.key_a.wrapping_add(self.counter.wrapping_mul(GOLDEN)));
        mix64(z ^ self.key_b)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi]` (closed up to rounding).
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        // 1 - u lies in (0, 1], keeping the log finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform integer in `0..n` by Lemire's multiply-shift with rejection.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = (self.next_u64() as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
