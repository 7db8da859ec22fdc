//! Self-contained deterministic pseudo-random generators.
//!
//! The Monte Carlo oracle needs per-trajectory streams derived from
//! `(seed, trajectory index)` so that results are independent of how
//! trajectories are scheduled. Both generators here are tiny, well-known,
//! and bit-reproducible across platforms, which keeps the validation
//! reports byte-identical for a given seed.

use crate::math;

/// SplitMix64: used for seeding and for cheap test-data streams.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in (0, 1]; never returns 0 so it is safe under `ln`.
    pub fn next_unit(&mut self) -> f64 {
        let bits = self.next_u64() >> 11;
        (bits as f64 + 1.0) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal via Box–Muller (uncached; fine for test data).
    pub fn next_standard_normal(&mut self) -> f64 {
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        math::sqrt(-2.0 * math::ln(u1)) * math::cos(core::f64::consts::TAU * u2)
    }
}

/// xoshiro256++ with a SplitMix64-expanded seed.
#[derive(Clone, Debug)]
pub struct Xoshiro256PlusPlus {
    s: [u64; 4],
    cached_normal: Option<f64>,
}

impl Xoshiro256PlusPlus {
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = SplitMix64::new(seed);
        let mut s = [0u64; 4];
        for w in s.iter_mut() {
            *w = sm.next_u64();
        }
        // The all-zero state is invalid; SplitMix64 cannot produce four
        // consecutive zeros, but guard anyway.
        if s == [0, 0, 0, 0] {
            s[0] = 0x9E37_79B9_7F4A_7C15;
        }
        Xoshiro256PlusPlus { s, cached_normal: None }
    }

    /// Stream generator for one Monte Carlo trajectory. Streams depend only
    /// on `(seed, index)`, never on scheduling.
    pub fn for_stream(seed: u64, index: u64) -> Self {
        let mut sm = SplitMix64::new(seed ^ index.wrapping_mul(0xA076_1D64_78BD_642F));
        Self::from_seed(sm.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    pub fn next_unit(&mut self) -> f64 {
        let bits = self.next_u64() >> 11;
        (bits as f64 + 1.0) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal via Box–Muller; the second member of each pair is
    /// cached so consecutive calls consume uniforms at half rate.
    pub fn next_standard_normal(&mut self) -> f64 {
        if let Some(z) = self.cached_normal.take() {
            return z;
        }
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        let r = math::sqrt(-2.0 * math::ln(u1));
        let phi = core::f64::consts::TAU * u2;
        self.cached_normal = Some(r * math::sin(phi));
        r * math::cos(phi)
    }
}

/// 256-layer ziggurat sampler for the standard normal distribution.
///
/// The Monte Carlo oracle draws ~10⁹ normals per run; the Box–Muller path
/// costs a log and two trig calls per pair, which dominates the whole
/// simulation. The ziggurat needs one `u64` and a compare on the ~98% fast
/// path. Tables are built once per run from the classic layer recursion,
/// so there are no hardcoded 257-entry constants to mistype.
pub struct Ziggurat {
    x: [f64; 257],
    f: [f64; 257],
}

/// Rightmost layer edge for 256 layers.
#[allow(clippy::excessive_precision)]
const ZIG_R: f64 = 3.654_152_885_361_008_8;
/// Common layer area for 256 layers.
const ZIG_V: f64 = 0.004_928_673_233_992_336;

impl Ziggurat {
    pub fn new() -> Self {
        let pdf = |x: f64| math::exp(-0.5 * x * x);
        let mut x = [0.0; 257];
        let mut f = [0.0; 257];
        x[1] = ZIG_R;
        x[0] = ZIG_V / pdf(ZIG_R);
        for i in 1..256 {
            // f(x_{i+1}) = f(x_i) + V/x_i
            let fx = pdf(x[i]) + ZIG_V / x[i];
            x[i + 1] = if fx >= 1.0 { 0.0 } else { math::sqrt(-2.0 * math::ln(fx)) };
        }
        x[256] = 0.0;
        for i in 0..257 {
            f[i] = pdf(x[i]);
        }
        // Layer recursion must close at the mode; loose bound, it closes to
        // ~1e-9 when R and V are consistent.
        debug_assert!((pdf(x[255]) + ZIG_V / x[255] - 1.0).abs() < 1e-6);
        Ziggurat { x, f }
    }

    /// One standard-normal sample.
    pub fn sample(&self, rng: &mut Xoshiro256PlusPlus) -> f64 {
        loop {
            let bits = rng.next_u64();
            let i = (bits & 0xFF) as usize;
            // 53 random bits → u ∈ [−1, 1).
            let u = ((bits >> 8) & ((1u64 << 53) - 1)) as f64
                * (2.0 / 9_007_199_254_740_992.0)
                - 1.0;
            let x = u * self.x[i];
            if math::abs(x) < self.x[i + 1] {
                return x;
            }
            if i == 0 {
                // Marsaglia tail beyond R.
                loop {
                    let a = -math::ln(rng.next_unit()) / ZIG_R;
                    let b = -math::ln(rng.next_unit());
                    if b + b > a * a {
                        return if u < 0.0 { -(ZIG_R + a) } else { ZIG_R + a };
                    }
                }
            }
            let fx = math::exp(-0.5 * x * x);
            if self.f[i + 1] + rng.next_unit() * (self.f[i] - self.f[i + 1]) < fx {
                return x;
            }
        }
    }
}

impl Default for Ziggurat {
    fn default() -> Self {
        Self::new()
    }
}
