//! Independent oracles for the integration suites.
//!
//! Everything here is written against the definitions directly — literal
//! generator matrices, explicit row-vector products and full enumeration of
//! the word tree — and deliberately shares no code with the engine it
//! checks.

/// The three generator matrices, retyped from their definition.
pub const GEN: [[[u128; 4]; 4]; 3] = [
    [[1, 0, 0, 0], [1, 1, 0, 1], [1, 0, 1, 1], [2, 0, 0, 1]],
    [[1, 1, 0, 1], [0, 1, 0, 0], [0, 1, 1, 1], [0, 2, 0, 1]],
    [[1, 0, 1, 1], [0, 1, 1, 1], [0, 0, 1, 0], [0, 0, 2, 1]],
];

/// Row vector times generator, plain checked integer arithmetic.
pub fn vec_times_gen(g: [u128; 4], j: usize) -> [u128; 4] {
    let m = GEN[j];
    let mut out = [0u128; 4];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut acc: u128 = 0;
        for (row, &gi) in g.iter().enumerate() {
            acc = acc.checked_add(gi.checked_mul(m[row][col]).unwrap()).unwrap();
        }
        *slot = acc;
    }
    out
}

pub fn vec_times_gen_f64(g: [f64; 4], j: usize) -> [f64; 4] {
    let m = GEN[j];
    let mut out = [0.0f64; 4];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (row, &gi) in g.iter().enumerate() {
            acc += gi * m[row][col] as f64;
        }
        *slot = acc;
    }
    out
}

/// Inscribed curvature of a quadruple: `g . (1, 1, 1, 2)`.
pub fn value_of(g: [u128; 4]) -> u128 {
    g[0] + g[1] + g[2] + 2 * g[3]
}

pub fn value_of_f64(g: [f64; 4]) -> f64 {
    g[0] + g[1] + g[2] + 2.0 * g[3]
}

/// Exhaustively enumerates every word of length at most `depth` — no
/// pruning — and counts those with inscribed curvature at most `lambda`.
pub fn brute_force_count_f64(g: [f64; 4], lambda: f64, depth: u32) -> u64 {
    fn recurse(g: [f64; 4], lambda: f64, depth: u32) -> u64 {
        let mut n = u64::from(value_of_f64(g) <= lambda);
        if depth > 0 {
            for j in 0..3 {
                n += recurse(vec_times_gen_f64(g, j), lambda, depth - 1);
            }
        }
        n
    }
    recurse(g, lambda, depth)
}

pub fn brute_force_count_int(g: [u128; 4], lambda: u128, depth: u32) -> u64 {
    fn recurse(g: [u128; 4], lambda: u128, depth: u32) -> u64 {
        let mut n = u64::from(value_of(g) <= lambda);
        if depth > 0 {
            for j in 0..3 {
                n += recurse(vec_times_gen(g, j), lambda, depth - 1);
            }
        }
        n
    }
    recurse(g, lambda, depth)
}

/// Depth beyond which no word can stay at or below `lambda`, from the
/// monotone growth of kappa: every replacement adds at least the smallest
/// pairwise curvature sum `s0` to kappa, pairwise sums never shrink, and
/// the inscribed curvature dominates `2 * kappa`, so the value at depth `m`
/// exceeds `s0 * m^2`.
pub fn safe_depth(lambda: f64, min_pairwise_sum: f64) -> u32 {
    (lambda / min_pairwise_sum).sqrt().ceil() as u32
}

/// Splitmix-style deterministic pseudo-random stream for test seeds.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn next_usize(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
