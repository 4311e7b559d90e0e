//! A tiny seeded PRNG (SplitMix64). The generators and the random rewrite
//! strategy must produce identical streams for a given seed across builds
//! and platforms, so the generator is pinned here rather than taken from a
//! crate whose stream may change between versions.

#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Desk-scale bounds; modulo bias is irrelevant here.
        self.next_u64() % bound
    }

    /// Uniform choice from a nonempty slice.
    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }

    /// True with probability `num/den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    /// A derived generator, useful for splitting one seed into independent
    /// streams.
    pub fn split(&mut self) -> Rng {
        Rng::new(self.next_u64())
    }
}
