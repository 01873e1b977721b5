use serde::Serialize;

/// Knobs shared by the randomized and bounded searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    /// Seed for every randomized choice; reports echo it.
    pub seed: u64,
    /// Objects must keep all summand shifts within `[-max_shift, max_shift]`.
    pub max_shift: i64,
    /// Cap on candidate maps tried per search.
    pub budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 0, max_shift: 16, budget: 64 }
    }
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Config { seed, ..Config::default() }
    }
}
