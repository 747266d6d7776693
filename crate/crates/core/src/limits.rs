/// Size limits applied to user-supplied moduli.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest modulus accepted for factorization and square-root counting.
    pub max_modulus: u64,
    /// Largest number of terms a direct summation may evaluate.
    pub max_terms: u64,
}

pub const DEFAULT_MAX_MODULUS: u64 = 1 << 31;
pub const DEFAULT_MAX_TERMS: u64 = 1_000_000;

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_modulus: DEFAULT_MAX_MODULUS,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

impl Limits {
    pub fn with_max_modulus(mut self, bound: u64) -> Self {
        self.max_modulus = bound;
        self
    }

    pub fn with_max_terms(mut self, bound: u64) -> Self {
        self.max_terms = bound;
        self
    }
}
