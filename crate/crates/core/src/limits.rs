use serde::{Deserialize, Serialize};

/// Resource bounds shared by the enumeration and classification entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest cyclotomic conductor accepted for the joint field of a tuple.
    pub conductor_cap: u32,
    /// Orbit enumeration stops (not exhausted) after this many points.
    pub orbit_bound: usize,
    /// Matrix group closure gives up after this many elements.
    pub closure_bound: usize,
    /// Largest permutation degree handed to the stabilizer chain.
    pub degree_cap: usize,
    /// Product orders above this are treated as infinite.
    pub product_order_cap: u32,
    /// Depth cap for the escape search.
    pub escape_depth: usize,
    /// Single-threaded, order-stable enumeration.
    pub deterministic: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            conductor_cap: 240,
            orbit_bound: 100_000,
            closure_bound: 2000,
            degree_cap: 5000,
            product_order_cap: 60,
            escape_depth: 64,
            deterministic: false,
        }
    }
}

impl Limits {
    pub fn with_conductor_cap(mut self, cap: u32) -> Self {
        self.conductor_cap = cap;
        self
    }

    pub fn with_orbit_bound(mut self, bound: usize) -> Self {
        self.orbit_bound = bound;
        self
    }
}
