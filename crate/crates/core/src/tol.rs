/// Numerical thresholds shared by every layer.
///
/// Defaults: primitive identities are held to `1e-12`, composite
/// quantities to `1e-9`, scalar extraction on simple objects to `1e-7`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Primitive scalar identities (homomorphism of `q^z`, factorial relations).
    pub primitive: f64,
    /// Composite quantities built from many products.
    pub composite: f64,
    /// Allowed deviation of an endomorphism from a multiple of the identity.
    pub scalar_residual: f64,
    /// Relative singular-value cutoff used for rank decisions.
    pub rank: f64,
    /// Distance below which a parameter counts as lying in `ℤ` or `rℤ`.
    pub guard: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            primitive: 1e-12,
            composite: 1e-9,
            scalar_residual: 1e-7,
            rank: 1e-8,
            guard: 1e-6,
        }
    }
}

impl Tolerances {
    /// Returns `true` when every threshold is strictly positive and finite.
    pub fn is_valid(&self) -> bool {
        [self.primitive, self.composite, self.scalar_residual, self.rank, self.guard]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0)
    }
}
