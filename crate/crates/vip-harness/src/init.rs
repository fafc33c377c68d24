use vip_core::{FeasibleSet, SplitMix64, Vector};

/// Seeded initial point: componentwise uniform on [0, 1) from SplitMix64,
/// projected onto the feasible set. Identical `(dim, seed)` always yields
/// the identical vector; the PRNG identifier is recorded in trace headers.
pub fn seeded_init(dim: usize, seed: u64, set: &FeasibleSet) -> Vector {
    assert!(dim >= 1);
    let mut rng = SplitMix64::new(seed);
    let raw = Vector::new((0..dim).map(|_| rng.next_f64()).collect());
    set.project(&raw)
}
