/// Bases for the first Halton coordinates.
pub const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    value
}

/// Halton point with the given (1-based) index in the unit cube.
pub(crate) fn halton_unit(index: u64, dim: usize) -> Vec<f64> {
    PRIMES[..dim]
        .iter()
        .map(|&b| radical_inverse(index, b))
        .collect()
}
