//! Shared inputs for the benchmarks under `benches/`.

use num_complex::Complex64 as C64;
use qpcheck_core::verifier::default_contexts;
use qpcheck_core::Lattice;

pub const THREE_TERM: &str = "sigma(z+a)*sigma(z-a)*sigma(b+c)*sigma(b-c) + sigma(z+b)*sigma(z-b)*sigma(c+a)*sigma(c-a) + sigma(z+c)*sigma(z-c)*sigma(a+b)*sigma(a-b)";

/// A skewed lattice away from the symmetric cases.
pub fn skewed_lattice() -> Lattice {
    *default_contexts()[2]
        .lattice()
        .expect("default contexts carry lattices")
}

/// Points spread over the fundamental cell of `lat`.
pub fn cell_points(lat: &Lattice, n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            let u = (t * 7.0).fract() - 0.5;
            let v = t - 0.5;
            2.0 * u * lat.omega1() + 2.0 * v * lat.omega3()
        })
        .collect()
}
