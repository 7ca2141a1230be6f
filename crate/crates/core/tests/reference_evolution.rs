//! The diagonal-storage walk against a dense lattice evolution that applies
//! the full 4×4 coin (built from its Bell spectral form) at every site and
//! shifts each component along its own direction.

use std::collections::BTreeMap;

use bellwalk::{build_coin_from_bell, simulate, CoinParams, SpinVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Lattice = BTreeMap<(i64, i64), [Complex64; 4]>;

const SHIFTS: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

fn dense_step(psi: &Lattice, params: &CoinParams) -> Lattice {
    let coin = build_coin_from_bell(params);
    let mut out = Lattice::new();
    for (&(m, n), v) in psi {
        let w = coin.apply(v);
        for (i, (dm, dn)) in SHIFTS.iter().enumerate() {
            let site = out.entry((m + dm, n + dn)).or_insert([Complex64::new(0.0, 0.0); 4]);
            site[i] += w[i];
        }
    }
    out
}

fn random_spin(rng: &mut ChaCha8Rng) -> SpinVector {
    let amps = std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    SpinVector::new(amps).normalized().unwrap()
}

#[test]
fn diagonal_walk_matches_dense_lattice() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..6 {
        let params = CoinParams::new(rng.gen(), rng.gen(), rng.gen()).unwrap();
        let spin = random_spin(&mut rng);
        let mut dense = Lattice::from([((0, 0), spin.0)]);
        for t in 0..=8 {
            let walk = simulate(&spin, &params, t).unwrap();
            for (&(m, n), v) in &dense {
                for (i, want) in v.iter().enumerate() {
                    let got = walk.amplitude(i, m, n);
                    assert!((got - want).norm() < 1e-14, "t={t} site=({m},{n}) comp={i}: {got} vs {want}");
                }
            }
            // nothing the walk holds is missing from the dense lattice
            for (m, n, s) in walk.sites() {
                let v = dense.get(&(m, n)).copied().unwrap_or_default();
                for (got, want) in s.0.iter().zip(v) {
                    assert!((got - want).norm() < 1e-14);
                }
            }
            dense = dense_step(&dense, &params);
        }
    }
}
