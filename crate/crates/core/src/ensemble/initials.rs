use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::scan::EnsembleConfig;
use crate::numeric::norm2;
use crate::C64;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Combines two seeds into one well-mixed seed.
pub(crate) fn mix_seed(a: u64, b: u64) -> u64 {
    splitmix(splitmix(a) ^ splitmix(b.wrapping_add(0x632b_e59b_d9b4_e019)))
}

/// Seed of the RNG stream for one run. Depends only on its arguments, so the
/// ensemble does not depend on how runs are scheduled.
pub fn run_seed(master_seed: u64, case_label: &str, run: usize) -> u64 {
    let h = splitmix(master_seed ^ splitmix(fnv1a(case_label.as_bytes())));
    splitmix(h ^ splitmix(run as u64))
}

fn unit_direction(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d)
            .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let n = norm2(&v);
        if n > 0.0 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// `x0ⱼ = base + δ vⱼ` with `δ = jitter_frac·‖base‖₂` and `vⱼ` uniform on the
/// complex unit sphere.
pub fn generate_initials(config: &EnsembleConfig) -> Vec<Vec<C64>> {
    let base = &config.base_vector;
    let delta = config.jitter_frac * norm2(base);
    (0..config.n_runs)
        .map(|run| {
            if delta == 0.0 {
                return base.clone();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(config.master_seed, &config.case_label, run));
            let v = unit_direction(&mut rng, base.len());
            base.iter().zip(v).map(|(&b, vi)| b + vi * delta).collect()
        })
        .collect()
}
