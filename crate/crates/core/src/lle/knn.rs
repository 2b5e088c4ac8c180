use ndarray::{s, Array2, ArrayView2};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::params::LleParams;
use crate::ensemble::mix_seed;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Columns `t_end − L .. t_end` of `x`, one micro-series per row.
pub fn make_batch<T: Real>(x: ArrayView2<T>, t_end: usize, params: &LleParams<T>) -> Result<Array2<T>> {
    let l = params.micro_len();
    if t_end < l || t_end > x.ncols() {
        return Err(Error::Bounds(format!(
            "t_end {t_end} outside [{l}, {}] for micro length {l}",
            x.ncols()
        )));
    }
    Ok(x.slice(s![.., t_end - l..t_end]).to_owned())
}

/// Seeded uniform permutation of `0..n`; the first `⌈(1 − test_fraction) n⌉`
/// indices train, the rest test.
pub fn train_test_split(n: usize, test_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = (((1.0 - test_fraction) * n as f64) - 1e-9).ceil().max(0.0) as usize;
    let test = idx.split_off(n_train.min(n));
    (idx, test)
}

fn checked_split<T: Real>(n: usize, params: &LleParams<T>, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    let tf = params.test_fraction.to_f64().unwrap_or(f64::NAN);
    let (train, test) = train_test_split(n, tf, seed);
    if train.len() < params.k_neighbors || test.is_empty() {
        return Err(Error::InsufficientData(format!(
            "{n} micro-series give {} train and {} test rows; need at least {} and 1",
            train.len(),
            test.len(),
            params.k_neighbors
        )));
    }
    Ok((train, test))
}

/// For every test row, the `k` train rows closest in the look-back block,
/// ties going to the lower row index.
fn neighbours<T: Real>(
    u: ArrayView2<T>,
    train: &[usize],
    test: &[usize],
    look_back: usize,
    k: usize,
) -> Vec<Vec<usize>> {
    test.iter()
        .map(|&t| {
            let zt = u.row(t);
            let mut d: Vec<(T, usize)> = train
                .iter()
                .map(|&r| {
                    let zr = u.row(r);
                    let dist = (0..look_back).fold(T::zero(), |acc, c| {
                        let diff = zt[c] - zr[c];
                        acc + diff * diff
                    });
                    (dist, r)
                })
                .collect();
            d.sort_by(|a, b| {
                a.0.partial_cmp(&b.0)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(a.1.cmp(&b.1))
            });
            d.into_iter().take(k).map(|(_, r)| r).collect()
        })
        .collect()
}

fn gmae_from<T: Real>(u: ArrayView2<T>, col: usize, test: &[usize], nbrs: &[Vec<usize>], floor: T) -> T {
    let mut log_sum = T::zero();
    let mut all_floored = true;
    for (&t, nb) in test.iter().zip(nbrs) {
        let pred = nb.iter().fold(T::zero(), |acc, &r| acc + u[[r, col]]) / T::from_count(nb.len());
        let err = (pred - u[[t, col]]).abs();
        let err = if err > floor {
            all_floored = false;
            err
        } else {
            floor
        };
        log_sum = log_sum + err.ln();
    }
    if all_floored {
        return floor;
    }
    let g = (log_sum / T::from_count(test.len())).exp();
    if g > floor {
        g
    } else {
        floor
    }
}

fn check_shape<T: Real>(u: ArrayView2<T>, h: usize, params: &LleParams<T>) -> Result<usize> {
    params.validate()?;
    if h < params.h_min || h > params.h_max {
        return Err(Error::Bounds(format!(
            "horizon {h} outside [{}, {}]",
            params.h_min, params.h_max
        )));
    }
    let col = params.look_back - 1 + h;
    if col >= u.ncols() {
        return Err(Error::Bounds(format!(
            "horizon {h} needs {} columns, batch has {}",
            col + 1,
            u.ncols()
        )));
    }
    Ok(col)
}

/// Geometric-mean absolute kNN forecast error at horizon `h` for an explicit
/// train/test partition of the rows of `u`.
pub fn knn_gmae_with_split<T: Real>(
    u: ArrayView2<T>,
    h: usize,
    params: &LleParams<T>,
    train: &[usize],
    test: &[usize],
) -> Result<T> {
    let col = check_shape(u, h, params)?;
    if train.len() < params.k_neighbors || test.is_empty() {
        return Err(Error::InsufficientData(
            "train set smaller than k or empty test set".into(),
        ));
    }
    let nbrs = neighbours(u, train, test, params.look_back, params.k_neighbors);
    Ok(gmae_from(u, col, test, &nbrs, params.gmae_floor))
}

/// [`knn_gmae_with_split`] with the split drawn from `params.split_seed`.
pub fn knn_gmae<T: Real>(u: ArrayView2<T>, h: usize, params: &LleParams<T>) -> Result<T> {
    check_shape(u, h, params)?;
    let (train, test) = checked_split(u.nrows(), params, params.split_seed)?;
    knn_gmae_with_split(u, h, params, &train, &test)
}

/// `(h, ln GMAE(h))` for every configured horizon. With a shared split the
/// neighbour search is done once, since the inputs do not depend on `h`.
pub fn log_gmae_curve<T: Real>(u: ArrayView2<T>, params: &LleParams<T>) -> Result<Vec<(usize, T)>> {
    params.validate()?;
    check_shape(u, params.h_max, params)?;
    if params.split_per_horizon {
        return params
            .horizons()
            .map(|h| {
                let (train, test) = checked_split(u.nrows(), params, mix_seed(params.split_seed, h as u64))?;
                Ok((h, knn_gmae_with_split(u, h, params, &train, &test)?.ln()))
            })
            .collect();
    }
    let (train, test) = checked_split(u.nrows(), params, params.split_seed)?;
    let nbrs = neighbours(u, &train, &test, params.look_back, params.k_neighbors);
    Ok(params
        .horizons()
        .map(|h| {
            let col = params.look_back - 1 + h;
            (h, gmae_from(u, col, &test, &nbrs, params.gmae_floor).ln())
        })
        .collect())
}
