//! Deterministic direction samplers used by the sampled norm predicates.

use std::f64::consts::PI;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// `count` quasi-random unit vectors in ℝ^dim.
///
/// dim = 1 alternates ±1; dim = 2 uses equispaced angles with a
/// seed-dependent rotation; higher dimensions push a Halton sequence through
/// Box–Muller and normalise. Same `(dim, count, seed)` gives the same list.
pub fn sphere_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    assert!((1..=8).contains(&dim), "sampler supports 1 ≤ dim ≤ 8");
    match dim {
        1 => (0..count).map(|k| vec![if k % 2 == 0 { 1.0 } else { -1.0 }]).collect(),
        2 => {
            let shift = (seed as f64 * 0.618_033_988_749_894_8).fract();
            (0..count)
                .map(|k| {
                    let a = 2.0 * PI * (k as f64 + shift) / count as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect()
        }
        _ => {
            let pairs = dim.div_ceil(2);
            let mut out = Vec::with_capacity(count);
            let mut idx = seed.wrapping_mul(7919) + 1;
            while out.len() < count {
                let mut g = Vec::with_capacity(2 * pairs);
                for p in 0..pairs {
                    let u1 = radical_inverse(idx, PRIMES[2 * p]).max(1e-12);
                    let u2 = radical_inverse(idx, PRIMES[2 * p + 1]);
                    let r = (-2.0 * u1.ln()).sqrt();
                    g.push(r * (2.0 * PI * u2).cos());
                    g.push(r * (2.0 * PI * u2).sin());
                }
                g.truncate(dim);
                idx += 1;
                let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n > 1e-9 {
                    out.push(g.into_iter().map(|x| x / n).collect());
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_length_and_deterministic() {
        for dim in 1..=4 {
            let a = sphere_directions(dim, 64, 3);
            let b = sphere_directions(dim, 64, 3);
            assert_eq!(a, b);
            for v in &a {
                let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((n - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn three_d_directions_cover_both_hemispheres() {
        let dirs = sphere_directions(3, 512, 0);
        let up = dirs.iter().filter(|v| v[2] > 0.0).count();
        assert!(up > 150 && up < 362, "{up}");
    }
}
