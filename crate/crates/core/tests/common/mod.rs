//! Fixtures and brute-force reference implementations shared by the
//! integration tests. Nothing here calls into the library's metric or
//! gradient code.
#![allow(dead_code)]

use ddhqa::mesh::{primitives, TriangleMesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank of each value: 1 + number of strictly smaller values + half the
/// number of other equal values.
pub fn brute_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&x| {
            let less = v.iter().filter(|&&y| y < x).count() as f64;
            let equal = v.iter().filter(|&&y| y == x).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

pub fn brute_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..x.len() {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    sxy / (sxx * syy).sqrt()
}

pub fn brute_spearman(x: &[f64], y: &[f64]) -> f64 {
    brute_pearson(&brute_ranks(x), &brute_ranks(y))
}

/// Tau-b by enumerating every pair.
pub fn brute_kendall_b(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (mut concordant, mut discordant, mut tie_x, mut tie_y) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = (x[i] - x[j]).signum() as i64 * ((x[i] != x[j]) as i64);
            let dy = (y[i] - y[j]).signum() as i64 * ((y[i] != y[j]) as i64);
            if dx == 0 && dy == 0 {
                tie_x += 1;
                tie_y += 1;
            } else if dx == 0 {
                tie_x += 1;
            } else if dy == 0 {
                tie_y += 1;
            } else if dx == dy {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let denom = ((pairs - tie_x as f64) * (pairs - tie_y as f64)).sqrt();
    (concordant - discordant) as f64 / denom
}

pub fn brute_rmse(x: &[f64], y: &[f64]) -> f64 {
    let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    (sq / x.len() as f64).sqrt()
}

/// Random vector of length `n`. Every third vector draws from a handful of
/// integers so that ties are common.
pub fn random_scores(rng: &mut ChaCha8Rng, n: usize, case: usize) -> Vec<f64> {
    if case.is_multiple_of(3) {
        (0..n).map(|_| rng.random_range(0..5) as f64).collect()
    } else {
        (0..n).map(|_| rng.random_range(-10.0..10.0)).collect()
    }
}

pub type Mat3 = [[f64; 3]; 3];

/// Uniformly random rotation from a normalized Gaussian quaternion.
pub fn random_rotation(rng: &mut ChaCha8Rng) -> Mat3 {
    let mut q = [0.0f64; 4];
    loop {
        for c in &mut q {
            *c = rng.random_range(-1.0..1.0);
        }
        let n2: f64 = q.iter().map(|c| c * c).sum();
        if n2 > 1e-3 && n2 <= 1.0 {
            let n = n2.sqrt();
            q.iter_mut().for_each(|c| *c /= n);
            break;
        }
    }
    let [w, x, y, z] = q;
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

pub fn rigid(mesh: &TriangleMesh, r: Mat3, t: [f64; 3]) -> TriangleMesh {
    mesh.map_vertices(|p| {
        let mut out = t;
        for (i, o) in out.iter_mut().enumerate() {
            *o += r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2];
        }
        out
    })
}

/// Icosphere whose vertices are pushed radially by uniform noise of the
/// given amplitude.
pub fn noisy_icosphere(level: u32, amplitude: f64, seed: u64) -> TriangleMesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sphere = primitives::icosphere(level);
    let vertices = sphere
        .vertices()
        .iter()
        .map(|p| {
            let k = 1.0 + amplitude * rng.random_range(-1.0..1.0);
            [p[0] * k, p[1] * k, p[2] * k]
        })
        .collect();
    TriangleMesh::new(vertices, sphere.faces().to_vec()).expect("same topology")
}

/// Largest absolute difference between the library metrics and the
/// brute-force versions over `cases` random vector pairs of length `n`.
pub fn metric_oracle_worst(cases: usize, n: usize, seed: u64) -> f64 {
    use ddhqa::evaluation::{krcc, plcc, rmse, srcc};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for case in 0..cases {
        let x = random_scores(&mut rng, n, case);
        let y = random_scores(&mut rng, n, case + 1);
        if x.iter().all(|v| *v == x[0]) || y.iter().all(|v| *v == y[0]) {
            continue;
        }
        let pairs = [
            (srcc(&x, &y).unwrap(), brute_spearman(&x, &y)),
            (plcc(&x, &y).unwrap(), brute_pearson(&x, &y)),
            (krcc(&x, &y).unwrap(), brute_kendall_b(&x, &y)),
            (rmse(&x, &y).unwrap(), brute_rmse(&x, &y)),
        ];
        for (a, b) in pairs {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

/// Mean squared error of a head by direct evaluation.
fn head_loss(head: &ddhqa::RegressionHead, batch: &[(Vec<f64>, f64)]) -> f64 {
    batch
        .iter()
        .map(|(x, y)| {
            let r = head.forward(x).unwrap() - y;
            r * r
        })
        .sum::<f64>()
        / batch.len() as f64
}

/// Worst relative error `|g - g_fd| / max(|g|, |g_fd|)` norm-wise between
/// analytic and central-difference gradients over `heads` random heads with
/// input 10 and 4 hidden units.
pub fn gradient_check_worst(heads: u64, step: f64) -> f64 {
    use ddhqa::RegressionHead;
    let mut worst: f64 = 0.0;
    for seed in 0..heads {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let head = RegressionHead::new_seeded(10, 4, seed);
        let batch: Vec<(Vec<f64>, f64)> = (0..5)
            .map(|_| {
                (
                    (0..10).map(|_| rng.random_range(-2.0..2.0)).collect(),
                    rng.random_range(-3.0..3.0),
                )
            })
            .collect();
        let mut analytic = vec![0.0; head.params().len()];
        head.mse_gradient(batch.iter().map(|(x, y)| (x.as_slice(), *y)), &mut analytic)
            .unwrap();
        let numeric: Vec<f64> = (0..head.params().len())
            .map(|i| {
                let mut plus = head.clone();
                plus.params_mut()[i] += step;
                let mut minus = head.clone();
                minus.params_mut()[i] -= step;
                (head_loss(&plus, &batch) - head_loss(&minus, &batch)) / (2.0 * step)
            })
            .collect();
        let diff = analytic
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let na = analytic.iter().map(|a| a * a).sum::<f64>().sqrt();
        let nb = numeric.iter().map(|b| b * b).sum::<f64>().sqrt();
        worst = worst.max(diff / na.max(nb).max(1e-12));
    }
    worst
}
