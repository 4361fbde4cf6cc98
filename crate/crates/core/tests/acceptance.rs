//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero when any fails.

use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use toeplipz_core::dc::{decompose_rank, fold_biases, sample_dc_init};
use toeplipz_core::estimators::{exact_conv_sigma1, sedghi_spectrum};
use toeplipz_core::rng::{seeded, SeededRng};
use toeplipz_core::toeplitz::build_circular_conv_matrix;
use toeplipz_core::{
    conv_power_method, lipbound, polygrid_max, singla_bound, CirculantMatrix, Complex64, ComplexVector, ConvKernel,
    DenseMatrix, GridSpec, Limits, TrigPoly2D,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn gaussian(rng: &mut SeededRng) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gaussian(rng: &mut SeededRng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

fn limits() -> Limits {
    Limits::default()
}

fn soundness() -> Outcome {
    let cases: Vec<(ConvKernel, usize)> = (0..500u64)
        .map(|i| {
            let mut rng = seeded(0xacc1_0000 + i);
            let cout = rng.random_range(1..=4);
            let cin = rng.random_range(1..=4);
            let s = [1, 3, 5][rng.random_range(0..3)];
            let n = rng.random_range(4..=24);
            let std = 10f64.powf(rng.random_range(-2.0..1.0));
            (ConvKernel::random_normal(cout, cin, s, s / 2, std, &mut rng).unwrap(), n)
        })
        .collect();
    let gaps: Vec<f64> = cases
        .par_iter()
        .map(|(k, n)| {
            let lb = lipbound(k, &GridSpec::default_for_degree(k.degree()), true).unwrap().bound;
            lb - exact_conv_sigma1(k, *n, &limits()).unwrap()
        })
        .collect();
    let violations = gaps.iter().filter(|&&g| g < -1e-7).count();
    let worst = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(violations == 0, format!("{} kernels, {violations} violations, min gap {worst:.3e}", gaps.len()))
}

/// Spearman rank correlation, ties given their average rank.
fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            for &t in &idx[i..=j] {
                r[t] = (i + j) as f64 / 2.0;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let mean = (x.len() as f64 - 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean) * (a - mean);
        syy += (b - mean) * (b - mean);
    }
    sxy / (sxx * syy).sqrt()
}

fn tightness_trend() -> Outcome {
    let ns: Vec<usize> = (5..=24).collect();
    let grid = GridSpec::default_for_degree(1);
    let per_kernel: Vec<(f64, f64)> = (0..10u64)
        .into_par_iter()
        .map(|i| {
            let k = ConvKernel::random_normal(1, 6, 3, 1, 1.0, &mut seeded(0xacc2_0000 + i)).unwrap();
            let k = k.scale(1.0 / k.frobenius_norm());
            let lb = lipbound(&k, &grid, false).unwrap().bound;
            let gamma: Vec<f64> = ns.iter().map(|&n| lb - exact_conv_sigma1(&k, n, &limits()).unwrap()).collect();
            let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
            (spearman(&xs, &gamma), gamma.last().unwrap() / lb)
        })
        .collect();
    let negative = per_kernel.iter().filter(|(rho, _)| *rho < 0.0).count();
    let max_rho = per_kernel.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let mut tail: Vec<f64> = per_kernel.iter().map(|p| p.1).collect();
    tail.sort_by(f64::total_cmp);
    let median = (tail[4] + tail[5]) / 2.0;
    outcome(
        negative == per_kernel.len() && median <= 0.05,
        format!("{negative}/10 kernels with negative Spearman rho (max {max_rho:.3}), median gamma(24)/bound {median:.4}"),
    )
}

fn ratio_bands() -> Outcome {
    let n = 32;
    let grid = GridSpec::default_for_degree(1);
    let rows: Vec<[f64; 3]> = (0..20u64)
        .into_par_iter()
        .map(|i| {
            let k = ConvKernel::random_normal(1, 1, 3, 1, 1.0, &mut seeded(0xacc3_0000 + i)).unwrap();
            let exact = exact_conv_sigma1(&k, n, &limits()).unwrap();
            [
                lipbound(&k, &grid, false).unwrap().bound / exact,
                singla_bound(&k).unwrap() / exact,
                conv_power_method(&k, n, 10, i).unwrap() / exact,
            ]
        })
        .collect();
    let mean = |c: usize| rows.iter().map(|r| r[c]).sum::<f64>() / rows.len() as f64;
    let (lb, sg, pm) = (mean(0), mean(1), mean(2));
    let pass = (0.95..=1.05).contains(&lb) && (1.0..=2.0).contains(&sg) && (0.9..=1.0).contains(&pm);
    outcome(pass, format!("mean ratios: lipbound {lb:.4}, singla {sg:.4}, conv power (10 it) {pm:.4}"))
}

/// Exact maximum modulus on the `samples x samples` grid, by separating the
/// two frequency sums.
fn reference_sup(f: &TrigPoly2D, samples: usize) -> f64 {
    let d = f.degree() as i64;
    let grid = GridSpec::new(samples).unwrap();
    let inner: Vec<Vec<Complex64>> = (0..samples)
        .map(|k2| {
            let w2 = grid.angle(k2);
            (-d..=d)
                .map(|h1| (-d..=d).map(|h2| Complex64::cis(h2 as f64 * w2) * f.coeff(h1, h2)).sum())
                .collect()
        })
        .collect();
    (0..samples)
        .into_par_iter()
        .map(|k1| {
            let w1 = grid.angle(k1);
            let outer: Vec<Complex64> = (-d..=d).map(|h1| Complex64::cis(h1 as f64 * w1)).collect();
            inner
                .iter()
                .map(|g| outer.iter().zip(g).map(|(a, b)| a * b).sum::<Complex64>().norm())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

fn grid_guarantee() -> Outcome {
    let mut failures = 0;
    let mut total = 0;
    let mut worst = 0.0f64;
    for d in [1usize, 2] {
        let grid = GridSpec::default_for_degree(d);
        let factor = grid.guarantee_factor(d).unwrap();
        for i in 0..100u64 {
            let mut rng = seeded(0xacc4_0000 + 1000 * d as u64 + i);
            let f = TrigPoly2D::from_fn(d, |_, _| gaussian(&mut rng));
            let (raw, _) = polygrid_max(&f, &grid);
            let sup = reference_sup(&f, 1000);
            worst = worst.max(sup / raw);
            total += 1;
            if sup > factor * raw * (1.0 + 1e-12) || raw > sup * (1.0 + 1e-12) {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{total} polynomials, {failures} failures, max sup/raw {worst:.4} (factor 1.25)"))
}

fn circulant_algebra() -> Outcome {
    let (mut mv, mut closure, mut eig) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..200u64 {
        let mut rng = seeded(0xacc5_0000 + i);
        let n = rng.random_range(1..=64);
        let draw = |rng: &mut SeededRng| ComplexVector::new((0..n).map(|_| complex_gaussian(rng)).collect()).unwrap();
        let (a, b, x) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let (ca, cb) = (CirculantMatrix::new(a), CirculantMatrix::new(b));
        let (da, db) = (ca.materialize().unwrap(), cb.materialize().unwrap());

        let fast = ca.apply(&x).unwrap();
        let dense = ComplexVector::new(da.matvec(&x).unwrap()).unwrap();
        mv = mv.max(fast.sub(&dense).unwrap().norm2() / dense.norm2());

        let rel = |got: &DenseMatrix, want: &DenseMatrix| got.relative_frobenius_error(want).unwrap();
        closure = closure
            .max(rel(&ca.mul(&cb).unwrap().materialize().unwrap(), &da.matmul(&db).unwrap()))
            .max(rel(&ca.add(&cb).unwrap().materialize().unwrap(), &da.add(&db).unwrap()))
            .max(rel(&ca.adjoint().materialize().unwrap(), &da.adjoint()));

        let mut dense_eig = da.eigenvalues().unwrap();
        for lam in ca.eigenvalues().iter() {
            let (pos, dist) = dense_eig
                .iter()
                .enumerate()
                .map(|(p, z)| (p, (z - lam).norm()))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            eig = eig.max(dist);
            dense_eig.swap_remove(pos);
        }
    }
    outcome(
        mv <= 1e-9 && closure <= 1e-8 && eig <= 1e-7,
        format!("200 cases: matvec rel err {mv:.2e}, closure rel err {closure:.2e}, eigenvalue match {eig:.2e}"),
    )
}

fn rank_decomposition() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (n, k) in [(4usize, 1usize), (4, 2), (6, 1), (6, 2), (6, 3), (8, 4)] {
        for t in 0..10u64 {
            let mut rng = seeded(0xacc6_0000 + 100 * n as u64 + 10 * k as u64 + t);
            let a = DenseMatrix::from_fn(n, k, |_, _| complex_gaussian(&mut rng));
            let b = DenseMatrix::from_fn(k, n, |_, _| complex_gaussian(&mut rng));
            let m = a.matmul(&b).unwrap();
            match decompose_rank(&m, k) {
                Ok(f) => {
                    let err = f.to_dense().unwrap().relative_frobenius_error(&m).unwrap();
                    worst = worst.max(err);
                    if f.len() != 4 * k + 1 || err > 1e-6 {
                        bad.push(format!("({n},{k})#{t}"));
                    }
                }
                Err(e) => bad.push(format!("({n},{k})#{t}: {e}")),
            }
        }
    }
    outcome(bad.is_empty(), format!("60 matrices, max rel err {worst:.2e}, failures {bad:?}"))
}

fn bias_folding() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..50u64 {
        let mut rng = seeded(0xacc7_0000 + i);
        let p = rng.random_range(1..=4);
        let n = rng.random_range(1..=8);
        let bound = rng.random_range(0.1..3.0);
        let unif = |rng: &mut SeededRng| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let ws: Vec<DenseMatrix> = (0..p).map(|_| DenseMatrix::from_fn(n, n, |_, _| unif(&mut rng))).collect();
        let b = ComplexVector::new((0..n).map(|_| unif(&mut rng)).collect()).unwrap();
        let chain = fold_biases(&ws, &b, bound).unwrap();
        for _ in 0..100 {
            let x: Vec<Complex64> = (0..n).map(|_| unif(&mut rng) * bound).collect();
            let layer = chain.eval_layerwise(&x).unwrap();
            let collapsed = chain.eval_collapsed(&x).unwrap();
            for (u, v) in layer.iter().zip(&collapsed) {
                worst = worst.max((u - v).norm());
            }
        }
    }
    outcome(worst <= 1e-9, format!("50 chains x 100 inputs, max abs diff {worst:.2e}"))
}

fn init_covariance() -> Outcome {
    let n = 32;
    let samples = 100_000usize;
    let mut rng = seeded(0xacc8_0000);
    let x: Vec<Complex64> = (0..n).map(|_| Complex64::new(gaussian(&mut rng), 0.0)).collect();
    let x_sq: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let target = 2.0 / n as f64 * x_sq;

    let draws: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let layer = sample_dc_init(n, 0.0, 0xacc8_1000_0000 + s).unwrap();
            layer.apply(&x).unwrap().iter().map(|z| z.re).collect()
        })
        .collect();
    let m = samples as f64;
    let mean: Vec<f64> = (0..n).map(|i| draws.iter().map(|y| y[i]).sum::<f64>() / m).collect();
    let cov = |i: usize, j: usize| -> (f64, f64) {
        let prods: Vec<f64> = draws.iter().map(|y| (y[i] - mean[i]) * (y[j] - mean[j])).collect();
        let c = prods.iter().sum::<f64>() / (m - 1.0);
        let var = prods.iter().map(|p| (p - c).powi(2)).sum::<f64>() / (m - 1.0);
        (c, (var / m).sqrt())
    };
    let var_err = (0..n).map(|i| (cov(i, i).0 / target - 1.0).abs()).fold(0.0, f64::max);
    let (c01, se01) = cov(0, 1);
    let mut worst_z = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            let (c, se) = cov(i, j);
            worst_z = worst_z.max(c.abs() / se);
        }
    }
    // Bonferroni over all pairs at the same family-wise level as 3 standard errors.
    let pass = var_err <= 0.05 && c01.abs() <= 3.0 * se01 && worst_z <= 4.5;
    outcome(
        pass,
        format!(
            "max |var/target - 1| {var_err:.4}, cov(0,1) = {:.2} SE, max |cov| over pairs {worst_z:.2} SE",
            c01.abs() / se01
        ),
    )
}

fn sedghi_exactness() -> Outcome {
    let n = 12;
    let mut worst = 0.0f64;
    for i in 0..20u64 {
        let k = ConvKernel::random_normal(1, 1, 3, 1, 1.0, &mut seeded(0xacc9_0000 + i)).unwrap();
        let fast = sedghi_spectrum(&k, n).unwrap();
        let dense = build_circular_conv_matrix(&k, n, &limits()).unwrap().singular_values().unwrap();
        for (a, b) in fast.iter().zip(&dense) {
            worst = worst.max((a - b).abs());
        }
        if fast.len() != dense.len() {
            worst = f64::INFINITY;
        }
    }
    outcome(worst <= 1e-8, format!("20 kernels at n = 12, max singular value mismatch {worst:.2e}"))
}

fn performance_ordering() -> Outcome {
    let k = ConvKernel::random_normal(64, 64, 3, 1, 0.1, &mut seeded(0xacca_0000)).unwrap();
    let grid = GridSpec::default_for_degree(1);
    let best = |f: &dyn Fn()| {
        (0..3)
            .map(|_| {
                let t = Instant::now();
                f();
                t.elapsed()
            })
            .min()
            .unwrap()
    };
    let lb = best(&|| {
        lipbound(&k, &grid, false).unwrap();
    });
    let pm = best(&|| {
        conv_power_method(&k, 32, 10, 1).unwrap();
    });
    outcome(lb < pm, format!("lipbound {lb:.2?} vs conv power method {pm:.2?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("soundness of the corrected bound", soundness),
        ("gap shrinks with input size", tightness_trend),
        ("estimator ratio bands", ratio_bands),
        ("grid guarantee", grid_guarantee),
        ("circulant algebra", circulant_algebra),
        ("rank-k diagonal-circulant decomposition", rank_decomposition),
        ("bias folding", bias_folding),
        ("initialization covariance", init_covariance),
        ("sedghi spectrum on the circular operator", sedghi_exactness),
        ("lipbound faster than conv power method", performance_ordering),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{:>2}] {name}: {} ({:.1?})", i + 1, o.detail, start.elapsed());
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
