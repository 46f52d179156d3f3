//! Library routines against naive dense re-implementations.

mod common;

use augsvm_core::kernel::{build_gram, krn_global_update, update_scales_krn, KernelSpec};
use augsvm_core::linalg::UpperTriangle;
use augsvm_core::linear::{global_update, local_stats_cls, local_stats_svr, PartialStats, UpdateKind};
use augsvm_core::multiclass::{compute_reduction, local_stats_mlt, update_scales_mlt, BinaryReduction};
use augsvm_core::runtime::{reduce_stats, ReducePlan};
use augsvm_core::stochastic::{cholesky_with_jitter, solve_mean, PrecisionSystem};
use augsvm_core::*;
use common::*;

fn full(t: &UpperTriangle) -> Vec<Vec<f64>> {
    let n = t.dim();
    t.to_full().chunks(n).map(|c| c.to_vec()).collect()
}

fn mat_rel(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    max_rel(&a.concat(), &b.concat())
}

#[test]
fn objectives_match_dense_sums() {
    for seed in 0..5 {
        let d = random_binary(20, 5, seed);
        let mut r = rng(100 + seed);
        let w: Vec<f64> = (0..5).map(|_| r.standard_normal()).collect();
        let x = dense(&d);
        let oracle = dense_hinge_objective(&w, &x, d.labels(), 0.7);
        assert!(rel(objective_cls(&w, &d, 0.7).unwrap(), oracle) < 1e-12);

        let s = random_regression(15, 4, seed);
        let w: Vec<f64> = (0..4).map(|_| r.standard_normal()).collect();
        let x = dense(&s);
        let mut oracle = 0.5 * 1.3 * ddot(&w, &w);
        for (xd, y) in x.iter().zip(s.labels()) {
            oracle += 2.0 * ((y - ddot(xd, &w)).abs() - 0.25).max(0.0);
        }
        assert!(rel(objective_svr(&w, &s, 1.3, 0.25).unwrap(), oracle) < 1e-12);

        let m = random_multiclass(18, 4, 3, seed);
        let ws: Vec<Vec<f64>> = (0..3).map(|_| (0..4).map(|_| r.standard_normal()).collect()).collect();
        let x = dense(&m);
        let mut oracle = 0.5 * 0.9 * ws.iter().map(|w| ddot(w, w)).sum::<f64>();
        for (d, xd) in x.iter().enumerate() {
            let t = m.class_of(d);
            let own = ddot(&ws[t], xd);
            let worst = (0..3)
                .map(|y| if y == t { 0.0 } else { 1.0 + ddot(&ws[y], xd) - own })
                .fold(f64::NEG_INFINITY, f64::max);
            oracle += 2.0 * worst;
        }
        assert!(rel(objective_mlt(&ws, &m, 0.9, &ZeroOneCost).unwrap(), oracle) < 1e-12);
    }
}

#[test]
fn local_stats_match_dense_accumulation() {
    let d = random_binary(30, 6, 1);
    let shard = &partition(&d, 1).unwrap()[0];
    let mut r = rng(2);
    let gamma: Vec<f64> = (0..30).map(|_| 0.1 + r.uniform()).collect();
    let st = local_stats_cls(shard, &gamma).unwrap();
    let x = dense(&d);
    let y = d.labels();
    let (mu, s) = dense_stats(&x, |i| 1.0 / gamma[i], |i| (1.0 + 1.0 / gamma[i]) * y[i]);
    assert!(max_rel(&st.mu, &mu) < 1e-12);
    assert!(mat_rel(&full(&st.sigma), &s) < 1e-12);

    let d = random_regression(25, 5, 3);
    let shard = &partition(&d, 1).unwrap()[0];
    let omega: Vec<f64> = (0..25).map(|_| 0.1 + r.uniform()).collect();
    let gamma: Vec<f64> = (0..25).map(|_| 0.1 + r.uniform()).collect();
    let st = local_stats_svr(shard, &gamma, &omega, 0.3).unwrap();
    let x = dense(&d);
    let y = d.labels();
    let (mu, s) = dense_stats(&x, |i| 1.0 / gamma[i] + 1.0 / omega[i], |i| (y[i] - 0.3) / gamma[i] + (y[i] + 0.3) / omega[i]);
    assert!(max_rel(&st.mu, &mu) < 1e-12);
    assert!(mat_rel(&full(&st.sigma), &s) < 1e-12);

    // equal scales reduce to the binary form with scale 2/γ
    let same = local_stats_svr(shard, &gamma, &gamma, 0.0).unwrap();
    let (_, s2) = dense_stats(&x, |i| 2.0 / gamma[i], |_| 0.0);
    assert!(mat_rel(&full(&same.sigma), &s2) < 1e-12);
}

#[test]
fn multiclass_pieces_match_dense_definitions() {
    let m = 3;
    let d = random_multiclass(24, 4, m, 5);
    let shard = &partition(&d, 1).unwrap()[0];
    let mut r = rng(6);
    let ws: Vec<Vec<f64>> = (0..m).map(|_| (0..4).map(|_| r.standard_normal()).collect()).collect();
    let x = dense(&d);
    let truth: Vec<usize> = (0..d.len()).map(|i| d.class_of(i)).collect();
    let scores: Vec<f64> = x.iter().flat_map(|xd| ws.iter().map(move |w| ddot(w, xd))).collect();
    for y in 0..m {
        let red = compute_reduction(&scores, &truth, m, y, &ZeroOneCost).unwrap();
        for (i, xd) in x.iter().enumerate() {
            let cost = |c: usize| if c == truth[i] { 0.0 } else { 1.0 };
            let zeta = (0..m)
                .filter(|&c| c != y)
                .map(|c| ddot(&ws[c], xd) + cost(c))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((red.rho[i] - (zeta - cost(y))).abs() < 1e-12);
            assert_eq!(red.beta[i], if truth[i] == y { 1.0 } else { -1.0 });
        }
        let gamma = update_scales_mlt(&ws[y], &red, shard, UpdateKind::Em, 1e-6).unwrap();
        for (i, xd) in x.iter().enumerate() {
            let expect = (red.rho[i] - ddot(&ws[y], xd)).abs().max(1e-6);
            assert!((gamma[i] - expect).abs() <= 1e-12 * expect.max(1.0));
        }
        let st = local_stats_mlt(shard, &red, &gamma).unwrap();
        let (mu, s) = dense_stats(&x, |i| 1.0 / gamma[i], |i| red.rho[i] / gamma[i] + red.beta[i]);
        assert!(max_rel(&st.mu, &mu) < 1e-12);
        assert!(mat_rel(&full(&st.sigma), &s) < 1e-12);
    }
}

fn cs_full(scores: &[f64], t: usize) -> f64 {
    (0..scores.len())
        .map(|c| if c == t { 0.0 } else { 1.0 } + scores[c] - scores[t])
        .fold(f64::NEG_INFINITY, f64::max)
}

fn pseudo(scores: &[f64], t: usize, y: usize) -> f64 {
    let red = compute_reduction(scores, &[t], scores.len(), y, &ZeroOneCost).unwrap();
    (red.beta[0] * (red.rho[0] - scores[y])).max(0.0)
}

#[test]
fn class_pseudo_loss_reproduces_crammer_singer_loss() {
    let m = 4;
    let mut r = rng(7);
    for _ in 0..200 {
        let scores: Vec<f64> = (0..m).map(|_| r.standard_normal()).collect();
        let t = (r.uniform() * m as f64) as usize;
        let full = cs_full(&scores, t);
        // own class: identical
        assert!((pseudo(&scores, t, t) - full).abs() < 1e-12);
        // any class: the pseudo-loss carries all dependence on s_y
        for y in 0..m {
            let base = full - pseudo(&scores, t, y);
            for shift in [-2.0, -0.3, 0.4, 1.5] {
                let mut moved = scores.clone();
                moved[y] += shift;
                let lhs = cs_full(&moved, t) - pseudo(&moved, t, y);
                assert!((lhs - base).abs() < 1e-12, "class {y}: offset {lhs} vs {base}");
            }
        }
        // at the active wrong class, the offset is ζ − s_t
        let active = (0..m)
            .max_by(|&a, &b| {
                let ca = if a == t { 0.0 } else { 1.0 } + scores[a];
                let cb = if b == t { 0.0 } else { 1.0 } + scores[b];
                ca.partial_cmp(&cb).unwrap()
            })
            .unwrap();
        if active != t {
            let red = compute_reduction(&scores, &[t], m, active, &ZeroOneCost).unwrap();
            let zeta = red.rho[0] + 1.0;
            assert!((pseudo(&scores, t, active) + zeta - scores[t] - full).abs() < 1e-12);
        }
    }
}

#[test]
fn kernel_eval_matches_dense_distance() {
    let mut r = rng(8);
    let rows = random_rows(40, 30, 0.3, &mut r);
    let k = KernelSpec::Gaussian { sigma: 1.7 };
    for pair in rows.chunks(2) {
        let (a, b) = (pair[0].to_dense(), pair[1].to_dense());
        let d2: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
        let oracle = (-d2 / (2.0 * 1.7 * 1.7)).exp();
        assert!(rel(k.eval(&pair[0], &pair[1]).unwrap(), oracle) < 1e-14);
    }
}

#[test]
fn gram_matches_serial_double_loop() {
    let d = random_binary(50, 6, 9);
    let k = KernelSpec::Gaussian { sigma: 0.9 };
    let exec = SerialExecutor::new();
    let g1 = build_gram(&d, k, 1, 8192, &exec).unwrap();
    let g3 = build_gram(&d, k, 3, 8192, &exec).unwrap();
    for i in 0..50 {
        for j in 0..50 {
            let (lo, hi) = (i.min(j), i.max(j));
            let oracle = k.eval(&d.rows()[lo], &d.rows()[hi]).unwrap();
            assert_eq!(g1.get(i, j).to_bits(), oracle.to_bits());
        }
    }
    assert_eq!(g1, g3);
}

#[test]
fn kernel_updates_match_dense_oracle() {
    let n = 40;
    let d = random_binary(n, 5, 10);
    let g = build_gram(&d, KernelSpec::Gaussian { sigma: 1.2 }, 1, 8192, &SerialExecutor::new()).unwrap();
    let kmat: Vec<Vec<f64>> = (0..n).map(|i| g.row(i).to_vec()).collect();
    let y = d.labels();
    let mut r = rng(11);
    let omega: Vec<f64> = (0..n).map(|_| 0.2 * r.standard_normal()).collect();

    let gamma = update_scales_krn(&omega, &g, y, UpdateKind::Em, 1e-6).unwrap();
    for i in 0..n {
        let margin = 1.0 - y[i] * ddot(&kmat[i], &omega);
        assert!((gamma[i] - margin.abs().max(1e-6)).abs() < 1e-12);
    }

    let lambda = 0.8;
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for dd in 0..n {
        for i in 0..n {
            b[i] += y[dd] * (1.0 + 1.0 / gamma[dd]) * kmat[dd][i];
            for j in 0..n {
                a[i][j] += kmat[dd][i] * kmat[dd][j] / gamma[dd];
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            a[i][j] += lambda * kmat[i][j];
        }
    }
    let oracle = dense_solve(&a, &b);
    let step = krn_global_update(lambda, &g, y, &gamma, UpdateKind::Em).unwrap();
    assert!(max_rel(&step.weights, &oracle) < 1e-10, "{}", max_rel(&step.weights, &oracle));
}

#[test]
fn cholesky_reconstructs_and_solves() {
    let n = 20;
    let mut r = rng(12);
    let bm: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| r.standard_normal()).collect()).collect();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (0..n).map(|k| bm[k][i] * bm[k][j]).sum::<f64>() + if i == j { 1.0 } else { 0.0 };
        }
    }
    let tri = UpperTriangle::from_full(n, &a).unwrap();
    let c = cholesky_with_jitter(&tri).unwrap();
    assert_eq!(c.jitter(), 0.0);
    let l = c.lower();
    let mut err = 0.0f64;
    let mut norm = 0.0f64;
    for i in 0..n {
        let (mut e, mut s) = (0.0, 0.0);
        for j in 0..n {
            let llt: f64 = (0..n).map(|k| l[i * n + k] * l[j * n + k]).sum();
            e += (llt - a[i * n + j]).abs();
            s += a[i * n + j].abs();
        }
        err = err.max(e);
        norm = norm.max(s);
    }
    assert!(err <= 1e-10 * norm);

    let b: Vec<f64> = (0..n).map(|_| r.standard_normal()).collect();
    let mu = solve_mean(&PrecisionSystem::new(tri, b.clone()).unwrap()).unwrap();
    let res: f64 = (0..n)
        .map(|i| {
            let ai: f64 = (0..n).map(|j| a[i * n + j] * mu[j]).sum();
            (ai - b[i]).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    assert!(res <= 1e-9 * ddot(&b, &b).sqrt());
}

#[test]
fn tree_reduce_matches_left_fold() {
    let mut r = rng(13);
    let k = 6;
    let partials: Vec<PartialStats> = (0..8)
        .map(|_| {
            let mu: Vec<f64> = (0..k).map(|_| r.standard_normal()).collect();
            let x: Vec<f64> = (0..k).map(|_| r.standard_normal()).collect();
            let mut sigma = UpperTriangle::zeros(k);
            sigma.add_outer_dense(r.uniform(), &x);
            PartialStats { mu, sigma, count: 3 }
        })
        .collect();
    let mut fold = PartialStats::zeros(k);
    for p in &partials {
        fold.merge(p).unwrap();
    }
    let tree = reduce_stats(&ReducePlan::new(8), partials).unwrap();
    assert_eq!(tree.count, 24);
    assert!(max_rel(&tree.mu, &fold.mu) < 1e-13);
    assert!(max_rel(tree.sigma.as_slice(), fold.sigma.as_slice()) < 1e-13);
}

#[test]
fn sharded_statistics_match_serial() {
    let d = random_binary(200, 8, 14);
    let mut r = rng(15);
    let gamma: Vec<f64> = (0..200).map(|_| 0.05 + r.uniform()).collect();
    let one = partition(&d, 1).unwrap();
    let four = partition(&d, 4).unwrap();
    let p1 = vec![local_stats_cls(&one[0], &gamma).unwrap()];
    let p4: Vec<PartialStats> = four
        .iter()
        .map(|s| local_stats_cls(s, &gamma[s.range()]).unwrap())
        .collect();
    let s1 = reduce_stats(&ReducePlan::new(1), p1.clone()).unwrap();
    let s4 = reduce_stats(&ReducePlan::new(4), p4.clone()).unwrap();
    assert!(max_rel(&s4.mu, &s1.mu) < 1e-12);
    assert!(max_rel(s4.sigma.as_slice(), s1.sigma.as_slice()) < 1e-12);
    let w1 = global_update(1.0, p1, UpdateKind::Em).unwrap().weights;
    let w4 = global_update(1.0, p4, UpdateKind::Em).unwrap().weights;
    assert!(max_rel(&w4, &w1) < 1e-10);
}

#[test]
fn reduction_length_checked() {
    let d = random_multiclass(6, 2, 3, 16);
    let s = &partition(&d, 1).unwrap()[0];
    let short = BinaryReduction { rho: vec![0.0; 2], beta: vec![1.0; 2] };
    assert!(local_stats_mlt(s, &short, &[1.0; 6]).is_err());
    assert!(update_scales_mlt(&[0.0; 2], &short, s, UpdateKind::Em, 1e-6).is_err());
}
