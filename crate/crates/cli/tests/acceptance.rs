//! Acceptance suite: one line per criterion, non-zero exit if any fails.
// `ensure!(a < b)` must fail on NaN, so the negated comparison is intended
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{
    cca_oracle, centered, conditionally_independent, dataset, joint_individual, laplace, median, spectral_oracle,
};
use mvkit::cluster::{
    coreg_spectral_fit_predict, mv_kmeans_fit_predict, mv_spectral_fit_predict, mv_spherical_kmeans_fit_predict,
    spectral_clustering, AffinityParams, ClusterParams,
};
use mvkit::datasets::{make_latent_views, SyntheticSpec};
use mvkit::decompose::{ajive_fit, group_ica_fit, group_pca_fit_transform, AjiveParams, GroupIcaParams};
use mvkit::embed::{
    classical_mds, mvmds_fit_transform, omnibus_fit_transform, omnibus_matrix, Cca, Distance, Gcca, GccaRanks, Kernel,
    KernelSpec, Kmcca, Mcca,
};
use mvkit::linalg::max_principal_angle;
use mvkit::random::{gaussian_matrix, seeded, standard_normal};
use mvkit::semisup::{
    cotrain_classifier_fit, cotrain_regressor_fit, CoRegParams, CoTrainParams, KnnRegressor, LogisticRegression,
    ProbabilisticClassifier, Regressor,
};
use mvkit::{accuracy, adjusted_rand_index, amari_distance, rmse, Fit, MultiviewDataset, Predict, Transform, UNLABELED};
use nalgebra::DMatrix;
use rand::RngExt;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn correlated_pair(seed: u64, n: usize, d1: usize, d2: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut rng = seeded(seed);
    let z: DMatrix<f64> = gaussian_matrix(&mut rng, n, 2, 1.0);
    let a = &z * gaussian_matrix::<f64>(&mut rng, 2, d1, 1.0) + gaussian_matrix::<f64>(&mut rng, n, d1, 0.7);
    let b = &z * gaussian_matrix::<f64>(&mut rng, 2, d2, 1.0) + gaussian_matrix::<f64>(&mut rng, n, d2, 0.7);
    (a, b)
}

fn cca_exactness() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(1);
    let x: DMatrix<f64> = gaussian_matrix(&mut rng, 50, 3, 1.0);
    let m = Cca::new(3).fit(&dataset(vec![x.clone(), x.clone()], None)).map_err(|e| e.to_string())?;
    let dev = m.correlations().iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    ensure!(dev < 1e-8, "identical views: max |rho - 1| = {dev:e}");
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let mut rng = seeded(100 + seed);
        let (a, b) = correlated_pair(seed, 50, 3, 3);
        let t: DMatrix<f64> = gaussian_matrix::<f64>(&mut rng, 3, 3, 1.0) + DMatrix::identity(3, 3) * 2.0;
        if t.determinant().abs() < 0.1 {
            continue;
        }
        let base = Cca::new(3).fit(&dataset(vec![a.clone(), b.clone()], None)).unwrap();
        let moved = Cca::new(3).fit(&dataset(vec![a, &b * t], None)).unwrap();
        let d = (base.correlations() - moved.correlations()).amax();
        worst = worst.max(d);
    }
    ensure!(worst < 1e-6, "invertible transform changed correlations by {worst:e}");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("max |rho-1| {dev:.1e}, transform drift {worst:.1e}, {elapsed:.2?}"))
}

fn family_consistency() -> Outcome {
    let mut worst = [0.0f64; 4];
    for seed in 0..5 {
        let (a, b) = correlated_pair(seed, 100, 4, 5);
        let ds = dataset(vec![a.clone(), b.clone()], None);
        let cca = Cca::new(2).fit(&ds).unwrap();
        let oracle = cca_oracle(&a, &b);
        worst[0] = worst[0].max((cca.correlations()[0] - oracle[0]).abs());
        let mcca = Mcca::new(2).fit(&ds).unwrap();
        worst[1] = worst[1].max((cca.correlations()[0] - mcca.correlations()[0]).abs());
        let kmcca = Kmcca::new(2, KernelSpec::new(Kernel::Linear).regularization(0.0)).fit(&ds).unwrap();
        worst[2] = worst[2].max((kmcca.correlations()[0] - mcca.correlations()[0]).abs());
        let gcca = Gcca::new(2).ranks(GccaRanks::Explicit(vec![4, 5])).fit(&ds).unwrap();
        let scores = cca.transform(&ds).unwrap();
        let mut sum = DMatrix::zeros(100, 2);
        for z in &scores {
            for c in 0..2 {
                let col = z.column(c);
                let mut s = sum.column_mut(c);
                s += col / col.norm();
            }
        }
        worst[3] = worst[3].max(max_principal_angle(&gcca.joint, &sum).unwrap());
    }
    ensure!(worst[0] < 1e-8, "cca vs generalized eigensolve {:e}", worst[0]);
    ensure!(worst[1] < 1e-6, "mcca vs cca {:e}", worst[1]);
    ensure!(worst[2] < 1e-5, "linear kmcca vs mcca {:e}", worst[2]);
    ensure!(worst[3] < 1e-6, "gcca subspace angle {:e}", worst[3]);
    Ok(format!(
        "oracle {:.1e}, mcca {:.1e}, kmcca {:.1e}, gcca angle {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn generator_blobs(seed: u64) -> (MultiviewDataset<f64>, Vec<usize>) {
    let spec = SyntheticSpec {
        n_samples: 150,
        latent_dim: 3,
        view_dims: vec![5, 6],
        noise_sigma: 0.5,
        n_clusters: 3,
        separation: 8.0,
        seed,
    };
    let d = make_latent_views::<f64>(&spec).unwrap();
    (d.dataset, d.labels.unwrap())
}

fn clustering_recovery() -> Outcome {
    let mut aris: [Vec<f64>; 4] = Default::default();
    for seed in 0..10 {
        let (ds, y) = generator_blobs(seed);
        let p = ClusterParams::new(3).seed(seed);
        let a = AffinityParams::default();
        let runs = [
            mv_kmeans_fit_predict(&ds, &p).unwrap(),
            mv_spherical_kmeans_fit_predict(&ds, &p).unwrap(),
            mv_spectral_fit_predict(&ds, &p, &a).unwrap(),
            coreg_spectral_fit_predict(&ds, &p, &a).unwrap(),
        ];
        for w in runs[3].objective_trace.windows(2) {
            ensure!(w[1] >= w[0] - 1e-10 * w[0].abs().max(1.0), "seed {seed}: coreg trace decreased {:?}", runs[3].objective_trace);
        }
        for (acc, r) in aris.iter_mut().zip(&runs) {
            acc.push(adjusted_rand_index(&r.labels, &y).unwrap());
        }
    }
    let names = ["mv-kmeans", "mv-spherical-kmeans", "mv-spectral", "coreg-spectral"];
    let meds: Vec<f64> = aris.iter().map(|a| median(a.clone())).collect();
    for (name, m) in names.iter().zip(&meds) {
        ensure!(*m >= 0.95, "{name} median ARI {m}");
    }
    Ok(names.iter().zip(&meds).map(|(n, m)| format!("{n} {m:.3}")).collect::<Vec<_>>().join(", "))
}

fn reduction_identities() -> Outcome {
    let (ds, _) = generator_blobs(4);
    let p = ClusterParams::new(3).seed(4);
    let zero = AffinityParams::default().coupling(0.0);
    let joint = coreg_spectral_fit_predict(&ds, &p, &zero).unwrap();
    let single = spectral_clustering(ds.view(0), &p, &zero).unwrap();
    let a1 = adjusted_rand_index(&joint.labels, &single.labels).unwrap();
    ensure!(a1 == 1.0, "coreg lambda=0 vs single view ARI {a1}");

    let x = ds.view(1).clone();
    let twin = dataset(vec![x.clone(), x.clone()], None);
    let mv = mv_spectral_fit_predict(&twin, &p, &AffinityParams::default().info_iter(0)).unwrap();
    let a2 = adjusted_rand_index(&mv.labels, &spectral_oracle(&x, 3)).unwrap();
    ensure!(a2 == 1.0, "mv-spectral info_iter=0 vs reference spectral ARI {a2}");

    let mut rng = seeded(6);
    let w: DMatrix<f64> = gaussian_matrix::<f64>(&mut rng, 40, 5, 1.0)
        * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 2.0, 1.5, 1.0, 0.5]));
    let r = group_pca_fit_transform(&dataset(vec![w.clone()], None), Some(&[5]), 4).unwrap();
    let c = centered(&w);
    let eig = c.tr_mul(&c).symmetric_eigen();
    let mut order: Vec<usize> = (0..5).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let mut worst = 0.0f64;
    for (k, &i) in order.iter().take(4).enumerate() {
        let pc = &c * eig.eigenvectors.column(i);
        let got = r.scores.column(k);
        let sign = if got.dot(&pc) < 0.0 { -1.0 } else { 1.0 };
        worst = worst.max((got - pc * sign).amax());
    }
    ensure!(worst < 1e-8, "group PCA vs PCA {worst:e}");
    Ok(format!("ARI {a1} / {a2}, group PCA deviation {worst:.1e}"))
}

fn degenerate_cotraining() -> Outcome {
    let (a, b, y) = conditionally_independent(200, 1, 1.0, 3);
    let ds = dataset(vec![a.clone(), b.clone()], Some(y.clone()));
    let model = cotrain_classifier_fit(
        &ds,
        (LogisticRegression::default(), LogisticRegression::default()),
        &CoTrainParams::default(),
    )
    .unwrap();
    let codes: Vec<usize> = y.iter().map(|&v| v as usize).collect();
    let mut c1 = LogisticRegression::<f64>::default();
    let mut c2 = LogisticRegression::<f64>::default();
    c1.train(&a, &codes).unwrap();
    c2.train(&b, &codes).unwrap();
    let p = (c1.predict_proba(&a).unwrap() + c2.predict_proba(&b).unwrap()) / 2.0;
    ensure!(model.predict_proba(&ds).unwrap() == p, "classifier probabilities differ from the baseline");

    let x = common::column(&(0..30).map(|i| i as f64 * 0.2).collect::<Vec<_>>());
    let t: Vec<f64> = x.iter().map(|v| v.cos()).collect();
    let twin = dataset(vec![x.clone(), x.clone()], Some(t.clone()));
    let reg = cotrain_regressor_fit(&twin, &CoRegParams::default()).unwrap();
    let mut r1 = KnnRegressor::new(3, 2);
    let mut r2 = KnnRegressor::new(3, 5);
    r1.train(&x, &t).unwrap();
    r2.train(&x, &t).unwrap();
    let want: Vec<f64> = r1.predict(&x).unwrap().iter().zip(r2.predict(&x).unwrap()).map(|(a, b)| (a + b) / 2.0).collect();
    ensure!(reg.predict(&twin).unwrap() == want, "regressor predictions differ from the baseline");
    Ok("bit-identical".into())
}

fn sine_task(seed: u64, n_labeled: usize, n_unlabeled: usize) -> (DMatrix<f64>, Vec<f64>) {
    let mut rng = seeded(seed);
    let n = n_labeled + n_unlabeled;
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    let y = (0..n)
        .map(|i| {
            let v = x[i].sin() + 0.1 * standard_normal(&mut rng);
            if i < n_labeled { v } else { UNLABELED }
        })
        .collect();
    (common::column(&x), y)
}

fn cotraining_benefit() -> Outcome {
    let mut accs = Vec::new();
    for seed in 0..10 {
        let (a, b, y) = conditionally_independent(1000, seed, 1.5, 5);
        let partial: Vec<f64> = (0..1000).map(|i| if i % 40 < 2 { y[i] } else { UNLABELED }).collect();
        let model = cotrain_classifier_fit(
            &dataset(vec![a, b], Some(partial)),
            (LogisticRegression::default(), LogisticRegression::default()),
            &CoTrainParams { seed, ..Default::default() },
        )
        .unwrap();
        let (ta, tb, ty) = conditionally_independent(1000, seed + 10_000, 1.5, 5);
        accs.push(accuracy(&model.predict(&dataset(vec![ta, tb], None)).unwrap(), &ty).unwrap());
    }
    let acc = median(accs);
    ensure!(acc >= 0.9, "classifier median accuracy {acc}");

    let grid: Vec<f64> = (0..500).map(|i| i as f64 * std::f64::consts::TAU / 500.0).collect();
    let truth: Vec<f64> = grid.iter().map(|v| v.sin()).collect();
    let g = common::column(&grid);
    let test = dataset(vec![g.clone(), g], None);
    let (mut co, mut base) = (Vec::new(), Vec::new());
    for seed in 0..10 {
        let (x, y) = sine_task(seed, 10, 200);
        let params = CoRegParams { seed, ..Default::default() };
        let m = cotrain_regressor_fit(&dataset(vec![x.clone(), x.clone()], Some(y.clone())), &params).unwrap();
        co.push(rmse(&m.predict(&test).unwrap(), &truth).unwrap());
        let xl = x.rows(0, 10).into_owned();
        let lo = cotrain_regressor_fit(&dataset(vec![xl.clone(), xl], Some(y[..10].to_vec())), &params).unwrap();
        base.push(rmse(&lo.predict(&test).unwrap(), &truth).unwrap());
    }
    let (mc, mb) = (median(co), median(base));
    ensure!(mc <= mb, "COREG median RMSE {mc} > labeled-only {mb}");
    Ok(format!("accuracy {acc:.3}, RMSE {mc:.4} vs labeled-only {mb:.4}"))
}

fn ajive_criterion() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..5 {
        let mut rng = seeded(seed);
        let a: DMatrix<f64> = gaussian_matrix(&mut rng, 60, 8, 1.0);
        let b: DMatrix<f64> = gaussian_matrix(&mut rng, 60, 10, 1.0);
        let ds = dataset(vec![a, b], None);
        let r = ajive_fit(&ds, &AjiveParams::new(vec![3, 4]).n_resamples(100).seed(seed)).unwrap();
        for v in 0..2 {
            let sum = &r.joint[v] + &r.individual[v] + &r.residual[v] + DMatrix::from_fn(60, ds.view(v).ncols(), |_, j| r.means[v][(0, j)]);
            worst = worst.max((sum - ds.view(v)).amax());
        }
    }
    ensure!(worst < 1e-8, "X - (J + I + E) = {worst:e}");
    let hits = (0..10)
        .filter(|&seed| {
            let ds = joint_individual(seed, 200, 0.05);
            ajive_fit(&ds, &AjiveParams::new(vec![3, 3]).n_resamples(100).seed(seed)).unwrap().joint_rank == 2
        })
        .count();
    ensure!(hits >= 9, "joint rank 2 recovered in {hits}/10 seeds");
    let mut rng = seeded(3);
    let z: DMatrix<f64> = gaussian_matrix(&mut rng, 80, 3, 1.0);
    let x = &z * gaussian_matrix::<f64>(&mut rng, 3, 10, 1.0) + gaussian_matrix::<f64>(&mut rng, 80, 10, 0.05);
    let r = ajive_fit(&dataset(vec![x.clone(), x.clone()], None), &AjiveParams::new(vec![3, 3]).n_resamples(100)).unwrap();
    let total = centered(&x).norm_squared();
    let energy = r.individual.iter().map(|i| i.norm_squared()).fold(0.0, f64::max) / total;
    ensure!(energy < 1e-6, "identical views: individual energy fraction {energy:e}");
    Ok(format!("additivity {worst:.1e}, rank-2 hits {hits}/10, identical-view energy {energy:.1e}"))
}

fn laplace_views(seed: u64) -> (MultiviewDataset<f64>, DMatrix<f64>) {
    let mut rng = seeded(seed);
    let s = laplace(&mut rng, 2000, 3);
    let a1: DMatrix<f64> = gaussian_matrix(&mut rng, 4, 3, 1.0);
    let a2: DMatrix<f64> = gaussian_matrix(&mut rng, 5, 3, 1.0);
    let ds = dataset(vec![&s * a1.transpose(), &s * a2.transpose()], None);
    let mut mixing = DMatrix::zeros(9, 3);
    mixing.rows_mut(0, 4).copy_from(&a1);
    mixing.rows_mut(4, 5).copy_from(&a2);
    (ds, mixing)
}

fn group_ica_criterion() -> Outcome {
    let mut dists = Vec::new();
    let mut cross = 0.0f64;
    let mut pairs = 0;
    for seed in 0..10 {
        let (ds, mixing) = laplace_views(seed);
        let a = group_ica_fit(&ds, &GroupIcaParams::new(3).seed(seed)).unwrap();
        dists.push(amari_distance(&(mixing.transpose() * &a.unmixing)).unwrap());
        let b = group_ica_fit(&ds, &GroupIcaParams::new(3).seed(seed + 1000)).unwrap();
        if a.converged && b.converged {
            let c = a.sources.tr_mul(&b.sources) / 1999.0;
            cross = cross.max(amari_distance(&c).unwrap());
            pairs += 1;
        }
    }
    let med = median(dists);
    ensure!(med < 0.05, "median Amari distance {med}");
    ensure!(pairs > 0, "no converged seed pairs");
    ensure!(cross < 0.05, "seed-to-seed Amari distance {cross}");
    Ok(format!("median Amari {med:.4}, worst seed-to-seed {cross:.4} over {pairs} pairs"))
}

fn omnibus_mvmds() -> Outcome {
    let mut rng = seeded(10);
    let x: DMatrix<f64> = gaussian_matrix(&mut rng, 12, 3, 1.0);
    let res = omnibus_fit_transform(&dataset(vec![x.clone(), x.clone(), x], None), 2, Distance::Euclidean).unwrap();
    let d1 = (&res.embeddings[0] - &res.embeddings[1]).amax().max((&res.embeddings[0] - &res.embeddings[2]).amax());
    ensure!(d1 < 1e-8, "identical-view omnibus blocks differ by {d1:e}");

    let y: DMatrix<f64> = gaussian_matrix(&mut rng, 30, 4, 1.0);
    let m = mvmds_fit_transform(&dataset(vec![y.clone(), y.clone()], None), 3).unwrap();
    let (mds, _) = classical_mds(&y, 3).unwrap();
    let angle = max_principal_angle(&m.components, &mds).unwrap();
    ensure!(angle < 1e-8, "MVMDS vs classical MDS angle {angle:e}");

    let a: DMatrix<f64> = gaussian_matrix(&mut rng, 4, 2, 1.0);
    let b: DMatrix<f64> = gaussian_matrix(&mut rng, 4, 3, 1.0);
    let ds = dataset(vec![a, b], None);
    let om = omnibus_matrix(&ds, Distance::Euclidean);
    let eig = om.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..8).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].abs().partial_cmp(&eig.eigenvalues[i].abs()).unwrap());
    let mut gap = 0.0f64;
    for d in 1..=3 {
        let r = omnibus_fit_transform(&ds, d, Distance::Euclidean).unwrap();
        let mut e = DMatrix::zeros(8, d);
        e.rows_mut(0, 4).copy_from(&r.embeddings[0]);
        e.rows_mut(4, 4).copy_from(&r.embeddings[1]);
        let signs = DMatrix::from_diagonal(&r.eigenvalues.map(|v: f64| v.signum()));
        let mut trunc = DMatrix::zeros(8, 8);
        for &i in order.iter().take(d) {
            let v = eig.eigenvectors.column(i);
            trunc += v * v.transpose() * eig.eigenvalues[i];
        }
        gap = gap.max((&e * signs * e.transpose() - trunc).amax());
    }
    ensure!(gap < 1e-8, "n=4 omnibus differs from brute-force truncation by {gap:e}");
    Ok(format!("blocks {d1:.1e}, MVMDS angle {angle:.1e}, brute force {gap:.1e}"))
}

fn mvkit(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mvkit")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
        .collect()
}

fn cli_end_to_end() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |s: &str| tmp.path().join(s).display().to_string();
    for d in ["d1", "d2"] {
        let (code, err) = mvkit(&["synth", "--out", &p(d), "--clusters", "3", "--sep", "8", "--seed", "5", "--plot"]);
        ensure!(code == 0, "synth exited {code}: {err}");
    }
    ensure!(snapshot(&tmp.path().join("d1")) == snapshot(&tmp.path().join("d2")), "synth outputs differ between runs");
    let input_before = snapshot(&tmp.path().join("d1"));
    for c in ["c1", "c2"] {
        let (code, err) = mvkit(&["cluster", "--in", &p("d1"), "--out", &p(c), "--algo", "mv-kmeans", "--seed", "5", "--plot"]);
        ensure!(code == 0, "cluster exited {code}: {err}");
    }
    let c1 = snapshot(&tmp.path().join("c1"));
    ensure!(c1 == snapshot(&tmp.path().join("c2")), "cluster outputs differ between runs");
    ensure!(input_before == snapshot(&tmp.path().join("d1")), "cluster modified its input directory");
    for f in ["labels.csv", "metrics.json", "summary.json", "scatter.svg", "run_manifest.json"] {
        ensure!(c1.contains_key(f), "missing {f}");
    }
    let metrics: serde_json::Value = serde_json::from_slice(&c1["metrics.json"]).map_err(|e| e.to_string())?;
    ensure!(metrics["ari"] == 1.0, "metrics.json ari = {}", metrics["ari"]);

    let (code, err) = mvkit(&["cluster", "--in", &p("d1"), "--out", &p("x"), "--algo", "dbscan"]);
    ensure!(code == 2 && err.contains("mv-kmeans") && err.contains("coreg-spectral"), "unknown algo: {code} {err}");
    let bad = tmp.path().join("bad");
    std::fs::create_dir(&bad).unwrap();
    std::fs::write(bad.join("view_a.csv"), "1,2\n3,4\n5,6\n").unwrap();
    std::fs::write(bad.join("view_b.csv"), "1,2\n3,4\n").unwrap();
    let (code, err) = mvkit(&["cluster", "--in", &p("bad"), "--out", &p("x"), "--algo", "mv-kmeans", "n_clusters=2"]);
    ensure!(code == 3 && err.contains("view_a.csv") && err.contains("view_b.csv"), "mismatched views: {code} {err}");
    let (code, err) = mvkit(&["decompose", "--in", &p("d1"), "--out", &p("x"), "--algo", "group-ica", "max_iter=1", "tol=0"]);
    ensure!(code == 4 && err.contains("FastICA"), "non-convergence: {code} {err}");
    Ok("ARI 1.0, byte-identical reruns, exit codes 2/3/4".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("CCA exactness", cca_exactness),
        ("family consistency", family_consistency),
        ("clustering recovery", clustering_recovery),
        ("reduction identities", reduction_identities),
        ("co-training degenerate case", degenerate_cotraining),
        ("co-training benefit", cotraining_benefit),
        ("AJIVE", ajive_criterion),
        ("group ICA", group_ica_criterion),
        ("omnibus / MVMDS", omnibus_mvmds),
        ("CLI end-to-end", cli_end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let t = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{t:.2}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{t:.2}s]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
