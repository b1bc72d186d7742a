use std::path::{Path, PathBuf};

use mvkit::cluster::{
    coreg_spectral_fit_predict, mv_kmeans_fit_predict, mv_spectral_fit_predict, mv_spherical_kmeans_fit_predict,
    Affinity, AffinityParams, ClusterParams, Gamma,
};
use mvkit::compose::{concat_views, random_gaussian_projection, random_subspace, split_features, ProjectionSpec, SubspaceSpec};
use mvkit::datasets::{load_multiview_dir, make_latent_views, save_multiview_dir, SyntheticSpec, MANIFEST_FILE};
use mvkit::decompose::{ajive_fit, group_ica_fit, group_pca_fit_transform, AjiveParams, BindingBound, GroupIcaParams};
use mvkit::embed::{
    mvmds_fit_transform, omnibus_fit_transform, Cca, Distance, Gcca, GccaRanks, Kernel, KernelSpec, Kmcca, Mcca,
};
use mvkit::metrics::encode_labels;
use mvkit::semisup::{cotrain_classifier_fit, cotrain_regressor_fit, CoRegParams, CoTrainParams, LogisticRegression};
use mvkit::{accuracy, adjusted_rand_index, is_unlabeled, rmse, Fit, MultiviewDataset, MvError, Predict, Transform, UNLABELED};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;

use crate::args::{RunConfig, Subcommand};
use crate::error::{CliError, CliResult};
use crate::output::{sci, NumberMap, OutDir};

pub struct Plot {
    pub points: DMatrix<f64>,
    pub labels: Option<Vec<Option<usize>>>,
}

/// What a finished subcommand hands back for the shared output files.
pub struct Outcome {
    pub out: OutDir,
    pub metrics: NumberMap,
    pub summary: NumberMap,
    pub plot: Option<Plot>,
}

impl Outcome {
    fn new(out: OutDir) -> Self {
        Self {
            out,
            metrics: NumberMap::new(),
            summary: NumberMap::new(),
            plot: None,
        }
    }

    fn plot(&mut self, points: DMatrix<f64>, labels: Option<Vec<Option<usize>>>) {
        self.plot = Some(Plot { points, labels });
    }
}

pub fn execute(cfg: &mut RunConfig) -> CliResult<Outcome> {
    match cfg.subcommand {
        Subcommand::Synth => synth(cfg),
        Subcommand::Compose => compose(cfg),
        Subcommand::Embed => embed(cfg),
        Subcommand::Cluster => cluster(cfg),
        Subcommand::Semisup => semisup(cfg),
        Subcommand::Decompose => decompose(cfg),
    }
}

fn absolute(p: &Path) -> PathBuf {
    if let Ok(c) = p.canonicalize() {
        return c;
    }
    let abs = std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf());
    match (abs.parent(), abs.file_name()) {
        (Some(parent), Some(name)) => absolute(parent).join(name),
        _ => abs,
    }
}

/// Loads `--in`, refusing output locations inside the input directory.
fn load_input(cfg: &RunConfig) -> CliResult<MultiviewDataset<f64>> {
    let input = cfg.input.as_ref().expect("checked by the parser");
    let ina = absolute(input);
    if absolute(&cfg.output).starts_with(&ina) {
        return Err(CliError::usage(format!(
            "--out {} must not be the input directory or lie inside it",
            cfg.output.display()
        )));
    }
    Ok(load_multiview_dir(input)?)
}

/// Output directory for result files; a dataset directory is only reused
/// with `--force`.
fn results_dir(cfg: &RunConfig) -> CliResult<OutDir> {
    if cfg.output.join(MANIFEST_FILE).exists() && !cfg.force {
        return Err(MvError::Io {
            path: cfg.output.clone(),
            source: std::io::Error::new(
                std::io::ErrorKind::AlreadyExists,
                "output directory holds a dataset; pass --force to write into it",
            ),
        }
        .into());
    }
    OutDir::create(&cfg.output)
}

fn dataset_dir(cfg: &RunConfig, ds: &MultiviewDataset<f64>) -> CliResult<OutDir> {
    let mut out = OutDir::create(&cfg.output)?;
    let manifest = save_multiview_dir(ds, &cfg.output, cfg.force)?;
    out.record(MANIFEST_FILE);
    out.written.extend(manifest.views.iter().cloned());
    out.written.extend(manifest.labels.iter().cloned());
    Ok(out)
}

fn class_codes(y: Option<&[f64]>) -> Option<Vec<Option<usize>>> {
    let (codes, _) = encode_labels(y?);
    Some(codes.into_iter().map(|c| (c != usize::MAX).then_some(c)).collect())
}

fn indexed(summary: &mut NumberMap, prefix: &str, values: impl IntoIterator<Item = f64>) {
    for (i, v) in values.into_iter().enumerate() {
        summary.insert(format!("{prefix}_{i}"), v);
    }
}

fn synth(cfg: &mut RunConfig) -> CliResult<Outcome> {
    let p = &mut cfg.params;
    let spec = SyntheticSpec {
        n_samples: p.get("n", 150)?,
        latent_dim: p.get("latent_dim", 3)?,
        view_dims: p.list("view_dims")?.unwrap_or_else(|| vec![5, 6]),
        noise_sigma: p.get("noise", 0.5)?,
        n_clusters: p.get("clusters", 0)?,
        separation: p.get("sep", 8.0)?,
        seed: cfg.seed,
    };
    p.finish(&cfg.algo)?;
    let data = make_latent_views::<f64>(&spec)?;
    let mut ds = data.dataset;
    if let Some(l) = &data.labels {
        ds = ds.with_labels(l.iter().map(|&c| c as f64).collect())?;
    }
    let mut o = Outcome::new(dataset_dir(cfg, &ds)?);
    o.out.matrix("latent.csv", &data.latent)?;
    o.summary.insert("n_samples".into(), ds.n_samples() as f64);
    o.summary.insert("n_views".into(), ds.n_views() as f64);
    o.summary.insert("latent_dim".into(), spec.latent_dim as f64);
    o.summary.insert("n_clusters".into(), spec.n_clusters as f64);
    o.plot(data.latent, data.labels.map(|l| l.into_iter().map(Some).collect()));
    Ok(o)
}

fn compose(cfg: &mut RunConfig) -> CliResult<Outcome> {
    let p = &mut cfg.params;
    enum Op {
        Concat,
        Split(Vec<usize>),
        Subspace(SubspaceSpec),
        Projection(ProjectionSpec),
    }
    let op = match cfg.algo.as_str() {
        "concat" => Op::Concat,
        "split" => Op::Split(p.list("boundaries")?.ok_or_else(|| CliError::usage("split needs boundaries=b1,b2,..."))?),
        "random-subspace" => Op::Subspace(SubspaceSpec {
            n_views: p.get("n_views", 2)?,
            subset_size: p.require("subset_size")?,
            seed: cfg.seed,
        }),
        _ => Op::Projection(ProjectionSpec {
            n_views: p.get("n_views", 2)?,
            n_components: p.require("n_components")?,
            seed: cfg.seed,
        }),
    };
    p.finish(&cfg.algo)?;
    let ds = load_input(cfg)?;
    let x = concat_views(&ds);
    let mut indices = None;
    let composed = match op {
        Op::Concat => MultiviewDataset::from_views(vec![x], None)?,
        Op::Split(b) => split_features(&x, &b)?,
        Op::Subspace(spec) => {
            let r = random_subspace(&x, spec)?;
            indices = Some(r.indices);
            r.dataset
        }
        Op::Projection(spec) => random_gaussian_projection(&x, spec)?,
    };
    let composed = match ds.labels() {
        Some(y) => composed.with_labels(y.to_vec())?,
        None => composed,
    };
    let mut o = Outcome::new(dataset_dir(cfg, &composed)?);
    if let Some(idx) = indices {
        let rows: Vec<String> = idx
            .iter()
            .map(|cols| cols.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        o.out.column("subspace_indices.csv", &rows)?;
    }
    o.summary.insert("n_samples".into(), composed.n_samples() as f64);
    o.summary.insert("n_views".into(), composed.n_views() as f64);
    indexed(&mut o.summary, "width", composed.widths().into_iter().map(|w| w as f64));
    o.plot(composed.view(0).clone(), class_codes(composed.labels()));
    Ok(o)
}

fn embed(cfg: &mut RunConfig) -> CliResult<Outcome> {
    let p = &mut cfg.params;
    let c: usize = p.get("n_components", 2)?;
    enum Algo {
        Cca(Cca<f64>),
        Mcca(Mcca<f64>),
        Kmcca(Kmcca<f64>),
        Gcca(Gcca<f64>),
        Mvmds,
        Omnibus,
    }
    let algo = match cfg.algo.as_str() {
        "cca" => Algo::Cca(Cca::new(c).regularization(p.get("reg", 0.0)?)),
        "mcca" => {
            let d = Mcca::<f64>::new(c);
            let (tol, max_iter) = (d.tol, d.max_iter);
            Algo::Mcca(
                d.regularization(p.get("reg", 0.0)?)
                    .tol(p.get("tol", tol)?)
                    .max_iter(p.get("max_iter", max_iter)?),
            )
        }
        "kmcca" => {
            let kernel = match p.raw("kernel").as_deref().unwrap_or("linear") {
                "linear" => Kernel::Linear,
                "rbf" => Kernel::Rbf {
                    gamma: p.get("gamma", 1.0)?,
                },
                "poly" => Kernel::Polynomial {
                    degree: p.get("degree", 2)?,
                    coef0: p.get("coef0", 1.0)?,
                },
                other => return Err(CliError::usage(format!("unknown kernel '{other}'; expected linear, rbf or poly"))),
            };
            Algo::Kmcca(Kmcca::new(c, KernelSpec::new(kernel).regularization(p.get("eps", 0.1)?)))
        }
        "gcca" => {
            let mut g = Gcca::new(c);
            if let Some(r) = p.list("ranks")? {
                g = g.ranks(GccaRanks::Explicit(r));
            } else if let Some(f) = p.opt("fraction")? {
                g = g.ranks(GccaRanks::VarianceFraction(f));
            }
            Algo::Gcca(g)
        }
        "mvmds" => Algo::Mvmds,
        _ => Algo::Omnibus,
    };
    p.finish(&cfg.algo)?;
    let ds = load_input(cfg)?;
    let labels = class_codes(ds.labels());
    let (blocks, values, key): (Vec<DMatrix<f64>>, Vec<f64>, &str) = match algo {
        Algo::Cca(a) => {
            let m = a.fit(&ds)?;
            (m.transform(&ds)?, m.correlations().iter().copied().collect(), "correlation")
        }
        Algo::Mcca(a) => {
            let m = a.fit(&ds)?;
            if !m.converged {
                return Err(CliError::not_converged("mcca power iteration", m.n_iter));
            }
            (m.transform(&ds)?, m.correlations().iter().copied().collect(), "correlation")
        }
        Algo::Kmcca(a) => {
            let m = a.fit(&ds)?;
            (m.transform(&ds)?, m.correlations().iter().copied().collect(), "correlation")
        }
        Algo::Gcca(a) => {
            let m = a.fit(&ds)?;
            let joint = m.joint.clone();
            let mut blocks = m.transform(&ds)?;
            blocks.insert(0, joint);
            (blocks, m.singular_values.iter().copied().collect(), "singular_value")
        }
        Algo::Mvmds => {
            let r = mvmds_fit_transform(&ds, c)?;
            (vec![r.components], r.eigenvalues.iter().copied().collect(), "eigenvalue")
        }
        Algo::Omnibus => {
            let r = omnibus_fit_transform(&ds, c, Distance::Euclidean)?;
            (r.embeddings, r.eigenvalues.iter().copied().collect(), "eigenvalue")
        }
    };
    let mut o = Outcome::new(results_dir(cfg)?);
    match cfg.algo.as_str() {
        "mvmds" => o.out.matrix("embedding.csv", &blocks[0])?,
        "gcca" => {
            o.out.matrix("embedding.csv", &blocks[0])?;
            for (v, b) in blocks.iter().skip(1).enumerate() {
                o.out.matrix(&format!("embedding_{v}.csv"), b)?;
            }
        }
        _ => {
            for (v, b) in blocks.iter().enumerate() {
                o.out.matrix(&format!("embedding_{v}.csv"), b)?;
            }
        }
    }
    indexed(&mut o.summary, key, values);
    o.summary.insert("n_components".into(), blocks[0].ncols() as f64);
    o.plot(blocks[0].clone(), labels);
    Ok(o)
}

fn cluster(cfg: &mut RunConfig) -> CliResult<Outcome> {
    let p = &mut cfg.params;
    let n_clusters: Option<usize> = p.opt("n_clusters")?;
    let n_init: usize = p.get("n_init", 5)?;
    let max_iter: usize = p.get("max_iter", 100)?;
    let spectral = cfg.algo.ends_with("spectral");
    let mut affinity = AffinityParams::<f64>::default();
    if spectral {
        affinity.kind = match p.raw("affinity").as_deref().unwrap_or("rbf") {
            "rbf" => Affinity::Rbf(match p.raw("gamma").as_deref() {
                None | Some("median") => Gamma::Median,
                Some(g) => Gamma::Value(g.parse().map_err(|_| CliError::usage(format!("cannot parse gamma={g}")))?),
            }),
            "knn" => Affinity::Knn {
                n_neighbors: p.get("n_neighbors", 10)?,
            },
            other => return Err(CliError::usage(format!("unknown affinity '{other}'; expected rbf or knn"))),
        };
        if cfg.algo == "mv-spectral" {
            affinity.info_iter = p.get("info_iter", affinity.info_iter)?;
        } else {
            affinity.coupling = p.get("lambda", affinity.coupling)?;
        }
    }
    p.finish(&cfg.algo)?;
    let ds = load_input(cfg)?;
    let truth = ds.labels().map(encode_labels);
    let k = match (n_clusters, &truth) {
        (Some(k), _) => k,
        (None, Some((_, classes))) if !classes.is_empty() => classes.len(),
        _ => return Err(CliError::usage("n_clusters is required when the dataset has no labels")),
    };
    let params = ClusterParams::new(k).seed(cfg.seed).n_init(n_init).max_iter(max_iter);
    let (r, stage) = match cfg.algo.as_str() {
        "mv-kmeans" => (mv_kmeans_fit_predict(&ds, &params)?, "co-EM k-means"),
        "mv-spherical-kmeans" => (mv_spherical_kmeans_fit_predict(&ds, &params)?, "spherical co-EM k-means"),
        "mv-spectral" => (mv_spectral_fit_predict(&ds, &params, &affinity)?, "k-means on the co-trained embedding"),
        _ => (coreg_spectral_fit_predict(&ds, &params, &affinity)?, "co-regularized eigenvector sweeps"),
    };
    if !r.converged {
        return Err(CliError::not_converged(stage, r.n_iter));
    }
    let mut o = Outcome::new(results_dir(cfg)?);
    o.out.column("labels.csv", &r.labels)?;
    if let Some((codes, _)) = &truth {
        let idx: Vec<usize> = (0..codes.len()).filter(|&i| codes[i] != usize::MAX).collect();
        if !idx.is_empty() {
            let t: Vec<usize> = idx.iter().map(|&i| codes[i]).collect();
            let pred: Vec<usize> = idx.iter().map(|&i| r.labels[i]).collect();
            o.metrics.insert("ari".into(), adjusted_rand_index(&pred, &t)?);
        }
    }
    o.metrics.insert("objective".into(), r.objective);
    o.summary.insert("n_clusters".into(), k as f64);
    o.summary.insert("n_iter".into(), r.n_iter as f64);
    indexed(&mut o.summary, "objective_trace", r.objective_trace.iter().copied());
    let points = match r.spectral_bases.first() {
        Some(u) if u.ncols() >= 2 => u.clone(),
        _ => ds.view(0).clone(),
    };
    o.plot(points, Some(r.labels.iter().map(|&l| Some(l)).collect()));
    Ok(o)
}

/// Keeps a seeded `fraction` of the labeled samples, per class when
/// `stratified`, and hides the rest.
fn hide_labels(y: &[f64], fraction: f64, stratified: bool, seed: u64) -> CliResult<Vec<f64>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(CliError::usage(format!("labeled_fraction must lie in (0, 1], got {fraction}")));
    }
    let mut rng = mvkit::random::seeded(seed);
    let (codes, classes) = encode_labels(y);
    let groups: Vec<Vec<usize>> = if stratified {
        (0..classes.len()).map(|c| (0..y.len()).filter(|&i| codes[i] == c).collect()).collect()
    } else {
        vec![(0..y.len()).filter(|&i| !is_unlabeled(y[i])).collect()]
    };
    let mut kept = vec![UNLABELED; y.len()];
    for mut g in groups {
        g.shuffle(&mut rng);
        let keep = ((g.len() as f64 * fraction).round() as usize).clamp(1.min(g.len()), g.len());
        for &i in &g[..keep] {
            kept[i] = y[i];
        }
    }
    Ok(kept)
}

fn semisup(cfg: &mut RunConfig) -> CliResult<Outcome> {
    let p = &mut cfg.params;
    let fraction: Option<f64> = p.opt("labeled_fraction")?;
    let classifier = cfg.algo == "cotrain-classifier";
    let (ct, cr) = if classifier {
        let d = CoTrainParams::default();
        let ct = CoTrainParams {
            p: p.get("p", d.p)?,
            n: p.get("n", d.n)?,
            pool_size: p.get("pool_size", d.pool_size)?,
            max_rounds: p.get("max_rounds", d.max_rounds)?,
            seed: cfg.seed,
        };
        let l2 = p.get("l2", LogisticRegression::<f64>::default().l2)?;
        (Some((ct, l2)), None)
    } else {
        let d = CoRegParams::default();
        let cr = CoRegParams {
            k1: p.get("k1", d.k1)?,
            p1: p.get("p1", d.p1)?,
            k2: p.get("k2", d.k2)?,
            p2: p.get("p2", d.p2)?,
            pool_size: p.get("pool_size", d.pool_size)?,
            max_rounds: p.get("max_rounds", d.max_rounds)?,
            seed: cfg.seed,
        };
        (None, Some(cr))
    };
    p.finish(&cfg.algo)?;
    let ds = load_input(cfg)?;
    let y = ds
        .labels()
        .ok_or_else(|| MvError::NoLabeled("semisup needs a labels file".into()))?
        .to_vec();
    let train_y = match fraction {
        Some(f) => hide_labels(&y, f, classifier, cfg.seed)?,
        None => y.clone(),
    };
    let train = ds.clone().with_labels(train_y.clone())?;
    let pred: Vec<f64> = if let Some((ct, l2)) = ct {
        let learner = LogisticRegression {
            l2,
            ..Default::default()
        };
        cotrain_classifier_fit(&train, (learner.clone(), learner), &ct)?.predict(&ds)?
    } else {
        cotrain_regressor_fit(&train, cr.as_ref().expect("regressor params"))?.predict(&ds)?
    };
    // score on the samples whose labels were hidden, else on the training labels
    let hidden: Vec<usize> = (0..y.len()).filter(|&i| !is_unlabeled(y[i]) && is_unlabeled(train_y[i])).collect();
    let (eval, prefix) = if hidden.is_empty() {
        ((0..y.len()).filter(|&i| !is_unlabeled(y[i])).collect::<Vec<_>>(), "train_")
    } else {
        (hidden, "")
    };
    let mut o = Outcome::new(results_dir(cfg)?);
    let n_labeled = train_y.iter().filter(|v| !is_unlabeled(**v)).count();
    if classifier {
        o.out.column("predictions.csv", &pred)?;
    } else {
        o.out.column("predictions.csv", &pred.iter().map(|&v| sci(v)).collect::<Vec<_>>())?;
    }
    let pe: Vec<f64> = eval.iter().map(|&i| pred[i]).collect();
    let te: Vec<f64> = eval.iter().map(|&i| y[i]).collect();
    let name = if classifier { "accuracy" } else { "rmse" };
    let score = if classifier { accuracy(&pe, &te)? } else { rmse(&pe, &te)? };
    o.metrics.insert(format!("{prefix}{name}"), score);
    o.metrics.insert("n_evaluated".into(), eval.len() as f64);
    o.summary.insert("n_labeled".into(), n_labeled as f64);
    o.summary.insert("n_samples".into(), y.len() as f64);
    let colors = if classifier { class_codes(Some(&pred)) } else { None };
    o.plot(ds.view(0).clone(), colors);
    Ok(o)
}

fn decompose(cfg: &mut RunConfig) -> CliResult<Outcome> {
    let p = &mut cfg.params;
    let ranks: Option<Vec<usize>> = p.list("ranks")?;
    enum Algo {
        Ajive(AjiveParams),
        Pca(usize),
        Ica(GroupIcaParams),
    }
    let algo = match cfg.algo.as_str() {
        "ajive" => {
            let r = ranks.clone().ok_or_else(|| CliError::usage("ajive needs ranks=r1,r2,..."))?;
            Algo::Ajive(
                AjiveParams::new(r)
                    .n_resamples(p.get("n_resamples", 500)?)
                    .quantile(p.get("quantile", 0.95)?)
                    .seed(cfg.seed),
            )
        }
        "group-pca" => Algo::Pca(p.get("n_components", 2)?),
        _ => {
            let mut g = GroupIcaParams::new(p.get("n_components", 2)?).seed(cfg.seed);
            g.individual_ranks = ranks.clone();
            g.tol = p.get("tol", g.tol)?;
            g.max_iter = p.get("max_iter", g.max_iter)?;
            Algo::Ica(g)
        }
    };
    p.finish(&cfg.algo)?;
    let ds = load_input(cfg)?;
    let labels = class_codes(ds.labels());
    match algo {
        Algo::Ajive(params) => {
            let r = ajive_fit(&ds, &params)?;
            let mut o = Outcome::new(results_dir(cfg)?);
            o.out.matrix("common_scores.csv", &r.common_scores)?;
            for v in 0..ds.n_views() {
                o.out.matrix(&format!("joint_{v}.csv"), &r.joint[v])?;
                o.out.matrix(&format!("individual_{v}.csv"), &r.individual[v])?;
                o.out.matrix(&format!("residual_{v}.csv"), &r.residual[v])?;
            }
            o.summary.insert("joint_rank".into(), r.joint_rank as f64);
            indexed(&mut o.summary, "individual_rank", r.individual_ranks.iter().map(|&k| k as f64));
            o.summary.insert("wedin_threshold".into(), r.wedin_threshold);
            o.summary.insert("random_threshold".into(), r.random_threshold);
            o.summary.insert(
                "wedin_binding".into(),
                if r.binding == BindingBound::Wedin { 1.0 } else { 0.0 },
            );
            indexed(&mut o.summary, "stacked_sq_singular_value", r.stacked_sq_singular_values.iter().copied());
            o.plot(r.common_scores, labels);
            Ok(o)
        }
        Algo::Pca(c) => {
            let r = group_pca_fit_transform(&ds, ranks.as_deref(), c)?;
            let mut o = Outcome::new(results_dir(cfg)?);
            o.out.matrix("scores.csv", &r.scores)?;
            for (v, l) in r.loadings.iter().enumerate() {
                o.out.matrix(&format!("loadings_{v}.csv"), l)?;
            }
            indexed(&mut o.summary, "singular_value", r.singular_values.iter().copied());
            indexed(&mut o.summary, "individual_rank", r.individual_ranks.iter().map(|&k| k as f64));
            o.plot(r.scores, labels);
            Ok(o)
        }
        Algo::Ica(params) => {
            let r = group_ica_fit(&ds, &params)?;
            if !r.converged {
                return Err(CliError::not_converged("group-ica FastICA", r.n_iter));
            }
            let mut o = Outcome::new(results_dir(cfg)?);
            o.out.matrix("sources.csv", &r.sources)?;
            o.out.matrix("unmixing.csv", &r.unmixing)?;
            for (v, m) in r.mixing.iter().enumerate() {
                o.out.matrix(&format!("mixing_{v}.csv"), m)?;
            }
            o.summary.insert("n_iter".into(), r.n_iter as f64);
            o.summary.insert("n_components".into(), r.sources.ncols() as f64);
            o.plot(r.sources, labels);
            Ok(o)
        }
    }
}
