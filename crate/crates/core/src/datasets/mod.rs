//! Synthetic multiview data and the on-disk directory format.
//!
//! A dataset directory holds `view_0.csv`, `view_1.csv`, ... (one row per
//! sample), an optional `labels.csv` (one value per line, `nan` for
//! unlabeled) and a `manifest.json` listing the files in view order.

mod io;
mod synthetic;

pub use io::{load_multiview_dir, save_multiview_dir, DatasetManifest, MANIFEST_FILE};
pub use synthetic::{make_latent_views, SyntheticData, SyntheticSpec};
