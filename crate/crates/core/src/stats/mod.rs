//! Statistical utilities: weighted descriptive statistics, standardization,
//! the Williams test for dependent correlations, the two-sample
//! Kolmogorov–Smirnov test and annotator clustering built on it.

mod descriptive;
mod ks;
mod special;
mod williams;

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub use descriptive::{standardize, weighted_mean_std};
pub use ks::{kolmogorov_q, ks_two_sample, KsResult};
pub use special::{ln_gamma, reg_inc_beta, student_t_sf};
pub use williams::{williams_test, WilliamsResult};

pub const DEFAULT_KS_ALPHA: f64 = 0.05;

/// Groups annotators whose PETpW samples are not distinguishable by the KS
/// test at level `alpha`.
///
/// Two annotators are linked when the KS p-value is at least `alpha`; the
/// clusters are the connected components of that graph. Each cluster is
/// sorted by id and clusters are ordered by their smallest member.
pub fn cluster_annotators(
    petpw_by_annotator: &BTreeMap<String, Vec<f64>>,
    alpha: f64,
) -> Result<Vec<Vec<String>>> {
    if petpw_by_annotator.len() < 2 {
        return Err(Error::InvalidArgument(
            "clustering needs at least two annotators".into(),
        ));
    }
    let ids: Vec<&String> = petpw_by_annotator.keys().collect();
    let samples: Vec<&Vec<f64>> = petpw_by_annotator.values().collect();
    let n = ids.len();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if ks_two_sample(samples[i], samples[j])?.p_value >= alpha {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }

    let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(ids[i].clone());
    }
    let mut clusters: Vec<Vec<String>> = groups.into_values().collect();
    for c in &mut clusters {
        c.sort();
    }
    clusters.sort();
    Ok(clusters)
}
