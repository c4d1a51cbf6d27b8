use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;

use super::meta::{ranked_methods, MetaMatrix};
use crate::data::{Family, Registry, ResultsTable};
use crate::pct::{learn, LearnParams, Mode, Tree};
use crate::Result;

/// How family counts are defined; recorded in the output.
pub const COUNT_RULE: &str = "family counted once per dataset when any of its methods ranks in the top k";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeafAnnotation {
    pub leaf: usize,
    pub datasets: Vec<String>,
    /// measure -> family -> number of member datasets with the family in
    /// the top k.
    pub family_counts: BTreeMap<String, BTreeMap<Family, usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Landscape {
    pub k_top: usize,
    pub count_rule: &'static str,
    pub measures: Vec<String>,
    pub tree: Tree,
    pub leaves: Vec<LeafAnnotation>,
    /// (dataset, measure) pairs without results, left out of the counts.
    pub excluded: Vec<String>,
}

/// Families with at least one method in the top `k` for a dataset.
pub fn top_families(
    results: &ResultsTable,
    registry: &Registry,
    dataset: &str,
    measure: &str,
    k: usize,
) -> Result<BTreeSet<Family>> {
    let o = registry.orientation(measure)?;
    Ok(ranked_methods(results, dataset, measure, o)
        .into_iter()
        .take(k)
        .map(|(m, _)| registry.family(m))
        .collect())
}

/// Clustering tree over the meta matrix with per-leaf family counts.
pub fn landscape(
    meta: &MetaMatrix,
    results: &ResultsTable,
    registry: &Registry,
    measures: &[String],
    k_top: usize,
    params: LearnParams,
) -> Result<Landscape> {
    for m in measures {
        registry.orientation(m)?;
    }
    let tree = learn(&meta.to_table()?, Mode::Clustering, params)?;
    let mut excluded = vec![];
    let mut leaves = vec![];
    for leaf in tree.leaves() {
        let mut family_counts = BTreeMap::new();
        for m in measures {
            let mut counts: BTreeMap<Family, usize> = BTreeMap::new();
            for d in &leaf.members {
                let fams = top_families(results, registry, d, m, k_top)?;
                if fams.is_empty() {
                    excluded.push(format!("{d}/{m}"));
                }
                for f in fams {
                    *counts.entry(f).or_default() += 1;
                }
            }
            family_counts.insert(m.clone(), counts);
        }
        leaves.push(LeafAnnotation {
            leaf: leaf.id,
            datasets: leaf.members.clone(),
            family_counts,
        });
    }
    excluded.sort();
    Ok(Landscape {
        k_top,
        count_rule: COUNT_RULE,
        measures: measures.to_vec(),
        tree,
        leaves,
        excluded,
    })
}

impl Landscape {
    /// DOT rendering with a family-count table under each leaf.
    pub fn to_dot(&self) -> String {
        let base = self.tree.to_dot();
        let mut extra = String::new();
        for a in &self.leaves {
            let mut label = format!("top-{} families, {} datasets", self.k_top, a.datasets.len());
            for (m, counts) in &a.family_counts {
                let cells: Vec<String> = counts.iter().map(|(f, c)| format!("{f}:{c}")).collect();
                let _ = write!(label, "\\n{m}: {}", cells.join(" "));
            }
            let _ = writeln!(
                extra,
                "  a{0} [shape=note, label=\"{label}\"];\n  n{0} -> a{0} [style=dotted, arrowhead=none];",
                a.leaf
            );
        }
        let cut = base.rfind('}').expect("closing brace");
        format!("{}{}{}", &base[..cut], extra, &base[cut..])
    }
}
