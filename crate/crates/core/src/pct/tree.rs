use serde::{Deserialize, Serialize};

use super::ftest::ftest_accept;
use super::split::{
    class_counts, column_variances, features, goes_left, search, weights_from_root, Feature, Objective,
};
use super::table::{DataTable, Targets};
use super::{Mode, Split, Test};
use crate::data::ColumnKind;
use crate::{Error, Result};

pub const TREE_FORMAT: &str = "mlc-meta-pct/v1";

/// Rows at or above which sibling subtrees are grown in parallel.
const PARALLEL_ROWS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnParams {
    pub f_level: f64,
    pub min_leaf: usize,
}

impl Default for LearnParams {
    fn default() -> Self {
        LearnParams {
            f_level: 0.05,
            min_leaf: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub name: String,
    /// Categories of a nominal column; `None` for numeric.
    pub categories: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Prototype {
    Mean { values: Vec<f64> },
    Class { label: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeStats {
    Variance { variance: Vec<f64> },
    Counts { counts: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub n_rows: usize,
    pub prototype: Prototype,
    pub stats: NodeStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
    /// Child ids (left = test true) of an internal node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub children: Option<(usize, usize)>,
    /// Row ids of the training rows in a leaf.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<String>,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub format: String,
    pub mode: Mode,
    pub params: LearnParams,
    pub columns: Vec<ColumnSchema>,
    /// Target names; the class column name in classification mode.
    pub targets: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<String>,
    /// Per-target variance at the root, the heuristic's normalization.
    pub root_variance: Vec<f64>,
    /// Clustering mode: (mean, std) used to standardize each target.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub standardization: Vec<(f64, f64)>,
    /// Nodes in pre-order; the root has id 0.
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub leaf: usize,
    pub prototype: Prototype,
}

struct Grower<'a> {
    features: Vec<Feature<'a>>,
    names: Vec<&'a str>,
    objective: Objective<'a>,
    values: Option<&'a [Vec<f64>]>,
    classes: &'a [String],
    ids: &'a [String],
    params: LearnParams,
}

/// Subtree before flattening into the arena.
struct Built {
    n_rows: usize,
    prototype: Prototype,
    stats: NodeStats,
    branch: Option<(Split, Box<Built>, Box<Built>)>,
    members: Vec<String>,
}

impl Grower<'_> {
    fn summary(&self, rows: &[usize]) -> (Prototype, NodeStats) {
        match (&self.objective, self.values) {
            (Objective::Entropy { codes, n_classes }, _) => {
                let counts = class_counts(codes, *n_classes, rows);
                let top = counts.iter().max().copied().unwrap_or(0);
                let modal = counts.iter().position(|&c| c == top).unwrap_or(0);
                (
                    Prototype::Class {
                        label: self.classes[modal].clone(),
                    },
                    NodeStats::Counts { counts },
                )
            }
            (Objective::Variance { .. }, Some(values)) => {
                let sub: Vec<Vec<f64>> = rows.iter().map(|&i| values[i].clone()).collect();
                let t = values.first().map_or(0, Vec::len);
                let n = rows.len() as f64;
                let mean = (0..t).map(|j| sub.iter().map(|r| r[j]).sum::<f64>() / n).collect();
                (
                    Prototype::Mean { values: mean },
                    NodeStats::Variance {
                        variance: column_variances(&sub),
                    },
                )
            }
            (Objective::Variance { .. }, None) => unreachable!("variance objective carries values"),
        }
    }

    fn grow(&self, rows: Vec<usize>) -> Built {
        let (prototype, stats) = self.summary(&rows);
        let leaf = |rows: &[usize], prototype, stats| Built {
            n_rows: rows.len(),
            prototype,
            stats,
            branch: None,
            members: rows.iter().map(|&i| self.ids[i].clone()).collect(),
        };
        let Some(split) = search(
            &self.features,
            &self.names,
            &self.objective,
            &rows,
            self.params.min_leaf,
        ) else {
            return leaf(&rows, prototype, stats);
        };
        let (left, right): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&i| goes_left(&self.features[split.column], &split.test, i));
        let ss_parent = self.objective.sum_squares(&rows);
        let ss_children = self.objective.sum_squares(&left) + self.objective.sum_squares(&right);
        if !ftest_accept(ss_parent, ss_children, rows.len(), self.params.f_level) {
            return leaf(&rows, prototype, stats);
        }
        let n_rows = rows.len();
        let (l, r) = if n_rows >= PARALLEL_ROWS {
            rayon::join(|| self.grow(left), || self.grow(right))
        } else {
            (self.grow(left), self.grow(right))
        };
        Built {
            n_rows,
            prototype,
            stats,
            branch: Some((split, Box::new(l), Box::new(r))),
            members: vec![],
        }
    }
}

fn flatten(b: Built, nodes: &mut Vec<Node>) -> usize {
    let id = nodes.len();
    nodes.push(Node {
        id,
        n_rows: b.n_rows,
        prototype: b.prototype,
        stats: b.stats,
        split: None,
        children: None,
        members: b.members,
    });
    if let Some((split, l, r)) = b.branch {
        let li = flatten(*l, nodes);
        let ri = flatten(*r, nodes);
        nodes[id].split = Some(split);
        nodes[id].children = Some((li, ri));
    }
    id
}

/// Grows a tree top-down. A node becomes a leaf when it has fewer than
/// `2 * min_leaf` rows, has no split with positive score, or its best
/// split fails the F-test at `f_level`.
pub fn learn(table: &DataTable, mode: Mode, params: LearnParams) -> Result<Tree> {
    if !(params.f_level > 0.0 && params.f_level < 1.0) {
        return Err(Error::Contract(format!(
            "F-test level {} outside (0,1)",
            params.f_level
        )));
    }
    if params.min_leaf == 0 {
        return Err(Error::Contract("min_leaf must be at least 1".into()));
    }
    let columns = table
        .descriptive()
        .iter()
        .map(|c| ColumnSchema {
            name: c.name.clone(),
            categories: match &c.kind {
                ColumnKind::Numeric => None,
                ColumnKind::Nominal { categories } => Some(categories.clone()),
            },
        })
        .collect();
    let standardized;
    let (objective, values, target_names, classes, root_variance, standardization) = match (mode, table.targets()) {
        (Mode::Clustering, _) => {
            let (names, vals, params) = table.standardized_descriptive();
            if names.is_empty() {
                return Err(Error::Contract(
                    "clustering needs a numeric descriptive column with variance".into(),
                ));
            }
            standardized = vals;
            let rv = column_variances(&standardized);
            let w = weights_from_root(&rv);
            (
                Objective::Variance {
                    values: &standardized,
                    weights: w,
                },
                Some(standardized.as_slice()),
                names,
                &[][..],
                rv,
                params,
            )
        }
        (Mode::Regression, Targets::Numeric { names, values }) => {
            let rv = column_variances(values);
            let w = weights_from_root(&rv);
            (
                Objective::Variance { values, weights: w },
                Some(values.as_slice()),
                names.clone(),
                &[][..],
                rv,
                vec![],
            )
        }
        (Mode::Classification, Targets::Class { name, classes, codes }) => (
            Objective::Entropy {
                codes,
                n_classes: classes.len(),
            },
            None,
            vec![name.clone()],
            classes.as_slice(),
            vec![],
            vec![],
        ),
        (m, _) => return Err(Error::Contract(format!("table targets do not fit {m} mode"))),
    };
    let grower = Grower {
        features: features(table),
        names: table.descriptive().iter().map(|c| c.name.as_str()).collect(),
        objective,
        values,
        classes,
        ids: table.ids(),
        params,
    };
    let built = grower.grow((0..table.n_rows()).collect());
    let mut nodes = vec![];
    flatten(built, &mut nodes);
    Ok(Tree {
        format: TREE_FORMAT.to_string(),
        mode,
        params,
        columns,
        targets: target_names,
        classes: classes.to_vec(),
        root_variance,
        standardization,
        nodes,
    })
}

impl Tree {
    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, id: usize) -> usize {
            match t.nodes[id].children {
                None => 0,
                Some((l, r)) => 1 + go(t, l).max(go(t, r)),
            }
        }
        go(self, 0)
    }

    /// Whether this tree equals `other` with some subtrees cut back to
    /// leaves: same splits wherever both are internal, same row counts at
    /// every shared node.
    pub fn is_prune_of(&self, other: &Tree) -> bool {
        fn go(a: &Tree, ai: usize, b: &Tree, bi: usize) -> bool {
            let (x, y) = (&a.nodes[ai], &b.nodes[bi]);
            if x.n_rows != y.n_rows {
                return false;
            }
            match (x.children, y.children) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some((xl, xr)), Some((yl, yr))) => {
                    x.split.as_ref().map(|s| (&s.column, &s.test)) == y.split.as_ref().map(|s| (&s.column, &s.test))
                        && go(a, xl, b, yl)
                        && go(a, xr, b, yr)
                }
            }
        }
        go(self, 0, other, 0)
    }

    /// Routes every row of `table` to a leaf. Columns are matched by name;
    /// nominal tests compare category labels.
    pub fn predict_all(&self, table: &DataTable) -> Result<Vec<Prediction>> {
        let mut lookup: Vec<Option<usize>> = vec![None; self.columns.len()];
        for node in &self.nodes {
            let Some(split) = &node.split else { continue };
            if lookup[split.column].is_some() {
                continue;
            }
            let col = table
                .column(&split.column_name)
                .ok_or_else(|| Error::Contract(format!("tree needs column '{}'", split.column_name)))?;
            let numeric_test = matches!(split.test, Test::LessEq { .. });
            if numeric_test != col.kind.is_numeric() {
                return Err(Error::Contract(format!(
                    "column '{}' has the wrong type for the tree",
                    col.name
                )));
            }
            lookup[split.column] = table.descriptive().iter().position(|c| c.name == split.column_name);
        }
        (0..table.n_rows())
            .map(|row| {
                let mut id = 0;
                while let (Some(split), Some((l, r))) = (&self.nodes[id].split, self.nodes[id].children) {
                    let col = &table.descriptive()[lookup[split.column].expect("resolved above")];
                    let left = match &split.test {
                        Test::LessEq { threshold } => col.values[row].is_some_and(|v| v <= *threshold),
                        Test::Equals { category } => col.display_value(row).as_deref() == Some(category.as_str()),
                    };
                    id = if left { l } else { r };
                }
                Ok(Prediction {
                    leaf: id,
                    prototype: self.nodes[id].prototype.clone(),
                })
            })
            .collect()
    }

    pub fn predict(&self, table: &DataTable, row: usize) -> Result<Prediction> {
        if row >= table.n_rows() {
            return Err(Error::Contract(format!("row {row} outside the table")));
        }
        // tables are small; routing the single row through predict_all
        // keeps the column checks in one place
        Ok(self.predict_all(table)?.swap_remove(row))
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.format != TREE_FORMAT {
            return Err(Error::Schema(format!("unsupported tree format '{}'", self.format)));
        }
        if self.nodes.is_empty() {
            return Err(Error::Schema("tree has no nodes".into()));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i {
                return Err(Error::Schema(format!("node {i} carries id {}", n.id)));
            }
            match (&n.split, n.children) {
                (None, None) => {}
                (Some(s), Some((l, r))) => {
                    if l <= i || r <= i || l >= self.nodes.len() || r >= self.nodes.len() {
                        return Err(Error::Schema(format!("node {i} has invalid children")));
                    }
                    if s.column >= self.columns.len() || self.columns[s.column].name != s.column_name {
                        return Err(Error::Schema(format!("node {i} splits on an unknown column")));
                    }
                }
                _ => {
                    return Err(Error::Schema(format!(
                        "node {i} has a split without children or vice versa"
                    )))
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Column;

    fn step_table() -> DataTable {
        DataTable::new(
            (0..4).map(|i| format!("r{i}")).collect(),
            vec![Column::numeric("x", vec![Some(1.0), Some(2.0), Some(10.0), Some(11.0)])],
            Targets::Numeric {
                names: vec!["y".into()],
                values: vec![vec![0.0], vec![0.0], vec![1.0], vec![1.0]],
            },
        )
        .unwrap()
    }

    fn probe(xs: &[f64]) -> DataTable {
        DataTable::new(
            (0..xs.len()).map(|i| i.to_string()).collect(),
            vec![Column::numeric("x", xs.iter().map(|&x| Some(x)).collect())],
            Targets::None,
        )
        .unwrap()
    }

    #[test]
    fn step_table_gives_depth_one() {
        let t = learn(
            &step_table(),
            Mode::Regression,
            LearnParams {
                f_level: 0.125,
                min_leaf: 1,
            },
        )
        .unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.n_nodes(), 3);
        let p = t.predict_all(&probe(&[1.5, 10.5])).unwrap();
        assert_eq!(p[0].prototype, Prototype::Mean { values: vec![0.0] });
        assert_eq!(p[1].prototype, Prototype::Mean { values: vec![1.0] });
        let members: Vec<&Vec<String>> = t.leaves().map(|n| &n.members).collect();
        assert_eq!(
            members,
            [
                &vec!["r0".to_string(), "r1".into()],
                &vec!["r2".to_string(), "r3".into()]
            ]
        );
    }

    #[test]
    fn constant_target_single_leaf() {
        let table = DataTable::new(
            (0..5).map(|i| i.to_string()).collect(),
            vec![Column::numeric("x", (0..5).map(|i| Some(i as f64)).collect())],
            Targets::Numeric {
                names: vec!["y".into()],
                values: vec![vec![3.5]; 5],
            },
        )
        .unwrap();
        let t = learn(&table, Mode::Regression, LearnParams::default()).unwrap();
        assert_eq!(t.n_nodes(), 1);
        let p = t.predict_all(&probe(&[100.0])).unwrap();
        assert_eq!(p[0].prototype, Prototype::Mean { values: vec![3.5] });
    }

    #[test]
    fn missing_referenced_column() {
        let t = learn(
            &step_table(),
            Mode::Regression,
            LearnParams {
                f_level: 0.125,
                min_leaf: 1,
            },
        )
        .unwrap();
        let other = DataTable::new(
            vec!["a".into()],
            vec![Column::numeric("z", vec![Some(1.0)])],
            Targets::None,
        )
        .unwrap();
        assert!(matches!(t.predict_all(&other), Err(Error::Contract(_))));
    }

    #[test]
    fn bad_params() {
        assert!(learn(
            &step_table(),
            Mode::Regression,
            LearnParams {
                f_level: 0.0,
                min_leaf: 1
            }
        )
        .is_err());
        assert!(learn(
            &step_table(),
            Mode::Regression,
            LearnParams {
                f_level: 0.1,
                min_leaf: 0
            }
        )
        .is_err());
        assert!(learn(&step_table(), Mode::Classification, LearnParams::default()).is_err());
    }

    #[test]
    fn clustering_leaf_ids() {
        let table = probe(&[0.0, 0.1, 0.2, 0.3, 5.0, 5.1, 5.2, 5.3]);
        let t = learn(
            &table,
            Mode::Clustering,
            LearnParams {
                f_level: 0.05,
                min_leaf: 2,
            },
        )
        .unwrap();
        let p = t.predict_all(&table).unwrap();
        assert_ne!(p[0].leaf, p[7].leaf);
        assert_eq!(p[0].leaf, p[3].leaf);
    }
}
