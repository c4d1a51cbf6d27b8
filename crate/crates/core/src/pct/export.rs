use std::fmt::Write;

use super::{Mode, Node, NodeStats, Prototype, Test, Tree};
use crate::Result;

fn fmt_num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn condition(node: &Node) -> String {
    let s = node.split.as_ref().expect("internal node");
    match &s.test {
        Test::LessEq { threshold } => format!("{} <= {}", s.column_name, fmt_num(*threshold)),
        Test::Equals { category } => format!("{} = {category}", s.column_name),
    }
}

impl Tree {
    fn leaf_summary(&self, node: &Node) -> String {
        match (&node.prototype, &node.stats) {
            (Prototype::Class { label }, NodeStats::Counts { counts }) => {
                let dist: Vec<String> = self
                    .classes
                    .iter()
                    .zip(counts)
                    .filter(|(_, c)| **c > 0)
                    .map(|(k, c)| format!("{k}:{c}"))
                    .collect();
                format!("{} = {label} ({})", self.targets[0], dist.join(" "))
            }
            (Prototype::Mean { values }, NodeStats::Variance { variance }) => {
                let parts: Vec<String> = self
                    .targets
                    .iter()
                    .zip(values.iter().zip(variance))
                    .map(|(t, (m, v))| format!("{t} = {} (var {})", fmt_num(*m), fmt_num(*v)))
                    .collect();
                parts.join(", ")
            }
            _ => String::new(),
        }
    }

    /// Indented rule list with per-leaf statistics.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.text_node(0, 0, "", &mut out);
        out
    }

    fn text_node(&self, id: usize, depth: usize, prefix: &str, out: &mut String) {
        let node = &self.nodes[id];
        let pad = "  ".repeat(depth);
        match node.children {
            None => {
                let _ = writeln!(
                    out,
                    "{pad}{prefix}leaf #{id} [n={}]: {}",
                    node.n_rows,
                    self.leaf_summary(node)
                );
            }
            Some((l, r)) => {
                let _ = writeln!(out, "{pad}{prefix}if {} [n={}]", condition(node), node.n_rows);
                self.text_node(l, depth + 1, "then ", out);
                self.text_node(r, depth + 1, "else ", out);
            }
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph pct {\n  node [shape=box, fontname=\"Helvetica\"];\n");
        for node in &self.nodes {
            let label = if node.is_leaf() && self.mode == Mode::Clustering {
                // prototypes over every descriptor are too wide for a box
                format!("#{} n={}", node.id, node.n_rows)
            } else if node.is_leaf() {
                format!("#{} n={}\\n{}", node.id, node.n_rows, self.leaf_summary(node))
            } else {
                format!("{}\\nn={}", condition(node), node.n_rows)
            };
            let _ = writeln!(out, "  n{} [label=\"{}\"];", node.id, label.replace('"', "'"));
        }
        for node in &self.nodes {
            if let Some((l, r)) = node.children {
                let _ = writeln!(out, "  n{} -> n{l} [label=\"yes\"];", node.id);
                let _ = writeln!(out, "  n{} -> n{r} [label=\"no\"];", node.id);
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Tree> {
        let tree: Tree = serde_json::from_str(text)?;
        tree.validate()?;
        Ok(tree)
    }
}
