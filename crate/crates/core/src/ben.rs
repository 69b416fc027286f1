//! Belief Evolution Network: the layered DAG of non-empty subsets in which
//! each edge removes exactly one element.
//!
//! Layers are numbered `1..=n` from the top. Layer `l` holds the subsets of
//! cardinality `n − l + 1`, so layer 1 is `{Θ}` and layer `n` the singletons.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::frame::{FocalSet, Frame};
use crate::mass::MassFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct BeliefEvolutionNetwork {
    frame: Frame,
    layers: Vec<Vec<FocalSet>>,
}

impl BeliefEvolutionNetwork {
    pub fn build(frame: &Frame) -> Result<Self> {
        let n = frame.size();
        let mut layers = vec![Vec::new(); n];
        for set in frame.subsets().skip(1) {
            layers[n - set.len()].push(set);
        }
        Ok(BeliefEvolutionNetwork {
            frame: frame.clone(),
            layers,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Nodes of layer `l` (1-based) in ascending bitmask order.
    pub fn layer(&self, l: usize) -> &[FocalSet] {
        &self.layers[l - 1]
    }

    pub fn layer_cardinality(&self, l: usize) -> usize {
        self.frame.size() + 1 - l
    }

    pub fn layer_of(&self, set: FocalSet) -> Option<usize> {
        self.contains(set).then(|| self.frame.size() + 1 - set.len())
    }

    pub fn node_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, set: FocalSet) -> bool {
        !set.is_empty() && self.frame.contains_subset(set)
    }

    fn check_node(&self, set: FocalSet) -> Result<()> {
        if set.is_empty() {
            return Err(Error::InvalidParameter("the empty set is not a network node".into()));
        }
        self.frame.check_subset(set).map(|_| ())
    }

    /// Subsets reached by removing one element. Singletons have none.
    pub fn children(&self, set: FocalSet) -> Result<Vec<FocalSet>> {
        self.check_node(set)?;
        if set.is_singleton() {
            return Ok(Vec::new());
        }
        let mut out: Vec<_> = set.children().collect();
        out.sort();
        Ok(out)
    }

    /// Subsets reached by adding one element of the frame. `Θ` has none.
    pub fn parents(&self, set: FocalSet) -> Result<Vec<FocalSet>> {
        self.check_node(set)?;
        Ok(set
            .complement(self.frame.size())
            .elements()
            .map(|i| set.with(i))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect())
    }

    /// `(parent, child)` pairs, parents in layer order then ascending bitmask.
    pub fn edges(&self) -> impl Iterator<Item = (FocalSet, FocalSet)> + '_ {
        self.layers.iter().flatten().flat_map(|&parent| {
            let mut children: Vec<_> = if parent.is_singleton() {
                Vec::new()
            } else {
                parent.children().collect()
            };
            children.sort();
            children.into_iter().map(move |c| (parent, c))
        })
    }
}

/// Renders the network as a Graphviz digraph with each node labelled by its
/// subset and mass. Output is deterministic: layers top-down, nodes in
/// ascending bitmask order.
pub fn export_dot(
    ben: &BeliefEvolutionNetwork,
    m: &MassFunction,
    annotate: Option<&dyn Fn(FocalSet) -> String>,
) -> Result<String> {
    ben.frame().check_same(m.frame())?;
    let frame = ben.frame();
    let mut out = String::new();
    writeln!(out, "digraph BEN {{").unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"Helvetica\"];").unwrap();
    for l in 1..=ben.layer_count() {
        let ids: Vec<String> = ben.layer(l).iter().map(|s| node_id(*s)).collect();
        writeln!(out, "  {{ rank=same; {}; }}", ids.join("; ")).unwrap();
    }
    for l in 1..=ben.layer_count() {
        for &set in ben.layer(l) {
            let mut label = format!("{}\\n{:.4}", frame.compact_subset(set), m.mass(set));
            if let Some(annotate) = annotate {
                let extra = annotate(set);
                if !extra.is_empty() {
                    label.push_str("\\n");
                    label.push_str(&extra.replace('"', "\\\""));
                }
            }
            writeln!(out, "  {} [label=\"{}\"];", node_id(set), label).unwrap();
        }
    }
    for (parent, child) in ben.edges() {
        writeln!(out, "  {} -> {};", node_id(parent), node_id(child)).unwrap();
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}

fn node_id(set: FocalSet) -> String {
    format!("n{}", set.bits())
}
