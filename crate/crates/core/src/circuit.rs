//! Arithmetic circuits: DAGs of inputs, constants, fan-in-two products and
//! unbounded sums, stored in topological order.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::poly::{default_names, SparsePoly};
use crate::ring::{RingElement, RingSpec};
use crate::{Error, Result};

/// A node; child references are positions of earlier nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Input(usize),
    Const(RingElement),
    Mul(usize, usize),
    Add(Vec<usize>),
}

impl Gate {
    pub fn is_leaf(&self) -> bool {
        matches!(self, Gate::Input(_) | Gate::Const(_))
    }

    pub fn children(&self) -> Vec<usize> {
        match self {
            Gate::Input(_) | Gate::Const(_) => Vec::new(),
            Gate::Mul(a, b) => alloc::vec![*a, *b],
            Gate::Add(c) => c.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    ring: RingSpec,
    nvars: usize,
    nodes: Vec<Gate>,
    output: usize,
    names: Vec<String>,
}

impl Circuit {
    /// Validates topological order, fan-in and ring membership.
    pub fn new(ring: RingSpec, nvars: usize, nodes: Vec<Gate>, output: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidCircuit("circuit has no nodes".into()));
        }
        for (pos, gate) in nodes.iter().enumerate() {
            match gate {
                Gate::Input(v) if *v >= nvars => {
                    return Err(Error::InvalidCircuit(format!(
                        "node {pos} reads variable {v} but only {nvars} exist"
                    )));
                }
                Gate::Const(c) => ring.check_same(c.ring())?,
                Gate::Add(c) if c.is_empty() => {
                    return Err(Error::InvalidCircuit(format!("add node {pos} has no children")));
                }
                _ => {}
            }
            if let Some(bad) = gate.children().into_iter().find(|&r| r >= pos) {
                return Err(Error::InvalidCircuit(format!(
                    "node {pos} references node {bad}, which does not precede it"
                )));
            }
        }
        if output >= nodes.len() {
            return Err(Error::InvalidCircuit(format!("output {output} is not a node")));
        }
        Ok(Circuit { ring, nvars, nodes, output, names: default_names(nvars) })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: names.len() });
        }
        self.names = names;
        Ok(self)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nodes(&self) -> &[Gate] {
        &self.nodes
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of nodes, unreachable ones included.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    fn check_point(&self, point: &[RingElement]) -> Result<()> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        point.iter().try_for_each(|v| self.ring.check_same(v.ring()))
    }

    /// Values of every node at `point`, in node order.
    pub fn eval_nodes(&self, point: &[RingElement]) -> Result<Vec<RingElement>> {
        self.check_point(point)?;
        let mut vals: Vec<RingElement> = Vec::with_capacity(self.nodes.len());
        for gate in &self.nodes {
            let v = match gate {
                Gate::Input(i) => point[*i].clone(),
                Gate::Const(c) => c.clone(),
                Gate::Mul(a, b) => &vals[*a] * &vals[*b],
                Gate::Add(cs) => cs.iter().fold(self.ring.zero(), |acc, &c| &acc + &vals[c]),
            };
            vals.push(v);
        }
        Ok(vals)
    }

    pub fn eval(&self, point: &[RingElement]) -> Result<RingElement> {
        let mut vals = self.eval_nodes(point)?;
        Ok(vals.swap_remove(self.output))
    }

    /// Expands the output node into sparse form, failing once any
    /// intermediate polynomial would exceed `term_cap` terms.
    pub fn expand(&self, term_cap: usize) -> Result<SparsePoly> {
        let mut polys: Vec<SparsePoly> = Vec::with_capacity(self.nodes.len());
        for gate in &self.nodes {
            let p = match gate {
                Gate::Input(i) => SparsePoly::var(self.ring, self.nvars, *i)?,
                Gate::Const(c) => SparsePoly::constant(self.ring, self.nvars, c.clone())?,
                Gate::Mul(a, b) => {
                    let bound = polys[*a].sparsity() as u128 * polys[*b].sparsity() as u128;
                    if bound > term_cap as u128 {
                        return Err(Error::TermCapExceeded { needed: bound, cap: term_cap });
                    }
                    polys[*a].mul(&polys[*b])?
                }
                Gate::Add(cs) => {
                    let mut acc = SparsePoly::zero(self.ring, self.nvars);
                    for &c in cs {
                        acc = acc.add(&polys[c])?;
                    }
                    acc
                }
            };
            if p.sparsity() > term_cap {
                return Err(Error::TermCapExceeded { needed: p.sparsity() as u128, cap: term_cap });
            }
            polys.push(p);
        }
        let mut out = polys.swap_remove(self.output);
        out.set_names_unchecked(self.names.clone());
        Ok(out)
    }
}
