//! Lowering of polynomial systems to quadratic binomials plus affine
//! equations, and normalization to a single constant-bearing equation.
//!
//! Variables are laid out positionally as `X`, then `Y`, then `Z`. The
//! position order is the variable order used throughout: a later position
//! dominates an earlier one, which gives `Z > Y > X` with index order inside
//! each tier. Every defining equation `u - v*w = 0` has `u` at a strictly
//! higher position than `v` and `w`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Circuit, Gate};
use crate::poly::{Monomial, SparsePoly};
use crate::ring::{RingElement, RingSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tier {
    /// Original variables.
    X,
    /// Product auxiliaries.
    Y,
    /// Monomial-name auxiliaries.
    Z,
}

impl Tier {
    pub fn tag(self) -> char {
        match self {
            Tier::X => 'x',
            Tier::Y => 'y',
            Tier::Z => 'z',
        }
    }

    pub fn from_tag(c: char) -> Option<Tier> {
        match c {
            'x' => Some(Tier::X),
            'y' => Some(Tier::Y),
            'z' => Some(Tier::Z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub tier: Tier,
    pub name: String,
}

impl Variable {
    pub fn new(tier: Tier, name: impl Into<String>) -> Self {
        Variable { tier, name: name.into() }
    }
}

/// Which pass produced a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    QuadratizedSparse,
    QuadratizedCircuit,
    Normalized,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::QuadratizedSparse => "quadratized-sparse",
            Provenance::QuadratizedCircuit => "quadratized-circuit",
            Provenance::Normalized => "normalized",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "quadratized-sparse" => Some(Provenance::QuadratizedSparse),
            "quadratized-circuit" => Some(Provenance::QuadratizedCircuit),
            "normalized" => Some(Provenance::Normalized),
            _ => None,
        }
    }
}

/// An ordered list of equations `poly = 0` over a tiered variable catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    ring: RingSpec,
    vars: Vec<Variable>,
    equations: Vec<SparsePoly>,
    provenance: Option<Provenance>,
}

impl EquationSystem {
    pub fn new(ring: RingSpec, vars: Vec<Variable>, equations: Vec<SparsePoly>) -> Result<Self> {
        for eq in &equations {
            ring.check_same(eq.ring())?;
            if eq.nvars() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), got: eq.nvars() });
            }
        }
        let mut out = EquationSystem { ring, vars, equations, provenance: None };
        out.sync_names();
        Ok(out)
    }

    /// A system over original (tier X) variables only.
    pub fn raw(ring: RingSpec, names: Vec<String>, equations: Vec<SparsePoly>) -> Result<Self> {
        let vars = names.into_iter().map(|n| Variable::new(Tier::X, n)).collect();
        Self::new(ring, vars, equations)
    }

    pub fn with_provenance(mut self, p: Option<Provenance>) -> Self {
        self.provenance = p;
        self
    }

    fn sync_names(&mut self) {
        let names: Vec<String> = self.vars.iter().map(|v| v.name.clone()).collect();
        for eq in &mut self.equations {
            eq.set_names_unchecked(names.clone());
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Number of tier-X variables.
    pub fn x_count(&self) -> usize {
        self.vars.iter().filter(|v| v.tier == Tier::X).count()
    }

    pub fn equations(&self) -> &[SparsePoly] {
        &self.equations
    }

    pub fn provenance(&self) -> Option<Provenance> {
        self.provenance
    }

    /// True when every equation vanishes at `point`.
    pub fn check_solution(&self, point: &[RingElement]) -> Result<bool> {
        if point.len() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), got: point.len() });
        }
        for eq in &self.equations {
            if !eq.eval(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices of equations with a nonzero constant term.
    pub fn constant_bearing(&self) -> Vec<usize> {
        (0..self.equations.len())
            .filter(|&i| !self.equations[i].constant_term().is_zero())
            .collect()
    }
}

/// One step of an [`ExtensionRecipe`]: `target := expr`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub target: usize,
    pub expr: SparsePoly,
}

/// Forced values of auxiliary variables, in evaluation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionRecipe {
    x_count: usize,
    nvars: usize,
    steps: Vec<Definition>,
}

impl ExtensionRecipe {
    /// Every step may only read tier-X variables or earlier targets, and
    /// every non-X variable must be a target exactly once.
    pub fn new(x_count: usize, nvars: usize, steps: Vec<Definition>) -> Result<Self> {
        let mut defined = vec![false; nvars];
        defined[..x_count.min(nvars)].iter_mut().for_each(|d| *d = true);
        for step in &steps {
            if step.expr.nvars() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, got: step.expr.nvars() });
            }
            if step.target >= nvars {
                return Err(Error::IndexOutOfRange { index: step.target, len: nvars });
            }
            if defined[step.target] {
                return Err(Error::Precondition(format!(
                    "recipe defines variable {} twice or defines an original variable",
                    step.target
                )));
            }
            for (m, _) in step.expr.terms() {
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e > 0 && !defined[i] {
                        return Err(Error::Precondition(format!(
                            "recipe step for {} reads undefined variable {i}",
                            step.target
                        )));
                    }
                }
            }
            defined[step.target] = true;
        }
        if let Some(missing) = defined.iter().position(|d| !d) {
            return Err(Error::Precondition(format!("recipe never defines variable {missing}")));
        }
        Ok(ExtensionRecipe { x_count, nvars, steps })
    }

    pub fn x_count(&self) -> usize {
        self.x_count
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn steps(&self) -> &[Definition] {
        &self.steps
    }

    /// The unique full assignment forced by the tier-X values.
    pub fn extend(&self, x_values: &[RingElement]) -> Result<Vec<RingElement>> {
        if x_values.len() != self.x_count {
            return Err(Error::ArityMismatch { expected: self.x_count, got: x_values.len() });
        }
        let ring = match (x_values.first(), self.steps.first()) {
            (Some(v), _) => v.ring(),
            (None, Some(s)) => s.expr.ring(),
            (None, None) => return Ok(Vec::new()),
        };
        let mut full = x_values.to_vec();
        full.resize(self.nvars, ring.zero());
        for step in &self.steps {
            full[step.target] = step.expr.eval(&full)?;
        }
        Ok(full)
    }
}

/// Result of a quadratization pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadratized {
    pub system: EquationSystem,
    pub recipe: ExtensionRecipe,
}

fn var_poly(ring: RingSpec, nvars: usize, i: usize) -> SparsePoly {
    SparsePoly::var(ring, nvars, i).expect("index in range")
}

fn mono_poly(ring: RingSpec, m: Monomial) -> SparsePoly {
    let nvars = m.nvars();
    let mut p = SparsePoly::zero(ring, nvars);
    p.add_term(m, ring.one()).expect("same ring");
    p
}

/// Lowers a sparse system over tier X.
///
/// For each nonconstant monomial the two lowest-ordered factors (with
/// multiplicity) are repeatedly replaced by a fresh product auxiliary until
/// one variable remains, which is then named by a monomial auxiliary. Each
/// input equation becomes an affine equation over the monomial auxiliaries.
/// Zero equations are dropped.
pub fn quadratize_sparse(system: &EquationSystem) -> Result<Quadratized> {
    if system.vars.iter().any(|v| v.tier != Tier::X) {
        return Err(Error::Precondition("input system must be over tier X only".into()));
    }
    let ring = system.ring;
    let n = system.nvars();

    let kept: Vec<(usize, &SparsePoly)> =
        system.equations.iter().enumerate().filter(|(_, p)| !p.is_zero()).collect();

    // Each degree-d monomial needs d-1 product auxiliaries and one name.
    let mut y_total = 0usize;
    let mut z_total = 0usize;
    for (_, f) in &kept {
        for (m, _) in f.terms() {
            let d = m.degree() as usize;
            if d >= 1 {
                y_total += d - 1;
                z_total += 1;
            }
        }
    }
    let total = n + y_total + z_total;

    let mut vars = system.vars.clone();
    let mut y_vars = Vec::with_capacity(y_total);
    let mut z_vars = Vec::with_capacity(z_total);
    let mut next_y = n;
    let mut next_z = n + y_total;
    let mut equations = Vec::new();
    let mut steps = Vec::new();

    for (i, f) in kept {
        let mut affine = SparsePoly::zero(ring, total);
        for (j, (m, c)) in f.terms().enumerate() {
            if m.is_constant() {
                affine = affine.add(&SparsePoly::constant(ring, total, c.clone())?)?;
                continue;
            }
            let mut e = vec![0u32; total];
            e[..n].copy_from_slice(m.exponents());
            let mut current = Monomial::new(e);
            let mut k = 1;
            while current.degree() >= 2 {
                let factors = current.factors_descending();
                let u = factors[factors.len() - 2];
                let v = factors[factors.len() - 1];
                let y = next_y;
                next_y += 1;
                y_vars.push(Variable::new(Tier::Y, format!("y{}_{}_{}", i + 1, j + 1, k)));
                let product = var_poly(ring, total, u).mul(&var_poly(ring, total, v))?;
                equations.push(var_poly(ring, total, y).sub(&product)?);
                steps.push(Definition { target: y, expr: product });

                let mut ex = current.exponents().to_vec();
                ex[u] -= 1;
                ex[v] -= 1;
                ex[y] += 1;
                current = Monomial::new(ex);
                k += 1;
            }
            let z = next_z;
            next_z += 1;
            z_vars.push(Variable::new(Tier::Z, format!("z{}_{}", i + 1, j + 1)));
            let named = mono_poly(ring, current);
            equations.push(var_poly(ring, total, z).sub(&named)?);
            steps.push(Definition { target: z, expr: named });
            affine = affine.add(&var_poly(ring, total, z).scale(c)?)?;
        }
        equations.push(affine);
    }

    vars.extend(y_vars);
    vars.extend(z_vars);
    let system = EquationSystem::new(ring, vars, equations)?
        .with_provenance(Some(Provenance::QuadratizedSparse));
    let recipe = ExtensionRecipe::new(n, total, steps)?;
    Ok(Quadratized { system, recipe })
}

/// Lowers a list of circuits sharing one tier-X catalog.
///
/// Node `j` of circuit `i` gets the auxiliary `y{i}_{j}` and one defining
/// equation; each circuit also contributes `y_root = 0` asserting that its
/// output vanishes.
pub fn quadratize_circuits(circuits: &[Circuit], x_names: &[String]) -> Result<Quadratized> {
    let first = circuits
        .first()
        .ok_or_else(|| Error::Precondition("no circuits given".into()))?;
    let ring = first.ring();
    let n = x_names.len();
    for c in circuits {
        ring.check_same(c.ring())?;
        if c.nvars() != n {
            return Err(Error::ArityMismatch { expected: n, got: c.nvars() });
        }
    }
    let total = n + circuits.iter().map(Circuit::size).sum::<usize>();

    let mut vars: Vec<Variable> = x_names.iter().map(|s| Variable::new(Tier::X, s.clone())).collect();
    let mut equations = Vec::new();
    let mut steps = Vec::new();
    let mut offset = n;
    for (i, c) in circuits.iter().enumerate() {
        let y = |j: usize| offset + j;
        for (j, gate) in c.nodes().iter().enumerate() {
            vars.push(Variable::new(Tier::Y, format!("y{}_{}", i + 1, j + 1)));
            let expr = match gate {
                Gate::Input(v) => var_poly(ring, total, *v),
                Gate::Const(k) => SparsePoly::constant(ring, total, k.clone())?,
                Gate::Mul(a, b) => var_poly(ring, total, y(*a)).mul(&var_poly(ring, total, y(*b)))?,
                Gate::Add(cs) => {
                    let mut acc = SparsePoly::zero(ring, total);
                    for &ch in cs {
                        acc = acc.add(&var_poly(ring, total, y(ch)))?;
                    }
                    acc
                }
            };
            equations.push(var_poly(ring, total, y(j)).sub(&expr)?);
            steps.push(Definition { target: y(j), expr });
        }
        equations.push(var_poly(ring, total, y(c.output())));
        offset += c.size();
    }

    let system = EquationSystem::new(ring, vars, equations)?
        .with_provenance(Some(Provenance::QuadratizedCircuit));
    let recipe = ExtensionRecipe::new(n, total, steps)?;
    Ok(Quadratized { system, recipe })
}

/// Syntactic class of one equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationShape {
    /// Degree at most one.
    Affine,
    /// `c1*u + c2*v*w` with no constant, `u` a lone variable ordered
    /// strictly above `v` and `w`.
    QuadraticBinomial { head: usize },
    Other,
}

pub fn equation_shape(eq: &SparsePoly) -> EquationShape {
    if eq.degree() <= 1 {
        return EquationShape::Affine;
    }
    if eq.sparsity() != 2 || !eq.constant_term().is_zero() || eq.degree() != 2 {
        return EquationShape::Other;
    }
    let mut linear = None;
    let mut quad = None;
    for (m, _) in eq.terms() {
        match m.degree() {
            1 => linear = Some(m.factors_descending()[0]),
            2 => quad = Some(m.factors_descending()),
            _ => return EquationShape::Other,
        }
    }
    match (linear, quad) {
        (Some(head), Some(q)) if q.iter().all(|&v| v < head) => EquationShape::QuadraticBinomial { head },
        _ => EquationShape::Other,
    }
}

/// True when every equation is affine or a dominated quadratic binomial.
pub fn has_quadratized_shape(system: &EquationSystem) -> bool {
    system.equations.iter().all(|eq| equation_shape(eq) != EquationShape::Other)
}

/// Outcome of [`normalize_constants`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalization {
    /// Exactly one equation, placed first, has a nonzero constant term.
    Normalized(EquationSystem),
    /// No equation has a constant term, so the all-zeros vector solves it.
    TriviallySolvable(EquationSystem),
}

impl Normalization {
    pub fn system(&self) -> &EquationSystem {
        match self {
            Normalization::Normalized(s) | Normalization::TriviallySolvable(s) => s,
        }
    }

    pub fn is_trivially_solvable(&self) -> bool {
        matches!(self, Normalization::TriviallySolvable(_))
    }
}

/// Eliminates all but one constant term.
///
/// The first constant-bearing equation `g1` (constant `c1`) becomes the
/// pivot and moves to the front; every other constant-bearing `g_i`
/// (constant `c_i`) is replaced by `c1*g_i - c_i*g1`. Over an integral
/// domain the solution set is unchanged.
pub fn normalize_constants(system: &EquationSystem) -> Result<Normalization> {
    let bearing = system.constant_bearing();
    let Some(&pivot) = bearing.first() else {
        return Ok(Normalization::TriviallySolvable(system.clone()));
    };
    if let Some(&bad) = bearing.iter().find(|&&i| system.equations[i].degree() > 1) {
        return Err(Error::Precondition(format!(
            "constant-bearing equation {bad} is not affine linear"
        )));
    }
    let g1 = &system.equations[pivot];
    let c1 = g1.constant_term();
    let mut equations = Vec::with_capacity(system.equations.len());
    equations.push(g1.clone());
    for (i, g) in system.equations.iter().enumerate() {
        if i == pivot {
            continue;
        }
        let ci = g.constant_term();
        if ci.is_zero() {
            equations.push(g.clone());
        } else {
            equations.push(g.scale(&c1)?.sub(&g1.scale(&ci)?)?);
        }
    }
    let out = EquationSystem::new(system.ring, system.vars.clone(), equations)?
        .with_provenance(Some(Provenance::Normalized));
    Ok(Normalization::Normalized(out))
}

/// True when exactly one equation carries a constant and it is listed first.
pub fn is_normalized(system: &EquationSystem) -> bool {
    system.constant_bearing() == [0]
}
