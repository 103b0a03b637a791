//! Canalyzing-variable detection and the layered normal form.
//!
//! Every nested canalyzing function factors uniquely as
//!
//! ```text
//! f = M1(M2(...(M_{r-1}(M_r + 1) + 1)...) + 1) + b
//! ```
//!
//! where the extended monomials M_1..M_r partition the variables and only
//! the last may be a single factor when n = 1. `ncf_decompose` produces
//! that form by repeatedly peeling the maximal canalyzing layer, or
//! returns a machine-checkable witness that no such form exists.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::StructureError;
use crate::formulas::Composition;
use crate::table::{TruthTable, MAX_VARS};

/// A witness that f is `<var:input:output>` canalyzing: fixing x_var to
/// `input` forces the function value to `output`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CanalyzingTriple {
    pub var: u32,
    pub input: bool,
    pub output: bool,
}

/// One factor (x_var ⊕ sign). The sign is exactly the canalyzing input:
/// setting x_var = sign zeroes the factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub var: u32,
    pub sign: bool,
}

/// A product of factors over distinct variables, stored in ascending
/// variable order. It evaluates to 1 at exactly one assignment of its own
/// variables (every factor at the complement of its sign).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedMonomial {
    factors: Vec<Factor>,
}

impl ExtendedMonomial {
    pub fn new(mut factors: Vec<Factor>) -> Self {
        assert!(!factors.is_empty(), "an extended monomial needs at least one factor");
        factors.sort_by_key(|f| f.var);
        factors.windows(2).for_each(|w| {
            assert_ne!(w[0].var, w[1].var, "duplicate variable x{}", w[0].var);
        });
        ExtendedMonomial { factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of factors (the layer size k).
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Variable indices, ascending.
    pub fn vars(&self) -> Vec<u32> {
        self.factors.iter().map(|f| f.var).collect()
    }

    /// Value at a packed input index.
    pub fn eval(&self, t: u64) -> bool {
        let (mask, expected) = self.masks();
        t & mask == expected
    }

    /// (variable mask, expected bits): the monomial is 1 exactly where the
    /// masked index equals `expected`.
    fn masks(&self) -> (u64, u64) {
        let mut mask = 0u64;
        let mut expected = 0u64;
        for f in &self.factors {
            mask |= 1 << (f.var - 1);
            if !f.sign {
                expected |= 1 << (f.var - 1);
            }
        }
        (mask, expected)
    }
}

impl fmt::Display for ExtendedMonomial {
    /// Factors print as `(x3)` for x_3 and `(x3')` for x_3 ⊕ 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for factor in &self.factors {
            write!(f, "(x{}{})", factor.var, if factor.sign { "'" } else { "" })?;
        }
        Ok(())
    }
}

/// The layered normal form: ordered extended-monomial layers plus the
/// outer constant b.
///
/// Invariants, enforced at construction: layer variable sets are pairwise
/// disjoint with union {1..n}; every layer is nonempty; the last layer has
/// at least two factors when n >= 2. The single admissible n = 1 structure
/// (one single-factor layer) is flagged [`degenerate`](Self::is_degenerate)
/// and excluded from all counting and formula paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayerStructureRepr", into = "LayerStructureRepr")]
pub struct LayerStructure {
    n: u32,
    layers: Vec<ExtendedMonomial>,
    b: bool,
}

/// Wire form of [`LayerStructure`]: `{"n":5,"b":0,"layers":[[[1,0],[3,1]],...]}`
/// with one `[var, sign]` pair per factor.
#[derive(Serialize, Deserialize)]
struct LayerStructureRepr {
    n: u32,
    b: u8,
    layers: Vec<Vec<(u32, u8)>>,
}

impl LayerStructure {
    pub fn new(n: u32, layers: Vec<Vec<(u32, bool)>>, b: bool) -> Result<Self, StructureError> {
        if n > MAX_VARS {
            return Err(StructureError::TooManyVariables(n));
        }
        if layers.is_empty() {
            return Err(StructureError::NoLayers);
        }
        let mut seen = vec![false; n as usize];
        for (i, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(StructureError::EmptyLayer(i + 1));
            }
            for &(var, _) in layer {
                if var < 1 || var > n {
                    return Err(StructureError::VarOutOfRange { var, n });
                }
                if std::mem::replace(&mut seen[var as usize - 1], true) {
                    return Err(StructureError::DuplicateVariable(var));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(StructureError::MissingVariable(missing as u32 + 1));
        }
        if n >= 2 && layers.last().expect("nonempty").len() < 2 {
            return Err(StructureError::LastLayerTooSmall);
        }
        let layers = layers
            .into_iter()
            .map(|layer| {
                ExtendedMonomial::new(layer.into_iter().map(|(var, sign)| Factor { var, sign }).collect())
            })
            .collect();
        Ok(LayerStructure { n, layers, b })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn b(&self) -> bool {
        self.b
    }

    pub fn layers(&self) -> &[ExtendedMonomial] {
        &self.layers
    }

    /// The layer number r.
    pub fn layer_number(&self) -> usize {
        self.layers.len()
    }

    /// Variables of the first layer: exactly the canalyzing variables of
    /// the reconstructed function.
    pub fn most_dominant_variables(&self) -> Vec<u32> {
        self.layers[0].vars()
    }

    /// The n = 1 structure admitted for totality but excluded from the
    /// normal-form statistics (which require a last layer of size two).
    pub fn is_degenerate(&self) -> bool {
        self.n == 1
    }

    /// Layer sizes (k_1, ..., k_r); `None` for the degenerate n = 1 case.
    pub fn composition(&self) -> Option<Composition> {
        Composition::new(self.n, self.layers.iter().map(|m| m.len() as u32).collect()).ok()
    }

    /// The layer index (1-based) containing x_var, if any.
    pub fn layer_of(&self, var: u32) -> Option<usize> {
        self.layers.iter().position(|m| m.vars().contains(&var)).map(|i| i + 1)
    }

    /// Evaluate the nested form into a truth table. The result depends
    /// essentially on all n variables.
    pub fn reconstruct(&self) -> TruthTable {
        let masks: Vec<(u64, u64)> = self.layers.iter().map(|m| m.masks()).collect();
        let r = masks.len();
        let b = self.b;
        TruthTable::from_fn(self.n, |t| {
            // Value is b flipped iff the first vanishing layer has even
            // index (treating the all-satisfied point as layer r + 1).
            for (i, &(mask, expected)) in masks.iter().enumerate() {
                if t & mask != expected {
                    return b ^ (i % 2 == 1);
                }
            }
            b ^ (r % 2 == 1)
        })
        .expect("structure variable count is within the table cap")
    }

    /// Canonical JSON form; see [`LayerStructureRepr`].
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("structure serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, StructureError> {
        serde_json::from_str(text).map_err(|e| StructureError::BadText(e.to_string()))
    }
}

impl From<LayerStructure> for LayerStructureRepr {
    fn from(s: LayerStructure) -> Self {
        LayerStructureRepr {
            n: s.n,
            b: s.b as u8,
            layers: s
                .layers
                .iter()
                .map(|m| m.factors().iter().map(|f| (f.var, f.sign as u8)).collect())
                .collect(),
        }
    }
}

impl TryFrom<LayerStructureRepr> for LayerStructure {
    type Error = StructureError;

    fn try_from(repr: LayerStructureRepr) -> Result<Self, StructureError> {
        if repr.b > 1 {
            return Err(StructureError::BadText("b must be 0 or 1".into()));
        }
        let layers = repr
            .layers
            .into_iter()
            .map(|layer| {
                layer
                    .into_iter()
                    .map(|(var, sign)| {
                        if sign > 1 {
                            Err(StructureError::BadText("signs must be 0 or 1".into()))
                        } else {
                            Ok((var, sign == 1))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        LayerStructure::new(repr.n, layers, repr.b == 1)
    }
}

impl fmt::Display for LayerStructure {
    /// Canonical text form, e.g. `0 ⊕ (x1)(x3') [ (x4) [ (x2)(x5') ] ]`:
    /// the outer constant, the first layer's factors, then each deeper
    /// layer in nested brackets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊕ ", self.b as u8)?;
        for (i, layer) in self.layers.iter().enumerate() {
            if i > 0 {
                write!(f, " [ ")?;
            }
            write!(f, "{layer}")?;
        }
        for _ in 1..self.layers.len() {
            write!(f, " ]")?;
        }
        Ok(())
    }
}

impl FromStr for LayerStructure {
    type Err = StructureError;

    /// Parse the canonical text form produced by `Display`.
    fn from_str(s: &str) -> Result<Self, StructureError> {
        let bad = |msg: &str| StructureError::BadText(msg.to_string());
        let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
        let b = match chars.next() {
            Some('0') => false,
            Some('1') => true,
            _ => return Err(bad("expected the outer constant 0 or 1")),
        };
        if chars.next() != Some('⊕') {
            return Err(bad("expected '⊕' after the outer constant"));
        }
        let mut layers: Vec<Vec<(u32, bool)>> = vec![Vec::new()];
        let mut open = 0usize;
        while let Some(c) = chars.next() {
            match c {
                '(' => {
                    if chars.next() != Some('x') {
                        return Err(bad("expected 'x' after '('"));
                    }
                    let mut var = 0u32;
                    while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                        var = var.saturating_mul(10) + d;
                        chars.next();
                    }
                    if var == 0 {
                        return Err(bad("expected a variable index after 'x'"));
                    }
                    let sign = if chars.peek() == Some(&'\'') {
                        chars.next();
                        true
                    } else {
                        false
                    };
                    if chars.next() != Some(')') {
                        return Err(bad("expected ')' after a factor"));
                    }
                    layers.last_mut().expect("nonempty").push((var, sign));
                }
                '[' => {
                    open += 1;
                    layers.push(Vec::new());
                }
                ']' => {
                    if open == 0 {
                        return Err(bad("unbalanced ']'"));
                    }
                    open -= 1;
                }
                _ => return Err(bad(&format!("unexpected character {c:?}"))),
            }
        }
        if open != 0 {
            return Err(bad("unbalanced '['"));
        }
        let n = layers.iter().map(|l| l.len() as u32).sum();
        LayerStructure::new(n, layers, b)
    }
}

/// Why a function is not nested canalyzing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotNcfReason {
    /// The function does not depend on this declared variable.
    InessentialVariable(u32),
    /// Peeling stalled: the residual at this depth (1-based; depth 1 is
    /// the input itself) has no canalyzing variable.
    NoCanalyzingVariableAtDepth { depth: u32, residual: ResidualWitness },
    /// Constant functions (including the n = 0 case) have no normal form.
    ConstantFunction,
    /// Reserved for callers that pre-screen inputs; `ncf_decompose` itself
    /// reports constants, the only zero-variable functions, as
    /// `ConstantFunction`.
    TooFewVariables,
}

/// The residual that stopped the peeling, in original variable names:
/// `vars[j-1]` is the input variable behind residual variable j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualWitness {
    pub vars: Vec<u32>,
    pub table: TruthTable,
}

impl ResidualWitness {
    /// Polynomial text of the residual, rendered over the original
    /// variable names.
    pub fn anf_text(&self) -> String {
        let poly = crate::anf::AnfPoly::from_truth_table(&self.table);
        if poly.is_zero() {
            return "0".to_string();
        }
        let mut ordered: Vec<Vec<u32>> = poly.monomial_vars().collect();
        ordered.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let terms: Vec<String> = ordered
            .iter()
            .map(|vars| {
                if vars.is_empty() {
                    "1".to_string()
                } else {
                    vars.iter()
                        .map(|&v| format!("x{}", self.vars[v as usize - 1]))
                        .collect::<Vec<_>>()
                        .join("*")
                }
            })
            .collect();
        terms.join(" + ")
    }
}

/// Outcome of [`ncf_decompose`]. All failures are verdicts, not errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecomposeVerdict {
    Ncf(LayerStructure),
    NotNcf(NotNcfReason),
}

impl DecomposeVerdict {
    pub fn is_ncf(&self) -> bool {
        matches!(self, DecomposeVerdict::Ncf(_))
    }

    /// NCF in the full layered-normal-form sense: n >= 2, so the
    /// degenerate single-variable structure does not count.
    pub fn is_ncf_nondegenerate(&self) -> bool {
        matches!(self, DecomposeVerdict::Ncf(s) if !s.is_degenerate())
    }

    pub fn structure(&self) -> Option<&LayerStructure> {
        match self {
            DecomposeVerdict::Ncf(s) => Some(s),
            DecomposeVerdict::NotNcf(_) => None,
        }
    }
}

/// All canalyzing triples of f, sorted by (var, input). A constant
/// function f ≡ b yields every (var, input, b) pair.
pub fn canalyzing_triples(f: &TruthTable) -> Vec<CanalyzingTriple> {
    let mut triples = Vec::new();
    for var in 1..=f.n() {
        for input in [false, true] {
            for output in [false, true] {
                if f.slice_is_constant(var, input, output) {
                    triples.push(CanalyzingTriple { var, input, output });
                    break;
                }
            }
        }
    }
    triples
}

/// A successful peel: f == monomial * residual ⊕ canalyzed, bit-exact,
/// where the residual is expressed over the surviving variables
/// (renumbered; `residual_vars[j-1]` gives the original index).
#[derive(Debug, Clone)]
pub struct PeeledLayer {
    pub monomial: ExtendedMonomial,
    pub canalyzed: bool,
    pub residual: TruthTable,
    pub residual_vars: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorError {
    /// No variable canalyzes; certifies the function (and anything that
    /// peels down to it) is not nested canalyzing.
    NoCanalyzingVariable,
    /// Canalyzing triples disagree on the canalyzed value. Only functions
    /// with a single essential variable do this.
    MixedCanalyzedValues,
}

/// Peel the maximal canalyzing layer: collect every canalyzing variable
/// into one extended monomial M with the common canalyzed value c, and
/// return the residual Q with f == M·Q ⊕ c (verified bit-exact).
///
/// Panics if f is constant.
pub fn factor_layer(f: &TruthTable) -> Result<PeeledLayer, FactorError> {
    assert!(!f.is_constant(), "cannot peel a constant function");
    let triples = canalyzing_triples(f);
    let Some(first) = triples.first() else {
        return Err(FactorError::NoCanalyzingVariable);
    };
    let canalyzed = first.output;
    if triples.iter().any(|t| t.output != canalyzed) {
        return Err(FactorError::MixedCanalyzedValues);
    }
    let monomial =
        ExtendedMonomial::new(triples.iter().map(|t| Factor { var: t.var, sign: t.input }).collect());

    // Fix every layer variable at the complement of its canalyzing input.
    // Descending order leaves the indices of smaller variables untouched.
    let mut residual = f.clone();
    let mut residual_vars: Vec<u32> = (1..=f.n()).collect();
    for factor in monomial.factors().iter().rev() {
        residual = residual.restrict(factor.var, !factor.sign);
        residual_vars.remove(factor.var as usize - 1);
    }
    let residual = residual.xor_constant(canalyzed);

    verify_factorization(f, &monomial, canalyzed, &residual);
    Ok(PeeledLayer { monomial, canalyzed, residual, residual_vars })
}

/// Check f == M·Q ⊕ c at every point.
fn verify_factorization(f: &TruthTable, m: &ExtendedMonomial, c: bool, q: &TruthTable) {
    let (mask, expected) = m.masks();
    let layer_mask = mask;
    for t in 0..f.size() {
        let value = if t & mask == expected {
            q.bit(compress_index(t, layer_mask, f.n())) ^ c
        } else {
            c
        };
        assert_eq!(f.bit(t), value, "layer factorization identity failed at index {t}");
    }
}

/// Drop the masked bits of t, compacting the rest (low bits first).
fn compress_index(t: u64, drop_mask: u64, n: u32) -> u64 {
    let mut out = 0u64;
    let mut pos = 0;
    for bit in 0..n as u64 {
        if drop_mask >> bit & 1 == 0 {
            out |= (t >> bit & 1) << pos;
            pos += 1;
        }
    }
    out
}

/// Decompose f into its layered normal form, or return a verdict with a
/// checkable witness of why none exists.
pub fn ncf_decompose(f: &TruthTable) -> DecomposeVerdict {
    if f.is_constant() {
        return DecomposeVerdict::NotNcf(NotNcfReason::ConstantFunction);
    }
    for var in 1..=f.n() {
        if !f.is_essential(var) {
            return DecomposeVerdict::NotNcf(NotNcfReason::InessentialVariable(var));
        }
    }
    if f.n() == 1 {
        // f = x1 ⊕ b: admitted as the degenerate structure.
        let b = f.bit(0);
        let s = LayerStructure::new(1, vec![vec![(1, false)]], b).expect("valid degenerate structure");
        debug_assert_eq!(s.reconstruct(), *f);
        return DecomposeVerdict::Ncf(s);
    }

    let mut current = f.clone();
    let mut orig: Vec<u32> = (1..=f.n()).collect();
    let mut layers: Vec<Vec<(u32, bool)>> = Vec::new();
    let mut b = false;
    let mut depth = 1u32;
    while current.n() > 0 {
        match factor_layer(&current) {
            Ok(peel) => {
                if depth == 1 {
                    b = peel.canalyzed;
                } else {
                    // A maximal first peel forces every later canalyzed
                    // value to 1; anything else is an internal bug.
                    assert!(peel.canalyzed, "inner peel canalyzed to 0 after a maximal layer");
                }
                layers.push(
                    peel.monomial
                        .factors()
                        .iter()
                        .map(|fac| (orig[fac.var as usize - 1], fac.sign))
                        .collect(),
                );
                orig = peel.residual_vars.iter().map(|&v| orig[v as usize - 1]).collect();
                current = peel.residual;
                depth += 1;
            }
            Err(FactorError::NoCanalyzingVariable) => {
                return DecomposeVerdict::NotNcf(NotNcfReason::NoCanalyzingVariableAtDepth {
                    depth,
                    residual: ResidualWitness { vars: orig, table: current },
                });
            }
            Err(FactorError::MixedCanalyzedValues) => {
                // Residuals of maximal peels keep at least two essential
                // variables, and the 1-variable input case was handled
                // above, so mixed canalyzed values cannot appear here.
                unreachable!("mixed canalyzed values on a residual with >= 2 essential variables")
            }
        }
    }
    assert_eq!(current.constant_value(), Some(true), "peeling must terminate at the constant 1");
    let structure = LayerStructure::new(f.n(), layers, b).expect("peeled layers form a valid structure");
    DecomposeVerdict::Ncf(structure)
}

/// Project away inessential variables and decompose the projection.
/// `essential[j-1]` is the original index of projected variable j.
pub struct ProjectedAnalysis {
    pub essential: Vec<u32>,
    pub verdict: DecomposeVerdict,
}

/// Re-analyze over the essential variables only. Inessential variables
/// are fixed to 0 (their value cannot matter). Restriction runs in
/// descending variable order, so each variable still sits at its original
/// index when its turn comes.
pub fn decompose_essential(f: &TruthTable) -> ProjectedAnalysis {
    let essential = f.essential_variables();
    let mut g = f.clone();
    for var in (1..=f.n()).rev() {
        if !f.is_essential(var) {
            g = g.restrict(var, false);
        }
    }
    ProjectedAnalysis { essential, verdict: ncf_decompose(&g) }
}
