//! Generating functions of tropical curve types: vertex weights, gluing
//! across transverse types and the δ-deformation recursion.

mod delta;
mod vertex;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::rc::Rc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::enumerate::{EnumBounds, EnumError};
use crate::exactnum::serde_big::rational_to_pair;
use crate::exactnum::{LaurentSeries, NumError, QLaurent, Rational, DEFAULT_ORDER};
use crate::tropcurve::{CurveError, ExternalEdge, InternalEdge, TropicalType};

pub use delta::{delta_deformations, DeltaAssignment, DeltaDeformation};
use delta::{delta_deformations_cached, CandidateCache};
pub use vertex::{bracket_q, classify_vertex, f_transverse, vertex_weight, vertex_weight_lambda, vertex_weight_q, VertexKind};

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum WeightError {
    #[error("not a single trivalent vertex: {0}")]
    NotVertex(String),
    #[error("type is not general: {0}")]
    NotGeneral(String),
    #[error("type is not transverse: {0}")]
    NotTransverse(String),
    #[error("no weight is assigned to a vertex with two or more zero ends: {0}")]
    UnsupportedVertex(String),
    #[error("δ has {got} entries for {edges} internal edges")]
    DeltaLength { edges: usize, got: usize },
    #[error("δ is not generic for this type")]
    NonGenericDelta,
    #[error("no generic δ found after {attempts} attempts for {curve}")]
    DeltaExhausted { attempts: usize, curve: String },
    #[error("recursion deeper than {cap}; chain: {chain:?}")]
    DepthExceeded { cap: usize, chain: Vec<String> },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Gromov–Witten series in λ.
    Lambda,
    /// Donaldson–Thomas Laurent polynomials in `q^{1/2}`.
    Q,
}

/// A λ-series or a `q^{1/2}`-Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "lowercase")]
pub enum Weight {
    Lambda(LaurentSeries),
    Q(QLaurent),
}

impl Weight {
    pub fn one(mode: Mode, order: i64) -> Self {
        match mode {
            Mode::Lambda => Weight::Lambda(LaurentSeries::one(order)),
            Mode::Q => Weight::Q(QLaurent::one()),
        }
    }

    pub fn zero(mode: Mode, order: i64) -> Self {
        match mode {
            Mode::Lambda => Weight::Lambda(LaurentSeries::zero(order)),
            Mode::Q => Weight::Q(QLaurent::zero()),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Weight::Lambda(_) => Mode::Lambda,
            Weight::Q(_) => Mode::Q,
        }
    }

    pub fn mul(&self, o: &Weight) -> Weight {
        match (self, o) {
            (Weight::Lambda(a), Weight::Lambda(b)) => Weight::Lambda(a * b),
            (Weight::Q(a), Weight::Q(b)) => Weight::Q(a * b),
            _ => panic!("weights of different modes"),
        }
    }

    pub fn add(&self, o: &Weight) -> Weight {
        match (self, o) {
            (Weight::Lambda(a), Weight::Lambda(b)) => Weight::Lambda(a + b),
            (Weight::Q(a), Weight::Q(b)) => Weight::Q(a + b),
            _ => panic!("weights of different modes"),
        }
    }

    pub fn scale(&self, c: &Rational) -> Weight {
        match self {
            Weight::Lambda(a) => Weight::Lambda(a.scale_rational(c)),
            Weight::Q(a) => Weight::Q(a.scale_rational(c)),
        }
    }

    /// Drop λ-coefficients beyond `order`; q-polynomials are exact.
    pub fn truncated(&self, order: i64) -> Weight {
        match self {
            Weight::Lambda(a) => Weight::Lambda(a.truncate(order)),
            Weight::Q(a) => Weight::Q(a.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Lambda(a) => a.is_zero(),
            Weight::Q(a) => a.is_zero(),
        }
    }

    pub fn as_lambda(&self) -> Option<&LaurentSeries> {
        match self {
            Weight::Lambda(a) => Some(a),
            Weight::Q(_) => None,
        }
    }

    pub fn as_q(&self) -> Option<&QLaurent> {
        match self {
            Weight::Q(a) => Some(a),
            Weight::Lambda(_) => None,
        }
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Weight::Lambda(a) => write!(f, "{a}"),
            Weight::Q(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightConfig {
    pub order: i64,
    pub seed: u64,
    pub bounds: EnumBounds,
    pub depth_cap: usize,
}

impl Default for WeightConfig {
    fn default() -> Self {
        Self { order: DEFAULT_ORDER, seed: 0, bounds: EnumBounds::default(), depth_cap: 8 }
    }
}

/// Number of δ samples tried before giving up.
pub const MAX_DELTA_ATTEMPTS: usize = 16;

/// How a weight was obtained.
#[derive(Clone, Debug, Serialize)]
pub struct Derivation {
    pub curve: TropicalType,
    pub weight: Weight,
    #[serde(flatten)]
    pub rule: Rule,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    Vertex,
    Transverse { m: String, vertices: Vec<Rc<Derivation>> },
    Components { parts: Vec<Rc<Derivation>> },
    Deformed { delta: Vec<[[String; 2]; 3]>, attempts: usize, terms: Vec<Term> },
}

/// One δ-deformation's contribution `m Π F(γ′_v)/|Aut γ′_v|`.
#[derive(Clone, Debug, Serialize)]
pub struct Term {
    pub m: String,
    pub automorphisms: Vec<u64>,
    pub pieces: Vec<Rc<Derivation>>,
}

/// Memoizing evaluator of `F_γ`.
pub struct Evaluator {
    pub config: WeightConfig,
    memo: HashMap<(TropicalType, Mode), Rc<Derivation>>,
    cache: CandidateCache,
}

fn type_seed(seed: u64, t: &TropicalType) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    seed ^ h.finish()
}

/// Connected components as separate types, ends relabeled in label order.
pub fn split_components(t: &TropicalType) -> Vec<TropicalType> {
    t.components()
        .into_iter()
        .map(|vs| {
            let index = |v: usize| vs.iter().position(|&x| x == v);
            let internal = t
                .internal_edges()
                .iter()
                .filter_map(|e| Some(InternalEdge { tail: index(e.tail)?, head: index(e.head)?, derivative: e.derivative }))
                .collect();
            let mut ends: Vec<ExternalEdge> = t
                .ends_by_label()
                .into_iter()
                .filter_map(|e| Some(ExternalEdge { vertex: index(e.vertex)?, ..e.clone() }))
                .collect();
            for (i, e) in ends.iter_mut().enumerate() {
                e.label = i as u32 + 1;
            }
            TropicalType::new(vs.len(), internal, ends).expect("components of a valid type")
        })
        .collect()
}

impl Evaluator {
    pub fn new(config: WeightConfig) -> Self {
        Self { config, memo: HashMap::new(), cache: CandidateCache::default() }
    }

    pub fn weight(&mut self, t: &TropicalType, mode: Mode) -> Result<Weight, WeightError> {
        Ok(self.derive(t, mode)?.weight.truncated(self.config.order))
    }

    pub fn derive(&mut self, t: &TropicalType, mode: Mode) -> Result<Rc<Derivation>, WeightError> {
        self.derive_at(t, mode, &mut Vec::new())
    }

    fn derive_at(&mut self, t: &TropicalType, mode: Mode, chain: &mut Vec<TropicalType>) -> Result<Rc<Derivation>, WeightError> {
        let key = t.canonical_form();
        if let Some(d) = self.memo.get(&(key.clone(), mode)) {
            return Ok(d.clone());
        }
        if chain.len() >= self.config.depth_cap {
            return Err(WeightError::DepthExceeded {
                cap: self.config.depth_cap,
                chain: chain.iter().map(ToString::to_string).collect(),
            });
        }
        chain.push(key.clone());
        let result = self.compute(&key, mode, chain);
        chain.pop();
        let d = Rc::new(result?);
        self.memo.insert((key, mode), d.clone());
        Ok(d)
    }

    fn compute(&mut self, t: &TropicalType, mode: Mode, chain: &mut Vec<TropicalType>) -> Result<Derivation, WeightError> {
        let order = self.config.order;
        if !t.is_connected() {
            let mut w = Weight::one(mode, order);
            let mut parts = Vec::new();
            for c in split_components(t) {
                let d = self.derive_at(&c, mode, chain)?;
                w = w.mul(&d.weight).truncated(order);
                parts.push(d);
            }
            return Ok(Derivation { curve: t.clone(), weight: w, rule: Rule::Components { parts } });
        }
        if t.n_vertices() == 1 && t.internal_edges().is_empty() {
            return Ok(Derivation { curve: t.clone(), weight: vertex_weight(t, mode, order)?, rule: Rule::Vertex });
        }
        if !t.is_general() {
            return Err(WeightError::NotGeneral(t.to_string()));
        }
        if t.is_transverse() {
            let m = t.m_gamma()?;
            let mut w = Weight::one(mode, order);
            let mut vertices = Vec::new();
            for v in 0..t.n_vertices() {
                let (star, _) = t.vertex_star(v)?;
                let d = self.derive_at(&star, mode, chain)?;
                w = w.mul(&d.weight).truncated(order);
                vertices.push(d);
            }
            let w = w.scale(&Rational::from_integer(m.clone()));
            return Ok(Derivation { curve: t.clone(), weight: w, rule: Rule::Transverse { m: m.to_string(), vertices } });
        }
        let seed = type_seed(self.config.seed, t);
        let k = t.internal_edges().len();
        for attempt in 0..MAX_DELTA_ATTEMPTS {
            let delta = DeltaAssignment::sample(k, seed, attempt);
            let defs = match delta_deformations_cached(t, &delta, &self.config.bounds, &mut self.cache) {
                Ok(d) => d,
                Err(WeightError::NonGenericDelta) => continue,
                Err(e) => return Err(e),
            };
            let mut total = Weight::zero(mode, order);
            let mut terms = Vec::new();
            for def in &defs {
                let mut w = Weight::one(mode, order).scale(&Rational::from_integer(def.m.clone()));
                let mut autos = Vec::new();
                let mut pieces = Vec::new();
                for r in &def.replacements {
                    let d = self.derive_at(r, mode, chain)?;
                    let aut = r.automorphism_count();
                    w = w.mul(&d.weight).scale(&Rational::new(BigInt::from(1), BigInt::from(aut))).truncated(order);
                    autos.push(aut);
                    pieces.push(d);
                }
                total = total.add(&w);
                terms.push(Term { m: def.m.to_string(), automorphisms: autos, pieces });
            }
            let delta_repr = delta.0.iter().map(|v| std::array::from_fn(|a| rational_to_pair(&v[a]))).collect();
            return Ok(Derivation {
                curve: t.clone(),
                weight: total,
                rule: Rule::Deformed { delta: delta_repr, attempts: attempt + 1, terms },
            });
        }
        Err(WeightError::DeltaExhausted { attempts: MAX_DELTA_ATTEMPTS, curve: t.to_string() })
    }
}

/// `F_γ` by the gluing recursion.
pub fn f_general(t: &TropicalType, order: i64, mode: Mode, seed: u64, bounds: &EnumBounds, depth_cap: usize) -> Result<Weight, WeightError> {
    Evaluator::new(WeightConfig { order, seed, bounds: bounds.clone(), depth_cap }).weight(t, mode)
}

/// Number of zero-derivative edges (all of them ends in a general type).
pub fn zero_edge_count(t: &TropicalType) -> usize {
    t.n_zero_ends() + t.internal_edges().iter().filter(|e| e.derivative.is_zero()).count()
}

/// The DT weight evaluated at `q^{1/2} = ie^{iλ/2}` equals `F_γ/λ^k` through
/// `λ^order` with no imaginary residue. The two sides use different δ seeds.
pub fn dt_consistency(t: &TropicalType, order: i64, seed: u64, bounds: &EnumBounds) -> Result<bool, WeightError> {
    let k = zero_edge_count(t) as i64;
    let gw = f_general(t, order + k, Mode::Lambda, seed, bounds, 8)?;
    let dt = f_general(t, order, Mode::Q, seed.wrapping_add(0x5DEE_CE66D), bounds, 8)?;
    let image = dt.as_q().expect("q mode").substitute_lambda(order);
    let lhs = gw.as_lambda().expect("λ mode").shift(-k);
    Ok(image.real && lhs.agrees_to(&image.series, order))
}
