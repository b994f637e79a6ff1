//! JSON input schemas. Complex numbers are `[re, im]` pairs; matrices are
//! row-major.

use opalg::gelfand::L1ZElement;
use opalg::staralg::{build_algebra, NormTag, RawAlgebra, StarAlgebra};
use opalg::unbounded::{DiagonalOperator, Symbol, Weights, DEFAULT_TRUNCATION};
use opalg::{CMat, C64};
use serde::{Deserialize, Serialize};

pub type Complex = [f64; 2];

pub fn to_c64(z: &Complex) -> C64 {
    C64::new(z[0], z[1])
}

pub fn from_c64(z: &C64) -> Complex {
    [z.re, z.im]
}

pub fn to_vec(v: &[Complex]) -> Vec<C64> {
    v.iter().map(to_c64).collect()
}

pub fn from_vec(v: &[C64]) -> Vec<Complex> {
    v.iter().map(from_c64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex>,
}

impl MatrixJson {
    pub fn to_cmat(&self) -> Result<CMat, String> {
        CMat::new(self.rows, self.cols, to_vec(&self.data)).map_err(|e| e.to_string())
    }

    pub fn from_cmat(m: &CMat) -> Self {
        MatrixJson { rows: m.rows(), cols: m.cols(), data: from_vec(m.data()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum NormJson {
    Sup,
    Ell1 { weights: Vec<f64> },
    Operator { matrices: Vec<MatrixJson> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub basis: Vec<String>,
    /// `[i, j, k, re, im]`: `b_i b_j` has coefficient `re + i·im` on `b_k`.
    pub mult: Vec<(usize, usize, usize, f64, f64)>,
    pub star: MatrixJson,
    pub norm: NormJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<usize>,
}

impl AlgebraJson {
    pub fn build(&self) -> opalg::Result<StarAlgebra> {
        let star = self.star.to_cmat().map_err(opalg::Error::InvalidShape)?;
        let norm = match &self.norm {
            NormJson::Sup => NormTag::Sup,
            NormJson::Ell1 { weights } => NormTag::Ell1(weights.clone()),
            NormJson::Operator { matrices } => NormTag::Operator(
                matrices
                    .iter()
                    .map(|m| m.to_cmat().map_err(opalg::Error::InvalidShape))
                    .collect::<opalg::Result<_>>()?,
            ),
        };
        let triples: Vec<(usize, usize, usize, C64)> =
            self.mult.iter().map(|&(i, j, k, re, im)| (i, j, k, C64::new(re, im))).collect();
        let raw = RawAlgebra::from_triples(self.basis.clone(), &triples, star, norm, self.unit)?;
        build_algebra(raw)
    }
}

/// Functionals and vectors share this shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuesJson {
    pub values: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSetJson {
    pub matrices: Vec<MatrixJson>,
}

impl MatrixSetJson {
    pub fn to_cmats(&self) -> Result<Vec<CMat>, String> {
        self.matrices.iter().map(MatrixJson::to_cmat).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceJson {
    pub offset: i64,
    pub coeffs: Vec<Complex>,
    pub truncation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

impl SequenceJson {
    pub fn element(&self) -> L1ZElement {
        L1ZElement::new(self.offset, to_vec(&self.coeffs))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SymbolJson {
    Power { t: f64 },
    Affine { alpha: f64, beta: f64 },
    Table { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightsJson {
    Power { r: f64 },
    Table { values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionJson {
    pub symbol: SymbolJson,
    pub weights: WeightsJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    pub times: Vec<f64>,
    pub vector: Vec<Complex>,
    /// Finite-difference steps for the generator check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<f64>,
}

impl EvolutionJson {
    pub fn operator(&self) -> opalg::Result<DiagonalOperator> {
        let symbol = match &self.symbol {
            SymbolJson::Power { t } => Symbol::Power { t: *t },
            SymbolJson::Affine { alpha, beta } => Symbol::Affine { alpha: *alpha, beta: *beta },
            SymbolJson::Table { values } => Symbol::Table(values.clone()),
        };
        let weights = match &self.weights {
            WeightsJson::Power { r } => Weights::Power { r: *r },
            WeightsJson::Table { values } => Weights::Table(values.clone()),
        };
        DiagonalOperator::new(symbol, weights, self.truncation.unwrap_or(DEFAULT_TRUNCATION))
    }
}
