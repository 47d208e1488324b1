//! Truncated operator-pair spectral data: eigenvalue lists, overlap
//! matrices, constant-coefficient geometry, model builders, validation, and
//! the versioned JSON interchange format.
//!
//! All types are immutable after construction and freely shareable across
//! threads.

pub mod builders;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Whether a spectrum lists Laplace eigenvalues lambda_k or signed Dirac
/// eigenvalues mu_k (with lambda = mu^2 downstream).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Laplace,
    Dirac,
}

impl SpectrumKind {
    pub fn name(self) -> &'static str {
        match self {
            SpectrumKind::Laplace => "laplace",
            SpectrumKind::Dirac => "dirac",
        }
    }
}

/// Ordered truncated eigenvalue list of one operator.
///
/// Laplace values are nondecreasing; Dirac values are ordered by absolute
/// value with signs retained. Ties keep their original basis order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub values: Vec<f64>,
    /// spatial dimension
    pub n: usize,
    pub fiber_dim: usize,
    pub label: String,
}

impl Spectrum {
    pub fn new(
        kind: SpectrumKind,
        values: Vec<f64>,
        n: usize,
        fiber_dim: usize,
        label: impl Into<String>,
    ) -> Result<Self> {
        let s = Self {
            kind,
            values,
            n,
            fiber_dim,
            label: label.into(),
        };
        s.check_ordering()?;
        Ok(s)
    }

    fn check_ordering(&self) -> Result<()> {
        if self.fiber_dim == 0 {
            return Err(Error::InvalidInput("fiber_dim must be positive".into()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "spectrum '{}' has non-finite entries",
                self.label
            )));
        }
        let ordered = match self.kind {
            SpectrumKind::Laplace => self.values.windows(2).all(|w| w[0] <= w[1]),
            SpectrumKind::Dirac => self.values.windows(2).all(|w| w[0].abs() <= w[1].abs()),
        };
        if !ordered {
            return Err(Error::InvalidInput(format!(
                "spectrum '{}' violates its ordering convention",
                self.label
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Laplace eigenvalue of entry k (mu^2 for Dirac spectra).
    pub fn lambda(&self, k: usize) -> f64 {
        match self.kind {
            SpectrumKind::Laplace => self.values[k],
            SpectrumKind::Dirac => self.values[k] * self.values[k],
        }
    }

    /// Iterator over Laplace eigenvalues.
    pub fn lambdas(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(move |&v| match self.kind {
            SpectrumKind::Laplace => v,
            SpectrumKind::Dirac => v * v,
        })
    }
}

/// Squared eigensection overlaps |(phi_j^-, phi_k^+)|^2, stored in whichever
/// of three shapes matches the pair's structure. Rows index the minus
/// spectrum, columns the plus spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum OverlapMatrix {
    /// Shared eigenbasis in matching order.
    Identity { size: usize },
    /// Shared eigenbasis, reordered: row j pairs with column `column_of[j]`.
    Permutation { column_of: Vec<usize> },
    /// General dense overlaps, row-major.
    Dense {
        rows: usize,
        cols: usize,
        entries: Vec<f64>,
    },
}

impl OverlapMatrix {
    pub fn identity(size: usize) -> Self {
        OverlapMatrix::Identity { size }
    }

    pub fn dense(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "dense overlap needs {rows}x{cols} = {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(OverlapMatrix::Dense {
            rows,
            cols,
            entries,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            OverlapMatrix::Identity { size } => (*size, *size),
            OverlapMatrix::Permutation { column_of } => (column_of.len(), column_of.len()),
            OverlapMatrix::Dense { rows, cols, .. } => (*rows, *cols),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, OverlapMatrix::Identity { .. })
    }

    /// True when the matrix couples each minus mode to exactly one plus mode.
    pub fn is_structured(&self) -> bool {
        !matches!(self, OverlapMatrix::Dense { .. })
    }

    pub fn entry(&self, j: usize, k: usize) -> f64 {
        match self {
            OverlapMatrix::Identity { .. } => {
                if j == k {
                    1.0
                } else {
                    0.0
                }
            }
            OverlapMatrix::Permutation { column_of } => {
                if column_of[j] == k {
                    1.0
                } else {
                    0.0
                }
            }
            OverlapMatrix::Dense { cols, entries, .. } => entries[j * cols + k],
        }
    }

    /// For structured overlaps: the plus column paired with minus row j.
    pub fn paired_column(&self, j: usize) -> Option<usize> {
        match self {
            OverlapMatrix::Identity { .. } => Some(j),
            OverlapMatrix::Permutation { column_of } => Some(column_of[j]),
            OverlapMatrix::Dense { .. } => None,
        }
    }

    pub fn row_sum(&self, j: usize) -> f64 {
        match self {
            OverlapMatrix::Identity { .. } | OverlapMatrix::Permutation { .. } => 1.0,
            OverlapMatrix::Dense { rows: _, cols, entries } => {
                crate::sum::pairwise_sum(&entries[j * cols..(j + 1) * cols])
            }
        }
    }

    pub fn col_sum(&self, k: usize) -> f64 {
        match self {
            OverlapMatrix::Identity { .. } | OverlapMatrix::Permutation { .. } => 1.0,
            OverlapMatrix::Dense { rows, cols, entries } => {
                let v: Vec<f64> = (0..*rows).map(|j| entries[j * cols + k]).collect();
                crate::sum::pairwise_sum(&v)
            }
        }
    }

    /// Transpose (used when swapping the roles of the two operators).
    pub fn transposed(&self) -> Self {
        match self {
            OverlapMatrix::Identity { size } => OverlapMatrix::Identity { size: *size },
            OverlapMatrix::Permutation { column_of } => {
                let mut inv = vec![0usize; column_of.len()];
                for (j, &k) in column_of.iter().enumerate() {
                    inv[k] = j;
                }
                OverlapMatrix::Permutation { column_of: inv }
            }
            OverlapMatrix::Dense { rows, cols, entries } => {
                let mut t = vec![0.0; entries.len()];
                for j in 0..*rows {
                    for k in 0..*cols {
                        t[k * rows + j] = entries[j * cols + k];
                    }
                }
                OverlapMatrix::Dense {
                    rows: *cols,
                    cols: *rows,
                    entries: t,
                }
            }
        }
    }
}

/// The complete input of every invariant: two spectra, their overlap matrix,
/// and the mass parameter, with omega_k = sqrt(lambda_k + m^2) precomputed.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    pub plus: Spectrum,
    pub minus: Spectrum,
    pub overlap: OverlapMatrix,
    pub mass: f64,
    omega_plus: Vec<f64>,
    omega_minus: Vec<f64>,
}

impl OperatorPair {
    pub fn new(
        minus: Spectrum,
        plus: Spectrum,
        overlap: OverlapMatrix,
        mass: f64,
    ) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::InvalidInput(format!("mass must be > 0, got {mass}")));
        }
        if plus.kind != minus.kind {
            return Err(Error::KindMismatch {
                expected: minus.kind.name(),
                found: plus.kind.name(),
            });
        }
        if plus.n != minus.n || plus.fiber_dim != minus.fiber_dim {
            return Err(Error::InvalidInput(
                "plus and minus spectra disagree on dimension or fiber".into(),
            ));
        }
        let (rows, cols) = overlap.shape();
        if rows != minus.len() || cols != plus.len() {
            return Err(Error::InvalidInput(format!(
                "overlap shape {rows}x{cols} does not match spectra {}x{}",
                minus.len(),
                plus.len()
            )));
        }
        let m2 = mass * mass;
        let omega = |s: &Spectrum| -> Result<Vec<f64>> {
            s.lambdas()
                .map(|l| {
                    let w2 = l + m2;
                    if w2 > 0.0 {
                        Ok(w2.sqrt())
                    } else {
                        Err(Error::Domain {
                            op: "OperatorPair::new",
                            message: format!("lambda + m^2 = {w2} <= 0"),
                        })
                    }
                })
                .collect()
        };
        let omega_plus = omega(&plus)?;
        let omega_minus = omega(&minus)?;
        Ok(Self {
            plus,
            minus,
            overlap,
            mass,
            omega_plus,
            omega_minus,
        })
    }

    pub fn kind(&self) -> SpectrumKind {
        self.minus.kind
    }

    /// omega_k^+ = sqrt(lambda_k^+ + m^2)
    pub fn omega_plus(&self) -> &[f64] {
        &self.omega_plus
    }

    pub fn omega_minus(&self) -> &[f64] {
        &self.omega_minus
    }

    /// The pair with + and - exchanged (overlap transposed).
    pub fn swapped(&self) -> Self {
        Self {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            overlap: self.overlap.transposed(),
            mass: self.mass,
            omega_plus: self.omega_minus.clone(),
            omega_minus: self.omega_plus.clone(),
        }
    }

    pub fn require_kind(&self, kind: SpectrumKind) -> Result<()> {
        if self.kind() != kind {
            return Err(Error::KindMismatch {
                expected: kind.name(),
                found: self.kind().name(),
            });
        }
        Ok(())
    }
}

/// Constant inverse metrics, optional vielbeins, coordinate volume and fiber
/// dimension: the input of the local geometric coefficients and of V_b, V_f.
#[derive(Debug, Clone)]
pub struct GeometryPair {
    pub n: usize,
    /// inverse metrics g_+^{ij}, g_-^{ij} (row-major n x n)
    pub g_plus: nalgebra::DMatrix<f64>,
    pub g_minus: nalgebra::DMatrix<f64>,
    /// orthonormal frames with g^{ij} = sum_a e^i_a e^j_a (needed for Dirac)
    pub vielbein_plus: Option<nalgebra::DMatrix<f64>>,
    pub vielbein_minus: Option<nalgebra::DMatrix<f64>>,
    /// coordinate volume (Lebesgue measure of the base)
    pub volume: f64,
    pub fiber_dim: usize,
}

impl GeometryPair {
    pub fn new(
        n: usize,
        g_plus: nalgebra::DMatrix<f64>,
        g_minus: nalgebra::DMatrix<f64>,
        volume: f64,
        fiber_dim: usize,
    ) -> Result<Self> {
        let check_spd = |g: &nalgebra::DMatrix<f64>, tag: &str| -> Result<()> {
            if g.nrows() != n || g.ncols() != n {
                return Err(Error::InvalidInput(format!("{tag} must be {n}x{n}")));
            }
            if (g - g.transpose()).norm() > 1e-12 * g.norm().max(1.0) {
                return Err(Error::InvalidInput(format!("{tag} must be symmetric")));
            }
            let eig = g.clone().symmetric_eigen();
            if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
                return Err(Error::InvalidInput(format!("{tag} must be positive definite")));
            }
            Ok(())
        };
        check_spd(&g_plus, "g_plus")?;
        check_spd(&g_minus, "g_minus")?;
        if !(volume > 0.0) {
            return Err(Error::InvalidInput("volume must be > 0".into()));
        }
        if fiber_dim == 0 {
            return Err(Error::InvalidInput("fiber_dim must be positive".into()));
        }
        Ok(Self {
            n,
            g_plus,
            g_minus,
            vielbein_plus: None,
            vielbein_minus: None,
            volume,
            fiber_dim,
        })
    }

    /// Attaches frames; each must reproduce its metric to 1e-12.
    pub fn with_vielbeins(
        mut self,
        e_plus: nalgebra::DMatrix<f64>,
        e_minus: nalgebra::DMatrix<f64>,
    ) -> Result<Self> {
        let check = |e: &nalgebra::DMatrix<f64>, g: &nalgebra::DMatrix<f64>, tag: &str| {
            let rebuilt = e * e.transpose();
            if (rebuilt - g).norm() > 1e-12 * g.norm().max(1.0) {
                return Err(Error::InvalidInput(format!(
                    "{tag} does not reproduce its metric"
                )));
            }
            Ok(())
        };
        check(&e_plus, &self.g_plus, "vielbein_plus")?;
        check(&e_minus, &self.g_minus, "vielbein_minus")?;
        self.vielbein_plus = Some(e_plus);
        self.vielbein_minus = Some(e_minus);
        Ok(self)
    }

    /// 1D shortcut: scalar inverse metrics a^2, b^2 with frames a, b.
    pub fn one_dimensional(a: f64, b: f64, volume: f64, fiber_dim: usize) -> Result<Self> {
        let g = |s: f64| nalgebra::DMatrix::from_element(1, 1, s * s);
        Self::new(1, g(a), g(b), volume, fiber_dim)?
            .with_vielbeins(
                nalgebra::DMatrix::from_element(1, 1, a),
                nalgebra::DMatrix::from_element(1, 1, b),
            )
    }
}

// ---------------------------------------------------------------------------
// validation

/// One named invariant check of a validation run.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Report-only diagnostic over every type invariant of an [`OperatorPair`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
    pub worst_row_deviation: f64,
    pub worst_col_deviation: f64,
    /// minus-rows near the truncation edge whose row sums fall visibly short
    pub flagged_edge_rows: Vec<usize>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "  [{}] {}: {}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        writeln!(
            f,
            "  worst overlap row-sum deviation {:.3e}, column {:.3e}",
            self.worst_row_deviation, self.worst_col_deviation
        )?;
        if !self.flagged_edge_rows.is_empty() {
            writeln!(
                f,
                "  truncation-edge rows with visible deficit: {:?}",
                self.flagged_edge_rows
            )?;
        }
        Ok(())
    }
}

const OVERLAP_SUM_SLACK: f64 = 1e-9;

/// Checks every invariant of the pair and reports; never errors.
pub fn validate(pair: &OperatorPair) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(ValidationCheck {
            name: name.into(),
            passed,
            detail,
        });
    };

    push(
        "mass",
        pair.mass > 0.0,
        format!("m = {}", pair.mass),
    );

    let ordered = pair.plus.check_ordering().is_ok() && pair.minus.check_ordering().is_ok();
    push("spectrum ordering", ordered, "ordering conventions".into());

    let omega_ok = pair
        .omega_plus()
        .iter()
        .chain(pair.omega_minus())
        .all(|&w| w >= pair.mass * (1.0 - 1e-14));
    push(
        "frequencies",
        omega_ok,
        "omega_k >= m for every mode".into(),
    );

    let (rows, cols) = pair.overlap.shape();
    push(
        "overlap shape",
        rows == pair.minus.len() && cols == pair.plus.len(),
        format!("{rows}x{cols}"),
    );

    // entry range and stochasticity
    let mut entries_ok = true;
    let mut worst_row: f64 = 0.0;
    let mut worst_col: f64 = 0.0;
    let mut row_dev: Vec<f64> = Vec::with_capacity(rows);
    match &pair.overlap {
        OverlapMatrix::Dense { entries, .. } => {
            entries_ok = entries.iter().all(|&e| (-1e-12..=1.0 + 1e-9).contains(&e));
            for j in 0..rows {
                let dev = pair.overlap.row_sum(j) - 1.0;
                row_dev.push(dev);
                if dev > worst_row {
                    worst_row = dev;
                }
                worst_row = worst_row.max(dev);
            }
            for k in 0..cols {
                worst_col = worst_col.max(pair.overlap.col_sum(k) - 1.0);
            }
        }
        _ => {
            row_dev = vec![0.0; rows];
        }
    }
    push(
        "overlap entries in [0, 1]",
        entries_ok,
        "squared overlaps".into(),
    );
    push(
        "row sums <= 1 + 1e-9",
        worst_row <= OVERLAP_SUM_SLACK,
        format!("worst excess {worst_row:.3e}"),
    );
    push(
        "column sums <= 1 + 1e-9",
        worst_col <= OVERLAP_SUM_SLACK,
        format!("worst excess {worst_col:.3e}"),
    );

    // rows near the truncation edge (top 20% by index) with visible deficit
    let mut flagged = Vec::new();
    let edge_start = rows - (rows / 5).max(1).min(rows);
    for (j, &dev) in row_dev.iter().enumerate() {
        if j >= edge_start && dev < -1e-6 {
            flagged.push(j);
        }
    }

    // worst deviations in absolute value (deficits included)
    let worst_row_deviation = row_dev
        .iter()
        .fold(0.0f64, |acc, &d| acc.max(d.abs()))
        .max(worst_row);

    ValidationReport {
        checks,
        worst_row_deviation,
        worst_col_deviation: worst_col,
        flagged_edge_rows: flagged,
    }
}

// ---------------------------------------------------------------------------
// serialization

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum OverlapDocument {
    Identity { identity: bool },
    Permutation { permutation: Vec<usize> },
    Dense { dense: Vec<Vec<f64>> },
}

/// Versioned JSON document for an [`OperatorPair`]. Floats round-trip
/// losslessly (shortest-round-trip decimal on write).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairDocument {
    pub format_version: u32,
    pub kind: SpectrumKind,
    pub n: usize,
    pub fiber_dim: usize,
    pub m: f64,
    pub label_plus: String,
    pub label_minus: String,
    pub values_plus: Vec<f64>,
    pub values_minus: Vec<f64>,
    overlap: OverlapDocument,
    #[serde(default)]
    pub meta: serde_json::Map<String, serde_json::Value>,
}

/// Serializes a pair to the versioned JSON document.
pub fn to_document(pair: &OperatorPair, meta: serde_json::Map<String, serde_json::Value>) -> PairDocument {
    let overlap = match &pair.overlap {
        OverlapMatrix::Identity { .. } => OverlapDocument::Identity { identity: true },
        OverlapMatrix::Permutation { column_of } => OverlapDocument::Permutation {
            permutation: column_of.clone(),
        },
        OverlapMatrix::Dense { rows, cols, entries } => OverlapDocument::Dense {
            dense: (0..*rows)
                .map(|j| entries[j * cols..(j + 1) * cols].to_vec())
                .collect(),
        },
    };
    PairDocument {
        format_version: FORMAT_VERSION,
        kind: pair.kind(),
        n: pair.plus.n,
        fiber_dim: pair.plus.fiber_dim,
        m: pair.mass,
        label_plus: pair.plus.label.clone(),
        label_minus: pair.minus.label.clone(),
        values_plus: pair.plus.values.clone(),
        values_minus: pair.minus.values.clone(),
        overlap,
        meta,
    }
}

/// Rebuilds the pair from a document.
pub fn from_document(doc: &PairDocument) -> Result<OperatorPair> {
    if doc.format_version != FORMAT_VERSION {
        return Err(Error::Serialization(format!(
            "unsupported format_version {}",
            doc.format_version
        )));
    }
    let plus = Spectrum::new(
        doc.kind,
        doc.values_plus.clone(),
        doc.n,
        doc.fiber_dim,
        doc.label_plus.clone(),
    )?;
    let minus = Spectrum::new(
        doc.kind,
        doc.values_minus.clone(),
        doc.n,
        doc.fiber_dim,
        doc.label_minus.clone(),
    )?;
    let overlap = match &doc.overlap {
        OverlapDocument::Identity { identity } => {
            if !identity {
                return Err(Error::Serialization("overlap.identity must be true".into()));
            }
            if doc.values_plus.len() != doc.values_minus.len() {
                return Err(Error::Serialization(
                    "identity overlap requires equal spectrum lengths".into(),
                ));
            }
            OverlapMatrix::identity(doc.values_plus.len())
        }
        OverlapDocument::Permutation { permutation } => OverlapMatrix::Permutation {
            column_of: permutation.clone(),
        },
        OverlapDocument::Dense { dense } => {
            let rows = dense.len();
            let cols = dense.first().map_or(0, Vec::len);
            if dense.iter().any(|r| r.len() != cols) {
                return Err(Error::Serialization("ragged dense overlap".into()));
            }
            OverlapMatrix::dense(rows, cols, dense.concat())?
        }
    };
    OperatorPair::new(minus, plus, overlap, doc.m)
}

/// JSON text for a pair (pretty-printed, stable field order).
pub fn to_json(pair: &OperatorPair, meta: serde_json::Map<String, serde_json::Value>) -> String {
    serde_json::to_string_pretty(&to_document(pair, meta)).expect("document serialization")
}

/// Parses JSON text back into a pair.
pub fn from_json(text: &str) -> Result<OperatorPair> {
    let doc: PairDocument =
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
    from_document(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_pair() -> OperatorPair {
        let minus = Spectrum::new(SpectrumKind::Laplace, vec![0.0, 1.0, 4.0], 1, 1, "minus").unwrap();
        let plus = Spectrum::new(SpectrumKind::Laplace, vec![1.0, 2.0, 5.0], 1, 1, "plus").unwrap();
        OperatorPair::new(minus, plus, OverlapMatrix::identity(3), 1.0).unwrap()
    }

    #[test]
    fn omega_derivation() {
        let p = small_pair();
        assert_eq!(p.omega_minus()[0], 1.0);
        assert!((p.omega_plus()[2] - 6.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_mass_and_shapes() {
        let minus = Spectrum::new(SpectrumKind::Laplace, vec![0.0, 1.0], 1, 1, "a").unwrap();
        let plus = Spectrum::new(SpectrumKind::Laplace, vec![0.0, 1.0], 1, 1, "b").unwrap();
        assert!(OperatorPair::new(minus.clone(), plus.clone(), OverlapMatrix::identity(2), 0.0).is_err());
        assert!(OperatorPair::new(minus, plus, OverlapMatrix::identity(3), 1.0).is_err());
    }

    #[test]
    fn validate_flags_constructed_violation() {
        let minus = Spectrum::new(SpectrumKind::Laplace, vec![0.0, 1.0], 1, 1, "a").unwrap();
        let plus = Spectrum::new(SpectrumKind::Laplace, vec![0.0, 1.0], 1, 1, "b").unwrap();
        let overlap = OverlapMatrix::dense(2, 2, vec![1.0, 0.5, 0.0, 1.0]).unwrap();
        let pair = OperatorPair::new(minus, plus, overlap, 1.0).unwrap();
        let report = validate(&pair);
        assert!(!report.passed(), "row sum 1.5 must be flagged:\n{report}");
        assert!(report.worst_row_deviation > 0.4);
    }

    #[test]
    fn validate_passes_identity() {
        let report = validate(&small_pair());
        assert!(report.passed(), "{report}");
        assert_eq!(report.worst_row_deviation, 0.0);
    }

    #[test]
    fn swap_is_involutive() {
        let p = small_pair();
        let q = p.swapped().swapped();
        assert_eq!(p.plus.values, q.plus.values);
        assert_eq!(p.minus.values, q.minus.values);
    }

    #[test]
    fn permutation_transpose_roundtrip() {
        let p = OverlapMatrix::Permutation {
            column_of: vec![2, 0, 1],
        };
        let t = p.transposed().transposed();
        assert_eq!(p, t);
        assert_eq!(p.entry(0, 2), 1.0);
        assert_eq!(p.entry(0, 0), 0.0);
    }

    #[test]
    fn json_roundtrip_identity_pair() {
        let p = small_pair();
        let text = to_json(&p, serde_json::Map::new());
        let q = from_json(&text).unwrap();
        assert_eq!(p.plus.values, q.plus.values);
        assert_eq!(p.minus.values, q.minus.values);
        assert_eq!(p.mass, q.mass);
        assert!(q.overlap.is_identity());
    }

    proptest! {
        #[test]
        fn json_roundtrip_is_bit_lossless(
            raw in proptest::collection::vec(-1.0e3f64..1.0e3, 1..12),
            mass in 0.1f64..10.0,
        ) {
            let mut values = raw;
            values.sort_by(f64::total_cmp);
            let k = values.len();
            let minus = Spectrum::new(SpectrumKind::Laplace, values.clone(), 1, 1, "m").unwrap();
            let plus = Spectrum::new(SpectrumKind::Laplace, values.iter().map(|v| v + 0.25).collect(), 1, 1, "p").unwrap();
            // skip cases where omega^2 would be nonpositive
            prop_assume!(values[0] + mass * mass > 0.0);
            let pair = OperatorPair::new(minus, plus, OverlapMatrix::identity(k), mass).unwrap();
            let text = to_json(&pair, serde_json::Map::new());
            let back = from_json(&text).unwrap();
            for (a, b) in pair.minus.values.iter().zip(&back.minus.values) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
            for (a, b) in pair.plus.values.iter().zip(&back.plus.values) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
            prop_assert_eq!(pair.mass.to_bits(), back.mass.to_bits());
        }
    }
}
