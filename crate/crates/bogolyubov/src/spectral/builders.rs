//! Model families with exactly known spectral data: flat-torus commuting
//! pairs, Schrodinger operators on the circle diagonalized in a plane-wave
//! basis, circle Dirac pairs (scale and anticommuting-shift variants), and
//! plain constant shifts.

use super::{GeometryPair, OperatorPair, OverlapMatrix, Spectrum, SpectrumKind};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Sorts `values` ascending by `key`, stable in the original index, and
/// returns (sorted values, permutation from sorted position to old index).
fn sorted_with_permutation(values: &[f64], key: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        key(values[a])
            .total_cmp(&key(values[b]))
            .then(a.cmp(&b))
    });
    let sorted = idx.iter().map(|&i| values[i]).collect();
    (sorted, idx)
}

fn permutation_overlap(perm_minus: &[usize], perm_plus: &[usize]) -> OverlapMatrix {
    // column_of[j] = sorted-plus position of the basis mode behind sorted-minus row j
    let mut plus_pos = vec![0usize; perm_plus.len()];
    for (pos, &orig) in perm_plus.iter().enumerate() {
        plus_pos[orig] = pos;
    }
    let column_of: Vec<usize> = perm_minus.iter().map(|&orig| plus_pos[orig]).collect();
    if column_of.iter().enumerate().all(|(j, &k)| j == k) {
        OverlapMatrix::identity(column_of.len())
    } else {
        OverlapMatrix::Permutation { column_of }
    }
}

/// Integer lattice points k in Z^n with |k_i| <= cutoff, in lexicographic
/// order.
fn lattice(n: usize, cutoff: i64) -> Vec<Vec<i64>> {
    let mut points = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(points.len() * (2 * cutoff as usize + 1));
        for p in &points {
            for k in -cutoff..=cutoff {
                let mut q = p.clone();
                q.push(k);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

/// Commuting constant-coefficient pair on the flat n-torus:
/// lambda_k^{+-} = g_{+-}^{ij} k_i k_j + q_{+-} over the truncated integer
/// lattice, shared plane-wave eigenbasis. The associated geometry carries
/// the coordinate volume (2 pi)^n.
pub fn build_torus_pair(
    n: usize,
    g_plus: DMatrix<f64>,
    g_minus: DMatrix<f64>,
    q_plus: f64,
    q_minus: f64,
    cutoff: usize,
    m: f64,
) -> Result<(OperatorPair, GeometryPair)> {
    if cutoff == 0 {
        return Err(Error::InvalidInput("cutoff must be >= 1".into()));
    }
    let volume = (2.0 * std::f64::consts::PI).powi(n as i32);
    let geometry = GeometryPair::new(n, g_plus.clone(), g_minus.clone(), volume, 1)?;

    let quad = |g: &DMatrix<f64>, k: &[i64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += g[(i, j)] * (k[i] * k[j]) as f64;
            }
        }
        s
    };
    let points = lattice(n, cutoff as i64);
    let lam_plus: Vec<f64> = points.iter().map(|k| quad(&g_plus, k) + q_plus).collect();
    let lam_minus: Vec<f64> = points.iter().map(|k| quad(&g_minus, k) + q_minus).collect();

    let (vp, perm_p) = sorted_with_permutation(&lam_plus, |v| v);
    let (vm, perm_m) = sorted_with_permutation(&lam_minus, |v| v);
    let overlap = permutation_overlap(&perm_m, &perm_p);

    let plus = Spectrum::new(SpectrumKind::Laplace, vp, n, 1, "torus+")?;
    let minus = Spectrum::new(SpectrumKind::Laplace, vm, n, 1, "torus-")?;
    let pair = OperatorPair::new(minus, plus, overlap, m)?;
    Ok((pair, geometry))
}

/// Cosine-coefficient potential on the unit-circumference-2pi circle:
/// V(x) = v[0] + sum_{c>=1} 2 v[c] cos(c x).
#[derive(Debug, Clone, Default)]
pub struct FourierPotential(pub Vec<f64>);

impl FourierPotential {
    fn max_index(&self) -> usize {
        self.0
            .iter()
            .rposition(|&v| v != 0.0)
            .unwrap_or(0)
    }

    fn coefficient(&self, c: usize) -> f64 {
        self.0.get(c).copied().unwrap_or(0.0)
    }

    fn is_constant(&self) -> bool {
        self.max_index() == 0
    }
}

/// Schrodinger pair H_{+-} = -d^2/dx^2 + V_{+-}(x) on the circle, both
/// diagonalized in the plane-wave basis e^{ikx}.
///
/// The diagonalization runs in an enlarged basis (|k| <= cutoff + margin)
/// and keeps the lowest 2 cutoff + 1 eigenpairs per side, so the stored
/// overlap matrix carries a genuine truncation deficit: interior rows sum to
/// 1 up to the leakage into the discarded high modes, edge rows fall short
/// the most. Constant potentials shortcut to exact plane-wave data.
pub fn build_schrodinger_circle_pair(
    v_plus: &FourierPotential,
    v_minus: &FourierPotential,
    cutoff: usize,
    m: f64,
) -> Result<OperatorPair> {
    let max_idx = v_plus.max_index().max(v_minus.max_index());
    if cutoff < max_idx + 1 {
        return Err(Error::InvalidInput(format!(
            "cutoff {cutoff} too small for Fourier index {max_idx} (need cutoff >= max index + 1)"
        )));
    }

    if v_plus.is_constant() && v_minus.is_constant() {
        // exact commuting case: plane waves stay eigensections
        let ks: Vec<i64> = (-(cutoff as i64)..=cutoff as i64).collect();
        let lam = |c: f64| -> Vec<f64> { ks.iter().map(|&k| (k * k) as f64 + c).collect() };
        let lp = lam(v_plus.coefficient(0));
        let lm = lam(v_minus.coefficient(0));
        let (vp, perm_p) = sorted_with_permutation(&lp, |v| v);
        let (vm, perm_m) = sorted_with_permutation(&lm, |v| v);
        let overlap = permutation_overlap(&perm_m, &perm_p);
        let plus = Spectrum::new(SpectrumKind::Laplace, vp, 1, 1, "schrodinger+")?;
        let minus = Spectrum::new(SpectrumKind::Laplace, vm, 1, 1, "schrodinger-")?;
        return OperatorPair::new(minus, plus, overlap, m);
    }

    let margin = (cutoff / 2).max(8);
    let kb = (cutoff + margin) as i64;
    let dim = (2 * kb + 1) as usize;
    let keep = 2 * cutoff + 1;

    let assemble = |v: &FourierPotential| -> DMatrix<f64> {
        let mut h = DMatrix::zeros(dim, dim);
        for (i, ki) in (-kb..=kb).enumerate() {
            for (j, kj) in (-kb..=kb).enumerate() {
                let c = (ki - kj).unsigned_abs() as usize;
                let mut val = v.coefficient(c);
                if i == j {
                    val += (ki * ki) as f64;
                }
                h[(i, j)] = val;
            }
        }
        h
    };

    let solve = |h: DMatrix<f64>| -> Result<(Vec<f64>, DMatrix<f64>)> {
        let eig = h.symmetric_eigen();
        let mut idx: Vec<usize> = (0..dim).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
        let values: Vec<f64> = idx.iter().take(keep).map(|&i| eig.eigenvalues[i]).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("eigendecomposition produced non-finite values".into()));
        }
        let mut vectors = DMatrix::zeros(dim, keep);
        for (col, &i) in idx.iter().take(keep).enumerate() {
            vectors.set_column(col, &eig.eigenvectors.column(i));
        }
        Ok((values, vectors))
    };

    let (lam_plus, vec_plus) = solve(assemble(v_plus))?;
    let (lam_minus, vec_minus) = solve(assemble(v_minus))?;

    // O_{jk} = (u_j^- . u_k^+)^2 over the shared enlarged basis
    let inner = vec_minus.transpose() * vec_plus;
    let mut entries = Vec::with_capacity(keep * keep);
    for j in 0..keep {
        for k in 0..keep {
            let c = inner[(j, k)];
            entries.push(c * c);
        }
    }
    let overlap = OverlapMatrix::dense(keep, keep, entries)?;

    let plus = Spectrum::new(SpectrumKind::Laplace, lam_plus, 1, 1, "schrodinger+")?;
    let minus = Spectrum::new(SpectrumKind::Laplace, lam_minus, 1, 1, "schrodinger-")?;
    OperatorPair::new(minus, plus, overlap, m)
}

/// Circle Dirac pair on a 2-dimensional fiber.
///
/// With `shift` = 0 the two operators are rescalings of the same Dirac
/// operator (mu_k = {a, b} kappa over integer or half-integer momenta, each
/// with the twofold fiber multiplicity, identity overlap). A nonzero shift
/// adds an endomorphism anticommuting with the minus operator, which
/// requires equal scales; eigenvalues pair as
/// mu^+ = sign(mu^-) sqrt((mu^-)^2 + shift^2) with explicit 2x2 mixing.
pub fn build_dirac_circle_pair(
    scale_plus: f64,
    scale_minus: f64,
    shift: f64,
    antiperiodic: bool,
    cutoff: usize,
    m: f64,
) -> Result<(OperatorPair, GeometryPair)> {
    if !(scale_plus > 0.0 && scale_minus > 0.0) {
        return Err(Error::InvalidInput("scales must be positive".into()));
    }
    if cutoff == 0 {
        return Err(Error::InvalidInput("cutoff must be >= 1".into()));
    }
    if shift != 0.0 && (scale_plus - scale_minus).abs() > 1e-15 {
        return Err(Error::Unsupported(
            "anticommuting shift requires equal leading symbols (scale_plus == scale_minus)"
                .into(),
        ));
    }

    let momenta: Vec<f64> = if antiperiodic {
        let mut v = Vec::with_capacity(2 * cutoff);
        for k in 0..cutoff {
            let kappa = k as f64 + 0.5;
            v.push(kappa);
            v.push(-kappa);
        }
        v
    } else {
        (-(cutoff as i64)..=cutoff as i64).map(|k| k as f64).collect()
    };

    let volume = 2.0 * std::f64::consts::PI;
    let geometry = GeometryPair::one_dimensional(scale_plus, scale_minus, volume, 2)?;

    if shift == 0.0 {
        // basis modes (kappa, sigma) with mu = sigma * scale * kappa
        let mut mu_minus = Vec::with_capacity(2 * momenta.len());
        let mut mu_plus = Vec::with_capacity(2 * momenta.len());
        for &kappa in &momenta {
            for sigma in [1.0, -1.0] {
                mu_minus.push(sigma * scale_minus * kappa);
                mu_plus.push(sigma * scale_plus * kappa);
            }
        }
        let (vm, perm_m) = sorted_with_permutation(&mu_minus, f64::abs);
        let (vp, perm_p) = sorted_with_permutation(&mu_plus, f64::abs);
        let overlap = permutation_overlap(&perm_m, &perm_p);
        let minus = Spectrum::new(SpectrumKind::Dirac, vm, 1, 2, "dirac-")?;
        let plus = Spectrum::new(SpectrumKind::Dirac, vp, 1, 2, "dirac+")?;
        let pair = OperatorPair::new(minus, plus, overlap, m)?;
        return Ok((pair, geometry));
    }

    // shift case: per-momentum 2x2 blocks
    let b = scale_minus;
    let count = 2 * momenta.len();
    let mut mu_minus = Vec::with_capacity(count);
    let mut mu_plus = Vec::with_capacity(count);
    let mut entries = vec![0.0f64; count * count];
    for (blk, &kappa) in momenta.iter().enumerate() {
        let base = 2 * blk;
        let mu = b * kappa;
        let omega = (mu * mu + shift * shift).sqrt();
        mu_minus.push(mu);
        mu_minus.push(-mu);
        mu_plus.push(omega);
        mu_plus.push(-omega);
        // |<(1,0), v_+>|^2 = c2 for +omega, s2 for -omega; rows are the
        // minus eigenvectors (1,0), (0,1)
        let c2 = 0.5 * (1.0 + mu / omega);
        let s2 = 0.5 * (1.0 - mu / omega);
        entries[base * count + base] = c2;
        entries[base * count + base + 1] = s2;
        entries[(base + 1) * count + base] = s2;
        entries[(base + 1) * count + base + 1] = c2;
    }

    let (vm, perm_m) = sorted_with_permutation(&mu_minus, f64::abs);
    let (vp, perm_p) = sorted_with_permutation(&mu_plus, f64::abs);
    let mut sorted_entries = vec![0.0f64; count * count];
    for (j, &oj) in perm_m.iter().enumerate() {
        for (k, &ok) in perm_p.iter().enumerate() {
            sorted_entries[j * count + k] = entries[oj * count + ok];
        }
    }
    let overlap = OverlapMatrix::dense(count, count, sorted_entries)?;
    let minus = Spectrum::new(SpectrumKind::Dirac, vm, 1, 2, "dirac-")?;
    let plus = Spectrum::new(SpectrumKind::Dirac, vp, 1, 2, "dirac+")?;
    let pair = OperatorPair::new(minus, plus, overlap, m)?;
    Ok((pair, geometry))
}

/// Pair differing by a constant: plus = base + m_sq, identity overlap.
pub fn constant_shift_pair(base: &Spectrum, m_sq: f64, m: f64) -> Result<OperatorPair> {
    if base.kind != SpectrumKind::Laplace {
        return Err(Error::KindMismatch {
            expected: "laplace",
            found: base.kind.name(),
        });
    }
    let plus = Spectrum::new(
        base.kind,
        base.values.iter().map(|v| v + m_sq).collect(),
        base.n,
        base.fiber_dim,
        format!("{}+shift", base.label),
    )?;
    OperatorPair::new(
        base.clone(),
        plus,
        OverlapMatrix::identity(base.len()),
        m,
    )
}

/// 1D flat-circle Laplace spectrum k^2 for |k| <= cutoff, for building
/// shift pairs and test fixtures.
pub fn circle_spectrum(cutoff: usize, fiber_dim: usize) -> Spectrum {
    let values: Vec<f64> = {
        let raw: Vec<f64> = (-(cutoff as i64)..=cutoff as i64)
            .map(|k| (k * k) as f64)
            .collect();
        let (sorted, _) = sorted_with_permutation(&raw, |v| v);
        sorted
    };
    Spectrum::new(SpectrumKind::Laplace, values, 1, fiber_dim, "circle").expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::validate;

    fn dm(n: usize, vals: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(n, n, vals)
    }

    #[test]
    fn torus_1d_unit_metrics() {
        let (pair, geom) =
            build_torus_pair(1, dm(1, &[1.0]), dm(1, &[1.0]), 0.0, 0.0, 2, 1.0).unwrap();
        assert_eq!(pair.plus.values, vec![0.0, 1.0, 1.0, 4.0, 4.0]);
        assert_eq!(pair.minus.values, pair.plus.values);
        assert!(pair.overlap.is_identity());
        assert!((geom.volume - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert!(validate(&pair).passed());
    }

    #[test]
    fn torus_1d_scaled_metric() {
        let (pair, _) =
            build_torus_pair(1, dm(1, &[4.0]), dm(1, &[1.0]), 0.0, 0.0, 3, 1.0).unwrap();
        // lambda^+ = 4k^2, lambda^- = k^2, matched mode by mode
        assert!(pair.overlap.is_identity());
        for (lp, lm) in pair.plus.values.iter().zip(&pair.minus.values) {
            assert_eq!(*lp, 4.0 * *lm);
        }
    }

    #[test]
    fn torus_2d_mode_count() {
        let g = dm(2, &[1.0, 0.0, 0.0, 1.0]);
        let (pair, _) = build_torus_pair(2, g.clone(), g, 0.0, 0.0, 3, 1.0).unwrap();
        assert_eq!(pair.plus.len(), 49); // (2*3+1)^2
    }

    #[test]
    fn torus_2d_anisotropic_gives_permutation_overlap() {
        let gp = dm(2, &[5.0, 0.0, 0.0, 1.0]);
        let gm = dm(2, &[1.0, 0.0, 0.0, 5.0]);
        let (pair, _) = build_torus_pair(2, gp, gm, 0.0, 0.0, 2, 1.0).unwrap();
        assert!(pair.overlap.is_structured());
        assert!(!pair.overlap.is_identity());
        // the permutation must biject
        let (rows, _) = pair.overlap.shape();
        let mut seen = vec![false; rows];
        for j in 0..rows {
            let k = pair.overlap.paired_column(j).unwrap();
            assert!(!seen[k]);
            seen[k] = true;
        }
    }

    #[test]
    fn schrodinger_free_is_identity() {
        let zero = FourierPotential(vec![]);
        let pair = build_schrodinger_circle_pair(&zero, &zero, 8, 1.0).unwrap();
        assert!(pair.overlap.is_identity());
        assert_eq!(pair.plus.values[0], 0.0);
        assert_eq!(pair.plus.values[1], 1.0);
        assert_eq!(pair.plus.len(), 17);
    }

    #[test]
    fn schrodinger_constant_shift_exact() {
        let c = FourierPotential(vec![2.5]);
        let zero = FourierPotential(vec![]);
        let pair = build_schrodinger_circle_pair(&c, &zero, 8, 1.0).unwrap();
        assert!(pair.overlap.is_identity());
        for (lp, lm) in pair.plus.values.iter().zip(&pair.minus.values) {
            assert!((lp - (lm + 2.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn schrodinger_cosine_interior_rows_complete() {
        let v = FourierPotential(vec![0.0, 1.0]); // V = 2 cos x
        let zero = FourierPotential(vec![]);
        let pair = build_schrodinger_circle_pair(&v, &zero, 32, 1.0).unwrap();
        // rows with lambda^- = k^2, |k| <= 16 are the first 33 sorted rows
        for j in 0..33 {
            let dev = (pair.overlap.row_sum(j) - 1.0).abs();
            assert!(dev <= 1e-8, "row {j} deviation {dev:e}");
        }
        let report = validate(&pair);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn schrodinger_completeness_improves_with_cutoff() {
        let v = FourierPotential(vec![0.0, 1.0]);
        let zero = FourierPotential(vec![]);
        let interior_dev = |cutoff: usize| -> f64 {
            let pair = build_schrodinger_circle_pair(&v, &zero, cutoff, 1.0).unwrap();
            let interior = cutoff + 1; // rows with |k| <= cutoff/2
            (0..interior)
                .map(|j| (pair.overlap.row_sum(j) - 1.0).abs())
                .fold(0.0, f64::max)
        };
        let d16 = interior_dev(16);
        let d32 = interior_dev(32);
        let d64 = interior_dev(64);
        assert!(d32 <= d16 + 1e-10, "16 -> 32: {d16:e} -> {d32:e}");
        assert!(d64 <= d32 + 1e-10, "32 -> 64: {d32:e} -> {d64:e}");
    }

    #[test]
    fn schrodinger_rejects_small_cutoff() {
        let v = FourierPotential(vec![0.0, 0.0, 0.0, 1.0]);
        let zero = FourierPotential(vec![]);
        assert!(build_schrodinger_circle_pair(&v, &zero, 3, 1.0).is_err());
    }

    #[test]
    fn dirac_scale_pair_basics() {
        let (pair, _) = build_dirac_circle_pair(1.0, 1.0, 0.0, false, 2, 1.0).unwrap();
        assert_eq!(pair.plus.values, pair.minus.values);
        assert!(pair.overlap.is_identity());
        // values ordered by |mu|, twofold multiplicity
        assert_eq!(pair.plus.values.len(), 10);
    }

    #[test]
    fn dirac_antiperiodic_momenta() {
        let (pair, _) = build_dirac_circle_pair(1.0, 1.0, 0.0, true, 2, 1.0).unwrap();
        let mut mags: Vec<f64> = pair.plus.values.iter().map(|v| v.abs()).collect();
        mags.dedup();
        assert_eq!(mags, vec![0.5, 1.5]);
        // each of +-1/2, +-3/2 with fiber multiplicity 2
        assert_eq!(pair.plus.values.len(), 8);
        let count_half = pair
            .plus
            .values
            .iter()
            .filter(|&&v| (v - 0.5).abs() < 1e-15)
            .count();
        assert_eq!(count_half, 2);
    }

    #[test]
    fn dirac_shift_squares_to_constant_shift() {
        let (pair, _) = build_dirac_circle_pair(1.0, 1.0, 1.0, false, 4, 1.0).unwrap();
        // H_+ eigenvalues = k^2 + 1
        for (mp, mm) in pair.plus.values.iter().zip(&pair.minus.values) {
            assert!((mp * mp - (mm * mm + 1.0)).abs() < 1e-12);
        }
        // rows of the mixing overlap still sum to one
        let (rows, _) = pair.overlap.shape();
        for j in 0..rows {
            assert!((pair.overlap.row_sum(j) - 1.0).abs() < 1e-12);
        }
        assert!(validate(&pair).passed());
    }

    #[test]
    fn dirac_shift_with_unequal_scales_rejected() {
        let err = build_dirac_circle_pair(2.0, 1.0, 1.0, false, 4, 1.0);
        assert!(matches!(err, Err(Error::Unsupported(_))));
    }

    #[test]
    fn constant_shift_examples() {
        let base = Spectrum::new(SpectrumKind::Laplace, vec![0.0, 1.0, 4.0], 1, 1, "b").unwrap();
        let pair = constant_shift_pair(&base, 1.0, 1.0).unwrap();
        assert_eq!(pair.plus.values, vec![1.0, 2.0, 5.0]);
        let equal = constant_shift_pair(&base, 0.0, 1.0).unwrap();
        assert_eq!(equal.plus.values, equal.minus.values);
    }

    #[test]
    fn dirac_squares_match_laplace_ordering() {
        // sorting mu^2 of any dirac spectrum must be exactly the lambda list
        let (pair, _) = build_dirac_circle_pair(2.0, 1.0, 0.0, false, 5, 1.0).unwrap();
        let mut squared: Vec<f64> = pair.plus.values.iter().map(|v| v * v).collect();
        squared.sort_by(f64::total_cmp);
        let lambdas: Vec<f64> = pair.plus.lambdas().collect();
        assert_eq!(squared, lambdas);
    }
}
