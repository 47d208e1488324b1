//! Gauss-Kronrod 15(7) panel rule and the adaptive driver on a finite
//! interval. Constants are the classical QUADPACK dqk15 nodes and weights.

/// Kronrod abscissae (positive half, descending), nodes 1,3,5 are the G7 set.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One evaluated panel. `aux` carries a secondary quantity integrated with
/// the same Kronrod weights (used to propagate inner error estimates through
/// iterated 2D integration); it plays no role in refinement decisions.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub aux: f64,
    pub error: f64,
}

/// Applies the 15-point rule to `f` on [a, b]. `f` returns (value, aux).
pub(crate) fn gk15<F: Fn(f64) -> (f64, f64)>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let (fc, fc_aux) = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut aux = WGK[7] * fc_aux;
    let mut gauss = WG[3] * fc;
    let mut resabs = kronrod.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for (i, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let (f1, a1) = f(center - dx);
        let (f2, a2) = f(center + dx);
        fv[i] = f1;
        fv[14 - i] = f2;
        kronrod += WGK[i] * (f1 + f2);
        aux += WGK[i] * (a1 + a2);
        resabs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for (i, &w) in WGK.iter().enumerate().take(7) {
        resasc += w * ((fv[i] - mean).abs() + (fv[14 - i] - mean).abs());
    }

    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let raw = ((kronrod - gauss) * half).abs();

    // QUADPACK error rescaling
    let mut error = raw;
    if resasc != 0.0 && raw != 0.0 {
        let scale = (200.0 * raw / resasc).powf(1.5);
        error = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }

    Panel {
        a,
        b,
        value,
        aux: aux * half,
        error,
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct AdaptiveOutcome {
    pub value: f64,
    pub aux: f64,
    pub error: f64,
    pub evaluations: u64,
    pub converged: bool,
}

/// Bisect-the-worst-panel driver. Refinement order and the final reduction
/// are fixed (worst error with left-endpoint tie-break; panels summed in
/// interval order), so identical inputs produce bit-identical results.
pub(crate) fn adaptive<F: Fn(f64) -> (f64, f64)>(
    f: &F,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> AdaptiveOutcome {
    let mut panels: Vec<Panel> = breakpoints
        .windows(2)
        .map(|w| gk15(f, w[0], w[1]))
        .collect();
    let mut evals = 15 * panels.len() as u64;

    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        let target = abs_tol.max(rel_tol * total.abs());
        if err <= target || panels.len() >= max_panels {
            let converged = err <= target;
            // deterministic reduction: sorted by interval start
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
            let value = crate::sum::pairwise_sum(&values);
            let aux = panels.iter().map(|p| p.aux).sum();
            return AdaptiveOutcome {
                value,
                aux,
                error: err,
                evaluations: evals,
                converged,
            };
        }
        // worst panel, ties broken toward the left
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate().skip(1) {
            let w = &panels[worst];
            if p.error > w.error || (p.error == w.error && p.a < w.a) {
                worst = i;
            }
        }
        let Panel { a, b, .. } = panels[worst];
        let mid = 0.5 * (a + b);
        if !(a < mid && mid < b) {
            // interval exhausted at machine resolution; freeze it
            panels[worst].error = 0.0;
            continue;
        }
        panels[worst] = gk15(f, a, mid);
        panels.push(gk15(f, mid, b));
        evals += 30;
    }
}
