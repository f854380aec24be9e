//! Flat sweep records shared by the model sweeps and the CLI emitters.

/// One row of a parameter sweep. Fields not applicable to the producing
/// model are `None` and render as empty CSV cells.
#[derive(Clone, Debug)]
pub struct SweepRecord {
    pub model: &'static str,
    pub regime: Option<&'static str>,
    pub m: Option<f64>,
    pub phi: Option<f64>,
    pub n_label: Option<String>,
    pub epsilon: Option<f64>,
    pub omega: Option<f64>,
    pub r: Option<f64>,
    pub s: Option<f64>,
    /// The swept coordinate: x for the pseudo-Hermitian model, θ for the
    /// PT model.
    pub x_or_theta: f64,
    pub f_generic: Option<f64>,
    pub f_closed_form: Option<f64>,
    pub f_projected: Option<f64>,
    /// |closed form − generic| / max(1, |generic|).
    pub residual: Option<f64>,
}

impl SweepRecord {
    pub fn empty(model: &'static str, x_or_theta: f64) -> Self {
        Self {
            model,
            regime: None,
            m: None,
            phi: None,
            n_label: None,
            epsilon: None,
            omega: None,
            r: None,
            s: None,
            x_or_theta,
            f_generic: None,
            f_closed_form: None,
            f_projected: None,
            residual: None,
        }
    }
}

/// Relative residual against the generic-pipeline value.
pub fn relative_residual(closed_form: f64, generic: f64) -> f64 {
    (closed_form - generic).abs() / generic.abs().max(1.0)
}

/// Uniform grid of `points` values over [lo, hi], inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (points as f64 - 1.0);
    (0..points).map(|i| lo + step * i as f64).collect()
}
