//! Cosine spectral discretization of the Neumann Laplacian on boxes.
//!
//! On an interval (0, L) the operator -Δ with homogeneous Neumann data has
//! eigenvalues γ_j = (jπ/L)² and orthonormal eigenfunctions
//!
//! ```text
//! e_0(x) = 1/√L,      e_j(x) = √(2/L) · cos(jπx/L)   (j ≥ 1).
//! ```
//!
//! On a rectangle the eigenfunctions are tensor products of the axis families
//! and the eigenvalues the sums of the axis parts.  Modes are stored sorted by
//! eigenvalue (ties broken lexicographically by multi-index), so the constant
//! mode is always first and truncating to a lower per-axis band is a stable
//! filter on the mode list.
//!
//! Quadrature is the composite midpoint rule with Q equispaced nodes per axis,
//! x_q = (q + ½)L/Q, w_q = L/Q.  For the cosine family this rule is exact on
//! every product e_i·e_j with i + j < 2Q, because Σ_q cos(mπ(q+½)/Q) vanishes
//! for 0 < m < 2Q.  The floor Q ≥ 2(n+1) therefore reproduces the Gram and
//! stiffness relations to roundoff, and the default Q = 4(n+1) additionally
//! de-aliases quartic products of band-limited fields (4n < 2Q).

use thiserror::Error;

/// Relative tolerance on the mean when inverting the Laplacian on the
/// zero-mean subspace: |mean| must not exceed this multiple of ‖field‖_H.
pub const ZERO_MEAN_REL_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("domain side lengths must be positive and finite, got {0}")]
    BadDomain(f64),
    #[error("cutoff {cutoff} needs at least {floor} quadrature points per axis, got {got}")]
    QuadTooCoarse { cutoff: usize, floor: usize, got: usize },
    #[error("projection band {band} exceeds the basis cutoff {cutoff}")]
    BandTooLarge { band: usize, cutoff: usize },
    #[error("coefficient vector has length {got}, basis has {expected} modes")]
    CoeffLength { expected: usize, got: usize },
    #[error("node-value vector has length {got}, basis has {expected} nodes")]
    NodeLength { expected: usize, got: usize },
    #[error(
        "inverse Laplacian requires a zero-mean field: |mean| = {mean:.3e} exceeds \
         {tol:.0e} x the field norm {norm:.3e}"
    )]
    NonzeroMean { mean: f64, norm: f64, tol: f64 },
}

/// Axis-aligned box domain: an interval (0, L) or a rectangle (0, L₁)×(0, L₂).
#[derive(Clone, Debug, PartialEq)]
pub enum BoxDomain {
    Interval { length: f64 },
    Rectangle { lengths: [f64; 2] },
}

impl BoxDomain {
    pub fn interval(length: f64) -> Result<Self, BasisError> {
        check_length(length)?;
        Ok(BoxDomain::Interval { length })
    }

    pub fn rectangle(lx: f64, ly: f64) -> Result<Self, BasisError> {
        check_length(lx)?;
        check_length(ly)?;
        Ok(BoxDomain::Rectangle { lengths: [lx, ly] })
    }

    pub fn dim(&self) -> usize {
        match self {
            BoxDomain::Interval { .. } => 1,
            BoxDomain::Rectangle { .. } => 2,
        }
    }

    /// Side lengths; 1 entry for an interval, 2 for a rectangle.
    pub fn lengths(&self) -> Vec<f64> {
        match self {
            BoxDomain::Interval { length } => vec![*length],
            BoxDomain::Rectangle { lengths } => lengths.to_vec(),
        }
    }

    /// |Ω|: length of the interval or area of the rectangle.
    pub fn volume(&self) -> f64 {
        self.lengths().iter().product()
    }
}

fn check_length(l: f64) -> Result<(), BasisError> {
    if l.is_finite() && l > 0.0 {
        Ok(())
    } else {
        Err(BasisError::BadDomain(l))
    }
}

/// Coefficient vector aligned with a [`BasisDescriptor`]'s sorted mode list.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    pub coeffs: Vec<f64>,
}

impl SpectralField {
    pub fn zeros(num_modes: usize) -> Self {
        SpectralField { coeffs: vec![0.0; num_modes] }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        SpectralField { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Norms of a spectral field, all evaluated exactly from coefficients.
///
/// `h` is the L² norm, `v_semi` = ‖∇v‖, `w_semi` = ‖Δv‖, and `v_star` the
/// dual-space-equivalent norm (Σ_{j≥1} c_j²/γ_j + mean²)^½.
#[derive(Clone, Copy, Debug)]
pub struct FieldNorms {
    pub h: f64,
    pub v_semi: f64,
    pub w_semi: f64,
    pub v_star: f64,
    pub mean: f64,
}

impl FieldNorms {
    /// Full H¹ norm (‖v‖² + ‖∇v‖²)^½.
    pub fn v(&self) -> f64 {
        self.h.hypot(self.v_semi)
    }
}

/// Truncated Neumann cosine basis with its midpoint quadrature.
#[derive(Clone, Debug)]
pub struct BasisDescriptor {
    domain: BoxDomain,
    cutoff: usize,
    quad_points: usize,
    /// Multi-indices sorted by eigenvalue then lexicographically; 1D uses
    /// `[j, 0]`.
    modes: Vec<[usize; 2]>,
    eigenvalues: Vec<f64>,
    /// Per-axis eigenfunction tables, `tab[axis][j * quad_points + q]`.
    tab: Vec<Vec<f64>>,
    axis_weights: Vec<f64>,
    nodes: Vec<[f64; 2]>,
}

/// Build the basis; `quad_points` defaults to 4(n+1) per axis and may not go
/// below the exactness floor 2(n+1).
pub fn build_basis(
    domain: &BoxDomain,
    cutoff: usize,
    quad_points: Option<usize>,
) -> Result<BasisDescriptor, BasisError> {
    for l in domain.lengths() {
        check_length(l)?;
    }
    let floor = 2 * (cutoff + 1);
    let q = quad_points.unwrap_or(4 * (cutoff + 1));
    if q < floor {
        return Err(BasisError::QuadTooCoarse { cutoff, floor, got: q });
    }

    let lengths = domain.lengths();
    let dim = domain.dim();
    let np1 = cutoff + 1;

    let mut tab = Vec::with_capacity(dim);
    let mut axis_weights = Vec::with_capacity(dim);
    let mut axis_nodes: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for &l in &lengths {
        let mut t = vec![0.0; np1 * q];
        for qi in 0..q {
            t[qi] = 1.0 / l.sqrt();
        }
        let norm = (2.0 / l).sqrt();
        for j in 1..np1 {
            for qi in 0..q {
                // x_q/L = (q + 1/2)/Q, so the argument is formed without L.
                let arg = (j as f64) * std::f64::consts::PI * (qi as f64 + 0.5) / q as f64;
                t[j * q + qi] = norm * arg.cos();
            }
        }
        tab.push(t);
        axis_weights.push(l / q as f64);
        axis_nodes.push((0..q).map(|qi| (qi as f64 + 0.5) * l / q as f64).collect());
    }

    let axis_eigs: Vec<Vec<f64>> = lengths
        .iter()
        .map(|&l| {
            (0..np1)
                .map(|j| {
                    let f = j as f64 * std::f64::consts::PI / l;
                    f * f
                })
                .collect()
        })
        .collect();

    let mut modes: Vec<[usize; 2]> = Vec::new();
    if dim == 1 {
        for j in 0..np1 {
            modes.push([j, 0]);
        }
    } else {
        for j1 in 0..np1 {
            for j2 in 0..np1 {
                modes.push([j1, j2]);
            }
        }
    }
    let eig_of = |m: &[usize; 2]| -> f64 {
        let mut g = axis_eigs[0][m[0]];
        if dim == 2 {
            g += axis_eigs[1][m[1]];
        }
        g
    };
    modes.sort_by(|a, b| {
        eig_of(a)
            .partial_cmp(&eig_of(b))
            .expect("eigenvalues are finite")
            .then(a.cmp(b))
    });
    let eigenvalues: Vec<f64> = modes.iter().map(|m| eig_of(m)).collect();

    let mut nodes = Vec::new();
    if dim == 1 {
        for &x in &axis_nodes[0] {
            nodes.push([x, 0.0]);
        }
    } else {
        for &x in &axis_nodes[0] {
            for &y in &axis_nodes[1] {
                nodes.push([x, y]);
            }
        }
    }

    Ok(BasisDescriptor {
        domain: domain.clone(),
        cutoff,
        quad_points: q,
        modes,
        eigenvalues,
        tab,
        axis_weights,
        nodes,
    })
}

impl BasisDescriptor {
    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn quad_points(&self) -> usize {
        self.quad_points
    }

    pub fn modes(&self) -> &[[usize; 2]] {
        &self.modes
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.quad_points.pow(self.domain.dim() as u32)
    }

    /// Quadrature node coordinates in row-major (x outer, y inner) order; the
    /// second coordinate is 0 on intervals.
    pub fn node_coords(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    /// Uniform weight of one tensor quadrature node, |Ω|/Q^dim.
    pub fn node_weight(&self) -> f64 {
        self.axis_weights.iter().product()
    }

    fn check_coeffs(&self, field: &SpectralField) -> Result<(), BasisError> {
        if field.len() != self.num_modes() {
            return Err(BasisError::CoeffLength { expected: self.num_modes(), got: field.len() });
        }
        Ok(())
    }

    /// Quadrature projection of node values onto the basis:
    /// c_j = Σ_q w_q · v(x_q) · e_j(x_q).
    pub fn analyze(&self, node_values: &[f64]) -> Result<SpectralField, BasisError> {
        if node_values.len() != self.num_nodes() {
            return Err(BasisError::NodeLength {
                expected: self.num_nodes(),
                got: node_values.len(),
            });
        }
        let q = self.quad_points;
        let np1 = self.cutoff + 1;
        let coeffs = if self.domain.dim() == 1 {
            let w = self.axis_weights[0];
            let t = &self.tab[0];
            self.modes
                .iter()
                .map(|m| {
                    let row = &t[m[0] * q..(m[0] + 1) * q];
                    w * dot(row, node_values)
                })
                .collect()
        } else {
            // Contract the y axis first, then the x axis.
            let (wx, wy) = (self.axis_weights[0], self.axis_weights[1]);
            let (tx, ty) = (&self.tab[0], &self.tab[1]);
            let mut partial = vec![0.0; q * np1]; // partial[qx * np1 + j2]
            for qx in 0..q {
                let col = &node_values[qx * q..(qx + 1) * q];
                for j2 in 0..np1 {
                    partial[qx * np1 + j2] = wy * dot(&ty[j2 * q..(j2 + 1) * q], col);
                }
            }
            self.modes
                .iter()
                .map(|m| {
                    let (j1, j2) = (m[0], m[1]);
                    let mut acc = 0.0;
                    for qx in 0..q {
                        acc += tx[j1 * q + qx] * partial[qx * np1 + j2];
                    }
                    wx * acc
                })
                .collect()
        };
        Ok(SpectralField::from_coeffs(coeffs))
    }

    /// Evaluate a coefficient vector at the quadrature nodes:
    /// v(x_q) = Σ_j c_j · e_j(x_q).
    pub fn synthesize(&self, field: &SpectralField) -> Result<Vec<f64>, BasisError> {
        self.check_coeffs(field)?;
        let q = self.quad_points;
        let np1 = self.cutoff + 1;
        if self.domain.dim() == 1 {
            let t = &self.tab[0];
            let mut values = vec![0.0; q];
            for (m, &c) in self.modes.iter().zip(&field.coeffs) {
                if c != 0.0 {
                    let row = &t[m[0] * q..(m[0] + 1) * q];
                    for (v, &e) in values.iter_mut().zip(row) {
                        *v += c * e;
                    }
                }
            }
            Ok(values)
        } else {
            let (tx, ty) = (&self.tab[0], &self.tab[1]);
            // Scatter into the tensor layout, contract y, then x.
            let mut tensor = vec![0.0; np1 * np1]; // tensor[j1 * np1 + j2]
            for (m, &c) in self.modes.iter().zip(&field.coeffs) {
                tensor[m[0] * np1 + m[1]] = c;
            }
            let mut partial = vec![0.0; np1 * q]; // partial[j1 * q + qy]
            for j1 in 0..np1 {
                for j2 in 0..np1 {
                    let c = tensor[j1 * np1 + j2];
                    if c != 0.0 {
                        let row = &ty[j2 * q..(j2 + 1) * q];
                        let out = &mut partial[j1 * q..(j1 + 1) * q];
                        for (v, &e) in out.iter_mut().zip(row) {
                            *v += c * e;
                        }
                    }
                }
            }
            let mut values = vec![0.0; q * q];
            for qx in 0..q {
                for j1 in 0..np1 {
                    let e = tx[j1 * q + qx];
                    if e != 0.0 {
                        let row = &partial[j1 * q..(j1 + 1) * q];
                        let out = &mut values[qx * q..(qx + 1) * q];
                        for (v, &p) in out.iter_mut().zip(row) {
                            *v += e * p;
                        }
                    }
                }
            }
            Ok(values)
        }
    }

    /// Truncation to the per-axis band `band`: coefficients of modes whose
    /// multi-index has a component above `band` are zeroed.  On intervals this
    /// is the prefix truncation onto span{e_0, …, e_band}.
    pub fn project_pn(&self, field: &SpectralField, band: usize) -> Result<SpectralField, BasisError> {
        self.check_coeffs(field)?;
        if band > self.cutoff {
            return Err(BasisError::BandTooLarge { band, cutoff: self.cutoff });
        }
        let coeffs = self
            .modes
            .iter()
            .zip(&field.coeffs)
            .map(|(m, &c)| if m[0] <= band && m[1] <= band { c } else { 0.0 })
            .collect();
        Ok(SpectralField::from_coeffs(coeffs))
    }

    /// Spatial mean, |Ω|⁻¹ ∫ v = c_0 · |Ω|^{-1/2}.
    pub fn mean_value(&self, field: &SpectralField) -> Result<f64, BasisError> {
        self.check_coeffs(field)?;
        Ok(field.coeffs[0] / self.domain.volume().sqrt())
    }

    /// Inverse Neumann Laplacian 𝒩 on the zero-mean subspace: divides each
    /// nonconstant coefficient by its eigenvalue.  Rejects fields whose mean
    /// exceeds [`ZERO_MEAN_REL_TOL`] relative to the field's H norm.
    pub fn inverse_neumann_laplacian(
        &self,
        field: &SpectralField,
    ) -> Result<SpectralField, BasisError> {
        self.check_coeffs(field)?;
        let mean = self.mean_value(field)?;
        let norm = self.norms(field)?.h;
        if mean.abs() > ZERO_MEAN_REL_TOL * norm {
            return Err(BasisError::NonzeroMean { mean, norm, tol: ZERO_MEAN_REL_TOL });
        }
        let coeffs = self
            .eigenvalues
            .iter()
            .zip(&field.coeffs)
            .map(|(&g, &c)| if g > 0.0 { c / g } else { 0.0 })
            .collect();
        Ok(SpectralField::from_coeffs(coeffs))
    }

    /// All coefficient-space norms of a field in one pass.
    pub fn norms(&self, field: &SpectralField) -> Result<FieldNorms, BasisError> {
        self.check_coeffs(field)?;
        let mut h2 = 0.0;
        let mut v2 = 0.0;
        let mut w2 = 0.0;
        let mut dual2 = 0.0;
        for (&g, &c) in self.eigenvalues.iter().zip(&field.coeffs) {
            let c2 = c * c;
            h2 += c2;
            v2 += g * c2;
            w2 += g * g * c2;
            if g > 0.0 {
                dual2 += c2 / g;
            }
        }
        let mean = self.mean_value(field)?;
        Ok(FieldNorms {
            h: h2.sqrt(),
            v_semi: v2.sqrt(),
            w_semi: w2.sqrt(),
            v_star: (dual2 + mean * mean).sqrt(),
            mean,
        })
    }

    /// Node values of one basis function (by sorted mode index).
    pub fn mode_node_values(&self, mode_index: usize) -> Result<Vec<f64>, BasisError> {
        if mode_index >= self.num_modes() {
            return Err(BasisError::CoeffLength {
                expected: self.num_modes(),
                got: mode_index,
            });
        }
        let mut f = SpectralField::zeros(self.num_modes());
        f.coeffs[mode_index] = 1.0;
        self.synthesize(&f)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
