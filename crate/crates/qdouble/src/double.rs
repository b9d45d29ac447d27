//! The quantum double algebra D(G): anyon labels, carrier spaces, the irrep
//! action of basis elements P_h g, monodromy on carrier states, the group
//! projectors P^R_{μν}, the charge creation diagonals W_R, and fusion
//! channels of electric pair states.
//!
//! Everything here is exact algebra over the tables in [`crate::group`]; the
//! lattice protocols are tested against these functions as their oracle.

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::error::QdError;
use crate::group::{mat_mul, FiniteGroup, GroupElement, Irrep};

/// An irrep of D(G): a conjugacy class (magnetic part) paired with an irrep
/// of the class centralizer (electric part).
#[derive(Debug, Clone)]
pub struct AnyonLabel {
    /// Index into `group.classes`.
    pub class: usize,
    /// Index into the centralizer group's irrep list.
    pub centralizer_irrep: usize,
    /// Centralizer irrep data (matrices indexed by centralizer position).
    pub irrep: Irrep,
    pub label: String,
    pub quantum_dimension: usize,
}

/// Enumerate the anyons of D(G): one label per (class, centralizer irrep)
/// pair, quantum dimension |[α]|·|R|.
pub fn enumerate_anyons(group: &FiniteGroup) -> Vec<AnyonLabel> {
    let mut labels = Vec::new();
    for (ci, class) in group.classes.iter().enumerate() {
        let cent = group.centralizer_group(ci);
        for (ri, irrep) in cent.irreps.iter().enumerate() {
            labels.push(AnyonLabel {
                class: ci,
                centralizer_irrep: ri,
                irrep: irrep.clone(),
                label: format!(
                    "([{}], {})",
                    group.element_name(class.representative),
                    irrep.label
                ),
                quantum_dimension: class.size() * irrep.dim,
            });
        }
    }
    labels
}

/// State in the carrier space of one anyon: amplitudes over the basis
/// {|h_i, v_j⟩} with i indexing class members and j charge components.
#[derive(Debug, Clone)]
pub struct CarrierState {
    /// Anyon this state belongs to (index into `enumerate_anyons` order is
    /// not required; the label itself carries the data).
    pub label: AnyonLabel,
    /// amps[i][j] for flux member i, charge index j.
    pub amps: Vec<Vec<Complex64>>,
}

impl CarrierState {
    pub fn basis(label: &AnyonLabel, flux_member: usize, charge: usize) -> CarrierState {
        let (k, d) = (label_flux_count(label), label.irrep.dim);
        let mut amps = vec![vec![Complex64::new(0.0, 0.0); d]; k];
        amps[flux_member][charge] = Complex64::new(1.0, 0.0);
        CarrierState { label: label.clone(), amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().flatten().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm_sqr() < tol * tol
    }
}

fn label_flux_count(label: &AnyonLabel) -> usize {
    label.quantum_dimension / label.irrep.dim
}

/// The element g̃ = x⁻¹_{g hᵢ g⁻¹} · g · x_{hᵢ} appearing in the irrep
/// action; it lies in the centralizer of the class representative, and is
/// returned as an index into the centralizer element list.
fn centralizer_part(
    group: &FiniteGroup,
    class_idx: usize,
    member_idx: usize,
    g: GroupElement,
) -> (usize, usize) {
    let class = &group.classes[class_idx];
    let h_i = class.members[member_idx];
    let h_new = group.conjugate(g, h_i);
    let new_idx = class.member_index(h_new).expect("conjugation stays in class");
    let x_new = class.transversal[new_idx];
    let x_old = class.transversal[member_idx];
    let g_tilde = group.mul(group.mul(group.inv(x_new), g), x_old);
    debug_assert_eq!(
        group.mul(g_tilde, class.representative),
        group.mul(class.representative, g_tilde),
        "g~ commutes with the class representative"
    );
    let cent_idx = class
        .centralizer
        .iter()
        .position(|&x| x == g_tilde)
        .expect("g~ lies in the centralizer");
    (new_idx, cent_idx)
}

/// Action of the algebra element P_h g on a carrier state:
/// Π(P_h g)|hᵢ, vⱼ⟩ = δ_{h, g hᵢ g⁻¹} Σ_m |g hᵢ g⁻¹, R(g̃)_{m,j} v_m⟩.
/// The projector part can return the zero vector.
pub fn double_action(
    group: &FiniteGroup,
    state: &CarrierState,
    h: GroupElement,
    g: GroupElement,
) -> Result<CarrierState, QdError> {
    let label = &state.label;
    let class = &group.classes[label.class];
    if state.amps.len() != class.size() || state.amps[0].len() != label.irrep.dim {
        return Err(QdError::State("carrier state does not match its label".into()));
    }
    let d = label.irrep.dim;
    let mut out = vec![vec![Complex64::new(0.0, 0.0); d]; class.size()];
    for i in 0..class.size() {
        let (new_idx, cent_idx) = centralizer_part(group, label.class, i, g);
        if class.members[new_idx] != h {
            continue;
        }
        let r = &label.irrep.matrices[cent_idx];
        for j in 0..d {
            let a = state.amps[i][j];
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (m, row) in r.iter().enumerate() {
                out[new_idx][m] += row[j] * a;
            }
        }
    }
    Ok(CarrierState { label: label.clone(), amps: out })
}

/// Joint state of two anyons, kept as a dense matrix over the two carrier
/// bases (desk-scale dimensions only).
#[derive(Debug, Clone)]
pub struct JointState {
    pub a: AnyonLabel,
    pub b: AnyonLabel,
    /// amps[(i,j)][(m,n)] flattened: flux/charge of particle A, then B.
    pub amps: FxHashMap<(usize, usize, usize, usize), Complex64>,
}

impl JointState {
    pub fn product(sa: &CarrierState, sb: &CarrierState) -> JointState {
        let mut amps = FxHashMap::default();
        for (i, row_a) in sa.amps.iter().enumerate() {
            for (j, &aa) in row_a.iter().enumerate() {
                if aa.norm_sqr() == 0.0 {
                    continue;
                }
                for (m, row_b) in sb.amps.iter().enumerate() {
                    for (n, &ab) in row_b.iter().enumerate() {
                        if ab.norm_sqr() == 0.0 {
                            continue;
                        }
                        amps.insert((i, j, m, n), aa * ab);
                    }
                }
            }
        }
        JointState { a: sa.label.clone(), b: sb.label.clone(), amps }
    }
}

/// The monodromy ℛ: counterclockwise interchange. ℛ|hᵢ, vⱼ⟩|h'_m, v'_n⟩ =
/// Σ_ℓ |hᵢ h'_m hᵢ⁻¹, R'(h̃ᵢ)_{ℓ,n} v'_ℓ⟩ |hᵢ, vⱼ⟩: a gauge transformation
/// on the second particle by the flux of the first, followed by the swap.
pub fn monodromy(group: &FiniteGroup, joint: &JointState) -> JointState {
    let class_a = &group.classes[joint.a.class];
    let mut out = FxHashMap::default();
    for (&(i, j, m, n), &amp) in &joint.amps {
        let flux_a = class_a.members[i];
        let (new_m, cent_idx) = centralizer_part(group, joint.b.class, m, flux_a);
        let r = &joint.b.irrep.matrices[cent_idx];
        for (l, row) in r.iter().enumerate() {
            let coef = row[n];
            if coef.norm_sqr() == 0.0 {
                continue;
            }
            // After σ the transformed B-particle sits first.
            *out.entry((new_m, l, i, j)).or_insert(Complex64::new(0.0, 0.0)) += coef * amp;
        }
    }
    JointState { a: joint.b.clone(), b: joint.a.clone(), amps: out }
}

/// Full braid ℛ² of one particle around another.
pub fn monodromy_squared(group: &FiniteGroup, joint: &JointState) -> JointState {
    monodromy(group, &monodromy(group, joint))
}

/// Pair of conjugate fluxes {|ℓ, ℓ⁻¹⟩ : ℓ ∈ [α]} with amplitudes indexed by
/// the class member order.
#[derive(Debug, Clone)]
pub struct FluxPairState {
    pub class: usize,
    pub amps: Vec<Complex64>,
}

impl FluxPairState {
    /// The unique chargeless pair: uniform amplitudes 1/√|[α]|.
    pub fn chargeless(group: &FiniteGroup, class: usize) -> FluxPairState {
        let k = group.classes[class].size();
        FluxPairState { class, amps: vec![Complex64::new(1.0 / (k as f64).sqrt(), 0.0); k] }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Braiding an external flux b around a whole pair: |a, a⁻¹⟩ ↦
/// |bab⁻¹, ba⁻¹b⁻¹⟩, extended linearly over the pair amplitudes.
pub fn braid_flux_pair(
    group: &FiniteGroup,
    b: GroupElement,
    pair: &FluxPairState,
) -> FluxPairState {
    let class = &group.classes[pair.class];
    let mut amps = vec![Complex64::new(0.0, 0.0); class.size()];
    for (i, &amp) in pair.amps.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let new = group.conjugate(b, class.members[i]);
        let j = class.member_index(new).expect("conjugation stays in class");
        amps[j] += amp;
    }
    FluxPairState { class: pair.class, amps }
}

/// Coefficients of P^R_{μν} = (|R|/|G|) Σ_g [R(g)*]_{μν} g as a map from
/// group elements to complex numbers.
pub fn irrep_projector_coeffs(
    group: &FiniteGroup,
    r: &Irrep,
    mu: usize,
    nu: usize,
) -> Vec<Complex64> {
    let scale = r.dim as f64 / group.order as f64;
    (0..group.order)
        .map(|g| r.matrices[g][mu][nu].conj() * scale)
        .collect()
}

/// Group-algebra product of two coefficient vectors: (a·b)(g) =
/// Σ_{g₁g₂=g} a(g₁) b(g₂). Used to verify the projector composition law.
pub fn algebra_product(
    group: &FiniteGroup,
    a: &[Complex64],
    b: &[Complex64],
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); group.order];
    for g1 in group.elements() {
        if a[g1.0].norm_sqr() == 0.0 {
            continue;
        }
        for g2 in group.elements() {
            out[group.mul(g1, g2).0] += a[g1.0] * b[g2.0];
        }
    }
    out
}

/// Diagonal coefficients of the electric charge creation operator
/// W_R = Σ_g χ_R(g)* |g⟩⟨g|.
pub fn charge_creation_coeffs(group: &FiniteGroup, r: &Irrep) -> Vec<Complex64> {
    (0..group.order).map(|g| r.characters[g].conj()).collect()
}

/// State of an electric charge/anti-charge pair, |M^R⟩ =
/// (1/√|R|) Σ M_{μν} |μ⟩_R ⊗ |ν⟩_{R*}, stored as the matrix M.
/// Normalized states satisfy Σ|M_{μν}|² = |R|.
#[derive(Debug, Clone)]
pub struct ChargePairState {
    pub irrep: Irrep,
    pub matrix: Vec<Vec<Complex64>>,
}

impl ChargePairState {
    /// The unique fluxless (vacuum) pair |1_{|R|}⟩: M = identity.
    pub fn vacuum(r: &Irrep) -> ChargePairState {
        let mut m = vec![vec![Complex64::new(0.0, 0.0); r.dim]; r.dim];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0, 0.0);
        }
        ChargePairState { irrep: r.clone(), matrix: m }
    }

    /// The pair |R(g)⟩ obtained by braiding flux g around the vacuum pair's
    /// charge member.
    pub fn of_element(r: &Irrep, g: GroupElement) -> ChargePairState {
        ChargePairState { irrep: r.clone(), matrix: r.matrices[g.0].clone() }
    }

    pub fn norm_sqr(&self) -> f64 {
        let s: f64 = self.matrix.iter().flatten().map(|a| a.norm_sqr()).sum();
        s / self.irrep.dim as f64
    }

    /// Braid a flux h around the charge member: M ↦ R(h) M.
    pub fn braid_around_charge(&self, g: &FiniteGroup, h: GroupElement) -> ChargePairState {
        let _ = g;
        ChargePairState {
            irrep: self.irrep.clone(),
            matrix: mat_mul(&self.irrep.matrices[h.0], &self.matrix),
        }
    }

    /// Braid a flux h around the anti-charge member: M ↦ M R(h⁻¹).
    pub fn braid_around_anticharge(&self, g: &FiniteGroup, h: GroupElement) -> ChargePairState {
        ChargePairState {
            irrep: self.irrep.clone(),
            matrix: mat_mul(&self.matrix, &self.irrep.matrices[g.inv(h).0]),
        }
    }
}

/// One fusion channel of R ⊗ R*: an orthonormal matrix-space basis state
/// with its outcome label.
#[derive(Debug, Clone)]
pub struct FusionChannel {
    pub label: String,
    /// Channel state as a matrix with Σ|C_{μν}|² = |R|.
    pub basis_matrix: Vec<Vec<Complex64>>,
    pub amplitude: Complex64,
    pub probability: f64,
    /// Post-measurement pair state (the channel state itself).
    pub post_state: ChargePairState,
}

/// Decompose a charge pair into the fusion channels of R ⊗ R*.
///
/// The channel basis is built by projecting matrix space with the
/// conjugation action M ↦ R(g) M R(g)⁻¹ onto each irrep of G and
/// orthonormalizing in index order; the vacuum channel is always M ∝ 1.
/// Probabilities are Born weights of the channel decomposition.
pub fn fusion_channel_measure(
    group: &FiniteGroup,
    pair: &ChargePairState,
) -> Result<Vec<FusionChannel>, QdError> {
    let n2 = pair.norm_sqr();
    if n2 < 1e-24 {
        return Err(QdError::State("zero-norm charge pair".into()));
    }
    let d = pair.irrep.dim;
    let channels = conjugation_channel_basis(group, &pair.irrep);
    let inner = |a: &Vec<Vec<Complex64>>, b: &Vec<Vec<Complex64>>| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += a[i][j].conj() * b[i][j];
            }
        }
        acc / d as f64
    };
    let mut out = Vec::new();
    for (label, basis_matrix) in channels {
        let amplitude = inner(&basis_matrix, &pair.matrix) / n2.sqrt();
        let probability = amplitude.norm_sqr();
        out.push(FusionChannel {
            label,
            basis_matrix: basis_matrix.clone(),
            amplitude,
            probability,
            post_state: ChargePairState { irrep: pair.irrep.clone(), matrix: basis_matrix },
        });
    }
    Ok(out)
}

/// Orthonormal channel basis of the conjugation action on |R|×|R| matrix
/// space, grouped by the G-irrep each channel transforms under. Matrices are
/// normalized to Σ|C|² = |R| so they are valid pair states.
fn conjugation_channel_basis(
    group: &FiniteGroup,
    r: &Irrep,
) -> Vec<(String, Vec<Vec<Complex64>>)> {
    let d = r.dim;
    let dim2 = d * d;
    let zero = Complex64::new(0.0, 0.0);
    // Flatten matrices column-major as vectors of length d².
    let flat = |m: &Vec<Vec<Complex64>>| -> Vec<Complex64> {
        let mut v = Vec::with_capacity(dim2);
        for row in m {
            v.extend_from_slice(row);
        }
        v
    };
    let unflat = |v: &[Complex64]| -> Vec<Vec<Complex64>> {
        (0..d).map(|i| v[i * d..(i + 1) * d].to_vec()).collect()
    };
    // Conjugation superoperator for g, applied to basis matrix E_{ab}.
    let conj_action = |g: usize, m: &Vec<Vec<Complex64>>| -> Vec<Vec<Complex64>> {
        let rg = &r.matrices[g];
        let rg_inv = &r.matrices[group.inv(GroupElement(g)).0];
        mat_mul(rg, &mat_mul(m, rg_inv))
    };
    let mut found: Vec<(String, Vec<Complex64>)> = Vec::new();
    for irr in &group.irreps {
        // Character projector onto the irr-isotypic component:
        // P = (|irr|/|G|) Σ_g χ_irr(g)* · Conj(g).
        let scale = irr.dim as f64 / group.order as f64;
        let mut component: Vec<Vec<Complex64>> = Vec::new();
        for a in 0..d {
            for b in 0..d {
                let mut e = vec![vec![zero; d]; d];
                e[a][b] = Complex64::new(1.0, 0.0);
                let mut acc = vec![zero; dim2];
                for g in 0..group.order {
                    let img = flat(&conj_action(g, &e));
                    let coef = irr.characters[g].conj() * scale;
                    for (t, x) in acc.iter_mut().zip(&img) {
                        *t += coef * x;
                    }
                }
                component.push(acc);
            }
        }
        // Gram-Schmidt in index order against everything found so far.
        for v in component {
            let mut w = v;
            for (_, u) in &found {
                let ip: Complex64 =
                    u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum::<Complex64>();
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= ip * ui;
                }
            }
            let n: f64 = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if n > 1e-9 {
                for x in w.iter_mut() {
                    *x /= n;
                }
                let idx = found.iter().filter(|(l, _)| l.starts_with(&irr.label)).count();
                found.push((format!("{}#{}", irr.label, idx), w));
            }
        }
    }
    debug_assert_eq!(found.len(), dim2);
    // Rescale to pair-state normalization Σ|C|² = |R|.
    let s = (d as f64).sqrt();
    found
        .into_iter()
        .map(|(label, v)| {
            let m = unflat(&v.iter().map(|x| x * s).collect::<Vec<_>>());
            (label, m)
        })
        .collect()
}
