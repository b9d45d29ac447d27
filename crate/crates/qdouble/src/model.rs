//! Hamiltonian-level operators of the quantum double lattice model: gauge
//! transformations T_g(v), the vertex projector A(v) = (1/|G|) Σ_g T_g(v),
//! flux projectors B_ℓ(v,f), and the energy functional
//! H = −Σ_v A(v) − Σ_f B(f).
//!
//! The magnetic flux through a face f with base point v is the ordered
//! product of edge values along the counterclockwise boundary cycle starting
//! at v, each edge contributing g^{−o_f(e)}, with the first traversed edge
//! as the rightmost factor.

use num_complex::Complex64;

use crate::error::QdError;
use crate::group::{FiniteGroup, GroupElement};
use crate::lattice::{Face, LatticeGeometry, StarDirection, Vertex};
use crate::state::{ConfigKey, SparseState};

/// Permutation matrix of the left action L_g: |h⟩ ↦ |gh⟩.
pub fn left_mul_matrix(group: &FiniteGroup, g: GroupElement) -> Vec<Vec<Complex64>> {
    perm_matrix(group.order, |h| group.mul(g, GroupElement(h)).0)
}

/// Permutation matrix of the right action R_g: |h⟩ ↦ |hg⟩.
pub fn right_mul_matrix(group: &FiniteGroup, g: GroupElement) -> Vec<Vec<Complex64>> {
    perm_matrix(group.order, |h| group.mul(GroupElement(h), g).0)
}

pub fn identity_matrix(d: usize) -> Vec<Vec<Complex64>> {
    perm_matrix(d, |h| h)
}

fn perm_matrix(d: usize, map: impl Fn(usize) -> usize) -> Vec<Vec<Complex64>> {
    let mut m = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for src in 0..d {
        m[map(src)][src] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn diagonal_matrix(phases: &[Complex64]) -> Vec<Vec<Complex64>> {
    let d = phases.len();
    let mut m = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for (i, &p) in phases.iter().enumerate() {
        m[i][i] = p;
    }
    m
}

/// The correction gate Z^j = Σ_k e^{2πi jk/|G|} |k⟩⟨k|.
pub fn zpow_matrix(group: &FiniteGroup, j: usize) -> Vec<Vec<Complex64>> {
    let d = group.order;
    let phases: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * (j * k) as f64 / d as f64))
        .collect();
    diagonal_matrix(&phases)
}

/// Z^j with the phase keyed to the inverse element index, for correction
/// edges that record the gauge element inverted (in-edges of the vertex).
pub fn zpow_inverted_matrix(group: &FiniteGroup, j: usize) -> Vec<Vec<Complex64>> {
    let d = group.order;
    let phases: Vec<Complex64> = (0..d)
        .map(|k| {
            let ki = group.inv(GroupElement(k)).0;
            Complex64::from_polar(1.0, std::f64::consts::TAU * (j * ki) as f64 / d as f64)
        })
        .collect();
    diagonal_matrix(&phases)
}

/// Apply the gauge transformation T_g(v): L_g on outgoing star edges,
/// R_{g⁻¹} on incoming ones.
pub fn apply_gauge(
    state: &mut SparseState,
    geom: &LatticeGeometry,
    vx: Vertex,
    g: GroupElement,
) -> Result<(), QdError> {
    let group = state.group.clone();
    for (edge, dir) in geom.vertex_star(vx) {
        let m = match dir {
            StarDirection::Out => left_mul_matrix(&group, g),
            StarDirection::In => right_mul_matrix(&group, group.inv(g)),
        };
        state.apply_single(edge, &m)?;
    }
    Ok(())
}

/// The per-element action of T_g(v) on one star edge, as a controlled-op
/// family indexed by the control value g.
pub fn gauge_family_for_edge(
    group: &FiniteGroup,
    dir: StarDirection,
    transform: impl Fn(GroupElement) -> GroupElement,
) -> Vec<Vec<Vec<Complex64>>> {
    group
        .elements()
        .map(|g| {
            let h = transform(g);
            match dir {
                StarDirection::Out => left_mul_matrix(group, h),
                StarDirection::In => right_mul_matrix(group, group.inv(h)),
            }
        })
        .collect()
}

/// Apply the controlled gauge transformation W(v) = Σ_h |h⟩⟨h| ⊗ T_h(v)
/// with the control at `control_site` (a sequence of two-site controlled
/// multiplications, one per star edge).
pub fn apply_controlled_gauge(
    state: &mut SparseState,
    geom: &LatticeGeometry,
    control_site: usize,
    vx: Vertex,
) -> Result<(), QdError> {
    apply_controlled_gauge_mapped(state, geom, control_site, vx, |g| g)
}

/// W(v) variant whose applied element is a function of the control value,
/// e.g. h ↦ T_{h⁻¹}(v) for the adaptive charge-creation correction.
pub fn apply_controlled_gauge_mapped(
    state: &mut SparseState,
    geom: &LatticeGeometry,
    control_site: usize,
    vx: Vertex,
    map: impl Fn(GroupElement) -> GroupElement + Copy,
) -> Result<(), QdError> {
    let group = state.group.clone();
    for (edge, dir) in geom.vertex_star(vx) {
        let family = gauge_family_for_edge(&group, dir, map);
        state.apply_controlled(control_site, edge, &family)?;
    }
    Ok(())
}

/// A(v)|ψ⟩ = (1/|G|) Σ_g T_g(v)|ψ⟩ (unnormalized, idempotent).
pub fn apply_vertex_projector(
    state: &SparseState,
    geom: &LatticeGeometry,
    vx: Vertex,
) -> Result<SparseState, QdError> {
    let group = state.group.clone();
    let mut acc = state.clone();
    acc.scale(Complex64::new(0.0, 0.0));
    acc.prune();
    let weight = Complex64::new(1.0 / group.order as f64, 0.0);
    for g in group.elements() {
        let mut img = state.clone();
        apply_gauge(&mut img, geom, vx, g)?;
        acc.axpy(weight, &img);
    }
    Ok(acc)
}

/// ⟨ψ| A(v) |ψ⟩ for a normalized state.
pub fn vertex_projector_expect(
    state: &SparseState,
    geom: &LatticeGeometry,
    vx: Vertex,
) -> Result<f64, QdError> {
    let proj = apply_vertex_projector(state, geom, vx)?;
    Ok(state.inner(&proj)?.re)
}

/// Magnetic flux of one basis configuration through `face`, with the
/// counterclockwise cycle based at `base`.
pub fn flux_of_config(
    state: &SparseState,
    geom: &LatticeGeometry,
    key: ConfigKey,
    face: Face,
    base: Vertex,
) -> Result<GroupElement, QdError> {
    let group = &state.group;
    let cycle = geom.face_cycle(face, base)?;
    let mut acc = GroupElement(0);
    for (edge, o) in cycle.edges {
        let g = GroupElement(state.site_value(key, edge));
        let factor = if o > 0 { group.inv(g) } else { g };
        acc = group.mul(factor, acc);
    }
    Ok(acc)
}

/// Probability distribution of the flux value at `face` (base point `base`):
/// expectation of each projector B_ℓ(v,f).
pub fn flux_distribution(
    state: &SparseState,
    geom: &LatticeGeometry,
    face: Face,
    base: Vertex,
) -> Result<Vec<f64>, QdError> {
    let mut probs = vec![0.0; state.group.order];
    for (&key, amp) in &state.amps {
        let flux = flux_of_config(state, geom, key, face, base)?;
        probs[flux.0] += amp.norm_sqr();
    }
    Ok(probs)
}

/// Projective flux measurement: collapse onto flux value `flux` at `face`.
/// Returns the outcome probability.
pub fn flux_collapse(
    state: &mut SparseState,
    geom: &LatticeGeometry,
    face: Face,
    base: Vertex,
    flux: GroupElement,
) -> Result<f64, QdError> {
    let mut keep: Vec<(ConfigKey, Complex64)> = Vec::new();
    let mut prob = 0.0;
    for (&key, &amp) in &state.amps {
        if flux_of_config(state, geom, key, face, base)? == flux {
            prob += amp.norm_sqr();
            keep.push((key, amp));
        }
    }
    if prob < 1e-12 {
        return Err(QdError::ImpossibleOutcome { outcome: flux.0, probability: prob });
    }
    let scale = Complex64::new(1.0 / prob.sqrt(), 0.0);
    state.amps = keep.into_iter().map(|(k, a)| (k, a * scale)).collect();
    Ok(prob)
}

/// ⟨ψ| B(f) |ψ⟩: the probability of trivial flux at f (base-independent).
pub fn face_projector_expect(
    state: &SparseState,
    geom: &LatticeGeometry,
    face: Face,
) -> Result<f64, QdError> {
    let base = geom.corner(face, crate::lattice::Corner::TopRight);
    Ok(flux_distribution(state, geom, face, base)?[0])
}

/// Energy −Σ_v ⟨A(v)⟩ − Σ_f ⟨B(f)⟩ of a normalized state.
pub fn energy(state: &SparseState, geom: &LatticeGeometry) -> Result<f64, QdError> {
    let mut total = 0.0;
    for vx in geom.vertices().collect::<Vec<_>>() {
        total -= vertex_projector_expect(state, geom, vx)?;
    }
    for fc in geom.faces().collect::<Vec<_>>() {
        total -= face_projector_expect(state, geom, fc)?;
    }
    Ok(total)
}

/// The Table-1 initial state: edges and face ancillas in |e⟩, vertex
/// ancillas in |~0⟩.
pub fn synthesis_input(
    group: std::sync::Arc<FiniteGroup>,
    geom: &LatticeGeometry,
) -> Result<SparseState, QdError> {
    let d = group.order;
    let mut state = SparseState::zero_config(group.clone(), geom.site_count())?;
    let fourier = crate::state::LocalBasis::fourier(&group);
    let to_tilde0 = crate::state::unitary_with_first_column(&fourier.vectors[0]);
    for vx in geom.vertices().collect::<Vec<_>>() {
        state.apply_single(geom.vertex_site(vx), &to_tilde0)?;
    }
    debug_assert_eq!(state.support(), d.pow(geom.vertex_count() as u32));
    Ok(state)
}

/// Reference ground state built by direct projection: normalize
/// Π_{v ≠ v_last} A(v) |e…e⟩. Exponentially sized intermediate states keep
/// this to small lattices; it serves as the oracle for the measurement-based
/// synthesis.
pub fn ground_state_by_projection(
    group: std::sync::Arc<FiniteGroup>,
    geom: &LatticeGeometry,
) -> Result<SparseState, QdError> {
    let mut state = SparseState::zero_config(group, geom.site_count())?;
    let mut vertices: Vec<Vertex> = geom.vertices().collect();
    vertices.pop();
    for vx in vertices {
        state = apply_vertex_projector(&state, geom, vx)?;
    }
    state.normalize()?;
    Ok(state)
}
