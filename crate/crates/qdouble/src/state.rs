//! Sparse complex state vector over group-valued site configurations.
//!
//! A basis configuration assigns one group element to every site (edges and
//! ancillas alike); the state is a hash map from packed configurations to
//! amplitudes. Every gate the protocols use is a generalized permutation,
//! diagonal, or a controlled version thereof, so sparsity is preserved and
//! the support never exceeds |G|^{|V|−1} after ground-state synthesis.
//!
//! Configurations pack each site into ⌈log₂|G|⌉ bits of a u128, so an S₃
//! lattice may have up to 42 sites and a ℤ₂ lattice up to 128.

use num_complex::Complex64;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::QdError;
use crate::group::{FiniteGroup, GroupElement};

/// Amplitudes with magnitude below this are dropped after every operation.
/// The smallest legitimate amplitudes at desk scale are ≥ 6⁻⁸ ≈ 6e-7.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// How a protocol resolves measurement randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomePolicy {
    /// Draw each outcome from the exact Born distribution with a seeded RNG.
    Sample { seed: u64 },
    /// Force every measurement to the given outcome index; outcomes with
    /// probability below 1e-12 are a reported failure.
    Postselect { outcome: usize },
    /// Explore every branch with nonzero probability.
    Enumerate,
}

/// A packed basis configuration (one group element index per site).
pub type ConfigKey = u128;

/// An orthonormal single-site measurement basis. Row o of `vectors` is the
/// outcome-o basis vector expressed over logical states.
#[derive(Debug, Clone)]
pub struct LocalBasis {
    pub label: String,
    pub vectors: Vec<Vec<Complex64>>,
    pub outcome_labels: Vec<String>,
}

impl LocalBasis {
    pub fn new(label: &str, vectors: Vec<Vec<Complex64>>, outcome_labels: Vec<String>) -> LocalBasis {
        let basis = LocalBasis { label: label.into(), vectors, outcome_labels };
        assert!(basis.is_unitary(1e-12), "measurement basis {label} is not unitary");
        basis
    }

    fn is_unitary(&self, tol: f64) -> bool {
        crate::group::is_unitary(&self.vectors, tol)
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// The logical basis {|g⟩}.
    pub fn logical(group: &FiniteGroup) -> LocalBasis {
        let d = group.order;
        let mut vectors = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for (i, row) in vectors.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0, 0.0);
        }
        let labels = group.element_names.clone();
        LocalBasis::new("logical", vectors, labels)
    }

    /// The Fourier basis |~j⟩ = (1/√|G|) Σ_k e^{2πi jk/|G|} |k⟩.
    pub fn fourier(group: &FiniteGroup) -> LocalBasis {
        let d = group.order;
        let s = 1.0 / (d as f64).sqrt();
        let vectors = (0..d)
            .map(|j| {
                (0..d)
                    .map(|k| {
                        Complex64::from_polar(
                            s,
                            std::f64::consts::TAU * (j * k) as f64 / d as f64,
                        )
                    })
                    .collect()
            })
            .collect();
        let labels = (0..d).map(|j| format!("~{j}")).collect();
        LocalBasis::new("fourier", vectors, labels)
    }

    /// The irrep basis |R_{μν}⟩ = √(|R|/|G|) Σ_g [R(g)*]_{μν} |g⟩ over all
    /// irreps of the group (orthonormal by Peter–Weyl).
    pub fn irrep(group: &FiniteGroup) -> LocalBasis {
        let d = group.order;
        let mut vectors = Vec::with_capacity(d);
        let mut labels = Vec::with_capacity(d);
        for r in &group.irreps {
            let s = (r.dim as f64 / d as f64).sqrt();
            for mu in 0..r.dim {
                for nu in 0..r.dim {
                    vectors.push(
                        (0..d).map(|g| r.matrices[g][mu][nu].conj() * s).collect(),
                    );
                    labels.push(format!("{}_{}{}", r.label, mu, nu));
                }
            }
        }
        LocalBasis::new("irrep", vectors, labels)
    }

    /// The class-phase basis {|k_[ℓ]⟩ = Z^k_{|[ℓ]|} |0_[ℓ]⟩} over the span
    /// of class members, completed with logical states outside the class.
    /// Outcomes 0..|[ℓ]| are the class-phase states; the rest are labeled
    /// `outside:<name>`.
    pub fn class_phase(group: &FiniteGroup, class_idx: usize) -> LocalBasis {
        let d = group.order;
        let class = &group.classes[class_idx];
        let k = class.size();
        let s = 1.0 / (k as f64).sqrt();
        let mut vectors = Vec::with_capacity(d);
        let mut labels = Vec::with_capacity(d);
        for ph in 0..k {
            let mut vec = vec![Complex64::new(0.0, 0.0); d];
            for (m, &member) in class.members.iter().enumerate() {
                vec[member.0] =
                    Complex64::from_polar(s, std::f64::consts::TAU * (ph * m) as f64 / k as f64);
            }
            vectors.push(vec);
            labels.push(format!("{}_[{}]", ph, group.element_name(class.representative)));
        }
        for g in group.elements() {
            if class.members.contains(&g) {
                continue;
            }
            let mut vec = vec![Complex64::new(0.0, 0.0); d];
            vec[g.0] = Complex64::new(1.0, 0.0);
            vectors.push(vec);
            labels.push(format!("outside:{}", group.element_name(g)));
        }
        LocalBasis::new("class-phase", vectors, labels)
    }

    /// Two-element interference basis |ψ_x^±⟩ = (|e⟩ ± |h⟩)/√2, completed
    /// with logical states. Outcome 0 is +, outcome 1 is −.
    pub fn interference_x(group: &FiniteGroup, h: GroupElement) -> LocalBasis {
        Self::interference(group, h, Complex64::new(1.0, 0.0), "x")
    }

    /// |ψ_y^±⟩ = (|e⟩ ± i|h⟩)/√2, completed with logical states.
    pub fn interference_y(group: &FiniteGroup, h: GroupElement) -> LocalBasis {
        Self::interference(group, h, Complex64::new(0.0, 1.0), "y")
    }

    fn interference(group: &FiniteGroup, h: GroupElement, phase: Complex64, tag: &str) -> LocalBasis {
        assert!(h.0 != 0, "interference basis needs h distinct from the identity");
        let d = group.order;
        let s = 1.0 / 2f64.sqrt();
        let mut vectors = Vec::with_capacity(d);
        let mut labels = Vec::with_capacity(d);
        for sign in [1.0, -1.0] {
            let mut vec = vec![Complex64::new(0.0, 0.0); d];
            vec[0] = Complex64::new(s, 0.0);
            vec[h.0] = phase * sign * s;
            vectors.push(vec);
            labels.push(format!("psi_{tag}{}", if sign > 0.0 { "+" } else { "-" }));
        }
        for g in group.elements() {
            if g.0 == 0 || g == h {
                continue;
            }
            let mut vec = vec![Complex64::new(0.0, 0.0); d];
            vec[g.0] = Complex64::new(1.0, 0.0);
            vectors.push(vec);
            labels.push(format!("outside:{}", group.element_name(g)));
        }
        LocalBasis::new("interference", vectors, labels)
    }
}

/// Sparse state over `sites` group-valued qudits.
#[derive(Debug, Clone)]
pub struct SparseState {
    pub group: Arc<FiniteGroup>,
    sites: usize,
    bits: u32,
    pub amps: FxHashMap<ConfigKey, Complex64>,
}

/// One record of the JSON-lines snapshot format.
#[derive(Debug, Serialize, Deserialize)]
struct SnapshotRecord {
    config: Vec<usize>,
    re: f64,
    im: f64,
}

impl SparseState {
    /// The all-identity configuration with amplitude 1.
    pub fn zero_config(group: Arc<FiniteGroup>, sites: usize) -> Result<SparseState, QdError> {
        let bits = (usize::BITS - (group.order - 1).leading_zeros()).max(1);
        if sites as u32 * bits > 128 {
            return Err(QdError::Resource(format!(
                "{sites} sites of dimension {} exceed the 128-bit configuration key",
                group.order
            )));
        }
        let mut amps = FxHashMap::default();
        amps.insert(0, Complex64::new(1.0, 0.0));
        Ok(SparseState { group, sites, bits, amps })
    }

    /// Tensor product of normalized single-site vectors.
    pub fn product(
        group: Arc<FiniteGroup>,
        assignment: &[Vec<Complex64>],
    ) -> Result<SparseState, QdError> {
        for (i, vec) in assignment.iter().enumerate() {
            if vec.len() != group.order {
                return Err(QdError::State(format!("site {i} vector has wrong dimension")));
            }
            let n: f64 = vec.iter().map(|a| a.norm_sqr()).sum();
            if (n - 1.0).abs() > 1e-9 {
                return Err(QdError::State(format!(
                    "site {i} vector is not normalized (norm² = {n})"
                )));
            }
        }
        let mut state = SparseState::zero_config(group, assignment.len())?;
        for (i, vec) in assignment.iter().enumerate() {
            state.apply_single_unchecked(i, &vec_to_column_matrix(vec));
        }
        state.prune();
        Ok(state)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn site_value(&self, key: ConfigKey, site: usize) -> usize {
        ((key >> (site as u32 * self.bits)) & ((1u128 << self.bits) - 1)) as usize
    }

    #[inline]
    pub fn with_site(&self, key: ConfigKey, site: usize, value: usize) -> ConfigKey {
        let shift = site as u32 * self.bits;
        let mask = ((1u128 << self.bits) - 1) << shift;
        (key & !mask) | ((value as u128) << shift)
    }

    /// Decode a key into the per-site element indices.
    pub fn decode(&self, key: ConfigKey) -> Vec<usize> {
        (0..self.sites).map(|s| self.site_value(key, s)).collect()
    }

    pub fn encode(&self, config: &[usize]) -> ConfigKey {
        let mut key = 0;
        for (s, &v) in config.iter().enumerate() {
            key = self.with_site(key, s, v);
        }
        key
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in self.amps.values_mut() {
            *a *= c;
        }
    }

    pub fn normalize(&mut self) -> Result<(), QdError> {
        let n = self.norm_sqr().sqrt();
        if n < 1e-12 {
            return Err(QdError::State("cannot normalize a zero state".into()));
        }
        self.scale(Complex64::new(1.0 / n, 0.0));
        Ok(())
    }

    /// self += c · other.
    pub fn axpy(&mut self, c: Complex64, other: &SparseState) {
        for (&k, &a) in &other.amps {
            *self.amps.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c * a;
        }
        self.prune();
    }

    /// Hermitian inner product ⟨self|other⟩.
    pub fn inner(&self, other: &SparseState) -> Result<Complex64, QdError> {
        if self.sites != other.sites || self.group.order != other.group.order {
            return Err(QdError::State("inner product between mismatched states".into()));
        }
        let (small, big, conj_small) = if self.amps.len() <= other.amps.len() {
            (&self.amps, &other.amps, true)
        } else {
            (&other.amps, &self.amps, false)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in small {
            if let Some(b) = big.get(k) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    /// Fidelity |⟨self|other⟩|² for normalized states.
    pub fn fidelity(&self, other: &SparseState) -> Result<f64, QdError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    fn check_unitary(u: &[Vec<Complex64>], d: usize) -> Result<(), QdError> {
        if u.len() != d || u.iter().any(|r| r.len() != d) {
            return Err(QdError::State("operator has wrong dimension".into()));
        }
        if !crate::group::is_unitary(u, 1e-9) {
            return Err(QdError::State("operator is not unitary within 1e-9".into()));
        }
        Ok(())
    }

    /// Apply a |G|×|G| unitary to one site.
    pub fn apply_single(&mut self, site: usize, u: &[Vec<Complex64>]) -> Result<(), QdError> {
        Self::check_unitary(u, self.group.order)?;
        if site >= self.sites {
            return Err(QdError::State(format!("site {site} out of range")));
        }
        self.apply_single_unchecked(site, u);
        self.prune();
        Ok(())
    }

    fn apply_single_unchecked(&mut self, site: usize, u: &[Vec<Complex64>]) {
        let d = self.group.order;
        // Column sparsity pattern of u, precomputed.
        let cols: Vec<Vec<(usize, Complex64)>> = (0..d)
            .map(|c| {
                (0..d)
                    .filter_map(|r| {
                        let x = u[r][c];
                        (x.norm() >= PRUNE_THRESHOLD).then_some((r, x))
                    })
                    .collect()
            })
            .collect();
        let mut out = FxHashMap::with_capacity_and_hasher(self.amps.len(), Default::default());
        for (&key, &amp) in &self.amps {
            let c = self.site_value(key, site);
            for &(r, coef) in &cols[c] {
                *out.entry(self.with_site(key, site, r)).or_insert(Complex64::new(0.0, 0.0)) +=
                    coef * amp;
            }
        }
        self.amps = out;
    }

    /// Apply a basis-controlled unitary: the component with control value g
    /// gets `family[g]` applied to the target site.
    pub fn apply_controlled(
        &mut self,
        control: usize,
        target: usize,
        family: &[Vec<Vec<Complex64>>],
    ) -> Result<(), QdError> {
        if control == target {
            return Err(QdError::State("controlled op with control == target".into()));
        }
        if control >= self.sites || target >= self.sites {
            return Err(QdError::State("controlled op site out of range".into()));
        }
        let d = self.group.order;
        if family.len() != d {
            return Err(QdError::State("controlled family needs one matrix per element".into()));
        }
        for u in family {
            Self::check_unitary(u, d)?;
        }
        let cols: Vec<Vec<Vec<(usize, Complex64)>>> = family
            .iter()
            .map(|u| {
                (0..d)
                    .map(|c| {
                        (0..d)
                            .filter_map(|r| {
                                let x = u[r][c];
                                (x.norm() >= PRUNE_THRESHOLD).then_some((r, x))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut out = FxHashMap::with_capacity_and_hasher(self.amps.len(), Default::default());
        for (&key, &amp) in &self.amps {
            let g = self.site_value(key, control);
            let c = self.site_value(key, target);
            for &(r, coef) in &cols[g][c] {
                *out.entry(self.with_site(key, target, r)).or_insert(Complex64::new(0.0, 0.0)) +=
                    coef * amp;
            }
        }
        self.amps = out;
        self.prune();
        Ok(())
    }

    /// Exchange the values of two sites.
    pub fn swap_sites(&mut self, a: usize, b: usize) -> Result<(), QdError> {
        if a >= self.sites || b >= self.sites {
            return Err(QdError::State("swap site out of range".into()));
        }
        if a == b {
            return Ok(());
        }
        let mut out = FxHashMap::with_capacity_and_hasher(self.amps.len(), Default::default());
        for (&key, &amp) in &self.amps {
            let va = self.site_value(key, a);
            let vb = self.site_value(key, b);
            out.insert(self.with_site(self.with_site(key, a, vb), b, va), amp);
        }
        self.amps = out;
        Ok(())
    }

    /// Born probabilities for measuring `site` in `basis`.
    pub fn measure_probs(&self, site: usize, basis: &LocalBasis) -> Vec<f64> {
        let d = self.group.order;
        // Group amplitudes by the residual configuration (site forced to 0),
        // then contract with each outcome vector.
        let mut residual: FxHashMap<ConfigKey, Vec<Complex64>> = FxHashMap::default();
        for (&key, &amp) in &self.amps {
            let v = self.site_value(key, site);
            let rest = self.with_site(key, site, 0);
            residual.entry(rest).or_insert_with(|| vec![Complex64::new(0.0, 0.0); d])[v] = amp;
        }
        let mut probs = vec![0.0; basis.dim()];
        for comps in residual.values() {
            for (o, bvec) in basis.vectors.iter().enumerate() {
                let mut a = Complex64::new(0.0, 0.0);
                for (v, &amp) in comps.iter().enumerate() {
                    if amp.norm_sqr() > 0.0 {
                        a += bvec[v].conj() * amp;
                    }
                }
                probs[o] += a.norm_sqr();
            }
        }
        probs
    }

    /// Collapse onto outcome `o` of `basis` at `site`; returns the outcome
    /// probability and leaves the state renormalized with the site in the
    /// post-measurement basis state.
    pub fn collapse(
        &mut self,
        site: usize,
        basis: &LocalBasis,
        outcome: usize,
    ) -> Result<f64, QdError> {
        let d = self.group.order;
        let bvec = &basis.vectors[outcome];
        let mut residual: FxHashMap<ConfigKey, Complex64> = FxHashMap::default();
        for (&key, &amp) in &self.amps {
            let v = self.site_value(key, site);
            let rest = self.with_site(key, site, 0);
            *residual.entry(rest).or_insert(Complex64::new(0.0, 0.0)) += bvec[v].conj() * amp;
        }
        let prob: f64 = residual.values().map(|a| a.norm_sqr()).sum();
        if prob < 1e-12 {
            return Err(QdError::ImpossibleOutcome { outcome, probability: prob });
        }
        let scale = 1.0 / prob.sqrt();
        let mut out = FxHashMap::with_capacity_and_hasher(residual.len() * 2, Default::default());
        for (rest, a) in residual {
            if a.norm() < PRUNE_THRESHOLD {
                continue;
            }
            for v in 0..d {
                let coef = bvec[v];
                if coef.norm() >= PRUNE_THRESHOLD {
                    out.insert(self.with_site(rest, site, v), a * coef * scale);
                }
            }
        }
        self.amps = out;
        self.prune();
        Ok(prob)
    }

    /// Expectation of a diagonal projector given by a per-configuration
    /// predicate (optionally weighted).
    pub fn expectation_diagonal<F: Fn(ConfigKey) -> f64>(&self, weight: F) -> f64 {
        self.amps.iter().map(|(&k, a)| weight(k) * a.norm_sqr()).sum()
    }

    /// Serialize as JSON lines of (config, re, im), sorted by config for
    /// determinism.
    pub fn snapshot(&self) -> String {
        let mut keys: Vec<ConfigKey> = self.amps.keys().copied().collect();
        keys.sort_unstable();
        let mut out = String::new();
        for k in keys {
            let a = self.amps[&k];
            let rec = SnapshotRecord { config: self.decode(k), re: a.re, im: a.im };
            out.push_str(&serde_json::to_string(&rec).unwrap());
            out.push('\n');
        }
        out
    }

    /// Parse a JSON-lines snapshot produced by [`SparseState::snapshot`].
    pub fn from_snapshot(
        group: Arc<FiniteGroup>,
        sites: usize,
        text: &str,
    ) -> Result<SparseState, QdError> {
        let mut state = SparseState::zero_config(group, sites)?;
        state.amps.clear();
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: SnapshotRecord = serde_json::from_str(line)?;
            if rec.config.len() != sites {
                return Err(QdError::State("snapshot config length mismatch".into()));
            }
            let key = state.encode(&rec.config);
            state.amps.insert(key, Complex64::new(rec.re, rec.im));
        }
        Ok(state)
    }
}

fn vec_to_column_matrix(v: &[Complex64]) -> Vec<Vec<Complex64>> {
    // Unitary completion mapping |0⟩ to v; only the first column is ever
    // consumed when the site starts in |0⟩.
    unitary_with_first_column(v)
}

/// Build a unitary whose first column is `v` (Gram–Schmidt completion of the
/// standard basis, deterministic).
pub fn unitary_with_first_column(v: &[Complex64]) -> Vec<Vec<Complex64>> {
    let d = v.len();
    let mut cols: Vec<Vec<Complex64>> = vec![v.to_vec()];
    for i in 0..d {
        let mut cand = vec![Complex64::new(0.0, 0.0); d];
        cand[i] = Complex64::new(1.0, 0.0);
        for c in &cols {
            let ip: Complex64 = c.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in cand.iter_mut().zip(c) {
                *x -= ip * y;
            }
        }
        let n: f64 = cand.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-9 {
            for x in cand.iter_mut() {
                *x /= n;
            }
            cols.push(cand);
        }
        if cols.len() == d {
            break;
        }
    }
    assert_eq!(cols.len(), d);
    // Transpose columns into row-major matrix.
    (0..d).map(|r| (0..d).map(|c| cols[c][r]).collect()).collect()
}

/// Unitary sending basis state `from` to basis state `to` (a transposition),
/// used to reset ancillas from known post-measurement states.
pub fn basis_swap_unitary(d: usize, from: &[Complex64], to: &[Complex64]) -> Vec<Vec<Complex64>> {
    // Build U = |to⟩⟨from| + |from'⟩⟨to'| + … via two completions:
    // U = A B† where B maps |0⟩→from and A maps |0⟩→to.
    let a = unitary_with_first_column(to);
    let b = unitary_with_first_column(from);
    // a · b†
    let mut out = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                out[i][j] += a[i][k] * b[j][k].conj();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_s3, s3};

    fn s3_arc() -> Arc<FiniteGroup> {
        Arc::new(build_s3())
    }

    fn logical_vec(d: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn product_states() {
        let g = s3_arc();
        // All sites |e⟩: support 1, amplitude 1.
        let st = SparseState::product(g.clone(), &vec![logical_vec(6, 0); 4]).unwrap();
        assert_eq!(st.support(), 1);
        assert!((st.amps[&0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // One site in |~0⟩, rest |e⟩: support |G| with amplitudes 1/√|G|.
        let fourier = LocalBasis::fourier(&g);
        let mut assign = vec![logical_vec(6, 0); 3];
        assign[1] = fourier.vectors[0].clone();
        let st = SparseState::product(g.clone(), &assign).unwrap();
        assert_eq!(st.support(), 6);
        for a in st.amps.values() {
            assert!((a.norm() - 1.0 / 6f64.sqrt()).abs() < 1e-12);
        }
        // Unnormalized input rejected.
        let bad = vec![vec![Complex64::new(0.5, 0.0); 6]; 1];
        assert!(SparseState::product(g, &bad).is_err());
    }

    fn perm_matrix(perm: &crate::group::Permutation) -> Vec<Vec<Complex64>> {
        let d = perm.0.len();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for (src, &dst) in perm.0.iter().enumerate() {
            m[dst][src] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[test]
    fn apply_single_left_action() {
        let g = s3_arc();
        let mut st = SparseState::zero_config(g.clone(), 2).unwrap();
        let l_t0 = perm_matrix(&g.left_regular(s3::T0));
        st.apply_single(0, &l_t0).unwrap();
        assert_eq!(st.support(), 1);
        let key = *st.amps.keys().next().unwrap();
        assert_eq!(st.site_value(key, 0), s3::T0.0);
        assert_eq!(st.site_value(key, 1), 0);
        // U then U† is the identity.
        let fourier = LocalBasis::fourier(&g);
        let u = fourier.vectors.clone();
        let udag: Vec<Vec<Complex64>> =
            (0..6).map(|i| (0..6).map(|j| u[j][i].conj()).collect()).collect();
        let before = st.clone();
        st.apply_single(1, &u).unwrap();
        st.apply_single(1, &udag).unwrap();
        assert!((st.fidelity(&before).unwrap() - 1.0).abs() < 1e-9);
        // Z^0 is the identity, and non-unitary input is rejected.
        let z0: Vec<Vec<Complex64>> = (0..6)
            .map(|i| (0..6).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        st.apply_single(0, &z0).unwrap();
        let bad = vec![vec![Complex64::new(2.0, 0.0); 6]; 6];
        assert!(st.apply_single(0, &bad).is_err());
    }

    #[test]
    fn controlled_ops() {
        let g = s3_arc();
        let ident: Vec<Vec<Complex64>> = perm_matrix(&g.left_regular(s3::E));
        // identity family is the identity
        let mut st = SparseState::zero_config(g.clone(), 2).unwrap();
        st.apply_controlled(0, 1, &vec![ident.clone(); 6]).unwrap();
        assert_eq!(st.support(), 1);
        // control == target rejected
        assert!(st.apply_controlled(1, 1, &vec![ident.clone(); 6]).is_err());
        // control in superposition entangles: put site 0 in |~0⟩ and apply
        // controlled L_g: resulting support 6, site1 = site0.
        let fourier = LocalBasis::fourier(&g);
        st.apply_single(0, &fourier.vectors).unwrap();
        let family: Vec<Vec<Vec<Complex64>>> =
            g.elements().map(|h| perm_matrix(&g.left_regular(h))).collect();
        st.apply_controlled(0, 1, &family).unwrap();
        assert_eq!(st.support(), 6);
        for &k in st.amps.keys() {
            assert_eq!(st.site_value(k, 0), st.site_value(k, 1));
        }
        assert!((st.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn measurement_probabilities_and_collapse() {
        let g = s3_arc();
        // |e⟩ measured logically: outcome e with probability 1.
        let st = SparseState::zero_config(g.clone(), 1).unwrap();
        let logical = LocalBasis::logical(&g);
        let probs = st.measure_probs(0, &logical);
        assert!((probs[0] - 1.0).abs() < 1e-12);
        // |~0⟩ measured in fourier: outcome 0 with probability 1; measured
        // logically: uniform.
        let fourier = LocalBasis::fourier(&g);
        let mut st = SparseState::zero_config(g.clone(), 1).unwrap();
        st.apply_single(0, &fourier.vectors).unwrap();
        let probs = st.measure_probs(0, &fourier);
        assert!((probs[0] - 1.0).abs() < 1e-9);
        let probs = st.measure_probs(0, &logical);
        for p in &probs {
            assert!((p - 1.0 / 6.0).abs() < 1e-9);
        }
        // Collapse renormalizes and reports the probability.
        let mut st2 = st.clone();
        let p = st2.collapse(0, &logical, 3).unwrap();
        assert!((p - 1.0 / 6.0).abs() < 1e-9);
        assert!((st2.norm_sqr() - 1.0).abs() < 1e-9);
        // Impossible postselect is a loud failure.
        let mut st3 = SparseState::zero_config(g.clone(), 1).unwrap();
        let err = st3.collapse(0, &logical, 4).unwrap_err();
        assert!(matches!(err, QdError::ImpossibleOutcome { .. }));
        // Enumerated probabilities sum to 1.
        let total: f64 = st.measure_probs(0, &fourier).iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inner_products() {
        let g = s3_arc();
        let a = SparseState::zero_config(g.clone(), 3).unwrap();
        assert!((a.inner(&a).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let mut b = a.clone();
        let l = perm_matrix(&g.left_regular(s3::CP));
        b.apply_single(2, &l).unwrap();
        assert!(a.inner(&b).unwrap().norm() < 1e-12);
        let c = SparseState::zero_config(g, 2).unwrap();
        assert!(a.inner(&c).is_err());
    }

    #[test]
    fn snapshot_roundtrip() {
        let g = s3_arc();
        let fourier = LocalBasis::fourier(&g);
        let mut st = SparseState::zero_config(g.clone(), 3).unwrap();
        st.apply_single(1, &fourier.vectors).unwrap();
        let text = st.snapshot();
        let back = SparseState::from_snapshot(g, 3, &text).unwrap();
        assert!((st.fidelity(&back).unwrap() - 1.0).abs() < 1e-12);
        // Deterministic output.
        assert_eq!(text, back.snapshot());
    }

    #[test]
    fn basis_reset_unitaries() {
        let g = s3_arc();
        let fourier = LocalBasis::fourier(&g);
        // Send |~2⟩ back to |e⟩.
        let target = logical_vec(6, 0);
        let u = basis_swap_unitary(6, &fourier.vectors[2], &target);
        let mut st = SparseState::zero_config(g, 1).unwrap();
        st.apply_single(0, &fourier.vectors).unwrap();
        let mut st2 = st.clone();
        st2.collapse(0, &fourier, 2).unwrap();
        st2.apply_single(0, &u).unwrap();
        assert_eq!(st2.support(), 1);
        let key = *st2.amps.keys().next().unwrap();
        assert_eq!(st2.site_value(key, 0), 0);
    }
}
