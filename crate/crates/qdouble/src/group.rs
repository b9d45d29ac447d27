//! Exact finite-group arithmetic and representation data.
//!
//! Everything downstream (quantum double algebra, lattice operators,
//! protocols) consumes the tables built here: multiplication and inverse
//! tables, conjugacy classes with centralizers and transversals, and unitary
//! irreps with characters. The two groups the simulator needs are S₃ (the
//! smallest non-Abelian group, elements ordered {e, t₀, t₁, t₂, c₊, c₋}) and
//! the cyclic groups ℤₙ.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::QdError;

/// Element of a finite group, identified by its index in the canonical
/// element ordering of the owning [`FiniteGroup`]. Index 0 is always the
/// identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub usize);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);
}

/// Canonical S₃ element indices.
pub mod s3 {
    use super::GroupElement;
    pub const E: GroupElement = GroupElement(0);
    pub const T0: GroupElement = GroupElement(1);
    pub const T1: GroupElement = GroupElement(2);
    pub const T2: GroupElement = GroupElement(3);
    pub const CP: GroupElement = GroupElement(4);
    pub const CM: GroupElement = GroupElement(5);
}

/// A conjugacy class together with the data needed to build quantum double
/// irreps: an ordered member list, the centralizer of the first member, and
/// a transversal x_h with h = x_h · h₁ · x_h⁻¹ (x_{h₁} = e).
#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    pub representative: GroupElement,
    pub members: Vec<GroupElement>,
    pub centralizer: Vec<GroupElement>,
    pub transversal: Vec<GroupElement>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Position of `g` in the ordered member list, if it belongs to the class.
    pub fn member_index(&self, g: GroupElement) -> Option<usize> {
        self.members.iter().position(|&m| m == g)
    }
}

/// A unitary irreducible representation: one matrix per group element (in
/// element-index order) plus the character table.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    /// matrices[g][row][col]
    pub matrices: Vec<Vec<Vec<Complex64>>>,
    pub characters: Vec<Complex64>,
}

impl Irrep {
    pub fn matrix(&self, g: GroupElement) -> &Vec<Vec<Complex64>> {
        &self.matrices[g.0]
    }

    pub fn character(&self, g: GroupElement) -> Complex64 {
        self.characters[g.0]
    }
}

/// Permutation of element indices, used for the regular representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// Composition acting as `self` after `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }
}

/// S₃ encoded through its ℤ₃ ⋊ ℤ₂ structure: g = c₊^r t₀^s.
#[derive(Debug, Clone)]
pub struct SemidirectCode {
    encode: Vec<(u8, u8)>,
    decode: [[GroupElement; 2]; 3],
}

impl SemidirectCode {
    pub fn encode(&self, g: GroupElement) -> (u8, u8) {
        self.encode[g.0]
    }

    pub fn decode(&self, r: u8, s: u8) -> GroupElement {
        self.decode[r as usize][s as usize]
    }

    /// Product computed in the (r, s) presentation: b^q a b^{-q} = a^{2^q}.
    pub fn mul(&self, a: (u8, u8), b: (u8, u8)) -> (u8, u8) {
        let twist = if a.1 == 1 { 2 * b.0 } else { b.0 };
        (((a.0 + twist) % 3), (a.1 + b.1) % 2)
    }
}

/// A finite group given by exhaustive tables, with conjugacy classes and
/// unitary irreps attached.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub name: String,
    pub order: usize,
    /// Element names in index order.
    pub element_names: Vec<String>,
    mul_table: Vec<usize>,
    inv_table: Vec<usize>,
    pub classes: Vec<ConjugacyClass>,
    pub irreps: Vec<Irrep>,
}

impl FiniteGroup {
    pub fn identity(&self) -> GroupElement {
        GroupElement(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order).map(GroupElement)
    }

    pub fn mul(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        GroupElement(self.mul_table[g.0 * self.order + h.0])
    }

    pub fn inv(&self, g: GroupElement) -> GroupElement {
        GroupElement(self.inv_table[g.0])
    }

    /// Conjugation g h g⁻¹.
    pub fn conjugate(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn element_name(&self, g: GroupElement) -> &str {
        &self.element_names[g.0]
    }

    /// Index of the conjugacy class containing `g`.
    pub fn class_of(&self, g: GroupElement) -> usize {
        self.classes
            .iter()
            .position(|c| c.members.contains(&g))
            .expect("element belongs to some class")
    }

    /// Left regular action L_h: g ↦ hg, as a permutation of element indices.
    pub fn left_regular(&self, h: GroupElement) -> Permutation {
        Permutation((0..self.order).map(|g| self.mul(h, GroupElement(g)).0).collect())
    }

    /// Right regular action R_h: g ↦ gh.
    pub fn right_regular(&self, h: GroupElement) -> Permutation {
        Permutation((0..self.order).map(|g| self.mul(GroupElement(g), h).0).collect())
    }

    /// The centralizer of class `class_idx` as a standalone group whose
    /// element index i corresponds to `classes[class_idx].centralizer[i]`,
    /// with its own irreps attached.
    pub fn centralizer_group(&self, class_idx: usize) -> FiniteGroup {
        let cls = &self.classes[class_idx];
        let elems = &cls.centralizer;
        let n = elems.len();
        let pos = |g: GroupElement| elems.iter().position(|&x| x == g).expect("closed");
        let mut mul_table = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                mul_table[i * n + j] = pos(self.mul(elems[i], elems[j]));
            }
        }
        let inv_table: Vec<usize> = (0..n).map(|i| pos(self.inv(elems[i]))).collect();
        let element_names: Vec<String> =
            elems.iter().map(|&g| self.element_name(g).to_string()).collect();
        let mut sub = FiniteGroup {
            name: format!("N_{}", self.element_name(cls.representative)),
            order: n,
            element_names,
            mul_table,
            inv_table,
            classes: Vec::new(),
            irreps: Vec::new(),
        };
        sub.classes = conjugacy_classes(&sub);
        sub.irreps = irreps_for_small_group(&sub);
        sub.validate().expect("centralizer group tables are consistent");
        sub
    }

    /// Exhaustive check of the group axioms, class structure and irrep
    /// properties. Cheap for |G| ≤ 12.
    pub fn validate(&self) -> Result<(), QdError> {
        let n = self.order;
        let e = GroupElement(0);
        for g in self.elements() {
            if self.mul(e, g) != g || self.mul(g, e) != g {
                return Err(QdError::Group(format!("{} is not a two-sided identity", g.0)));
            }
            let gi = self.inv(g);
            if self.mul(g, gi) != e || self.mul(gi, g) != e {
                return Err(QdError::Group(format!("inverse fails for element {}", g.0)));
            }
        }
        if n <= 12 {
            for a in self.elements() {
                for b in self.elements() {
                    for c in self.elements() {
                        if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                            return Err(QdError::Group("associativity fails".into()));
                        }
                    }
                }
            }
        }
        // Classes partition the element set.
        let mut seen = vec![false; n];
        for cls in &self.classes {
            if cls.members.len() * cls.centralizer.len() != n {
                return Err(QdError::Group("orbit-stabilizer count fails".into()));
            }
            for (&m, &x) in cls.members.iter().zip(&cls.transversal) {
                if seen[m.0] {
                    return Err(QdError::Group("classes overlap".into()));
                }
                seen[m.0] = true;
                if self.conjugate(x, cls.representative) != m {
                    return Err(QdError::Group("transversal fails".into()));
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(QdError::Group("classes do not cover the group".into()));
        }
        // Irrep dimensions, homomorphism property, unitarity, characters.
        let sq: usize = self.irreps.iter().map(|r| r.dim * r.dim).sum();
        if sq != n {
            return Err(QdError::Group(format!("sum of irrep dim^2 is {sq}, want {n}")));
        }
        for r in &self.irreps {
            for g in self.elements() {
                if !is_unitary(&r.matrices[g.0], 1e-12) {
                    return Err(QdError::Group(format!("{}({}) not unitary", r.label, g.0)));
                }
                let tr: Complex64 = (0..r.dim).map(|i| r.matrices[g.0][i][i]).sum();
                if (tr - r.characters[g.0]).norm() > 1e-12 {
                    return Err(QdError::Group(format!("character mismatch in {}", r.label)));
                }
                for h in self.elements() {
                    let prod = mat_mul(&r.matrices[g.0], &r.matrices[h.0]);
                    let gh = self.mul(g, h);
                    if mat_dist(&prod, &r.matrices[gh.0]) > 1e-12 {
                        return Err(QdError::Group(format!("{} not a homomorphism", r.label)));
                    }
                }
            }
        }
        // Character orthogonality.
        for (i, r) in self.irreps.iter().enumerate() {
            for (j, r2) in self.irreps.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for g in self.elements() {
                    acc += r.characters[g.0] * r2.characters[g.0].conj();
                }
                acc /= n as f64;
                let want = if i == j { 1.0 } else { 0.0 };
                if (acc - want).norm() > 1e-12 {
                    return Err(QdError::Group("character orthogonality fails".into()));
                }
            }
        }
        Ok(())
    }
}

/// ξ = exp(2πi/3), the primitive cube root of unity used throughout the S₃
/// representation data.
pub fn xi() -> Complex64 {
    Complex64::from_polar(1.0, TAU / 3.0)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Build S₃ with the canonical ordering {e, t₀, t₁, t₂, c₊, c₋}.
///
/// The multiplication table is generated from the permutation action on
/// {0, 1, 2} (t₀ = (01), t₁ = (12), t₂ = (20), c₊ = (012), c₋ = (021));
/// the printed relations t_j t_k = c_{ε}, c_ρ t_i = t_{i−ρ}, … are asserted
/// against it in the test suite as a transcription cross-check.
pub fn build_s3() -> FiniteGroup {
    // perm[x] = image of x; product g·h acts as g after h.
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2], // e
        [1, 0, 2], // t0 = (01)
        [0, 2, 1], // t1 = (12)
        [2, 1, 0], // t2 = (20)
        [1, 2, 0], // c+ = (012): 0->1->2->0
        [2, 0, 1], // c- = (021)
    ];
    let compose = |g: &[usize; 3], h: &[usize; 3]| -> [usize; 3] {
        [g[h[0]], g[h[1]], g[h[2]]]
    };
    let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).expect("closed");
    let n = 6;
    let mut mul_table = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            mul_table[i * n + j] = index_of(&compose(&perms[i], &perms[j]));
        }
    }
    let mut inv_table = vec![0usize; n];
    for i in 0..n {
        inv_table[i] = (0..n).find(|&j| mul_table[i * n + j] == 0).unwrap();
    }
    let element_names = ["e", "t0", "t1", "t2", "c+", "c-"]
        .iter()
        .map(|s| s.to_string())
        .collect();

    let xi = xi();
    let xis = xi.conj();
    let one = c(1.0);
    let zero = c(0.0);
    // Appendix-style R2 matrices: diagonal on rotations, antidiagonal on
    // transpositions.
    let r2_mats = vec![
        vec![vec![one, zero], vec![zero, one]],   // e
        vec![vec![zero, one], vec![one, zero]],   // t0
        vec![vec![zero, xis], vec![xi, zero]],    // t1
        vec![vec![zero, xi], vec![xis, zero]],    // t2
        vec![vec![xi, zero], vec![zero, xis]],    // c+
        vec![vec![xis, zero], vec![zero, xi]],    // c-
    ];
    let irreps = vec![
        Irrep {
            label: "R1+".into(),
            dim: 1,
            matrices: (0..6).map(|_| vec![vec![one]]).collect(),
            characters: vec![one; 6],
        },
        Irrep {
            label: "R1-".into(),
            dim: 1,
            matrices: [1.0, -1.0, -1.0, -1.0, 1.0, 1.0]
                .iter()
                .map(|&v| vec![vec![c(v)]])
                .collect(),
            characters: [1.0, -1.0, -1.0, -1.0, 1.0, 1.0].iter().map(|&v| c(v)).collect(),
        },
        Irrep {
            label: "R2".into(),
            dim: 2,
            // χ_{R2} = (2, 0, 0, 0, −1, −1), stored exactly; the traces of
            // the transcendental matrices match within 1e-12.
            characters: [2.0, 0.0, 0.0, 0.0, -1.0, -1.0].iter().map(|&v| c(v)).collect(),
            matrices: r2_mats,
        },
    ];

    let mut group = FiniteGroup {
        name: "S3".into(),
        order: n,
        element_names,
        mul_table,
        inv_table,
        classes: Vec::new(),
        irreps,
    };
    group.classes = conjugacy_classes(&group);
    group.validate().expect("S3 tables are consistent");
    group
}

/// Build ℤₙ with elements g_j = g₁^j and the n one-dimensional irreps
/// R₁^k(g_j) = exp(2πi jk / n).
pub fn build_cyclic(n: usize) -> Result<FiniteGroup, QdError> {
    if n < 2 {
        return Err(QdError::Group(format!("cyclic group needs n >= 2, got {n}")));
    }
    let mut mul_table = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            mul_table[i * n + j] = (i + j) % n;
        }
    }
    let inv_table: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    let element_names = (0..n).map(|i| format!("g{i}")).collect();
    let irreps = (0..n)
        .map(|k| {
            let chars: Vec<Complex64> = (0..n)
                .map(|j| Complex64::from_polar(1.0, TAU * (j * k) as f64 / n as f64))
                .collect();
            Irrep {
                label: format!("R1^{k}"),
                dim: 1,
                matrices: chars.iter().map(|&x| vec![vec![x]]).collect(),
                characters: chars,
            }
        })
        .collect();
    let mut group = FiniteGroup {
        name: format!("Z{n}"),
        order: n,
        element_names,
        mul_table,
        inv_table,
        classes: Vec::new(),
        irreps,
    };
    group.classes = conjugacy_classes(&group);
    group.validate()?;
    Ok(group)
}

/// S₃'s semidirect-product encoding g = c₊^r t₀^s.
pub fn semidirect_code(group: &FiniteGroup) -> SemidirectCode {
    assert_eq!(group.name, "S3", "semidirect encoding is specific to S3");
    let mut encode = vec![(0u8, 0u8); 6];
    let mut decode = [[GroupElement(0); 2]; 3];
    for r in 0..3u8 {
        for s in 0..2u8 {
            let mut g = GroupElement(0);
            for _ in 0..r {
                g = group.mul(g, s3::CP);
            }
            for _ in 0..s {
                g = group.mul(g, s3::T0);
            }
            encode[g.0] = (r, s);
            decode[r as usize][s as usize] = g;
        }
    }
    SemidirectCode { encode, decode }
}

/// Conjugacy classes with representative = lowest-index member and the
/// transversal chosen deterministically by scanning elements in index order.
fn conjugacy_classes(group: &FiniteGroup) -> Vec<ConjugacyClass> {
    let n = group.order;
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for rep_idx in 0..n {
        if assigned[rep_idx] {
            continue;
        }
        let rep = GroupElement(rep_idx);
        let mut members: Vec<GroupElement> = Vec::new();
        let mut transversal: Vec<GroupElement> = Vec::new();
        for m in 0..n {
            let m = GroupElement(m);
            if group.elements().any(|x| group.conjugate(x, rep) == m) && !members.contains(&m) {
                let x = group
                    .elements()
                    .find(|&x| group.conjugate(x, rep) == m)
                    .unwrap();
                members.push(m);
                transversal.push(x);
                assigned[m.0] = true;
            }
        }
        // Put the representative first with x = e.
        let rep_pos = members.iter().position(|&m| m == rep).unwrap();
        members.swap(0, rep_pos);
        transversal.swap(0, rep_pos);
        transversal[0] = GroupElement(0);
        let centralizer: Vec<GroupElement> = group
            .elements()
            .filter(|&x| group.mul(x, rep) == group.mul(rep, x))
            .collect();
        classes.push(ConjugacyClass { representative: rep, members, centralizer, transversal });
    }
    classes
}

/// Irreps for the small groups that arise as S₃ centralizers (ℤ₂, ℤ₃, S₃
/// itself) and for ℤₙ. Cyclic groups get the DFT characters; a copy of S₃
/// gets the hand-built tables.
fn irreps_for_small_group(group: &FiniteGroup) -> Vec<Irrep> {
    let n = group.order;
    // Cyclic: single generator whose powers cover the group.
    if let Some(gen) = group.elements().find(|&g| {
        let mut covered = vec![false; n];
        let mut x = GroupElement(0);
        for _ in 0..n {
            covered[x.0] = true;
            x = group.mul(x, g);
        }
        covered.iter().all(|&b| b)
    }) {
        // Element g = gen^p: R1^k(g) = exp(2πi p k / n).
        let mut power = vec![0usize; n];
        let mut x = GroupElement(0);
        for p in 0..n {
            power[x.0] = p;
            x = group.mul(x, gen);
        }
        return (0..n)
            .map(|k| {
                let chars: Vec<Complex64> = (0..n)
                    .map(|g| Complex64::from_polar(1.0, TAU * (power[g] * k) as f64 / n as f64))
                    .collect();
                Irrep {
                    label: format!("R1^{k}"),
                    dim: 1,
                    matrices: chars.iter().map(|&x| vec![vec![x]]).collect(),
                    characters: chars,
                }
            })
            .collect();
    }
    if n == 6 {
        // Non-abelian order 6: S₃ up to the element ordering of the
        // centralizer list. Map through the canonical S₃ by element name.
        let s3 = build_s3();
        let perm: Vec<usize> = group
            .element_names
            .iter()
            .map(|name| s3.element_names.iter().position(|x| x == name).expect("S3 names"))
            .collect();
        return s3
            .irreps
            .iter()
            .map(|r| Irrep {
                label: r.label.clone(),
                dim: r.dim,
                matrices: perm.iter().map(|&p| r.matrices[p].clone()).collect(),
                characters: perm.iter().map(|&p| r.characters[p]).collect(),
            })
            .collect();
    }
    panic!("no irrep table for group {} of order {n}", group.name);
}

pub(crate) fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            for l in 0..k {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

pub(crate) fn mat_dist(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    let mut d: f64 = 0.0;
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            d = d.max((x - y).norm());
        }
    }
    d
}

pub(crate) fn is_unitary(m: &[Vec<Complex64>], tol: f64) -> bool {
    let n = m.len();
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += m[k][i].conj() * m[k][j];
            }
            let want = if i == j { 1.0 } else { 0.0 };
            if (acc - want).norm() > tol {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_multiplication_matches_printed_relations() {
        let g = build_s3();
        // t_j t_k = c_ε with k = j + ε mod 3
        assert_eq!(g.mul(s3::T0, s3::T1), s3::CP);
        assert_eq!(g.mul(s3::T1, s3::T2), s3::CP);
        assert_eq!(g.mul(s3::T2, s3::T0), s3::CP);
        assert_eq!(g.mul(s3::T1, s3::T0), s3::CM);
        // t_i t_i = e
        for t in [s3::T0, s3::T1, s3::T2] {
            assert_eq!(g.mul(t, t), s3::E);
        }
        // c_ρ t_i = t_{i-ρ}, t_i c_ρ = t_{i+ρ}
        assert_eq!(g.mul(s3::CP, s3::T0), s3::T2);
        assert_eq!(g.mul(s3::CM, s3::T0), s3::T1);
        assert_eq!(g.mul(s3::T0, s3::CP), s3::T1);
        // c_ρ c_ρ = c_{-ρ}, c_+ c_- = e
        assert_eq!(g.mul(s3::CP, s3::CP), s3::CM);
        assert_eq!(g.mul(s3::CP, s3::CM), s3::E);
        assert_eq!(g.mul(s3::E, s3::CM), s3::CM);
    }

    #[test]
    fn s3_inverses_and_conjugation() {
        let g = build_s3();
        assert_eq!(g.inv(s3::T1), s3::T1);
        assert_eq!(g.inv(s3::E), s3::E);
        assert_eq!(g.inv(s3::CP), s3::CM);
        // c_ρ t_i c_{-ρ} = t_{i+ρ}
        assert_eq!(g.conjugate(s3::CP, s3::T0), s3::T1);
        assert_eq!(g.conjugate(s3::CP, s3::T2), s3::T0);
        // t_i c_ρ t_i = c_{-ρ}
        assert_eq!(g.conjugate(s3::T0, s3::CP), s3::CM);
        for x in g.elements() {
            assert_eq!(g.conjugate(x, s3::E), s3::E);
        }
    }

    #[test]
    fn s3_class_structure() {
        let g = build_s3();
        let mut sizes: Vec<usize> = g.classes.iter().map(|c| c.size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        let dims: Vec<usize> = g.irreps.iter().map(|r| r.dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        // Centralizers: N_[e] = S3, N_[t] ≅ Z2, N_[c] ≅ Z3.
        let t_class = g.class_of(s3::T0);
        let c_class = g.class_of(s3::CP);
        assert_eq!(g.classes[t_class].centralizer.len(), 2);
        assert_eq!(g.classes[c_class].centralizer.len(), 3);
        assert_eq!(g.classes[g.class_of(s3::E)].centralizer.len(), 6);
        // χ_{R2}(c_+) = −1, χ_{R2}(t_j) = 0
        let r2 = &g.irreps[2];
        assert!((r2.character(s3::CP) - c(-1.0)).norm() < 1e-12);
        assert!(r2.character(s3::T0).norm() < 1e-12);
    }

    /// Regular representation matrices transcribed from the printed tables;
    /// the generated permutations must reproduce them column by column.
    #[test]
    fn regular_representations_match_printed_matrices() {
        let g = build_s3();
        // L_h column g holds hg: printed tables give, for each h, the list
        // of images [h·e, h·t0, h·t1, h·t2, h·c+, h·c-].
        let l_images: [[usize; 6]; 6] = [
            [0, 1, 2, 3, 4, 5],
            [1, 0, 4, 5, 2, 3], // t0: e->t0, t0->e, t1->c+, t2->c-, c+->t1, c-->t2
            [2, 5, 0, 4, 3, 1], // t1
            [3, 4, 5, 0, 1, 2], // t2
            [4, 3, 1, 2, 5, 0], // c+
            [5, 2, 3, 1, 0, 4], // c-
        ];
        let r_images: [[usize; 6]; 6] = [
            [0, 1, 2, 3, 4, 5],
            [1, 0, 5, 4, 3, 2], // t0 right action
            [2, 4, 0, 5, 1, 3], // t1
            [3, 5, 4, 0, 2, 1], // t2
            [4, 2, 3, 1, 5, 0], // c+
            [5, 3, 1, 2, 0, 4], // c-
        ];
        for h in 0..6 {
            let lh = g.left_regular(GroupElement(h));
            let rh = g.right_regular(GroupElement(h));
            for x in 0..6 {
                assert_eq!(lh.apply(x), l_images[h][x], "L_{h} on {x}");
                assert_eq!(rh.apply(x), r_images[h][x], "R_{h} on {x}");
            }
        }
        // Spot checks from the printed L_{t0} matrix.
        let lt0 = g.left_regular(s3::T0);
        assert_eq!(lt0.apply(s3::E.0), s3::T0.0);
        assert_eq!(lt0.apply(s3::CP.0), s3::T1.0);
    }

    #[test]
    fn regular_representations_compose_and_commute() {
        let g = build_s3();
        for a in g.elements() {
            for b in g.elements() {
                let lab = g.left_regular(a).compose(&g.left_regular(b));
                assert_eq!(lab, g.left_regular(g.mul(a, b)));
                // Right multiplication inverts the order.
                let rab = g.right_regular(a).compose(&g.right_regular(b));
                assert_eq!(rab, g.right_regular(g.mul(b, a)));
                // [L_a, R_b] = 0, all 36 pairs.
                let lr = g.left_regular(a).compose(&g.right_regular(b));
                let rl = g.right_regular(b).compose(&g.left_regular(a));
                assert_eq!(lr, rl);
            }
        }
        assert_eq!(g.right_regular(s3::E), Permutation((0..6).collect()));
    }

    #[test]
    fn r2_matrix_entries_as_printed() {
        let g = build_s3();
        let r2 = &g.irreps[2];
        let xi = xi();
        assert!((r2.matrix(s3::T1)[0][1] - xi.conj()).norm() < 1e-12);
        assert!((r2.matrix(s3::T1)[1][0] - xi).norm() < 1e-12);
        assert!((r2.matrix(s3::CP)[0][0] - xi).norm() < 1e-12);
        assert!((r2.matrix(s3::T0)[0][1] - c(1.0)).norm() < 1e-12);
        assert!(r2.matrix(s3::T0)[0][0].norm() < 1e-12);
    }

    #[test]
    fn cyclic_groups() {
        assert!(build_cyclic(1).is_err());
        let z2 = build_cyclic(2).unwrap();
        // L_{g1} is the bit flip.
        assert_eq!(z2.left_regular(GroupElement(1)).0, vec![1, 0]);
        assert_eq!(z2.left_regular(GroupElement(1)).0, z2.right_regular(GroupElement(1)).0);
        let z3 = build_cyclic(3).unwrap();
        assert_eq!(z3.classes.len(), 3);
        let z4 = build_cyclic(4).unwrap();
        let sq: usize = z4.irreps.iter().map(|r| r.dim * r.dim).sum();
        assert_eq!(sq, 4);
        build_cyclic(5).unwrap();
        build_cyclic(6).unwrap();
    }

    #[test]
    fn semidirect_encoding_roundtrip_and_product() {
        let g = build_s3();
        let code = semidirect_code(&g);
        for x in g.elements() {
            let (r, s) = code.encode(x);
            assert_eq!(code.decode(r, s), x);
        }
        for x in g.elements() {
            for y in g.elements() {
                let prod = code.mul(code.encode(x), code.encode(y));
                assert_eq!(prod, code.encode(g.mul(x, y)));
            }
        }
        assert_eq!(code.encode(s3::E), (0, 0));
        assert_eq!(code.encode(s3::T0), (0, 1));
        assert_eq!(code.encode(s3::CP), (1, 0));
    }

    #[test]
    fn centralizer_groups_are_consistent() {
        let g = build_s3();
        for idx in 0..g.classes.len() {
            let sub = g.centralizer_group(idx);
            sub.validate().unwrap();
        }
        let t_cent = g.centralizer_group(g.class_of(s3::T0));
        assert_eq!(t_cent.order, 2);
        assert_eq!(t_cent.irreps.len(), 2);
        let c_cent = g.centralizer_group(g.class_of(s3::CP));
        assert_eq!(c_cent.order, 3);
        // R1^1(c_+) = ξ in the centralizer indexing.
        let cp_pos = c_cent.element_names.iter().position(|n| n == "c+").unwrap();
        assert!((c_cent.irreps[1].characters[cp_pos] - xi()).norm() < 1e-12);
    }
}
