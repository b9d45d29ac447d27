//! Measurement-based ground-state synthesis.
//!
//! Starting from edges and face ancillas in |e⟩ and vertex ancillas in |~0⟩,
//! each vertex is processed as: controlled gauge transformation W(v),
//! Fourier-basis measurement of the vertex ancilla (every outcome has
//! probability 1/|G|), then a phase correction Z^j on a designated fresh
//! edge. The sweep runs column by column, correcting on the right-pointing
//! edge; the last column corrects on the up-pointing edge; the final vertex
//! needs no projection at all.

use crate::error::QdError;
use crate::lattice::Vertex;
use crate::model::{synthesis_input, zpow_matrix};
use crate::state::LocalBasis;

use super::ProtocolRun;

/// Run ground-state synthesis in place on a fresh synthesis input state
/// (the caller builds the state with [`synthesis_input`]).
pub fn ground_state_synthesis(run: &mut ProtocolRun) -> Result<(), QdError> {
    let geom = run.geom.clone();
    let group = run.group();
    let fourier = LocalBasis::fourier(&group);
    let reset = crate::state::basis_swap_unitary(
        group.order,
        &fourier.vectors[0],
        &{
            let mut v = vec![num_complex::Complex64::new(0.0, 0.0); group.order];
            v[0] = num_complex::Complex64::new(1.0, 0.0);
            v
        },
    );
    let project = |run: &mut ProtocolRun,
                       vx: Vertex,
                       correction_edge: usize|
     -> Result<(), QdError> {
        let anc = geom.vertex_site(vx);
        apply_controlled_gauge_run(run, anc, vx)?;
        let outcome = run.measure("measure-vertex-fourier", anc, &fourier)?;
        if outcome != 0 {
            run.apply_single("z-correction", correction_edge, &zpow_matrix(&group, outcome))?;
        }
        // Park the measured ancilla back in |e⟩ for later protocols. The
        // rotation depends only on the known outcome.
        let back = crate::state::basis_swap_unitary(
            group.order,
            &fourier.vectors[outcome],
            &{
                let mut v = vec![num_complex::Complex64::new(0.0, 0.0); group.order];
                v[0] = num_complex::Complex64::new(1.0, 0.0);
                v
            },
        );
        run.apply_single("reset-ancilla", anc, &back)?;
        Ok(())
    };
    let (rows, cols) = (geom.rows, geom.cols);
    for k in 0..cols {
        for j in 0..=rows {
            project(run, Vertex { row: j, col: k }, geom.h_edge(j, k))?;
        }
    }
    for j in 0..rows {
        project(run, Vertex { row: j, col: cols }, geom.v_edge(j, cols))?;
    }
    // The remaining vertex ancilla at v_{n,m} was never used; rotate it from
    // |~0⟩ back to |e⟩ so every ancilla ends in the fiducial state.
    let last = geom.vertex_site(Vertex { row: rows, col: cols });
    run.apply_single("reset-ancilla", last, &reset)?;
    Ok(())
}

fn apply_controlled_gauge_run(
    run: &mut ProtocolRun,
    control: usize,
    vx: Vertex,
) -> Result<(), QdError> {
    let geom = run.geom.clone();
    let group = run.group();
    for (edge, dir) in geom.vertex_star(vx) {
        let family = crate::model::gauge_family_for_edge(&group, dir, |g| g);
        run.apply_controlled("controlled-gauge", control, edge, &family)?;
    }
    Ok(())
}

/// Convenience: build the synthesis input for `geom` and run the protocol,
/// returning the run for further protocol steps.
pub fn synthesize_ground_state(
    group: std::sync::Arc<crate::group::FiniteGroup>,
    geom: std::sync::Arc<crate::lattice::LatticeGeometry>,
    policy: crate::state::OutcomePolicy,
) -> Result<ProtocolRun, QdError> {
    let input = synthesis_input(group, &geom)?;
    let mut run = ProtocolRun::new(input, geom, policy);
    ground_state_synthesis(&mut run)?;
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_cyclic, build_s3};
    use crate::lattice::build_lattice;
    use crate::model::{
        energy, face_projector_expect, ground_state_by_projection, vertex_projector_expect,
    };
    use crate::state::OutcomePolicy;
    use std::sync::Arc;

    #[test]
    fn s3_1x1_synthesis() {
        let group = Arc::new(build_s3());
        let geom = Arc::new(build_lattice(1, 1).unwrap());
        let run =
            synthesize_ground_state(group.clone(), geom.clone(), OutcomePolicy::Sample { seed: 7 })
                .unwrap();
        let st = &run.state;
        assert_eq!(st.support(), 6usize.pow(3));
        for vx in geom.vertices().collect::<Vec<_>>() {
            assert!((vertex_projector_expect(st, &geom, vx).unwrap() - 1.0).abs() < 1e-9);
        }
        for fc in geom.faces().collect::<Vec<_>>() {
            assert!((face_projector_expect(st, &geom, fc).unwrap() - 1.0).abs() < 1e-9);
        }
        assert!((energy(st, &geom).unwrap() + 5.0).abs() < 1e-9);
        // Every vertex-ancilla measurement outcome has probability 1/|G|.
        for t in &run.transcript {
            if t.op == "measure-vertex-fourier" {
                assert!((t.probability.unwrap() - 1.0 / 6.0).abs() < 1e-9);
            }
        }
        // Matches the direct-projection oracle.
        let oracle = ground_state_by_projection(group, &geom).unwrap();
        assert!((st.fidelity(&oracle).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn s3_1x2_synthesis_all_seeds_agree() {
        let group = Arc::new(build_s3());
        let geom = Arc::new(build_lattice(1, 2).unwrap());
        let oracle = ground_state_by_projection(group.clone(), &geom).unwrap();
        for seed in [0u64, 1, 2] {
            let run = synthesize_ground_state(
                group.clone(),
                geom.clone(),
                OutcomePolicy::Sample { seed },
            )
            .unwrap();
            assert_eq!(run.state.support(), 6usize.pow(5));
            assert!((run.state.fidelity(&oracle).unwrap() - 1.0).abs() < 1e-9);
        }
        // Postselecting a nonzero outcome exercises the correction path.
        let run = synthesize_ground_state(
            group.clone(),
            geom.clone(),
            OutcomePolicy::Postselect { outcome: 3 },
        )
        .unwrap();
        assert!((run.state.fidelity(&oracle).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn toric_code_z2() {
        // G = Z2 reproduces the planar toric code ground state.
        let group = Arc::new(build_cyclic(2).unwrap());
        let geom = Arc::new(build_lattice(2, 2).unwrap());
        let run =
            synthesize_ground_state(group.clone(), geom.clone(), OutcomePolicy::Sample { seed: 1 })
                .unwrap();
        let st = &run.state;
        assert_eq!(st.support(), 2usize.pow(8));
        for vx in geom.vertices().collect::<Vec<_>>() {
            assert!((vertex_projector_expect(st, &geom, vx).unwrap() - 1.0).abs() < 1e-9);
        }
        assert!((energy(st, &geom).unwrap() + 13.0).abs() < 1e-9);
        for t in &run.transcript {
            if t.op == "measure-vertex-fourier" {
                assert!((t.probability.unwrap() - 0.5).abs() < 1e-9);
            }
        }
    }
}
