//! Named built-in oracle instances for the command line and the
//! verification suite.

use super::event::Event;
use super::forest::{DecisionForest, TreeSpec};
use super::integral::integral_inequality_check;
use super::kgh::{generated_subgroup, kgh_identity_check};
use super::mtp::{mtp_check, Kernel, RootRule};
use super::osss::{osss_check, GhostField};
use super::report::OracleReport;
use super::russo::russo_check;
use super::spanning::{spanning_tree_from_partitions, SimpleGraph};
use super::system::{
    asymmetric_tree5, big_rational, path, random_system, single_edge, triangle, FiniteSystem,
};
use super::tilted::{tilted_mtp_check, DisplacementKernel};
use crate::error::{Error, Result};
use crate::groups::finite::{d4, s3};

pub fn oracle_names() -> Vec<(&'static str, &'static str)> {
    vec![
        ("russo", "derivative identity for increasing events (exact)"),
        ("osss", "covariance bound for decision forests (exact)"),
        ("integral", "tail integral inequality with ghost-field constant"),
        ("kgh", "coset tail comparison on finite Cayley graphs"),
        ("mtp", "mass-transport identity, uniform and identity roots"),
        ("tilted-mtp", "modular-weighted transport on the oriented tree"),
        ("spanning", "nested spanning trees from partition sequences"),
    ]
}

/// Run the named check over its builtin instances (or the one selected).
pub fn run_builtin(name: &str, instance: Option<&str>) -> Result<Vec<OracleReport>> {
    let all = builtin_reports(name)?;
    match instance {
        None => Ok(all),
        Some(sel) => {
            let filtered: Vec<OracleReport> =
                all.into_iter().filter(|r| r.instance == sel).collect();
            if filtered.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "unknown instance `{sel}` for oracle `{name}`"
                )));
            }
            Ok(filtered)
        }
    }
}

fn builtin_reports(name: &str) -> Result<Vec<OracleReport>> {
    match name {
        "russo" => {
            let mut out = Vec::new();
            let sys = single_edge();
            out.push(russo_check(&sys, &Event::EdgeOpen(0), &big_rational(1, 2))?.report("single-edge"));
            let series = path(3);
            out.push(
                russo_check(&series, &Event::Connected(0, 2), &big_rational(1, 2))?
                    .report("series-2"),
            );
            for seed in 0..4 {
                let sys = random_system(seed, 8);
                let f = Event::ClusterACountAtLeast { source: sys.root, n: 2 };
                out.push(russo_check(&sys, &f, &big_rational(3, 10))?.report(&sys.name.clone()));
            }
            Ok(out)
        }
        "osss" => {
            let mut out = Vec::new();
            let sys = single_edge();
            let forest = DecisionForest { trees: vec![TreeSpec::FixedEdges(vec![0])] };
            out.push(
                osss_check(&sys, &Event::EdgeOpen(0), &Event::EdgeOpen(0), &forest, 0.5, 0.0)?
                    .report("single-edge"),
            );
            let tri = triangle();
            let f = Event::Connected(0, 1);
            out.push(
                osss_check(&tri, &f, &Event::GhostHitsCluster { source: 0 },
                    &DecisionForest::ghost_forest(&tri), 0.5,
                    GhostField::new(2).inclusion_probability())?
                    .report("triangle-ghost"),
            );
            out.push(
                osss_check(&tri, &Event::Const(true), &f,
                    &DecisionForest { trees: vec![TreeSpec::FixedEdges(vec![0, 1, 2])] }, 0.5, 0.0)?
                    .report("constant-f"),
            );
            for seed in 0..3 {
                let sys = random_system(seed, 8);
                let f = Event::ClusterACountAtLeast { source: sys.root, n: 2 };
                let g = Event::GhostHitsCluster { source: sys.root };
                let q = GhostField::new(2).inclusion_probability();
                out.push(
                    osss_check(&sys, &f, &g, &DecisionForest::ghost_forest(&sys), 0.4, q)?
                        .report(&sys.name.clone()),
                );
            }
            Ok(out)
        }
        "integral" => {
            let mut out = Vec::new();
            let mut p5 = path(5);
            p5.a_set = vec![0, 4];
            out.push(integral_inequality_check(&p5, 2, 0.3, 0.6, 1e-8)?.report("path5-endpoints"));
            out.push(integral_inequality_check(&path(4), 1, 0.2, 0.7, 1e-8)?.report("path4-n1"));
            for seed in 0..3 {
                let sys = random_system(seed, 9);
                out.push(
                    integral_inequality_check(&sys, 2, 0.3, 0.6, 1e-8)?.report(&sys.name.clone()),
                );
            }
            Ok(out)
        }
        "kgh" => {
            let mut out = Vec::new();
            let s3_sys = FiniteSystem::cayley(s3(), vec![0])?;
            let a3 = generated_subgroup(&s3_sys, &[4])?;
            out.push(
                kgh_identity_check(&s3_sys, &a3, 1, 2, &big_rational(1, 2))?
                    .report("s3-a3-transposition"),
            );
            out.push(
                kgh_identity_check(&s3_sys, &a3, 0, 2, &big_rational(1, 2))?
                    .report("s3-a3-identity"),
            );
            let d4_sys = FiniteSystem::cayley(d4(), vec![0])?;
            let rot = generated_subgroup(&d4_sys, &[1])?;
            out.push(
                kgh_identity_check(&d4_sys, &rot, 4, 2, &big_rational(1, 2))?
                    .report("d4-rotations-reflection"),
            );
            out.push(
                kgh_identity_check(&d4_sys, &rot, 4, 8, &big_rational(1, 2))?
                    .report("d4-n-oversized"),
            );
            Ok(out)
        }
        "mtp" => {
            let mut out = Vec::new();
            let tree = asymmetric_tree5();
            out.push(
                mtp_check(&tree, &Kernel::Adjacency, RootRule::UniformOnA, &big_rational(1, 2))?
                    .report("tree5-adjacency"),
            );
            out.push(
                mtp_check(&tree, &Kernel::PathToVertex { target: 4 }, RootRule::UniformOnA,
                    &big_rational(2, 5))?
                    .report("tree5-path-kernel"),
            );
            let table = d4();
            let mut cayley = FiniteSystem::cayley(table.clone(), vec![0, 1, 2, 3])?;
            let perm: Vec<usize> = (0..table.order as u16)
                .map(|g| table.mul(1, g) as usize)
                .collect();
            cayley.add_automorphism(perm)?;
            out.push(
                mtp_check(&cayley, &Kernel::ClusterShare, RootRule::GroupIdentity,
                    &big_rational(1, 2))?
                    .report("d4-cyclic-cluster-share"),
            );
            out.push(
                mtp_check(&cayley, &Kernel::OpenAdjacency, RootRule::GroupIdentity,
                    &big_rational(3, 10))?
                    .report("d4-cyclic-open-adjacency"),
            );
            Ok(out)
        }
        "tilted-mtp" => Ok(vec![
            tilted_mtp_check(3, &DisplacementKernel::parent())?.report("parent-d3"),
            tilted_mtp_check(3, &DisplacementKernel::two_up())?.report("two-up-d3"),
            tilted_mtp_check(4, &DisplacementKernel::level_symmetric(3))?
                .report("level-symmetric-d4"),
        ]),
        "spanning" => {
            let mut out = Vec::new();
            // 4-cycle with cells {0,1} and {2,3}, then everything
            let graph = SimpleGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)])?;
            let partitions = vec![vec![0, 0, 1, 1], vec![0, 0, 0, 0]];
            let levels = spanning_tree_from_partitions(&graph, &partitions, 12345)?;
            let nested = levels
                .levels
                .windows(2)
                .all(|w| w[0].iter().all(|e| w[1].contains(e)));
            let tree_size = levels.final_tree().len();
            out.push(OracleReport {
                check: "spanning".into(),
                instance: "cycle4-cells".into(),
                lhs: tree_size as f64,
                rhs: (graph.n - 1) as f64,
                gap: (tree_size as f64 - (graph.n - 1) as f64).abs(),
                holds: nested && tree_size == graph.n - 1,
                notes: format!("levels nested: {nested}"),
            });
            Ok(out)
        }
        _ => Err(Error::InvalidParameter(format!("unknown oracle `{name}`"))),
    }
}
