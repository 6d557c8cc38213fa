use std::sync::Arc;

use loewy_core::blocks::{analyze, ll_group_algebra_pgroup, AnalysisOptions};
use loewy_core::bounds::{check_block, ll_abelian_formula, rho, CheckContext};
use loewy_core::group::GroupSpec;

fn run(spec: &str, p: u64) -> loewy_core::blocks::GroupAnalysis {
    let g = Arc::new(spec.parse::<GroupSpec>().unwrap().build().unwrap());
    analyze(g, p, AnalysisOptions::default()).unwrap()
}

// For a p-group the centre is a local subalgebra of FG, so its radical powers sit inside J(FG)^k.
#[test]
fn center_of_pgroup_algebra_is_shorter() {
    for (spec, p) in [("D8", 2), ("Q8", 2), ("D16", 2), ("Q16", 2), ("ES+(3)", 3), ("W(4,2)", 2), ("W(4,3)", 3)] {
        let a = run(spec, p);
        assert_eq!(a.blocks.len(), 1, "{spec}");
        let g = spec.parse::<GroupSpec>().unwrap().build().unwrap();
        let whole = ll_group_algebra_pgroup(&g, p).unwrap();
        let b = &a.blocks[0];
        assert!(b.loewy_length <= whole, "{spec}: {} > {whole}", b.loewy_length);
        assert!((b.loewy_length as u64) < rho(b.defect, b.exponent_log, p), "{spec}");
    }
}

#[test]
fn abelian_pgroup_center_is_whole_algebra() {
    for (ty, p) in [(vec![3u32, 1], 2u64), (vec![2, 2], 2), (vec![2, 1, 1], 2), (vec![2, 1], 3), (vec![1, 1, 1], 3), (vec![2], 5)] {
        let spec = format!("Ab[{}]", ty.iter().map(|e| p.pow(*e).to_string()).collect::<Vec<_>>().join(","));
        let a = run(&spec, p);
        let f = ll_abelian_formula(&ty, p);
        assert_eq!(a.blocks[0].loewy_length as u64, f.ll, "{spec}");
        assert_eq!(a.blocks[0].abelian_type.as_deref(), Some(&ty[..]), "{spec}");
    }
}

#[test]
fn coprime_characteristic_gives_defect_zero_blocks() {
    for (spec, p) in [("S3", 5), ("C7:C3(2)", 5), ("Q8", 3), ("A5", 7)] {
        let a = run(spec, p);
        assert_eq!(a.blocks.len(), a.center.group().conj_classes().len(), "{spec}");
        for b in &a.blocks {
            assert_eq!((b.defect, b.loewy_length, b.dim_center), (0, 1, 1), "{spec}");
        }
    }
}

#[test]
fn every_theorem_verdict_holds_on_small_groups() {
    let cx = CheckContext::default();
    for (spec, p) in [("S4", 2), ("S4", 3), ("A5", 2), ("D12", 2), ("Q16", 2), ("S3*C4", 2), ("C9:C3(4)", 3), ("W(5,2)", 2)] {
        let a = run(spec, p);
        assert!(a.checks.iter().all(|c| c.passed), "{spec}");
        for i in 0..a.blocks.len() {
            for v in check_block(&a, i, &cx).unwrap() {
                assert!(!v.is_theorem_failure(), "{spec} p={p} block {i}: {}", v.check);
            }
        }
    }
}
