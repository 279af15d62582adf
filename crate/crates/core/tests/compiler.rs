use nashforge::brouwer::{brute_force_fixtures, make_example_coloring, Grid};
use nashforge::compiler::{
    compile, extract_panchromatic_simplex, locate_approx_fixed_point, SamplingParams,
};
use nashforge::exactmath::{RatVector, Rational};

fn as_rat(p: &[u64]) -> RatVector {
    p.iter().map(|&c| Rational::integer(c as i64)).collect()
}

#[test]
fn grid_restriction_3d() {
    let inst = make_example_coloring(Grid::new(3, 2).unwrap()).unwrap();
    let cf = compile(&inst.circuit, SamplingParams::default_for(3)).unwrap();
    for p in cf.grid().points() {
        let want = inst.circuit.discrete_map(&p).unwrap();
        assert_eq!(cf.circuit.evaluate(&as_rat(&p)).unwrap(), as_rat(&want), "at {p:?}");
    }
}

#[test]
fn approximate_fixed_point_3d() {
    let inst = make_example_coloring(Grid::new(3, 2).unwrap()).unwrap();
    let cf = compile(&inst.circuit, SamplingParams::default_for(3)).unwrap();
    let p = locate_approx_fixed_point(&cf, &inst.known_cube)
        .unwrap()
        .expect("candidate in the planted cube");
    let ex = extract_panchromatic_simplex(&p, &cf).unwrap();
    let fixtures = brute_force_fixtures(&inst.circuit).unwrap();
    assert!(fixtures.contains_simplex(&ex.simplex));
}
