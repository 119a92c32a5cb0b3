use num_complex::Complex64;
use spackle::analysis::analyze;
use spackle::circuit::{dense_operator, verify_good_ed, DenseOperator, GateKind};
use spackle::gadgets::GraphPolicy;
use spackle::pauli::PauliGroup;
use spackle::scaling::{coords, embed_local, snake, Token};
use spackle::Error;

fn c422() -> PauliGroup {
    PauliGroup::parse_hermitian(&["XXXX", "ZZZZ"]).unwrap()
}

fn assert_nearest_neighbour(c: &spackle::circuit::SpacetimeCircuit, sides: &[usize]) {
    for g in c.gates() {
        if g.wires.len() == 2 {
            let (a, b) = (coords(sides, g.wires[0]), coords(sides, g.wires[1]));
            let dist: usize = a.iter().zip(&b).map(|(x, y)| x.abs_diff(*y)).sum();
            assert_eq!(dist, 1, "{} on {:?}", g.kind.name(), g.wires);
        }
        assert!(g.wires.len() <= 2);
    }
}

#[test]
fn snake_path_is_connected() {
    for sides in [vec![5], vec![3, 4], vec![2, 3, 3]] {
        let p = snake(&sides);
        let n: usize = sides.iter().product();
        let mut sorted = p.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        for w in p.windows(2) {
            let (a, b) = (coords(&sides, w[0]), coords(&sides, w[1]));
            assert_eq!(a.iter().zip(&b).map(|(x, y)| x.abs_diff(*y)).sum::<usize>(), 1);
        }
    }
}

#[test]
fn single_gadget_projector_survives_localization() {
    for (text, sign) in [("ZZZ", 1.0), ("-XYZ", -1.0), ("XX", 1.0)] {
        let base = PauliGroup::parse_hermitian(&[text]).unwrap();
        let (c, _, spec) = embed_local(&base, 2, GraphPolicy::Complete, 0).unwrap();
        assert!(c.is_canonical());
        assert!(spec.local, "{text}: {:?}", (spec.spatial_diameter, spec.time_diameter));
        assert_nearest_neighbour(&c, &spec.sides);
        assert!(c.num_wires() <= 12);
        let v = dense_operator(&c).unwrap();
        let p = base.generators()[0].clone();
        let mut pm = DenseOperator::from_pauli(&p);
        // from_pauli uses the stored phase, which already carries the sign
        let _ = sign;
        let dim = pm.rows;
        for i in 0..dim {
            pm.data[i * dim + i] += Complex64::new(1.0, 0.0);
        }
        let lambda = v.proportionality(&pm, 1e-12).unwrap_or_else(|| panic!("{text}: not proportional to I+P"));
        assert!(lambda.norm() > 1e-6);
    }
}

#[test]
fn embed_422_line() {
    let base = c422();
    let (c, code, spec) = embed_local(&base, 2, GraphPolicy::Complete, 0).unwrap();
    assert_eq!(spec.sides, vec![24]);
    assert_eq!(spec.layers.len(), 2);
    assert!(spec.local);
    assert!(spec.spatial_diameter <= 1 && spec.time_diameter <= 3);
    assert_nearest_neighbour(&c, &spec.sides);
    assert!(c.gates().iter().any(|g| matches!(g.kind, GateKind::ControlledSwap(_))));
    assert!(verify_good_ed(&c, &base).unwrap().good);
    let r = analyze(code.gauge(), Some(2), None).unwrap();
    assert_eq!(r.k, 2);
    assert_eq!((r.d, r.d_is_exact), (Some(2), true));
    assert_eq!(spec.placement.len(), c.num_wires());
    assert!(matches!(spec.tokens[0], Token::Data { qubit: 0 }));
    assert!(spec.placement_csv().starts_with("wire,x0\n0,0\n"));
}

#[test]
fn embed_422_plane() {
    let base = c422();
    let (c, code, spec) = embed_local(&base, 3, GraphPolicy::Complete, 0).unwrap();
    assert_eq!(spec.sides, vec![5, 5]);
    assert!(spec.local);
    assert_nearest_neighbour(&c, &spec.sides);
    let r = analyze(code.gauge(), Some(2), None).unwrap();
    assert_eq!((r.k, r.d), (2, Some(2)));
}

#[test]
fn embed_errors() {
    assert!(matches!(embed_local(&c422(), 1, GraphPolicy::Complete, 0), Err(Error::InvalidArgument(_))));
    let dep = PauliGroup::parse_hermitian(&["XXXX", "XXXX"]).unwrap();
    assert!(matches!(embed_local(&dep, 2, GraphPolicy::Complete, 0), Err(Error::InvalidCode(_))));
}
