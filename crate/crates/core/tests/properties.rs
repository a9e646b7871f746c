use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use slpelim::families::{
    build_family1, build_family2, general_solution_family1, general_solution_family2, horner_circuit,
    solutions_family1, t_var,
};
use slpelim::field::{Field, PrimeField, Rationals, DEFAULT_MODULUS};
use slpelim::polyring::{
    bareiss_determinant, expand, expand_all, probabilistic_equal, resultant, Matrix, ParamMode, Poly,
    DEFAULT_TERM_BUDGET,
};
use slpelim::slp::{parse_circuit, serialize_circuit, Circuit, CircuitBuilder, Node};
use slpelim::suite::random_circuit;
use slpelim::transforms::{differentiate, specialize};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn circuit_from(seed: u64) -> Circuit {
    random_circuit(&mut ChaCha8Rng::seed_from_u64(seed), 20).unwrap()
}

fn circuits() -> impl Strategy<Value = Circuit> {
    any::<u64>().prop_map(circuit_from)
}

fn rationals(len: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-20i64..=20, 1i64..=7), len).prop_map(|v| v.into_iter().map(|(n, d)| q(n, d)).collect())
}

fn point_for(c: &Circuit, values: &[BigRational]) -> BTreeMap<String, BigRational> {
    c.variables().into_iter().zip(values.iter().cloned()).collect()
}

fn polys() -> impl Strategy<Value = Poly> {
    let vars: Vec<String> = ["X", "Y", "Z"].iter().map(|s| s.to_string()).collect();
    prop::collection::vec((prop::collection::vec(0u32..4, 3), -9i64..=9, 1i64..=4), 0..6)
        .prop_map(move |terms| Poly::from_terms(&vars, terms.into_iter().map(|(e, n, d)| (e, q(n, d)))).unwrap())
}

fn monic_in_x() -> impl Strategy<Value = Poly> {
    (1u32..=2, prop::collection::vec(-5i64..=5, 2)).prop_map(|(deg, cs)| {
        let mut p = Poly::var("X").try_pow(deg).unwrap();
        for (e, c) in cs.iter().enumerate().take(deg as usize) {
            let term = &Poly::var("X").try_pow(e as u32).unwrap() * &(&Poly::int(*c) + &Poly::var("Y"));
            p = &p + &term;
        }
        p
    })
}

/// Independent scalar-flag computation: a node is scalar iff no input is
/// reachable from it.
fn reaches_input(c: &Circuit, i: usize) -> bool {
    match &c.nodes()[i] {
        Node::Input(_) => true,
        Node::Const(_) | Node::Param(_) => false,
        n => {
            let (a, b) = n.operands().unwrap();
            reaches_input(c, a) || reaches_input(c, b)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expand_agrees_with_evaluate(c in circuits(), values in rationals(4)) {
        let point = point_for(&c, &values);
        let direct = c.evaluate_at(&Rationals, &point).unwrap();
        let e = expand(&c, DEFAULT_TERM_BUDGET).unwrap();
        prop_assert_eq!(direct[0].clone(), e.eval(&Rationals, |v| point.get(v).cloned()).unwrap());
    }

    #[test]
    fn prime_field_matches_rationals(c in circuits(), values in rationals(4)) {
        let field = PrimeField::new(DEFAULT_MODULUS).unwrap();
        let point = point_for(&c, &values);
        let exact = c.evaluate_at(&Rationals, &point).unwrap();
        let modp: BTreeMap<String, u64> = point.iter().map(|(k, v)| (k.clone(), field.from_rational(v).unwrap())).collect();
        let reduced = c.evaluate_at(&field, &modp).unwrap();
        prop_assert_eq!(field.from_rational(&exact[0]).unwrap(), reduced[0]);
    }

    #[test]
    fn scalar_flags_match_search(c in circuits()) {
        for i in 0..c.len() {
            prop_assert_eq!(c.scalar_flag()[i], !reaches_input(&c, i));
        }
    }

    #[test]
    fn adding_a_node_never_lowers_cost(c in circuits(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), op in 0u8..3) {
        let before = c.cost().total_len;
        let mut builder = CircuitBuilder::from_circuit(&c);
        let (x, y) = (a.index(c.len()), b.index(c.len()));
        let z = match op { 0 => builder.add(x, y), 1 => builder.sub(x, y), _ => builder.mul(x, y) };
        let mut outs = c.outputs().to_vec();
        outs.push(z);
        let grown = builder.build_with_outputs(&outs).unwrap();
        prop_assert!(grown.cost().total_len >= before);
        prop_assert!(grown.cost().nonscalar_len >= c.cost().nonscalar_len);
    }

    #[test]
    fn text_and_json_round_trip(c in circuits()) {
        let text = serialize_circuit(&c);
        let back = parse_circuit(&text).unwrap();
        prop_assert_eq!(expand(&back, DEFAULT_TERM_BUDGET).unwrap(), expand(&c, DEFAULT_TERM_BUDGET).unwrap());
        prop_assert_eq!(back.cost(), c.cost());
        let json = serde_json::to_string(&c).unwrap();
        let back: Circuit = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn derivative_matches_formal_derivative(c in circuits()) {
        let e = expand(&c, DEFAULT_TERM_BUDGET).unwrap();
        for v in c.variables() {
            let d = differentiate(&c, &v).unwrap();
            prop_assert_eq!(expand(&d, DEFAULT_TERM_BUDGET).unwrap(), e.derivative(&v).trimmed());
            prop_assert!(d.cost().nonscalar_len <= 3 * c.cost().nonscalar_len);
        }
    }

    #[test]
    fn central_difference_is_exact_for_quadratics(c in circuits(), values in rationals(4)) {
        let e = expand(&c, DEFAULT_TERM_BUDGET).unwrap();
        let point = point_for(&c, &values);
        for v in c.variables() {
            prop_assume!(e.degree_in(&v) <= 2);
            let d = differentiate(&c, &v).unwrap();
            let at = |shift: i64| {
                let mut p = point.clone();
                *p.get_mut(&v).unwrap() += q(shift, 1);
                c.evaluate_at(&Rationals, &p).unwrap()[0].clone()
            };
            let fd = (at(1) - at(-1)) / q(2, 1);
            prop_assert_eq!(fd, d.evaluate_at(&Rationals, &point).unwrap()[0].clone());
        }
    }

    #[test]
    fn specialize_commutes_with_expand(c in circuits(), values in rationals(4), mask in 0u8..16) {
        let bindings: BTreeMap<String, BigRational> = c
            .variables()
            .into_iter()
            .zip(values)
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, b)| b)
            .collect();
        let s = specialize(&c, &bindings).unwrap();
        let want = expand(&c, DEFAULT_TERM_BUDGET).unwrap().partial_eval(&bindings).trimmed();
        prop_assert_eq!(expand(&s, DEFAULT_TERM_BUDGET).unwrap(), want);
    }

    #[test]
    fn probabilistic_equal_accepts_equal_expansions(c in circuits(), seed in any::<u64>()) {
        let e = expand(&c, DEFAULT_TERM_BUDGET).unwrap();
        let h = horner_circuit(&e, c.inputs(), c.param_vars(), "H_").unwrap();
        prop_assert!(probabilistic_equal(&c, &h, 5, DEFAULT_MODULUS, seed).unwrap().is_equal());
    }

    #[test]
    fn ring_laws(a in polys(), b in polys(), c in polys()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!(a.try_sub(&a).unwrap().is_zero());
    }

    #[test]
    fn text_format_round_trips(a in polys()) {
        let back: Poly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn product_rule(a in polys(), b in polys()) {
        let lhs = (&a * &b).derivative("X");
        let rhs = &(&a.derivative("X") * &b) + &(&a * &b.derivative("X"));
        prop_assert_eq!(lhs.trimmed(), rhs.trimmed());
    }

    #[test]
    fn determinant_is_multiplicative(entries in prop::collection::vec(-6i64..=6, 18)) {
        let a = Matrix::from_fn(3, 3, |i, j| q(entries[3 * i + j], 1)).unwrap();
        let b = Matrix::from_fn(3, 3, |i, j| q(entries[9 + 3 * i + j], 1)).unwrap();
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
        prop_assert_eq!(bareiss_determinant(a.to_rows()).unwrap(), a.determinant().unwrap());
    }

    #[test]
    fn resultant_is_multiplicative(p in monic_in_x(), pp in monic_in_x(), r in monic_in_x()) {
        let lhs = resultant(&(&p * &pp), &r, "X").unwrap();
        let rhs = &resultant(&p, &r, "X").unwrap() * &resultant(&pp, &r, "X").unwrap();
        prop_assert_eq!(lhs.trimmed(), rhs.trimmed());
    }

    #[test]
    fn general_solution_vanishes_on_the_variety(delta in 1u32..=3, k in 1u32..=2, s in -5i64..=5, ts in rationals(3)) {
        let p = general_solution_family2(delta, k).unwrap();
        let mut bind: BTreeMap<String, BigRational> = (1..=delta).map(|l| (t_var(l), ts[l as usize - 1].clone())).collect();
        bind.insert("S".into(), q(s, 1));
        for l in 1..=delta {
            let root = &ts[l as usize - 1];
            let mut at = bind.clone();
            at.insert("Y".into(), q(s, 1) * num_traits::Pow::pow(root, 1u32 << k));
            prop_assert!(p.eval(&Rationals, |v| at.get(v).cloned()).unwrap().is_zero());
        }
    }
}

#[test]
fn solution_points_zero_every_equation() {
    for n in 1..=3 {
        let inst = build_family1(n).unwrap();
        let outs = expand_all(&inst.beta, DEFAULT_TERM_BUDGET, ParamMode::Substitute).unwrap();
        for s in solutions_family1(n).unwrap() {
            for g in &outs[..2 * n as usize] {
                assert!(g.partial_eval(&s.assignment()).trimmed().is_zero(), "n={n} l={}", s.l);
            }
        }
    }
}

#[test]
fn general_solutions_are_monic_with_expected_degree() {
    for n in 1..=3 {
        let p = general_solution_family1(n).unwrap();
        assert_eq!(p.degree_in("Y"), 1 << n);
        assert!(p.leading_coefficient_in("Y").as_constant().is_some_and(|c| c.is_one()));
    }
    for delta in 1..=6 {
        for k in 1..=4 {
            let p = general_solution_family2(delta, k).unwrap();
            assert_eq!(p.degree_in("Y"), delta);
            assert!(p.leading_coefficient_in("Y").as_constant().is_some_and(|c| c.is_one()));
        }
    }
}

#[test]
fn family2_builders_respect_cost_claims() {
    for delta in 1..=8 {
        for k in 1..=8 {
            let inst = build_family2(delta, k).unwrap();
            assert!(inst.g.cost().nonscalar_len <= delta as usize);
            assert!(inst.f.cost().nonscalar_len <= k as usize + 1);
        }
    }
}
