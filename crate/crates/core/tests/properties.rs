use matspace_core::census::{self, CensusConfig, PredicateSet};
use matspace_core::predicates::{self, SearchConfig, Witness};
use matspace_core::recovery::{self, Outcome, SquareClass};
use matspace_core::{Field, MatSpace, Matrix, Poly, RowSpace, Scalar, StandardKind, TransformMode, Vector};
use num_rational::BigRational;
use proptest::prelude::*;

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn entry(f: Field) -> BoxedStrategy<Scalar> {
    match f {
        Field::Rational => (-4i64..=4, 1i64..=3)
            .prop_map(|(a, b)| Scalar::Rational(BigRational::new(a.into(), b.into())))
            .boxed(),
        Field::Prime(p) => (0..p).prop_map(Scalar::Residue).boxed(),
    }
}

fn matrix(f: Field, n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(entry(f), n * n).prop_map(move |d| Matrix::from_data(f, n, n, d))
}

fn invertible(f: Field, n: usize) -> impl Strategy<Value = Matrix> {
    matrix(f, n).prop_filter("invertible", Matrix::is_invertible)
}

fn span(f: Field, n: usize, max_gens: usize) -> impl Strategy<Value = MatSpace> {
    prop::collection::vec(matrix(f, n), 0..=max_gens).prop_map(move |ms| MatSpace::span(f, n, &ms).unwrap())
}

fn field_and_n(fields: Vec<Field>, ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Field, usize)> {
    (prop::sample::select(fields), ns)
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

/// Sum over eigenvalues of the eigenspace dimensions, scanning the whole field.
fn eigenbasis_exists(m: &Matrix) -> bool {
    let f = m.field();
    let n = m.rows();
    let total: usize = f.elements().unwrap().map(|l| n - m.sub_scalar(&l).rank()).sum();
    total == n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cayley_hamilton((_, m) in field_and_n(vec![gf(7), Field::rational()], 1..=5).prop_flat_map(|(f, n)| (Just(f), matrix(f, n)))) {
        prop_assert!(m.char_poly().eval_matrix(&m).is_zero());
        prop_assert!(m.min_poly().eval_matrix(&m).is_zero());
        prop_assert!(m.char_poly().rem(&m.min_poly()).is_zero());
    }

    #[test]
    fn polynomials_are_conjugation_invariant((m, p) in field_and_n(vec![gf(2), gf(5), Field::rational()], 1..=4)
        .prop_flat_map(|(f, n)| (matrix(f, n), invertible(f, n)))) {
        let conj = &(&p * &m) * &p.invert().unwrap();
        prop_assert_eq!(conj.char_poly(), m.char_poly());
        prop_assert_eq!(conj.min_poly(), m.min_poly());
    }

    #[test]
    fn eigenvalues_match_scan(m in prop::sample::select(vec![2u64, 3, 5, 7, 11]).prop_flat_map(|p| (1usize..=4).prop_flat_map(move |n| matrix(gf(p), n)))) {
        let f = m.field();
        let n = m.rows();
        let scan: Vec<Scalar> = f.elements().unwrap().filter(|l| m.sub_scalar(l).rank() < n).collect();
        prop_assert_eq!(m.eigenvalues_in_field(), scan);
    }

    #[test]
    fn diagonalizable_matches_eigenbasis_oracle(m in prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|p| (1usize..=3).prop_flat_map(move |n| matrix(gf(p), n)))) {
        prop_assert_eq!(m.is_diagonalizable(), eigenbasis_exists(&m));
    }

    #[test]
    fn orthogonal_complement_laws((v, p) in field_and_n(vec![gf(2), gf(3), gf(7), Field::rational()], 1..=4)
        .prop_flat_map(|(f, n)| (span(f, n, 5), invertible(f, n)))) {
        let n = v.n();
        let perp = v.orth_complement();
        prop_assert_eq!(v.dim() + perp.dim(), n * n);
        prop_assert_eq!(&perp.orth_complement(), &v);
        let conj = v.transform(&p, TransformMode::Conjugate).unwrap();
        prop_assert_eq!(conj.orth_complement(), perp.transform(&p, TransformMode::Conjugate).unwrap());
        for mode in [TransformMode::Conjugate, TransformMode::Left, TransformMode::Right] {
            prop_assert_eq!(v.transform(&p, mode).unwrap().dim(), v.dim());
        }
    }

    #[test]
    fn verdicts_are_conjugation_invariant((v, p) in field_and_n(vec![gf(2), gf(3)], 2..=3)
        .prop_flat_map(|(f, n)| (span(f, n, 3), invertible(f, n)))) {
        let w = v.transform(&p, TransformMode::Conjugate).unwrap();
        prop_assert_eq!(predicates::irreducible(&v, &cfg()).status, predicates::irreducible(&w, &cfg()).status);
        prop_assert_eq!(
            predicates::all_diagonalizable(&v, &cfg()).unwrap().status,
            predicates::all_diagonalizable(&w, &cfg()).unwrap().status
        );
        prop_assert_eq!(
            predicates::trivial_spectrum(&v, &cfg()).unwrap().status,
            predicates::trivial_spectrum(&w, &cfg()).unwrap().status
        );
    }

    #[test]
    fn failing_verdicts_carry_valid_witnesses(v in field_and_n(vec![gf(2), gf(3), gf(5)], 1..=3).prop_flat_map(|(f, n)| span(f, n, 3))) {
        let irr = predicates::irreducible(&v, &cfg());
        if irr.is_fails() {
            let Some(Witness::Subspace(w)) = &irr.witness else { panic!("irreducible witness is a subspace") };
            prop_assert!(predicates::refutes_irreducible(&v, w));
        }
        let diag = predicates::all_diagonalizable(&v, &cfg()).unwrap();
        if diag.is_fails() {
            let Some(Witness::Matrix(m)) = &diag.witness else { panic!("diagonalizability witness is a matrix") };
            prop_assert!(predicates::refutes_diagonalizable(&v, m));
        }
        let ts = predicates::trivial_spectrum(&v, &cfg()).unwrap();
        if ts.is_fails() {
            let Some(Witness::Eigenpair { matrix, eigenvalue }) = &ts.witness else { panic!("spectrum witness is an eigenpair") };
            prop_assert!(predicates::refutes_trivial_spectrum(&v, matrix, eigenvalue));
        }
    }

    #[test]
    fn isotropic_witnesses_are_isotropic(p in prop::sample::select(vec![2u64, 3, 5, 7]).prop_flat_map(|p| (1usize..=4).prop_flat_map(move |n| matrix(gf(p), n)))) {
        let v = predicates::non_isotropic(&p, &cfg());
        if v.is_fails() {
            let Some(Witness::Vector(x)) = &v.witness else { panic!("isotropy witness is a vector") };
            prop_assert!(predicates::refutes_non_isotropic(&p, x));
        } else {
            prop_assert!(v.is_holds());
        }
    }

    #[test]
    fn irreducible_matches_line_oracle(v in prop::sample::select(vec![2u64, 3]).prop_flat_map(|p| span(gf(p), 2, 3))) {
        // In F^2 the proper nonzero subspaces are the lines.
        let f = v.field();
        let mut stable_line = false;
        for x in f.elements().unwrap() {
            for y in f.elements().unwrap() {
                if f.is_zero(&x) && f.is_zero(&y) {
                    continue;
                }
                let line = RowSpace::span(f, 2, &[vec![x.clone(), y.clone()]]).unwrap();
                stable_line |= predicates::is_stable(&v, &line);
            }
        }
        prop_assert_eq!(predicates::irreducible(&v, &cfg()).is_holds(), !stable_line);
    }

    #[test]
    fn spin_is_minimal((v, x) in field_and_n(vec![gf(2), gf(3), gf(7), Field::rational()], 2..=4)
        .prop_flat_map(|(f, n)| (span(f, n, 3), prop::collection::vec(entry(f), n).prop_map(move |e| Vector::new(f, e)))
        .prop_filter("nonzero start", |(_, x)| !x.is_zero()))) {
        let (s, gens) = predicates::spin_trace(&v, &x).unwrap();
        prop_assert!(s.contains(x.entries()));
        prop_assert!(predicates::is_stable(&v, &s));
        prop_assert_eq!(s.dim(), gens.len());
        if gens.len() > 1 {
            let rest: Vec<Vec<Scalar>> = gens[..gens.len() - 1].iter().map(|g| g.entries().to_vec()).collect();
            let smaller = RowSpace::span(v.field(), v.n(), &rest).unwrap();
            prop_assert!(!predicates::is_stable(&v, &smaller));
        }
    }

    #[test]
    fn recovery_is_sound((f, s0) in field_and_n(vec![gf(2), gf(3), gf(5), gf(7), Field::rational()], 1..=3)
        .prop_flat_map(|(f, n)| (Just(f), invertible(f, n)))) {
        let n = s0.rows();
        let sym = MatSpace::standard(StandardKind::Sym, n, f);
        let v = sym.transform(&s0, TransformMode::Conjugate).unwrap();
        let report = recovery::recover(&v, &cfg()).unwrap();
        if report.is_success() {
            let s = report.s.as_ref().unwrap();
            prop_assert_eq!(&sym.transform(s, TransformMode::Conjugate).unwrap(), &v);
        }
        if f.is_finite() && f.characteristic() != 2 || n <= 2 && !f.is_finite() {
            prop_assert!(report.is_success(), "{:?}", report.outcome);
        }
        if !f.is_finite() {
            prop_assert!(report.is_success() || report.outcome == Outcome::NotCertified);
        }
    }

    #[test]
    fn congruence_is_exact(p in prop::sample::select(vec![gf(3), gf(5), gf(7), Field::rational()])
        .prop_flat_map(|f| (1usize..=4).prop_flat_map(move |n| matrix(f, n)))
        .prop_map(|m| &m + &m.transpose())
        .prop_filter("invertible", Matrix::is_invertible)) {
        let f = p.field();
        let (q, d) = recovery::congruence_diagonalize(&p).unwrap();
        prop_assert!(q.is_invertible());
        prop_assert!(d.is_diagonal());
        prop_assert_eq!(&(&(&q * &p) * &q.transpose()), &d);
        if let SquareClass::Normalized { scales, c } = recovery::square_class_normalize(&d).unwrap() {
            let t = &Matrix::diagonal(f, &scales) * &q;
            prop_assert_eq!(&(&t * &p) * &t.transpose(), Matrix::identity(f, p.rows()).scale(&c));
        }
    }

    #[test]
    fn square_class_witnesses_are_sound(diag in prop::sample::select(vec![3u64, 5, 7, 11])
        .prop_flat_map(|p| (2usize..=4).prop_flat_map(move |n| prop::collection::vec(1..p as u32, n)).prop_map(move |d| (p, d)))) {
        let (p, entries) = diag;
        let f = gf(p);
        let d = Matrix::diagonal(f, &entries.iter().map(|&x| Scalar::Residue(x)).collect::<Vec<_>>());
        let v = MatSpace::standard(StandardKind::Sym, d.rows(), f).transform(&d.invert().unwrap(), TransformMode::Right).unwrap();
        for i in 1..d.rows() {
            let ratio = f.div(d.get(i, i), d.get(0, 0)).unwrap();
            match recovery::nondiag_witness(&d, i) {
                Ok(w) => {
                    prop_assert!(!f.is_square(&ratio));
                    prop_assert!(v.contains(&w).unwrap());
                    prop_assert!(!w.is_diagonalizable());
                    let a = f.inv(&f.mul(d.get(0, 0), d.get(i, i))).unwrap();
                    let quad = Poly::new(f, vec![f.neg(&a), f.zero(), f.one()]);
                    prop_assert!(quad.roots().is_empty());
                    prop_assert_eq!(w.min_poly().gcd(&quad), quad);
                }
                Err(e) => {
                    prop_assert_eq!(e, matspace_core::Error::SquareClassNotViolated);
                    prop_assert!(f.is_square(&ratio));
                }
            }
        }
    }

    #[test]
    fn block_decomposition_invariants(v in field_and_n(vec![gf(2), gf(3), gf(7), Field::rational()], 2..=4).prop_flat_map(|(f, n)| span(f, n, 6))) {
        let maps = recovery::block_decompose(&v).unwrap();
        prop_assert_eq!(v.dim(), maps.dim_c_image + maps.dim_w);
        prop_assert!(maps.w.is_subspace_of(&v).unwrap());
        let x = &maps.w_ker_k_ker_a;
        let elements: Vec<Matrix> = match x.elements(1 << 12) {
            Ok(it) => it.collect(),
            Err(_) => x.basis(),
        };
        for m in &elements {
            prop_assert!((m * m).is_zero());
        }
        if v.field().is_finite() && predicates::all_diagonalizable(&v, &cfg()).unwrap().is_holds() {
            prop_assert_eq!(x.dim(), 0);
        }
        for m in maps.w.basis() {
            prop_assert!(recovery::quotient_action_holds(&m));
        }
    }
}

#[test]
fn sym_complement_is_alt() {
    for f in [gf(2), gf(3), gf(7), Field::rational()] {
        for n in 1..=4 {
            let sym = MatSpace::standard(StandardKind::Sym, n, f);
            assert_eq!(sym.orth_complement(), MatSpace::standard(StandardKind::Alt, n, f), "{f} n={n}");
        }
    }
}

#[test]
fn census_counts_survive_conjugation() {
    // Conjugation permutes the subspaces of a given dimension.
    let cfg = CensusConfig::default();
    for (q, d, p) in [(2u64, 2usize, [1i64, 1, 0, 1]), (3, 1, [2, 1, 1, 1]), (3, 2, [0, 1, 2, 1])] {
        let f = gf(q);
        let p = Matrix::from_ints(f, 2, 2, &p);
        let all: Vec<MatSpace> = census::subspace_stream(2, q, d, &cfg).unwrap().collect();
        let moved: Vec<MatSpace> = all.iter().map(|s| s.transform(&p, TransformMode::Conjugate).unwrap()).collect();
        assert!(moved.iter().all(|s| all.contains(s)));
        let report = census::census(2, q, d, PredicateSet::ALL, &CensusConfig { witness_limit: usize::MAX, ..cfg }).unwrap();
        let count = |pred: &dyn Fn(&MatSpace) -> bool| moved.iter().filter(|s| pred(s)).count() as u128;
        let search = SearchConfig::default();
        assert_eq!(report.counts.diag, Some(count(&|s| predicates::all_diagonalizable(s, &search).unwrap().is_holds())));
        assert_eq!(report.counts.trivial_spectrum, Some(count(&|s| predicates::trivial_spectrum(s, &search).unwrap().is_holds())));
        assert_eq!(report.counts.irreducible, Some(count(&|s| predicates::irreducible(s, &search).is_holds())));
        for w in &report.witnesses {
            let c = w.transform(&p, TransformMode::Conjugate).unwrap();
            assert!(predicates::all_diagonalizable(&c, &search).unwrap().is_holds());
            assert!(predicates::trivial_spectrum(&c, &search).unwrap().is_holds());
            assert!(predicates::irreducible(&c, &search).is_holds());
        }
    }
}

#[test]
fn bit_packed_census_matches_generic_for_all_dimensions() {
    let cfg = CensusConfig::default();
    for d in 0..=4 {
        assert_eq!(
            census::census(2, 2, d, PredicateSet::ALL, &cfg).unwrap(),
            census::census_generic(2, 2, d, PredicateSet::ALL, &cfg).unwrap()
        );
    }
}
