use proptest::prelude::*;

use daghilb::cli::{parse_dims, parse_fields};
use daghilb::dagcat::{add_via_biproduct, direct_sum, equalizer, FdObject};
use daghilb::l2equiv::{family_to_mono, full_via_unitaries, hom_map, orthonormal_basis, OrthonormalFamily};
use daghilb::linalg::{eigh, gram_schmidt, parse_matrix};
use daghilb::monoidal::TensorStructure;
use daghilb::ortho::{join, leq, meet, orthocomplement, phi, phi_inverse, Subobject};
use daghilb::scalars::{promote_quaternionic, StructureOps};
use daghilb::unidecomp::{decompose, DecomposeOptions};
use daghilb::{FieldTag, Matrix, Quat, Scalar, ToleranceProfile};

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn field() -> impl Strategy<Value = FieldTag> {
    prop_oneof![Just(FieldTag::R), Just(FieldTag::C), Just(FieldTag::H)]
}

fn quat(f: FieldTag) -> impl Strategy<Value = Quat> {
    prop::array::uniform4(-3.0f64..3.0).prop_map(move |c| Scalar::new(f, Quat::new(c[0], c[1], c[2], c[3])).value())
}

fn matrix(f: FieldTag, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(quat(f), rows * cols)
        .prop_map(move |data| Matrix::new(f, rows, cols, data).expect("sized data"))
}

/// `(field, m)` with `m` of a random shape up to `max × max`.
fn any_matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (field(), 0..=max, 0..=max).prop_flat_map(|(f, r, c)| matrix(f, r, c))
}

fn square(min: usize, max: usize) -> impl Strategy<Value = Matrix> {
    (field(), min..=max).prop_flat_map(|(f, n)| matrix(f, n, n))
}

/// Two or three matrices of the same shape.
fn parallel(max: usize) -> impl Strategy<Value = (Matrix, Matrix, Matrix)> {
    (field(), 0..=max, 0..=max).prop_flat_map(|(f, r, c)| (matrix(f, r, c), matrix(f, r, c), matrix(f, r, c)))
}

fn subobject(max: usize) -> impl Strategy<Value = (Subobject, Subobject)> {
    (field(), 1..=max)
        .prop_flat_map(|(f, n)| (0..=n, 0..=n).prop_flat_map(move |(a, b)| (matrix(f, n, a), matrix(f, n, b))))
        .prop_map(|(a, b)| (Subobject::span(&a, &tol()), Subobject::span(&b, &tol())))
}

fn rel(a: Quat, b: Quat, scale: f64) -> f64 {
    (a - b).norm() / scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scalar_ring_laws((a, b, c) in field().prop_flat_map(|f| (quat(f), quat(f), quat(f)))) {
        let s = a.norm() * b.norm() * c.norm();
        prop_assert!(rel((a * b) * c, a * (b * c), s) <= 1e-12);
        prop_assert!(rel(a * (b + c), a * b + a * c, s) <= 1e-12);
        prop_assert!(rel((a * b).conj(), b.conj() * a.conj(), a.norm() * b.norm()) <= 1e-12);
    }

    #[test]
    fn promoted_form_is_right_linear(
        (u, v, lambda) in (1usize..=3).prop_flat_map(|n| (matrix(FieldTag::R, 4 * n, 1), matrix(FieldTag::R, 4 * n, 1), quat(FieldTag::H)))
    ) {
        let n = u.rows() / 4;
        let form = promote_quaternionic(
            Matrix::identity(FieldTag::R, 4 * n),
            &StructureOps::right_multiplication_quaternionic(n),
            1e-12,
        ).unwrap();
        let l = Scalar::new(FieldTag::H, lambda);
        let lhs = form.inner(&form.act(&u, l), &v).unwrap().value();
        let rhs = form.inner(&u, &v).unwrap().value() * lambda;
        prop_assert!(rel(lhs, rhs, u.norm() * v.norm() * lambda.norm()) <= 1e-12);
        for w in form.orthogonality_witnesses(&u) {
            prop_assert!(w.abs() <= 1e-12 * u.norm().powi(2).max(1.0));
        }
    }

    #[test]
    fn dagger_is_an_involutive_anti_homomorphism(
        (f, g) in (field(), 0..=5usize, 0..=5usize, 0..=5usize)
            .prop_flat_map(|(k, a, b, c)| (matrix(k, b, a), matrix(k, c, b)))
    ) {
        prop_assert_eq!(f.dagger().dagger(), f.clone());
        let scale = 1.0f64.max(f.max_abs() * g.max_abs() * f.rows() as f64);
        prop_assert!((&g * &f).dagger().max_abs_diff(&(&f.dagger() * &g.dagger())) <= 1e-14 * scale);
    }

    #[test]
    fn gram_schmidt_is_isometric(m in any_matrix(6)) {
        let q = gram_schmidt(&m, tol().gs_drop).isometry;
        prop_assert!(q.isometry_defect() <= 1e-12);
        prop_assert!(q.cols() <= m.cols().min(m.rows()));
    }

    #[test]
    fn hermitian_eigen_reconstructs(m in square(1, 5)) {
        let h = &m + &m.dagger();
        let e = eigh(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) <= 1e-8 * h.max_abs().max(1.0));
        prop_assert!(e.vectors.unitary_defect() <= 1e-8);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn biproduct_addition_is_a_commutative_monoid((f, g, h) in parallel(5)) {
        let add = |x: &Matrix, y: &Matrix| add_via_biproduct(x, y).unwrap();
        let z = Matrix::zeros(f.field(), f.rows(), f.cols());
        prop_assert!(add(&f, &g).max_abs_diff(&add(&g, &f)) <= 1e-14);
        prop_assert!(add(&add(&f, &g), &h).max_abs_diff(&add(&f, &add(&g, &h))) <= 1e-14 * 4.0);
        prop_assert!(add(&f, &z).max_abs_diff(&f) <= 1e-14);
        prop_assert!(add(&f, &g).dagger().max_abs_diff(&add(&f.dagger(), &g.dagger())) <= 1e-14);
        let sum = direct_sum(&f, &g).unwrap();
        prop_assert_eq!(sum.dagger(), direct_sum(&f.dagger(), &g.dagger()).unwrap());
        let d = FdObject::new(f.field(), f.cols());
        prop_assert_eq!(d.diagonal().dagger(), d.codiagonal());
    }

    #[test]
    fn equalizer_factors_equalizing_maps((f, g, _) in parallel(5)) {
        let e = equalizer(&f, &g, &tol()).unwrap();
        prop_assert!(e.isometry_defect() <= 1e-10);
        prop_assert!((&f * &e).max_abs_diff(&(&g * &e)) <= 1e-8);
        // f and f equalize everywhere
        let all = equalizer(&f, &f, &tol()).unwrap();
        prop_assert_eq!(all.cols(), f.cols());
    }

    #[test]
    fn complement_reverses_order((a, b) in subobject(5)) {
        let t = tol();
        let (ac, bc) = (orthocomplement(&a, &t), orthocomplement(&b, &t));
        prop_assert!(orthocomplement(&ac, &t).same_as(&a, t.lattice_eq));
        if leq(&a, &b, &t).unwrap() {
            prop_assert!(leq(&bc, &ac, &t).unwrap());
        }
        let m = meet(&a, &b, &t).unwrap();
        let j = join(&a, &b, &t).unwrap();
        prop_assert!(join(&a, &m, &t).unwrap().same_as(&a, t.lattice_eq));
        prop_assert!(meet(&a, &j, &t).unwrap().same_as(&a, t.lattice_eq));
        prop_assert!(orthocomplement(&j, &t).same_as(&meet(&ac, &bc, &t).unwrap(), t.lattice_eq));
        prop_assert!(orthocomplement(&m, &t).same_as(&join(&ac, &bc, &t).unwrap(), t.lattice_eq));
    }

    #[test]
    fn phi_round_trips((a, b) in subobject(5)) {
        let t = tol();
        prop_assert!(phi_inverse(&phi(&a), &t).same_as(&a, t.lattice_eq));
        prop_assert_eq!(phi(&a).subset_of(&phi(&b), t.lattice_eq), leq(&a, &b, &t).unwrap());
        prop_assert_eq!(phi(&a).dim(), a.rank());
    }

    #[test]
    fn nested_family_maximum_is_the_join(
        cols in (field(), 1..=5usize).prop_flat_map(|(f, n)| (0..=n).prop_flat_map(move |k| matrix(f, n, k)))
    ) {
        // the prefixes of one list of columns form a directed chain
        let t = tol();
        let chain: Vec<Subobject> =
            (0..=cols.cols()).map(|k| Subobject::span(&cols.submatrix(0..cols.rows(), 0..k), &t)).collect();
        let mut total = chain[0].clone();
        for s in &chain {
            total = join(&total, s, &t).unwrap();
        }
        prop_assert!(total.same_as(chain.last().unwrap(), t.lattice_eq));
    }

    #[test]
    fn families_and_monos_correspond(m in square(0, 6)) {
        let t = tol();
        let iso = gram_schmidt(&m, t.gs_drop).isometry;
        let family = OrthonormalFamily::from_mono(&iso, t.orthonormal).unwrap();
        prop_assert_eq!(family_to_mono(&family), iso.clone());
        let basis = orthonormal_basis(family.ambient(), &family).unwrap();
        let u = family_to_mono(&basis);
        prop_assert!(u.unitary_defect() <= 1e-10);
        prop_assert_eq!(u.submatrix(0..u.rows(), 0..iso.cols()), iso);
    }

    #[test]
    fn hom_map_is_a_dagger_functor(
        (f, f2, g, h) in (field(), 0..=4usize, 0..=4usize, 0..=4usize)
            .prop_flat_map(|(k, a, b, c)| (matrix(k, b, a), matrix(k, b, a), matrix(k, c, b), matrix(k, a, 1)))
    ) {
        let hf = hom_map(&f);
        prop_assert_eq!(hf.adjoint().matrix().clone(), f.dagger());
        let composed = hom_map(&g).compose(&hf).unwrap();
        prop_assert!(composed.matrix().max_abs_diff(&(&g * &f)) <= 1e-13 * (1.0 + f.max_abs() * g.max_abs() * 4.0));
        prop_assert_eq!(hom_map(&Matrix::identity(f.field(), f.cols())).apply(&h).unwrap(), h.clone());
        let lhs = hom_map(&(&f + &f2)).apply(&h).unwrap();
        let rhs = &hf.apply(&h).unwrap() + &hom_map(&f2).apply(&h).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-13 * (1.0 + f.max_abs() + f2.max_abs()) * (1.0 + h.max_abs()) * 4.0);
    }

    #[test]
    fn fullness_reconstructs(m in any_matrix(5)) {
        let r = full_via_unitaries(&m, &tol(), false).unwrap();
        prop_assert!(r.residual <= 1e-8 * m.max_abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompositions_reconstruct(m in (field(), 1..=6usize).prop_flat_map(|(f, n)| {
        let n = if f == FieldTag::C { n } else { 2 * n.div_ceil(2) };
        matrix(f, n, n)
    })) {
        prop_assume!(!m.is_zero());
        let d = decompose(&m, &tol(), DecomposeOptions::default()).unwrap();
        prop_assert!(d.terms.len() <= d.bound());
        prop_assert!(d.residual(&m) <= 1e-8);
        prop_assert!(d.max_factor_defect() <= 1e-10);
        prop_assert!(d.max_quaternionic_linearity_defect() <= 1e-8);
        if let Some(&c) = d.diagnostics.get("commutation_rs") {
            prop_assert!(c <= 1e-9);
        }
        if let Some(&s) = d.diagnostics.get("split_exactness") {
            prop_assert!(s <= 1e-14 * m.max_abs().max(1.0));
        }
    }

    #[test]
    fn coherence_on_triples(f in prop_oneof![Just(FieldTag::R), Just(FieldTag::C)], a in 0..=3usize, b in 0..=3usize, c in 0..=3usize, d in 0..=3usize) {
        let ts = TensorStructure::new(f).unwrap();
        prop_assert!(ts.pentagon_defect(a, b, c, d).unwrap() <= 1e-14);
        prop_assert!(ts.triangle_defect(a, b).unwrap() <= 1e-14);
        prop_assert!(ts.associator(a, b, c).unitary_defect() <= 1e-14);
    }

    #[test]
    fn matrix_json_round_trips(m in any_matrix(4)) {
        let text = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(parse_matrix(&text).unwrap(), m);
    }

    #[test]
    fn field_and_dim_lists_parse(fields in prop::sample::subsequence(vec!["r", "c", "h"], 1..=3), dims in prop::collection::vec(0usize..=64, 1..6)) {
        let parsed = parse_fields(&fields.join(",")).unwrap();
        prop_assert_eq!(parsed.len(), fields.len());
        prop_assert!(parsed.windows(2).all(|w| w[0] < w[1]));
        let text = dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        prop_assert_eq!(parse_dims(&text).unwrap(), dims);
    }
}
