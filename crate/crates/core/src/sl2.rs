//! `SL(2, F_q)`: matrices, word evaluation, enumeration, irreducibility and
//! trace fingerprints.

use std::collections::HashMap;

use thiserror::Error;

use crate::gf::{FieldSpec, GFElem};
use crate::presentation::Word;

/// Default bound on `q` for anything that enumerates the whole group.
pub const DEFAULT_ENUMERATION_CEILING: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sl2Error {
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("matrix does not have determinant 1")]
    NotSpecial,
    #[error("word uses generator {gen} but the tuple has {len} entries")]
    IndexOutOfRange { gen: usize, len: usize },
    #[error("field order {q} exceeds the enumeration ceiling {ceiling}")]
    CeilingExceeded { q: u64, ceiling: u64 },
}

/// A determinant-one matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    a: GFElem,
    b: GFElem,
    c: GFElem,
    d: GFElem,
}

impl Mat2 {
    pub fn new(f: &FieldSpec, a: GFElem, b: GFElem, c: GFElem, d: GFElem) -> Result<Self, Sl2Error> {
        if ![a, b, c, d].iter().all(|&x| f.contains(x)) {
            return Err(Sl2Error::FieldMismatch);
        }
        if f.sub(f.mul(a, d), f.mul(b, c)) != f.one() {
            return Err(Sl2Error::NotSpecial);
        }
        Ok(Mat2 { a, b, c, d })
    }

    /// Convenience constructor from prime-field integers.
    pub fn from_ints(f: &FieldSpec, [a, b, c, d]: [i64; 4]) -> Result<Self, Sl2Error> {
        Mat2::new(f, f.from_int(a), f.from_int(b), f.from_int(c), f.from_int(d))
    }

    pub fn entries(&self) -> [GFElem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn identity(f: &FieldSpec) -> Self {
        Mat2 {
            a: f.one(),
            b: f.zero(),
            c: f.zero(),
            d: f.one(),
        }
    }

    pub fn trace(&self, f: &FieldSpec) -> GFElem {
        f.add(self.a, self.d)
    }

    pub fn mul(&self, f: &FieldSpec, o: &Mat2) -> Mat2 {
        Mat2 {
            a: f.add(f.mul(self.a, o.a), f.mul(self.b, o.c)),
            b: f.add(f.mul(self.a, o.b), f.mul(self.b, o.d)),
            c: f.add(f.mul(self.c, o.a), f.mul(self.d, o.c)),
            d: f.add(f.mul(self.c, o.b), f.mul(self.d, o.d)),
        }
    }

    pub fn try_mul(&self, f: &FieldSpec, o: &Mat2) -> Result<Mat2, Sl2Error> {
        if !self.entries().iter().chain(&o.entries()).all(|&x| f.contains(x)) {
            return Err(Sl2Error::FieldMismatch);
        }
        Ok(self.mul(f, o))
    }

    /// Adjugate, which is the inverse because the determinant is one.
    pub fn inv(&self, f: &FieldSpec) -> Mat2 {
        Mat2 {
            a: self.d,
            b: f.neg(self.b),
            c: f.neg(self.c),
            d: self.a,
        }
    }

    pub fn conjugate_by(&self, f: &FieldSpec, c: &Mat2) -> Mat2 {
        c.mul(f, self).mul(f, &c.inv(f))
    }

    /// Entrywise Frobenius.
    pub fn frobenius(&self, f: &FieldSpec) -> Mat2 {
        Mat2 {
            a: f.frobenius(self.a),
            b: f.frobenius(self.b),
            c: f.frobenius(self.c),
            d: f.frobenius(self.d),
        }
    }

    /// Packed index `((a q + b) q + c) q + d`; matches enumeration order.
    pub fn index(&self, f: &FieldSpec) -> u64 {
        let q = u64::from(f.order());
        self.entries()
            .iter()
            .fold(0, |acc, x| acc * q + u64::from(x.index()))
    }

    pub fn format(&self, f: &FieldSpec) -> String {
        format!(
            "[[{},{}],[{},{}]]",
            f.format(self.a),
            f.format(self.b),
            f.format(self.c),
            f.format(self.d)
        )
    }
}

/// Images of the generators, one matrix per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepTuple(pub Vec<Mat2>);

impl RepTuple {
    pub fn mats(&self) -> &[Mat2] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate_by(&self, f: &FieldSpec, c: &Mat2) -> RepTuple {
        RepTuple(self.0.iter().map(|m| m.conjugate_by(f, c)).collect())
    }

    pub fn frobenius(&self, f: &FieldSpec) -> RepTuple {
        RepTuple(self.0.iter().map(|m| m.frobenius(f)).collect())
    }
}

/// Image of `w` under `generator i -> t[i]`.
pub fn eval_word(f: &FieldSpec, t: &[Mat2], w: &Word) -> Result<Mat2, Sl2Error> {
    if let Some(gen) = w.max_gen().filter(|&g| g >= t.len()) {
        return Err(Sl2Error::IndexOutOfRange { gen, len: t.len() });
    }
    Ok(eval_word_unchecked(f, t, w))
}

pub(crate) fn eval_word_unchecked(f: &FieldSpec, t: &[Mat2], w: &Word) -> Mat2 {
    w.letters().iter().fold(Mat2::identity(f), |acc, l| {
        let m = t[l.gen];
        if l.inverse {
            acc.mul(f, &m.inv(f))
        } else {
            acc.mul(f, &m)
        }
    })
}

fn check_ceiling(f: &FieldSpec, ceiling: u64) -> Result<(), Sl2Error> {
    if f.exceeds(ceiling) {
        Err(Sl2Error::CeilingExceeded {
            q: u64::from(f.order()),
            ceiling,
        })
    } else {
        Ok(())
    }
}

/// Every element of `SL(2, F_q)` exactly once, in packed-index order.
pub fn enumerate_sl2(f: &FieldSpec, ceiling: u64) -> Result<impl Iterator<Item = Mat2> + '_, Sl2Error> {
    check_ceiling(f, ceiling)?;
    let one = f.one();
    let iter = f.elements().flat_map(move |a| {
        f.elements().flat_map(move |b| {
            f.elements().flat_map(move |c| {
                let (first, rest): (Option<Mat2>, Option<_>) = if a != f.zero() {
                    // d = (1 + b c) / a
                    let d = f.mul(f.add(one, f.mul(b, c)), f.inv(a).unwrap());
                    (Some(Mat2 { a, b, c, d }), None)
                } else if b != f.zero() && f.mul(b, c) == f.neg(one) {
                    (None, Some(f.elements().map(move |d| Mat2 { a, b, c, d })))
                } else {
                    (None, None)
                };
                first.into_iter().chain(rest.into_iter().flatten())
            })
        })
    });
    Ok(iter)
}

pub fn sl2_order(q: u64) -> u64 {
    q * q * q - q
}

/// Collects the group into a vector.
pub fn sl2_elements(f: &FieldSpec, ceiling: u64) -> Result<Vec<Mat2>, Sl2Error> {
    Ok(enumerate_sl2(f, ceiling)?.collect())
}

/// True iff some `F_q`-rational line is fixed by every matrix.
pub fn is_reducible_over_base(f: &FieldSpec, t: &[Mat2]) -> bool {
    let fixes = |x: GFElem, y: GFElem| {
        t.iter().all(|m| {
            // (x, y) and M (x, y) are parallel.
            let mx = f.add(f.mul(m.a, x), f.mul(m.b, y));
            let my = f.add(f.mul(m.c, x), f.mul(m.d, y));
            f.mul(x, my) == f.mul(y, mx)
        })
    };
    fixes(f.zero(), f.one()) || f.elements().any(|s| fixes(f.one(), s))
}

/// Burnside test: the algebra generated by the matrices is all of `M_2`.
///
/// The algebra is spanned by `I`, the `A_i` and the products `A_i A_j` with
/// `i < j` (Cayley-Hamilton handles squares and reversed products), and its
/// dimension does not change under field extension.
pub fn is_absolutely_irreducible(f: &FieldSpec, t: &[Mat2]) -> bool {
    span_dimension(f, t) == 4
}

pub fn span_dimension(f: &FieldSpec, t: &[Mat2]) -> usize {
    let mut basis = SpanBuilder::new(f);
    basis.push(Mat2::identity(f).entries());
    for m in t {
        if basis.push(m.entries()) {
            return 4;
        }
    }
    for (i, x) in t.iter().enumerate() {
        for y in &t[i + 1..] {
            if basis.push(x.mul(f, y).entries()) {
                return 4;
            }
        }
    }
    basis.rank()
}

/// Incremental row echelon form over `F_q` for vectors in `F_q^4`.
struct SpanBuilder<'f> {
    f: &'f FieldSpec,
    rows: Vec<([GFElem; 4], usize)>,
}

impl<'f> SpanBuilder<'f> {
    fn new(f: &'f FieldSpec) -> Self {
        SpanBuilder { f, rows: Vec::with_capacity(4) }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a vector; returns true once the span is the whole space.
    fn push(&mut self, mut v: [GFElem; 4]) -> bool {
        let f = self.f;
        for (row, pivot) in &self.rows {
            let coef = v[*pivot];
            if coef != f.zero() {
                for j in 0..4 {
                    v[j] = f.sub(v[j], f.mul(coef, row[j]));
                }
            }
        }
        if let Some(pivot) = v.iter().position(|&x| x != f.zero()) {
            let scale = f.inv(v[pivot]).expect("pivot is nonzero");
            let v = v.map(|x| f.mul(x, scale));
            // Keep existing rows reduced in the new pivot column.
            for (row, _) in self.rows.iter_mut() {
                let coef = row[pivot];
                if coef != f.zero() {
                    for j in 0..4 {
                        row[j] = f.sub(row[j], f.mul(coef, v[j]));
                    }
                }
            }
            self.rows.push((v, pivot));
        }
        self.rows.len() == 4
    }
}

/// Generator index lists whose traces make up a character fingerprint:
/// singletons, then pairs `i < j`, then triples `i < j < k`, each in
/// lexicographic order.
pub fn fingerprint_words(l: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..l).map(|i| vec![i]).collect();
    for i in 0..l {
        for j in i + 1..l {
            out.push(vec![i, j]);
        }
    }
    for i in 0..l {
        for j in i + 1..l {
            for k in j + 1..l {
                out.push(vec![i, j, k]);
            }
        }
    }
    out
}

/// Trace fingerprint of a representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub traces: Vec<GFElem>,
}

impl Character {
    pub fn frobenius(&self, f: &FieldSpec) -> Character {
        Character {
            traces: self.traces.iter().map(|&x| f.frobenius(x)).collect(),
        }
    }

    pub fn format(&self, f: &FieldSpec) -> Vec<String> {
        self.traces.iter().map(|&x| f.format(x)).collect()
    }
}

pub fn character_of(f: &FieldSpec, t: &[Mat2]) -> Character {
    let traces = fingerprint_words(t.len())
        .iter()
        .map(|w| {
            w.iter()
                .fold(Mat2::identity(f), |acc, &i| acc.mul(f, &t[i]))
                .trace(f)
        })
        .collect();
    Character { traces }
}

/// One representative per conjugacy class, the minimal packed index of its
/// class, in increasing order.
pub fn conjugacy_class_reps(f: &FieldSpec, ceiling: u64) -> Result<Vec<Mat2>, Sl2Error> {
    Ok(conjugacy_classes(f, ceiling)?
        .into_iter()
        .map(|(rep, _)| rep)
        .collect())
}

/// Class representatives with class sizes.
pub fn conjugacy_classes(f: &FieldSpec, ceiling: u64) -> Result<Vec<(Mat2, usize)>, Sl2Error> {
    let group = sl2_elements(f, ceiling)?;
    let inverses: Vec<Mat2> = group.iter().map(|c| c.inv(f)).collect();
    let mut class_of: HashMap<u64, usize> = HashMap::with_capacity(group.len());
    let mut out = Vec::new();
    for m in &group {
        if class_of.contains_key(&m.index(f)) {
            continue;
        }
        let id = out.len();
        let mut size = 0;
        for (c, c_inv) in group.iter().zip(&inverses) {
            let image = c.mul(f, m).mul(f, c_inv);
            if class_of.insert(image.index(f), id).is_none() {
                size += 1;
            }
        }
        out.push((*m, size));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::presentation::{parse, Letter};
    use proptest::prelude::*;
    use std::collections::HashSet;

    const CEIL: u64 = DEFAULT_ENUMERATION_CEILING;

    #[test]
    fn multiplication_examples() {
        let f = make_field(5, 1).unwrap();
        let u = Mat2::from_ints(&f, [1, 1, 0, 1]).unwrap();
        let l = Mat2::from_ints(&f, [1, 0, 1, 1]).unwrap();
        assert_eq!(u.mul(&f, &l), Mat2::from_ints(&f, [2, 1, 1, 1]).unwrap());
        assert_eq!(u.mul(&f, &Mat2::identity(&f)), u);
        assert_eq!(u.inv(&f), Mat2::from_ints(&f, [1, -1, 0, 1]).unwrap());
        assert_eq!(Mat2::identity(&f).inv(&f), Mat2::identity(&f));
    }

    #[test]
    fn constructor_rejects_bad_determinant_and_fields() {
        let f = make_field(5, 1).unwrap();
        let g = make_field(7, 1).unwrap();
        assert_eq!(Mat2::from_ints(&f, [1, 1, 1, 1]), Err(Sl2Error::NotSpecial));
        let a = Mat2::identity(&f);
        let b = Mat2::identity(&g);
        assert_eq!(a.try_mul(&f, &b), Err(Sl2Error::FieldMismatch));
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        for (p, k) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            let f = make_field(p, k).unwrap();
            let q = f.order();
            let mut brute = 0u64;
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        for d in f.elements() {
                            if f.sub(f.mul(a, d), f.mul(b, c)) == f.one() {
                                brute += 1;
                            }
                        }
                    }
                }
            }
            let listed = sl2_elements(&f, CEIL).unwrap();
            assert_eq!(listed.len() as u64, brute);
            assert_eq!(brute, sl2_order(u64::from(q)));
            let distinct: HashSet<_> = listed.iter().collect();
            assert_eq!(distinct.len(), listed.len());
            assert!(listed.windows(2).all(|w| w[0].index(&f) < w[1].index(&f)));
        }
    }

    #[test]
    fn ceiling_is_enforced() {
        let f = make_field(7, 1).unwrap();
        assert!(matches!(
            enumerate_sl2(&f, 5).err(),
            Some(Sl2Error::CeilingExceeded { q: 7, ceiling: 5 })
        ));
    }

    #[test]
    fn word_evaluation() {
        let f = make_field(5, 1).unwrap();
        let a = Mat2::from_ints(&f, [2, 1, 1, 1]).unwrap();
        assert_eq!(eval_word(&f, &[a], &Word::empty()).unwrap(), Mat2::identity(&f));
        let inv = Word::new([Letter::new(0, true)]);
        assert_eq!(eval_word(&f, &[a], &inv).unwrap(), a.inv(&f));
        let w = Word::new([Letter::new(1, false)]);
        assert_eq!(
            eval_word(&f, &[a], &w),
            Err(Sl2Error::IndexOutOfRange { gen: 1, len: 1 })
        );
    }

    fn f3_irreducible_pair(f: &FieldSpec) -> Vec<Mat2> {
        vec![
            Mat2::from_ints(f, [0, -1, 1, 0]).unwrap(),
            Mat2::from_ints(f, [1, 1, 1, 2]).unwrap(),
        ]
    }

    #[test]
    fn reducibility_examples() {
        let f = make_field(3, 1).unwrap();
        let id = Mat2::identity(&f);
        assert!(is_reducible_over_base(&f, &[id, id]));
        let upper = [
            Mat2::from_ints(&f, [1, 1, 0, 1]).unwrap(),
            Mat2::from_ints(&f, [2, 1, 0, 2]).unwrap(),
        ];
        assert!(is_reducible_over_base(&f, &upper));
        assert!(!is_reducible_over_base(&f, &f3_irreducible_pair(&f)));
    }

    #[test]
    fn absolute_irreducibility_examples() {
        let f = make_field(3, 1).unwrap();
        let single = [Mat2::from_ints(&f, [0, -1, 1, 0]).unwrap()];
        assert!(!is_absolutely_irreducible(&f, &single));
        let id = Mat2::identity(&f);
        assert!(!is_absolutely_irreducible(&f, &[id, id]));
        assert!(is_absolutely_irreducible(&f, &f3_irreducible_pair(&f)));
        assert!(!is_absolutely_irreducible(&f, &[]));
    }

    #[test]
    fn irreducible_over_base_but_not_absolutely() {
        // [[0,-1],[1,0]] has characteristic polynomial x^2 + 1, irreducible
        // over F_3, so it fixes no rational line but splits over F_9.
        let f = make_field(3, 1).unwrap();
        let t = [Mat2::from_ints(&f, [0, -1, 1, 0]).unwrap()];
        assert!(!is_reducible_over_base(&f, &t));
        assert!(!is_absolutely_irreducible(&f, &t));
        let f9 = make_field(3, 2).unwrap();
        let e = crate::gf::Embedding::new(&f, &f9).unwrap();
        let [a, b, c, d] = t[0].entries().map(|x| e.apply(x));
        let lifted = [Mat2::new(&f9, a, b, c, d).unwrap()];
        assert!(is_reducible_over_base(&f9, &lifted));
    }

    #[test]
    fn burnside_agrees_with_line_test_over_quadratic_extension() {
        // Over F_{q^2} every eigenline of a 2x2 matrix over F_q is rational,
        // so absolute reducibility is rational reducibility there.
        let f = make_field(3, 1).unwrap();
        let f9 = make_field(3, 2).unwrap();
        let e = crate::gf::Embedding::new(&f, &f9).unwrap();
        let g = sl2_elements(&f, CEIL).unwrap();
        let lift = |m: &Mat2| {
            let [a, b, c, d] = m.entries().map(|x| e.apply(x));
            Mat2::new(&f9, a, b, c, d).unwrap()
        };
        for x in &g {
            for y in &g {
                let t = [*x, *y];
                let lifted = [lift(x), lift(y)];
                assert_eq!(is_absolutely_irreducible(&f, &t), !is_reducible_over_base(&f9, &lifted));
            }
        }
    }

    #[test]
    fn three_generators_need_the_whole_span() {
        // Pairwise reducible but jointly irreducible: eigenlines {L1,L2},
        // {L2,L3}, {L1,L3}. Over F_5: L1 = <e1>, L2 = <e2>, L3 = <(1,1)>.
        let f = make_field(5, 1).unwrap();
        let a = Mat2::from_ints(&f, [2, 0, 0, 3]).unwrap();
        // [[1,0],[1,1]] sends e1 to (1,1) and fixes e2
        let p = Mat2::from_ints(&f, [1, 0, 1, 1]).unwrap();
        let b = a.conjugate_by(&f, &p);
        // [[1,1],[0,1]] fixes e1 and sends e2 to (1,1)
        let p2 = Mat2::from_ints(&f, [1, 1, 0, 1]).unwrap();
        let c = a.conjugate_by(&f, &p2);
        for pair in [[a, b], [a, c], [b, c]] {
            assert!(is_reducible_over_base(&f, &pair), "pair should share a line");
        }
        assert!(!is_reducible_over_base(&f, &[a, b, c]));
        assert!(is_absolutely_irreducible(&f, &[a, b, c]));
    }

    #[test]
    fn character_examples() {
        let f = make_field(3, 1).unwrap();
        let id = Mat2::identity(&f);
        assert_eq!(character_of(&f, &[id, id]).traces, vec![f.from_int(2); 3]);
        assert_eq!(fingerprint_words(3).len(), 3 + 3 + 1);
        assert_eq!(fingerprint_words(4).len(), 4 + 6 + 4);
    }

    #[test]
    fn q8_tuple_over_f3_has_zero_traces() {
        let f = make_field(3, 1).unwrap();
        let q8 = parse("gens a b; rel a^4; rel a^2 b^-2; rel b^-1 a^-1 b a^-1;").unwrap();
        let g = sl2_elements(&f, CEIL).unwrap();
        let t = g
            .iter()
            .flat_map(|x| g.iter().map(move |y| [*x, *y]))
            .find(|t| {
                is_absolutely_irreducible(&f, t)
                    && q8.relators().iter().all(|r| eval_word(&f, t, r).unwrap() == Mat2::identity(&f))
            })
            .expect("Q8 has an irreducible representation over F_3");
        assert_eq!(character_of(&f, &t).traces, vec![f.zero(); 3]);
    }

    #[test]
    fn class_counts() {
        // SL(2,q) has q + 4 classes for odd q and q + 1 for even q.
        for (p, k, expected) in [(2, 1, 3), (3, 1, 7), (5, 1, 9), (2, 2, 5), (7, 1, 11), (3, 2, 13)] {
            let f = make_field(p, k).unwrap();
            let classes = conjugacy_classes(&f, CEIL).unwrap();
            assert_eq!(classes.len(), expected, "q = {}", f.order());
            let total: usize = classes.iter().map(|(_, s)| s).sum();
            assert_eq!(total as u64, sl2_order(u64::from(f.order())));
        }
    }

    #[test]
    fn central_classes_are_singletons() {
        let f = make_field(5, 1).unwrap();
        let classes = conjugacy_classes(&f, CEIL).unwrap();
        let size_of = |m: Mat2| classes.iter().find(|(r, _)| *r == m).map(|(_, s)| *s);
        let id = Mat2::identity(&f);
        let minus = Mat2::from_ints(&f, [-1, 0, 0, -1]).unwrap();
        assert_eq!(size_of(id), Some(1));
        assert_eq!(size_of(minus), Some(1));
        // representatives are the minimal index of their class
        let group = sl2_elements(&f, CEIL).unwrap();
        for (rep, _) in &classes {
            for c in &group {
                assert!(rep.conjugate_by(&f, c).index(&f) >= rep.index(&f));
            }
        }
    }

    fn field_and_group() -> impl Strategy<Value = (FieldSpec, Vec<Mat2>)> {
        prop::sample::select(vec![(3u64, 1u32), (5, 1), (2, 2), (3, 2)]).prop_map(|(p, k)| {
            let f = make_field(p, k).unwrap();
            let g = sl2_elements(&f, CEIL).unwrap();
            (f, g)
        })
    }

    fn random_word() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((0usize..2, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i)), 0..12)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matrix_group_laws((f, g) in field_and_group(), i in any::<usize>(), j in any::<usize>()) {
            let (a, b) = (g[i % g.len()], g[j % g.len()]);
            let ab = a.mul(&f, &b);
            let [x, y, z, w] = ab.entries();
            prop_assert_eq!(f.sub(f.mul(x, w), f.mul(y, z)), f.one());
            prop_assert_eq!(a.inv(&f).inv(&f), a);
            prop_assert_eq!(a.mul(&f, &a.inv(&f)), Mat2::identity(&f));
        }

        #[test]
        fn evaluation_is_a_homomorphism((f, g) in field_and_group(), i in any::<usize>(), j in any::<usize>(),
                                         u in random_word(), v in random_word()) {
            let t = [g[i % g.len()], g[j % g.len()]];
            let uw = Word::new(u.iter().copied());
            let vw = Word::new(v.iter().copied());
            let lhs = eval_word(&f, &t, &uw.concat(&vw)).unwrap();
            let rhs = eval_word(&f, &t, &uw).unwrap().mul(&f, &eval_word(&f, &t, &vw).unwrap());
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(eval_word(&f, &t, &uw.concat(&uw.inverse())).unwrap(), Mat2::identity(&f));
            // unreduced evaluation agrees with reduced
            let raw = u.iter().fold(Mat2::identity(&f), |acc, l| {
                let m = t[l.gen];
                acc.mul(&f, &if l.inverse { m.inv(&f) } else { m })
            });
            prop_assert_eq!(raw, eval_word(&f, &t, &uw).unwrap());
        }

        #[test]
        fn conjugation_invariance((f, g) in field_and_group(), i in any::<usize>(), j in any::<usize>(), k in any::<usize>(), c in any::<usize>()) {
            let t = [g[i % g.len()], g[j % g.len()], g[k % g.len()]];
            let cm = g[c % g.len()];
            let conj: Vec<Mat2> = t.iter().map(|m| m.conjugate_by(&f, &cm)).collect();
            prop_assert_eq!(character_of(&f, &t), character_of(&f, &conj));
            prop_assert_eq!(span_dimension(&f, &t), span_dimension(&f, &conj));
            prop_assert_eq!(is_reducible_over_base(&f, &t), is_reducible_over_base(&f, &conj));
            if is_absolutely_irreducible(&f, &t) {
                prop_assert!(!is_reducible_over_base(&f, &t));
            }
        }
    }
}
