//! Cross-module properties on random presentations.

use charvar_core::distinguish::{compare, fingerprint, VerdictKind};
use charvar_core::gf::{make_field, FieldSpec};
use charvar_core::presentation::{FillingSlope, Letter, Presentation, SlopeConvention, Word};
use charvar_core::repvar::{count_characters, random_presentation, satisfies_relators, CharVarCount, EnumOptions};
use charvar_core::sl2::{character_of, is_absolutely_irreducible, sl2_elements, Mat2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random(seed: u64) -> Presentation {
    random_presentation(&mut ChaCha8Rng::seed_from_u64(seed), 2, 2, 6)
}

fn fields() -> [FieldSpec; 3] {
    [(2, 1), (3, 1), (2, 2)].map(|(p, k)| make_field(p, k).unwrap())
}

fn count(p: &Presentation, f: &FieldSpec) -> Option<CharVarCount> {
    count_characters(p, f, &EnumOptions::default()).ok()
}

fn rebuild(p: &Presentation, relators: Vec<Word>) -> Presentation {
    Presentation::new(p.generators().to_vec(), relators, None).unwrap()
}

fn rotate(w: &Word, by: usize) -> Word {
    let l = w.letters();
    if l.is_empty() {
        return w.clone();
    }
    let k = by % l.len();
    Word::new(l[k..].iter().chain(&l[..k]).copied())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Cyclic rotation, inversion and reordering of relators leave the group
    // and the generating tuple alone, so the character set is unchanged.
    #[test]
    fn characters_survive_relator_moves(seed in any::<u64>(), by in 0usize..8) {
        let p = random(seed);
        let mut moved: Vec<Word> = p.relators().iter().map(|r| rotate(&r.inverse(), by)).collect();
        moved.reverse();
        let q = rebuild(&p, moved);
        for f in fields() {
            let (a, b) = (count(&p, &f), count(&q, &f));
            prop_assert_eq!(a.map(|c| c.characters), b.map(|c| c.characters));
        }
    }

    // Adding a conjugate of a product of relators is a Tietze move.
    #[test]
    fn characters_survive_redundant_relators(seed in any::<u64>()) {
        let p = random(seed);
        prop_assume!(!p.relators().is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let g = Word::new([Letter::new(rng.gen_range(0..p.rank()), rng.gen_bool(0.5))]);
        let r = p.relators().iter().fold(Word::empty(), |acc, r| acc.concat(r));
        let q = p.with_relator(g.concat(&r).concat(&g.inverse())).unwrap();
        for f in fields() {
            prop_assert_eq!(count(&p, &f).map(|c| c.characters), count(&q, &f).map(|c| c.characters));
        }
    }

    // Swapping generators permutes trace coordinates but not the count.
    #[test]
    fn count_survives_generator_swap(seed in any::<u64>()) {
        let p = random(seed);
        prop_assume!(p.rank() == 2);
        let swapped: Vec<Word> = p.relators().iter().map(|r| r.relabel(&[1, 0])).collect();
        let q = rebuild(&p, swapped);
        for f in fields() {
            prop_assert_eq!(count(&p, &f).map(|c| c.char_count), count(&q, &f).map(|c| c.char_count));
        }
    }

    #[test]
    fn conjugation_preserves_points_characters_and_irreducibility(seed in any::<u64>()) {
        let p = random(seed);
        let f = make_field(3, 1).unwrap();
        let g = sl2_elements(&f, u64::MAX).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let t: Vec<Mat2> = (0..p.rank()).map(|_| g[rng.gen_range(0..g.len())]).collect();
            if !satisfies_relators(&p, &f, &t) {
                continue;
            }
            let c = g[rng.gen_range(0..g.len())];
            let u: Vec<Mat2> = t.iter().map(|m| m.conjugate_by(&f, &c)).collect();
            prop_assert!(satisfies_relators(&p, &f, &u));
            prop_assert_eq!(character_of(&f, &t), character_of(&f, &u));
            prop_assert_eq!(is_absolutely_irreducible(&f, &t), is_absolutely_irreducible(&f, &u));
        }
    }

    #[test]
    fn compare_is_symmetric(a in any::<u64>(), b in any::<u64>()) {
        let opts = EnumOptions::default();
        let (x, y) = (random(a), random(b));
        let (Ok(fx), Ok(fy)) = (fingerprint(&x, &[2, 3], 1, &opts), fingerprint(&y, &[2, 3], 1, &opts)) else {
            return Ok(());
        };
        prop_assert_eq!(compare(&fx, &fy).unwrap().kind, compare(&fy, &fx).unwrap().kind);
        prop_assert_eq!(compare(&fx, &fx).unwrap().kind, VerdictKind::Indistinct);
    }

    #[test]
    fn filling_adds_one_relator(seed in any::<u64>(), sp in -6i64..=6, sq in 1i64..=6) {
        let x = random(seed);
        let m = Word::new([Letter::new(0, false)]);
        let l = x.relators().first().cloned().unwrap_or_else(Word::empty);
        let with_per = Presentation::new(x.generators().to_vec(), x.relators().to_vec(), Some((m, l))).unwrap();
        let Ok(slope) = FillingSlope::new(sp, sq) else { return Ok(()); };
        let filled = with_per.dehn_fill(slope, SlopeConvention::QmPl).unwrap();
        prop_assert_eq!(filled.relators().len(), x.relators().len() + 1);
        prop_assert_eq!(&filled.relators()[..x.relators().len()], x.relators());
        prop_assert_eq!(filled.generators(), x.generators());
        prop_assert_eq!(filled.peripheral(), with_per.peripheral());
    }
}
