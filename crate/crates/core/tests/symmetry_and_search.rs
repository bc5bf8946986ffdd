use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use redei_core::geometry::{directions_of, s_of_set, Collineation};
use redei_core::search::{
    complete_to_q, enumerate_sets, is_maximal, is_maximal_naive, Canonizer, CompletionQuery, SearchConfig,
};
use redei_core::{AffinePoint, AffinePointSet, Field, Gf};

fn random_set(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> AffinePointSet {
    let cells = (f.order() * f.order()) as usize;
    let codecs: Vec<u32> = rand::seq::index::sample(rng, cells, n).into_iter().map(|c| c as u32).collect();
    AffinePointSet::from_codecs(f, &codecs).unwrap()
}

fn random_collineation(f: &Field, rng: &mut ChaCha8Rng) -> Collineation {
    let q = f.order();
    loop {
        let mut g = || Gf(rng.gen_range(0..q));
        let m = [[g(), g()], [g(), g()]];
        let v = [g(), g()];
        if let Ok(c) = Collineation::new(f, m, v) {
            return c;
        }
    }
}

#[test]
fn collineations_preserve_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [3u32, 4, 5] {
        let f = Field::of_order(q).unwrap();
        for _ in 0..200 {
            let n = rng.gen_range(2..=q as usize);
            let u = random_set(&f, n, &mut rng);
            let c = random_collineation(&f, &mut rng);
            let w = c.apply_set(&u);
            assert_eq!(w.len(), u.len());
            let (du, dw) = (directions_of(&u), directions_of(&w));
            assert_eq!(du.len(), dw.len());
            let mapped: std::collections::BTreeSet<_> = du.iter().map(|y| c.apply_direction(&f, y)).collect();
            assert_eq!(&mapped, dw.determined());
            assert_eq!(s_of_set(&u).unwrap().s, s_of_set(&w).unwrap().s);
            assert_eq!(is_maximal(&u), is_maximal(&w));
        }
    }
}

#[test]
fn incremental_maximality_matches_naive() {
    let cfg = SearchConfig::exhaustive(3, 0, 9);
    let sets = enumerate_sets(&cfg).unwrap();
    assert_eq!(sets.len(), 512);
    for u in &sets {
        assert_eq!(is_maximal(u), is_maximal_naive(u), "{:?}", u.codecs());
    }
}

#[test]
fn canonical_form_is_orbit_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for q in [3u32, 4, 5] {
        let f = Field::of_order(q).unwrap();
        let canon = Canonizer::new(&f);
        for _ in 0..100 {
            let n = rng.gen_range(1..=q as usize + 1);
            let u = random_set(&f, n, &mut rng);
            let w = random_collineation(&f, &mut rng).apply_set(&u);
            assert_eq!(canon.canonical(&u.codecs()), canon.canonical(&w.codecs()));
        }
    }
}

#[test]
fn orbit_representatives_cover_every_set() {
    // Orbit sizes of the canonical representatives add up to all subsets.
    let f = Field::of_order(3).unwrap();
    let canon = Canonizer::new(&f);
    let mut cfg = SearchConfig::exhaustive(3, 0, 4);
    let all = enumerate_sets(&cfg).unwrap();
    cfg.symmetry = true;
    let reps = enumerate_sets(&cfg).unwrap();
    let mut classes = std::collections::BTreeSet::new();
    for u in &all {
        classes.insert(canon.canonical(&u.codecs()));
    }
    assert_eq!(classes.len(), reps.len());
    for r in &reps {
        assert!(classes.contains(&r.codecs()));
    }
}

#[test]
fn completions_have_q_points_and_same_directions() {
    let f = Field::of_order(5).unwrap();
    // the line y = x minus two points
    let u = AffinePointSet::from_pairs(&f, &[(0, 0), (1, 1), (2, 2)]).unwrap();
    let res = complete_to_q(&CompletionQuery::new(u.clone())).unwrap();
    assert_eq!(res.epsilon, 2);
    assert!(!res.completions.is_empty());
    let d = directions_of(&u);
    for c in &res.completions {
        let w = AffinePointSet::from_codecs(&f, c).unwrap();
        assert_eq!(w.len(), 5);
        assert!(u.points().iter().all(|p| w.contains(p)));
        assert_eq!(directions_of(&w).determined(), d.determined());
    }
    assert!(!res.alarm);

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let u = random_set(&f, rng.gen_range(2..5), &mut rng);
        let res = complete_to_q(&CompletionQuery::new(u.clone())).unwrap();
        for c in &res.completions {
            let w = AffinePointSet::from_codecs(&f, c).unwrap();
            assert_eq!(w.len(), 5);
            assert_eq!(directions_of(&w).determined(), directions_of(&u).determined());
        }
    }
}

#[test]
fn whole_plane_is_maximal() {
    let f = Field::of_order(3).unwrap();
    let all: Vec<AffinePoint> = (0..9).map(|c| AffinePoint::from_codec(c, 3)).collect();
    let u = AffinePointSet::new(&f, all).unwrap();
    assert!(is_maximal(&u));
    assert!(is_maximal_naive(&u));
}
