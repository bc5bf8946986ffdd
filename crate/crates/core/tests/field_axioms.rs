use redei_core::{Field, Gf};

fn check_field(f: &Field) {
    let els: Vec<Gf> = f.elements().collect();
    assert_eq!(els.len() as u32, f.order());
    for &a in &els {
        assert_eq!(f.add(a, Gf::ZERO), a);
        assert_eq!(f.mul(a, Gf::ONE), a);
        assert!(f.add(a, f.neg(a)).is_zero());
        if !a.is_zero() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Gf::ONE);
        }
        // Frobenius fixes the prime field exactly
        let ap = f.pow(a, f.characteristic() as u64);
        assert_eq!(f.pow(a, f.order() as u64), a);
        assert_eq!(ap == a, (0..f.characteristic()).any(|k| Gf(k) == a));
        for &b in &els {
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.sub(f.add(a, b), b), a);
            for &c in &els {
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }
    let g = f.primitive_element();
    let mut seen = std::collections::BTreeSet::new();
    let mut x = Gf::ONE;
    for _ in 1..f.order() {
        seen.insert(x);
        x = f.mul(x, g);
    }
    assert_eq!(seen.len() as u32, f.order() - 1, "primitive element of GF({})", f.order());
}

#[test]
fn all_fields_up_to_sixteen() {
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        check_field(&Field::of_order(q).unwrap());
    }
}

#[test]
fn subfields_are_closed() {
    for q in [4u32, 8, 9, 16] {
        let f = Field::of_order(q).unwrap();
        for sub in f.subfields() {
            let els: Vec<Gf> = sub.elements.clone();
            assert_eq!(els.len() as u32, sub.order);
            for &a in &els {
                assert_eq!(f.pow(a, sub.order as u64), a);
                for &b in &els {
                    assert!(els.contains(&f.add(a, b)));
                    assert!(els.contains(&f.mul(a, b)));
                }
            }
        }
    }
}

#[test]
fn of_order_rejects_non_prime_powers() {
    for q in [0u32, 1, 6, 10, 12, 15] {
        assert!(Field::of_order(q).is_err(), "q = {q}");
    }
}
