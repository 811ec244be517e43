//! Frozen values. Each was computed once by an independent route (hand
//! expansion, brute force, or the oracles in tests/common) and is pinned here.

mod common;

use num_bigint::BigInt;
use num_traits::Zero;

use common::*;
use dp4::canon::{canonical_quadrics, euler_traces, DeltaPrime};
use dp4::exact::RatPoly;
use dp4::galois::{galois_group_quintic, GaloisLabel};
use dp4::groupmod::lemma_table;
use dp4::localarith::{bad_set_s0, find_bt};
use dp4::pencil::Pencil;
use dp4::report::pencil_hash;

fn poly(s: &str) -> RatPoly {
    RatPoly::parse(s).unwrap()
}

#[test]
fn galois_labels_of_sample_quintics() {
    let cases = [
        ("t^5 - 110*t^3 - 55*t^2 + 2310*t + 979", GaloisLabel::C5),
        ("t^5 - 5*t + 12", GaloisLabel::D10),
        ("t^5 - 2", GaloisLabel::F20),
        ("t^5 + 20*t + 16", GaloisLabel::A5),
        ("t^5 - t + 1", GaloisLabel::S5),
        ("t^5 - 5*t^3 + 4*t", GaloisLabel::Reducible),
    ];
    for (p, label) in cases {
        assert_eq!(galois_group_quintic(&poly(p)).unwrap().label, label, "{p}");
    }
}

#[test]
fn lemma_table_rows() {
    let rows = lemma_table().unwrap();
    let got: Vec<(&str, usize, usize, usize)> = rows.iter().map(|r| (r.group.as_str(), r.order, r.h1_dim, r.r)).collect();
    assert_eq!(got, [("C5", 5, 0, 4), ("D10", 10, 0, 2), ("F20", 20, 0, 1), ("A5", 60, 0, 1), ("S5", 120, 0, 1)]);
    assert!(rows.iter().all(|r| r.pass));
}

/// For t^5 - 2 the traces of theta^k / P'(theta) are 1 at k = 4, 2 at k = 9 and
/// 0 otherwise below 10, which fixes both forms by hand.
#[test]
fn canonical_model_of_pure_quintic() {
    let p = poly("t^5 - 2");
    let tau = euler_traces(&p, 10).unwrap();
    let expected: Vec<Rat> = [0, 0, 0, 0, 1, 0, 0, 0, 0, 2].iter().map(|&k| q(k)).collect();
    assert_eq!(tau, expected);
    let m = canonical_quadrics(&p, &DeltaPrime::one()).unwrap();
    assert_eq!(m.equations(), ["2*u0*u4 + 2*u1*u3 + u2^2", "2*u0*u3 + 2*u1*u2 + 2*u4^2"]);
}

fn eval_int(p: &RatPoly, b: &BigInt) -> BigInt {
    p.coeffs().iter().rev().fold(BigInt::zero(), |acc, c| acc * b + c.numer())
}

#[test]
fn dihedral_bt_witnesses() {
    let p = poly("t^5 - 5*t + 12");
    let delta = DeltaPrime::Global(poly("-12*t"));
    let s0 = bad_set_s0(&p, &delta, 100).unwrap();
    let cases: [(&[&str], i64, &[(u64, bool)]); 2] =
        [(&["2'2'1", "221"], 35_228_991, &[(109, false), (107, true)]), (&["221"], 418, &[(107, true)])];
    for (classes, b, primes) in cases {
        let classes: Vec<String> = classes.iter().map(|s| s.to_string()).collect();
        let w = find_bt(&p, &delta, &classes, &s0, 100_000).unwrap();
        assert_eq!(w.b, b.to_string());
        let got: Vec<(u64, bool)> = w.primes.iter().map(|x| (x.p, x.residue_zero)).collect();
        assert_eq!(got, primes);
        let pb = eval_int(&p, &BigInt::from(b));
        for &(v, _) in primes {
            let v = BigInt::from(v);
            assert!((&pb % &v).is_zero() && !(&pb % (&v * &v)).is_zero());
        }
    }
}

#[test]
fn corpus_hashes() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/");
    let cases = [
        ("split_trivial.json", "d4beb08b11e2ebc786e4de195514d35077c9ab88591ef4e5d90dc0a30482e068"),
        ("split_nontrivial.json", "7c45ffe2d46413df83fc9f10c926a24c6c075d7679d0a7a91284bbb6cccc67b0"),
        ("pure_quintic.json", "1a7914b8fbbd6312b82b9c422c110ba3725584e5e8278f2bd9b8b6fa0320dd9d"),
        ("dihedral.json", "7bdf9c027aa9eddbaf1913dab0cd52e349b1a1af8e7a45d580bff2870f3c9c65"),
        ("definite_diagonal.json", "03e5a653cbbd78793cee29a22b844ba0652af55e3cad35eb65fe6bda01be0150"),
    ];
    for (file, hash) in cases {
        let text = std::fs::read_to_string(format!("{dir}{file}")).unwrap();
        assert_eq!(pencil_hash(&Pencil::from_json(&text).unwrap()), hash, "{file}");
    }
}
