use std::time::Instant;

use hodgelab::calculus::identities::{verify_many, IdentityTag};

#[test]
fn every_tag_holds_exactly() {
    for n in [2usize, 3] {
        for tag in IdentityTag::all(n) {
            let t = Instant::now();
            let vs = verify_many(tag, n, 1000, 50).unwrap();
            let bad: Vec<_> = vs.iter().filter(|v| !v.pass).map(|v| (v.seed, v.differing_monomials)).collect();
            eprintln!("n={n} {:<40} {:>7.2}s", tag.name(), t.elapsed().as_secs_f64());
            assert!(bad.is_empty(), "{tag:?} n={n}: {bad:?}");
            assert_eq!(vs.len(), 50);
            assert!(tag.vacuous_in(n) || vs.iter().all(|v| v.lhs_monomials > 0));
        }
    }
}
