use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use euclid_core::certify::{
    certify_biquadratic, search_biquadratic, search_triples, Certificate, CertifyConfig, Verdict,
};
use euclid_core::sieve::Classification;
use euclid_oracle::arith;

fn config() -> CertifyConfig {
    CertifyConfig {
        xs: vec![100_000],
        growth: false,
        ..CertifyConfig::default()
    }
}

/// `x^(n/d) < q`, exactly.
fn exceeds(q: u64, x: u64, n: u64, d: u64) -> bool {
    BigUint::from(q).pow(d as u32) > BigUint::from(x).pow(n as u32)
}

#[test]
fn certificates_round_trip_and_reproduce() {
    let config = CertifyConfig {
        xs: vec![20_000, 60_000],
        ..CertifyConfig::default()
    };
    for (q, r, s) in search_triples(13) {
        let cert = certify_biquadratic(q, r, s, &config).unwrap();
        let text = cert.to_json();
        let parsed = Certificate::from_json(&text).unwrap();
        assert_eq!(parsed, cert);
        assert_eq!(parsed.to_json(), text, "({q}, {r}, {s})");
        let again = certify_biquadratic(q, r, s, &config).unwrap();
        assert_eq!(again.to_json(), text);
    }
}

#[test]
fn certified_samples_pass_independent_audits() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut audited = 0;
    let config = CertifyConfig {
        xs: vec![1_000_000],
        ..config()
    };
    for (q, r, s) in search_triples(17) {
        let cert = certify_biquadratic(q, r, s, &config).unwrap();
        if cert.verdict != Verdict::Certified {
            continue;
        }
        assert_eq!(cert.class_data[0].class_number, 2);
        let f = cert.f.unwrap();
        let j = &cert.sieve[0];
        let a = cert.residues.as_ref().unwrap().smallest.unwrap();
        assert_eq!(j.a, a);
        let picks: Vec<_> = cert.sieve_samples.choose_multiple(&mut rng, 100).collect();
        assert_eq!(picks.len(), cert.sieve_samples.len().min(100));
        assert!(!picks.is_empty(), "({q}, {r}, {s}) has no samples");
        for sample in picks {
            let p = sample.p;
            assert!(arith::is_prime(p));
            assert_eq!(p % f, a);
            for d in [q, r * s, q * r * s] {
                assert_eq!(arith::legendre(d as i64, p), 1, "p = {p} must split in K");
            }
            assert_eq!(
                arith::legendre(r as i64, p),
                -1,
                "p = {p} must not split in H"
            );
            let fm = arith::factor((p - 1) / 2);
            let primes: Vec<u64> = fm
                .iter()
                .flat_map(|&(q, e)| std::iter::repeat(q).take(e as usize))
                .collect();
            assert_eq!(primes, sample.factors);
            match sample.classification {
                Classification::Prime => assert_eq!(primes.len(), 1),
                Classification::WindowedSemiprime => {
                    assert_eq!(primes.len(), 2);
                    let (b, c) = (j.window.b, j.window.c);
                    assert!(exceeds(primes[0], j.x, *b.numer(), *b.denom()));
                    assert!(!exceeds(primes[0], j.x, *c.numer(), *c.denom()));
                }
                Classification::Reject => panic!("rejected prime among samples"),
            }
            audited += 1;
        }
    }
    assert!(audited > 300, "{audited}");
}

#[test]
fn verdicts_are_consistent_with_checklists() {
    let summaries = search_biquadratic(19, &config()).unwrap();
    assert_eq!(summaries.len(), search_triples(19).len());
    for (summary, (q, r, s)) in summaries.iter().zip(search_triples(19)) {
        assert_eq!((summary.q, summary.r, summary.s), (q, r, s));
        match &summary.verdict {
            Verdict::Certified => {
                assert_eq!(summary.class_number, Some(2));
                assert!(summary.smallest_residue.is_some());
            }
            Verdict::HypothesisFailed { failed } => assert!(!failed.is_empty()),
            Verdict::OutOfRange { .. } => {}
        }
    }
    let cert = certify_biquadratic(7, 3, 5, &config()).unwrap();
    if let Verdict::HypothesisFailed { failed } = &cert.verdict {
        for id in failed {
            assert!(cert.checklist.iter().any(|c| &c.id == id && !c.passed));
        }
    }
}
