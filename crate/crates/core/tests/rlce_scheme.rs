use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rlce_core::linalg::weight;
use rlce_core::rlce::keygen;
use rlce_core::{Ciphertext, Elem, PrivateKey, PublicKey, RlceError, RlceParams};

fn random_message(pk: &PublicKey, rng: &mut ChaCha20Rng) -> Vec<Elem> {
    let f = pk.field().clone();
    (0..pk.params().k).map(|_| f.random(rng)).collect()
}

fn residual(pk: &PublicKey, msg: &[Elem], ct: &Ciphertext) -> Vec<Elem> {
    let mg = pk.encode(msg).unwrap();
    ct.y.iter().zip(&mg).map(|(&a, &b)| a + b).collect()
}

#[test]
fn roundtrip_across_parameter_shapes() {
    let mut rng = ChaCha20Rng::seed_from_u64(100);
    let shapes = [
        RlceParams::new(40, 20, 10, 1, 8),
        RlceParams::new(30, 12, 9, 2, 5),
        RlceParams::new(16, 6, 5, 3, 4),
        RlceParams::new(120, 80, 20, 1, 7),
        RlceParams::new(200, 120, 40, 1, 10),
    ];
    for params in shapes {
        for systematic in [false, true] {
            let (pk, sk) = keygen(&params, systematic, &mut rng).unwrap();
            assert_eq!(pk.generator().rank(), params.k);
            for _ in 0..30 {
                let msg = random_message(&pk, &mut rng);
                let ct = pk.encrypt(&msg, &mut rng).unwrap();
                assert_eq!(weight(&residual(&pk, &msg, &ct)), params.t);
                assert_eq!(sk.decrypt(&pk, &ct).unwrap(), msg, "{params} systematic={systematic}");
            }
        }
    }
}

#[test]
fn errors_project_blockwise() {
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    let params = RlceParams::new(30, 12, 9, 2, 5);
    let (pk, sk) = keygen(&params, false, &mut rng).unwrap();
    let w = params.r + 1;
    for _ in 0..200 {
        let msg = random_message(&pk, &mut rng);
        let ct = pk.encrypt(&msg, &mut rng).unwrap();
        let e = residual(&pk, &msg, &ct);
        let e_perm = sk.p_inv().apply(&e).unwrap();
        let e_unmixed = sk.unmix(&e).unwrap();
        let mut nonzero_blocks = 0;
        for i in 0..params.n {
            let block_nonzero = e_perm[i * w..(i + 1) * w].iter().any(|x| !x.is_zero());
            nonzero_blocks += block_nonzero as usize;
            if !e_unmixed[i * w].is_zero() {
                assert!(block_nonzero);
            }
        }
        assert!(nonzero_blocks <= params.t);
    }
}

#[test]
fn repeated_encryptions_differ() {
    let mut rng = ChaCha20Rng::seed_from_u64(102);
    let params = RlceParams::new(40, 20, 10, 1, 8);
    let (pk, _) = keygen(&params, false, &mut rng).unwrap();
    let msg = random_message(&pk, &mut rng);
    let mut seen = std::collections::HashSet::new();
    for _ in 0..1000 {
        assert!(seen.insert(pk.encrypt(&msg, &mut rng).unwrap().y));
    }
}

#[test]
fn one_extra_error_never_yields_a_wrong_message() {
    let mut rng = ChaCha20Rng::seed_from_u64(103);
    let params = RlceParams::new(40, 20, 10, 1, 8);
    let (pk, sk) = keygen(&params, false, &mut rng).unwrap();
    let f = pk.field().clone();
    for _ in 0..10 {
        let msg = random_message(&pk, &mut rng);
        let ct = pk.encrypt(&msg, &mut rng).unwrap();
        let e = residual(&pk, &msg, &ct);
        for pos in (0..ct.y.len()).filter(|&p| e[p].is_zero()) {
            let mut bad = ct.clone();
            bad.y[pos] += f.random_nonzero(&mut rng);
            match sk.decrypt(&pk, &bad) {
                Ok(m) => assert_eq!(m, msg),
                Err(RlceError::DecryptionFailed) => {}
                Err(other) => panic!("{other}"),
            }
        }
    }
}

#[test]
fn random_vectors_are_rejected() {
    let mut rng = ChaCha20Rng::seed_from_u64(104);
    let params = RlceParams::new(40, 20, 10, 1, 8);
    let (pk, sk) = keygen(&params, false, &mut rng).unwrap();
    let f = pk.field().clone();
    for _ in 0..300 {
        let y = (0..80).map(|_| f.random(&mut rng)).collect();
        assert_eq!(sk.decrypt(&pk, &Ciphertext::new(y)), Err(RlceError::DecryptionFailed));
    }
}

#[test]
fn systematic_form_preserves_the_code() {
    let mut rng = ChaCha20Rng::seed_from_u64(105);
    let params = RlceParams::new(40, 20, 10, 1, 8);
    let mut converted = 0;
    for _ in 0..5 {
        let (pk, sk) = keygen(&params, false, &mut rng).unwrap();
        if let Ok(sys) = pk.to_systematic() {
            converted += 1;
            assert_eq!(sys.generator().rref().0, pk.generator().rref().0);
            assert!(sys.generator().column_range(0, 20).is_identity());
            // A converted key is a different public key; the old private
            // key is bound to the original digest.
            let ct = sys.encrypt(&random_message(&sys, &mut rng), &mut rng).unwrap();
            assert_eq!(sk.decrypt(&sys, &ct), Err(RlceError::KeyMismatch));
        }
        let (spk, _) = keygen(&params, true, &mut rng).unwrap();
        assert_eq!(spk.generator().rref().0, *spk.generator());
    }
    assert!(converted > 0);
}

#[test]
fn ciphertext_file_roundtrip() {
    let mut rng = ChaCha20Rng::seed_from_u64(106);
    let params = RlceParams::new(40, 20, 10, 1, 8);
    let (pk, sk) = keygen(&params, false, &mut rng).unwrap();
    let msg = random_message(&pk, &mut rng);
    let ct = pk.encrypt(&msg, &mut rng).unwrap();
    let bytes = ct.to_bytes(&params).unwrap();
    assert_eq!(bytes.len(), 14 + 80);
    let back = Ciphertext::from_bytes(&bytes, &params).unwrap();
    assert_eq!(back, ct);
    assert_eq!(sk.decrypt(&pk, &back).unwrap(), msg);
    let other = RlceParams::new(40, 20, 9, 1, 8);
    assert!(matches!(Ciphertext::from_bytes(&bytes, &other), Err(RlceError::Format(_))));
    assert!(matches!(
        Ciphertext::from_bytes(&bytes[..bytes.len() - 1], &params),
        Err(RlceError::Format(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn key_files_roundtrip_bit_identically(seed in any::<u64>(), systematic in any::<bool>(), m in 6u32..=10) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let params = RlceParams::new(30, 14, 8, 1, m);
        let (pk, sk) = keygen(&params, systematic, &mut rng).unwrap();
        let pk_bytes = pk.to_bytes();
        let sk_bytes = sk.to_bytes();
        let pk2 = PublicKey::from_bytes(&pk_bytes).unwrap();
        let sk2 = PrivateKey::from_bytes(&sk_bytes).unwrap();
        prop_assert_eq!(pk2.to_bytes(), pk_bytes);
        prop_assert_eq!(sk2.to_bytes(), sk_bytes);
        prop_assert_eq!(&pk2, &pk);
        let msg = random_message(&pk2, &mut rng);
        let ct = pk2.encrypt(&msg, &mut rng).unwrap();
        prop_assert_eq!(sk2.decrypt(&pk2, &ct).unwrap(), msg);
    }
}
