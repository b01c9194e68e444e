use privmark_core::fixed::FixedPoint;
use privmark_core::ring::Ring;
use privmark_core::runtime::{run_session, SessionConfig};
use privmark_core::sectable::{build_sectable, permutation, EmbeddingSet, Vocabulary};
use privmark_core::sharing::{reconstruct_vector, PartyId};
use privmark_core::Error;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn random_set(rng: &mut ChaCha12Rng, n: usize, d: usize) -> EmbeddingSet {
    EmbeddingSet::from_rows((0..n).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()).unwrap()
}

fn vocab(m: usize) -> Vocabulary {
    Vocabulary::from_words((0..m).map(|i| format!("word{i}"))).unwrap()
}

#[test]
fn row_choice_is_uniform() {
    let (m, n, seeds) = (5, 10, 10_000);
    let mut rng = ChaCha12Rng::seed_from_u64(21);
    let mut counts = vec![[0u32; 10]; m];
    for _ in 0..seeds {
        let mut seed = [0u8; 16];
        rng.fill_bytes(&mut seed);
        let perm = permutation(seed, n);
        for i in 0..m {
            counts[i][perm[i]] += 1;
        }
    }
    let mean = seeds as f64 / n as f64;
    let sigma = (seeds as f64 * 0.1 * 0.9).sqrt();
    for (i, row) in counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            assert!((c as f64 - mean).abs() <= 3.0 * sigma, "word {i} row {j}: {c}");
        }
    }
}

#[test]
fn table_holds_normalized_rows_and_p2_sends_no_plaintext() {
    let mut rng = ChaCha12Rng::seed_from_u64(22);
    let set = random_set(&mut rng, 40, 16);
    let voc = vocab(25);
    let cfg = SessionConfig {
        record_frames: true,
        ..SessionConfig::with_seed(22)
    };
    let out = run_session(&cfg, |p| {
        let me = p.id();
        build_sectable(p, (me == PartyId::P1).then_some(&voc), (me == PartyId::P2).then_some(&set))
    })
    .unwrap();
    let rows = out.outputs[0].rows.clone();
    assert!(out.outputs.iter().all(|t| t.rows == rows));
    let mut sorted = rows.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 25);

    let fx = FixedPoint::default();
    let data = reconstruct_vector(Ring::R64, &out.outputs.iter().map(|t| &t.table.data).collect::<Vec<_>>()).unwrap();
    for (i, &r) in rows.iter().enumerate() {
        assert_eq!(&data[i * 16..(i + 1) * 16], &fx.encode_all(set.row(r)).unwrap()[..]);
    }
    assert!(out.outputs[0].vocab.is_some());
    assert!(out.outputs[1].vocab.is_none() && out.outputs[2].vocab.is_none());

    let encoded: Vec<Vec<u8>> = (0..set.len())
        .map(|r| fx.encode_all(set.row(r)).unwrap().iter().flat_map(|v| v.to_le_bytes()).collect())
        .collect();
    let p2 = &out.reports[PartyId::P2.index()];
    assert!(!p2.frames.is_empty());
    for f in &p2.frames {
        for e in &encoded {
            assert!(!f.payload.windows(e.len()).any(|w| w == &e[..]), "plaintext row in a P2 frame");
        }
    }
}

#[test]
fn vocabulary_larger_than_set_is_rejected() {
    let mut rng = ChaCha12Rng::seed_from_u64(23);
    let set = random_set(&mut rng, 4, 8);
    let voc = vocab(5);
    let err = run_session(&SessionConfig::with_seed(23), |p| {
        let me = p.id();
        build_sectable(p, (me == PartyId::P1).then_some(&voc), (me == PartyId::P2).then_some(&set))
    })
    .unwrap_err();
    assert!(matches!(err, Error::Size(_)));
}

#[test]
fn share_files_round_trip() {
    let mut rng = ChaCha12Rng::seed_from_u64(24);
    let set = random_set(&mut rng, 12, 8);
    let voc = vocab(6);
    let out = run_session(&SessionConfig::with_seed(24), |p| {
        let me = p.id();
        build_sectable(p, (me == PartyId::P1).then_some(&voc), (me == PartyId::P2).then_some(&set))
    })
    .unwrap();
    for t in &out.outputs {
        let mut buf = Vec::new();
        t.write_shares(&mut buf, Ring::R64, 24).unwrap();
        let (back, ring) = privmark_core::sectable::SecTable::read_shares(&mut &buf[..], t.vocab.clone()).unwrap();
        assert_eq!(ring, Ring::R64);
        assert_eq!(back.table.data, t.table.data);
        assert_eq!(back.owner(), t.owner());
    }
}
