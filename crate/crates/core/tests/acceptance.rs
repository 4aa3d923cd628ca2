//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rlce_core::analysis::{
    construct_equivalent, isd_workfactor, puncture, square_code_dimension, AnalysisError,
    IsdAlgorithm,
};
use rlce_core::rlce::{keygen, public_key_size_bits, recommended_params, RECOMMENDED};
use rlce_core::{Ciphertext, Elem, Field, GrsCode, Matrix, RlceError, RlceParams};
use std::sync::Arc;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn random_message(field: &Field, k: usize, rng: &mut ChaCha20Rng) -> Vec<Elem> {
    (0..k).map(|_| field.random(rng)).collect()
}

fn scheme_correctness() -> Outcome {
    let params = RlceParams::new(40, 20, 10, 1, 8);
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut ok = 0;
    for _ in 0..1000 {
        let (pk, sk) = keygen(&params, false, &mut rng).unwrap();
        let msg = random_message(pk.field(), params.k, &mut rng);
        let ct = pk.encrypt(&msg, &mut rng).unwrap();
        if sk.decrypt(&pk, &ct).as_ref() == Ok(&msg) {
            ok += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        ok == 1000 && elapsed < Duration::from_secs(60),
        format!("{ok}/1000 roundtrips in {}", secs(elapsed)),
    )
}

fn size_matches(bits: u64, stated: &str) -> bool {
    let bytes = bits as f64 / 8.0;
    let (value, unit): (f64, f64) = if let Some(v) = stated.strip_suffix("KB") {
        (v.parse().unwrap(), 1e3)
    } else {
        (stated.strip_suffix("MB").unwrap().parse().unwrap(), 1e6)
    };
    // Either decimal or binary units, within 2%.
    [unit, if unit == 1e3 { 1024.0 } else { 1024.0 * 1024.0 }]
        .iter()
        .any(|u| (bytes / u - value).abs() <= 0.02 * value)
}

fn registry_keygen() -> Outcome {
    let stated = [(60, "101KB"), (80, "267KB"), (128, "0.98MB"), (192, "2.46MB"), (256, "4.88MB")];
    let mut notes = Vec::new();
    let mut sizes_ok = true;
    for (level, text) in stated {
        let p = recommended_params(level).unwrap();
        let bits = public_key_size_bits(&p, true);
        let matches = size_matches(bits, text);
        if level == 80 {
            notes.push(format!("80-bit row {bits} bits vs stated {text}: mismatch reported"));
            sizes_ok &= bits == 2_249_600;
        } else {
            sizes_ok &= matches;
            notes.push(format!("{level}-bit row {bits} bits vs {text}: {}", if matches { "ok" } else { "off" }));
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let params = recommended_params(80).unwrap();
    let start = Instant::now();
    let run = |params: &RlceParams, rng: &mut ChaCha20Rng| -> Result<bool, RlceError> {
        let (pk, sk) = keygen(params, true, rng)?;
        let msg = random_message(pk.field(), params.k, rng);
        let ct = pk.encrypt(&msg, rng)?;
        Ok(sk.decrypt(&pk, &ct)? == msg && pk.to_bytes().len() as u64 * 8 >= public_key_size_bits(params, true))
    };
    let keygen_ok = match run(&params, &mut rng) {
        Ok(ok) => {
            notes.push(format!("level 80 roundtrip {} in {}", ok, secs(start.elapsed())));
            ok && start.elapsed() < Duration::from_secs(300)
        }
        Err(e) => {
            notes.push(format!("level 80 keygen at m=8 rejected: {e}"));
            false
        }
    };

    let wide = RlceParams::new(560, 380, 90, 1, 10);
    let start = Instant::now();
    let info = run(&wide, &mut rng);
    notes.push(format!(
        "informational m=10 run: {:?} in {}",
        info.map_err(|e| e.to_string()),
        secs(start.elapsed())
    ));
    outcome(keygen_ok && sizes_ok, notes.join("; "))
}

fn distinguisher() -> Outcome {
    let start = Instant::now();
    let params = RlceParams::new(60, 40, 10, 1, 8);
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let mut total = 0;
    let mut exact = 0;
    for _ in 0..10 {
        let (pk, _) = keygen(&params, false, &mut rng).unwrap();
        for col in 0..params.code_length() {
            let rep = square_code_dimension(&puncture(pk.generator(), col).unwrap());
            total += 1;
            exact += (rep.square_dim == 119) as usize;
        }
    }
    let f = Arc::new(Field::new(8).unwrap());
    let grs60 = square_code_dimension(&GrsCode::random(&f, 60, 40, &mut rng).unwrap().generator_matrix());
    let grs32 = square_code_dimension(&GrsCode::random(&f, 32, 8, &mut rng).unwrap().generator_matrix());
    let elapsed = start.elapsed();
    outcome(
        exact == total && grs60.square_dim == 60 && grs32.square_dim == 15 && elapsed < Duration::from_secs(300),
        format!(
            "{exact}/{total} punctures at dim 119; GRS [60,40] dim {}; GRS [32,8] dim {}; {}",
            grs60.square_dim,
            grs32.square_dim,
            secs(elapsed)
        ),
    )
}

/// `[g_0, C_0, ..., g_{n-1}, C_{n-1}] * blockdiag(A_i)` as dense matrices.
fn dense_rebuild(code: &GrsCode, c: &[Matrix], a: &[Matrix]) -> Matrix {
    let f = code.field().clone();
    let gs = code.generator_matrix();
    let (n, k, w) = (code.len(), code.dimension(), a[0].rows());
    let mut g1 = Matrix::zeros(&f, k, n * w);
    let mut d = Matrix::zeros(&f, n * w, n * w);
    for i in 0..n {
        for row in 0..k {
            g1.set(row, i * w, gs.get(row, i));
            for j in 1..w {
                g1.set(row, i * w + j, c[i].get(row, j - 1));
            }
        }
        for x in 0..w {
            for y in 0..w {
                d.set(i * w + x, i * w + y, a[i].get(x, y));
            }
        }
    }
    g1.mul(&d).unwrap()
}

fn equivalence() -> Outcome {
    let start = Instant::now();
    let f = Arc::new(Field::new(8).unwrap());
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let shapes: Vec<(usize, usize)> = [3, 4, 5]
        .iter()
        .flat_map(|&k| [4, 6, 8].into_iter().filter(move |&n| n >= k).map(move |n| (k, n)))
        .collect();
    let mut exact = 0;
    for i in 0..20 {
        let (k, n) = shapes[i % shapes.len()];
        let code = GrsCode::random(&f, n, k, &mut rng).unwrap();
        let target = (1..n).fold(Matrix::random_full_rank(&f, k, k, &mut rng), |acc, _| {
            acc.hconcat(&Matrix::random_full_rank(&f, k, k, &mut rng)).unwrap()
        });
        if let Ok(eq) = construct_equivalent(&target, &code, k - 1, &mut rng) {
            exact += (dense_rebuild(&code, &eq.c_blocks, &eq.a_blocks) == target) as usize;
        }
    }
    let mut infeasible = 0;
    let mut narrow = 0;
    for &(k, n) in &shapes {
        for r in 0..k - 1 {
            let code = GrsCode::random(&f, n, k, &mut rng).unwrap();
            let target = Matrix::random(&f, k, n * (r + 1), &mut rng);
            narrow += 1;
            infeasible += matches!(
                construct_equivalent(&target, &code, r, &mut rng),
                Err(AnalysisError::Infeasible { .. })
            ) as usize;
        }
    }
    outcome(
        exact == 20 && infeasible == narrow,
        format!("{exact}/20 exact reconstructions; {infeasible}/{narrow} narrow cases infeasible; {}", secs(start.elapsed())),
    )
}

/// Packs a length-8 GF(16) vector into nibbles.
fn pack(v: &[Elem]) -> u32 {
    v.iter().enumerate().fold(0, |acc, (i, e)| acc | (e.value() as u32) << (4 * i))
}

fn nibble_weight(x: u32) -> u32 {
    ((x | x >> 1 | x >> 2 | x >> 3) & 0x1111_1111).count_ones()
}

fn decoder_oracle() -> Outcome {
    let start = Instant::now();
    let f = Arc::new(Field::new(4).unwrap());
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let code = GrsCode::random(&f, 8, 4, &mut rng).unwrap();
    let elems: Vec<Elem> = (0..16).map(|v| f.elem(v).unwrap()).collect();

    let messages: Vec<Vec<Elem>> = (0..1u32 << 16)
        .map(|x| (0..4).map(|i| elems[(x >> (4 * i)) as usize & 15]).collect())
        .collect();
    let codewords: Vec<Vec<Elem>> = messages.iter().map(|m| code.encode(m).unwrap()).collect();
    let packed: Vec<u32> = codewords.iter().map(|c| pack(c)).collect();

    let mut errors: Vec<Vec<Elem>> = vec![vec![Elem::ZERO; 8]];
    for i in 0..8 {
        for a in 1..16 {
            let mut e = vec![Elem::ZERO; 8];
            e[i] = elems[a];
            errors.push(e.clone());
            for j in i + 1..8 {
                for &b in &elems[1..] {
                    let mut e2 = e.clone();
                    e2[j] = b;
                    errors.push(e2);
                }
            }
        }
    }

    // Nearest codeword to c + e is c + (nearest codeword to e), so checking
    // that 0 is the unique nearest codeword to each e covers every message.
    let mut oracle_ok = true;
    for e in &errors {
        let pe = pack(e);
        let mut best = u32::MAX;
        let mut count = 0;
        for &c in &packed {
            let d = nibble_weight(c ^ pe);
            if d < best {
                best = d;
                count = 1;
            } else if d == best {
                count += 1;
            }
        }
        oracle_ok &= best == nibble_weight(pe) && count == 1;
    }

    let mut failures = 0u64;
    let mut received = vec![Elem::ZERO; 8];
    for e in &errors {
        for (m, c) in messages.iter().zip(&codewords) {
            for j in 0..8 {
                received[j] = c[j] + e[j];
            }
            match code.decode(&received, 2) {
                Ok(d) if d.message == *m && d.error == *e => {}
                _ => failures += 1,
            }
        }
    }
    let cases = errors.len() as u64 * messages.len() as u64;
    let elapsed = start.elapsed();
    outcome(
        oracle_ok && failures == 0 && elapsed < Duration::from_secs(600),
        format!(
            "{cases} cases ({} error patterns), {failures} mismatches, oracle {}; {}",
            errors.len(),
            if oracle_ok { "consistent" } else { "inconsistent" },
            secs(elapsed)
        ),
    )
}

fn exact_log2_binomial(n: usize, r: usize) -> f64 {
    let mut num = BigUint::one();
    for i in 0..r {
        num = num * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    let shift = num.bits().saturating_sub(60);
    (num >> shift).to_f64().unwrap().log2() + shift as f64
}

fn isd_audit() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for &(level, n, k, t, m) in &RECOMMENDED {
        let e = isd_workfactor(2 * n, k, t, 1u64 << m, IsdAlgorithm::LeeBrickell).unwrap();
        let meets = e.log2_cost >= level as f64 - 5.0;
        if level <= 128 {
            pass &= meets;
        }
        notes.push(format!("{level}: {:.1}{}", e.log2_cost, if meets { "" } else { " (short)" }));
    }
    let mut worst: f64 = 0.0;
    for (n, k, t) in [(190, 45, 20), (60, 30, 10), (100, 50, 25), (24, 12, 6), (500, 250, 40)] {
        let e = isd_workfactor(n, k, t, 2, IsdAlgorithm::Prange).unwrap();
        let want = exact_log2_binomial(n, t) - exact_log2_binomial(n - k, t);
        worst = worst.max((e.log2_iterations - want).abs());
    }
    pass &= worst < 1e-10;
    outcome(pass, format!("Lee-Brickell log2 cost {}; Prange max deviation {worst:.2e}", notes.join(", ")))
}

fn naive_mul(a: u32, b: u32, m: u32, poly: u32) -> u32 {
    let mut acc = 0u32;
    for i in 0..m {
        if b >> i & 1 == 1 {
            acc ^= a << i;
        }
    }
    for i in (m..2 * m).rev() {
        if acc >> i & 1 == 1 {
            acc ^= poly << (i - m);
        }
    }
    acc
}

fn field_linalg() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let mut failures = 0u64;
    for m in [4, 8, 9, 10] {
        let f = Field::new(m).unwrap();
        let poly = f.reduction_poly();
        let q = 1u32 << m;
        for _ in 0..100_000 {
            let (x, y, z) = (rng.random_range(0..q), rng.random_range(0..q), rng.random_range(0..q));
            let (a, b, c) = (f.elem(x).unwrap(), f.elem(y).unwrap(), f.elem(z).unwrap());
            let ok = f.mul(a, b).value() as u32 == naive_mul(x, y, m, poly)
                && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                && f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
                && f.mul(a, b) == f.mul(b, a)
                && f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                && f.add(a, a).is_zero()
                && f.mul(a, Elem::ONE) == a;
            failures += !ok as u64;
        }
    }
    for m in 4..=10 {
        let f = Field::new(m).unwrap();
        for x in 1..1u32 << m {
            let a = f.elem(x).unwrap();
            failures += (f.mul(a, f.inv(a).unwrap()) != Elem::ONE) as u64;
        }
    }
    let f = Arc::new(Field::new(8).unwrap());
    let mut matrices = 0;
    for size in 1..=50 {
        let id = Matrix::identity(&f, size);
        for _ in 0..100 {
            let a = Matrix::random_nonsingular(&f, size, &mut rng);
            let inv = a.inverse().unwrap();
            failures += (a.mul(&inv).unwrap() != id || inv.mul(&a).unwrap() != id) as u64;
            matrices += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{failures} failures over field axioms, inverses and {matrices} matrix inversions; {}", secs(start.elapsed())),
    )
}

fn tamper_rejection() -> Outcome {
    let params = RlceParams::new(40, 20, 10, 1, 8);
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let (pk, sk) = keygen(&params, false, &mut rng).unwrap();
    let mut rejected = 0;
    for _ in 0..1000 {
        let y = (0..params.code_length()).map(|_| pk.field().random(&mut rng)).collect();
        rejected += matches!(sk.decrypt(&pk, &Ciphertext::new(y)), Err(RlceError::DecryptionFailed)) as usize;
    }
    outcome(rejected == 1000, format!("{rejected}/1000 random vectors rejected"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("scheme correctness", scheme_correctness),
        ("registry-scale keygen", registry_keygen),
        ("distinguisher experiment", distinguisher),
        ("block equivalence construction", equivalence),
        ("decoder oracle equivalence", decoder_oracle),
        ("ISD audit", isd_audit),
        ("field and linear algebra invariants", field_linalg),
        ("tamper rejection", tamper_rejection),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += !o.pass as usize;
        println!("criterion {} {name}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
