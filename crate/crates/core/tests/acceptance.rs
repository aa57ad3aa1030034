//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.
//!
//! Reference values here come from oracles written in this file (dense
//! Pauli matrices, Taylor-free term exponentials, sampled trace norms), not
//! from the library's own simulation helpers.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hsim::circuit::{cancel_gates, synthesize_step, trotterize};
use hsim::simulation::{
    circuit_unitary, diamond_distance_unitary, evolve_density, full_circuit_unitary,
    hellinger_infidelity, ideal_distribution, noisy_distribution, trotter_error,
    InfidelityConvention, InitialState, NoiseModel, UnitaryMatrix,
};
use hsim::{
    order, random_hamiltonian, sequence_cnot_cost, Hamiltonian, Pauli, PauliString, Strategy,
};

type C = Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---- oracles -------------------------------------------------------------

fn pauli_1q(p: Pauli) -> DMatrix<C> {
    let (o, z, i) = (C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 1.0));
    match p {
        Pauli::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Pauli::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

fn dense(s: &PauliString) -> DMatrix<C> {
    let mut m = DMatrix::from_element(1, 1, C::new(1.0, 0.0));
    for q in 0..s.width() {
        m = m.kronecker(&pauli_1q(s.get(q)));
    }
    m
}

/// `exp(-iθP) = cos θ·I - i sin θ·P`, valid because `P² = I`.
fn term_exp(s: &PauliString, theta: f64) -> DMatrix<C> {
    let p = dense(s);
    let n = p.nrows();
    DMatrix::identity(n, n) * C::new(theta.cos(), 0.0) - p * C::new(0.0, theta.sin())
}

fn spectral_norm(m: &DMatrix<C>) -> f64 {
    let gram = m.adjoint() * m;
    SymmetricEigen::new(gram)
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &b| a.max(b))
        .max(0.0)
        .sqrt()
}

const JW: [&str; 8] = [
    "XXXX", "XXYY", "XYXY", "XYYX", "YXXY", "YXYX", "YYXX", "YYYY",
];

fn jw() -> Hamiltonian {
    Hamiltonian::from_pairs(JW.iter().map(|s| (1.0, *s))).unwrap()
}

fn random_string(rng: &mut ChaCha8Rng, width: usize) -> PauliString {
    let ps: Vec<Pauli> = (0..width)
        .map(|_| Pauli::ALL[rng.random_range(0..4)])
        .collect();
    PauliString::from_paulis(&ps).unwrap()
}

fn has_noncommuting_pair(h: &Hamiltonian) -> bool {
    let s = h.strings();
    (0..s.len()).any(|i| (i + 1..s.len()).any(|j| !s[i].commutes(&s[j]).unwrap()))
}

// ---- criteria ------------------------------------------------------------

fn golden_counts() -> Outcome {
    let h = jw();
    let lex = order(&h, Strategy::Lexicographic);
    let raw = synthesize_step(&h, &lex, 1.0).unwrap().cnot_count();
    let lex_cx = trotterize(&h, &lex, 1.0, 1).unwrap().cnot_count();
    let tsp_cx = trotterize(&h, &order(&h, Strategy::MaxCommuteTsp), 1.0, 1)
        .unwrap()
        .cnot_count();
    outcome(
        (raw, lex_cx, tsp_cx) == (64, 40, 36),
        format!("{raw} -> {lex_cx} -> {tsp_cx} (want 64 -> 40 -> 36)"),
    )
}

fn distance_metric_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut asym, mut triangle, mut zero) = (0, 0, 0);
    for _ in 0..10_000 {
        let w = rng.random_range(1..=12);
        let (a, b, c) = (
            random_string(&mut rng, w),
            random_string(&mut rng, w),
            random_string(&mut rng, w),
        );
        let ab = a.cnot_distance(&b).unwrap();
        if ab != b.cnot_distance(&a).unwrap() {
            asym += 1;
        }
        if a.cnot_distance(&c).unwrap() > ab + b.cnot_distance(&c).unwrap() {
            triangle += 1;
        }
        if (ab == 0) != (a == b) || a.cnot_distance(&a).unwrap() != 0 {
            zero += 1;
        }
    }
    outcome(
        asym + triangle + zero == 0,
        format!("10000 triples: {asym} asymmetric, {triangle} triangle violations, {zero} identity violations"),
    )
}

fn commutation_oracle() -> Outcome {
    let mut mismatches = 0;
    let mut pairs = 0;
    for w in 1..=3u32 {
        let all: Vec<PauliString> = (0..4usize.pow(w))
            .map(|k| {
                let ps: Vec<Pauli> = (0..w)
                    .map(|q| Pauli::ALL[(k >> (2 * (w - 1 - q))) & 3])
                    .collect();
                PauliString::from_paulis(&ps).unwrap()
            })
            .collect();
        let mats: Vec<DMatrix<C>> = all.iter().map(dense).collect();
        for i in 0..all.len() {
            for j in 0..all.len() {
                let comm = &mats[i] * &mats[j] - &mats[j] * &mats[i];
                let oracle = comm.norm() < 1e-12;
                if all[i].commutes(&all[j]).unwrap() != oracle {
                    mismatches += 1;
                }
                pairs += 1;
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("{pairs} pairs over widths 1-3, {mismatches} mismatches"),
    )
}

fn circuit_correctness() -> Outcome {
    let mut worst_product: f64 = 0.0;
    let mut worst_cancel: f64 = 0.0;
    let mut count_mismatch = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..50u64 {
        let w = rng.random_range(1..=3usize);
        let n = rng.random_range(1..=4usize.min(4usize.pow(w as u32) - 1));
        let h = random_hamiltonian(w, n, 1000 + seed).unwrap();
        for s in Strategy::all(seed) {
            let o = order(&h, s);
            let dt = 0.7;
            let c = trotterize(&h, &o, dt, 1).unwrap();
            let mut expect = DMatrix::<C>::identity(1 << w, 1 << w);
            for &i in &o.permutation {
                let t = &h.terms()[i];
                expect = term_exp(&t.string, t.coefficient * dt) * expect;
            }
            let got = circuit_unitary(&c).unwrap();
            worst_product = worst_product.max(spectral_norm(&(got.matrix() - &expect)));

            let raw = synthesize_step(&h, &o, dt).unwrap();
            let cancelled = cancel_gates(&raw).unwrap();
            let diff =
                full_circuit_unitary(&raw).unwrap() - full_circuit_unitary(&cancelled).unwrap();
            worst_cancel = worst_cancel.max(spectral_norm(&diff));

            if c.cnot_count() != sequence_cnot_cost(&o.ordered_strings(&h)).unwrap() {
                count_mismatch += 1;
            }
        }
    }
    outcome(
        worst_product <= 1e-9 && worst_cancel <= 1e-12 && count_mismatch == 0,
        format!(
            "250 circuits: max ||U - prod|| = {worst_product:.2e}, max cancellation drift = {worst_cancel:.2e}, {count_mismatch} CNOT-count mismatches"
        ),
    )
}

/// Random mutually commuting sets, built by rejection.
fn commuting_instances() -> Vec<Hamiltonian> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut out = vec![jw()];
    for k in 0..12 {
        let w = 2 + k % 3;
        let target = 2 + k % 5;
        let mut chosen: Vec<PauliString> = Vec::new();
        let mut tries = 0;
        while chosen.len() < target && tries < 10_000 {
            tries += 1;
            let s = random_string(&mut rng, w);
            if s.is_identity()
                || chosen.contains(&s)
                || !chosen.iter().all(|c| c.commutes(&s).unwrap())
            {
                continue;
            }
            chosen.push(s);
        }
        let terms: Vec<(f64, String)> = chosen
            .iter()
            .map(|s| (rng.random_range(-1.0..1.0), s.to_string()))
            .collect();
        out.push(Hamiltonian::from_pairs(terms.iter().map(|(c, s)| (*c, s.as_str()))).unwrap());
    }
    out
}

fn zero_trotter_error() -> Outcome {
    let instances = commuting_instances();
    let mut worst: f64 = 0.0;
    for h in &instances {
        let o = order(h, Strategy::MaxCommuteTsp);
        worst = worst.max(trotter_error(h, &o, 1.0, 1).unwrap());
    }
    outcome(
        worst <= 1e-9,
        format!(
            "{} commuting instances, max diamond distance {worst:.2e}",
            instances.len()
        ),
    )
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn trotter_scaling() -> Outcome {
    let rs = [1usize, 2, 4, 8, 16];
    let mut lines = Vec::new();
    let mut pass = true;
    let mut seed = 600;
    let mut found = 0;
    while found < 5 {
        seed += 1;
        let h = random_hamiltonian(3, 4, seed).unwrap();
        if !has_noncommuting_pair(&h) {
            continue;
        }
        found += 1;
        let o = order(&h, Strategy::Lexicographic);
        let eps: Vec<f64> = rs
            .iter()
            .map(|&r| trotter_error(&h, &o, 1.0, r).unwrap())
            .collect();
        let xs: Vec<f64> = rs.iter().map(|&r| (r as f64).ln()).collect();
        let ys: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
        let k = slope(&xs, &ys);
        let e64 = trotter_error(&h, &o, 1.0, 64).unwrap();
        let ok = (k + 1.0).abs() <= 0.2 && e64 < eps[0] / 10.0;
        pass &= ok;
        lines.push(format!(
            "seed {seed}: slope {k:.3}, eps(1) {:.3e}, eps(64) {e64:.3e}",
            eps[0]
        ));
    }
    outcome(pass, lines.join("; "))
}

fn random_unitary_2x2(rng: &mut ChaCha8Rng) -> UnitaryMatrix {
    let g: Vec<C> = (0..4).map(|_| C::new(gauss(rng), gauss(rng))).collect();
    let m = DMatrix::from_row_slice(2, 2, &g);
    let q = m.qr().q();
    UnitaryMatrix::new(q).unwrap()
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller.
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

/// `max_ψ ||(U⊗I)|ψ⟩⟨ψ|(U⊗I)† - (V⊗I)|ψ⟩⟨ψ|(V⊗I)†||_1` over sampled pure
/// states of system plus a one-qubit reference. For pure states the trace
/// norm is `2·sqrt(1 - |⟨a|b⟩|²)`.
fn sampled_diamond(
    u: &UnitaryMatrix,
    v: &UnitaryMatrix,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> f64 {
    let id = DMatrix::<C>::identity(2, 2);
    let (ue, ve) = (u.matrix().kronecker(&id), v.matrix().kronecker(&id));
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let psi =
            nalgebra::DVector::from_iterator(4, (0..4).map(|_| C::new(gauss(rng), gauss(rng))))
                .normalize();
        let (a, b) = (&ue * &psi, &ve * &psi);
        let overlap = a.dotc(&b).norm_sqr().min(1.0);
        best = best.max(2.0 * (1.0 - overlap).sqrt());
    }
    best
}

fn diamond_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let id = UnitaryMatrix::identity(2);
    let mut worst_closed: f64 = 0.0;
    let mut pass = true;
    let mut gaps = Vec::new();
    let mut pairs: Vec<(UnitaryMatrix, UnitaryMatrix)> = Vec::new();
    for theta in [PI / 8.0, PI / 4.0, PI / 2.0] {
        let rz = UnitaryMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[
                C::from_polar(1.0, -theta / 2.0),
                C::new(0.0, 0.0),
                C::new(0.0, 0.0),
                C::from_polar(1.0, theta / 2.0),
            ],
        ))
        .unwrap();
        let d = diamond_distance_unitary(&id, &rz).unwrap();
        worst_closed = worst_closed.max((d - 2.0 * (theta / 2.0).sin()).abs());
        pairs.push((id.clone(), rz));
    }
    for _ in 0..3 {
        pairs.push((random_unitary_2x2(&mut rng), random_unitary_2x2(&mut rng)));
    }
    for (u, v) in &pairs {
        let closed = diamond_distance_unitary(u, v).unwrap();
        let sampled = sampled_diamond(u, v, &mut rng, 10_000);
        let gap = closed - sampled;
        pass &= (-1e-12..0.01).contains(&gap);
        gaps.push(format!("{gap:.1e}"));
    }
    pass &= worst_closed <= 1e-9;
    outcome(
        pass,
        format!(
            "|d - 2 sin(θ/2)| ≤ {worst_closed:.1e}; closed - sampled gaps [{}]",
            gaps.join(", ")
        ),
    )
}

fn noise_pipeline() -> Outcome {
    let rates = [0.001, 0.005, 0.01, 0.02];
    let strategies = [
        Strategy::Lexicographic,
        Strategy::Magnitude,
        Strategy::MaxCommuteTsp,
    ];
    let init = InitialState::GhzLike.amplitudes(4).unwrap();
    let mut zero_worst: f64 = 0.0;
    let mut trace_worst: f64 = 0.0;
    let mut non_monotone = Vec::new();
    let mut cells = 0;
    for seed in 0..5u64 {
        let h = random_hamiltonian(4, 6, 800 + seed).unwrap();
        for s in strategies {
            let c = trotterize(&h, &order(&h, s), 1.0, 1).unwrap();
            let ideal = ideal_distribution(&c, &init).unwrap();
            let p0 = noisy_distribution(&c, &init, 0.0, NoiseModel::PairReplacement).unwrap();
            zero_worst = zero_worst.max(
                hellinger_infidelity(&p0, &ideal, InfidelityConvention::SquaredFidelity).unwrap(),
            );
            let mut prev = 0.0;
            for &p in &rates {
                evolve_density(&c, &init, p, NoiseModel::PairReplacement, |_, rho| {
                    trace_worst = trace_worst.max((rho.trace() - C::new(1.0, 0.0)).norm());
                })
                .unwrap();
                let noisy = noisy_distribution(&c, &init, p, NoiseModel::PairReplacement).unwrap();
                let inf =
                    hellinger_infidelity(&noisy, &ideal, InfidelityConvention::SquaredFidelity)
                        .unwrap();
                if inf < prev {
                    non_monotone.push(format!("seed {seed} {s} p={p}"));
                }
                prev = inf;
                cells += 1;
            }
        }
    }
    outcome(
        zero_worst <= 1e-10 && trace_worst <= 1e-10 && non_monotone.is_empty(),
        format!(
            "{cells} cells: infidelity at p=0 ≤ {zero_worst:.1e}, trace drift ≤ {trace_worst:.1e}, non-monotone [{}]",
            non_monotone.join(", ")
        ),
    )
}

fn accepted_cnots(h: &Hamiltonian, s: Strategy, t: f64, eps: f64, r_max: usize) -> usize {
    let o = order(h, s);
    let r = (1..=r_max)
        .find(|&r| trotter_error(h, &o, t, r).unwrap() < eps)
        .unwrap_or(r_max);
    trotterize(h, &o, t, r).unwrap().cnot_count()
}

fn strategy_direction() -> Outcome {
    let (mut lex, mut rnd, mut tsp) = (0.0, 0.0, 0.0);
    let n = 20;
    for seed in 0..n as u64 {
        let h = random_hamiltonian(4, 12, 900 + seed).unwrap();
        lex += accepted_cnots(&h, Strategy::Lexicographic, 0.5, 0.1, 64) as f64;
        rnd += accepted_cnots(&h, Strategy::Random(seed), 0.5, 0.1, 64) as f64;
        tsp += accepted_cnots(&h, Strategy::MaxCommuteTsp, 0.5, 0.1, 64) as f64;
    }
    let (lex, rnd, tsp) = (lex / n as f64, rnd / n as f64, tsp / n as f64);
    outcome(
        tsp <= lex && tsp <= rnd,
        format!("mean CNOTs: mctsp {tsp:.2}, lex {lex:.2}, random {rnd:.2}"),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("h.ham");
    std::fs::write(
        &input,
        hsim::serialize_hamiltonian(&random_hamiltonian(3, 5, 77).unwrap()),
    )
    .unwrap();
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hsim"))
            .args(["sweep", "--t", "0.5,1,2", "--format", "json", "--input"])
            .arg(&input)
            .env("HSIM_THREADS", threads)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout).unwrap()
    };
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.trim_start().starts_with("\"generated_at\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let (a, b) = (run("1"), run("4"));
    let same = strip(&a) == strip(&b);
    outcome(
        same && a.contains("\"generated_at\""),
        format!(
            "two sweeps (1 and 4 threads), {} bytes, identical modulo timestamp: {same}",
            a.len()
        ),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "golden CNOT counts 64/40/36",
            Duration::from_secs(1),
            golden_counts,
        ),
        (
            "CNOT distance metric axioms",
            Duration::from_secs(5),
            distance_metric_axioms,
        ),
        (
            "commutation matches dense commutator",
            Duration::from_secs(30),
            commutation_oracle,
        ),
        (
            "circuit unitary, cancellation, CNOT count",
            Duration::from_secs(60),
            circuit_correctness,
        ),
        (
            "zero Trotter error on commuting inputs",
            Duration::from_secs(5),
            zero_trotter_error,
        ),
        (
            "first-order Trotter scaling",
            Duration::from_secs(120),
            trotter_scaling,
        ),
        (
            "diamond distance closed form",
            Duration::from_secs(60),
            diamond_closed_form,
        ),
        ("noise pipeline", Duration::from_secs(60), noise_pipeline),
        (
            "mctsp CNOTs vs lex and random",
            Duration::from_secs(600),
            strategy_direction,
        ),
        ("sweep determinism", Duration::from_secs(120), determinism),
    ];
    let mut failed = 0;
    for (k, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let pass = result.pass && elapsed <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name} ({:.2}s of {}s): {}",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            result.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
