//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use qgame_core::builtin::{
    ewl_equilibrium_strategies, ewl_measurement, ewl_prisoners_dilemma, ewl_reference_tensors,
};
use qgame_core::equilibrium::{
    best_response, response_problem, unitary_oracle, verify_nash, SolverOptions, DEFAULT_RESOLUTION,
};
use qgame_core::game::{
    classical_reduction, payoff_contract, payoff_direct, payoff_tensor_general, payoff_tensor_matrix_unit,
    simulate_play, ClassicalBimatrix, Player,
};
use qgame_core::quantum::{apply_channel, chi_to_kraus, kraus_to_chi, DensityMatrix, KrausChannel};
use qgame_core::random::{random_channel, random_chi, random_game};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    if elapsed <= limit {
        Ok(format!("{detail}; {:.2}s", elapsed.as_secs_f64()))
    } else {
        Err(format!("{detail}; took {:.2}s, limit {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()))
    }
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn reference_tensors() -> Outcome {
    let start = Instant::now();
    let game = ewl_prisoners_dilemma().game;
    let (f1, f2) = ewl_reference_tensors().map_err(|e| e.to_string())?;
    let mut matched = 0;
    let mut verbatim_mismatch = Vec::new();
    for (player, fixture) in [(Player::I, &f1), (Player::II, &f2)] {
        let computed = payoff_tensor_general(&game, player);
        let corrected = fixture.corrected();
        for row in 0..16 {
            for col in 0..16 {
                if (computed.grid(row, col) - corrected.grid(row, col)).norm() <= 1e-12 {
                    matched += 1;
                }
                if (computed.grid(row, col) - fixture.transcribed.grid(row, col)).norm() > 1e-12 {
                    verbatim_mismatch.push((player, row, col));
                }
            }
        }
    }
    // Verbatim differences must be exactly the recorded errata, nothing else.
    let errata: Vec<(Player, usize, usize)> = [(Player::I, &f1), (Player::II, &f2)]
        .iter()
        .flat_map(|(p, f)| f.errata.iter().map(move |e| (*p, e.row, e.col)))
        .collect();
    let detail = format!(
        "{matched}/512 entries within 1e-12; {} verbatim entries differ, all listed as errata {:?}",
        verbatim_mismatch.len(),
        errata.iter().map(|(p, r, c)| format!("A^{p}({r},{c})")).collect::<Vec<_>>()
    );
    ensure(matched == 512 && verbatim_mismatch == errata, detail.clone())?;
    within(start.elapsed(), Duration::from_secs(1), detail)
}

fn closed_form_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for (n, count) in [(2, 100), (3, 20)] {
        for _ in 0..count {
            let game = random_game(n, n, &mut rng);
            for p in [Player::I, Player::II] {
                let d = payoff_tensor_general(&game, p).max_abs_diff(&payoff_tensor_matrix_unit(&game, p));
                worst = worst.max(d);
            }
        }
    }
    let detail = format!("max deviation {worst:.2e} over 120 games");
    ensure(worst <= 1e-12, detail.clone())?;
    within(start.elapsed(), Duration::from_secs(10), detail)
}

fn classical_table() -> Outcome {
    let table = classical_reduction(&ewl_prisoners_dilemma().game).map_err(|e| e.to_string())?;
    let expected =
        ClassicalBimatrix::new(2, 2, vec![(3.0, 3.0), (0.0, 5.0), (5.0, 0.0), (1.0, 1.0)]).expect("valid table");
    let d = table.max_abs_diff(&expected);
    ensure(d <= 1e-10, format!("max deviation {d:.2e}"))
}

fn equilibrium() -> Outcome {
    let start = Instant::now();
    let game = ewl_prisoners_dilemma().game;
    let (chi, xi) = ewl_equilibrium_strategies();
    let p1 = payoff_contract(&payoff_tensor_matrix_unit(&game, Player::I), &chi, &xi).map_err(|e| e.to_string())?;
    let p2 = payoff_contract(&payoff_tensor_matrix_unit(&game, Player::II), &chi, &xi).map_err(|e| e.to_string())?;
    let v = verify_nash(&game, &chi, &xi, 1e-5, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let detail = format!(
        "payoffs ({p1}, {p2}); equilibrium {}; gaps ({:.1e}, {:.1e}); certificates ({:.1e}, {:.1e})",
        v.is_equilibrium, v.gap_i, v.gap_ii, v.response_i.gap, v.response_ii.gap
    );
    let ok = (p1 - 2.5).abs() <= 1e-10
        && (p2 - 2.5).abs() <= 1e-10
        && v.is_equilibrium
        && v.response_i.gap <= 1e-5
        && v.response_ii.gap <= 1e-5;
    ensure(ok, detail.clone())?;
    within(start.elapsed(), Duration::from_secs(30), detail)
}

fn non_equilibrium() -> Outcome {
    let id = qgame_core::ChiMatrix::identity(2);
    let v = verify_nash(&ewl_prisoners_dilemma().game, &id, &id, 1e-3, &SolverOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(
        !v.is_equilibrium && v.gap_i >= 2.0 - 1e-3,
        format!("equilibrium {}; gap_I {:.9}", v.is_equilibrium, v.gap_i),
    )
}

fn evaluation_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let n = if k % 4 == 3 { 3 } else { 2 };
        let game = random_game(n, n, &mut rng);
        let ka = rng.random_range(1..=n * n);
        let kb = rng.random_range(1..=n * n);
        let a = random_channel(n, ka, &mut rng);
        let b = random_channel(n, kb, &mut rng);
        let (chi, xi) = (kraus_to_chi(&a), kraus_to_chi(&b));
        for p in [Player::I, Player::II] {
            let direct = payoff_direct(&game, &a, &b, p).map_err(|e| e.to_string())?;
            let tensor = payoff_tensor_matrix_unit(&game, p);
            let contracted = payoff_contract(&tensor, &chi, &xi).map_err(|e| e.to_string())?;
            worst = worst.max((direct - contracted).abs());
        }
    }
    ensure(worst <= 1e-9, format!("max deviation {worst:.2e} over 200 pairs"))
}

/// n² pure states whose projectors span all n×n matrices.
fn state_basis(n: usize) -> Vec<DensityMatrix> {
    let e = |k: usize| (0..n).map(|i| Complex64::new((i == k) as u8 as f64, 0.0)).collect::<Vec<_>>();
    let mut states = Vec::new();
    for j in 0..n {
        states.push(DensityMatrix::pure(&e(j)).expect("normalized"));
        for k in j + 1..n {
            for phase in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let v: Vec<Complex64> =
                    e(j).iter().zip(e(k)).map(|(a, b)| (a + phase * b) / 2f64.sqrt()).collect();
                states.push(DensityMatrix::pure(&v).expect("normalized"));
            }
        }
    }
    states
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let n = 2 + k % 3;
        let kraus = rng.random_range(1..=n * n);
        let ch = random_channel(n, kraus, &mut rng);
        let back = chi_to_kraus(&kraus_to_chi(&ch)).map_err(|e| e.to_string())?;
        let basis = state_basis(n);
        assert_eq!(basis.len(), n * n);
        for rho in &basis {
            let a = apply_channel(&ch, rho).map_err(|e| e.to_string())?;
            let b = apply_channel(&back, rho).map_err(|e| e.to_string())?;
            worst = worst.max(a.matrix().max_abs_diff(b.matrix()));
        }
    }
    ensure(worst <= 1e-8, format!("max deviation {worst:.2e} over 200 channels"))
}

fn payoff_range() -> Outcome {
    let game = ewl_prisoners_dilemma().game;
    let tensors = [Player::I, Player::II].map(|p| payoff_tensor_matrix_unit(&game, p));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..1000 {
        let chi = random_chi(2, &mut rng);
        let xi = random_chi(2, &mut rng);
        for a in &tensors {
            let v = payoff_contract(a, &chi, &xi).map_err(|e| e.to_string())?;
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    ensure(
        lo >= -1e-9 && hi <= 5.0 + 1e-9,
        format!("observed range [{lo:.6}, {hi:.6}] over 1000 pairs"),
    )
}

fn oracle_dominance() -> Outcome {
    let game = ewl_prisoners_dilemma().game;
    let tensors = [Player::I, Player::II].map(|p| payoff_tensor_matrix_unit(&game, p));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let opts = SolverOptions::default();
    let mut worst_margin = f64::INFINITY;
    let mut worst_duality = f64::INFINITY;
    let mut duality_ok = true;
    for k in 0..20 {
        let player = if k % 2 == 0 { Player::I } else { Player::II };
        let opponent = random_chi(2, &mut rng);
        let a = &tensors[player.index()];
        let problem = response_problem(a, &opponent, player).map_err(|e| e.to_string())?;
        let br = best_response(&problem, &opts).map_err(|e| e.to_string())?;
        let oracle = unitary_oracle(a, &opponent, player, DEFAULT_RESOLUTION).map_err(|e| e.to_string())?;
        worst_margin = worst_margin.min(br.value - oracle.value);
        // Both sides are computed in floating point, so allow a few ulps.
        worst_duality = worst_duality.min(br.dual_bound - br.value);
        duality_ok &= br.dual_bound - br.value >= -1e-12 * br.value.abs().max(1.0);
    }
    ensure(
        worst_margin >= -1e-8 && duality_ok,
        format!("min(certified − oracle) {worst_margin:.2e}; min(bound − value) {worst_duality:.2e}"),
    )
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let game = ewl_prisoners_dilemma().game;
    let (povm, a1, a2) = ewl_measurement();
    let id = KrausChannel::identity(2);
    let run = |seed| {
        simulate_play(&game, &povm, &a1, &a2, &id, &id, 100_000, &mut ChaCha8Rng::seed_from_u64(seed))
            .map_err(|e| e.to_string())
    };
    let first = run(10)?;
    let second = run(10)?;
    let z: Vec<f64> = first.mean.iter().zip(first.std_error).map(|(m, se)| {
        if se > 0.0 { (m - 3.0) / se } else if (m - 3.0).abs() <= 1e-12 { 0.0 } else { f64::INFINITY }
    }).collect();
    let detail = format!(
        "means ({:.6}, {:.6}); z ({:.2}, {:.2}); repeat identical {}",
        first.mean[0], first.mean[1], z[0], z[1], first == second
    );
    ensure(z.iter().all(|z| z.abs() <= 3.0) && first == second, detail.clone())?;
    within(start.elapsed(), Duration::from_secs(5), detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("reference payoff tensors", reference_tensors),
        ("closed-form tensor identity", closed_form_identity),
        ("classical reduction", classical_table),
        ("equilibrium reproduction", equilibrium),
        ("non-equilibrium detection", non_equilibrium),
        ("evaluation equivalence", evaluation_equivalence),
        ("channel round-trip", round_trip),
        ("payoff range", payoff_range),
        ("oracle dominance", oracle_dominance),
        ("Monte Carlo consistency", monte_carlo),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{}/10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
