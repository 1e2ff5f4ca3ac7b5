use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use qgame_core::builtin::{ewl_prisoners_dilemma, ewl_reference_tensors};
use qgame_core::equilibrium::{best_response, response_problem, verify_nash, BestResponseResult, NashVerdict, SolverOptions};
use qgame_core::game::{
    classical_reduction, payoff_contract, payoff_direct, payoff_tensor_general, payoff_tensor_matrix_unit,
    simulate_play, PayoffTensor, Player, QuantumGame,
};
use qgame_core::linalg::{min_eigenvalue, ComplexMatrix};
use qgame_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{exit, CliError};
use crate::files::{
    build_povm, from_matrix, load_game, load_strategy, read_document, to_matrix, tolerance, GameFile, Matrix, PovmFile,
};
use crate::render::Renderer;

/// Tolerance for agreement between two evaluation paths of the same quantity.
pub const CROSS_CHECK_TOL: f64 = 1e-9;
const TENSOR_CHECK_TOL: f64 = 1e-12;

pub trait Report: Serialize {
    fn text(&self, r: &Renderer) -> String;
}

/// A finished command: its report and the exit code to return.
pub struct Finished<R> {
    pub report: R,
    pub code: u8,
}

impl<R> Finished<R> {
    fn ok(report: R) -> Self {
        Self { report, code: exit::OK }
    }
}

fn c(z: [f64; 2]) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn grid_rows(m: &Matrix) -> Vec<Vec<Complex64>> {
    m.iter().map(|row| row.iter().map(|&z| c(z)).collect()).collect()
}

// ---------------------------------------------------------------- validate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub tolerance: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report for ValidateReport {
    fn text(&self, r: &Renderer) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for check in &self.checks {
            let verdict = if check.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{verdict}  {:<width$}  residual {:.3e}", check.name, check.residual);
        }
        let _ = writeln!(
            out,
            "{} (tolerance {})",
            if self.passed { "all checks passed" } else { "validation failed" },
            r.real(self.tolerance)
        );
        out
    }
}

fn residual_check(checks: &mut Vec<Check>, name: &str, residual: f64, tol: f64) {
    checks.push(Check {
        name: name.into(),
        passed: residual <= tol,
        residual,
    });
}

pub fn validate(path: &Path) -> Result<Finished<ValidateReport>, CliError> {
    let file: GameFile = read_document(path)?;
    let tol = tolerance()?;
    let mut checks = Vec::new();
    let joint = file.n1 * file.n2;

    let rho = from_matrix(&file.rho)?;
    residual_check(&mut checks, "rho dimension", rho.dim().abs_diff(joint) as f64, 0.0);
    residual_check(&mut checks, "rho hermitian", rho.hermiticity_residual(), tol);
    residual_check(&mut checks, "rho trace one", (rho.trace() - Complex64::new(1.0, 0.0)).norm(), tol);
    let min = min_eigenvalue(&rho.hermitian_part())?;
    residual_check(&mut checks, "rho positive", (-min).max(0.0), tol);

    let mut operators = Vec::new();
    match (&file.payoff_ops, &file.povm) {
        (Some([r1, r2]), None) => {
            operators.push(("R^I", from_matrix(r1)?));
            operators.push(("R^II", from_matrix(r2)?));
        }
        (None, Some(spec)) => {
            let elements = spec.elements.iter().map(from_matrix).collect::<Result<Vec<_>, _>>()?;
            let mut sum = ComplexMatrix::zeros(joint);
            let mut dims_ok = true;
            for m in &elements {
                if m.dim() == joint {
                    sum = &sum + &(&m.adjoint() * m);
                } else {
                    dims_ok = false;
                }
            }
            residual_check(&mut checks, "povm dimensions", if dims_ok { 0.0 } else { 1.0 }, 0.0);
            residual_check(
                &mut checks,
                "povm completeness",
                sum.max_abs_diff(&ComplexMatrix::identity(joint)),
                tol,
            );
            for (name, payoffs) in [("payoffs_I length", &spec.payoffs_i), ("payoffs_II length", &spec.payoffs_ii)] {
                residual_check(&mut checks, name, payoffs.len().abs_diff(elements.len()) as f64, 0.0);
            }
        }
        _ => return Err(CliError::Parse("game file needs exactly one of payoff_ops or povm".into())),
    }
    for (name, op) in operators {
        residual_check(&mut checks, &format!("{name} dimension"), op.dim().abs_diff(joint) as f64, 0.0);
        residual_check(&mut checks, &format!("{name} hermitian"), op.hermiticity_residual(), tol);
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(Finished {
        report: ValidateReport { tolerance: tol, checks, passed },
        code: if passed { exit::OK } else { exit::VALIDATION },
    })
}

// ---------------------------------------------------------------- tensor

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErratumNote {
    pub row: usize,
    pub col: usize,
    pub transcribed: [f64; 2],
    pub corrected: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureCheck {
    pub matched: usize,
    pub total: usize,
    pub errata: Vec<ErratumNote>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorReport {
    pub player: String,
    pub n1: usize,
    pub n2: usize,
    /// Flattened grid: row `α·n1² + β`, column `γ·n2² + δ`.
    pub grid: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<FixtureCheck>,
}

impl Report for TensorReport {
    fn text(&self, r: &Renderer) -> String {
        let mut out = format!(
            "A^{} ({}x{} grid; row = alpha*{} + beta, col = gamma*{} + delta)\n",
            self.player,
            self.grid.len(),
            self.grid.first().map_or(0, Vec::len),
            self.n1 * self.n1,
            self.n2 * self.n2,
        );
        out.push_str(&r.grid(&grid_rows(&self.grid)));
        if let Some(f) = &self.fixture {
            let _ = writeln!(out, "match: {}/{} entries", f.matched, f.total);
            for e in &f.errata {
                let _ = writeln!(
                    out,
                    "note: reference entry ({}, {}) carries an erratum: transcribed {}, corrected {}",
                    e.row,
                    e.col,
                    r.complex(c(e.transcribed)),
                    r.complex(c(e.corrected))
                );
            }
        }
        out
    }
}

fn tensor_grid(t: &PayoffTensor) -> Matrix {
    (0..t.grid_rows())
        .map(|row| (0..t.grid_cols()).map(|col| t.grid(row, col)).map(|z| [z.re, z.im]).collect())
        .collect()
}

fn is_builtin(game: &QuantumGame) -> bool {
    let ewl = ewl_prisoners_dilemma().game;
    game.n1() == 2
        && game.n2() == 2
        && game.rho().matrix().max_abs_diff(ewl.rho().matrix()) <= TENSOR_CHECK_TOL
        && [Player::I, Player::II]
            .iter()
            .all(|&p| game.payoff_operator(p).max_abs_diff(ewl.payoff_operator(p)) <= TENSOR_CHECK_TOL)
}

/// Builds the tensor by the closed form and checks it against the literal trace form.
fn checked_tensor(game: &QuantumGame, player: Player) -> Result<PayoffTensor, CliError> {
    let fast = payoff_tensor_matrix_unit(game, player);
    let slow = payoff_tensor_general(game, player);
    let d = fast.max_abs_diff(&slow);
    if d > TENSOR_CHECK_TOL {
        return Err(CliError::CrossCheck(format!(
            "closed-form and trace-form tensors differ by {d:.3e}"
        )));
    }
    Ok(fast)
}

pub fn tensor(path: &Path, player: Player, check_fixture: bool) -> Result<Finished<TensorReport>, CliError> {
    let game = load_game(path)?.game;
    let t = checked_tensor(&game, player)?;
    let mut code = exit::OK;
    let fixture = if check_fixture {
        if !is_builtin(&game) {
            return Err(CliError::Validation(
                "--check-fixture applies only to the built-in EWL game".into(),
            ));
        }
        let (a1, a2) = ewl_reference_tensors()?;
        let reference = if player == Player::I { a1 } else { a2 };
        let corrected = reference.corrected();
        let total = t.grid_rows() * t.grid_cols();
        let matched = (0..t.grid_rows())
            .flat_map(|row| (0..t.grid_cols()).map(move |col| (row, col)))
            .filter(|&(row, col)| (t.grid(row, col) - corrected.grid(row, col)).norm() <= TENSOR_CHECK_TOL)
            .count();
        if matched != total {
            code = exit::CROSS_CHECK;
        }
        let errata = reference
            .errata
            .iter()
            .map(|e| {
                let z = reference.transcribed.grid(e.row, e.col);
                ErratumNote {
                    row: e.row,
                    col: e.col,
                    transcribed: [z.re, z.im],
                    corrected: [e.value.re, e.value.im],
                }
            })
            .collect();
        Some(FixtureCheck { matched, total, errata })
    } else {
        None
    };
    Ok(Finished {
        report: TensorReport {
            player: player.to_string(),
            n1: game.n1(),
            n2: game.n2(),
            grid: tensor_grid(&t),
            fixture,
        },
        code,
    })
}

// ---------------------------------------------------------------- payoff

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffReport {
    #[serde(rename = "payoff_I")]
    pub payoff_i: f64,
    #[serde(rename = "payoff_II")]
    pub payoff_ii: f64,
    /// Largest difference from direct evaluation; absent when a strategy was given as χ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<f64>,
}

impl Report for PayoffReport {
    fn text(&self, r: &Renderer) -> String {
        let mut out = format!("payoffs: ({}, {})\n", r.real(self.payoff_i), r.real(self.payoff_ii));
        match self.cross_check {
            Some(d) => {
                let _ = writeln!(out, "direct evaluation agrees (max deviation {d:.1e})");
            }
            None => out.push_str("direct evaluation skipped (strategy given as chi)\n"),
        }
        out
    }
}

pub fn payoff(game_path: &Path, s1: &Path, s2: &Path) -> Result<Finished<PayoffReport>, CliError> {
    let game = load_game(game_path)?.game;
    let chi = load_strategy(s1, game.n1())?;
    let xi = load_strategy(s2, game.n2())?;
    let values: Vec<f64> = [Player::I, Player::II]
        .iter()
        .map(|&p| payoff_contract(&payoff_tensor_matrix_unit(&game, p), &chi.chi, &xi.chi))
        .collect::<Result<_, _>>()?;
    let cross_check = match (&chi.kraus, &xi.kraus) {
        (Some(a), Some(b)) => {
            let mut worst = 0.0f64;
            for (k, p) in [Player::I, Player::II].into_iter().enumerate() {
                worst = worst.max((payoff_direct(&game, a, b, p)? - values[k]).abs());
            }
            if worst > CROSS_CHECK_TOL {
                return Err(CliError::CrossCheck(format!(
                    "contraction and direct evaluation differ by {worst:.3e}"
                )));
            }
            Some(worst)
        }
        _ => None,
    };
    Ok(Finished::ok(PayoffReport {
        payoff_i: values[0],
        payoff_ii: values[1],
        cross_check,
    }))
}

// ---------------------------------------------------------------- best-response

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestResponseReport {
    pub player: String,
    pub value: f64,
    pub dual_bound: f64,
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
    pub chi: Matrix,
}

impl BestResponseReport {
    fn new(player: Player, r: &BestResponseResult) -> Self {
        Self {
            player: player.to_string(),
            value: r.value,
            dual_bound: r.dual_bound,
            gap: r.gap,
            iterations: r.iterations,
            converged: r.converged,
            chi: to_matrix(r.chi_opt.matrix()),
        }
    }
}

impl Report for BestResponseReport {
    fn text(&self, r: &Renderer) -> String {
        let mut out = format!(
            "best response for player {}: {}\ndual bound: {}\ngap: {:.3e}\niterations: {}\n",
            self.player,
            r.real(self.value),
            r.real(self.dual_bound),
            self.gap,
            self.iterations
        );
        if !self.converged {
            out.push_str("NOT CONVERGED (partial result)\n");
        }
        out.push_str("chi:\n");
        out.push_str(&r.grid(&grid_rows(&self.chi)));
        out
    }
}

fn solver_options(tol: Option<f64>, max_iters: Option<usize>) -> SolverOptions {
    let d = SolverOptions::default();
    SolverOptions {
        tol: tol.unwrap_or(d.tol),
        max_iters: max_iters.unwrap_or(d.max_iters),
        step: None,
    }
}

pub fn best_response_cmd(
    game_path: &Path,
    opponent: &Path,
    player: Player,
    tol: Option<f64>,
    max_iters: Option<usize>,
) -> Result<Finished<BestResponseReport>, CliError> {
    let game = load_game(game_path)?.game;
    let opp = load_strategy(opponent, game.player_dim(player.other()))?;
    let a = checked_tensor(&game, player)?;
    let problem = response_problem(&a, &opp.chi, player)?;
    match best_response(&problem, &solver_options(tol, max_iters)) {
        Ok(r) => Ok(Finished::ok(BestResponseReport::new(player, &r))),
        Err(Error::NoConvergence(partial)) => Ok(Finished {
            report: BestResponseReport::new(player, &partial),
            code: exit::NO_CONVERGENCE,
        }),
        Err(e) => Err(e.into()),
    }
}

// ---------------------------------------------------------------- verify-nash

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NashReport {
    pub equilibrium: bool,
    pub converged: bool,
    pub epsilon: f64,
    #[serde(rename = "payoff_I")]
    pub payoff_i: f64,
    #[serde(rename = "payoff_II")]
    pub payoff_ii: f64,
    #[serde(rename = "gap_I")]
    pub gap_i: f64,
    #[serde(rename = "gap_II")]
    pub gap_ii: f64,
    #[serde(rename = "best_response_I")]
    pub best_response_i: f64,
    #[serde(rename = "best_response_II")]
    pub best_response_ii: f64,
}

impl NashReport {
    fn new(v: &NashVerdict, converged: bool) -> Self {
        Self {
            equilibrium: v.is_equilibrium,
            converged,
            epsilon: v.epsilon,
            payoff_i: v.payoff_i,
            payoff_ii: v.payoff_ii,
            gap_i: v.gap_i,
            gap_ii: v.gap_ii,
            best_response_i: v.response_i.value,
            best_response_ii: v.response_ii.value,
        }
    }
}

impl Report for NashReport {
    fn text(&self, r: &Renderer) -> String {
        let verdict = match (self.converged, self.equilibrium) {
            (false, _) => "UNDECIDED",
            (true, true) => "EQUILIBRIUM",
            (true, false) => "NOT EQUILIBRIUM",
        };
        format!(
            "{verdict} (gaps {:.1e}, {:.1e})\npayoffs: ({}, {})\nbest responses: ({}, {})\nepsilon: {}\n",
            self.gap_i,
            self.gap_ii,
            r.real(self.payoff_i),
            r.real(self.payoff_ii),
            r.real(self.best_response_i),
            r.real(self.best_response_ii),
            r.real(self.epsilon),
        )
    }
}

pub fn verify_nash_cmd(
    game_path: &Path,
    s1: &Path,
    s2: &Path,
    epsilon: f64,
    tol: Option<f64>,
    max_iters: Option<usize>,
) -> Result<Finished<NashReport>, CliError> {
    let game = load_game(game_path)?.game;
    let chi = load_strategy(s1, game.n1())?;
    let xi = load_strategy(s2, game.n2())?;
    for p in [Player::I, Player::II] {
        checked_tensor(&game, p)?;
    }
    match verify_nash(&game, &chi.chi, &xi.chi, epsilon, &solver_options(tol, max_iters)) {
        Ok(v) => Ok(Finished {
            code: if v.is_equilibrium { exit::OK } else { exit::VALIDATION },
            report: NashReport::new(&v, true),
        }),
        Err(Error::NashNoConvergence(partial)) => Ok(Finished {
            report: NashReport::new(&partial, false),
            code: exit::NO_CONVERGENCE,
        }),
        Err(e) => Err(e.into()),
    }
}

// ---------------------------------------------------------------- simulate

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub seed: u64,
    pub rounds: usize,
    pub mean: [f64; 2],
    pub std_error: [f64; 2],
    pub exact: [f64; 2],
    /// `None` when the standard error vanishes but the mean is off.
    pub z_scores: [Option<f64>; 2],
    pub counts: Vec<usize>,
}

impl Report for SimulateReport {
    fn text(&self, r: &Renderer) -> String {
        let mut out = format!("seed: {}\nrounds: {}\n", self.seed, self.rounds);
        for (k, label) in ["I", "II"].iter().enumerate() {
            let z = self.z_scores[k].map_or("inf".to_string(), |z| format!("{z:.3}"));
            let _ = writeln!(
                out,
                "player {label}: mean {}  std error {}  exact {}  z {z}",
                r.real(self.mean[k]),
                r.real(self.std_error[k]),
                r.real(self.exact[k]),
            );
        }
        let counts: Vec<String> = self.counts.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "outcome counts: {}", counts.join(" "));
        out
    }
}

pub fn simulate(
    game_path: &Path,
    povm_path: &Path,
    s1: &Path,
    s2: &Path,
    rounds: usize,
    seed: u64,
) -> Result<Finished<SimulateReport>, CliError> {
    let game = load_game(game_path)?.game;
    let povm_file: PovmFile = read_document(povm_path)?;
    let povm = build_povm(&povm_file.measurement, tolerance()?)?;
    let a = load_strategy(s1, game.n1())?.channel()?;
    let b = load_strategy(s2, game.n2())?.channel()?;
    let m = &povm_file.measurement;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rep = simulate_play(&game, &povm, &m.payoffs_i, &m.payoffs_ii, &a, &b, rounds, &mut rng)?;
    let z = rep.z_scores().map(|z| z.is_finite().then_some(z));
    Ok(Finished::ok(SimulateReport {
        seed,
        rounds: rep.rounds,
        mean: rep.mean,
        std_error: rep.std_error,
        exact: rep.exact,
        z_scores: z,
        counts: rep.counts,
    }))
}

// ---------------------------------------------------------------- classical

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    /// `entries[s][t]` = (payoff_I, payoff_II) for shift strategies s, t.
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl Report for ClassicalReport {
    fn text(&self, r: &Renderer) -> String {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|[a, b]| format!("({}, {})", r.real(*a), r.real(*b))).collect())
            .collect();
        let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
        let mut out = String::from("I \\ II");
        for t in 0..cells.first().map_or(0, Vec::len) {
            let _ = write!(out, "  {t:>width$}");
        }
        out.push('\n');
        for (s, row) in cells.iter().enumerate() {
            let _ = write!(out, "{s:>6}");
            for cell in row {
                let _ = write!(out, "  {cell:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn classical(game_path: &Path) -> Result<Finished<ClassicalReport>, CliError> {
    let game = load_game(game_path)?.game;
    let table = classical_reduction(&game)?;
    let entries = (0..table.rows())
        .map(|s| (0..table.cols()).map(|t| table.get(s, t)).map(|(a, b)| [a, b]).collect())
        .collect();
    Ok(Finished::ok(ClassicalReport { entries }))
}
