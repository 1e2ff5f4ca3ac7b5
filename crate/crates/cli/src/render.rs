//! Text rendering of real and complex numbers.

use num_complex::Complex64;
use qgame_core::linalg::ComplexMatrix;

const SIGNIFICANT: usize = 12;
const MAX_DENOMINATOR: i64 = 64;
const FRACTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default)]
pub struct Renderer {
    pub exact_fractions: bool,
}

/// `x` rounded to 12 significant digits, in its shortest decimal form.
fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT - 1, x).parse().expect("formatted float parses")
}

fn fmt_real(x: f64) -> String {
    let r = round_significant(x);
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

/// `(numerator, denominator)` with the smallest denominator ≤ 64 within 1e-12 of `x`.
pub fn as_fraction(x: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    (1..=MAX_DENOMINATOR).find_map(|den| {
        let num = (x * den as f64).round();
        ((x - num / den as f64).abs() <= FRACTION_TOL).then_some((num as i64, den))
    })
}

impl Renderer {
    pub fn real(&self, x: f64) -> String {
        if self.exact_fractions {
            match as_fraction(x) {
                Some((0, _)) => return "0".into(),
                Some((num, 1)) => return num.to_string(),
                Some((num, den)) => return format!("{num}/{den}"),
                None => {}
            }
        }
        fmt_real(x)
    }

    /// Imaginary part with its unit: `i`, `-1i`, `5i/4`, `0.25i`.
    fn imaginary(&self, y: f64) -> String {
        if self.exact_fractions {
            if let Some((num, den)) = as_fraction(y) {
                return if den == 1 { format!("{num}i") } else { format!("{num}i/{den}") };
            }
        }
        format!("{}i", fmt_real(y))
    }

    fn is_zero(&self, x: f64) -> bool {
        round_significant(x) == 0.0 || (self.exact_fractions && matches!(as_fraction(x), Some((0, _))))
    }

    pub fn complex(&self, z: Complex64) -> String {
        match (self.is_zero(z.re), self.is_zero(z.im)) {
            (_, true) => self.real(if self.is_zero(z.re) { 0.0 } else { z.re }),
            (true, false) => self.imaginary(z.im),
            (false, false) => {
                let im = self.imaginary(z.im.abs());
                let sign = if z.im < 0.0 { '-' } else { '+' };
                format!("{}{sign}{im}", self.real(z.re))
            }
        }
    }

    /// Right-aligned grid of complex entries.
    pub fn grid(&self, rows: &[Vec<Complex64>]) -> String {
        let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|&z| self.complex(z)).collect()).collect();
        let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
        let mut out = String::new();
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn matrix(&self, m: &ComplexMatrix) -> String {
        self.grid(&m.rows())
    }
}
