//! CSV heatmaps of the metric `d` and decimal rendering of exact rationals.

use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use tnorm_core::metric::heatmap_values;
use tnorm_core::{Algebra, Rational, TruthValue};

/// Significant digits in CSV cells.
pub const SIGNIFICANT_DIGITS: u32 = 12;

/// `x` rounded half-to-even to `digits` significant digits, in plain decimal
/// notation with trailing zeros removed.
pub fn decimal(x: &Rational, digits: u32) -> String {
    assert!(digits > 0);
    if x.is_zero() {
        return "0".into();
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let x = x.abs();
    let ten = BigInt::from(10);
    // Find e with 10^e <= x < 10^(e+1).
    let mut e: i64 = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    let pow = |k: i64| -> Rational {
        let p = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            Rational::from_integer(p)
        } else {
            Rational::new(BigInt::one(), p)
        }
    };
    while pow(e) > x {
        e -= 1;
    }
    while pow(e + 1) <= x {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let mut mantissa = round_half_even(&(&x * pow(shift)));
    if mantissa == num_traits::pow(ten.clone(), digits as usize) {
        mantissa /= &ten;
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let text = mantissa.to_string();
    let body = if shift <= 0 {
        format!("{text}{}", "0".repeat(shift.unsigned_abs() as usize))
    } else {
        let shift = shift as usize;
        let padded = if text.len() <= shift { format!("{}{text}", "0".repeat(shift - text.len() + 1)) } else { text };
        let (int, frac) = padded.split_at(padded.len() - shift);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    };
    format!("{sign}{body}")
}

fn round_half_even(x: &Rational) -> BigInt {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    let twice: BigInt = &r * BigInt::from(2);
    match twice.cmp(x.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal if q.is_even() => q,
        std::cmp::Ordering::Equal => q + 1,
    }
}

pub fn cell(v: &TruthValue) -> String {
    decimal(v.as_rational(), SIGNIFICANT_DIGITS)
}

/// Writes the `(n+1) × (n+1)` table of `d(i/n, j/n)` with a header row and
/// column of grid coordinates. Row `i` is `x`, column `j` is `y`.
pub fn write_heatmap<W: Write>(a: Algebra, n: u32, out: W) -> Result<(), HeatmapError> {
    let rows = heatmap_values(a, n)?;
    let grid = TruthValue::grid(n);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec!["x\\y".to_string()];
    header.extend(grid.iter().map(cell));
    w.write_record(&header)?;
    for (x, row) in grid.iter().zip(&rows) {
        let mut record = vec![cell(x)];
        record.extend(row.iter().map(cell));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum HeatmapError {
    #[error("{0}")]
    Core(#[from] tnorm_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("write: {0}")]
    Io(#[from] std::io::Error),
}
