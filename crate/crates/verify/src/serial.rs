//! Text forms of rationals and tower elements.

use halfspin_core::{FieldElement, Rational, Tower};
use num_bigint::BigInt;

/// `"p/q"` in lowest terms with positive `q`.
pub fn rational_to_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"p"` or `"p/q"` with integer `p` and nonzero integer `q`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let (p, q) = t.split_once('/').unwrap_or((t, "1"));
    let bad = || format!("`{s}` is not a rational p/q");
    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(format!("`{s}` has zero denominator"));
    }
    Ok(Rational::new(p, q))
}

/// Coordinates in `{1, √m1, √m2, √m1√m2}`.
pub fn element_to_strings(x: &FieldElement) -> Vec<String> {
    x.coords().iter().map(rational_to_string).collect()
}

/// One to four coordinates; missing trailing ones are zero.
pub fn parse_tower_element(tower: &Tower, coords: &[String]) -> Result<FieldElement, String> {
    if coords.is_empty() || coords.len() > 4 {
        return Err("expected 1 to 4 coordinates".into());
    }
    let mut c: [Rational; 4] = Default::default();
    for (i, s) in coords.iter().enumerate() {
        c[i] = parse_rational(s).map_err(|e| format!("coordinate {i}: {e}"))?;
    }
    tower.element(c).map_err(|e| e.to_string())
}
