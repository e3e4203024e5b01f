//! Deterministic CSV number formatting.

/// Formats a value with 12 significant digits in plain decimal notation,
/// falling back to scientific notation for very small or very large
/// magnitudes. The output depends only on the value.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let mag = x.abs();
    if !(1e-6..1e15).contains(&mag) {
        return format!("{x:.11e}");
    }
    let exp = mag.log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit (9.99.. -> 10.0..)
    let digits = s.chars().filter(|c| c.is_ascii_digit()).count();
    let leading_zeros = if mag < 1.0 { 1 + (-exp - 1) as usize } else { 0 };
    if digits - leading_zeros > 12 && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

/// Joins a header and rows into CSV text with `\n` line endings.
pub fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::fmt_num;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.5), "0.500000000000");
        assert_eq!(fmt_num(1.0), "1.00000000000");
        assert_eq!(fmt_num(0.7), "0.700000000000");
        assert_eq!(fmt_num(123.456), "123.456000000");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(0.0012), "0.00120000000000");
        assert_eq!(fmt_num(9.9999999999999), "10.0000000000");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1e-9), "1.00000000000e-9");
        assert_eq!(fmt_num(-2.5), "-2.50000000000");
    }
}
