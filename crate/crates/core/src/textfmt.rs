//! Number formatting shared by the text and CSV writers.

/// Formats `x` with `digits` significant digits, switching to scientific
/// notation for very large or very small magnitudes.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // Round first so the exponent reflects the printed value (9.9999999999 -> 10).
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let (mantissa, e) = sci.split_once('e').unwrap_or((&sci, "0"));
        format!("{}e{}", trim_zeros(mantissa.to_string()), e)
    }
}

/// Nine significant digits, the precision used by all CSV outputs.
pub fn fmt9(x: f64) -> String {
    format_sig(x, 9)
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".into()
        } else {
            t.to_string()
        }
    } else {
        s
    }
}
