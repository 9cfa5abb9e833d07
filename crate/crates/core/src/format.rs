//! Human-readable number formatting (12 significant digits).

use num_complex::Complex64;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` to 12 significant digits with trailing zeros removed.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Compact complex form such as `9-2i`, `-24`, `2i`.
pub fn fmt_complex(z: Complex64) -> String {
    let re = fmt_real(z.re);
    let im = fmt_real(z.im.abs());
    let im_zero = im == "0";
    let re_zero = re == "0" || re == "-0";
    let im_part = if im == "1" { String::new() } else { im };
    match (re_zero, im_zero) {
        (_, true) => if re == "-0" { "0".into() } else { re },
        (true, false) => format!("{}{}i", if z.im < 0.0 { "-" } else { "" }, im_part),
        (false, false) => format!("{}{}{}i", re, if z.im < 0.0 { "-" } else { "+" }, im_part),
    }
}
