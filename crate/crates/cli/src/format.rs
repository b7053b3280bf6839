//! Deterministic text formatting: shortest round-trip floats and RFC-4180
//! CSV quoting.

/// Shortest decimal string that parses back to exactly `v`; never more than
/// 17 significant digits.  Non-finite values get fixed lowercase names so a
/// broken row is still parseable.
pub fn f64_str(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let mut buf = ryu::Buffer::new();
    buf.format(v).to_string()
}

/// Quotes a field if it contains a comma, quote, or line break; embedded
/// quotes are doubled.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for ch in s.chars() {
            if ch == '"' {
                out.push('"');
            }
            out.push(ch);
        }
        out.push('"');
        out
    } else {
        s.to_string()
    }
}

pub fn csv_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    quoted.join(",")
}
