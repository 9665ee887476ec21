//! Deterministic serialization: JSON with fixed 10-significant-digit
//! float formatting and ordered keys, plus the per-mode CSV tables.
//! Identical inputs produce byte-identical output; no timestamps or
//! environment data ever enter the payload.

/// A JSON value with insertion-ordered object keys.
pub enum Json {
    Num(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

/// Fixed-width float: 10 significant digits, scientific notation.
/// Negative zero is normalized so mirrored runs stay byte-identical.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.9e}")
}

impl Json {
    pub fn num(x: f64) -> Json {
        Json::Num(x)
    }

    pub fn arr_of_nums<'a, I: IntoIterator<Item = &'a f64>>(vals: I) -> Json {
        Json::Arr(vals.into_iter().map(|&v| Json::Num(v)).collect())
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, depth: usize) {
        match self {
            Json::Num(x) => out.push_str(&fmt_float(*x)),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        c if (c as u32) < 0x20 => {
                            out.push_str(&format!("\\u{:04x}", c as u32))
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                // scalar arrays inline, nested ones one-per-line
                let scalar = items
                    .iter()
                    .all(|i| !matches!(i, Json::Arr(_) | Json::Obj(_)));
                out.push('[');
                for (idx, item) in items.iter().enumerate() {
                    if idx > 0 {
                        out.push(',');
                    }
                    if !scalar {
                        out.push('\n');
                        indent(out, depth + 1);
                    }
                    item.write(out, depth + 1);
                }
                if !scalar {
                    out.push('\n');
                    indent(out, depth);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (idx, (key, value)) in fields.iter().enumerate() {
                    if idx > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    indent(out, depth + 1);
                    out.push('"');
                    out.push_str(key);
                    out.push_str("\": ");
                    value.write(out, depth + 1);
                }
                out.push('\n');
                indent(out, depth);
                out.push('}');
            }
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// CSV table for one mode shape: header `x,v,u`, one row per sample,
/// no index column.
pub fn mode_csv(samples: &[catmode::modal::ShapeSample]) -> String {
    let mut out = String::from("x,v,u\n");
    for s in samples {
        out.push_str(&fmt_float(s.x));
        out.push(',');
        out.push_str(&fmt_float(s.v));
        out.push(',');
        out.push_str(&fmt_float(s.u));
        out.push('\n');
    }
    out
}

/// CSV table for the equilibrium profile: header `x,y`.
pub fn profile_csv(samples: &[(f64, f64)]) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in samples {
        out.push_str(&fmt_float(*x));
        out.push(',');
        out.push_str(&fmt_float(*y));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_ten_significant_digits() {
        assert_eq!(fmt_float(0.1631682741), "1.631682741e-1");
        assert_eq!(fmt_float(-2.4294), "-2.429400000e0");
        assert_eq!(fmt_float(0.0), "0.000000000e0");
        assert_eq!(fmt_float(-0.0), "0.000000000e0");
    }

    #[test]
    fn object_keys_keep_order() {
        let j = Json::Obj(vec![
            ("zeta", Json::Int(1)),
            ("alpha", Json::Bool(false)),
        ]);
        let s = j.to_pretty();
        assert!(s.find("zeta").unwrap() < s.find("alpha").unwrap());
    }

    #[test]
    fn strings_are_escaped() {
        let j = Json::Str("a\"b\\c\n".into());
        let mut out = String::new();
        j.write(&mut out, 0);
        assert_eq!(out, "\"a\\\"b\\\\c\\n\"");
    }
}
