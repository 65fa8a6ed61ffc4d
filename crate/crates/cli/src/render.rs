//! Golden text output.

use std::fmt::Write as _;

use serde_json::Value;

use mk_core::counterexample::CounterexampleReport;

/// Indented `key: value` text. Arrays without objects stay on one line.
pub fn golden(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(is_flat),
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                if is_flat(item) {
                    writeln!(out, "{pad}{k}: {}", flat(item)).expect("string write");
                } else {
                    writeln!(out, "{pad}{k}:").expect("string write");
                    write_value(out, item, depth + 1);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_flat(item) {
                    writeln!(out, "{pad}- {}", flat(item)).expect("string write");
                } else {
                    writeln!(out, "{pad}-").expect("string write");
                    write_value(out, item, depth + 1);
                }
            }
        }
        _ => writeln!(out, "{pad}{}", flat(v)).expect("string write"),
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        _ => v.to_string(),
    }
}

/// JSON with sorted keys and objects one key per line. Lists of scalars
/// stay on one line, other object-free values too when they fit.
pub fn json(v: &Value) -> String {
    let mut out = String::new();
    write_json(&mut out, v, 0);
    out.push('\n');
    out
}

const JSON_WIDTH: usize = 100;

fn write_json(out: &mut String, v: &Value, depth: usize) {
    let compact = v.to_string();
    let scalar_list = v.as_array().is_some_and(|a| a.iter().all(|x| !x.is_array() && !x.is_object()));
    let scalar = !v.is_array() && !v.is_object();
    if scalar || scalar_list || (is_flat(v) && compact.len() + 2 * depth <= JSON_WIDTH) {
        out.push_str(&compact);
        return;
    }
    let pad = "  ".repeat(depth + 1);
    let (open, close) = if v.is_object() { ('{', '}') } else { ('[', ']') };
    out.push(open);
    let mut first = true;
    let mut item = |out: &mut String, key: Option<&str>, x: &Value| {
        out.push_str(if first { "\n" } else { ",\n" });
        first = false;
        out.push_str(&pad);
        if let Some(k) = key {
            out.push_str(&Value::String(k.to_string()).to_string());
            out.push_str(": ");
        }
        write_json(out, x, depth + 1);
    };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, x)| item(out, Some(k), x)),
        Value::Array(items) => items.iter().for_each(|x| item(out, None, x)),
        _ => unreachable!("scalars are flat"),
    }
    if !first {
        out.push('\n');
        out.push_str(&"  ".repeat(depth));
    }
    out.push(close);
}

/// The example report laid out for reading.
pub fn counterexample(r: &CounterexampleReport) -> String {
    let mut o = String::new();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let w = &mut o;
    writeln!(w, "M = {{1, 0}}, D_1 = 0, D_0 = Z/2 ⊕ Z/2, 0(x,y) = (y,y), (x,y)0 = (0,0)").unwrap();
    // The unit first, then `xy` ordered by `y` and `x`.
    let mut listed = r.total_elements.clone();
    listed.sort_by_key(|e| (e.len(), e.chars().rev().collect::<String>()));
    writeln!(w, "M ⋊ D = {{{}}}", listed.join(",")).unwrap();
    writeln!(w, "products of non-unit elements:").unwrap();
    for (a, b, c) in &r.products {
        writeln!(w, "  {a} · {b} = {c}").unwrap();
    }
    writeln!(w, "S = M ⋊ D / (00 ∼ 10) = {{{}}}", r.s_elements.join(",")).unwrap();
    writeln!(w, "left action of M ⋊ D on S:").unwrap();
    for (g, s, gs) in &r.action {
        writeln!(w, "  {g} · {s} = {gs}").unwrap();
    }
    writeln!(w, "linear extension: {}", yes(r.linear_extension)).unwrap();
    writeln!(w, "untwisted: {}", yes(r.untwisted)).unwrap();
    writeln!(w, "free values on the 0-fiber: {}", r.search_space).unwrap();
    writeln!(w, "equivariant Maltsev operations over M: {}", r.candidates).unwrap();
    writeln!(w, "forced value: m(*0,01,11) = {}", r.forced_value).unwrap();
    writeln!(w, "associative among them: {}", r.associative).unwrap();
    writeln!(w, "per candidate: forced value, chain, failing associativity instance (u,v,x,y,z):").unwrap();
    for (i, c) in r.witnesses.iter().enumerate() {
        writeln!(
            w,
            "  {:3}  m(*0,01,11) = {}  m(11,m(*0,01,11),*0) = {}  m(11,11,m(01,*0,*0)) = {}  ({})",
            i + 1,
            c.forced,
            c.chain_left,
            c.chain_right,
            c.associativity.join(",")
        )
        .unwrap();
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nested_objects_indent() {
        let v = json!({"b": {"c": [1, 2]}, "a": [[0, 1], [2]]});
        assert_eq!(golden(&v), "a: [[0,1],[2]]\nb:\n  c: [1,2]\n");
    }

    #[test]
    fn json_layout_round_trips() {
        let long: Vec<Vec<usize>> = (0..30).map(|i| vec![i, i + 1]).collect();
        let v = json!({"z": [1, 2], "a": {"b": long, "c": []}, "s": "x\"y"});
        let text = json(&v);
        assert!(text.starts_with("{\n  \"a\": {\n    \"b\": [\n      [0,1],\n"), "{text}");
        assert!(text.contains("\"z\": [1,2]"));
        assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), v);
    }
}
