//! Line-oriented text encoding of a report. The text form encodes exactly
//! the same data as the JSON form: a parser reconstructs the JSON value, and
//! a round-trip test keeps the two in lockstep.
//!
//! Grammar (2-space indentation):
//!   object entries   key: <scalar>   |   key: ⏎ <indented block>
//!   array entries    - <scalar>      |   -    ⏎ <indented block>
//!   scalars          null, true, false, integers, JSON strings, [] and {}

use serde_json::Value;

fn scalar_token(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("null".to_owned()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(serde_json::to_string(s).expect("string serializes")),
        Value::Array(a) if a.is_empty() => Some("[]".to_owned()),
        Value::Object(o) if o.is_empty() => Some("{}".to_owned()),
        _ => None,
    }
}

fn render_block(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, val) in map {
                match scalar_token(val) {
                    Some(tok) => {
                        out.push_str(&format!("{pad}{key}: {tok}\n"));
                    }
                    None => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render_block(val, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar_token(item) {
                    Some(tok) => {
                        out.push_str(&format!("{pad}- {tok}\n"));
                    }
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_block(item, indent + 1, out);
                    }
                }
            }
        }
        scalar => {
            let tok = scalar_token(scalar).expect("non-container value is a scalar");
            out.push_str(&format!("{pad}{tok}\n"));
        }
    }
}

pub fn render(value: &Value) -> String {
    let mut out = String::new();
    render_block(value, 0, &mut out);
    out
}

fn indent_of(line: &str) -> Result<usize, String> {
    let spaces = line.len() - line.trim_start_matches(' ').len();
    if spaces % 2 != 0 {
        return Err(format!("odd indentation in line {line:?}"));
    }
    Ok(spaces / 2)
}

fn parse_scalar(token: &str) -> Result<Value, String> {
    match token {
        "{}" => Ok(Value::Object(Default::default())),
        "[]" => Ok(Value::Array(Vec::new())),
        other => serde_json::from_str(other).map_err(|e| format!("bad scalar {other:?}: {e}")),
    }
}

fn parse_block(lines: &[&str], pos: &mut usize, indent: usize) -> Result<Value, String> {
    let starts_array = lines
        .get(*pos)
        .map(|l| l.trim_start().starts_with('-'))
        .unwrap_or(false);
    if starts_array {
        let mut items = Vec::new();
        while *pos < lines.len() {
            let line = lines[*pos];
            if indent_of(line)? != indent || !line.trim_start().starts_with('-') {
                break;
            }
            let content = &line[indent * 2..];
            if content == "-" {
                *pos += 1;
                items.push(parse_block(lines, pos, indent + 1)?);
            } else if let Some(rest) = content.strip_prefix("- ") {
                items.push(parse_scalar(rest)?);
                *pos += 1;
            } else {
                return Err(format!("malformed array entry {line:?}"));
            }
        }
        Ok(Value::Array(items))
    } else {
        let mut map = serde_json::Map::new();
        while *pos < lines.len() {
            let line = lines[*pos];
            if indent_of(line)? != indent || line.trim_start().starts_with('-') {
                break;
            }
            let content = &line[indent * 2..];
            if let Some((key, rest)) = content.split_once(": ") {
                map.insert(key.to_owned(), parse_scalar(rest)?);
                *pos += 1;
            } else if let Some(key) = content.strip_suffix(':') {
                *pos += 1;
                let nested = parse_block(lines, pos, indent + 1)?;
                map.insert(key.to_owned(), nested);
            } else {
                return Err(format!("malformed object entry {line:?}"));
            }
        }
        Ok(Value::Object(map))
    }
}

pub fn parse(text: &str) -> Result<Value, String> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.is_empty() {
        return Ok(Value::Object(Default::default()));
    }
    let mut pos = 0;
    let value = parse_block(&lines, &mut pos, 0)?;
    if pos != lines.len() {
        return Err(format!("trailing content from line {}", pos + 1));
    }
    Ok(value)
}
