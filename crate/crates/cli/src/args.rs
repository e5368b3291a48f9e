//! Value parsers for numeric arguments. Every component may be an
//! arithmetic expression such as `1+sqrt(3)` or `pi/2`.

pub fn number(s: &str) -> Result<f64, String> {
    let x = meval::eval_str(s.trim()).map_err(|e| format!("cannot evaluate {s:?}: {e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{s:?} is not a finite number"))
    }
}

/// Top-level commas only, so that `max(1,2),3` stays two items.
fn split_list(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

pub fn list(s: &str) -> Result<Vec<f64>, String> {
    split_list(s).into_iter().map(number).collect()
}

/// A whole comma-separated list as one argument value.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberList(pub Vec<f64>);

pub fn number_list(s: &str) -> Result<NumberList, String> {
    list(s).map(NumberList)
}

fn fixed<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v = list(s)?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

pub fn triple(s: &str) -> Result<[f64; 3], String> {
    fixed::<3>(s)
}

pub fn pair(s: &str) -> Result<[f64; 2], String> {
    fixed::<2>(s)
}
