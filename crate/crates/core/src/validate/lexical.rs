use once_cell::sync::Lazy;
use regex::Regex;

use crate::rdf::ns;

static BOOLEAN: Lazy<Regex> = Lazy::new(|| Regex::new(r"^(true|false|1|0)$").unwrap());
static INTEGER: Lazy<Regex> = Lazy::new(|| Regex::new(r"^[+-]?[0-9]+$").unwrap());
static DECIMAL: Lazy<Regex> = Lazy::new(|| Regex::new(r"^[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)$").unwrap());
static DOUBLE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"^([+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?|[+-]?INF|NaN)$").unwrap());
const DATE: &str = r"(-?[0-9]{4,})-([0-9]{2})-([0-9]{2})";
const TIMEZONE: &str = r"(Z|[+-]((0[0-9]|1[0-3]):[0-5][0-9]|14:00))?";
static DATE_RE: Lazy<Regex> = Lazy::new(|| Regex::new(&format!("^{DATE}{TIMEZONE}$")).unwrap());
static DATE_TIME_RE: Lazy<Regex> = Lazy::new(|| {
    Regex::new(&format!(
        r"^{DATE}T(([01][0-9]|2[0-3]):[0-5][0-9]:[0-5][0-9](\.[0-9]+)?|24:00:00(\.0+)?){TIMEZONE}$"
    ))
    .unwrap()
});

/// Whether `lexical` is in the lexical space of `datatype`, or `None` for
/// datatypes whose lexical space is not checked.
pub fn lexically_valid(datatype: &str, lexical: &str) -> Option<bool> {
    let local = datatype.strip_prefix(ns::XSD)?;
    let valid = match local {
        "boolean" => BOOLEAN.is_match(lexical),
        "decimal" => DECIMAL.is_match(lexical),
        "float" | "double" => DOUBLE.is_match(lexical),
        "date" => valid_date(&DATE_RE, lexical),
        "dateTime" => valid_date(&DATE_TIME_RE, lexical),
        "anyURI" => !lexical.chars().any(|c| c.is_whitespace() || c.is_control() || "<>\"{}|\\^`".contains(c)),
        _ => return integer_in_range(local, lexical),
    };
    Some(valid)
}

fn integer_in_range(local: &str, lexical: &str) -> Option<bool> {
    let (min, max): (i128, i128) = match local {
        "integer" => (i128::MIN, i128::MAX),
        "long" => (i64::MIN.into(), i64::MAX.into()),
        "int" => (i32::MIN.into(), i32::MAX.into()),
        "short" => (i16::MIN.into(), i16::MAX.into()),
        "byte" => (i8::MIN.into(), i8::MAX.into()),
        "nonNegativeInteger" => (0, i128::MAX),
        "positiveInteger" => (1, i128::MAX),
        "nonPositiveInteger" => (i128::MIN, 0),
        "negativeInteger" => (i128::MIN, -1),
        "unsignedLong" => (0, u64::MAX.into()),
        "unsignedInt" => (0, u32::MAX.into()),
        "unsignedShort" => (0, u16::MAX.into()),
        "unsignedByte" => (0, u8::MAX.into()),
        _ => return None,
    };
    if !INTEGER.is_match(lexical) {
        return Some(false);
    }
    let value = match lexical.strip_prefix('+').unwrap_or(lexical).parse::<i128>() {
        Ok(v) => v,
        // beyond i128: only the unbounded directions can hold it
        Err(_) if lexical.starts_with('-') => return Some(min == i128::MIN),
        Err(_) => return Some(max == i128::MAX),
    };
    Some(value >= min && value <= max)
}

fn valid_date(re: &Regex, lexical: &str) -> bool {
    let Some(caps) = re.captures(lexical) else {
        return false;
    };
    let year: i64 = match caps[1].parse() {
        Ok(y) => y,
        Err(_) => return false,
    };
    if caps[1].trim_start_matches('-').len() > 4 && caps[1].trim_start_matches('-').starts_with('0') {
        return false;
    }
    let month: u32 = caps[2].parse().unwrap_or(0);
    let day: u32 = caps[3].parse().unwrap_or(0);
    let leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    let days = match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if leap => 29,
        2 => 28,
        _ => return false,
    };
    (1..=days).contains(&day)
}
