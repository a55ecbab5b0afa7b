//! Machine-record encoding. Records are `serde_json::Value`s whose objects
//! keep keys sorted, so rendering is byte-stable.

use expsum_core::exact::Rational;
use expsum_core::hodge::PolygonPoint;
use expsum_core::oracle::Cyclotomic;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub fn rational(r: &Rational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn rationals<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(rs.into_iter().map(rational).collect())
}

/// Integers that fit in `i64` stay numbers, anything larger becomes a decimal string.
pub fn bigint(b: &BigInt) -> Value {
    b.to_i64().map_or_else(|| Value::String(b.to_string()), Value::from)
}

pub fn cyclotomic(c: &Cyclotomic) -> Value {
    json!({ "p": c.p(), "coords": rationals(c.coords()) })
}

pub fn polygon(points: &[PolygonPoint]) -> Value {
    Value::Array(points.iter().map(|pt| json!([pt.x, rational(&pt.y)])).collect())
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("records are plain JSON");
    s.push('\n');
    s
}

/// `3/2`, or `3` for integers.
pub fn rational_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn list_text<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn polygon_text(points: &[PolygonPoint]) -> String {
    list_text(points.iter().map(|p| format!("({},{})", p.x, rational_text(&p.y))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use expsum_core::exact::rational as q;

    #[test]
    fn encodings() {
        assert_eq!(rational(&q(-3, 6)), json!("-1/2"));
        assert_eq!(rational(&q(4, 1)), json!("4/1"));
        assert_eq!(rational_text(&q(4, 1)), "4");
        assert_eq!(bigint(&BigInt::from(7)), json!(7));
        assert_eq!(bigint(&(BigInt::from(1u64) << 80)), json!("1208925819614629174706176"));
        let c = Cyclotomic::from_bins(3, &[0i64, 1, 0]);
        assert_eq!(cyclotomic(&c), json!({"coords": ["0/1", "1/1"], "p": 3}));
    }

    #[test]
    fn keys_are_sorted() {
        let v = json!({"b": 1, "a": 2});
        assert!(render(&v).find("\"a\"") < render(&v).find("\"b\""));
    }
}
