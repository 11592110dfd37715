//! JSON emission with lossless floats. `serde_json` drops non-finite values
//! to null and prints shortest round-trip decimals; reports instead want
//! 17-significant-digit scientific notation and explicit "inf" markers.

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use std::io;

struct Sci;

impl Formatter for Sci {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{:.16e}", value)
    }
}

/// Finite values stay numbers; infinities become the strings "inf"/"-inf"
/// since JSON has no literal for them.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x > 0.0 {
        Value::from("inf")
    } else if x < 0.0 {
        Value::from("-inf")
    } else {
        Value::from("nan")
    }
}

pub fn vec_num(xs: &[f64]) -> Value {
    Value::from(xs.iter().map(|&x| num(x)).collect::<Vec<_>>())
}

pub fn to_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sci);
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("json output is utf8")
}
