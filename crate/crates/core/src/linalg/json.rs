//! Matrix JSON wire format: `{"rows": n, "cols": m, "data": [[re, im], ...]}`,
//! row-major, doubles. serde_json prints shortest round-trip decimals, so the
//! format is bit-exact under write/read cycles.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Operator;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            data: self.data().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        let data: Vec<Complex64> = raw
            .data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Operator::new(raw.rows, raw.cols, data).map_err(D::Error::custom)
    }
}
