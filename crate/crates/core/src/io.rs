//! JSON literal formats and lossless float output.
//!
//! - matrix: array of rows, each entry `[re, im]`
//! - channel: `{"d_in", "d_out", "kraus": [matrix, ...]}`
//! - word: `{"n", "phi0": matrix, "xs"?: [matrix, ...], "ys"?: [matrix, ...]}`

use std::io::Write;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::channels::KrausChannel;
use crate::hqmm::ObservableWord;
use crate::operators::ComplexMatrix;
use crate::{Error, Result};

pub type MatrixLiteral = Vec<Vec<[f64; 2]>>;

pub fn matrix_from_literal(lit: &MatrixLiteral) -> Result<ComplexMatrix> {
    if lit.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse("matrix entries must be finite".into()));
    }
    let rows: Vec<Vec<Complex64>> = lit
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrix_to_literal(m: &ComplexMatrix) -> MatrixLiteral {
    m.to_rows().iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let lit: MatrixLiteral = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    matrix_from_literal(&lit)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelLiteral {
    d_in: usize,
    d_out: usize,
    kraus: Vec<MatrixLiteral>,
}

pub fn parse_channel(text: &str) -> Result<KrausChannel> {
    let lit: ChannelLiteral = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let kraus = lit.kraus.iter().map(matrix_from_literal).collect::<Result<Vec<_>>>()?;
    KrausChannel::new(kraus, lit.d_in, lit.d_out).map_err(|e| Error::Parse(e.to_string()))
}

pub fn channel_to_json(ch: &KrausChannel) -> Value {
    serde_json::json!({
        "d_in": ch.d_in(),
        "d_out": ch.d_out(),
        "kraus": ch.kraus().iter().map(literal_value).collect::<Vec<_>>(),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WordLiteral {
    n: usize,
    phi0: MatrixLiteral,
    #[serde(default)]
    xs: Option<Vec<MatrixLiteral>>,
    #[serde(default)]
    ys: Option<Vec<MatrixLiteral>>,
}

/// Initial density matrix and observable word from a word file. Omitted
/// `xs`/`ys` default to identities of the given hidden/observed dimensions.
#[derive(Debug, Clone)]
pub struct WordFile {
    pub phi0: ComplexMatrix,
    pub word: ObservableWord,
}

pub fn parse_word(text: &str, hidden_dim: usize, observed_dim: usize) -> Result<WordFile> {
    let lit: WordLiteral = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let phi0 = matrix_from_literal(&lit.phi0)?;
    let list = |mats: &Option<Vec<MatrixLiteral>>, dim: usize, what: &str| -> Result<Vec<ComplexMatrix>> {
        match mats {
            None => Ok(vec![ComplexMatrix::identity(dim); lit.n]),
            Some(ms) if ms.len() != lit.n => {
                Err(Error::Parse(format!("{what} has {} entries but n = {}", ms.len(), lit.n)))
            }
            Some(ms) => ms.iter().map(matrix_from_literal).collect(),
        }
    };
    let xs = list(&lit.xs, hidden_dim, "xs")?;
    let ys = list(&lit.ys, observed_dim, "ys")?;
    let word = ObservableWord::new(xs, ys).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(WordFile { phi0, word })
}

pub fn literal_value(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|z| complex_value(*z)).collect()))
            .collect(),
    )
}

pub fn complex_value(z: Complex64) -> Value {
    Value::Array(vec![float_value(z.re), float_value(z.im)])
}

/// Finite floats as numbers; non-finite as `"inf"`, `"-inf"` or `"nan"`.
pub fn float_value(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None if x.is_nan() => Value::String("nan".into()),
        None if x > 0.0 => Value::String("inf".into()),
        None => Value::String("-inf".into()),
    }
}

/// Writes every `f64` with 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn to_json_string(v: &Value) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    serde::Serialize::serialize(v, &mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}
