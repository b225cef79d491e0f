//! Symbol documents and complex literals.

use std::io::Read;
use std::path::Path;

use rational_toeplitz::{Complex64, Error, Poly, RationalSymbol, Result, Tolerances};
use serde::{Deserialize, Serialize, Serializer};

use crate::output::Pair;

/// One polynomial, either by ascending coefficients or by roots and a
/// leading coefficient (default 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolySpec {
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "inline_list")]
    pub coeffs: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "inline_list")]
    pub roots: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "inline_one")]
    pub leading: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    #[serde(rename = "R")]
    pub numerator: PolySpec,
    #[serde(rename = "S")]
    pub denominator: PolySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_circle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_coprime: Option<f64>,
}

fn inline_list<S: Serializer>(v: &Option<Vec<[f64; 2]>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<Pair> = v.iter().flatten().map(|p| Pair(Complex64::new(p[0], p[1]))).collect();
    pairs.serialize(s)
}

fn inline_one<S: Serializer>(v: &Option<[f64; 2]>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.map(|p| Pair(Complex64::new(p[0], p[1]))).serialize(s)
}

fn complex(pair: &[f64; 2], what: &str) -> Result<Complex64> {
    if pair.iter().all(|x| x.is_finite()) {
        Ok(Complex64::new(pair[0], pair[1]))
    } else {
        Err(Error::InvalidInput(format!("{what}: non-finite number")))
    }
}

impl PolySpec {
    pub fn from_poly(p: &Poly) -> Self {
        PolySpec {
            coeffs: Some(p.coeffs().iter().map(|c| [c.re, c.im]).collect()),
            roots: None,
            leading: None,
        }
    }

    pub fn to_poly(&self, name: &str) -> Result<Poly> {
        match (&self.coeffs, &self.roots) {
            (Some(_), Some(_)) => Err(Error::InvalidInput(format!("{name}: give either coeffs or roots, not both"))),
            (None, None) => Err(Error::InvalidInput(format!("{name}: needs coeffs or roots"))),
            (Some(c), None) => {
                if self.leading.is_some() {
                    return Err(Error::InvalidInput(format!("{name}: leading only goes with roots")));
                }
                if c.is_empty() {
                    return Err(Error::InvalidInput(format!("{name}: empty coefficient list")));
                }
                let coeffs = c.iter().map(|z| complex(z, name)).collect::<Result<Vec<_>>>()?;
                Ok(Poly::new(coeffs))
            }
            (None, Some(r)) => {
                if r.is_empty() {
                    return Err(Error::InvalidInput(format!("{name}: empty root list")));
                }
                let roots = r.iter().map(|z| complex(z, name)).collect::<Result<Vec<_>>>()?;
                let leading = complex(&self.leading.unwrap_or([1.0, 0.0]), name)?;
                Ok(Poly::from_root_list(&roots, leading))
            }
        }
    }
}

fn positive(x: f64, name: &str) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {x}")))
    }
}

impl SymbolSpec {
    pub fn from_symbol(sym: &RationalSymbol) -> Self {
        let tol = sym.tolerances();
        SymbolSpec {
            numerator: PolySpec::from_poly(sym.numerator()),
            denominator: PolySpec::from_poly(sym.denominator()),
            eps_circle: Some(tol.eps_circle),
            delta_coprime: Some(tol.delta_coprime),
        }
    }

    /// Builds the symbol; `eps_override` wins over the document's value.
    pub fn build(&self, eps_override: Option<f64>) -> Result<RationalSymbol> {
        let mut tol = Tolerances::default();
        if let Some(e) = eps_override.or(self.eps_circle) {
            tol.eps_circle = positive(e, "eps_circle")?;
        }
        if let Some(d) = self.delta_coprime {
            tol.delta_coprime = positive(d, "delta_coprime")?;
        }
        let r = self.numerator.to_poly("R")?;
        let s = self.denominator.to_poly("S")?;
        RationalSymbol::with_tolerances(r, s, tol)
    }
}

pub fn parse_symbol(text: &str) -> Result<SymbolSpec> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("symbol document: {e}")))
}

/// Reads a symbol document from a file, or from stdin for `-`.
pub fn read_symbol(path: &Path) -> Result<SymbolSpec> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    parse_symbol(&text)
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`. The imaginary coefficient may be
/// omitted (`i`, `-i`, `2+i`); exponents such as `1e-3-2.5e2i` are fine.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t = s.trim();
    let bad = || format!("cannot parse complex number {s:?}; expected a, bi, a+bi or a-bi");
    let number = |x: &str| -> std::result::Result<f64, String> {
        let v: f64 = match x {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => x.parse().map_err(|_| bad())?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Complex64::new(v, 0.0)),
            _ => Err(bad()),
        };
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = &body[..k];
            if re.is_empty() || re == "+" || re == "-" {
                return Err(bad());
            }
            let re = number(re)?;
            Ok(Complex64::new(re, number(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, number(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn literals() {
        assert_eq!(parse_complex("1.5"), Ok(c(1.5, 0.0)));
        assert_eq!(parse_complex("-2"), Ok(c(-2.0, 0.0)));
        assert_eq!(parse_complex("3i"), Ok(c(0.0, 3.0)));
        assert_eq!(parse_complex("-0.5i"), Ok(c(0.0, -0.5)));
        assert_eq!(parse_complex("1+2i"), Ok(c(1.0, 2.0)));
        assert_eq!(parse_complex("1-2i"), Ok(c(1.0, -2.0)));
        assert_eq!(parse_complex("-1e-3+2.5e2i"), Ok(c(-1e-3, 250.0)));
        assert_eq!(parse_complex("1e+2-1E-1i"), Ok(c(100.0, -0.1)));
        assert_eq!(parse_complex("i"), Ok(c(0.0, 1.0)));
        assert_eq!(parse_complex("2-i"), Ok(c(2.0, -1.0)));
        assert_eq!(parse_complex(" 0.25 "), Ok(c(0.25, 0.0)));
    }

    #[test]
    fn bad_literals() {
        for s in ["", "1+", "abc", "1+2j", "inf", "nan", "1+infi", "+i+", "1+2", "i1", "--1"] {
            assert!(parse_complex(s).is_err(), "{s:?}");
        }
    }

    #[test]
    fn coefficient_and_root_forms_agree() {
        let a = parse_symbol(r#"{"R":{"coeffs":[[-2,0],[1,0]]},"S":{"roots":[[3,0]],"leading":[2,0]}}"#).unwrap();
        let sym = a.build(None).unwrap();
        assert_eq!(sym.numerator().coeffs(), &[c(-2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(sym.denominator().coeffs(), &[c(-6.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn malformed_documents() {
        for doc in [
            r#"{"R":{"coeffs":[[1,0]],"roots":[[1,0]]},"S":{"coeffs":[[1,0]]}}"#,
            r#"{"R":{},"S":{"coeffs":[[1,0]]}}"#,
            r#"{"R":{"coeffs":[]},"S":{"coeffs":[[1,0]]}}"#,
            r#"{"R":{"roots":[]},"S":{"coeffs":[[1,0]]}}"#,
            r#"{"R":{"coeffs":[[1,0]],"leading":[1,0]},"S":{"coeffs":[[1,0]]}}"#,
            r#"{"R":{"coeffs":[[1,0]]},"S":{"coeffs":[[1,0]]},"extra":1}"#,
            r#"{"R":{"coeffs":[[1]]},"S":{"coeffs":[[1,0]]}}"#,
            r#"{"R":{"coeffs":[[1,0]]},"S":{"coeffs":[[1,0]]},"eps_circle":-1}"#,
            r#"{"R":{"coeffs":[[0,0]]},"S":{"coeffs":[[1,0]]}}"#,
        ] {
            let res = parse_symbol(doc).and_then(|s| s.build(None));
            assert!(res.is_err(), "{doc}");
        }
    }

    #[test]
    fn spec_round_trip() {
        let spec = parse_symbol(r#"{"R":{"coeffs":[[0.1,-0.3],[1,0]]},"S":{"coeffs":[[0,0],[1,0]]}}"#).unwrap();
        let sym = spec.build(Some(1e-6)).unwrap();
        let back = SymbolSpec::from_symbol(&sym);
        assert_eq!(back.eps_circle, Some(1e-6));
        let again = parse_symbol(&serde_json::to_string(&back).unwrap()).unwrap();
        assert_eq!(again, back);
        assert_eq!(again.build(None).unwrap().numerator(), sym.numerator());
    }
}
