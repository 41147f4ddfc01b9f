//! The facet-list file format.
//!
//! ```text
//! # comments run to end of line
//! n=6
//! 1 3 4
//! 1 2 5
//! ```
//!
//! One facet per line, vertices separated by whitespace. Without an `n=`
//! header the universe is `[max label]`.

use std::fmt;

use agstar::{Face, SimplicialComplex, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexFile {
    pub complex: SimplicialComplex,
    /// Facet lines that were not inclusion-maximal or repeated.
    pub dropped: usize,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut n: Option<(usize, usize)> = None;
        let mut raw: Vec<(usize, Face)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix("n=").or_else(|| body.strip_prefix("n =")) {
                if n.is_some() {
                    return Err(err(lineno, "duplicate n= header"));
                }
                if !raw.is_empty() {
                    return Err(err(lineno, "n= header must come before the facets"));
                }
                let v: usize = rest.trim().parse().map_err(|_| err(lineno, format!("bad header {body:?}")))?;
                n = Some((v, lineno));
                continue;
            }
            let mut face = Face::EMPTY;
            for tok in body.split_whitespace() {
                let v: VertexId = tok
                    .parse()
                    .map_err(|_| err(lineno, format!("expected a positive integer, found {tok:?}")))?;
                if v == 0 || v as usize > agstar::face::MAX_VERTICES {
                    return Err(err(
                        lineno,
                        format!("vertex {v} outside 1..={}", agstar::face::MAX_VERTICES),
                    ));
                }
                if face.contains(v) {
                    return Err(err(lineno, format!("vertex {v} repeated")));
                }
                face = face.with(v);
            }
            raw.push((lineno, face));
        }
        let max_label = raw.iter().map(|(_, f)| f.max_vertex() as usize).max().unwrap_or(0);
        let (n, header_line) = n.unwrap_or((max_label, 0));
        if n == 0 || n > agstar::face::MAX_VERTICES {
            return Err(err(header_line, format!("vertex universe size {n} unsupported (need 1..=64)")));
        }
        if let Some((lineno, f)) = raw.iter().find(|(_, f)| f.max_vertex() as usize > n) {
            return Err(err(*lineno, format!("vertex {} exceeds n={n}", f.max_vertex())));
        }
        let count = raw.len();
        let complex = SimplicialComplex::from_facets(n, raw.into_iter().map(|e| e.1))
            .map_err(|e| err(0, e.to_string()))?;
        let kept = if complex.is_empty_face_only() { 0 } else { complex.facets().len() };
        Ok(ComplexFile { complex, dropped: count - kept })
    }

    pub fn from_complex(complex: SimplicialComplex) -> Self {
        ComplexFile { complex, dropped: 0 }
    }

    pub fn facet_lists(&self) -> Vec<Vec<VertexId>> {
        facet_lists(&self.complex)
    }
}

pub fn facet_lists(complex: &SimplicialComplex) -> Vec<Vec<VertexId>> {
    if complex.is_empty_face_only() {
        return Vec::new();
    }
    complex.facets().iter().map(|f| f.vertices().collect()).collect()
}

impl fmt::Display for ComplexFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.complex.n())?;
        for facet in self.facet_lists() {
            let words: Vec<String> = facet.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", words.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments_and_header() {
        let f = ComplexFile::parse("# sigma\nn=6\n1 3 4 # first\n\n1 2 5\n1 2\n").unwrap();
        assert_eq!(f.complex.n(), 6);
        assert_eq!(f.complex.facets().len(), 2);
        assert_eq!(f.dropped, 1);
    }

    #[test]
    fn n_defaults_to_max_label() {
        let f = ComplexFile::parse("1 2\n2 5\n").unwrap();
        assert_eq!(f.complex.n(), 5);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(ComplexFile::parse("1 2\n1 x\n").unwrap_err().line, 2);
        assert_eq!(ComplexFile::parse("n=3\n1 4\n").unwrap_err().line, 2);
        assert_eq!(ComplexFile::parse("1 0\n").unwrap_err().line, 1);
        assert_eq!(ComplexFile::parse("1 1\n").unwrap_err().line, 1);
        assert_eq!(ComplexFile::parse("1 2\nn=3\n").unwrap_err().line, 2);
        assert!(ComplexFile::parse("").is_err());
    }

    #[test]
    fn empty_face_complex_needs_header() {
        let f = ComplexFile::parse("n=2\n").unwrap();
        assert!(f.complex.is_empty_face_only());
        assert_eq!(ComplexFile::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn round_trip() {
        let f = ComplexFile::parse("3 4 5\n1 2 3\n").unwrap();
        let text = f.to_string();
        assert_eq!(text, "n=5\n1 2 3\n3 4 5\n");
        assert_eq!(ComplexFile::parse(&text).unwrap(), f);
    }
}
