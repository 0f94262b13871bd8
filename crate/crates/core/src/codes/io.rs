//! Text format for codes.
//!
//! ```text
//! #permcode v1 metric=kendall n=3 D=2 method=parity seed=none
//! 1 2 3
//! 2 3 1
//! 3 1 2
//! ```
//!
//! Blank lines are ignored. Reading checks the shape of every word but not
//! the minimum distance.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use super::{Code, Method, Provenance};
use crate::error::{Error, FormatProblem, Result};
use crate::metrics::MetricKind;
use crate::perm::Permutation;

const MAGIC: &str = "#permcode";
const VERSION: &str = "v1";

pub fn header_line(code: &Code) -> String {
    let seed = code
        .provenance
        .seed
        .map_or_else(|| "none".to_string(), |s| s.to_string());
    format!(
        "{MAGIC} {VERSION} metric={} n={} D={} method={} seed={seed}",
        code.metric, code.n, code.design_distance, code.provenance.method
    )
}

pub fn write_code<W: Write>(code: &Code, mut sink: W) -> Result<()> {
    writeln!(sink, "{}", header_line(code))?;
    for w in &code.words {
        writeln!(sink, "{w}")?;
    }
    sink.flush()?;
    Ok(())
}

pub fn code_to_string(code: &Code) -> String {
    let mut buf = Vec::new();
    write_code(code, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::CodeFormat {
        line: 1,
        problem: FormatProblem::MalformedHeader(msg.into()),
    }
}

struct Header {
    metric: MetricKind,
    n: usize,
    design_distance: u32,
    provenance: Provenance,
}

fn parse_header(line: &str) -> Result<Header> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some(MAGIC) {
        return Err(malformed(format!("expected {MAGIC:?} at start of file")));
    }
    match tokens.next() {
        Some(VERSION) => {}
        other => return Err(malformed(format!("unsupported version {other:?}"))),
    }
    let (mut metric, mut n, mut d, mut method, mut seed) = (None, None, None, None, None);
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| malformed(format!("expected key=value, got {tok:?}")))?;
        let bad = |what: &str| malformed(format!("bad {what} {value:?}"));
        let slot_taken = match key {
            "metric" => metric.replace(value.parse::<MetricKind>().map_err(|_| bad("metric"))?).is_some(),
            "n" => n.replace(value.parse::<usize>().map_err(|_| bad("length"))?).is_some(),
            "D" => d.replace(value.parse::<u32>().map_err(|_| bad("distance"))?).is_some(),
            "method" => method.replace(value.parse::<Method>().map_err(|_| bad("method"))?).is_some(),
            "seed" => {
                let parsed = match value {
                    "none" => None,
                    s => Some(s.parse::<u64>().map_err(|_| bad("seed"))?),
                };
                seed.replace(parsed).is_some()
            }
            other => return Err(malformed(format!("unknown key {other:?}"))),
        };
        if slot_taken {
            return Err(malformed(format!("repeated key {key:?}")));
        }
    }
    let missing = |k: &str| malformed(format!("missing {k}"));
    Ok(Header {
        metric: metric.ok_or_else(|| missing("metric"))?,
        n: n.ok_or_else(|| missing("n"))?,
        design_distance: d.ok_or_else(|| missing("D"))?,
        provenance: Provenance {
            method: method.ok_or_else(|| missing("method"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
        },
    })
}

pub fn read_code<R: BufRead>(source: R) -> Result<Code> {
    let mut lines = source.lines();
    let first = lines.next().ok_or_else(|| malformed("empty file"))??;
    let header = parse_header(&first)?;
    let mut words = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let lineno = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let word: Permutation = line.parse().map_err(|e: Error| Error::CodeFormat {
            line: lineno,
            problem: FormatProblem::InvalidWord(e.to_string()),
        })?;
        if word.len() != header.n {
            return Err(Error::CodeFormat {
                line: lineno,
                problem: FormatProblem::InvalidWord(format!(
                    "length {} but header says n={}",
                    word.len(),
                    header.n
                )),
            });
        }
        if !seen.insert(word) {
            return Err(Error::CodeFormat {
                line: lineno,
                problem: FormatProblem::DuplicateWord,
            });
        }
        words.push(word);
    }
    Code::new(
        header.metric,
        header.n,
        header.design_distance,
        words,
        header.provenance,
    )
    .map_err(|e| malformed(e.to_string()))
}

pub fn code_from_str(s: &str) -> Result<Code> {
    read_code(s.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{
        construct_parity_kendall, construct_random_greedy, verify_min_distance, MinDistance, VerifyMode,
    };

    #[test]
    fn round_trip() {
        let code = construct_random_greedy(5, 3, MetricKind::Cayley, 12, 2).unwrap();
        let text = code_to_string(&code);
        assert!(text.starts_with("#permcode v1 metric=cayley n=5 D=3 method=random seed=12\n"));
        assert_eq!(code_from_str(&text).unwrap(), code);

        let parity = construct_parity_kendall(3).unwrap();
        let text = code_to_string(&parity);
        assert_eq!(
            text,
            "#permcode v1 metric=kendall n=3 D=2 method=parity seed=none\n1 2 3\n2 3 1\n3 1 2\n"
        );
        assert_eq!(code_from_str(&text).unwrap(), parity);
    }

    #[test]
    fn blank_lines_ignored() {
        let text = "#permcode v1 metric=kendall n=3 D=2 method=parity seed=none\n\n1 2 3\n\n2 3 1\n";
        assert_eq!(code_from_str(text).unwrap().len(), 2);
    }

    #[test]
    fn duplicate_word() {
        let text = "#permcode v1 metric=cayley n=3 D=2 method=greedy seed=none\n1 2 3\n2 1 3\n1 2 3\n";
        let err = code_from_str(text).unwrap_err();
        assert_eq!(
            err,
            Error::CodeFormat {
                line: 4,
                problem: FormatProblem::DuplicateWord
            }
        );
        assert_eq!(err.kind(), "duplicate-word");
    }

    #[test]
    fn bad_words() {
        let base = "#permcode v1 metric=cayley n=3 D=2 method=greedy seed=none\n";
        for body in ["1 1 2\n", "1 2\n", "1 2 3 4\n", "a b c\n"] {
            let err = code_from_str(&format!("{base}{body}")).unwrap_err();
            assert_eq!(err.kind(), "invalid-word", "{body:?}");
        }
    }

    #[test]
    fn malformed_headers() {
        let cases = [
            "",
            "1 2 3\n",
            "#permcode v2 metric=cayley n=3 D=2 method=greedy seed=none\n",
            "#permcode v1 metric=ulam n=3 D=2 method=greedy seed=none\n",
            "#permcode v1 metric=cayley n=3 method=greedy seed=none\n",
            "#permcode v1 metric=cayley n=3 D=2 method=greedy seed=none color=red\n",
            "#permcode v1 metric=cayley n=3 n=3 D=2 method=greedy seed=none\n",
            "#permcode v1 metric=cayley n=3 D=2 method=clique seed=none\n",
            "#permcode v1 metric=cayley n=3 D=2 method=greedy seed=x\n",
            "#permcode v1 metric=cayley n=13 D=2 method=greedy seed=none\n",
        ];
        for text in cases {
            let err = code_from_str(text).unwrap_err();
            assert_eq!(err.kind(), "malformed-header", "{text:?}");
        }
    }

    #[test]
    fn parsing_does_not_verify() {
        let text = "#permcode v1 metric=cayley n=3 D=3 method=greedy seed=none\n1 2 3\n2 3 1\n";
        let code = code_from_str(text).unwrap();
        let r = verify_min_distance(&code, VerifyMode::Exhaustive, 10).unwrap();
        assert_eq!(r.min_distance, MinDistance::Finite(2));
        assert!(!r.meets_design);
    }
}
