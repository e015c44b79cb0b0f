//! Plain-text instance format:
//!
//! ```text
//! n <count> offset <value>
//! <i> <j> <w>
//! ...
//! ```
//!
//! Indices are 0-based with `i <= j`, only nonzero entries are listed, and
//! lines starting with `#` are comments.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{QuboError, QuboInstance};

impl QuboInstance {
    /// Serializes to the text format. Floats use Rust's shortest round-trip
    /// representation, so reading back is value-exact.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n {} offset {}", self.n(), self.offset()).unwrap();
        for (i, j, w) in self.entries() {
            writeln!(out, "{i} {j} {w}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, QuboError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line, header) = lines.next().ok_or(QuboError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, offset) = match fields.as_slice() {
            ["n", n, "offset", offset] => (parse::<usize>(n, line)?, parse::<f64>(offset, line)?),
            _ => {
                return Err(QuboError::Parse {
                    line,
                    message: format!("expected `n <count> offset <value>`, got `{header}`"),
                })
            }
        };

        let mut q = QuboInstance::zeros(n);
        q.set_offset(offset)?;
        for (line, body) in lines {
            let fields: Vec<&str> = body.split_whitespace().collect();
            let [i, j, w] = fields.as_slice() else {
                return Err(QuboError::Parse {
                    line,
                    message: format!("expected `i j w`, got `{body}`"),
                });
            };
            let (i, j, w) = (
                parse::<usize>(i, line)?,
                parse::<usize>(j, line)?,
                parse::<f64>(w, line)?,
            );
            q.add_weight(i, j, w).map_err(|e| QuboError::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        Ok(q)
    }
}

fn parse<T: FromStr>(s: &str, line: usize) -> Result<T, QuboError>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| QuboError::Parse {
        line,
        message: format!("`{s}`: {e}"),
    })
}
