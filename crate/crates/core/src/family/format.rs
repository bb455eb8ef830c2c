//! Line-oriented text form of a family.
//!
//! ```text
//! selection-family v1
//! kind ssf
//! c 3
//! label_space 64
//! encoding direct
//! seed 77
//! size 12
//! certified true
//! 1 5 9
//! ...
//! ```
//! One line per set follows the header, labels ascending; an empty set is an
//! empty line.

use std::fmt::Write as _;
use std::path::Path;

use super::{FamilyKind, LabelEncoding, SelectionFamily};
use crate::{Error, Result};

const MAGIC: &str = "selection-family v1";

impl SelectionFamily {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(MAGIC);
        out.push('\n');
        match self.kind {
            FamilyKind::Ssf { c } => {
                let _ = writeln!(out, "kind ssf\nc {c}");
            }
            FamilyKind::Selector { k, m } => {
                let _ = writeln!(out, "kind selector\nk {k} m {m}");
            }
        }
        let _ = writeln!(out, "label_space {}", self.label_space);
        match self.encoding {
            LabelEncoding::Direct => out.push_str("encoding direct\n"),
            LabelEncoding::RowMajorPairs { base } => {
                let _ = writeln!(out, "encoding row-major-pairs {base}");
            }
        }
        let _ = writeln!(
            out,
            "seed {}\nsize {}\ncertified {}",
            self.seed,
            self.len(),
            self.certified
        );
        for j in 0..self.len() {
            let set = self.set(j);
            let mut first = true;
            for e in set {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SelectionFamily> {
        let mut lines = text.split('\n');
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))
        };
        if next("magic")? != MAGIC {
            return Err(Error::Parse("not a selection-family v1 document".into()));
        }
        let kind = match next("kind")? {
            "kind ssf" => {
                let c = field(next("c")?, "c")?;
                FamilyKind::Ssf { c }
            }
            "kind selector" => {
                let line = next("k m")?;
                let parts: Vec<&str> = line.split(' ').collect();
                if parts.len() != 4 || parts[0] != "k" || parts[2] != "m" {
                    return Err(Error::Parse(format!("bad selector parameters: {line:?}")));
                }
                FamilyKind::Selector {
                    k: num(parts[1])?,
                    m: num(parts[3])?,
                }
            }
            other => return Err(Error::Parse(format!("unknown kind line {other:?}"))),
        };
        let label_space = field(next("label_space")?, "label_space")?;
        let encoding = match next("encoding")? {
            "encoding direct" => LabelEncoding::Direct,
            line => match line.strip_prefix("encoding row-major-pairs ") {
                Some(b) => LabelEncoding::RowMajorPairs { base: num(b)? },
                None => return Err(Error::Parse(format!("unknown encoding {line:?}"))),
            },
        };
        let seed = field(next("seed")?, "seed")?;
        let size = field(next("size")?, "size")? as usize;
        let certified = match next("certified")? {
            "certified true" => true,
            "certified false" => false,
            other => return Err(Error::Parse(format!("bad certified line {other:?}"))),
        };
        let mut sets = Vec::with_capacity(size);
        for j in 0..size {
            let line = next("set")?;
            let mut set = Vec::new();
            for tok in line.split_whitespace() {
                let e = num(tok)?;
                if e == 0 || e > label_space {
                    return Err(Error::Parse(format!(
                        "set {j}: label {e} outside [1..{label_space}]"
                    )));
                }
                if set.last().is_some_and(|&p| p >= e) {
                    return Err(Error::Parse(format!(
                        "set {j}: labels not strictly ascending"
                    )));
                }
                set.push(e);
            }
            sets.push(set);
        }
        match next("end") {
            Ok("") => {}
            _ => return Err(Error::Parse(format!("expected exactly {size} sets"))),
        }
        if lines.next().is_some() {
            return Err(Error::Parse(format!("expected exactly {size} sets")));
        }
        let mut f = SelectionFamily::from_sets(kind, label_space, seed, encoding, sets);
        f.set_certified(certified);
        Ok(f)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<SelectionFamily> {
        SelectionFamily::from_text(&std::fs::read_to_string(path)?)
    }
}

fn num(s: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("expected an integer, got {s:?}")))
}

fn field(line: &str, key: &str) -> Result<u64> {
    match line.split_once(' ') {
        Some((k, v)) if k == key => num(v),
        _ => Err(Error::Parse(format!("expected `{key} <n>`, got {line:?}"))),
    }
}
