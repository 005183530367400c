//! Cell-based architecture search over tabulated accuracies.
//!
//! A real vector in `[-100, 100]^6` is cut into five bands per component,
//! giving a quinary code with one operation per cell edge. Fitness is the
//! negated accuracy read from a lookup table covering all 5⁶ codes.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::Bounds;
use crate::problems::Problem;
use crate::rng::{RandomSource, RngStream};

pub const EDGES: usize = 6;
pub const SYMBOLS: u8 = 5;
/// 5⁶ codes.
pub const SPACE_SIZE: usize = 15_625;

/// Band thresholds of the transfer function.
const THRESHOLDS: [f64; 4] = [-60.0, -20.0, 20.0, 60.0];

/// Real-to-quinary transfer: 0 below −60, 1 below −20, 2 below 20, 3 below
/// 60, 4 otherwise (strict comparisons).
pub fn transfer(x: f64) -> u8 {
    THRESHOLDS.iter().take_while(|&&t| !(x < t)).count() as u8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellOp {
    Zeroize,
    SkipConnect,
    Conv1x1,
    Conv3x3,
    AvgPool3x3,
}

impl CellOp {
    pub fn from_symbol(s: u8) -> Option<Self> {
        Some(match s {
            0 => CellOp::Zeroize,
            1 => CellOp::SkipConnect,
            2 => CellOp::Conv1x1,
            3 => CellOp::Conv3x3,
            4 => CellOp::AvgPool3x3,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            CellOp::Zeroize => "none",
            CellOp::SkipConnect => "skip_connect",
            CellOp::Conv1x1 => "nor_conv_1x1",
            CellOp::Conv3x3 => "nor_conv_3x3",
            CellOp::AvgPool3x3 => "avg_pool_3x3",
        }
    }
}

/// Six quinary symbols, one per cell edge. Ordering is lexicographic, which
/// coincides with the base-5 index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArchCode([u8; EDGES]);

impl ArchCode {
    pub fn new(symbols: [u8; EDGES]) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|&&s| s >= SYMBOLS) {
            return Err(Error::Domain(format!("code symbol {s} outside 0..=4")));
        }
        Ok(Self(symbols))
    }

    pub fn symbols(&self) -> [u8; EDGES] {
        self.0
    }

    /// Base-5 index with the first edge most significant.
    pub fn index(&self) -> usize {
        self.0
            .iter()
            .fold(0, |acc, &s| acc * SYMBOLS as usize + s as usize)
    }

    pub fn from_index(mut index: usize) -> Self {
        assert!(index < SPACE_SIZE, "code index {index} out of range");
        let mut s = [0u8; EDGES];
        for slot in s.iter_mut().rev() {
            *slot = (index % SYMBOLS as usize) as u8;
            index /= SYMBOLS as usize;
        }
        Self(s)
    }

    pub fn all() -> impl Iterator<Item = ArchCode> {
        (0..SPACE_SIZE).map(ArchCode::from_index)
    }

    pub fn ops(&self) -> [CellOp; EDGES] {
        self.0
            .map(|s| CellOp::from_symbol(s).expect("validated symbol"))
    }

    /// Centre of each symbol's band, useful as a canonical real encoding.
    pub fn midpoint(&self) -> Vec<f64> {
        const MIDS: [f64; 5] = [-80.0, -40.0, 0.0, 40.0, 80.0];
        self.0.iter().map(|&s| MIDS[s as usize]).collect()
    }
}

impl fmt::Display for ArchCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for ArchCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != EDGES || !bytes.iter().all(|b| (b'0'..b'0' + SYMBOLS).contains(b)) {
            return Err(Error::Parse {
                line: None,
                msg: format!("'{s}' is not six digits in 0-4"),
            });
        }
        let mut out = [0u8; EDGES];
        for (o, b) in out.iter_mut().zip(bytes) {
            *o = b - b'0';
        }
        Ok(Self(out))
    }
}

/// Component-wise transfer of a 6-vector.
pub fn decode(x: &[f64]) -> Result<ArchCode> {
    if x.len() != EDGES {
        return Err(Error::Dimension {
            expected: EDGES,
            actual: x.len(),
        });
    }
    let mut s = [0u8; EDGES];
    for (o, &v) in s.iter_mut().zip(x) {
        *o = transfer(v);
    }
    Ok(ArchCode(s))
}

/// Accuracy per code, dense over the full space. Missing entries fall back
/// to `default` when one is declared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LookupTable {
    entries: Vec<Option<f64>>,
    default: Option<f64>,
    pub dataset: String,
    pub attack: String,
}

impl LookupTable {
    pub fn empty() -> Self {
        Self {
            entries: vec![None; SPACE_SIZE],
            default: None,
            dataset: String::new(),
            attack: String::new(),
        }
    }

    pub fn from_fn(mut accuracy: impl FnMut(ArchCode) -> f64) -> Result<Self> {
        let mut t = Self::empty();
        for code in ArchCode::all() {
            t.insert(code, accuracy(code))?;
        }
        Ok(t)
    }

    pub fn insert(&mut self, code: ArchCode, accuracy: f64) -> Result<()> {
        check_accuracy(accuracy)?;
        self.entries[code.index()] = Some(accuracy);
        Ok(())
    }

    pub fn set_default(&mut self, default: Option<f64>) -> Result<()> {
        if let Some(d) = default {
            check_accuracy(d)?;
        }
        self.default = default;
        Ok(())
    }

    pub fn default_accuracy(&self) -> Option<f64> {
        self.default
    }

    pub fn len(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    pub fn accuracy(&self, code: ArchCode) -> Option<f64> {
        self.entries[code.index()].or(self.default)
    }

    /// Explicit entries in code order.
    pub fn iter(&self) -> impl Iterator<Item = (ArchCode, f64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|a| (ArchCode::from_index(i), a)))
    }

    /// Writes the table in the `code,accuracy` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.dataset.is_empty() {
            out.push_str(&format!("# dataset: {}\n", self.dataset));
        }
        if !self.attack.is_empty() {
            out.push_str(&format!("# attack: {}\n", self.attack));
        }
        if let Some(d) = self.default {
            out.push_str(&format!("# default: {d}\n"));
        }
        out.push_str("code,accuracy\n");
        for (code, acc) in self.iter() {
            out.push_str(&format!("{code},{acc}\n"));
        }
        out
    }
}

fn check_accuracy(a: f64) -> Result<()> {
    if (0.0..=100.0).contains(&a) {
        Ok(())
    } else {
        Err(Error::Domain(format!("accuracy {a} outside [0, 100]")))
    }
}

/// Negated accuracy of `code`.
pub fn lookup_fitness(table: &LookupTable, code: ArchCode) -> Result<f64> {
    table
        .accuracy(code)
        .map(|a| -a)
        .ok_or_else(|| Error::IncompleteTable(format!("no entry for code {code} and no default")))
}

/// Exhaustive argmax of accuracy; ties go to the lexicographically smallest
/// code.
pub fn brute_force_optimum(table: &LookupTable) -> Result<(ArchCode, f64)> {
    if !table.is_complete() {
        return Err(Error::IncompleteTable(format!(
            "{} of {SPACE_SIZE} codes present",
            table.len()
        )));
    }
    let mut best = (ArchCode::from_index(0), f64::NEG_INFINITY);
    for (code, acc) in table.iter() {
        if acc > best.1 {
            best = (code, acc);
        }
    }
    Ok(best)
}

/// Parses the `code,accuracy` text format.
///
/// Lines starting with `#` are comments; `# dataset: …`, `# attack: …` and
/// `# default: <accuracy>` set table metadata. The first non-comment line
/// must be the `code,accuracy` header.
pub fn parse_table(text: &str) -> Result<LookupTable> {
    let mut table = LookupTable::empty();
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| Error::Parse {
            line: Some(line_no),
            msg,
        };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "dataset" => table.dataset = value.to_string(),
                    "attack" => table.attack = value.to_string(),
                    "default" => {
                        let d: f64 = value
                            .parse()
                            .map_err(|_| err(format!("bad default accuracy '{value}'")))?;
                        table.set_default(Some(d)).map_err(|e| err(e.to_string()))?;
                    }
                    _ => {}
                }
            }
            continue;
        }
        if !seen_header {
            if line.replace(' ', "") != "code,accuracy" {
                return Err(err(format!(
                    "expected header 'code,accuracy', found '{line}'"
                )));
            }
            seen_header = true;
            continue;
        }
        let (code, acc) = line
            .split_once(',')
            .ok_or_else(|| err(format!("expected 'code,accuracy', found '{line}'")))?;
        let code: ArchCode = code.trim().parse().map_err(|e: Error| err(e.to_string()))?;
        let acc: f64 = acc
            .trim()
            .parse()
            .map_err(|_| err(format!("bad accuracy '{}'", acc.trim())))?;
        if !(0.0..=100.0).contains(&acc) {
            return Err(err(format!("accuracy {acc} outside [0, 100]")));
        }
        if table.entries[code.index()].is_some() {
            return Err(err(format!("duplicate code {code}")));
        }
        table.entries[code.index()] = Some(acc);
    }
    if !seen_header {
        return Err(Error::Parse {
            line: None,
            msg: "missing 'code,accuracy' header".into(),
        });
    }
    if !table.is_complete() && table.default.is_none() {
        return Err(Error::IncompleteTable(format!(
            "{} of {SPACE_SIZE} codes present and no '# default:' declared",
            table.len()
        )));
    }
    Ok(table)
}

/// Reads and validates a table file.
pub fn load_table(path: &Path) -> Result<LookupTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: None,
        msg: format!("{}: {e}", path.display()),
    })?;
    parse_table(&text).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })
}

/// Seeded rugged table: a uniform base accuracy per code plus a bonus for
/// every edge that agrees with a hidden target architecture.
pub fn synthetic_table(seed: u64) -> LookupTable {
    let mut rng = RngStream::new(seed);
    let target: [u8; EDGES] = std::array::from_fn(|_| rng.below(SYMBOLS as usize) as u8);
    let mut table = LookupTable::from_fn(|code| {
        let shared = code
            .symbols()
            .iter()
            .zip(&target)
            .filter(|(a, b)| a == b)
            .count() as f64;
        let base = rng.uniform_in(10.0, 40.0);
        (base + 9.0 * shared).min(100.0)
    })
    .expect("accuracies lie in [10, 94]");
    table.dataset = format!("synthetic-{seed}");
    table.attack = "clean".into();
    table
}

/// Lookup-table objective over `[-100, 100]^6`.
#[derive(Debug, Clone)]
pub struct ArnasProblem {
    table: LookupTable,
    bounds: Bounds,
    name: String,
}

impl ArnasProblem {
    pub fn new(table: LookupTable) -> Self {
        let name = if table.dataset.is_empty() {
            "arnas".to_string()
        } else {
            format!("arnas-{}", table.dataset)
        };
        Self {
            table,
            bounds: Bounds::cube(EDGES, -100.0, 100.0).expect("fixed box"),
            name,
        }
    }

    pub fn table(&self) -> &LookupTable {
        &self.table
    }
}

impl Problem for ArnasProblem {
    fn name(&self) -> &str {
        &self.name
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        decode(x)
            .and_then(|c| lookup_fitness(&self.table, c))
            .unwrap_or(f64::INFINITY)
    }
}
