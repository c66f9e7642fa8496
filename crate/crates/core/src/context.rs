//! Formal contexts: the incidence table, derivation operators, clarification,
//! reduction and arrow relations.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::bits::{BitMatrix, BitSet};
use crate::error::{Error, Result};

/// Which side of the context a set of indices lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Objects,
    Attributes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Burmeister,
    Csv,
}

impl Format {
    /// Guess the format from a file extension (`.cxt` or `.csv`).
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "cxt" => Some(Format::Burmeister),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

/// A formal context `(G, M, I)`.
///
/// Rows (object intents) and columns (attribute extents) are both kept so
/// that either derivation is a sequence of word-wise intersections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: BitMatrix,
    cols: BitMatrix,
}

fn check_distinct(names: &[String], kind: &'static str) -> Result<()> {
    let mut seen = HashSet::with_capacity(names.len());
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::DuplicateName {
                kind,
                name: n.clone(),
            });
        }
    }
    Ok(())
}

fn transpose_rows(rows: &[BitSet], width: usize) -> BitMatrix {
    let mut cols = vec![BitSet::new(rows.len()); width];
    for (g, row) in rows.iter().enumerate() {
        for m in row.iter() {
            cols[m].insert(g);
        }
    }
    cols
}

impl FormalContext {
    pub fn new(objects: Vec<String>, attributes: Vec<String>, rows: BitMatrix) -> Result<Self> {
        check_distinct(&objects, "object")?;
        check_distinct(&attributes, "attribute")?;
        if rows.len() != objects.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} objects but {} incidence rows",
                objects.len(),
                rows.len()
            )));
        }
        if let Some((g, r)) = rows
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != attributes.len())
        {
            return Err(Error::DimensionMismatch(format!(
                "row {g} has width {} but there are {} attributes",
                r.len(),
                attributes.len()
            )));
        }
        let cols = transpose_rows(&rows, attributes.len());
        Ok(FormalContext {
            objects,
            attributes,
            rows,
            cols,
        })
    }

    /// Build a context from rows written with `X`/`x` for crosses and any
    /// other character for blanks. Names default to `g1..`, `m1..`.
    pub fn from_cross_table(rows: &[&str]) -> Self {
        let width = rows.first().map_or(0, |r| r.chars().count());
        let objects = (1..=rows.len()).map(|i| format!("g{i}")).collect();
        let attributes = (1..=width).map(|i| format!("m{i}")).collect();
        let bits = rows
            .iter()
            .map(|r| {
                let bools: Vec<bool> = r.chars().map(|c| c == 'X' || c == 'x').collect();
                assert_eq!(bools.len(), width, "ragged cross table");
                BitSet::from_bools(&bools)
            })
            .collect();
        FormalContext::new(objects, attributes, bits).expect("generated names are distinct")
    }

    pub fn empty() -> Self {
        FormalContext::new(Vec::new(), Vec::new(), Vec::new()).unwrap()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    /// `g'` for every object, as bit sets over attributes.
    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    /// `m'` for every attribute, as bit sets over objects.
    pub fn cols(&self) -> &[BitSet] {
        &self.cols
    }

    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    pub fn transpose(&self) -> FormalContext {
        FormalContext {
            objects: self.attributes.clone(),
            attributes: self.objects.clone(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// Keep only the listed objects and attributes, in the given order.
    pub fn restrict(&self, objects: &[usize], attributes: &[usize]) -> FormalContext {
        let rows = objects
            .iter()
            .map(|&g| {
                BitSet::from_indices(
                    attributes.len(),
                    attributes
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| self.rows[g].contains(m))
                        .map(|(i, _)| i),
                )
            })
            .collect();
        FormalContext::new(
            objects.iter().map(|&g| self.objects[g].clone()).collect(),
            attributes
                .iter()
                .map(|&m| self.attributes[m].clone())
                .collect(),
            rows,
        )
        .expect("restriction keeps names distinct")
    }

    /// Direct sum `K1 ∔ K2`: the two tables on the diagonal, crosses in both
    /// off-diagonal blocks. Its concept lattice is the product of the two
    /// concept lattices. Names are prefixed to stay distinct.
    pub fn direct_sum(&self, other: &FormalContext) -> FormalContext {
        let m1 = self.n_attributes();
        let width = m1 + other.n_attributes();
        let mut rows = Vec::with_capacity(self.n_objects() + other.n_objects());
        for r in &self.rows {
            let mut row = BitSet::from_indices(width, r.iter());
            for m in m1..width {
                row.insert(m);
            }
            rows.push(row);
        }
        for r in &other.rows {
            let mut row = BitSet::from_indices(width, 0..m1);
            for m in r.iter() {
                row.insert(m1 + m);
            }
            rows.push(row);
        }
        let objects = self
            .objects
            .iter()
            .map(|n| format!("1:{n}"))
            .chain(other.objects.iter().map(|n| format!("2:{n}")))
            .collect();
        let attributes = self
            .attributes
            .iter()
            .map(|n| format!("1:{n}"))
            .chain(other.attributes.iter().map(|n| format!("2:{n}")))
            .collect();
        FormalContext::new(objects, attributes, rows).unwrap()
    }

    fn side_size(&self, side: Side) -> usize {
        match side {
            Side::Objects => self.n_objects(),
            Side::Attributes => self.n_attributes(),
        }
    }

    /// Prime operator: `A'` for a set of objects, `B'` for a set of
    /// attributes.
    pub fn derive(&self, side: Side, set: &BitSet) -> Result<BitSet> {
        let size = self.side_size(side);
        if set.len() != size {
            return Err(Error::IndexOutOfRange {
                kind: match side {
                    Side::Objects => "object set",
                    Side::Attributes => "attribute set",
                },
                index: set.len(),
                size,
            });
        }
        Ok(match side {
            Side::Objects => self.intent_of(set),
            Side::Attributes => self.extent_of(set),
        })
    }

    /// Double prime `S''` on the chosen side.
    pub fn closure(&self, side: Side, set: &BitSet) -> Result<BitSet> {
        let other = match side {
            Side::Objects => Side::Attributes,
            Side::Attributes => Side::Objects,
        };
        let d = self.derive(side, set)?;
        self.derive(other, &d)
    }

    /// `A'` for a set of objects.
    pub fn intent_of(&self, extent: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.n_attributes());
        for g in extent.iter() {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    /// `B'` for a set of attributes.
    pub fn extent_of(&self, intent: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.n_objects());
        for m in intent.iter() {
            out.intersect_with(&self.cols[m]);
        }
        out
    }

    // ---- I/O ------------------------------------------------------------

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Burmeister => parse_burmeister(text),
            Format::Csv => parse_csv(text),
        }
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let format = Format::from_path(path).ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("cannot infer context format of {}", path.display()),
        })?;
        let bytes = std::fs::read(path)?;
        FormalContext::parse(&decode_text(&bytes), format)
    }

    /// Canonical Burmeister form: no name line, no blank line, `X` and `.`.
    pub fn to_burmeister(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "B");
        let _ = writeln!(out, "{}", self.n_objects());
        let _ = writeln!(out, "{}", self.n_attributes());
        for n in self.objects.iter().chain(&self.attributes) {
            let _ = writeln!(out, "{n}");
        }
        for row in &self.rows {
            for m in 0..self.n_attributes() {
                out.push(if row.contains(m) { 'X' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut header = vec![String::new()];
        header.extend(self.attributes.iter().cloned());
        w.write_record(&header).unwrap();
        for (g, row) in self.rows.iter().enumerate() {
            let mut rec = vec![self.objects[g].clone()];
            rec.extend(
                (0..self.n_attributes())
                    .map(|m| if row.contains(m) { "1" } else { "0" }.to_string()),
            );
            w.write_record(&rec).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn write(&self, format: Format) -> String {
        match format {
            Format::Burmeister => self.to_burmeister(),
            Format::Csv => self.to_csv(),
        }
    }

    // ---- clarification and reduction -------------------------------------

    /// Merge duplicate rows and columns. The representative of each class is
    /// its first occurrence.
    pub fn clarify(&self) -> Clarification {
        let object_map = first_occurrence_map(&self.rows);
        let attribute_map = first_occurrence_map(&self.cols);
        let kept_objects: Vec<usize> = (0..self.n_objects())
            .filter(|&g| object_map[g] == g)
            .collect();
        let kept_attributes: Vec<usize> = (0..self.n_attributes())
            .filter(|&m| attribute_map[m] == m)
            .collect();
        Clarification {
            context: self.restrict(&kept_objects, &kept_attributes),
            object_map,
            attribute_map,
            kept_objects,
            kept_attributes,
        }
    }

    /// Attributes whose attribute concept is meet-irreducible, i.e. whose
    /// extent is not the intersection of the strictly larger extents (the
    /// empty intersection being `G`). A full column is therefore reducible.
    pub fn irreducible_attributes(&self) -> BitSet {
        irreducible_lines(&self.cols, self.n_objects())
    }

    /// Objects whose object concept is join-irreducible.
    pub fn irreducible_objects(&self) -> BitSet {
        irreducible_lines(&self.rows, self.n_attributes())
    }

    /// Clarify, then drop reducible objects and attributes. The concept
    /// lattice is unchanged up to isomorphism.
    pub fn reduce(&self) -> Reduction {
        let clar = self.clarify();
        let c = &clar.context;
        let irr_g = c.irreducible_objects();
        let irr_m = c.irreducible_attributes();
        let keep_g: Vec<usize> = irr_g.iter().collect();
        let keep_m: Vec<usize> = irr_m.iter().collect();
        let removed_objects = (0..c.n_objects())
            .filter(|g| !irr_g.contains(*g))
            .map(|g| clar.kept_objects[g])
            .collect();
        let removed_attributes = (0..c.n_attributes())
            .filter(|m| !irr_m.contains(*m))
            .map(|m| clar.kept_attributes[m])
            .collect();
        Reduction {
            context: c.restrict(&keep_g, &keep_m),
            removed_objects,
            removed_attributes,
            kept_objects: keep_g.iter().map(|&g| clar.kept_objects[g]).collect(),
            kept_attributes: keep_m.iter().map(|&m| clar.kept_attributes[m]).collect(),
            object_map: clar.object_map,
            attribute_map: clar.attribute_map,
        }
    }

    pub fn is_clarified(&self) -> bool {
        distinct(&self.rows) && distinct(&self.cols)
    }

    pub fn is_reduced(&self) -> bool {
        self.is_clarified()
            && self.irreducible_objects().is_full()
            && self.irreducible_attributes().is_full()
    }

    // ---- arrow relations -------------------------------------------------

    pub fn arrows(&self) -> ArrowRelations {
        let down = maximal_arrows(&self.rows, self.n_attributes());
        // The up arrow is the down arrow of the transposed context.
        let up_t = maximal_arrows(&self.cols, self.n_objects());
        let up = transpose_rows(&up_t, self.n_objects());
        let double = down
            .iter()
            .zip(&up)
            .map(|(d, u)| d.intersection(u))
            .collect();
        ArrowRelations { down, up, double }
    }
}

/// For each line (row or column), the cells `c` with `c ∉ line` such that
/// every strictly larger line contains `c`.
fn maximal_arrows(lines: &[BitSet], width: usize) -> BitMatrix {
    lines
        .iter()
        .map(|l| {
            let mut acc = l.complement();
            for other in lines {
                if l.is_strict_subset(other) {
                    acc.intersect_with(other);
                }
            }
            debug_assert_eq!(acc.len(), width);
            acc
        })
        .collect()
}

fn irreducible_lines(lines: &[BitSet], width: usize) -> BitSet {
    let mut out = BitSet::new(lines.len());
    for (i, l) in lines.iter().enumerate() {
        let mut meet = BitSet::full(width);
        for other in lines {
            if l.is_strict_subset(other) {
                meet.intersect_with(other);
            }
        }
        if meet != *l {
            out.insert(i);
        }
    }
    out
}

fn first_occurrence_map(lines: &[BitSet]) -> Vec<usize> {
    let mut first: HashMap<&BitSet, usize> = HashMap::new();
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| *first.entry(l).or_insert(i))
        .collect()
}

fn distinct(lines: &[BitSet]) -> bool {
    let set: HashSet<&BitSet> = lines.iter().collect();
    set.len() == lines.len()
}

/// Result of [`FormalContext::clarify`]. Maps are indexed by original
/// positions and point at the original position of the representative.
#[derive(Clone, Debug)]
pub struct Clarification {
    pub context: FormalContext,
    pub object_map: Vec<usize>,
    pub attribute_map: Vec<usize>,
    pub kept_objects: Vec<usize>,
    pub kept_attributes: Vec<usize>,
}

/// Result of [`FormalContext::reduce`]. `removed_*` lists representatives
/// that were dropped as reducible; merged duplicates show up only in the
/// merge maps.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub context: FormalContext,
    pub removed_objects: Vec<usize>,
    pub removed_attributes: Vec<usize>,
    pub kept_objects: Vec<usize>,
    pub kept_attributes: Vec<usize>,
    pub object_map: Vec<usize>,
    pub attribute_map: Vec<usize>,
}

/// Down (`g ↙ m`), up (`g ↗ m`) and double arrows, one row per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowRelations {
    pub down: BitMatrix,
    pub up: BitMatrix,
    pub double: BitMatrix,
}

impl ArrowRelations {
    pub fn is_down(&self, g: usize, m: usize) -> bool {
        self.down[g].contains(m)
    }

    pub fn is_up(&self, g: usize, m: usize) -> bool {
        self.up[g].contains(m)
    }

    pub fn is_double(&self, g: usize, m: usize) -> bool {
        self.double[g].contains(m)
    }
}

// ---- parsing ----------------------------------------------------------------

/// Files in the wild are UTF-8 or Latin-1.
pub fn decode_text(bytes: &[u8]) -> String {
    match std::str::from_utf8(bytes) {
        Ok(s) => s.strip_prefix('\u{feff}').unwrap_or(s).to_string(),
        Err(_) => bytes.iter().map(|&b| b as char).collect(),
    }
}

fn parse_burmeister(text: &str) -> Result<FormalContext> {
    let mut lines: Vec<&str> = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    if lines.first().map(|l| l.trim()) != Some("B") {
        return Err(Error::Parse {
            line: 1,
            message: "Burmeister files start with a line `B`".into(),
        });
    }

    // The name line and the blank line after the sizes are both optional;
    // try the readings in a fixed order and keep the first that fits.
    let name_options: &[bool] = if lines.get(1).is_some_and(|l| l.trim().is_empty()) {
        &[true]
    } else {
        &[false, true]
    };
    let mut first_err = None;
    for &has_name in name_options {
        let sizes_at = if has_name { 2 } else { 1 };
        let (Some(g), Some(m)) = (
            lines
                .get(sizes_at)
                .and_then(|l| l.trim().parse::<usize>().ok()),
            lines
                .get(sizes_at + 1)
                .and_then(|l| l.trim().parse::<usize>().ok()),
        ) else {
            continue;
        };
        let after = sizes_at + 2;
        let blank_options: &[bool] = if lines.get(after).is_some_and(|l| l.trim().is_empty()) {
            &[true, false]
        } else {
            &[false]
        };
        for &has_blank in blank_options {
            let start = after + usize::from(has_blank);
            match burmeister_body(&lines, start, g, m) {
                Ok(ctx) => return Ok(ctx),
                Err(e) => {
                    first_err.get_or_insert(e);
                }
            }
        }
    }
    Err(first_err.unwrap_or(Error::Parse {
        line: 2,
        message: "missing object/attribute counts".into(),
    }))
}

fn burmeister_body(lines: &[&str], start: usize, g: usize, m: usize) -> Result<FormalContext> {
    let expected = start + 2 * g + m;
    if lines.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "declared {g} objects and {m} attributes need {} lines after the header, found {}",
            2 * g + m,
            lines.len().saturating_sub(start)
        )));
    }
    let objects: Vec<String> = lines[start..start + g]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let attributes: Vec<String> = lines[start + g..start + g + m]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::with_capacity(g);
    for (k, raw) in lines[start + g + m..].iter().enumerate() {
        let line_no = start + g + m + k + 1;
        let row = raw.trim_end();
        let mut bits = BitSet::new(m);
        let mut width = 0;
        for (j, c) in row.chars().enumerate() {
            match c {
                'X' | 'x' => {
                    if j < m {
                        bits.insert(j)
                    }
                }
                '.' => {}
                other => {
                    return Err(Error::InvalidSymbol {
                        line: line_no,
                        symbol: other.to_string(),
                    })
                }
            }
            width += 1;
        }
        if width != m {
            return Err(Error::DimensionMismatch(format!(
                "line {line_no}: row has {width} cells, expected {m}"
            )));
        }
        rows.push(bits);
    }
    FormalContext::new(objects, attributes, rows)
}

const CSV_TRUE: [&str; 4] = ["1", "x", "X", "true"];
const CSV_FALSE: [&str; 4] = ["0", "", ".", "false"];

fn parse_csv(text: &str) -> Result<FormalContext> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?,
        None => return Ok(FormalContext::empty()),
    };
    let attributes: Vec<String> = header
        .iter()
        .skip(1)
        .map(|s| s.trim().to_string())
        .collect();
    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for (k, rec) in records.enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        if rec.len() != attributes.len() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "line {line}: {} cells, expected {}",
                rec.len(),
                attributes.len() + 1
            )));
        }
        objects.push(rec[0].trim().to_string());
        let mut bits = BitSet::new(attributes.len());
        for (j, cell) in rec.iter().skip(1).enumerate() {
            let cell = cell.trim();
            if CSV_TRUE.contains(&cell) {
                bits.insert(j);
            } else if !CSV_FALSE.contains(&cell) {
                return Err(Error::InvalidSymbol {
                    line,
                    symbol: cell.to_string(),
                });
            }
        }
        rows.push(bits);
    }
    FormalContext::new(objects, attributes, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s7() -> FormalContext {
        FormalContext::from_cross_table(&["X..", "XX.", ".XX", "..X"])
    }

    fn set(len: usize, idx: &[usize]) -> BitSet {
        BitSet::from_indices(len, idx.iter().copied())
    }

    #[test]
    fn parses_s7_burmeister() {
        let text = "B\n\n4\n3\n\ng1\ng2\ng3\ng4\nm1\nm2\nm3\nX..\nXX.\n.XX\n..X\n";
        let ctx = FormalContext::parse(text, Format::Burmeister).unwrap();
        assert_eq!(ctx.n_objects(), 4);
        assert_eq!(ctx.n_attributes(), 3);
        assert_eq!(ctx, s7());
    }

    #[test]
    fn parses_crlf_and_lowercase_crosses() {
        let text = "B\r\nname\r\n2\r\n2\r\na\r\nb\r\nm\r\nn\r\nx.\r\n.X\r\n";
        let ctx = FormalContext::parse(text, Format::Burmeister).unwrap();
        assert!(ctx.incident(0, 0));
        assert!(ctx.incident(1, 1));
        assert!(!ctx.incident(0, 1));
        assert_eq!(ctx.objects(), ["a", "b"]);
    }

    #[test]
    fn parses_empty_context() {
        let ctx = FormalContext::parse("B\n\n0\n0\n", Format::Burmeister).unwrap();
        assert_eq!(ctx.n_objects(), 0);
        assert_eq!(ctx.n_attributes(), 0);
    }

    #[test]
    fn missing_rows_is_a_dimension_mismatch() {
        let text = "B\n\n3\n2\n\na\nb\nc\nm\nn\nX.\n.X\n";
        let err = FormalContext::parse(text, Format::Burmeister).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)), "{err:?}");
    }

    #[test]
    fn rejects_foreign_symbols() {
        let text = "B\n\n1\n2\n\na\nm\nn\nX1\n";
        let err = FormalContext::parse(text, Format::Burmeister).unwrap_err();
        assert!(matches!(err, Error::InvalidSymbol { .. }), "{err:?}");
    }

    #[test]
    fn rejects_duplicate_names() {
        let text = "B\n\n2\n1\n\na\na\nm\nX\n.\n";
        let err = FormalContext::parse(text, Format::Burmeister).unwrap_err();
        assert!(matches!(err, Error::DuplicateName { .. }), "{err:?}");
    }

    #[test]
    fn canonical_writer_round_trips() {
        let ctx = s7();
        let text = ctx.to_burmeister();
        assert!(text.starts_with("B\n4\n3\ng1\n"));
        assert_eq!(
            FormalContext::parse(&text, Format::Burmeister).unwrap(),
            ctx
        );
        let csv = ctx.to_csv();
        assert_eq!(FormalContext::parse(&csv, Format::Csv).unwrap(), ctx);
    }

    #[test]
    fn numeric_names_survive_canonical_form() {
        let ctx = FormalContext::new(
            vec!["3".into(), "2".into()],
            vec!["1".into()],
            vec![set(1, &[0]), set(1, &[])],
        )
        .unwrap();
        let back = FormalContext::parse(&ctx.to_burmeister(), Format::Burmeister).unwrap();
        assert_eq!(back, ctx);
    }

    #[test]
    fn csv_dialect() {
        let text = ",a,b,c\ng1,1,0,x\ng2,true,,X\n";
        let ctx = FormalContext::parse(text, Format::Csv).unwrap();
        assert_eq!(ctx.rows()[0], set(3, &[0, 2]));
        assert_eq!(ctx.rows()[1], set(3, &[0, 2]));
        let bad = ",a\ng1,maybe\n";
        assert!(matches!(
            FormalContext::parse(bad, Format::Csv),
            Err(Error::InvalidSymbol { .. })
        ));
        let ragged = ",a,b\ng1,1\n";
        assert!(matches!(
            FormalContext::parse(ragged, Format::Csv),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn derivations_on_s7() {
        let ctx = s7();
        let g2 = set(4, &[1]);
        assert_eq!(ctx.derive(Side::Objects, &g2).unwrap(), set(3, &[0, 1]));
        assert_eq!(
            ctx.derive(Side::Objects, &BitSet::new(4)).unwrap(),
            BitSet::full(3)
        );
        assert_eq!(
            ctx.derive(Side::Objects, &BitSet::full(4)).unwrap(),
            BitSet::new(3)
        );
        assert_eq!(
            ctx.closure(Side::Attributes, &set(3, &[0])).unwrap(),
            set(3, &[0])
        );
        assert_eq!(
            ctx.closure(Side::Attributes, &set(3, &[0, 2])).unwrap(),
            BitSet::full(3)
        );
        assert!(matches!(
            ctx.derive(Side::Objects, &BitSet::new(3)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn clarify_merges_duplicate_rows() {
        let ctx = FormalContext::from_cross_table(&["X.", "X."]);
        let c = ctx.clarify();
        assert_eq!(c.context.n_objects(), 1);
        assert_eq!(c.object_map, vec![0, 0]);
        // the two columns {g1,g2} and {} are distinct
        assert_eq!(c.context.n_attributes(), 2);
        let again = c.context.clarify();
        assert_eq!(again.context, c.context);

        let empty = FormalContext::empty().clarify();
        assert_eq!(empty.context.n_objects(), 0);
        assert!(empty.object_map.is_empty());
    }

    #[test]
    fn reduce_removes_intersection_column() {
        // m3' = {g1} = m1' ∩ m2'
        let ctx = FormalContext::from_cross_table(&["XXX", "X..", ".X."]);
        let r = ctx.reduce();
        assert_eq!(r.removed_attributes, vec![2]);
        // g1 has every attribute, so its object concept is the bottom
        assert_eq!(r.removed_objects, vec![0]);
        assert_eq!(r.context.n_attributes(), 2);
    }

    #[test]
    fn reduce_removes_full_row() {
        let ctx = FormalContext::from_cross_table(&["XX", "X.", ".X"]);
        let r = ctx.reduce();
        assert_eq!(r.removed_objects, vec![0]);
        assert_eq!(r.context.n_objects(), 2);
    }

    #[test]
    fn reduce_removes_full_column() {
        let ctx = FormalContext::from_cross_table(&["XX.", "X.X"]);
        let r = ctx.reduce();
        assert_eq!(r.removed_attributes, vec![0]);
    }

    #[test]
    fn single_empty_cell_has_all_arrows() {
        let ctx = FormalContext::from_cross_table(&["."]);
        let a = ctx.arrows();
        assert!(a.is_down(0, 0) && a.is_up(0, 0) && a.is_double(0, 0));
    }

    #[test]
    fn arrows_avoid_crosses() {
        let ctx = FormalContext::from_cross_table(&[".X.X.", "XXX..", ".X..X", "X....", "..X.."]);
        let a = ctx.arrows();
        for g in 0..ctx.n_objects() {
            assert!(!a.down[g].intersects(&ctx.rows()[g]));
            assert!(!a.up[g].intersects(&ctx.rows()[g]));
            assert_eq!(a.double[g], a.down[g].intersection(&a.up[g]));
        }
    }
}
