//! Catalog of irreducible components of the degenerate surfaces, the
//! blowup ("child") rule on volumes, and validation of the shipped
//! component tables.
//!
//! A component is written `#m_n(v)`: family `m` in the base catalog,
//! blown up `n` times, with volume `v = base_volume(m) - n`. Volume 0
//! means the component contracts to a curve; volume -1 triggers a flip.
//! The tables are stored verbatim, including their typographical
//! artifacts; the parser normalizes those and reports every normalization
//! as a note, never silently.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cases::CaseId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DegenError {
    #[error("unknown component family #{0}")]
    UnknownFamily(u8),
    #[error("cannot parse component notation {0:?}")]
    NoParse(String),
    #[error("component {0} is inconsistent: volume should be {1}")]
    InconsistentVolume(String, i64),
    #[error("tables file is malformed: {0}")]
    BadTables(String),
}

/// Volumes of the ten base families #0..#9.
const BASE_VOLUMES: [i64; 10] = [6, 2, 2, 3, 1, 2, 4, 5, 1, 3];

pub fn base_volume(family: u8) -> Result<i64, DegenError> {
    BASE_VOLUMES
        .get(family as usize)
        .copied()
        .ok_or(DegenError::UnknownFamily(family))
}

/// A catalog component `#family_blowups(volume)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComponentType {
    pub family: u8,
    pub blowups: u32,
    pub volume: i64,
}

impl ComponentType {
    pub fn base(family: u8) -> Result<Self, DegenError> {
        Ok(ComponentType { family, blowups: 0, volume: base_volume(family)? })
    }

    /// Special behaviour attached to low volumes.
    pub fn marker(&self) -> Option<&'static str> {
        match self.volume {
            0 => Some("contract-to-curve"),
            -1 => Some("flip"),
            _ => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(base_volume(self.family), Ok(b) if b - self.blowups as i64 == self.volume)
            && self.volume >= -1
    }
}

impl fmt::Debug for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blowups == 0 {
            write!(f, "#{}({})", self.family, self.volume)
        } else {
            write!(f, "#{}_{}({})", self.family, self.blowups, self.volume)
        }
    }
}

/// Two notations naming the same surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identification {
    pub from: ComponentType,
    pub to: ComponentType,
    /// Whether the catalog rewrites `from` to `to` automatically.
    pub automatic: bool,
}

/// The catalog's identifications between blown-up components and base
/// families. The second entry holds only for one of the two positions of
/// the blown-up curve, so it is recorded but never applied automatically.
pub fn identifications() -> Vec<Identification> {
    let c = |family, blowups, volume| ComponentType { family, blowups, volume };
    vec![
        Identification { from: c(2, 1, 1), to: c(4, 0, 1), automatic: true },
        Identification { from: c(6, 2, 2), to: c(5, 0, 2), automatic: false },
    ]
}

/// Blow up a component `extra_blowups` more times: volume drops by one per
/// blowup, and automatic identifications are applied to the result.
pub fn child(c: &ComponentType, extra_blowups: u32) -> ComponentType {
    let raw = ComponentType {
        family: c.family,
        blowups: c.blowups + extra_blowups,
        volume: c.volume - extra_blowups as i64,
    };
    for ident in identifications() {
        if ident.automatic && raw == ident.from {
            return ident.to;
        }
    }
    raw
}

/// The generic surface of a case: the base degree-6 component blown up once
/// per monomial condition.
pub fn derive_generic_component(id: CaseId) -> ComponentType {
    let base = ComponentType::base(0).expect("family 0 exists");
    let conditions = crate::cases::case_spec(id).conditions.len() as u32;
    child(&base, conditions)
}

// ---------------------------------------------------------------------------
// Table data
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableRow {
    pub case: String,
    /// Component notations exactly as printed, typos included.
    pub components: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table {
    pub degree: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variant: Option<String>,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn label(&self) -> String {
        match &self.variant {
            Some(v) => format!("deg{}{}", self.degree, v),
            None => format!("deg{}", self.degree),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tables {
    pub version: u32,
    pub tables: Vec<Table>,
}

/// The tables shipped with the crate.
pub fn builtin_tables_json() -> &'static str {
    include_str!("../data/tables.json")
}

pub fn load_tables(json: &str) -> Result<Tables, DegenError> {
    serde_json::from_str(json).map_err(|e| DegenError::BadTables(e.to_string()))
}

// ---------------------------------------------------------------------------
// Component notation parsing with logged normalization
// ---------------------------------------------------------------------------

/// Parse a printed component notation, normalizing known typographical
/// artifacts. Every normalization produces a human-readable note.
pub fn parse_component(text: &str) -> Result<(ComponentType, Vec<String>), DegenError> {
    let mut notes = Vec::new();
    let mut s = text.trim();

    if let Some(rest) = s.strip_prefix('#') {
        s = rest;
    } else {
        notes.push(format!("{text:?}: missing '#' prefix added"));
    }

    let no_parse = || DegenError::NoParse(text.to_string());

    let digits_end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    if digits_end == 0 {
        return Err(no_parse());
    }
    let family: u8 = s[..digits_end].parse().map_err(|_| no_parse())?;
    s = &s[digits_end..];

    let mut blowups: u32 = 0;
    if let Some(rest) = s.strip_prefix('_') {
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if end == 0 {
            return Err(no_parse());
        }
        blowups = rest[..end].parse().map_err(|_| no_parse())?;
        s = &rest[end..];
    }

    let rest = s.strip_prefix('(').ok_or_else(no_parse)?;
    let close = rest.find(')').ok_or_else(no_parse)?;
    let volume: i64 = rest[..close].trim().parse().map_err(|_| no_parse())?;
    let mut tail = &rest[close + 1..];

    if tail == ")" {
        notes.push(format!("{text:?}: stray closing parenthesis dropped"));
        tail = "";
    } else if !tail.is_empty() && tail.starts_with('(') && tail.ends_with(')') {
        notes.push(format!("{text:?}: duplicated volume suffix {tail:?} dropped"));
        tail = "";
    }
    if !tail.is_empty() {
        return Err(no_parse());
    }

    let mut component = ComponentType { family, blowups, volume };
    if !component.is_consistent() {
        // Known alias: the blowup subscript that contradicts the printed
        // volume by exactly one extra blowup names the same surface after
        // one blowup fewer.
        let fewer = ComponentType { family, blowups: blowups.saturating_sub(1), volume };
        if blowups >= 1 && fewer.is_consistent() {
            notes.push(format!(
                "{text:?}: subscript contradicts the printed volume; read as {fewer}"
            ));
            component = fewer;
        } else {
            let expected = base_volume(family)? - blowups as i64;
            return Err(DegenError::InconsistentVolume(text.to_string(), expected));
        }
    }
    Ok((component, notes))
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RowCheck {
    pub table: String,
    pub case: String,
    pub components: Vec<ComponentType>,
    pub volume_sum: i64,
    pub expected_sum: i64,
    pub pass: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableValidation {
    pub rows: Vec<RowCheck>,
    pub all_pass: bool,
}

/// Validate every row of every table: each component parses and sits in the
/// catalog, and the volumes sum to the table's degree. Failures are reported
/// per row, never thrown.
pub fn validate_tables(tables: &Tables) -> TableValidation {
    let mut rows = Vec::new();
    for table in &tables.tables {
        for row in &table.rows {
            let mut components = Vec::new();
            let mut notes = Vec::new();
            let mut parse_ok = true;
            for text in &row.components {
                match parse_component(text) {
                    Ok((c, mut ns)) => {
                        components.push(c);
                        notes.append(&mut ns);
                    }
                    Err(e) => {
                        notes.push(e.to_string());
                        parse_ok = false;
                    }
                }
            }
            let volume_sum: i64 = components.iter().map(|c| c.volume).sum();
            let pass = parse_ok && volume_sum == table.degree;
            rows.push(RowCheck {
                table: table.label(),
                case: row.case.clone(),
                components,
                volume_sum,
                expected_sum: table.degree,
                pass,
                notes,
            });
        }
    }
    let all_pass = rows.iter().all(|r| r.pass);
    TableValidation { rows, all_pass }
}

/// Families reachable in a degree-d table: every component must come from a
/// degree-6 component by at most 6-d extra blowups.
pub fn blowup_budget_respected(tables: &Tables) -> bool {
    let degree6_components: BTreeSet<u8> = (0..10).collect();
    tables.tables.iter().all(|table| {
        let budget = 6 - table.degree;
        table.rows.iter().all(|row| {
            row.components.iter().all(|text| match parse_component(text) {
                Ok((c, _)) => {
                    degree6_components.contains(&c.family) && (c.blowups as i64) <= budget
                }
                Err(_) => false,
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(family: u8, blowups: u32, volume: i64) -> ComponentType {
        ComponentType { family, blowups, volume }
    }

    #[test]
    fn base_volumes_of_the_catalog() {
        let volumes: Vec<i64> = (0..10).map(|f| base_volume(f).unwrap()).collect();
        assert_eq!(volumes, vec![6, 2, 2, 3, 1, 2, 4, 5, 1, 3]);
        assert_eq!(base_volume(10), Err(DegenError::UnknownFamily(10)));
    }

    #[test]
    fn child_rule_and_identification() {
        // One blowup of family 2 is identified with base family 4.
        let two = ComponentType::base(2).unwrap();
        assert_eq!(child(&two, 1), ComponentType::base(4).unwrap());
        // Family 8 hits the special volumes.
        let eight = ComponentType::base(8).unwrap();
        let once = child(&eight, 1);
        assert_eq!(once.volume, 0);
        assert_eq!(once.marker(), Some("contract-to-curve"));
        let twice = child(&eight, 2);
        assert_eq!(twice.volume, -1);
        assert_eq!(twice.marker(), Some("flip"));
        // Volume drops by exactly the blowup count.
        for f in 0..10u8 {
            let base = ComponentType::base(f).unwrap();
            for n in 1..=3u32 {
                assert_eq!(child(&base, n).volume, base.volume - n as i64);
            }
        }
    }

    #[test]
    fn generic_components_per_case() {
        assert_eq!(derive_generic_component(CaseId::Deg3), c(0, 3, 3));
        assert_eq!(derive_generic_component(CaseId::Deg4a), c(0, 2, 4));
        assert_eq!(derive_generic_component(CaseId::Deg4b), c(0, 2, 4));
        assert_eq!(derive_generic_component(CaseId::Deg5), c(0, 1, 5));
    }

    #[test]
    fn parse_clean_and_noisy_notations() {
        assert_eq!(parse_component("#0(6)").unwrap(), (c(0, 0, 6), vec![]));
        assert_eq!(parse_component("#3_1(2)").unwrap().0, c(3, 1, 2));
        // Stray parenthesis.
        let (comp, notes) = parse_component("#4(1))").unwrap();
        assert_eq!(comp, c(4, 0, 1));
        assert_eq!(notes.len(), 1);
        // Missing '#'.
        let (comp, notes) = parse_component("0_2(4)").unwrap();
        assert_eq!(comp, c(0, 2, 4));
        assert_eq!(notes.len(), 1);
        // Duplicated volume suffix.
        let (comp, notes) = parse_component("#4(1)(1)").unwrap();
        assert_eq!(comp, c(4, 0, 1));
        assert_eq!(notes.len(), 1);
        // Subscript contradicting the volume resolves to one blowup fewer.
        let (comp, notes) = parse_component("#9_2(2)").unwrap();
        assert_eq!(comp, c(9, 1, 2));
        assert_eq!(notes.len(), 1);
        assert!(parse_component("garbage").is_err());
        assert!(matches!(
            parse_component("#9_3(2)"),
            Err(DegenError::InconsistentVolume(_, 0))
        ));
    }

    #[test]
    fn builtin_tables_validate() {
        let tables = load_tables(builtin_tables_json()).unwrap();
        assert_eq!(tables.tables.len(), 5);
        let degrees: Vec<i64> = tables.tables.iter().map(|t| t.degree).collect();
        assert_eq!(degrees, vec![6, 3, 4, 4, 5]);
        let validation = validate_tables(&tables);
        assert!(validation.all_pass, "{:#?}", validation.rows.iter().filter(|r| !r.pass).collect::<Vec<_>>());
        assert_eq!(validation.rows.len(), 11 + 3 + 4 + 6 + 9);
        // The known typos produce exactly four normalization notes plus the
        // subscript alias.
        let noted: usize = validation.rows.iter().map(|r| r.notes.len()).sum();
        assert_eq!(noted, 5);
        assert!(blowup_budget_respected(&tables));
    }

    #[test]
    fn corrupted_row_fails_but_does_not_throw() {
        let mut tables = load_tables(builtin_tables_json()).unwrap();
        tables.tables[0].rows[0].components = vec!["#0(6)".into(), "#4(1)".into()];
        let validation = validate_tables(&tables);
        assert!(!validation.all_pass);
        let bad: Vec<_> = validation.rows.iter().filter(|r| !r.pass).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].volume_sum, 7);
        assert_eq!(bad[0].expected_sum, 6);
    }

    #[test]
    fn identifications_preserve_volume() {
        for ident in identifications() {
            assert_eq!(ident.from.volume, ident.to.volume);
        }
    }
}
