//! Small named contexts: the standard forbidden-sublattice shapes, chains,
//! Boolean lattices and a few worked examples.

use crate::bits::BitSet;
use crate::context::FormalContext;

/// The diamond: three pairwise incomparable atoms.
pub fn m3() -> FormalContext {
    FormalContext::from_cross_table(&["X..", ".X.", "..X"])
}

/// The pentagon.
pub fn n5() -> FormalContext {
    FormalContext::from_cross_table(&["XX.", "X..", "..X"])
}

/// The seven-element semimodular lattice that is not modular.
pub fn s7() -> FormalContext {
    FormalContext::from_cross_table(&["X..", "XX.", ".XX", "..X"])
}

/// Order dual of [`s7`].
pub fn s7_dual() -> FormalContext {
    FormalContext::from_cross_table(&["XX..", ".XX.", "..XX"])
}

/// Two diamonds glued along an edge; has non-unit rises on both sides.
pub fn m3_m3() -> FormalContext {
    FormalContext::from_cross_table(&[".X.X.", "XXX..", ".X..X", "X....", "..X.."])
}

/// A twelve-element distributive lattice.
pub fn c2() -> FormalContext {
    FormalContext::from_cross_table(&[".XXX", "X.XX", "XXX.", "XX.."])
}

/// Arrow-annotated tables of the two worked poset examples. Glyphs: `x`
/// cross, `b` double arrow, `d` down arrow only, `u` up arrow only, `.`
/// nothing.
pub const ARROWS_UPPER: [&str; 4] = ["xbxd.", "bxdx.", "xxbbx", "xxxxb"];
pub const ARROWS_LOWER: [&str; 4] = ["xbu", "ubx", "xxb", "bxx"];

fn from_glyphs(rows: &[&str]) -> FormalContext {
    let crosses: Vec<String> = rows
        .iter()
        .map(|r| {
            r.chars()
                .map(|c| if c == 'x' { 'X' } else { '.' })
                .collect()
        })
        .collect();
    let refs: Vec<&str> = crosses.iter().map(String::as_str).collect();
    FormalContext::from_cross_table(&refs)
}

/// Context `(J, M, ≤)` of the first worked poset: meet- but not
/// join-distributive.
pub fn poset_example_upper() -> FormalContext {
    from_glyphs(&ARROWS_UPPER)
}

/// Context `(J, M, ≤)` of the second worked poset: join- but not
/// meet-distributive.
pub fn poset_example_lower() -> FormalContext {
    from_glyphs(&ARROWS_LOWER)
}

/// Expected `(down, up)` arrows for a glyph table.
pub fn glyph_arrows(rows: &[&str]) -> (Vec<BitSet>, Vec<BitSet>) {
    let pick = |wanted: &[char]| {
        rows.iter()
            .map(|r| {
                let cells: Vec<bool> = r.chars().map(|c| wanted.contains(&c)).collect();
                BitSet::from_bools(&cells)
            })
            .collect::<Vec<_>>()
    };
    (pick(&['b', 'd']), pick(&['b', 'u']))
}

/// Context whose lattice is a chain with `n ≥ 1` elements: `n - 1`
/// objects and attributes, `g_i I m_j` iff `i < j`.
pub fn chain(n: usize) -> FormalContext {
    assert!(n >= 1, "a chain has at least one element");
    let k = n - 1;
    if k == 0 {
        return FormalContext::empty();
    }
    let rows: Vec<String> = (0..k)
        .map(|i| (0..k).map(|j| if i < j { 'X' } else { '.' }).collect())
        .collect();
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    FormalContext::from_cross_table(&refs)
}

/// Contranominal scale: object `i` has every attribute but `i`. Its lattice
/// is the Boolean lattice with `2^n` elements.
pub fn contranominal(n: usize) -> FormalContext {
    let rows: Vec<String> = (0..n)
        .map(|i| (0..n).map(|j| if i != j { 'X' } else { '.' }).collect())
        .collect();
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    if n == 0 {
        return FormalContext::empty();
    }
    FormalContext::from_cross_table(&refs)
}

/// All named contexts with their names, for iteration in tests.
pub fn reference_contexts() -> Vec<(&'static str, FormalContext)> {
    vec![
        ("M3", m3()),
        ("N5", n5()),
        ("S7", s7()),
        ("S7-dual", s7_dual()),
        ("M3M3", m3_m3()),
        ("C2", c2()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ConceptLattice;

    #[test]
    fn sizes() {
        let sizes: Vec<usize> = reference_contexts()
            .iter()
            .map(|(_, c)| ConceptLattice::from_context(c).size())
            .collect();
        assert_eq!(sizes, vec![5, 5, 7, 7, 8, 12]);
        assert_eq!(ConceptLattice::from_context(&chain(1)).size(), 1);
        assert_eq!(ConceptLattice::from_context(&chain(4)).size(), 4);
        assert_eq!(ConceptLattice::from_context(&contranominal(3)).size(), 8);
    }

    #[test]
    fn reference_contexts_are_reduced() {
        for (name, c) in reference_contexts() {
            assert!(c.is_reduced(), "{name}");
            let r = c.reduce();
            assert_eq!(r.context, c, "{name}");
        }
    }

    #[test]
    fn glyph_tables_match_computed_arrows() {
        for rows in [&ARROWS_UPPER[..], &ARROWS_LOWER[..]] {
            let ctx = from_glyphs(rows);
            let a = ctx.arrows();
            let (down, up) = glyph_arrows(rows);
            assert_eq!(a.down, down);
            assert_eq!(a.up, up);
        }
    }
}
