use serde::{Deserialize, Serialize};

use super::{BlockLayout, CodeArtifact};
use crate::codes::first_singular_minor;
use crate::matrix::FMatrix;
use crate::select::{enumerate_block_selections, Combinations};

/// Machine-readable verifier outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pmds: bool,
    pub first_failing_selection: Option<Vec<usize>>,
    pub selections_checked: u64,
}

impl Verdict {
    fn pass(checked: u64) -> Self {
        Verdict { pmds: true, first_failing_selection: None, selections_checked: checked }
    }

    fn fail(selection: Vec<usize>, checked: u64) -> Self {
        Verdict { pmds: false, first_failing_selection: Some(selection), selections_checked: checked }
    }
}

/// Every k×k submatrix with at most ℓ columns per block is nonsingular.
pub fn verify_tkl(g: &FMatrix, layout: &BlockLayout) -> Verdict {
    let k = g.rows();
    let caps = vec![layout.ell; layout.m()];
    let mut checked = 0u64;
    for sel in enumerate_block_selections(&layout.widths, &caps, k) {
        checked += 1;
        if g.minor(&sel).is_zero() {
            return Verdict::fail(sel.into_vec(), checked);
        }
    }
    // An empty family means no k columns fit under the caps; such a code cannot
    // be PMDS either.
    if checked == 0 {
        return Verdict::fail(Vec::new(), 0);
    }
    Verdict::pass(checked)
}

pub fn verify_pmds_tkl(code: &CodeArtifact) -> Verdict {
    verify_tkl(&code.generator, &code.layout())
}

/// The two-part definition: each block's row space is an `[ℓ + r_i, ℓ]`
/// MDS code, and every puncturing of `r_i` coordinates per block leaves an
/// `[mℓ, k]` MDS code.
pub fn verify_definition(g: &FMatrix, layout: &BlockLayout) -> Verdict {
    let ell = layout.ell;
    let k = g.rows();
    let mut checked = 0u64;

    for b in 0..layout.m() {
        let cols: Vec<usize> = layout.range(b).collect();
        let block = g.select_columns(&cols);
        let (red, pivots) = block.rref();
        checked += 1;
        if pivots.len() != ell {
            return Verdict::fail(cols, checked);
        }
        let rows: Vec<usize> = (0..ell).collect();
        let basis = red.submatrix(Some(&rows), &(0..cols.len()).collect::<Vec<_>>()).expect("in range");
        match first_singular_minor(&basis) {
            Ok(None) => {}
            Ok(Some(local)) => {
                return Verdict::fail(local.iter().map(|&c| cols[c]).collect(), checked);
            }
            Err(_) => return Verdict::fail(cols, checked),
        }
    }

    if k > ell * layout.m() {
        return Verdict::fail(Vec::new(), checked);
    }
    // Kept-column choices per block; puncturing r_i of ℓ + r_i keeps ℓ.
    let choices: Vec<Vec<Vec<usize>>> = (0..layout.m())
        .map(|b| {
            let start = layout.range(b).start;
            Combinations::new(layout.widths[b], ell).map(|c| c.into_iter().map(|x| x + start).collect()).collect()
        })
        .collect();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let kept: Vec<usize> = idx.iter().zip(&choices).flat_map(|(&i, c)| c[i].iter().copied()).collect();
        let punctured = g.select_columns(&kept);
        checked += 1;
        if let Some(local) = first_singular_minor(&punctured).expect("k <= mℓ") {
            return Verdict::fail(local.iter().map(|&c| kept[c]).collect(), checked);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Verdict::pass(checked);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub fn verify_pmds_definition(code: &CodeArtifact) -> Verdict {
    verify_definition(&code.generator, &code.layout())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::vandermonde_mds;
    use crate::field::FieldSpec;

    fn layout_11() -> BlockLayout {
        BlockLayout::new(1, vec![2, 2])
    }

    #[test]
    fn repetition_code_is_pmds() {
        let f = FieldSpec::new(2, 1).unwrap();
        let g = FMatrix::from_values(&f, &[vec![1, 1, 1, 1]]).unwrap();
        assert!(verify_tkl(&g, &layout_11()).pmds);
        assert!(verify_definition(&g, &layout_11()).pmds);
    }

    #[test]
    fn zero_entry_fails() {
        let f = FieldSpec::new(2, 1).unwrap();
        let g = FMatrix::from_values(&f, &[vec![1, 0, 1, 1]]).unwrap();
        let v = verify_tkl(&g, &layout_11());
        assert!(!v.pmds);
        assert_eq!(v.first_failing_selection, Some(vec![1]));
        assert_eq!(v.selections_checked, 2);
        assert!(!verify_definition(&g, &layout_11()).pmds);
    }

    #[test]
    fn single_block_mds_is_trivially_pmds() {
        let f = FieldSpec::new(7, 1).unwrap();
        let g = vandermonde_mds(&f, 6, 3, None).unwrap().generator;
        let layout = BlockLayout::new(3, vec![6]);
        assert!(verify_tkl(&g, &layout).pmds);
        assert!(verify_definition(&g, &layout).pmds);
    }

    #[test]
    fn block_mds_failure_reported_in_global_columns() {
        // Second block is [1 1 | 2 2]-style repetition: its row space has rank 1 < ℓ.
        let f = FieldSpec::new(5, 1).unwrap();
        let g = FMatrix::from_values(&f, &[vec![1, 0, 1, 1, 1, 1], vec![0, 1, 2, 1, 1, 1]]).unwrap();
        let layout = BlockLayout::new(2, vec![3, 3]);
        let v = verify_definition(&g, &layout);
        assert!(!v.pmds);
        assert_eq!(v.first_failing_selection, Some(vec![3, 4, 5]));
        assert!(!verify_tkl(&g, &layout).pmds);
    }
}
