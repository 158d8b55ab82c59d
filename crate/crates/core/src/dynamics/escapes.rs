use num_complex::Complex64;

use crate::semigroup::GeneratorSet;

/// Smallest `n` in `1..=max_depth` such that every word of length `n`
/// sends `z` outside `|w| <= R_esc`, or `None` if there is none within the
/// budget. With `max_depth = 0` only the empty word is tried.
///
/// The escape region is forward invariant, so a branch that has left the
/// disc is not expanded further and the answer is one plus the worst
/// child. Any bounded branch ends the search.
pub fn escape_depth(g: &GeneratorSet, z: Complex64, max_depth: usize) -> Option<usize> {
    let radius = g.escape_radius().radius;

    fn entry(g: &GeneratorSet, radius: f64, z: Complex64, remaining: usize) -> Option<usize> {
        // NaN and infinite values count as escaped
        if !(z.norm() <= radius) {
            return Some(0);
        }
        if remaining == 0 {
            return None;
        }
        let mut worst = 0;
        for p in g.gens() {
            worst = worst.max(1 + entry(g, radius, p.eval(z), remaining - 1)?);
        }
        Some(worst)
    }

    let depth = entry(g, radius, z, max_depth)?;
    Some(if max_depth > 0 { depth.max(1) } else { depth })
}

/// Is `z` in the basin of infinity, as certified within `max_depth` levels?
/// Exhausting the depth returns `false`.
pub fn escapes(g: &GeneratorSet, z: Complex64, max_depth: usize) -> bool {
    escape_depth(g, z, max_depth).is_some()
}
