use crate::codec::{encode_excursion, Frame, Wall};
use crate::lattice::{Axis, LatticePath};

use super::ladder::HatPath;

/// The corner-model trajectory drawn by a hat path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerEmbedding {
    pub path: LatticePath,
    /// Number of complete hat excursions drawn.
    pub excursions: usize,
    /// Hat index where an unfinished trailing excursion was cut off.
    pub cut: Option<usize>,
}

/// Draws each complete excursion of `hat` as a corner-model excursion.
///
/// Descending excursions (`0 → -1`) become vertical excursions, ascending
/// ones (`-1 → 0`) are mirrored to `0 → -1` and become horizontal excursions.
/// The closing growth step of one excursion is the opening forward step of
/// the next, so it is drawn once: the lattice length is `t(τ_E) − E + 1`
/// for `E ≥ 1` complete excursions.
pub fn hat_to_corner_path(hat: &HatPath, first_step: Axis) -> CornerEmbedding {
    let mut steps = Vec::with_capacity(hat.clock()[hat.last_ladder_time()] as usize);
    let mut excursions = 0;
    let mut mirrored = Vec::new();
    for ex in hat.excursions() {
        let frame = Frame::corner(ex.descending, first_step);
        let encoded = if ex.descending {
            encode_excursion(ex.values, frame, Wall::Infinite)
        } else {
            mirrored.clear();
            mirrored.extend(ex.values.iter().map(|v| -1 - v));
            encode_excursion(&mirrored, frame, Wall::Infinite)
        }
        .expect("hat excursions are well formed");
        let skip = usize::from(excursions > 0);
        steps.extend_from_slice(&encoded[skip..]);
        excursions += 1;
    }
    let last = hat.last_ladder_time();
    let cut = (last < hat.len()).then_some(last);
    CornerEmbedding { path: LatticePath::from_steps(steps), excursions, cut }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Dir::*;

    #[test]
    fn origin_only() {
        let e = hat_to_corner_path(&HatPath::from_values(vec![0]).unwrap(), Axis::Horizontal);
        assert_eq!(e.path, LatticePath::origin());
        assert_eq!(e.cut, None);
    }

    #[test]
    fn two_excursions_share_a_step() {
        let hat = HatPath::from_values(vec![0, 2, -1, -1, 0, 1]).unwrap();
        let e = hat_to_corner_path(&hat, Axis::Horizontal);
        let expected = [Right, Down, Down, Right, Up, Up, Up, Up, Right];
        assert_eq!(e.path, LatticePath::from_steps(expected));
        assert_eq!(e.excursions, 2);
        assert_eq!(e.cut, Some(4));
        assert_eq!(e.path.len() as u64, hat.clock()[4] - 2 + 1);
    }
}
