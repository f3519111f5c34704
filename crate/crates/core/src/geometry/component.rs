use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::numerics::{Dyadic, DyadicComplex};

use super::{Disc, GeometryError, ImaginarySign, Square};

/// A nonempty set of connected, equal-width grid boxes with its component box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    boxes: Vec<Square>,
    box_width: Dyadic,
    x_min: Dyadic,
    x_max: Dyadic,
    y_min: Dyadic,
    y_max: Dyadic,
    component_box: Square,
}

impl Component {
    /// Builds a component from boxes already known to be connected.
    /// `b0` is the region of interest used to clip the component box.
    pub fn from_boxes(mut boxes: Vec<Square>, b0: &Square) -> Component {
        assert!(!boxes.is_empty(), "empty component");
        boxes.sort_by(|a, b| a.corner_cmp(b));
        boxes.dedup();
        let box_width = boxes[0].width.clone();
        debug_assert!(boxes.iter().all(|b| b.width == box_width));
        let x_min = boxes.iter().map(Square::x_min).min().unwrap();
        let x_max = boxes.iter().map(Square::x_max).max().unwrap();
        let y_min = boxes.iter().map(Square::y_min).min().unwrap();
        let y_max = boxes.iter().map(Square::y_max).max().unwrap();
        let component_box = enclosing_square(&x_min, &x_max, &y_min, &y_max, b0);
        Component { boxes, box_width, x_min, x_max, y_min, y_max, component_box }
    }

    /// The single-box component `{b0}`.
    pub fn root(b0: &Square) -> Component {
        Component::from_boxes(vec![b0.clone()], b0)
    }

    pub fn boxes(&self) -> &[Square] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn box_width(&self) -> &Dyadic {
        &self.box_width
    }

    /// `B(C)`.
    pub fn component_box(&self) -> &Square {
        &self.component_box
    }

    /// `w(C)`, the width of the component box.
    pub fn width(&self) -> &Dyadic {
        &self.component_box.width
    }

    /// `Δ(C)`, the containing disc of the component box.
    pub fn disc(&self) -> Disc {
        self.component_box.containing_disc()
    }

    /// Lower-left corner of the bounding rectangle.
    pub fn min_corner(&self) -> (&Dyadic, &Dyadic) {
        (&self.x_min, &self.y_min)
    }

    pub fn is_compact(&self) -> bool {
        self.width() <= &(&self.box_width * &Dyadic::from_i64(3))
    }

    /// Closed disc meets some box of the component.
    pub fn meets_disc(&self, d: &Disc) -> bool {
        d.intersects_rect(&self.x_min, &self.x_max, &self.y_min, &self.y_max)
            && self.boxes.iter().any(|b| d.intersects_square(b))
    }

    pub fn imaginary_sign(&self) -> ImaginarySign {
        if self.y_min.signum() == Ordering::Greater {
            ImaginarySign::Positive
        } else if self.y_max.signum() == Ordering::Less {
            ImaginarySign::Negative
        } else {
            ImaginarySign::Mixed
        }
    }

    /// Mirror image under complex conjugation.
    pub fn conj(&self, b0: &Square) -> Component {
        Component::from_boxes(self.boxes.iter().map(Square::conj).collect(), b0)
    }

    /// `C ∪ conj(C)`; requires `C` to meet the real axis.
    pub fn conjugate_closure(&self, b0: &Square) -> Result<Component, GeometryError> {
        if !self.boxes.iter().any(Square::meets_real_axis) {
            return Err(GeometryError::NotRealIntersecting);
        }
        let mut all = self.boxes.clone();
        all.extend(self.boxes.iter().map(Square::conj));
        Ok(Component::from_boxes(all, b0))
    }

    /// Queue priority: wider component box first, then smaller min corner.
    pub fn priority_cmp(&self, other: &Component) -> Ordering {
        other
            .width()
            .cmp(self.width())
            .then_with(|| self.x_min.cmp(&other.x_min))
            .then_with(|| self.y_min.cmp(&other.y_min))
    }
}

/// Smallest square containing the rectangle, centered on it, shifted inside `b0`.
fn enclosing_square(x_min: &Dyadic, x_max: &Dyadic, y_min: &Dyadic, y_max: &Dyadic, b0: &Square) -> Square {
    let side = std::cmp::max(x_max - x_min, y_max - y_min);
    let half = side.mul_2exp(-1);
    let place = |lo: &Dyadic, hi: &Dyadic, b_lo: Dyadic, b_hi: Dyadic| -> Dyadic {
        let mut c = (lo + hi).mul_2exp(-1);
        if &c - &half < b_lo {
            c = &b_lo + &half;
        } else if &c + &half > b_hi {
            c = &b_hi - &half;
        }
        c
    };
    let cx = place(x_min, x_max, b0.x_min(), b0.x_max());
    let cy = place(y_min, y_max, b0.y_min(), b0.y_max());
    Square::new(DyadicComplex::new(cx, cy), side)
}

/// Splits equal-width grid boxes into maximal groups whose closures touch
/// (edge or corner), ordered by min corner.
pub fn group_components(boxes: &[Square], b0: &Square) -> Vec<Component> {
    if boxes.is_empty() {
        return Vec::new();
    }
    let w = boxes[0].width.clone();
    let index: HashMap<(Dyadic, Dyadic), usize> =
        boxes.iter().enumerate().map(|(i, b)| ((b.x_min(), b.y_min()), i)).collect();
    let mut parent: Vec<usize> = (0..boxes.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let zero = Dyadic::zero();
    let neg = -&w;
    let steps = [&neg, &zero, &w];
    for (i, b) in boxes.iter().enumerate() {
        let (x, y) = (b.x_min(), b.y_min());
        for dx in steps {
            for dy in steps {
                if dx.is_zero() && dy.is_zero() {
                    continue;
                }
                if let Some(&j) = index.get(&(&x + dx, &y + dy)) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<Square>> = HashMap::new();
    for (i, b) in boxes.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(b.clone());
    }
    let mut out: Vec<Component> = groups.into_values().map(|g| Component::from_boxes(g, b0)).collect();
    out.sort_by(|a, b| a.boxes[0].corner_cmp(&b.boxes[0]));
    out
}

/// `isCompact` and `isSeparated` for `c` against the other components `others`.
pub fn component_predicates<'a, I>(c: &Component, others: I, b0: &Square) -> (bool, bool)
where
    I: IntoIterator<Item = &'a Component>,
{
    (c.is_compact(), is_separated(c, others, b0))
}

/// `4Δ(C)` misses every other component and stays inside `2B_0`.
pub fn is_separated<'a, I>(c: &Component, others: I, b0: &Square) -> bool
where
    I: IntoIterator<Item = &'a Component>,
{
    let d4 = c.disc().times(4);
    if !d4.inside_square(&b0.scaled(&Dyadic::from_i64(2))) {
        return false;
    }
    others.into_iter().all(|o| !o.meets_disc(&d4))
}

/// `conjugate_closure` under its operation name.
pub fn conjugate_closure(c: &Component, b0: &Square) -> Result<Component, GeometryError> {
    c.conjugate_closure(b0)
}

/// Distinct boxes of a set of components, as a set keyed by corner.
pub fn box_set(components: &[Component]) -> BTreeSet<(Dyadic, Dyadic, Dyadic)> {
    components
        .iter()
        .flat_map(|c| c.boxes.iter().map(|b| (b.x_min(), b.y_min(), b.width.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sq(re: f64, im: f64, w: f64) -> Square {
        Square::new(DyadicComplex::from_f64(re, im), Dyadic::from_f64(w))
    }

    fn b0() -> Square {
        sq(0.0, 0.0, 16.0)
    }

    #[test]
    fn adjacency_rules() {
        assert_eq!(group_components(&[sq(0.5, 0.5, 1.0), sq(1.5, 0.5, 1.0)], &b0()).len(), 1);
        assert_eq!(group_components(&[sq(0.5, 0.5, 1.0), sq(1.5, 1.5, 1.0)], &b0()).len(), 1);
        let split = group_components(&[sq(0.5, 0.5, 1.0), sq(2.5, 0.5, 1.0)], &b0());
        assert_eq!(split.len(), 2);
        assert!(split[0].min_corner().0 < split[1].min_corner().0);
    }

    #[test]
    fn compactness() {
        let single = Component::from_boxes(vec![sq(0.5, 0.5, 1.0)], &b0());
        assert!(single.is_compact());
        assert_eq!(single.width(), &Dyadic::from_i64(1));
        let strip: Vec<Square> = (0..4).map(|i| sq(0.5 + i as f64, 0.5, 1.0)).collect();
        let strip = Component::from_boxes(strip, &b0());
        assert_eq!(strip.width(), &Dyadic::from_i64(4));
        assert!(!strip.is_compact());
        let three: Vec<Square> = (0..3).map(|i| sq(0.5 + i as f64, 0.5, 1.0)).collect();
        assert!(Component::from_boxes(three, &b0()).is_compact());
    }

    #[test]
    fn component_box_is_centered_and_clipped() {
        let c = Component::from_boxes(vec![sq(0.5, 0.5, 1.0), sq(1.5, 0.5, 1.0)], &b0());
        assert_eq!(c.component_box(), &sq(1.0, 0.5, 2.0));
        // against the top edge of B_0 the square is pushed down
        let c = Component::from_boxes(vec![sq(-7.5, 7.5, 1.0), sq(-6.5, 7.5, 1.0)], &b0());
        assert_eq!(c.component_box(), &sq(-7.0, 7.0, 2.0));
        assert!(b0().contains_square(c.component_box()));
    }

    #[test]
    fn separation() {
        let lone = Component::from_boxes(vec![sq(0.5, 0.5, 1.0)], &b0());
        assert!(is_separated(&lone, std::iter::empty(), &b0()));
        let near = Component::from_boxes(vec![sq(3.5, 0.5, 1.0)], &b0());
        assert!(!is_separated(&lone, [&near], &b0()));
        let far = Component::from_boxes(vec![sq(4.5, 4.5, 1.0)], &b0());
        assert!(is_separated(&lone, [&far], &b0()));
        // 4Δ reaches beyond 2B_0
        let whole = Component::root(&b0());
        assert!(!is_separated(&whole, std::iter::empty(), &b0()));
        let (compact, separated) = component_predicates(&lone, [&far], &b0());
        assert!(compact && separated);
    }

    #[test]
    fn conjugate_closures() {
        let sym = Component::from_boxes(vec![sq(0.5, 0.5, 1.0), sq(0.5, -0.5, 1.0)], &b0());
        assert_eq!(conjugate_closure(&sym, &b0()).unwrap(), sym);
        let c = Component::from_boxes(vec![sq(0.5, -0.5, 1.0), sq(0.5, 0.5, 1.0), sq(0.5, 1.5, 1.0)], &b0());
        let closed = c.conjugate_closure(&b0()).unwrap();
        assert_eq!(closed.len(), 4);
        assert!(closed.boxes().contains(&sq(0.5, -1.5, 1.0)));
        let up = Component::from_boxes(vec![sq(0.5, 1.5, 1.0)], &b0());
        assert_eq!(up.conjugate_closure(&b0()).unwrap_err(), GeometryError::NotRealIntersecting);
        assert_eq!(up.imaginary_sign(), ImaginarySign::Positive);
        assert_eq!(up.conj(&b0()).imaginary_sign(), ImaginarySign::Negative);
        assert_eq!(sym.imaginary_sign(), ImaginarySign::Mixed);
    }

    #[test]
    fn queue_priority() {
        let wide = Component::from_boxes(vec![sq(0.5, 0.5, 1.0), sq(1.5, 0.5, 1.0)], &b0());
        let narrow = Component::from_boxes(vec![sq(-3.5, 0.5, 1.0)], &b0());
        assert_eq!(wide.priority_cmp(&narrow), Ordering::Less);
        let other = Component::from_boxes(vec![sq(5.5, 0.5, 1.0)], &b0());
        assert_eq!(narrow.priority_cmp(&other), Ordering::Less);
    }

    fn grid_boxes() -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::btree_set((-8i64..8, -8i64..8), 1..40).prop_map(|s| s.into_iter().collect())
    }

    fn to_boxes(cells: &[(i64, i64)]) -> Vec<Square> {
        cells.iter().map(|&(i, j)| sq(i as f64 + 0.5, j as f64 + 0.5, 1.0)).collect()
    }

    fn touching(a: &Square, b: &Square) -> bool {
        a.x_min() <= b.x_max() && b.x_min() <= a.x_max() && a.y_min() <= b.y_max() && b.y_min() <= a.y_max()
    }

    proptest! {
        #[test]
        fn grouping_is_a_partition(cells in grid_boxes()) {
            let boxes = to_boxes(&cells);
            let comps = group_components(&boxes, &b0());
            let total: usize = comps.iter().map(Component::len).sum();
            prop_assert_eq!(total, boxes.len());
            let set = box_set(&comps);
            prop_assert_eq!(set.len(), boxes.len());
            for c in &comps {
                prop_assert!(c.component_box().contains_square(&c.boxes()[0]));
                prop_assert!(b0().contains_square(c.component_box()));
                for b in c.boxes() {
                    prop_assert!(c.component_box().contains_square(b));
                }
            }
            // no two components touch
            for (i, a) in comps.iter().enumerate() {
                for b in &comps[i + 1..] {
                    for x in a.boxes() {
                        for y in b.boxes() {
                            prop_assert!(!touching(x, y));
                        }
                    }
                }
            }
        }

        #[test]
        fn closure_is_idempotent(cells in grid_boxes()) {
            let mut boxes = to_boxes(&cells);
            boxes.push(sq(0.5, -0.5, 1.0));
            for c in group_components(&boxes, &b0()) {
                if let Ok(once) = c.conjugate_closure(&b0()) {
                    let twice = once.conjugate_closure(&b0()).unwrap();
                    prop_assert_eq!(&once, &twice);
                    prop_assert_eq!(once.conj(&b0()), once);
                }
            }
        }
    }
}
