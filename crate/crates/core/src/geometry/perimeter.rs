use super::set::PolyhedralSet;
use super::window::Window;
use crate::anisotropy::Anisotropy;
use crate::error::{Error, Result};

/// `P_Ψ(E, A)`: the sum over facets clipped to `A` of `area · Ψ°(ν)`.
pub fn perimeter(set: &PolyhedralSet, norm: &Anisotropy, window: &Window) -> Result<f64> {
    if norm.dim() != set.dim() {
        return Err(Error::dims("norm", norm.dim(), "set", set.dim()));
    }
    Ok(set
        .facets_in(window)?
        .iter()
        .map(|f| f.area * norm.eval_dual(&f.normal))
        .sum())
}

/// Perimeter inside the set's own bounding window.
pub fn perimeter_in_bound(set: &PolyhedralSet, norm: &Anisotropy) -> Result<f64> {
    perimeter(set, norm, &set.bound().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_under_linf() {
        let c = PolyhedralSet::aabb(&[0.0; 3], &[1.0; 3], Window::cube(3, 2.0).unwrap()).unwrap();
        let linf = Anisotropy::p_norm(3, f64::INFINITY).unwrap();
        assert!((perimeter_in_bound(&c, &linf).unwrap() - 6.0).abs() < 1e-12);
        let cyl = Anisotropy::cylindrical(Anisotropy::p_norm(2, 1.0).unwrap());
        assert!((perimeter_in_bound(&c, &cyl).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_facet() {
        let w = Window::new(vec![-1.0, -1.0, 0.0], vec![1.0, 1.0, 1.0]).unwrap();
        let s = PolyhedralSet::halfspace(vec![1.0, 1.0, 0.0], 0.0, w.clone()).unwrap();
        let linf = Anisotropy::p_norm(3, f64::INFINITY).unwrap();
        // facet of area 2√2, Φ°(ν) = √2
        assert!((perimeter(&s, &linf, &w).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let c = PolyhedralSet::aabb(&[0.0; 2], &[1.0; 2], Window::cube(2, 2.0).unwrap()).unwrap();
        assert!(perimeter_in_bound(&c, &Anisotropy::euclidean(3).unwrap()).is_err());
    }
}
