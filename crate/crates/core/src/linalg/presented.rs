use std::borrow::Cow;
use std::sync::Arc;

use crate::error::LinalgError;
use crate::linalg::Matrix;

type Result<T> = std::result::Result<T, LinalgError>;

/// A finite-dimensional vector space given with a labelled ambient basis.
///
/// `Direct` spaces are the ambient space itself. A `Subquotient` is
/// `span(cycles) / span(boundaries)` inside the ambient space; both spanning
/// sets are kept reduced to independent columns, so its dimension is
/// `cycles.cols() - boundaries.cols()`.
#[derive(Debug, Clone)]
pub enum PresentedSpace {
    Direct {
        basis: Arc<[String]>,
    },
    Subquotient {
        ambient: Arc<[String]>,
        cycles: Matrix,
        boundaries: Matrix,
    },
}

impl PresentedSpace {
    pub fn direct(labels: Vec<String>) -> Self {
        PresentedSpace::Direct {
            basis: labels.into(),
        }
    }

    pub fn zero() -> Self {
        PresentedSpace::direct(Vec::new())
    }

    pub fn subquotient(ambient: Arc<[String]>, cycles: &Matrix, boundaries: &Matrix) -> Result<Self> {
        let n = ambient.len();
        if cycles.rows() != n || boundaries.rows() != n {
            return Err(LinalgError::ShapeMismatch(format!(
                "subquotient of a {n}-dimensional space given {}-row cycles and {}-row boundaries",
                cycles.rows(),
                boundaries.rows()
            )));
        }
        let cycles = cycles.column_basis();
        let boundaries = boundaries.column_basis();
        let joint = Matrix::hcat(&[&cycles, &boundaries])?;
        if joint.rank() != cycles.cols() {
            return Err(LinalgError::BoundariesNotInCycles);
        }
        Ok(PresentedSpace::Subquotient {
            ambient,
            cycles,
            boundaries,
        })
    }

    /// Quotient of a whole ambient space by the span of `relations`.
    pub fn quotient(ambient: Arc<[String]>, relations: &Matrix) -> Result<Self> {
        let id = Matrix::identity(ambient.len());
        PresentedSpace::subquotient(ambient, &id, relations)
    }

    pub fn labels(&self) -> &Arc<[String]> {
        match self {
            PresentedSpace::Direct { basis } => basis,
            PresentedSpace::Subquotient { ambient, .. } => ambient,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.labels().len()
    }

    pub fn dim(&self) -> usize {
        match self {
            PresentedSpace::Direct { basis } => basis.len(),
            PresentedSpace::Subquotient {
                cycles, boundaries, ..
            } => cycles.cols() - boundaries.cols(),
        }
    }

    pub fn is_direct(&self) -> bool {
        matches!(self, PresentedSpace::Direct { .. })
    }

    pub fn cycles(&self) -> Cow<'_, Matrix> {
        match self {
            PresentedSpace::Direct { basis } => Cow::Owned(Matrix::identity(basis.len())),
            PresentedSpace::Subquotient { cycles, .. } => Cow::Borrowed(cycles),
        }
    }

    pub fn boundaries(&self) -> Cow<'_, Matrix> {
        match self {
            PresentedSpace::Direct { basis } => Cow::Owned(Matrix::zeros(basis.len(), 0)),
            PresentedSpace::Subquotient { boundaries, .. } => Cow::Borrowed(boundaries),
        }
    }

    /// Columns of `cycles` completing a basis of `boundaries` to one of `cycles`.
    pub fn representatives(&self) -> Matrix {
        let b = self.boundaries();
        let z = self.cycles();
        let joint = Matrix::hcat(&[&b, &z]).expect("same ambient");
        let idx: Vec<usize> = joint
            .independent_columns()
            .into_iter()
            .filter(|&c| c >= b.cols())
            .map(|c| c - b.cols())
            .collect();
        z.select_columns(&idx)
    }

    /// Same ambient labels and the same cycle and boundary spans.
    pub fn same_space(&self, other: &PresentedSpace) -> bool {
        if self.labels() != other.labels() {
            return false;
        }
        if self.is_direct() && other.is_direct() {
            return true;
        }
        same_span(&self.cycles(), &other.cycles()) && same_span(&self.boundaries(), &other.boundaries())
    }

    /// Direct sum; labels are prefixed by the given tags.
    pub fn direct_sum(parts: &[(String, &PresentedSpace)]) -> PresentedSpace {
        let labels: Vec<String> = parts
            .iter()
            .flat_map(|(tag, s)| s.labels().iter().map(move |l| format!("{tag}{l}")))
            .collect();
        if parts.iter().all(|(_, s)| s.is_direct()) {
            return PresentedSpace::direct(labels);
        }
        let cycles: Vec<Cow<'_, Matrix>> = parts.iter().map(|(_, s)| s.cycles()).collect();
        let bounds: Vec<Cow<'_, Matrix>> = parts.iter().map(|(_, s)| s.boundaries()).collect();
        let z = Matrix::block_diag(&cycles.iter().map(|c| c.as_ref()).collect::<Vec<_>>());
        let b = Matrix::block_diag(&bounds.iter().map(|c| c.as_ref()).collect::<Vec<_>>());
        PresentedSpace::subquotient(labels.into(), &z, &b).expect("direct sum of valid subquotients")
    }
}

fn same_span(a: &Matrix, b: &Matrix) -> bool {
    let ra = a.rank();
    ra == b.rank() && Matrix::hcat(&[a, b]).map(|j| j.rank() == ra).unwrap_or(false)
}

/// A linear map between presented spaces, given by its matrix on ambient bases.
#[derive(Debug, Clone)]
pub struct PresentedMap {
    source: PresentedSpace,
    target: PresentedSpace,
    matrix: Matrix,
}

impl PresentedMap {
    /// Checks shapes and that cycles go to cycles and boundaries to boundaries.
    pub fn new(source: PresentedSpace, target: PresentedSpace, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.ambient_dim() || matrix.cols() != source.ambient_dim() {
            return Err(LinalgError::ShapeMismatch(format!(
                "matrix is {}x{} but the map goes from ambient dimension {} to {}",
                matrix.rows(),
                matrix.cols(),
                source.ambient_dim(),
                target.ambient_dim()
            )));
        }
        // In a direct target everything is a cycle; a direct source has no boundaries.
        if !target.is_direct() {
            let image_z = apply(&matrix, &source);
            if !contained_in(&image_z, &target.cycles()) {
                return Err(LinalgError::IllDefined("image of a cycle is not a cycle".into()));
            }
        }
        if !source.is_direct() {
            let image_b = matrix.mul(&source.boundaries())?;
            if !contained_in(&image_b, &target.boundaries()) {
                return Err(LinalgError::IllDefined("image of a boundary is not a boundary".into()));
            }
        }
        Ok(PresentedMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(space: PresentedSpace) -> Self {
        let n = space.ambient_dim();
        PresentedMap {
            source: space.clone(),
            target: space,
            matrix: Matrix::identity(n),
        }
    }

    pub fn zero(source: PresentedSpace, target: PresentedSpace) -> Self {
        let matrix = Matrix::zeros(target.ambient_dim(), source.ambient_dim());
        PresentedMap {
            source,
            target,
            matrix,
        }
    }

    pub fn source(&self) -> &PresentedSpace {
        &self.source
    }

    pub fn target(&self) -> &PresentedSpace {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `[M * cycles(source) | boundaries(target)]`
    fn image_with_boundaries(&self) -> Matrix {
        let mz = apply(&self.matrix, &self.source);
        if self.target.is_direct() {
            return mz.into_owned();
        }
        Matrix::hcat(&[&mz, &self.target.boundaries()]).expect("same ambient")
    }

    /// Rank of the induced map on subquotients.
    pub fn rank(&self) -> usize {
        self.image_with_boundaries().rank() - self.target.boundaries().cols()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    /// Zero as a map of subquotients (every cycle lands in the boundaries).
    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn kernel(&self) -> PresentedSpace {
        let z = self.source.cycles();
        let joint = self.image_with_boundaries();
        let null = joint.nullspace();
        let top: Vec<usize> = (0..z.cols()).collect();
        let coeffs = null.select_rows(&top);
        let cycles = z.mul(&coeffs).expect("shapes checked");
        let cycles = Matrix::hcat(&[&cycles, &self.source.boundaries()]).expect("same ambient");
        PresentedSpace::subquotient(self.source.labels().clone(), &cycles, &self.source.boundaries())
            .expect("kernel contains boundaries")
    }

    pub fn cokernel(&self) -> PresentedSpace {
        let rel = self.image_with_boundaries();
        PresentedSpace::subquotient(self.target.labels().clone(), &self.target.cycles(), &rel)
            .expect("image of cycles lies in cycles")
    }

    pub fn image(&self) -> PresentedSpace {
        let z = self.image_with_boundaries();
        PresentedSpace::subquotient(self.target.labels().clone(), &z, &self.target.boundaries())
            .expect("boundaries lie in image plus boundaries")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PresentedMap) -> Result<PresentedMap> {
        if !inner.target.same_space(&self.source) {
            return Err(LinalgError::ShapeMismatch(
                "target of the inner map differs from the source of the outer map".into(),
            ));
        }
        let matrix = self.matrix.mul(&inner.matrix)?;
        PresentedMap::new(inner.source.clone(), self.target.clone(), matrix)
    }

    /// Same matrix, reinterpreted between other presentations on the same ambients.
    pub fn induced(&self, source: PresentedSpace, target: PresentedSpace) -> Result<PresentedMap> {
        if source.labels() != self.source.labels() || target.labels() != self.target.labels() {
            return Err(LinalgError::ShapeMismatch("induced map on different ambient bases".into()));
        }
        PresentedMap::new(source, target, self.matrix.clone())
    }

    /// Equality as maps of subquotients.
    pub fn agrees_with(&self, other: &PresentedMap) -> bool {
        if !self.source.same_space(&other.source) || !self.target.same_space(&other.target) {
            return false;
        }
        let diff = self.matrix.sub(&other.matrix).expect("same shapes");
        let d = apply(&diff, &self.source);
        contained_in(&d, &self.target.boundaries())
    }
}

/// `matrix * cycles(source)`, without multiplying by an identity.
fn apply<'a>(matrix: &'a Matrix, source: &PresentedSpace) -> Cow<'a, Matrix> {
    match source {
        PresentedSpace::Direct { .. } => Cow::Borrowed(matrix),
        PresentedSpace::Subquotient { cycles, .. } => Cow::Owned(matrix.mul(cycles).expect("shapes checked")),
    }
}

fn contained_in(vectors: &Matrix, span: &Matrix) -> bool {
    if vectors.cols() == 0 || vectors.is_zero() {
        return true;
    }
    let r = span.rank();
    Matrix::hcat(&[span, vectors]).map(|j| j.rank() == r).unwrap_or(false)
}
