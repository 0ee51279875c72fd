//! Python bindings. Points go in as `(x, y)` pairs and come back as
//! `(x, y, id)` tuples in original coordinates, where `id` is the position
//! of the pair in the input. Text positions are 1-based.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyString};
use sorted_range::geometry::{maximal_points, rectangularly_visible};
use sorted_range::model::points_from_pairs;
use sorted_range::{
    AnyIndex, BuildConfig, Error, IndexFile, Optimal2DIndex, OptimalConfig, Point, QueryRect,
    RankSpaceMap, StridePolicy, SuccessorIndex, TextIndex, ThreeSidedIndex,
};

type PyPoint = (i64, i64, usize);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn out(map: &RankSpaceMap, it: impl Iterator<Item = Point>, k: Option<usize>) -> Vec<PyPoint> {
    it.take(k.unwrap_or(usize::MAX))
        .map(|p| {
            let p = map.to_original(p);
            (p.x, p.y, p.id)
        })
        .collect()
}

fn one(map: &RankSpaceMap, p: Option<Point>) -> Option<PyPoint> {
    p.map(|p| map.to_original(p)).map(|p| (p.x, p.y, p.id))
}

fn rect(
    x_lo: Option<i64>,
    x_hi: Option<i64>,
    y_lo: Option<i64>,
    y_hi: Option<i64>,
) -> PyResult<QueryRect> {
    QueryRect::new(x_lo, x_hi, y_lo, y_hi).map_err(py_err)
}

fn text_bytes(obj: &Bound<'_, PyAny>) -> PyResult<Vec<u8>> {
    if let Ok(s) = obj.cast::<PyString>() {
        Ok(s.to_str()?.as_bytes().to_vec())
    } else if let Ok(b) = obj.cast::<PyBytes>() {
        Ok(b.as_bytes().to_vec())
    } else {
        obj.extract::<Vec<u8>>()
    }
}

fn save(index: AnyIndex, config: BuildConfig, path: &str) -> PyResult<()> {
    IndexFile { config, index }.save(path).map_err(py_err)
}

/// Range successor and sorted reporting over the compact range tree.
#[pyclass(module = "pysortrep", name = "SuccessorIndex", frozen)]
pub struct PySuccessorIndex {
    inner: SuccessorIndex,
    stride: u32,
}

#[pymethods]
impl PySuccessorIndex {
    #[new]
    #[pyo3(signature = (points, stride=None))]
    fn new(points: Vec<(i64, i64)>, stride: Option<u32>) -> PyResult<Self> {
        let stride = stride.unwrap_or_else(|| StridePolicy::LogLog.resolve(points.len()));
        let inner = SuccessorIndex::build(&points_from_pairs(&points), stride).map_err(py_err)?;
        Ok(PySuccessorIndex { inner, stride })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Leftmost point with `x >= a` and `c <= y <= d`.
    #[pyo3(signature = (a, c=None, d=None))]
    fn successor(&self, a: i64, c: Option<i64>, d: Option<i64>) -> PyResult<Option<PyPoint>> {
        let map = self.inner.map();
        let q = map.reduce_query(&rect(Some(a), None, c, d)?);
        let (c, d) = (q.y_lo.unwrap_or(1), q.y_hi.unwrap_or(i64::MAX));
        Ok(one(map, self.inner.range_successor(q.x_lo.unwrap(), c, d)))
    }

    /// Rightmost point with `x <= b` and `c <= y <= d`.
    #[pyo3(signature = (b, c=None, d=None))]
    fn predecessor(&self, b: i64, c: Option<i64>, d: Option<i64>) -> PyResult<Option<PyPoint>> {
        let map = self.inner.map();
        let q = map.reduce_query(&rect(None, Some(b), c, d)?);
        let (c, d) = (q.y_lo.unwrap_or(1), q.y_hi.unwrap_or(i64::MAX));
        Ok(one(map, self.inner.range_predecessor(q.x_hi.unwrap(), c, d)))
    }

    /// Points in the rectangle, x-ascending, at most `k` of them.
    #[pyo3(signature = (x_lo=None, x_hi=None, y_lo=None, y_hi=None, k=None))]
    fn report(
        &self,
        x_lo: Option<i64>,
        x_hi: Option<i64>,
        y_lo: Option<i64>,
        y_hi: Option<i64>,
        k: Option<usize>,
    ) -> PyResult<Vec<PyPoint>> {
        let map = self.inner.map();
        let q = map.reduce_query(&rect(x_lo, x_hi, y_lo, y_hi)?);
        Ok(out(map, self.inner.sorted_iter(&q), k))
    }

    /// Maximal points of the rectangle, from the rightmost one leftwards.
    #[pyo3(signature = (x_lo=None, x_hi=None, y_lo=None, y_hi=None, k=None))]
    fn maximal(
        &self,
        x_lo: Option<i64>,
        x_hi: Option<i64>,
        y_lo: Option<i64>,
        y_hi: Option<i64>,
        k: Option<usize>,
    ) -> PyResult<Vec<PyPoint>> {
        let map = self.inner.map();
        let q = map.reduce_query(&rect(x_lo, x_hi, y_lo, y_hi)?);
        Ok(out(map, maximal_points(&self.inner, &q), k))
    }

    /// Points below-left of `(x, y)` whose spanned rectangle is empty.
    #[pyo3(signature = (x, y, k=None))]
    fn visible(&self, x: i64, y: i64, k: Option<usize>) -> Vec<PyPoint> {
        let map = self.inner.map();
        let it = rectangularly_visible(&self.inner, map.x_rank_at_most(x), map.y_rank_at_most(y));
        out(map, it, k)
    }

    fn size_in_bytes(&self) -> usize {
        self.inner.size_in_bytes()
    }

    fn save(&self, path: &str) -> PyResult<()> {
        let config = BuildConfig { stride: self.stride, group_size: None };
        save(AnyIndex::Successor(self.inner.clone()), config, path)
    }
}

/// Three-sided sorted reporting: one y side must be open.
#[pyclass(module = "pysortrep", name = "ThreeSidedIndex", frozen)]
pub struct PyThreeSidedIndex {
    inner: ThreeSidedIndex,
}

#[pymethods]
impl PyThreeSidedIndex {
    #[new]
    fn new(points: Vec<(i64, i64)>) -> PyResult<Self> {
        let inner = ThreeSidedIndex::build(&points_from_pairs(&points)).map_err(py_err)?;
        Ok(PyThreeSidedIndex { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[pyo3(signature = (x_lo=None, x_hi=None, y_lo=None, y_hi=None, k=None))]
    fn report(
        &self,
        x_lo: Option<i64>,
        x_hi: Option<i64>,
        y_lo: Option<i64>,
        y_hi: Option<i64>,
        k: Option<usize>,
    ) -> PyResult<Vec<PyPoint>> {
        let map = self.inner.map();
        let q = map.reduce_query(&rect(x_lo, x_hi, y_lo, y_hi)?);
        Ok(out(map, self.inner.sorted_iter(&q).map_err(py_err)?, k))
    }

    fn size_in_bytes(&self) -> usize {
        self.inner.size_in_bytes()
    }

    fn save(&self, path: &str) -> PyResult<()> {
        let config = BuildConfig { stride: 1, group_size: None };
        save(AnyIndex::ThreeSided(self.inner.clone()), config, path)
    }
}

/// Four-sided sorted reporting with grouped nodes.
#[pyclass(module = "pysortrep", name = "Optimal2DIndex", frozen)]
pub struct PyOptimal2DIndex {
    inner: Optimal2DIndex,
    config: BuildConfig,
}

#[pymethods]
impl PyOptimal2DIndex {
    #[new]
    #[pyo3(signature = (points, group_size=None, stride=1))]
    fn new(points: Vec<(i64, i64)>, group_size: Option<usize>, stride: u32) -> PyResult<Self> {
        let cfg = OptimalConfig { group_size, stride };
        let inner = Optimal2DIndex::with_config(&points_from_pairs(&points), cfg).map_err(py_err)?;
        let config = BuildConfig { stride, group_size: group_size.map(|g| g as u64) };
        Ok(PyOptimal2DIndex { inner, config })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn group_size(&self) -> usize {
        self.inner.group_size()
    }

    #[pyo3(signature = (x_lo=None, x_hi=None, y_lo=None, y_hi=None, k=None))]
    fn report(
        &self,
        x_lo: Option<i64>,
        x_hi: Option<i64>,
        y_lo: Option<i64>,
        y_hi: Option<i64>,
        k: Option<usize>,
    ) -> PyResult<Vec<PyPoint>> {
        let map = self.inner.map();
        let q = map.reduce_query(&rect(x_lo, x_hi, y_lo, y_hi)?);
        Ok(out(map, self.inner.sorted_iter(&q), k))
    }

    fn size_in_bytes(&self) -> usize {
        self.inner.size_in_bytes()
    }

    fn save(&self, path: &str) -> PyResult<()> {
        save(AnyIndex::Optimal2D(self.inner.clone()), self.config, path)
    }
}

/// Suffix-array text index answering position-ordered pattern queries.
#[pyclass(module = "pysortrep", name = "TextIndex", frozen)]
pub struct PyTextIndex {
    inner: TextIndex,
    stride: u32,
}

#[pymethods]
impl PyTextIndex {
    /// `text` is `str` (indexed as UTF-8 bytes) or `bytes`.
    #[new]
    #[pyo3(signature = (text, stride=None))]
    fn new(text: &Bound<'_, PyAny>, stride: Option<u32>) -> PyResult<Self> {
        let text = text_bytes(text)?;
        let stride = stride.unwrap_or_else(|| StridePolicy::LogLog.resolve(text.len()));
        let inner = TextIndex::with_stride(&text, stride).map_err(py_err)?;
        Ok(PyTextIndex { inner, stride })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Suffix-array interval `(left, right)` of the pattern, 1-based.
    fn pattern_range(&self, pattern: &Bound<'_, PyAny>) -> PyResult<(usize, usize)> {
        let r = self.inner.pattern_range(&text_bytes(pattern)?);
        Ok((r.left, r.right))
    }

    /// Occurrence start positions in increasing order.
    #[pyo3(signature = (pattern, k=None, rmq=false))]
    fn find(&self, pattern: &Bound<'_, PyAny>, k: Option<usize>, rmq: bool) -> PyResult<Vec<usize>> {
        let p = text_bytes(pattern)?;
        Ok(if rmq {
            self.inner.ordered_occurrences_rmq(&p).take(k.unwrap_or(usize::MAX)).collect()
        } else {
            self.inner.ordered_occurrences(&p, k).collect()
        })
    }

    /// Occurrences starting in `[i, j]`.
    #[pyo3(signature = (pattern, i, j, k=None))]
    fn find_in(&self, pattern: &Bound<'_, PyAny>, i: usize, j: usize, k: Option<usize>) -> PyResult<Vec<usize>> {
        if i > j {
            return Err(PyValueError::new_err(format!("i {i} > j {j}")));
        }
        Ok(self.inner.position_restricted(&text_bytes(pattern)?, i, j, k).collect())
    }

    /// First occurrence starting at or after `j`.
    fn next(&self, pattern: &Bound<'_, PyAny>, j: usize) -> PyResult<Option<usize>> {
        Ok(self.inner.successive_list_index(&text_bytes(pattern)?, j))
    }

    /// Greedy left-to-right occurrences that do not overlap.
    fn non_overlapping(&self, pattern: &Bound<'_, PyAny>) -> PyResult<Vec<usize>> {
        self.inner.non_overlapping_sequence(&text_bytes(pattern)?).map_err(py_err)
    }

    /// Leftmost embedding of the parts in order, without overlap. A single
    /// string is split at `*` (with `\*` and `\\` escapes).
    fn dont_care(&self, pattern: &Bound<'_, PyAny>) -> PyResult<Option<Vec<usize>>> {
        let parts = match text_bytes(pattern) {
            Ok(p) => sorted_range::text::split_dont_care(&p),
            Err(_) => pattern
                .try_iter()?
                .map(|part| text_bytes(&part?))
                .collect::<PyResult<Vec<_>>>()?,
        };
        self.inner.dont_care_match(&parts).map_err(py_err)
    }

    fn suffix_array(&self) -> Vec<u32> {
        self.inner.suffix_array().to_vec()
    }

    fn size_in_bytes(&self) -> usize {
        self.inner.size_in_bytes()
    }

    fn save(&self, path: &str) -> PyResult<()> {
        let config = BuildConfig { stride: self.stride, group_size: None };
        save(AnyIndex::Text(self.inner.clone()), config, path)
    }
}

/// Loads any saved index and returns the matching class.
#[pyfunction]
fn load(py: Python<'_>, path: &str) -> PyResult<Py<PyAny>> {
    let file = IndexFile::load(path).map_err(py_err)?;
    let stride = file.config.stride;
    Ok(match file.index {
        AnyIndex::Successor(inner) => Py::new(py, PySuccessorIndex { inner, stride })?.into_any(),
        AnyIndex::ThreeSided(inner) => Py::new(py, PyThreeSidedIndex { inner })?.into_any(),
        AnyIndex::Optimal2D(inner) => {
            Py::new(py, PyOptimal2DIndex { inner, config: file.config })?.into_any()
        }
        AnyIndex::Text(inner) => Py::new(py, PyTextIndex { inner, stride })?.into_any(),
    })
}

#[pymodule]
fn pysortrep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySuccessorIndex>()?;
    m.add_class::<PyThreeSidedIndex>()?;
    m.add_class::<PyOptimal2DIndex>()?;
    m.add_class::<PyTextIndex>()?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    Ok(())
}
