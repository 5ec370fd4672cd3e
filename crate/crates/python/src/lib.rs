use pyo3::prelude::*;
#[pymodule]
fn nlcode_py(_m: &Bound<PyModule>) -> PyResult<()> { Ok(()) }
