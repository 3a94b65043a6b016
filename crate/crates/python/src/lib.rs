use pyo3::prelude::*;

#[pymodule]
fn liecohom_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
