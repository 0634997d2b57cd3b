use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::wrap_pymodule;

fn run(script: &str) {
    Python::attach(|py| {
        let module = wrap_pymodule!(pygraphcode::pygraphcode)(py);
        let globals = PyDict::new(py);
        globals.set_item("gc", module).unwrap();
        let code = CString::new(script).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn family_and_oracle() {
    run(r#"
c = gc.family("5_1_3", p=3)
assert c.label == "[[5,1,3]]_3", c.label
r = c.verify()
assert r["pass"] and r["errors_checked"] == 680
assert c.stabilizer_size * c.k == 3 ** 5
"#);
}

#[test]
fn errors_map_to_exceptions() {
    run(r#"
try:
    gc.family("nope", p=3)
    raise SystemExit("accepted")
except gc.GraphcodeError:
    pass
code = gc.family("8_2_4", p=3)
try:
    code.verify(oracle_bound=100)
    raise SystemExit("bound ignored")
except gc.BoundExceededError:
    pass
assert issubclass(gc.NotCodingCliqueError, gc.GraphcodeError)
"#);
}

#[test]
fn graph_round_trip() {
    run(r#"
g = gc.Graph(5, 4, [(0, 1, 2), (2, 3, -1)])
assert g.weight(2, 3) == 4
h = gc.Graph.parse(g.to_text())
assert h == g and h.edges() == [(0, 1, 2), (2, 3, 4)]
"#);
}
