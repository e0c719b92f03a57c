//! Built-in example complexes used across tests and the acceptance suite.
//!
//! All three are one-vertex cell models: the circle covered by the line, the
//! wedge of two circles covered along the first loop, and the torus covered
//! by the plane.

use crate::complex::PeriodicComplex;

/// Circle with one vertex and one edge; deck group Z, cover = the line.
pub const CIRCLE_JSON: &str = r#"{
  "deck_rank": 1,
  "cells": [
    {"id": "v", "dim": 0},
    {"id": "e", "dim": 1}
  ],
  "boundary": {
    "e": [["v", [1], 1], ["v", [0], -1]]
  }
}"#;

/// Wedge of two circles; the cover unrolls the loop `a` along Z while `b`
/// stays a trivial loop at every vertex.
pub const WEDGE_JSON: &str = r#"{
  "deck_rank": 1,
  "cells": [
    {"id": "v", "dim": 0},
    {"id": "a", "dim": 1},
    {"id": "b", "dim": 1}
  ],
  "boundary": {
    "a": [["v", [1], 1], ["v", [0], -1]],
    "b": [["v", [0], 1], ["v", [0], -1]]
  }
}"#;

/// Torus as the standard one-vertex CW complex; deck group Z^2, cover = the
/// plane with its grid cell structure.
pub const TORUS_JSON: &str = r#"{
  "deck_rank": 2,
  "cells": [
    {"id": "v", "dim": 0},
    {"id": "a", "dim": 1},
    {"id": "b", "dim": 1},
    {"id": "f", "dim": 2}
  ],
  "boundary": {
    "a": [["v", [1, 0], 1], ["v", [0, 0], -1]],
    "b": [["v", [0, 1], 1], ["v", [0, 0], -1]],
    "f": [["a", [0, 0], 1], ["b", [1, 0], 1], ["a", [0, 1], -1], ["b", [0, 0], -1]]
  }
}"#;

pub fn circle() -> PeriodicComplex {
    PeriodicComplex::load_str(CIRCLE_JSON).expect("circle fixture is valid")
}

pub fn wedge() -> PeriodicComplex {
    PeriodicComplex::load_str(WEDGE_JSON).expect("wedge fixture is valid")
}

pub fn torus() -> PeriodicComplex {
    PeriodicComplex::load_str(TORUS_JSON).expect("torus fixture is valid")
}

/// Name/complex pairs for iterating over all fixtures in tests.
pub fn all() -> Vec<(&'static str, PeriodicComplex)> {
    vec![("circle", circle()), ("wedge", wedge()), ("torus", torus())]
}
