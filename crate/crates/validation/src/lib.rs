//! Host crate for the `acceptance` test target. The criteria themselves live
//! in `burescone::acceptance` so that the CLI can run them too.
