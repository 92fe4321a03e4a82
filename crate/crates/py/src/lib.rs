//! Python bindings; see the workspace README.
