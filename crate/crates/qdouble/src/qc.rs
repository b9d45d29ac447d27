//! Encoded-qutrit computation layer.

