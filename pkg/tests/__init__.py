"""entanglab test suite."""
