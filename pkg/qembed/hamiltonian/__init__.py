"""qembed.hamiltonian package."""
