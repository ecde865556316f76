"""qembed.sim package."""
