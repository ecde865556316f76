"""qembed.operators package."""
