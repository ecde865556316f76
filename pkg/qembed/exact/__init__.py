"""qembed.exact package."""
