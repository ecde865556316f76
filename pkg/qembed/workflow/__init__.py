"""qembed.workflow package."""
