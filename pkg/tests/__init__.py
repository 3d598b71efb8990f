"""The test suite of anisopy, one module per package module plus the acceptance runs"""
