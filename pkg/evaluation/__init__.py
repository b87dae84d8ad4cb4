"""
Benchmarks for the vigil pipeline
"""
