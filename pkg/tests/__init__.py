"""
Test suite for vigil
"""
