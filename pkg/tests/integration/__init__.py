"""
Integration tests package initialization.
"""
